import numpy as np
import pytest
from hypothesis import given, strategies as st

from szabo.jordan import jordan_decompose, rank_of
from szabo.pseudo import PreconditionError, PseudoSpace
from szabo.sampling import sample_cone
from szabo.spectral import (adams_number, analyze_cone, char_poly_P, constancy_of_operators,
                            jordan_constancy, rank_transfer_witness, spectral_constancy,
                            theorem_report)
from szabo.tensors import AcdtTensor, random_acdt, szabo

NILP = np.array([[-1.0, -1.0], [1.0, 1.0]])


def test_adams_examples():
    assert adams_number(2) == 1
    assert adams_number(7) == 0
    assert adams_number(16) == 8
    assert adams_number(12) == 3
    assert [adams_number(q) for q in range(1, 17)] == [0, 1, 0, 3, 0, 1, 0, 7, 0, 1, 0, 3, 0, 1, 0, 8]


@pytest.mark.parametrize("q", [0, -4])
def test_adams_domain(q):
    with pytest.raises(ValueError):
        adams_number(q)


def test_adams_closure():
    for ell in range(3):
        assert adams_number(2 ** (ell + 4)) - adams_number(2**ell) == 8
    for q in range(1, 65):
        two = q & -q
        assert adams_number(q) == adams_number(two)


def test_char_poly_zero_tensor():
    sp = PseudoSpace.of(2, 2)
    c = char_poly_P(AcdtTensor.zero(sp), [0, 0, 1, 0])
    assert np.array_equal(c, [0, 0, 0, 0, 1])  # (-t)^4


def test_char_poly_direct_route():
    sp = PseudoSpace.of(2, 2)
    RR = random_acdt(sp, 1)
    v = sample_cone(sp, "spacelike", 1, 0).vectors[0]
    c = char_poly_P(RR, v)
    S = szabo(RR, v).matrix
    for t in np.linspace(-2, 2, 7):
        direct = np.linalg.det(S @ S - t * np.eye(4))
        assert abs(np.polyval(c[::-1], t) - direct) <= 1e-9 * max(1, abs(direct))


@given(st.integers(0, 2**31), st.sampled_from([-3.0, 0.5, 2.0, 3.0]))
def test_char_poly_scale_invariant(seed, t):
    sp = PseudoSpace.of(2, 3)
    RR = random_acdt(sp, seed)
    v = sample_cone(sp, "timelike", 1, seed).vectors[0]
    c = char_poly_P(RR, v)
    assert np.max(np.abs(char_poly_P(RR, t * v) - c)) <= 1e-9 * max(1, np.abs(c).max())


def test_char_poly_null_vector():
    sp = PseudoSpace.of(1, 1)
    with pytest.raises(PreconditionError):
        char_poly_P(AcdtTensor.zero(sp), [1, 1])
    with pytest.raises(PreconditionError):
        char_poly_P(AcdtTensor.zero(sp), [0, 0])


def test_zero_tensor_no_counterexample():
    sp = PseudoSpace.of(2, 3)
    Z = AcdtTensor.zero(sp)
    for cone in ("spacelike", "timelike"):
        v = spectral_constancy(Z, cone, 30, 0)
        assert v.status == "no-counterexample" and v.witness is None
    for cone in ("spacelike", "timelike", "null"):
        assert jordan_constancy(Z, cone, 30, 0).status == "no-counterexample"


def test_generic_tensor_witness():
    sp = PseudoSpace.of(2, 3)
    v = spectral_constancy(random_acdt(sp, 0), "spacelike", 100, 0)
    assert v.status == "witness-found"
    w = v.witness
    assert not w.structure1.matches(w.structure2, v.compare_tol)


def test_single_pair_has_no_witness():
    sp = PseudoSpace.of(2, 3)
    for seed in range(5):
        assert spectral_constancy(random_acdt(sp, seed), "spacelike", 1, seed).status == "no-counterexample"


def test_spectral_constancy_rejects_null_cone():
    with pytest.raises(ValueError):
        spectral_constancy(AcdtTensor.zero(PseudoSpace.of(1, 2)), "null", 3, 0)


def test_jordan_witness_with_equal_spectra():
    sp = PseudoSpace.of(1, 1)
    vecs = [[0.0, 1.0], [0.0, 2.0]]
    ops = [np.zeros((2, 2)), NILP]
    assert constancy_of_operators(sp, vecs, ops, "spectrum").status == "no-counterexample"
    v = constancy_of_operators(sp, vecs, ops, "jordan")
    assert v.status == "witness-found"
    # re-verify the witness with a fresh decomposition
    a = jordan_decompose(ops[0], space=sp).structure()
    b = jordan_decompose(ops[1], space=sp).structure()
    assert not a.matches(b, v.compare_tol)


def test_null_cone_non_nilpotent_witness():
    sp = PseudoSpace.of(2, 3)
    v = jordan_constancy(random_acdt(sp, 1), "null", 10, 0)
    assert v.status == "witness-found"
    w = v.witness
    assert np.allclose(w.v2, 2 * w.v1)
    assert w.structure2.scale() == pytest.approx(8 * w.structure1.scale(), rel=1e-6)


def test_rank_transfer_zero_tensor():
    sp = PseudoSpace.of(2, 3)
    with pytest.raises(PreconditionError):
        rank_transfer_witness(AcdtTensor.zero(sp), [0, 0, 1, 0, 0], "timelike", 5, 0)


@pytest.mark.parametrize("src,dst", [("spacelike", "timelike"), ("null", "timelike"), ("timelike", "spacelike")])
def test_rank_transfer_generic(src, dst):
    sp = PseudoSpace.of(2, 3)
    for seed in range(5):
        RR = random_acdt(sp, seed)
        v0 = sample_cone(sp, src, 1, seed).vectors[0]
        v = rank_transfer_witness(RR, v0, dst, 20, seed)
        assert v is not None
        assert rank_of(szabo(RR, v).matrix) >= rank_of(szabo(RR, v0).matrix)


@given(st.integers(0, 2**31))
def test_antipodal_ranks_and_spectra(seed):
    sp = PseudoSpace.of(2, 2)
    RR = random_acdt(sp, seed)
    a = analyze_cone(RR, "spacelike", 5, seed)
    assert a.ranks[0::2] == a.ranks[1::2]
    for v in a.samples.base_points:
        e1 = np.sort_complex(np.linalg.eigvals(szabo(RR, v).matrix))
        e2 = np.sort_complex(-np.linalg.eigvals(szabo(RR, -v).matrix))
        assert np.allclose(e1, e2, atol=1e-8 * max(1, np.abs(e1).max()))


def test_report_zero_tensor():
    r = theorem_report(AcdtTensor.zero(PseudoSpace.of(2, 3)), 20, 0)
    assert all(f.status == "consistent" for f in r.flags.values())
    assert set(r.r_plus) == set(r.r_minus) == set(r.r_0) == {0}
    assert not r.quarantine


def test_report_generic_tensor():
    r = theorem_report(random_acdt(PseudoSpace.of(2, 3), 0), 50, 0)
    assert r.flags["two_sided_jordan"].status == "not-applicable"
    assert r.flags["jordan_szabo_ranks"].status == "not-applicable"
    assert r.flags["szabo_spectrum"].status == "not-applicable"
    assert r.flags["spacelike_jordan"].status == "consistent"
    assert not r.quarantine
    ids = r.identities
    assert ids["self_adjoint"] < 1e-9 and ids["annihilates_v"] < 1e-9 and ids["antipodal_spectrum_mismatches"] == 0


def test_report_riemannian_witness_is_consistent():
    r = theorem_report(random_acdt(PseudoSpace.of(0, 3), 2), 50, 0)
    assert r.flags["low_index_vanishing"].status == "consistent"
    assert not r.quarantine


def test_report_loose_tolerance_quarantines():
    # a tiny tensor at a loose tolerance looks constant: a candidate, not a disproof
    RR = random_acdt(PseudoSpace.of(0, 3), 0, scale=1e-2)
    r = theorem_report(RR, 20, 0, tol=1e-3)
    assert r.flags["low_index_vanishing"].candidate
    assert r.quarantine and r.quarantine[0]["theorem"] == "low_index_vanishing"


def test_report_deterministic():
    RR = random_acdt(PseudoSpace.of(2, 2), 3)
    assert theorem_report(RR, 20, 5).to_json() == theorem_report(RR, 20, 5).to_json()
