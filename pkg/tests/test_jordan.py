import numpy as np
import pytest
from hypothesis import given, strategies as st
from scipy.linalg import block_diag, expm

from szabo.jordan import JordanStructure, blocks_from_dims, is_jordan_simple, jordan_decompose, rank_of
from szabo.pseudo import PseudoSpace, is_self_adjoint, random_self_adjoint

NILP = np.array([[-1.0, -1.0], [1.0, 1.0]])


def nilpotent_block(k):
    """A single k-block with eigenvalue 0, self-adjoint for the antidiagonal form,
    rewritten in coordinates where the metric is diagonal."""
    lam, U = np.linalg.eigh(np.fliplr(np.eye(k)))
    U = U[:, np.argsort(lam)]
    lam = np.sort(lam)
    # rescale eigenvectors to unit norm in the form, so U is an isometry
    return U.T @ np.eye(k, k=1) @ U, int(np.sum(lam < 0)), int(np.sum(lam > 0))


def random_isometry(space, rng, size=0.5):
    K = rng.standard_normal((space.m, space.m)) * size
    return expm(space.diag[:, None] * (K - K.T))


def test_identity():
    d = jordan_decompose(np.eye(3), space=PseudoSpace.of(1, 2))
    assert len(d.entries) == 1
    e = d.entries[0]
    assert e.lam == 1 and e.dim == 3 and e.signature == (1, 2) and e.blocks == (1, 1, 1)


def test_nilpotent_two_block():
    d = jordan_decompose(NILP, space=PseudoSpace.of(1, 1))
    (e,) = d.entries
    assert e.lam == 0 and e.dim == 2 and e.blocks == (2,)


def test_is_jordan_simple_examples():
    sp = PseudoSpace.of(1, 1)
    assert is_jordan_simple(np.eye(2), space=sp)
    assert not is_jordan_simple(NILP, space=sp)
    assert is_jordan_simple(np.zeros((2, 2)), space=sp)


def test_rank_examples():
    assert rank_of(np.zeros((3, 3))) == 0
    assert rank_of(np.eye(4)) == 4
    assert rank_of(NILP) == 1


def test_blocks_from_dims():
    assert blocks_from_dims([0, 2, 3]) == (2, 1)
    assert blocks_from_dims([0, 1, 2, 3]) == (3,)
    assert blocks_from_dims([0, 2, 4], pair=True) == (2,)


def test_nonreal_eigenvalue_has_neutral_signature():
    sp = PseudoSpace.of(2, 2)
    found = 0
    for seed in range(200):
        d = jordan_decompose(random_self_adjoint(sp, seed), space=sp)
        for e in d.entries:
            if not e.is_real:
                found += 1
                assert e.signature[0] == e.signature[1]
    assert found > 0


@pytest.mark.parametrize("k", [2, 3, 4])
def test_conjugated_single_blocks(k):
    A, p, q = nilpotent_block(k)
    sp = PseudoSpace.of(p, q)
    assert is_self_adjoint(sp, A)[0]
    rng = np.random.default_rng(k)
    for _ in range(50):
        L = random_isometry(sp, rng)
        B = L @ (A + 0.7 * np.eye(k)) @ np.linalg.inv(L)
        (e,) = jordan_decompose(B, space=sp).entries
        assert abs(e.lam - 0.7) < 1e-6 and e.blocks == (k,)


def test_mixed_blocks():
    A2, p2, q2 = nilpotent_block(2)
    A3, p3, q3 = nilpotent_block(3)
    # block-diagonal metric: reorder so timelike coordinates come first
    A = block_diag(A2 - np.eye(2), A3 + 2 * np.eye(3), np.array([[5.0]]))
    g = np.concatenate([[-1.0] * p2 + [1.0] * q2, [-1.0] * p3 + [1.0] * q3, [1.0]])
    order = np.argsort(g, kind="stable")
    A = A[np.ix_(order, order)]
    sp = PseudoSpace.of(int(np.sum(g < 0)), int(np.sum(g > 0)))
    s = jordan_decompose(A, space=sp).structure()
    assert [(round(lam.real, 8), b) for lam, b in s.entries] == [(-1.0, (2,)), (2.0, (3,)), (5.0, (1,))]


@given(st.sampled_from([(1, 1), (2, 2), (1, 3), (2, 3), (0, 3)]), st.integers(0, 2**31))
def test_decomposition_invariants(sig, seed):
    sp = PseudoSpace.of(*sig)
    A = random_self_adjoint(sp, seed).matrix
    d = jordan_decompose(A, space=sp)
    scale = max(1.0, np.abs(A).max())
    assert np.max(np.abs(d.reconstruct() - A)) <= 1e-8 * scale
    assert d.orthogonality_residual() <= 1e-8 * scale
    assert d.min_gram_singular_value() > 1e-6
    assert sum(e.dim for e in d.entries) == sp.m
    for e in d.entries:
        if not e.is_real:
            assert e.signature[0] == e.signature[1]


@given(st.integers(0, 2**31))
def test_negated_structure_matches_negated_operator(seed):
    sp = PseudoSpace.of(2, 3)
    A = random_self_adjoint(sp, seed).matrix
    s = jordan_decompose(A, space=sp).structure()
    t = jordan_decompose(-A, space=sp).structure()
    assert s.negated().matches(t, 1e-6 * max(1.0, s.scale()))


def test_structure_matching_requires_equal_blocks():
    a = JordanStructure(((0j, (2,)),))
    b = JordanStructure(((0j, (1, 1)),))
    assert not a.matches(b, 1.0)
    assert a.matches(a, 0.0)
