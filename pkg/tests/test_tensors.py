import itertools

import numpy as np
import pytest
from hypothesis import given, strategies as st

from szabo.pseudo import PseudoSpace, inner, is_self_adjoint
from szabo.tensors import (AcdtTensor, ActTensor, ProjectionError, SymmetryError, acdt_dimension,
                           act_dimension, jacobi, project_to_acdt, project_to_act, projector_rank,
                           random_acdt, random_act, szabo, szabo_batch, szabo_map_kernel_dim,
                           validate_acdt, validate_act)

seeds = st.integers(0, 2**31)


def test_validate_zero():
    assert validate_act(np.zeros((3,) * 4)).max() == 0
    assert validate_acdt(np.zeros((2,) * 5)).max() == 0


def test_single_entry_antisymmetry():
    R = np.zeros((2,) * 4)
    R[0, 0, 0, 0] = 1
    assert validate_act(R).identities["antisymmetry"] == 1
    RR = np.zeros((2,) * 5)
    RR[0, 0, 0, 0, 0] = 1
    assert validate_acdt(RR).identities["antisymmetry"] == 1


def test_shape_errors():
    with pytest.raises(ValueError):
        validate_act(np.zeros((2, 2, 2)))
    with pytest.raises(ValueError):
        validate_acdt(np.zeros((2, 2, 2, 2, 3)))


@pytest.mark.parametrize("method", ["alternating", "direct"])
@pytest.mark.parametrize("m", [2, 3, 4])
def test_projectors(m, method):
    rng = np.random.default_rng(m)
    R = project_to_act(rng.standard_normal((m,) * 4), method=method)
    RR = project_to_acdt(rng.standard_normal((m,) * 5), method=method)
    assert validate_act(R).max() <= 1e-10
    assert validate_acdt(RR).max() <= 1e-10
    assert np.max(np.abs(project_to_act(R, method=method) - R)) <= 1e-10
    assert np.max(np.abs(project_to_acdt(RR, method=method) - RR)) <= 1e-10
    assert not project_to_acdt(np.zeros((m,) * 5), method=method).any()


def test_projection_routes_agree():
    T = np.random.default_rng(0).standard_normal((3,) * 5)
    assert np.allclose(project_to_acdt(T), project_to_acdt(T, method="direct"), atol=1e-10)


def test_projection_error_reports_residual():
    T = np.random.default_rng(0).standard_normal((3,) * 5)
    with pytest.raises(ProjectionError) as exc:
        project_to_acdt(T, max_iter=1)
    assert exc.value.residual > 0


@pytest.mark.parametrize("m", range(1, 7))
def test_dimensions_match_classical_counts(m):
    assert act_dimension(m) == m**2 * (m**2 - 1) // 12
    assert acdt_dimension(m) == m**2 * (m**2 - 1) * (m + 2) // 24


def test_dimension_regression_constants():
    assert act_dimension(2) == 1 and act_dimension(3) == 6
    assert acdt_dimension(1) == 0 and acdt_dimension(2) == 2


@pytest.mark.parametrize("m", [2, 3])
def test_projector_rank_matches_exact_dimension(m):
    assert projector_rank(m, 4) == act_dimension(m)
    assert projector_rank(m, 5) == acdt_dimension(m)


@pytest.mark.parametrize("sig", [(1, 1), (0, 3), (2, 2), (1, 2)])
def test_szabo_map_injective(sig):
    assert szabo_map_kernel_dim(PseudoSpace.of(*sig)) == 0


def test_tensor_classes_validate():
    sp = PseudoSpace.of(1, 2)
    bad = np.zeros((3,) * 5)
    bad[0, 1, 0, 1, 2] = 1
    with pytest.raises(SymmetryError, match="antisymmetry|pair_symmetry|bianchi"):
        AcdtTensor(bad, sp)
    with pytest.raises(ValueError):
        AcdtTensor(np.zeros((2,) * 5), sp)
    assert AcdtTensor.zero(sp).is_zero()


def jacobi_oracle(R, v, g):
    m = len(v)
    J = np.zeros((m, m))
    for y, z in itertools.product(range(m), repeat=2):
        s = 0.0
        for a, b in itertools.product(range(m), repeat=2):
            s += R[y, a, b, z] * v[a] * v[b]
        J[z, y] = s / g[z]
    return J


def szabo_oracle(RR, v, g):
    """Matrix of S(v) from (S(v) e_y, e_z) = RR(e_y, v, v, e_z; v), one basis pair at a time."""
    m = len(v)
    S = np.zeros((m, m))
    for y, z in itertools.product(range(m), repeat=2):
        s = 0.0
        for a, b, c in itertools.product(range(m), repeat=3):
            s += RR[y, a, b, z, c] * v[a] * v[b] * v[c]
        S[z, y] = s / g[z]
    return S


def test_jacobi_oracle_and_homogeneity():
    sp = PseudoSpace.of(1, 2)
    R = random_act(sp, 4)
    rng = np.random.default_rng(1)
    v = rng.standard_normal(3)
    J = jacobi(R, v).matrix
    assert np.allclose(J, jacobi_oracle(R.coeffs, v, sp.diag), atol=1e-12)
    assert np.allclose(jacobi(R, 2 * v).matrix, 4 * J, atol=1e-12)
    assert is_self_adjoint(sp, J)[0]
    assert not jacobi(ActTensor(np.zeros((3,) * 4), sp), v).matrix.any()


def test_szabo_oracle():
    sp = PseudoSpace.of(2, 3)
    RR = random_acdt(sp, 2)
    v = np.random.default_rng(2).standard_normal(5)
    assert np.max(np.abs(szabo(RR, v).matrix - szabo_oracle(RR.coeffs, v, sp.diag))) <= 1e-12
    assert not szabo(AcdtTensor.zero(sp), v).matrix.any()


@given(st.sampled_from([(2, 3), (2, 2), (1, 3), (0, 3)]), seeds, seeds)
def test_szabo_pointwise_identities(sig, tseed, vseed):
    sp = PseudoSpace.of(*sig)
    RR = random_acdt(sp, tseed)
    v = np.random.default_rng(vseed).standard_normal(sp.m)
    S = szabo(RR, v).matrix
    sc = max(1.0, np.abs(S).max())
    assert is_self_adjoint(sp, S, 1e-9)[0]
    assert np.linalg.norm(S @ v) <= 1e-9 * sc * np.linalg.norm(v)
    assert np.max(np.abs(szabo(RR, -v).matrix + S)) <= 1e-9 * sc
    assert np.max(np.abs(szabo(RR, 2 * v).matrix - 8 * S)) <= 1e-9 * 8 * sc
    # (S(v) y, z) is symmetric in y, z
    y, z = np.random.default_rng(vseed + 1).standard_normal((2, sp.m))
    assert abs(inner(sp, S @ y, z) - inner(sp, y, S @ z)) <= 1e-9 * sc * np.linalg.norm(y) * np.linalg.norm(z)


def test_szabo_batch_matches_single():
    sp = PseudoSpace.of(2, 2)
    RR = random_acdt(sp, 0)
    V = np.random.default_rng(0).standard_normal((6, 4))
    B = szabo_batch(RR, V)
    assert all(np.allclose(B[k], szabo(RR, V[k]).matrix, atol=1e-13) for k in range(6))
