import numpy as np
import pytest
from hypothesis import given, strategies as st

from szabo.pseudo import PreconditionError, PseudoSpace
from szabo.sampling import cone_feasible, cone_value, sample_cone


def test_riemannian_sphere():
    s = sample_cone(PseudoSpace.of(0, 3), "spacelike", 10, 0)
    assert s.vectors.shape == (20, 3)
    assert np.allclose(np.linalg.norm(s.vectors, axis=1), 1, atol=1e-12)


def test_null_cone_of_lorentz_plane():
    s = sample_cone(PseudoSpace.of(1, 1), "null", 2, 0)
    assert np.allclose(np.abs(s.vectors) * np.sqrt(2), 1)


def test_infeasible_cone():
    with pytest.raises(PreconditionError):
        sample_cone(PseudoSpace.of(0, 3), "timelike", 5, 0)
    with pytest.raises(ValueError):
        cone_feasible(PseudoSpace.of(1, 1), "lightlike")


def test_determinism():
    sp = PseudoSpace.of(2, 3)
    a = sample_cone(sp, "timelike", 20, [4, 1])
    b = sample_cone(sp, "timelike", 20, [4, 1])
    assert np.array_equal(a.vectors, b.vectors)


@given(st.sampled_from([(1, 1), (2, 2), (2, 3), (1, 3), (3, 1)]),
       st.sampled_from(["spacelike", "timelike", "null"]),
       st.integers(1, 30), st.integers(0, 2**31), st.floats(2.0, 20.0))
def test_cone_equation_bound_and_antipodes(sig, cone, n, seed, bound):
    sp = PseudoSpace.of(*sig)
    s = sample_cone(sp, cone, n, seed, bound)
    V = s.vectors
    assert len(s) == 2 * n
    vals = np.einsum("i,ni,ni->n", sp.diag, V, V)
    assert np.all(np.abs(vals - cone_value(cone)) <= 1e-12 * np.maximum(1, np.sum(V * V, axis=1)))
    assert np.all(np.linalg.norm(V, axis=1) <= bound)
    assert np.array_equal(V[1::2], -V[::2])
    assert np.array_equal(s.base_points, V[::2])
