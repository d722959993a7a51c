"""Algebraic curvature tensors (rank 4) and covariant derivative curvature
tensors (rank 5).

Index convention: ``R[x, y, z, w]`` is ``R(x, y, z, w)`` and
``RR[x, y, z, w, v]`` is ``RR(x, y, z, w; v)``. All symmetry operators act on
the trailing axes, so batches of tensors can be processed at once.

Each identity is measured as the max-norm of the component removed by its
averaging projector; for the antisymmetry that is ``max|T + T_yx| / 2``.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from itertools import combinations_with_replacement, permutations

import numpy as np

from . import exact
from .pseudo import PreconditionError, PseudoSpace, SelfAdjointOperator

ACT_IDENTITIES = ("antisymmetry", "pair_symmetry", "first_bianchi")
ACDT_IDENTITIES = ACT_IDENTITIES + ("second_bianchi",)


class ProjectionError(RuntimeError):
    def __init__(self, message, residual):
        super().__init__(message)
        self.residual = residual


class SymmetryError(ValueError):
    """Tensor coefficients violate the curvature symmetries."""


def _perm(T, src: str, dst: str = "xyzwv"):
    """``out[dst] = T[src]`` on the trailing axes."""
    dst = dst[: len(src)]
    return np.einsum(f"...{src}->...{dst}", T)


# averaging projectors -------------------------------------------------------

def _second_bianchi_defect(T):
    return (T + _perm(T, "xyvzw") + _perm(T, "xywvz")) / 3.0


def _identity_defects(T, rank: int) -> dict[str, np.ndarray]:
    tail = "v" if rank == 5 else ""
    d = {
        "antisymmetry": (T + _perm(T, "yxzw" + tail)) / 2.0,
        "pair_symmetry": (T - _perm(T, "zwxy" + tail)) / 2.0,
        "first_bianchi": (T + _perm(T, "yzxw" + tail) + _perm(T, "zxyw" + tail)) / 3.0,
    }
    if rank == 5:
        d["second_bianchi"] = _second_bianchi_defect(T)
    return d


@dataclass(frozen=True)
class SymmetryResidual:
    identities: dict[str, float]
    relative: float

    @property
    def worst(self) -> tuple[str, float]:
        return max(self.identities.items(), key=lambda kv: kv[1])

    def max(self) -> float:
        return max(self.identities.values(), default=0.0)

    def passes(self, tol: float) -> bool:
        return self.relative <= tol

    def to_json(self):
        return {"identities": dict(self.identities), "relative": self.relative}


def _validate(T, rank: int, tol: float) -> SymmetryResidual:
    T = np.asarray(T, dtype=float)
    if T.ndim != rank or len(set(T.shape)) != 1:
        raise ValueError(f"expected a rank-{rank} array with equal axes, got shape {T.shape}")
    res = {k: float(np.max(np.abs(v), initial=0.0)) for k, v in _identity_defects(T, rank).items()}
    scale = float(np.max(np.abs(T), initial=0.0))
    rel = max(res.values()) / scale if scale > 0 else 0.0
    return SymmetryResidual(res, rel)


def validate_act(R, tol: float = 1e-9) -> SymmetryResidual:
    return _validate(R, 4, tol)


def validate_acdt(RR, tol: float = 1e-9) -> SymmetryResidual:
    return _validate(RR, 5, tol)


# projection -----------------------------------------------------------------

def _alternating(T, rank: int, tol: float, max_iter: int):
    T = np.array(T, dtype=float)
    scale = max(1.0, float(np.max(np.abs(T), initial=0.0)))
    tail = "v" if rank == 5 else ""
    steps = [
        lambda X: _pair_average(X, tail),
        lambda X: X - (X + _perm(X, "yzxw" + tail) + _perm(X, "zxyw" + tail)) / 3.0,
    ]
    if rank == 5:
        steps.append(lambda X: X - _second_bianchi_defect(X))
    res = np.inf
    for _ in range(max_iter):
        for step in steps:
            T = step(T)
        res = max(float(np.max(np.abs(d), initial=0.0)) for d in _identity_defects(T, rank).values())
        if res <= tol * scale:
            return T
    raise ProjectionError(f"alternating projections did not converge in {max_iter} sweeps", res)


def _pair_average(T, tail: str):
    terms = [
        (+1, "xyzw"), (-1, "yxzw"), (-1, "xywz"), (+1, "yxwz"),
        (+1, "zwxy"), (-1, "wzxy"), (-1, "zwyx"), (+1, "wzyx"),
    ]
    out = np.zeros_like(T)
    for sign, idx in terms:
        out += sign * _perm(T, idx + tail)
    return out / 8.0


def project_to_act(T, tol: float = 1e-12, max_iter: int = 10000, method: str = "alternating") -> np.ndarray:
    """Orthogonal projection onto the algebraic curvature tensors.

    Works on the trailing four axes; ``method="direct"`` uses the orthonormal
    basis of the solution space.
    """
    T = np.asarray(T, dtype=float)
    if method == "direct":
        return _direct(T, 4)
    return _alternating(T, 4, tol, max_iter)


def project_to_acdt(T, tol: float = 1e-12, max_iter: int = 10000, method: str = "alternating") -> np.ndarray:
    """Orthogonal projection onto the covariant derivative curvature tensors."""
    T = np.asarray(T, dtype=float)
    if method == "direct":
        return _direct(T, 5)
    return _alternating(T, 5, tol, max_iter)


def _direct(T, rank):
    m = T.shape[-1]
    Q = solution_basis(m, rank)
    flat = T.reshape(-1, m**rank)
    return ((flat @ Q) @ Q.T).reshape(T.shape)


# exact assembly ---------------------------------------------------------------

@lru_cache(maxsize=None)
def pair_embedding(m: int, rank: int) -> np.ndarray:
    """Integer basis of tensors antisymmetric in (x,y) with pair symmetry.

    Returns an array of shape ``(n, m, ..., m)``; each element is a signed
    orbit indicator so the family is linearly independent.
    """
    pairs = [(a, b) for a in range(m) for b in range(a + 1, m)]
    tails = range(m) if rank == 5 else [None]
    out = []
    for i, (a, b) in enumerate(pairs):
        for c, d in pairs[i:]:
            for t in tails:
                E = np.zeros((m,) * rank, dtype=np.int64)
                for (x, y, s1) in ((a, b, 1), (b, a, -1)):
                    for (z, w, s2) in ((c, d, 1), (d, c, -1)):
                        for (i1, i2, i3, i4) in ((x, y, z, w), (z, w, x, y)):
                            idx = (i1, i2, i3, i4) if t is None else (i1, i2, i3, i4, t)
                            E[idx] = s1 * s2
                out.append(E)
    if not out:
        return np.zeros((0,) + (m,) * rank, dtype=np.int64)
    return np.array(out)


def _constraint_rows(E, rank):
    """Integer rows (one per coefficient) of the Bianchi constraints on ``E``."""
    n = E.shape[0]
    tail = "v" if rank == 5 else ""
    blocks = [E + _perm(E, "yzxw" + tail) + _perm(E, "zxyw" + tail)]
    if rank == 5:
        blocks.append(E + _perm(E, "xyvzw") + _perm(E, "xywvz"))
    return np.vstack([b.reshape(n, -1).T for b in blocks])


def _szabo_rows(E, space: PseudoSpace):
    """Integer coefficients of ``v -> S(v)`` (monomials a<=b<=c) on ``E``."""
    m = space.m
    n = E.shape[0]
    S = np.zeros((n, m, m, m, m, m), dtype=np.int64)  # [n, z, y, a, b, c]
    for src in set(permutations("abc")):
        a, b, c = src
        S += np.einsum(f"ny{a}{b}z{c}->nzyabc", E)
    S = S * space.diag.astype(np.int64)[None, :, None, None, None, None]
    monos = list(combinations_with_replacement(range(m), 3))
    cols = np.array([S[:, :, :, a, b, c].reshape(n, -1) for a, b, c in monos])  # [mono, n, zy]
    return cols.transpose(0, 2, 1).reshape(-1, n)


def _check_m(m, hi):
    if not 1 <= m <= hi:
        raise ValueError(f"dimension m={m} outside supported range 1..{hi}")


def act_dimension(m: int) -> int:
    _check_m(m, 6)
    E = pair_embedding(m, 4)
    if not len(E):
        return 0
    return exact.nullity(_constraint_rows(E, 4))


def acdt_dimension(m: int) -> int:
    """Exact dimension of the covariant derivative curvature tensors on R^m."""
    _check_m(m, 6)
    E = pair_embedding(m, 5)
    if not len(E):
        return 0
    return exact.nullity(_constraint_rows(E, 5))


def szabo_map_kernel_dim(space: PseudoSpace) -> int:
    """Kernel dimension of ``RR -> (v -> S(v))`` on the tensor space, exactly."""
    if space.m > 5:
        raise ValueError(f"exact assembly supported for m <= 5, got m={space.m}")
    E = pair_embedding(space.m, 5)
    if not len(E):
        return 0
    K = np.vstack([_constraint_rows(E, 5), _szabo_rows(E, space)])
    return exact.nullity(K)


@lru_cache(maxsize=None)
def solution_basis(m: int, rank: int) -> np.ndarray:
    """Orthonormal basis (columns, length ``m**rank``) of the symmetry class."""
    _check_m(m, 6)
    E = pair_embedding(m, rank)
    if not len(E):
        return np.zeros((m**rank, 0))
    K = exact.dedupe_rows(_constraint_rows(E, rank)).astype(float)
    _, s, vt = np.linalg.svd(K, full_matrices=True)
    rank_k = int(np.sum(s > 1e-8 * s[0])) if s.size else 0
    U = vt[rank_k:].T
    basis = E.reshape(len(E), -1).T.astype(float) @ U
    Q, _ = np.linalg.qr(basis)
    return Q


def projector_rank(m: int, rank: int = 5, tol: float = 1e-12) -> int:
    """Numerical rank of the alternating-projection operator on R^(m^rank)."""
    N = m**rank
    P = _alternating(np.eye(N).reshape((N,) + (m,) * rank), rank, tol, 10000).reshape(N, N)
    s = np.linalg.svd(P, compute_uv=False)
    return int(np.sum(s > 0.5))


# tensors and operators --------------------------------------------------------

def _check_space(coeffs, space, rank):
    if coeffs.shape != (space.m,) * rank:
        raise ValueError(f"coefficient shape {coeffs.shape} does not match m={space.m}, rank {rank}")


@dataclass(frozen=True, eq=False)
class ActTensor:
    coeffs: np.ndarray
    space: PseudoSpace
    tol: float = 1e-9

    def __post_init__(self):
        c = np.array(self.coeffs, dtype=float)
        _check_space(c, self.space, 4)
        res = validate_act(c)
        if not res.passes(self.tol):
            name, val = res.worst
            raise SymmetryError(f"not an algebraic curvature tensor: {name} residual {val:.3e}")
        c.flags.writeable = False
        object.__setattr__(self, "coeffs", c)

    @classmethod
    def project(cls, T, space, **kw) -> "ActTensor":
        return cls(project_to_act(T, **kw), space)


@dataclass(frozen=True, eq=False)
class AcdtTensor:
    coeffs: np.ndarray
    space: PseudoSpace
    tol: float = 1e-9

    def __post_init__(self):
        c = np.array(self.coeffs, dtype=float)
        _check_space(c, self.space, 5)
        res = validate_acdt(c)
        if not res.passes(self.tol):
            name, val = res.worst
            raise SymmetryError(f"not a covariant derivative curvature tensor: {name} residual {val:.3e}")
        c.flags.writeable = False
        object.__setattr__(self, "coeffs", c)

    @classmethod
    def project(cls, T, space, **kw) -> "AcdtTensor":
        return cls(project_to_acdt(T, **kw), space)

    @classmethod
    def zero(cls, space) -> "AcdtTensor":
        return cls(np.zeros((space.m,) * 5), space)

    def norm(self) -> float:
        return float(np.max(np.abs(self.coeffs), initial=0.0))

    def is_zero(self, tol: float = 1e-12) -> bool:
        return self.norm() <= tol


def random_acdt(space: PseudoSpace, seed, scale: float = 1.0) -> AcdtTensor:
    rng = np.random.default_rng(seed)
    T = rng.standard_normal((space.m,) * 5)
    return AcdtTensor(scale * project_to_acdt(T), space)


def random_act(space: PseudoSpace, seed, scale: float = 1.0) -> ActTensor:
    rng = np.random.default_rng(seed)
    T = rng.standard_normal((space.m,) * 4)
    return ActTensor(scale * project_to_act(T), space)


def jacobi(R: ActTensor, v) -> SelfAdjointOperator:
    """``(J(v) y, z) = R(y, v, v, z)``."""
    v = R.space.check_vector(v)
    M = np.einsum("yabz,a,b->yz", R.coeffs, v, v)
    return SelfAdjointOperator(R.space.diag[:, None] * M.T, R.space, None)


def szabo_bilinear(RR: AcdtTensor, v) -> np.ndarray:
    v = RR.space.check_vector(v)
    return np.einsum("yabzc,a,b,c->yz", RR.coeffs, v, v, v)


def szabo(RR: AcdtTensor, v) -> SelfAdjointOperator:
    """``(S(v) y, z) = RR(y, v, v, z; v)``."""
    M = szabo_bilinear(RR, v)
    return SelfAdjointOperator(RR.space.diag[:, None] * M.T, RR.space, None)


def szabo_batch(RR: AcdtTensor, V) -> np.ndarray:
    """Szabó matrices for the rows of ``V``, shape ``(n, m, m)``."""
    V = np.asarray(V, dtype=float)
    M = np.einsum("yabzc,na,nb,nc->nzy", RR.coeffs, V, V, V)
    return RR.space.diag[None, :, None] * M

