"""Polynomial view of ``x -> S(x)``: division by the quadratic form ``(x, x)``,
the linear annihilator system, and the even-rank bookkeeping for odd
constant-rank families.

Matrix entries follow the usual convention: ``S[i, j]`` is the i-th coordinate
of ``S(x) e_j``.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import permutations

import numpy as np

from . import exact
from .jordan import rank_of
from .pseudo import PreconditionError, PseudoSpace
from .sampling import sample_cone
from .tensors import AcdtTensor


@dataclass(frozen=True, eq=False)
class MatrixCubicPolynomial:
    """Entries ``S_ij(x) = sum c[i,j,a,b,c] x_a x_b x_c``, symmetric in (a,b,c)."""

    coeffs: np.ndarray
    space: PseudoSpace

    def __call__(self, x) -> np.ndarray:
        return np.einsum("ijabc,a,b,c->ij", self.coeffs, x, x, x)

    def norm(self) -> float:
        return float(np.linalg.norm(self.coeffs))


@dataclass(frozen=True, eq=False)
class MatrixLinearPolynomial:
    coeffs: np.ndarray
    space: PseudoSpace

    def __call__(self, x) -> np.ndarray:
        return np.einsum("ija,a->ij", self.coeffs, x)

    def norm(self) -> float:
        return float(np.linalg.norm(self.coeffs))


def symmetrize3(C: np.ndarray) -> np.ndarray:
    """Average over permutations of the last three axes."""
    out = np.zeros_like(C, dtype=float)
    for perm in permutations("abc"):
        out += np.einsum(f"...{''.join(perm)}->...abc", C)
    return out / 6.0


def szabo_cubic(RR: AcdtTensor) -> MatrixCubicPolynomial:
    g = RR.space.diag
    C = np.einsum("jabic->ijabc", RR.coeffs) * g[:, None, None, None, None]
    return MatrixCubicPolynomial(symmetrize3(C), RR.space)


def form_times(L: MatrixLinearPolynomial) -> MatrixCubicPolynomial:
    """The cubic ``(x, x) L(x)``."""
    G = L.space.metric
    return MatrixCubicPolynomial(symmetrize3(np.einsum("ab,ijc->ijabc", G, L.coeffs)), L.space)


def _multiplier_matrix(space: PseudoSpace) -> np.ndarray:
    """Columns: symmetrized ``(x,x) x_k`` as flattened m^3 coefficient arrays."""
    m = space.m
    E = np.eye(m)
    cols = [symmetrize3(np.einsum("ab,c->abc", space.metric, E[k])).ravel() for k in range(m)]
    return np.array(cols).T


def divide_by_form(S: MatrixCubicPolynomial, space: PseudoSpace | None = None,
                   tol: float = 1e-12) -> tuple[MatrixLinearPolynomial, float]:
    """Least-squares quotient of each entry by ``(x, x)`` and the remainder norm.

    The remainder is the Frobenius norm of ``S - sym((x,x) f)`` over all
    coefficients; it vanishes exactly when ``S`` is divisible.
    """
    space = space or S.space
    m = space.m
    Phi = _multiplier_matrix(space)
    rhs = S.coeffs.reshape(m * m, m**3).T
    sol, *_ = np.linalg.lstsq(Phi, rhs, rcond=None)
    f = sol.T.reshape(m, m, m)
    remainder = float(np.linalg.norm(rhs - Phi @ sol))
    return MatrixLinearPolynomial(f, space), remainder


@dataclass(frozen=True)
class NullConeVerdict:
    algebraic: bool
    sampled: bool
    remainder: float
    max_sampled_value: float
    form_irreducible: bool

    @property
    def vanishes(self) -> bool:
        return self.algebraic

    @property
    def agree(self) -> bool:
        return self.algebraic == self.sampled

    def to_json(self):
        return {
            "algebraic": self.algebraic,
            "sampled": self.sampled,
            "remainder": self.remainder,
            "max_sampled_value": self.max_sampled_value,
            "form_irreducible": self.form_irreducible,
            "agree": self.agree,
        }


def vanishes_on_null_cone(S: MatrixCubicPolynomial, space: PseudoSpace | None = None, tol: float = 1e-9,
                          n: int = 100, seed=0) -> NullConeVerdict:
    """Divisibility by ``(x, x)`` and sampled vanishing on the null cone.

    For m < 3 the form may factor, so the two verdicts are reported
    separately and need not agree.
    """
    space = space or S.space
    if space.p < 1 or space.q < 1:
        raise PreconditionError(f"signature {space.signature} has no null vectors")
    scale = max(1.0, S.norm())
    _, rem = divide_by_form(S, space)
    samples = sample_cone(space, "null", n, seed).vectors
    vals = np.einsum("ijabc,na,nb,nc->nij", S.coeffs, samples, samples, samples)
    worst = float(np.max(np.abs(vals), initial=0.0))
    return NullConeVerdict(rem <= tol * scale, worst <= tol * scale, rem, worst, space.m >= 3)


def annihilator_constraints(space: PseudoSpace, derived: bool = True) -> np.ndarray:
    """Integer constraint rows on the ``m^3`` coefficients ``f[i, j, a]``.

    ``f(x)`` self-adjoint, the polarized ``f(x) y + f(y) x = 0``, and if
    ``derived`` also ``(f(x) y, z) + (f(x) z, y) = 0``.
    """
    m = space.m
    g = space.diag.astype(np.int64)
    idx = np.arange(m**3).reshape(m, m, m)
    rows = []

    def row(*terms):
        r = np.zeros(m**3, dtype=np.int64)
        for coef, k in terms:
            r[k] += coef
        return r

    for i in range(m):
        for j in range(m):
            for a in range(m):
                rows.append(row((g[i], idx[i, j, a]), (-g[j], idx[j, i, a])))
                rows.append(row((1, idx[i, j, a]), (1, idx[i, a, j])))
                if derived:
                    rows.append(row((g[i], idx[i, j, a]), (g[j], idx[j, i, a])))
    return np.array(rows)


def linear_annihilator_space_dim(space: PseudoSpace, derived: bool = True) -> int:
    if space.m > 6:
        raise ValueError(f"assembly supported for m <= 6, got m={space.m}")
    return exact.nullity(annihilator_constraints(space, derived))


def annihilator_residual(f: MatrixLinearPolynomial) -> float:
    """Max violation of the annihilator constraints by the coefficients of ``f``."""
    A = annihilator_constraints(f.space).astype(float)
    return float(np.max(np.abs(A @ f.coeffs.ravel()), initial=0.0))


@dataclass(frozen=True)
class EvenRankResult:
    status: str
    rank: int | None
    observed: tuple[int, ...]

    def to_json(self):
        return {"status": self.status, "rank": self.rank, "observed": list(self.observed)}


def even_rank_check(family, tol: float = 1e-9) -> EvenRankResult:
    """Constant rank of an odd family must be even.

    ``family`` is a sequence of ``(x, A(x))`` pairs closed under ``x -> -x``.
    """
    xs = np.array([np.asarray(x, dtype=float) for x, _ in family])
    for x in xs:
        if not np.any(np.all(np.abs(xs + x) <= tol * max(1.0, np.abs(x).max()), axis=1)):
            raise PreconditionError("family is not antipodally closed")
    ranks = tuple(rank_of(A, tol) for _, A in family)
    if len(set(ranks)) != 1:
        return EvenRankResult("not-applicable", None, ranks)
    r = ranks[0] if ranks else 0
    return EvenRankResult("consistent" if r % 2 == 0 else "violated-with-witness", r, ranks)


def nullcone_engine(RR: AcdtTensor, tol: float = 1e-9, n: int = 100, seed=0) -> dict:
    """Divisibility, quotient annihilation, and vanishing on the null cone."""
    space = RR.space
    S = szabo_cubic(RR)
    out = {"applicable": space.p >= 1 and space.q >= 1}
    if not out["applicable"]:
        out["reason"] = f"signature {space.signature} has no null vectors"
        return out
    verdict = vanishes_on_null_cone(S, space, tol, n, seed)
    out["verdict"] = verdict.to_json()
    if verdict.vanishes:
        f, _ = divide_by_form(S, space)
        out["quotient_norm"] = f.norm()
        out["quotient_annihilator_residual"] = annihilator_residual(f)
        out["tensor_norm"] = RR.norm()
        out["forces_zero"] = RR.norm() <= tol * max(1.0, S.norm())
    return out
