"""Pseudo-Euclidean vector spaces and self-adjoint operators.

Coordinates are ordered timelike first, so the metric of signature (p, q) is
``diag(-1, ..., -1, +1, ..., +1)`` with ``p`` negative entries.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from functools import cached_property

import numpy as np


class PreconditionError(ValueError):
    """An operation was called outside its domain."""


@dataclass(frozen=True)
class Signature:
    p: int
    q: int

    def __post_init__(self):
        if self.p < 0 or self.q < 0:
            raise ValueError(f"signature entries must be nonnegative, got ({self.p},{self.q})")
        if self.p + self.q < 1:
            raise ValueError("signature must have p + q >= 1")

    @property
    def m(self) -> int:
        return self.p + self.q

    @classmethod
    def parse(cls, text: str) -> "Signature":
        """Parse ``"P,Q"``."""
        try:
            p, q = (int(s) for s in text.split(","))
        except ValueError:
            raise ValueError(f"expected signature as 'P,Q', got {text!r}") from None
        return cls(p, q)

    def __str__(self):
        return f"({self.p},{self.q})"


@dataclass(frozen=True)
class PseudoSpace:
    """Real vector space with the canonical diagonal metric of a signature.

    ``tol`` is the relative tolerance used for causal classification.
    """

    signature: Signature
    tol: float = 1e-9

    @classmethod
    def of(cls, p: int, q: int, tol: float = 1e-9) -> "PseudoSpace":
        return cls(Signature(p, q), tol)

    @property
    def p(self) -> int:
        return self.signature.p

    @property
    def q(self) -> int:
        return self.signature.q

    @property
    def m(self) -> int:
        return self.signature.m

    @cached_property
    def diag(self) -> np.ndarray:
        d = np.ones(self.m)
        d[: self.p] = -1.0
        d.flags.writeable = False
        return d

    @property
    def metric(self) -> np.ndarray:
        return np.diag(self.diag)

    def check_vector(self, v, name="v") -> np.ndarray:
        v = np.asarray(v, dtype=float)
        if v.shape != (self.m,):
            raise ValueError(f"{name} has length {v.shape[0] if v.ndim == 1 else v.shape}, space has dimension {self.m}")
        return v


class Causal(str, Enum):
    SPACELIKE = "spacelike"
    TIMELIKE = "timelike"
    NULL = "null"
    ZERO = "zero"


def inner(space: PseudoSpace, v, w) -> float:
    v = np.asarray(v, dtype=float)
    w = np.asarray(w, dtype=float)
    if v.shape != w.shape or v.shape != (space.m,):
        raise ValueError(f"dimension mismatch: len(v)={v.size}, len(w)={w.size}, m={space.m}")
    return float(np.dot(space.diag * v, w))


def causal_type(space: PseudoSpace, v) -> Causal:
    v = space.check_vector(v)
    e2 = float(np.dot(v, v))
    if e2 == 0.0:
        return Causal.ZERO
    n = inner(space, v, v)
    if n > space.tol * e2:
        return Causal.SPACELIKE
    if n < -space.tol * e2:
        return Causal.TIMELIKE
    return Causal.NULL


def self_adjoint_residual(space: PseudoSpace, A) -> float:
    A = np.asarray(A, dtype=float)
    gA = space.diag[:, None] * A
    return float(np.max(np.abs(gA - gA.T), initial=0.0))


def is_self_adjoint(space: PseudoSpace, A, tol: float = 1e-9) -> tuple[bool, float]:
    """Return ``(ok, residual)`` where residual is ``max|gA - (gA)^T|``."""
    A = np.asarray(A, dtype=float)
    if A.shape != (space.m, space.m):
        raise ValueError(f"operator shape {A.shape} does not match dimension {space.m}")
    res = self_adjoint_residual(space, A)
    scale = max(1.0, float(np.max(np.abs(A), initial=0.0)))
    return res <= tol * scale, res


@dataclass(frozen=True, eq=False)
class SelfAdjointOperator:
    matrix: np.ndarray
    space: PseudoSpace
    check_tol: float | None = field(default=1e-9, repr=False)

    def __post_init__(self):
        A = np.array(self.matrix, dtype=float)
        A.flags.writeable = False
        object.__setattr__(self, "matrix", A)
        if self.check_tol is not None:
            ok, res = is_self_adjoint(self.space, A, self.check_tol)
            if not ok:
                raise PreconditionError(f"operator is not self-adjoint (residual {res:.3e})")

    def __array__(self, dtype=None, copy=None):
        return np.asarray(self.matrix, dtype=dtype)

    def __neg__(self):
        return SelfAdjointOperator(-self.matrix, self.space, None)

    def __matmul__(self, v):
        return self.matrix @ v

    def bilinear(self) -> np.ndarray:
        """The symmetric form ``(A y, z)`` as a matrix indexed ``[y, z]``."""
        return (self.space.diag[:, None] * self.matrix).T


def as_matrix(A) -> np.ndarray:
    if isinstance(A, SelfAdjointOperator):
        return A.matrix
    return np.asarray(A, dtype=float)


def random_self_adjoint(space: PseudoSpace, seed) -> SelfAdjointOperator:
    """``A = g S`` with ``S`` symmetric, upper triangle i.i.d. standard normal."""
    rng = np.random.default_rng(seed)
    m = space.m
    S = np.zeros((m, m))
    iu = np.triu_indices(m)
    S[iu] = rng.standard_normal(len(iu[0]))
    S = S + np.triu(S, 1).T
    return SelfAdjointOperator(space.diag[:, None] * S, space, check_tol=1e-12)


def psi_map(space: PseudoSpace, v) -> np.ndarray:
    """Negate the timelike part: ``v+ - v-``."""
    return space.diag * space.check_vector(v)


def euclidean_inner(space: PseudoSpace, v, w) -> float:
    return inner(space, psi_map(space, v), w)


def tangent_project(space: PseudoSpace, v, w, tol: float = 1e-9) -> tuple[np.ndarray, np.ndarray]:
    """Split ``w`` into its spacelike and timelike coordinate parts.

    ``v`` must be a unit spacelike vector with vanishing timelike part and
    ``w`` must be orthogonal to ``v``; then the spacelike part of ``w`` is
    tangent to the unit sphere of the spacelike subspace at ``v``.
    """
    v = space.check_vector(v)
    w = space.check_vector(w, "w")
    p = space.p
    if np.any(np.abs(v[:p]) > tol) or abs(inner(space, v, v) - 1.0) > tol:
        raise PreconditionError("base point must be a unit vector of the spacelike coordinate subspace")
    c = inner(space, v, w)
    if abs(c) > tol * max(1.0, float(np.linalg.norm(w))):
        raise PreconditionError(f"w is not orthogonal to v: (v,w) = {c:.3e}")
    plus = w.copy()
    plus[:p] = 0.0
    minus = w - plus
    return plus, minus
