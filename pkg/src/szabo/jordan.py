"""Jordan decomposition of self-adjoint operators of an indefinite metric.

Eigenvalues are clustered, each cluster gets its real generalized eigenspace
``E = ker(A_lam^m)`` where ``A_lam = A - lam`` for real ``lam`` and
``(A - lam)(A - conj(lam))`` otherwise, and block sizes come from the rank
staircase of ``A_lam``.

The kernel of ``A_lam^m`` is computed as a chain of nested kernels
``K_{k+1} = {x : A_lam x in K_k}`` instead of forming the power, which keeps
the singular-value threshold meaningful for small clusters next to large ones.

Roundoff splits a Jordan block of size ``k`` into ``k`` eigenvalues roughly
``eps**(1/k)`` apart, so clustering strictly at ``tol`` is not always right.
The cluster radius starts at ``tol * max(1, rho)`` and is widened through the
observed pairwise distances until the decomposition is self-consistent:
kernel dimensions equal the cluster multiplicities, the union of the bases is
well conditioned, and no non-real cluster is really a split real block.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from scipy.optimize import linear_sum_assignment

from .pseudo import PseudoSpace, SelfAdjointOperator, as_matrix

_BIG = 1e300


def null_basis(M: np.ndarray, thr: float) -> np.ndarray:
    """Orthonormal basis (columns) of the singular vectors with ``s <= thr``."""
    n = M.shape[1]
    if n == 0:
        return np.zeros((0, 0))
    _, s, vt = np.linalg.svd(M, full_matrices=True)
    rank = int(np.sum(s > thr))
    return vt[rank:].T.copy()


def rank_of(A, tol: float = 1e-9) -> int:
    """Number of singular values above ``tol`` times the largest one."""
    s = np.linalg.svd(as_matrix(A), compute_uv=False)
    if not s.size or s[0] == 0.0:
        return 0
    return int(np.sum(s > tol * s[0]))


def nested_kernels(M: np.ndarray, thr: float, steps: int) -> tuple[np.ndarray, list[int]]:
    """Generalized kernel of ``M`` and the dimensions ``dim ker M^k``, k = 0, 1, ..."""
    n = M.shape[0]
    Q = np.zeros((n, 0))
    dims = [0]
    eye = np.eye(n)
    for _ in range(steps):
        K = null_basis((eye - Q @ Q.T) @ M, thr)
        Q = K
        dims.append(K.shape[1])
        if dims[-1] == dims[-2] or dims[-1] == n:
            break
    return Q, dims


def blocks_from_dims(dims: list[int], pair: bool = False) -> tuple[int, ...]:
    """Jordan block sizes (descending) from ``dim ker M^k`` staircase.

    For ``pair=True`` the staircase counts each complex block twice.
    """
    inc = [b - a for a, b in zip(dims, dims[1:])] + [0]
    if pair:
        inc = [(d + 1) // 2 for d in inc]
    sizes = []
    for k in range(1, len(inc)):
        exactly = inc[k - 1] - inc[k]
        sizes += [k] * max(exactly, 0)
    return tuple(sorted(sizes, reverse=True))


@dataclass(frozen=True)
class JordanEntry:
    lam: complex
    basis: np.ndarray  # columns span the real generalized eigenspace
    signature: tuple[int, int]
    blocks: tuple[int, ...]

    @property
    def is_real(self) -> bool:
        return self.lam.imag == 0.0

    @property
    def weight(self) -> int:
        return 1 if self.is_real else 2

    @property
    def multiplicity(self) -> int:
        return sum(self.blocks)

    @property
    def dim(self) -> int:
        return self.basis.shape[1]


@dataclass(frozen=True)
class JordanStructure:
    """Canonical eigenvalue / block-size data, comparable at a tolerance."""

    entries: tuple[tuple[complex, tuple[int, ...]], ...]

    def negated(self) -> "JordanStructure":
        out = []
        for lam, blocks in self.entries:
            neg = -lam if lam.imag == 0.0 else complex(-lam.real, lam.imag)
            out.append((neg, blocks))
        return JordanStructure(tuple(sorted(out, key=lambda e: (e[0].real, e[0].imag))))

    def spectrum(self) -> np.ndarray:
        """Full eigenvalue multiset (conjugates included), sorted by (Re, Im)."""
        vals = []
        for lam, blocks in self.entries:
            k = sum(blocks)
            vals += [lam] * k
            if lam.imag != 0.0:
                vals += [lam.conjugate()] * k
        return np.array(sorted(vals, key=lambda z: (z.real, z.imag)), dtype=complex)

    @property
    def is_simple(self) -> bool:
        return all(b == 1 for _, blocks in self.entries for b in blocks)

    def scale(self) -> float:
        return max([abs(lam) for lam, _ in self.entries], default=0.0)

    def matches(self, other: "JordanStructure", tol: float) -> bool:
        """Same eigenvalue clusters (within ``tol``) carrying the same blocks."""
        a, b = self.entries, other.entries
        if len(a) != len(b):
            return False
        if not a:
            return True
        cost = np.full((len(a), len(b)), _BIG)
        for i, (la, ba) in enumerate(a):
            for j, (lb, bb) in enumerate(b):
                if ba == bb and (la.imag == 0.0) == (lb.imag == 0.0):
                    cost[i, j] = abs(la - lb)
        r, c = linear_sum_assignment(cost)
        return bool(np.max(cost[r, c]) <= tol)

    def to_json(self):
        return [
            {"re": lam.real, "im": lam.imag, "blocks": list(blocks)}
            for lam, blocks in self.entries
        ]


def spectra_match(s1: np.ndarray, s2: np.ndarray, tol: float) -> bool:
    if len(s1) != len(s2):
        return False
    if len(s1) == 0:
        return True
    cost = np.abs(np.subtract.outer(s1, s2))
    r, c = linear_sum_assignment(cost)
    return bool(np.max(cost[r, c]) <= tol)


@dataclass(frozen=True)
class JordanDecomposition:
    entries: tuple[JordanEntry, ...]
    matrix: np.ndarray
    space: PseudoSpace
    tol: float
    cluster_radius: float
    warnings: tuple[str, ...] = field(default=())

    def structure(self) -> JordanStructure:
        return JordanStructure(tuple((e.lam, e.blocks) for e in self.entries))

    def spectrum(self) -> np.ndarray:
        return self.structure().spectrum()

    @property
    def is_simple(self) -> bool:
        return self.structure().is_simple

    def change_of_basis(self) -> np.ndarray:
        return np.hstack([e.basis for e in self.entries])

    def reconstruct(self) -> np.ndarray:
        """``T diag(B_i^T A B_i) T^-1`` over the eigenspace bases."""
        T = self.change_of_basis()
        blocks = [e.basis.T @ self.matrix @ e.basis for e in self.entries]
        D = np.zeros_like(self.matrix)
        k = 0
        for b in blocks:
            d = b.shape[0]
            D[k : k + d, k : k + d] = b
            k += d
        return T @ D @ np.linalg.inv(T)

    def gram(self, i: int, j: int | None = None) -> np.ndarray:
        j = i if j is None else j
        g = self.space.diag
        return self.entries[i].basis.T @ (g[:, None] * self.entries[j].basis)

    def orthogonality_residual(self) -> float:
        worst = 0.0
        n = len(self.entries)
        for i in range(n):
            for j in range(i + 1, n):
                worst = max(worst, float(np.max(np.abs(self.gram(i, j)), initial=0.0)))
        return worst

    def min_gram_singular_value(self) -> float:
        return min(
            (float(np.linalg.svd(self.gram(i), compute_uv=False).min()) for i in range(len(self.entries))),
            default=np.inf,
        )


def _clusters(dists: np.ndarray, radius: float) -> list[list[int]]:
    n = len(dists)
    radius *= 1.0 + 1e-12
    parent = list(range(n))

    def find(i):
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    for i in range(n):
        for j in range(i + 1, n):
            if dists[i, j] <= radius:
                parent[find(i)] = find(j)
    groups: dict[int, list[int]] = {}
    for i in range(n):
        groups.setdefault(find(i), []).append(i)
    return list(groups.values())


def _conjugate_partners(eigs: np.ndarray) -> np.ndarray:
    return np.array([int(np.argmin(np.abs(eigs - z.conjugate()))) for z in eigs])


def _attempt(A, space, eigs, dists, partners, radius, tol, scale):
    m = A.shape[0]
    eye = np.eye(m)
    entries = []
    problems = []
    for members in _clusters(dists, radius):
        mset = set(members)
        self_conj = any(partners[i] in mset for i in members)
        center = complex(np.mean(eigs[members]))
        if self_conj:
            lam = complex(0.0 if abs(center.real) <= tol * scale else center.real, 0.0)
            shifted = A - lam.real * eye
            thr = tol * scale
            expected = len(members)
        elif center.imag > 0:
            lam = center
            shifted = A @ A - 2.0 * lam.real * A + abs(lam) ** 2 * eye
            thr = tol * scale**2
            expected = 2 * len(members)
        else:
            continue
        basis, dims = nested_kernels(shifted, thr, m)
        if basis.shape[1] != expected:
            problems.append(f"kernel dim {basis.shape[1]} != {expected} at {lam:.6g}")
        if not self_conj and basis.shape[1]:
            restricted = basis.T @ (A - lam.real * eye) @ basis
            _, rdims = nested_kernels(restricted, tol * scale, basis.shape[1])
            if rdims[-1] == basis.shape[1]:
                problems.append(f"non-real cluster {lam:.6g} is a split real block")
        gram = basis.T @ (space.diag[:, None] * basis)
        ev = np.linalg.eigvalsh(gram) if basis.shape[1] else np.zeros(0)
        sig = (int(np.sum(ev < 0)), int(np.sum(ev > 0)))
        blocks = blocks_from_dims(dims, pair=not self_conj)
        entries.append(JordanEntry(lam, basis, sig, blocks))
    entries.sort(key=lambda e: (e.lam.real, e.lam.imag))
    if sum(e.dim for e in entries) != m:
        problems.append("generalized eigenspaces do not span")
    else:
        T = np.hstack([e.basis for e in entries])
        smin = np.linalg.svd(T, compute_uv=False).min()
        if smin <= np.sqrt(tol):
            problems.append(f"eigenspace bases nearly dependent (sigma_min {smin:.2e})")
    return entries, problems


def jordan_decompose(A, tol: float = 1e-9, space: PseudoSpace | None = None) -> JordanDecomposition:
    """Generalized eigenspaces, induced signatures and Jordan blocks of ``A``."""
    if isinstance(A, SelfAdjointOperator):
        space = A.space if space is None else space
    M = as_matrix(A)
    if space is None:
        raise ValueError("a PseudoSpace is required for a bare matrix")
    m = M.shape[0]
    if M.shape != (m, m) or m != space.m:
        raise ValueError(f"operator shape {M.shape} does not match dimension {space.m}")

    eigs = np.linalg.eigvals(M)
    rho = float(np.max(np.abs(eigs), initial=0.0))
    scale = max(1.0, rho, float(np.linalg.norm(M, 2)) if m else 0.0)
    base = tol * max(1.0, rho)
    partners = _conjugate_partners(eigs)
    dists = np.abs(np.subtract.outer(eigs, eigs))
    levels = [base] + sorted(set(float(d) for d in dists[np.triu_indices(m, 1)] if d > base))

    first = None
    for radius in levels:
        entries, problems = _attempt(M, space, eigs, dists, partners, radius, tol, scale)
        if first is None:
            first = (entries, problems, radius)
        if not problems:
            break
    else:
        entries, problems, radius = first

    warnings = list(problems)
    if radius > base:
        warnings.append(f"clusters merged at radius {radius:.3e} above base {base:.3e}")
    centers = [e.lam for e in entries] + [e.lam.conjugate() for e in entries if not e.is_real]
    for i in range(len(centers)):
        for j in range(i + 1, len(centers)):
            if centers[i] != centers[j].conjugate() and abs(centers[i] - centers[j]) <= 10 * max(radius, base):
                warnings.append(f"near-merge: {centers[i]:.6g} and {centers[j]:.6g}")
    return JordanDecomposition(tuple(entries), M, space, tol, radius, tuple(warnings))


def is_jordan_simple(A, tol: float = 1e-9, space: PseudoSpace | None = None) -> bool:
    return jordan_decompose(A, tol, space).is_simple

