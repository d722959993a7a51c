"""Spectral and Jordan constancy of the Szabó operator over sampled cones.

Constancy can only be refuted by sampling, never certified: a verdict of
``no-counterexample`` means the sample found no witness. Samples come in
antipodal pairs. The structure at ``-v`` is the negation of the structure at
``v`` because ``S(-v) = -S(v)``; it is carried along but never compared with
the reference, so a witness needs two distinct base points. Whether a single
spectrum is symmetric under negation is checked separately in the report.
"""

from __future__ import annotations

import hashlib
from collections import Counter
from dataclasses import dataclass, field

import numpy as np
from scipy.linalg import qr

from .jordan import JordanStructure, jordan_decompose, rank_of, spectra_match
from .nullcone import even_rank_check
from .pseudo import PreconditionError, PseudoSpace, inner, self_adjoint_residual
from .sampling import CONES, SampleSet, cone_feasible, sample_cone
from .tensors import AcdtTensor, szabo, szabo_batch

__all__ = [
    "adams_number", "rank_of", "char_poly_P", "spectral_constancy", "jordan_constancy",
    "rank_transfer_witness", "theorem_report", "ConstancyVerdict", "TheoremReport",
]

NO_COUNTEREXAMPLE = "no-counterexample"
WITNESS_FOUND = "witness-found"
CONSISTENT = "consistent"
VIOLATED = "violated-with-witness"
NOT_APPLICABLE = "not-applicable"


def adams_number(q: int) -> int:
    """Maximal number of independent vector fields on the sphere S^(q-1)."""
    if q < 1:
        raise ValueError(f"Adams number needs q >= 1, got {q}")
    ell = (q & -q).bit_length() - 1
    return (0, 1, 3, 7)[ell % 4] + 8 * (ell // 4)


def char_poly_P(RR: AcdtTensor, v, tol: float = 1e-9) -> np.ndarray:
    """Coefficients ``c_0..c_m`` of ``det(P(v) - t Id)``, ``P(v) = (v,v)^-3 S(v)^2``."""
    space = RR.space
    v = space.check_vector(v)
    nv = inner(space, v, v)
    if abs(nv) <= tol * float(np.dot(v, v)):
        raise PreconditionError("P(v) is undefined for null or zero v")
    # P is homogeneous of degree 0, so evaluate at the Euclidean unit vector
    u = v / np.linalg.norm(v)
    n = inner(space, u, u)
    S = szabo(RR, u).matrix
    m = space.m
    # expand det(x - S) rather than det(t - P): P = S^2 / n^3 has far larger entries
    q = np.real_if_close(np.poly(S)).astype(float)[::-1]  # ascending in x
    q_neg = q * (-1.0) ** np.arange(m + 1)
    r = (-1) ** m * np.convolve(q, q_neg)  # det(x^2 - S^2), even in x
    d = r[::2]  # det(y - S^2) ascending in y
    j = np.arange(m + 1)
    return (-1) ** m * d * n ** (3.0 * (j - m))


def compare_tol(tol: float, *structs: JordanStructure) -> float:
    return np.sqrt(tol) * max([1.0] + [s.scale() for s in structs])


@dataclass(frozen=True, eq=False)
class Witness:
    v1: np.ndarray
    v2: np.ndarray
    structure1: JordanStructure
    structure2: JordanStructure

    def to_json(self):
        return {
            "v1": self.v1.tolist(),
            "v2": self.v2.tolist(),
            "structure1": self.structure1.to_json(),
            "structure2": self.structure2.to_json(),
        }


@dataclass(frozen=True, eq=False)
class ConstancyVerdict:
    status: str
    cone: str
    kind: str
    compare_tol: float
    n_compared: int
    witness: Witness | None = None
    note: str = "sampling-based: a missing witness does not certify constancy"

    @property
    def found(self) -> bool:
        return self.status == WITNESS_FOUND

    def to_json(self):
        return {
            "status": self.status,
            "cone": self.cone,
            "kind": self.kind,
            "compare_tol": self.compare_tol,
            "n_compared": self.n_compared,
            "witness": None if self.witness is None else self.witness.to_json(),
            "note": self.note,
        }


@dataclass(eq=False)
class ConeAnalysis:
    samples: SampleSet
    operators: np.ndarray
    structures: list[JordanStructure]
    ranks: list[int]
    spectral: ConstancyVerdict | None = None
    jordan: ConstancyVerdict | None = None


def _structures(RR: AcdtTensor, samples: SampleSet, tol: float, operators=None):
    ops = szabo_batch(RR, samples.vectors) if operators is None else operators
    out = []
    for k in range(0, len(ops), 2):
        s = jordan_decompose(ops[k], tol, RR.space).structure()
        out += [s, s.negated()]
    return ops, out


def _compare(space, samples, structures, kind, tol, operators):
    vecs = samples.vectors
    ref = structures[0]
    if kind == "jordan" and samples.cone == "null":
        for k in range(0, len(vecs), 2):
            norm = max(1.0, float(np.linalg.norm(operators[k], 2)))
            if structures[k].scale() > np.sqrt(tol) * norm:
                v = vecs[k]
                s2 = jordan_decompose(8.0 * operators[k], tol, space).structure()
                ctol = compare_tol(tol, structures[k], s2)
                return ConstancyVerdict(WITNESS_FOUND, samples.cone, kind, ctol, k // 2 + 1,
                                        Witness(v, 2 * v, structures[k], s2),
                                        note="not nilpotent on the null cone; S(2v) = 8 S(v)")
    for k in range(2, len(structures), 2):
        s = structures[k]
        ctol = compare_tol(tol, ref, s)
        if kind == "spectrum":
            same = spectra_match(ref.spectrum(), s.spectrum(), ctol)
        else:
            same = ref.matches(s, ctol)
        if not same:
            return ConstancyVerdict(WITNESS_FOUND, samples.cone, kind, ctol, k // 2 + 1,
                                    Witness(vecs[0], vecs[k], ref, s))
    ctol = compare_tol(tol, *structures)
    return ConstancyVerdict(NO_COUNTEREXAMPLE, samples.cone, kind, ctol, len(structures) // 2)


def analyze_cone(RR: AcdtTensor, cone: str, n: int, seed, tol: float = 1e-9,
                 euclidean_bound: float = 10.0) -> ConeAnalysis:
    samples = sample_cone(RR.space, cone, n, seed, euclidean_bound)
    ops, structs = _structures(RR, samples, tol)
    ranks = [rank_of(A, tol) for A in ops]
    res = ConeAnalysis(samples, ops, structs, ranks)
    if cone != "null":
        res.spectral = _compare(RR.space, samples, structs, "spectrum", tol, ops)
    res.jordan = _compare(RR.space, samples, structs, "jordan", tol, ops)
    return res


def spectral_constancy(RR: AcdtTensor, cone: str, n: int, seed, tol: float = 1e-9,
                       euclidean_bound: float = 10.0) -> ConstancyVerdict:
    if cone not in ("spacelike", "timelike"):
        raise ValueError("spectral constancy is defined on the pseudo-spheres")
    samples = sample_cone(RR.space, cone, n, seed, euclidean_bound)
    ops, structs = _structures(RR, samples, tol)
    return _compare(RR.space, samples, structs, "spectrum", tol, ops)


def jordan_constancy(RR: AcdtTensor, cone: str, n: int, seed, tol: float = 1e-9,
                     euclidean_bound: float = 10.0) -> ConstancyVerdict:
    samples = sample_cone(RR.space, cone, n, seed, euclidean_bound)
    ops, structs = _structures(RR, samples, tol)
    return _compare(RR.space, samples, structs, "jordan", tol, ops)


def constancy_of_operators(space: PseudoSpace, vectors, operators, kind: str = "jordan",
                           tol: float = 1e-9, cone: str = "given") -> ConstancyVerdict:
    """Compare explicitly supplied operators, each against the first."""
    structs = []
    for A in operators:
        s = jordan_decompose(A, tol, space).structure()
        structs += [s, s.negated()]
    vectors = np.repeat(np.asarray(vectors, dtype=float), 2, axis=0)
    vectors[1::2] *= -1
    ops = np.repeat(np.asarray(operators, dtype=float), 2, axis=0)
    ops[1::2] *= -1
    samples = SampleSet(cone, vectors, None, np.inf)
    return _compare(space, samples, structs, kind, tol, ops)


def rank_transfer_witness(RR: AcdtTensor, v0, target_cone: str, n: int, seed, tol: float = 1e-9,
                          euclidean_bound: float = 10.0):
    """A vector of ``target_cone`` where the same maximal minor of ``S`` survives.

    The ``r x r`` minor of ``S(v0)`` picked by pivoted QR is nonzero; any ``v``
    with a nonzero value of that minor has ``rank S(v) >= r``. Returns ``None``
    when no sampled vector qualifies.
    """
    S0 = szabo(RR, v0).matrix
    r = rank_of(S0, tol)
    if r == 0:
        raise PreconditionError("S(v0) has rank 0")
    _, _, cols = qr(S0, pivoting=True)
    cols = np.sort(cols[:r])
    _, _, rows = qr(S0[:, cols].T, pivoting=True)
    rows = np.sort(rows[:r])
    samples = sample_cone(RR.space, target_cone, n, seed, euclidean_bound)
    for v in samples.vectors:
        S = szabo(RR, v).matrix
        smax = np.linalg.norm(S, 2)
        if smax == 0.0:
            continue
        d = np.linalg.det(S[np.ix_(rows, cols)])
        if abs(d) > tol * smax**r:
            return v
    return None


# theorem report ---------------------------------------------------------------

@dataclass(frozen=True)
class TheoremFlag:
    status: str
    explanation: str
    candidate: bool = False

    def to_json(self):
        return {"status": self.status, "explanation": self.explanation, "candidate": self.candidate}


@dataclass(eq=False)
class TheoremReport:
    signature: tuple[int, int]
    tensor_zero: bool
    r_plus: Counter
    r_minus: Counter
    r_0: Counter
    identities: dict
    cross_cone: dict
    verdicts: dict
    flags: dict
    quarantine: list = field(default_factory=list)
    even_rank: dict | None = None

    def to_json(self):
        def ranks(c):
            return {str(k): c[k] for k in sorted(c)}

        return {
            "signature": list(self.signature),
            "tensor_zero": self.tensor_zero,
            "r_plus": ranks(self.r_plus),
            "r_minus": ranks(self.r_minus),
            "r_0": ranks(self.r_0),
            "identities": self.identities,
            "cross_cone": self.cross_cone,
            "verdicts": {c: {k: v.to_json() for k, v in d.items()} for c, d in self.verdicts.items()},
            "flags": {k: f.to_json() for k, f in self.flags.items()},
            "even_rank": self.even_rank,
            "quarantine": self.quarantine,
        }


def cone_seed(seed: int, cone: str) -> list[int]:
    return [int(seed), CONES.index(cone)]


def _constant(c: Counter):
    return next(iter(c)) if len(c) == 1 else None


def _point_identities(RR: AcdtTensor, analyses: dict[str, ConeAnalysis], tol: float) -> dict:
    space = RR.space
    worst = {"self_adjoint": 0.0, "annihilates_v": 0.0, "odd": 0.0, "cubic": 0.0}
    mismatches = 0
    pairs = 0
    for a in analyses.values():
        V = a.samples.vectors
        ops = a.operators
        neg = szabo_batch(RR, -V)
        dbl = szabo_batch(RR, 2 * V)
        for k, v in enumerate(V):
            S = ops[k]
            sc = max(1.0, float(np.max(np.abs(S))))
            worst["self_adjoint"] = max(worst["self_adjoint"], self_adjoint_residual(space, S) / sc)
            worst["annihilates_v"] = max(worst["annihilates_v"], float(np.linalg.norm(S @ v) / (sc * np.linalg.norm(v))))
            worst["odd"] = max(worst["odd"], float(np.max(np.abs(neg[k] + S))) / sc)
            worst["cubic"] = max(worst["cubic"], float(np.max(np.abs(dbl[k] - 8 * S))) / (8 * sc))
        for k in range(0, len(V), 2):
            e1 = np.linalg.eigvals(ops[k])
            e2 = np.linalg.eigvals(neg[k])
            pairs += 1
            ctol = np.sqrt(tol) * max(1.0, float(np.max(np.abs(e1))))
            if not spectra_match(-e1, e2, ctol):
                mismatches += 1
    worst["antipodal_spectrum_mismatches"] = mismatches
    worst["antipodal_pairs"] = pairs
    return worst


def _spectrum_checks(struct: JordanStructure, ctol: float):
    spec = struct.spectrum()
    real = np.abs(spec.imag) <= ctol
    imag = np.abs(spec.real) <= ctol
    return bool(np.all(real | imag)), bool(np.all(real)), bool(np.all(imag))


def tensor_digest(RR: AcdtTensor) -> str:
    return hashlib.sha256(np.ascontiguousarray(RR.coeffs).tobytes()).hexdigest()


def theorem_report(RR: AcdtTensor, n: int = 100, seed: int = 0, tol: float = 1e-9,
                   euclidean_bound: float = 10.0) -> TheoremReport:
    space = RR.space
    p, q = space.p, space.q
    analyses = {c: analyze_cone(RR, c, n, cone_seed(seed, c), tol, euclidean_bound)
                for c in CONES if cone_feasible(space, c)}
    verdicts = {}
    for c, a in analyses.items():
        verdicts[c] = {"jordan": a.jordan}
        if a.spectral is not None:
            verdicts[c]["spectrum"] = a.spectral
    rank_counts = {c: Counter(a.ranks) for c, a in analyses.items()}
    r_plus = rank_counts.get("spacelike", Counter())
    r_minus = rank_counts.get("timelike", Counter())
    r_0 = rank_counts.get("null", Counter())

    identities = _point_identities(RR, analyses, tol)
    cross = {}
    if "spacelike" in analyses and "timelike" in analyses:
        c_plus = char_poly_P(RR, analyses["spacelike"].samples.vectors[0], tol)
        c_minus = char_poly_P(RR, analyses["timelike"].samples.vectors[0], tol)
        scale = max(1.0, float(np.max(np.abs(c_plus))), float(np.max(np.abs(c_minus))))
        cross = {
            "char_poly_plus": c_plus.tolist(),
            "char_poly_minus": c_minus.tolist(),
            "relative_difference": float(np.max(np.abs(c_plus - c_minus))) / scale,
        }

    zero = RR.is_zero(tol)
    flags: dict[str, TheoremFlag] = {}
    quarantine = []
    even = None

    def quarantine_entry(name, reason):
        quarantine.append({
            "theorem": name,
            "reason": reason,
            "signature": [p, q],
            "tensor_sha256": tensor_digest(RR),
            "tensor_max_abs": RR.norm(),
            "coeffs": RR.coeffs.ravel().tolist(),
            "samples": n,
            "seed": seed,
            "tol": tol,
            "euclidean_bound": euclidean_bound,
        })

    def violated(name, reason):
        flags[name] = TheoremFlag(VIOLATED, reason, candidate=True)
        quarantine_entry(name, reason)

    def witness_on(cone, kind):
        v = verdicts.get(cone, {}).get(kind)
        return v is not None and v.found

    plus_ok = "spacelike" in analyses
    minus_ok = "timelike" in analyses
    szabo_plus = plus_ok and not witness_on("spacelike", "spectrum")
    szabo_minus = minus_ok and not witness_on("timelike", "spectrum")
    is_szabo = szabo_plus or szabo_minus
    jordan_plus = plus_ok and not witness_on("spacelike", "jordan")
    jordan_minus = minus_ok and not witness_on("timelike", "jordan")
    jordan_null = "null" in analyses and not witness_on("null", "jordan")
    jordan_all = jordan_plus and jordan_minus and jordan_null

    if zero:
        for name in ("low_index_vanishing", "szabo_spectrum", "spacelike_jordan", "two_sided_jordan", "jordan_szabo_ranks", "null_even_rank"):
            flags[name] = TheoremFlag(CONSISTENT, "zero tensor satisfies every conclusion")
        even = {"status": CONSISTENT, "rank": 0, "observed": sorted(set(r_0.elements()))}
        return TheoremReport((p, q), True, r_plus, r_minus, r_0, identities, cross, verdicts, flags, quarantine, even)

    # Szabó tensors vanish if min(p, q) <= 1
    if min(p, q) > 1:
        flags["low_index_vanishing"] = TheoremFlag(NOT_APPLICABLE, "signature has p >= 2 and q >= 2")
    elif not is_szabo:
        flags["low_index_vanishing"] = TheoremFlag(CONSISTENT, "spectral witnesses show the nonzero tensor is not Szabó")
    else:
        violated("low_index_vanishing", "nonzero tensor survived spectral constancy sampling with min(p,q) <= 1")

    # spectra of Szabó tensors when p, q >= 2
    if min(p, q) < 2:
        flags["szabo_spectrum"] = TheoremFlag(NOT_APPLICABLE, "requires p >= 2 and q >= 2")
    elif not is_szabo:
        flags["szabo_spectrum"] = TheoremFlag(NOT_APPLICABLE, "spectral witnesses: tensor is not Szabó")
    else:
        problems = []
        for cone, sign in (("spacelike", +1), ("timelike", -1)):
            if cone not in analyses:
                continue
            ref = analyses[cone].structures[0]
            ctol = compare_tol(tol, ref)
            if not ref.matches(ref.negated(), ctol):
                problems.append(f"Spec on {cone} not symmetric under negation")
            axis_ok, all_real, all_imag = _spectrum_checks(ref, ctol)
            if not axis_ok:
                problems.append(f"Spec on {cone} leaves the real and imaginary axes")
            if p < q and cone == "spacelike" and not all_imag:
                problems.append("p < q but Spec+ is not purely imaginary")
            if p < q and cone == "timelike" and not all_real:
                problems.append("p < q but Spec- is not real")
            if q < p and cone == "spacelike" and not all_real:
                problems.append("q < p but Spec+ is not real")
            if q < p and cone == "timelike" and not all_imag:
                problems.append("q < p but Spec- is not purely imaginary")
        if cross and cross["relative_difference"] > np.sqrt(tol):
            problems.append("characteristic polynomials of P differ between the pseudo-spheres")
        if problems:
            violated("szabo_spectrum", "; ".join(problems))
        else:
            flags["szabo_spectrum"] = TheoremFlag(CONSISTENT, "sampled spectra satisfy all four assertions")

    # spacelike Jordan Szabó with p < q
    nu = adams_number(q) if q >= 1 else 0
    if not p < q:
        flags["spacelike_jordan"] = TheoremFlag(NOT_APPLICABLE, "requires p < q")
    elif not jordan_plus:
        if q % 2 == 1:
            flags["spacelike_jordan"] = TheoremFlag(CONSISTENT, "q odd: Jordan witness on S+ confirms the nonzero tensor is not Jordan Szabó")
        else:
            flags["spacelike_jordan"] = TheoremFlag(NOT_APPLICABLE, "Jordan witness on S+: hypothesis fails")
    elif q % 2 == 1:
        violated("spacelike_jordan", "q odd and p < q but a nonzero tensor survived spacelike Jordan sampling")
    else:
        problems = []
        if not all(s.is_simple for s in analyses["spacelike"].structures):
            problems.append("S(v) not Jordan simple on S+")
        if p < q - nu and max(r_plus) > 2 * nu:
            problems.append(f"rank {max(r_plus)} exceeds 2*nu(q) = {2 * nu}")
        if problems:
            violated("spacelike_jordan", "; ".join(problems))
        else:
            flags["spacelike_jordan"] = TheoremFlag(CONSISTENT, "Jordan simple on S+ and rank bound holds")

    # spacelike and timelike Jordan Szabó
    if not (jordan_plus and jordan_minus):
        flags["two_sided_jordan"] = TheoremFlag(NOT_APPLICABLE, "Jordan witness on a pseudo-sphere: hypothesis fails")
    else:
        problems = []
        rp, rm = _constant(r_plus), _constant(r_minus)
        if rp is None or rm is None or rp != rm:
            problems.append(f"r+ = {dict(r_plus)} and r- = {dict(r_minus)} are not one common constant")
        if p != q and not all(s.is_simple for c in ("spacelike", "timelike") for s in analyses[c].structures):
            problems.append("p != q but S(v) not Jordan simple on a pseudo-sphere")
        if problems:
            violated("two_sided_jordan", "; ".join(problems))
        else:
            flags["two_sided_jordan"] = TheoremFlag(CONSISTENT, "r+ = r- and Jordan simple")

    # Jordan Szabó on all three cones
    vanish_case = q % 4 == 2 and p < q - 1
    if not jordan_all:
        if vanish_case:
            flags["jordan_szabo_ranks"] = TheoremFlag(CONSISTENT, "q = 2 mod 4, p < q - 1: Jordan witnesses confirm the tensor is not Jordan Szabó")
        else:
            flags["jordan_szabo_ranks"] = TheoremFlag(NOT_APPLICABLE, "Jordan witness on some cone: hypothesis fails")
    elif vanish_case:
        violated("jordan_szabo_ranks", "q = 2 mod 4 and p < q - 1 but a nonzero tensor survived Jordan sampling on every cone")
    else:
        r0, rp = _constant(r_0), _constant(r_plus)
        if r0 is None or rp is None or not r0 < rp:
            violated("jordan_szabo_ranks", f"expected constant r0 < r+, observed r0 = {dict(r_0)}, r+ = {dict(r_plus)}")
        else:
            flags["jordan_szabo_ranks"] = TheoremFlag(CONSISTENT, f"r0 = {r0} < r+ = {rp}")

    # even rank on the null cone (connected when p, q >= 2)
    if "null" not in analyses or min(p, q) < 2:
        flags["null_even_rank"] = TheoremFlag(NOT_APPLICABLE, "null cone empty or disconnected")
    elif not jordan_null:
        flags["null_even_rank"] = TheoremFlag(NOT_APPLICABLE, "Jordan witness on the null cone: rank need not be constant")
    else:
        a = analyses["null"]
        result = even_rank_check(list(zip(a.samples.vectors, a.operators)), tol)
        even = result.to_json()
        if result.status == VIOLATED:
            violated("null_even_rank", f"constant odd rank {result.rank} on the null cone")
        else:
            flags["null_even_rank"] = TheoremFlag(result.status, f"observed ranks {sorted(set(result.observed))}")

    return TheoremReport((p, q), False, r_plus, r_minus, r_0, identities, cross, verdicts, flags, quarantine, even)
