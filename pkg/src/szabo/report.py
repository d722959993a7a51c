"""Analysis pipeline and its deterministic JSON report."""

from __future__ import annotations

import json
from dataclasses import asdict, dataclass

import jsonschema

from .fileio import TensorFile
from .nullcone import nullcone_engine
from .pseudo import PreconditionError, PseudoSpace
from .spectral import CONSISTENT, NOT_APPLICABLE, VIOLATED, theorem_report
from .tensors import AcdtTensor, validate_acdt

SCHEMA_VERSION = "1"

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_SCHEMA = 3
EXIT_VALIDATION = 4
EXIT_QUARANTINE = 5

_status = {"enum": [CONSISTENT, VIOLATED, NOT_APPLICABLE]}
_num = {"type": "number"}
_verdict = {
    "type": "object",
    "required": ["status", "cone", "kind", "compare_tol", "n_compared", "witness", "note"],
    "properties": {
        "status": {"enum": ["no-counterexample", "witness-found"]},
        "cone": {"enum": ["spacelike", "timelike", "null"]},
        "kind": {"enum": ["spectrum", "jordan"]},
        "compare_tol": _num,
        "n_compared": {"type": "integer", "minimum": 0},
        "witness": {"type": ["object", "null"]},
        "note": {"type": "string"},
    },
}
_ranks = {"type": "object", "additionalProperties": {"type": "integer", "minimum": 0}}

REPORT_SCHEMA = {
    "$schema": "https://json-schema.org/draft/2020-12/schema",
    "title": "szabo analysis report",
    "type": "object",
    "required": ["schema_version", "format_version", "signature", "label", "config", "symmetry",
                 "theorem", "nullcone", "quarantine", "summary"],
    "additionalProperties": False,
    "properties": {
        "schema_version": {"const": SCHEMA_VERSION},
        "format_version": {"type": "string"},
        "signature": {"type": "array", "items": {"type": "integer", "minimum": 0}, "minItems": 2, "maxItems": 2},
        "label": {"type": ["string", "null"]},
        "config": {
            "type": "object",
            "required": ["samples", "seed", "tol", "euclidean_bound"],
            "properties": {
                "samples": {"type": "integer", "minimum": 1},
                "seed": {"type": "integer"},
                "tol": _num,
                "euclidean_bound": _num,
            },
        },
        "symmetry": {
            "type": "object",
            "required": ["identities", "relative"],
            "properties": {"identities": {"type": "object", "additionalProperties": _num}, "relative": _num},
        },
        "theorem": {
            "type": "object",
            "required": ["signature", "tensor_zero", "r_plus", "r_minus", "r_0", "identities",
                         "cross_cone", "verdicts", "flags", "even_rank", "quarantine"],
            "properties": {
                "r_plus": _ranks,
                "r_minus": _ranks,
                "r_0": _ranks,
                "tensor_zero": {"type": "boolean"},
                "identities": {"type": "object"},
                "cross_cone": {"type": "object"},
                "verdicts": {"type": "object", "additionalProperties": {
                    "type": "object", "additionalProperties": _verdict}},
                "flags": {"type": "object", "additionalProperties": {
                    "type": "object",
                    "required": ["status", "explanation", "candidate"],
                    "properties": {"status": _status, "explanation": {"type": "string"},
                                   "candidate": {"type": "boolean"}},
                }},
                "even_rank": {"type": ["object", "null"]},
                "quarantine": {"type": "array"},
            },
        },
        "nullcone": {"type": "object", "required": ["applicable"]},
        "quarantine": {"type": "array", "items": {"type": "object", "required": ["theorem", "reason"]}},
        "summary": {
            "type": "object",
            "required": ["outcome", "exit_status", "flags", "constancy"],
            "properties": {
                "outcome": {"enum": ["clean", "quarantine"]},
                "exit_status": {"enum": [EXIT_OK, EXIT_QUARANTINE]},
                "flags": {"type": "object", "additionalProperties": _status},
                "constancy": {"type": "object"},
            },
        },
    },
}


def validate_report(doc: dict) -> None:
    """Raise ``jsonschema.ValidationError`` if ``doc`` breaks the report schema."""
    jsonschema.validate(doc, REPORT_SCHEMA)


@dataclass
class AnalysisConfig:
    samples: int = 100
    seed: int = 0
    tol: float = 1e-9
    euclidean_bound: float = 10.0


@dataclass
class AnalysisReport:
    format_version: str
    signature: list
    label: str | None
    config: dict
    symmetry: dict
    theorem: dict
    nullcone: dict
    quarantine: list
    summary: dict
    schema_version: str = SCHEMA_VERSION

    @property
    def exit_status(self) -> int:
        return self.summary["exit_status"]

    def to_dict(self) -> dict:
        return asdict(self)

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True, indent=2, allow_nan=False) + "\n"

    @classmethod
    def from_json(cls, text: str) -> "AnalysisReport":
        doc = json.loads(text)
        validate_report(doc)
        return cls(**doc)

    def to_text(self) -> str:
        s = self.summary
        t = self.theorem
        lines = [
            f"signature ({self.signature[0]},{self.signature[1]})  label={self.label}",
            f"samples={self.config['samples']} seed={self.config['seed']} tol={self.config['tol']:g} "
            f"bound={self.config['euclidean_bound']:g}",
            "symmetry residuals: " + ", ".join(f"{k}={v:.2e}" for k, v in sorted(self.symmetry["identities"].items())),
            f"tensor zero: {t['tensor_zero']}",
            f"ranks r+={t['r_plus']} r-={t['r_minus']} r0={t['r_0']}",
        ]
        for cone, kinds in sorted(s["constancy"].items()):
            lines.append(f"  {cone}: " + ", ".join(f"{k} {v}" for k, v in sorted(kinds.items())))
        for name, flag in sorted(t["flags"].items()):
            mark = " [candidate]" if flag["candidate"] else ""
            lines.append(f"  {name:20s} {flag['status']}{mark}: {flag['explanation']}")
        nc = self.nullcone
        if nc.get("applicable"):
            v = nc["verdict"]
            lines.append(f"null cone: divisible={v['algebraic']} sampled={v['sampled']} agree={v['agree']}")
        else:
            lines.append(f"null cone: {nc.get('reason', 'not applicable')}")
        lines.append(f"outcome: {s['outcome']} (exit {s['exit_status']})")
        return "\n".join(lines) + "\n"


def analyze(tf: TensorFile, config: AnalysisConfig) -> AnalysisReport:
    """Validate, run the theorem report and the null-cone pipeline.

    Raises ``SymmetryError`` when the coefficients fail validation at ``config.tol``.
    """
    space = PseudoSpace.of(tf.signature.p, tf.signature.q)
    residual = validate_acdt(tf.array)
    RR = AcdtTensor(tf.array, space, tol=config.tol)
    rep = theorem_report(RR, config.samples, config.seed, config.tol, config.euclidean_bound)
    try:
        nc = nullcone_engine(RR, config.tol, config.samples, config.seed)
    except PreconditionError as exc:
        nc = {"applicable": False, "reason": str(exc)}
    theorem = rep.to_json()
    quarantine = list(theorem["quarantine"])
    if nc.get("applicable") and not nc["verdict"]["agree"] and nc["verdict"]["form_irreducible"]:
        quarantine.append({"theorem": "nullcone", "reason": "divisibility and sampled null-cone vanishing disagree"})
    status = EXIT_QUARANTINE if quarantine else EXIT_OK
    summary = {
        "outcome": "quarantine" if quarantine else "clean",
        "exit_status": status,
        "flags": {k: f["status"] for k, f in theorem["flags"].items()},
        "constancy": {c: {k: v["status"] for k, v in d.items()} for c, d in theorem["verdicts"].items()},
    }
    return AnalysisReport(
        format_version=tf.format_version,
        signature=[tf.signature.p, tf.signature.q],
        label=tf.label,
        config=asdict(config),
        symmetry=residual.to_json(),
        theorem=theorem,
        nullcone=nc,
        quarantine=quarantine,
        summary=summary,
    )
