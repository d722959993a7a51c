"""Command line entry point: ``szabo generate | analyze | dimensions``.

Exit statuses: 0 clean, 2 usage or range error, 3 malformed input file,
4 symmetry validation failure, 5 quarantine-triggering result.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

import numpy as np

from . import fileio
from .pseudo import PseudoSpace, Signature
from .report import (EXIT_OK, EXIT_SCHEMA, EXIT_USAGE, EXIT_VALIDATION, AnalysisConfig,
                     analyze)
from .tensors import AcdtTensor, SymmetryError, acdt_dimension, act_dimension, project_to_acdt, \
    szabo_map_kernel_dim

MAX_GENERATE_M = 6
MAX_DIMENSIONS_M = 5


def _signature(text: str) -> Signature:
    try:
        return Signature.parse(text)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def _emit(text: str, output: str | None) -> None:
    if output:
        Path(output).write_text(text)
    else:
        sys.stdout.write(text)


def generate(sig: Signature, seed: int, scale: float = 1.0, label: str | None = None) -> fileio.TensorFile:
    if sig.m > MAX_GENERATE_M:
        raise ValueError(f"generate supports p + q <= {MAX_GENERATE_M}, got {sig.m}")
    rng = np.random.default_rng(seed)
    T = scale * project_to_acdt(rng.standard_normal((sig.m,) * 5))
    AcdtTensor(T, PseudoSpace.of(sig.p, sig.q), tol=1e-10)
    return fileio.TensorFile(sig, T.ravel(), label=label, seed=seed)


def dimension_table(max_m: int) -> list[dict]:
    if not 1 <= max_m <= MAX_DIMENSIONS_M:
        raise ValueError(f"max_m must lie in 1..{MAX_DIMENSIONS_M}, got {max_m}")
    rows = []
    for m in range(1, max_m + 1):
        kernels = {f"{p},{m - p}": szabo_map_kernel_dim(PseudoSpace.of(p, m - p)) for p in range(m + 1)}
        rows.append({"m": m, "act_dim": act_dimension(m), "acdt_dim": acdt_dimension(m), "szabo_kernel_dims": kernels})
    return rows


def cmd_generate(args) -> int:
    try:
        tf = generate(args.signature, args.seed, args.scale, args.label)
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    _emit(tf.dumps(), args.output)
    return EXIT_OK


def cmd_analyze(args) -> int:
    try:
        tf = fileio.read(args.input)
    except fileio.SchemaError as exc:
        print(f"schema error: {exc}", file=sys.stderr)
        return EXIT_SCHEMA
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    if args.signature is not None and args.signature != tf.signature:
        print(f"schema error: field 'signature': file has {tf.signature}, --signature gave {args.signature}",
              file=sys.stderr)
        return EXIT_SCHEMA
    config = AnalysisConfig(args.samples, args.seed, args.tol, args.bound)
    try:
        rep = analyze(tf, config)
    except SymmetryError as exc:
        print(f"validation error: {exc}", file=sys.stderr)
        return EXIT_VALIDATION
    _emit(rep.to_json() if args.format == "structured" else rep.to_text(), args.output)
    return rep.exit_status


def cmd_dimensions(args) -> int:
    try:
        rows = dimension_table(args.max_m)
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    if args.format == "structured":
        text = json.dumps({"dimensions": rows}, sort_keys=True, indent=2) + "\n"
    else:
        lines = [f"{'m':>2} {'act':>5} {'acdt':>6}  szabo kernel dims by (p,q)"]
        for r in rows:
            ks = " ".join(f"({k})={v}" for k, v in r["szabo_kernel_dims"].items())
            lines.append(f"{r['m']:>2} {r['act_dim']:>5} {r['acdt_dim']:>6}  {ks}")
        text = "\n".join(lines) + "\n"
    _emit(text, args.output)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="szabo", description="Szabó operator analysis for covariant derivative curvature tensors")
    sub = ap.add_subparsers(dest="verb", required=True)

    def common(p):
        p.add_argument("--output", help="write to PATH instead of stdout")
        p.add_argument("--format", choices=("text", "structured"), default="text")

    g = sub.add_parser("generate", help="random projected tensor file")
    g.add_argument("--signature", type=_signature, required=True, metavar="P,Q")
    g.add_argument("--seed", type=int, required=True)
    g.add_argument("--scale", type=float, default=1.0)
    g.add_argument("--label")
    common(g)
    g.set_defaults(func=cmd_generate)

    a = sub.add_parser("analyze", help="validate and analyze a tensor file")
    a.add_argument("input")
    a.add_argument("--signature", type=_signature, metavar="P,Q", help="expected signature (checked against the file)")
    a.add_argument("--samples", type=int, default=100, metavar="N")
    a.add_argument("--seed", type=int, required=True)
    a.add_argument("--tol", type=float, default=1e-9)
    a.add_argument("--bound", type=float, default=10.0, help="Euclidean norm cap for samples")
    common(a)
    a.set_defaults(func=cmd_analyze)

    d = sub.add_parser("dimensions", help="exact dimension table")
    d.add_argument("--max-m", type=int, default=MAX_DIMENSIONS_M)
    common(d)
    d.set_defaults(func=cmd_dimensions)
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    if getattr(args, "samples", 1) < 1:
        print("error: --samples must be positive", file=sys.stderr)
        return EXIT_USAGE
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
