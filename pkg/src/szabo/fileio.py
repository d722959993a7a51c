"""Plain-text exchange format for rank-5 coefficient arrays.

Layout::

    # szabo tensor file
    format_version: 1
    signature: 2,3
    index_order: row-major (x,y,z,w;v), flat = (((x*m + y)*m + z)*m + w)*m + v
    label: optional free text
    seed: optional integer
    coeffs:
    <one float per line, m^5 lines>

Floats are written with ``repr`` so a write/read cycle is lossless.
"""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .pseudo import Signature

FORMAT_VERSION = "1"
SUPPORTED_VERSIONS = ("1",)
INDEX_ORDER = "row-major (x,y,z,w;v), flat = (((x*m + y)*m + z)*m + w)*m + v"
MAGIC = "# szabo tensor file"
REQUIRED = ("format_version", "signature", "index_order")
OPTIONAL = ("label", "seed")


class SchemaError(ValueError):
    def __init__(self, message: str, line: int | None = None, field: str | None = None):
        where = []
        if line is not None:
            where.append(f"line {line}")
        if field is not None:
            where.append(f"field {field!r}")
        prefix = f"{', '.join(where)}: " if where else ""
        super().__init__(prefix + message)
        self.line = line
        self.field = field


@dataclass(frozen=True, eq=False)
class TensorFile:
    signature: Signature
    coeffs: np.ndarray  # flat, length m^5
    format_version: str = FORMAT_VERSION
    label: str | None = None
    seed: int | None = None

    def __post_init__(self):
        c = np.asarray(self.coeffs, dtype=float).ravel()
        m = self.signature.m
        if c.size != m**5:
            raise SchemaError(f"expected {m**5} coefficients for m={m}, got {c.size}", field="coeffs")
        if self.format_version not in SUPPORTED_VERSIONS:
            raise SchemaError(f"unsupported format_version {self.format_version!r}", field="format_version")
        object.__setattr__(self, "coeffs", c)

    @property
    def array(self) -> np.ndarray:
        return self.coeffs.reshape((self.signature.m,) * 5)

    def dumps(self) -> str:
        s = self.signature
        lines = [MAGIC, f"format_version: {self.format_version}", f"signature: {s.p},{s.q}",
                 f"index_order: {INDEX_ORDER}"]
        if self.label is not None:
            lines.append(f"label: {self.label}")
        if self.seed is not None:
            lines.append(f"seed: {self.seed}")
        lines.append("coeffs:")
        lines += [repr(float(x)) for x in self.coeffs]
        return "\n".join(lines) + "\n"

    def write(self, path) -> None:
        Path(path).write_text(self.dumps())


def loads(text: str) -> TensorFile:
    lines = text.splitlines()
    if not lines or lines[0].strip() != MAGIC:
        raise SchemaError(f"first line must be {MAGIC!r}", line=1)
    header = {}
    k = 1
    while k < len(lines):
        raw = lines[k].strip()
        k += 1
        if not raw or raw.startswith("#"):
            continue
        if raw == "coeffs:":
            break
        key, sep, value = raw.partition(":")
        key = key.strip()
        if not sep:
            raise SchemaError(f"expected 'key: value', got {raw!r}", line=k)
        if key not in REQUIRED + OPTIONAL:
            raise SchemaError(f"unknown header field {key!r}", line=k, field=key)
        if key in header:
            raise SchemaError("duplicate header field", line=k, field=key)
        header[key] = (value.strip(), k)
    else:
        raise SchemaError("missing 'coeffs:' section", line=len(lines), field="coeffs")
    for key in REQUIRED:
        if key not in header:
            raise SchemaError("missing required header field", field=key)

    version, ln = header["format_version"]
    if version not in SUPPORTED_VERSIONS:
        raise SchemaError(f"unsupported format_version {version!r}", line=ln, field="format_version")
    text_sig, ln = header["signature"]
    try:
        sig = Signature.parse(text_sig)
    except ValueError as exc:
        raise SchemaError(str(exc), line=ln, field="signature") from None
    order, ln = header["index_order"]
    if order != INDEX_ORDER:
        raise SchemaError(f"index_order must read {INDEX_ORDER!r}", line=ln, field="index_order")
    seed = None
    if "seed" in header:
        text_seed, ln = header["seed"]
        try:
            seed = int(text_seed)
        except ValueError:
            raise SchemaError(f"seed must be an integer, got {text_seed!r}", line=ln, field="seed") from None
    label = header["label"][0] if "label" in header else None

    vals = []
    for j in range(k, len(lines)):
        raw = lines[j].strip()
        if not raw:
            continue
        try:
            x = float(raw)
        except ValueError:
            raise SchemaError(f"not a number: {raw!r}", line=j + 1, field="coeffs") from None
        if not np.isfinite(x):
            raise SchemaError(f"non-finite coefficient {raw!r}", line=j + 1, field="coeffs")
        vals.append(x)
    need = sig.m**5
    if len(vals) != need:
        raise SchemaError(f"expected {need} coefficients for m={sig.m}, got {len(vals)}",
                          line=len(lines), field="coeffs")
    return TensorFile(sig, np.array(vals), version, label, seed)


def read(path) -> TensorFile:
    try:
        text = Path(path).read_text()
    except UnicodeDecodeError as exc:
        raise SchemaError(f"not a text file: {exc}") from None
    return loads(text)
