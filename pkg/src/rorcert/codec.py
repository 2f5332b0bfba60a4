"""JSON encoding of rational functions, matrices and problem files.

A rational function is either an expression string (see :mod:`rorcert.parse`)
or ``{"num": [c0, c1, ...], "den": [c0, ...]}`` with ascending coefficients
given as integers or ``"p/q"`` strings.  Both are accepted on input; output
always uses the canonical coefficient form.
"""

from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Optional

from .exactalg import Poly, RatFunc, ZeroDivisorError
from .parse import ParseError, parse_ratfunc
from .ratmat import DimensionError, RatMat

__all__ = [
    "FORMAT",
    "InputError",
    "ProblemFile",
    "canonical_json",
    "decode_matrix",
    "decode_ratfunc",
    "digest",
    "encode_matrix",
    "encode_ratfunc",
    "load_problem",
]

FORMAT = 1


class InputError(ValueError):
    """Malformed input document."""


def _enc_coeff(c: Fraction):
    return c.numerator if c.denominator == 1 else f"{c.numerator}/{c.denominator}"


def _dec_coeff(c) -> Fraction:
    if isinstance(c, bool) or not isinstance(c, (int, str)):
        raise InputError(f"coefficient must be an integer or 'p/q' string, got {c!r}")
    try:
        return Fraction(c) if isinstance(c, int) else Fraction(c.strip())
    except (ValueError, ZeroDivisionError) as exc:
        raise InputError(f"bad rational coefficient {c!r}") from exc


def encode_ratfunc(f: RatFunc) -> dict:
    return {"num": [_enc_coeff(c) for c in f.num.coeffs], "den": [_enc_coeff(c) for c in f.den.coeffs]}


def decode_ratfunc(obj: Any) -> RatFunc:
    if isinstance(obj, int) and not isinstance(obj, bool):
        return RatFunc(obj)
    if isinstance(obj, str):
        try:
            return parse_ratfunc(obj)
        except ParseError as exc:
            raise InputError(str(exc)) from exc
    if isinstance(obj, dict):
        if set(obj) != {"num", "den"}:
            raise InputError(f"rational function object needs exactly 'num' and 'den', got {sorted(obj)}")
        num, den = obj["num"], obj["den"]
        if not isinstance(num, list) or not isinstance(den, list):
            raise InputError("'num' and 'den' must be coefficient lists")
        try:
            return RatFunc(Poly([_dec_coeff(c) for c in num]), Poly([_dec_coeff(c) for c in den]))
        except ZeroDivisorError as exc:
            raise InputError("zero denominator") from exc
    raise InputError(f"cannot read a rational function from {obj!r}")


def encode_matrix(A: RatMat) -> list:
    return [[encode_ratfunc(e) for e in A.row(i)] for i in range(A.rows)]


def decode_matrix(obj: Any, name: str = "matrix") -> RatMat:
    if not isinstance(obj, list) or not obj or not all(isinstance(r, list) for r in obj):
        raise InputError(f"{name} must be a nonempty list of rows")
    try:
        return RatMat.from_rows([[decode_ratfunc(x) for x in row] for row in obj])
    except DimensionError as exc:
        raise InputError(f"{name}: {exc}") from exc


def canonical_json(obj: Any) -> str:
    return json.dumps(obj, sort_keys=True, separators=(",", ":"), ensure_ascii=True)


def digest(obj: Any) -> str:
    return "sha256:" + hashlib.sha256(canonical_json(obj).encode()).hexdigest()


@dataclass
class ProblemFile:
    plant: RatMat
    controller: RatMat
    generator: RatMat
    disturbance_shaping: Optional[RatMat] = None
    name: str = ""
    notes: str = ""
    rcf: Optional[dict] = None
    raw: dict = field(default_factory=dict, repr=False)

    def to_json(self) -> dict:
        doc = {
            "format": FORMAT,
            "name": self.name,
            "notes": self.notes,
            "plant": encode_matrix(self.plant),
            "controller": encode_matrix(self.controller),
            "generator": encode_matrix(self.generator),
        }
        if self.disturbance_shaping is not None:
            doc["disturbance_shaping"] = encode_matrix(self.disturbance_shaping)
        if self.rcf is not None:
            doc["rcf"] = {k: encode_matrix(v) for k, v in self.rcf.items()}
        return doc

    def digest(self) -> str:
        return digest(self.to_json())


def _check_format(doc: dict) -> None:
    fmt = doc.get("format", FORMAT)
    if fmt != FORMAT:
        raise InputError(f"unsupported format {fmt!r}, expected {FORMAT}")


def decode_rcf(obj: Any) -> dict:
    if not isinstance(obj, dict) or not {"N", "D"} <= set(obj):
        raise InputError("rcf needs at least 'N' and 'D'")
    keys = [k for k in ("N", "D", "X", "Y") if k in obj]
    if keys not in (["N", "D"], ["N", "D", "X", "Y"]):
        raise InputError("rcf must give N, D and optionally both X and Y")
    return {k: decode_matrix(obj[k], f"rcf.{k}") for k in keys}


def problem_from_json(doc: Any) -> ProblemFile:
    if not isinstance(doc, dict):
        raise InputError("problem file must be a JSON object")
    _check_format(doc)
    for key in ("plant", "controller", "generator"):
        if key not in doc:
            raise InputError(f"problem file is missing {key!r}")
    P = decode_matrix(doc["plant"], "plant")
    C = decode_matrix(doc["controller"], "controller")
    G = decode_matrix(doc["generator"], "generator")
    Q = decode_matrix(doc["disturbance_shaping"], "disturbance_shaping") if doc.get("disturbance_shaping") else None
    n, m = P.shape
    if C.shape != (m, n):
        raise InputError(f"controller must be {m}x{n} for a {n}x{m} plant, got {C.rows}x{C.cols}")
    if G.rows != n:
        raise InputError(f"generator must have {n} rows, got {G.rows}")
    if Q is not None and Q.shape != (m, n):
        raise InputError(f"disturbance_shaping must be {m}x{n}, got {Q.rows}x{Q.cols}")
    rcf = decode_rcf(doc["rcf"]) if doc.get("rcf") else None
    return ProblemFile(P, C, G, Q, str(doc.get("name", "")), str(doc.get("notes", "")), rcf, doc)


def load_json(path: str) -> Any:
    try:
        with open(path) as fh:
            return json.load(fh)
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc.strerror}") from exc
    except json.JSONDecodeError as exc:
        raise InputError(f"{path} is not valid JSON: {exc}") from exc


def load_problem(path: str) -> ProblemFile:
    return problem_from_json(load_json(path))
