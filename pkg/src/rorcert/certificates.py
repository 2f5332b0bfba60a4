"""Serialized certificates and their independent checker.

The checker only uses exact arithmetic, matrix algebra and S-membership
tests.  It never calls into the regulation or ideal code that produced the
certificates, so a passing check does not depend on that code being right.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Any, Callable

from .codec import FORMAT, InputError, decode_matrix, decode_ratfunc, encode_matrix, encode_ratfunc
from .exactalg import RatFunc
from .ratmat import DimensionError, RatMat, SingularMatrixError, mat_inv, mat_is_stable
from .stablering import generate_unit_ideal, in_S

__all__ = [
    "CheckResult",
    "bezout_certificate",
    "coprime_certificate",
    "ideal_certificate",
    "imp_certificate",
    "rcf_certificate",
    "verify_document",
    "verify_one",
]


def imp_certificate(theta: RatFunc, A: RatMat, B: RatMat, C: RatMat, entry=None) -> dict:
    """``theta*I = A + B*C`` with ``A``, ``B`` stable.  ``entry`` is 1-based."""
    return {
        "kind": "imp",
        "entry": list(entry) if entry is not None else None,
        "theta": encode_ratfunc(theta),
        "controller": encode_matrix(C),
        "A": encode_matrix(A),
        "B": encode_matrix(B),
    }


def bezout_certificate(a: RatFunc, b: RatFunc, x: RatFunc, y: RatFunc, g: RatFunc) -> dict:
    return {"kind": "bezout", **{k: encode_ratfunc(v) for k, v in dict(a=a, b=b, x=x, y=y, g=g).items()}}


def coprime_certificate(g: RatFunc, N: RatFunc, D: RatFunc, x: RatFunc, y: RatFunc) -> dict:
    return {"kind": "scalar_coprime", **{k: encode_ratfunc(v) for k, v in dict(g=g, N=N, D=D, x=x, y=y).items()}}


def ideal_certificate(gens, g: RatFunc) -> dict:
    return {"kind": "ideal_generator", "gens": [encode_ratfunc(f) for f in gens], "g": encode_ratfunc(g)}


def rcf_certificate(C: RatMat, N: RatMat, D: RatMat, X: RatMat, Y: RatMat) -> dict:
    return {"kind": "rcf", **{k: encode_matrix(v) for k, v in dict(C=C, N=N, D=D, X=X, Y=Y).items()}}


@dataclass
class CheckResult:
    index: int
    kind: str
    ok: bool
    reason: str = ""


def _stable(name: str, M: RatMat) -> list[str]:
    ok, bad = mat_is_stable(M)
    return [] if ok else [f"{name} not stable at {[(i + 1, j + 1) for (i, j), _ in bad]}"]


def _in_S(name: str, f: RatFunc) -> list[str]:
    return [] if in_S(f) else [f"{name} not in S"]


def _check_imp(c: dict) -> list[str]:
    theta = decode_ratfunc(c["theta"])
    C = decode_matrix(c["controller"], "controller")
    A = decode_matrix(c["A"], "A")
    B = decode_matrix(c["B"], "B")
    problems = _stable("A", A) + _stable("B", B)
    try:
        residual = RatMat.identity(A.rows) * theta - A - B @ C
    except DimensionError as exc:
        return problems + [f"dimension mismatch: {exc}"]
    if not residual.is_zero():
        problems.append("theta*I - A - B*C is not zero")
    return problems


def _check_bezout(c: dict) -> list[str]:
    a, b, x, y, g = (decode_ratfunc(c[k]) for k in "abxyg")
    problems = []
    for name, v in (("a", a), ("b", b), ("x", x), ("y", y)):
        problems += _in_S(name, v)
    if x * a + y * b != g:
        problems.append("x*a + y*b != g")
    if not g.is_zero() and not (in_S(a / g) and in_S(b / g)):
        problems.append("g does not divide a and b in S")
    return problems


def _check_coprime(c: dict) -> list[str]:
    g, N, D, x, y = (decode_ratfunc(c[k]) for k in ("g", "N", "D", "x", "y"))
    problems = []
    for name, v in (("N", N), ("D", D), ("x", x), ("y", y)):
        problems += _in_S(name, v)
    if D.is_zero():
        return problems + ["D is zero"]
    if N / D != g:
        problems.append("N/D != g")
    if x * N + y * D != RatFunc(1):
        problems.append("x*N + y*D != 1")
    return problems


def _check_ideal(c: dict) -> list[str]:
    gens = [decode_ratfunc(f) for f in c["gens"]]
    g = decode_ratfunc(c["g"])
    if g.is_zero():
        return ["generator is zero"]
    qs = [f / g for f in gens]
    problems = [f"gens[{i}]/g not in S" for i, q in enumerate(qs) if not in_S(q)]
    if not problems and not generate_unit_ideal(qs):
        problems.append("quotients do not generate the unit ideal")
    return problems


def _check_rcf(c: dict) -> list[str]:
    C, N, D, X, Y = (decode_matrix(c[k], k) for k in ("C", "N", "D", "X", "Y"))
    problems = _stable("N", N) + _stable("D", D) + _stable("X", X) + _stable("Y", Y)
    try:
        if N @ mat_inv(D) != C:
            problems.append("N D^-1 != C")
        if X @ N + Y @ D != RatMat.identity(D.rows):
            problems.append("X N + Y D != I")
    except (SingularMatrixError, DimensionError) as exc:
        problems.append(str(exc))
    return problems


_CHECKERS: dict[str, Callable[[dict], list[str]]] = {
    "imp": _check_imp,
    "bezout": _check_bezout,
    "scalar_coprime": _check_coprime,
    "ideal_generator": _check_ideal,
    "rcf": _check_rcf,
}


def verify_one(index: int, cert: Any) -> CheckResult:
    if not isinstance(cert, dict) or cert.get("kind") not in _CHECKERS:
        raise InputError(f"certificate {index} has unknown kind")
    kind = cert["kind"]
    try:
        problems = _CHECKERS[kind](cert)
    except KeyError as exc:
        problems = [f"missing field {exc}"]
    except InputError as exc:
        problems = [f"malformed: {exc}"]
    return CheckResult(index, kind, not problems, "; ".join(problems))


def verify_document(doc: Any) -> list[CheckResult]:
    """Check every certificate in a certificate file or a verdict report."""
    if not isinstance(doc, dict):
        raise InputError("certificate document must be a JSON object")
    if doc.get("format", FORMAT) != FORMAT:
        raise InputError(f"unsupported format {doc.get('format')!r}")
    certs = doc.get("certificates")
    if not isinstance(certs, list) or not certs:
        raise InputError("document has no certificates")
    return [verify_one(i, c) for i, c in enumerate(certs)]
