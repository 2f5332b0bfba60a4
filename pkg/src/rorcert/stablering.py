"""The ring S of proper rational functions with all poles in Re(s) < 0.

Imaginary-axis poles count as unstable.  Properness corrections always use
powers of the fixed Hurwitz factor ``s + 1``, so every construction here is
reproducible.  Nothing splits a polynomial into stable/antistable parts; all
tests go through exact gcds, the Routh table and valuations at infinity.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence

from .exactalg import Poly, RatFunc, ZeroDivisorError, lin, poly_gcd, poly_gcd_ext, rf_vinf

__all__ = [
    "NotInSError",
    "Reason",
    "StabilityVerdict",
    "bezout_in_S",
    "count_common_unstable_zero",
    "divides_in_S",
    "gcd_in_S",
    "generate_unit_ideal",
    "in_S",
    "is_hurwitz",
    "is_unit_in_S",
    "poly_bezout_in_S",
    "routh_first_failure",
    "routh_table",
    "unit_equivalent",
    "SPLUS1",
]

SPLUS1 = lin(1)


class NotInSError(ValueError):
    """An argument that must lie in S does not."""


class Reason(str, enum.Enum):
    OK = "ok"
    IMPROPER = "improper"
    UNSTABLE_DENOMINATOR = "unstable_denominator"


@dataclass(frozen=True)
class StabilityVerdict:
    stable: bool
    reason: Reason
    denominator: Optional[Poly] = None
    routh_row: Optional[int] = None

    def __bool__(self):
        return self.stable


def routh_table(p: Poly) -> list[list[Fraction]]:
    """Routh array of ``p``; stops at the first zero pivot.

    Row ``k`` corresponds to ``s^(n-k)``.  If a row would need to divide by a
    zero pivot the table is returned truncated after that row.
    """
    if p.is_zero():
        raise ZeroDivisorError("Routh table of the zero polynomial")
    c = list(reversed(p.coeffs))
    rows = [c[0::2], c[1::2]]
    n = p.degree
    if n == 0:
        return rows[:1]
    width = len(rows[0])
    rows[1] = rows[1] + [Fraction(0)] * (width - len(rows[1]))
    for _ in range(n - 1):
        a, b = rows[-2], rows[-1]
        if b[0] == 0:
            break
        nxt = [(b[0] * a[j + 1] - a[0] * b[j + 1]) / b[0] for j in range(width - 1)]
        nxt.append(Fraction(0))
        rows.append(nxt)
    return rows


def routh_first_failure(p: Poly) -> Optional[int]:
    """Index of the first Routh row whose pivot is zero or of the wrong sign.

    ``None`` means the polynomial is Hurwitz.  A zero pivot (degenerate or
    premature zero row) always counts as failure.
    """
    p = p if p.lc > 0 else -p
    rows = routh_table(p)
    for k, row in enumerate(rows):
        if row[0] <= 0:
            return k
    if len(rows) != p.degree + 1:
        return len(rows)
    return None


def is_hurwitz(p: Poly) -> bool:
    """True iff every root of ``p`` lies in the open left half plane."""
    return routh_first_failure(p) is None


def in_S(f: RatFunc) -> StabilityVerdict:
    if f.is_zero():
        return StabilityVerdict(True, Reason.OK)
    if rf_vinf(f) < 0:
        return StabilityVerdict(False, Reason.IMPROPER, f.den)
    row = routh_first_failure(f.den)
    if row is not None:
        return StabilityVerdict(False, Reason.UNSTABLE_DENOMINATOR, f.den, row)
    return StabilityVerdict(True, Reason.OK)


def _require_S(*fs: RatFunc) -> None:
    for f in fs:
        v = in_S(f)
        if not v:
            raise NotInSError(f"{f} is not in S ({v.reason.value})")


def divides_in_S(a: RatFunc, b: RatFunc) -> bool:
    """True iff ``b/a`` lies in S."""
    if a.is_zero():
        raise ZeroDivisorError("divisibility by zero")
    return in_S(b / a).stable


def is_unit_in_S(f: RatFunc) -> bool:
    if f.is_zero():
        return False
    return f.num.degree == f.den.degree and is_hurwitz(f.num) and is_hurwitz(f.den)


def count_common_unstable_zero(ps: Sequence[Poly]) -> bool:
    """True iff the polynomials share a root in the closed right half plane."""
    if not ps:
        raise ValueError("empty list")
    g = Poly(())
    for p in ps:
        if p.is_zero():
            raise ValueError("zero polynomial in common-zero test")
        g = poly_gcd(g, p)
        if g.degree == 0:
            return False
    return not is_hurwitz(g)


def generate_unit_ideal(hs: Sequence[RatFunc]) -> bool:
    """True iff the elements of S in ``hs`` generate S itself.

    That is: no common zero in the closed RHP and at least one of them
    biproper (no common zero at infinity).
    """
    nz = [h for h in hs if not h.is_zero()]
    if not nz:
        return False
    if min(rf_vinf(h) for h in nz) != 0:
        return False
    return not count_common_unstable_zero([h.num for h in nz])


def gcd_in_S(a: RatFunc, b: RatFunc) -> RatFunc:
    """A greatest common divisor of ``a`` and ``b`` in S, defined up to a unit.

    The representative is ``h/(s+1)^(deg h + c)`` where ``h`` is the
    Q[s]-gcd of the numerators and ``c`` the smaller valuation at infinity.
    """
    _require_S(a, b)
    nz = [f for f in (a, b) if not f.is_zero()]
    if not nz:
        raise ZeroDivisorError("gcd of two zeros")
    h = poly_gcd(a.num, b.num)
    c = min(rf_vinf(f) for f in nz)
    return RatFunc(h, SPLUS1 ** (h.degree + c))


def _as_splus1_form(f: RatFunc) -> tuple[Poly, int, RatFunc]:
    """Write ``f`` in S as ``unit * p/(s+1)^k``; returns ``(p, k, unit)``."""
    k = f.den.degree
    unit = RatFunc(SPLUS1 ** k, f.den)
    return f.num, k, unit


def poly_bezout_in_S(p: Poly, r: Poly, n: int) -> tuple[RatFunc, RatFunc]:
    """Solve ``x*p/(s+1)^n + y*r/(s+1)^n = 1`` with ``x, y`` in S.

    ``p`` and ``r`` have degree at most ``n``, at least one of degree exactly
    ``n``, and no common root in the closed RHP.  The shared stable factor
    ``G = gcd(p, r)`` moves into the denominators; the remaining coprime
    Bezout problem ``alpha*p' + beta*r' = (s+1)^(n+m)`` is solved by extended
    Euclid, reducing the cofactor of the non-biproper side.  ``m`` is the
    smallest value in ``0..n`` that yields proper witnesses.
    """
    if p.degree > n or r.degree > n or max(p.degree, r.degree) != n:
        raise ValueError("degree bound violated in polynomial Bezout problem")
    G = poly_gcd(p, r)
    if not is_hurwitz(G):
        raise ValueError("inputs share a closed right half plane zero")
    p1, r1 = p.exact_div(G), r.exact_div(G)
    _, u, v = poly_gcd_ext(p1, r1)
    # u*p1 + v*r1 = 1 (monic gcd is 1 since G already removed)
    for m in range(n + 1):
        t = SPLUS1 ** (n + m)
        if r.degree == n:
            alpha = (u * t).divrem(r1)[1] if r1.degree > 0 else Poly(())
            beta = (t - alpha * p1).exact_div(r1)
        else:
            beta = (v * t).divrem(p1)[1] if p1.degree > 0 else Poly(())
            alpha = (t - beta * r1).exact_div(p1)
        w = G * SPLUS1 ** m
        x, y = RatFunc(alpha, w), RatFunc(beta, w)
        if x.is_proper() and y.is_proper():
            return x, y
    raise AssertionError("no proper Bezout witnesses found; degree bound argument broken")


def _coprime_bezout(a: RatFunc, b: RatFunc) -> tuple[RatFunc, RatFunc]:
    if is_unit_in_S(a):
        return a.inverse(), RatFunc(0)
    if is_unit_in_S(b):
        return RatFunc(0), b.inverse()
    pa, ka, ua = _as_splus1_form(a)
    pb, kb, ub = _as_splus1_form(b)
    n = max(ka, kb)
    P = pa * SPLUS1 ** (n - ka)
    R = pb * SPLUS1 ** (n - kb)
    x, y = poly_bezout_in_S(P, R, n)
    # a = ua * P/(s+1)^n, so x*P/(s+1)^n = (x/ua)*a
    return x / ua, y / ub


def bezout_in_S(a: RatFunc, b: RatFunc) -> tuple[RatFunc, RatFunc, RatFunc]:
    """Return ``(x, y, g)`` in S with ``x*a + y*b == g`` and ``g`` a gcd of a, b.

    When ``a`` and ``b`` are coprime in S the gcd is normalised to ``1``.
    The identity and membership of ``x``, ``y`` are re-checked before
    returning.
    """
    _require_S(a, b)
    if a.is_zero() and b.is_zero():
        raise ZeroDivisorError("Bezout identity for two zeros")
    gamma = gcd_in_S(a, b)
    if is_unit_in_S(gamma):
        g = RatFunc(1)
        x, y = _coprime_bezout(a, b)
    else:
        g = gamma
        x, y = _coprime_bezout(a / gamma, b / gamma)
    if x * a + y * b != g or not in_S(x) or not in_S(y):
        raise AssertionError("Bezout witnesses failed re-verification")
    return x, y, g


def unit_equivalent(a: RatFunc, b: RatFunc) -> bool:
    """True iff ``a/b`` is a unit of S (both nonzero)."""
    if a.is_zero() or b.is_zero():
        return a.is_zero() and b.is_zero()
    return is_unit_in_S(a / b)
