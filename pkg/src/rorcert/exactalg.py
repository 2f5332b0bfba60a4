"""Exact univariate polynomials and rational functions over the rationals.

Coefficients are exact rationals (FLINT ``fmpq`` internally, exposed as
:class:`fractions.Fraction`); nothing in here ever touches a float.  Both :class:`Poly` and :class:`RatFunc` are immutable and hashable, and
a :class:`RatFunc` is always kept in canonical form (coprime numerator and
denominator, monic denominator) so that ``==`` is a structural comparison.
"""

from __future__ import annotations

from fractions import Fraction
from numbers import Rational
from typing import Iterable, Union

from flint import fmpq, fmpq_poly

__all__ = [
    "Poly",
    "RatFunc",
    "ZeroDivisorError",
    "as_fraction",
    "poly_gcd",
    "poly_gcd_ext",
    "poly_lcm",
    "rf_reduce",
    "rf_vinf",
    "S",
]

Scalar = Union[int, Fraction]


class ZeroDivisorError(ZeroDivisionError):
    """Division by the zero polynomial or the zero rational function."""


def as_fraction(c) -> Fraction:
    if isinstance(c, Fraction):
        return c
    if isinstance(c, (int, Rational)):
        return Fraction(c)
    if isinstance(c, str):
        return Fraction(c.strip())
    raise TypeError(f"not an exact rational: {c!r}")


def _to_fmpq(c) -> fmpq:
    c = as_fraction(c)
    return fmpq(c.numerator, c.denominator)


def _to_fraction(c: fmpq) -> Fraction:
    return Fraction(int(c.p), int(c.q))


class Poly:
    """Polynomial in ``s`` with rational coefficients, lowest degree first.

    Backed by FLINT's ``fmpq_poly``; ``coeffs`` exposes the coefficients as a
    tuple of :class:`~fractions.Fraction`.  The zero polynomial has an empty
    coefficient tuple and degree ``-1``.
    """

    __slots__ = ("_p", "_coeffs", "_hash")

    def __init__(self, coeffs: Iterable = ()):
        if isinstance(coeffs, fmpq_poly):
            self._p = coeffs
        else:
            self._p = fmpq_poly([_to_fmpq(c) for c in coeffs])
        self._coeffs = None
        self._hash = None

    @classmethod
    def _wrap(cls, p: fmpq_poly) -> "Poly":
        out = object.__new__(cls)
        out._p = p
        out._coeffs = None
        out._hash = None
        return out

    @classmethod
    def const(cls, c) -> "Poly":
        return cls((c,))

    @classmethod
    def monomial(cls, k: int, c=1) -> "Poly":
        return cls([0] * k + [c])

    @classmethod
    def from_roots(cls, roots: Iterable) -> "Poly":
        p = fmpq_poly([1])
        for r in roots:
            p = p * fmpq_poly([-_to_fmpq(r), 1])
        return cls._wrap(p)

    # -- inspection ---------------------------------------------------------

    @property
    def coeffs(self) -> tuple:
        if self._coeffs is None:
            self._coeffs = tuple(_to_fraction(c) for c in self._p.coeffs())
        return self._coeffs

    @property
    def degree(self) -> int:
        return self._p.degree()

    def is_zero(self) -> bool:
        return self._p.degree() < 0

    def is_const(self) -> bool:
        return self._p.degree() <= 0

    @property
    def lc(self) -> Fraction:
        d = self._p.degree()
        return _to_fraction(self._p[d]) if d >= 0 else Fraction(0)

    def __getitem__(self, k: int) -> Fraction:
        return _to_fraction(self._p[k]) if 0 <= k <= self._p.degree() else Fraction(0)

    def __bool__(self) -> bool:
        return self._p.degree() >= 0

    def __call__(self, x):
        if isinstance(x, (int, Fraction)):
            return _to_fraction(self._p(_to_fmpq(x)))
        acc = 0
        for c in reversed(self.coeffs):
            acc = acc * x + c
        return acc

    def monic(self) -> "Poly":
        d = self._p.degree()
        if d < 0 or self._p[d] == 1:
            return self
        return Poly._wrap(self._p / self._p[d])

    def derivative(self) -> "Poly":
        return Poly._wrap(self._p.derivative())

    # -- arithmetic ---------------------------------------------------------

    @staticmethod
    def _lift(other):
        if isinstance(other, Poly):
            return other._p
        if isinstance(other, (int, Fraction)):
            return fmpq_poly([_to_fmpq(other)])
        return NotImplemented

    def __add__(self, other):
        o = Poly._lift(other)
        if o is NotImplemented:
            return o
        return Poly._wrap(self._p + o)

    __radd__ = __add__

    def __neg__(self):
        return Poly._wrap(-self._p)

    def __sub__(self, other):
        o = Poly._lift(other)
        if o is NotImplemented:
            return o
        return Poly._wrap(self._p - o)

    def __rsub__(self, other):
        o = Poly._lift(other)
        if o is NotImplemented:
            return o
        return Poly._wrap(o - self._p)

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return Poly._wrap(self._p * _to_fmpq(other))
        if not isinstance(other, Poly):
            return NotImplemented
        return Poly._wrap(self._p * other._p)

    __rmul__ = __mul__

    def __pow__(self, k: int) -> "Poly":
        if k < 0:
            raise ValueError("negative exponent")
        return Poly._wrap(self._p ** k)

    def divrem(self, other: "Poly") -> tuple["Poly", "Poly"]:
        """Return ``(q, r)`` with ``self == other*q + r`` and ``deg r < deg other``."""
        if other.is_zero():
            raise ZeroDivisorError("polynomial division by zero")
        q, r = divmod(self._p, other._p)
        return Poly._wrap(q), Poly._wrap(r)

    def __floordiv__(self, other):
        return self.divrem(other)[0]

    def __mod__(self, other):
        return self.divrem(other)[1]

    def exact_div(self, other: "Poly") -> "Poly":
        q, r = self.divrem(other)
        if r:
            raise ValueError(f"{other} does not divide {self}")
        return q

    # -- comparison / display ------------------------------------------------

    def __eq__(self, other):
        o = Poly._lift(other)
        if o is NotImplemented:
            return o
        return self._p == o

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(("Poly", self.coeffs))
        return self._hash

    def __repr__(self):
        return f"Poly({[str(c) for c in self.coeffs]})"

    def __str__(self):
        return format_poly(self)


def _fmt_coeff(c: Fraction) -> str:
    return str(c.numerator) if c.denominator == 1 else f"({c})"


def format_poly(p: Poly, var: str = "s") -> str:
    """Render ``p`` in the expression grammar accepted by the parser."""
    if not p.coeffs:
        return "0"
    terms = []
    for k in range(p.degree, -1, -1):
        c = p.coeffs[k]
        if not c:
            continue
        sign = "-" if c < 0 else "+"
        a = -c if c < 0 else c
        if k == 0:
            body = _fmt_coeff(a)
        else:
            mono = var if k == 1 else f"{var}^{k}"
            body = mono if a == 1 else f"{_fmt_coeff(a)}*{mono}"
        terms.append((sign, body))
    first_sign, first_body = terms[0]
    out = ("-" if first_sign == "-" else "") + first_body
    for sign, body in terms[1:]:
        out += f" {sign} {body}"
    return out


S = Poly((0, 1))
ONE = Poly((1,))
ZERO = Poly(())


def poly_gcd(a: Poly, b: Poly) -> Poly:
    """Monic gcd over Q[s]; ``gcd(0, 0)`` is the zero polynomial."""
    if a.is_zero():
        return b.monic()
    if b.is_zero():
        return a.monic()
    return Poly._wrap(a._p.gcd(b._p))


def poly_gcd_ext(a: Poly, b: Poly) -> tuple[Poly, Poly, Poly]:
    """Extended gcd: ``(g, u, v)`` with ``g = u*a + v*b``, ``g`` monic.

    For nonconstant inputs the cofactors obey ``deg u < deg b - deg g`` and
    ``deg v < deg a - deg g``.
    """
    if a.is_zero() and b.is_zero():
        raise ZeroDivisorError("gcd of two zero polynomials")
    if a.is_zero():
        lc = b._p[b.degree]
        return Poly._wrap(b._p / lc), ZERO, Poly._wrap(fmpq_poly([1 / lc]))
    if b.is_zero():
        lc = a._p[a.degree]
        return Poly._wrap(a._p / lc), Poly._wrap(fmpq_poly([1 / lc])), ZERO
    g, u, v = a._p.xgcd(b._p)
    return Poly._wrap(g), Poly._wrap(u), Poly._wrap(v)


def poly_lcm(a: Poly, b: Poly) -> Poly:
    if not a or not b:
        return ZERO
    return (a * b).exact_div(poly_gcd(a, b)).monic()


class RatFunc:
    """Reduced rational function ``num/den`` in ``s``.

    Canonical form: ``gcd(num, den) = 1`` and ``den`` monic.  The zero
    function is ``0/1``.
    """

    __slots__ = ("num", "den", "_hash")

    def __init__(self, num=0, den=1):
        if not isinstance(num, Poly):
            num = Poly.const(num)
        if not isinstance(den, Poly):
            den = Poly.const(den)
        num, den = _canonical(num, den)
        self.num = num
        self.den = den
        self._hash = None

    @classmethod
    def _raw(cls, num: Poly, den: Poly) -> "RatFunc":
        f = object.__new__(cls)
        f.num = num
        f.den = den
        f._hash = None
        return f

    @classmethod
    def const(cls, c) -> "RatFunc":
        return cls._raw(Poly.const(c), ONE)

    @classmethod
    def poly(cls, p: Poly) -> "RatFunc":
        return cls._raw(p, ONE)

    def is_zero(self) -> bool:
        return self.num.is_zero()

    def __bool__(self):
        return not self.num.is_zero()

    def vinf(self) -> int:
        return rf_vinf(self)

    def is_proper(self) -> bool:
        return self.is_zero() or self.den.degree >= self.num.degree

    def __call__(self, x):
        d = self.den(x)
        if d == 0:
            raise ZeroDivisorError(f"pole at {x}")
        return self.num(x) / d

    # -- arithmetic ---------------------------------------------------------

    @staticmethod
    def _lift(other):
        if isinstance(other, RatFunc):
            return other
        if isinstance(other, Poly):
            return RatFunc._raw(other, ONE)
        if isinstance(other, (int, Fraction)):
            return RatFunc.const(other)
        return NotImplemented

    def __add__(self, other):
        other = RatFunc._lift(other)
        if other is NotImplemented:
            return other
        if not other.num:
            return self
        if not self.num:
            return other
        if self.den == other.den:
            return RatFunc(self.num + other.num, self.den)
        g = poly_gcd(self.den, other.den)
        if g.degree == 0:
            return RatFunc(self.num * other.den + other.num * self.den, self.den * other.den)
        bd = other.den.exact_div(g)
        ad = self.den.exact_div(g)
        return RatFunc(self.num * bd + other.num * ad, self.den * bd)

    __radd__ = __add__

    def __neg__(self):
        return RatFunc._raw(-self.num, self.den)

    def __sub__(self, other):
        other = RatFunc._lift(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        other = RatFunc._lift(other)
        if other is NotImplemented:
            return other
        if not self.num or not other.num:
            return RatFunc._raw(ZERO, ONE)
        # cross-cancel first; the result is then already coprime
        g1 = poly_gcd(self.num, other.den)
        g2 = poly_gcd(other.num, self.den)
        n1, d2 = self.num, other.den
        if g1.degree > 0:
            n1, d2 = n1.exact_div(g1), d2.exact_div(g1)
        n2, d1 = other.num, self.den
        if g2.degree > 0:
            n2, d1 = n2.exact_div(g2), d1.exact_div(g2)
        num, den = n1 * n2, d1 * d2
        lc = den.lc
        if lc != 1:
            num, den = num * (1 / lc), den * (1 / lc)
        return RatFunc._raw(num, den)

    __rmul__ = __mul__

    def inverse(self) -> "RatFunc":
        if not self.num:
            raise ZeroDivisorError("inverse of the zero function")
        lc = self.num.lc
        return RatFunc._raw(self.den * (1 / lc), self.num * (1 / lc))

    def __truediv__(self, other):
        other = RatFunc._lift(other)
        if other is NotImplemented:
            return other
        return self * other.inverse()

    def __rtruediv__(self, other):
        return RatFunc._lift(other) * self.inverse()

    def __pow__(self, k: int) -> "RatFunc":
        if k < 0:
            return self.inverse() ** (-k)
        return RatFunc._raw(self.num ** k, self.den ** k)

    # -- comparison / display ------------------------------------------------

    def __eq__(self, other):
        other = RatFunc._lift(other)
        if other is NotImplemented:
            return other
        return self.num == other.num and self.den == other.den

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(("RatFunc", self.num.coeffs, self.den.coeffs))
        return self._hash

    def __repr__(self):
        return f"RatFunc({self})"

    def __str__(self):
        if self.den.degree == 0:
            return format_poly(self.num)
        num, den = format_poly(self.num), format_poly(self.den)
        if len([c for c in self.num.coeffs if c]) > 1 or "*" in num:
            num = f"({num})"
        if len([c for c in self.den.coeffs if c]) > 1:
            den = f"({den})"
        return f"{num}/{den}"


def _canonical(num: Poly, den: Poly) -> tuple[Poly, Poly]:
    if den.is_zero():
        raise ZeroDivisorError("zero denominator")
    if num.is_zero():
        return ZERO, ONE
    g = poly_gcd(num, den)
    if g.degree > 0:
        num, den = num.exact_div(g), den.exact_div(g)
    lc = den.lc
    if lc != 1:
        num, den = num * (1 / lc), den * (1 / lc)
    return num, den


def rf_reduce(num: Poly, den: Poly) -> RatFunc:
    return RatFunc(num, den)


def rf_vinf(f: RatFunc) -> int:
    """Valuation at infinity, ``deg den - deg num``.

    Raises :class:`ValueError` for the zero function, whose valuation is
    infinite; callers must branch on that case.
    """
    if f.is_zero():
        raise ValueError("valuation at infinity of the zero function is undefined")
    return f.den.degree - f.num.degree


def lin(a) -> Poly:
    """The linear factor ``s + a``."""
    return Poly((a, 1))
