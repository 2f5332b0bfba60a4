"""Fractional ideals of F(S) and scalar coprime factorizations over S.

Over real-rational proper stable functions every finitely generated
fractional ideal is principal.  :func:`ideal_generator` computes a generator
by matching, at every closed-RHP point and at infinity, the smallest order
among the given elements, then certifies the result before returning it.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

from .exactalg import ONE, Poly, RatFunc, ZeroDivisorError, poly_gcd, poly_lcm, rf_vinf
from .stablering import (
    SPLUS1,
    bezout_in_S,
    generate_unit_ideal,
    in_S,
    is_unit_in_S,
    poly_bezout_in_S,
)

__all__ = [
    "IdealGenerators",
    "ScalarCoprimeFactorization",
    "VerificationDefect",
    "bezout_coefficients",
    "ideal_equal",
    "ideal_generator",
    "ideal_membership",
    "internal_model_element",
    "scalar_coprime_factorization",
]


class VerificationDefect(AssertionError):
    """A self-certifying construction failed its own check.  Always a bug."""


@dataclass(frozen=True)
class IdealGenerators:
    gens: tuple

    def __init__(self, gens: Iterable[RatFunc]):
        gens = tuple(g if isinstance(g, RatFunc) else RatFunc._lift(g) for g in gens)
        if not gens or all(g.is_zero() for g in gens):
            raise ValueError("an ideal needs at least one nonzero generator")
        object.__setattr__(self, "gens", gens)

    def __iter__(self):
        return iter(self.gens)

    def __len__(self):
        return len(self.gens)

    def nonzero(self) -> list[RatFunc]:
        return [g for g in self.gens if not g.is_zero()]


def _as_gens(gens) -> IdealGenerators:
    return gens if isinstance(gens, IdealGenerators) else IdealGenerators(gens)


def _certify_generator(g: RatFunc, fs: Sequence[RatFunc]) -> None:
    quotients = [f / g for f in fs]
    if not all(in_S(h) for h in quotients):
        raise VerificationDefect(f"generator {g} does not divide every element")
    if not generate_unit_ideal(quotients):
        raise VerificationDefect(f"quotients by {g} do not generate the unit ideal")


def ideal_generator(gens) -> RatFunc:
    """Principal generator of the fractional ideal spanned by ``gens``.

    Brings everything over the common denominator ``d``, takes the Q[s]-gcd
    of the lifted numerators, and fixes the order at infinity with a power of
    ``s + 1``.  Both inclusions are checked before the generator is returned.
    """
    fs = _as_gens(gens).nonzero()
    d = ONE
    for f in fs:
        d = poly_lcm(d, f.den)
    h = Poly(())
    for f in fs:
        h = poly_gcd(h, f.num * d.exact_div(f.den))
    g0 = RatFunc(h, d)
    c = rf_vinf(g0) - min(rf_vinf(f) for f in fs)
    g = g0 * RatFunc(SPLUS1 ** c) if c >= 0 else g0 / RatFunc(SPLUS1 ** (-c))
    _certify_generator(g, fs)
    return g


def ideal_membership(f: RatFunc, g: RatFunc) -> bool:
    """True iff ``f`` lies in the principal fractional ideal ``<g>``."""
    if g.is_zero():
        raise ZeroDivisorError("membership in the zero ideal")
    return in_S(f / g).stable


def ideal_equal(gens_a, gens_b) -> bool:
    ga = ideal_generator(gens_a)
    gb = ideal_generator(gens_b)
    return is_unit_in_S(ga / gb)


def bezout_coefficients(gens, g: RatFunc | None = None) -> list[RatFunc]:
    """Explicit ``a_i`` in S with ``sum(a_i * f_i) == g``.

    Folds the two-term Bezout identity over the quotients ``f_i / g``.
    Zero generators get coefficient zero.
    """
    fs = list(_as_gens(gens))
    if g is None:
        g = ideal_generator(fs)
    hs = [f / g for f in fs]
    idx = [i for i, h in enumerate(hs) if not h.is_zero()]
    coeffs = [RatFunc(0)] * len(fs)
    # running identity: sum(coeffs[i] * hs[i]) == acc
    first = idx[0]
    coeffs[first] = RatFunc(1)
    acc = hs[first]
    for i in idx[1:]:
        x, y, acc = bezout_in_S(acc, hs[i])
        coeffs = [c * x for c in coeffs]
        coeffs[i] = coeffs[i] + y
    # acc is now a unit of S; scale it away
    inv = acc.inverse()
    coeffs = [c * inv for c in coeffs]
    total = RatFunc(0)
    for a, f in zip(coeffs, fs):
        total = total + a * f
    if total != g or not all(in_S(a) for a in coeffs):
        raise VerificationDefect("Bezout coefficients failed re-verification")
    return coeffs


@dataclass(frozen=True)
class ScalarCoprimeFactorization:
    g: RatFunc
    N: RatFunc
    D: RatFunc
    x: RatFunc
    y: RatFunc

    def verify(self) -> bool:
        return (
            all(in_S(v) for v in (self.N, self.D, self.x, self.y))
            and not self.D.is_zero()
            and self.N / self.D == self.g
            and self.x * self.N + self.y * self.D == RatFunc(1)
        )


def scalar_coprime_factorization(g: RatFunc) -> ScalarCoprimeFactorization:
    """``g = N/D`` over S with Bezout witnesses ``x*N + y*D = 1``.

    ``N = p/(s+1)^k`` and ``D = q/(s+1)^k`` for ``g = p/q`` reduced and
    ``k = max(deg p, deg q)``.
    """
    if g.is_zero():
        raise ZeroDivisorError("coprime factorization of zero")
    p, q = g.num, g.den
    k = max(p.degree, q.degree)
    w = SPLUS1 ** k
    N, D = RatFunc(p, w), RatFunc(q, w)
    x, y = poly_bezout_in_S(p, q, k)
    fac = ScalarCoprimeFactorization(g, N, D, x, y)
    if not fac.verify():
        raise VerificationDefect(f"coprime factorization of {g} failed re-verification")
    return fac


def internal_model_element(gens) -> RatFunc:
    """The stable denominator ``D`` of the ideal generator: the minimal internal model."""
    return scalar_coprime_factorization(ideal_generator(gens)).D
