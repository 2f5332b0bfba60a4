"""Feedback interconnection of a plant ``P`` (n x m) and a controller ``C`` (m x n).

The closed loop maps ``(r, d)`` to ``(e, u)`` through the four blocks
``(I-PC)^-1``, ``(I-PC)^-1 P``, ``C(I-PC)^-1`` and ``(I-CP)^-1``.  The module
also provides the two parametrizations built on a stabilizing pair: all
controllers stabilizing ``P`` (``controller_param``) and all plants
stabilized by ``C`` (``plant_param``).
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from typing import Optional

from .exactalg import Poly, RatFunc, lin
from .ratmat import DimensionError, RatMat, block, mat_det, mat_inv, mat_is_stable
from .stablering import StabilityVerdict

__all__ = [
    "BLOCK_NAMES",
    "ClosedLoopBlocks",
    "DegenerateParametrization",
    "IllPosedError",
    "NotStabilizingError",
    "ParamData",
    "StabilityReport",
    "closed_loop",
    "controller_param",
    "param_data",
    "plant_param",
    "sample_stable_matrix",
    "stabilizes",
    "well_posed",
]

BLOCK_NAMES = ("e_from_r", "e_from_d", "u_from_r", "u_from_d")


class IllPosedError(ValueError):
    """``det(I - PC) = 0``: the interconnection has no transfer matrix."""


class NotStabilizingError(ValueError):
    pass


class DegenerateParametrization(ValueError):
    """A determinant condition of the parametrization vanishes at this parameter."""


def _check_dims(P: RatMat, C: RatMat) -> None:
    if C.shape != (P.cols, P.rows):
        raise DimensionError(f"controller must be {P.cols}x{P.rows} for a {P.rows}x{P.cols} plant, got {C.shape}")


def well_posed(P: RatMat, C: RatMat) -> bool:
    _check_dims(P, C)
    return not mat_det(RatMat.identity(P.rows) - P @ C).is_zero()


@dataclass(frozen=True)
class ClosedLoopBlocks:
    e_from_r: RatMat  # (I-PC)^-1
    e_from_d: RatMat  # (I-PC)^-1 P
    u_from_r: RatMat  # C (I-PC)^-1
    u_from_d: RatMat  # (I-CP)^-1

    def as_dict(self) -> dict[str, RatMat]:
        return {name: getattr(self, name) for name in BLOCK_NAMES}


def closed_loop(P: RatMat, C: RatMat) -> ClosedLoopBlocks:
    _check_dims(P, C)
    n, m = P.shape
    try:
        E = mat_inv(RatMat.identity(n) - P @ C)
    except ZeroDivisionError as exc:
        raise IllPosedError("det(I - PC) = 0") from exc
    # (I-CP)^-1 = I + C (I-PC)^-1 P avoids a second inversion
    EP = E @ P
    return ClosedLoopBlocks(
        e_from_r=E,
        e_from_d=EP,
        u_from_r=C @ E,
        u_from_d=RatMat.identity(m) + C @ EP,
    )


@dataclass
class StabilityReport:
    stable: bool
    well_posed: bool
    failures: dict[str, list[tuple[tuple[int, int], StabilityVerdict]]] = field(default_factory=dict)
    blocks: Optional[ClosedLoopBlocks] = None
    reason: str = ""

    def __bool__(self):
        return self.stable


def stabilizes(P: RatMat, C: RatMat) -> StabilityReport:
    """Check that ``C`` stabilizes ``P``: well-posed and all four blocks over S."""
    try:
        blocks = closed_loop(P, C)
    except IllPosedError:
        return StabilityReport(False, False, reason="ill-posed: det(I - PC) = 0")
    failures = {}
    for name, B in blocks.as_dict().items():
        ok, bad = mat_is_stable(B)
        if not ok:
            failures[name] = bad
    if failures:
        return StabilityReport(False, True, failures, blocks, "unstable closed-loop blocks: " + ", ".join(failures))
    return StabilityReport(True, True, {}, blocks, "ok")


@dataclass(frozen=True)
class ParamData:
    L: RatMat       # [(I-PC)^-1 ; C(I-PC)^-1]          (n+m) x n
    Ltilde: RatMat  # [-(I-CP)^-1 C , (I-CP)^-1]         m x (m+n)
    M: RatMat       # [(I-CP)^-1 ; P(I-CP)^-1]          (m+n) x m
    Mtilde: RatMat  # [-(I-PC)^-1 P , (I-PC)^-1]         n x (m+n)


def _require_stabilizing(P: RatMat, C: RatMat) -> ClosedLoopBlocks:
    rep = stabilizes(P, C)
    if not rep.stable:
        raise NotStabilizingError(rep.reason)
    return rep.blocks


def param_data(P: RatMat, C: RatMat, blocks: Optional[ClosedLoopBlocks] = None) -> ParamData:
    if blocks is None:
        blocks = _require_stabilizing(P, C)
    E, Ec = blocks.e_from_r, blocks.u_from_d
    L = block([[E], [blocks.u_from_r]])
    # (I-CP)^-1 C = C (I-PC)^-1
    Lt = block([[-blocks.u_from_r, Ec]])
    M = block([[Ec], [P @ Ec]])
    Mt = block([[-blocks.e_from_d, E]])
    return ParamData(L=L, Ltilde=Lt, M=M, Mtilde=Mt)


def _check_param(Z: RatMat, size: int, name: str) -> None:
    if Z.shape != (size, size):
        raise DimensionError(f"{name} must be {size}x{size}, got {Z.shape}")
    ok, bad = mat_is_stable(Z)
    if not ok:
        raise ValueError(f"{name} is not stable at entries {[ij for ij, _ in bad]}")


def plant_param(P: RatMat, C: RatMat, X: RatMat, data: Optional[ParamData] = None,
                blocks: Optional[ClosedLoopBlocks] = None) -> RatMat:
    """Plant ``P(X)`` stabilized by ``C`` for a stable ``X`` of size (m+n) x (m+n).

    ``P(X) = (P(I-CP)^-1 + Mt X M) ((I-CP)^-1 + C Mt X M)^-1``.  Raises
    :class:`DegenerateParametrization` if either determinant condition fails.
    """
    n, m = P.shape
    if blocks is None:
        blocks = _require_stabilizing(P, C)
    if data is None:
        data = param_data(P, C, blocks)
    _check_param(X, n + m, "X")
    Ec, E = blocks.u_from_d, blocks.e_from_r
    K = data.Mtilde @ X @ data.M  # n x m
    right = Ec + C @ K
    if mat_det(right).is_zero() or mat_det(E + K @ C).is_zero():
        raise DegenerateParametrization("parametrization degenerate at this X")
    return (P @ Ec + K) @ mat_inv(right)


def controller_param(P: RatMat, C: RatMat, W: RatMat, data: Optional[ParamData] = None,
                     blocks: Optional[ClosedLoopBlocks] = None) -> RatMat:
    """Controller ``C(W)`` stabilizing ``P`` for a stable ``W`` of size (m+n) x (m+n).

    ``C(W) = (C(I-PC)^-1 + Lt W L) ((I-PC)^-1 + P Lt W L)^-1``.
    """
    n, m = P.shape
    if blocks is None:
        blocks = _require_stabilizing(P, C)
    if data is None:
        data = param_data(P, C, blocks)
    _check_param(W, n + m, "W")
    Ec, E = blocks.u_from_d, blocks.e_from_r
    K = data.Ltilde @ W @ data.L  # m x n
    right = E + P @ K
    if mat_det(right).is_zero() or mat_det(Ec + K @ P).is_zero():
        raise DegenerateParametrization("parametrization degenerate at this W")
    return (blocks.u_from_r + K) @ mat_inv(right)


def sample_stable_matrix(rows: int, cols: int, max_degree: int, seed: int,
                         coeff_range: int = 5) -> RatMat:
    """Seeded random matrix over S.

    Each entry is ``n(s)/d(s)`` with ``n`` an integer polynomial of degree at
    most ``max_degree`` and ``d = prod (s + a)``, ``a`` in 1..10, with
    ``deg d = max_degree``.
    """
    if max_degree < 0:
        raise ValueError("max_degree must be nonnegative")
    rng = random.Random(f"{seed}:{rows}x{cols}:{max_degree}")
    entries = []
    for _ in range(rows * cols):
        k = rng.randint(0, max_degree)
        num = Poly([rng.randint(-coeff_range, coeff_range) for _ in range(k + 1)])
        den = Poly.const(1)
        for _ in range(max_degree):
            den = den * lin(rng.randint(1, 10))
        entries.append(RatFunc(num, den))
    return RatMat(rows, cols, tuple(entries))
