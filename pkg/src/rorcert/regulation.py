"""Regulation verdicts and internal-model certificates.

A stabilizing controller ``C`` robustly regulates ``P`` for the signal
generator ``Gr`` iff, for every entry ``theta`` of ``Gr``, both
``theta*(I-PC)^-1`` and ``theta*(I-PC)^-1 P`` are stable.  Those two matrices
are returned as a certificate ``(A, B)`` with ``theta*I = A + B*C``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

from .closedloop import (
    ClosedLoopBlocks,
    DegenerateParametrization,
    StabilityReport,
    closed_loop,
    param_data,
    plant_param,
    sample_stable_matrix,
    stabilizes,
)
from .exactalg import RatFunc
from .ideals import VerificationDefect, ideal_generator, internal_model_element
from .ratmat import DimensionError, RatMat, SingularMatrixError, mat_inv, mat_is_stable
from .stablering import StabilityVerdict

__all__ = [
    "ClassicalReport",
    "EntryFailure",
    "ImpCertificate",
    "ImpReport",
    "InapplicableError",
    "NotCoprimeFactorization",
    "ProbeReport",
    "RegulationProblem",
    "imp_check",
    "imp_check_classical",
    "imp_check_via_generator",
    "is_disturbance_rejecting",
    "is_regulating",
    "rcf_bezout_for_stable_plant",
    "robustness_probe",
    "verify_rcf",
]


class NotCoprimeFactorization(ValueError):
    """Supplied (N, D, X, Y) is not a right coprime factorization of C."""


class InapplicableError(ValueError):
    pass


@dataclass(frozen=True)
class RegulationProblem:
    """Plant ``P`` (n x m), controller ``C`` (m x n), generator ``Gr`` (n x q).

    ``Q`` (m x n, stable) shapes the disturbance generator ``Gd = Q Gr``; it
    defaults to the identity for square plants.
    """

    P: RatMat
    C: RatMat
    Gr: RatMat
    Q: Optional[RatMat] = None

    def __post_init__(self):
        n, m = self.P.shape
        if self.C.shape != (m, n):
            raise DimensionError(f"controller must be {m}x{n}, got {self.C.shape}")
        if self.Gr.rows != n:
            raise DimensionError(f"generator must have {n} rows, got {self.Gr.rows}")
        if self.Q is not None and self.Q.shape != (m, n):
            raise DimensionError(f"disturbance shaping Q must be {m}x{n}, got {self.Q.shape}")

    @property
    def n(self) -> int:
        return self.P.rows

    @property
    def m(self) -> int:
        return self.P.cols

    def disturbance_shaping(self) -> RatMat:
        if self.Q is not None:
            return self.Q
        if self.n != self.m:
            raise DimensionError("Q must be given explicitly for a non-square plant")
        return RatMat.identity(self.n)

    def with_plant(self, P: RatMat) -> "RegulationProblem":
        return RegulationProblem(P, self.C, self.Gr, self.Q)

    def entries(self) -> list[tuple[tuple[int, int], RatFunc]]:
        return list(self.Gr.items())


def _blocks(prob: RegulationProblem, blocks: Optional[ClosedLoopBlocks]) -> ClosedLoopBlocks:
    return blocks if blocks is not None else closed_loop(prob.P, prob.C)


def is_regulating(prob: RegulationProblem, blocks: Optional[ClosedLoopBlocks] = None) -> bool:
    """``(I-PC)^-1 Gr`` over S.  Raises :class:`IllPosedError` for an ill-posed loop."""
    b = _blocks(prob, blocks)
    return mat_is_stable(b.e_from_r @ prob.Gr)[0]


def is_disturbance_rejecting(prob: RegulationProblem, blocks: Optional[ClosedLoopBlocks] = None) -> bool:
    """``(I-PC)^-1 P Q Gr`` over S."""
    Q = prob.disturbance_shaping()
    b = _blocks(prob, blocks)
    return mat_is_stable(b.e_from_d @ (Q @ prob.Gr))[0]


@dataclass(frozen=True)
class ImpCertificate:
    """Stable ``A`` (n x n) and ``B`` (n x m) with ``theta*I = A + B*C``."""

    theta: RatFunc
    A: RatMat
    B: RatMat
    entry: Optional[tuple[int, int]] = None

    def residual(self, C: RatMat) -> RatMat:
        n = self.A.rows
        return RatMat.identity(n) * self.theta - self.A - self.B @ C

    def verify(self, C: RatMat) -> bool:
        return (
            mat_is_stable(self.A)[0]
            and mat_is_stable(self.B)[0]
            and self.residual(C).is_zero()
        )


@dataclass(frozen=True)
class EntryFailure:
    """Where the internal-model condition breaks."""

    entry: Optional[tuple[int, int]]
    theta: RatFunc
    block: str  # "e_from_r" for (I-PC)^-1, "e_from_d" for (I-PC)^-1 P
    index: tuple[int, int]
    verdict: StabilityVerdict


@dataclass
class ImpReport:
    holds: bool
    stability: StabilityReport
    certificates: list[ImpCertificate] = field(default_factory=list)
    failures: list[EntryFailure] = field(default_factory=list)
    generator: Optional[RatFunc] = None

    def __bool__(self):
        return self.holds


def _certificate_for(theta: RatFunc, blocks: ClosedLoopBlocks, C: RatMat,
                     entry: Optional[tuple[int, int]]) -> tuple[Optional[ImpCertificate], list[EntryFailure]]:
    A = blocks.e_from_r * theta
    B = -(blocks.e_from_d * theta)
    fails = []
    for name, M in (("e_from_r", A), ("e_from_d", B)):
        ok, bad = mat_is_stable(M)
        fails.extend(EntryFailure(entry, theta, name, ij, v) for ij, v in bad)
    if fails:
        return None, fails
    cert = ImpCertificate(theta, A, B, entry)
    if not cert.verify(C):
        raise VerificationDefect(f"certificate for {theta} failed its defining identity")
    return cert, []


def imp_check(prob: RegulationProblem) -> ImpReport:
    """Entrywise internal-model test; one certificate per generator entry."""
    rep = stabilizes(prob.P, prob.C)
    if not rep.stable:
        return ImpReport(False, rep)
    certs, fails = [], []
    for ij, theta in prob.entries():
        cert, bad = _certificate_for(theta, rep.blocks, prob.C, ij)
        if cert is not None:
            certs.append(cert)
        fails.extend(bad)
    return ImpReport(not fails, rep, certs if not fails else [], fails)


def imp_check_via_generator(prob: RegulationProblem) -> ImpReport:
    """Internal-model test through the single ideal generator of the entries of ``Gr``."""
    g = ideal_generator([theta for _, theta in prob.entries()])
    rep = stabilizes(prob.P, prob.C)
    if not rep.stable:
        return ImpReport(False, rep, generator=g)
    cert, fails = _certificate_for(g, rep.blocks, prob.C, None)
    return ImpReport(cert is not None, rep, [cert] if cert else [], fails, generator=g)


def verify_rcf(C: RatMat, N: RatMat, D: RatMat, X: RatMat, Y: RatMat) -> list[str]:
    """Problems with ``C = N D^-1``, ``X N + Y D = I``, all over S; empty if none."""
    problems = []
    for name, M in (("N", N), ("D", D), ("X", X), ("Y", Y)):
        if not mat_is_stable(M)[0]:
            problems.append(f"{name} is not stable")
    try:
        if N @ mat_inv(D) != C:
            problems.append("N D^-1 != C")
    except (SingularMatrixError, DimensionError) as exc:
        problems.append(f"D not invertible: {exc}")
    try:
        if X @ N + Y @ D != RatMat.identity(D.rows):
            problems.append("X N + Y D != I")
    except DimensionError as exc:
        problems.append(f"Bezout dimensions: {exc}")
    return problems


def rcf_bezout_for_stable_plant(P: RatMat, N: RatMat, D: RatMat) -> tuple[RatMat, RatMat]:
    """Bezout witnesses ``X = -(D - PN)^-1 P``, ``Y = (D - PN)^-1`` for ``C = N D^-1``.

    Only valid when they come out stable, which needs a stable ``P`` and a
    stabilizing ``C``.
    """
    if not mat_is_stable(P)[0]:
        raise InapplicableError("plant is not stable")
    if not mat_is_stable(N)[0] or not mat_is_stable(D)[0]:
        raise InapplicableError("N, D must be stable")
    try:
        C = N @ mat_inv(D)
    except SingularMatrixError as exc:
        raise InapplicableError("D is singular") from exc
    if not stabilizes(P, C).stable:
        raise InapplicableError("C = N D^-1 does not stabilize P")
    try:
        Y = mat_inv(D - P @ N)
    except SingularMatrixError as exc:
        raise InapplicableError("D - P N is singular") from exc
    X = -(Y @ P)
    if not (mat_is_stable(X)[0] and mat_is_stable(Y)[0]):
        raise InapplicableError("Bezout witnesses are not stable")
    if X @ N + Y @ D != RatMat.identity(D.rows):
        raise VerificationDefect("X N + Y D != I")
    return X, Y


@dataclass
class ClassicalReport:
    holds: bool
    stability: StabilityReport
    d: Optional[RatFunc] = None
    certificate: Optional[ImpCertificate] = None  # for theta = 1/d
    failures: list[EntryFailure] = field(default_factory=list)
    rcf_checked: bool = False
    divisible: Optional[bool] = None
    D0: Optional[RatMat] = None
    divisibility_failures: list[tuple[int, int]] = field(default_factory=list)

    def __bool__(self):
        return self.holds


def imp_check_classical(prob: RegulationProblem,
                        rcf: Optional[tuple[RatMat, ...]] = None) -> ClassicalReport:
    """Internal-model test with the minimal internal model ``d``.

    Checks ``d^-1 I = A0 + B0 C`` with stable ``A0``, ``B0``.  If ``rcf`` is
    given as ``(N, D)`` or ``(N, D, X, Y)`` it is verified first (missing
    ``X, Y`` are built with :func:`rcf_bezout_for_stable_plant`) and then
    ``D = d D0`` with ``D0`` stable is checked as well.
    """
    d = internal_model_element([theta for _, theta in prob.entries()])
    rep = stabilizes(prob.P, prob.C)
    out = ClassicalReport(False, rep, d)

    if rcf is not None:
        if len(rcf) == 2:
            N, D = rcf
            try:
                X, Y = rcf_bezout_for_stable_plant(prob.P, N, D)
            except InapplicableError as exc:
                raise NotCoprimeFactorization(f"no Bezout witnesses: {exc}") from exc
        elif len(rcf) == 4:
            N, D, X, Y = rcf
        else:
            raise ValueError("rcf must be (N, D) or (N, D, X, Y)")
        problems = verify_rcf(prob.C, N, D, X, Y)
        if problems:
            raise NotCoprimeFactorization("; ".join(problems))
        out.rcf_checked = True
        D0 = D * d.inverse()
        ok, bad = mat_is_stable(D0)
        out.divisible = ok
        out.D0 = D0
        out.divisibility_failures = [ij for ij, _ in bad]

    if not rep.stable:
        return out
    cert, fails = _certificate_for(d.inverse(), rep.blocks, prob.C, None)
    out.certificate = cert
    out.failures = fails
    out.holds = cert is not None
    if out.divisible is not None and out.divisible != out.holds:
        raise VerificationDefect("divisibility D = d D0 disagrees with the d^-1 certificate")
    return out


@dataclass
class ProbeReport:
    samples: int
    skipped: int = 0
    stabilized: int = 0
    regulated: int = 0
    rejected: int = 0
    imp: bool = False
    violations: list[str] = field(default_factory=list)
    regulation_failures: list[int] = field(default_factory=list)

    @property
    def checked(self) -> int:
        return self.samples - self.skipped

    @property
    def passed(self) -> bool:
        return not self.violations


def sample_seed(seed: int, i: int) -> int:
    return seed * 1_000_003 + i


def robustness_probe(prob: RegulationProblem, samples: int, max_degree: int, seed: int) -> ProbeReport:
    """Evidence suite over perturbed plants ``P(X)`` for seeded stable ``X``.

    Every non-degenerate ``P(X)`` must be stabilized by ``C``; if the
    internal-model test passes on the nominal plant, each ``P(X)`` must also be
    regulated and disturbance-rejected.  Violations are collected, not raised.
    """
    rep = stabilizes(prob.P, prob.C)
    if not rep.stable:
        raise ValueError("probe requires a stabilizing controller: " + rep.reason)
    data = param_data(prob.P, prob.C, rep.blocks)
    imp = imp_check(prob).holds
    out = ProbeReport(samples, imp=imp)
    size = prob.n + prob.m
    for i in range(samples):
        X = sample_stable_matrix(size, size, max_degree, sample_seed(seed, i))
        try:
            PX = plant_param(prob.P, prob.C, X, data, rep.blocks)
        except DegenerateParametrization:
            out.skipped += 1
            continue
        srep = stabilizes(PX, prob.C)
        if not srep.stable:
            out.violations.append(f"sample {i}: C does not stabilize P(X) ({srep.reason})")
            continue
        out.stabilized += 1
        pert = prob.with_plant(PX)
        reg = is_regulating(pert, srep.blocks)
        rej = is_disturbance_rejecting(pert, srep.blocks)
        out.regulated += reg
        out.rejected += rej
        if not reg:
            out.regulation_failures.append(i)
        if imp and not (reg and rej):
            out.violations.append(f"sample {i}: internal model present but regulation={reg}, rejection={rej}")
    return out
