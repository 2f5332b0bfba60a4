"""Acceptance suite: one group of tests per criterion.

The terminal summary prints one PASS/FAIL line per criterion (see the
``criterion`` marker hook in ``conftest.py``).
"""

import json
import random
import time
from fractions import Fraction

import pytest
from tamper import tamperings

from rorcert import cli
from rorcert.certificates import (
    bezout_certificate,
    coprime_certificate,
    ideal_certificate,
    imp_certificate,
    verify_document,
)
from rorcert.closedloop import (
    DegenerateParametrization,
    closed_loop,
    controller_param,
    param_data,
    plant_param,
    sample_stable_matrix,
    stabilizes,
)
from rorcert.codec import decode_matrix, decode_ratfunc
from rorcert.exactalg import Poly, RatFunc, S
from rorcert.ideals import ideal_generator, scalar_coprime_factorization
from rorcert.ratmat import RatMat, mat_is_stable
from rorcert.regulation import (
    RegulationProblem,
    imp_check,
    imp_check_classical,
    imp_check_via_generator,
    is_disturbance_rejecting,
    is_regulating,
    rcf_bezout_for_stable_plant,
    sample_seed,
)
from rorcert.stablering import bezout_in_S, in_S, is_hurwitz, is_unit_in_S

s = RatFunc(S)
THETA = (s + 1) ** 3 / (s * (s**2 + 1))
D_MODEL = s * (s**2 + 1) / (s + 1) ** 3
SEED = 42
SAMPLES = 100


def criterion(number, title):
    return pytest.mark.criterion(number, title)


def run_cli(*argv):
    import io

    out, err = io.StringIO(), io.StringIO()
    code, doc = cli.run(list(argv), out, err)
    return code, doc


# 1 -----------------------------------------------------------------------

@criterion(1, "fixture: check stabilizes true, 16 closed-loop entries in S, < 5 s")
def test_c1_stabilizes(quadtank):
    t0 = time.perf_counter()
    code, doc = run_cli("check", "stabilizes", "--fixture", "quadtank")
    elapsed = time.perf_counter() - t0
    assert code == 0 and doc["verdicts"]["stabilizes"] is True
    assert doc["closed_loop_entries_checked"] == 16 and doc["witnesses"] == []
    blocks = closed_loop(quadtank.plant, quadtank.controller).as_dict()
    entries = [e for B in blocks.values() for e in B.entries]
    assert len(entries) == 16 and all(in_S(e) for e in entries)
    assert elapsed < 5.0, f"{elapsed:.2f} s"


# 2 -----------------------------------------------------------------------

@criterion(2, "check imp: true with 4 certificates, zero residual theta*I - A - B*C")
def test_c2_imp_certificates(qt_problem):
    code, doc = run_cli("check", "imp", "--fixture", "quadtank")
    assert code == 0 and len(doc["certificates"]) == 4
    C = qt_problem.C
    for cert in doc["certificates"]:
        theta = decode_ratfunc(cert["theta"])
        A, B = decode_matrix(cert["A"]), decode_matrix(cert["B"])
        assert (RatMat.identity(2) * theta - A - B @ C).is_zero()
        assert mat_is_stable(A)[0] and mat_is_stable(B)[0]
    rep = imp_check(qt_problem)
    assert rep.holds and all(c.residual(C).is_zero() for c in rep.certificates)


# 3 -----------------------------------------------------------------------

@criterion(3, "ideal generator of the corrected Gr is unit-equivalent to (s+1)^3/(s(s^2+1))")
def test_c3_generator():
    code, doc = run_cli("ideal", "generator", "--fixture", "quadtank")
    g = decode_ratfunc(doc["generator"])
    assert code == 0 and is_unit_in_S(g / THETA)


# 4 -----------------------------------------------------------------------

MEMBERSHIP_DISPLAYS = [
    # (element, cofactor) with element = theta * cofactor
    (1 / s, (s**2 + 1) / (s + 1) ** 3),
    (1 / (s**2 + 1), s / (s + 1) ** 3),
    ((s + 2) / (s + 1), s * (s**2 + 1) * (s + 2) / (s + 1) ** 4),
]


@criterion(4, "the example's membership and Bezout-sum identities verify exactly")
@pytest.mark.parametrize("element, cofactor", MEMBERSHIP_DISPLAYS)
def test_c4_membership_displays(element, cofactor):
    assert in_S(cofactor)
    assert element - THETA * cofactor == RatFunc(0)


@criterion(4, "the example's membership and Bezout-sum identities verify exactly")
def test_c4_bezout_sum_display():
    terms = [(1 / s, (2 * s + 1) / (s + 1)), (1 / (s**2 + 1), 4 * s / (s + 1)), ((s + 2) / (s + 1), RatFunc(1))]
    assert all(in_S(c) for _, c in terms)
    assert sum((f * c for f, c in terms), RatFunc(0)) - THETA == RatFunc(0)


@criterion(4, "the example's membership and Bezout-sum identities verify exactly")
def test_c4_printed_third_cofactor_is_a_slip():
    printed = s * (s - 1) * (s + 2) / (s + 1) ** 4
    assert in_S(printed)
    for theta in (THETA, (s + 1) ** 3 / (s * (s**2 - 1))):
        assert (s + 2) / (s + 1) - theta * printed != RatFunc(0)


# 5 -----------------------------------------------------------------------

@criterion(5, "classical form with the printed RCF: d divides D, D0 = I, theta*D = I")
def test_c5_classical(quadtank, qt_problem):
    N, D = quadtank.rcf["N"], quadtank.rcf["D"]
    X, Y = rcf_bezout_for_stable_plant(quadtank.plant, N, D)
    assert mat_is_stable(X)[0] and mat_is_stable(Y)[0]
    assert X @ N + Y @ D == RatMat.identity(2)
    rep = imp_check_classical(qt_problem, (N, D, X, Y))
    assert rep.holds and rep.rcf_checked and rep.divisible
    assert rep.d == D_MODEL and rep.D0 == RatMat.identity(2)
    assert D * THETA == RatMat.identity(2)
    code, doc = run_cli("check", "imp", "--classical", "--fixture", "quadtank")
    assert code == 0 and decode_matrix(doc["D0"]) == RatMat.identity(2)


# 6 -----------------------------------------------------------------------

@criterion(6, "negative control: typo fixture fails check imp at entry (1,2)")
def test_c6_typo(qt_typo_problem):
    code, doc = run_cli("check", "imp", "--fixture", "quadtank-typo")
    assert code == 1 and doc["verdicts"]["stabilizes"] is True
    assert {tuple(w["entry"]) for w in doc["witnesses"]} == {(1, 2)}
    rep = imp_check(qt_typo_problem)
    assert not rep.holds and {f.entry for f in rep.failures} == {(0, 1)}


# 7 and 8 -----------------------------------------------------------------

@pytest.fixture(scope="module")
def perturbed(quadtank):
    """The seeded P(X) family shared by criteria 7 and 8."""
    P, C = quadtank.plant, quadtank.controller
    blocks = closed_loop(P, C)
    data = param_data(P, C, blocks)
    t0 = time.perf_counter()
    plants, skipped = [], 0
    for i in range(SAMPLES):
        X = sample_stable_matrix(4, 4, 2, sample_seed(SEED, i))
        try:
            plants.append(plant_param(P, C, X, data, blocks))
        except DegenerateParametrization:
            skipped += 1
    return plants, skipped, time.perf_counter() - t0


@criterion(7, "seed 42: C stabilizes 100 P(X) and C(W) stabilizes P for 100 W, < 10 min")
def test_c7_parametrizations(quadtank, perturbed):
    P, C = quadtank.plant, quadtank.controller
    plants, skipped, elapsed = perturbed
    t0 = time.perf_counter()
    assert len(plants) + skipped == SAMPLES
    assert all(stabilizes(PX, C).stable for PX in plants)
    blocks = closed_loop(P, C)
    data = param_data(P, C, blocks)
    ok = w_skipped = 0
    for i in range(SAMPLES):
        W = sample_stable_matrix(4, 4, 2, sample_seed(SEED, SAMPLES + i))
        try:
            CW = controller_param(P, C, W, data, blocks)
        except DegenerateParametrization:
            w_skipped += 1
            continue
        assert stabilizes(P, CW).stable, f"W sample {i}"
        ok += 1
    assert ok + w_skipped == SAMPLES
    print(f"P(X): {len(plants)} checked, {skipped} degenerate; C(W): {ok} checked, {w_skipped} degenerate")
    assert elapsed + time.perf_counter() - t0 < 600


@criterion(8, "the same 100 P(X) are regulated and disturbance-rejecting (Q = I)")
def test_c8_robustness(qt_problem, perturbed):
    plants, _, _ = perturbed
    for PX in plants:
        pert = qt_problem.with_plant(PX)
        blocks = closed_loop(PX, qt_problem.C)
        assert is_regulating(pert, blocks)
        assert is_disturbance_rejecting(pert, blocks)


# 9 -----------------------------------------------------------------------

GR_POOL = [1 / s, -1 / (s**2 + 1), 1 / (s - 1), 1 / s**2, (s + 2) / (s + 1), 1 / (s + 3), s / (s**2 + 1), RatFunc(0)]


def _random_gr(rng):
    q = rng.randint(1, 2)
    while True:
        Gr = RatMat.build(2, q, lambda i, j: rng.choice(GR_POOL))
        if not Gr.is_zero():
            return Gr


def randomized_instances(count=50, seed=9):
    """Half perturbed plants with the fixed controller, half Youla controllers of stable plants."""
    from rorcert.fixtures import load_fixture

    pf = load_fixture("quadtank")
    P, C = pf.plant, pf.controller
    blocks = closed_loop(P, C)
    data = param_data(P, C, blocks)
    rng = random.Random(seed)
    out = []
    i = 0
    while len(out) < count // 2:
        X = sample_stable_matrix(4, 4, 1, sample_seed(seed, i))
        i += 1
        try:
            out.append(RegulationProblem(plant_param(P, C, X, data, blocks), C, _random_gr(rng)))
        except DegenerateParametrization:
            continue
    zero = RatMat.zeros(2, 2)
    while len(out) < count:
        P0 = sample_stable_matrix(2, 2, 1, sample_seed(seed, i))
        W = sample_stable_matrix(4, 4, 1, sample_seed(seed, i + 1))
        i += 2
        try:
            out.append(RegulationProblem(P0, controller_param(P0, zero, W), _random_gr(rng)))
        except DegenerateParametrization:
            continue
    return out


@criterion(9, "imp_check and imp_check_via_generator agree on fixtures and 50 random instances")
def test_c9_generator_equivalence(qt_problem, qt_typo_problem):
    instances = [qt_problem, qt_typo_problem] + randomized_instances()
    assert len(instances) == 52
    verdicts = []
    for prob in instances:
        a = imp_check(prob).holds
        b = imp_check_via_generator(prob).holds
        assert a == b
        assert imp_check_classical(prob).holds == a
        verdicts.append(a)
    # the comparison is not vacuous
    assert True in verdicts and False in verdicts
    print(f"verdicts: {verdicts.count(True)} true, {verdicts.count(False)} false")


# 10 ----------------------------------------------------------------------

REAL_ROOTS = [Fraction(-3), Fraction(-2), Fraction(-1), Fraction(-1, 2), Fraction(0), Fraction(1, 3), Fraction(1), Fraction(2)]
COMPLEX_ROOTS = [  # (a, b) for the pair a +- b i
    (Fraction(-2), Fraction(1)), (Fraction(-1), Fraction(2)), (Fraction(-1, 3), Fraction(1)),
    (Fraction(0), Fraction(1)), (Fraction(0), Fraction(2)), (Fraction(1, 2), Fraction(1)), (Fraction(1), Fraction(3)),
]


def routh_cases(count=600, seed=10):
    rng = random.Random(seed)
    cases = []
    for _ in range(count):
        # bias toward all-left roots so both verdicts are well represented
        left_only = rng.random() < 0.5
        reals = [r for r in REAL_ROOTS if r < 0] if left_only else REAL_ROOTS
        pairs = [c for c in COMPLEX_ROOTS if c[0] < 0] if left_only else COMPLEX_ROOTS
        roots_re, p = [], Poly.const(rng.choice([1, 2, -3, Fraction(1, 5)]))
        for _ in range(rng.randint(0, 4)):
            r = rng.choice(reals)
            p = p * Poly([-r, 1])
            roots_re.append(r)
        for _ in range(rng.randint(0, 3)):
            a, b = rng.choice(pairs)
            p = p * Poly([a * a + b * b, -2 * a, 1])
            roots_re.append(a)
        cases.append((p, all(r < 0 for r in roots_re), 0 in roots_re))
    return cases


@criterion(10, "Routh test matches the constructed root sets on >= 500 polynomials")
def test_c10_routh_oracle():
    cases = routh_cases()
    assert len(cases) >= 500
    mismatches = [p for p, truth, _ in cases if is_hurwitz(p) != truth]
    assert mismatches == []
    stable = sum(truth for _, truth, _ in cases)
    assert 100 < stable < len(cases) - 100
    assert sum(axis for _, _, axis in cases) > 50


# 11 ----------------------------------------------------------------------

def _pool_stable(rng):
    """An element of S: pool numerator over a Hurwitz denominator of at least its degree."""
    num = RatFunc(rng.choice([1, -2, 3]))
    for fac in (s, s - 1, s**2 + 1, s + 2):
        num = num * fac ** rng.randint(0, 1)
    return num / ((s + 1) ** num.num.degree * (s + 3) ** rng.randint(0, 1))


def _pool_scalar(rng):
    factors = [s, s - 1, s**2 + 1, s + 1, s + 2, s + 3]
    f = RatFunc(rng.choice([1, -2, 3]))
    for fac in factors:
        e = rng.randint(-2, 2)
        if e:
            f = f * fac**e
    return f


@pytest.fixture(scope="module")
def produced_certificates(qt_problem):
    rng = random.Random(11)
    certs = []
    for _ in range(15):
        a, b = _pool_stable(rng), _pool_stable(rng)
        x, y, g = bezout_in_S(a, b)
        assert x * a + y * b == g and in_S(x) and in_S(y) and in_S(a / g) and in_S(b / g)
        certs.append(bezout_certificate(a, b, x, y, g))
    for _ in range(15):
        fac = scalar_coprime_factorization(_pool_scalar(rng))
        assert fac.verify() and fac.x * fac.N + fac.y * fac.D == RatFunc(1)
        certs.append(coprime_certificate(fac.g, fac.N, fac.D, fac.x, fac.y))
    for _ in range(15):
        gens = [_pool_scalar(rng) for _ in range(rng.randint(1, 3))]
        g = ideal_generator(gens)
        certs.append(ideal_certificate(gens, g))
    for prob in [qt_problem] + randomized_instances(6, seed=111):
        for rep in (imp_check(prob), imp_check_via_generator(prob)):
            for c in rep.certificates:
                assert c.verify(prob.C)
                entry = None if c.entry is None else [c.entry[0] + 1, c.entry[1] + 1]
                certs.append(imp_certificate(c.theta, c.A, c.B, prob.C, entry))
    return json.loads(json.dumps({"format": 1, "certificates": certs}))


@criterion(11, "tool outputs self-verify; the checker accepts them and rejects 20 tamperings")
def test_c11_accepts_all(produced_certificates):
    kinds = {c["kind"] for c in produced_certificates["certificates"]}
    assert kinds == {"bezout", "scalar_coprime", "ideal_generator", "imp"}
    results = verify_document(produced_certificates)
    assert all(r.ok for r in results), [r.reason for r in results if not r.ok]


@criterion(11, "tool outputs self-verify; the checker accepts them and rejects 20 tamperings")
def test_c11_rejects_tampering(produced_certificates, tmp_path):
    bad_docs = tamperings(produced_certificates, 20)
    assert len(bad_docs) == 20
    for k, bad in enumerate(bad_docs):
        assert not all(r.ok for r in verify_document(bad))
        path = tmp_path / f"bad{k}.json"
        path.write_text(json.dumps(bad))
        assert run_cli("verify", "certificate", str(path))[0] == 1
