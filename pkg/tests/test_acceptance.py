"""Acceptance gate: one test per numbered shipped-accuracy contract.

Run with ``pytest tests/test_acceptance.py -v`` to get one pass/fail line
per criterion.  Criteria 1, 3 and 5 assert stated targets that the
governing formulas do not actually attain on the stated grids; they are
implemented exactly as stated and left failing, with measured numbers in
the assertion messages.  Each has a companion test (not a criterion)
demonstrating the nearest attainable variant.
"""

import math
import time
from functools import lru_cache

from nuttq.nuttall import (
    NuttallParams,
    marcum_q,
    nuttall_integer_series,
    nuttall_recursion_residual,
    nuttall_series_adaptive,
    nuttall_series_truncated,
    nuttall_truncation_bound,
    nuttall_upper_bound_1f1,
)
from nuttq.oracle import (
    GOLDEN_TOL,
    _evaluate_case,
    golden_path,
    oracle_marcum,
    oracle_nuttall,
    oracle_toronto,
    read_golden,
    write_golden,
)
from nuttq.special import (
    bessel_i,
    kummer_1f1,
    lower_inc_gamma,
    upper_inc_gamma,
)
from nuttq.toronto import (
    TorontoParams,
    toronto_marcum_residual,
    toronto_series_adaptive,
    toronto_series_truncated,
    toronto_truncation_bound,
    toronto_upper_bound_1f1,
)

NUTTALL_PAIRS = [(1.0, 0.0), (2.0, 1.0), (3.0, 0.5), (1.5, 0.5), (2.5, 1.5)]
NUTTALL_AB = [0.5, 1.0, 2.0, 3.0]
TORONTO_PAIRS = [(2.0, 1.0), (3.0, 1.5), (2.0, 0.5), (4.0, 1.0)]
TORONTO_R = [0.5, 1.0, 2.0]
TORONTO_B = [1.0, 2.0, 3.0]


@lru_cache(maxsize=None)
def nutt_oracle_norm(m, n, a, b):
    return oracle_nuttall(m, n, a, b, tol=1e-12).value / a ** n


@lru_cache(maxsize=None)
def tor_oracle(m, n, r, big_b):
    return oracle_toronto(m, n, r, big_b, tol=1e-12).value


def _nuttall_grid_worst(terms):
    worst, worst_pt = 0.0, None
    for (m, n) in NUTTALL_PAIRS:
        for a in NUTTALL_AB:
            for b in NUTTALL_AB:
                got = nuttall_series_truncated(NuttallParams(m, n, a, b), terms).value
                want = nutt_oracle_norm(m, n, a, b)
                err = abs(got - want) / abs(want)
                if err > worst:
                    worst, worst_pt = err, (m, n, a, b)
    return worst, worst_pt


def test_criterion_1_nuttall_series_20_terms_vs_oracle():
    t0 = time.perf_counter()
    worst, worst_pt = _nuttall_grid_worst(20)
    elapsed = time.perf_counter() - t0
    assert elapsed < 10.0, f"grid took {elapsed:.1f} s"
    assert worst < 1e-9, (
        f"worst rel err {worst:.3e} at (m,n,a,b)={worst_pt}; the 20-term "
        f"tail at a=b=3 exceeds the 1e-9 target (25 terms reach 7.4e-11, "
        f"see companion test)")


def test_criterion_1_companion_25_terms_meets_target():
    worst, worst_pt = _nuttall_grid_worst(25)
    assert worst < 1e-9, f"worst rel err {worst:.3e} at {worst_pt}"


def test_criterion_2_toronto_series_20_terms_vs_oracle():
    t0 = time.perf_counter()
    worst, worst_pt = 0.0, None
    for (m, n) in TORONTO_PAIRS:
        for r in TORONTO_R:
            for big_b in TORONTO_B:
                got = toronto_series_truncated(TorontoParams(m, n, r, big_b), 20).value
                want = tor_oracle(m, n, r, big_b)
                err = abs(got - want) / abs(want)
                if err > worst:
                    worst, worst_pt = err, (m, n, r, big_b)
    elapsed = time.perf_counter() - t0
    assert elapsed < 10.0, f"grid took {elapsed:.1f} s"
    assert worst < 1e-4, f"worst rel err {worst:.3e} at (m,n,r,B)={worst_pt}"


def _prop2_worst(big_b):
    worst, worst_pt = 0.0, None
    for (m, n) in [(1.0, 0.5), (2.0, 1.0)]:
        for r in (0.3, 0.5, 0.8):
            approx = toronto_upper_bound_1f1(m, n, r)
            value = toronto_series_adaptive(TorontoParams(m, n, r, big_b)).value
            err = abs(approx - value) / abs(value)
            if err > worst:
                worst, worst_pt = err, (m, n, r)
    return worst, worst_pt


def test_criterion_3_kummer_approximation_small_r():
    worst, worst_pt = _prop2_worst(2.0)
    assert worst < 1e-6, (
        f"worst rel err {worst:.3e} at (m,n,r)={worst_pt} with B=2; the "
        f"B-free expression reproduces the saturated (large-B) function, "
        f"and at B=2 the finite integral still misses a visible share of "
        f"mass (companion test passes at B=5)")


def test_criterion_3_companion_saturated_upper_limit():
    worst, worst_pt = _prop2_worst(5.0)
    assert worst < 1e-6, f"worst rel err {worst:.3e} at {worst_pt} with B=5"


def test_criterion_4_nuttall_truncation_bound_dominates():
    min_slack, min_pt = math.inf, None
    for (m, n) in NUTTALL_PAIRS:
        for a in NUTTALL_AB:
            for b in NUTTALL_AB:
                for terms in range(1, 16):
                    rep = nuttall_truncation_bound(
                        NuttallParams(m, n, a, b), terms)
                    slack = rep.bound_value - rep.dominated_quantity
                    if slack < min_slack:
                        min_slack, min_pt = slack, (m, n, a, b, terms)
                    assert rep.bound_value >= rep.dominated_quantity - 1e-10, (
                        f"bound below residual at (m,n,a,b,P)="
                        f"{(m, n, a, b, terms)}: slack {slack:.3e}")
    assert min_slack > -1e-10, (min_slack, min_pt)


def test_criterion_5_toronto_truncation_bound_dominates():
    # every pair in the reference grid already has m > n
    violations = []
    total = 0
    for (m, n) in TORONTO_PAIRS:
        for r in TORONTO_R:
            for big_b in TORONTO_B:
                for terms in range(1, 16):
                    total += 1
                    rep = toronto_truncation_bound(
                        TorontoParams(m, n, r, big_b), terms)
                    if rep.slack < -1e-8:
                        violations.append((m, n, r, big_b, terms, rep.slack))
    points = sorted({v[:4] for v in violations})
    assert not violations, (
        f"{len(violations)} of {total} rows fall below slack -1e-8 at "
        f"{len(points)} grid points {points}; the deficit is independent of "
        f"P (the truncated sum cancels) and is confined to r=2 with B <= 2, "
        f"where rounding n down fattens the tail the closed reference "
        f"misses (companion r <= 1 sweep passes)")


def test_criterion_5_companion_small_r_subset():
    for (m, n) in TORONTO_PAIRS:
        for r in (0.5, 1.0):
            for big_b in TORONTO_B:
                for terms in range(1, 16):
                    rep = toronto_truncation_bound(
                        TorontoParams(m, n, r, big_b), terms)
                    assert rep.slack >= -1e-8, (m, n, r, big_b, terms, rep.slack)


def test_criterion_6_kummer_bound_equality_and_dominance():
    for (m, n) in NUTTALL_PAIRS:
        for a in NUTTALL_AB:
            bound = nuttall_upper_bound_1f1(m, n, a)
            at_zero = nuttall_series_adaptive(
                NuttallParams(m, n, a, 0.0), tol=1e-14).value
            assert abs(bound - at_zero) / at_zero < 1e-10, (m, n, a)
            for b in NUTTALL_AB:
                if b > (2.0 / 3.0) * min(a, m, n):
                    continue
                value = nuttall_series_adaptive(NuttallParams(m, n, a, b)).value
                assert bound - value >= -1e-10, (m, n, a, b)


def test_criterion_7_identity_suite():
    # Marcum reduction against the independent quadrature route
    for m in (1.0, 2.0, 3.0):
        for a in (0.5, 1.0, 2.0):
            for b in (0.5, 1.0, 2.0):
                scale = a ** (m - 1.0)
                got = scale * marcum_q(m, a, b)
                want = scale * oracle_marcum(m, a, b, tol=1e-12).value
                assert abs(got - want) / abs(want) < 1e-9, (m, a, b)
    # three-term recursion on an integer grid
    for m in (2.0, 3.0, 4.0):
        for n in (0.0, 1.0, 2.0):
            for a in (0.5, 1.0, 2.0):
                for b in (0.5, 1.0, 2.0):
                    res = nuttall_recursion_residual(NuttallParams(m, n, a, b))
                    assert res < 1e-10, (m, n, a, b, res)
    # finite-integral / Marcum complement identity
    for m in (1.0, 3.0):
        for r in (0.5, 1.0, 2.0):
            for big_b in (1.0, 2.0):
                assert toronto_marcum_residual(m, r, big_b) < 1e-9, (m, r, big_b)
    # fixed-depth integer-index route against the general series
    for (m, n) in [(2.0, 1.0), (3.0, 0.0), (4.0, 1.0), (3.0, 2.0)]:
        for (a, b) in [(1.0, 1.0), (1.0, 2.0), (2.0, 1.0)]:
            p = NuttallParams(m, n, a, b)
            gen = nuttall_series_truncated(p, 20).value
            fix = nuttall_integer_series(p, 20).value
            assert abs(fix - gen) <= 1e-12 * max(1.0, abs(gen)), (m, n, a, b)


def test_criterion_8_kernel_identities():
    for i in range(20):
        a = 0.1 + i * (19.9 / 19)
        ga = math.gamma(a)
        for j in range(20):
            x = j * (40.0 / 19)
            assert abs(lower_inc_gamma(a, x) + upper_inc_gamma(a, x) - ga) \
                <= 1e-12 * ga, (a, x)
            lhs = upper_inc_gamma(a + 1.0, x)
            rhs = a * upper_inc_gamma(a, x) + x ** a * math.exp(-x)
            assert abs(lhs - rhs) <= 1e-12 * abs(rhs), (a, x)
    for k in range(40):
        x = 0.1 + k * (19.9 / 39)
        want = math.sqrt(2.0 / (math.pi * x)) * math.sinh(x)
        assert abs(bessel_i(0.5, x) - want) <= 1e-12 * want, x
    for a in (0.3, 1.0, 2.5, 7.0):
        for x in (0.1, 1.0, 5.0, 20.0, 60.0):
            want = math.exp(x)
            assert abs(kummer_1f1(a, a, x) - want) <= 1e-12 * want, (a, x)


def test_criterion_9_oracle_self_consistency(tmp_path):
    entries = read_golden()
    assert len(entries) == 30
    for e in entries:
        gauss = _evaluate_case(e.kind, e.m, e.n, e.a_or_r, e.b_or_big_b,
                               e.tol, scheme="gauss")
        assert abs(gauss.value - e.value) <= 2.0 * GOLDEN_TOL, e
    regenerated = tmp_path / "golden.txt"
    write_golden(regenerated)
    assert regenerated.read_bytes() == golden_path().read_bytes()
