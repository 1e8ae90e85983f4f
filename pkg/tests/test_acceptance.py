"""Acceptance suite: the headline claims the toolkit exists to verify.

Each test prints one pass line with its elapsed time and asserts the stated
runtime budget, so `pytest -v tests/test_acceptance.py` reads as a checklist.
"""

import random
import time
from fractions import Fraction
from math import comb

from fanocheck.blowup import blowup_chart, verify_theorem4
from fanocheck.codim import (
    census_exponent_fit,
    fb_minimum,
    regularity_codim_bound,
    sym_rank_locus_dim,
    theorem_bounds,
)
from fanocheck.nfopt import brute_force_bound, closed_form_bound
from fanocheck.polynomial import Polynomial
from fanocheck.regularity import check_condition1
from fanocheck.singularities import HypersurfaceGerm, classify_point, hessian_rank

from support import (
    X5,
    common_factor_germ,
    germ_from_pieces,
    power_sums,
    random_context_graph,
    random_invertible,
    random_normal_form,
    remark1_graph,
    substitute_linear,
)


def test_criterion_1_closed_form_bounds():
    start = time.perf_counter()
    for M in range(5, 61):
        assert theorem_bounds(M).bound == comb(M - 3, 2) + 1, M
        assert regularity_codim_bound(M).bound == M * (M - 5) // 2 + 4, M
    spots = {5: (2, 4), 7: (7, 11), 10: (22, 29)}
    for M, (bound, reg) in spots.items():
        assert theorem_bounds(M).bound == bound
        assert regularity_codim_bound(M).bound == reg
    elapsed = time.perf_counter() - start
    assert elapsed < 1.0, f"took {elapsed:.2f}s, budget 1s"
    print(f"criterion 1: closed-form bounds, M=5..60 with spot checks "
          f"PASS ({elapsed:.2f}s)")


def test_criterion_2_curve_stratum_minimum():
    start = time.perf_counter()
    for M in range(5, 201):
        fb = fb_minimum(M)
        assert fb.min_value == (M - 2) * (M - 3) + 5, M
        assert fb.argmin == 2, M
        assert fb.overall_min == M * (M - 3) // 2 + 3, M
    elapsed = time.perf_counter() - start
    assert elapsed < 1.0, f"took {elapsed:.2f}s, budget 1s"
    print(f"criterion 2: stratum-count minima, M=5..200 "
          f"PASS ({elapsed:.2f}s)")


def test_criterion_3_census_degree_fit():
    start = time.perf_counter()
    pairs = [(2, 1), (3, 1), (3, 2), (4, 2), (4, 3)]
    for M, r in pairs:
        fit = census_exponent_fit(M, r)  # bordered + exhaustive cross-check
        expected = sym_rank_locus_dim(M, r).dim + 1
        assert fit.primes[:4] == (2, 3, 5, 7), (M, r)
        assert fit.degree == expected, (M, r, fit.degree)
        assert fit.matches is True, (M, r)
    elapsed = time.perf_counter() - start
    assert elapsed < 120.0, f"took {elapsed:.2f}s, budget 120s"
    print(f"criterion 3: census counts fit degree dim+1 for {pairs} "
          f"PASS ({elapsed:.2f}s)")


def test_criterion_4_closed_form_matches_oracle():
    start = time.perf_counter()
    for seed in range(200):
        g = random_context_graph(seed)
        report = closed_form_bound(g)
        oracle = brute_force_bound(g)
        assert report.quadratic_minimum == oracle.value, seed
        assert report.bound_coefficient > 4, seed
    point_center = closed_form_bound(remark1_graph())
    assert point_center.bound_coefficient == Fraction(2)
    elapsed = time.perf_counter() - start
    assert elapsed < 30.0, f"took {elapsed:.2f}s, budget 30s"
    print(f"criterion 4: 200 tower graphs, closed form == oracle and "
          f"coefficient > 4; point-center coefficient == 2 "
          f"PASS ({elapsed:.2f}s)")


def test_criterion_5_blowup_stability():
    start = time.perf_counter()
    for seed in range(25):
        g, r = random_normal_form(seed)
        report = verify_theorem4(g, rank_threshold=r, samples=4, seed=seed)
        assert report.verdict is True, (seed, report.violations)
        for chart in report.charts[:r]:
            assert chart.inside_rank_block and chart.candidates_empty, seed
        # exact divisibility: strict * radial^2 reproduces the substituted
        # equation in every chart
        n, k = g.ambient_dim, g.center_codim
        for i in range(1, k + 1):
            ct = blowup_chart(g, i)
            ring = ct.variables
            radial = Polynomial.variable(ring, ring[ct.radial_index])
            images = []
            for m in range(n):
                if m < k and m != i - 1:
                    images.append(Polynomial.variable(ring, ring[m]) * radial)
                elif m == i - 1:
                    images.append(radial)
                else:
                    images.append(Polynomial.variable(ring, ring[m]))
            total = g.equation().substitute(images)
            assert ct.strict_transform * radial * radial == total, (seed, i)
    elapsed = time.perf_counter() - start
    assert elapsed < 300.0, f"took {elapsed:.2f}s, budget 300s"
    print(f"criterion 5: 25 random normal forms blow up stably with exact "
          f"chart division PASS ({elapsed:.2f}s)")


def test_criterion_6_regularity_verdicts():
    start = time.perf_counter()
    passing = germ_from_pieces(power_sums(range(1, 5)))
    report = check_condition1(passing)
    assert report.verdict == "pass"
    assert report.dims_for(31)[-1] == 1
    assert report.dims_for(101)[-1] == 1

    failing = common_factor_germ()
    assert check_condition1(failing).verdict == "fail"

    rng = random.Random(606)
    for _ in range(10):
        mat = random_invertible(rng, 5)
        moved_pass = germ_from_pieces(
            [substitute_linear(passing.piece(d), mat) for d in range(1, 5)]
        )
        moved_fail = germ_from_pieces(
            [substitute_linear(failing.piece(d), mat) for d in range(1, 5)]
        )
        assert check_condition1(moved_pass).verdict == "pass"
        assert check_condition1(moved_fail).verdict == "fail"
    elapsed = time.perf_counter() - start
    assert elapsed < 120.0, f"took {elapsed:.2f}s, budget 120s"
    print(f"criterion 6: regularity verdicts correct and stable under 10 "
          f"linear changes PASS ({elapsed:.2f}s)")


def test_criterion_7_classification_invariance():
    start = time.perf_counter()
    rng = random.Random(707)
    q = Polynomial.parse("x1*x2 + x3*x4 + x5^2", X5)
    f = Polynomial.parse("x1*x2 + x3*x4 + x5^2 + x1^3 - 2*x4^4", X5)
    reference = classify_point(HypersurfaceGerm.from_polynomial(f))
    for _ in range(100):
        mat = random_invertible(rng, 5)
        assert hessian_rank(substitute_linear(q, mat)) == 5
        moved = classify_point(
            HypersurfaceGerm.from_polynomial(substitute_linear(f, mat))
        )
        assert moved == reference
    for M in range(1, 61):
        for r in range(1, M + 1):
            assert (comb(M + 1, 2) - comb(r + 1, 2) - r * (M - r)
                    == comb(M - r + 1, 2)), (M, r)
    elapsed = time.perf_counter() - start
    assert elapsed < 10.0, f"took {elapsed:.2f}s, budget 10s"
    print(f"criterion 7: rank/classification invariance under 100 "
          f"substitutions plus the dimension identity PASS ({elapsed:.2f}s)")
