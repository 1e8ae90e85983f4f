"""Line-finiteness checks: expected step dimensions, verdict semantics,
multi-prime agreement, and budget-driven refusal."""

import random
from fractions import Fraction

import pytest

from fanocheck.groebner import GroebnerBudget
from fanocheck.polynomial import Polynomial, PolynomialError
from fanocheck.regularity import (
    DEFAULT_PRIMES,
    check_condition1,
    check_condition2,
    regularity_report,
)
from fanocheck.singularities import HypersurfaceGerm

from support import (
    X5,
    common_factor_germ,
    dense_gf31_germ,
    germ_from_pieces,
    mixed_rank5_germ,
    monomials,
    power_sums,
    random_invertible,
    rank5_quintic,
    smooth_directional_quintic,
    substitute_linear,
)


# ---------------------------------------------------------------------------
# smooth-point checks (condition 1)
# ---------------------------------------------------------------------------

def test_power_sum_prefixes_pass():
    germ = germ_from_pieces(power_sums(range(1, 5)))
    report = check_condition1(germ)
    assert report.verdict == "pass"
    assert report.primes == DEFAULT_PRIMES
    assert report.expected_dimensions == (4, 3, 2, 1)
    assert report.dims_for(31) == (4, 3, 2, 1)
    assert report.dims_for(101) == (4, 3, 2, 1)


def test_common_linear_factor_fails():
    report = check_condition1(common_factor_germ())
    assert report.verdict == "fail"
    # every prefix cuts out at least the hyperplane carried by the factor
    assert report.dims_for(31) == (4, 4, 4, 4)
    assert report.dims_for(101) == (4, 4, 4, 4)


def test_dense_finite_field_germ_decides_alone():
    report = check_condition1(dense_gf31_germ(0))
    assert report.verdict == "pass"
    assert report.primes == (31,)
    assert report.dims_for(31) == (4, 3, 2, 1)


def test_condition1_rejects_singular_germ():
    germ = germ_from_pieces(power_sums(range(2, 6)))
    with pytest.raises(PolynomialError, match="smooth points only"):
        check_condition1(germ)


def test_condition1_needs_enough_pieces():
    germ = germ_from_pieces(power_sums(range(1, 4)))
    with pytest.raises(PolynomialError, match="need them up to"):
        check_condition1(germ)


# ---------------------------------------------------------------------------
# singular-point checks (condition 2)
# ---------------------------------------------------------------------------

def test_power_sum_tail_passes():
    germ = germ_from_pieces(power_sums(range(2, 6)))
    report = check_condition2(germ)
    assert report.verdict == "pass"
    assert report.expected_dimensions == (4, 3, 2, 1)
    assert report.dims_for(31) == (4, 3, 2, 1)


def test_shared_factor_tail_fails():
    pieces = [
        Polynomial(X5, {tuple(i if j == 0 else 0 for j in range(5)): 1,
                        (1, i - 1, 0, 0, 0): 1})
        for i in range(2, 6)
    ]
    report = check_condition2(germ_from_pieces(pieces))
    assert report.verdict == "fail"


def test_mixed_rank5_germ_passes_both_primes():
    report = check_condition2(mixed_rank5_germ(0))
    assert report.verdict == "pass"
    assert report.dims_for(31) == report.dims_for(101) == (4, 3, 2, 1)


def test_condition2_rejects_smooth_germ():
    germ = germ_from_pieces(power_sums(range(1, 6)))
    with pytest.raises(PolynomialError, match="singular points only"):
        check_condition2(germ)


def test_rational_germ_needs_two_primes():
    germ = germ_from_pieces(power_sums(range(2, 6)))
    with pytest.raises(PolynomialError, match="at least two primes"):
        check_condition2(germ, primes=(31,))
    with pytest.raises(PolynomialError, match="at least two primes"):
        check_condition2(germ, primes=(31, 31))


# ---------------------------------------------------------------------------
# whole-report entry point
# ---------------------------------------------------------------------------

def test_report_on_rank5_quintic_point():
    report = regularity_report(rank5_quintic(), [1, 0, 0, 0, 0, 0])
    assert report.point_class == "singular"
    assert report.condition == 2
    assert str(report.classification) == "Quadratic(rank=5)"
    assert report.meets_rank_threshold is True
    # sparse tail: only two non-zero pieces, so the chain stalls and the
    # check honestly fails even though the point has full quadratic rank
    assert report.verdict == "fail"
    assert report.dims_for(31) == (4, 4, 4, 3)


def test_report_on_smooth_directional_point():
    report = regularity_report(smooth_directional_quintic(),
                               [1, 0, 0, 0, 0, 0])
    assert report.point_class == "smooth"
    assert report.condition == 1
    assert report.meets_rank_threshold is True
    assert report.verdict == "fail"
    assert report.dims_for(31) == (4, 4, 4, 4)


def test_budget_refusal_reports_undecided():
    V6 = tuple(f"X{i}" for i in range(6))
    form = Polynomial(V6, {(3, 2, 0, 0, 0, 0): 1, (3, 0, 2, 0, 0, 0): 1,
                           (2, 1, 1, 1, 0, 0): 1})
    tight = GroebnerBudget(max_pairs=0)
    report = regularity_report(form, [1, 0, 0, 0, 0, 0], budget=tight)
    assert report.verdict == "undecided"
    assert report.undecided is True
    assert report.dims_for(31) == (4, None, None, None)
    # the same point decides under the default budget
    full = regularity_report(form, [1, 0, 0, 0, 0, 0])
    assert full.verdict == "fail"
    assert full.dims_for(31) == (4, 3, 3, 3)


# ---------------------------------------------------------------------------
# invariance and structural properties
# ---------------------------------------------------------------------------

def _transform_germ(germ, mat):
    pieces = [germ.piece(d) for d in range(1, germ.max_degree + 1)]
    moved = [substitute_linear(p, mat) for p in pieces if not p.is_zero()]
    return germ_from_pieces(moved)


def test_verdicts_invariant_under_linear_changes():
    rng = random.Random(2026)
    passing = germ_from_pieces(power_sums(range(1, 5)))
    failing = common_factor_germ()
    for _ in range(10):
        mat = random_invertible(rng, 5)
        assert check_condition1(_transform_germ(passing, mat)).verdict == "pass"
        assert check_condition1(_transform_germ(failing, mat)).verdict == "fail"


def test_common_factor_always_fails():
    rng = random.Random(40)
    x1 = Polynomial.variable(X5, "x1")
    for _ in range(6):
        pieces = [x1]
        for d in range(1, 4):
            factor = Polynomial(
                X5, {e: rng.randint(-2, 2) for e in monomials(d, 5)}
            )
            pieces.append(x1 * factor)
        germ = germ_from_pieces([p for p in pieces if not p.is_zero()])
        if germ.max_degree < 4:
            continue
        assert check_condition1(germ).verdict == "fail"


def test_two_prime_disagreement_is_never_trusted():
    # a coefficient with denominator 31 silences that prime; the remaining
    # single deciding prime is not enough for a rational germ
    pieces = power_sums(range(2, 6))
    pieces[0] = pieces[0].scale(Fraction(1, 31))
    report = check_condition2(germ_from_pieces(pieces))
    assert report.verdict == "undecided"
    assert report.dims_for(31) == (None, None, None, None)
    assert all(d is not None for d in report.dims_for(101))
