"""The budgeted Groebner dimension oracle."""

import random

import pytest

from fanocheck.groebner import (
    BudgetExceeded,
    GroebnerBudget,
    ideal_dimension,
)
from fanocheck.polynomial import Polynomial, PolynomialError

from support import monomials, power_sums


def P(text, variables, field=None):
    return Polynomial.parse(text, variables, field=field)


def test_line_in_three_space():
    xyz = ("x", "y", "z")
    gens = [P("x", xyz), P("y", xyz)]
    assert ideal_dimension(gens, p=31) == 1


def test_plane_hypersurface():
    gens = [P("x*y", ("x", "y"))]
    assert ideal_dimension(gens, p=31) == 1


def test_power_sums_dimension_one_then_zero():
    ps = power_sums(range(1, 5))
    assert ideal_dimension(ps, p=31) == 1
    ps5 = power_sums(range(1, 6))
    assert ideal_dimension(ps5, p=31) == 0


def test_no_generators_is_whole_space():
    zero = Polynomial.zero(("x", "y", "z"), field=31)
    assert ideal_dimension([zero], p=31) == 3


def test_empty_locus_reports_minus_one():
    x = ("x",)
    gens = [P("x", x), P("x - 1", x)]
    assert ideal_dimension(gens, p=31) == -1


def test_rational_generators_need_a_prime():
    gens = [P("x + y", ("x", "y"))]
    with pytest.raises(PolynomialError):
        ideal_dimension(gens)


def test_gf_generators_infer_their_field():
    gens = [P("x", ("x", "y"), field=31)]
    assert ideal_dimension(gens) == 1


def test_denominator_killed_by_prime_is_rejected():
    gens = [P("1/31*x + y", ("x", "y"))]
    with pytest.raises(PolynomialError):
        ideal_dimension(gens, p=31)


def test_budget_refusal_pair_count():
    # the S-pair of x^2 + y^2 and x*y shares x, so it survives the
    # coprime criterion and must be processed
    gens = [P("x^2 + y^2", ("x", "y")), P("x*y", ("x", "y"))]
    with pytest.raises(BudgetExceeded):
        ideal_dimension(gens, p=31, budget=GroebnerBudget(max_pairs=0))
    with pytest.raises(BudgetExceeded):
        ideal_dimension(gens, p=31, budget=GroebnerBudget(max_degree=1))
    assert ideal_dimension(gens, p=31) == 0


def test_invariance_under_permutation_and_scaling():
    rng = random.Random(7)
    ps = power_sums(range(1, 5))
    reference = ideal_dimension(ps, p=31)
    for _ in range(10):
        shuffled = ps[:]
        rng.shuffle(shuffled)
        scaled = [g.scale(rng.choice([1, 2, 5, 30])) for g in shuffled]
        assert ideal_dimension(scaled, p=31) == reference


def test_generic_linear_forms_cut_expected_dimension():
    rng = random.Random(20260816)
    for n in range(2, 9):
        variables = tuple(f"x{i}" for i in range(n))
        for k in range(1, n + 1):
            gens = []
            for _ in range(k):
                terms = {
                    tuple(1 if t == j else 0 for t in range(n)):
                        rng.randrange(1, 31)
                    for j in range(n)
                }
                gens.append(Polynomial(variables, terms, field=31))
            assert ideal_dimension(gens, p=31) == n - k, (n, k)


def test_dimension_of_determinantal_style_system():
    # two quadrics in four variables: expected a surface (dimension 2)
    v = ("a", "b", "c", "d")
    gens = [P("a*d - b*c", v), P("a*c - b^2", v)]
    assert ideal_dimension(gens, p=31) == 2


def test_budget_exceeded_message_is_explicit():
    gens = [Polynomial.parse("x^2 + y^2", ("x", "y")),
            Polynomial.parse("x*y", ("x", "y"))]
    with pytest.raises(BudgetExceeded, match="pair count"):
        ideal_dimension(gens, p=31, budget=GroebnerBudget(max_pairs=0))
