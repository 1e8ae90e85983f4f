"""Codimension arithmetic: rank-locus dimensions, stratum minima, the
headline bound, and the finite-field census with its polynomial fit."""

from math import comb

import pytest

from fanocheck.codim import (
    CodimError,
    census_exponent_fit,
    census_sym_rank,
    codim_table,
    fb_minimum,
    qr_codim_bounds,
    regularity_codim_bound,
    sym_rank_counts_bordered,
    sym_rank_locus_dim,
    theorem_bounds,
)


# ---------------------------------------------------------------------------
# rank loci in projectivized symmetric matrices
# ---------------------------------------------------------------------------

def test_rank_locus_dimensions():
    assert sym_rank_locus_dim(5, 4) == (13, 1)
    assert sym_rank_locus_dim(3, 2) == (4, 1)
    for M in (2, 5, 9):
        assert sym_rank_locus_dim(M, M) == (comb(M + 1, 2) - 1, 0)


def test_rank_locus_rejects_bad_rank():
    with pytest.raises(CodimError):
        sym_rank_locus_dim(5, 6)
    with pytest.raises(CodimError):
        sym_rank_locus_dim(5, 0)


def test_rank_locus_complement_identity():
    for M in range(1, 61):
        for r in range(1, M + 1):
            d = sym_rank_locus_dim(M, r)
            assert comb(M + 1, 2) - comb(r + 1, 2) - r * (M - r) == d.codim


def test_quadratic_point_locus_bounds():
    assert qr_codim_bounds(5, 4) == (7, 2, False)
    assert qr_codim_bounds(7, 4) == (14, 7, True)
    assert qr_codim_bounds(10, 4) == (32, 22, True)


# ---------------------------------------------------------------------------
# stratum minima
# ---------------------------------------------------------------------------

def test_curve_stratum_minimum():
    fb = fb_minimum(5)
    assert (fb.min_value, fb.argmin, fb.overall_min) == (11, 2, 8)
    assert fb.line_value == 8
    assert fb.values == (11, 13)  # F(2), F(3)
    fb10 = fb_minimum(10)
    assert (fb10.min_value, fb10.argmin, fb10.overall_min) == (61, 2, 38)


def test_curve_stratum_needs_room():
    with pytest.raises(CodimError, match="M >= 5"):
        fb_minimum(4)


def test_regularity_bound_values():
    b5 = regularity_codim_bound(5)
    assert b5.bound == 4
    assert b5.witnesses == ("smooth line term",)
    assert regularity_codim_bound(6).bound == 7
    assert regularity_codim_bound(8).bound == 16
    assert regularity_codim_bound(10).bound == 29


def test_regularity_bound_is_the_candidate_minimum():
    report = regularity_codim_bound(9)
    assert report.bound == min(v for _, v in report.candidates)
    assert all(report.bound <= v for _, v in report.candidates)


def test_theorem_bounds_values():
    assert theorem_bounds(5) == (2, 2, 4, 2)
    assert theorem_bounds(8) == (11, 11, 16, 5)
    assert theorem_bounds(10) == (22, 22, 29, 7)
    for M in range(5, 61):
        t = theorem_bounds(M)
        assert t.bound == comb(M - 3, 2) + 1
        assert t.gap == M - 3


def test_codim_table_structure():
    table = codim_table(6)
    assert table.M == 6
    assert len(table.rows) == 6
    assert [row.r for row in table.rows] == [1, 2, 3, 4, 5, 6]
    assert table.theorem_bound == theorem_bounds(6).bound
    assert table.rank_component == qr_codim_bounds(6, 4).locus_lower_bound
    assert table.regularity_bound == regularity_codim_bound(6).bound
    assert table.overall_min == fb_minimum(6).overall_min
    assert table.smooth_candidates and table.singular_candidates


# ---------------------------------------------------------------------------
# finite-field census
# ---------------------------------------------------------------------------

def test_census_small_exact_counts():
    res = census_sym_rank(2, 1, 3)
    assert (res.count, res.total, res.method) == (9, 27, "exhaustive")
    res = census_sym_rank(3, 2, 2)
    assert (res.count, res.total, res.method) == (36, 64, "exhaustive")


def test_census_full_rank_is_everything():
    res = census_sym_rank(4, 4, 5)
    assert res.method == "bordered"
    assert res.count == res.total == 5 ** 10


def test_bordered_rank_distribution():
    counts = sym_rank_counts_bordered(3, 2)
    assert counts == [1, 7, 28, 28]
    assert sum(counts) == 64


def test_bordered_agrees_with_exhaustive():
    for M, r, q in [(2, 1, 5), (3, 1, 3), (3, 2, 3)]:
        bordered = census_sym_rank(M, r, q, mode="bordered")
        exhaustive = census_sym_rank(M, r, q, mode="exhaustive")
        assert bordered.count == exhaustive.count


def test_sampled_census_is_labeled_and_deterministic():
    est = census_sym_rank(3, 2, 7, mode="sampled", seed=3, sample_size=2000)
    assert est.method == "sampled"
    assert est.seed == 3 and est.sample_size == 2000
    again = census_sym_rank(3, 2, 7, mode="sampled", seed=3, sample_size=2000)
    assert est.count == again.count
    exact = census_sym_rank(3, 2, 7, mode="bordered")
    assert abs(est.count - exact.count) < exact.total // 20


def test_census_input_validation():
    with pytest.raises(CodimError, match="must be prime"):
        census_sym_rank(3, 2, 6)
    with pytest.raises(CodimError, match="exceeds the"):
        census_sym_rank(4, 2, 7, mode="exhaustive")
    with pytest.raises(CodimError, match="unknown census mode"):
        census_sym_rank(3, 2, 5, mode="montecarlo")


def test_exponent_fit_small_pairs():
    fit = census_exponent_fit(2, 1)
    assert fit.expected_degree == 2
    assert fit.degree == 2
    assert fit.matches is True
    fit = census_exponent_fit(3, 2)
    assert fit.expected_degree == 5
    assert fit.degree == 5
    assert fit.matches is True


def test_exponent_fit_prime_validation():
    with pytest.raises(CodimError, match="needs at least"):
        census_exponent_fit(2, 1, primes=(2, 3))
    with pytest.raises(CodimError, match="distinct"):
        census_exponent_fit(2, 1, primes=(2, 3, 5, 5))
