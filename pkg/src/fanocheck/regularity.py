"""Line-finiteness regularity checks for hypersurface germs.

At a point of a degree-M hypersurface in projective M-space, expand the
equation locally as q_1 + q_2 + ... + q_M.  Any line through the point and
inside the hypersurface lies in every {q_i = 0}, so the union of such lines is
the cone cut out by the leading pieces:

* at a smooth point the check is that {q_1 = ... = q_{M-1} = 0} has affine
  dimension 1 (a cone over finitely many directions) — for homogeneous pieces
  this single top-level dimension forces every intermediate prefix to cut the
  expected dimension as well;
* at a singular point q_1 vanishes and the check moves to q_2, ..., q_M.

Dimensions come from the modular Groebner oracle.  A rational germ is reduced
modulo at least two primes, and a verdict is issued only when two reductions
decide and agree; a germ already defined over a prime field is decided by its
own field exactly.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

from .groebner import BudgetExceeded, DEFAULT_BUDGET, GroebnerBudget, ideal_dimension
from .polynomial import Polynomial, PolynomialError
from .singularities import (
    HypersurfaceGerm,
    SingularityClass,
    classify_point,
    local_expansion,
)

DEFAULT_PRIMES = (31, 101)

#: rank demanded of quadratic points by the headline locus statement
QUADRATIC_RANK_THRESHOLD = 5


@dataclass(frozen=True)
class RegularityReport:
    """Outcome of a line-finiteness check at one point."""

    point_class: str  # "smooth" | "singular"
    condition: int  # 1 (smooth) or 2 (singular)
    primes: tuple  # primes actually consulted
    expected_dimensions: tuple  # per truncation step
    dimensions: tuple  # (prime, tuple of dims with None = undecided step)
    verdict: str  # "pass" | "fail" | "undecided"
    undecided: bool
    classification: SingularityClass | None = None
    meets_rank_threshold: bool | None = None

    def dims_for(self, prime: int):
        for p, dims in self.dimensions:
            if p == prime:
                return dims
        raise KeyError(f"prime {prime} was not consulted")


def _run_steps(prefixes, prime: int | None, budget: GroebnerBudget):
    """Dimension of each generator prefix; None where the budget ran out."""
    dims = []
    for gens in prefixes:
        try:
            dims.append(ideal_dimension(gens, p=prime, budget=budget))
        except BudgetExceeded:
            dims.append(None)
    return tuple(dims)


def _decide(expected, per_prime):
    """Combine per-prime step dimensions into a verdict.

    A prime 'decides' when every step completed.  Rational inputs need at
    least two deciding primes in agreement; any disagreement between deciding
    primes is reported as undecided rather than trusting either reduction.
    """
    decided = [(p, dims) for p, dims in per_prime if all(d is not None for d in dims)]
    if not decided:
        return "undecided"
    reference = decided[0][1]
    if any(dims != reference for _, dims in decided[1:]):
        return "undecided"
    if len(decided) < 2:
        return "undecided"
    return "pass" if reference == expected else "fail"


def _check(germ: HypersurfaceGerm, degrees, expected, condition: int,
           point_class: str, primes, budget: GroebnerBudget,
           classification=None) -> RegularityReport:
    pieces = [germ.piece(d) for d in degrees]
    prefixes = [pieces[: i + 1] for i in range(len(pieces))]
    if germ.field is not None:
        # Exact computation over the germ's own field: one run decides.
        dims = _run_steps(prefixes, None, budget)
        per_prime = ((germ.field, dims),)
        if all(d is not None for d in dims):
            verdict = "pass" if dims == expected else "fail"
        else:
            verdict = "undecided"
        used = (germ.field,)
    else:
        used = tuple(dict.fromkeys(int(p) for p in primes))
        if len(used) < 2:
            raise PolynomialError(
                "rational germs need at least two primes for a verdict"
            )
        per_prime = []
        for p in used:
            try:
                reduced = [[q.to_gf(p) for q in gens] for gens in prefixes]
            except PolynomialError:
                # a denominator dies mod p: this prime cannot decide
                per_prime.append((p, tuple(None for _ in prefixes)))
                continue
            per_prime.append((p, _run_steps(reduced, p, budget)))
        per_prime = tuple(per_prime)
        verdict = _decide(expected, per_prime)
    meets = None
    if classification is not None:
        meets = classification.passes_rank(QUADRATIC_RANK_THRESHOLD)
    return RegularityReport(
        point_class=point_class,
        condition=condition,
        primes=used,
        expected_dimensions=expected,
        dimensions=tuple(per_prime),
        verdict=verdict,
        undecided=verdict == "undecided",
        classification=classification,
        meets_rank_threshold=meets,
    )


def check_condition1(germ: HypersurfaceGerm, primes=DEFAULT_PRIMES,
                     budget: GroebnerBudget = DEFAULT_BUDGET,
                     classification=None) -> RegularityReport:
    """Smooth-point check: {q_1 = ... = q_{M-1} = 0} must be a dimension-1 cone."""
    M = germ.ambient_dim
    if germ.piece(1).is_zero():
        raise PolynomialError(
            "condition 1 applies at smooth points only (the linear piece vanishes)"
        )
    if germ.max_degree < M - 1:
        raise PolynomialError(
            f"germ carries pieces up to degree {germ.max_degree}, "
            f"need them up to {M - 1}"
        )
    degrees = tuple(range(1, M))
    expected = tuple(M - k for k in range(1, M))
    return _check(germ, degrees, expected, 1, "smooth", primes, budget,
                  classification)


def check_condition2(germ: HypersurfaceGerm, primes=DEFAULT_PRIMES,
                     budget: GroebnerBudget = DEFAULT_BUDGET,
                     classification=None) -> RegularityReport:
    """Singular-point check: {q_2 = ... = q_M = 0} must be a dimension-1 cone."""
    M = germ.ambient_dim
    if not germ.piece(1).is_zero():
        raise PolynomialError(
            "condition 2 applies at singular points only (the linear piece is nonzero)"
        )
    if germ.max_degree < M:
        raise PolynomialError(
            f"germ carries pieces up to degree {germ.max_degree}, "
            f"need them up to {M}"
        )
    degrees = tuple(range(2, M + 1))
    expected = tuple(M - j + 1 for j in range(2, M + 1))
    return _check(germ, degrees, expected, 2, "singular", primes, budget,
                  classification)


def regularity_report(form: Polynomial, point: Sequence, primes=DEFAULT_PRIMES,
                      budget: GroebnerBudget = DEFAULT_BUDGET) -> RegularityReport:
    """Classify a point of a projective hypersurface and run the fitting check."""
    germ = local_expansion(form, point)
    classification = classify_point(germ)
    if classification.kind == "smooth":
        return check_condition1(germ, primes, budget, classification)
    return check_condition2(germ, primes, budget, classification)
