"""Blow-up stability of multiplicity-2 germs along coordinate centers.

A germ with a rank-r quadratic part, singular along the coordinate subspace
B = {z_1 = ... = z_k = 0} with multiplicity exactly 2, is brought to the
normal form  sum c_i u_i^2 + tail  (tail of degree >= 3 lying in the square of
the ideal of B) by an exact congruence diagonalization followed by a gradient
coordinate change inverted to a prescribed jet order.  Blowing up B chart by
chart, the strict transform's singular points on the exceptional fiber are
confined to an explicit linear space and are classified there: the expected
outcome is that every such point is smooth or again quadratic of rank >= r.

All arithmetic is exact over QQ; divisions by the square of the exceptional
coordinate are checked termwise.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .polynomial import Polynomial, PolynomialError, formal_inverse_compose
from .singularities import (
    HypersurfaceGerm,
    SingularityClass,
    classify_point,
    hessian_rank,
)


class BlowupError(ValueError):
    """A geometric precondition fails (center, multiplicity, or rank)."""


def claim_membership(tail: Polynomial, center_codim: int) -> bool:
    """True iff every monomial has degree >= 2 in the first center_codim variables.

    Raises when a term of total degree < 3 is present: the tail of a normal
    form starts in degree 3 by definition.
    """
    k = int(center_codim)
    if not 1 <= k <= tail.nvariables:
        raise PolynomialError(
            f"center codimension {k} out of range for {tail.nvariables} variables"
        )
    for exps, _ in tail.term_map().items():
        if sum(exps) < 3:
            raise PolynomialError(
                f"tail contains a term of degree {sum(exps)} < 3"
            )
    return all(sum(e[:k]) >= 2 for e in tail.term_map())


@dataclass(frozen=True)
class GermNormalForm:
    """Equation  sum_{i<=r} c_i z_i^2 + tail  around the center {z_1..z_k = 0}."""

    ambient_dim: int
    rank: int
    center_codim: int
    diagonal: tuple
    tail: Polynomial
    jet_order: int

    def __post_init__(self):
        n, r, k = self.ambient_dim, self.rank, self.center_codim
        if not 1 <= r <= k <= n:
            raise BlowupError(
                f"need 1 <= rank <= center codim <= ambient dim, got {r}, {k}, {n}"
            )
        if self.tail.field is not None:
            raise BlowupError("normal forms are rational: tail must live over QQ")
        if self.tail.nvariables != n:
            raise BlowupError(
                f"tail has {self.tail.nvariables} variables, expected {n}"
            )
        diag = tuple(Fraction(c) for c in self.diagonal)
        if len(diag) != r or any(c == 0 for c in diag):
            raise BlowupError("diagonal needs exactly rank-many nonzero entries")
        object.__setattr__(self, "diagonal", diag)
        if self.jet_order < 2:
            raise BlowupError("jet order must be at least 2")
        if not self.tail.is_zero():
            if self.tail.total_degree() > self.jet_order:
                raise BlowupError("tail exceeds the declared jet order")
            if not claim_membership(self.tail, k):
                raise BlowupError(
                    "tail has a term of degree < 2 in the center variables"
                )

    @property
    def variables(self) -> tuple:
        return self.tail.variables

    def equation(self) -> Polynomial:
        f = self.tail
        for i, c in enumerate(self.diagonal):
            exps = tuple(2 if t == i else 0 for t in range(self.ambient_dim))
            f = f + Polynomial.monomial(self.variables, exps, c)
        return f

    def to_json_dict(self) -> dict:
        return {
            "ambient_dim": self.ambient_dim,
            "rank": self.rank,
            "center_codim": self.center_codim,
            "diagonal": [str(c) for c in self.diagonal],
            "tail": self.tail.to_json_dict(),
            "jet_order": self.jet_order,
        }

    @classmethod
    def from_json_dict(cls, data) -> "GermNormalForm":
        try:
            return cls(
                ambient_dim=int(data["ambient_dim"]),
                rank=int(data["rank"]),
                center_codim=int(data["center_codim"]),
                diagonal=tuple(Fraction(c) for c in data["diagonal"]),
                tail=Polynomial.from_json_dict(data["tail"]),
                jet_order=int(data["jet_order"]),
            )
        except (KeyError, TypeError, ValueError) as exc:
            if isinstance(exc, BlowupError):
                raise
            raise PolynomialError(f"malformed germ record: {exc}") from exc


def _exact_quadratic_matrix(q2: Polynomial, k: int) -> list[list[Fraction]]:
    """k x k symmetric A with q2(z) = z^T A z (block variables only)."""
    mat = [[Fraction(0)] * k for _ in range(k)]
    for exps, c in q2.term_map().items():
        support = [i for i, e in enumerate(exps) if e]
        if any(i >= k for i in support):
            raise BlowupError(
                "quadratic part involves variables outside the center block"
            )
        if len(support) == 1:
            mat[support[0]][support[0]] = Fraction(c)
        else:
            i, j = support
            mat[i][j] = mat[j][i] = Fraction(c) / 2
    return mat


def congruence_diagonalize(mat: Sequence[Sequence[Fraction]]):
    """Exact symmetric elimination: returns (diagonal, P) with P^T A P diagonal.

    Pivot convention: the smallest remaining index with a nonzero diagonal
    entry; if the remaining diagonal vanishes, the lexicographically first
    nonzero off-diagonal pair (i, j) is split hyperbolically by the
    substitution z_i = u_i + u_j, z_j = u_i - u_j.  Nonzero diagonal entries
    are moved in front, so the result is (c_1, ..., c_r, 0, ..., 0).
    """
    k = len(mat)
    A = [[Fraction(x) for x in row] for row in mat]
    P = [[Fraction(1) if i == j else Fraction(0) for j in range(k)] for i in range(k)]

    def col_op(target: int, source: int, factor: Fraction) -> None:
        # column target += factor * column source, congruently (rows too)
        for m in range(k):
            A[m][target] += factor * A[m][source]
        for m in range(k):
            A[target][m] += factor * A[source][m]
        for m in range(k):
            P[m][target] += factor * P[m][source]

    remaining = list(range(k))
    used: list[int] = []
    while remaining:
        piv = next((i for i in remaining if A[i][i]), None)
        if piv is None:
            pair = None
            for i in remaining:
                for j in remaining:
                    if j > i and A[i][j]:
                        pair = (i, j)
                        break
                if pair:
                    break
            if pair is None:
                break  # the rest of the form vanishes
            i, j = pair
            # z_i = u_i + u_j, z_j = u_i - u_j
            colA_i = [A[m][i] for m in range(k)]
            colA_j = [A[m][j] for m in range(k)]
            for m in range(k):
                A[m][i] = colA_i[m] + colA_j[m]
                A[m][j] = colA_i[m] - colA_j[m]
            rowA_i = A[i][:]
            rowA_j = A[j][:]
            for m in range(k):
                A[i][m] = rowA_i[m] + rowA_j[m]
                A[j][m] = rowA_i[m] - rowA_j[m]
            colP_i = [P[m][i] for m in range(k)]
            colP_j = [P[m][j] for m in range(k)]
            for m in range(k):
                P[m][i] = colP_i[m] + colP_j[m]
                P[m][j] = colP_i[m] - colP_j[m]
            piv = i
        for m in remaining:
            if m != piv and A[piv][m]:
                col_op(m, piv, -A[piv][m] / A[piv][piv])
        used.append(piv)
        remaining.remove(piv)
    order = used + [i for i in range(k) if i not in used]
    diag = [A[i][i] for i in used]
    P_final = [[P[m][order[t]] for t in range(k)] for m in range(k)]
    return diag, P_final


def normalize_germ(f: Polynomial, center_codim: int,
                   jet_order: int | None = None) -> GermNormalForm:
    """Normal form of a multiplicity-2 germ singular along {z_1..z_k = 0}.

    Checks that the equation vanishes on the center to order exactly 2 and
    that the center sits inside the singular locus; diagonalizes the quadratic
    part by an exact congruence; straightens the gradient coordinates and
    inverts the change to the jet order.  The output tail is re-verified by
    claim_membership.
    """
    if f.field is not None:
        raise BlowupError("germ normalization works over QQ")
    if f.is_zero():
        raise BlowupError("zero equation has no germ")
    n = f.nvariables
    k = int(center_codim)
    if not 1 <= k <= n:
        raise BlowupError(f"center codimension {k} out of range for {n} variables")
    if jet_order is None:
        jet_order = max(4, f.total_degree())
    if jet_order < 2:
        raise BlowupError("jet order must be at least 2")
    f = f.truncate(jet_order)
    if f.constant_term() or not f.homogeneous_component(1).is_zero():
        raise BlowupError("equation is not singular at the origin")
    block = range(k)
    min_block = f.min_degree_in(block)
    if min_block == 0:
        raise BlowupError("equation does not vanish along the center")
    if min_block == 1:
        raise BlowupError("center is not inside the singular locus")
    if min_block > 2:
        raise BlowupError(
            f"multiplicity along the center is {min_block}, expected exactly 2"
        )
    quad = f.homogeneous_component(2)
    if quad.is_zero():
        raise BlowupError(
            "degenerate quadratic part: no degree-2 terms to diagonalize"
        )
    diag, P = congruence_diagonalize(_exact_quadratic_matrix(quad, k))
    r = len(diag)
    variables = f.variables
    images = []
    for m in range(n):
        if m < k:
            terms = {
                tuple(1 if t == j else 0 for t in range(n)): P[m][j]
                for j in range(k)
                if P[m][j]
            }
            images.append(Polynomial(variables, terms))
        else:
            images.append(Polynomial.variable(variables, variables[m]))
    f1 = f.substitute(images, max_degree=jet_order)
    expected_quad = Polynomial(
        variables,
        {
            tuple(2 if t == i else 0 for t in range(n)): c
            for i, c in enumerate(diag)
        },
    )
    if f1.homogeneous_component(2) != expected_quad:
        raise ArithmeticError("congruence diagonalization failed verification")
    tail1 = f1 - expected_quad
    if tail1.is_zero():
        return GermNormalForm(n, r, k, tuple(diag), tail1, jet_order)
    change = []
    for i in range(n):
        v = Polynomial.variable(variables, variables[i])
        if i < r:
            v = v + tail1.derivative(i).scale(Fraction(1, 2) / diag[i])
        change.append(v)
    inverse = formal_inverse_compose(change, jet_order)
    g = f1.substitute(inverse, max_degree=jet_order)
    if g.truncate(2) != expected_quad:
        raise ArithmeticError("gradient change disturbed the quadratic part")
    tail_out = g - expected_quad
    if not tail_out.is_zero() and not claim_membership(tail_out, k):
        raise ArithmeticError(
            "normal-form tail escaped the square of the center ideal"
        )
    return GermNormalForm(n, r, k, tuple(diag), tail_out, jet_order)


@dataclass(frozen=True)
class ChartTransform:
    """One affine chart of the blow-up along {z_1..z_k = 0}."""

    chart_index: int  # 1-based, which center variable is the radial one
    variables: tuple  # t-slots for the other center variables, then the rest
    strict_transform: Polynomial
    radial_index: int  # position of the radial variable within `variables`
    fiber_indices: tuple  # positions of the t-variables
    jet_order: int


def blowup_chart(g: GermNormalForm, chart_index: int) -> ChartTransform:
    """Strict transform in chart i: z_j = t_j * z_i (j <= k), divided by z_i^2."""
    i = int(chart_index)
    k, n = g.center_codim, g.ambient_dim
    if not 1 <= i <= k:
        raise BlowupError(f"chart index {i} out of range 1..{k}")
    old = g.variables
    kept = {old[i - 1]} | set(old[k:])
    prefix = "t"
    while any(f"{prefix}{j}" in kept for j in range(1, k + 1)):
        prefix += "t"
    chart_vars = []
    for j in range(k):
        chart_vars.append(old[i - 1] if j == i - 1 else f"{prefix}{j + 1}")
    chart_vars.extend(old[k:])
    chart_vars = tuple(chart_vars)
    radial = Polynomial.variable(chart_vars, old[i - 1])
    images = []
    for m in range(n):
        if m < k and m != i - 1:
            images.append(Polynomial.variable(chart_vars, chart_vars[m]) * radial)
        elif m == i - 1:
            images.append(radial)
        else:
            images.append(Polynomial.variable(chart_vars, chart_vars[m]))
    total = g.equation().substitute(images)
    rad_pos = i - 1
    strict_terms = {}
    for exps, c in total.term_map().items():
        if exps[rad_pos] < 2:
            raise BlowupError(
                "total transform is not divisible by the square of the "
                "exceptional coordinate (multiplicity bookkeeping error)"
            )
        e = list(exps)
        e[rad_pos] -= 2
        strict_terms[tuple(e)] = c
    strict = Polynomial(chart_vars, strict_terms)
    fiber = tuple(j for j in range(k) if j != i - 1)
    return ChartTransform(
        chart_index=i,
        variables=chart_vars,
        strict_transform=strict,
        radial_index=rad_pos,
        fiber_indices=fiber,
        jet_order=g.jet_order,
    )


@dataclass(frozen=True)
class CandidateClassification:
    point: tuple  # full chart coordinates (Fractions)
    classification: SingularityClass


@dataclass(frozen=True)
class ChartReport:
    chart_index: int
    inside_rank_block: bool  # radial direction hits the diagonalized block
    candidates_empty: bool
    fiber_quadric_rank: int | None
    points: tuple


def _fiber_restriction(ct: ChartTransform) -> Polynomial:
    ring = ct.variables
    images = []
    fiber = set(ct.fiber_indices)
    for m, v in enumerate(ring):
        if m in fiber:
            images.append(Polynomial.variable(ring, v))
        else:
            images.append(Polynomial.zero(ring))
    return ct.strict_transform.substitute(images)


def exceptional_candidates(ct: ChartTransform, g: GermNormalForm,
                           samples: int = 4, seed: int = 0) -> ChartReport:
    """Locate and classify the singular candidates on the exceptional fiber.

    The Jacobian of the strict transform, restricted to the fiber, vanishes
    only where the diagonalized coordinates t_1..t_r do, so candidates live in
    that linear slice.  For charts inside the rank block the strict transform
    is a nonzero constant there (no candidates); outside, the slice's origin
    and seed-sampled rational points are classified after recentering.
    """
    i, r, k = ct.chart_index, g.rank, g.center_codim
    ring = ct.variables
    n = len(ring)
    restriction = _fiber_restriction(ct)
    expected = Polynomial.zero(ring)
    for j, c in enumerate(g.diagonal):
        if j == i - 1:
            expected = expected + Polynomial.constant(ring, c)
        else:
            exps = tuple(2 if t == j else 0 for t in range(n))
            expected = expected + Polynomial.monomial(ring, exps, c)
    if restriction != expected:
        raise ArithmeticError(
            "fiber restriction of the strict transform is not the expected quadric"
        )
    # Gradient claim on the fiber: d/dt_j of the strict transform restricts to
    # 2 c_j t_j for every diagonal slot j != i, pinning candidates to t_<=r = 0.
    for j in range(r):
        if j == i - 1:
            continue
        img = []
        fiber = set(ct.fiber_indices)
        for m, v in enumerate(ring):
            img.append(
                Polynomial.variable(ring, v) if m in fiber else Polynomial.zero(ring)
            )
        partial = ct.strict_transform.derivative(j).substitute(img)
        exps = tuple(1 if t == j else 0 for t in range(n))
        if partial != Polynomial.monomial(ring, exps, 2 * g.diagonal[j]):
            raise ArithmeticError(
                "fiber gradient is not the diagonal quadric gradient"
            )
    inside = i <= r
    if inside:
        # On {t_j = 0 : j <= r} the strict transform equals c_i != 0: no
        # singular candidates meet the fiber in this chart.
        free = [m for m in ct.fiber_indices if m >= r]
        slice_images = []
        for m, v in enumerate(ring):
            if m in free:
                slice_images.append(Polynomial.variable(ring, v))
            elif m == ct.radial_index or m >= k:
                slice_images.append(Polynomial.zero(ring))
            else:
                slice_images.append(Polynomial.zero(ring))
        on_slice = ct.strict_transform.substitute(slice_images)
        if on_slice != Polynomial.constant(ring, g.diagonal[i - 1]):
            raise ArithmeticError(
                "inside-block chart slice is not the expected nonzero constant"
            )
        return ChartReport(
            chart_index=i,
            inside_rank_block=True,
            candidates_empty=True,
            fiber_quadric_rank=None,
            points=(),
        )
    fiber_rank = hessian_rank(restriction.homogeneous_component(2))
    if fiber_rank != r:
        raise ArithmeticError(
            f"exceptional fiber quadric has rank {fiber_rank}, expected {r}"
        )
    free = [m for m in ct.fiber_indices if m >= r]
    rng = random.Random(seed)
    raw_points = [tuple(Fraction(0) for _ in free)]
    for _ in range(samples):
        raw_points.append(
            tuple(
                Fraction(rng.randint(-3, 3), rng.randint(1, 2)) for _ in free
            )
        )
    seen = set()
    reports = []
    for raw in raw_points:
        if raw in seen:
            continue
        seen.add(raw)
        vec = [Fraction(0)] * n
        for pos, value in zip(free, raw):
            vec[pos] = value
        if ct.strict_transform.evaluate(vec):
            raise ArithmeticError("candidate point escaped the strict transform")
        shifted = ct.strict_transform.taylor_shift(vec)
        germ = HypersurfaceGerm.from_polynomial(shifted)
        reports.append(
            CandidateClassification(tuple(vec), classify_point(germ))
        )
    return ChartReport(
        chart_index=i,
        inside_rank_block=False,
        candidates_empty=False,
        fiber_quadric_rank=fiber_rank,
        points=tuple(reports),
    )


@dataclass(frozen=True)
class StabilityReport:
    rank_threshold: int
    precondition_ok: bool
    charts: tuple
    violations: tuple  # (chart_index, CandidateClassification)
    verdict: bool
    jet_order: int


def verify_theorem4(g: GermNormalForm, rank_threshold: int | None = None,
                    samples: int = 4, seed: int = 0) -> StabilityReport:
    """Blow up the center chart by chart and confirm singularity stability.

    PASS means: every singular candidate on the exceptional fiber is either a
    smooth point of the strict transform or a quadratic point of rank >= the
    threshold, and the input germ itself meets the threshold.
    """
    threshold = g.rank if rank_threshold is None else int(rank_threshold)
    precondition_ok = g.rank >= threshold
    charts = []
    violations = []
    for i in range(1, g.center_codim + 1):
        ct = blowup_chart(g, i)
        report = exceptional_candidates(ct, g, samples=samples, seed=seed + i)
        charts.append(report)
        for pt in report.points:
            if not pt.classification.passes_rank(threshold):
                violations.append((i, pt))
    return StabilityReport(
        rank_threshold=threshold,
        precondition_ok=precondition_ok,
        charts=tuple(charts),
        violations=tuple(violations),
        verdict=precondition_ok and not violations,
        jet_order=g.jet_order,
    )
