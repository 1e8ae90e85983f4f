"""Exact quadratic minimization over resolution-graph constraint polytopes.

A tower of blow-ups is abstracted as a DAG on vertices 1..K (the chain edge
i -> i-1 is mandatory), split into a lower part (centers of codimension >= 3,
indices <= lower_len) and an upper part (codimension 2), with the leading
mult2_len lower vertices carrying multiplicity-2 centers.  Each vertex
contributes a discrepancy delta_i = codim_i - 2 on the multiplicity-2 range
and codim_i - 1 beyond it, weighted by the number p_i of paths from the top
vertex.

The certified quantity is the minimum of

    q(nu) = 2 * sum_{i <= mult2_len} p_i nu_i^2 + sum_{i > mult2_len} p_i nu_i^2

over the polytope { sum p_i nu_i = sum p_i delta_i,  nu_1 >= ... >= nu_m,
2 nu_m >= nu_{m+1} >= ... >= nu_K >= 0 } (m = mult2_len), in units of n and
n^2.  The closed form groups the variables into two equal-value blocks with a
factor-2 jump; an active-set enumeration oracle re-derives the same minimum by
exact linear algebra on every face of the polytope.  Dividing by the lower
path weight turns the minimum into the coefficient c with mult > c * n^2; on
graphs meeting covering-rank context (codimension >= 4 on the multiplicity-2
range) the coefficient exceeds 4 with provably positive integer slack.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from typing import NamedTuple


class GraphError(ValueError):
    """Malformed or invalid resolution graph."""


@dataclass(frozen=True)
class BlowupGraph:
    """Abstract blow-up tower: sizes, center codimensions, and the path DAG."""

    length: int       # number of blow-ups K
    lower_len: int    # L: centers 1..L have codimension >= 3
    mult2_len: int    # L_*: centers 1..L_* have multiplicity exactly 2
    codims: tuple     # codimension of the i-th center, i = 1..K
    edges: frozenset  # ordered pairs (j, i) with j > i

    def __post_init__(self):
        object.__setattr__(self, "codims", tuple(int(c) for c in self.codims))
        object.__setattr__(
            self, "edges", frozenset((int(j), int(i)) for j, i in self.edges)
        )

    def to_json_dict(self) -> dict:
        return {
            "length": self.length,
            "lower_len": self.lower_len,
            "mult2_len": self.mult2_len,
            "codims": list(self.codims),
            "edges": sorted([j, i] for j, i in self.edges),
        }

    @classmethod
    def from_json_dict(cls, data) -> "BlowupGraph":
        try:
            return cls(
                length=int(data["length"]),
                lower_len=int(data["lower_len"]),
                mult2_len=int(data["mult2_len"]),
                codims=tuple(int(c) for c in data["codims"]),
                edges=frozenset((int(j), int(i)) for j, i in data["edges"]),
            )
        except (KeyError, TypeError, ValueError) as exc:
            raise GraphError(f"malformed graph record: {exc}") from exc


def chain_graph(codims, lower_len: int, mult2_len: int) -> BlowupGraph:
    """Graph whose only edges are the mandatory chain i -> i-1."""
    K = len(codims)
    return BlowupGraph(
        length=K,
        lower_len=lower_len,
        mult2_len=mult2_len,
        codims=tuple(codims),
        edges=frozenset((i + 1, i) for i in range(1, K)),
    )


@dataclass(frozen=True)
class GraphValidity:
    level: str     # "invalid" | "well-formed" | "rank5-context"
    reasons: tuple  # why the graph failed the next level up
    discrepancies: tuple | None  # delta_i when not invalid


def validate_graph(g: BlowupGraph) -> GraphValidity:
    """Check the structural invariants and compute discrepancies.

    "well-formed" means the sizes, codimension regimes, and chain edges all
    hold; "rank5-context" additionally demands codimension >= 4 on the whole
    multiplicity-2 range, the regime in which every delta there is >= 2 and
    the bound coefficient provably exceeds 4.
    """
    problems = []
    K, L, Ls = g.length, g.lower_len, g.mult2_len
    if K < 1:
        problems.append(f"length must be >= 1, got {K}")
    if not 1 <= L <= max(K, 1):
        problems.append(f"lower_len must satisfy 1 <= L <= {K}, got {L}")
    if not 1 <= Ls <= max(L, 1):
        problems.append(f"mult2_len must satisfy 1 <= L_* <= {L}, got {Ls}")
    if len(g.codims) != K:
        problems.append(f"expected {K} codims, got {len(g.codims)}")
    if problems:
        return GraphValidity("invalid", tuple(problems), None)
    for i, c in enumerate(g.codims, start=1):
        if c < 2:
            problems.append(f"codim of center {i} must be >= 2, got {c}")
        elif i <= L and c < 3:
            problems.append(
                f"center {i} is in the lower part, codim must be >= 3, got {c}"
            )
        elif i > L and c != 2:
            problems.append(
                f"center {i} is in the upper part, codim must be 2, got {c}"
            )
    for j, i in g.edges:
        if not 1 <= i < j <= K:
            problems.append(f"edge {j}->{i} must satisfy 1 <= i < j <= {K}")
    for i in range(2, K + 1):
        if (i, i - 1) not in g.edges:
            problems.append(f"edge {i}->{i - 1} required (blow-up chain)")
    if problems:
        return GraphValidity("invalid", tuple(problems), None)
    delta = tuple(
        c - 2 if i <= Ls else c - 1 for i, c in enumerate(g.codims, start=1)
    )
    context = [
        f"center {i} needs codim >= 4 in covering-rank context, got {c}"
        for i, c in enumerate(g.codims[:Ls], start=1)
        if c < 4
    ]
    if context:
        return GraphValidity("well-formed", tuple(context), delta)
    return GraphValidity("rank5-context", (), delta)


def _require_valid(g: BlowupGraph) -> GraphValidity:
    v = validate_graph(g)
    if v.level == "invalid":
        raise GraphError("invalid graph: " + "; ".join(v.reasons))
    return v


def discrepancies(g: BlowupGraph) -> tuple:
    return _require_valid(g).discrepancies


def path_counts(g: BlowupGraph) -> tuple:
    """Number of DAG paths from the top vertex K down to each vertex."""
    _require_valid(g)
    K = g.length
    p = [0] * (K + 1)
    p[K] = 1
    into = {i: [] for i in range(1, K + 1)}
    for j, i in g.edges:
        into[i].append(j)
    for i in range(K - 1, 0, -1):
        p[i] = sum(p[j] for j in into[i])
    return tuple(p[1:])


class Aggregates(NamedTuple):
    sum_mult2: int       # paths into the multiplicity-2 range (i <= L_*)
    sum_rest: int        # paths into everything above it (i > L_*)
    sum_lower: int       # paths into the lower part (i <= L)
    sum_lower_rest: int  # paths into L_* < i <= L
    sum_upper: int       # paths into the upper part (i > L)


def aggregates(g: BlowupGraph) -> Aggregates:
    """Path-count block sums; the two defining identities are asserted."""
    p = path_counts(g)
    L, Ls = g.lower_len, g.mult2_len
    agg = Aggregates(
        sum_mult2=sum(p[:Ls]),
        sum_rest=sum(p[Ls:]),
        sum_lower=sum(p[:L]),
        sum_lower_rest=sum(p[Ls:L]),
        sum_upper=sum(p[L:]),
    )
    if agg.sum_lower != agg.sum_mult2 + agg.sum_lower_rest:
        raise ArithmeticError("lower-part path sum identity failed")
    if agg.sum_rest != agg.sum_lower_rest + agg.sum_upper:
        raise ArithmeticError("upper-part path sum identity failed")
    return agg


@dataclass(frozen=True)
class NFBoundReport:
    """Everything the closed-form minimization produces, in units of n, n^2."""

    validity: GraphValidity
    applicable: bool            # graph is rank5-context valid
    path_counts: tuple
    discrepancies: tuple
    sum_mult2: int
    sum_rest: int
    sum_lower: int
    sum_lower_rest: int
    sum_upper: int
    base_multiplicity: Fraction  # optimal value on the multiplicity-2 block
    quadratic_minimum: Fraction  # minimum of q over the polytope
    bound_coefficient: Fraction  # quadratic_minimum / sum_lower
    bound_floor: Fraction        # relaxed lower bound from delta >= 2
    inequality_slack: int        # 2*Sl^2 + Su^2 - 2*Sl*Sl^*
    optimum: tuple               # minimizing nu vector
    ordering_all_active: bool    # the chain inequalities all bind at optimum
    positivity_active: bool      # whether any nu_i = 0 at the optimum
    below_context: tuple         # lower-part indices with delta < 2
    direct_bound: Fraction       # 2 * nu_1^2 at the optimum
    direct_route_applies: bool   # nu_1 >= sqrt(2): the direct bound covers 4
    exceeds_4: bool
    verdict: bool


def closed_form_bound(g: BlowupGraph) -> NFBoundReport:
    """Exact two-block minimization of the weighted quadratic.

    The minimizer sets nu_i = theta on the multiplicity-2 range and 2*theta
    above it, where theta solves the single linear constraint; this makes
    every chain inequality active with the factor-2 jump at the block border
    and yields q = 2 theta^2 (S_* + 2 S^*).
    """
    v = _require_valid(g)
    p = path_counts(g)
    delta = v.discrepancies
    agg = aggregates(g)
    s_star, s_rest = agg.sum_mult2, agg.sum_rest
    s_l, s_l_rest, s_u = agg.sum_lower, agg.sum_lower_rest, agg.sum_upper
    target = sum(pi * di for pi, di in zip(p, delta))
    denom = s_star + 2 * s_rest
    theta = Fraction(target, denom)
    mu = 2 * theta * theta * denom
    c = mu / s_l
    floor = Fraction(2 * (2 * s_l + s_u) ** 2, s_l * denom)
    slack = 2 * s_l * s_l + s_u * s_u - 2 * s_l * s_l_rest
    if slack != (2 * s_l + s_u) ** 2 - 2 * s_l * denom:
        raise ArithmeticError("slack identity (expanded form) failed")
    if slack != 2 * s_l * s_star + s_u * s_u:
        raise ArithmeticError("slack identity (factored form) failed")
    Ls = g.mult2_len
    optimum = tuple(
        theta if i <= Ls else 2 * theta for i in range(1, g.length + 1)
    )
    below = tuple(
        i for i in range(1, g.lower_len + 1) if delta[i - 1] < 2
    )
    direct = 2 * theta * theta
    applicable = v.level == "rank5-context"
    return NFBoundReport(
        validity=v,
        applicable=applicable,
        path_counts=p,
        discrepancies=delta,
        sum_mult2=s_star,
        sum_rest=s_rest,
        sum_lower=s_l,
        sum_lower_rest=s_l_rest,
        sum_upper=s_u,
        base_multiplicity=theta,
        quadratic_minimum=mu,
        bound_coefficient=c,
        bound_floor=floor,
        inequality_slack=slack,
        optimum=optimum,
        ordering_all_active=True,
        positivity_active=any(x == 0 for x in optimum),
        below_context=below,
        direct_bound=direct,
        direct_route_applies=theta * theta >= 2,
        exceeds_4=c > 4,
        verdict=applicable and c > 4,
    )


class OracleResult(NamedTuple):
    value: Fraction   # minimum of q over the polytope
    optimum: tuple    # minimizing nu vector
    active: frozenset  # indices of the constraints active at the minimum


def brute_force_bound(g: BlowupGraph, max_vertices: int = 10) -> OracleResult:
    """Independent minimization oracle by exhaustive active-set enumeration.

    Constraint t (1 <= t < K) ties nu_t >= nu_{t+1}, with the factor-2 form
    2 nu_m >= nu_{m+1} at the block border m = mult2_len; constraint K is
    nu_K >= 0.  For every subset taken as equalities, tied variables merge
    into blocks and the equality-constrained minimum solves in closed form by
    one Lagrange multiplier on the diagonal quadratic; feasible candidates
    compete for the minimum.  Convexity makes this enumeration exact: the true
    minimizer is the feasible candidate of its own active set.
    """
    v = _require_valid(g)
    K = g.length
    if K > max_vertices:
        raise GraphError(
            f"oracle budget is {max_vertices} vertices, graph has {K}"
        )
    p = path_counts(g)
    delta = v.discrepancies
    Ls = g.mult2_len
    weights = [2 * p[i] if i < Ls else p[i] for i in range(K)]
    target = sum(pi * di for pi, di in zip(p, delta))
    best = None
    for active in itertools.product((False, True), repeat=K):
        # factors relative to each block leader; crossing an active tie at the
        # block border doubles the factor
        factors = [Fraction(1)] * K
        leader = [0] * K
        for t in range(K - 1):
            if active[t]:
                leader[t + 1] = leader[t]
                factors[t + 1] = factors[t] * (2 if t + 1 == Ls else 1)
            else:
                leader[t + 1] = t + 1
        blocks = {}
        for i in range(K):
            blocks.setdefault(leader[i], []).append(i)
        pinned = leader[K - 1] if active[K - 1] else None
        free = [b for b in blocks if b != pinned]
        if not free:
            continue  # everything pinned to zero cannot meet the target
        U = {b: sum(p[i] * factors[i] for i in blocks[b]) for b in free}
        W = {b: sum(weights[i] * factors[i] ** 2 for i in blocks[b]) for b in free}
        denom = sum(U[b] ** 2 / W[b] for b in free)
        lead_values = {b: target * (U[b] / W[b]) / denom for b in free}
        if pinned is not None:
            lead_values[pinned] = Fraction(0)
        nu = [lead_values[leader[i]] * factors[i] for i in range(K)]
        if any(x < 0 for x in nu):
            continue
        feasible = all(
            (2 * nu[t] if t + 1 == Ls else nu[t]) >= nu[t + 1]
            for t in range(K - 1)
        )
        if not feasible:
            continue
        if sum(pi * x for pi, x in zip(p, nu)) != target:
            raise ArithmeticError("oracle face lost the linear constraint")
        value = sum(w * x * x for w, x in zip(weights, nu))
        if best is None or value < best.value:
            best = OracleResult(
                value=value,
                optimum=tuple(nu),
                active=frozenset(t + 1 for t in range(K) if active[t]),
            )
    if best is None:
        raise ArithmeticError("oracle found no feasible face")
    if any(x == 0 for x in best.optimum):
        raise ArithmeticError(
            "positivity became active at the oracle optimum"
        )
    return best


@dataclass(frozen=True)
class FourNSquaredReport:
    applicable: bool
    verdict: bool
    slack: int
    equivalence_ok: bool
    bound: NFBoundReport


def verify_4n2(g: BlowupGraph) -> FourNSquaredReport:
    """Certify coefficient > 4 with positive integer slack, where applicable.

    On graphs outside covering-rank context the verdict is "not applicable"
    (False) and the coefficient is still reported — codimension-3 point
    centers genuinely stop at coefficient 2.
    """
    report = closed_form_bound(g)
    slack = report.inequality_slack
    agg_equiv = (
        slack
        == (2 * report.sum_lower + report.sum_upper) ** 2
        - 2 * report.sum_lower * (report.sum_mult2 + 2 * report.sum_rest)
    )
    if not report.applicable:
        return FourNSquaredReport(
            applicable=False,
            verdict=False,
            slack=slack,
            equivalence_ok=agg_equiv,
            bound=report,
        )
    verdict = slack > 0 and report.bound_coefficient > 4
    return FourNSquaredReport(
        applicable=True,
        verdict=verdict,
        slack=slack,
        equivalence_ok=agg_equiv,
        bound=report,
    )
