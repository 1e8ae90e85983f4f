"""Request handling shared by the HTTP API and the command-line client.

Every handler takes plain JSON-ready values, runs the corresponding core
routine, and returns a plain dict payload (strings for exact rationals, ints,
bools, lists).  Payloads are deterministic for a given input and seed, so the
canonical JSON rendering is byte-identical across runs and across the
in-process/HTTP transports.  `exit_code_for` maps any payload to the process
exit convention: 0 success/pass, 1 negative verdict, 2 malformed input
(raised as InputError before a payload exists), 3 undecided.
"""

from __future__ import annotations

import json
import os
from fractions import Fraction

from .blowup import BlowupError, GermNormalForm, normalize_germ, verify_theorem4
from .codim import (
    CodimError,
    census_exponent_fit,
    census_sym_rank,
    codim_table,
)
from .groebner import DEFAULT_BUDGET, GroebnerBudget
from .nfopt import (
    BlowupGraph,
    GraphError,
    brute_force_bound,
    closed_form_bound,
    verify_4n2,
)
from .polynomial import FieldMismatchError, Polynomial, PolynomialError
from .regularity import DEFAULT_PRIMES, check_condition1, check_condition2
from .singularities import (
    SamplingError,
    classify_point,
    local_expansion,
    scan_census,
)

PRIMES_ENV = "FANOCHECK_PRIMES"

_INPUT_ERRORS = (
    PolynomialError,
    FieldMismatchError,
    BlowupError,
    GraphError,
    CodimError,
)


class InputError(ValueError):
    """Unusable request input: the transport maps this to exit 2 / HTTP 422."""


def _guard(fn, *args, **kwargs):
    try:
        return fn(*args, **kwargs)
    except _INPUT_ERRORS as exc:
        raise InputError(str(exc)) from exc


def parse_point(values) -> list:
    """Point coordinates from a comma-separated string or a list of strings."""
    if isinstance(values, str):
        values = [v.strip() for v in values.split(",")]
    try:
        return [Fraction(str(v)) for v in values]
    except (ValueError, ZeroDivisionError) as exc:
        raise InputError(f"unreadable point coordinate: {exc}") from exc


def default_primes(explicit=None) -> tuple:
    """Primes for rational-germ checks: explicit > environment > built-in."""
    if explicit:
        return tuple(int(p) for p in explicit)
    env = os.environ.get(PRIMES_ENV, "").strip()
    if env:
        try:
            return tuple(int(tok) for tok in env.replace(",", " ").split())
        except ValueError as exc:
            raise InputError(
                f"unreadable {PRIMES_ENV} value {env!r}: {exc}"
            ) from exc
    return DEFAULT_PRIMES


def budget_from(max_pairs=None) -> GroebnerBudget:
    if max_pairs is None:
        return DEFAULT_BUDGET
    max_pairs = int(max_pairs)
    if max_pairs < 0:
        raise InputError("budget must be non-negative")
    return GroebnerBudget(
        max_pairs=max_pairs,
        max_degree=DEFAULT_BUDGET.max_degree,
        max_basis=DEFAULT_BUDGET.max_basis,
    )


def load_json_file(path: str) -> dict:
    try:
        with open(path, "r", encoding="utf-8") as fh:
            return json.load(fh)
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise InputError(f"{path} is not valid JSON: {exc}") from exc


def polynomial_from(data) -> Polynomial:
    if not isinstance(data, dict):
        raise InputError("polynomial record must be a JSON object")
    return _guard(Polynomial.from_json_dict, data)


def _classification_dict(cls) -> dict:
    return {
        "kind": cls.kind,
        "rank": cls.rank,
        "multiplicity": cls.multiplicity,
        "label": str(cls),
    }


def _fractions(values) -> list:
    return [str(v) for v in values]


# ---------------------------------------------------------------------------
# handlers
# ---------------------------------------------------------------------------

def classify_payload(poly_data: dict, point, min_rank=None) -> dict:
    form = polynomial_from(poly_data)
    coords = parse_point(point)
    germ = _guard(local_expansion, form, coords)
    cls = classify_point(germ)
    meets = None if min_rank is None else cls.passes_rank(int(min_rank))
    return {
        "command": "classify",
        "point": _fractions(coords),
        "classification": _classification_dict(cls),
        "min_rank": None if min_rank is None else int(min_rank),
        "meets_min_rank": meets,
    }


def classify_scan_payload(poly_data: dict, min_rank: int = 5,
                          samples: int = 25, seed: int = 0,
                          points=None) -> dict:
    form = polynomial_from(poly_data)
    if form.field is None:
        raise InputError(
            "census scanning needs a polynomial over a prime field"
        )
    supplied = None
    if points is not None:
        supplied = [parse_point(pt) for pt in points]
    try:
        report = _guard(
            scan_census,
            form,
            form.field,
            min_rank=int(min_rank),
            samples=int(samples),
            seed=int(seed),
            points=supplied,
        )
    except SamplingError as exc:
        return {
            "command": "classify-scan",
            "prime": form.field,
            "min_rank": int(min_rank),
            "samples": int(samples),
            "seed": int(seed),
            "verdict": "undecided",
            "error": str(exc),
        }
    return {
        "command": "classify-scan",
        "prime": report.prime,
        "min_rank": report.min_rank,
        "samples": int(samples),
        "seed": int(seed),
        "rows": [
            {
                "point": _fractions(row.point),
                "classification": _classification_dict(row.classification),
            }
            for row in report.rows
        ],
        "violations": [
            {
                "point": _fractions(row.point),
                "classification": _classification_dict(row.classification),
            }
            for row in report.violations
        ],
        "verdict": report.verdict,
        "note": report.note,
    }


def regularity_payload(poly_data: dict, point, primes=None,
                       budget_pairs=None) -> dict:
    form = polynomial_from(poly_data)
    coords = parse_point(point)
    germ = _guard(local_expansion, form, coords)
    cls = classify_point(germ)
    budget = budget_from(budget_pairs)
    primes = default_primes(primes)
    if cls.kind == "smooth":
        report = _guard(check_condition1, germ, primes, budget, cls)
    else:
        report = _guard(check_condition2, germ, primes, budget, cls)
    return {
        "command": "regularity",
        "point": _fractions(coords),
        "point_class": report.point_class,
        "condition": report.condition,
        "primes": list(report.primes),
        "expected_dimensions": list(report.expected_dimensions),
        "dimensions": [
            {"prime": p, "dims": list(dims)} for p, dims in report.dimensions
        ],
        "verdict": report.verdict,
        "undecided": report.undecided,
        "classification": _classification_dict(report.classification),
        "meets_rank_threshold": report.meets_rank_threshold,
    }


def blowup_normalize_payload(poly_data: dict, center_codim: int,
                             jet_order=None) -> dict:
    f = polynomial_from(poly_data)
    germ = _guard(
        normalize_germ,
        f,
        int(center_codim),
        None if jet_order is None else int(jet_order),
    )
    return {
        "command": "blowup-normalize",
        "germ": germ.to_json_dict(),
    }


def _stability_dict(report) -> dict:
    def point_dict(pt):
        return {
            "point": _fractions(pt.point),
            "classification": _classification_dict(pt.classification),
        }

    return {
        "rank_threshold": report.rank_threshold,
        "precondition_ok": report.precondition_ok,
        "jet_order": report.jet_order,
        "charts": [
            {
                "chart_index": ch.chart_index,
                "inside_rank_block": ch.inside_rank_block,
                "candidates_empty": ch.candidates_empty,
                "fiber_quadric_rank": ch.fiber_quadric_rank,
                "points": [point_dict(pt) for pt in ch.points],
            }
            for ch in report.charts
        ],
        "violations": [
            {"chart_index": chart, **point_dict(pt)}
            for chart, pt in report.violations
        ],
        "verdict": report.verdict,
    }


def blowup_verify_payload(germ_data: dict, rank_threshold=None,
                          samples: int = 4, seed: int = 0) -> dict:
    if not isinstance(germ_data, dict):
        raise InputError("germ record must be a JSON object")
    germ = _guard(GermNormalForm.from_json_dict, germ_data)
    report = _guard(
        verify_theorem4,
        germ,
        None if rank_threshold is None else int(rank_threshold),
        samples=int(samples),
        seed=int(seed),
    )
    return {"command": "blowup-verify", **_stability_dict(report)}


def _codim_table_dict(table) -> dict:
    return {
        "M": table.M,
        "rows": [
            {
                "r": row.r,
                "dim": row.dim,
                "codim": row.codim,
                "point_locus_codim": row.point_locus_codim,
                "locus_lower_bound": row.locus_lower_bound,
                "meets_ambient": row.meets_ambient,
            }
            for row in table.rows
        ],
        "fb_values": list(table.fb_values),
        "fb_min": table.fb_min,
        "fb_argmin": table.fb_argmin,
        "line_value": table.line_value,
        "overall_min": table.overall_min,
        "smooth_candidates": [list(c) for c in table.smooth_candidates],
        "singular_candidates": [list(c) for c in table.singular_candidates],
        "regularity_bound": table.regularity_bound,
        "theorem_bound": table.theorem_bound,
        "rank_component": table.rank_component,
        "gap": table.gap,
    }


def codim_table_payload(m_min: int, m_max: int) -> dict:
    m_min, m_max = int(m_min), int(m_max)
    if m_max < m_min:
        raise InputError(f"empty range: mmax {m_max} < mmin {m_min}")
    tables = [_guard(codim_table, M) for M in range(m_min, m_max + 1)]
    return {
        "command": "codim-table",
        "m_min": m_min,
        "m_max": m_max,
        "tables": [_codim_table_dict(t) for t in tables],
    }


def census_payload(M: int, r: int, q: int, mode: str = "auto",
                   seed: int = 0, sample_size: int = 20000) -> dict:
    res = _guard(
        census_sym_rank,
        int(M), int(r), int(q),
        mode=mode, seed=int(seed), sample_size=int(sample_size),
    )
    payload = {
        "command": "census-sym-rank",
        "M": res.M,
        "r": res.r,
        "q": res.q,
        "count": res.count,
        "total": res.total,
        "method": res.method,
    }
    if res.method == "sampled":
        payload["seed"] = res.seed
        payload["sample_size"] = res.sample_size
        payload["note"] = "sampled estimate, not an exact count"
    return payload


def census_fit_payload(M: int, r: int) -> dict:
    fit = _guard(census_exponent_fit, int(M), int(r))
    return {
        "command": "census-fit",
        "M": fit.M,
        "r": fit.r,
        "expected_degree": fit.expected_degree,
        "degree": fit.degree,
        "matches": fit.matches,
        "primes": list(fit.primes),
        "counts": list(fit.counts),
        "coefficients": _fractions(fit.coefficients),
    }


def nf_bound_payload(graph_data: dict, oracle: bool = False) -> dict:
    if not isinstance(graph_data, dict):
        raise InputError("graph record must be a JSON object")
    graph = _guard(BlowupGraph.from_json_dict, graph_data)
    check = _guard(verify_4n2, graph)
    report = check.bound
    payload = {
        "command": "nf-bound",
        "validity": {
            "level": report.validity.level,
            "reasons": list(report.validity.reasons),
        },
        "applicable": report.applicable,
        "path_counts": list(report.path_counts),
        "discrepancies": list(report.discrepancies),
        "sum_mult2": report.sum_mult2,
        "sum_rest": report.sum_rest,
        "sum_lower": report.sum_lower,
        "sum_lower_rest": report.sum_lower_rest,
        "sum_upper": report.sum_upper,
        "base_multiplicity": str(report.base_multiplicity),
        "quadratic_minimum": str(report.quadratic_minimum),
        "bound_coefficient": str(report.bound_coefficient),
        "bound_floor": str(report.bound_floor),
        "inequality_slack": report.inequality_slack,
        "optimum": _fractions(report.optimum),
        "ordering_all_active": report.ordering_all_active,
        "positivity_active": report.positivity_active,
        "below_context": list(report.below_context),
        "direct_bound": str(report.direct_bound),
        "direct_route_applies": report.direct_route_applies,
        "exceeds_4": report.exceeds_4,
        "slack_equivalence_ok": check.equivalence_ok,
        "verdict": check.verdict,
    }
    if oracle:
        result = _guard(brute_force_bound, graph)
        payload["oracle"] = {
            "value": str(result.value),
            "optimum": _fractions(result.optimum),
            "active_constraints": sorted(result.active),
            "matches_closed_form": result.value == report.quadratic_minimum,
        }
    return payload


# ---------------------------------------------------------------------------
# exit codes
# ---------------------------------------------------------------------------

def exit_code_for(payload: dict) -> int:
    """0 pass/success, 1 negative verdict, 3 undecided (2 never reaches here)."""
    command = payload.get("command")
    verdict = payload.get("verdict")
    if command == "classify":
        meets = payload.get("meets_min_rank")
        return 0 if meets is None or meets else 1
    if command == "classify-scan":
        if verdict == "undecided":
            return 3
        return 0 if verdict else 1
    if command == "regularity":
        return {"pass": 0, "fail": 1, "undecided": 3}[verdict]
    if command == "blowup-verify":
        return 0 if verdict else 1
    if command == "nf-bound":
        oracle = payload.get("oracle")
        if oracle is not None and not oracle["matches_closed_form"]:
            return 1
        return 0 if verdict else 1
    if command == "census-fit":
        return 0 if payload.get("matches") else 1
    return 0


def canonical_json(payload: dict) -> str:
    """Stable rendering: sorted keys, no whitespace drift."""
    return json.dumps(payload, sort_keys=True, separators=(",", ":"))
