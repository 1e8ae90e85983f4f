"""Ideal dimension over prime fields via Buchberger + staircase combinatorics.

The dimension of an affine vanishing locus is computed as the Krull dimension
of the quotient by the leading-term ideal of a graded-reverse-lex Groebner
basis: the largest coordinate subspace that misses the staircase.  Hard
resource budgets make every answer either exact or an explicit refusal
(BudgetExceeded) — never a guess.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations
from typing import Sequence

from .polynomial import (
    FieldMismatchError,
    Polynomial,
    PolynomialError,
    grevlex_key,
    validate_field,
)

Exponents = tuple


@dataclass(frozen=True)
class GroebnerBudget:
    """Caps that turn long computations into explicit 'undecided' outcomes."""

    max_pairs: int = 20_000
    max_degree: int = 40
    max_basis: int = 1_000


DEFAULT_BUDGET = GroebnerBudget()


class BudgetExceeded(RuntimeError):
    """The computation hit a resource cap; the caller must report 'undecided'."""

    def __init__(self, reason: str):
        super().__init__(reason)
        self.reason = reason


def _monic(f: dict, p: int) -> dict:
    lm = max(f, key=grevlex_key)
    lc = f[lm]
    if lc == 1:
        return f
    inv = pow(lc, p - 2, p)
    return {e: c * inv % p for e, c in f.items()}


def _reduce(f: dict, basis_lms: list[Exponents], basis: list[dict], p: int) -> dict:
    """Full normal form of f modulo the (monic) basis."""
    remainder: dict = {}
    work = dict(f)
    while work:
        lm = max(work, key=grevlex_key)
        lc = work.pop(lm)
        hit = -1
        for idx, blm in enumerate(basis_lms):
            ok = True
            for a, b in zip(lm, blm):
                if a < b:
                    ok = False
                    break
            if ok:
                hit = idx
                break
        if hit < 0:
            remainder[lm] = lc
            continue
        blm, g = basis_lms[hit], basis[hit]
        shift = tuple(a - b for a, b in zip(lm, blm))
        for e, c in g.items():
            if e == blm:
                continue
            key = tuple(a + b for a, b in zip(e, shift))
            acc = (work.get(key, 0) - lc * c) % p
            if acc:
                work[key] = acc
            elif key in work:
                del work[key]
    return remainder


def _lcm(a: Exponents, b: Exponents) -> Exponents:
    return tuple(max(x, y) for x, y in zip(a, b))


def _divides(a: Exponents, b: Exponents) -> bool:
    return all(x <= y for x, y in zip(a, b))


def _buchberger(gens: list[dict], nvars: int, p: int,
                budget: GroebnerBudget) -> tuple[list[dict], list[Exponents]]:
    basis: list[dict] = []
    lms: list[Exponents] = []
    pending: set[tuple[int, int]] = set()

    def push(f: dict) -> None:
        f = _monic(f, p)
        idx = len(basis)
        if idx >= budget.max_basis:
            raise BudgetExceeded(f"basis size exceeded {budget.max_basis}")
        basis.append(f)
        lms.append(max(f, key=grevlex_key))
        for k in range(idx):
            pending.add((k, idx))

    for g in gens:
        h = _reduce(g, lms, basis, p)
        if h:
            push(h)

    processed = 0
    while pending:
        i, j = min(
            pending, key=lambda ij: grevlex_key(_lcm(lms[ij[0]], lms[ij[1]]))
        )
        pending.discard((i, j))
        lcm = _lcm(lms[i], lms[j])
        if lcm == tuple(a + b for a, b in zip(lms[i], lms[j])):
            continue  # coprime leading monomials: S-polynomial reduces to zero
        skip = False
        for k in range(len(basis)):
            if k in (i, j) or not _divides(lms[k], lcm):
                continue
            a, b = (min(i, k), max(i, k)), (min(j, k), max(j, k))
            if a not in pending and b not in pending:
                skip = True
                break
        if skip:
            continue
        if sum(lcm) > budget.max_degree:
            raise BudgetExceeded(
                f"S-pair degree {sum(lcm)} exceeded {budget.max_degree}"
            )
        processed += 1
        if processed > budget.max_pairs:
            raise BudgetExceeded(f"pair count exceeded {budget.max_pairs}")
        gi, gj = basis[i], basis[j]
        si = tuple(a - b for a, b in zip(lcm, lms[i]))
        sj = tuple(a - b for a, b in zip(lcm, lms[j]))
        s: dict = {}
        for e, c in gi.items():
            key = tuple(a + b for a, b in zip(e, si))
            s[key] = c
        for e, c in gj.items():
            key = tuple(a + b for a, b in zip(e, sj))
            acc = (s.get(key, 0) - c) % p
            if acc:
                s[key] = acc
            elif key in s:
                del s[key]
        h = _reduce(s, lms, basis, p)
        if h:
            push(h)
    return basis, lms


def staircase_dimension(lead_exponents: Sequence[Exponents], nvars: int) -> int:
    """Largest #S for a variable subset S touching no leading-term support.

    Returns -1 when a leading term is constant (unit ideal, empty locus).
    """
    supports = [
        frozenset(i for i, e in enumerate(lm) if e) for lm in lead_exponents
    ]
    if any(not s for s in supports):
        return -1
    for size in range(nvars, 0, -1):
        for choice in combinations(range(nvars), size):
            s_set = frozenset(choice)
            if all(not sup <= s_set for sup in supports):
                return size
    return 0


def groebner_basis(gens: Sequence[Polynomial], p: int | None = None,
                   budget: GroebnerBudget = DEFAULT_BUDGET) -> list[Polynomial]:
    """Monic grevlex Groebner basis over GF(p)."""
    reduced, variables, field = _prepare(gens, p)
    basis, _ = _buchberger([g.term_map() for g in reduced], len(variables),
                           field, budget)
    return [Polynomial(variables, f, field) for f in basis]


def _prepare(gens: Sequence[Polynomial], p: int | None):
    gens = [g for g in gens if isinstance(g, Polynomial)]
    if not gens:
        raise PolynomialError("no generators given")
    variables = gens[0].variables
    fields = {g.field for g in gens}
    if len(fields) > 1 or any(g.variables != variables for g in gens):
        raise FieldMismatchError("generators live in different rings")
    field = fields.pop()
    if field is None:
        if p is None:
            raise PolynomialError(
                "rational generators need an explicit prime for the dimension oracle"
            )
        field = validate_field(p)
        gens = [g.to_gf(field) for g in gens]
    elif p is not None and validate_field(p) != field:
        raise FieldMismatchError(
            f"generators live over GF({field}), not GF({p})"
        )
    return [g for g in gens if not g.is_zero()], variables, field


def _eliminate_linear(gens: list[Polynomial]) -> tuple[list[Polynomial], int, bool]:
    """Remove variables pinned by degree-1 generators (dimension-preserving).

    Returns (remaining generators, number of variables eliminated, empty flag).
    The empty flag is set when a nonzero constant generator appears.
    """
    eliminated = 0
    while True:
        gens = [g for g in gens if not g.is_zero()]
        if any(g.total_degree() == 0 for g in gens):
            return [], eliminated, True
        pivot = next((g for g in gens if g.total_degree() == 1), None)
        if pivot is None:
            return gens, eliminated, False
        variables = pivot.variables
        lin_exps, lin_coeff = None, None
        for exps, c in pivot.terms():
            if sum(exps) == 1:
                lin_exps, lin_coeff = exps, c
                break
        var_idx = lin_exps.index(1)
        rest_vars = variables[:var_idx] + variables[var_idx + 1 :]
        if not rest_vars:
            # Single-variable ring: the pivot pins the point; others restrict to it.
            value = [-(pivot.constant_term()) * _inv(lin_coeff, pivot.field)]
            leftover = []
            for g in gens:
                if g is pivot:
                    continue
                if g.evaluate([_as_value(value[0], g.field)]):
                    return [], eliminated + 1, True
            return [], eliminated + 1, False
        field = pivot.field
        # x_i = -(pivot - c*x_i)/c, expressed in the smaller ring
        rest = pivot - Polynomial.monomial(variables, lin_exps, lin_coeff, field)
        images = []
        for i, v in enumerate(variables):
            if i == var_idx:
                continue
            images.append(Polynomial.variable(rest_vars, v, field))
        solve = -_project(rest, var_idx, rest_vars)
        solve = solve.scale(_inv(lin_coeff, field))
        full_images = (
            images[:var_idx] + [solve] + images[var_idx:]
        )
        gens = [
            g.substitute(full_images) for g in gens if g is not pivot
        ]
        eliminated += 1


def _inv(c, field):
    from .polynomial import coeff_inv

    return coeff_inv(c, field)


def _as_value(c, field):
    return c


def _project(g: Polynomial, drop_idx: int, rest_vars: tuple) -> Polynomial:
    """Reinterpret g (which must not involve variable drop_idx) in the smaller ring."""
    terms = {}
    for exps, c in g.term_map().items():
        if exps[drop_idx] != 0:
            raise PolynomialError("projection of a polynomial using the dropped variable")
        terms[exps[:drop_idx] + exps[drop_idx + 1 :]] = c
    return Polynomial(rest_vars, terms, g.field)


def ideal_dimension(gens: Sequence[Polynomial], p: int | None = None,
                    budget: GroebnerBudget = DEFAULT_BUDGET,
                    eliminate_linear: bool = True) -> int:
    """Dimension of the affine vanishing locus of the generators over GF(p).

    Returns the Krull dimension (>= 0), or -1 for an empty locus.  Rational
    generators are reduced mod p first.  Raises BudgetExceeded when a resource
    cap is hit; callers surface that as an 'undecided' verdict.
    """
    reduced, variables, field = _prepare(gens, p)
    if not reduced:
        return len(variables)
    if eliminate_linear:
        reduced, dropped, empty = _eliminate_linear(reduced)
        if empty:
            return -1
    else:
        dropped = 0
    nvars = len(variables) - dropped
    if not reduced:
        return nvars
    if nvars == 0:
        return 0
    dicts = [g.term_map() for g in reduced]
    _, lms = _buchberger(dicts, nvars, field, budget)
    return staircase_dimension(lms, nvars)
