"""Pointwise singularity classification of hypersurface germs.

A germ at a point is recorded by its graded pieces q_1, q_2, ... (homogeneous
of the indexed degree).  The classification is:

* smooth            when q_1 != 0,
* quadratic of rank rk(q_2)  when q_1 = 0 and q_2 != 0,
* higher multiplicity m      when the least nonzero piece has degree m >= 3.

The quadratic rank is the rank of the symmetric matrix of q_2, computed by
exact Gaussian elimination, so it is invariant under linear changes of
coordinates.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from .polynomial import (
    Polynomial,
    PolynomialError,
    coeff_inv,
    validate_field,
)


class SamplingError(RuntimeError):
    """The point-sampling retry budget ran out."""


@dataclass(frozen=True)
class SingularityClass:
    kind: str  # "smooth" | "quadratic" | "higher"
    rank: int | None = None
    multiplicity: int | None = None

    def __post_init__(self):
        if self.kind == "smooth":
            assert self.rank is None and self.multiplicity is None
        elif self.kind == "quadratic":
            assert self.rank is not None and self.rank >= 1
            assert self.multiplicity == 2
        elif self.kind == "higher":
            assert self.multiplicity is not None and self.multiplicity >= 3
        else:
            raise ValueError(f"unknown kind {self.kind!r}")

    def passes_rank(self, min_rank: int) -> bool:
        """True when the point does not violate 'quadratic of rank >= min_rank'."""
        if self.kind == "smooth":
            return True
        if self.kind == "quadratic":
            return self.rank >= min_rank
        return False

    def __str__(self) -> str:
        if self.kind == "smooth":
            return "Smooth"
        if self.kind == "quadratic":
            return f"Quadratic(rank={self.rank})"
        return f"HigherMult(mult={self.multiplicity})"


def smooth() -> SingularityClass:
    return SingularityClass("smooth")


def quadratic(rank: int) -> SingularityClass:
    return SingularityClass("quadratic", rank=rank, multiplicity=2)


def higher(multiplicity: int) -> SingularityClass:
    return SingularityClass("higher", multiplicity=multiplicity)


@dataclass(frozen=True)
class HypersurfaceGerm:
    """Graded pieces of a local equation at the origin (no constant term)."""

    ambient_dim: int
    pieces: tuple  # pieces[d-1] is the degree-d graded piece, d = 1..max_degree
    field: int | None = None

    def __post_init__(self):
        if self.ambient_dim < 2:
            raise PolynomialError("germ ambient dimension must be at least 2")
        if not self.pieces:
            raise PolynomialError("germ needs at least one graded piece")
        for d, q in enumerate(self.pieces, start=1):
            if not isinstance(q, Polynomial):
                raise PolynomialError(f"piece of degree {d} is not a polynomial")
            if q.nvariables != self.ambient_dim:
                raise PolynomialError(
                    f"piece of degree {d} lives in {q.nvariables} variables, "
                    f"expected {self.ambient_dim}"
                )
            if q.field != self.field:
                raise PolynomialError("germ pieces live over different fields")
            if not q.is_homogeneous(d) and not q.is_zero():
                raise PolynomialError(f"piece of degree {d} is not homogeneous")
        if all(q.is_zero() for q in self.pieces):
            raise PolynomialError("all graded pieces vanish; germ is trivial")

    @property
    def max_degree(self) -> int:
        return len(self.pieces)

    def piece(self, degree: int) -> Polynomial:
        if not 1 <= degree <= len(self.pieces):
            raise PolynomialError(f"no graded piece of degree {degree}")
        return self.pieces[degree - 1]

    @classmethod
    def from_polynomial(cls, f: Polynomial) -> "HypersurfaceGerm":
        """Split a local equation vanishing at the origin into graded pieces."""
        if f.is_zero():
            raise PolynomialError("zero polynomial has no germ")
        if f.constant_term():
            raise PolynomialError("local equation does not vanish at the origin")
        comps = f.homogeneous_components()
        return cls(f.nvariables, tuple(comps[1:]), f.field)


def quadratic_form_matrix(q: Polynomial) -> list[list]:
    """Symmetric matrix A with A[i][i] = 2*coeff(x_i^2), A[i][j] = coeff(x_i x_j)."""
    n = q.nvariables
    if q.field == 2:
        raise PolynomialError("quadratic rank needs characteristic != 2")
    zero = Fraction(0) if q.field is None else 0
    mat = [[zero] * n for _ in range(n)]
    for exps, c in q.term_map().items():
        if sum(exps) != 2:
            raise PolynomialError("quadratic form has a term of degree != 2")
        support = [i for i, e in enumerate(exps) if e]
        if len(support) == 1:
            i = support[0]
            v = 2 * c
            mat[i][i] = v if q.field is None else v % q.field
        else:
            i, j = support
            mat[i][j] = c
            mat[j][i] = c
    return mat


def matrix_rank(mat: Sequence[Sequence], field: int | None) -> int:
    """Exact rank by Gaussian elimination over QQ or GF(p)."""
    rows = [list(r) for r in mat]
    if not rows:
        return 0
    ncols = len(rows[0])
    rank = 0
    row = 0
    for col in range(ncols):
        pivot = next((r for r in range(row, len(rows)) if rows[r][col]), None)
        if pivot is None:
            continue
        rows[row], rows[pivot] = rows[pivot], rows[row]
        inv = coeff_inv(rows[row][col], field)
        for r in range(row + 1, len(rows)):
            if not rows[r][col]:
                continue
            factor = rows[r][col] * inv
            if field is not None:
                factor %= field
            for c in range(col, ncols):
                v = rows[r][c] - factor * rows[row][c]
                rows[r][c] = v if field is None else v % field
        rank += 1
        row += 1
        if row == len(rows):
            break
    return rank


def hessian_rank(q2: Polynomial) -> int:
    """Rank of the quadratic piece; 0 for the zero form.  Needs char != 2."""
    if q2.is_zero():
        return 0
    if not q2.is_homogeneous(2):
        raise PolynomialError("hessian_rank expects a homogeneous quadratic")
    return matrix_rank(quadratic_form_matrix(q2), q2.field)


def classify_point(germ: HypersurfaceGerm) -> SingularityClass:
    """Classify the germ: smooth / quadratic(rank) / higher multiplicity."""
    if not germ.piece(1).is_zero():
        return smooth()
    if germ.max_degree >= 2 and not germ.piece(2).is_zero():
        return quadratic(hessian_rank(germ.piece(2)))
    m = next(
        (d for d in range(3, germ.max_degree + 1) if not germ.piece(d).is_zero()),
        None,
    )
    if m is None:
        raise PolynomialError("all graded pieces vanish; germ is trivial")
    return higher(m)


def local_expansion(form: Polynomial, point: Sequence) -> HypersurfaceGerm:
    """Germ of a projective hypersurface at a point lying on it.

    `form` must be homogeneous in n+1 variables; `point` is a projective point
    given by n+1 exact coordinates, not all zero, with form(point) = 0.  An
    invertible linear change moves the point to (1:0:...:0); dehomogenizing at
    the first coordinate yields the graded pieces in variables y1..yn.
    """
    nplus1 = form.nvariables
    if nplus1 < 3:
        raise PolynomialError("projective expansion needs at least 3 coordinates")
    if form.is_zero() or not form.is_homogeneous():
        raise PolynomialError("local expansion expects a nonzero homogeneous form")
    if len(point) != nplus1:
        raise PolynomialError(
            f"point has {len(point)} coordinates, expected {nplus1}"
        )
    from .polynomial import coeff_from

    coords = [coeff_from(x, form.field) for x in point]
    if not any(coords):
        raise PolynomialError("(0, ..., 0) is not a projective point")
    if form.evaluate(coords):
        raise PolynomialError("point does not lie on the hypersurface")
    n = nplus1 - 1
    pivot = next(i for i, x in enumerate(coords) if x)
    new_vars = tuple(["y0"] + [f"y{i}" for i in range(1, nplus1)])
    # Original coordinate m expands as x_m * y0 (+ y_slot for m != pivot):
    # the columns are the point vector and the standard vectors e_m, m != pivot.
    slot = {}
    next_slot = 1
    for m in range(nplus1):
        if m != pivot:
            slot[m] = next_slot
            next_slot += 1
    images = []
    for m in range(nplus1):
        terms = {}
        e0 = tuple(1 if t == 0 else 0 for t in range(nplus1))
        if coords[m]:
            terms[e0] = coords[m]
        if m != pivot:
            es = tuple(1 if t == slot[m] else 0 for t in range(nplus1))
            terms[es] = 1
        images.append(Polynomial(new_vars, terms, form.field))
    changed = form.substitute(images)
    # Dehomogenize at y0 = 1.
    germ_vars = tuple(f"y{i}" for i in range(1, nplus1))
    terms: dict = {}
    p = form.field
    for exps, c in changed.term_map().items():
        key = exps[1:]
        acc = terms.get(key, 0) + c
        if p is not None:
            acc %= p
        if acc:
            terms[key] = acc
        elif key in terms:
            del terms[key]
    local = Polynomial(germ_vars, terms, form.field)
    if local.constant_term():
        raise ArithmeticError("dehomogenized equation has a constant term")
    comps = local.homogeneous_components()
    pieces = comps[1:] + [
        Polynomial.zero(germ_vars, form.field)
        for _ in range(form.total_degree() - (len(comps) - 1))
    ]
    return HypersurfaceGerm(n, tuple(pieces), form.field)


@dataclass(frozen=True)
class PointClassification:
    point: tuple
    classification: SingularityClass


@dataclass(frozen=True)
class CensusScanReport:
    prime: int
    min_rank: int
    rows: tuple
    violations: tuple
    verdict: bool
    note: str = field(
        default="verdict covers only the listed points; no global certification"
    )


def scan_census(
    form: Polynomial,
    prime: int,
    min_rank: int,
    samples: int = 25,
    seed: int = 0,
    points: Sequence[Sequence[int]] | None = None,
    max_attempts_per_sample: int = 400,
) -> CensusScanReport:
    """Classify points of the hypersurface over GF(p) against a rank threshold.

    Points are either supplied or sampled: the first n coordinates are drawn
    uniformly and the last is found by scanning all residues; a retry budget
    bounds the search.  p = 2 is rejected (quadratic rank needs char != 2).
    """
    p = validate_field(prime)
    if p == 2:
        raise PolynomialError("census needs an odd prime (quadratic ranks)")
    fp = form.to_gf(p) if form.field is None else form
    if fp.field != p:
        raise PolynomialError(f"form lives over GF({fp.field}), expected GF({p})")
    nplus1 = fp.nvariables
    chosen: list[tuple] = []
    if points is not None:
        for pt in points:
            chosen.append(tuple(int(x) % p for x in pt))
    else:
        rng = random.Random(seed)
        seen = set()
        attempts = 0
        budget = samples * max_attempts_per_sample
        while len(chosen) < samples:
            attempts += 1
            if attempts > budget:
                raise SamplingError(
                    f"no {samples} distinct points found within {budget} attempts"
                )
            head = [rng.randrange(p) for _ in range(nplus1 - 1)]
            roots = []
            for last in range(p):
                if not fp.evaluate(head + [last]):
                    roots.append(last)
            if not roots:
                continue
            last = roots[rng.randrange(len(roots))]
            vec = tuple(head + [last])
            if not any(vec):
                continue
            # normalize the projective representative for dedup
            first = next(x for x in vec if x)
            inv = pow(first, p - 2, p)
            rep = tuple(x * inv % p for x in vec)
            if rep in seen:
                continue
            seen.add(rep)
            chosen.append(rep)
    rows = []
    for pt in chosen:
        germ = local_expansion(fp, pt)
        rows.append(PointClassification(pt, classify_point(germ)))
    violations = tuple(
        r for r in rows if not r.classification.passes_rank(min_rank)
    )
    return CensusScanReport(
        prime=p,
        min_rank=min_rank,
        rows=tuple(rows),
        violations=violations,
        verdict=not violations,
    )
