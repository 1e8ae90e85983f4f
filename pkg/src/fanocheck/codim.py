"""Codimension arithmetic for low-rank quadratic loci, with census oracles.

Closed forms
------------
For symmetric M x M matrices, the projectivized locus of rank <= r has
dimension binom(r+1,2) - 1 + r(M-r); its codimension binom(M-r+1,2) drives
every bound here: the codimension of the family of degree-M forms in M+1
variables acquiring a quadratic point of rank <= r, the stratum minima that
bound the non-regular family, and the headline minimum binom(M-3,2)+1.

Census oracles
--------------
The dimension formula is validated empirically: counting symmetric matrices
of rank <= r over F_q for several primes and interpolating exactly in q must
produce a polynomial whose degree equals the affine cone dimension
(projective dimension + 1).  Counts come from exhaustive enumeration where
cheap and from an exact rank-classified bordering recursion everywhere; the
two methods are cross-checked where both run.
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass
from fractions import Fraction
from math import comb
from typing import NamedTuple, Sequence

from .polynomial import is_prime


class CodimError(ValueError):
    """Arguments outside the valid parameter range."""


class SymRankDim(NamedTuple):
    dim: int    # projective dimension of the rank <= r locus
    codim: int  # its codimension inside projectivized symmetric matrices


def sym_rank_locus_dim(M: int, r: int) -> SymRankDim:
    """Dimension of the projectivized symmetric rank <= r locus."""
    if not 1 <= r <= M:
        raise CodimError(f"need 1 <= r <= M, got r={r}, M={M}")
    dim = comb(r + 1, 2) - 1 + r * (M - r)
    codim = comb(M - r + 1, 2)
    if dim + codim != comb(M + 1, 2) - 1:
        raise ArithmeticError("rank-locus dimension identity failed")
    return SymRankDim(dim, codim)


class QrCodim(NamedTuple):
    point_locus_codim: int   # pairs (form, point with a rank <= r quadratic point)
    locus_lower_bound: int   # forms acquiring such a point somewhere
    meets_ambient: bool      # lower bound >= M: the locus bound reaches ambient dim


def qr_codim_bounds(M: int, r: int) -> QrCodim:
    """Codimension bounds for forms with a quadratic point of rank <= r."""
    dim = sym_rank_locus_dim(M, r).dim
    point_locus = M + comb(M + 1, 2) - dim
    locus_bound = comb(M - r + 1, 2) + 1
    if locus_bound != point_locus - M:
        raise ArithmeticError("point-locus vs locus-bound identity failed")
    return QrCodim(point_locus, locus_bound, locus_bound >= M)


def _fb_value(M: int, b: int) -> int:
    num = b * (M - 1 - b) * (M - b)
    if num % 2:
        raise ArithmeticError("stratum dimension count is not an integer")
    return num // 2 + b * b + 1


class FbMinimum(NamedTuple):
    min_value: int    # minimum of the curve-stratum count over 2 <= b <= M-2
    argmin: int
    line_value: int   # the b=1 (line) stratum, counted with its own correction
    overall_min: int
    values: tuple     # F(b) for b = 2..M-2


def fb_minimum(M: int) -> FbMinimum:
    """Brute-force minimum of the degree-b curve-stratum codimension count.

    The scan runs over 2 <= b <= M-2 and is asserted against the closed form
    (M-2)(M-3)+5 attained at b=2; the separate line stratum contributes
    M(M-3)/2+3, which is the overall minimum.
    """
    if M < 5:
        raise CodimError(f"need M >= 5, got {M}")
    values = tuple(_fb_value(M, b) for b in range(2, M - 1))
    min_value = min(values)
    argmin = 2 + values.index(min_value)
    if min_value != (M - 2) * (M - 3) + 5 or argmin != 2:
        raise ArithmeticError("curve-stratum minimum disagrees with closed form")
    line_value = M * (M - 3) // 2 + 3
    if 2 * line_value != M * (M - 3) + 6:
        raise ArithmeticError("line-stratum value is not an integer")
    overall = min(min_value, line_value)
    if overall != line_value:
        raise ArithmeticError("line stratum expected to achieve the overall minimum")
    return FbMinimum(min_value, argmin, line_value, overall, values)


class RegularityBound(NamedTuple):
    bound: int
    witnesses: tuple      # labels of candidates achieving the bound
    candidates: tuple     # (label, value) for the full list


def regularity_codim_bound(M: int) -> RegularityBound:
    """Minimum over stratum candidates bounding the non-regular family.

    Candidates: smooth-point strata of tangency order i (2 <= i <= M-2) worth
    binom(M,i) - (M-1); the order-(M-1) stratum improved through the curve
    count to M(M-3)/2 + 3 - (M-1); singular-point strata of order j
    (2 <= j <= M-1) worth binom(M+1,j) + 1; and the top singular stratum
    improved to (M+1)(M-2)/2 + 4.  The minimum is asserted to close at
    M(M-5)/2 + 4.
    """
    if M < 5:
        raise CodimError(f"need M >= 5, got {M}")
    candidates = []
    for i in range(2, M - 1):
        candidates.append((f"smooth order {i}", comb(M, i) - (M - 1)))
    candidates.append(
        ("smooth line term", M * (M - 3) // 2 + 3 - (M - 1))
    )
    for j in range(2, M):
        candidates.append((f"singular order {j}", comb(M + 1, j) + 1))
    candidates.append(
        ("singular top term", (M + 1) * (M - 2) // 2 + 4)
    )
    bound = min(v for _, v in candidates)
    witnesses = tuple(label for label, v in candidates if v == bound)
    expected = M * (M - 5) // 2 + 4
    if 2 * expected != M * (M - 5) + 8 or bound != expected:
        raise ArithmeticError(
            f"stratum minimum {bound} disagrees with closed form {expected}"
        )
    return RegularityBound(bound, witnesses, tuple(candidates))


class TheoremBounds(NamedTuple):
    bound: int                 # headline codimension bound binom(M-3,2)+1
    rank_component: int        # rank <= 4 locus contribution
    regularity_component: int  # non-regular family contribution
    gap: int                   # regularity_component - rank_component


def theorem_bounds(M: int) -> TheoremBounds:
    """Headline bound: the minimum of the two family-level codimensions."""
    if M < 5:
        raise CodimError(f"need M >= 5, got {M}")
    rank_component = qr_codim_bounds(M, 4).locus_lower_bound
    regularity_component = regularity_codim_bound(M).bound
    bound = min(rank_component, regularity_component)
    if bound != comb(M - 3, 2) + 1:
        raise ArithmeticError("headline bound disagrees with closed form")
    if regularity_component <= rank_component:
        raise ArithmeticError(
            "rank component expected to achieve the minimum strictly"
        )
    if regularity_component - rank_component != M - 3:
        raise ArithmeticError("component gap expected to be exactly M-3")
    return TheoremBounds(bound, rank_component, regularity_component, M - 3)


@dataclass(frozen=True)
class CodimRow:
    r: int
    dim: int
    codim: int
    point_locus_codim: int
    locus_lower_bound: int
    meets_ambient: bool


@dataclass(frozen=True)
class CodimTable:
    M: int
    rows: tuple  # CodimRow for r = 1..M
    fb_values: tuple
    fb_min: int
    fb_argmin: int
    line_value: int
    overall_min: int
    smooth_candidates: tuple
    singular_candidates: tuple
    regularity_bound: int
    theorem_bound: int
    rank_component: int
    gap: int


def codim_table(M: int) -> CodimTable:
    """All codimension quantities for one ambient dimension."""
    if M < 5:
        raise CodimError(f"need M >= 5, got {M}")
    rows = []
    for r in range(1, M + 1):
        d = sym_rank_locus_dim(M, r)
        qr = qr_codim_bounds(M, r)
        rows.append(CodimRow(r, d.dim, d.codim, *qr))
    fb = fb_minimum(M)
    reg = regularity_codim_bound(M)
    thm = theorem_bounds(M)
    smooth = tuple(c for c in reg.candidates if c[0].startswith("smooth"))
    singular = tuple(c for c in reg.candidates if c[0].startswith("singular"))
    return CodimTable(
        M=M,
        rows=tuple(rows),
        fb_values=fb.values,
        fb_min=fb.min_value,
        fb_argmin=fb.argmin,
        line_value=fb.line_value,
        overall_min=fb.overall_min,
        smooth_candidates=smooth,
        singular_candidates=singular,
        regularity_bound=reg.bound,
        theorem_bound=thm.bound,
        rank_component=thm.rank_component,
        gap=thm.gap,
    )


# ---------------------------------------------------------------------------
# finite-field census
# ---------------------------------------------------------------------------

EXHAUSTIVE_BUDGET = 10 ** 8
_AUTO_EXHAUSTIVE_CAP = 3 * 10 ** 5


def _rank_mod(rows: list, q: int) -> int:
    """Rank of an integer matrix modulo the prime q."""
    mat = [[x % q for x in row] for row in rows]
    nrows, ncols = len(mat), len(mat[0]) if mat else 0
    rank = 0
    col = 0
    for col in range(ncols):
        piv = next((i for i in range(rank, nrows) if mat[i][col]), None)
        if piv is None:
            continue
        mat[rank], mat[piv] = mat[piv], mat[rank]
        inv = pow(mat[rank][col], q - 2, q)
        mat[rank] = [(x * inv) % q for x in mat[rank]]
        for i in range(nrows):
            if i != rank and mat[i][col]:
                f = mat[i][col]
                mat[i] = [(a - f * b) % q for a, b in zip(mat[i], mat[rank])]
        rank += 1
        if rank == nrows:
            break
    return rank


def sym_rank_counts_bordered(M: int, q: int) -> list:
    """Exact count of symmetric M x M matrices over F_q by rank.

    Classifies a matrix by its leading (M-1)-block: bordering a rank-s block
    with a new column v and corner d keeps the rank when v lies in the column
    space and d takes the one compatible value (q^s ways), raises it by one
    for the other q-1 corners, and raises it by two for each of the
    (q^{M-1} - q^s) * q choices with v outside the column space.
    """
    if M < 1:
        raise CodimError(f"need M >= 1, got {M}")
    if not is_prime(q):
        raise CodimError(f"census field size {q} must be prime")
    counts = [1, q - 1]  # 1x1 by rank
    for m in range(2, M + 1):
        prev = counts
        counts = [0] * (m + 1)
        for s, cnt in enumerate(prev):
            if not cnt:
                continue
            in_col = q ** s
            counts[s] += cnt * in_col
            counts[s + 1] += cnt * in_col * (q - 1)
            outside = q ** (m - 1) - in_col
            if outside:  # zero exactly when the block already has full rank
                counts[s + 2] += cnt * outside * q
        counts = counts[: m + 1]
    total = q ** (M * (M + 1) // 2)
    if sum(counts) != total:
        raise ArithmeticError("census recursion lost matrices")
    return counts


def _sym_rank_count_exhaustive(M: int, r: int, q: int) -> int:
    pairs = [(i, j) for i in range(M) for j in range(i, M)]
    count = 0
    for entries in itertools.product(range(q), repeat=len(pairs)):
        mat = [[0] * M for _ in range(M)]
        for (i, j), v in zip(pairs, entries):
            mat[i][j] = mat[j][i] = v
        if _rank_mod(mat, q) <= r:
            count += 1
    return count


@dataclass(frozen=True)
class CensusResult:
    M: int
    r: int
    q: int
    count: int
    total: int
    method: str  # "exhaustive" | "bordered" | "sampled"
    seed: int | None = None
    sample_size: int | None = None

    def __post_init__(self):
        if self.count > self.total:
            raise ArithmeticError("census count exceeds the space size")


def census_sym_rank(M: int, r: int, q: int, mode: str = "auto",
                    seed: int = 0, sample_size: int = 20000) -> CensusResult:
    """Count symmetric M x M matrices of rank <= r over F_q.

    Modes: "exhaustive" enumerates every matrix (requires q^{M(M+1)/2} <= 1e8);
    "bordered" uses the exact rank-classified recursion; "sampled" draws
    seed-fixed uniform matrices and reports a clearly labeled estimate;
    "auto" picks exhaustive for small spaces and bordered otherwise.
    """
    if not 1 <= r <= M:
        raise CodimError(f"need 1 <= r <= M, got r={r}, M={M}")
    if not is_prime(q):
        raise CodimError(f"census field size {q} must be prime")
    total = q ** (M * (M + 1) // 2)
    if mode == "auto":
        mode = "exhaustive" if total <= _AUTO_EXHAUSTIVE_CAP else "bordered"
    if mode == "exhaustive":
        if total > EXHAUSTIVE_BUDGET:
            raise CodimError(
                f"exhaustive census of {total} matrices exceeds the "
                f"{EXHAUSTIVE_BUDGET} budget; use bordered or sampled mode"
            )
        count = _sym_rank_count_exhaustive(M, r, q)
        return CensusResult(M, r, q, count, total, "exhaustive")
    if mode == "bordered":
        counts = sym_rank_counts_bordered(M, q)
        return CensusResult(M, r, q, sum(counts[: r + 1]), total, "bordered")
    if mode == "sampled":
        rng = random.Random(seed)
        hits = 0
        for _ in range(sample_size):
            mat = [[0] * M for _ in range(M)]
            for i in range(M):
                for j in range(i, M):
                    mat[i][j] = mat[j][i] = rng.randrange(q)
            if _rank_mod(mat, q) <= r:
                hits += 1
        estimate = round(Fraction(hits * total, sample_size))
        return CensusResult(M, r, q, estimate, total, "sampled",
                            seed=seed, sample_size=sample_size)
    raise CodimError(f"unknown census mode {mode!r}")


def _first_primes(count: int) -> list:
    primes = []
    candidate = 2
    while len(primes) < count:
        if is_prime(candidate):
            primes.append(candidate)
        candidate += 1
    return primes


def _interpolate(points) -> list:
    """Exact coefficients (ascending) of the Lagrange interpolant."""
    coeffs = [Fraction(0)] * len(points)
    for i, (xi, yi) in enumerate(points):
        basis = [Fraction(1)]
        denom = Fraction(1)
        for j, (xj, _) in enumerate(points):
            if j == i:
                continue
            basis = [Fraction(0)] + basis[:]
            for t in range(len(basis) - 1):
                basis[t] -= xj * basis[t + 1]
            denom *= xi - xj
        scale = Fraction(yi) / denom
        for t, b in enumerate(basis):
            coeffs[t] += scale * b
    while coeffs and coeffs[-1] == 0:
        coeffs.pop()
    return coeffs


class CensusFit(NamedTuple):
    M: int
    r: int
    expected_degree: int
    degree: int
    matches: bool
    primes: tuple
    counts: tuple
    coefficients: tuple


def census_exponent_fit(M: int, r: int, primes: Sequence[int] | None = None,
                        cross_check: bool = True) -> CensusFit:
    """Fit the census count as an exact polynomial in q and check its degree.

    The count of rank <= r symmetric matrices is a polynomial in q whose
    degree must equal the affine cone dimension sym_rank_locus_dim(M,r) + 1.
    Pinning down that degree takes degree+2 sample points: degree+1 to
    determine the polynomial and one more to confirm nothing higher-order
    hides in it.  Counts use the bordering recursion, cross-checked against
    exhaustive enumeration wherever the space is small.
    """
    expected = sym_rank_locus_dim(M, r).dim + 1
    if primes is None:
        primes = _first_primes(expected + 2)
    else:
        primes = [int(q) for q in primes]
        if len(primes) < expected + 2:
            raise CodimError(
                f"degree {expected} needs at least {expected + 2} primes, "
                f"got {len(primes)}"
            )
        if len(set(primes)) != len(primes):
            raise CodimError("census fit primes must be distinct")
    counts = []
    for q in primes:
        res = census_sym_rank(M, r, q, mode="bordered")
        if cross_check and res.total <= _AUTO_EXHAUSTIVE_CAP:
            exhaustive = census_sym_rank(M, r, q, mode="exhaustive")
            if exhaustive.count != res.count:
                raise ArithmeticError(
                    f"census methods disagree at q={q}: "
                    f"exhaustive {exhaustive.count} vs bordered {res.count}"
                )
        counts.append(res.count)
    coeffs = _interpolate(list(zip(primes, counts)))
    degree = len(coeffs) - 1
    matches = all(
        sum(c * q ** t for t, c in enumerate(coeffs)) == cnt
        for q, cnt in zip(primes, counts)
    )
    return CensusFit(
        M=M,
        r=r,
        expected_degree=expected,
        degree=degree,
        matches=matches and degree == expected,
        primes=tuple(primes),
        counts=tuple(counts),
        coefficients=tuple(coeffs),
    )
