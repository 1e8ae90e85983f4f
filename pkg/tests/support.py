"""Shared builders for the test suite: reference forms, germs, and the
seed-fixed random generators used by both the module tests and the
acceptance suite."""

from __future__ import annotations

import itertools
import random
from fractions import Fraction

from fanocheck.blowup import GermNormalForm
from fanocheck.nfopt import BlowupGraph
from fanocheck.polynomial import Polynomial
from fanocheck.singularities import HypersurfaceGerm

V6 = tuple(f"X{i}" for i in range(6))
X5 = tuple(f"x{i}" for i in range(1, 6))


def monomials(deg: int, n: int):
    """All exponent vectors of total degree deg in n variables."""
    for combo in itertools.combinations_with_replacement(range(n), deg):
        e = [0] * n
        for i in combo:
            e[i] += 1
        yield tuple(e)


# ---------------------------------------------------------------------------
# reference projective forms (degree 5 in 6 variables)
# ---------------------------------------------------------------------------

def rank5_quintic() -> Polynomial:
    """X0^3(X1X2+X3X4+X5^2) + X5^5: quadratic point of rank 5 at (1:0:...:0)."""
    return Polynomial(V6, {
        (3, 1, 1, 0, 0, 0): 1,
        (3, 0, 0, 1, 1, 0): 1,
        (3, 0, 0, 0, 0, 2): 1,
        (0, 0, 0, 0, 0, 5): 1,
    })


def fermat_quintic(field=None) -> Polynomial:
    return Polynomial(
        V6,
        {tuple(5 if j == i else 0 for j in range(6)): 1 for i in range(6)},
        field=field,
    )


def smooth_directional_quintic() -> Polynomial:
    """X0^4 X1 + X1^5 + ... + X5^5: smooth at (1:0:...:0) with q_1 = x1."""
    terms = {tuple(5 if j == i else 0 for j in range(6)): 1 for i in range(1, 6)}
    terms[(4, 1, 0, 0, 0, 0)] = 1
    return Polynomial(V6, terms)


def power_sum_quintic() -> Polynomial:
    """Local pieces at (1:0:...:0) are the power sums p_1..p_4 in x1..x5."""
    terms = {}
    for k in range(1, 5):
        for i in range(1, 6):
            e = [0] * 6
            e[0] = 5 - k
            e[i] = k
            terms[tuple(e)] = terms.get(tuple(e), 0) + 1
    return Polynomial(V6, terms)


# ---------------------------------------------------------------------------
# local germs (5 affine variables)
# ---------------------------------------------------------------------------

def power_sums(degrees) -> list:
    out = []
    for d in degrees:
        out.append(Polynomial(
            X5, {tuple(d if j == i else 0 for j in range(5)): 1
                 for i in range(5)}
        ))
    return out


def germ_from_pieces(pieces) -> HypersurfaceGerm:
    total = Polynomial.zero(X5, field=pieces[0].field)
    for p in pieces:
        total = total + p
    return HypersurfaceGerm.from_polynomial(total)


def common_factor_germ() -> HypersurfaceGerm:
    """q_1 = x1, q_2 = x1x2, q_3 = x1x3^2, q_4 = x1x4^3: the line-cone
    contains the whole hyperplane {x1 = 0}."""
    return germ_from_pieces([
        Polynomial(X5, {(1, 0, 0, 0, 0): 1}),
        Polynomial(X5, {(1, 1, 0, 0, 0): 1}),
        Polynomial(X5, {(1, 0, 2, 0, 0): 1}),
        Polynomial(X5, {(1, 0, 0, 3, 0): 1}),
    ])


def dense_gf31_germ(seed: int) -> HypersurfaceGerm:
    """Dense random pieces of degree 1..4 over GF(31)."""
    rng = random.Random(seed)
    total = Polynomial.zero(X5, field=31)
    for d in range(1, 5):
        total = total + Polynomial(
            X5, {e: rng.randrange(31) for e in monomials(d, 5)}, field=31
        )
    return HypersurfaceGerm.from_polynomial(total)


def mixed_rank5_germ(seed: int) -> HypersurfaceGerm:
    """q_2 = x1x2+x3x4+x5^2 plus random small integer pieces of degree 3..5."""
    rng = random.Random(seed)
    total = Polynomial(X5, {(1, 1, 0, 0, 0): 1, (0, 0, 1, 1, 0): 1,
                            (0, 0, 0, 0, 2): 1})
    for d in range(3, 6):
        total = total + Polynomial(
            X5, {e: rng.randint(-2, 2) for e in monomials(d, 5)}
        )
    return HypersurfaceGerm.from_polynomial(total)


def random_invertible(rng: random.Random, n: int):
    """Random invertible integer matrix with entries in [-2, 2]."""
    while True:
        mat = [[rng.randint(-2, 2) for _ in range(n)] for _ in range(n)]
        if _det(mat) != 0:
            return mat


def _det(mat) -> Fraction:
    n = len(mat)
    a = [[Fraction(x) for x in row] for row in mat]
    det = Fraction(1)
    for c in range(n):
        pivot = next((r for r in range(c, n) if a[r][c]), None)
        if pivot is None:
            return Fraction(0)
        if pivot != c:
            a[c], a[pivot] = a[pivot], a[c]
            det = -det
        det *= a[c][c]
        for r in range(c + 1, n):
            factor = a[r][c] / a[c][c]
            a[r] = [x - factor * y for x, y in zip(a[r], a[c])]
    return det


def substitute_linear(f: Polynomial, mat) -> Polynomial:
    """f(A x): apply the linear change given by an n x n matrix."""
    n = f.nvariables
    images = []
    for i in range(n):
        terms = {
            tuple(1 if t == j else 0 for t in range(n)): mat[i][j]
            for j in range(n)
            if mat[i][j]
        }
        images.append(Polynomial(f.variables, terms, field=f.field))
    return f.substitute(images)


# ---------------------------------------------------------------------------
# seed-fixed random generators shared with the acceptance suite
# ---------------------------------------------------------------------------

def random_normal_form(seed: int):
    """Random blow-up normal form with n <= 8, r in {5, 6}, r <= k <= n-1,
    and a tail of degree <= 4 with every monomial quadratic in the center
    block.  Returns (germ, rank)."""
    rng = random.Random(seed)
    r = rng.choice([5, 6])
    n = rng.randrange(r + 1, 9)
    k = rng.randrange(r, n)
    variables = [f"z{i}" for i in range(1, n + 1)]
    diag = tuple(Fraction(rng.choice([1, 1, 2, 3, -1, -2])) for _ in range(r))
    terms = {}
    for _ in range(rng.randrange(1, 6)):
        deg = rng.choice([3, 4])
        e = [0] * n
        for b in rng.sample(range(k), 2):
            e[b] += 1
        for _ in range(deg - 2):
            e[rng.randrange(n)] += 1
        key = tuple(e)
        terms[key] = terms.get(key, 0) + rng.choice([1, -1, 2, -2])
    tail = Polynomial(variables, {e: c for e, c in terms.items() if c})
    return GermNormalForm(n, r, k, diag, tail, 4), r


def random_context_graph(seed: int, max_k: int = 7) -> BlowupGraph:
    """Random covering-rank-context blow-up graph with K <= max_k."""
    rng = random.Random(seed)
    K = rng.randrange(1, max_k + 1)
    mult2_len = rng.randrange(1, K + 1)
    lower_len = rng.randrange(mult2_len, K + 1)
    codims = []
    for i in range(1, K + 1):
        if i <= mult2_len:
            codims.append(rng.randrange(4, 8))
        elif i <= lower_len:
            codims.append(rng.randrange(3, 8))
        else:
            codims.append(2)
    edges = {(i, i - 1) for i in range(2, K + 1)}
    for j in range(3, K + 1):
        for i in range(1, j - 1):
            if rng.random() < 0.3:
                edges.add((j, i))
    return BlowupGraph(K, lower_len, mult2_len, tuple(codims),
                       frozenset(edges))


def chain22() -> BlowupGraph:
    return BlowupGraph(2, 2, 2, (4, 4), frozenset({(2, 1)}))


def mixed_graph() -> BlowupGraph:
    return BlowupGraph(3, 2, 1, (5, 3, 2), frozenset({(2, 1), (3, 2)}))


def remark1_graph() -> BlowupGraph:
    return BlowupGraph(1, 1, 1, (3,), frozenset())
