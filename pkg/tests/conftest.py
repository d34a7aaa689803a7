from __future__ import annotations

import random
from fractions import Fraction

import pytest
from hypothesis import strategies as st

from relcoh.finspace import FinSpace, Sheaf
from relcoh.homalg import ChainMap, Complex
from relcoh.ratlin import Matrix, inverse

CIRCLE_EDGES = [("c", "a"), ("c", "b"), ("d", "a"), ("d", "b")]


def circle() -> FinSpace:
    return FinSpace("abcd", CIRCLE_EDGES)


def sierpinski() -> FinSpace:
    return FinSpace(["o", "c"], [("c", "o")])


def sphere() -> FinSpace:
    return FinSpace("abcdpq", CIRCLE_EDGES + [("p", "c"), ("p", "d"), ("q", "c"), ("q", "d")])


def cone() -> FinSpace:
    return FinSpace("pabcd", CIRCLE_EDGES + [("p", "c"), ("p", "d")])


@pytest.fixture
def pc():
    return circle()


@pytest.fixture
def const_pc(pc):
    return Sheaf.constant(pc)


@st.composite
def posets(draw, max_points: int = 5):
    """Random finite T0 spaces: x <= y only for x listed before y."""
    n = draw(st.integers(1, max_points))
    pairs = [(i, j) for i in range(n) for j in range(i + 1, n)]
    chosen = draw(st.lists(st.sampled_from(pairs), unique=True, max_size=len(pairs))) if pairs else []
    labels = [f"p{i}" for i in range(n)]
    return FinSpace(labels, [(labels[i], labels[j]) for i, j in chosen])


@st.composite
def pairs_with_open(draw, max_points: int = 5):
    sp = draw(posets(max_points))
    opens = sp.all_opens()
    return sp, draw(st.sampled_from(opens))


def random_fraction(rng: random.Random, lo: int = -3, hi: int = 3) -> Fraction:
    return Fraction(rng.randint(lo, hi), rng.choice([1, 1, 2, 3]))


def random_invertible(rng: random.Random, n: int) -> Matrix:
    """Product of a unit lower and a unit upper triangular matrix."""
    lo = [[1 if i == j else (rng.randint(-2, 2) if j < i else 0) for j in range(n)] for i in range(n)]
    up = [[1 if i == j else (rng.randint(-2, 2) if j > i else 0) for j in range(n)] for i in range(n)]
    return Matrix(lo, cols=n) @ Matrix(up, cols=n)


def random_complex(rng: random.Random, length: int = 3, max_dim: int = 4):
    """A complex in degrees 0..length-1 with known Betti numbers.

    Built as a direct sum of cohomology classes and acyclic pairs, then
    conjugated by random invertible matrices in every degree.
    """
    betti = [rng.randint(0, 2) for _ in range(length)]
    pairs = [rng.randint(0, 2) if q < length - 1 else 0 for q in range(length)]
    dims = [betti[q] + pairs[q] + (pairs[q - 1] if q else 0) for q in range(length)]
    # basis order in degree q: classes, sources of pairs starting at q, targets of pairs from q-1
    diffs = {}
    change = [random_invertible(rng, d) for d in dims]
    for q in range(length - 1):
        entries = {}
        for i in range(pairs[q]):
            src = betti[q] + i
            tgt = betti[q + 1] + pairs[q + 1] + i
            entries[(tgt, src)] = 1
        std = Matrix.from_sparse(dims[q + 1], dims[q], entries)
        diffs[q] = change[q + 1] @ std @ inverse(change[q]) if dims[q] and dims[q + 1] else std
    return Complex(0, dims, diffs), tuple(betti)


def null_homotopic_map(rng: random.Random, k: Complex, l: Complex) -> ChainMap:
    """d h + h d for a random h: K^q -> L^{q-1}."""
    lo = min(k.lo, l.lo)
    hi = max(k.hi, l.hi)
    h = {q: Matrix([[random_fraction(rng) for _ in range(k.dim(q))] for _ in range(l.dim(q - 1))],
                   cols=k.dim(q)) if l.dim(q - 1) else Matrix.zeros(0, k.dim(q))
         for q in range(lo - 1, hi + 2)}
    comps = {q: l.d(q - 1) @ h[q] + h[q + 1] @ k.d(q) for q in range(lo, hi + 1)}
    return ChainMap(k, l, comps)
