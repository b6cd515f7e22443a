"""Shared strategies and random builders for the test suite.

The collapsible complex generator is the workhorse: it assembles a block
differential around a known core complex so that the collapse
preconditions hold by construction, with free twisting blocks that make
the Schur correction nontrivial.  Everything stays tiny; the point is
exactness, not scale.
"""

from __future__ import annotations

import random
from fractions import Fraction

from hypothesis import strategies as st

from novikov_forge.chain_complex import BasedChainComplex, BlockPartition
from novikov_forge.group_ring import CohomologyClass, GroupRingElement
from novikov_forge.matrix_engine import (
    RingMatrix,
    field_determinant,
    field_inverse,
)
from novikov_forge.ring_tower import FunctionField, GroupRing

# ---------------------------------------------------------------------------
# hypothesis strategies
# ---------------------------------------------------------------------------

small_int = st.integers(min_value=-4, max_value=4)
small_exp = st.integers(min_value=-3, max_value=3)


@st.composite
def group_ring_elements(draw, rank: int = 1, max_terms: int = 3):
    n = draw(st.integers(min_value=0, max_value=max_terms))
    terms = {}
    for _ in range(n):
        exp = tuple(draw(small_exp) for _ in range(rank))
        c = draw(small_int)
        if c:
            terms[exp] = terms.get(exp, 0) + c
    return GroupRingElement(rank, {e: c for e, c in terms.items() if c})


@st.composite
def integral_classes(draw, rank: int = 1):
    weights = [draw(st.integers(min_value=-3, max_value=3)) for _ in range(rank)]
    if all(w == 0 for w in weights):
        weights[0] = 1
    return CohomologyClass.of(*weights)


@st.composite
def fractional_classes(draw, rank: int = 1):
    weights = [
        Fraction(draw(st.integers(-6, 6)), draw(st.integers(1, 4)))
        for _ in range(rank)
    ]
    if all(w == 0 for w in weights):
        weights[0] = Fraction(1)
    return CohomologyClass.of(*weights)


@st.composite
def xi_negative_elements(draw, xi: CohomologyClass, max_terms: int = 3):
    """Elements supported on strictly negative weights for the given class."""
    rank = xi.rank
    n = draw(st.integers(min_value=0, max_value=max_terms))
    terms = {}
    for _ in range(n):
        for _attempt in range(30):
            exp = tuple(
                draw(st.integers(min_value=-3, max_value=3)) for _ in range(rank)
            )
            if xi.weight(exp) < 0:
                break
        else:
            continue
        c = draw(small_int)
        if c:
            terms[exp] = terms.get(exp, 0) + c
    return GroupRingElement(rank, {e: c for e, c in terms.items() if c})


# ---------------------------------------------------------------------------
# random rational function field matrices (plain random module, seeded)
# ---------------------------------------------------------------------------

QT = FunctionField(1)


def random_qt(rng: random.Random, max_degree: int = 1):
    """A random element of Q(t), in fact a small polynomial."""
    num = {}
    for k in range(rng.randint(0, max_degree) + 1):
        c = rng.randint(-3, 3)
        if c:
            num[(k,)] = Fraction(c)
    return QT.make(num, {(0,): Fraction(1)})


def random_qt_matrix(rng: random.Random, rows: int, cols: int) -> RingMatrix:
    return RingMatrix.from_rows(
        QT,
        [[random_qt(rng) for _ in range(cols)] for _ in range(rows)],
        cols,
    )


def random_invertible_qt(rng: random.Random, n: int) -> RingMatrix:
    if n == 0:
        return RingMatrix.identity(QT, 0)
    while True:
        m = random_qt_matrix(rng, n, n)
        if not QT.is_zero(field_determinant(m)):
            return m


# ---------------------------------------------------------------------------
# random collapsible complexes over Q(t)
# ---------------------------------------------------------------------------


def random_core_complex(rng: random.Random, dims, ranks):
    """Staircase core: d_i = U_(i-1) J_i U_i^(-1) with J J = 0 by layout.

    J_i sends the first ranks[i] basis vectors of degree i onto the last
    ranks[i] of degree i-1, so consecutive images and kernels cannot meet
    provided ranks[i-1] + ranks[i] <= dims[i-1].
    """
    n = len(dims)
    units = [random_invertible_qt(rng, dims[i]) for i in range(n)]
    inv_units = [field_inverse(u) for u in units]
    diffs = []
    for i in range(1, n):
        rows, cols, r = dims[i - 1], dims[i], ranks[i]
        grid = [[QT.zero()] * cols for _ in range(rows)]
        for j in range(r):
            grid[rows - r + j][j] = QT.one()
        J = RingMatrix.from_rows(QT, grid, cols)
        diffs.append(units[i - 1] @ J @ inv_units[i])
    return diffs


def random_collapsible_complex(rng: random.Random, with_beta: bool = True):
    """A complex plus a partition that collapse must accept.

    Basis order per degree: upper, lower, kept.  The differential is

        [ 0        0   0      ]
        [ gamma    0   w d_C  ]
        [ d_C v    0   d_C    ]

    which squares to zero for any choice of the twisting blocks w and v
    because d_C does.  With v = 0 the collapsed complex equals the core on
    the nose; with v free the Schur correction is exercised.
    Returns (complex, partition, core differentials).
    """
    n_degrees = rng.randint(2, 4)
    kept = [rng.randint(0, 2) for _ in range(n_degrees)]
    if all(k == 0 for k in kept):
        kept[rng.randrange(n_degrees)] = 1
    ranks = [0] * n_degrees
    for i in range(1, n_degrees):
        cap = kept[i - 1] - ranks[i - 1]
        ranks[i] = rng.randint(0, min(kept[i], max(cap, 0)))
    core = random_core_complex(rng, kept, ranks)

    # pairs[i] = number of upper generators in degree i = lower in degree i-1
    pairs = [0] + [rng.randint(0, 2) for _ in range(n_degrees - 1)]

    basis = []
    partition_u, partition_l, partition_k = [], [], []
    for i in range(n_degrees):
        u = [f"u{i}.{j}" for j in range(pairs[i])]
        l = [f"l{i}.{j}" for j in range(pairs[i + 1] if i + 1 < n_degrees else 0)]
        k = [f"k{i}.{j}" for j in range(kept[i])]
        basis.append(tuple(u + l + k))
        partition_u.append(tuple(u))
        partition_l.append(tuple(l))
        partition_k.append(tuple(k))

    diffs = []
    for i in range(1, n_degrees):
        u_r, l_r, k_r = pairs[i - 1], pairs[i], kept[i - 1]
        u_c, l_c, k_c = pairs[i], pairs[i + 1] if i + 1 < n_degrees else 0, kept[i]
        rows = u_r + l_r + k_r
        cols = u_c + l_c + k_c
        grid = [[QT.zero()] * cols for _ in range(rows)]
        gamma = random_invertible_qt(rng, u_c)  # l_(i-1) x u_i, square
        for a in range(l_r):
            for b in range(u_c):
                grid[u_r + a][b] = gamma.entry(a, b)
        d_core = core[i - 1]
        w = random_qt_matrix(rng, l_r, k_r)  # kept_(i-1) -> lower_(i-1)
        wd = w @ d_core
        for a in range(l_r):
            for b in range(k_c):
                grid[u_r + a][u_c + l_c + b] = wd.entry(a, b)
        if with_beta and u_c:
            v = random_qt_matrix(rng, k_c, u_c)  # upper_i -> kept_i
            dv = d_core @ v
            for a in range(k_r):
                for b in range(u_c):
                    grid[u_r + l_r + a][b] = dv.entry(a, b)
        for a in range(k_r):
            for b in range(k_c):
                grid[u_r + l_r + a][u_c + l_c + b] = d_core.entry(a, b)
        diffs.append(RingMatrix.from_rows(QT, grid, cols))

    cx = BasedChainComplex(QT, tuple(basis), tuple(diffs))
    part = BlockPartition(tuple(partition_u), tuple(partition_l), tuple(partition_k))
    return cx, part, core
