"""Exact matrix algebra over the coefficient ring tower.

Everything here is exact: Gauss-Jordan over the field targets, truncated
Neumann series over the series target, fraction-free Bareiss elimination
for ranks and determinants over polynomial coefficients, and invariant
factors over the PID R computed from determinantal divisors (gcds of k x k
minors), with candidate pruning so sparse matrices stay cheap.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import ceil
from typing import Callable, Optional

from . import intpoly
from ._terms import (
    CoeffField,
    QQ_COEFF,
    t_exact_div,
    t_is_zero,
    t_mul,
    t_neg,
    t_sub,
)
from .errors import (
    DimensionError,
    NotInvertibleError,
    PreconditionError,
    RepresentationError,
    ShapeError,
    SizeCapError,
)
from .group_ring import GroupRingElement
from .ring_tower import (
    FunctionField,
    GroupRing,
    NovikovElement,
    NovikovRing,
    PrimeField,
    R_is_unit,
    RationalField,
    RationalFnR,
    RationalFunctionRing,
    Ring,
    ratfunc_to_rational_fn,
    rational_fn_to_ratfunc,
)

INVARIANT_FACTOR_SIZE_CAP = 12


@dataclass(frozen=True)
class RingMatrix:
    """A dense matrix with entries in a fixed coefficient ring.

    The shape is stored explicitly so 0 x k and k x 0 matrices keep both
    dimensions (they show up constantly at the ends of chain complexes).
    """

    ring: Ring
    shape: tuple
    entries: tuple

    def __post_init__(self):
        r, c = self.shape
        rows = tuple(tuple(row) for row in self.entries)
        if len(rows) != r or any(len(row) != c for row in rows):
            raise ShapeError(
                f"entries do not fill the declared {r}x{c} shape"
            )
        object.__setattr__(self, "shape", (int(r), int(c)))
        object.__setattr__(self, "entries", rows)

    @classmethod
    def from_rows(cls, ring: Ring, rows, cols: Optional[int] = None) -> "RingMatrix":
        rows = tuple(tuple(r) for r in rows)
        if rows:
            width = len(rows[0])
        elif cols is None:
            width = 0
        else:
            width = cols
        return cls(ring, (len(rows), width), rows)

    @classmethod
    def zero(cls, ring: Ring, rows: int, cols: int) -> "RingMatrix":
        z = ring.zero()
        return cls(
            ring,
            (rows, cols),
            tuple(tuple(z for _ in range(cols)) for _ in range(rows)),
        )

    @classmethod
    def identity(cls, ring: Ring, n: int) -> "RingMatrix":
        z, o = ring.zero(), ring.one()
        return cls(
            ring,
            (n, n),
            tuple(tuple(o if i == j else z for j in range(n)) for i in range(n)),
        )

    @property
    def rows(self) -> int:
        return self.shape[0]

    @property
    def cols(self) -> int:
        return self.shape[1]

    @property
    def is_square(self) -> bool:
        return self.rows == self.cols

    def entry(self, i: int, j: int):
        return self.entries[i][j]

    def _check_ring(self, other: "RingMatrix"):
        if self.ring != other.ring:
            raise DimensionError(
                f"mixed coefficient rings: {self.ring} vs {other.ring}"
            )

    def __add__(self, other):
        if not isinstance(other, RingMatrix):
            return NotImplemented
        self._check_ring(other)
        if (self.rows, self.cols) != (other.rows, other.cols):
            raise ShapeError(
                f"{self.rows}x{self.cols} + {other.rows}x{other.cols}"
            )
        add = self.ring.add
        return RingMatrix(
            self.ring,
            self.shape,
            tuple(
                tuple(add(a, b) for a, b in zip(ra, rb))
                for ra, rb in zip(self.entries, other.entries)
            ),
        )

    def __neg__(self):
        neg = self.ring.neg
        return RingMatrix(
            self.ring,
            self.shape,
            tuple(tuple(neg(a) for a in row) for row in self.entries),
        )

    def __sub__(self, other):
        if not isinstance(other, RingMatrix):
            return NotImplemented
        return self + (-other)

    def __matmul__(self, other):
        if not isinstance(other, RingMatrix):
            return NotImplemented
        self._check_ring(other)
        if self.cols != other.rows:
            raise ShapeError(
                f"{self.rows}x{self.cols} @ {other.rows}x{other.cols}"
            )
        ring = self.ring
        if self.cols == 0 or other.cols == 0:
            return RingMatrix.zero(ring, self.rows, other.cols)
        bt = list(zip(*other.entries))
        out = []
        for row in self.entries:
            out_row = []
            for col in bt:
                acc = ring.zero()
                for a, b in zip(row, col):
                    if ring.is_zero(a) or ring.is_zero(b):
                        continue
                    acc = ring.add(acc, ring.mul(a, b))
                out_row.append(acc)
            out.append(tuple(out_row))
        return RingMatrix(ring, (self.rows, other.cols), tuple(out))

    def scale(self, c) -> "RingMatrix":
        mul = self.ring.mul
        return RingMatrix(
            self.ring,
            self.shape,
            tuple(tuple(mul(c, a) for a in row) for row in self.entries),
        )

    def equals(self, other: "RingMatrix") -> bool:
        self._check_ring(other)
        if (self.rows, self.cols) != (other.rows, other.cols):
            return False
        eq = self.ring.eq
        return all(
            eq(a, b)
            for ra, rb in zip(self.entries, other.entries)
            for a, b in zip(ra, rb)
        )

    @property
    def is_zero_matrix(self) -> bool:
        isz = self.ring.is_zero
        return all(isz(a) for row in self.entries for a in row)

    def submatrix(self, row_idx, col_idx) -> "RingMatrix":
        row_idx, col_idx = list(row_idx), list(col_idx)
        return RingMatrix(
            self.ring,
            (len(row_idx), len(col_idx)),
            tuple(
                tuple(self.entries[i][j] for j in col_idx) for i in row_idx
            ),
        )

    def map_entries(self, fn: Callable, target: Ring) -> "RingMatrix":
        return RingMatrix(
            target,
            self.shape,
            tuple(tuple(fn(a) for a in row) for row in self.entries),
        )

    def transpose(self) -> "RingMatrix":
        return RingMatrix(
            self.ring,
            (self.cols, self.rows),
            tuple(zip(*self.entries)) if self.entries else
            tuple(() for _ in range(self.cols)),
        )

    def __str__(self):
        es = getattr(self.ring, "element_str", str)
        body = "\n".join(
            "  [" + ", ".join(es(a) for a in row) + "]" for row in self.entries
        )
        return f"matrix {self.rows}x{self.cols} over {self.ring}:\n{body}"


def stack_blocks(ring: Ring, grid) -> RingMatrix:
    """Assemble a matrix from a grid of RingMatrix blocks (row-major)."""
    rows = []
    width = None
    for block_row in grid:
        if not block_row:
            continue
        height = block_row[0].rows
        if any(b.rows != height for b in block_row):
            raise ShapeError("block heights disagree within a block row")
        row_width = sum(b.cols for b in block_row)
        if width is None:
            width = row_width
        elif width != row_width:
            raise ShapeError("block rows have different total widths")
        for i in range(height):
            merged = []
            for b in block_row:
                merged.extend(b.entries[i])
            rows.append(tuple(merged))
    return RingMatrix(ring, (len(rows), width or 0), tuple(rows))


# ---------------------------------------------------------------------------
# field linear algebra
# ---------------------------------------------------------------------------


def _require_field(mat: RingMatrix):
    if not mat.ring.is_field:
        raise PreconditionError(f"{mat.ring} is not a field")


def field_rank(mat: RingMatrix) -> int:
    """Row reduction rank over any of the field targets.

    Over a function field the entries are first cleared to polynomials row
    by row and eliminated fraction free, which avoids coefficient blowup
    from unreduced multivariate quotients.
    """
    if isinstance(mat.ring, FunctionField):
        rows, K = _cleared_poly_rows(mat)
        return _bareiss_rank_polys(rows, K)
    _require_field(mat)
    ring = mat.ring
    work = [list(row) for row in mat.entries]
    rank = 0
    for col in range(mat.cols):
        piv = next(
            (r for r in range(rank, len(work)) if not ring.is_zero(work[r][col])),
            None,
        )
        if piv is None:
            continue
        work[rank], work[piv] = work[piv], work[rank]
        inv_p = ring.inv(work[rank][col])
        work[rank] = [ring.mul(inv_p, v) for v in work[rank]]
        for r in range(len(work)):
            if r == rank or ring.is_zero(work[r][col]):
                continue
            f = work[r][col]
            work[r] = [
                ring.sub(v, ring.mul(f, w)) for v, w in zip(work[r], work[rank])
            ]
        rank += 1
    return rank


def field_inverse(mat: RingMatrix) -> RingMatrix:
    """Gauss-Jordan inverse over a field; reports the zero determinant on
    failure so callers can name the obstruction."""
    _require_field(mat)
    if not mat.is_square:
        raise ShapeError(f"inverse of a {mat.rows}x{mat.cols} matrix")
    ring = mat.ring
    n = mat.rows
    ident = RingMatrix.identity(ring, n)
    work = [list(r) + list(i) for r, i in zip(mat.entries, ident.entries)]
    for col in range(n):
        piv = next(
            (r for r in range(col, n) if not ring.is_zero(work[r][col])), None
        )
        if piv is None:
            raise NotInvertibleError(
                "matrix is singular over the field", determinant=ring.zero()
            )
        work[col], work[piv] = work[piv], work[col]
        inv_p = ring.inv(work[col][col])
        work[col] = [ring.mul(inv_p, v) for v in work[col]]
        for r in range(n):
            if r == col or ring.is_zero(work[r][col]):
                continue
            f = work[r][col]
            work[r] = [
                ring.sub(v, ring.mul(f, w)) for v, w in zip(work[r], work[col])
            ]
    return RingMatrix(ring, (n, n), tuple(tuple(row[n:]) for row in work))


def field_determinant(mat: RingMatrix):
    _require_field(mat)
    if not mat.is_square:
        raise ShapeError("determinant of a non-square matrix")
    ring = mat.ring
    n = mat.rows
    work = [list(row) for row in mat.entries]
    det = ring.one()
    for col in range(n):
        piv = next(
            (r for r in range(col, n) if not ring.is_zero(work[r][col])), None
        )
        if piv is None:
            return ring.zero()
        if piv != col:
            work[col], work[piv] = work[piv], work[col]
            det = ring.neg(det)
        det = ring.mul(det, work[col][col])
        inv_p = ring.inv(work[col][col])
        for r in range(col + 1, n):
            if ring.is_zero(work[r][col]):
                continue
            f = ring.mul(work[r][col], inv_p)
            work[r] = [
                ring.sub(v, ring.mul(f, w)) for v, w in zip(work[r], work[col])
            ]
    return det


# ---------------------------------------------------------------------------
# fraction-free elimination over polynomial coefficients
# ---------------------------------------------------------------------------


def _cleared_poly_rows(mat: RingMatrix):
    """Clear every row of a function field matrix to polynomial term dicts.

    Each row is scaled by the product of its entry denominators (a nonzero
    field element, so the row space and rank are unchanged).
    """
    field: FunctionField = mat.ring
    K = field.coeffs
    rows = []
    for row in mat.entries:
        dens = [e.den for e in row]
        cleared = []
        for j, e in enumerate(row):
            term = e.num
            for k, d in enumerate(dens):
                if k != j:
                    term = t_mul(term, d, K)
            cleared.append(term)
        rows.append(cleared)
    return rows, K


def _bareiss_rank_polys(rows, K: CoeffField) -> int:
    """Bareiss elimination on term-dict polynomial rows; exact divisions
    only, deterministic first-nonzero pivoting."""
    work = [list(r) for r in rows]
    nrows = len(work)
    ncols = len(work[0]) if work else 0
    prev = None  # previous pivot
    rank = 0
    for col in range(ncols):
        if rank >= nrows:
            break
        piv = next(
            (r for r in range(rank, nrows) if not t_is_zero(work[r][col])), None
        )
        if piv is None:
            continue
        work[rank], work[piv] = work[piv], work[rank]
        pivot = work[rank][col]
        for r in range(rank + 1, nrows):
            row_r = work[r]
            lead = row_r[col]
            new_row = []
            for j in range(ncols):
                if j < col:
                    new_row.append({})
                    continue
                v = t_mul(pivot, row_r[j], K)
                if not t_is_zero(lead):
                    v = t_sub(v, t_mul(lead, work[rank][j], K), K)
                if prev is not None and not t_is_zero(v):
                    v = t_exact_div(v, prev, K)
                new_row.append(v)
            work[r] = new_row
        prev = pivot
        rank += 1
    return rank


def function_field_rank(mat: RingMatrix) -> int:
    rows, K = _cleared_poly_rows(mat)
    return _bareiss_rank_polys(rows, K)


def rank_over_fraction_field(mat: RingMatrix) -> int:
    """Rank of the matrix over the fraction field of its coefficient ring."""
    ring = mat.ring
    if mat.rows == 0 or mat.cols == 0:
        return 0
    if isinstance(ring, FunctionField):
        return function_field_rank(mat)
    if isinstance(ring, (RationalField, PrimeField)):
        return field_rank(mat)
    if isinstance(ring, RationalFunctionRing):
        field = FunctionField(1, 0)
        lifted = mat.map_entries(
            lambda f: rational_fn_to_ratfunc(f, field), field
        )
        return function_field_rank(lifted)
    raise PreconditionError(
        f"rank over the fraction field is not defined for {ring}"
    )


# ---------------------------------------------------------------------------
# determinants over Z[H] and R
# ---------------------------------------------------------------------------


def _gre_to_poly_grid(mat: RingMatrix):
    """Shift a Z[H] matrix entrywise into nonneg exponents per the whole
    matrix (a global monomial factor), returning term dicts over Q."""
    rank = mat.ring.rank
    mins = [0] * rank
    for row in mat.entries:
        for e in row:
            for exp in e.terms:
                for i, v in enumerate(exp):
                    mins[i] = min(mins[i], v)
    shift = tuple(-m for m in mins)
    grid = []
    for row in mat.entries:
        grid.append(
            [
                {
                    tuple(x + s for x, s in zip(exp, shift)): Fraction(c)
                    for exp, c in e.terms.items()
                }
                for e in row
            ]
        )
    return grid, shift


def _poly_dict_to_gre(terms: dict, rank: int, shift) -> GroupRingElement:
    out = {}
    for exp, c in terms.items():
        if c.denominator != 1:
            raise PreconditionError("non-integral coefficient after elimination")
        out[tuple(x - s for x, s in zip(exp, shift))] = int(c)
    return GroupRingElement(rank, out)


def _bareiss_det_polys(grid, K: CoeffField):
    """Determinant of a square grid of term-dict polynomials, fraction free."""
    from ._terms import t_sub

    n = len(grid)
    if n == 0:
        return {(): K.one()}
    work = [list(r) for r in grid]
    prev = None
    sign = 1
    for col in range(n - 1):
        piv = next(
            (r for r in range(col, n) if not t_is_zero(work[r][col])), None
        )
        if piv is None:
            return {}
        if piv != col:
            work[col], work[piv] = work[piv], work[col]
            sign = -sign
        pivot = work[col][col]
        for r in range(col + 1, n):
            lead = work[r][col]
            new_row = [{}] * (col + 1)
            for j in range(col + 1, n):
                v = t_sub(
                    t_mul(pivot, work[r][j], K),
                    t_mul(lead, work[col][j], K),
                    K,
                )
                if prev is not None and not t_is_zero(v):
                    v = t_exact_div(v, prev, K)
                new_row.append(v)
            work[r] = new_row
        prev = pivot
    det = work[n - 1][n - 1]
    if sign < 0:
        det = t_neg(det, K)
    return det


def group_ring_determinant(mat: RingMatrix) -> GroupRingElement:
    if not isinstance(mat.ring, GroupRing):
        raise PreconditionError("expected a matrix over Z[H]")
    if not mat.is_square:
        raise ShapeError("determinant of a non-square matrix")
    if mat.rows == 0:
        return mat.ring.one()
    rank = mat.ring.rank
    grid, shift = _gre_to_poly_grid(mat)
    det = _bareiss_det_polys(grid, QQ_COEFF)
    n = mat.rows
    total_shift = tuple(s * n for s in shift)
    if not det:
        return GroupRingElement.zero(rank)
    return _poly_dict_to_gre(det, rank, total_shift)


def group_ring_inverse(mat: RingMatrix) -> RingMatrix:
    """Adjugate inverse over Z[H]; only +- monomial determinants are units."""
    ring: GroupRing = mat.ring
    det = group_ring_determinant(mat)
    unit = len(det.terms) == 1 and abs(next(iter(det.terms.values()))) == 1
    if not unit:
        raise NotInvertibleError(
            f"determinant {det} is not a unit of {ring}", determinant=det
        )
    (exp, c), = det.terms.items()
    det_inv = GroupRingElement.monomial(
        ring.rank, tuple(-v for v in exp)
    ) * int(c)
    n = mat.rows
    idx = range(n)
    cof_rows = []
    for i in idx:
        row = []
        for j in idx:
            minor = mat.submatrix(
                [r for r in idx if r != j], [cc for cc in idx if cc != i]
            )
            m = group_ring_determinant(minor)
            if (i + j) % 2:
                m = -m
            row.append(m * det_inv)
        cof_rows.append(tuple(row))
    return RingMatrix(ring, (n, n), tuple(cof_rows))


def _r_cleared_int_rows(mat: RingMatrix):
    """Scale each row of an R-matrix by units (monic denominators and powers
    of t) until its entries are integer polynomial tuples."""
    rows = []
    for row in mat.entries:
        dens = [f.den for f in row]
        laurent = []
        for j, f in enumerate(row):
            p = f.num
            for k, d in enumerate(dens):
                if k != j:
                    p = p * GroupRingElement(
                        1, {(i,): c for i, c in enumerate(d) if c}
                    )
            laurent.append(p)
        shift = 0
        for p in laurent:
            for e in p.terms:
                shift = min(shift, e[0])
        out_row = []
        for p in laurent:
            if p.is_zero:
                out_row.append(())
                continue
            top = max(e[0] for e in p.terms)
            coeffs = [0] * (top - shift + 1)
            for (e,), c in p.terms.items():
                coeffs[e - shift] = c
            out_row.append(tuple(coeffs))
        rows.append(out_row)
    return rows


def r_determinant(mat: RingMatrix) -> RationalFnR:
    """Determinant over R via row clearing and integer-polynomial Bareiss."""
    if not isinstance(mat.ring, RationalFunctionRing):
        raise PreconditionError("expected a matrix over R")
    if not mat.is_square:
        raise ShapeError("determinant of a non-square matrix")
    if mat.rows == 0:
        return RationalFnR.one()
    # det(M) = det(cleared) / prod(row factors); each factor is monic * t^k
    factor_den = (1,)
    shift_total = 0
    rows = []
    for row in mat.entries:
        dens = [f.den for f in row]
        laurent = []
        for j, f in enumerate(row):
            p = f.num
            for k, d in enumerate(dens):
                if k != j:
                    p = p * GroupRingElement(
                        1, {(i,): c for i, c in enumerate(d) if c}
                    )
            laurent.append(p)
        shift = 0
        for p in laurent:
            for e in p.terms:
                shift = min(shift, e[0])
        shift_total += shift
        out_row = []
        for p in laurent:
            if p.is_zero:
                out_row.append({})
                continue
            out_row.append(
                {(e[0] - shift,): Fraction(c) for e, c in p.terms.items()}
            )
        rows.append(out_row)
        for d in dens:
            factor_den = intpoly.mul(factor_den, d)
    det = _bareiss_det_polys(rows, QQ_COEFF)
    num_terms = {}
    for (e,), c in det.items():
        if c.denominator != 1:
            raise PreconditionError("non-integral coefficient after elimination")
        num_terms[(e + shift_total,)] = int(c)
    return RationalFnR(GroupRingElement(1, num_terms), factor_den)


def r_inverse(mat: RingMatrix) -> RingMatrix:
    """Inverse over R: the determinant must be a unit of R.  The entries of
    the inverse are computed in Q(t) and cast back into R (they must land
    there since the adjugate stays in R and the determinant is a unit)."""
    ring = mat.ring
    det = r_determinant(mat)
    if not R_is_unit(det):
        raise NotInvertibleError(
            "determinant is not a unit of R", determinant=det
        )
    field = FunctionField(1, 0)
    lifted = mat.map_entries(lambda f: rational_fn_to_ratfunc(f, field), field)
    inv = field_inverse(lifted)
    return inv.map_entries(lambda x: ratfunc_to_rational_fn(x, field), ring)


# ---------------------------------------------------------------------------
# Neumann series over truncated Novikov series
# ---------------------------------------------------------------------------


def _novikov_max_weight(mat: RingMatrix) -> Optional[Fraction]:
    best = None
    for row in mat.entries:
        for e in row:
            w = e.max_weight()
            if w is not None and (best is None or w > best):
                best = w
    return best


def neumann_series_inverse(perturbation: RingMatrix) -> RingMatrix:
    """Inverse of (I + B) for a strictly negative-weight B, as a finite
    truncated geometric series: terms below the cutoff die, so powers of B
    eventually truncate to zero."""
    ring: NovikovRing = perturbation.ring
    if not isinstance(ring, NovikovRing):
        raise PreconditionError("Neumann series needs the truncated series ring")
    if not perturbation.is_square:
        raise ShapeError("Neumann inverse of a non-square matrix")
    n = perturbation.rows
    lam = _novikov_max_weight(perturbation)
    ident = RingMatrix.identity(ring, n)
    if lam is None:
        return ident
    if lam >= 0:
        raise RepresentationError(
            f"perturbation has a term of weight {lam} >= 0; series diverges"
        )
    # safety bound: powers sink by at least |lam| per factor
    bound = int(ceil(Fraction(ring.cutoff, lam))) + 2
    acc = ident
    power = ident
    minus_b = -perturbation
    for _ in range(bound):
        power = power @ minus_b
        if power.is_zero_matrix:
            break
        acc = acc + power
    else:
        raise RepresentationError("Neumann series failed to terminate")
    return acc


def novikov_inverse(mat: RingMatrix) -> RingMatrix:
    """Invert a series matrix of the shape D + B with D diagonal with
    entries +-1 (weight-zero part) and B strictly negative.

    M = D(I + D^-1 B), so M^-1 = (I + D^-1 B)^-1 D^-1 with D^-1 = D.
    """
    ring: NovikovRing = mat.ring
    if not isinstance(ring, NovikovRing):
        raise PreconditionError("expected a matrix over the series ring")
    if not mat.is_square:
        raise ShapeError("inverse of a non-square matrix")
    n = mat.rows
    xi = ring.xi
    signs = []
    b_rows = []
    for i, row in enumerate(mat.entries):
        b_row = []
        for j, e in enumerate(row):
            zero_part = {
                exp: c for exp, c in e.terms.items() if xi.weight(exp) >= 0
            }
            neg_part = {
                exp: c for exp, c in e.terms.items() if xi.weight(exp) < 0
            }
            if i == j:
                origin = (0,) * xi.rank
                if set(zero_part) != {origin} or abs(zero_part[origin]) != 1:
                    raise NotInvertibleError(
                        "diagonal entry is not +-1 plus negative terms",
                        determinant=e,
                    )
                signs.append(zero_part[origin])
            elif zero_part:
                raise NotInvertibleError(
                    "off-diagonal entry carries nonnegative weight",
                    determinant=e,
                )
            b_row.append(NovikovElement(xi, e.cutoff, neg_part))
        b_rows.append(b_row)
    # N = D^-1 B scales row i by sign_i
    n_rows = []
    for i, b_row in enumerate(b_rows):
        s = signs[i]
        n_rows.append(
            tuple(
                NovikovElement(xi, e.cutoff, {k: s * c for k, c in e.terms.items()})
                for e in b_row
            )
        )
    series = neumann_series_inverse(RingMatrix(ring, (n, n), tuple(n_rows)))
    d_inv = RingMatrix(
        ring,
        (n, n),
        tuple(
            tuple(
                ring.from_int(signs[i]) if i == j else ring.zero()
                for j in range(n)
            )
            for i in range(n)
        ),
    )
    return series @ d_inv


# ---------------------------------------------------------------------------
# invariant factors over R
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class InvariantFactorProfile:
    """Smith-type data of a matrix over the PID R.

    ``torsion_factors`` lists the non-unit invariant factors as integer
    polynomial coefficient tuples (ascending), each determined up to a unit
    of R.  ``top_divisor`` is the gcd of the rank-by-rank minors, kept for
    locating specialization jumps.
    """

    rank: int
    unit_count: int
    torsion_factors: tuple
    top_divisor: tuple

    @property
    def nonunit_count(self) -> int:
        return len(self.torsion_factors)


def _int_poly_det(grid) -> tuple:
    """Bareiss determinant of a square grid of int coefficient tuples."""
    n = len(grid)
    if n == 0:
        return (1,)
    work = [list(r) for r in grid]
    prev = None
    sign = 1
    for col in range(n - 1):
        piv = next(
            (r for r in range(col, n) if work[r][col]), None
        )
        if piv is None:
            return ()
        if piv != col:
            work[col], work[piv] = work[piv], work[col]
            sign = -sign
        pivot = work[col][col]
        for r in range(col + 1, n):
            lead = work[r][col]
            new_row = [()] * (col + 1)
            for j in range(col + 1, n):
                v = intpoly.sub(
                    intpoly.mul(pivot, work[r][j]),
                    intpoly.mul(lead, work[col][j]),
                )
                if prev is not None and v:
                    v = intpoly.exact_div_z(v, prev)
                new_row.append(v)
            work[r] = new_row
        prev = pivot
    det = work[n - 1][n - 1]
    return intpoly.neg(det) if sign < 0 else det


def invariant_factors_over_R(mat: RingMatrix) -> InvariantFactorProfile:
    """Invariant factors via determinantal divisors.

    Level k collects gcds of k x k minors; only minors extending a nonzero
    (k-1) minor can be nonzero, so candidates are grown level by level from
    the nonzero support.  Quotients delta_k / delta_(k-1) are units of R
    exactly when they have content 1 and leading coefficient +-1.
    """
    if not isinstance(mat.ring, RationalFunctionRing):
        raise PreconditionError("invariant factors are computed over R")
    if mat.rows > INVARIANT_FACTOR_SIZE_CAP or mat.cols > INVARIANT_FACTOR_SIZE_CAP:
        raise SizeCapError(
            f"matrix is {mat.rows}x{mat.cols}; the minor enumeration is "
            f"capped at {INVARIANT_FACTOR_SIZE_CAP}"
        )
    rows = _r_cleared_int_rows(mat)
    nr, nc = mat.rows, mat.cols
    if nr == 0 or nc == 0:
        return InvariantFactorProfile(0, 0, (), (1,))

    deltas = [(1,)]  # delta_0
    # nonzero minors of the current level: (row tuple, col tuple) -> det
    level = {((), ()): (1,)}
    k = 0
    while k < min(nr, nc):
        candidates = set()
        for (rs, cs) in level:
            for i in range(nr):
                if i in rs:
                    continue
                for j in range(nc):
                    if j in cs:
                        continue
                    candidates.add(
                        (tuple(sorted(rs + (i,))), tuple(sorted(cs + (j,))))
                    )
        nxt = {}
        g = ()
        prev_delta = deltas[k]
        settled = False
        for rs, cs in sorted(candidates):
            det = _int_poly_det([[rows[i][j] for j in cs] for i in rs])
            if not det:
                continue
            nxt[(rs, cs)] = det
            if settled:
                continue  # gcd already minimal; minors still feed level k+1
            g = _positive_lead(det) if not g else intpoly.gcd_z(g, det)
            if g == prev_delta:
                settled = True
        if not nxt:
            break
        deltas.append(_positive_lead(g))
        level = nxt
        k += 1

    rank = len(deltas) - 1
    unit_count = 0
    torsion = []
    for i in range(1, rank + 1):
        quot = intpoly.exact_div_z(deltas[i], deltas[i - 1])
        if intpoly.content(quot) == 1 and abs(quot[-1]) == 1:
            unit_count += 1
        else:
            torsion.append(intpoly.normalize(quot))
    return InvariantFactorProfile(
        rank, unit_count, tuple(torsion), deltas[rank] if rank else (1,)
    )


def _positive_lead(p: tuple) -> tuple:
    p = intpoly.normalize(p)
    if p and p[-1] < 0:
        return tuple(-c for c in p)
    return p


# ---------------------------------------------------------------------------
# inverse dispatch
# ---------------------------------------------------------------------------


def exact_inverse(mat: RingMatrix) -> RingMatrix:
    """Invert over the matrix's own coefficient ring, or raise
    NotInvertibleError naming the obstruction."""
    ring = mat.ring
    if ring.is_field:
        return field_inverse(mat)
    if isinstance(ring, RationalFunctionRing):
        return r_inverse(mat)
    if isinstance(ring, GroupRing):
        return group_ring_inverse(mat)
    if isinstance(ring, NovikovRing):
        return novikov_inverse(mat)
    raise PreconditionError(f"no inverse routine for {ring}")
