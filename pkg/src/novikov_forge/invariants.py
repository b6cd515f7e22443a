"""Numerical invariants read off localized chain complexes.

Two families of numbers drive everything: free ranks of homology over the
fraction field (generic betti numbers) and minimal generator counts of the
torsion of homology over the PID R (torsion numbers).  Their sum bounds
critical point counts from below degree by degree, with the torsion of two
neighboring degrees both contributing.

Specialization at a nonzero rational point can only raise homology; the
locus where it does is cut out by one integer polynomial per degree, the
gcds of top minors of the two differentials touching that degree.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from . import intpoly
from ._terms import CoeffField, QQ_COEFF
from .chain_complex import BasedChainComplex, betti_numbers
from .errors import PreconditionError, RepresentationError, ShapeError
from .group_ring import CohomologyClass, GroupRingElement
from .matrix_engine import (
    RingMatrix,
    field_determinant,
    invariant_factors_over_R,
)
from .ring_tower import (
    FieldBundleDescriptor,
    GroupRing,
    MonodromyRep,
    PrimeField,
    RationalField,
    RationalFnRDescriptor,
    RationalFunctionRing,
    RBundleDescriptor,
    RepresentationDescriptor,
    ScalarBundleDescriptor,
)


@dataclass(frozen=True)
class NovikovNumbers:
    """Free ranks and torsion numbers per degree over R.

    ``b[i]`` is the rank of degree-i homology over the fraction field;
    ``q[i]`` the number of non-unit invariant factors of the incoming
    differential, i.e. the minimal generator count of the torsion part of
    degree-i homology.  ``profiles[i]`` is the invariant factor data of
    d_(i+1).
    """

    b: tuple
    q: tuple
    profiles: tuple


def novikov_numbers(cx: BasedChainComplex) -> NovikovNumbers:
    """Compute both number families for a single-variable complex.

    Accepts a complex over R directly, or over the rank-one group ring, in
    which case it is pushed into R along the coordinate class first.
    """
    if isinstance(cx.ring, GroupRing) and cx.ring.rank == 1:
        cx = cx.base_change(RationalFnRDescriptor(CohomologyClass.of(1)))
    if not isinstance(cx.ring, RationalFunctionRing):
        raise PreconditionError(
            f"torsion numbers need coefficients in R, got {cx.ring}"
        )
    top = cx.top_degree
    profiles = tuple(
        invariant_factors_over_R(cx.d(i + 1)) for i in range(top + 1)
    )
    b = tuple(
        cx.dim(i) - profiles[i].rank - (profiles[i - 1].rank if i else 0)
        for i in range(top + 1)
    )
    q = tuple(p.nonunit_count for p in profiles)
    return NovikovNumbers(b, q, profiles)


@dataclass(frozen=True)
class InequalityRow:
    degree: int
    count: Fraction
    required: Fraction
    slack: Fraction
    ok: bool


@dataclass(frozen=True)
class InequalityReport:
    """Degreewise critical point bounds plus the Euler characteristic tie."""

    ok: bool
    rows: tuple
    euler_counts: Fraction
    euler_homology: Fraction
    euler_matches: bool

    def __str__(self):
        lines = []
        for row in self.rows:
            verdict = "ok" if row.ok else "FAIL"
            lines.append(
                f"degree {row.degree}: count {row.count} >= {row.required} "
                f"[slack {row.slack}] {verdict}"
            )
        lines.append(
            f"euler: counts {self.euler_counts} vs homology "
            f"{self.euler_homology} "
            + ("(consistent)" if self.euler_matches else "(inconsistent)")
        )
        return "\n".join(lines)


def check_novikov_inequalities(
    counts, numbers: NovikovNumbers, bundle_dimension: int = 1
) -> InequalityReport:
    """Check count_j >= (b_j + q_j + q_(j-1)) / dim E for every degree.

    ``counts`` may be shorter or longer than the complex; missing entries
    count as zero.  The report also compares the alternating sums, which
    agree whenever the counts come from an actual cell structure of the
    right homotopy type.
    """
    if bundle_dimension < 1:
        raise PreconditionError("bundle dimension must be positive")
    counts = [Fraction(c) for c in counts]
    n = max(len(counts), len(numbers.b))
    rows = []
    ok = True
    for j in range(n):
        c = counts[j] if j < len(counts) else Fraction(0)
        b = numbers.b[j] if j < len(numbers.b) else 0
        qj = numbers.q[j] if j < len(numbers.q) else 0
        qprev = numbers.q[j - 1] if 0 < j <= len(numbers.q) else 0
        required = Fraction(b + qj + qprev, bundle_dimension)
        slack = c - required
        good = slack >= 0
        ok = ok and good
        rows.append(InequalityRow(j, c, required, slack, good))
    euler_counts = sum(
        ((-1) ** j * c for j, c in enumerate(counts)), Fraction(0)
    )
    euler_homology = Fraction(
        sum((-1) ** j * bj for j, bj in enumerate(numbers.b)), bundle_dimension
    )
    return InequalityReport(
        ok, tuple(rows), euler_counts, euler_homology,
        euler_counts == euler_homology,
    )


@dataclass(frozen=True)
class MorseTypeRow:
    degree: int
    count: Fraction
    required: Fraction
    partial_sum: Fraction
    partial_required: Fraction
    ok: bool


@dataclass(frozen=True)
class MorseTypeReport:
    ok: bool
    rows: tuple

    def __str__(self):
        lines = []
        for row in self.rows:
            verdict = "ok" if row.ok else "FAIL"
            lines.append(
                f"degree {row.degree}: count {row.count} >= {row.required}, "
                f"alternating {row.partial_sum} >= {row.partial_required} "
                f"{verdict}"
            )
        return "\n".join(lines)


def morse_type_inequalities(
    counts, dims, bundle_dimension: int = 1
) -> MorseTypeReport:
    """Strong form: per-degree bounds plus all alternating partial sums.

    For each degree p this checks c_p >= dims_p / dim E together with
    sum_j (-1)^j c_(p-j) >= sum_j (-1)^j dims_(p-j) / dim E, everything as
    exact fractions.
    """
    if bundle_dimension < 1:
        raise PreconditionError("bundle dimension must be positive")
    counts = [Fraction(c) for c in counts]
    dims = [Fraction(d) for d in dims]
    n = max(len(counts), len(dims))
    rows = []
    ok = True
    for p in range(n):
        c = counts[p] if p < len(counts) else Fraction(0)
        required = (
            dims[p] / bundle_dimension if p < len(dims) else Fraction(0)
        )
        alt_c = Fraction(0)
        alt_d = Fraction(0)
        for j in range(p + 1):
            sign = (-1) ** j
            alt_c += sign * (counts[p - j] if p - j < len(counts) else 0)
            if p - j < len(dims):
                alt_d += Fraction(sign) * dims[p - j] / bundle_dimension
        good = c >= required and alt_c >= alt_d
        ok = ok and good
        rows.append(MorseTypeRow(p, c, required, alt_c, alt_d, good))
    return MorseTypeReport(ok, tuple(rows))


# ---------------------------------------------------------------------------
# specialization jumps
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class JumpProfile:
    """Generic betti numbers and the loci where specialization jumps.

    ``jump_polynomials[i]`` is a squarefree primitive integer polynomial
    (no monomial factors) whose roots are exactly the nonzero points a
    where the degree-i homology at a exceeds the generic value;
    ``jump_points[i]`` lists its rational roots.
    """

    betti: tuple
    jump_polynomials: tuple
    jump_points: tuple


def _strip_to_squarefree(p: tuple) -> tuple:
    p = intpoly.strip_t_power(intpoly.normalize(p))
    if not p or intpoly.degree(p) == 0:
        return ()
    return intpoly.squarefree_part_z(p)


def generic_betti_and_jumps(
    cx: BasedChainComplex,
    xi: CohomologyClass,
    bundle: MonodromyRep = None,
) -> JumpProfile:
    """Find where evaluating at a nonzero rational drops differential ranks.

    The complex lives over Z[H]; it is pushed into R along the integral
    class (twisted by the bundle when one is given), so every denominator
    is trivial and evaluation commutes with the minor gcds.  Rank of the
    evaluated matrix drops at a exactly when the gcd of its generic-rank
    minors vanishes there, so homology at a exceeds the generic dimension
    exactly on the roots of the per-degree product of those gcds.
    """
    if not isinstance(cx.ring, GroupRing):
        raise PreconditionError("specialization analysis starts from Z[H]")
    if bundle is None:
        over_r = cx.base_change(RationalFnRDescriptor(xi))
    else:
        over_r = cx.base_change(RBundleDescriptor(bundle, xi))
    top = over_r.top_degree
    profiles = [
        invariant_factors_over_R(over_r.d(i)) for i in range(top + 2)
    ]
    betti = tuple(
        over_r.dim(i) - profiles[i].rank - profiles[i + 1].rank
        for i in range(top + 1)
    )
    polys = []
    points = []
    for i in range(top + 1):
        combined = intpoly.mul(
            profiles[i].top_divisor, profiles[i + 1].top_divisor
        )
        poly = _strip_to_squarefree(combined)
        polys.append(poly)
        points.append(
            tuple(a for a in intpoly.rational_roots(poly) if a != 0)
        )
    return JumpProfile(betti, tuple(polys), tuple(points))


# ---------------------------------------------------------------------------
# genericity of a bundle
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class _AugmentedBundleDescriptor(RepresentationDescriptor):
    """Send every group element straight to its monodromy matrix (all the
    variables pinned at one), over Q or F_p."""

    bundle: MonodromyRep
    char: int = 0
    kind = "bundle_at_one"

    def check(self, rank: int):
        if self.bundle.rank != rank:
            raise RepresentationError(
                f"bundle rank {self.bundle.rank} against complex rank {rank}"
            )

    def target_ring(self, rank: int):
        return RationalField() if self.char == 0 else PrimeField(self.char)

    @property
    def block_dim(self) -> int:
        return self.bundle.dimension

    def entry_blocks(self, p: GroupRingElement):
        K = CoeffField(self.char)
        m = self.bundle.dimension
        out = [[K.zero()] * m for _ in range(m)]
        for e, c in p.terms.items():
            cc = K.from_int(c)
            if K.is_zero(cc):
                continue
            mat = self.bundle.apply(e, K)
            for i in range(m):
                for j in range(m):
                    out[i][j] = K.add(out[i][j], K.mul(cc, mat[i][j]))
        return out


def is_xi_generic(
    cx: BasedChainComplex,
    bundle: MonodromyRep = None,
    char: int = 0,
) -> bool:
    """A bundle is generic when twisting by the full character lattice does
    not change homology ranks: the dims over the rational function field in
    all the variables equal the dims with every variable evaluated at one.
    """
    if not isinstance(cx.ring, GroupRing):
        raise PreconditionError("genericity starts from a complex over Z[H]")
    rank = cx.ring.rank
    if bundle is None:
        bundle = MonodromyRep.trivial(rank, 1)
    generic = betti_numbers(cx.base_change(FieldBundleDescriptor(bundle, char)))
    at_one = betti_numbers(
        cx.base_change(_AugmentedBundleDescriptor(bundle, char))
    )
    return generic == at_one


# ---------------------------------------------------------------------------
# mapping torus
# ---------------------------------------------------------------------------


def mapping_torus(basis, differentials, automorphism) -> BasedChainComplex:
    """Algebraic mapping torus of a chain automorphism.

    Input: integer differential matrices of a based complex and one square
    integer matrix per degree, commuting with the differential and
    invertible over Q.  The output complex lives over Z[H] of rank one: in
    each degree the basis is the old one plus a shifted copy (labels get a
    trailing ~), and the block differential is

        [ d   1 - t h ]
        [ 0     -d    ]

    so a column first maps by the old differential, while a shifted column
    records the difference between staying put and flowing once around.
    """
    basis = tuple(tuple(str(l) for l in deg) for deg in basis)
    ring = GroupRing(1)
    dims = [len(deg) for deg in basis]
    n = len(basis)

    def as_gre_matrix(rows, cols, ints):
        data = tuple(
            tuple(GroupRingElement.constant(1, int(v)) for v in row)
            for row in ints
        )
        return RingMatrix(ring, (rows, cols), data)

    diffs = []
    for i, d in enumerate(differentials, start=1):
        d = [list(map(int, row)) for row in d]
        if len(d) != dims[i - 1] or any(len(r) != dims[i] for r in d):
            raise ShapeError(
                f"differential {i} must be {dims[i - 1]}x{dims[i]}"
            )
        diffs.append(d)
    autos = []
    if len(automorphism) != n:
        raise ShapeError(
            f"need one automorphism block per degree ({n}), got "
            f"{len(automorphism)}"
        )
    for i, h in enumerate(automorphism):
        h = [list(map(int, row)) for row in h]
        if len(h) != dims[i] or any(len(r) != dims[i] for r in h):
            raise ShapeError(f"automorphism block {i} must be square of size {dims[i]}")
        autos.append(h)

    # chain map and invertibility conditions
    for i in range(1, n):
        d, hi, hprev = diffs[i - 1], autos[i], autos[i - 1]
        lhs = [
            [sum(hprev[r][k] * d[k][c] for k in range(dims[i - 1])) for c in range(dims[i])]
            for r in range(dims[i - 1])
        ]
        rhs = [
            [sum(d[r][k] * hi[k][c] for k in range(dims[i])) for c in range(dims[i])]
            for r in range(dims[i - 1])
        ]
        if lhs != rhs:
            raise PreconditionError(
                f"automorphism does not commute with differential {i}"
            )
    for i, h in enumerate(autos):
        if dims[i] == 0:
            continue
        mat = RingMatrix(
            RationalField(),
            (dims[i], dims[i]),
            tuple(tuple(Fraction(v) for v in row) for row in h),
        )
        if field_determinant(mat) == 0:
            raise PreconditionError(
                f"automorphism block in degree {i} is singular over Q"
            )

    t = GroupRingElement.monomial(1, (1,))
    one = GroupRingElement.one(1)

    new_basis = []
    for i in range(n + 1):
        cur = list(basis[i]) if i < n else []
        prev = [f"{lab}~" for lab in basis[i - 1]] if i >= 1 else []
        new_basis.append(tuple(cur + prev))

    new_diffs = []
    for i in range(1, n + 1):
        rows = len(new_basis[i - 1])
        cols = len(new_basis[i])
        grid = [[ring.zero()] * cols for _ in range(rows)]
        # block d: C_i -> C_(i-1)
        if i < n:
            for r in range(dims[i - 1]):
                for c in range(dims[i]):
                    v = diffs[i - 1][r][c]
                    if v:
                        grid[r][c] = GroupRingElement.constant(1, v)
        # block 1 - t h: shifted C_(i-1) -> C_(i-1)
        h = autos[i - 1]
        off_c = dims[i] if i < n else 0
        for r in range(dims[i - 1]):
            for c in range(dims[i - 1]):
                v = (one if r == c else ring.zero()) - t * h[r][c]
                if not v.is_zero:
                    grid[r][c + off_c] = v
        # block -d: shifted C_(i-1) -> shifted C_(i-2)
        if i >= 2:
            off_r = dims[i - 1]
            for r in range(dims[i - 2]):
                for c in range(dims[i - 1]):
                    v = diffs[i - 2][r][c]
                    if v:
                        grid[r + off_r][c + off_c] = GroupRingElement.constant(
                            1, -v
                        )
        new_diffs.append(RingMatrix(ring, (rows, cols), tuple(map(tuple, grid))))

    torus = BasedChainComplex(ring, tuple(new_basis), tuple(new_diffs))
    report = torus.validate()
    if not report.ok:
        raise PreconditionError(f"mapping torus differential broke: {report}")
    return torus


def specialized_homology_dims(
    cx: BasedChainComplex, descriptor: RepresentationDescriptor
) -> tuple:
    """Homology dimensions of the complex pushed along a field-valued
    representation (scalar evaluation, bundle evaluation, function field)."""
    pushed = cx.base_change(descriptor)
    if not pushed.ring.is_field:
        raise PreconditionError(
            f"homology dimensions need a field target, got {pushed.ring}"
        )
    return betti_numbers(pushed)


def bundle_homology_dims(
    cx: BasedChainComplex,
    a,
    bundle: MonodromyRep,
    xi: CohomologyClass,
) -> tuple:
    """Rational homology dimensions after evaluating the class at a nonzero
    rational and twisting by the bundle."""
    return specialized_homology_dims(
        cx, ScalarBundleDescriptor(Fraction(a), bundle, xi)
    )


def euler_characteristic(cx: BasedChainComplex) -> int:
    """Alternating sum of the basis counts."""
    return cx.euler_characteristic()
