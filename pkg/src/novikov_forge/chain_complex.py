"""Based chain complexes over the ring tower, and exact chain collapse.

A collapse splits each degree into three named groups of basis elements:
an upper group that pairs with the lower group one degree down through an
invertible block of the differential, and a kept group that survives.  The
collapsed differential on the kept generators is the Schur complement
through the invertible pairing block, and the collapse hands back explicit
chain maps in both directions plus the homotopy that certifies them as
inverse equivalences.  Every identity is re-verified on the spot before
the result is returned; nothing is taken on faith from the algebra.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import (
    InvariantViolationError,
    NotInvertibleError,
    PreconditionError,
    ShapeError,
    StructureError,
)
from .matrix_engine import RingMatrix, exact_inverse, rank_over_fraction_field
from .ring_tower import GroupRing, RepresentationDescriptor, Ring


@dataclass(frozen=True)
class ValidationReport:
    ok: bool
    failures: tuple

    def __bool__(self):
        return self.ok

    def __str__(self):
        if self.ok:
            return "valid chain complex"
        return "invalid chain complex:\n" + "\n".join(
            f"  - {msg}" for msg in self.failures
        )


@dataclass(frozen=True)
class BasedChainComplex:
    """Finitely generated free chain complex with labeled basis.

    ``basis[i]`` lists the generator labels in degree i, and
    ``differentials[i-1]`` is the matrix of d_i: C_i -> C_(i-1), one column
    per degree-i generator.
    """

    ring: Ring
    basis: tuple
    differentials: tuple

    def __post_init__(self):
        basis = tuple(tuple(str(l) for l in deg) for deg in self.basis)
        object.__setattr__(self, "basis", basis)
        object.__setattr__(self, "differentials", tuple(self.differentials))
        if not basis:
            raise StructureError("complex needs at least one degree")
        for i, deg in enumerate(basis):
            if len(set(deg)) != len(deg):
                raise StructureError(f"duplicate labels in degree {i}")
            if any(not l for l in deg):
                raise StructureError(f"empty label in degree {i}")
        if len(self.differentials) != len(basis) - 1:
            raise ShapeError(
                f"{len(basis)} degrees need {len(basis) - 1} differentials, "
                f"got {len(self.differentials)}"
            )
        for i, d in enumerate(self.differentials, start=1):
            if d.ring != self.ring:
                raise ShapeError(f"differential {i} lives over {d.ring}")
            want = (len(basis[i - 1]), len(basis[i]))
            if d.shape != want:
                raise ShapeError(
                    f"differential {i} has shape {d.shape}, expected {want}"
                )

    @property
    def top_degree(self) -> int:
        return len(self.basis) - 1

    @property
    def dims(self) -> tuple:
        return tuple(len(deg) for deg in self.basis)

    def dim(self, i: int) -> int:
        if 0 <= i <= self.top_degree:
            return len(self.basis[i])
        return 0

    def d(self, i: int) -> RingMatrix:
        """The degree-i differential, or the right-shaped zero matrix when
        i falls outside 1..top."""
        if 1 <= i <= self.top_degree:
            return self.differentials[i - 1]
        return RingMatrix.zero(self.ring, self.dim(i - 1), self.dim(i))

    def euler_characteristic(self) -> int:
        return sum((-1) ** i * n for i, n in enumerate(self.dims))

    def validate(self) -> ValidationReport:
        failures = []
        ring = self.ring
        for i in range(2, self.top_degree + 1):
            square = self.d(i - 1) @ self.d(i)
            if square.is_zero_matrix:
                continue
            spots = [
                (r, c)
                for r in range(square.rows)
                for c in range(square.cols)
                if not ring.is_zero(square.entry(r, c))
            ]
            shown = ", ".join(
                f"({self.basis[i - 2][r]} <- {self.basis[i][c]})"
                for r, c in spots[:4]
            )
            failures.append(
                f"d_{i - 1} d_{i} != 0 at {len(spots)} entries: {shown}"
            )
        return ValidationReport(not failures, tuple(failures))

    def require_valid(self):
        report = self.validate()
        if not report.ok:
            raise PreconditionError(str(report))

    def base_change(self, descriptor: RepresentationDescriptor) -> "BasedChainComplex":
        """Push the complex along a representation of its group ring."""
        if not isinstance(self.ring, GroupRing):
            raise PreconditionError(
                f"base change starts from Z[H], not {self.ring}"
            )
        rank = self.ring.rank
        descriptor.check(rank)
        target = descriptor.target_ring(rank)
        m = descriptor.block_dim
        if m == 1:
            new_basis = self.basis
        else:
            new_basis = tuple(
                tuple(f"{lab}#{k}" for lab in deg for k in range(m))
                for deg in self.basis
            )
        new_diffs = []
        for d in self.differentials:
            rows = d.rows * m
            cols = d.cols * m
            grid = [[target.zero()] * cols for _ in range(rows)]
            for i0, row in enumerate(d.entries):
                for j0, e in enumerate(row):
                    if e.is_zero:
                        continue
                    block = descriptor.entry_blocks(e)
                    for bi in range(m):
                        for bj in range(m):
                            grid[i0 * m + bi][j0 * m + bj] = block[bi][bj]
            new_diffs.append(
                RingMatrix(target, (rows, cols), tuple(map(tuple, grid)))
            )
        return BasedChainComplex(target, new_basis, tuple(new_diffs))

    def __str__(self):
        dims = " ".join(
            f"C_{i}={n}" for i, n in enumerate(self.dims)
        )
        return f"chain complex over {self.ring}: {dims}"


def betti_numbers(cx: BasedChainComplex) -> tuple:
    """Dimensions of homology over the fraction field of the coefficients."""
    ranks = [rank_over_fraction_field(cx.d(i)) for i in range(cx.top_degree + 2)]
    return tuple(
        cx.dim(i) - ranks[i] - ranks[i + 1] for i in range(cx.top_degree + 1)
    )


# ---------------------------------------------------------------------------
# collapse
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class BlockPartition:
    """Per-degree split of the basis labels into (upper, lower, kept).

    Upper generators in degree i pair with lower generators in degree i-1;
    kept generators survive into the collapsed complex.
    """

    upper: tuple
    lower: tuple
    kept: tuple

    def __post_init__(self):
        for name in ("upper", "lower", "kept"):
            val = tuple(tuple(str(l) for l in deg) for deg in getattr(self, name))
            object.__setattr__(self, name, val)
        if not (len(self.upper) == len(self.lower) == len(self.kept)):
            raise StructureError("partition groups cover different degree ranges")

    def validate_against(self, cx: BasedChainComplex):
        if len(self.upper) != cx.top_degree + 1:
            raise StructureError(
                f"partition covers {len(self.upper)} degrees, "
                f"complex has {cx.top_degree + 1}"
            )
        for i in range(cx.top_degree + 1):
            claimed = list(self.upper[i]) + list(self.lower[i]) + list(self.kept[i])
            if len(set(claimed)) != len(claimed):
                raise StructureError(f"partition repeats a label in degree {i}")
            if set(claimed) != set(cx.basis[i]):
                missing = set(cx.basis[i]) - set(claimed)
                extra = set(claimed) - set(cx.basis[i])
                raise StructureError(
                    f"degree {i} partition mismatch: missing {sorted(missing)}, "
                    f"unknown {sorted(extra)}"
                )


@dataclass(frozen=True)
class CollapseResult:
    """Collapsed complex plus the verified chain equivalence data.

    ``to_collapsed[i]`` and ``from_collapsed[i]`` are the degree-i chain
    maps, and ``homotopy[i]`` raises degree i to i+1 on the source complex.
    ``simple`` records that every kept-to-lower block was zero, i.e. the
    collapsed differential equals the restriction of the original one.
    """

    complex: BasedChainComplex
    to_collapsed: tuple
    from_collapsed: tuple
    homotopy: tuple
    simple: bool


def _positions(labels, wanted) -> list:
    index = {lab: k for k, lab in enumerate(labels)}
    return [index[lab] for lab in wanted]


def collapse(cx: BasedChainComplex, part: BlockPartition) -> CollapseResult:
    """Collapse the paired generators and return the witnessed equivalence.

    Preconditions checked here: the partition is exact, upper and lower
    groups pair off square degreewise, the pairing blocks are invertible
    over the coefficient ring, and the differential never sends a lower or
    kept generator onto an upper generator one degree down (those two
    blocks must vanish identically).
    """
    part.validate_against(cx)
    cx.require_valid()
    ring = cx.ring
    top = cx.top_degree

    up_pos = [_positions(cx.basis[i], part.upper[i]) for i in range(top + 1)]
    low_pos = [_positions(cx.basis[i], part.lower[i]) for i in range(top + 1)]
    kept_pos = [_positions(cx.basis[i], part.kept[i]) for i in range(top + 1)]

    def upos(i):
        return up_pos[i] if 0 <= i <= top else []

    def lpos(i):
        return low_pos[i] if 0 <= i <= top else []

    def kpos(i):
        return kept_pos[i] if 0 <= i <= top else []

    for i in range(top + 2):
        if len(upos(i)) != len(lpos(i - 1)):
            raise PreconditionError(
                f"{len(upos(i))} upper generators in degree {i} cannot pair "
                f"with {len(lpos(i - 1))} lower generators in degree {i - 1}"
            )

    # pairing blocks and their inverses
    gamma_inv = {}
    for i in range(top + 2):
        if not upos(i):
            gamma_inv[i] = RingMatrix.zero(ring, 0, 0)
            continue
        gamma = cx.d(i).submatrix(lpos(i - 1), upos(i))
        try:
            gamma_inv[i] = exact_inverse(gamma)
        except NotInvertibleError as err:
            raise PreconditionError(
                f"pairing block in degree {i} is not invertible: {err}"
            ) from err

    # forbidden blocks: lower and kept columns may not hit upper rows below
    for i in range(1, top + 1):
        d = cx.d(i)
        for group, name in ((lpos(i), "lower"), (kpos(i), "kept")):
            block = d.submatrix(upos(i - 1), group)
            if not block.is_zero_matrix:
                raise PreconditionError(
                    f"{name} columns of degree {i} hit upper rows in "
                    f"degree {i - 1}; the split is not collapse ready"
                )

    # Schur complement on kept generators, degree by degree
    alphas = {}
    simple = True
    new_diffs = []
    for i in range(1, top + 1):
        d = cx.d(i)
        alpha = d.submatrix(lpos(i - 1), kpos(i))
        beta = d.submatrix(kpos(i - 1), upos(i))
        core = d.submatrix(kpos(i - 1), kpos(i))
        alphas[i] = alpha
        if not alpha.is_zero_matrix:
            simple = False
        new_diffs.append(core - beta @ gamma_inv[i] @ alpha)

    collapsed = BasedChainComplex(ring, part.kept, tuple(new_diffs))

    # witness chain maps in the original coordinates
    def scatter(rows, cols, blocks) -> RingMatrix:
        grid = [[ring.zero()] * cols for _ in range(rows)]
        for row_idx, col_idx, mat in blocks:
            for a, r in enumerate(row_idx):
                for b, c in enumerate(col_idx):
                    grid[r][c] = mat.entry(a, b)
        return RingMatrix(ring, (rows, cols), tuple(map(tuple, grid)))

    def eye(n):
        return RingMatrix.identity(ring, n)

    to_c = []
    from_c = []
    homotopy = []
    for i in range(top + 1):
        nk, nd = len(kpos(i)), cx.dim(i)
        beta_next = cx.d(i + 1).submatrix(kpos(i), upos(i + 1))
        bg = beta_next @ gamma_inv[i + 1]
        to_c.append(
            scatter(
                nk,
                nd,
                [
                    (range(nk), kpos(i), eye(nk)),
                    (range(nk), lpos(i), -bg),
                ],
            )
        )
        ga = gamma_inv[i] @ alphas.get(i, RingMatrix.zero(ring, len(lpos(i - 1)), nk))
        from_c.append(
            scatter(
                nd,
                nk,
                [
                    (kpos(i), range(nk), eye(nk)),
                    (upos(i), range(nk), -ga),
                ],
            )
        )
        h_rows = cx.dim(i + 1)
        homotopy.append(
            scatter(
                h_rows,
                nd,
                [(upos(i + 1), lpos(i), gamma_inv[i + 1])],
            )
        )

    result = CollapseResult(collapsed, tuple(to_c), tuple(from_c), tuple(homotopy), simple)
    _verify_collapse(cx, result)
    return result


def _verify_collapse(cx: BasedChainComplex, res: CollapseResult):
    """Check every chain map and homotopy identity; raise on any failure."""
    top = cx.top_degree
    hat = res.complex
    f, g, h = res.to_collapsed, res.from_collapsed, res.homotopy

    def fail(what, i):
        raise InvariantViolationError(
            f"collapse witness identity failed in degree {i}: {what}"
        )

    for i in range(1, top + 1):
        if not (f[i - 1] @ cx.d(i)).equals(hat.d(i) @ f[i]):
            fail("projection is not a chain map", i)
        if not (cx.d(i) @ g[i]).equals(g[i - 1] @ hat.d(i)):
            fail("inclusion is not a chain map", i)
    for i in range(top + 1):
        nk, nd = hat.dim(i), cx.dim(i)
        if not (f[i] @ g[i]).equals(RingMatrix.identity(cx.ring, nk)):
            fail("projection of the inclusion is not the identity", i)
        lhs = g[i] @ f[i]
        rhs = RingMatrix.identity(cx.ring, nd) - cx.d(i + 1) @ h[i]
        if i >= 1:
            rhs = rhs - h[i - 1] @ cx.d(i)
        if not lhs.equals(rhs):
            fail("homotopy does not connect the round trip to the identity", i)


def verify_collapse_witnesses(cx: BasedChainComplex, res: CollapseResult) -> bool:
    try:
        _verify_collapse(cx, res)
    except InvariantViolationError:
        return False
    return True
