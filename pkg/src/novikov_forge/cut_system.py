"""Cut systems: cell data along a family of cuts, and the cascade.

A cut system describes an equivariant cell structure sliced along r cuts
indexed 1..r.  Internal cells live off the cuts; each strata cell carries
the set alpha of cuts it sits on.  Crossing cut i is recorded by incidence
elements <e : e'>_i of the group ring, all of strictly negative weight for
the chosen class.

The associated complex has one generator P_beta(e) for every strata cell e
and every subset beta of alpha(e) (plus one generator per internal cell),
in degree dim(e) + |beta|.  The differential combines three effects: the
plain cell boundary, dropping a cut from beta with the self-incidence
correction, and dropping a cut while jumping to a neighbor cell through a
cross incidence.  The sign conventions are fixed once and for all by the
requirement that the square of the differential vanish, which ``validate``
checks outright on the assembled matrices.

The cascade peels generators off in r stages.  Stage j removes the pairs
P_beta(e) <-> P_(beta minus m)(e) with m = min alpha(e) and |beta| = r-j+1,
m in beta.  Each stage is a chain collapse over the localized ring; all
stages before the last must be simple for the bookkeeping to stay exact,
and the survivors are exactly the internal generators.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations

from .chain_complex import (
    BasedChainComplex,
    BlockPartition,
    ValidationReport,
    collapse,
)
from .errors import (
    ConstructionError,
    InvariantViolationError,
    PreconditionError,
    StructureError,
    UndefinedInputError,
)
from .group_ring import CohomologyClass, GroupRingElement, is_xi_negative
from .matrix_engine import RingMatrix
from .ring_tower import (
    GroupRing,
    NovikovDescriptor,
    RepresentationDescriptor,
)

RESERVED_LABEL_CHARS = set("(){}|,#")


@dataclass(frozen=True)
class InternalCell:
    """A cell away from every cut."""

    label: str
    dim: int
    boundary: tuple  # ((target label, GroupRingElement), ...)

    def __post_init__(self):
        object.__setattr__(
            self, "boundary", tuple((str(l), c) for l, c in self.boundary)
        )


@dataclass(frozen=True)
class StrataCell:
    """A cell lying on the cuts listed in alpha (1-based, nonempty)."""

    label: str
    dim: int
    alpha: tuple
    boundary: tuple

    def __post_init__(self):
        object.__setattr__(self, "alpha", tuple(sorted(set(map(int, self.alpha)))))
        object.__setattr__(
            self, "boundary", tuple((str(l), c) for l, c in self.boundary)
        )
        if not self.alpha:
            raise StructureError(
                f"cell {self.label} has empty cut set; make it internal"
            )

    @property
    def min_cut(self) -> int:
        return self.alpha[0]


@dataclass(frozen=True)
class GeneratorId:
    """One basis element of the assembled complex."""

    cell: str
    beta: tuple

    @property
    def label(self) -> str:
        return f"P{{{','.join(map(str, self.beta))}}}({self.cell})"


class CutSystem:
    """Validated container for the cut data.

    The constructor enforces referential integrity (labels exist, shapes
    line up); ``validate`` reports the mathematical conditions: closure of
    boundaries and incidences, negativity of incidence weights, reserved
    label characters, and the vanishing of the squared differential.
    """

    def __init__(self, xi: CohomologyClass, internal, strata, incidences=()):
        self.xi = xi
        self.cuts = xi.rank
        self.internal = tuple(internal)
        self.strata = tuple(strata)
        rank = xi.rank

        labels = [c.label for c in self.internal + self.strata]
        if len(set(labels)) != len(labels):
            raise StructureError("duplicate cell labels")
        self._cells = {c.label: c for c in self.internal + self.strata}

        for cell in self.internal + self.strata:
            if cell.dim < 0:
                raise StructureError(f"cell {cell.label} has negative dimension")
            for dst, coeff in cell.boundary:
                if dst not in self._cells:
                    raise UndefinedInputError(
                        f"boundary of {cell.label} names unknown cell {dst}"
                    )
                if self._cells[dst].dim != cell.dim - 1:
                    raise StructureError(
                        f"boundary of {cell.label} hits {dst} of dimension "
                        f"{self._cells[dst].dim}, expected {cell.dim - 1}"
                    )
                if not isinstance(coeff, GroupRingElement) or coeff.rank != rank:
                    raise StructureError(
                        f"boundary coefficient on ({cell.label} -> {dst}) must "
                        f"be a rank-{rank} group ring element"
                    )
        for cell in self.strata:
            if any(i < 1 or i > self.cuts for i in cell.alpha):
                raise StructureError(
                    f"cell {cell.label} lists cuts outside 1..{self.cuts}"
                )

        self.incidences = {}
        by_cut_src = {}
        for cut, src, dst, value in incidences:
            cut = int(cut)
            key = (cut, str(src), str(dst))
            if key in self.incidences:
                raise StructureError(f"incidence {key} given twice")
            if src not in self._cells or dst not in self._cells:
                raise UndefinedInputError(
                    f"incidence on cut {cut} names unknown cells {src}, {dst}"
                )
            if not isinstance(value, GroupRingElement) or value.rank != rank:
                raise StructureError(
                    f"incidence {key} must be a rank-{rank} group ring element"
                )
            if value.is_zero:
                continue
            self.incidences[key] = value
            by_cut_src.setdefault((cut, str(src)), []).append((str(dst), value))
        self._by_cut_src = by_cut_src

    def cell(self, label: str):
        return self._cells[label]

    # -- generator bookkeeping ------------------------------------------------

    def top_degree(self) -> int:
        tops = [c.dim for c in self.internal]
        tops += [c.dim + len(c.alpha) for c in self.strata]
        return max(tops, default=0)

    def generators(self):
        """Per-degree generator lists: internal cells first (input order),
        then strata generators by cell input order and sorted beta."""
        degrees = [[] for _ in range(self.top_degree() + 1)]
        for cell in self.internal:
            degrees[cell.dim].append(GeneratorId(cell.label, ()))
        for cell in self.strata:
            for size in range(len(cell.alpha) + 1):
                for beta in combinations(cell.alpha, size):
                    degrees[cell.dim + size].append(GeneratorId(cell.label, beta))
        return degrees

    def internal_generator_labels(self):
        degrees = [[] for _ in range(self.top_degree() + 1)]
        for cell in self.internal:
            degrees[cell.dim].append(GeneratorId(cell.label, ()).label)
        return degrees

    def _boundary_of_generator(self, gen: GeneratorId) -> dict:
        """Column of the differential as {target GeneratorId: coefficient}."""
        cell = self._cells[gen.cell]
        rank = self.xi.rank
        out: dict = {}

        def put(target: GeneratorId, coeff: GroupRingElement):
            if coeff.is_zero:
                return
            prior = out.get(target)
            total = coeff if prior is None else prior + coeff
            if total.is_zero:
                out.pop(target, None)
            else:
                out[target] = total

        for dst, coeff in cell.boundary:
            dst_cell = self._cells[dst]
            dst_alpha = getattr(dst_cell, "alpha", ())
            if not set(gen.beta) <= set(dst_alpha):
                raise ConstructionError(
                    f"boundary of {gen.label} needs cell {dst} to lie on cuts "
                    f"{sorted(gen.beta)}"
                )
            put(GeneratorId(dst, gen.beta), coeff)

        one = GroupRingElement.one(rank)
        sign_base = cell.dim
        for s, i in enumerate(gen.beta, start=1):
            reduced = tuple(b for b in gen.beta if b != i)
            self_inc = self.incidences.get((i, gen.cell, gen.cell))
            keep = one if self_inc is None else one - self_inc
            if (sign_base + s + 1) % 2:
                keep = -keep
            put(GeneratorId(gen.cell, reduced), keep)
            for dst, value in self._by_cut_src.get((i, gen.cell), ()):
                if dst == gen.cell:
                    continue
                dst_cell = self._cells[dst]
                if not set(reduced) <= set(dst_cell.alpha):
                    raise ConstructionError(
                        f"incidence on cut {i} from {gen.cell} to {dst} "
                        f"strands the generator with cuts {reduced}"
                    )
                cross = value if (sign_base + s) % 2 == 0 else -value
                put(GeneratorId(dst, reduced), cross)
        return out

    def build_complex(self) -> BasedChainComplex:
        """Assemble the full complex over Z[H]."""
        ring = GroupRing(self.xi.rank)
        degrees = self.generators()
        basis = tuple(tuple(g.label for g in deg) for deg in degrees)
        diffs = []
        for d in range(1, len(degrees)):
            index = {g: k for k, g in enumerate(degrees[d - 1])}
            rows = len(degrees[d - 1])
            cols = len(degrees[d])
            grid = [[ring.zero()] * cols for _ in range(rows)]
            for col, gen in enumerate(degrees[d]):
                for target, coeff in self._boundary_of_generator(gen).items():
                    grid[index[target]][col] = coeff
            diffs.append(RingMatrix(ring, (rows, cols), tuple(map(tuple, grid))))
        return BasedChainComplex(ring, basis, tuple(diffs))

    # -- validation ------------------------------------------------------------

    def validate(self) -> ValidationReport:
        failures = []
        for cell in self.internal + self.strata:
            bad = RESERVED_LABEL_CHARS & set(cell.label)
            if bad:
                failures.append(
                    f"label {cell.label!r} uses reserved characters "
                    f"{sorted(bad)}"
                )
        for cell in self.internal + self.strata:
            alpha = set(getattr(cell, "alpha", ()))
            for dst, _ in cell.boundary:
                dst_alpha = set(getattr(self._cells[dst], "alpha", ()))
                if not alpha <= dst_alpha:
                    failures.append(
                        f"closure: boundary of {cell.label} (cuts "
                        f"{sorted(alpha)}) hits {dst} (cuts {sorted(dst_alpha)})"
                    )
        for (cut, src, dst), value in sorted(self.incidences.items()):
            src_cell, dst_cell = self._cells[src], self._cells[dst]
            src_alpha = set(getattr(src_cell, "alpha", ()))
            dst_alpha = set(getattr(dst_cell, "alpha", ()))
            if cut not in src_alpha or cut not in dst_alpha:
                failures.append(
                    f"incidence on cut {cut}: {src} and {dst} must both lie "
                    f"on that cut"
                )
                continue
            if src_cell.dim != dst_cell.dim:
                failures.append(
                    f"incidence on cut {cut} relates {src} and {dst} of "
                    f"different dimensions"
                )
            if not (src_alpha - {cut}) <= dst_alpha:
                failures.append(
                    f"incidence closure: cut {cut} from {src} to {dst} loses "
                    f"cuts {sorted((src_alpha - {cut}) - dst_alpha)}"
                )
            if not is_xi_negative(self.xi, value):
                failures.append(
                    f"incidence <{src}:{dst}>_{cut} = {value} is not of "
                    f"negative weight for {self.xi}"
                )
        if failures:
            return ValidationReport(False, tuple(failures))
        try:
            built = self.build_complex()
        except ConstructionError as err:
            return ValidationReport(False, (str(err),))
        report = built.validate()
        if not report.ok:
            failures.extend(report.failures)
        return ValidationReport(not failures, tuple(failures))

    def require_valid(self):
        report = self.validate()
        if not report.ok:
            raise PreconditionError(str(report))


# ---------------------------------------------------------------------------
# the cascade
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class CascadeResult:
    """Everything the cascade produces.

    ``full_complex`` is the assembled complex over Z[H]; ``localized`` its
    image under the chosen representation; ``stages`` the per-stage
    collapse data over the localized ring; ``final`` what remains, carried
    by the internal generators; ``simple_flags`` whether each stage was a
    simple collapse (all but the last must be).
    """

    full_complex: BasedChainComplex
    localized: BasedChainComplex
    stages: tuple
    final: BasedChainComplex
    simple_flags: tuple


def _stage_partition(cs: CutSystem, stage: int, remaining, block_dim: int):
    """Upper/lower/kept label split for one cascade stage, on the current
    (possibly bundle-fanned) basis labels."""
    r = cs.cuts
    top = cs.top_degree()
    upper = [[] for _ in range(top + 1)]
    lower = [[] for _ in range(top + 1)]
    kept = [[] for _ in range(top + 1)]

    def fan(label):
        if block_dim == 1:
            return [label]
        return [f"{label}#{k}" for k in range(block_dim)]

    for deg, gens in enumerate(cs.generators()):
        for gen in gens:
            base = gen.label
            fanned = [l for l in fan(base) if l in remaining[deg]]
            if not fanned:
                continue
            cell = cs.cell(gen.cell)
            if isinstance(cell, InternalCell):
                kept[deg].extend(fanned)
                continue
            m = cell.min_cut
            size = len(gen.beta)
            if size == r - stage + 1 and m in gen.beta:
                upper[deg].extend(fanned)
            elif size == r - stage and m not in gen.beta:
                lower[deg].extend(fanned)
            else:
                kept[deg].extend(fanned)
    return BlockPartition(
        tuple(map(tuple, upper)), tuple(map(tuple, lower)), tuple(map(tuple, kept))
    )


def cascade_collapse(
    cs: CutSystem, rho: RepresentationDescriptor
) -> CascadeResult:
    """Run the staged collapse of the cut complex over a localized ring.

    Raises PreconditionError when the cut system fails validation or a
    pairing block is not invertible over the target, and
    InvariantViolationError when a stage before the last is not simple or
    the survivors differ from the internal generators.
    """
    cs.require_valid()
    full = cs.build_complex()
    localized = full.base_change(rho)

    if isinstance(rho, NovikovDescriptor):
        for d in localized.differentials:
            for row in d.entries:
                for e in row:
                    w = e.max_weight()
                    if w is not None and w > 0:
                        raise PreconditionError(
                            "a localized differential entry has positive "
                            f"weight {w}; truncated arithmetic would not be "
                            "exact here"
                        )

    block_dim = rho.block_dim
    remaining = [set(deg) for deg in localized.basis]
    current = localized
    stages = []
    flags = []
    for stage in range(1, cs.cuts + 1):
        part = _stage_partition(cs, stage, remaining, block_dim)
        # restrict the partition to the degrees the current complex still has
        span = current.top_degree + 1
        part = BlockPartition(part.upper[:span], part.lower[:span], part.kept[:span])
        result = collapse(current, part)
        stages.append(result)
        flags.append(result.simple)
        current = result.complex
        remaining = [set(deg) for deg in current.basis]

    for stage, simple in enumerate(flags[:-1], start=1):
        if not simple:
            raise InvariantViolationError(
                f"cascade stage {stage} of {cs.cuts} was not a simple "
                "collapse; the cut data violates the expected filtration"
            )

    expected = cs.internal_generator_labels()
    final_want = []
    for deg_labels in expected:
        fanned = []
        for lab in deg_labels:
            if block_dim == 1:
                fanned.append(lab)
            else:
                fanned.extend(f"{lab}#{k}" for k in range(block_dim))
        final_want.append(tuple(fanned))
    got = [tuple(deg) for deg in current.basis]
    want = [tuple(deg) for deg in final_want[: len(got)]]
    if got != want or any(final_want[len(got):]):
        raise InvariantViolationError(
            f"cascade survivors {got} differ from the internal generators "
            f"{final_want}"
        )

    return CascadeResult(full, localized, tuple(stages), current, tuple(flags))
