"""Small worked cut systems used by the test suite and the demo scripts.

Both examples are equivariant cell structures on free abelian covers,
written down by hand and checked by the validators:

* ``circle_cut_system``: one 0-cell on a single cut of the circle, deck
  group of rank one.  The assembled complex is P{}(v) <- P{1}(v) with
  differential 1 - t^-1, and the cascade erases everything.
* ``torus_cut_system``: the two-torus sliced along the two coordinate
  circles.  One vertex sits on both cuts, one edge on each single cut, and
  the cell boundaries vanish so that every stage of the cascade before the
  last is simple.  Eight generators assemble into a complex with zero
  homology over the field of fractions, and again nothing survives the
  cascade.
"""

from __future__ import annotations

from fractions import Fraction

from .group_ring import CohomologyClass, GroupRingElement
from .cut_system import CutSystem, InternalCell, StrataCell


def circle_cut_system(weight=1) -> CutSystem:
    """The circle with deck group Z, cut at one point of weight ``weight``."""
    xi = CohomologyClass.of(weight)
    if xi.weight((1,)) <= 0:
        raise ValueError("the cut crossing must have positive weight")
    v = StrataCell("v", 0, (1,), ())
    tinv = GroupRingElement.monomial(1, (-1,))
    return CutSystem(xi, (), (v,), ((1, "v", "v", tinv),))


def torus_cut_system(weights=(1, Fraction(3, 2))) -> CutSystem:
    """The two-torus cut along both coordinate circles.

    ``weights`` fixes the class on the rank-two deck group; both entries
    must be positive so every incidence has negative weight.
    """
    xi = CohomologyClass.of(*weights)
    if xi.weight((1, 0)) <= 0 or xi.weight((0, 1)) <= 0:
        raise ValueError("both cut crossings must have positive weight")
    p = StrataCell("p", 0, (1, 2), ())
    e1 = StrataCell("e1", 1, (1,), ())
    e2 = StrataCell("e2", 1, (2,), ())
    t1_inv = GroupRingElement.monomial(2, (-1, 0))
    t2_inv = GroupRingElement.monomial(2, (0, -1))
    incidences = (
        (1, "p", "p", t1_inv),
        (2, "p", "p", t2_inv),
        (1, "e1", "e1", t1_inv),
        (2, "e2", "e2", t2_inv),
    )
    return CutSystem(xi, (), (p, e1, e2), incidences)


def torus_with_internal_loop(weights=(1, Fraction(3, 2))) -> CutSystem:
    """The torus system of ``torus_cut_system`` plus a disjoint loop that
    never touches the cuts.

    The loop contributes one internal vertex u and one internal edge m with
    boundary (1 - t1^-1) u.  The cascade must leave exactly these two
    generators behind, with the boundary carried over unchanged (the
    collapse corrections vanish because nothing connects the loop to the
    cut strata).
    """
    base = torus_cut_system(weights)
    one = GroupRingElement.one(2)
    t1_inv = GroupRingElement.monomial(2, (-1, 0))
    u = InternalCell("u", 0, ())
    m = InternalCell("m", 1, (("u", one - t1_inv),))
    return CutSystem(
        base.xi,
        (u, m),
        base.strata,
        tuple(
            (cut, src, dst, val)
            for (cut, src, dst), val in sorted(base.incidences.items())
        ),
    )
