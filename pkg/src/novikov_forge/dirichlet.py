"""Integrality and unit tests for the numbers where homology can jump.

A nonzero algebraic number is an algebraic integer when its minimal
polynomial has leading coefficient +-1, and a unit of the right kind when
the constant coefficient is +-1 as well (then the reversed polynomial shows
the inverse is integral too).  Rational numbers are the degree-one case:
integers, respectively +-1.

For line bundles over a character lattice the corresponding notion is
witnessed by a group ring element that the monodromy kills and whose top
weight level sums to +-1.  Only verification is offered; nothing here
searches the ideal.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from numbers import Rational

from . import intpoly
from .errors import (
    DimensionError,
    PreconditionError,
    UndefinedInputError,
)
from .group_ring import CohomologyClass, GroupRingElement, xi_degree_and_top

_AUTO_IRREDUCIBILITY_DEGREE = 4


@dataclass(frozen=True)
class MinimalPolynomialCandidate:
    """A primitive irreducible integer polynomial, coefficients ascending.

    Degree at least one and a nonzero constant term, so the roots are
    nonzero algebraic numbers.  Up to degree four irreducibility over Q is
    checked here; past that the caller must vouch for it with the
    ``irreducible`` flag, since the unit tests below read only the extreme
    coefficients and mean nothing on a non-minimal polynomial.
    """

    coefficients: tuple
    irreducible: bool = False

    def __post_init__(self):
        coeffs = intpoly.normalize(self.coefficients)
        object.__setattr__(self, "coefficients", coeffs)
        if intpoly.degree(coeffs) < 1:
            raise PreconditionError("minimal polynomial needs degree >= 1")
        if coeffs[0] == 0:
            raise PreconditionError(
                "zero constant term: factor out t before testing"
            )
        if intpoly.content(coeffs) != 1:
            raise PreconditionError(
                f"coefficients have content {intpoly.content(coeffs)}, "
                "want a primitive polynomial"
            )
        if intpoly.degree(coeffs) <= _AUTO_IRREDUCIBILITY_DEGREE:
            if not intpoly.is_irreducible_z(coeffs):
                raise PreconditionError(
                    "polynomial is reducible over Q; pass an irreducible factor"
                )
            object.__setattr__(self, "irreducible", True)
        elif not self.irreducible:
            raise PreconditionError(
                "degree exceeds the built-in irreducibility check; "
                "set irreducible=True to vouch for the input"
            )

    @classmethod
    def from_descending(cls, coefficients, irreducible: bool = False):
        """Build from highest-degree-first coefficients (the CLI order)."""
        return cls(tuple(reversed(tuple(coefficients))), irreducible)

    @property
    def degree(self) -> int:
        return intpoly.degree(self.coefficients)

    @property
    def leading_coefficient(self) -> int:
        return self.coefficients[-1]

    @property
    def constant_coefficient(self) -> int:
        return self.coefficients[0]

    def reversed(self) -> "MinimalPolynomialCandidate":
        """Minimal polynomial of the inverse root (coefficients reversed)."""
        return MinimalPolynomialCandidate(
            tuple(reversed(self.coefficients)), self.irreducible
        )

    def __str__(self):
        return intpoly.poly_str(self.coefficients)


def _as_fraction(x) -> Fraction:
    if isinstance(x, Rational):
        return Fraction(x)
    raise UndefinedInputError(f"expected a rational number, got {x!r}")


def is_algebraic_integer(x) -> bool:
    """Whether the number is integral over Z.

    Rational input: true exactly for integers.  Polynomial input: true
    exactly when the leading coefficient is +-1.  Zero is rejected; the
    conventions here are for the nonzero numbers that can appear as
    specialization points.
    """
    if isinstance(x, MinimalPolynomialCandidate):
        return abs(x.leading_coefficient) == 1
    x = _as_fraction(x)
    if x == 0:
        raise UndefinedInputError("zero is excluded from integrality tests")
    return x.denominator == 1


def is_dirichlet_unit(x) -> bool:
    """Whether both the number and its inverse are algebraic integers.

    On minimal polynomials this reads: leading and constant coefficients
    both +-1.  For rationals only +1 and -1 qualify.
    """
    if isinstance(x, MinimalPolynomialCandidate):
        return (
            abs(x.leading_coefficient) == 1
            and abs(x.constant_coefficient) == 1
        )
    x = _as_fraction(x)
    if x == 0:
        raise UndefinedInputError("zero is excluded from integrality tests")
    return abs(x) == 1


# ---------------------------------------------------------------------------
# line bundle witnesses
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class LineBundleMonodromy:
    """Nonzero rational monodromy values along the lattice basis."""

    values: tuple

    def __post_init__(self):
        vals = tuple(Fraction(v) for v in self.values)
        if any(v == 0 for v in vals):
            raise PreconditionError("monodromy values must be nonzero")
        object.__setattr__(self, "values", vals)

    @classmethod
    def of(cls, *values) -> "LineBundleMonodromy":
        return cls(tuple(values))

    @property
    def rank(self) -> int:
        return len(self.values)

    def evaluate(self, p: GroupRingElement) -> Fraction:
        """Push a group ring element forward along the monodromy."""
        if p.rank != self.rank:
            raise DimensionError(
                f"element of rank {p.rank} against monodromy of rank {self.rank}"
            )
        total = Fraction(0)
        for exp, c in p.terms.items():
            term = Fraction(c)
            for m, e in zip(self.values, exp):
                term *= m ** e
            total += term
        return total


def _check_kernel_triviality(L: LineBundleMonodromy, xi: CohomologyClass):
    for j, (m, lam) in enumerate(zip(L.values, xi.weights), start=1):
        if lam == 0 and m != 1:
            raise PreconditionError(
                f"class kills basis direction {j} but monodromy there is {m}; "
                "the bundle must be trivial across the kernel"
            )


def verify_xi_algebraic_integer_witness(
    L: LineBundleMonodromy, xi: CohomologyClass, p: GroupRingElement
) -> bool:
    """Check one candidate witness that the bundle is integral along xi.

    A witness is a group ring element the monodromy evaluates to zero whose
    highest weight level has coefficient sum +-1.  Directions the class
    kills must carry trivial monodromy, otherwise the question is not
    well posed and the call errors instead of answering.
    """
    if not (L.rank == xi.rank == p.rank):
        raise DimensionError(
            f"ranks disagree: monodromy {L.rank}, class {xi.rank}, "
            f"element {p.rank}"
        )
    if p.is_zero:
        raise UndefinedInputError("the zero element never witnesses anything")
    _check_kernel_triviality(L, xi)
    if L.evaluate(p) != 0:
        return False
    top = xi_degree_and_top(xi, p)
    return top is not None and abs(top[1]) == 1


def verify_xi_dirichlet_unit_witness(
    L: LineBundleMonodromy, xi: CohomologyClass, p: GroupRingElement
) -> bool:
    """Check a witness for the two-sided property: the element must vanish
    under the monodromy and have coefficient sum +-1 at both the highest
    and the lowest weight level (the latter is the highest level for the
    negated class)."""
    negated = CohomologyClass.of(*(-w for w in xi.weights))
    return verify_xi_algebraic_integer_witness(
        L, xi, p
    ) and verify_xi_algebraic_integer_witness(L, negated, p)
