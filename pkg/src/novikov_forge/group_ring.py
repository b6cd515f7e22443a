"""Exact arithmetic in the integral group ring of a free abelian group.

The group H is free abelian of finite rank r on a fixed basis, written
multiplicatively, so an element of Z[H] is a finite integer combination of
Laurent monomials t_1^{e_1} * ... * t_r^{e_r}.  Elements are stored as maps
from exponent vectors (tuples of ints, one per basis direction) to nonzero
integer coefficients.

A weight class assigns one rational weight to each basis direction.  The
weight of a monomial is the dot product of its exponent vector with the
weight vector, and an element is *negative* for the class when every stored
monomial has strictly negative weight.  The zero element is negative by
convention (it imposes no constraint).

>>> p = GroupRingElement.monomial(1, (0,)) - GroupRingElement.monomial(1, (-1,))
>>> str(p)
'1 - t^-1'
>>> xi = CohomologyClass.of(1)
>>> is_xi_negative(xi, p)
False
>>> is_xi_negative(xi, GroupRingElement.monomial(1, (-3,), 2))
True
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Mapping, Optional

from .errors import DimensionError, UndefinedInputError

#: An exponent vector is a tuple of ints of length equal to the rank of H.
ExponentVector = tuple


@dataclass(frozen=True)
class CohomologyClass:
    """A rational weight vector: one weight per basis direction of H."""

    weights: tuple

    def __post_init__(self):
        object.__setattr__(
            self, "weights", tuple(Fraction(w) for w in self.weights)
        )

    @classmethod
    def of(cls, *weights) -> "CohomologyClass":
        return cls(tuple(Fraction(w) for w in weights))

    @property
    def rank(self) -> int:
        return len(self.weights)

    @property
    def is_integral(self) -> bool:
        """True when every weight is an integer."""
        return all(w.denominator == 1 for w in self.weights)

    def weight(self, exponents) -> Fraction:
        """Weight of the monomial with the given exponent vector."""
        if len(exponents) != self.rank:
            raise DimensionError(
                f"exponent vector of length {len(exponents)} against a rank"
                f" {self.rank} weight class"
            )
        return sum(
            (w * e for w, e in zip(self.weights, exponents)), Fraction(0)
        )

    def __str__(self):
        return "(" + ", ".join(str(w) for w in self.weights) + ")"


def _monomial_str(exp, rank: int) -> str:
    if all(e == 0 for e in exp):
        return "1"
    parts = []
    for i, e in enumerate(exp):
        if e == 0:
            continue
        name = "t" if rank == 1 else f"t{i + 1}"
        parts.append(name if e == 1 else f"{name}^{e}")
    return "*".join(parts)


class GroupRingElement:
    """An element of Z[H] in canonical form: no zero coefficients stored.

    Instances are immutable; all arithmetic returns new elements.  The rank
    is carried explicitly so that rank-0 elements (plain integers) work
    uniformly.
    """

    __slots__ = ("rank", "terms")

    def __init__(self, rank: int, terms: Mapping):
        clean = {}
        for exp, coef in terms.items():
            exp = tuple(int(e) for e in exp)
            if len(exp) != rank:
                raise DimensionError(
                    f"exponent vector {exp} in a rank {rank} group ring"
                )
            coef = int(coef)
            if coef != 0:
                clean[exp] = coef
        object.__setattr__(self, "rank", rank)
        object.__setattr__(self, "terms", clean)

    def __setattr__(self, name, value):
        raise AttributeError("GroupRingElement is immutable")

    # -- constructors ------------------------------------------------------

    @classmethod
    def zero(cls, rank: int) -> "GroupRingElement":
        return cls(rank, {})

    @classmethod
    def one(cls, rank: int) -> "GroupRingElement":
        return cls(rank, {(0,) * rank: 1})

    @classmethod
    def monomial(cls, rank: int, exp, coef: int = 1) -> "GroupRingElement":
        return cls(rank, {tuple(exp): coef})

    @classmethod
    def constant(cls, rank: int, n: int) -> "GroupRingElement":
        return cls(rank, {(0,) * rank: n})

    # -- structure ---------------------------------------------------------

    @property
    def is_zero(self) -> bool:
        return not self.terms

    def support(self):
        """Exponent vectors with nonzero coefficient, in sorted order."""
        return sorted(self.terms)

    def coefficient(self, exp) -> int:
        return self.terms.get(tuple(exp), 0)

    def _check_rank(self, other: "GroupRingElement"):
        if self.rank != other.rank:
            raise DimensionError(
                f"group ring ranks differ: {self.rank} vs {other.rank}"
            )

    # -- arithmetic --------------------------------------------------------

    def __add__(self, other):
        if not isinstance(other, GroupRingElement):
            return NotImplemented
        self._check_rank(other)
        out = dict(self.terms)
        for exp, c in other.terms.items():
            s = out.get(exp, 0) + c
            if s:
                out[exp] = s
            else:
                out.pop(exp, None)
        return GroupRingElement(self.rank, out)

    def __neg__(self):
        return GroupRingElement(
            self.rank, {e: -c for e, c in self.terms.items()}
        )

    def __sub__(self, other):
        if not isinstance(other, GroupRingElement):
            return NotImplemented
        return self + (-other)

    def __mul__(self, other):
        if isinstance(other, int):
            return GroupRingElement(
                self.rank, {e: c * other for e, c in self.terms.items()}
            )
        if not isinstance(other, GroupRingElement):
            return NotImplemented
        self._check_rank(other)
        out = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                exp = tuple(a + b for a, b in zip(e1, e2))
                s = out.get(exp, 0) + c1 * c2
                if s:
                    out[exp] = s
                else:
                    out.pop(exp, None)
        return GroupRingElement(self.rank, out)

    def __rmul__(self, other):
        if isinstance(other, int):
            return self * other
        return NotImplemented

    def __pow__(self, n: int):
        if n < 0:
            raise UndefinedInputError("negative power of a group ring element")
        out = GroupRingElement.one(self.rank)
        base = self
        while n:
            if n & 1:
                out = out * base
            base = base * base
            n >>= 1
        return out

    # -- comparison --------------------------------------------------------

    def __eq__(self, other):
        return (
            isinstance(other, GroupRingElement)
            and self.rank == other.rank
            and self.terms == other.terms
        )

    def __hash__(self):
        return hash((self.rank, frozenset(self.terms.items())))

    def __bool__(self):
        return bool(self.terms)

    def __repr__(self):
        return f"GroupRingElement({self.rank}, {self.terms!r})"

    def __str__(self):
        if not self.terms:
            return "0"
        out = []
        for exp in sorted(self.terms, reverse=True):
            c = self.terms[exp]
            mono = _monomial_str(exp, self.rank)
            if mono == "1":
                body = str(abs(c))
            elif abs(c) == 1:
                body = mono
            else:
                body = f"{abs(c)}*{mono}"
            if not out:
                out.append(body if c > 0 else f"-{body}")
            else:
                out.append(f"+ {body}" if c > 0 else f"- {body}")
        return " ".join(out)


# -- weight structure ------------------------------------------------------


def weight(xi: CohomologyClass, exp) -> Fraction:
    """Weight of a single monomial under the class ``xi``."""
    return xi.weight(exp)


def is_xi_negative(xi: CohomologyClass, p: GroupRingElement) -> bool:
    """True when every monomial of ``p`` has strictly negative weight.

    The zero element has no monomials and counts as negative.
    """
    if xi.rank != p.rank:
        raise DimensionError(
            f"weight class of rank {xi.rank} against element of rank {p.rank}"
        )
    return all(xi.weight(e) < 0 for e in p.terms)


def is_xi_negative_matrix(xi: CohomologyClass, entries) -> bool:
    """True when every entry of a matrix (nested lists) is xi-negative."""
    return all(is_xi_negative(xi, p) for row in entries for p in row)


def max_weight(xi: CohomologyClass, p: GroupRingElement) -> Optional[Fraction]:
    """Largest weight among stored monomials, or None for the zero element."""
    if p.is_zero:
        return None
    return max(xi.weight(e) for e in p.terms)


def xi_degree_and_top(
    xi: CohomologyClass, p: GroupRingElement
) -> Optional[tuple]:
    """The highest weight level of ``p`` with nonzero coefficient sum.

    Returns a pair (degree, top): the weight of the highest level whose
    coefficients do not sum to zero, and that coefficient sum.  Returns
    None when every level sum vanishes.  Undefined for the zero element.

    >>> xi = CohomologyClass.of(1)
    >>> t = GroupRingElement.monomial(1, (1,))
    >>> xi_degree_and_top(xi, 3 * t * t - t)
    (Fraction(2, 1), 3)
    """
    if p.is_zero:
        raise UndefinedInputError("xi_degree_and_top of the zero element")
    if xi.rank != p.rank:
        raise DimensionError(
            f"weight class of rank {xi.rank} against element of rank {p.rank}"
        )
    levels: dict = {}
    for exp, c in p.terms.items():
        w = xi.weight(exp)
        levels[w] = levels.get(w, 0) + c
    for w in sorted(levels, reverse=True):
        if levels[w] != 0:
            return (w, levels[w])
    return None
