"""The tower of coefficient rings that invert 1 + (negative weight) elements.

Each ring here receives Z[H] along a ring map determined by a weight class
xi, and in each of them every element of the form 1 + p with p xi-negative
becomes invertible:

* ``NovikovRing``: series truncated below a rational weight cutoff.  An
  element is an exact representative of its coset modulo terms of weight
  below the cutoff, and all equality checks are coset equalities.  Coset
  arithmetic is reliable when the operands carry no positive-weight terms
  (all uses in this package satisfy that; see ``novikov_mul``).
* ``RationalFunctionRing``: Laurent polynomials over Z divided by monic
  integer polynomials, a principal ideal domain.  A monomial of H goes to
  t^{xi(h)}, so the class must be integral.
* ``RationalField`` via ``rho_scalar``: evaluation of the single variable
  at a nonzero rational a; inverts 1 + negative whenever a is not an
  algebraic integer (for rational a: denominator > 1).
* ``FunctionField``: the field of rational functions in r variables over
  Q or F_p; a monomial goes to the product of variables raised to its
  integral weights under a basis of classes.

Monodromy data for flat bundles rides along: a ``MonodromyRep`` assigns a
commuting invertible matrix to each basis direction of H, and the bundle
descriptors tensor an entry of Z[H] into a matrix block over the scalar
target.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import gcd as int_gcd
from typing import Optional

from . import intpoly
from ._terms import (
    CoeffField,
    QQ_COEFF,
    t_add,
    t_eval,
    t_from_int_dict,
    t_is_zero,
    t_min_exponents,
    t_mul,
    t_neg,
    t_scale,
    t_shift,
    t_sub,
)
from .errors import (
    DimensionError,
    NotInvertibleError,
    PreconditionError,
    RepresentationError,
    UndefinedInputError,
)
from .group_ring import CohomologyClass, GroupRingElement


# ---------------------------------------------------------------------------
# ring contexts
# ---------------------------------------------------------------------------


class Ring:
    """Uniform coefficient-ring interface used by the matrix layer.

    Concrete rings are small frozen dataclasses; elements are plain values
    (GroupRingElement, Fraction, int, RatFunc, RationalFnR, NovikovElement).
    """

    is_field = False

    def zero(self):
        raise NotImplementedError

    def one(self):
        raise NotImplementedError

    def add(self, a, b):
        raise NotImplementedError

    def neg(self, a):
        raise NotImplementedError

    def sub(self, a, b):
        return self.add(a, self.neg(b))

    def mul(self, a, b):
        raise NotImplementedError

    def is_zero(self, a) -> bool:
        raise NotImplementedError

    def eq(self, a, b) -> bool:
        return self.is_zero(self.sub(a, b))

    def from_int(self, n: int):
        raise NotImplementedError

    def inv(self, a):
        raise NotInvertibleError(f"no general inverses in {self}")

    def element_str(self, a) -> str:
        return str(a)


@dataclass(frozen=True)
class GroupRing(Ring):
    """Z[H] for H free abelian of the given rank."""

    rank: int

    def zero(self):
        return GroupRingElement.zero(self.rank)

    def one(self):
        return GroupRingElement.one(self.rank)

    def add(self, a, b):
        return a + b

    def neg(self, a):
        return -a

    def mul(self, a, b):
        return a * b

    def is_zero(self, a):
        return a.is_zero

    def eq(self, a, b):
        return a == b

    def from_int(self, n):
        return GroupRingElement.constant(self.rank, n)

    def __str__(self):
        return f"Z[H] (rank {self.rank})"


@dataclass(frozen=True)
class RationalField(Ring):
    """The rationals; elements are Fractions."""

    is_field = True

    def zero(self):
        return Fraction(0)

    def one(self):
        return Fraction(1)

    def add(self, a, b):
        return a + b

    def neg(self, a):
        return -a

    def mul(self, a, b):
        return a * b

    def is_zero(self, a):
        return a == 0

    def eq(self, a, b):
        return a == b

    def from_int(self, n):
        return Fraction(n)

    def inv(self, a):
        if a == 0:
            raise NotInvertibleError("division by zero in Q", determinant=a)
        return 1 / Fraction(a)

    def __str__(self):
        return "Q"


@dataclass(frozen=True)
class PrimeField(Ring):
    """F_p; elements are ints in 0..p-1."""

    p: int
    is_field = True

    def __post_init__(self):
        CoeffField(self.p)  # validates primality

    def zero(self):
        return 0

    def one(self):
        return 1

    def add(self, a, b):
        return (a + b) % self.p

    def neg(self, a):
        return (-a) % self.p

    def mul(self, a, b):
        return (a * b) % self.p

    def is_zero(self, a):
        return a % self.p == 0

    def eq(self, a, b):
        return (a - b) % self.p == 0

    def from_int(self, n):
        return n % self.p

    def inv(self, a):
        if a % self.p == 0:
            raise NotInvertibleError(f"division by zero in F_{self.p}", a)
        return pow(a, -1, self.p)

    def __str__(self):
        return f"F_{self.p}"


# -- rational function fields ------------------------------------------------


class RatFunc:
    """A rational function: a pair (num, den) of multivariate polynomials.

    The pair is normalized by the owning ``FunctionField``: a common
    monomial factor is removed, in one variable the fraction is fully
    reduced by a Euclidean gcd, and the denominator is scaled so its
    lex-leading coefficient is 1.  Equality is by cross multiplication, so
    partial reduction in several variables is harmless.
    """

    __slots__ = ("num", "den")

    def __init__(self, num: dict, den: dict):
        object.__setattr__(self, "num", num)
        object.__setattr__(self, "den", den)

    def __setattr__(self, name, value):
        raise AttributeError("RatFunc is immutable")

    @property
    def is_polynomial(self) -> bool:
        return len(self.den) == 1 and not any(next(iter(self.den)))

    def __repr__(self):
        return f"RatFunc({self.num!r}, {self.den!r})"


def _poly_str(terms: dict, rank: int) -> str:
    if not terms:
        return "0"
    chunks = []
    for e in sorted(terms, reverse=True):
        c = terms[e]
        mono = "*".join(
            (("t" if rank == 1 else f"t{i+1}") + (f"^{k}" if k != 1 else ""))
            for i, k in enumerate(e)
            if k != 0
        )
        neg = isinstance(c, (int, Fraction)) and c < 0
        mag = -c if neg else c
        body = f"{mag}" if not mono else (mono if mag == 1 else f"{mag}*{mono}")
        if not chunks:
            chunks.append(f"-{body}" if neg else body)
        else:
            chunks.append(f"- {body}" if neg else f"+ {body}")
    return " ".join(chunks)


def _kp_from_dict(terms: dict, K: CoeffField) -> list:
    """Rank-1 dict with nonnegative exponents -> ascending coefficient list."""
    if not terms:
        return []
    n = max(e[0] for e in terms)
    out = [K.zero()] * (n + 1)
    for (e,), c in terms.items():
        out[e] = c
    return out


def _kp_to_dict(coeffs, K: CoeffField) -> dict:
    return {(i,): c for i, c in enumerate(coeffs) if not K.is_zero(c)}


def _kp_normalize(cs, K):
    cs = list(cs)
    while cs and K.is_zero(cs[-1]):
        cs.pop()
    return cs


def _kp_divmod(p, q, K):
    p, q = _kp_normalize(p, K), _kp_normalize(q, K)
    if not q:
        raise UndefinedInputError("division by zero polynomial")
    quot = [K.zero()] * max(0, len(p) - len(q) + 1)
    while len(p) >= len(q):
        f = K.div(p[-1], q[-1])
        k = len(p) - len(q)
        quot[k] = f
        for i, b in enumerate(q):
            p[k + i] = K.sub(p[k + i], K.mul(f, b))
        p = _kp_normalize(p[:-1], K)
    return quot, p


def _kp_gcd(p, q, K):
    a, b = _kp_normalize(p, K), _kp_normalize(q, K)
    while b:
        a, b = b, _kp_divmod(a, b, K)[1]
    if a:
        lead = a[-1]
        a = [K.div(c, lead) for c in a]
    return a


@dataclass(frozen=True)
class FunctionField(Ring):
    """Rational functions in ``rank`` variables over Q (char 0) or F_p."""

    rank: int
    char: int = 0
    is_field = True

    def __post_init__(self):
        if self.rank < 1:
            raise PreconditionError("function field needs at least one variable")
        object.__setattr__(self, "_K", CoeffField(self.char))

    @property
    def coeffs(self) -> CoeffField:
        return self._K

    def _one_poly(self) -> dict:
        return {(0,) * self.rank: self._K.one()}

    def make(self, num: dict, den: dict) -> RatFunc:
        K = self._K
        if t_is_zero(den):
            raise UndefinedInputError("zero denominator in function field")
        if t_is_zero(num):
            return RatFunc({}, self._one_poly())
        # remove the common monomial factor so both parts are honest
        # polynomials with componentwise minimum exponent zero
        mins = tuple(
            map(min, t_min_exponents(num, self.rank), t_min_exponents(den, self.rank))
        )
        if any(mins):
            shift = tuple(-m for m in mins)
            num, den = t_shift(num, shift), t_shift(den, shift)
        if self.rank == 1:
            p, q = _kp_from_dict(num, K), _kp_from_dict(den, K)
            g = _kp_gcd(p, q, K)
            if len(g) > 1:
                p = _kp_divmod(p, g, K)[0]
                q = _kp_divmod(q, g, K)[0]
            num, den = _kp_to_dict(p, K), _kp_to_dict(q, K)
        lead = den[max(den)]
        if not K.is_zero(K.sub(lead, K.one())):
            num = t_scale(num, K.div(K.one(), lead), K)
            den = t_scale(den, K.div(K.one(), lead), K)
        return RatFunc(num, den)

    def from_polynomial(self, terms: dict) -> RatFunc:
        return self.make(terms, self._one_poly())

    def zero(self):
        return RatFunc({}, self._one_poly())

    def one(self):
        return RatFunc(self._one_poly(), self._one_poly())

    def add(self, a: RatFunc, b: RatFunc):
        K = self._K
        num = t_add(t_mul(a.num, b.den, K), t_mul(b.num, a.den, K), K)
        return self.make(num, t_mul(a.den, b.den, K))

    def neg(self, a: RatFunc):
        return RatFunc(t_neg(a.num, self._K), a.den)

    def mul(self, a: RatFunc, b: RatFunc):
        K = self._K
        return self.make(t_mul(a.num, b.num, K), t_mul(a.den, b.den, K))

    def is_zero(self, a: RatFunc):
        return t_is_zero(a.num)

    def eq(self, a: RatFunc, b: RatFunc):
        K = self._K
        return t_is_zero(
            t_sub(t_mul(a.num, b.den, K), t_mul(b.num, a.den, K), K)
        )

    def from_int(self, n: int):
        c = self._K.from_int(n)
        if self._K.is_zero(c):
            return self.zero()
        return RatFunc({(0,) * self.rank: c}, self._one_poly())

    def from_fraction(self, x: Fraction):
        c = self._K.from_fraction(x)
        if self._K.is_zero(c):
            return self.zero()
        return RatFunc({(0,) * self.rank: c}, self._one_poly())

    def inv(self, a: RatFunc):
        if t_is_zero(a.num):
            raise NotInvertibleError(
                "zero element of the function field", determinant=a
            )
        return self.make(a.den, a.num)

    def evaluate(self, a: RatFunc, point):
        """Evaluate at a tuple of field values; denominator must not vanish."""
        K = self._K
        den = t_eval(a.den, point, K)
        if K.is_zero(den):
            raise UndefinedInputError("denominator vanishes at the point")
        return K.div(t_eval(a.num, point, K), den)

    def element_str(self, a: RatFunc) -> str:
        n = _poly_str(a.num, self.rank)
        if a.den == self._one_poly():
            return n
        return f"({n}) / ({_poly_str(a.den, self.rank)})"

    def __str__(self):
        base = "Q" if self.char == 0 else f"F_{self.char}"
        return f"{base}(t1..t{self.rank})"


# -- the PID of rational functions with monic denominator --------------------


class RationalFnR:
    """An element of the ring R: a Laurent numerator over Z divided by a
    monic integer polynomial.

    Elements are *not* reduced to lowest terms; only the monic-denominator
    normalization is enforced, and equality is by cross multiplication.
    """

    __slots__ = ("num", "den")

    def __init__(self, num: GroupRingElement, den=(1,)):
        if not isinstance(num, GroupRingElement) or num.rank != 1:
            raise PreconditionError("numerator must be a rank-1 group ring element")
        den = intpoly.normalize(tuple(int(c) for c in den))
        if not den or den[-1] != 1:
            raise PreconditionError(
                f"denominator {den} is not a monic integer polynomial"
            )
        object.__setattr__(self, "num", num)
        object.__setattr__(self, "den", den)

    def __setattr__(self, name, value):
        raise AttributeError("RationalFnR is immutable")

    @classmethod
    def zero(cls):
        return cls(GroupRingElement.zero(1))

    @classmethod
    def one(cls):
        return cls(GroupRingElement.one(1))

    @classmethod
    def from_laurent(cls, p: GroupRingElement):
        return cls(p)

    @classmethod
    def from_int_poly(cls, coeffs):
        return cls(GroupRingElement(1, {(i,): c for i, c in enumerate(coeffs)}))

    @property
    def is_zero(self) -> bool:
        return self.num.is_zero

    def _den_elem(self) -> GroupRingElement:
        return GroupRingElement(1, {(i,): c for i, c in enumerate(self.den)})

    def __add__(self, other):
        if not isinstance(other, RationalFnR):
            return NotImplemented
        num = self.num * other._den_elem() + other.num * self._den_elem()
        return RationalFnR(num, intpoly.mul(self.den, other.den))

    def __neg__(self):
        return RationalFnR(-self.num, self.den)

    def __sub__(self, other):
        if not isinstance(other, RationalFnR):
            return NotImplemented
        return self + (-other)

    def __mul__(self, other):
        if isinstance(other, int):
            return RationalFnR(self.num * other, self.den)
        if not isinstance(other, RationalFnR):
            return NotImplemented
        return RationalFnR(self.num * other.num, intpoly.mul(self.den, other.den))

    __rmul__ = __mul__

    def __eq__(self, other):
        if not isinstance(other, RationalFnR):
            return NotImplemented
        return self.num * other._den_elem() == other.num * self._den_elem()

    def __hash__(self):
        raise TypeError("RationalFnR is unhashable (equality is not structural)")

    def evaluate(self, a: Fraction) -> Fraction:
        """Evaluate at a nonzero rational; the denominator must not vanish."""
        a = Fraction(a)
        if a == 0 and any(e[0] < 0 for e in self.num.terms):
            raise UndefinedInputError("negative powers cannot be evaluated at 0")
        den = intpoly.eval_at(intpoly.to_q(self.den), a)
        if den == 0:
            raise UndefinedInputError(f"denominator vanishes at {a}")
        num = sum(
            (Fraction(c) * a ** e[0] for e, c in self.num.terms.items()),
            Fraction(0),
        )
        return num / den

    def __str__(self):
        if len(self.den) == 1:
            return str(self.num)
        return f"({self.num}) / ({intpoly_str(self.den)})"

    def __repr__(self):
        return f"RationalFnR({self.num!r}, {self.den!r})"


def intpoly_str(coeffs) -> str:
    return _poly_str({(i,): c for i, c in enumerate(coeffs) if c}, 1) or "0"


def _num_split(p: GroupRingElement):
    """Split a nonzero rank-1 Laurent numerator as t^shift * content * prim,
    with prim a primitive integer polynomial with nonzero constant term."""
    shift = min(e[0] for e in p.terms)
    top = max(e[0] for e in p.terms)
    coeffs = [0] * (top - shift + 1)
    for (e,), c in p.terms.items():
        coeffs[e - shift] = c
    c = intpoly.content(coeffs)
    prim = tuple(a // c for a in coeffs)
    return shift, c, prim


def R_is_unit(f: RationalFnR) -> bool:
    """Unit test in R: up to a sign and a power of t, a unit is a content-1
    integer polynomial whose leading coefficient is +-1.
    """
    if f.is_zero:
        return False
    _, c, prim = _num_split(f.num)
    return c == 1 and abs(prim[-1]) == 1


def R_inverse(f: RationalFnR) -> RationalFnR:
    """Inverse of a unit of R; raises for non-units."""
    if not R_is_unit(f):
        raise NotInvertibleError(f"{f} is not a unit of R", determinant=f)
    shift, _, prim = _num_split(f.num)
    sign = 1 if prim[-1] > 0 else -1
    den = tuple(sign * a for a in prim)
    num_terms = {(i - shift,): sign * c for i, c in enumerate(f.den) if c}
    return RationalFnR(GroupRingElement(1, num_terms), den)


def r_associates_z(p, q) -> bool:
    """Associativity in R of two integer polynomials (coefficient tuples):
    equal contents and primitive parts dividing one another with a quotient
    whose leading coefficient is +-1 (such a quotient is automatically a
    unit of R)."""
    p = intpoly.strip_t_power(intpoly.normalize(p))
    q = intpoly.strip_t_power(intpoly.normalize(q))
    if not p or not q:
        return not p and not q
    if intpoly.content(p) != intpoly.content(q):
        return False
    a, b = intpoly.primitive_part(p), intpoly.primitive_part(q)
    if intpoly.degree(a) < intpoly.degree(b):
        a, b = b, a
    quot, rem = intpoly.q_divmod(a, b)
    if rem:
        return False
    return quot and abs(quot[-1]) == 1


@dataclass(frozen=True)
class RationalFunctionRing(Ring):
    """The PID R of Laurent-over-monic rational functions."""

    def zero(self):
        return RationalFnR.zero()

    def one(self):
        return RationalFnR.one()

    def add(self, a, b):
        return a + b

    def neg(self, a):
        return -a

    def mul(self, a, b):
        return a * b

    def is_zero(self, a):
        return a.is_zero

    def eq(self, a, b):
        return a == b

    def from_int(self, n):
        return RationalFnR(GroupRingElement.constant(1, n))

    def inv(self, a):
        return R_inverse(a)

    def __str__(self):
        return "R = Z[t,t^-1] localized at monic polynomials"


def rational_fn_to_ratfunc(f: RationalFnR, field: FunctionField) -> RatFunc:
    """Reduce an element of R into the rational function field Q(t)."""
    if field.rank != 1 or field.char != 0:
        raise PreconditionError("R embeds in Q(t): need rank 1, char 0")
    num = {e: Fraction(c) for e, c in f.num.terms.items()}
    den = {(i,): Fraction(c) for i, c in enumerate(f.den) if c}
    return field.make(num, den)


def ratfunc_to_rational_fn(x: RatFunc, field: FunctionField) -> RationalFnR:
    """Cast a reduced element of Q(t) into R; raises RepresentationError
    when the element does not lie in R (reduced denominator not monic up
    to sign after clearing integer content)."""
    if field.rank != 1 or field.char != 0:
        raise PreconditionError("membership in R is tested inside Q(t)")
    if t_is_zero(x.num):
        return RationalFnR.zero()
    x = field.make(x.num, x.den)  # ensure fully reduced
    num_den_lcm = 1
    for c in x.num.values():
        num_den_lcm = num_den_lcm * c.denominator // int_gcd(
            num_den_lcm, c.denominator
        )
    den_den_lcm = 1
    for c in x.den.values():
        den_den_lcm = den_den_lcm * c.denominator // int_gcd(
            den_den_lcm, c.denominator
        )
    num_i = {e: int(c * num_den_lcm) for e, c in x.num.items()}
    den_i = {e[0]: int(c * den_den_lcm) for e, c in x.den.items()}
    top = max(den_i)
    den_coeffs = tuple(den_i.get(i, 0) for i in range(top + 1))
    c_num = intpoly.content(tuple(num_i.values()))
    c_den = intpoly.content(den_coeffs)
    # x = (c_num*den_den_lcm)/(c_den*num_den_lcm) * prim_num/prim_den
    rat = Fraction(c_num * den_den_lcm, c_den * num_den_lcm)
    prim_den = tuple(a // c_den for a in den_coeffs)
    if rat.denominator != 1 or abs(prim_den[-1]) != 1:
        raise RepresentationError(
            f"element {field.element_str(x)} does not lie in R"
        )
    sign = 1 if prim_den[-1] > 0 else -1
    num_terms = {
        e: sign * (v // c_num) * rat.numerator for e, v in num_i.items()
    }
    return RationalFnR(
        GroupRingElement(1, num_terms), tuple(sign * a for a in prim_den)
    )


# -- truncated Novikov series -------------------------------------------------


class NovikovElement:
    """A truncated series: exact representative of a coset modulo terms of
    weight below the cutoff.  Stored terms all have weight >= cutoff."""

    __slots__ = ("xi", "cutoff", "terms")

    def __init__(self, xi: CohomologyClass, cutoff, terms: dict):
        cutoff = Fraction(cutoff)
        clean = {}
        for exp, c in terms.items():
            exp = tuple(int(e) for e in exp)
            c = int(c)
            if c and xi.weight(exp) >= cutoff:
                clean[exp] = c
        object.__setattr__(self, "xi", xi)
        object.__setattr__(self, "cutoff", cutoff)
        object.__setattr__(self, "terms", clean)

    def __setattr__(self, name, value):
        raise AttributeError("NovikovElement is immutable")

    @property
    def rank(self) -> int:
        return self.xi.rank

    @property
    def is_zero(self) -> bool:
        return not self.terms

    def max_weight(self) -> Optional[Fraction]:
        if not self.terms:
            return None
        return max(self.xi.weight(e) for e in self.terms)

    def __eq__(self, other):
        if not isinstance(other, NovikovElement):
            return NotImplemented
        if self.xi != other.xi:
            raise DimensionError("coset comparison across different classes")
        cut = max(self.cutoff, other.cutoff)
        a = {e: c for e, c in self.terms.items() if self.xi.weight(e) >= cut}
        b = {e: c for e, c in other.terms.items() if other.xi.weight(e) >= cut}
        return a == b

    def __hash__(self):
        raise TypeError("NovikovElement is unhashable (coset equality)")

    def __str__(self):
        body = str(GroupRingElement(self.rank, self.terms))
        return f"{body} + O(weight < {self.cutoff})"

    def __repr__(self):
        return f"NovikovElement(xi={self.xi}, cutoff={self.cutoff}, {self.terms!r})"


def rho_novikov(p: GroupRingElement, xi: CohomologyClass, cutoff) -> NovikovElement:
    """Truncate a group ring element below the weight cutoff."""
    if p.rank != xi.rank:
        raise DimensionError(
            f"element rank {p.rank} against class rank {xi.rank}"
        )
    return NovikovElement(xi, cutoff, p.terms)


def _check_same_context(a: NovikovElement, b: NovikovElement):
    if a.xi != b.xi:
        raise DimensionError(
            f"mixed truncation contexts: {a.xi} vs {b.xi}"
        )


def novikov_add(a: NovikovElement, b: NovikovElement) -> NovikovElement:
    _check_same_context(a, b)
    out = dict(a.terms)
    for e, c in b.terms.items():
        s = out.get(e, 0) + c
        if s:
            out[e] = s
        else:
            out.pop(e, None)
    return NovikovElement(a.xi, max(a.cutoff, b.cutoff), out)


def novikov_mul(a: NovikovElement, b: NovikovElement) -> NovikovElement:
    """Product of truncated representatives, truncated at the larger cutoff.

    The result represents the coset of the true product provided neither
    operand carries terms of positive weight (otherwise discarded tails
    could climb back above the cutoff).
    """
    _check_same_context(a, b)
    out: dict = {}
    for e1, c1 in a.terms.items():
        for e2, c2 in b.terms.items():
            e = tuple(x + y for x, y in zip(e1, e2))
            s = out.get(e, 0) + c1 * c2
            if s:
                out[e] = s
            else:
                out.pop(e, None)
    return NovikovElement(a.xi, max(a.cutoff, b.cutoff), out)


@dataclass(frozen=True)
class NovikovRing(Ring):
    """Truncated series ring with a fixed class and default cutoff."""

    xi: CohomologyClass
    cutoff: Fraction

    def __post_init__(self):
        object.__setattr__(self, "cutoff", Fraction(self.cutoff))

    def _own(self, a: NovikovElement):
        if a.xi != self.xi:
            raise DimensionError(
                f"element truncated for {a.xi} used in ring for {self.xi}"
            )
        return a

    def zero(self):
        return NovikovElement(self.xi, self.cutoff, {})

    def one(self):
        return NovikovElement(self.xi, self.cutoff, {(0,) * self.xi.rank: 1})

    def add(self, a, b):
        return novikov_add(self._own(a), self._own(b))

    def neg(self, a):
        self._own(a)
        return NovikovElement(a.xi, a.cutoff, {e: -c for e, c in a.terms.items()})

    def mul(self, a, b):
        return novikov_mul(self._own(a), self._own(b))

    def is_zero(self, a):
        return self._own(a).is_zero

    def eq(self, a, b):
        return self._own(a) == self._own(b)

    def from_int(self, n):
        return NovikovElement(self.xi, self.cutoff, {(0,) * self.xi.rank: n})

    def from_group_ring(self, p: GroupRingElement):
        return rho_novikov(p, self.xi, self.cutoff)

    def __str__(self):
        return f"Novikov series for xi={self.xi}, cutoff {self.cutoff}"


# ---------------------------------------------------------------------------
# scalar and field representations
# ---------------------------------------------------------------------------


def _require_integral(xi: CohomologyClass):
    if not xi.is_integral:
        raise PreconditionError(
            f"class {xi} must be integral (integer weights) for this target"
        )


def rho_R(p: GroupRingElement, xi: CohomologyClass) -> RationalFnR:
    """Send each monomial h to t^{xi(h)}; xi must be integral."""
    if p.rank != xi.rank:
        raise DimensionError(
            f"element rank {p.rank} against class rank {xi.rank}"
        )
    _require_integral(xi)
    out: dict = {}
    for e, c in p.terms.items():
        k = int(xi.weight(e))
        s = out.get((k,), 0) + c
        if s:
            out[(k,)] = s
        else:
            out.pop((k,), None)
    return RationalFnR(GroupRingElement(1, out))


def rho_scalar(p: GroupRingElement, a, xi: CohomologyClass) -> Fraction:
    """Evaluate: each monomial h contributes coefficient * a^{xi(h)}."""
    a = Fraction(a)
    if a == 0:
        raise PreconditionError("scalar evaluation point must be nonzero")
    if p.rank != xi.rank:
        raise DimensionError(
            f"element rank {p.rank} against class rank {xi.rank}"
        )
    _require_integral(xi)
    return sum(
        (Fraction(c) * a ** int(xi.weight(e)) for e, c in p.terms.items()),
        Fraction(0),
    )


def rho_rational_field(
    p: GroupRingElement, basis, char: int = 0
) -> RatFunc:
    """Send a monomial h to prod_i t_i^{xi_i(h)} for a basis of integral
    classes; the result is a (Laurent) polynomial inside the field."""
    basis = tuple(basis)
    if not basis:
        raise PreconditionError("need at least one basis class")
    for xi in basis:
        if xi.rank != p.rank:
            raise DimensionError(
                f"basis class rank {xi.rank} against element rank {p.rank}"
            )
        _require_integral(xi)
    field = FunctionField(len(basis), char)
    K = field.coeffs
    terms: dict = {}
    for e, c in p.terms.items():
        exp = tuple(int(xi.weight(e)) for xi in basis)
        s = K.add(terms.get(exp, K.zero()), K.from_int(c))
        if K.is_zero(s):
            terms.pop(exp, None)
        else:
            terms[exp] = s
    return field.make(terms, field._one_poly())


def standard_basis(rank: int):
    """The coordinate classes: the i-th sends a monomial to its i-th exponent."""
    return tuple(
        CohomologyClass.of(*(1 if j == i else 0 for j in range(rank)))
        for i in range(rank)
    )


# ---------------------------------------------------------------------------
# monodromy bundles
# ---------------------------------------------------------------------------


def kmat_identity(n: int, K: CoeffField):
    return [[K.one() if i == j else K.zero() for j in range(n)] for i in range(n)]


def kmat_mul(A, B, K: CoeffField):
    n, m, l = len(A), len(B[0]) if B else 0, len(B)
    out = [[K.zero()] * m for _ in range(n)]
    for i in range(n):
        for k in range(l):
            a = A[i][k]
            if K.is_zero(a):
                continue
            for j in range(m):
                out[i][j] = K.add(out[i][j], K.mul(a, B[k][j]))
    return out


def kmat_inv(A, K: CoeffField):
    """Gauss-Jordan inverse over the coefficient field; raises when singular."""
    n = len(A)
    work = [list(row) + list(ide) for row, ide in zip(A, kmat_identity(n, K))]
    for col in range(n):
        piv = next(
            (r for r in range(col, n) if not K.is_zero(work[r][col])), None
        )
        if piv is None:
            raise NotInvertibleError("singular matrix over coefficient field")
        work[col], work[piv] = work[piv], work[col]
        inv_p = K.div(K.one(), work[col][col])
        work[col] = [K.mul(inv_p, v) for v in work[col]]
        for r in range(n):
            if r == col or K.is_zero(work[r][col]):
                continue
            f = work[r][col]
            work[r] = [K.sub(v, K.mul(f, w)) for v, w in zip(work[r], work[col])]
    return [row[n:] for row in work]


@dataclass(frozen=True)
class MonodromyRep:
    """Commuting invertible matrices, one per basis direction of H.

    Integer matrices describe a bundle with an integral lattice; dimension-1
    data may use arbitrary nonzero rationals.  The action of a group element
    is the product of the generator matrices raised to its exponents.
    """

    dimension: int
    matrices: tuple

    def __post_init__(self):
        mats = []
        for M in self.matrices:
            rows = tuple(tuple(Fraction(v) for v in row) for row in M)
            if len(rows) != self.dimension or any(
                len(r) != self.dimension for r in rows
            ):
                raise DimensionError(
                    f"monodromy matrix is not {self.dimension}x{self.dimension}"
                )
            mats.append(rows)
        object.__setattr__(self, "matrices", tuple(mats))
        K = QQ_COEFF
        for M in self.matrices:
            kmat_inv([list(r) for r in M], K)  # invertibility
        for i, A in enumerate(self.matrices):
            for B in self.matrices[i + 1 :]:
                AB = kmat_mul([list(r) for r in A], [list(r) for r in B], K)
                BA = kmat_mul([list(r) for r in B], [list(r) for r in A], K)
                if AB != BA:
                    raise PreconditionError("monodromy matrices must commute")

    @classmethod
    def trivial(cls, rank: int, dimension: int = 1):
        ident = tuple(
            tuple(1 if i == j else 0 for j in range(dimension))
            for i in range(dimension)
        )
        return cls(dimension, tuple(ident for _ in range(rank)))

    @classmethod
    def line_bundle(cls, values):
        return cls(1, tuple(((Fraction(v),),) for v in values))

    @property
    def rank(self) -> int:
        return len(self.matrices)

    def apply(self, exp, K: CoeffField = QQ_COEFF):
        """Matrix of the group element with the given exponents, over K."""
        out = kmat_identity(self.dimension, K)
        for M, e in zip(self.matrices, exp):
            if e == 0:
                continue
            base = [[K.from_fraction(v) for v in row] for row in M]
            if e < 0:
                base = kmat_inv(base, K)
                e = -e
            while e:
                if e & 1:
                    out = kmat_mul(out, base, K)
                base = kmat_mul(base, base, K)
                e >>= 1
        return out


# ---------------------------------------------------------------------------
# representation descriptors
# ---------------------------------------------------------------------------


class RepresentationDescriptor:
    """How to push a complex over Z[H] into one of the tower rings.

    ``target_ring(rank)`` names the coefficient ring, ``block_dim`` is 1 for
    scalar kinds and the bundle dimension otherwise, and ``entry_blocks``
    maps one group ring element to a block_dim x block_dim nested list of
    target ring elements.
    """

    kind = "abstract"

    def check(self, rank: int):
        raise NotImplementedError

    def target_ring(self, rank: int) -> Ring:
        raise NotImplementedError

    @property
    def block_dim(self) -> int:
        return 1

    def entry_blocks(self, p: GroupRingElement):
        raise NotImplementedError

    @property
    def xi_class(self) -> Optional[CohomologyClass]:
        return getattr(self, "xi", None)


@dataclass(frozen=True)
class NovikovDescriptor(RepresentationDescriptor):
    xi: CohomologyClass
    cutoff: Fraction
    kind = "novikov"

    def __post_init__(self):
        object.__setattr__(self, "cutoff", Fraction(self.cutoff))

    def check(self, rank: int):
        if self.xi.rank != rank:
            raise RepresentationError(
                f"class rank {self.xi.rank} against complex rank {rank}"
            )

    def target_ring(self, rank: int):
        return NovikovRing(self.xi, self.cutoff)

    def entry_blocks(self, p):
        return [[rho_novikov(p, self.xi, self.cutoff)]]


@dataclass(frozen=True)
class RationalFnRDescriptor(RepresentationDescriptor):
    xi: CohomologyClass
    kind = "rational_fn_R"

    def check(self, rank: int):
        if self.xi.rank != rank:
            raise RepresentationError(
                f"class rank {self.xi.rank} against complex rank {rank}"
            )
        if not self.xi.is_integral:
            raise RepresentationError("target R needs an integral class")

    def target_ring(self, rank: int):
        return RationalFunctionRing()

    def entry_blocks(self, p):
        return [[rho_R(p, self.xi)]]


@dataclass(frozen=True)
class ScalarDescriptor(RepresentationDescriptor):
    a: Fraction
    xi: CohomologyClass
    kind = "scalar"

    def __post_init__(self):
        object.__setattr__(self, "a", Fraction(self.a))

    def check(self, rank: int):
        if self.a == 0:
            raise RepresentationError("evaluation point must be nonzero")
        if self.xi.rank != rank:
            raise RepresentationError(
                f"class rank {self.xi.rank} against complex rank {rank}"
            )
        if not self.xi.is_integral:
            raise RepresentationError("scalar evaluation needs an integral class")

    def target_ring(self, rank: int):
        return RationalField()

    def entry_blocks(self, p):
        return [[rho_scalar(p, self.a, self.xi)]]


@dataclass(frozen=True)
class RationalFieldDescriptor(RepresentationDescriptor):
    basis: tuple
    char: int = 0
    kind = "rational_field"

    @classmethod
    def standard(cls, rank: int, char: int = 0):
        return cls(standard_basis(rank), char)

    def check(self, rank: int):
        for xi in self.basis:
            if xi.rank != rank:
                raise RepresentationError(
                    f"basis class rank {xi.rank} against complex rank {rank}"
                )
            if not xi.is_integral:
                raise RepresentationError("field variables need integral classes")

    def target_ring(self, rank: int):
        return FunctionField(len(self.basis), self.char)

    def entry_blocks(self, p):
        return [[rho_rational_field(p, self.basis, self.char)]]


@dataclass(frozen=True)
class ScalarBundleDescriptor(RepresentationDescriptor):
    a: Fraction
    bundle: MonodromyRep
    xi: CohomologyClass
    kind = "scalar_with_bundle"

    def __post_init__(self):
        object.__setattr__(self, "a", Fraction(self.a))

    def check(self, rank: int):
        if self.a == 0:
            raise RepresentationError("evaluation point must be nonzero")
        if self.xi.rank != rank or self.bundle.rank != rank:
            raise RepresentationError(
                "class and bundle ranks must match the complex rank"
            )
        if not self.xi.is_integral:
            raise RepresentationError("scalar evaluation needs an integral class")

    def target_ring(self, rank: int):
        return RationalField()

    @property
    def block_dim(self) -> int:
        return self.bundle.dimension

    def entry_blocks(self, p):
        m = self.bundle.dimension
        K = QQ_COEFF
        out = [[Fraction(0)] * m for _ in range(m)]
        for e, c in p.terms.items():
            scale = Fraction(c) * self.a ** int(self.xi.weight(e))
            if scale == 0:
                continue
            mat = self.bundle.apply(e, K)
            for i in range(m):
                for j in range(m):
                    out[i][j] += scale * mat[i][j]
        return out


@dataclass(frozen=True)
class RBundleDescriptor(RepresentationDescriptor):
    """Twist by a bundle while keeping the evaluation point symbolic.

    Group elements go to t^(weight) times their monodromy matrix, summed
    over the support, landing in R.  The blocks must come out with integer
    coefficients (an integral lattice; negative exponents additionally need
    the inverses integral), otherwise the push is refused: R numerators
    are integer Laurent polynomials by construction.
    """

    bundle: MonodromyRep
    xi: CohomologyClass
    kind = "rational_fn_R_with_bundle"

    def check(self, rank: int):
        if self.xi.rank != rank or self.bundle.rank != rank:
            raise RepresentationError(
                "class and bundle ranks must match the complex rank"
            )
        if not self.xi.is_integral:
            raise RepresentationError("target R needs an integral class")

    def target_ring(self, rank: int):
        return RationalFunctionRing()

    @property
    def block_dim(self) -> int:
        return self.bundle.dimension

    def entry_blocks(self, p):
        m = self.bundle.dimension
        acc = [[{} for _ in range(m)] for _ in range(m)]
        for e, c in p.terms.items():
            w = int(self.xi.weight(e))
            mat = self.bundle.apply(e, QQ_COEFF)
            for i in range(m):
                for j in range(m):
                    v = Fraction(c) * mat[i][j]
                    if v == 0:
                        continue
                    acc[i][j][w] = acc[i][j].get(w, Fraction(0)) + v
        out = []
        for i in range(m):
            row = []
            for j in range(m):
                terms = {}
                for w, v in acc[i][j].items():
                    if v == 0:
                        continue
                    if v.denominator != 1:
                        raise RepresentationError(
                            f"twisted coefficient {v} is not an integer; "
                            "this bundle has no integral lattice along the "
                            "complex's support"
                        )
                    terms[(w,)] = v.numerator
                row.append(
                    RationalFnR(GroupRingElement(1, terms), (1,))
                )
            out.append(row)
        return out


@dataclass(frozen=True)
class FieldBundleDescriptor(RepresentationDescriptor):
    bundle: MonodromyRep
    char: int = 0
    kind = "field_of_fractions_with_bundle"

    def check(self, rank: int):
        if self.bundle.rank != rank:
            raise RepresentationError(
                f"bundle rank {self.bundle.rank} against complex rank {rank}"
            )

    def target_ring(self, rank: int):
        return FunctionField(rank, self.char)

    @property
    def block_dim(self) -> int:
        return self.bundle.dimension

    def entry_blocks(self, p):
        m = self.bundle.dimension
        rank = self.bundle.rank
        field = FunctionField(rank, self.char)
        K = field.coeffs
        acc = [[{} for _ in range(m)] for _ in range(m)]
        for e, c in p.terms.items():
            mat = self.bundle.apply(e, K)
            cc = K.from_int(c)
            if K.is_zero(cc):
                continue
            for i in range(m):
                for j in range(m):
                    v = K.mul(cc, mat[i][j])
                    if K.is_zero(v):
                        continue
                    acc[i][j] = t_add(acc[i][j], {tuple(e): v}, K)
        one = field._one_poly()
        return [[field.make(acc[i][j], one) for j in range(m)] for i in range(m)]
