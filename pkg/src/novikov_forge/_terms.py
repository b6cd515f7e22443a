"""Multivariate polynomial arithmetic on term dictionaries.

A polynomial in r variables is a dict mapping exponent tuples (length r,
possibly negative entries for Laurent use) to nonzero coefficients.  The
coefficient arithmetic is pluggable so the same code serves Q and F_p;
coefficients are Fractions in characteristic 0 and ints in 0..p-1 mod p.

Exact division assumes the caller knows the division is exact (as in
fraction-free elimination); it works term by term against the lex-leading
monomial of the divisor and raises if the division leaves a remainder.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .errors import PreconditionError, UndefinedInputError


@dataclass(frozen=True)
class CoeffField:
    """Arithmetic of the coefficient field: Q for char 0, F_p otherwise."""

    char: int = 0

    def __post_init__(self):
        p = self.char
        if p:
            if p < 2 or any(p % d == 0 for d in range(2, int(p**0.5) + 1)):
                raise PreconditionError(f"characteristic {p} is not prime")

    def zero(self):
        return 0 if self.char else Fraction(0)

    def one(self):
        return 1 if self.char else Fraction(1)

    def from_int(self, n: int):
        return n % self.char if self.char else Fraction(n)

    def from_fraction(self, x: Fraction):
        if self.char == 0:
            return Fraction(x)
        num, den = x.numerator % self.char, x.denominator % self.char
        if den == 0:
            raise PreconditionError(
                f"denominator of {x} vanishes modulo {self.char}"
            )
        return num * pow(den, -1, self.char) % self.char

    def add(self, a, b):
        return (a + b) % self.char if self.char else a + b

    def sub(self, a, b):
        return (a - b) % self.char if self.char else a - b

    def neg(self, a):
        return (-a) % self.char if self.char else -a

    def mul(self, a, b):
        return (a * b) % self.char if self.char else a * b

    def div(self, a, b):
        if self.is_zero(b):
            raise UndefinedInputError("division by zero coefficient")
        if self.char:
            return a * pow(b, -1, self.char) % self.char
        return a / b

    def is_zero(self, a) -> bool:
        return a == 0


QQ_COEFF = CoeffField(0)


# -- term dict operations ----------------------------------------------------


def t_zero() -> dict:
    return {}

def t_const(K: CoeffField, c, rank: int) -> dict:
    # exponent tuples always carry the full rank; constants sit at the origin
    return {} if K.is_zero(c) else {(0,) * rank: c}


def t_monomial(exp, c, K: CoeffField) -> dict:
    return {} if K.is_zero(c) else {tuple(exp): c}


def t_is_zero(a: dict) -> bool:
    return not a


def t_add(a: dict, b: dict, K: CoeffField) -> dict:
    out = dict(a)
    for e, c in b.items():
        s = K.add(out.get(e, K.zero()), c)
        if K.is_zero(s):
            out.pop(e, None)
        else:
            out[e] = s
    return out


def t_neg(a: dict, K: CoeffField) -> dict:
    return {e: K.neg(c) for e, c in a.items()}


def t_sub(a: dict, b: dict, K: CoeffField) -> dict:
    return t_add(a, t_neg(b, K), K)


def t_mul(a: dict, b: dict, K: CoeffField) -> dict:
    out: dict = {}
    for e1, c1 in a.items():
        for e2, c2 in b.items():
            e = tuple(x + y for x, y in zip(e1, e2))
            s = K.add(out.get(e, K.zero()), K.mul(c1, c2))
            if K.is_zero(s):
                out.pop(e, None)
            else:
                out[e] = s
    return out


def t_scale(a: dict, c, K: CoeffField) -> dict:
    if K.is_zero(c):
        return {}
    return {e: K.mul(v, c) for e, v in a.items()}


def t_lead(a: dict):
    """Lex-leading (exponent, coefficient) pair."""
    e = max(a)
    return e, a[e]


def t_shift(a: dict, shift) -> dict:
    return {tuple(x + s for x, s in zip(e, shift)): c for e, c in a.items()}


def t_min_exponents(a: dict, rank: int):
    """Componentwise minimum exponent over the support (0-vector if empty)."""
    if not a:
        return (0,) * rank
    mins = None
    for e in a:
        mins = e if mins is None else tuple(map(min, mins, e))
    return mins


def t_exact_div(a: dict, b: dict, K: CoeffField) -> dict:
    """Quotient a/b when b divides a exactly; raises otherwise.

    Standard multivariate division against the lex-leading term of b; for
    an exact division the remainder reduces to zero.
    """
    if t_is_zero(b):
        raise UndefinedInputError("exact division by zero polynomial")
    if t_is_zero(a):
        return {}
    lb, cb = t_lead(b)
    rem = dict(a)
    quot: dict = {}
    while rem:
        la, ca = t_lead(rem)
        e = tuple(x - y for x, y in zip(la, lb))
        # For exact divisions arising from fraction-free elimination the
        # leading term always divides; anything else is a caller bug.
        q = K.div(ca, cb)
        quot[e] = K.add(quot.get(e, K.zero()), q)
        rem = t_sub(rem, t_mul({e: q}, b, K), K)
        if rem and max(rem) >= la:
            raise PreconditionError("division did not reduce; not exact")
    return {e: c for e, c in quot.items() if not K.is_zero(c)}


def t_divides(a: dict, b: dict, K: CoeffField) -> bool:
    """True when a divides b exactly (a nonzero)."""
    try:
        t_exact_div(b, a, K)
        return True
    except PreconditionError:
        return False


def t_eval(a: dict, point, K: CoeffField):
    """Evaluate at a point (tuple of field values, all nonzero for Laurent)."""
    total = K.zero()
    for e, c in a.items():
        term = c
        for x, k in zip(point, e):
            if k == 0:
                continue
            if K.is_zero(x) and k < 0:
                raise UndefinedInputError("negative power of zero in evaluation")
            term = K.mul(term, _pow(x, k, K))
        total = K.add(total, term)
    return total


def _pow(x, k: int, K: CoeffField):
    if k < 0:
        x = K.div(K.one(), x)
        k = -k
    out = K.one()
    while k:
        if k & 1:
            out = K.mul(out, x)
        x = K.mul(x, x)
        k >>= 1
    return out


def t_from_int_dict(terms: dict, K: CoeffField) -> dict:
    """Lift an integer-coefficient term dict into the field K."""
    out = {}
    for e, c in terms.items():
        v = K.from_int(c)
        if not K.is_zero(v):
            out[e] = v
    return out
