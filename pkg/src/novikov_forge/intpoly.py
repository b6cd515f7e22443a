"""Univariate polynomial helpers over Z and Q.

Polynomials are coefficient tuples in ascending order: (a_0, a_1, ..., a_n)
stands for a_0 + a_1 t + ... + a_n t^n, with no trailing zeros and () for
the zero polynomial.  Integer polynomials use int coefficients, rational
ones use Fraction.  These are deliberately plain functions on tuples; the
callers that need richer types wrap them.

The gcd over Z[t] follows the classical content/primitive-part split: the
content is the integer gcd of the coefficients, the primitive parts are
combined with the Euclidean algorithm over Q[t] and then scaled back to a
primitive integer polynomial with positive leading coefficient.
"""

from __future__ import annotations

from fractions import Fraction
from math import gcd as int_gcd

from .errors import PreconditionError, UndefinedInputError


def normalize(coeffs) -> tuple:
    cs = list(coeffs)
    while cs and cs[-1] == 0:
        cs.pop()
    return tuple(cs)


def degree(p) -> int:
    """Degree, with the zero polynomial given degree -1."""
    return len(p) - 1


def lead(p):
    if not p:
        raise UndefinedInputError("leading coefficient of the zero polynomial")
    return p[-1]


def add(p, q) -> tuple:
    n = max(len(p), len(q))
    return normalize(
        [(p[i] if i < len(p) else 0) + (q[i] if i < len(q) else 0) for i in range(n)]
    )


def neg(p) -> tuple:
    return tuple(-c for c in p)


def sub(p, q) -> tuple:
    return add(p, neg(q))


def mul(p, q) -> tuple:
    if not p or not q:
        return ()
    out = [0] * (len(p) + len(q) - 1)
    for i, a in enumerate(p):
        if a == 0:
            continue
        for j, b in enumerate(q):
            out[i + j] += a * b
    return normalize(out)


def scale(p, c) -> tuple:
    if c == 0:
        return ()
    return tuple(a * c for a in p)


def eval_at(p, a):
    """Evaluate at a point by Horner's rule."""
    acc = 0
    for c in reversed(p):
        acc = acc * a + c
    return acc


def content(p) -> int:
    """Gcd of the integer coefficients; 0 for the zero polynomial."""
    g = 0
    for c in p:
        g = int_gcd(g, abs(int(c)))
    return g


def primitive_part(p) -> tuple:
    """p divided by its content, signed so the leading coefficient is positive."""
    if not p:
        return ()
    c = content(p)
    q = tuple(int(a) // c for a in p)
    return q if q[-1] > 0 else neg(q)


def to_q(p) -> tuple:
    return tuple(Fraction(c) for c in p)


def q_divmod(p, q):
    """Division with remainder over Q[t]; q must be nonzero."""
    if not q:
        raise UndefinedInputError("division by the zero polynomial")
    p = [Fraction(c) for c in p]
    q = [Fraction(c) for c in q]
    quot = [Fraction(0)] * max(0, len(p) - len(q) + 1)
    while len(p) >= len(q) and any(p):
        while p and p[-1] == 0:
            p.pop()
        if len(p) < len(q):
            break
        k = len(p) - len(q)
        f = p[-1] / q[-1]
        quot[k] = f
        for i, b in enumerate(q):
            p[k + i] -= f * b
        p.pop()
    return normalize(quot), normalize(p)


def q_gcd(p, q) -> tuple:
    """Monic gcd over Q[t] (monic, or () when both arguments vanish)."""
    a, b = normalize(to_q(p)), normalize(to_q(q))
    while b:
        a, b = b, q_divmod(a, b)[1]
    if not a:
        return ()
    return tuple(c / a[-1] for c in a)


def gcd_z(p, q) -> tuple:
    """Gcd over Z[t], normalized primitive with positive leading coefficient
    times the integer content gcd."""
    p, q = normalize(p), normalize(q)
    if not p:
        return primitive_sign(q)
    if not q:
        return primitive_sign(p)
    c = int_gcd(content(p), content(q))
    g = q_gcd(primitive_part(p), primitive_part(q))
    # g is monic over Q; scale to a primitive integer polynomial.
    den = 1
    for coef in g:
        den = den * coef.denominator // int_gcd(den, coef.denominator)
    gz = tuple(int(coef * den) for coef in g)
    gz = primitive_part(gz)
    return scale(gz, c)


def primitive_sign(p) -> tuple:
    """p with the sign flipped if needed so the leading coefficient is positive."""
    if not p:
        return ()
    return p if p[-1] > 0 else neg(p)


def exact_div_z(p, q) -> tuple:
    """Exact division over Z[t]; raises if q does not divide p."""
    quot, rem = q_divmod(p, q)
    if rem:
        raise PreconditionError(f"{q} does not divide {p} in Z[t]")
    out = []
    for c in quot:
        if c.denominator != 1:
            raise PreconditionError(f"{q} does not divide {p} in Z[t]")
        out.append(int(c))
    return normalize(out)


def derivative(p) -> tuple:
    return normalize([i * c for i, c in enumerate(p)][1:])


def squarefree_part_z(p) -> tuple:
    """Product of the distinct irreducible factors, primitive, positive lead.

    Constants (including zero) return ().
    """
    p = normalize(p)
    if degree(p) < 1:
        return ()
    g = gcd_z(p, derivative(p))
    if degree(g) < 1:
        return primitive_part(p)
    quot, rem = q_divmod(p, g)
    assert not rem
    den = 1
    for coef in quot:
        den = den * coef.denominator // int_gcd(den, coef.denominator)
    qz = tuple(int(c * den) for c in quot)
    return primitive_part(qz)


def strip_t_power(p) -> tuple:
    """Divide out the largest power of t (drop leading zero coefficients)."""
    p = normalize(p)
    k = 0
    while k < len(p) and p[k] == 0:
        k += 1
    return tuple(p[k:])


def _divisors(n: int):
    n = abs(n)
    out = []
    d = 1
    while d * d <= n:
        if n % d == 0:
            out.append(d)
            if d != n // d:
                out.append(n // d)
        d += 1
    return sorted(out)


def rational_roots(p) -> list:
    """All rational roots (without multiplicity), by the rational root test."""
    p = strip_t_power(normalize(p))
    if not p:
        return []
    if len(p) == 1:
        return []
    roots = set()
    for num in _divisors(p[0]):
        for den in _divisors(p[-1]):
            for s in (1, -1):
                cand = Fraction(s * num, den)
                if eval_at(to_q(p), cand) == 0:
                    roots.add(cand)
    return sorted(roots)


def is_irreducible_z(p) -> bool:
    """Irreducibility over Q of a primitive integer polynomial, degree <= 4.

    Degree 1 is always irreducible; degrees 2 and 3 reduce to the rational
    root test; degree 4 additionally searches for a product of two integer
    quadratics (coefficient bounds via a crude Mignotte-style estimate).
    """
    p = normalize(p)
    d = degree(p)
    if d < 1 or d > 4:
        raise PreconditionError(
            f"irreducibility test supports degrees 1..4, got degree {d}"
        )
    if d == 1:
        return True
    if rational_roots(p):
        return False
    if d <= 3:
        return True
    # Degree 4 and no rational root: the only remaining factorization shape
    # is quadratic * quadratic with integer coefficients (Gauss's lemma).
    a4, a3, a2, a1, a0 = p[4], p[3], p[2], p[1], p[0]
    norm = sum(c * c for c in p)
    bound = 4 * int(norm**0.5 + 1) + abs(a3) + abs(a2)
    for a in _divisors(a4):
        for sa in (1, -1):
            aa = sa * a
            if a4 % aa != 0:
                continue
            dd = a4 // aa
            for c in _divisors(a0):
                for sc in (1, -1):
                    cc = sc * c
                    if a0 % cc != 0:
                        continue
                    ff = a0 // cc
                    # (aa x^2 + b x + cc)(dd x^2 + e x + ff)
                    for b in range(-bound, bound + 1):
                        # From the x^3 coefficient: aa*e + b*dd = a3.
                        rem_num = a3 - b * dd
                        if aa == 0:
                            continue
                        if rem_num % aa != 0:
                            continue
                        e = rem_num // aa
                        if (
                            aa * ff + b * e + cc * dd == a2
                            and b * ff + cc * e == a1
                        ):
                            return False
    return True


def poly_str(p, var: str = "t") -> str:
    """Readable form, highest degree first."""
    p = normalize(p)
    if not p:
        return "0"
    parts = []
    for k in range(len(p) - 1, -1, -1):
        c = p[k]
        if c == 0:
            continue
        if k == 0:
            body = str(abs(c))
        elif k == 1:
            body = f"{var}" if abs(c) == 1 else f"{abs(c)}*{var}"
        else:
            body = f"{var}^{k}" if abs(c) == 1 else f"{abs(c)}*{var}^{k}"
        if not parts:
            parts.append(body if c > 0 else f"-{body}")
        else:
            parts.append(f"+ {body}" if c > 0 else f"- {body}")
    return " ".join(parts)
