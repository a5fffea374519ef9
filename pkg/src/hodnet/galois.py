"""Polynomial arithmetic over the prime field F_b.

Polynomials are identified with non-negative integers through their base-b
digits: ``k = k_0 + k_1 b + ... + k_{a-1} b^{a-1}`` stands for
``k_0 + k_1 x + ... + k_{a-1} x^{a-1}``.  The private helpers work directly
on these integer encodings (carry-less bit operations when ``b == 2``,
coefficient lists otherwise); :class:`GFPoly` is the public value type.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass
from functools import cached_property

__all__ = [
    "ZERO_DEGREE",
    "GFPoly",
    "poly_add",
    "poly_mulmod",
    "is_irreducible",
    "smallest_irreducible",
    "primitive_element",
    "laurent_digits",
    "laurent_value",
    "parse_poly",
    "is_prime",
    "prime_factors",
]

#: Degree of the zero polynomial.
ZERO_DEGREE = -math.inf


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    f = 3
    while f * f <= n:
        if n % f == 0:
            return False
        f += 2
    return True


def prime_factors(n: int) -> list[int]:
    """Distinct prime factors of ``n`` by trial division, ascending."""
    out = []
    f = 2
    while f * f <= n:
        if n % f == 0:
            out.append(f)
            while n % f == 0:
                n //= f
        f += 1 if f == 2 else 2
    if n > 1:
        out.append(n)
    return out


# ---------------------------------------------------------------------------
# integer-encoded kernels


def to_coeffs(v: int, b: int) -> list[int]:
    out = []
    while v:
        v, r = divmod(v, b)
        out.append(r)
    return out


def from_coeffs(c, b: int) -> int:
    v = 0
    for a in reversed(c):
        v = v * b + a
    return v


def _trim(c: list[int]) -> list[int]:
    while c and c[-1] == 0:
        c.pop()
    return c


def degree(v: int, b: int) -> int:
    """Degree of the encoded polynomial; -1 for zero (internal use only)."""
    if v == 0:
        return -1
    if b == 2:
        return v.bit_length() - 1
    d = -1
    while v:
        v //= b
        d += 1
    return d


def add(u: int, v: int, b: int) -> int:
    if b == 2:
        return u ^ v
    cu, cv = to_coeffs(u, b), to_coeffs(v, b)
    if len(cu) < len(cv):
        cu, cv = cv, cu
    for i, a in enumerate(cv):
        cu[i] = (cu[i] + a) % b
    return from_coeffs(_trim(cu), b)


def sub(u: int, v: int, b: int) -> int:
    if b == 2:
        return u ^ v
    cu, cv = to_coeffs(u, b), to_coeffs(v, b)
    n = max(len(cu), len(cv))
    cu += [0] * (n - len(cu))
    for i, a in enumerate(cv):
        cu[i] = (cu[i] - a) % b
    return from_coeffs(_trim(cu), b)


def mul(u: int, v: int, b: int) -> int:
    if b == 2:
        if u < v:
            u, v = v, u
        c = 0
        while v:
            if v & 1:
                c ^= u
            u <<= 1
            v >>= 1
        return c
    cu, cv = to_coeffs(u, b), to_coeffs(v, b)
    if not cu or not cv:
        return 0
    out = [0] * (len(cu) + len(cv) - 1)
    for i, a in enumerate(cu):
        if a:
            for j, c in enumerate(cv):
                out[i + j] += a * c
    return from_coeffs(_trim([x % b for x in out]), b)


def divmod_(u: int, v: int, b: int) -> tuple[int, int]:
    """Polynomial quotient and remainder of ``u`` by nonzero ``v``."""
    if v == 0:
        raise ZeroDivisionError("division by the zero polynomial")
    if b == 2:
        dv = v.bit_length() - 1
        q = 0
        du = u.bit_length() - 1
        while du >= dv:
            shift = du - dv
            q |= 1 << shift
            u ^= v << shift
            du = u.bit_length() - 1
        return q, u
    cu, cv = to_coeffs(u, b), to_coeffs(v, b)
    dv = len(cv) - 1
    inv = pow(cv[-1], b - 2, b)
    if len(cu) <= dv:
        return 0, u
    q = [0] * (len(cu) - dv)
    for i in range(len(cu) - 1, dv - 1, -1):
        t = cu[i] * inv % b
        if t:
            q[i - dv] = t
            for j, c in enumerate(cv):
                cu[i - dv + j] = (cu[i - dv + j] - t * c) % b
    return from_coeffs(_trim(q), b), from_coeffs(_trim(cu[:dv]), b)


def mod(u: int, v: int, b: int) -> int:
    return divmod_(u, v, b)[1]


def mulmod(u: int, v: int, p: int, b: int) -> int:
    return mod(mul(u, v, b), p, b)


def powmod(u: int, e: int, p: int, b: int) -> int:
    result = mod(1, p, b)
    u = mod(u, p, b)
    while e:
        if e & 1:
            result = mulmod(result, u, p, b)
        u = mulmod(u, u, p, b)
        e >>= 1
    return result


def gcd(u: int, v: int, b: int) -> int:
    while v:
        u, v = v, mod(u, v, b)
    return u


def _monic(v: int, b: int) -> int:
    if v == 0 or b == 2:
        return v
    c = to_coeffs(v, b)
    inv = pow(c[-1], b - 2, b)
    return from_coeffs([a * inv % b for a in c], b)


def _x_pow_b_pow(k: int, p: int, b: int) -> int:
    """x^(b^k) mod p by k-fold Frobenius powering."""
    r = mod(b, p, b)  # the integer b encodes the polynomial x
    for _ in range(k):
        r = powmod(r, b, p, b)
    return r


def _is_irreducible_int(p: int, b: int) -> bool:
    m = degree(p, b)
    if m < 1:
        raise ValueError("irreducibility is undefined for constant polynomials")
    if m == 1:
        return True
    x = b
    if _x_pow_b_pow(m, p, b) != mod(x, p, b):
        return False
    for ell in prime_factors(m):
        h = sub(_x_pow_b_pow(m // ell, p, b), x, b)
        if degree(gcd(p, h, b), b) > 0:
            return False
    return True


def laurent_value(q: int, p: int, m: int, b: int) -> int:
    """First ``m`` Laurent digits of q/p packed as an m-digit fixed-point integer.

    The digit of x^{-l} lands at weight b^{m-l}, so the returned integer ``y``
    represents ``v_m(q/p) = y * b^{-m}``.  Only ``q mod p`` matters.
    """
    if p == 0:
        raise ZeroDivisionError("zero modulus")
    r = mod(q, p, b)
    if b == 2:
        return divmod_(r << m, p, 2)[0]
    return divmod_(r * b**m, p, b)[0]


# ---------------------------------------------------------------------------
# public value type


@dataclass(frozen=True)
class GFPoly:
    """Polynomial over F_b; ``coeffs[i]`` is the coefficient of x^i."""

    base: int
    coeffs: tuple[int, ...] = ()

    def __post_init__(self):
        if not is_prime(self.base):
            raise ValueError(f"base must be prime, got {self.base}")
        c = tuple(int(a) for a in self.coeffs)
        if any(a < 0 or a >= self.base for a in c):
            raise ValueError("coefficients must lie in [0, base)")
        while c and c[-1] == 0:
            c = c[:-1]
        object.__setattr__(self, "coeffs", c)

    @classmethod
    def from_int(cls, base: int, value: int) -> "GFPoly":
        if value < 0:
            raise ValueError("integer encoding must be non-negative")
        return cls(base, tuple(to_coeffs(value, base)))

    @classmethod
    def parse(cls, text: str | int, base: int) -> "GFPoly":
        return parse_poly(text, base)

    @cached_property
    def value(self) -> int:
        return from_coeffs(self.coeffs, self.base)

    def __int__(self) -> int:
        return self.value

    @property
    def degree(self):
        return len(self.coeffs) - 1 if self.coeffs else ZERO_DEGREE

    def is_zero(self) -> bool:
        return not self.coeffs

    def __str__(self) -> str:
        if not self.coeffs:
            return "0"
        terms = []
        for i in range(len(self.coeffs) - 1, -1, -1):
            a = self.coeffs[i]
            if not a:
                continue
            mono = "" if i == 0 else ("x" if i == 1 else f"x^{i}")
            if not mono:
                terms.append(str(a))
            else:
                terms.append(mono if a == 1 else f"{a}{mono}")
        return "+".join(terms)

    def _check(self, other: "GFPoly"):
        if self.base != other.base:
            raise ValueError(f"base mismatch: {self.base} vs {other.base}")


_TERM = re.compile(r"^(\d*)\*?(x(?:\^(\d+))?)?$")


def parse_poly(text: str | int, base: int) -> GFPoly:
    """Parse either an integer encoding (``"7"``) or a human form (``"x^2+x+1"``)."""
    if isinstance(text, int):
        return GFPoly.from_int(base, text)
    s = text.replace(" ", "")
    if not s:
        raise ValueError("empty polynomial")
    if s.isdigit():
        return GFPoly.from_int(base, int(s))
    coeffs: dict[int, int] = {}
    for tok in s.split("+"):
        mt = _TERM.match(tok)
        if not tok or mt is None or (not mt.group(1) and not mt.group(2)):
            raise ValueError(f"cannot parse polynomial term {tok!r}")
        a = int(mt.group(1)) if mt.group(1) else 1
        if mt.group(2) is None:
            e = 0
        else:
            e = int(mt.group(3)) if mt.group(3) else 1
        coeffs[e] = (coeffs.get(e, 0) + a) % base
    top = max(coeffs)
    return GFPoly(base, tuple(coeffs.get(i, 0) for i in range(top + 1)))


def poly_add(a: GFPoly, b: GFPoly) -> GFPoly:
    a._check(b)
    return GFPoly.from_int(a.base, add(a.value, b.value, a.base))


def poly_mulmod(a: GFPoly, b: GFPoly, p: GFPoly) -> GFPoly:
    a._check(b)
    a._check(p)
    if p.is_zero():
        raise ZeroDivisionError("zero modulus")
    return GFPoly.from_int(a.base, mulmod(a.value, b.value, p.value, a.base))


def is_irreducible(p: GFPoly) -> bool:
    """Deterministic test: x^(b^m) = x mod p and no common factor at maximal proper divisors."""
    if p.is_zero() or p.degree < 1:
        raise ValueError("irreducibility needs a polynomial of degree >= 1")
    return _is_irreducible_int(_monic(p.value, p.base), p.base)


def smallest_irreducible(b: int, m: int) -> GFPoly:
    """The monic irreducible polynomial of degree ``m`` with the smallest integer encoding."""
    if m < 1:
        raise ValueError("degree must be >= 1")
    if not is_prime(b):
        raise ValueError(f"base must be prime, got {b}")
    for v in range(b**m, 2 * b**m):
        if _is_irreducible_int(v, b):
            return GFPoly.from_int(b, v)
    raise AssertionError("unreachable: irreducibles exist in every degree")


def _primitive_int(p: int, b: int) -> int:
    m = degree(p, b)
    order = b**m - 1
    factors = prime_factors(order) if order > 1 else []
    for g in range(1, b**m):
        if all(powmod(g, order // ell, p, b) != 1 for ell in factors):
            if order == 1 or powmod(g, order, p, b) == 1:
                return g
    raise ValueError("no primitive element: modulus is not irreducible")


def primitive_element(p: GFPoly) -> GFPoly:
    """Smallest (by integer encoding) generator of the multiplicative group mod ``p``."""
    if p.is_zero() or p.degree < 1:
        raise ValueError("modulus must have degree >= 1")
    if not is_irreducible(p):
        raise ValueError("modulus is reducible; its unit group is not cyclic of order b^m-1")
    return GFPoly.from_int(p.base, _primitive_int(p.value, p.base))


def laurent_digits(q: GFPoly, p: GFPoly, m: int) -> tuple[int, ...]:
    """Digits (t_1, ..., t_m) of the Laurent expansion of q/p at x^{-1}, ..., x^{-m}."""
    q._check(p)
    if p.is_zero():
        raise ZeroDivisionError("zero modulus")
    b = p.base
    y = laurent_value(q.value, p.value, m, b)
    return tuple((y // b ** (m - l)) % b for l in range(1, m + 1))
