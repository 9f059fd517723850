"""Exact arithmetic in cyclotomic fields Q(zeta_N).

Elements are stored as rational coefficient tuples in the power basis
1, z, ..., z^(phi(N)-1), always reduced modulo the N-th cyclotomic
polynomial, so ``==`` is exact equality in the field.
"""
from __future__ import annotations

from fractions import Fraction
from functools import lru_cache


def _poly_divmod(num, den):
    num = list(num)
    q = [Fraction(0)] * max(len(num) - len(den) + 1, 1)
    lead = den[-1]
    while len(num) >= len(den) and any(num):
        shift = len(num) - len(den)
        c = Fraction(num[-1]) / lead
        q[shift] = c
        for i, d in enumerate(den):
            num[shift + i] -= c * d
        num.pop()
        while num and num[-1] == 0:
            num.pop()
    return q, num


def _trim(p):
    p = list(p)
    while p and p[-1] == 0:
        p.pop()
    return p


@lru_cache(maxsize=None)
def cyclotomic_polynomial(n: int) -> tuple[int, ...]:
    """Coefficients (low degree first) of the n-th cyclotomic polynomial."""
    if n < 1:
        raise ValueError("n must be positive")
    num = [Fraction(-1)] + [Fraction(0)] * (n - 1) + [Fraction(1)]
    for d in range(1, n):
        if n % d == 0:
            num, rem = _poly_divmod(num, [Fraction(c) for c in cyclotomic_polynomial(d)])
            assert not _trim(rem)
    return tuple(int(c) for c in _trim(num))


def _reduce(coeffs, n):
    phi = cyclotomic_polynomial(n)
    deg = len(phi) - 1
    c = [Fraction(x) for x in coeffs]
    # phi is monic
    for top in range(len(c) - 1, deg - 1, -1):
        a = c[top]
        if a:
            for i, p in enumerate(phi):
                c[top - deg + i] -= a * p
    c = c[:deg] + [Fraction(0)] * max(0, deg - len(c))
    return tuple(c)


class CycloElement:
    """An element of Q(zeta_N)."""

    __slots__ = ("n", "coeffs")

    def __init__(self, n: int, coeffs=()):
        self.n = n
        self.coeffs = _reduce(coeffs, n)

    @classmethod
    def zeta(cls, n: int, k: int = 1) -> "CycloElement":
        k %= n
        c = [0] * (k + 1)
        c[k] = 1
        return cls(n, c)

    @classmethod
    def from_int(cls, n: int, a) -> "CycloElement":
        return cls(n, [a])

    @property
    def degree(self) -> int:
        return len(cyclotomic_polynomial(self.n)) - 1

    def _coerce(self, other):
        if isinstance(other, CycloElement):
            if other.n != self.n:
                raise ValueError("elements of different cyclotomic fields")
            return other
        if isinstance(other, (int, Fraction)):
            return CycloElement(self.n, [other])
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return CycloElement(self.n, [a + b for a, b in zip(self.coeffs, other.coeffs)])

    __radd__ = __add__

    def __neg__(self):
        return CycloElement(self.n, [-a for a in self.coeffs])

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        prod = [Fraction(0)] * (2 * self.degree)
        for i, a in enumerate(self.coeffs):
            if a:
                for j, b in enumerate(other.coeffs):
                    if b:
                        prod[i + j] += a * b
        return CycloElement(self.n, prod)

    __rmul__ = __mul__

    def is_zero(self) -> bool:
        return not any(self.coeffs)

    def inverse(self) -> "CycloElement":
        if self.is_zero():
            raise ZeroDivisionError("inverse of zero in cyclotomic field")
        # extended Euclid in Q[x]: find s with s*self = 1 mod phi
        phi = [Fraction(c) for c in cyclotomic_polynomial(self.n)]
        r0, r1 = phi, _trim(self.coeffs)
        s0, s1 = [], [Fraction(1)]
        while len(r1) > 1:
            q, r = _poly_divmod(r0, r1)
            r = _trim(r)
            s = _poly_sub(s0, _poly_mul(q, s1))
            r0, r1 = r1, r
            s0, s1 = s1, s
        c = r1[0]
        return CycloElement(self.n, [x / c for x in s1])

    def __truediv__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self * other.inverse()

    def __rtruediv__(self, other):
        return self.inverse() * other

    def __pow__(self, k: int):
        if k < 0:
            return self.inverse() ** (-k)
        result = CycloElement(self.n, [1])
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def __eq__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return False
        return self.coeffs == other.coeffs

    def __hash__(self):
        return hash((self.n, self.coeffs))

    def galois(self, k: int) -> "CycloElement":
        """Apply the automorphism zeta -> zeta^k (k coprime to N)."""
        out = CycloElement(self.n)
        for i, a in enumerate(self.coeffs):
            if a:
                out = out + CycloElement.zeta(self.n, i * k) * a
        return out

    def norm(self) -> Fraction:
        """Field norm down to Q."""
        prod = CycloElement(self.n, [1])
        for k in range(1, self.n):
            if _gcd(k, self.n) == 1:
                prod = prod * self.galois(k)
        assert all(c == 0 for c in prod.coeffs[1:])
        return prod.coeffs[0]

    def to_list(self) -> list:
        return [int(c) if c.denominator == 1 else str(c) for c in self.coeffs]

    @classmethod
    def from_list(cls, n: int, data) -> "CycloElement":
        return cls(n, [Fraction(x) for x in data])

    def __repr__(self):
        terms = []
        for i, a in enumerate(self.coeffs):
            if a:
                terms.append(f"{a}" if i == 0 else f"{a}*z^{i}")
        return f"Cyclo{self.n}(" + (" + ".join(terms) or "0") + ")"


def _gcd(a, b):
    while b:
        a, b = b, a % b
    return abs(a)


def _poly_mul(a, b):
    if not a or not b:
        return []
    out = [Fraction(0)] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        for j, y in enumerate(b):
            out[i + j] += x * y
    return out


def _poly_sub(a, b):
    n = max(len(a), len(b))
    a = list(a) + [Fraction(0)] * (n - len(a))
    b = list(b) + [Fraction(0)] * (n - len(b))
    return _trim([x - y for x, y in zip(a, b)])


def zeta8_expr(a0, a1, a2, a3, scale=1) -> CycloElement:
    """The element scale*(a0 + a1 z + a2 z^2 + a3 z^3) of Q(zeta_8)."""
    return CycloElement(8, [Fraction(a0) * scale, Fraction(a1) * scale,
                            Fraction(a2) * scale, Fraction(a3) * scale])


def verify_unit_decomposition(value: CycloElement, torsion_exponent: int,
                              free_exponents, generator_values) -> bool:
    """True iff value == zeta_N^torsion * prod(g_i^e_i) exactly."""
    if len(free_exponents) != len(generator_values):
        raise ValueError("exponent/generator count mismatch")
    rhs = CycloElement.zeta(value.n, torsion_exponent)
    for e, g in zip(free_exponents, generator_values):
        if e:
            rhs = rhs * g ** e
    return rhs == value
