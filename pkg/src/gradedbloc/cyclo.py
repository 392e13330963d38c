"""Exact arithmetic in cyclotomic fields Q(zeta_N).

An element is stored as the residue of a rational polynomial in ``zeta_N``
modulo the N-th cyclotomic polynomial, so every nonzero value is invertible.
Values of different orders are compared and combined by lifting both into
Q(zeta_L) with L the lcm of the orders.
"""

from __future__ import annotations

from fractions import Fraction
from functools import lru_cache
from math import gcd

__all__ = [
    "CycloNum",
    "cyclotomic_poly",
    "root_of_unity",
    "lift",
    "totient",
]


def _lcm(a: int, b: int) -> int:
    return a // gcd(a, b) * b


def totient(n: int) -> int:
    result, m, p = n, n, 2
    while p * p <= m:
        if m % p == 0:
            while m % p == 0:
                m //= p
            result -= result // p
        p += 1
    if m > 1:
        result -= result // m
    return result


def _divisors(n: int) -> list[int]:
    return [d for d in range(1, n + 1) if n % d == 0]


def _poly_divexact_int(num: list[int], den: list[int]) -> list[int]:
    """Exact division of integer polynomials (low degree first), den monic."""
    num = list(num)
    dq = len(den) - 1
    out = [0] * (len(num) - dq)
    for i in range(len(out) - 1, -1, -1):
        c = num[i + dq]
        out[i] = c
        if c:
            for j, d in enumerate(den):
                num[i + j] -= c * d
    if any(num[:dq]):
        raise ArithmeticError("inexact polynomial division")
    return out


@lru_cache(maxsize=None)
def cyclotomic_poly(n: int) -> tuple[int, ...]:
    """Coefficients of the n-th cyclotomic polynomial, constant term first.

    >>> cyclotomic_poly(6)
    (1, -1, 1)
    """
    if n < 1:
        raise ValueError("cyclotomic polynomial needs N >= 1")
    poly = [-1] + [0] * (n - 1) + [1]
    for d in _divisors(n)[:-1]:
        poly = _poly_divexact_int(poly, list(cyclotomic_poly(d)))
    return tuple(poly)


@lru_cache(maxsize=None)
def _power_table(n: int) -> tuple[tuple[Fraction, ...], ...]:
    """Reductions of x^j mod Phi_n for 0 <= j < 2*deg - 1."""
    phi = cyclotomic_poly(n)
    deg = len(phi) - 1
    rows = []
    cur = [Fraction(0)] * deg
    cur[0] = Fraction(1)
    for _ in range(max(2 * deg - 1, 1)):
        rows.append(tuple(cur))
        # multiply by x and fold the overflow using x^deg = -sum(phi[:deg] x^i)
        top = cur[-1]
        cur = [Fraction(0)] + cur[:-1]
        if top:
            for i in range(deg):
                cur[i] -= top * phi[i]
    return tuple(rows)


def _reduce(poly: list[Fraction], n: int) -> tuple[Fraction, ...]:
    phi = cyclotomic_poly(n)
    deg = len(phi) - 1
    poly = list(poly)
    for i in range(len(poly) - 1, deg - 1, -1):
        c = poly[i]
        if c:
            poly[i] = Fraction(0)
            for j in range(deg):
                if phi[j]:
                    poly[i - deg + j] -= c * phi[j]
    poly = poly[:deg] + [Fraction(0)] * (deg - len(poly))
    return tuple(poly)


def _poly_divmod(a: list[Fraction], b: list[Fraction]):
    a = list(a)
    while a and a[-1] == 0:
        a.pop()
    db = len(b) - 1
    lead = b[-1]
    if len(a) - 1 < db:
        return [Fraction(0)], a or [Fraction(0)]
    q = [Fraction(0)] * (len(a) - db)
    for i in range(len(q) - 1, -1, -1):
        c = a[i + db] / lead
        q[i] = c
        if c:
            for j, bj in enumerate(b):
                a[i + j] -= c * bj
    r = a[:db]
    while r and r[-1] == 0:
        r.pop()
    return q, r or [Fraction(0)]


def _trim(p):
    p = list(p)
    while len(p) > 1 and p[-1] == 0:
        p.pop()
    return p


def _poly_mul(a, b):
    out = [Fraction(0)] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                if y:
                    out[i + j] += x * y
    return out


def _poly_sub(a, b):
    m = max(len(a), len(b))
    a = list(a) + [Fraction(0)] * (m - len(a))
    b = list(b) + [Fraction(0)] * (m - len(b))
    return _trim([x - y for x, y in zip(a, b)])


class CycloNum:
    """Element of Q(zeta_order) in the power basis 1, zeta, ..., zeta^(phi-1).

    Instances are immutable.  Elements whose only nonzero coefficient is the
    constant term are normalised to order 1.
    """

    __slots__ = ("order", "coeffs")

    def __init__(self, order: int, coeffs):
        if order < 1:
            raise ValueError("order must be positive")
        coeffs = tuple(Fraction(c) for c in coeffs)
        if len(coeffs) != totient(order):
            coeffs = _reduce(list(coeffs), order)
        if order > 1 and not any(coeffs[1:]):
            order, coeffs = 1, (coeffs[0],)
        object.__setattr__(self, "order", order)
        object.__setattr__(self, "coeffs", coeffs)

    def __setattr__(self, name, value):
        raise AttributeError("CycloNum is immutable")

    @classmethod
    def _raw(cls, order, coeffs):
        obj = object.__new__(cls)
        if order > 1 and not any(coeffs[1:]):
            order, coeffs = 1, (coeffs[0],)
        object.__setattr__(obj, "order", order)
        object.__setattr__(obj, "coeffs", coeffs)
        return obj

    @classmethod
    def rational(cls, q) -> "CycloNum":
        return cls._raw(1, (Fraction(q),))

    @classmethod
    def coerce(cls, x) -> "CycloNum":
        if isinstance(x, CycloNum):
            return x
        if isinstance(x, (int, Fraction)):
            return cls.rational(x)
        raise TypeError(f"cannot coerce {type(x).__name__} to CycloNum")

    # -- structure -------------------------------------------------------
    def is_rational(self) -> bool:
        return self.order == 1

    def lift(self, m: int) -> "CycloNum":
        if m % self.order:
            raise ValueError(f"cannot lift order {self.order} into order {m}")
        if m == self.order:
            return self
        step = m // self.order
        poly = [Fraction(0)] * ((len(self.coeffs) - 1) * step + 1)
        for j, c in enumerate(self.coeffs):
            poly[j * step] = c
        out = object.__new__(CycloNum)
        object.__setattr__(out, "order", m)
        object.__setattr__(out, "coeffs", _reduce(poly, m))
        return out

    def _aligned(self, other: "CycloNum"):
        if self.order == other.order:
            return self.order, self.coeffs, other.coeffs
        m = _lcm(self.order, other.order)
        return m, self.lift(m).coeffs, other.lift(m).coeffs

    # -- arithmetic ------------------------------------------------------
    def __add__(self, other):
        other = CycloNum.coerce(other)
        if self.order == 1 and other.order == 1:
            return CycloNum._raw(1, (self.coeffs[0] + other.coeffs[0],))
        if other.order == 1:
            return CycloNum._raw(self.order, (self.coeffs[0] + other.coeffs[0],) + self.coeffs[1:])
        if self.order == 1:
            return other + self
        m, a, b = self._aligned(other)
        return CycloNum._raw(m, tuple(x + y for x, y in zip(a, b)))

    __radd__ = __add__

    def __neg__(self):
        return CycloNum._raw(self.order, tuple(-c for c in self.coeffs))

    def __sub__(self, other):
        return self + (-CycloNum.coerce(other))

    def __rsub__(self, other):
        return CycloNum.coerce(other) + (-self)

    def __mul__(self, other):
        other = CycloNum.coerce(other)
        if other.order == 1:
            c = other.coeffs[0]
            if c == 1:
                return self
            return CycloNum._raw(self.order, tuple(x * c for x in self.coeffs))
        if self.order == 1:
            return other * self
        m, a, b = self._aligned(other)
        table = _power_table(m)
        deg = len(a)
        out = [Fraction(0)] * deg
        for i, x in enumerate(a):
            if not x:
                continue
            for j, y in enumerate(b):
                if not y:
                    continue
                xy = x * y
                for t, r in enumerate(table[i + j]):
                    if r:
                        out[t] += xy * r
        return CycloNum._raw(m, tuple(out))

    __rmul__ = __mul__

    def inverse(self) -> "CycloNum":
        if not self:
            raise ZeroDivisionError("inverse of zero in cyclotomic field")
        if self.order == 1:
            return CycloNum._raw(1, (1 / self.coeffs[0],))
        n = self.order
        phi = [Fraction(c) for c in cyclotomic_poly(n)]
        # extended Euclid: find s with s*a = 1 mod phi
        r0, r1 = phi, _trim(self.coeffs)
        s0, s1 = [Fraction(0)], [Fraction(1)]
        while len(r1) > 1 or r1[0] != 0:
            q, r = _poly_divmod(r0, r1)
            r0, r1 = r1, _trim(r)
            s0, s1 = s1, _poly_sub(s0, _poly_mul(q, s1))
        # r0 is a nonzero constant
        c = r0[0]
        return CycloNum(n, [x / c for x in s0])

    def __truediv__(self, other):
        return self * CycloNum.coerce(other).inverse()

    def __rtruediv__(self, other):
        return CycloNum.coerce(other) * self.inverse()

    def __pow__(self, k: int):
        if k < 0:
            return self.inverse() ** (-k)
        acc, base = CycloNum._raw(1, (Fraction(1),)), self
        while k:
            if k & 1:
                acc = acc * base
            base = base * base
            k >>= 1
        return acc

    # -- comparison ------------------------------------------------------
    def __bool__(self):
        return any(self.coeffs)

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.order == 1 and self.coeffs[0] == other
        if not isinstance(other, CycloNum):
            return NotImplemented
        if self.order == 1 and other.order == 1:
            return self.coeffs[0] == other.coeffs[0]
        _, a, b = self._aligned(other)
        return a == b

    def __hash__(self):
        # the same irrational value may live at several orders
        if self.order == 1:
            return hash(self.coeffs[0])
        return hash("cyclo")

    def __repr__(self):
        if self.order == 1:
            return f"CycloNum({self.coeffs[0]})"
        terms = [f"{c}*z{self.order}^{j}" for j, c in enumerate(self.coeffs) if c]
        return "CycloNum(" + " + ".join(terms) + ")"

    # -- serialization ---------------------------------------------------
    def to_json(self) -> dict:
        return {
            "order": self.order,
            "coeffs": [[c.numerator, c.denominator] for c in self.coeffs],
        }

    @classmethod
    def from_json(cls, data: dict) -> "CycloNum":
        return cls(int(data["order"]), [Fraction(int(p), int(q)) for p, q in data["coeffs"]])


ZERO = CycloNum.rational(0)
ONE = CycloNum.rational(1)


def root_of_unity(q) -> CycloNum:
    """exp(2*pi*i*q) for rational q, as an element of Q(zeta_den(q))."""
    q = Fraction(q) % 1
    n = q.denominator
    if n == 1:
        return ONE
    k = q.numerator
    deg = totient(n)
    if k < deg:
        coeffs = [Fraction(0)] * deg
        coeffs[k] = Fraction(1)
        return CycloNum._raw(n, tuple(coeffs))
    table = _power_table(n)
    if k < len(table):
        return CycloNum._raw(n, table[k])
    return CycloNum._raw(n, _reduce([Fraction(0)] * k + [Fraction(1)], n))


def lift(a: CycloNum, m: int) -> CycloNum:
    return a.lift(m)
