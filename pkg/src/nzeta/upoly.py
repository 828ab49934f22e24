"""Dense univariate polynomials and reduced rational functions over a field.

Coefficients may be Fractions or any exact field element supporting the usual
operators (the cyclotomic numbers of :mod:`nzeta.cyclotomic` in particular).
"""

from __future__ import annotations

from fractions import Fraction
from typing import Callable, Iterable, Sequence


def _is_zero(c) -> bool:
    return c == 0


def _div(a, b):
    # keep integer inputs exact
    if isinstance(a, int) and isinstance(b, int):
        return Fraction(a, b)
    return a / b


class UPoly:
    """Polynomial sum c_i t^i, stored low degree first without trailing zeros."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs: Iterable = ()):
        cs = list(coeffs)
        while cs and _is_zero(cs[-1]):
            cs.pop()
        self.coeffs = tuple(cs)

    @classmethod
    def monomial(cls, degree: int, c=1) -> UPoly:
        return cls([0] * degree + [c])

    @classmethod
    def constant(cls, c) -> UPoly:
        return cls([c])

    def is_zero(self) -> bool:
        return not self.coeffs

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def lead(self):
        return self.coeffs[-1]

    def __getitem__(self, i: int):
        return self.coeffs[i] if 0 <= i < len(self.coeffs) else 0

    def __add__(self, other) -> UPoly:
        other = _lift(other)
        n = max(len(self.coeffs), len(other.coeffs))
        return UPoly(self[i] + other[i] for i in range(n))

    __radd__ = __add__

    def __neg__(self) -> UPoly:
        return UPoly(-c for c in self.coeffs)

    def __sub__(self, other) -> UPoly:
        return self + (-_lift(other))

    def __rsub__(self, other) -> UPoly:
        return _lift(other) - self

    def __mul__(self, other) -> UPoly:
        other = _lift(other)
        if self.is_zero() or other.is_zero():
            return UPoly()
        out = [0] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            if _is_zero(a):
                continue
            for j, b in enumerate(other.coeffs):
                out[i + j] = out[i + j] + a * b
        return UPoly(out)

    __rmul__ = __mul__

    def __pow__(self, k: int) -> UPoly:
        result = UPoly([1])
        for _ in range(k):
            result = result * self
        return result

    def scale(self, c) -> UPoly:
        return UPoly(c * x for x in self.coeffs)

    def shift(self, k: int) -> UPoly:
        """Multiply by t^k (k >= 0)."""
        return UPoly([0] * k + list(self.coeffs)) if self.coeffs else self

    def divmod(self, other: UPoly) -> tuple[UPoly, UPoly]:
        if other.is_zero():
            raise ZeroDivisionError("polynomial division by zero")
        rem = list(self.coeffs)
        dq = other.degree
        lead = other.lead()
        quot = [0] * max(len(rem) - dq, 0)
        while len(rem) - 1 >= dq and rem:
            k = len(rem) - 1 - dq
            c = _div(rem[-1], lead)
            quot[k] = c
            for i, b in enumerate(other.coeffs):
                rem[i + k] = rem[i + k] - c * b
            rem.pop()
            while rem and _is_zero(rem[-1]):
                rem.pop()
        return UPoly(quot), UPoly(rem)

    def __floordiv__(self, other: UPoly) -> UPoly:
        return self.divmod(other)[0]

    def __mod__(self, other: UPoly) -> UPoly:
        return self.divmod(other)[1]

    def exact_div(self, other: UPoly) -> UPoly:
        q, r = self.divmod(other)
        if not r.is_zero():
            raise ArithmeticError("inexact polynomial division")
        return q

    def monic(self) -> UPoly:
        if self.is_zero():
            return self
        lead = self.lead()
        return UPoly(_div(c, lead) for c in self.coeffs)

    def __call__(self, x):
        acc = 0
        for c in reversed(self.coeffs):
            acc = acc * x + c
        return acc

    def map(self, fn: Callable) -> UPoly:
        return UPoly(fn(c) for c in self.coeffs)

    def valuation(self) -> int:
        """Order of vanishing at t = 0."""
        for i, c in enumerate(self.coeffs):
            if not _is_zero(c):
                return i
        raise ValueError("valuation of the zero polynomial")

    def __eq__(self, other) -> bool:
        other = _lift(other)
        return self.coeffs == other.coeffs

    def __hash__(self) -> int:
        return hash(self.coeffs)

    def __repr__(self) -> str:
        return f"UPoly({[str(c) for c in self.coeffs]})"


def _lift(x) -> UPoly:
    return x if isinstance(x, UPoly) else UPoly([x])


def gcd(a: UPoly, b: UPoly) -> UPoly:
    """Monic greatest common divisor (zero only if both inputs are zero)."""
    if a.degree < b.degree:
        a, b = b, a
    if b.is_zero():
        return a.monic()
    if b.degree == 0:
        return UPoly([1])
    # monic remainders keep the rational coefficients small
    a, b = a.monic(), b.monic()
    while not b.is_zero():
        a, b = b, (a % b).monic()
    return a


def xgcd(a: UPoly, b: UPoly) -> tuple[UPoly, UPoly, UPoly]:
    """(g, u, v) with u*a + v*b = g monic."""
    r0, r1 = a, b
    s0, s1 = UPoly([1]), UPoly()
    t0, t1 = UPoly(), UPoly([1])
    while not r1.is_zero():
        q, r = r0.divmod(r1)
        r0, r1 = r1, r
        s0, s1 = s1, s0 - q * s1
        t0, t1 = t1, t0 - q * t1
    inv = _div(1, r0.lead())
    return r0.scale(inv), s0.scale(inv), t0.scale(inv)


def multiplicity(p: UPoly, factor: UPoly) -> int:
    """Largest k with factor^k dividing p (p nonzero, factor of positive degree)."""
    if p.is_zero():
        raise ValueError("multiplicity in the zero polynomial")
    k = 0
    while True:
        q, r = p.divmod(factor)
        if not r.is_zero():
            return k
        p = q
        k += 1


class RationalFunction:
    """Reduced t^shift * num / den with den(0) = 1, num(0) != 0 and gcd(num, den) = 1."""

    __slots__ = ("num", "den", "shift")

    def __init__(self, num: UPoly, den: UPoly | None = None, shift: int = 0):
        den = UPoly([1]) if den is None else den
        if den.is_zero():
            raise ZeroDivisionError("zero denominator")
        if num.is_zero():
            self.num, self.den, self.shift = UPoly(), UPoly([1]), 0
            return
        v = num.valuation()
        if v:
            num = UPoly(num.coeffs[v:])
            shift += v
        v = den.valuation()
        if v:
            den = UPoly(den.coeffs[v:])
            shift -= v
        g = gcd(num, den)
        if g.degree > 0:
            num, den = num.exact_div(g), den.exact_div(g)
        c0 = den.coeffs[0]
        if c0 != 1:
            inv = _div(1, c0)
            num, den = num.scale(inv), den.scale(inv)
        self.num, self.den, self.shift = num, den, shift

    @classmethod
    def constant(cls, c) -> RationalFunction:
        return cls(UPoly([c]))

    @classmethod
    def laurent(cls, terms: dict[int, object]) -> RationalFunction:
        """A Laurent polynomial given as exponent -> coefficient."""
        terms = {e: c for e, c in terms.items() if not _is_zero(c)}
        if not terms:
            return cls(UPoly())
        low = min(terms)
        coeffs = [0] * (max(terms) - low + 1)
        for e, c in terms.items():
            coeffs[e - low] = c
        return cls(UPoly(coeffs), None, low)

    def is_zero(self) -> bool:
        return self.num.is_zero()

    def _parts(self) -> tuple[UPoly, UPoly, int]:
        return self.num, self.den, self.shift

    def __add__(self, other) -> RationalFunction:
        other = _rf(other)
        if self.is_zero():
            return other
        if other.is_zero():
            return self
        low = min(self.shift, other.shift)
        # combine over lcm(den1, den2)
        g = gcd(self.den, other.den)
        d1 = self.den.exact_div(g)
        d2 = other.den.exact_div(g)
        a = self.num.shift(self.shift - low) * d2
        b = other.num.shift(other.shift - low) * d1
        return RationalFunction(a + b, d1 * other.den, low)

    __radd__ = __add__

    def __neg__(self) -> RationalFunction:
        return RationalFunction(-self.num, self.den, self.shift)

    def __sub__(self, other) -> RationalFunction:
        return self + (-_rf(other))

    def __rsub__(self, other) -> RationalFunction:
        return _rf(other) - self

    def __mul__(self, other) -> RationalFunction:
        other = _rf(other)
        if self.is_zero() or other.is_zero():
            return RationalFunction(UPoly())
        return RationalFunction(self.num * other.num, self.den * other.den, self.shift + other.shift)

    __rmul__ = __mul__

    def __truediv__(self, other) -> RationalFunction:
        other = _rf(other)
        if other.is_zero():
            raise ZeroDivisionError("division by the zero function")
        return RationalFunction(self.num * other.den, self.den * other.num, self.shift - other.shift)

    def __call__(self, t):
        if isinstance(t, int):
            t = Fraction(t)
        d = self.den(t)
        if d == 0:
            raise ZeroDivisionError("evaluation at a pole")
        val = self.num(t) / d
        return val * t**self.shift if self.shift >= 0 else val / t ** (-self.shift)

    def __eq__(self, other) -> bool:
        other = _rf(other)
        return (self.num, self.den, self.shift) == (other.num, other.den, other.shift)

    def __hash__(self) -> int:
        return hash((self.num, self.den, self.shift))

    def __repr__(self) -> str:
        return f"RationalFunction(t^{self.shift} * {self.num} / {self.den})"


def _rf(x) -> RationalFunction:
    return x if isinstance(x, RationalFunction) else RationalFunction.constant(x)


def from_coefficients(values: Sequence) -> UPoly:
    return UPoly(Fraction(v) if isinstance(v, int) else v for v in values)
