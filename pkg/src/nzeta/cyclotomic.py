"""Exact arithmetic in Q(zeta_M) and multiplicative characters of (Z/p^e)^x."""

from __future__ import annotations

import cmath
import math
from fractions import Fraction
from functools import lru_cache

from sympy import Symbol, cyclotomic_poly, isprime, totient

from .upoly import UPoly, xgcd

MAX_ORDER = 1000


@lru_cache(maxsize=None)
def _phi_poly(m: int) -> UPoly:
    coeffs = cyclotomic_poly(m, Symbol("x"), polys=True).all_coeffs()
    return UPoly(Fraction(int(c)) for c in reversed(coeffs))


class CycRat:
    """sum a_j zeta_M^j reduced modulo the M-th cyclotomic polynomial."""

    __slots__ = ("m", "coeffs")

    def __init__(self, m: int, coeffs=()):
        if m < 1:
            raise ValueError("order must be positive")
        poly = UPoly(Fraction(c) for c in coeffs) % _phi_poly(m)
        self.m = m
        self.coeffs = poly.coeffs

    @classmethod
    def root(cls, m: int, j: int = 1) -> CycRat:
        j %= m
        return cls(m, [0] * j + [1])

    @classmethod
    def rational(cls, c, m: int = 1) -> CycRat:
        return cls(m, [c])

    def _poly(self) -> UPoly:
        return UPoly(self.coeffs)

    def lift(self, m: int) -> CycRat:
        if m % self.m:
            raise ValueError(f"cannot embed Q(zeta_{self.m}) in Q(zeta_{m})")
        step = m // self.m
        coeffs = [Fraction(0)] * (step * max(len(self.coeffs) - 1, 0) + 1)
        for j, c in enumerate(self.coeffs):
            coeffs[j * step] = c
        return CycRat(m, coeffs)

    def _align(self, other) -> tuple[CycRat, CycRat] | None:
        if isinstance(other, (int, Fraction)):
            return self, CycRat(self.m, [other])
        if isinstance(other, CycRat):
            if other.m == self.m:
                return self, other
            m = self.m * other.m // math.gcd(self.m, other.m)
            return self.lift(m), other.lift(m)
        return None

    def __add__(self, other):
        pair = self._align(other)
        if pair is None:
            return NotImplemented
        a, b = pair
        return CycRat(a.m, (a._poly() + b._poly()).coeffs)

    __radd__ = __add__

    def __neg__(self) -> CycRat:
        return CycRat(self.m, [-c for c in self.coeffs])

    def __sub__(self, other):
        pair = self._align(other)
        if pair is None:
            return NotImplemented
        a, b = pair
        return CycRat(a.m, (a._poly() - b._poly()).coeffs)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return CycRat(self.m, [c * other for c in self.coeffs])
        pair = self._align(other)
        if pair is None:
            return NotImplemented
        a, b = pair
        return CycRat(a.m, (a._poly() * b._poly()).coeffs)

    __rmul__ = __mul__

    def inverse(self) -> CycRat:
        if self.is_zero():
            raise ZeroDivisionError("inverse of zero in a cyclotomic field")
        g, u, _ = xgcd(self._poly(), _phi_poly(self.m))
        assert g.degree == 0
        return CycRat(self.m, u.coeffs)

    def __truediv__(self, other):
        if isinstance(other, (int, Fraction)):
            if other == 0:
                raise ZeroDivisionError("division by zero")
            return CycRat(self.m, [c / other for c in self.coeffs])
        pair = self._align(other)
        if pair is None:
            return NotImplemented
        a, b = pair
        return a * b.inverse()

    def __rtruediv__(self, other):
        pair = self._align(other)
        if pair is None:
            return NotImplemented
        a, b = pair
        return b * a.inverse()

    def __pow__(self, k: int) -> CycRat:
        if k < 0:
            return self.inverse() ** (-k)
        result = CycRat(self.m, [1])
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def is_zero(self) -> bool:
        return not self.coeffs

    def is_rational(self) -> bool:
        return len(self.coeffs) <= 1

    def rational_value(self) -> Fraction:
        if not self.is_rational():
            raise ValueError("not a rational number")
        return self.coeffs[0] if self.coeffs else Fraction(0)

    def components(self) -> list[Fraction]:
        """Coordinates in the power basis 1, zeta, ..., zeta^(phi(M)-1)."""
        size = int(totient(self.m))
        return list(self.coeffs) + [Fraction(0)] * (size - len(self.coeffs))

    def __eq__(self, other) -> bool:
        pair = self._align(other)
        if pair is None:
            return NotImplemented
        a, b = pair
        return a.coeffs == b.coeffs

    def __hash__(self) -> int:
        if self.is_rational():
            return hash(self.rational_value())
        return hash((self.m, self.coeffs))

    def __complex__(self) -> complex:
        return sum(
            (float(c) * cmath.exp(2j * math.pi * j / self.m) for j, c in enumerate(self.coeffs)),
            0j,
        )

    def __str__(self) -> str:
        if self.is_rational():
            return str(self.rational_value())
        parts = []
        for j, c in enumerate(self.coeffs):
            if c == 0:
                continue
            parts.append(str(c) if j == 0 else f"{c}*z{self.m}^{j}")
        return " + ".join(parts)

    def __repr__(self) -> str:
        return f"CycRat({self.m}, {[str(c) for c in self.coeffs]})"

    def to_json(self):
        if self.is_rational():
            return str(self.rational_value())
        return {"root_order": self.m, "coefficients": [str(c) for c in self.components()]}


def to_complex(x) -> complex:
    return complex(x) if isinstance(x, CycRat) else complex(float(x))


def to_json_number(x):
    if isinstance(x, CycRat):
        return x.to_json()
    return str(Fraction(x))


# -- characters ----------------------------------------------------------------


class CharacterError(ValueError):
    pass


@lru_cache(maxsize=None)
def canonical_generator(p: int, e: int) -> int:
    """Fixed generator of (Z/p^e)^x.

    For odd p this is the least primitive root mod p that stays primitive mod
    p^2 (hence mod every p^e).  For p = 2 only e <= 2 is cyclic.
    """
    if p == 2:
        if e == 1:
            return 1
        if e == 2:
            return 3
        raise CharacterError("(Z/2^e)^x is not cyclic for e >= 3")
    mod2 = p * p
    order2 = p * (p - 1)
    for g in range(2, mod2):
        if g % p == 0:
            continue
        if _order(g, mod2, order2) == order2:
            return g
    raise AssertionError("no primitive root found")


def _order(g: int, modulus: int, group_order: int) -> int:
    from sympy import factorint

    order = group_order
    for prime in factorint(group_order):
        while order % prime == 0 and pow(g, order // prime, modulus) == 1:
            order //= prime
    return order


class Character:
    """chi(g^j) = zeta_M^(k j) for the canonical generator g of (Z/p^e)^x."""

    def __init__(self, p: int, e: int = 1, m: int = 1, k: int = 0, max_order: int = MAX_ORDER):
        if not isprime(p):
            raise CharacterError(f"{p} is not prime")
        if e < 1 or m < 1:
            raise CharacterError("conductor and order must be positive")
        if m > max_order:
            raise CharacterError(f"character order {m} exceeds the limit {max_order}")
        group = p ** (e - 1) * (p - 1)
        k %= m
        if (k * group) % m:
            raise CharacterError(f"zeta_{m}^{k} has order not dividing |(Z/{p}^{e})^x| = {group}")
        g = math.gcd(m, k)
        m, k = m // g, k // g  # primitive form: zeta_m^k with gcd(m, k) = 1
        self.p = p
        if m == 1:
            self.e, self.m, self.k = 1, 1, 0
            self.modulus = p
            self.generator = 1
            self._log = None
            return
        if group > max_order * 1000:
            raise CharacterError("unit group too large for a discrete-log table")
        self.e, self.m, self.k = e, m, k
        self.modulus = p**e
        self.generator = canonical_generator(p, e)
        log = {}
        x = 1
        for j in range(group):
            log[x] = j
            x = x * self.generator % self.modulus
        self._log = log
        if e > 1:
            # conductor must be exactly e
            if self.exponent(1 + p ** (e - 1)) == 0:
                raise CharacterError(f"character is trivial on 1 + p^{e - 1}; its conductor is below {e}")

    @classmethod
    def trivial(cls, p: int) -> Character:
        return cls(p)

    @classmethod
    def parse(cls, text: str, p: int, max_order: int = MAX_ORDER) -> Character:
        text = text.strip()
        if text == "trivial":
            return cls(p)
        if not text.startswith("mult:"):
            raise CharacterError(f"unrecognized character {text!r}")
        fields = {}
        for part in text[5:].split(","):
            key, _, value = part.partition("=")
            key = key.strip()
            if key not in ("e", "M", "k") or key in fields:
                raise CharacterError(f"bad character field {part!r}")
            try:
                fields[key] = int(value)
            except ValueError:
                raise CharacterError(f"bad character field {part!r}") from None
        if set(fields) != {"e", "M", "k"}:
            raise CharacterError("character needs e=, M= and k=")
        return cls(p, fields["e"], fields["M"], fields["k"], max_order)

    @property
    def is_trivial(self) -> bool:
        return self.m == 1

    @property
    def conductor(self) -> int:
        return self.e

    def spec(self) -> str:
        return "trivial" if self.is_trivial else f"mult:e={self.e},M={self.m},k={self.k}"

    def exponent(self, u: int) -> int:
        """j with chi(u) = zeta_M^j, for a unit u."""
        if self._log is None:
            if u % self.p == 0:
                raise ValueError(f"{u} is not a unit mod {self.p}")
            return 0
        u %= self.modulus
        if u not in self._log:
            raise ValueError(f"{u} is not a unit mod {self.modulus}")
        return self.k * self._log[u] % self.m

    def __call__(self, u: int) -> CycRat:
        return CycRat.root(self.m, self.exponent(u))

    def inverse(self) -> Character:
        return self.power(-1)

    def power(self, n: int) -> PowerCharacter:
        return PowerCharacter(self, n)

    def __eq__(self, other) -> bool:
        return isinstance(other, Character) and (self.p, self.e, self.m, self.k) == (
            other.p,
            other.e,
            other.m,
            other.k,
        )

    def __hash__(self) -> int:
        return hash((self.p, self.e, self.m, self.k))

    def __repr__(self) -> str:
        return f"Character(p={self.p}, {self.spec()})"


class PowerCharacter:
    """chi^n as a function on units; its conductor may be smaller than chi's."""

    def __init__(self, base: Character, n: int):
        self.base = base
        self.n = n
        self.p = base.p
        self.m = base.m
        self.modulus = base.modulus
        self.e = base.e

    def exponent(self, u: int) -> int:
        return self.n * self.base.exponent(u) % self.m

    def __call__(self, u: int) -> CycRat:
        return CycRat.root(self.m, self.exponent(u))

    @property
    def is_trivial(self) -> bool:
        return self.base.is_trivial or (self.n * self.base.k) % self.m == 0

    def trivial_on(self, j: int) -> bool:
        """Whether chi^n is trivial on 1 + p^j Z_p (j >= 0)."""
        if self.is_trivial or j >= self.base.e:
            return True
        step = self.p**j
        return all(
            self.exponent(u) == 0 for u in range(1, self.modulus, step) if u % self.p
        )

    @property
    def conductor(self) -> int:
        if self.is_trivial:
            return 1
        j = 1
        while not self.trivial_on(j):
            j += 1
        return j

    def inverse(self) -> PowerCharacter:
        return PowerCharacter(self.base, -self.n)
