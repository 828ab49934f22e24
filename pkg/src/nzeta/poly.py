"""Sparse multivariate polynomials with integer coefficients.

A polynomial is an immutable map from exponent vectors to nonzero integers.
Besides ring arithmetic it offers the handful of queries the zeta pipeline
needs: supports, face functions, formal derivatives and evaluation in
residue rings Z/p^e.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Iterable, Mapping, Sequence

Exponent = tuple[int, ...]


class ParseError(ValueError):
    """Raised for malformed polynomial text; carries the character offset."""

    def __init__(self, message: str, position: int):
        super().__init__(f"{message} (at position {position})")
        self.position = position


class AdmissionError(ValueError):
    """Raised when a polynomial cannot enter the zeta pipeline."""


class MultiPoly:
    __slots__ = ("n", "_terms", "_hash")

    def __init__(self, n: int, terms: Mapping[Sequence[int], int] | None = None):
        if n < 1:
            raise ValueError("ambient dimension must be positive")
        clean: dict[Exponent, int] = {}
        for exp, c in (terms or {}).items():
            exp = tuple(int(e) for e in exp)
            if len(exp) != n:
                raise ValueError(f"exponent {exp} does not have length {n}")
            if min(exp) < 0:
                raise ValueError(f"negative exponent in {exp}")
            if not isinstance(c, int):
                raise TypeError("coefficients must be integers")
            c = clean.get(exp, 0) + c
            if c:
                clean[exp] = c
            else:
                clean.pop(exp, None)
        self.n = n
        self._terms = clean
        self._hash = None

    @classmethod
    def constant(cls, n: int, c: int) -> MultiPoly:
        return cls(n, {(0,) * n: c})

    @classmethod
    def variable(cls, n: int, j: int) -> MultiPoly:
        exp = [0] * n
        exp[j] = 1
        return cls(n, {tuple(exp): 1})

    @property
    def terms(self) -> dict[Exponent, int]:
        return dict(self._terms)

    def items(self) -> list[tuple[Exponent, int]]:
        """Terms sorted lexicographically by exponent (the canonical order)."""
        return sorted(self._terms.items())

    def coefficient(self, exp: Sequence[int]) -> int:
        return self._terms.get(tuple(exp), 0)

    def is_zero(self) -> bool:
        return not self._terms

    def degree(self) -> int:
        return max((sum(e) for e in self._terms), default=-1)

    def _coerce(self, other) -> MultiPoly:
        if isinstance(other, MultiPoly):
            if other.n != self.n:
                raise ValueError(f"dimension mismatch: {self.n} vs {other.n}")
            return other
        if isinstance(other, int):
            return MultiPoly.constant(self.n, other)
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        out = dict(self._terms)
        for exp, c in other._terms.items():
            out[exp] = out.get(exp, 0) + c
        return MultiPoly(self.n, out)

    __radd__ = __add__

    def __neg__(self) -> MultiPoly:
        return MultiPoly(self.n, {e: -c for e, c in self._terms.items()})

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
        out: dict[Exponent, int] = {}
        for e1, c1 in self._terms.items():
            for e2, c2 in other._terms.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                out[e] = out.get(e, 0) + c1 * c2
        return MultiPoly(self.n, out)

    __rmul__ = __mul__

    def __pow__(self, k: int) -> MultiPoly:
        if not isinstance(k, int) or k < 0:
            raise ValueError("exponent must be a nonnegative integer")
        result = MultiPoly.constant(self.n, 1)
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def __eq__(self, other) -> bool:
        if isinstance(other, int):
            other = MultiPoly.constant(self.n, other)
        if not isinstance(other, MultiPoly):
            return NotImplemented
        return self.n == other.n and self._terms == other._terms

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash((self.n, frozenset(self._terms.items())))
        return self._hash

    def __repr__(self) -> str:
        return f"MultiPoly({self.n}, {dict(self.items())})"

    def to_str(self, names: Sequence[str] | None = None) -> str:
        names = list(names) if names else default_names(self.n)
        if not self._terms:
            return "0"
        # highest total degree first reads more naturally
        ordered = sorted(self._terms.items(), key=lambda t: (-sum(t[0]), [-e for e in t[0]]))
        parts = []
        for i, (exp, c) in enumerate(ordered):
            mono = "*".join(
                names[j] if e == 1 else f"{names[j]}^{e}" for j, e in enumerate(exp) if e
            )
            mag = abs(c)
            if not mono:
                body = str(mag)
            elif mag == 1:
                body = mono
            else:
                body = f"{mag}*{mono}"
            if i == 0:
                parts.append(body if c > 0 else "-" + body)
            else:
                parts.append(("+ " if c > 0 else "- ") + body)
        return " ".join(parts)

    def __str__(self) -> str:
        return self.to_str()

    def evaluate(self, point: Sequence[int]) -> int:
        total = 0
        for exp, c in self._terms.items():
            term = c
            for x, e in zip(point, exp):
                if e:
                    term *= x**e
            total += term
        return total

    def reduce_mod(self, modulus: int) -> MultiPoly:
        return MultiPoly(self.n, {e: c % modulus for e, c in self._terms.items()})


def default_names(n: int) -> list[str]:
    if n <= 3:
        return ["x", "y", "z"][:n]
    return [f"x{i + 1}" for i in range(n)]


def support(h: MultiPoly) -> frozenset[Exponent]:
    return frozenset(h._terms)


def product(a: MultiPoly, b: MultiPoly) -> MultiPoly:
    if a.n != b.n:
        raise ValueError(f"dimension mismatch: {a.n} vs {b.n}")
    return a * b


def pairing(k: Sequence, m: Sequence[int]):
    return sum(ki * mi for ki, mi in zip(k, m))


def face_function(h: MultiPoly, k: Sequence) -> MultiPoly:
    """Subsum of h over the monomials minimizing <k, m>."""
    if len(k) != h.n:
        raise ValueError("weight vector has the wrong length")
    k = [Fraction(x) for x in k]
    if any(x < 0 for x in k):
        raise ValueError("weight vector must be nonnegative")
    if h.is_zero():
        return h
    values = {exp: pairing(k, exp) for exp in h._terms}
    low = min(values.values())
    return MultiPoly(h.n, {e: c for e, c in h._terms.items() if values[e] == low})


def partial_derivative(h: MultiPoly, j: int) -> MultiPoly:
    """Formal derivative with respect to variable j (0-based)."""
    if not 0 <= j < h.n:
        raise IndexError(f"variable index {j} out of range for n={h.n}")
    out = {}
    for exp, c in h._terms.items():
        if exp[j]:
            e = list(exp)
            e[j] -= 1
            out[tuple(e)] = c * exp[j]
    return MultiPoly(h.n, out)


def evaluate_residue(h: MultiPoly, z: Sequence[int], modulus: int) -> int:
    """Value of h at z in Z/modulus."""
    if len(z) != h.n:
        raise ValueError("point has the wrong length")
    total = 0
    for exp, c in h._terms.items():
        term = c % modulus
        for x, e in zip(z, exp):
            if e:
                term = term * pow(x, e, modulus) % modulus
        total += term
    return total % modulus


def admit(h: MultiPoly, p: int, label: str = "polynomial") -> MultiPoly:
    """Check the entry conditions of the pipeline for h and the prime p."""
    if h.is_zero():
        raise AdmissionError(f"{label} is the zero polynomial")
    if h.coefficient((0,) * h.n):
        raise AdmissionError(f"{label} has a nonzero constant term")
    if all(c % p == 0 for c in h._terms.values()):
        raise AdmissionError(f"every coefficient of {label} is divisible by p={p}")
    return h


# -- parsing -----------------------------------------------------------------

_SYMBOLS = "+-*^()"


def _tokenize(text: str) -> list[tuple[str, str, int]]:
    tokens = []
    i = 0
    while i < len(text):
        ch = text[i]
        if ch.isspace():
            i += 1
        elif ch.isdigit():
            j = i
            while j < len(text) and text[j].isdigit():
                j += 1
            if j < len(text) and text[j] == ".":
                raise ParseError("non-integer coefficient", j)
            tokens.append(("int", text[i:j], i))
            i = j
        elif ch.isalpha() or ch == "_":
            j = i
            while j < len(text) and (text[j].isalnum() or text[j] == "_"):
                j += 1
            tokens.append(("name", text[i:j], i))
            i = j
        elif ch in _SYMBOLS:
            tokens.append((ch, ch, i))
            i += 1
        elif ch in "/.":
            raise ParseError("non-integer coefficient", i)
        else:
            raise ParseError(f"unexpected character {ch!r}", i)
    tokens.append(("end", "", len(text)))
    return tokens


class _Parser:
    def __init__(self, text: str, names: Sequence[str]):
        self.tokens = _tokenize(text)
        self.pos = 0
        self.names = list(names)
        self.n = len(self.names)

    def peek(self) -> tuple[str, str, int]:
        return self.tokens[self.pos]

    def take(self, kind: str | None = None) -> tuple[str, str, int]:
        tok = self.tokens[self.pos]
        if kind is not None and tok[0] != kind:
            what = "end of input" if tok[0] == "end" else repr(tok[1])
            raise ParseError(f"expected {kind!r}, found {what}", tok[2])
        self.pos += 1
        return tok

    def expr(self) -> MultiPoly:
        result = self.term()
        while self.peek()[0] in "+-":
            op = self.take()[0]
            rhs = self.term()
            result = result + rhs if op == "+" else result - rhs
        return result

    def term(self) -> MultiPoly:
        result = self.unary()
        while self.peek()[0] == "*":
            self.take()
            result = result * self.unary()
        return result

    def unary(self) -> MultiPoly:
        kind = self.peek()[0]
        if kind == "-":
            self.take()
            return -self.unary()
        if kind == "+":
            self.take()
            return self.unary()
        return self.power()

    def power(self) -> MultiPoly:
        base = self.atom()
        if self.peek()[0] == "^":
            self.take()
            tok = self.peek()
            if tok[0] != "int":
                raise ParseError("exponent must be a nonnegative integer literal", tok[2])
            self.take()
            base = base ** int(tok[1])
            if self.peek()[0] == "^":
                raise ParseError("chained exponents need parentheses", self.peek()[2])
        return base

    def atom(self) -> MultiPoly:
        kind, value, where = self.peek()
        if kind == "int":
            self.take()
            return MultiPoly.constant(self.n, int(value))
        if kind == "name":
            self.take()
            if value not in self.names:
                raise ParseError(f"unknown variable {value!r}", where)
            return MultiPoly.variable(self.n, self.names.index(value))
        if kind == "(":
            self.take()
            inner = self.expr()
            self.take(")")
            return inner
        what = "end of input" if kind == "end" else repr(value)
        raise ParseError(f"unexpected {what}", where)


def parse_poly(text: str, names: Iterable[str]) -> MultiPoly:
    names = list(names)
    if len(set(names)) != len(names) or not names:
        raise ValueError("variable names must be distinct and nonempty")
    parser = _Parser(text, names)
    result = parser.expr()
    tok = parser.peek()
    if tok[0] != "end":
        raise ParseError(f"unexpected {tok[1]!r}", tok[2])
    return result


def evaluate_many(h: MultiPoly, points, modulus: int):
    """Values of h mod modulus at the rows of an integer array of points.

    Uses int64 arithmetic when products of residues fit, Python integers
    otherwise.
    """
    import numpy as np

    pts = np.asarray(points)
    dtype = np.int64 if modulus < 2**31 else object
    pts = pts.astype(dtype) % modulus
    total = np.zeros(pts.shape[0], dtype=dtype)
    powers: dict[tuple[int, int], object] = {}

    def power(j: int, e: int):
        key = (j, e)
        if key not in powers:
            if e == 1:
                powers[key] = pts[:, j]
            else:
                half = power(j, e // 2)
                sq = half * half % modulus
                powers[key] = sq if e % 2 == 0 else sq * pts[:, j] % modulus
        return powers[key]

    for exp, c in h.items():
        term = np.full(pts.shape[0], c % modulus, dtype=dtype)
        for j, e in enumerate(exp):
            if e:
                term = term * power(j, e) % modulus
        total = (total + term) % modulus
    return total
