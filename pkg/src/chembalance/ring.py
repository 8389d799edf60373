"""Exact arithmetic for the coefficient rings used throughout the package.

Elements are plain Python objects: arbitrary-precision ``int`` for the
integers, :class:`Poly` for univariate polynomials with integer
coefficients.  A ring object interprets them, so every other module can stay
generic over the ring protocol (``add``, ``mul``, ``gcd``, ``exact_div``,
``content_and_primitive``, ...).

All values are immutable; every operation is a pure function.
"""

from __future__ import annotations

import math
import re


class DivisionNotExact(ArithmeticError):
    """exact_div(a, b) was called but b does not divide a."""


class ParameterMismatch(ValueError):
    """Polynomials over different parameter names were mixed."""


class Poly:
    """Univariate polynomial over the integers.

    Coefficients are stored constant term first and never carry trailing
    zeros; the zero polynomial has an empty coefficient tuple.
    """

    __slots__ = ("coeffs", "param")

    def __init__(self, coeffs, param: str):
        cs = list(coeffs)
        while cs and cs[-1] == 0:
            cs.pop()
        self.coeffs = tuple(cs)
        self.param = param

    @classmethod
    def const(cls, c: int, param: str) -> "Poly":
        return cls((c,), param)

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    @property
    def lc(self) -> int:
        """Leading coefficient; 0 for the zero polynomial."""
        return self.coeffs[-1] if self.coeffs else 0

    def _check(self, other: "Poly") -> None:
        if self.param != other.param:
            raise ParameterMismatch(
                f"cannot mix parameters {self.param!r} and {other.param!r}"
            )

    def __bool__(self) -> bool:
        return bool(self.coeffs)

    def __eq__(self, other) -> bool:
        if not isinstance(other, Poly):
            return NotImplemented
        return self.param == other.param and self.coeffs == other.coeffs

    def __hash__(self):
        return hash((self.coeffs, self.param))

    def __neg__(self) -> "Poly":
        return Poly([-c for c in self.coeffs], self.param)

    def __add__(self, other: "Poly") -> "Poly":
        self._check(other)
        a, b = self.coeffs, other.coeffs
        if len(a) < len(b):
            a, b = b, a
        out = list(a)
        for i, c in enumerate(b):
            out[i] += c
        return Poly(out, self.param)

    def __sub__(self, other: "Poly") -> "Poly":
        return self + (-other)

    def __mul__(self, other: "Poly") -> "Poly":
        self._check(other)
        if not self or not other:
            return Poly((), self.param)
        out = [0] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            if a:
                for j, b in enumerate(other.coeffs):
                    out[i + j] += a * b
        return Poly(out, self.param)

    def __str__(self) -> str:
        if not self.coeffs:
            return "0"
        parts = []
        for k in range(self.degree, -1, -1):
            c = self.coeffs[k]
            if c == 0:
                continue
            sign = "-" if c < 0 else ("+" if parts else "")
            mag = abs(c)
            if k == 0:
                body = str(mag)
            else:
                var = self.param if k == 1 else f"{self.param}^{k}"
                body = var if mag == 1 else f"{mag}{var}"
            parts.append(sign + body)
        return "".join(parts)

    def __repr__(self) -> str:
        return f"Poly({self})"


def _prem(f: Poly, g: Poly) -> Poly:
    """Pseudo-remainder of f by g: eliminate leading terms without fractions.

    Each reduction step multiplies the running remainder by lc(g), so only
    integer arithmetic occurs; the result differs from the true remainder by
    a power of lc(g), which is irrelevant up to content.
    """
    if f.degree < g.degree:
        return f
    l = g.lc
    r = f
    while r and r.degree >= g.degree:
        shift = r.degree - g.degree
        lead = r.lc
        scaled = Poly([l * c for c in r.coeffs], r.param)
        sub = Poly([0] * shift + [lead * c for c in g.coeffs], g.param)
        r = scaled - sub
    return r


def _int_content(p: Poly) -> int:
    return math.gcd(*p.coeffs) if p.coeffs else 0


def _primitive(p: Poly) -> Poly:
    """Divide out the integer content; normalize the leading coefficient > 0."""
    c = _int_content(p)
    if c == 0:
        return p
    if p.lc < 0:
        c = -c
    return Poly([x // c for x in p.coeffs], p.param)


class Ring:
    """Protocol shared by the coefficient rings (defaults use operators)."""

    param: str | None = None

    def add(self, a, b):
        return a + b

    def sub(self, a, b):
        return a - b

    def mul(self, a, b):
        return a * b

    def neg(self, a):
        return -a

    def is_zero(self, a) -> bool:
        return not a

    def pow(self, a, k: int):
        out = self.one
        for _ in range(k):
            out = self.mul(out, a)
        return out

    def sum(self, seq):
        out = self.zero
        for v in seq:
            out = self.add(out, v)
        return out

    def lcm(self, a, b):
        if self.is_zero(a) or self.is_zero(b):
            return self.zero
        g = self.gcd(a, b)
        l = self.exact_div(self.mul(a, b), g)
        return self.neg(l) if self.is_negative(l) else l

    def content_and_primitive(self, seq):
        """gcd of the entries and the entry-wise quotient.

        The content of an all-zero sequence is 1, so the quotient is always
        defined.
        """
        seq = list(seq)
        g = self.zero
        for v in seq:
            g = self.gcd(g, v)
        if self.is_zero(g):
            return self.one, seq
        return g, [self.exact_div(v, g) for v in seq]


class IntegerRing(Ring):
    """Arbitrary-precision integers; elements are plain ``int``."""

    param = None
    zero = 0
    one = 1

    def is_unit(self, a) -> bool:
        return a in (1, -1)

    def is_negative(self, a) -> bool:
        return a < 0

    def gcd(self, a: int, b: int) -> int:
        return math.gcd(a, b)

    def exact_div(self, a: int, b: int) -> int:
        if b == 0:
            raise DivisionNotExact("division by zero")
        q, r = divmod(a, b)
        if r:
            raise DivisionNotExact(f"{b} does not divide {a}")
        return q

    def size(self, a: int):
        """Pivot-size measure used by the minimal-content pivot strategy."""
        return abs(a)

    def from_int(self, k: int) -> int:
        return k

    def parse(self, text: str) -> int:
        try:
            return int(text, 10)
        except ValueError:
            raise ValueError(f"not an integer: {text!r}") from None

    def format(self, a: int) -> str:
        return str(a)

    def __eq__(self, other) -> bool:
        return isinstance(other, IntegerRing)

    def __hash__(self):
        return hash("ZZ")

    def __repr__(self):
        return "ZZ"


class PolynomialRing(Ring):
    """Univariate polynomials over the integers in one named parameter."""

    def __init__(self, param: str):
        if not re.fullmatch(r"[A-Za-z_][A-Za-z0-9_]*", param):
            raise ValueError(f"invalid parameter name {param!r}")
        self.param = param
        self.zero = Poly((), param)
        self.one = Poly((1,), param)
        self._mono = re.compile(
            r"(\d*)\s*(?:(%s)(?:\^(\d+))?)?" % re.escape(param)
        )

    def _coerce(self, a) -> Poly:
        if isinstance(a, Poly):
            if a.param != self.param:
                raise ParameterMismatch(
                    f"element over {a.param!r} used in ring over {self.param!r}"
                )
            return a
        if isinstance(a, int):
            return Poly((a,), self.param)
        raise TypeError(f"not a polynomial element: {a!r}")

    def is_unit(self, a) -> bool:
        a = self._coerce(a)
        return a.degree == 0 and a.coeffs[0] in (1, -1)

    def is_negative(self, a) -> bool:
        return self._coerce(a).lc < 0

    def from_int(self, k: int) -> Poly:
        return Poly((k,), self.param)

    def gcd(self, a, b) -> Poly:
        """Primitive gcd via content extraction and a pseudo-remainder chain.

        Only exact integer arithmetic is used; the result is primitive with
        positive leading coefficient (times the gcd of the contents).
        """
        a, b = self._coerce(a), self._coerce(b)
        if not a:
            return b if b.lc >= 0 else -b
        if not b:
            return a if a.lc >= 0 else -a
        c = math.gcd(_int_content(a), _int_content(b))
        pa, pb = _primitive(a), _primitive(b)
        if pa.degree < pb.degree:
            pa, pb = pb, pa
        while pb:
            r = _prem(pa, pb)
            pa, pb = pb, _primitive(r)
        g = Poly([c * x for x in pa.coeffs], self.param)
        return g if g.lc > 0 else -g

    def exact_div(self, a, b) -> Poly:
        a, b = self._coerce(a), self._coerce(b)
        if not b:
            raise DivisionNotExact("division by zero")
        rem = list(a.coeffs)
        dq = a.degree - b.degree
        if not a:
            return self.zero
        if dq < 0:
            raise DivisionNotExact(f"{b} does not divide {a}")
        q = [0] * (dq + 1)
        for k in range(dq, -1, -1):
            lead = rem[k + b.degree]
            if lead % b.lc:
                raise DivisionNotExact(f"{b} does not divide {a}")
            q[k] = lead // b.lc
            for i, c in enumerate(b.coeffs):
                rem[k + i] -= q[k] * c
        if any(rem):
            raise DivisionNotExact(f"{b} does not divide {a}")
        return Poly(q, self.param)

    def size(self, a):
        a = self._coerce(a)
        return (a.degree, max((abs(c) for c in a.coeffs), default=0))

    def parse(self, text: str) -> Poly:
        s = text.strip()
        if not s:
            raise ValueError("empty polynomial")
        out = self.zero
        i = 0
        first = True
        while i < len(s):
            sign = 1
            if s[i] in "+-":
                sign = -1 if s[i] == "-" else 1
                i += 1
            elif not first:
                raise ValueError(f"bad polynomial syntax: {text!r}")
            m = self._mono.match(s, i)
            digits, var, power = m.group(1), m.group(2), m.group(3)
            if not digits and not var:
                raise ValueError(f"bad polynomial syntax: {text!r}")
            coeff = int(digits) if digits else 1
            deg = (int(power) if power else 1) if var else 0
            out = out + Poly([0] * deg + [sign * coeff], self.param)
            i = m.end()
            first = False
        return out

    def format(self, a) -> str:
        return str(self._coerce(a))

    def __eq__(self, other) -> bool:
        return isinstance(other, PolynomialRing) and other.param == self.param

    def __hash__(self):
        return hash(("ZZ[x]", self.param))

    def __repr__(self):
        return f"ZZ[{self.param}]"


ZZ = IntegerRing()


class Frac:
    """Reduced fraction of ring elements with sign-normalized denominator."""

    __slots__ = ("num", "den", "ring")

    def __init__(self, num, den=None, ring: Ring = ZZ):
        if den is None:
            den = ring.one
        if ring.is_zero(den):
            raise ZeroDivisionError("fraction with zero denominator")
        g = ring.gcd(num, den)
        if not ring.is_zero(g) and not ring.is_unit(g):
            num = ring.exact_div(num, g)
            den = ring.exact_div(den, g)
        if ring.is_negative(den):
            num, den = ring.neg(num), ring.neg(den)
        self.num = num
        self.den = den
        self.ring = ring

    def _check(self, other: "Frac") -> None:
        if self.ring != other.ring:
            raise ParameterMismatch("cannot mix fractions over different rings")

    def __bool__(self) -> bool:
        return not self.ring.is_zero(self.num)

    def __eq__(self, other) -> bool:
        if not isinstance(other, Frac):
            return NotImplemented
        return (
            self.ring == other.ring
            and self.num == other.num
            and self.den == other.den
        )

    def __hash__(self):
        return hash((self.num, self.den))

    def __neg__(self) -> "Frac":
        return Frac(self.ring.neg(self.num), self.den, self.ring)

    def __add__(self, other: "Frac") -> "Frac":
        self._check(other)
        r = self.ring
        return Frac(
            r.add(r.mul(self.num, other.den), r.mul(other.num, self.den)),
            r.mul(self.den, other.den),
            r,
        )

    def __sub__(self, other: "Frac") -> "Frac":
        return self + (-other)

    def __mul__(self, other: "Frac") -> "Frac":
        self._check(other)
        r = self.ring
        return Frac(r.mul(self.num, other.num), r.mul(self.den, other.den), r)

    def __truediv__(self, other: "Frac") -> "Frac":
        self._check(other)
        r = self.ring
        if not other:
            raise ZeroDivisionError("division by zero fraction")
        return Frac(r.mul(self.num, other.den), r.mul(self.den, other.num), r)

    @property
    def is_integral(self) -> bool:
        return self.ring.is_unit(self.den) or self.ring.is_zero(self.num)

    def as_ring_element(self):
        """The value as a ring element; the denominator must be a unit."""
        return self.ring.exact_div(self.num, self.den)

    def __str__(self) -> str:
        r = self.ring
        if r.is_unit(self.den):
            return r.format(self.as_ring_element())
        num, den = r.format(self.num), r.format(self.den)
        if isinstance(self.num, Poly) and ("+" in num[1:] or "-" in num[1:]):
            num = f"({num})"
        if isinstance(self.den, Poly) and ("+" in den[1:] or "-" in den[1:]):
            den = f"({den})"
        return f"{num}/{den}"

    def __repr__(self) -> str:
        return f"Frac({self})"


class FractionField(Ring):
    """Field of fractions of a base ring; elements are :class:`Frac`.

    Implements the same protocol as the base rings so matrices of fractions
    (exact inverses, particular solutions) reuse the generic machinery.
    """

    def __init__(self, base: Ring):
        self.base = base
        self.param = base.param
        self.zero = Frac(base.zero, base.one, base)
        self.one = Frac(base.one, base.one, base)

    def is_unit(self, a: Frac) -> bool:
        return bool(a)

    def is_negative(self, a: Frac) -> bool:
        return self.base.is_negative(a.num)

    def gcd(self, a: Frac, b: Frac) -> Frac:
        return self.one if (a or b) else self.zero

    def exact_div(self, a: Frac, b: Frac) -> Frac:
        return a / b

    def size(self, a: Frac):
        return (self.base.size(a.num), self.base.size(a.den))

    def from_int(self, k: int) -> Frac:
        return Frac(self.base.from_int(k), self.base.one, self.base)

    def lift(self, a) -> Frac:
        """Embed a base-ring element."""
        return Frac(a, self.base.one, self.base)

    def parse(self, text: str) -> Frac:
        s = text.strip().replace("(", "").replace(")", "")
        if "/" in s:
            num, den = s.split("/", 1)
            return Frac(self.base.parse(num), self.base.parse(den), self.base)
        return Frac(self.base.parse(s), self.base.one, self.base)

    def format(self, a: Frac) -> str:
        return str(a)

    def __eq__(self, other) -> bool:
        return isinstance(other, FractionField) and other.base == self.base

    def __hash__(self):
        return hash(("Frac", self.base))

    def __repr__(self):
        return f"Frac({self.base!r})"
