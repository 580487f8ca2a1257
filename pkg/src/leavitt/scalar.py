"""Exact coefficient fields with an involution.

Three kinds of field are supported:

* ``q``      -- the rationals, identity involution (values are :class:`fractions.Fraction`)
* ``qi``     -- the gaussian rationals Q(i), complex conjugation or identity
                (values are :class:`Gaussian`)
* ``gf:<p>`` -- the prime field GF(p), identity involution (values are :class:`Mod`)

Values of all three kinds support ``+ - * /``, ``==`` against ints and
``bool()`` as a zero test, so generic code (polynomials, elimination) can be
written once.
"""
from __future__ import annotations

import re
from math import gcd
from dataclasses import dataclass
from fractions import Fraction
from random import Random
from typing import Union


class FieldError(ValueError):
    pass


class FieldMismatch(FieldError):
    pass


def _is_prime(n: int) -> bool:
    if n < 2:
        return False
    i = 2
    while i * i <= n:
        if n % i == 0:
            return False
        i += 1
    return True


class Gaussian:
    """A gaussian rational ``re + im*i``.

    Stored as integers ``(a + b i) / d`` with ``d > 0`` and ``gcd(a, b, d) = 1``,
    which is much cheaper than a pair of Fractions.
    """

    __slots__ = ("a", "b", "d")

    def __init__(self, re=0, im=0):
        re, im = Fraction(re), Fraction(im)
        d = re.denominator * im.denominator // gcd(re.denominator, im.denominator)
        self._set(re.numerator * (d // re.denominator), im.numerator * (d // im.denominator), d)

    def _set(self, a: int, b: int, d: int):
        g = gcd(gcd(a, b), d)
        if d < 0:
            g = -g
        if g != 1:
            a, b, d = a // g, b // g, d // g
        self.a, self.b, self.d = a, b, d

    @classmethod
    def _make(cls, a: int, b: int, d: int) -> Gaussian:
        out = cls.__new__(cls)
        out._set(a, b, d)
        return out

    @property
    def re(self) -> Fraction:
        return Fraction(self.a, self.d)

    @property
    def im(self) -> Fraction:
        return Fraction(self.b, self.d)

    @staticmethod
    def _coerce(other):
        if isinstance(other, Gaussian):
            return other
        if isinstance(other, (int, Fraction)):
            return Gaussian(other, 0)
        return NotImplemented

    def __add__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        if self.d == o.d:
            return Gaussian._make(self.a + o.a, self.b + o.b, self.d)
        return Gaussian._make(self.a * o.d + o.a * self.d, self.b * o.d + o.b * self.d, self.d * o.d)

    __radd__ = __add__

    def __neg__(self):
        return Gaussian._make(-self.a, -self.b, self.d)

    def __sub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return self + (-o)

    def __rsub__(self, other):
        return -self + other

    def __mul__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return Gaussian._make(self.a * o.a - self.b * o.b, self.a * o.b + self.b * o.a, self.d * o.d)

    __rmul__ = __mul__

    def inverse(self) -> Gaussian:
        # d / (a + b i) = d (a - b i) / (a^2 + b^2)
        n = self.a * self.a + self.b * self.b
        if n == 0:
            raise ZeroDivisionError("inverse of zero")
        return Gaussian._make(self.d * self.a, -self.d * self.b, n)

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return self * o.inverse()

    def __rtruediv__(self, other):
        return self.inverse() * other

    def conjugate(self) -> Gaussian:
        return Gaussian._make(self.a, -self.b, self.d)

    def __bool__(self):
        return bool(self.a) or bool(self.b)

    def __eq__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return False
        return self.a == o.a and self.b == o.b and self.d == o.d

    def __hash__(self):
        if not self.b:
            return hash(self.re)
        return hash((self.re, self.im))

    def __repr__(self):
        return f"Gaussian({self.re}, {self.im})"

    def __str__(self):
        if not self.im:
            return str(self.re)
        im = "" if self.im == 1 else "-" if self.im == -1 else str(self.im)
        if not self.re:
            return f"{im}i"
        sign = "" if self.im < 0 else "+"
        return f"{self.re}{sign}{im}i"


class Mod:
    """A residue modulo a prime ``p``, kept in ``[0, p)``."""

    __slots__ = ("v", "p")

    def __init__(self, v: int, p: int):
        self.p = p
        self.v = v % p

    def _coerce(self, other):
        if isinstance(other, Mod):
            if other.p != self.p:
                raise FieldMismatch(f"GF({self.p}) vs GF({other.p})")
            return other.v
        if isinstance(other, int):
            return other
        if isinstance(other, Fraction):
            return other.numerator * pow(other.denominator, -1, self.p)
        return NotImplemented

    def __add__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return Mod(self.v + o, self.p)

    __radd__ = __add__

    def __neg__(self):
        return Mod(-self.v, self.p)

    def __sub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return Mod(self.v - o, self.p)

    def __rsub__(self, other):
        return -self + other

    def __mul__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return Mod(self.v * o, self.p)

    __rmul__ = __mul__

    def inverse(self) -> Mod:
        if self.v == 0:
            raise ZeroDivisionError("inverse of zero")
        return Mod(pow(self.v, -1, self.p), self.p)

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return self * Mod(o, self.p).inverse()

    def __rtruediv__(self, other):
        return self.inverse() * other

    def conjugate(self) -> Mod:
        return self

    def __bool__(self):
        return self.v != 0

    def __eq__(self, other):
        try:
            o = self._coerce(other)
        except FieldMismatch:
            return False
        if o is NotImplemented:
            return False
        return (self.v - o) % self.p == 0

    def __hash__(self):
        return hash((self.v, self.p))

    def __repr__(self):
        return f"Mod({self.v}, {self.p})"

    def __str__(self):
        return str(self.v)


Scalar = Union[Fraction, Gaussian, Mod]

_RAT = re.compile(r"[+-]?\d+(/\d+)?")


def _parse_gaussian(s: str) -> Gaussian:
    s = s.replace(" ", "")
    if not s.endswith("i"):
        if not _RAT.fullmatch(s):
            raise FieldError(f"bad gaussian literal {s!r}")
        return Gaussian(Fraction(s))
    body = s[:-1]
    cut = max(body.rfind("+"), body.rfind("-"))
    re_text, im_text = (body[:cut], body[cut:]) if cut > 0 else ("", body)
    if re_text and not _RAT.fullmatch(re_text):
        raise FieldError(f"bad gaussian literal {s!r}")
    if im_text in ("", "+", "-"):
        im_text += "1"
    if not _RAT.fullmatch(im_text):
        raise FieldError(f"bad gaussian literal {s!r}")
    return Gaussian(Fraction(re_text or 0), Fraction(im_text))


@dataclass(frozen=True)
class Field:
    """Description of a coefficient field together with its involution.

    ``positive_definite`` is fixed by ``(kind, involution)``: it holds for the
    rationals with the identity and for Q(i) with conjugation, and nowhere else.
    """

    kind: str  # "q", "qi" or "gf"
    involution: str = "identity"  # or "conjugation"
    p: int = 0

    def __post_init__(self):
        if self.kind not in ("q", "qi", "gf"):
            raise FieldError(f"unknown field kind {self.kind!r}")
        if self.involution not in ("identity", "conjugation"):
            raise FieldError(f"unknown involution {self.involution!r}")
        if self.kind == "gf":
            if not _is_prime(self.p):
                raise FieldError(f"GF(p) needs p prime, got {self.p}")
        elif self.p:
            raise FieldError("characteristic only applies to prime fields")
        if self.involution == "conjugation" and self.kind != "qi":
            raise FieldError("conjugation is only defined on the gaussian rationals")

    @classmethod
    def from_selector(cls, sel: str) -> Field:
        """Build a field from a CLI selector: ``q``, ``qi`` or ``gf:<p>``."""
        sel = sel.strip()
        if sel == "q":
            return cls("q")
        if sel == "qi":
            return cls("qi", "conjugation")
        if sel == "qi:id":
            return cls("qi", "identity")
        m = re.fullmatch(r"gf:(\d+)", sel)
        if m:
            return cls("gf", p=int(m.group(1)))
        raise FieldError(f"bad field selector {sel!r}")

    @property
    def selector(self) -> str:
        if self.kind == "gf":
            return f"gf:{self.p}"
        if self.kind == "qi" and self.involution == "identity":
            return "qi:id"
        return self.kind

    @property
    def positive_definite(self) -> bool:
        return (self.kind, self.involution) in (("q", "identity"), ("qi", "conjugation"))

    @property
    def characteristic(self) -> int:
        return self.p if self.kind == "gf" else 0

    def __str__(self):
        if self.kind == "q":
            return "Q"
        if self.kind == "qi":
            return "Q(i)" if self.involution == "conjugation" else "Q(i) [identity involution]"
        return f"GF({self.p})"

    # -- element construction -------------------------------------------------

    def __call__(self, value=0) -> Scalar:
        """Coerce an int, Fraction or string literal into this field."""
        if isinstance(value, str):
            return self.parse(value)
        if self.kind == "q":
            if isinstance(value, (Gaussian, Mod)):
                raise FieldMismatch(f"{value!r} is not rational")
            return Fraction(value)
        if self.kind == "qi":
            if isinstance(value, Gaussian):
                return value
            if isinstance(value, Mod):
                raise FieldMismatch(f"{value!r} is not a gaussian rational")
            return Gaussian(value)
        if isinstance(value, Mod):
            if value.p != self.p:
                raise FieldMismatch(f"{value!r} is not in GF({self.p})")
            return value
        if isinstance(value, Gaussian):
            raise FieldMismatch(f"{value!r} is not in GF({self.p})")
        value = Fraction(value)
        return Mod(value.numerator, self.p) / Mod(value.denominator, self.p)

    @property
    def zero(self) -> Scalar:
        return self(0)

    @property
    def one(self) -> Scalar:
        return self(1)

    def contains(self, a) -> bool:
        if self.kind == "q":
            return isinstance(a, Fraction)
        if self.kind == "qi":
            return isinstance(a, Gaussian)
        return isinstance(a, Mod) and a.p == self.p

    def check(self, a) -> Scalar:
        if not self.contains(a):
            raise FieldMismatch(f"{a!r} does not belong to {self}")
        return a

    def parse(self, text: str) -> Scalar:
        """Parse a scalar literal: ``a/b`` (rationals), ``a/b+c/di`` (gaussian),
        ``k`` (prime field)."""
        s = text.strip()
        if s.startswith("(") and s.endswith(")"):
            s = s[1:-1].strip()
        if self.kind == "qi":
            return _parse_gaussian(s)
        if not _RAT.fullmatch(s):
            raise FieldError(f"bad scalar literal {text!r} for {self}")
        if self.kind == "gf" and "/" in s:
            num, den = s.split("/")
            return Mod(int(num), self.p) / Mod(int(den), self.p)
        return self(Fraction(s))

    # -- operations ----------------------------------------------------------

    def star(self, a: Scalar) -> Scalar:
        if self.involution == "conjugation":
            return a.conjugate()
        return a

    def inv(self, a: Scalar) -> Scalar:
        if not a:
            raise ZeroDivisionError("inverse of zero")
        return self.one / a

    def fmt(self, a: Scalar) -> str:
        return str(a)

    def random(self, rng: Random, *, nonzero: bool = False, size: int = 3) -> Scalar:
        while True:
            if self.kind == "q":
                a = Fraction(rng.randint(-size, size), rng.randint(1, 2))
            elif self.kind == "qi":
                a = Gaussian(Fraction(rng.randint(-size, size), rng.randint(1, 2)), rng.randint(-size, size))
            else:
                a = Mod(rng.randrange(self.p), self.p)
            if a or not nonzero:
                return a


Q = Field("q")
QI = Field("qi", "conjugation")


def GF(p: int) -> Field:
    return Field("gf", p=p)
