"""Laurent polynomials K[x, x^-1] and rational functions K(x).

Both carry the involution induced by the coefficient field and ``x -> x^-1``.
Polynomials in ``x`` (:class:`Poly`) are the plumbing underneath
:class:`RationalFunction`; they are kept as low-to-high coefficient tuples.
"""
from __future__ import annotations

from random import Random
from typing import Dict, Iterable, Mapping, Tuple

from .scalar import Field, FieldMismatch, Gaussian, Scalar


def _coef_str(c: Scalar, field: Field, leading: bool) -> Tuple[str, bool]:
    """Render a coefficient for use in front of a power of x.

    Returns the text (with a sign when not leading) and whether it is a bare
    unit (so ``x`` can be printed instead of ``1x``).
    """
    if isinstance(c, Gaussian) and c.re and c.im:
        text = f"({c})"
        return (text if leading else "+" + text), False
    s = str(c)
    neg = s.startswith("-")
    body = s[1:] if neg else s
    sign = "-" if neg else ("" if leading else "+")
    return sign + body, body == "1"


def _term_str(c: Scalar, field: Field, power: str, leading: bool) -> str:
    text, unit = _coef_str(c, field, leading)
    if not power:
        return text
    if unit:
        return text[:-1] + power
    return text + power


def _power(n: int) -> str:
    if n == 0:
        return ""
    if n == 1:
        return "x"
    return f"x^{n}"


class Poly:
    """Dense univariate polynomial over a :class:`Field`."""

    __slots__ = ("field", "coeffs")

    def __init__(self, field: Field, coeffs: Iterable = ()):
        cs = [field(c) if not field.contains(c) else c for c in coeffs]
        while cs and not cs[-1]:
            cs.pop()
        self.field = field
        self.coeffs: Tuple[Scalar, ...] = tuple(cs)

    @classmethod
    def constant(cls, field: Field, c) -> Poly:
        return cls(field, [c])

    @classmethod
    def x(cls, field: Field) -> Poly:
        return cls(field, [0, 1])

    @classmethod
    def monomial(cls, field: Field, c, n: int) -> Poly:
        return cls(field, [0] * n + [c])

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    @property
    def lead(self) -> Scalar:
        return self.coeffs[-1]

    def __bool__(self):
        return bool(self.coeffs)

    def _check(self, other: Poly):
        if other.field != self.field:
            raise FieldMismatch(f"{self.field} vs {other.field}")

    def __add__(self, other: Poly) -> Poly:
        self._check(other)
        a, b = self.coeffs, other.coeffs
        if len(a) < len(b):
            a, b = b, a
        return Poly(self.field, [x + y for x, y in zip(a, b)] + list(a[len(b):]))

    def __neg__(self) -> Poly:
        return Poly(self.field, [-c for c in self.coeffs])

    def __sub__(self, other: Poly) -> Poly:
        return self + (-other)

    def __mul__(self, other) -> Poly:
        if not isinstance(other, Poly):
            c = self.field(other) if not self.field.contains(other) else other
            return Poly(self.field, [a * c for a in self.coeffs])
        self._check(other)
        if not self or not other:
            return Poly(self.field)
        out = [self.field.zero] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            if not a:
                continue
            for j, b in enumerate(other.coeffs):
                out[i + j] = out[i + j] + a * b
        return Poly(self.field, out)

    def shift(self, n: int) -> Poly:
        """Multiply by ``x^n`` (n >= 0)."""
        if not self:
            return self
        return Poly(self.field, [self.field.zero] * n + list(self.coeffs))

    def divmod(self, other: Poly) -> Tuple[Poly, Poly]:
        self._check(other)
        if not other:
            raise ZeroDivisionError("polynomial division by zero")
        rem = list(self.coeffs)
        q = [self.field.zero] * max(len(rem) - other.degree, 0)
        inv_lead = self.field.inv(other.lead)
        while len(rem) - 1 >= other.degree and rem:
            c = rem[-1] * inv_lead
            shift = len(rem) - 1 - other.degree
            q[shift] = c
            for i, b in enumerate(other.coeffs):
                rem[shift + i] = rem[shift + i] - c * b
            rem.pop()
            while rem and not rem[-1]:
                rem.pop()
        return Poly(self.field, q), Poly(self.field, rem)

    def monic(self) -> Poly:
        if not self:
            return self
        return self * self.field.inv(self.lead)

    def gcd(self, other: Poly) -> Poly:
        # monic remainders keep coefficient growth in check over Q
        a, b = self.monic(), other.monic()
        while b:
            if b.degree == 0:
                return Poly.constant(self.field, 1)
            a, b = b, a.divmod(b)[1].monic()
        return a

    def conj(self) -> Poly:
        return Poly(self.field, [self.field.star(c) for c in self.coeffs])

    def reversed(self) -> Poly:
        """``x^deg * p(1/x)``."""
        return Poly(self.field, self.coeffs[::-1])

    def __eq__(self, other):
        return isinstance(other, Poly) and self.field == other.field and self.coeffs == other.coeffs

    def __hash__(self):
        return hash(self.coeffs)

    def __repr__(self):
        return f"Poly({self})"

    def __str__(self):
        if not self:
            return "0"
        parts = []
        for n in range(self.degree, -1, -1):
            c = self.coeffs[n]
            if c:
                parts.append(_term_str(c, self.field, _power(n), not parts))
        return "".join(parts)


class LaurentPoly:
    """Element of K[x, x^-1]: a sparse map exponent -> nonzero coefficient."""

    __slots__ = ("field", "terms")

    def __init__(self, field: Field, terms: Mapping[int, object] | None = None):
        self.field = field
        clean: Dict[int, Scalar] = {}
        for n, c in (terms or {}).items():
            c = c if field.contains(c) else field(c)
            if c:
                clean[n] = c
        self.terms = clean

    @classmethod
    def constant(cls, field: Field, c) -> LaurentPoly:
        return cls(field, {0: c})

    @classmethod
    def x(cls, field: Field, n: int = 1) -> LaurentPoly:
        return cls(field, {n: 1})

    def __bool__(self):
        return bool(self.terms)

    def _check(self, other):
        if other.field != self.field:
            raise FieldMismatch(f"{self.field} vs {other.field}")

    def _coerce(self, other):
        if isinstance(other, LaurentPoly):
            self._check(other)
            return other
        if isinstance(other, (int,)) or self.field.contains(other):
            return LaurentPoly(self.field, {0: other})
        return NotImplemented

    def __add__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        out = dict(self.terms)
        for n, c in o.terms.items():
            out[n] = out[n] + c if n in out else c
        return LaurentPoly(self.field, out)

    __radd__ = __add__

    def __neg__(self):
        return LaurentPoly(self.field, {n: -c for n, c in self.terms.items()})

    def __sub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return self + (-o)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        out: Dict[int, Scalar] = {}
        for n, a in self.terms.items():
            for m, b in o.terms.items():
                out[n + m] = out[n + m] + a * b if n + m in out else a * b
        return LaurentPoly(self.field, out)

    __rmul__ = __mul__

    def __pow__(self, k: int):
        if k < 0:
            if len(self.terms) != 1:
                raise ZeroDivisionError(f"{self} is not a unit")
            (n, c), = self.terms.items()
            return LaurentPoly(self.field, {n * k: _pow(self.field.inv(c), -k, self.field)})
        out = LaurentPoly.constant(self.field, 1)
        for _ in range(k):
            out = out * self
        return out

    def star(self) -> LaurentPoly:
        """``sum c_n x^n -> sum star(c_n) x^-n``."""
        return LaurentPoly(self.field, {-n: self.field.star(c) for n, c in self.terms.items()})

    def coefficient(self, n: int) -> Scalar:
        return self.terms.get(n, self.field.zero)

    @property
    def valuation(self) -> int:
        return min(self.terms) if self.terms else 0

    @property
    def top(self) -> int:
        return max(self.terms) if self.terms else 0

    def to_ratfun(self) -> RationalFunction:
        v = self.valuation
        num = Poly(self.field, [self.coefficient(n) for n in range(v, self.top + 1)])
        if v >= 0:
            return RationalFunction(num.shift(v), Poly.constant(self.field, 1))
        return RationalFunction(num, Poly.monomial(self.field, 1, -v))

    def __eq__(self, other):
        if isinstance(other, LaurentPoly):
            return self.field == other.field and self.terms == other.terms
        if isinstance(other, int) or self.field.contains(other):
            return self == LaurentPoly(self.field, {0: other})
        return NotImplemented

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    def __repr__(self):
        return f"LaurentPoly({self})"

    def __str__(self):
        if not self.terms:
            return "0"
        parts = []
        for n in sorted(self.terms):
            parts.append(_term_str(self.terms[n], self.field, _power(n), not parts))
        return "".join(parts)


def _pow(c, k, field):
    out = field.one
    for _ in range(k):
        out = out * c
    return out


def _cancel(a: Poly, b: Poly):
    if b.degree == 0 or a.degree == 0:
        return a, b
    g = a.gcd(b)
    if g.degree == 0:
        return a, b
    return a.divmod(g)[0], b.divmod(g)[0]


class RationalFunction:
    """Element of K(x) in lowest terms with a monic denominator."""

    __slots__ = ("num", "den")

    def __init__(self, num: Poly, den: Poly | None = None):
        field = num.field
        if den is None:
            den = Poly.constant(field, 1)
        if den.field != field:
            raise FieldMismatch(f"{field} vs {den.field}")
        if not den:
            raise ZeroDivisionError("zero denominator")
        if not num:
            self.num, self.den = num, Poly.constant(field, 1)
            return
        if den.degree == 0:
            c = field.inv(den.lead)
            self.num, self.den = num * c, Poly.constant(field, 1)
            return
        g = num.gcd(den)
        if g.degree > 0:
            num, den = num.divmod(g)[0], den.divmod(g)[0]
        lc = field.inv(den.lead)
        self.num, self.den = num * lc, den * lc

    @classmethod
    def _reduced(cls, num: Poly, den: Poly) -> RationalFunction:
        """Build from a pair already known to be coprime."""
        out = cls.__new__(cls)
        if not num:
            out.num, out.den = num, Poly.constant(num.field, 1)
            return out
        lc = num.field.inv(den.lead)
        out.num, out.den = num * lc, den * lc
        return out

    @property
    def field(self) -> Field:
        return self.num.field

    @classmethod
    def constant(cls, field: Field, c) -> RationalFunction:
        return cls(Poly.constant(field, c))

    @classmethod
    def x(cls, field: Field) -> RationalFunction:
        return cls(Poly.x(field))

    def __bool__(self):
        return bool(self.num)

    def _coerce(self, other):
        if isinstance(other, RationalFunction):
            if other.field != self.field:
                raise FieldMismatch(f"{self.field} vs {other.field}")
            return other
        if isinstance(other, LaurentPoly):
            return other.to_ratfun()
        if isinstance(other, int) or self.field.contains(other):
            return RationalFunction.constant(self.field, other)
        return NotImplemented

    def __add__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        if self.den == o.den:
            return RationalFunction(self.num + o.num, self.den)
        # Henrici: only the gcd of the denominators can cancel
        g = self.den.gcd(o.den)
        if g.degree == 0:
            return RationalFunction._reduced(self.num * o.den + o.num * self.den, self.den * o.den)
        sd, od = self.den.divmod(g)[0], o.den.divmod(g)[0]
        num = self.num * od + o.num * sd
        if not num:
            return RationalFunction._reduced(num, g)
        h = num.gcd(g)
        if h.degree > 0:
            num, g = num.divmod(h)[0], g.divmod(h)[0]
        return RationalFunction._reduced(num, sd * od * g)

    __radd__ = __add__

    def __neg__(self):
        return RationalFunction(-self.num, self.den)

    def __sub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return self + (-o)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        if not self.num or not o.num:
            return RationalFunction(Poly.constant(self.field, 0))
        # cross-cancel so the product is already in lowest terms
        a, bd = _cancel(self.num, o.den)
        b, ad = _cancel(o.num, self.den)
        return RationalFunction._reduced(a * b, ad * bd)

    __rmul__ = __mul__

    def inverse(self) -> RationalFunction:
        if not self.num:
            raise ZeroDivisionError("inverse of zero rational function")
        return RationalFunction(self.den, self.num)

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return self * o.inverse()

    def __rtruediv__(self, other):
        return self.inverse() * other

    def star(self) -> RationalFunction:
        """Substitute ``x -> 1/x``, conjugate coefficients and clear powers of x."""
        if not self.num:
            return self
        dn, dd = self.num.degree, self.den.degree
        num, den = self.num.conj().reversed(), self.den.conj().reversed()
        if dd >= dn:
            num = num.shift(dd - dn)
        else:
            den = den.shift(dn - dd)
        return RationalFunction(num, den)

    @property
    def weight(self) -> int:
        """Total degree, used as a pivoting cost."""
        return max(self.num.degree, 0) + self.den.degree

    def to_laurent(self) -> LaurentPoly:
        """Convert back to K[x, x^-1]; the denominator must be a power of x."""
        den = self.den
        if any(den.coeffs[:-1]):
            raise ValueError(f"{self} is not a Laurent polynomial")
        d = den.degree
        return LaurentPoly(self.field, {i - d: c for i, c in enumerate(self.num.coeffs)})

    def is_laurent(self) -> bool:
        return not any(self.den.coeffs[:-1])

    def __eq__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        return self.num == o.num and self.den == o.den

    def __hash__(self):
        return hash((self.num, self.den))

    def __repr__(self):
        return f"RationalFunction({self})"

    def __str__(self):
        if self.den.degree == 0:
            return str(self.num)
        num, den = str(self.num), str(self.den)
        if sum(1 for c in self.num.coeffs if c) > 1:
            num = f"({num})"
        if sum(1 for c in self.den.coeffs if c) > 1:
            den = f"({den})"
        return f"{num}/{den}"


def random_laurent(field: Field, rng: Random, *, span: int = 2, terms: int = 2) -> LaurentPoly:
    out = {}
    for _ in range(rng.randint(0, terms)):
        out[rng.randint(-span, span)] = field.random(rng)
    return LaurentPoly(field, out)


def random_ratfun(field: Field, rng: Random, *, degree: int = 2) -> RationalFunction:
    num = Poly(field, [field.random(rng) for _ in range(rng.randint(0, degree + 1))])
    while True:
        den = Poly(field, [field.random(rng) for _ in range(rng.randint(1, degree + 1))])
        if den:
            return RationalFunction(num, den)
