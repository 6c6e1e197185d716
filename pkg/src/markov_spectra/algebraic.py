"""Exact quadratic surds, sums of surds over different radicands, and
certified dyadic enclosures.

Every value here is a finite Q-linear combination of square roots of
square-free integers.  Such roots are linearly independent over Q, so a
combination is zero exactly when all its coefficients vanish; otherwise an
enclosure of sufficient precision decides its sign.  This gives exact
comparisons without minimal polynomials.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from numbers import Rational

from sympy.ntheory.factor_ import core as _squarefree_core

from .exceptions import ValidationError

DEFAULT_BITS = 64

Terms = dict  # radicand (square-free, 1 for the rational part) -> Fraction


@lru_cache(maxsize=65536)
def squarefree_decompose(n: int) -> tuple[int, int]:
    """Return ``(k, d)`` with ``n == k*k*d`` and ``d`` square-free."""
    if n < 0:
        raise ValueError("negative radicand")
    if n == 0:
        return 0, 1
    d = int(_squarefree_core(n, 2))
    return math.isqrt(n // d), d


def _as_fraction(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, (int, Rational)):
        return Fraction(x)
    if isinstance(x, float):
        return Fraction(x)
    raise TypeError(f"not a rational number: {x!r}")


def terms_of(x) -> Terms:
    """Radical-term dictionary of any supported number."""
    if isinstance(x, _RadicalNumber):
        return x._terms()
    q = _as_fraction(x)
    return {1: q} if q else {}


def _add_terms(t1: Terms, t2: Terms, sign: int = 1) -> Terms:
    out = {d: c for d, c in t1.items() if c}
    for d, c in t2.items():
        v = out.get(d, 0) + sign * c
        if v:
            out[d] = v
        else:
            out.pop(d, None)
    return out


def enclose_terms(terms: Terms, bits: int) -> tuple[Fraction, Fraction]:
    """Dyadic outward enclosure of a radical sum, ``bits`` fractional bits
    per square root."""
    lo = hi = Fraction(0)
    scale = 1 << bits
    for d, c in terms.items():
        if d == 1:
            lo += c
            hi += c
            continue
        s = math.isqrt(d << (2 * bits))
        r_lo, r_hi = Fraction(s, scale), Fraction(s + 1, scale)
        if c > 0:
            lo += c * r_lo
            hi += c * r_hi
        else:
            lo += c * r_hi
            hi += c * r_lo
    return lo, hi


def sign_terms(terms: Terms, bits: int = DEFAULT_BITS) -> int:
    """Exact sign of a radical sum."""
    terms = {d: c for d, c in terms.items() if c}
    if not terms:
        return 0
    if len(terms) == 1 and 1 in terms:
        return 1 if terms[1] > 0 else -1
    while True:
        lo, hi = enclose_terms(terms, bits)
        if lo > 0:
            return 1
        if hi < 0:
            return -1
        bits *= 2


def floor_terms(terms: Terms) -> int:
    """Exact floor of a radical sum."""
    if not terms:
        return 0
    if set(terms) == {1}:
        return math.floor(terms[1])
    bits = DEFAULT_BITS
    while True:
        lo, hi = enclose_terms(terms, bits)
        flo, fhi = math.floor(lo), math.floor(hi)
        if flo == fhi:
            return flo
        # an irrational value is never an integer, so refinement terminates
        bits *= 2


@dataclass(frozen=True)
class Enclosure:
    """Closed interval with exact dyadic-rational endpoints."""

    lo: Fraction
    hi: Fraction
    bits: int = DEFAULT_BITS

    @property
    def width(self) -> Fraction:
        return self.hi - self.lo

    @property
    def mid(self) -> Fraction:
        return (self.lo + self.hi) / 2

    def __contains__(self, x) -> bool:
        return sign_terms(_add_terms(terms_of(x), {1: self.lo}, -1)) >= 0 and \
            sign_terms(_add_terms({1: self.hi}, terms_of(x), -1)) >= 0

    def __float__(self) -> float:
        return float(self.mid)


class _RadicalNumber:
    """Shared exact-comparison and rendering machinery."""

    __slots__ = ()

    def _terms(self) -> Terms:  # pragma: no cover - abstract
        raise NotImplementedError

    def sign(self) -> int:
        return sign_terms(self._terms())

    def _cmp(self, other) -> int:
        return sign_terms(_add_terms(self._terms(), terms_of(other), -1))

    def __lt__(self, other):
        return self._cmp(other) < 0

    def __le__(self, other):
        return self._cmp(other) <= 0

    def __gt__(self, other):
        return self._cmp(other) > 0

    def __ge__(self, other):
        return self._cmp(other) >= 0

    def __float__(self) -> float:
        return float(self.enclosure(DEFAULT_BITS).mid)

    def __floor__(self) -> int:
        return floor_terms(self._terms())

    def enclosure(self, bits: int = DEFAULT_BITS) -> Enclosure:
        lo, hi = enclose_terms(self._terms(), bits)
        return Enclosure(lo, hi, bits)

    def refine(self, tol) -> Enclosure:
        """Enclosure of width at most ``tol``."""
        tol = _as_fraction(tol)
        if tol <= 0:
            raise ValidationError("tolerance must be positive")
        bits = DEFAULT_BITS
        while True:
            enc = self.enclosure(bits)
            if enc.width <= tol:
                return enc
            bits *= 2

    def to_decimal(self, digits: int) -> str:
        """Decimal expansion truncated (not rounded) after ``digits`` places."""
        terms = self._terms()
        neg = sign_terms(terms) < 0
        scale = 10 ** digits
        k = -scale if neg else scale
        scaled = {d: k * c for d, c in terms.items()}
        n = floor_terms(scaled)
        ip, fp = divmod(n, scale)
        body = str(ip) if digits == 0 else f"{ip}.{fp:0{digits}d}"
        return "-" + body if neg else body


class QuadSurd(_RadicalNumber):
    """Exact real number ``(a + b*sqrt(d)) / c`` in canonical form.

    ``d`` is square-free (``d == 0`` iff ``b == 0``), ``c > 0`` and
    ``gcd(a, b, c) == 1``.
    """

    __slots__ = ("a", "b", "d", "c")

    def __init__(self, a: int, b: int = 0, d: int = 0, c: int = 1):
        a, b, d, c = int(a), int(b), int(d), int(c)
        if c == 0:
            raise ZeroDivisionError("zero denominator")
        if d < 0:
            raise ValidationError("negative radicand")
        if b == 0 or d == 0:
            b, d = 0, 0
        else:
            k, d = squarefree_decompose(d)
            b *= k
            if d == 1:
                a, b, d = a + b, 0, 0
        if c < 0:
            a, b, c = -a, -b, -c
        g = math.gcd(math.gcd(a, b), c)
        object.__setattr__(self, "a", a // g)
        object.__setattr__(self, "b", b // g)
        object.__setattr__(self, "d", d)
        object.__setattr__(self, "c", c // g)

    def __setattr__(self, name, value):
        raise AttributeError("QuadSurd is immutable")

    @classmethod
    def from_rational(cls, q) -> "QuadSurd":
        q = _as_fraction(q)
        return cls(q.numerator, 0, 0, q.denominator)

    @classmethod
    def sqrt(cls, q) -> "QuadSurd":
        """Exact square root of a non-negative rational."""
        q = _as_fraction(q)
        if q < 0:
            raise ValidationError("square root of a negative number")
        return cls(0, 1, q.numerator * q.denominator, q.denominator)

    # -- structure ---------------------------------------------------------
    @property
    def is_rational(self) -> bool:
        return self.b == 0

    def to_fraction(self) -> Fraction:
        if self.b:
            raise ValidationError(f"{self} is irrational")
        return Fraction(self.a, self.c)

    @property
    def rational_part(self) -> Fraction:
        return Fraction(self.a, self.c)

    @property
    def radical_coefficient(self) -> Fraction:
        return Fraction(self.b, self.c)

    def _terms(self) -> Terms:
        t = {}
        if self.a:
            t[1] = Fraction(self.a, self.c)
        if self.b:
            t[self.d] = Fraction(self.b, self.c)
        return t

    def conjugate(self) -> "QuadSurd":
        return QuadSurd(self.a, -self.b, self.d, self.c)

    def norm(self) -> Fraction:
        return Fraction(self.a * self.a - self.b * self.b * self.d, self.c * self.c)

    # -- arithmetic --------------------------------------------------------
    @staticmethod
    def _coerce(x):
        if isinstance(x, QuadSurd):
            return x
        if isinstance(x, (int, Fraction, Rational)):
            return QuadSurd.from_rational(x)
        return None

    def _common_d(self, o: "QuadSurd"):
        if self.d == 0 or o.d == 0 or self.d == o.d:
            return self.d or o.d
        return None

    def __add__(self, other):
        o = self._coerce(other)
        if o is None:
            if isinstance(other, AlgebraicValue):
                return AlgebraicValue.from_terms(_add_terms(self._terms(), other._terms()))
            return NotImplemented
        d = self._common_d(o)
        if d is None:
            return AlgebraicValue.from_terms(_add_terms(self._terms(), o._terms()))
        return QuadSurd(self.a * o.c + o.a * self.c, self.b * o.c + o.b * self.c, d,
                        self.c * o.c)

    __radd__ = __add__

    def __neg__(self):
        return QuadSurd(-self.a, -self.b, self.d, self.c)

    def __pos__(self):
        return self

    def __abs__(self):
        return -self if self.sign() < 0 else self

    def __sub__(self, other):
        o = self._coerce(other)
        if o is None:
            if isinstance(other, AlgebraicValue):
                return self + (-other)
            return NotImplemented
        return self + (-o)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        d = self._common_d(o)
        if d is None:
            raise ValidationError("product of surds over different radicands")
        return QuadSurd(self.a * o.a + self.b * o.b * d, self.a * o.b + self.b * o.a, d,
                        self.c * o.c)

    __rmul__ = __mul__

    def inverse(self) -> "QuadSurd":
        n = self.norm()
        if n == 0:
            raise ZeroDivisionError("inverse of zero")
        # 1/x = conj(x) / (x * conj(x))
        conj = self.conjugate()
        return QuadSurd(conj.a * n.denominator, conj.b * n.denominator, self.d,
                        conj.c * n.numerator)

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self * o.inverse()

    def __rtruediv__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return o * self.inverse()

    def __pow__(self, n: int):
        if not isinstance(n, int):
            return NotImplemented
        if n < 0:
            return self.inverse() ** (-n)
        out, base = QuadSurd(1), self
        while n:
            if n & 1:
                out = out * base
            base = base * base
            n >>= 1
        return out

    # -- identity ----------------------------------------------------------
    def __eq__(self, other):
        if isinstance(other, QuadSurd):
            return (self.a, self.b, self.d, self.c) == (other.a, other.b, other.d, other.c)
        if isinstance(other, AlgebraicValue):
            return other == self
        if isinstance(other, (int, Fraction, Rational)):
            return self.b == 0 and Fraction(self.a, self.c) == other
        return NotImplemented

    def __hash__(self):
        if self.b == 0:
            return hash(Fraction(self.a, self.c))
        return hash((self.a, self.b, self.d, self.c))

    def __repr__(self):
        return f"QuadSurd({self.a}, {self.b}, {self.d}, {self.c})"

    def __str__(self):
        return _format_surd(self.a, self.b, self.d, self.c)

    def as_tuple(self) -> tuple[int, int, int, int]:
        return self.a, self.b, self.d, self.c


def _format_surd(a: int, b: int, d: int, c: int) -> str:
    if b == 0:
        return str(a) if c == 1 else f"{a}/{c}"
    mag = abs(b)
    rad = f"√{d}" if mag == 1 else f"{mag}√{d}"
    if a == 0:
        num = ("-" if b < 0 else "") + rad
        return num if c == 1 else f"{num}/{c}"
    num = f"{a}{'-' if b < 0 else '+'}{rad}"
    return num if c == 1 else f"({num})/{c}"


class AlgebraicValue(_RadicalNumber):
    """Exact sum of quadratic surds, possibly over different radicands.

    Values arising from eventually periodic words are sums of at most two
    surds; the representation itself allows any number of radicands.
    """

    __slots__ = ("_t", "_key")

    def __init__(self, *parts):
        t: Terms = {}
        for p in parts:
            t = _add_terms(t, terms_of(p))
        self._set(t)

    def _set(self, t: Terms) -> None:
        object.__setattr__(self, "_t", t)
        object.__setattr__(self, "_key", tuple(sorted(t.items())))

    def __setattr__(self, name, value):
        raise AttributeError("AlgebraicValue is immutable")

    @classmethod
    def from_terms(cls, terms: Terms) -> "AlgebraicValue":
        obj = cls.__new__(cls)
        obj._set({d: Fraction(c) for d, c in terms.items() if c})
        return obj

    def _terms(self) -> Terms:
        return self._t

    @property
    def parts(self) -> tuple[QuadSurd, ...]:
        """Canonical decomposition: rational part folded into the first surd."""
        rational = self._t.get(1, Fraction(0))
        radicands = sorted(d for d in self._t if d != 1)
        if not radicands:
            return (QuadSurd.from_rational(rational),)
        out = []
        for i, d in enumerate(radicands):
            r = rational if i == 0 else Fraction(0)
            coef = self._t[d]
            den = r.denominator * coef.denominator // math.gcd(r.denominator, coef.denominator)
            out.append(QuadSurd(int(r * den), int(coef * den), d, den))
        return tuple(out)

    @property
    def radicands(self) -> tuple[int, ...]:
        return tuple(sorted(d for d in self._t if d != 1))

    def as_surd(self) -> QuadSurd:
        """The value as a single :class:`QuadSurd` (at most one radicand)."""
        p = self.parts
        if len(p) != 1:
            raise ValidationError("value involves more than one radicand")
        return p[0]

    def __add__(self, other):
        if isinstance(other, (AlgebraicValue, QuadSurd, int, Fraction, Rational)):
            return AlgebraicValue.from_terms(_add_terms(self._t, terms_of(other)))
        return NotImplemented

    __radd__ = __add__

    def __neg__(self):
        return AlgebraicValue.from_terms({d: -c for d, c in self._t.items()})

    def __sub__(self, other):
        if isinstance(other, (AlgebraicValue, QuadSurd, int, Fraction, Rational)):
            return AlgebraicValue.from_terms(_add_terms(self._t, terms_of(other), -1))
        return NotImplemented

    def __rsub__(self, other):
        return (-self) + other

    def __abs__(self):
        return -self if self.sign() < 0 else self

    def __eq__(self, other):
        if isinstance(other, (AlgebraicValue, QuadSurd, int, Fraction, Rational)):
            return self._key == tuple(sorted(terms_of(other).items()))
        return NotImplemented

    def __hash__(self):
        ps = self.parts
        return hash(ps[0]) if len(ps) == 1 else hash(self._key)

    def __repr__(self):
        return f"AlgebraicValue({', '.join(repr(p) for p in self.parts)})"

    def __str__(self):
        return " + ".join(str(p) for p in self.parts).replace("+ -", "- ")


def as_algebraic(x) -> AlgebraicValue:
    if isinstance(x, AlgebraicValue):
        return x
    return AlgebraicValue(x)
