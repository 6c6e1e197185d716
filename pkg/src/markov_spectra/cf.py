"""Finite and eventually periodic continued fractions."""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .algebraic import QuadSurd
from .exceptions import InvalidWordError, NotIrrationalError


def check_digits(digits: Sequence[int], *, allow_head: bool = True) -> tuple[int, ...]:
    """Validate ``[a0; a1, ...]``: ``a0`` any integer (if ``allow_head``),
    every later digit a positive integer."""
    out = []
    for i, a in enumerate(digits):
        if isinstance(a, bool) or not isinstance(a, int):
            try:
                if int(a) != a:
                    raise ValueError
                a = int(a)
            except (TypeError, ValueError):
                raise InvalidWordError(f"digit {a!r} is not an integer") from None
        if (i > 0 or not allow_head) and a < 1:
            raise InvalidWordError(f"digit {a} at index {i} must be >= 1")
        out.append(a)
    return tuple(out)


def convergents(digits: Sequence[int]) -> list[tuple[Fraction, tuple[int, int]]]:
    """Convergents ``p_n/q_n`` of ``[a0; a1, ..., aN]``.

    Returns one ``(Fraction, (p_n, q_n))`` per digit; the pair is the raw
    recurrence output (always coprime, ``q_n > 0``).
    """
    digits = check_digits(digits)
    if not digits:
        raise InvalidWordError("empty continued fraction")
    out = []
    p_prev, p = 1, digits[0]
    q_prev, q = 0, 1
    out.append((Fraction(p, q), (p, q)))
    for a in digits[1:]:
        p_prev, p = p, a * p + p_prev
        q_prev, q = q, a * q + q_prev
        out.append((Fraction(p, q), (p, q)))
    return out


def matrix(digits: Sequence[int]) -> tuple[int, int, int, int]:
    """``(p_n, p_{n-1}, q_n, q_{n-1})`` so that ``[digits..., x]`` equals
    ``(p_n x + p_{n-1}) / (q_n x + q_{n-1})``.  Empty word gives identity."""
    p, pp, q, qq = 1, 0, 0, 1
    for a in digits:
        p, pp = a * p + pp, p
        q, qq = a * q + qq, q
    return p, pp, q, qq


def finite_value(digits: Sequence[int]) -> Fraction:
    return convergents(digits)[-1][0]


def _apply(m: tuple[int, int, int, int], x):
    p, pp, q, qq = m
    return (x * p + pp) / (x * q + qq)


@dataclass(frozen=True)
class PeriodicCF:
    """``[preperiod..., overline(period)]`` in canonical form.

    The first preperiod digit (when present) is ``a0`` and may be any
    integer; all other digits are >= 1.  Canonical means the period is
    primitive and the preperiod cannot be shortened by rotating the period.
    """

    preperiod: tuple[int, ...]
    period: tuple[int, ...]

    def __post_init__(self):
        pre = check_digits(self.preperiod)
        if not self.period:
            raise InvalidWordError("period must be non-empty")
        per = check_digits(self.period, allow_head=not pre)
        if not pre and per[0] < 1:
            raise InvalidWordError("purely periodic expansion needs a positive head")
        per = _primitive_root(per)
        pre = list(pre)
        while pre and pre[-1] == per[-1] and (len(pre) > 1 or per[-1] >= 1):
            pre.pop()
            per = (per[-1],) + per[:-1]
        object.__setattr__(self, "preperiod", tuple(pre))
        object.__setattr__(self, "period", per)

    def digits(self, n: int) -> list[int]:
        """First ``n`` digits ``a0 .. a_{n-1}``."""
        out = list(self.preperiod[:n])
        while len(out) < n:
            k = len(out) - len(self.preperiod)
            out.append(self.period[k % len(self.period)])
        return out

    def value(self) -> QuadSurd:
        return periodic_value(self)

    def __str__(self):
        head = ",".join(map(str, self.preperiod))
        per = ",".join(map(str, self.period))
        return f"[{head}{';' if head else ''}({per})*]"


def _primitive_root(word: tuple[int, ...]) -> tuple[int, ...]:
    n = len(word)
    for k in range(1, n + 1):
        if n % k == 0 and word[:k] * (n // k) == word:
            return word[:k]
    return word


def purely_periodic_value(period: Sequence[int]) -> QuadSurd:
    """Value of ``[overline(period)]`` (requires ``period[0] >= 1``).

    ``x = (P x + P') / (Q x + Q')`` gives ``Q x^2 + (Q' - P) x - P' = 0``;
    the root greater than one is the value.
    """
    P, Pp, Q, Qp = matrix(period)
    A, B, C = Q, Qp - P, -Pp
    disc = B * B - 4 * A * C
    return QuadSurd(-B, 1, disc, 2 * A)


def periodic_value(p: PeriodicCF) -> QuadSurd:
    """Exact value of an eventually periodic continued fraction."""
    x = purely_periodic_value(p.period)
    if not p.preperiod:
        return x
    return _apply(matrix(p.preperiod), x)


def surd_cf(s: QuadSurd, max_steps: int = 1_000_000) -> PeriodicCF:
    """Continued fraction expansion of an irrational quadratic surd."""
    if s.b == 0:
        raise NotIrrationalError(f"{s} is rational")
    # write s = (P + sqrt(D)) / Q with Q | D - P^2
    a, b, d, c = s.a, s.b, s.d, s.c
    if b < 0:
        a, b, c = -a, -b, -c
    D = b * b * d
    P, Q = a, c
    if (D - P * P) % Q:
        P, D, Q = P * abs(Q), D * Q * Q, Q * abs(Q)
    r = math.isqrt(D)
    seen: dict[tuple[int, int], int] = {}
    digits: list[int] = []
    for _ in range(max_steps):
        key = (P, Q)
        if key in seen:
            k = seen[key]
            return PeriodicCF(tuple(digits[:k]), tuple(digits[k:]))
        seen[key] = len(digits)
        if Q > 0:
            q_digit = (P + r) // Q
        else:
            q_digit = -((P + r) // -Q) - 1
        digits.append(q_digit)
        P = q_digit * Q - P
        Q = (D - P * P) // Q
    raise RuntimeError("expansion did not become periodic")  # pragma: no cover
