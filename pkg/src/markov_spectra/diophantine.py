"""Convergent-level diagnostics and the Khintchine-Levy growth constant."""

from __future__ import annotations

import math
import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from .algebraic import QuadSurd
from .cf import PeriodicCF, check_digits, convergents, finite_value, periodic_value
from .exceptions import ValidationError

KHINTCHINE_LEVY = math.exp(math.pi ** 2 / (12 * math.log(2)))


@dataclass(frozen=True)
class ApproximationRow:
    n: int
    p: int
    q: int
    scaled_error: float          # q_n^2 |alpha - p_n/q_n|
    identity_residual: Fraction  # exact; zero when the identity holds
    half_ok: bool                # n or n+1 beats 1/(2q^2)
    hurwitz_ok: bool             # one of n-1, n, n+1 beats 1/(sqrt5 q^2)


@dataclass(frozen=True)
class ApproximationReport:
    alpha: object
    rows: list[ApproximationRow] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return all(r.identity_residual == 0 and r.half_ok and r.hurwitz_ok for r in self.rows)

    @property
    def max_identity_residual(self) -> Fraction:
        return max((abs(r.identity_residual) for r in self.rows), default=Fraction(0))


def _exact_abs(x):
    return -x if x < 0 else x


def approximation_diagnostics(word, n_max: int) -> ApproximationReport:
    """Check the convergent error identity and the classical best-approximation
    facts for ``n = 0 .. n_max``.

    ``word`` is a :class:`PeriodicCF` (exact quadratic irrational) or a digit
    list ``[a0, ..., aN]`` with ``N >= n_max + 2``; the identity is then
    verified for the rational ``[a0; ..., aN]``, for which it is equally exact.
    """
    if n_max < 1:
        raise ValidationError("n_max must be >= 1")
    if isinstance(word, PeriodicCF):
        digits = word.digits(n_max + 3)
        alpha = periodic_value(word)

        def tail(k):
            return periodic_value(PeriodicCF(*_tail(word, k)))
    else:
        digits = list(check_digits(word))
        if len(digits) < n_max + 3:
            raise ValidationError(
                f"need at least {n_max + 3} digits for n_max={n_max}, got {len(digits)}")
        alpha = finite_value(digits)

        def tail(k):
            return finite_value(digits[k:])

    conv = [pq for _, pq in convergents(digits[: n_max + 3])]

    def err(k):
        p, q = conv[k]
        return _exact_abs(alpha - Fraction(p, q))

    def beats_half(k):
        q = conv[k][1]
        return err(k) < Fraction(1, 2 * q * q)

    def beats_hurwitz(k):
        # |e| < 1/(sqrt5 q^2)  <=>  5 e^2 q^4 < 1
        q = conv[k][1]
        e = err(k)
        return e * e * (5 * q ** 4) < 1

    rows = []
    for n in range(n_max + 1):
        p, q = conv[n]
        q_prev = conv[n - 1][1] if n else 0
        beta = Fraction(q_prev, q)
        e = err(n)
        residual = e * (tail(n + 1) + beta) * (q * q) - 1
        residual = residual if isinstance(residual, Fraction) else _as_rational(residual)
        rows.append(ApproximationRow(
            n=n, p=p, q=q,
            scaled_error=float(e * (q * q)),
            identity_residual=residual,
            half_ok=beats_half(n) or beats_half(n + 1),
            hurwitz_ok=any(beats_hurwitz(k) for k in (n - 1, n, n + 1) if k >= 0),
        ))
    return ApproximationReport(alpha, rows)


def _as_rational(x) -> Fraction:
    if isinstance(x, QuadSurd):
        if x.b:
            # nonzero irrational residual: report its float magnitude exactly enclosed
            return x.enclosure(128).mid
        return x.to_fraction()
    return Fraction(x)


def _tail(p: PeriodicCF, k: int):
    if k < len(p.preperiod):
        return p.preperiod[k:], p.period
    r = (k - len(p.preperiod)) % len(p.period)
    return (), p.period[r:] + p.period[:r]


def growth_rate(digits: Sequence[int]) -> float:
    """``q_n ** (1/n)`` for ``n = len(digits) - 1``."""
    digits = check_digits(digits)
    n = len(digits) - 1
    if n < 1:
        raise ValidationError("need at least two digits")
    q = convergents(digits)[-1][1][1]
    return math.exp(math.log(q) / n)


def _sample_log_q(rng: random.Random, depth: int) -> float:
    bits = 4 * depth + 64
    while True:
        u = rng.getrandbits(bits)
        if u == 0:
            continue
        x, y = 1 << bits, u
        q_prev, q = 0, 1
        for _ in range(depth):
            if y == 0:
                break
            a, r = divmod(x, y)
            x, y = y, r
            q_prev, q = q, a * q + q_prev
        else:
            return math.log(q)
        bits *= 2


def khintchine_levy_estimate(samples: int, depth: int, seed: int) -> float:
    """Monte Carlo estimate of ``lim q_n^(1/n)`` for uniform ``alpha``.

    Each sample is a uniform dyadic rational with ``4*depth + 64`` random
    bits, enough for its first ``depth`` partial quotients to match those of
    every real in the same dyadic cell with overwhelming probability.  The
    estimate is the geometric mean of ``q_depth^(1/depth)``.
    """
    if samples < 1:
        raise ValidationError("samples must be >= 1")
    if depth < 10:
        raise ValidationError("depth must be >= 10")
    rng = random.Random(seed)
    total = math.fsum(_sample_log_q(rng, depth) for _ in range(samples))
    return math.exp(total / (samples * depth))
