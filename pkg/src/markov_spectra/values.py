"""Exact f-values, Markov values (sup over shifts) and Lagrange values
(limsup over forward shifts) of eventually periodic bi-infinite words."""

from __future__ import annotations

import math
from fractions import Fraction
from functools import lru_cache

from .algebraic import AlgebraicValue, QuadSurd
from .cf import PeriodicCF, periodic_value
from .exceptions import ValidationError
from .words import BiWord, as_biword


@lru_cache(maxsize=16384)
def _cf_value(pre: tuple[int, ...], period: tuple[int, ...]) -> QuadSurd:
    return periodic_value(PeriodicCF(pre, period))


def f_at(w: BiWord, n: int = 0) -> AlgebraicValue:
    """``f(sigma^n w) = alpha_n + beta_n``."""
    pre, per = w.right_expansion(n)
    alpha = _cf_value(pre, per)
    lpre, lper = w.left_expansion(n)
    beta = _cf_value((0,) + lpre, lper)
    return AlgebraicValue(alpha, beta)


def f_value(w) -> AlgebraicValue:
    """``alpha_0 + beta_0`` of a word, exactly."""
    return f_at(as_biword(w), 0)


def periodic_f_values(period) -> list[AlgebraicValue]:
    """``f`` at every cyclic shift of the purely periodic word."""
    period = tuple(period)
    w = BiWord.periodic(period)
    return [f_at(w, k) for k in range(len(period))]


def periodic_max(period) -> AlgebraicValue:
    return max(periodic_f_values(period))


def lagrange_value(w) -> AlgebraicValue:
    """limsup of ``f(sigma^n w)`` as ``n -> +inf``: only the right tail matters."""
    return periodic_max(as_biword(w).right_period)


def _first_mismatch(pre, per, ref, limit_extra=0):
    """First index where ``pre + per^inf`` differs from ``ref`` (a callable
    index -> digit with period ``len_ref``), or ``None`` if never."""
    seq_len = len(pre)
    horizon = seq_len + math.lcm(len(per), ref.period) + limit_extra
    for t in range(horizon):
        s = pre[t] if t < seq_len else per[(t - seq_len) % len(per)]
        r = ref(t)
        if s != r:
            return t, s, r
    return None


class _BackwardPeriod:
    """Digits of the right period read backward from just before its start."""

    def __init__(self, period):
        self.p = period
        self.period = len(period)

    def __call__(self, t):
        return self.p[(-1 - t) % self.period]


def _right_tail_candidates(w: BiWord) -> list[int]:
    """Shifts ``n >= len(right_core)`` whose f-value exceeds the limit value
    of its residue class, keeping only the first such shift per class.

    For such ``n``, ``alpha_n`` equals the periodic value exactly; ``beta_n``
    agrees with the periodic ``beta`` up to the first digit where the left
    part of ``w`` departs from the backward continuation of the period.  The
    parity of that digit's index decides the sign, and a shift by one period
    moves the index by ``p``.  The excess strictly decreases along a class,
    so the first positive shift dominates the class.
    """
    m = len(w.right_core)
    R = w.right_period
    p = len(R)
    pre, per = w.left_expansion(m)
    hit = _first_mismatch(pre, per, _BackwardPeriod(R))
    if hit is None:
        return []
    t0, s_digit, r_digit = hit
    bigger = s_digit > r_digit
    out = []
    for rho in range(p):
        k = rho + t0 + 1
        if bigger == (k % 2 == 0):
            out.append(m + rho)
        elif p % 2 == 1:
            out.append(m + rho + p)
    return out


def _with_right_core(w: BiWord) -> BiWord:
    if w.right_core:
        return w
    rp = w.right_period
    return BiWord(w.left_period, w.left_core, rp[:1], rp[1:] + rp[:1])


def markov_sup(w) -> tuple[AlgebraicValue, int | None]:
    """Exact ``sup_n f(sigma^n w)`` and a maximizing shift.

    The shift is ``None`` when the supremum is only approached along a
    periodic tail (it then equals that tail's periodic maximum).
    """
    w = _with_right_core(as_biword(w))
    ell, m = len(w.left_core), len(w.right_core)
    shifts = set(range(-ell, m))
    shifts.update(_right_tail_candidates(w))
    rev = w.reversed()
    shifts.update(-n for n in _right_tail_candidates(rev))
    best, arg = None, None
    for n in sorted(shifts, key=lambda n: (abs(n), n)):
        v = f_at(w, n)
        if best is None or v > best:
            best, arg = v, n
    for period in (w.right_period, w.left_period):
        v = periodic_max(period)
        if v > best:
            best, arg = v, None
    if w.is_purely_periodic():
        arg = max(range(len(w.right_period)), key=lambda n: f_at(w, n))
    return best, arg


def markov_value(w, tol=Fraction(1, 10**30)) -> AlgebraicValue:
    """``sup_{n in Z} f(sigma^n w)``, exact.

    The returned value refines to any requested tolerance; ``tol`` is checked
    by producing one enclosure of that width.
    """
    if tol <= 0:
        raise ValidationError("tol must be positive")
    value, _ = markov_sup(w)
    value.refine(tol)
    return value


def fibonacci(n: int) -> int:
    a, b = 0, 1
    for _ in range(n):
        a, b = b, a + b
    return a


def continuity_modulus(k: int) -> Fraction:
    """Bound on ``|f(x) - f(y)|`` when ``x`` and ``y`` agree on ``-k..k``:
    ``2 / (F_{k-1} F_k)``."""
    if k < 2:
        raise ValidationError("agreement radius must be at least 2")
    return Fraction(2, fibonacci(k - 1) * fibonacci(k))
