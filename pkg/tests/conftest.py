"""Shared oracles and strategies.

The oracles here evaluate continued fractions directly with mpmath at high
precision; they share no code with the package's exact arithmetic.
"""

from fractions import Fraction

import mpmath
import pytest
from hypothesis import settings
from hypothesis import strategies as st

mpmath.mp.dps = 60

settings.register_profile("default", deadline=None, max_examples=60)
settings.load_profile("default")


def mp_cf(digits):
    """[d0; d1, d2, ...] for a finite digit list, by backward recursion."""
    x = mpmath.mpf(digits[-1])
    for d in reversed(digits[:-1]):
        x = d + 1 / x
    return x


def mp_periodic(pre, period, reps=120):
    return mp_cf(list(pre) + list(period) * reps)


def mp_word_f(word, n=0, reach=240):
    """f at position n of a BiWord, from digit windows alone."""
    right = [word.digit(n + i) for i in range(reach)]
    left = [word.digit(n - 1 - i) for i in range(reach)]
    return mp_cf(right) + 1 / mp_cf(left)


def _mp(x):
    if isinstance(x, Fraction):
        return mpmath.mpf(x.numerator) / x.denominator
    return mpmath.mpf(x)


def mp_close(a, b, tol=mpmath.mpf(10) ** -40):
    return abs(_mp(a) - _mp(b)) < tol


def surd_mp(v):
    """mpmath value of a QuadSurd or AlgebraicValue from its exact parts."""
    from markov_spectra.algebraic import AlgebraicValue, QuadSurd
    parts = v.parts if isinstance(v, AlgebraicValue) else (v,)
    total = mpmath.mpf(0)
    for p in parts:
        a, b, d, c = p.as_tuple()
        total += (a + b * mpmath.sqrt(d)) / c
    return total


digit_lists = st.lists(st.integers(1, 6), min_size=1, max_size=12)
periods = st.lists(st.integers(1, 4), min_size=1, max_size=6)


@st.composite
def biwords(draw, max_digit=4):
    from markov_spectra.words import BiWord
    d = st.integers(1, max_digit)
    return BiWord(
        draw(st.lists(d, min_size=1, max_size=4)),
        draw(st.lists(d, max_size=4)),
        draw(st.lists(d, max_size=4)),
        draw(st.lists(d, min_size=1, max_size=4)),
    )


@pytest.fixture(scope="session")
def presets():
    from markov_spectra.cantor import preset
    return {n: preset(n) for n in ("C4", "E2", "X", "K122")}


def pytest_terminal_summary(terminalreporter):
    import sys
    mod = sys.modules.get("test_acceptance")
    if mod is None or not mod.RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(mod.RESULTS):
        terminalreporter.write_line(mod.RESULTS[n])
