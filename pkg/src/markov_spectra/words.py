"""Two-sided eventually periodic digit sequences with a marked origin.

Text syntax: ``(L)* c0 | c1 (R)*`` -- ``L`` repeats toward minus infinity,
``c0`` is the left core, ``|`` marks the origin (index 0 is the first digit
to its right), ``c1`` is the right core and ``R`` repeats toward plus
infinity.  Digits are comma separated; cores may be empty.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass

from .cf import check_digits
from .exceptions import InvalidWordError

_DIGITS = r"[0-9,\s]*"
_WORD_RE = re.compile(
    rf"^\s*\(({_DIGITS})\)\*\s*({_DIGITS})\|\s*({_DIGITS}?)\s*\(({_DIGITS})\)\*\s*$"
)


def _parse_list(text: str) -> tuple[int, ...]:
    text = text.strip().strip(",").strip()
    if not text:
        return ()
    try:
        return tuple(int(tok) for tok in text.split(","))
    except ValueError:
        raise InvalidWordError(f"bad digit list {text!r}") from None


def _rotate(seq: tuple[int, ...], k: int) -> tuple[int, ...]:
    if not seq:
        return seq
    k %= len(seq)
    return seq[k:] + seq[:k]


def _primitive(word: tuple[int, ...]) -> tuple[int, ...]:
    n = len(word)
    for k in range(1, n + 1):
        if n % k == 0 and word[:k] * (n // k) == word:
            return word[:k]
    return word


@dataclass(frozen=True)
class BiWord:
    left_period: tuple[int, ...]
    left_core: tuple[int, ...]
    right_core: tuple[int, ...]
    right_period: tuple[int, ...]

    def __post_init__(self):
        for name in ("left_period", "left_core", "right_core", "right_period"):
            seq = check_digits(tuple(getattr(self, name)), allow_head=False)
            object.__setattr__(self, name, seq)
        if not self.left_period or not self.right_period:
            raise InvalidWordError("both periods must be non-empty")

    # -- construction --------------------------------------------------------
    @classmethod
    def parse(cls, text: str) -> "BiWord":
        m = _WORD_RE.match(text)
        if not m:
            raise InvalidWordError(f"cannot parse word {text!r}")
        lp, lc, rc, rp = (_parse_list(g) for g in m.groups())
        return cls(lp, lc, rc, rp)

    @classmethod
    def periodic(cls, period) -> "BiWord":
        """Purely periodic word with ``period[0]`` at the origin."""
        period = tuple(period)
        return cls(period, (), (), period)

    @classmethod
    def from_expansions(cls, alpha_digits, alpha_period, beta_digits, beta_period) -> "BiWord":
        """Word whose ``f`` value is ``[alpha...] + [0; beta...]``.

        ``alpha_digits`` are ``a0, a1, ...`` before ``alpha_period``;
        ``beta_digits`` are ``a_{-1}, a_{-2}, ...`` before ``beta_period``
        (both listed in reading order of their continued fractions).
        """
        return cls(tuple(reversed(tuple(beta_period))), tuple(reversed(tuple(beta_digits))),
                   tuple(alpha_digits), tuple(alpha_period))

    def __str__(self):
        def j(s):
            return ",".join(map(str, s))

        left = f"({j(self.left_period)})*" + (f" {j(self.left_core)}" if self.left_core else "")
        right = (f"{j(self.right_core)} " if self.right_core else "") + f"({j(self.right_period)})*"
        return f"{left} | {right}"

    # -- sequence access -----------------------------------------------------
    def digit(self, n: int) -> int:
        rc, lc = self.right_core, self.left_core
        if n >= 0:
            if n < len(rc):
                return rc[n]
            return self.right_period[(n - len(rc)) % len(self.right_period)]
        k = -n  # a_{-k}
        if k <= len(lc):
            return lc[-k]
        return self.left_period[-1 - ((k - len(lc) - 1) % len(self.left_period))]

    def window(self, lo: int, hi: int) -> tuple[int, ...]:
        """Digits ``a_lo .. a_hi`` inclusive."""
        return tuple(self.digit(n) for n in range(lo, hi + 1))

    def right_expansion(self, n: int) -> tuple[tuple[int, ...], tuple[int, ...]]:
        """``(pre, period)`` of the sequence ``a_n, a_{n+1}, ...``."""
        m = len(self.right_core)
        if n >= m:
            return (), _rotate(self.right_period, n - m)
        pre = tuple(self.digit(i) for i in range(n, 0)) + self.right_core[max(n, 0):]
        return pre, self.right_period

    def left_expansion(self, n: int) -> tuple[tuple[int, ...], tuple[int, ...]]:
        """``(pre, period)`` of the sequence ``a_{n-1}, a_{n-2}, ...``."""
        ell = len(self.left_core)
        rev_lp = tuple(reversed(self.left_period))
        if n - 1 < -ell:
            return (), _rotate(rev_lp, -ell - n)
        pre = tuple(self.digit(i) for i in range(n - 1, -ell - 1, -1))
        return pre, rev_lp

    # -- transformations -----------------------------------------------------
    def shift(self, k: int) -> "BiWord":
        """``sigma^k``: the digit at index ``k`` moves to the origin."""
        ell, m = len(self.left_core), len(self.right_core)
        lo, hi = min(-ell, k), max(m, k)
        left_core = tuple(self.digit(i) for i in range(lo, k))
        right_core = tuple(self.digit(i) for i in range(k, hi))
        return BiWord(_rotate(self.left_period, lo + ell), left_core, right_core,
                      _rotate(self.right_period, hi - m))

    def reversed(self) -> "BiWord":
        """Mirror image about the origin: ``b_n = a_{-n}``.  ``f`` is
        invariant under this map."""
        rc, rp = self.right_core, self.right_period
        if not rc:
            rc, rp = rp[:1], _rotate(rp, 1)
        return BiWord(tuple(reversed(rp)), tuple(reversed(rc[1:])),
                      (rc[0],) + tuple(reversed(self.left_core)),
                      tuple(reversed(self.left_period)))

    def normalized(self) -> "BiWord":
        """Same sequence and origin, minimal cores and primitive periods."""
        lp, lc = _primitive(self.left_period), list(self.left_core)
        rc, rp = list(self.right_core), _primitive(self.right_period)
        while lc and lc[0] == lp[0]:
            lc.pop(0)
            lp = _rotate(lp, 1)
        while rc and rc[-1] == rp[-1]:
            rc.pop()
            rp = _rotate(rp, -1)
        return BiWord(lp, tuple(lc), tuple(rc), rp)

    def same_sequence(self, other: "BiWord") -> bool:
        return self.normalized() == other.normalized()

    def is_purely_periodic(self) -> bool:
        """True when the whole bi-infinite sequence is periodic."""
        p = len(self.right_period)
        span = 2 * math.lcm(len(self.left_period), p)
        seq = self.window(-len(self.left_core) - span, len(self.right_core) + span)
        return all(seq[i] == seq[i + p] for i in range(len(seq) - p))


def as_biword(w) -> BiWord:
    if isinstance(w, BiWord):
        return w
    if isinstance(w, str):
        return BiWord.parse(w)
    raise InvalidWordError(f"expected a BiWord or word string, got {type(w).__name__}")
