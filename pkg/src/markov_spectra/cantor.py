"""Gauss-Cantor sets given by a digit alphabet and forbidden words.

Text format::

    alphabet=1,2; forbidden=21212,2121_3
    blocks=1|2_2

A letter followed by a one-digit ``_k`` (or ``_{k}`` for any count) repeats it ``k`` times, so
``2121_3`` is ``2,1,2,1,1,1``.  Letters above 9 are written ``[10]``.
"""

from __future__ import annotations

import csv
import io
import math
import os
import re
from collections import deque
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from typing import Iterator, NamedTuple, Sequence

from .algebraic import QuadSurd
from .cf import PeriodicCF, matrix, periodic_value
from .exceptions import (EmptyLanguageError, InvalidWordError, ResourceError,
                         UndefinedThicknessError, ValidationError)

DEFAULT_BUDGET = 10**7

_TOKEN = re.compile(r"(\d|\[\d+\])(?:_(\d|\{\d+\}))?")


def expand_word(text: str) -> tuple[int, ...]:
    """``'2_3121_22_21'`` -> ``(2,2,2,1,2,1,1,2,2,1)``."""
    text = text.strip()
    if not text:
        raise InvalidWordError("empty word")
    out: list[int] = []
    pos = 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m:
            raise InvalidWordError(f"malformed word {text!r} at position {pos}")
        letter = int(m.group(1).strip("[]"))
        count = int(m.group(2).strip("{}")) if m.group(2) else 1
        if count < 1 or letter < 1:
            raise InvalidWordError(f"malformed word {text!r}")
        out.extend([letter] * count)
        pos = m.end()
    return tuple(out)


def format_word(word: Sequence[int]) -> str:
    """Inverse of :func:`expand_word`, compressing runs with subscripts."""
    parts = []
    i = 0
    while i < len(word):
        j = i
        while j < len(word) and word[j] == word[i]:
            j += 1
        a, run = word[i], j - i
        sym = str(a) if a < 10 else f"[{a}]"
        if run == 1:
            parts.append(sym)
        else:
            # a bare multi-digit count would swallow the next letter
            parts.append(f"{sym}_{run}" if run < 10 else f"{sym}_{{{run}}}")
        i = j
    return "".join(parts)


# -- automata -------------------------------------------------------------------

class Automaton:
    """Trimmed deterministic automaton: every state is reachable from the
    start state and has an infinite future."""

    def __init__(self, start: int, delta: list[dict[int, int]]):
        self.start = start
        self.delta = delta

    @property
    def n_states(self) -> int:
        return len(self.delta)

    def letters(self, s: int) -> list[int]:
        return sorted(self.delta[s])

    def run(self, word: Sequence[int], state: int | None = None) -> int | None:
        s = self.start if state is None else state
        for a in word:
            s = self.delta[s].get(a)
            if s is None:
                return None
        return s

    def count_words(self, n: int) -> int:
        counts = [0] * self.n_states
        counts[self.start] = 1
        for _ in range(n):
            nxt = [0] * self.n_states
            for s, c in enumerate(counts):
                if c:
                    for t in self.delta[s].values():
                        nxt[t] += c
            counts = nxt
        return sum(counts)

    def words(self, n: int, state: int | None = None) -> Iterator[tuple[tuple[int, ...], int]]:
        """Admissible words of length ``n`` in lexicographic order, with end state."""
        s0 = self.start if state is None else state
        stack = [((), s0)]
        while stack:
            w, s = stack.pop()
            if len(w) == n:
                yield w, s
                continue
            for a in sorted(self.delta[s], reverse=True):
                stack.append((w + (a,), self.delta[s][a]))

    def is_strongly_connected(self) -> bool:
        fwd = _reach(self.delta, self.start)
        rev: list[dict[int, int]] = [dict() for _ in self.delta]
        for s, d in enumerate(self.delta):
            for a, t in d.items():
                rev[t][len(rev[t])] = s
        return len(fwd) == self.n_states and len(_reach(rev, self.start)) == self.n_states


def _reach(delta, start) -> set[int]:
    seen = {start}
    queue = deque([start])
    while queue:
        s = queue.popleft()
        for t in delta[s].values():
            if t not in seen:
                seen.add(t)
                queue.append(t)
    return seen


def _forbidden_dfa(alphabet, forbidden):
    """Aho-Corasick automaton over ``alphabet`` with match states removed
    (returned as ``None`` targets)."""
    goto: list[dict[int, int]] = [{}]
    bad = [False]
    for w in forbidden:
        s = 0
        for a in w:
            if a not in goto[s]:
                goto.append({})
                bad.append(False)
                goto[s][a] = len(goto) - 1
            s = goto[s][a]
        bad[s] = True
    fail = [0] * len(goto)
    delta: list[dict[int, int]] = [dict() for _ in goto]
    order = deque()
    for a in alphabet:
        t = goto[0].get(a)
        if t is None:
            delta[0][a] = 0
        else:
            delta[0][a] = t
            order.append(t)
    while order:
        s = order.popleft()
        bad[s] = bad[s] or bad[fail[s]]
        for a in alphabet:
            t = goto[s].get(a)
            if t is None:
                delta[s][a] = delta[fail[s]][a]
            else:
                fail[t] = delta[fail[s]][a]
                delta[s][a] = t
                order.append(t)
    return 0, [{a: t for a, t in d.items() if not bad[t]} for d in delta], bad


def _block_dfa(blocks):
    """Subset construction for free concatenations of ``blocks``."""
    def step(states, a):
        out = set()
        for st in states:
            if st == ():  # block boundary
                cands = [(b, 0) for b in range(len(blocks))]
            else:
                cands = [st]
            for b, i in cands:
                if blocks[b][i] == a:
                    out.add(() if i + 1 == len(blocks[b]) else (b, i + 1))
        return frozenset(out)

    letters = sorted({a for b in blocks for a in b})
    start = frozenset({()})
    index = {start: 0}
    delta: list[dict[int, int]] = [{}]
    queue = deque([start])
    while queue:
        S = queue.popleft()
        for a in letters:
            T = step(S, a)
            if not T:
                continue
            if T not in index:
                index[T] = len(delta)
                delta.append({})
                queue.append(T)
            delta[index[S]][a] = index[T]
    return 0, delta


def _product(d1, d2, start=(0, 0)):
    index = {start: 0}
    delta: list[dict[int, int]] = [{}]
    queue = deque([start])
    while queue:
        s1, s2 = key = queue.popleft()
        for a, t1 in d1[s1].items():
            t2 = d2[s2].get(a)
            if t2 is None:
                continue
            t = (t1, t2)
            if t not in index:
                index[t] = len(delta)
                delta.append({})
                queue.append(t)
            delta[index[key]][a] = index[t]
    return delta


def _trim(start, delta) -> Automaton | None:
    alive = set(_reach(delta, start))
    changed = True
    while changed:
        changed = False
        for s in list(alive):
            if not any(t in alive for t in delta[s].values()):
                alive.discard(s)
                changed = True
    if start not in alive:
        return None
    # renumber in BFS order so that results never depend on construction order
    pruned = {s: {a: t for a, t in delta[s].items() if t in alive} for s in alive}
    order = [start]
    pos = {start: 0}
    for s in order:
        for a in sorted(pruned[s]):
            t = pruned[s][a]
            if t not in pos:
                pos[t] = len(order)
                order.append(t)
    return Automaton(0, [{a: pos[t] for a, t in sorted(pruned[s].items())} for s in order])


# -- specs ------------------------------------------------------------------------

@dataclass(frozen=True)
class SubshiftSpec:
    alphabet: tuple[int, ...]
    forbidden: tuple[tuple[int, ...], ...] = ()
    blocks: tuple[tuple[int, ...], ...] | None = None
    name: str = field(default="", compare=False)

    def __post_init__(self):
        blocks = None
        if self.blocks is not None:
            blocks = tuple(sorted({tuple(b) for b in self.blocks}))
            if not blocks or any(not b for b in blocks):
                raise ValidationError("blocks must be non-empty words")
        alphabet = tuple(sorted(set(self.alphabet)))
        if not alphabet and blocks:
            alphabet = tuple(sorted({a for b in blocks for a in b}))
        if not alphabet:
            raise ValidationError("alphabet must be non-empty")
        if any(isinstance(a, bool) or not isinstance(a, int) or a < 1 for a in alphabet):
            raise ValidationError("alphabet letters must be integers >= 1")
        forbidden = tuple(sorted({tuple(w) for w in self.forbidden}, key=lambda w: (len(w), w)))
        for w in forbidden + (blocks or ()):
            if not w:
                raise ValidationError("empty word")
            if any(a not in alphabet for a in w):
                raise ValidationError(f"word {format_word(w)} uses letters outside the alphabet")
        object.__setattr__(self, "alphabet", alphabet)
        object.__setattr__(self, "forbidden", forbidden)
        object.__setattr__(self, "blocks", blocks)

    # -- text form -------------------------------------------------------------
    @classmethod
    def parse(cls, text: str, name: str = "") -> "SubshiftSpec":
        fields: dict[str, str] = {}
        for part in re.split(r"[;\n]", text):
            part = part.split("#", 1)[0].strip()
            if not part:
                continue
            if "=" not in part:
                raise ValidationError(f"expected key=value, got {part!r}")
            key, value = (s.strip() for s in part.split("=", 1))
            if key not in ("alphabet", "forbidden", "blocks", "name"):
                raise ValidationError(f"unknown key {key!r}")
            fields[key] = value
        alphabet: tuple[int, ...] = ()
        if fields.get("alphabet"):
            try:
                alphabet = tuple(int(a) for a in fields["alphabet"].split(","))
            except ValueError:
                raise ValidationError(f"bad alphabet {fields['alphabet']!r}") from None
        forbidden = tuple(expand_word(w) for w in fields.get("forbidden", "").split(",") if w.strip())
        blocks = None
        if "blocks" in fields:
            blocks = tuple(expand_word(b) for b in fields["blocks"].split("|"))
        return cls(alphabet, forbidden, blocks, name=fields.get("name", name))

    @classmethod
    def from_file(cls, path) -> "SubshiftSpec":
        try:
            with open(path, encoding="utf-8") as fh:
                text = fh.read()
        except OSError as exc:
            raise ValidationError(f"cannot read spec file {path!r}: {exc.strerror}") from None
        return cls.parse(text)

    def to_text(self) -> str:
        parts = [f"name={self.name}"] if self.name else []
        parts.append(f"alphabet={','.join(map(str, self.alphabet))}")
        if self.blocks is not None:
            parts.append("blocks=" + "|".join(format_word(b) for b in self.blocks))
        if self.forbidden:
            parts.append("forbidden=" + ",".join(format_word(w) for w in self.forbidden))
        return "; ".join(parts)

    def __str__(self):
        return self.to_text()

    # -- structure ---------------------------------------------------------------
    @classmethod
    def full(cls, n: int) -> "SubshiftSpec":
        """``C(n)``: all digits ``1..n``."""
        if n < 1:
            raise ValidationError("n must be >= 1")
        return cls(tuple(range(1, n + 1)), name=f"C({n})")

    @cached_property
    def automaton(self) -> Automaton:
        start, fdelta, _ = _forbidden_dfa(self.alphabet, self.forbidden)
        if self.blocks is not None:
            bstart, bdelta = _block_dfa(self.blocks)
            delta = _product(bdelta, fdelta, (bstart, start))
            start = 0
        else:
            delta = fdelta
        auto = _trim(start, delta)
        if auto is None:
            raise EmptyLanguageError(f"no infinite admissible sequence for {self.to_text()!r}")
        return auto

    def is_admissible(self, word: Sequence[int]) -> bool:
        """True when ``word`` is a prefix of some infinite admissible sequence."""
        return self.automaton.run(word) is not None


def validate(spec) -> SubshiftSpec:
    """Normalize ``spec`` (text or :class:`SubshiftSpec`) and check that it
    admits at least one infinite sequence."""
    if isinstance(spec, str):
        spec = SubshiftSpec.parse(spec)
    if not isinstance(spec, SubshiftSpec):
        raise ValidationError(f"expected a SubshiftSpec, got {type(spec).__name__}")
    # drop forbidden words containing a shorter forbidden word
    kept: list[tuple[int, ...]] = []
    for w in spec.forbidden:
        if not any(_contains(w, v) for v in kept):
            kept.append(w)
    spec = SubshiftSpec(spec.alphabet, tuple(kept), spec.blocks, name=spec.name)
    spec.automaton  # raises on an empty language
    return spec


def _contains(w, v) -> bool:
    n = len(v)
    return any(w[i:i + n] == v for i in range(len(w) - n + 1))


P_WORDS = ("21212", "2121_3", "1_3212", "12121_2", "1_22121", "2_3121_22_21",
           "12_21_2212_3", "12_3121_22_2", "2_21_2212_31")

PRESETS = {
    "C4": "name=C(4); alphabet=1,2,3,4",
    "E2": "name=E2; alphabet=1,2",
    "X": "name=X; alphabet=1,2; forbidden=" + ",".join(P_WORDS),
    "K122": "name=K({1,2_2}); blocks=1|2_2",
}


def preset(name: str) -> SubshiftSpec:
    m = re.fullmatch(r"C\(?(\d+)\)?", name)
    if m:
        return SubshiftSpec.full(int(m.group(1)))
    try:
        return validate(SubshiftSpec.parse(PRESETS[name]))
    except KeyError:
        raise ValidationError(f"unknown preset {name!r}; known: {sorted(PRESETS)}") from None


def load_spec(text_or_path) -> SubshiftSpec:
    """Preset name, spec text, or path to a spec file.

    A missing file named after a preset (``X.spec``) falls back to the preset.
    """
    s = str(text_or_path)
    if s in PRESETS or re.fullmatch(r"C\(?\d+\)?", s):
        return preset(s)
    if "=" in s:
        return validate(SubshiftSpec.parse(s))
    if not os.path.exists(s):
        stem = os.path.basename(s).removesuffix(".spec")
        if stem in PRESETS:
            return preset(stem)
    return validate(SubshiftSpec.from_file(s))


# -- cylinders ----------------------------------------------------------------------

def cylinder(word: Sequence[int]) -> tuple[Fraction, Fraction]:
    """Closed interval of all ``[0; word, t]`` with ``t >= 1``."""
    p, pp, q, qq = matrix((0,) + tuple(word))
    a, b = Fraction(p, q), Fraction(p + pp, q + qq)
    return (a, b) if a <= b else (b, a)


class Interval(NamedTuple):
    lo: Fraction
    hi: Fraction
    word: tuple[int, ...]

    @property
    def length(self) -> Fraction:
        return self.hi - self.lo


@dataclass(frozen=True)
class IntervalCover:
    depth: int
    intervals: tuple[Interval, ...]

    def __len__(self):
        return len(self.intervals)

    def __iter__(self):
        return iter(self.intervals)

    @property
    def total_length(self) -> Fraction:
        return sum((iv.length for iv in self.intervals), Fraction(0))

    @property
    def hull(self) -> tuple[Fraction, Fraction]:
        return self.intervals[0].lo, self.intervals[-1].hi

    def locate(self, x) -> Interval | None:
        """Interval containing ``x`` (any exactly comparable number)."""
        lo, hi = 0, len(self.intervals)
        while lo < hi:
            mid = (lo + hi) // 2
            if self.intervals[mid].hi < x:
                lo = mid + 1
            else:
                hi = mid
        for iv in self.intervals[lo:lo + 2]:
            if iv.lo <= x <= iv.hi:
                return iv
        return None

    def to_csv(self) -> str:
        buf = io.StringIO()
        out = csv.writer(buf, lineterminator="\n")
        out.writerow(["word", "lo", "hi"])
        for iv in self.intervals:
            out.writerow([format_word(iv.word), str(iv.lo), str(iv.hi)])
        return buf.getvalue()


def cylinder_cover(spec, depth: int, budget: int = DEFAULT_BUDGET) -> IntervalCover:
    """Full cylinders of every admissible word of length ``depth``, sorted."""
    spec = validate(spec) if not isinstance(spec, SubshiftSpec) else spec
    if depth < 1:
        raise ValidationError("depth must be >= 1")
    auto = spec.automaton
    count = auto.count_words(depth)
    if count > budget:
        raise ResourceError(f"depth {depth} needs {count} intervals, budget is {budget}")
    ivs = [Interval(*cylinder(w), w) for w, _ in auto.words(depth)]
    ivs.sort(key=lambda iv: iv.lo)
    return IntervalCover(depth, tuple(ivs))


# -- restricted hulls ----------------------------------------------------------------

def _extreme(auto: Automaton, state: int, want_max: bool) -> QuadSurd:
    """``min`` or ``max`` of ``[0; gamma]`` over sequences accepted from ``state``.

    ``[0; a1, a2, ...]`` decreases in ``a1``, increases in ``a2`` and so on,
    so the extreme sequence is the greedy one picking the largest or smallest
    letter alternately; it is eventually periodic because the pair
    (state, parity) recurs.
    """
    seen: dict[tuple[int, int], int] = {}
    digits: list[int] = []
    s, parity = state, 0
    while (s, parity) not in seen:
        seen[(s, parity)] = len(digits)
        letters = auto.letters(s)
        # position 1 (parity 0): small digit -> large value
        take_small = (parity == 0) == want_max
        a = letters[0] if take_small else letters[-1]
        digits.append(a)
        s, parity = auto.delta[s][a], 1 - parity
    k = seen[(s, parity)]
    return periodic_value(PeriodicCF((0,) + tuple(digits[:k]), tuple(digits[k:])))


class _Hulls:
    """Restricted hull data of every automaton state with rational enclosures."""

    def __init__(self, spec: SubshiftSpec, bits: int = 96):
        self.auto = auto = spec.automaton
        self.lo = [_extreme(auto, s, False) for s in range(auto.n_states)]
        self.hi = [_extreme(auto, s, True) for s in range(auto.n_states)]
        self.bits = bits
        self.lo_enc = [_enc(v, bits) for v in self.lo]
        self.hi_enc = [_enc(v, bits) for v in self.hi]

    def children(self, s: int) -> list[tuple[tuple[Fraction, Fraction], tuple[Fraction, Fraction]]]:
        """Enclosed child hulls ``[1/(a + max), 1/(a + min)]`` left to right;
        each endpoint is a (lower, upper) pair."""
        out = []
        for a in reversed(self.auto.letters(s)):
            t = self.auto.delta[s][a]
            (mlo, mhi), (nlo, nhi) = self.hi_enc[t], self.lo_enc[t]
            left = (1 / (a + mhi), 1 / (a + mlo))
            right = (1 / (a + nhi), 1 / (a + nlo))
            out.append((left, right))
        return out


def _enc(v: QuadSurd, bits: int) -> tuple[Fraction, Fraction]:
    e = v.enclosure(bits)
    return e.lo, e.hi


def restricted_hull(spec, word: Sequence[int] = ()) -> tuple[QuadSurd, QuadSurd]:
    """Exact convex hull of the part of the Cantor set inside ``cylinder(word)``."""
    spec = validate(spec) if not isinstance(spec, SubshiftSpec) else spec
    auto = spec.automaton
    s = auto.run(word)
    if s is None:
        raise InvalidWordError(f"{format_word(word)} is not admissible")
    lo, hi = _extreme(auto, s, False), _extreme(auto, s, True)
    p, pp, q, qq = matrix((0,) + tuple(word))
    # [0; word, 1/y] = (p + pp*y) / (q + qq*y)
    ends = [(p + pp * y) / (q + qq * y) for y in (lo, hi)]
    return (min(ends), max(ends))


def _rho_ranges(auto: Automaton, L: int, budget: int):
    """``(state, rho_lo, rho_hi)`` triples covering every nonempty prefix.

    ``rho = q_{n-1}/q_n = [0; a_n, ..., a_1]`` is exact for prefixes shorter
    than ``L``; deeper prefixes are grouped by their last ``L`` letters, whose
    reversal pins ``rho`` to a full cylinder.
    """
    out = []
    frontier = [((), auto.start, 1, 0)]  # word, state, q_n, q_{n-1}
    for n in range(1, L):
        nxt = []
        for w, s, q, qq in frontier:
            for a, t in auto.delta[s].items():
                q2 = a * q + qq
                r = Fraction(q, q2)
                out.append((t, r, r))
                nxt.append((w + (a,), t, q2, q))
        frontier = nxt
        if len(frontier) > budget:
            raise ResourceError(f"thickness depth {L} exceeds budget {budget}")
    seeds = set()
    for w, s, _, _ in frontier:
        for a, t in auto.delta[s].items():
            seeds.add((t, (w + (a,))[-L:]))
    seen = set(seeds)
    queue = deque(seeds)
    while queue:
        s, v = queue.popleft()
        for a, t in auto.delta[s].items():
            key = (t, v[1:] + (a,))
            if key not in seen:
                seen.add(key)
                if len(seen) > budget:
                    raise ResourceError(f"thickness depth {L} exceeds budget {budget}")
                queue.append(key)
    for s, v in seen:
        lo, hi = cylinder(tuple(reversed(v)))
        out.append((s, lo, hi))
    return out


def thickness_bound(spec, depth: int, budget: int = DEFAULT_BUDGET) -> float:
    """Certified lower bound for the Newhouse thickness.

    The set is presented by restricted cylinder hulls; each gap between
    adjacent children of a hull is compared with the two neighbouring child
    hulls.  The infimum of these bridge/gap ratios bounds the thickness from
    below.  Under the branch map ``y -> (p + p'y)/(q + q'y)`` the ratio for
    child ``[a, b]`` and gap ``[b, c]`` becomes
    ``(b - a)(1 + rho c) / ((c - b)(1 + rho a))`` with ``rho = q'/q``; it is
    monotone in ``rho``, so an interval of ``rho`` values suffices.  Larger
    ``depth`` narrows those intervals.
    """
    spec = validate(spec) if not isinstance(spec, SubshiftSpec) else spec
    if depth < 1:
        raise ValidationError("depth must be >= 1")
    hulls = _Hulls(spec)
    auto = hulls.auto
    gaps_by_state = {s: _gap_triples(hulls.children(s)) for s in range(auto.n_states)}
    items = [(auto.start, Fraction(0), Fraction(0))] + _rho_ranges(auto, depth, budget)
    best: Fraction | None = None
    for s, rlo, rhi in items:
        for A_len, gap, B_len, a_hi, c_lo, b_lo, d_hi in gaps_by_state[s]:
            # left bridge ratio increases with rho, right bridge ratio decreases
            left = A_len * (1 + rlo * c_lo) / (gap * (1 + rlo * a_hi))
            right = B_len * (1 + rhi * b_lo) / (gap * (1 + rhi * d_hi))
            r = min(left, right)
            if best is None or r < best:
                best = r
    if best is None:
        raise UndefinedThicknessError("the set has no gaps: it is a single point")
    return _float_down(best)


def _gap_triples(children):
    """Per gap: bridge lengths (lower bounds), gap length (upper bound) and
    the endpoint bounds that make the distortion factor smallest."""
    out = []
    for (A, B) in zip(children, children[1:]):
        (a_end, b_end), (c_end, d_end) = A, B
        a_lo, a_hi = a_end
        b_lo, b_hi = b_end
        c_lo, c_hi = c_end
        d_lo, d_hi = d_end
        A_len = b_lo - a_hi
        B_len = d_lo - c_hi
        gap = c_hi - b_lo
        # (1 + rho c)/(1 + rho a): lower bound needs small c, large a
        out.append((A_len, gap, B_len, a_hi, c_lo, b_lo, d_hi))
    return out


def _float_down(x: Fraction) -> float:
    f = float(x)
    return f if Fraction(f) <= x else math.nextafter(f, -math.inf)


def hull_and_max_gap(spec) -> tuple[tuple[QuadSurd, QuadSurd], float]:
    """Exact hull of the whole set and an upper bound for its largest gap.

    Gaps below the first level are images of first-level gaps of some state
    under branch maps with derivative at most one, so the largest first-level
    gap over all states bounds every gap.
    """
    spec = validate(spec) if not isinstance(spec, SubshiftSpec) else spec
    hulls = _Hulls(spec)
    worst = Fraction(0)
    for s in range(hulls.auto.n_states):
        kids = hulls.children(s)
        for (_, (b_lo, _)), ((_, c_hi), _) in zip(kids, kids[1:]):
            worst = max(worst, c_hi - b_lo)
    s0 = hulls.auto.start
    up = float(worst)
    if Fraction(up) < worst:
        up = math.nextafter(up, math.inf)
    return (hulls.lo[s0], hulls.hi[s0]), up
