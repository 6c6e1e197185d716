"""Spectrum-level objects: the discrete part below 3, the named constants of
the M minus L window, quadratic forms, and dynamical spectra of subshifts."""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from typing import Mapping, Sequence

from .algebraic import AlgebraicValue, QuadSurd, as_algebraic
from .cantor import SubshiftSpec, format_word, validate
from .exceptions import ValidationError
from .markov_tree import lagrange_number, markov_numbers
from .values import f_at, f_value, markov_value
from .words import BiWord

# -- spectrum approximations ---------------------------------------------------------


@dataclass(frozen=True)
class SpectrumApprox:
    """Finite, exactly sorted and deduplicated set of spectrum values."""

    kind: str
    values: tuple[AlgebraicValue, ...]
    words: tuple[object, ...] = ()

    def __post_init__(self):
        if self.kind not in ("markov", "lagrange"):
            raise ValidationError(f"kind must be 'markov' or 'lagrange', got {self.kind!r}")

    @classmethod
    def build(cls, kind: str, pairs) -> "SpectrumApprox":
        """From ``(value, word)`` pairs; the first word seen for a value is kept."""
        best: dict = {}
        for v, w in pairs:
            v = as_algebraic(v)
            if v not in best:
                best[v] = w
        ordered = sorted(best.items(), key=_sort_key)
        return cls(kind, tuple(v for v, _ in ordered), tuple(w for _, w in ordered))

    def __len__(self):
        return len(self.values)

    def __iter__(self):
        return iter(self.values)

    def __contains__(self, x):
        return as_algebraic(x) in set(self.values)

    def issubset(self, other: "SpectrumApprox") -> bool:
        return set(self.values) <= set(other.values)


class _Key:
    """Sort key wrapping an exact value."""

    __slots__ = ("v",)

    def __init__(self, v):
        self.v = v

    def __lt__(self, other):
        return self.v < other.v


def _sort_key(item):
    return _Key(item[0])


# words realising the first three Lagrange numbers
FIXTURE_WORDS = {
    1: BiWord.periodic((1,)),
    2: BiWord.periodic((2,)),
    5: BiWord.periodic((2, 2, 1, 1)),
}


def spectrum_below_3(count: int) -> SpectrumApprox:
    """The ``count`` smallest Lagrange values, all below 3."""
    if count < 1:
        raise ValidationError("count must be >= 1")
    zs = markov_numbers(count)
    return SpectrumApprox.build("lagrange", ((lagrange_number(z), FIXTURE_WORDS.get(z, z)) for z in zs))


# -- named constants ---------------------------------------------------------------------


@dataclass(frozen=True)
class NamedConstant:
    name: str
    closed_form: object | None       # AlgebraicValue / QuadSurd, or None
    decimal: str
    word: BiWord | None = None
    printed: str | None = None       # digits as published
    cross_check: float | None = None  # |closed form (or printed) - f(word)|
    note: str = ""

    def to_dict(self) -> dict:
        return {"name": self.name,
                "closed_form": None if self.closed_form is None else str(self.closed_form),
                "decimal": self.decimal, "word": None if self.word is None else str(self.word),
                "printed": self.printed,
                "cross_check": None if self.cross_check is None else f"{self.cross_check:.3e}",
                "note": self.note}


# words written as continued fractions alpha = [a0; ...] and beta = [0; a_{-1}, ...]
ALPHA_INF_WORD = BiWord.from_expansions([2], [1, 1, 2, 2, 2, 1, 2], [1, 2, 2, 2, 1, 1, 2, 1], [2])
B_INF_LOWER_WORD = BiWord.from_expansions([2], [1, 1, 2, 2, 2, 1, 2], [], [1, 2, 2, 2, 1, 1, 2])
_BIG_PERIOD = [1, 2, 2, 2, 1, 2, 1, 1, 2, 1, 1, 2]
B_INF_UPPER_WORD = BiWord.from_expansions(
    [2, 1], _BIG_PERIOD,
    [1, 2, 2, 2, 1, 1, 2, 1, 2, 2, 2, 1, 1, 2, 1, 2, 2], _BIG_PERIOD)

B_INF_LOWER = QuadSurd(0, 1, 18229, 41)
C_CONSTANT = QuadSurd(77, 1, 18229, 82) + QuadSurd(17633692, -1, 151905, 24923467)
FREIMAN = QuadSurd(2221564096, 283748, 462, 491993569)
_SIGMA_PRINTED = "3.1181"
_B_UPPER_PRINTED = "3.2930444814"


def named_constants(precision: int = 20) -> list[NamedConstant]:
    """Table of sigma, alpha_inf, b_inf, B_inf, c and c_F.

    Word-backed constants are evaluated exactly and compared with their
    closed form (or, lacking one, the published decimal); a mismatch above
    ``1e-9`` raises.
    """
    if precision < 10:
        raise ValidationError("precision must be at least 10 digits")
    out = [NamedConstant("sigma", None, _SIGMA_PRINTED, printed=_SIGMA_PRINTED,
                         note="decimal only; no defining word available")]

    alpha = f_value(ALPHA_INF_WORD)
    out.append(NamedConstant("alpha_inf", alpha, alpha.to_decimal(precision), ALPHA_INF_WORD,
                             note="origin placed at the leading 2 of the right expansion"))

    b_word = f_value(B_INF_LOWER_WORD)
    out.append(NamedConstant("b_inf", B_INF_LOWER, B_INF_LOWER.to_decimal(precision),
                             B_INF_LOWER_WORD, printed="3.2930442439",
                             cross_check=_check(B_INF_LOWER, b_word)))

    B_word = f_value(B_INF_UPPER_WORD)
    out.append(NamedConstant("B_inf", B_word, B_word.to_decimal(precision), B_INF_UPPER_WORD,
                             printed=_B_UPPER_PRINTED,
                             cross_check=_check(Fraction(_B_UPPER_PRINTED), B_word),
                             note="no closed form published; checked against printed digits"))

    out.append(NamedConstant("c", C_CONSTANT, C_CONSTANT.to_decimal(precision),
                             printed="3.29304447990138"))
    out.append(NamedConstant("c_F", FREIMAN, FREIMAN.to_decimal(precision),
                             printed="4.52782956616"))
    return out


def _check(closed, from_word) -> float:
    diff = abs(as_algebraic(closed) - from_word)
    if diff >= Fraction(1, 10**9):
        raise ValidationError(f"cross-check failed: {closed} vs word value {from_word}")
    return float(diff)


# -- quadratic forms ---------------------------------------------------------------------


def _exact(x):
    if isinstance(x, (QuadSurd, AlgebraicValue)):
        return x
    if isinstance(x, float):
        raise ValidationError("use exact coefficients (int, Fraction or QuadSurd)")
    return QuadSurd.from_rational(x)


@dataclass(frozen=True)
class QuadraticForm:
    """``a x^2 + b x y + c y^2``."""

    a: object
    b: object
    c: object

    def __post_init__(self):
        for name in "abc":
            object.__setattr__(self, name, _exact(getattr(self, name)))

    @classmethod
    def normalized(cls, a: int, b: int, c: int) -> "QuadraticForm":
        """Integer form scaled by ``1/sqrt(b^2 - 4ac)`` so the discriminant is 1."""
        disc = b * b - 4 * a * c
        if disc <= 0:
            raise ValidationError("need a positive discriminant")
        s = QuadSurd.sqrt(Fraction(1, disc))
        return cls(a * s, b * s, c * s)

    @property
    def discriminant(self):
        return self.b * self.b - 4 * self.a * self.c

    def __call__(self, x: int, y: int):
        return self.a * (x * x) + self.b * (x * y) + self.c * (y * y)


def form_minimum(q: QuadraticForm, box: int):
    """``(m, 1/m)`` with ``m`` the least ``|q(x, y)|`` over nonzero lattice
    points with ``max(|x|, |y|) <= box``.

    ``m`` only bounds the infimum over the whole lattice from above, so
    ``1/m`` is a lower bound for the Markov value of the form.
    """
    if q.discriminant != 1:
        raise ValidationError(f"discriminant must be 1, got {q.discriminant}")
    if box < 1:
        raise ValidationError("box must be >= 1")
    best = None
    for y in range(0, box + 1):
        for x in range(-box, box + 1):
            if y == 0 and x <= 0:
                continue  # q(-x, -y) = q(x, y)
            v = abs(q(x, y))
            if v == 0:
                raise ValidationError("form represents zero; the infimum is 0")
            if best is None or v < best:
                best = v
    return best, 1 / best


# -- dynamical spectra -------------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class CylinderFunction:
    """Locally constant ``f``: its value at ``theta`` is ``table[window]`` with
    ``window = theta[-offset : len - offset]``."""

    table: Mapping[tuple[int, ...], object]
    length: int
    offset: int

    def __call__(self, w: BiWord, n: int):
        return self.table[self._key(w, n)]

    def _key(self, w: BiWord, n: int):
        key = w.window(n - self.offset, n - self.offset + self.length - 1)
        if key not in self.table:
            raise ValidationError(f"f table has no entry for {format_word(key)}")
        return key

    def rank(self, w: BiWord, n: int) -> int:
        """Position of ``f(sigma^n w)`` among the distinct table values;
        comparing ranks is comparing values, without surd arithmetic."""
        return self._ranks[self._key(w, n)]

    @cached_property
    def _ranks(self) -> dict:
        distinct = sorted(set(self.table.values()), key=_Key)
        pos = {v: i for i, v in enumerate(distinct)}
        return {k: pos[v] for k, v in self.table.items()}

    def value_of_rank(self, r: int):
        return self._distinct[r]

    @cached_property
    def _distinct(self):
        return sorted(set(self.table.values()), key=_Key)

    @classmethod
    def from_table(cls, table: Mapping, offset: int | None = None) -> "CylinderFunction":
        if not table:
            raise ValidationError("empty f table")
        table = {tuple(k): as_algebraic(v) for k, v in table.items()}
        lengths = {len(k) for k in table}
        if len(lengths) != 1:
            raise ValidationError("all f table words must have the same length")
        (L,) = lengths
        return cls(table, L, L // 2 if offset is None else offset)

    @classmethod
    def constant(cls, value, alphabet: Sequence[int]) -> "CylinderFunction":
        return cls({(a,): as_algebraic(value) for a in alphabet}, 1, 0)


def truncated_f_table(alphabet: Sequence[int], k: int) -> CylinderFunction:
    """``f(theta) = alpha_0 + beta_0`` frozen on positions ``-k .. k``.

    Each window takes the value of ``f`` on its own periodic extension, so it
    is within ``2 / (F_{k-1} F_k)`` of ``f`` anywhere on the cylinder.
    """
    if k < 1:
        raise ValidationError("k must be >= 1")
    table = {}
    for win in itertools.product(sorted(set(alphabet)), repeat=2 * k + 1):
        table[win] = f_at(BiWord.periodic(win), k)
    return CylinderFunction(table, 2 * k + 1, k)


def _periodic_admissible(auto, period) -> set[int]:
    """States reachable after an arbitrarily long past of ``period``."""
    n = auto.n_states + 1
    out = set()
    for q in range(auto.n_states):
        s = q
        for _ in range(n):
            s = auto.run(period, s)
            if s is None:
                break
        if s is not None:
            out.add(s)
    return out


def _primitive_words(alphabet, max_len):
    """Lyndon-style representatives: one rotation class per primitive word."""
    for n in range(1, max_len + 1):
        for w in itertools.product(alphabet, repeat=n):
            rots = [w[i:] + w[:i] for i in range(n)]
            if w == min(rots) and rots.count(w) == 1:
                yield w


def dynamical_spectra(spec, f: CylinderFunction | Mapping, max_period: int,
                      max_core: int | None = None) -> tuple[SpectrumApprox, SpectrumApprox]:
    """Inner approximations ``(M_approx, L_approx)`` of the dynamical spectra.

    Periodic orbits of period ``<= max_period`` give values in both spectra.
    Words ``(P)* core (Q)*`` with admissible periods and ``len(core) <=
    max_core`` add Markov values (their Lagrange values are periodic ones).
    """
    spec = validate(spec)
    if max_period < 1:
        raise ValidationError("max_period must be >= 1")
    if not isinstance(f, CylinderFunction):
        f = CylinderFunction.from_table(f)
    max_core = max_period // 2 if max_core is None else max_core
    auto = spec.automaton
    _check_table(spec, f)

    periodic = {}
    for w in _primitive_words(spec.alphabet, max_period):
        if _periodic_admissible(auto, w):
            bw = BiWord.periodic(w)
            periodic[w] = max(f.rank(bw, n) for n in range(len(w)))
    lag_pairs = [(f.value_of_rank(r), BiWord.periodic(w)) for w, r in periodic.items()]

    mark_pairs = list(lag_pairs)
    periods = list(periodic)
    for left in periods:
        starts = _periodic_admissible(auto, left)
        for core_len in range(0, max_core + 1):
            for core in itertools.product(spec.alphabet, repeat=core_len):
                for right in periods:
                    if left == right and not core:
                        continue
                    if not _readable(auto, starts, core, right):
                        continue
                    word = BiWord(left, (), core, right)
                    r = _markov_rank(word, f, periodic[left], periodic[right])
                    mark_pairs.append((f.value_of_rank(r), word))
    return SpectrumApprox.build("markov", mark_pairs), SpectrumApprox.build("lagrange", lag_pairs)


def _readable(auto, starts, core, right) -> bool:
    n = auto.n_states + 1
    for s in starts:
        s = auto.run(core, s)
        for _ in range(n):
            if s is None:
                break
            s = auto.run(right, s)
        if s is not None:
            return True
    return False


def _markov_rank(word: BiWord, f: CylinderFunction, left_max: int, right_max: int) -> int:
    """Rank of ``sup_n f(sigma^n word)``: shifts whose window touches the
    core, plus the two periodic maxima."""
    lo = -f.length - len(word.left_period)
    hi = len(word.right_core) + f.length + len(word.right_period)
    return max(left_max, right_max, max(f.rank(word, n) for n in range(lo, hi + 1)))


def _check_table(spec: SubshiftSpec, f: CylinderFunction):
    missing = [w for w, _ in spec.automaton.words(f.length) if w not in f.table]
    # windows seen at the origin may start mid-sequence: check every state
    for s in range(spec.automaton.n_states):
        missing += [w for w, _ in spec.automaton.words(f.length, s) if w not in f.table]
    if missing:
        raise ValidationError(f"f table incomplete; missing {format_word(missing[0])} "
                              f"and {len(set(missing)) - 1} more")


def markov_value_of_fixture(z: int):
    """Markov value of the fixture word attached to ``z``."""
    return markov_value(FIXTURE_WORDS[z])


__all__ = ["SpectrumApprox", "spectrum_below_3", "NamedConstant", "named_constants",
           "QuadraticForm", "form_minimum", "CylinderFunction", "truncated_f_table",
           "dynamical_spectra", "FIXTURE_WORDS", "ALPHA_INF_WORD", "B_INF_LOWER_WORD",
           "B_INF_UPPER_WORD", "markov_value_of_fixture"]
