"""Hausdorff dimension of Gauss-Cantor sets: certified bounds, a Perron-root
estimate, and a lower bound for the dimension function d(t)."""

from __future__ import annotations

import math
from collections import deque
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

import numpy as np
from scipy.sparse import csr_matrix
from scipy.sparse.csgraph import connected_components

from .algebraic import AlgebraicValue, as_algebraic
from .cantor import Automaton, SubshiftSpec, _extreme, _trim, cylinder, validate
from .exceptions import EmptyLanguageError, ResourceError, ValidationError

_MARGIN = 1e-10          # relative safety margin on float Collatz-Wielandt ratios
_BISECT_WIDTH = 1e-9
_MAX_NODES = 2_000_000


def _up(x: Fraction) -> float:
    f = float(x)
    return f if Fraction(f) >= x else math.nextafter(f, math.inf)


def _down(x: Fraction) -> float:
    f = float(x)
    return f if Fraction(f) <= x else math.nextafter(f, -math.inf)


# -- weighted graphs -----------------------------------------------------------------

@dataclass
class WeightedSFT:
    """Directed graph whose edge ``i -> j`` carries a contraction ratio.

    ``lo``/``hi`` hold certified ratio bounds when available; ``ratio`` is the
    point value used by the Perron-root estimate.  Nodes are labelled by
    ``states`` (for spec-built graphs: ``(automaton state, window)``).
    """

    n: int
    src: np.ndarray
    dst: np.ndarray
    ratio: np.ndarray
    lo: np.ndarray | None = None
    hi: np.ndarray | None = None
    states: list = field(default_factory=list)

    def __post_init__(self):
        self.src = np.asarray(self.src, dtype=np.int64)
        self.dst = np.asarray(self.dst, dtype=np.int64)
        self.ratio = np.asarray(self.ratio, dtype=float)
        if len(self.ratio) and not np.all(self.ratio > 0):
            raise ValidationError("weights must be strictly positive")
        if self.n < 1:
            raise ValidationError("graph needs at least one node")

    @classmethod
    def affine(cls, ratios: Sequence[float]) -> "WeightedSFT":
        """Self-similar set: one node with a loop per branch ratio."""
        ratios = [float(r) for r in ratios]
        if not ratios or not all(0 < r < 1 for r in ratios):
            raise ValidationError("affine ratios must lie in (0, 1)")
        k = len(ratios)
        return cls(1, np.zeros(k, int), np.zeros(k, int), np.array(ratios))

    @classmethod
    def from_spec(cls, spec, word_len: int) -> "WeightedSFT":
        """Window graph of ``spec`` restricted to its dominant strongly
        connected component (largest entropy)."""
        g = window_graph(_automaton(spec), word_len)
        comps = g.components()
        if not comps:
            raise ValidationError("the set is countable: no component has positive entropy")
        best = max(comps, key=lambda c: (_adjacency_radius(g, c), len(c)))
        return g.restrict(best)

    # -- structure -------------------------------------------------------------
    def matrix(self, s: float, which: str = "ratio") -> csr_matrix:
        w = getattr(self, which)
        return csr_matrix((np.exp(s * np.log(w)), (self.src, self.dst)), shape=(self.n, self.n))

    def components(self) -> list[np.ndarray]:
        """Strongly connected components with at least one internal edge and
        positive entropy (not a single cycle)."""
        adj = csr_matrix((np.ones(len(self.src)), (self.src, self.dst)), shape=(self.n, self.n))
        _, labels = connected_components(adj, directed=True, connection="strong")
        out = []
        for lab in np.unique(labels):
            nodes = np.flatnonzero(labels == lab)
            inside = (labels[self.src] == lab) & (labels[self.dst] == lab)
            edges = int(inside.sum())
            if edges > len(nodes):  # a bare cycle has as many edges as nodes
                out.append(nodes)
        return out

    def is_strongly_connected(self) -> bool:
        adj = csr_matrix((np.ones(len(self.src)), (self.src, self.dst)), shape=(self.n, self.n))
        k, _ = connected_components(adj, directed=True, connection="strong")
        return k == 1

    def restrict(self, nodes) -> "WeightedSFT":
        nodes = np.asarray(nodes)
        pos = -np.ones(self.n, dtype=np.int64)
        pos[nodes] = np.arange(len(nodes))
        keep = (pos[self.src] >= 0) & (pos[self.dst] >= 0)
        pick = (lambda a: None if a is None else a[keep])
        states = [self.states[i] for i in nodes] if self.states else []
        return WeightedSFT(len(nodes), pos[self.src[keep]], pos[self.dst[keep]],
                           self.ratio[keep], pick(self.lo), pick(self.hi), states)


def _adjacency_radius(g: WeightedSFT, nodes) -> float:
    sub = g.restrict(nodes)
    A = csr_matrix((np.ones(len(sub.src)), (sub.src, sub.dst)), shape=(sub.n, sub.n))
    lam, _ = _power(A, tol=1e-10)
    return lam


def _automaton(spec) -> Automaton:
    if isinstance(spec, Automaton):
        return spec
    return validate(spec).automaton


def window_graph(auto: Automaton, m: int, max_nodes: int = _MAX_NODES) -> WeightedSFT:
    """Nodes ``(state, v)`` with ``v`` the last ``m`` letters read.

    The edge reading ``a`` goes to ``(delta(state, a), v[1:] + a)`` and
    carries the contraction of the branch ``y -> 1/(v[0] + y)`` over the
    cylinder of the new window: certified bounds from the extremes of
    ``1/(v[0] + y)^2`` on that cylinder, and the exact length ratio
    ``|Cyl(v[0] v')| / |Cyl(v')|`` as point value.
    """
    if m < 1:
        raise ValidationError("word length must be >= 1")
    seeds = set()
    stack = [((), auto.start)]
    while stack:
        w, s = stack.pop()
        if len(w) == m:
            seeds.add((s, w))
            continue
        for a, t in auto.delta[s].items():
            stack.append((w + (a,), t))
        if len(stack) > max_nodes:
            raise ResourceError(f"window length {m} exceeds node budget")
    index: dict = {}
    order: list = []
    queue = deque(sorted(seeds))
    for key in queue:
        index[key] = len(order)
        order.append(key)
    src, dst, lo, hi, ratio = [], [], [], [], []
    cyl_len: dict = {}

    def length(word):
        if word not in cyl_len:
            a, b = cylinder(word)
            cyl_len[word] = b - a
        return cyl_len[word]

    while queue:
        s, v = key = queue.popleft()
        for a in sorted(auto.delta[s]):
            t = auto.delta[s][a]
            v2 = v[1:] + (a,)
            nxt = (t, v2)
            if nxt not in index:
                index[nxt] = len(order)
                order.append(nxt)
                queue.append(nxt)
                if len(order) > max_nodes:
                    raise ResourceError(f"window length {m} exceeds node budget {max_nodes}")
            y0, y1 = cylinder(v2)
            d = v[0]
            src.append(index[key])
            dst.append(index[nxt])
            hi.append(_up(1 / (d + y0) ** 2))
            lo.append(_down(1 / (d + y1) ** 2))
            ratio.append(float(length((d,) + v2) / length(v2)))
    return WeightedSFT(len(order), np.array(src, int), np.array(dst, int), np.array(ratio),
                       np.array(lo), np.array(hi), order)


# -- Perron roots ----------------------------------------------------------------------

def _power(A: csr_matrix, tol: float, x0=None, max_iter: int = 200_000):
    """Spectral radius by power iteration on ``A + I`` (aperiodic for any
    irreducible ``A``); stops when the relative change drops below ``tol``."""
    n = A.shape[0]
    x = np.ones(n) if x0 is None else x0.copy()
    x /= x.sum()
    prev = None
    for _ in range(max_iter):
        y = A @ x + x
        lam = y.sum()  # x sums to one
        x = y / lam
        if prev is not None and abs(lam - prev) <= tol * lam:
            return lam - 1.0, x
        prev = lam
    return lam - 1.0, x  # pragma: no cover


def _cw_bounds(A: csr_matrix, x: np.ndarray) -> tuple[float, float]:
    """Collatz-Wielandt: ``min (Ax)_i/x_i <= rho(A) <= max (Ax)_i/x_i`` for
    irreducible ``A`` and positive ``x``."""
    r = (A @ x) / x
    return float(r.min()), float(r.max())


def _certified_perron(A: csr_matrix, x0=None, side: str = "upper", target: float = 1.0):
    """Return (decided, below_target, vector): whether ``rho(A)`` is
    certifiably on one side of ``target``."""
    x = np.ones(A.shape[0]) if x0 is None else x0
    for tol in (1e-8, 1e-11, 1e-13):
        _, x = _power(A, tol, x)
        lo, hi = _cw_bounds(A, x)
        if side == "upper" and hi * (1 + _MARGIN) < target:
            return True, x
        if side == "lower" and lo * (1 - _MARGIN) > target:
            return True, x
        if (hi - lo) <= 1e-12 * hi:
            break
    return False, x


def _bisect_certified(g: WeightedSFT, which: str, side: str) -> float:
    """Certified root of ``rho(M_s) = 1`` for one component.

    ``side='upper'`` returns an ``s`` with ``rho < 1`` proved (upper bound for
    the dimension), ``side='lower'`` an ``s`` with ``rho > 1`` proved.
    """
    lo, hi = 0.0, 1.0
    x = None
    if side == "upper":
        ok, x = _certified_perron(g.matrix(hi, which), x, "upper")
        if not ok:
            return 1.0
    else:
        ok, x = _certified_perron(g.matrix(lo, which), x, "lower")
        if not ok:
            return 0.0
    while hi - lo > _BISECT_WIDTH:
        mid = (lo + hi) / 2
        ok, x = _certified_perron(g.matrix(mid, which), x, side)
        if side == "upper":
            lo, hi = (lo, mid) if ok else (mid, hi)
        else:
            lo, hi = (mid, hi) if ok else (lo, mid)
    return hi if side == "upper" else lo


def _certified_dimension(spec, depth: int, side: str) -> float:
    g = window_graph(_automaton(spec), depth)
    comps = g.components()
    if not comps:
        return 0.0
    which = "hi" if side == "upper" else "lo"
    return max(_bisect_certified(g.restrict(c), which, side) for c in comps)


def cover_dim_upper(spec, depth: int) -> float:
    """Certified upper bound for the Hausdorff dimension.

    Admissible cylinders of length ``n`` cover the set, and each length is a
    product of branch contractions bounded above window by window; so
    ``sum |I|^s`` stays bounded as soon as the weighted transfer matrix has
    spectral radius below one.
    """
    return _certified_dimension(spec, depth, "upper")


def cover_dim_lower(spec, depth: int) -> float:
    """Certified lower bound: the pressure of ``-s log|g'|`` is at least the
    log spectral radius of the matrix of lower contraction bounds, and the
    dimension is the zero of the pressure."""
    return _certified_dimension(spec, depth, "lower")


def thermo_dimension(sft: WeightedSFT, tol: float = 1e-8) -> float:
    """``s`` with Perron root of ``(ratio^s)`` equal to one, by bisection."""
    if tol <= 0:
        raise ValidationError("tol must be positive")
    if not sft.is_strongly_connected():
        raise ValidationError("thermo_dimension needs a strongly connected graph")
    lo, hi = 0.0, 1.0
    x = None

    def rho(s):
        nonlocal x
        lam, x = _power(sft.matrix(s), tol / 10, x)
        return lam

    if rho(lo) < 1 or rho(hi) > 1:
        raise ValidationError("pressure root is not bracketed by [0, 1]")
    while hi - lo > tol:
        mid = (lo + hi) / 2
        if rho(mid) > 1:
            lo = mid
        else:
            hi = mid
    return (lo + hi) / 2


@dataclass(frozen=True)
class DimensionEstimate:
    lower: float | None
    upper: float | None
    point: float | None
    methods: tuple[str, ...]
    depth: int | None = None
    word_len: int | None = None

    def __post_init__(self):
        vals = [v for v in (self.lower, self.point, self.upper) if v is not None]
        if vals != sorted(vals):
            raise ValidationError(f"inconsistent estimate {self}")

    def to_dict(self) -> dict:
        def fmt(v):
            return None if v is None else f"{v:.10f}"
        return {"lower": fmt(self.lower), "upper": fmt(self.upper), "point": fmt(self.point),
                "methods": list(self.methods), "depth": self.depth, "word_len": self.word_len}


def estimate_dimension(spec, depth: int | None = None, word_len: int | None = None,
                       method: str = "all", tol: float = 1e-8) -> DimensionEstimate:
    """Bounds at window length ``depth`` and/or the Perron-root point value at
    ``word_len``; ``method`` is ``cover``, ``thermo`` or ``all``."""
    if method not in ("cover", "thermo", "all"):
        raise ValidationError(f"unknown method {method!r}")
    lower = upper = point = None
    methods = []
    if method in ("cover", "all"):
        d = depth or 8
        lower, upper = cover_dim_lower(spec, d), cover_dim_upper(spec, d)
        methods.append("cover")
        depth = d
    if method in ("thermo", "all"):
        w = word_len or 8
        try:
            point = thermo_dimension(WeightedSFT.from_spec(spec, w), tol)
        except ValidationError:
            point = 0.0
        methods.append("thermo")
        word_len = w
    return DimensionEstimate(lower, upper, point, tuple(methods), depth, word_len)


# -- dimension function ------------------------------------------------------------------

def _side_sup(word: tuple[int, ...], alphabet: tuple[int, ...]) -> "AlgebraicValue":
    """``sup [0; word, gamma]`` over ``gamma`` in ``alphabet^N``."""
    full = SubshiftSpec(alphabet).automaton
    p, pp, q, qq = _matrix0(word)
    # [0; word, 1/y] = (p + pp*y)/(q + qq*y), monotone in y: try both extremes
    cands = []
    for want_max in (False, True):
        y = _extreme(full, 0, want_max)
        cands.append((p + pp * y) / (q + qq * y))
    return max(cands)


def _matrix0(word):
    from .cf import matrix
    return matrix((0,) + tuple(word))


def window_sup(window: Sequence[int], center: int, alphabet: Sequence[int] = (1, 2)) -> AlgebraicValue:
    """Exact ``sup f`` at the ``center`` position over all bi-infinite
    sequences with letters in ``alphabet`` containing ``window`` there."""
    alphabet = tuple(sorted(set(alphabet)))
    window = tuple(window)
    a0 = window[center]
    right = window[center + 1:]
    left = tuple(reversed(window[:center]))
    alpha = a0 + _side_sup(right, alphabet)
    beta = _side_sup(left, alphabet)
    return as_algebraic(alpha) + as_algebraic(beta)


def certified_automaton(t, word_len: int, alphabet: Sequence[int] = (1, 2)) -> Automaton | None:
    """Sequences all of whose length-``word_len`` windows have ``sup f <= t``
    at their centre; ``None`` when no infinite sequence survives."""
    if word_len < 1:
        raise ValidationError("word_len must be >= 1")
    alphabet = tuple(sorted(set(alphabet)))
    t = as_algebraic(t) if not isinstance(t, float) else Fraction(t)
    center = word_len // 2
    memo: dict = {}

    def ok(w):
        if w not in memo:
            memo[w] = window_sup(w, center, alphabet) <= t
        return memo[w]

    # states: words of length < word_len (start phase), then the last word_len-1 letters
    index = {(): 0}
    delta: list[dict[int, int]] = [{}]
    queue = deque([()])
    while queue:
        w = queue.popleft()
        for a in alphabet:
            w2 = w + (a,)
            if len(w2) == word_len:
                if not ok(w2):
                    continue
                w2 = w2[1:]
            if w2 not in index:
                index[w2] = len(delta)
                delta.append({})
                queue.append(w2)
            delta[index[w]][a] = index[w2]
    return _trim(0, delta)


def dimension_function_lower(t, word_len: int, alphabet: Sequence[int] = (1, 2),
                             depth: int | None = None) -> float:
    """Lower bound for ``d(t)``: ``min(1, 2 * cover_dim_lower)`` of the
    certified subshift at level ``t``."""
    auto = certified_automaton(t, word_len, alphabet)
    if auto is None:
        return 0.0
    d = depth or max(8, word_len - 1)
    return min(1.0, 2 * cover_dim_lower(auto, d))


__all__ = ["WeightedSFT", "window_graph", "cover_dim_upper", "cover_dim_lower", "thermo_dimension",
           "DimensionEstimate", "estimate_dimension", "window_sup", "certified_automaton",
           "dimension_function_lower", "EmptyLanguageError"]
