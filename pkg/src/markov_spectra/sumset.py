"""Sums of Cantor-set covers, the gap lemma, and a finite-depth Hall check."""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable

from .cantor import (DEFAULT_BUDGET, IntervalCover, SubshiftSpec, _extreme, hull_and_max_gap,
                     preset, thickness_bound, validate)
from .cf import matrix
from .exceptions import ResourceError, ValidationError


@dataclass(frozen=True)
class SumCover:
    intervals: tuple[tuple[Fraction, Fraction], ...]
    depths: tuple[int, int]

    def __len__(self):
        return len(self.intervals)

    def __contains__(self, x) -> bool:
        lo, hi = 0, len(self.intervals)
        while lo < hi:
            mid = (lo + hi) // 2
            if self.intervals[mid][1] < x:
                lo = mid + 1
            else:
                hi = mid
        return lo < len(self.intervals) and self.intervals[lo][0] <= x

    @property
    def total_length(self) -> Fraction:
        return sum((b - a for a, b in self.intervals), Fraction(0))


def merge_intervals(pairs: Iterable[tuple[Fraction, Fraction]]) -> list[tuple[Fraction, Fraction]]:
    """Union of closed intervals; touching intervals merge."""
    out: list[list[Fraction]] = []
    for a, b in sorted(pairs):
        if out and a <= out[-1][1]:
            if b > out[-1][1]:
                out[-1][1] = b
        else:
            out.append([a, b])
    return [(a, b) for a, b in out]


def _as_pairs(cover) -> list[tuple[Fraction, Fraction]]:
    if isinstance(cover, IntervalCover):
        return merge_intervals((iv.lo, iv.hi) for iv in cover)
    if isinstance(cover, SumCover):
        return list(cover.intervals)
    return merge_intervals((Fraction(a), Fraction(b)) for a, b in cover)


def minkowski_sum_cover(c1, c2, budget: int = DEFAULT_BUDGET) -> SumCover:
    """Outer enclosure of ``K1 + K2`` from covers of each set.

    Each operand is merged first, which keeps the pair count small without
    changing the union.
    """
    a, b = _as_pairs(c1), _as_pairs(c2)
    if len(a) * len(b) > budget:
        raise ResourceError(f"{len(a) * len(b)} interval pairs exceed budget {budget}")
    sums = merge_intervals((x0 + y0, x1 + y1) for x0, x1 in a for y0, y1 in b)
    depths = (getattr(c1, "depth", 0), getattr(c2, "depth", 0))
    return SumCover(tuple(sums), depths)


@dataclass(frozen=True)
class GapLemmaCertificate:
    holds: bool
    thickness: tuple[float, float]
    hull_lengths: tuple[float, float]
    max_gaps: tuple[float, float]
    depth: int

    def __bool__(self):
        return self.holds


def gap_lemma_certificate(spec1, spec2, depth: int) -> GapLemmaCertificate:
    """Sufficient condition for ``K1 + K2`` to be an interval.

    Holds when the thickness product is at least one and each hull is at
    least as long as the largest gap of the other set.
    """
    s1, s2 = (validate(s) for s in (spec1, spec2))
    t1, t2 = thickness_bound(s1, depth), thickness_bound(s2, depth)
    (lo1, hi1), g1 = hull_and_max_gap(s1)
    (lo2, hi2), g2 = hull_and_max_gap(s2)
    len1 = (hi1 - lo1).enclosure(96).lo
    len2 = (hi2 - lo2).enclosure(96).lo
    holds = (Fraction(t1) * Fraction(t2) >= 1
             and len1 >= Fraction(g2) and len2 >= Fraction(g1))
    return GapLemmaCertificate(holds, (t1, t2), (float(len1), float(len2)), (g1, g2), depth)


# -- Hall density ------------------------------------------------------------------

@dataclass(frozen=True)
class HallReport:
    depth: int
    interval_count: int   # occupied bins of width eps/2
    max_gap: Fraction     # certified upper bound on the largest gap
    passed: bool
    target: tuple[float, float]
    eps: Fraction

    def to_dict(self) -> dict:
        return {"depth": self.depth, "interval_count": self.interval_count,
                "max_gap": f"{float(self.max_gap):.6e}", "pass": self.passed}


class _UnhitIndex:
    """``next_unhit(i)``: smallest unhit bin ``>= i`` (union-find skip list)."""

    def __init__(self, n: int):
        self.parent = list(range(n + 1))

    def next_unhit(self, i: int) -> int:
        parent = self.parent
        root = i
        while parent[root] != root:
            root = parent[root]
        while parent[i] != root:
            parent[i], i = root, parent[i]
        return root

    def mark(self, i: int):
        self.parent[i] = i + 1


_FLOAT_SLACK = 1e-12  # generous bound on float error of a branch image


def hall_density_check(depth: int, eps=Fraction(1, 10**4), spec=None) -> HallReport:
    """Largest gap of ``{x + y}`` over left endpoints of depth-``depth``
    restricted cylinder hulls of ``C(4)`` inside ``[2 min, 2 max]``.

    The target is split into bins of width ``eps/2``; a branch-and-bound over
    cylinder pairs marks every bin that provably contains such a sum.  Two
    consecutive occupied bins ``i < j`` bound the gap by ``(j - i + 1) eps/2``,
    so the check passes exactly when every bin is occupied.  The
    representatives are genuine points of the set (limits of its periodic
    points), and they only grow with depth, so the bound never increases.
    """
    if depth < 1:
        raise ValidationError("depth must be >= 1")
    eps = Fraction(eps) if not isinstance(eps, float) else Fraction(eps).limit_denominator(10**15)
    if eps <= 0:
        raise ValidationError("eps must be positive")
    spec = validate(spec) if spec is not None else preset("C4")
    auto = spec.automaton
    ext_lo = [float(_extreme(auto, s, False)) for s in range(auto.n_states)]
    ext_hi = [float(_extreme(auto, s, True)) for s in range(auto.n_states)]
    t0 = 2 * ext_lo[auto.start]
    t1 = 2 * ext_hi[auto.start]
    h = eps / 2
    hf = float(h)
    n_bins = math.ceil((t1 - t0) / hf)
    if n_bins > DEFAULT_BUDGET:
        raise ResourceError(f"{n_bins} bins exceed budget")
    index = _UnhitIndex(n_bins)
    hit = bytearray(n_bins)

    def hull(s, p, pp, q, qq):
        a = (p + pp * ext_lo[s]) / (q + qq * ext_lo[s])
        b = (p + pp * ext_hi[s]) / (q + qq * ext_hi[s])
        return (a, b) if a <= b else (b, a)

    # stack of (state_u, mat_u, state_v, mat_v, level, same)
    root = (auto.start, (0, 1, 1, 0))
    stack = [(root, root, 0, True)]
    while stack:
        (su, mu), (sv, mv), level, same = stack.pop()
        ul, uh = hull(su, *mu)
        vl, vh = hull(sv, *mv)
        lo = ul + vl - _FLOAT_SLACK
        hi = uh + vh + _FLOAT_SLACK
        i0 = max(0, int((lo - t0) // hf))
        i1 = min(n_bins - 1, int((hi - t0) // hf))
        if i0 > i1 or index.next_unhit(i0) > i1:
            continue
        if level == depth:
            x = ul + vl
            j = int((x - t0) // hf)
            if 0 <= j < n_bins and not hit[j]:
                if int((x - _FLOAT_SLACK - t0) // hf) == j == int((x + _FLOAT_SLACK - t0) // hf):
                    hit[j] = 1
                    index.mark(j)
            continue
        ukids = [(auto.delta[su][a], _extend(mu, a)) for a in auto.letters(su)]
        vkids = ukids if same else [(auto.delta[sv][a], _extend(mv, a)) for a in auto.letters(sv)]
        for i, uk in enumerate(ukids):
            for j, vk in enumerate(vkids):
                if same and j < i:
                    continue
                stack.append((uk, vk, level + 1, same and i == j))

    occupied = [i for i in range(n_bins) if hit[i]]
    if not occupied:
        bound = (n_bins + 1) * h
    else:
        bound = max((occupied[0] + 1) * h, (n_bins - occupied[-1]) * h,
                    max(((j - i + 1) * h for i, j in zip(occupied, occupied[1:])), default=h))
    return HallReport(depth, len(occupied), bound, bound <= eps, (t0, t1), eps)


def _extend(m, a):
    # matrix of [0; w, a] from that of [0; w]
    p, pp, q, qq = m
    return (a * p + pp, p, a * q + qq, q)


def hall_target(spec=None):
    """Exact ``[2 min K, 2 max K]``; for ``C(4)`` this is ``[sqrt2 - 1, 4(sqrt2 - 1)]``."""
    spec = validate(spec) if spec is not None else preset("C4")
    auto = spec.automaton
    return 2 * _extreme(auto, auto.start, False), 2 * _extreme(auto, auto.start, True)


__all__ = ["SumCover", "merge_intervals", "minkowski_sum_cover", "GapLemmaCertificate",
           "gap_lemma_certificate", "HallReport", "hall_density_check", "hall_target", "matrix"]
