"""Solutions of x^2 + y^2 + z^2 = 3xyz and the discrete spectrum below 3."""

from __future__ import annotations

from collections import defaultdict, deque
from dataclasses import dataclass
from functools import total_ordering

from .algebraic import QuadSurd
from .exceptions import ValidationError


@total_ordering
@dataclass(frozen=True)
class MarkovTriple:
    x: int
    y: int
    z: int

    def __post_init__(self):
        x, y, z = self.x, self.y, self.z
        if not all(isinstance(v, int) and not isinstance(v, bool) for v in (x, y, z)):
            raise ValidationError("Markov triple coordinates must be integers")
        if not 1 <= x <= y <= z:
            raise ValidationError(f"need 1 <= x <= y <= z, got {(x, y, z)}")
        if x * x + y * y + z * z != 3 * x * y * z:
            raise ValidationError(f"{(x, y, z)} does not solve the Markov equation")

    @classmethod
    def of(cls, *coords: int) -> "MarkovTriple":
        return cls(*sorted(coords))

    def as_tuple(self) -> tuple[int, int, int]:
        return self.x, self.y, self.z

    def _key(self):
        return self.z, self.y, self.x

    def __lt__(self, other):
        if not isinstance(other, MarkovTriple):
            return NotImplemented
        return self._key() < other._key()

    def __iter__(self):
        return iter(self.as_tuple())


ROOT = MarkovTriple(1, 1, 1)


def vieta_children(t: MarkovTriple) -> set[MarkovTriple]:
    """Neighbours ``(y, z, 3yz - x)`` and ``(x, z, 3xz - y)``, minus the parent."""
    if not isinstance(t, MarkovTriple):
        t = MarkovTriple(*t)
    x, y, z = t
    kids = {MarkovTriple.of(y, z, 3 * y * z - x), MarkovTriple.of(x, z, 3 * x * z - y)}
    kids.discard(t)
    return kids


def enumerate_triples(z_max: int) -> list[MarkovTriple]:
    """Every triple with ``z <= z_max``, sorted by ``(z, y, x)``."""
    if z_max < 1:
        raise ValidationError("z_max must be >= 1")
    seen = {ROOT}
    queue = deque([ROOT])
    while queue:
        t = queue.popleft()
        for child in vieta_children(t):
            # coordinates only grow along a branch, so pruning here is safe
            if child.z <= z_max and child not in seen:
                seen.add(child)
                queue.append(child)
    return sorted(seen)


def brute_force_triples(z_max: int) -> list[MarkovTriple]:
    """Direct search over ``x <= y <= z <= z_max``; for cross-checks only."""
    out = []
    for z in range(1, z_max + 1):
        for y in range(1, z + 1):
            # x^2 - 3yz x + (y^2 + z^2) = 0
            b, c = 3 * y * z, y * y + z * z
            disc = b * b - 4 * c
            if disc < 0:
                continue
            r = _isqrt_exact(disc)
            if r is None:
                continue
            for x in {(b - r) // 2, (b + r) // 2}:
                if 1 <= x <= y and (b - r) % 2 == 0:
                    out.append(MarkovTriple(x, y, z))
    return sorted(out)


def _isqrt_exact(n: int):
    from math import isqrt

    r = isqrt(n)
    return r if r * r == n else None


def markov_numbers(count: int) -> list[int]:
    """The ``count`` smallest Markov numbers (distinct maximal coordinates)."""
    if count < 1:
        raise ValidationError("count must be >= 1")
    z_max = 2
    while True:
        zs = sorted({t.z for t in enumerate_triples(z_max)})
        if len(zs) >= count:
            return zs[:count]
        z_max *= 4


def is_markov_number(z: int) -> bool:
    return z >= 1 and any(t.z == z for t in enumerate_triples(z))


def lagrange_number(z: int) -> QuadSurd:
    """``sqrt(9 - 4/z^2) = sqrt(9 z^2 - 4) / z`` for a Markov number ``z``."""
    if isinstance(z, bool) or not isinstance(z, int) or not is_markov_number(z):
        raise ValidationError(f"{z!r} is not a Markov number")
    return QuadSurd(0, 1, 9 * z * z - 4, z)


def unicity_report(z_max: int) -> list[tuple[MarkovTriple, MarkovTriple]]:
    """Pairs of distinct triples sharing their largest coordinate."""
    if z_max < 1:
        raise ValidationError("z_max must be >= 1")
    by_z = defaultdict(list)
    for t in enumerate_triples(z_max):
        by_z[t.z].append(t)
    out = []
    for z in sorted(by_z):
        ts = by_z[z]
        out.extend((ts[i], ts[j]) for i in range(len(ts)) for j in range(i + 1, len(ts)))
    return out
