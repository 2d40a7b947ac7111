"""Exhaustive enumeration of valid colorings.

Colorings are the integers ``0 .. 2**n - 1`` (set bit = water).  The range is
cut into contiguous chunks that run on a thread pool; the compiled kernels
release the GIL, and per-chunk results are reduced in range order so counts
and listings do not depend on the worker count.
"""

from __future__ import annotations

import logging
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from typing import FrozenSet, Iterable, List, Optional, Tuple, Union

import numba
import numpy as np

from .rules import Coloring, Rule
from .surface import SquareTiledSurface, build_rectangle

log = logging.getLogger(__name__)

DEFAULT_CAP = 26
DEFAULT_LISTING_CAP = 1_000_000
# int64 masks; bit 62 is the last one the kernels can shift safely
HARD_MAX_SQUARES = 62

# 2**i mod 67 is distinct for 0 <= i < 64, giving an O(1) lowest-bit index.
_BIT_INDEX = np.full(67, -1, dtype=np.int64)
for _i in range(63):
    _BIT_INDEX[(1 << _i) % 67] = _i


class CapExceeded(ValueError):
    pass


@dataclass(frozen=True)
class Constraint:
    forced_water: FrozenSet[int] = frozenset()
    forced_land: FrozenSet[int] = frozenset()

    def __post_init__(self) -> None:
        object.__setattr__(self, "forced_water", frozenset(self.forced_water))
        object.__setattr__(self, "forced_land", frozenset(self.forced_land))
        both = self.forced_water & self.forced_land
        if both:
            raise ValueError(f"squares forced both water and land: {sorted(both)}")

    @classmethod
    def of(cls, water: Iterable[int] = (), land: Iterable[int] = ()) -> "Constraint":
        return cls(frozenset(water), frozenset(land))

    def masks(self, n: int) -> Tuple[int, int]:
        out = []
        for squares in (self.forced_water, self.forced_land):
            m = 0
            for sq in squares:
                if not 1 <= sq <= n:
                    raise ValueError(f"constrained square {sq} out of range 1..{n}")
                m |= 1 << (sq - 1)
            out.append(m)
        return out[0], out[1]

    def admits(self, mask: int, n: int) -> bool:
        fw, fl = self.masks(n)
        return mask & fw == fw and mask & fl == 0

    def __str__(self) -> str:
        parts = []
        if self.forced_water:
            parts.append("water=" + ",".join(map(str, sorted(self.forced_water))))
        if self.forced_land:
            parts.append("land=" + ",".join(map(str, sorted(self.forced_land))))
        return " ".join(parts) or "none"


NO_CONSTRAINT = Constraint()


@dataclass(frozen=True)
class EnumerationResult:
    count: int
    surface: str
    rule: Rule
    constraint: Constraint = NO_CONSTRAINT
    n_squares: int = 0
    masks: Optional[Tuple[int, ...]] = field(default=None, repr=False)

    @property
    def colorings(self) -> Optional[List[Coloring]]:
        if self.masks is None:
            return None
        return [Coloring(self.n_squares, m) for m in self.masks]


@numba.njit(cache=True, nogil=True)
def _is_valid_mask(w, nbr, wmasks, bit_index):
    for j in range(wmasks.shape[0]):
        m = wmasks[j]
        if w & m == m:
            return False
    if w == 0:
        return True
    reach = w & -w
    frontier = reach
    while frontier:
        nb = 0
        f = frontier
        while f:
            low = f & -f
            nb |= nbr[bit_index[low % 67]]
            f ^= low
        nb &= w & ~reach
        reach |= nb
        frontier = nb
    return reach == w


@numba.njit(cache=True, nogil=True)
def _count_range(start, stop, nbr, wmasks, fw, fl, bit_index):
    total = 0
    for w in range(start, stop):
        if w & fw != fw or w & fl:
            continue
        if _is_valid_mask(w, nbr, wmasks, bit_index):
            total += 1
    return total


@numba.njit(cache=True, nogil=True)
def _list_range(start, stop, nbr, wmasks, fw, fl, bit_index, out):
    k = 0
    for w in range(start, stop):
        if w & fw != fw or w & fl:
            continue
        if _is_valid_mask(w, nbr, wmasks, bit_index):
            if k == out.shape[0]:
                return -1
            out[k] = w
            k += 1
    return k


def _compiled_inputs(surface: SquareTiledSurface, rule: Rule):
    nbr = np.array(surface.adjacency_graph.neighbor_masks(), dtype=np.int64)
    wmasks = np.array(surface.whirlpool_masks(rule), dtype=np.int64)
    return nbr, wmasks


def _chunks(total: int, workers: int, per_worker: int = 4) -> List[Tuple[int, int]]:
    if workers <= 1:
        return [(0, total)]
    n_chunks = min(total, workers * per_worker)
    bounds = [total * i // n_chunks for i in range(n_chunks + 1)]
    return [(bounds[i], bounds[i + 1]) for i in range(n_chunks) if bounds[i] < bounds[i + 1]]


def _check_cap(surface: SquareTiledSurface, cap: int, cap_override: bool) -> None:
    n = surface.n_squares
    if n > HARD_MAX_SQUARES:
        raise CapExceeded(f"{n} squares exceeds the hard limit of {HARD_MAX_SQUARES}")
    if n > cap and not cap_override:
        raise CapExceeded(
            f"{surface.name} has {n} squares, over the cap of {cap}; pass cap_override=True"
        )


def count_valid(
    surface: SquareTiledSurface,
    rule: Union[str, Rule],
    constraint: Optional[Constraint] = None,
    *,
    workers: int = 1,
    cap: int = DEFAULT_CAP,
    cap_override: bool = False,
) -> EnumerationResult:
    rule = Rule.parse(rule)
    constraint = constraint or NO_CONSTRAINT
    _check_cap(surface, cap, cap_override)
    fw, fl = constraint.masks(surface.n_squares)
    nbr, wmasks = _compiled_inputs(surface, rule)
    total = 1 << surface.n_squares

    def run(bounds: Tuple[int, int]) -> int:
        return int(_count_range(bounds[0], bounds[1], nbr, wmasks, fw, fl, _BIT_INDEX))

    chunks = _chunks(total, workers)
    if len(chunks) == 1:
        count = run(chunks[0])
    else:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            count = sum(pool.map(run, chunks))
    if not 0 <= count <= total:
        raise OverflowError(f"count {count} outside 0..{total}")
    log.debug("%s %s [%s]: %d", surface.name, rule, constraint, count)
    return EnumerationResult(count, surface.name, rule, constraint, surface.n_squares)


def enumerate_valid(
    surface: SquareTiledSurface,
    rule: Union[str, Rule],
    constraint: Optional[Constraint] = None,
    *,
    workers: int = 1,
    cap: int = DEFAULT_CAP,
    cap_override: bool = False,
    listing_cap: int = DEFAULT_LISTING_CAP,
) -> EnumerationResult:
    """Like :func:`count_valid` but also returns the ascending list of masks."""
    rule = Rule.parse(rule)
    constraint = constraint or NO_CONSTRAINT
    _check_cap(surface, cap, cap_override)
    fw, fl = constraint.masks(surface.n_squares)
    nbr, wmasks = _compiled_inputs(surface, rule)
    total = 1 << surface.n_squares

    def run(bounds: Tuple[int, int]) -> np.ndarray:
        lo, hi = bounds
        buf = np.empty(min(hi - lo, listing_cap + 1), dtype=np.int64)
        k = _list_range(lo, hi, nbr, wmasks, fw, fl, _BIT_INDEX, buf)
        if k < 0 or k > listing_cap:
            raise CapExceeded(f"more than {listing_cap} valid colorings; raise listing_cap")
        return buf[:k]

    chunks = _chunks(total, workers)
    if len(chunks) == 1:
        parts = [run(chunks[0])]
    else:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            parts = list(pool.map(run, chunks))
    masks = tuple(int(m) for part in parts for m in part)
    if len(masks) > listing_cap:
        raise CapExceeded(f"more than {listing_cap} valid colorings; raise listing_cap")
    return EnumerationResult(len(masks), surface.name, rule, constraint, surface.n_squares, masks)


def validity_density(
    surface: SquareTiledSurface, rule: Union[str, Rule], **kwargs
) -> Fraction:
    """Fraction of all ``2**n`` colorings that are valid, as an exact rational."""
    res = count_valid(surface, rule, **kwargs)
    return Fraction(res.count, 1 << surface.n_squares)


@dataclass(frozen=True)
class RefinedCounts:
    """Refined ``2 x k`` rectangle counts.

    ``N{i}`` counts rectangles with ``i`` water squares in column ``k``;
    ``left2_N{i}`` additionally requires column 1 to be entirely water
    (``None`` when ``k == 1``, where the two columns coincide).
    """

    k: int
    N: int
    N0: int
    N1: int
    N2: int
    left2_N1: Optional[int]
    left2_N2: Optional[int]


def _column_count(surface, rule, last: Tuple[int, int], i: int, extra_water=(), workers=1) -> int:
    top, bottom = last
    if i == 0:
        options = [Constraint.of(extra_water, (top, bottom))]
    elif i == 2:
        options = [Constraint.of((top, bottom, *extra_water))]
    else:
        options = [
            Constraint.of((top, *extra_water), (bottom,)),
            Constraint.of((bottom, *extra_water), (top,)),
        ]
    return sum(count_valid(surface, rule, c, workers=workers).count for c in options)


def refined_rectangle_counts(k: int, *, workers: int = 1, cap: int = DEFAULT_CAP) -> RefinedCounts:
    """Column-restricted counts on the ``2 x k`` rectangle (either rule; they agree)."""
    if k < 1:
        raise ValueError("k must be >= 1")
    if 2 * k > cap:
        raise CapExceeded(f"2x{k} rectangle exceeds the cap of {cap} squares")
    rect = build_rectangle(2, k)
    rule = Rule.SQUARE
    last = (k, 2 * k)
    n0, n1, n2 = (_column_count(rect, rule, last, i, workers=workers) for i in range(3))
    total = count_valid(rect, rule, workers=workers).count
    if total != n0 + n1 + n2:
        raise AssertionError(f"column split {n0}+{n1}+{n2} != {total}")
    b1 = b2 = None
    if k >= 2:
        first = (1, k + 1)
        b1 = _column_count(rect, rule, last, 1, extra_water=first, workers=workers)
        b2 = _column_count(rect, rule, last, 2, extra_water=first, workers=workers)
    return RefinedCounts(k, total, n0, n1, n2, b1, b2)
