"""Cutting maps between 1 x n Mobius strips and 2 x k rectangles.

``red`` cuts an even strip of length ``2k`` into a ``2 x k`` rectangle whose
cell ``(1, j)`` is strip square ``j`` and cell ``(2, j)`` is strip square
``2k + 1 - j``; the central pair ``{k, k+1}`` becomes the last column.
``contr`` excises the central square of an odd strip.  Rectangles use the
row-major numbering of :func:`build_rectangle`, so cell ``(r, j)`` is square
``(r - 1) * k + j``.

The maps act on raw colorings; validity is only checked by
:func:`check_bijection`, which enumerates both sides and reports any
coloring that breaks the claimed correspondence.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Dict, List, Tuple

from .enumeration import enumerate_valid
from .rules import Coloring, Rule
from .surface import build_mobius, build_rectangle


def _bit(mask: int, square: int) -> int:
    return mask >> (square - 1) & 1


def red(strip: Coloring) -> Coloring:
    n = strip.n
    if n % 2 or n == 0:
        raise ValueError(f"rectangular reduction needs an even-length strip, got {n}")
    k = n // 2
    out = 0
    for j in range(1, k + 1):
        out |= _bit(strip.mask, j) << (j - 1)
        out |= _bit(strip.mask, n + 1 - j) << (k + j - 1)
    return Coloring(n, out)


def red_inverse(rect: Coloring) -> Coloring:
    n = rect.n
    if n % 2 or n == 0:
        raise ValueError(f"a 2 x k rectangle has an even number of squares, got {n}")
    k = n // 2
    out = 0
    for j in range(1, k + 1):
        out |= _bit(rect.mask, j) << (j - 1)
        out |= _bit(rect.mask, k + j) << (n - j)
    return Coloring(n, out)


def contr(strip: Coloring) -> Tuple[Coloring, bool]:
    """Drop the central square of an odd strip; returns (shorter strip, central is water)."""
    n = strip.n
    if n % 2 == 0:
        raise ValueError(f"contraction needs an odd-length strip, got {n}")
    c = n // 2 + 1
    low = strip.mask & ((1 << (c - 1)) - 1)
    high = strip.mask >> c
    return Coloring(n - 1, low | high << (c - 1)), bool(_bit(strip.mask, c))


def contr_inverse(strip: Coloring, central_water: bool) -> Coloring:
    n = strip.n
    if n % 2:
        raise ValueError(f"contraction inverse needs an even-length strip, got {n}")
    c = n // 2 + 1
    low = strip.mask & ((1 << (c - 1)) - 1)
    high = strip.mask >> (c - 1)
    return Coloring(n + 1, low | int(central_water) << (c - 1) | high << c)


# -- bijection checks ---------------------------------------------------------


def _last_column_water(rect: int, k: int) -> int:
    return _bit(rect, k) + _bit(rect, 2 * k)


@dataclass
class BijectionReport:
    lemma: str
    k: int
    domain_size: int
    target_size: int
    # named pieces of the target and their sizes, in the order they are summed
    target_parts: List[Tuple[str, int]]
    outside_target: List[Coloring] = field(default_factory=list)
    collisions: List[Tuple[Coloring, Coloring]] = field(default_factory=list)
    uncovered: List[Tuple[str, Coloring]] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return (
            not self.outside_target
            and not self.collisions
            and not self.uncovered
            and self.domain_size == self.target_size
        )

    def summary(self) -> str:
        parts = " + ".join(str(s) for _, s in self.target_parts)
        names = " + ".join(name for name, _ in self.target_parts)
        status = "PASS" if self.passed else "FAIL"
        lines = [
            f"{self.lemma} k={self.k}: domain {self.domain_size} -> target {self.target_size}"
            f" = {parts}  ({names})  {status}"
        ]
        for c in self.outside_target[:5]:
            lines.append(f"  image outside target: {c}")
        for a, b in self.collisions[:5]:
            lines.append(f"  collision: {a} and {b}")
        for tag, c in self.uncovered[:5]:
            lines.append(f"  not covered: {tag} {c}")
        return "\n".join(lines)


# Each lemma: (rule, strip length from k, target pieces, map on strips).
# Target pieces are (tag, label, predicate on the last-column water count or
# "land" for the all-land rectangle); the tag separates disjoint-union halves.
_Piece = Tuple[str, str, Callable[[int, int], bool]]


def _pieces(lemma: str) -> Tuple[Rule, Callable[[int], int], List[_Piece]]:
    any_col = lambda rect, k: True
    col = lambda i: (lambda rect, k: _last_column_water(rect, k) == i)
    all_land = lambda rect, k: rect == 0
    if lemma == "square_even":
        return Rule.SQUARE, lambda k: 2 * k, [("", "N_k", any_col)]
    if lemma == "loop_even":
        return Rule.LOOP, lambda k: 2 * k, [("", "N_k,0", col(0)), ("", "N_k,1", col(1))]
    if lemma == "square_odd":
        return Rule.SQUARE, lambda k: 2 * k + 1, [
            ("land", "N_k", any_col),
            ("water", "N_k,1", col(1)),
            ("water", "N_k,2", col(2)),
            ("water", "R_land", all_land),
        ]
    if lemma == "loop_odd":
        return Rule.LOOP, lambda k: 2 * k + 1, [
            ("land", "N_k", any_col),
            ("water", "N_k,1", col(1)),
            ("water", "R_land", all_land),
        ]
    raise ValueError(f"unknown lemma {lemma!r}; choose from {', '.join(LEMMAS)}")


LEMMAS = ("square_even", "square_odd", "loop_even", "loop_odd")


def _map_strip(strip: Coloring) -> Tuple[str, Coloring]:
    if strip.n % 2 == 0:
        return "", red(strip)
    shorter, central = contr(strip)
    return ("water" if central else "land"), red(shorter)


def check_bijection(lemma: str, k: int, *, workers: int = 1) -> BijectionReport:
    """Enumerate the valid strips and the target rectangles and compare them under the cut map."""
    rule, length, pieces = _pieces(lemma)
    if k < 1:
        raise ValueError("k must be >= 1")
    n = length(k)
    domain = enumerate_valid(build_mobius(n), rule, workers=workers).colorings
    rects = enumerate_valid(build_rectangle(2, k), Rule.SQUARE, workers=workers).masks

    target: Dict[Tuple[str, int], str] = {}
    parts = []
    for tag, label, pred in pieces:
        members = [r for r in rects if pred(r, k)]
        fresh = [r for r in members if (tag, r) not in target]
        for r in fresh:
            target[(tag, r)] = label
        parts.append((label, len(fresh)))

    report = BijectionReport(lemma, k, len(domain), len(target), parts)
    hit: Dict[Tuple[str, int], Coloring] = {}
    for strip in domain:
        tag, rect = _map_strip(strip)
        key = (tag, rect.mask)
        if key not in target:
            report.outside_target.append(strip)
        elif key in hit:
            report.collisions.append((hit[key], strip))
        else:
            hit[key] = strip
    for key in sorted(target):
        if key not in hit:
            report.uncovered.append((key[0], Coloring(2 * k, key[1])))
    return report
