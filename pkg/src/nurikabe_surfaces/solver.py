"""Backtracking Nurikabe solver for clue puzzles on any square-tiled surface."""

from __future__ import annotations

from dataclasses import dataclass
from typing import List, Sequence, Union

from .enumeration import DEFAULT_CAP, CapExceeded
from .rules import Clue, Coloring, Rule, check_clues, is_valid
from .surface import SquareTiledSurface


@dataclass(frozen=True)
class PuzzleSpec:
    surface: SquareTiledSurface
    clues: tuple
    rule: Rule

    def __post_init__(self) -> None:
        object.__setattr__(self, "rule", Rule.parse(self.rule))
        object.__setattr__(self, "clues", tuple(self.clues))
        seen = set()
        for c in self.clues:
            if not 1 <= c.square <= self.surface.n_squares:
                raise ValueError(
                    f"clue square {c.square} out of range 1..{self.surface.n_squares}"
                )
            if c.square in seen:
                raise ValueError(f"more than one clue on square {c.square}")
            seen.add(c.square)


def _component(seed: int, allowed: int, nbr: List[int]) -> int:
    comp = seed
    frontier = seed
    while frontier:
        grown = 0
        f = frontier
        while f:
            low = f & -f
            grown |= nbr[low.bit_length() - 1]
            f ^= low
        grown &= allowed & ~comp
        comp |= grown
        frontier = grown
    return comp


class _Search:
    def __init__(self, puzzle: PuzzleSpec):
        s = puzzle.surface
        self.n = s.n_squares
        self.full = (1 << self.n) - 1
        self.nbr = s.adjacency_graph.neighbor_masks()
        self.wmasks = s.whirlpool_masks(puzzle.rule)
        self.clue_at = {c.square - 1: c.size for c in puzzle.clues}
        self.clue_mask = sum(1 << i for i in self.clue_at)
        self.land_total = sum(self.clue_at.values())
        self.solutions: List[int] = []

    def feasible(self, water: int, land: int) -> bool:
        open_ = self.full & ~(water | land)
        if bin(land).count("1") > self.land_total:
            return False
        if bin(water).count("1") > self.n - self.land_total:
            return False
        for m in self.wmasks:
            if water & m == m:
                return False
        # every settled island must carry exactly one clue of matching size
        rest = land
        while rest:
            comp = _component(rest & -rest, land, self.nbr)
            rest &= ~comp
            clues = [self.clue_at[i] for i in range(self.n) if comp >> i & 1 and i in self.clue_at]
            size = bin(comp).count("1")
            if len(clues) > 1 or (clues and size > clues[0]):
                return False
            border = 0
            c = comp
            while c:
                low = c & -c
                border |= self.nbr[low.bit_length() - 1]
                c ^= low
            if border & open_ == 0 and (len(clues) != 1 or size != clues[0]):
                return False
        # all water must still be joinable through undecided squares
        if water:
            reach = _component(water & -water, water | open_, self.nbr)
            if water & ~reach:
                return False
        return True

    def run(self, i: int, water: int, land: int) -> None:
        if not self.feasible(water, land):
            return
        if i == self.n:
            self.solutions.append(water)
            return
        bit = 1 << i
        if bit & self.clue_mask:
            self.run(i + 1, water, land | bit)
            return
        self.run(i + 1, water, land | bit)
        self.run(i + 1, water | bit, land)


def solve(
    puzzle: PuzzleSpec, *, cap: int = DEFAULT_CAP, cap_override: bool = False
) -> List[Coloring]:
    """All colorings satisfying connectivity, the whirlpool rule, and the clues, ascending."""
    n = puzzle.surface.n_squares
    if n > cap and not cap_override:
        raise CapExceeded(f"{puzzle.surface.name} has {n} squares, over the cap of {cap}")
    search = _Search(puzzle)
    search.run(0, 0, 0)
    out = []
    for mask in sorted(search.solutions):
        coloring = Coloring(n, mask)
        # final adjudication by the reference rule checks
        if is_valid(puzzle.surface, coloring, puzzle.rule).valid and check_clues(
            puzzle.surface, coloring, puzzle.clues
        ):
            out.append(coloring)
    return out


def solve_clues(
    surface: SquareTiledSurface,
    clues: Sequence[Clue],
    rule: Union[str, Rule],
    **kwargs,
) -> List[Coloring]:
    return solve(PuzzleSpec(surface, tuple(clues), Rule.parse(rule)), **kwargs)


# Small puzzles with exactly one solution each: (surface, rule, clues).
EXAMPLE_PUZZLES = (
    ("mobius:8", Rule.LOOP, (Clue(1, 2), Clue(5, 1))),
    ("klein:9", Rule.LOOP, (Clue(9, 2), Clue(5, 1), Clue(7, 1))),
    ("projective:9", Rule.SQUARE, (Clue(1, 2), Clue(7, 1))),
    ("torus:4x4", Rule.LOOP, (Clue(13, 3), Clue(6, 2), Clue(15, 1))),
    ("annulus:6", Rule.SQUARE, (Clue(1, 2), Clue(3, 1), Clue(12, 4))),
    ("klein:10", Rule.SQUARE, (Clue(5, 1), Clue(8, 2))),
)
