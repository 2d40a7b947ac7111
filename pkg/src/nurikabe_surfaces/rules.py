"""Nurikabe validity on square-tiled surfaces.

Colorings are water bitmasks: bit ``i - 1`` set means square ``i`` is water.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from typing import FrozenSet, Iterable, List, Sequence, Tuple, Union

from .surface import SquareTiledSurface, VertexOrbit


class Rule(enum.Enum):
    SQUARE = "square"
    LOOP = "loop"

    @classmethod
    def parse(cls, value: Union[str, "Rule"]) -> "Rule":
        if isinstance(value, Rule):
            return value
        try:
            return cls(value.lower())
        except ValueError:
            raise ValueError(f"unknown rule {value!r}; expected 'square' or 'loop'") from None

    def __str__(self) -> str:
        return self.value


@dataclass(frozen=True, order=True)
class Coloring:
    """Water/land assignment on ``n`` squares stored as a water bitmask."""

    n: int
    mask: int = 0

    def __post_init__(self) -> None:
        if self.n < 0 or self.mask < 0 or self.mask >> self.n:
            raise ValueError(f"mask {self.mask:#x} does not fit {self.n} squares")

    @classmethod
    def from_water(cls, n: int, water: Iterable[int]) -> "Coloring":
        mask = 0
        for sq in water:
            if not 1 <= sq <= n:
                raise ValueError(f"square {sq} out of range 1..{n}")
            mask |= 1 << (sq - 1)
        return cls(n, mask)

    @classmethod
    def from_string(cls, text: str) -> "Coloring":
        """``#`` marks water, ``.`` land; whitespace is ignored."""
        cells = [ch for ch in text if not ch.isspace()]
        if any(ch not in "#." for ch in cells):
            raise ValueError("coloring strings use '#' for water and '.' for land")
        return cls.from_water(len(cells), (i + 1 for i, ch in enumerate(cells) if ch == "#"))

    @property
    def water(self) -> FrozenSet[int]:
        return frozenset(i + 1 for i in range(self.n) if self.mask >> i & 1)

    @property
    def land(self) -> FrozenSet[int]:
        return frozenset(i + 1 for i in range(self.n) if not self.mask >> i & 1)

    def is_water(self, square: int) -> bool:
        return bool(self.mask >> (square - 1) & 1)

    def __str__(self) -> str:
        return "".join("#" if self.mask >> i & 1 else "." for i in range(self.n))


@dataclass(frozen=True)
class Clue:
    square: int
    size: int

    def __post_init__(self) -> None:
        if self.size < 1:
            raise ValueError(f"clue size must be positive, got {self.size}")


@dataclass(frozen=True)
class ValidityReport:
    connected: bool
    violating_orbits: Tuple[VertexOrbit, ...]
    islands: Tuple[FrozenSet[int], ...]

    @property
    def valid(self) -> bool:
        return self.connected and not self.violating_orbits


class _DisjointSet:
    def __init__(self, items: Iterable[int]):
        self.parent = {i: i for i in items}

    def find(self, i: int) -> int:
        root = i
        while self.parent[root] != root:
            root = self.parent[root]
        while self.parent[i] != root:
            self.parent[i], i = root, self.parent[i]
        return root

    def union(self, i: int, j: int) -> None:
        ri, rj = self.find(i), self.find(j)
        if ri != rj:
            self.parent[max(ri, rj)] = min(ri, rj)

    def groups(self) -> List[FrozenSet[int]]:
        out = {}
        for i in self.parent:
            out.setdefault(self.find(i), set()).add(i)
        return sorted((frozenset(g) for g in out.values()), key=min)


def _check_length(surface: SquareTiledSurface, coloring: Coloring) -> None:
    if coloring.n != surface.n_squares:
        raise ValueError(
            f"coloring has {coloring.n} squares but surface {surface.name} has {surface.n_squares}"
        )


def _components(surface: SquareTiledSurface, squares: FrozenSet[int]) -> List[FrozenSet[int]]:
    dsu = _DisjointSet(sorted(squares))
    for i, j in surface.adjacency_graph.edges:
        if i in squares and j in squares:
            dsu.union(i, j)
    return dsu.groups()


def water_connected(surface: SquareTiledSurface, coloring: Coloring) -> bool:
    _check_length(surface, coloring)
    return len(_components(surface, coloring.water)) <= 1


def islands(surface: SquareTiledSurface, coloring: Coloring) -> List[FrozenSet[int]]:
    _check_length(surface, coloring)
    return _components(surface, coloring.land)


def whirlpool_orbits(
    surface: SquareTiledSurface, coloring: Coloring, rule: Union[str, Rule]
) -> List[VertexOrbit]:
    _check_length(surface, coloring)
    rule = Rule.parse(rule)
    water = coloring.water
    out = []
    for orbit in surface.orbits:
        if not orbit.interior or not orbit.incident_squares <= water:
            continue
        if rule is Rule.SQUARE and orbit.square_degree != 4:
            continue
        out.append(orbit)
    return out


def is_valid(
    surface: SquareTiledSurface, coloring: Coloring, rule: Union[str, Rule]
) -> ValidityReport:
    return ValidityReport(
        connected=water_connected(surface, coloring),
        violating_orbits=tuple(whirlpool_orbits(surface, coloring, rule)),
        islands=tuple(islands(surface, coloring)),
    )


def check_clues(surface: SquareTiledSurface, coloring: Coloring, clues: Sequence[Clue]) -> bool:
    """True iff each island holds exactly one clue and has that clue's size."""
    _check_length(surface, coloring)
    seen = set()
    for c in clues:
        if not 1 <= c.square <= surface.n_squares:
            raise ValueError(f"clue square {c.square} out of range 1..{surface.n_squares}")
        if c.square in seen:
            raise ValueError(f"more than one clue on square {c.square}")
        if coloring.is_water(c.square):
            raise ValueError(f"clue on square {c.square} but that square is water")
        seen.add(c.square)
    by_square = {c.square: c.size for c in clues}
    for island in islands(surface, coloring):
        inside = [by_square[sq] for sq in island if sq in by_square]
        if len(inside) != 1 or inside[0] != len(island):
            return False
    return True
