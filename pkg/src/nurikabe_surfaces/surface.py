"""Square-tiled fundamental domains with edge gluings.

A surface is a set of unit squares (indexed from 1) together with a partial
involution on their side slots.  Every identification, including the ordinary
adjacencies inside a rectangular domain, is stored as a :class:`Gluing`, so a
single corner-closure computation yields the vertex orbits of any surface.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from typing import Dict, FrozenSet, Iterable, List, Optional, Tuple

SIDES = ("N", "E", "S", "W")
CORNERS = ("NW", "NE", "SE", "SW")

# Endpoint order of each side in the drawing frame: N/S left-to-right,
# W/E top-to-bottom.
SIDE_ENDPOINTS = {
    "N": ("NW", "NE"),
    "S": ("SW", "SE"),
    "W": ("NW", "SW"),
    "E": ("NE", "SE"),
}
CORNER_SIDES = {
    "NW": ("N", "W"),
    "NE": ("N", "E"),
    "SE": ("S", "E"),
    "SW": ("S", "W"),
}

_SIDE_ORDER = {s: i for i, s in enumerate(SIDES)}


class SurfaceError(ValueError):
    """Raised for malformed surfaces or surface-spec text."""


@dataclass(frozen=True, order=True)
class SideRef:
    square: int
    side: str

    def __post_init__(self) -> None:
        if self.side not in _SIDE_ORDER:
            raise SurfaceError(f"unknown side {self.side!r}")
        if self.square < 1:
            raise SurfaceError(f"square index must be >= 1, got {self.square}")

    @property
    def key(self) -> Tuple[int, int]:
        return (self.square, _SIDE_ORDER[self.side])

    def __str__(self) -> str:
        return f"{self.square}.{self.side}"


@dataclass(frozen=True)
class Gluing:
    """Identification of two side slots; ``reversed`` swaps endpoint matching."""

    a: SideRef
    b: SideRef
    reversed: bool = False

    def __post_init__(self) -> None:
        if self.a == self.b:
            raise SurfaceError(f"cannot glue slot {self.a} to itself")

    def canonical(self) -> "Gluing":
        if self.b.key < self.a.key:
            return Gluing(self.b, self.a, self.reversed)
        return self

    def corner_pairs(self) -> List[Tuple[Tuple[int, str], Tuple[int, str]]]:
        ea = SIDE_ENDPOINTS[self.a.side]
        eb = SIDE_ENDPOINTS[self.b.side]
        if self.reversed:
            eb = eb[::-1]
        return [((self.a.square, ea[i]), (self.b.square, eb[i])) for i in range(2)]

    def __str__(self) -> str:
        return f"glue {self.a} {self.b}" + (" rev" if self.reversed else "")


@dataclass(frozen=True)
class VertexOrbit:
    corners: Tuple[Tuple[int, str], ...]
    interior: bool
    incident_squares: FrozenSet[int]

    @property
    def square_degree(self) -> int:
        return len(self.incident_squares)

    @property
    def mask(self) -> int:
        """Bitmask of incident squares (bit ``i - 1`` for square ``i``)."""
        m = 0
        for sq in self.incident_squares:
            m |= 1 << (sq - 1)
        return m

    def signature(self) -> Tuple[bool, int, Tuple[int, ...]]:
        return (self.interior, self.square_degree, tuple(sorted(self.incident_squares)))


@dataclass(frozen=True)
class AdjacencyGraph:
    vertices: Tuple[int, ...]
    edges: FrozenSet[Tuple[int, int]]

    def neighbors(self, square: int) -> List[int]:
        out = []
        for i, j in self.edges:
            if i == square:
                out.append(j)
            elif j == square:
                out.append(i)
        return sorted(out)

    def neighbor_masks(self) -> List[int]:
        """Per-square neighbour bitmasks, indexed from 0."""
        masks = [0] * len(self.vertices)
        for i, j in self.edges:
            masks[i - 1] |= 1 << (j - 1)
            masks[j - 1] |= 1 << (i - 1)
        return masks

    def is_connected(self) -> bool:
        if not self.vertices:
            return True
        seen = {self.vertices[0]}
        stack = [self.vertices[0]]
        nbrs: Dict[int, List[int]] = {v: [] for v in self.vertices}
        for i, j in self.edges:
            nbrs[i].append(j)
            nbrs[j].append(i)
        while stack:
            v = stack.pop()
            for w in nbrs[v]:
                if w not in seen:
                    seen.add(w)
                    stack.append(w)
        return len(seen) == len(self.vertices)


@dataclass(frozen=True, eq=False)
class SquareTiledSurface:
    """Squares ``1..n_squares`` plus a partial involution on side slots.

    Orbits and adjacency are computed once at construction; instances are
    immutable and safe to share between workers.
    """

    n_squares: int
    gluings: Tuple[Gluing, ...]
    name: str = "custom"
    # Optional (row, col) drawing position of each square, 1-based.
    layout: Optional[Tuple[Tuple[int, int], ...]] = None
    _partner: Dict[Tuple[int, str], Tuple[SideRef, bool]] = field(init=False, repr=False)
    _orbits: Tuple[VertexOrbit, ...] = field(init=False, repr=False)
    _adjacency: AdjacencyGraph = field(init=False, repr=False)

    def __post_init__(self) -> None:
        if self.n_squares < 1:
            raise SurfaceError("a surface needs at least one square")
        canon = sorted((g.canonical() for g in self.gluings), key=lambda g: (g.a.key, g.b.key))
        partner: Dict[Tuple[int, str], Tuple[SideRef, bool]] = {}
        for g in canon:
            for ref in (g.a, g.b):
                if ref.square > self.n_squares:
                    raise SurfaceError(f"slot {ref} out of range for {self.n_squares} squares")
                if (ref.square, ref.side) in partner:
                    raise SurfaceError(f"slot {ref} glued more than once")
            partner[(g.a.square, g.a.side)] = (g.b, g.reversed)
            partner[(g.b.square, g.b.side)] = (g.a, g.reversed)
        if self.layout is not None and len(self.layout) != self.n_squares:
            raise SurfaceError("layout length does not match square count")
        object.__setattr__(self, "gluings", tuple(canon))
        object.__setattr__(self, "_partner", partner)
        object.__setattr__(self, "_orbits", _compute_orbits(self.n_squares, canon, partner))
        object.__setattr__(self, "_adjacency", _compute_adjacency(self.n_squares, canon))

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, SquareTiledSurface):
            return NotImplemented
        return self.n_squares == other.n_squares and self.gluings == other.gluings

    def __hash__(self) -> int:
        return hash((self.n_squares, self.gluings))

    def partner(self, ref: SideRef) -> Optional[Tuple[SideRef, bool]]:
        return self._partner.get((ref.square, ref.side))

    def is_glued(self, square: int, side: str) -> bool:
        return (square, side) in self._partner

    def unglued_slots(self) -> List[SideRef]:
        return [
            SideRef(sq, s)
            for sq in range(1, self.n_squares + 1)
            for s in SIDES
            if (sq, s) not in self._partner
        ]

    @property
    def orbits(self) -> Tuple[VertexOrbit, ...]:
        return self._orbits

    @property
    def adjacency_graph(self) -> AdjacencyGraph:
        return self._adjacency

    def interior_orbits(self) -> List[VertexOrbit]:
        return [o for o in self._orbits if o.interior]

    def whirlpool_masks(self, rule: str) -> List[int]:
        """Distinct incident-square masks of the orbits a rule forbids flooding."""
        from .rules import Rule

        rule = Rule.parse(rule)
        masks = set()
        for o in self._orbits:
            if not o.interior:
                continue
            if rule is Rule.SQUARE and o.square_degree != 4:
                continue
            masks.add(o.mask)
        return sorted(masks)

    def euler_characteristic(self) -> int:
        n_glued = len(self.gluings)
        n_free = 4 * self.n_squares - 2 * n_glued
        return len(self._orbits) - (n_glued + n_free) + self.n_squares

    def __repr__(self) -> str:
        return f"SquareTiledSurface(name={self.name!r}, n_squares={self.n_squares})"


def _compute_orbits(n, gluings, partner) -> Tuple[VertexOrbit, ...]:
    corners = [(sq, c) for sq in range(1, n + 1) for c in CORNERS]
    index = {c: i for i, c in enumerate(corners)}
    parent = list(range(len(corners)))

    def find(i: int) -> int:
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    for g in gluings:
        for p, q in g.corner_pairs():
            ri, rj = find(index[p]), find(index[q])
            if ri != rj:
                parent[max(ri, rj)] = min(ri, rj)

    classes: Dict[int, List[Tuple[int, str]]] = {}
    for c in corners:
        classes.setdefault(find(index[c]), []).append(c)

    orbits = []
    for members in classes.values():
        interior = all(
            (sq, side) in partner for sq, corner in members for side in CORNER_SIDES[corner]
        )
        incident = frozenset(sq for sq, _ in members)
        orbits.append(VertexOrbit(tuple(members), interior, incident))
    # members are in corner order, so the first corner gives a stable ordering
    orbits.sort(key=lambda o: index[o.corners[0]])
    return tuple(orbits)


def _compute_adjacency(n, gluings) -> AdjacencyGraph:
    edges = set()
    for g in gluings:
        i, j = g.a.square, g.b.square
        if i != j:
            edges.add((min(i, j), max(i, j)))
    return AdjacencyGraph(tuple(range(1, n + 1)), frozenset(edges))


def vertex_orbits(surface: SquareTiledSurface) -> List[VertexOrbit]:
    return list(surface.orbits)


def adjacency(surface: SquareTiledSurface) -> AdjacencyGraph:
    return surface.adjacency_graph


def euler_characteristic(surface: SquareTiledSurface) -> int:
    return surface.euler_characteristic()


# -- builders ---------------------------------------------------------------


def _check_positive(**dims: int) -> None:
    for name, value in dims.items():
        if not isinstance(value, int) or value < 1:
            raise SurfaceError(f"{name} must be a positive integer, got {value!r}")


def _grid_gluings(rows: int, cols: int) -> List[Gluing]:
    def idx(r: int, c: int) -> int:
        return (r - 1) * cols + c

    out = []
    for r in range(1, rows + 1):
        for c in range(1, cols + 1):
            if c < cols:
                out.append(Gluing(SideRef(idx(r, c), "E"), SideRef(idx(r, c + 1), "W")))
            if r < rows:
                out.append(Gluing(SideRef(idx(r, c), "S"), SideRef(idx(r + 1, c), "N")))
    return out


def _grid_layout(rows: int, cols: int) -> Tuple[Tuple[int, int], ...]:
    return tuple((r, c) for r in range(1, rows + 1) for c in range(1, cols + 1))


def build_rectangle(rows: int, cols: int) -> SquareTiledSurface:
    """Rectangular ``rows x cols`` grid, squares numbered row-major."""
    _check_positive(rows=rows, cols=cols)
    return SquareTiledSurface(
        rows * cols, tuple(_grid_gluings(rows, cols)), f"rectangle:{rows}x{cols}",
        _grid_layout(rows, cols),
    )


def build_annulus(cols: int) -> SquareTiledSurface:
    """``2 x cols`` grid with the top of row 1 glued to the bottom of row 2."""
    _check_positive(cols=cols)
    gl = _grid_gluings(2, cols)
    gl += [Gluing(SideRef(c, "N"), SideRef(cols + c, "S")) for c in range(1, cols + 1)]
    return SquareTiledSurface(2 * cols, tuple(gl), f"annulus:{cols}", _grid_layout(2, cols))


def build_torus(rows: int, cols: int) -> SquareTiledSurface:
    _check_positive(rows=rows, cols=cols)
    gl = _grid_gluings(rows, cols)
    last = (rows - 1) * cols
    gl += [Gluing(SideRef(c, "N"), SideRef(last + c, "S")) for c in range(1, cols + 1)]
    gl += [
        Gluing(SideRef((r - 1) * cols + 1, "W"), SideRef(r * cols, "E"))
        for r in range(1, rows + 1)
    ]
    return SquareTiledSurface(rows * cols, tuple(gl), f"torus:{rows}x{cols}", _grid_layout(rows, cols))


def _mobius_gluings(n: int) -> List[Gluing]:
    gl = _grid_gluings(1, n)
    gl += [Gluing(SideRef(j, "N"), SideRef(n + 1 - j, "S"), True) for j in range(1, n + 1)]
    return gl


def build_mobius(n: int) -> SquareTiledSurface:
    """``1 x n`` strip whose top is glued to its bottom with a half twist."""
    _check_positive(n=n)
    return SquareTiledSurface(n, tuple(_mobius_gluings(n)), f"mobius:{n}", _grid_layout(1, n))


def build_klein(n: int) -> SquareTiledSurface:
    _check_positive(n=n)
    gl = _mobius_gluings(n) + [Gluing(SideRef(1, "W"), SideRef(n, "E"))]
    return SquareTiledSurface(n, tuple(gl), f"klein:{n}", _grid_layout(1, n))


def build_projective(n: int) -> SquareTiledSurface:
    _check_positive(n=n)
    gl = _mobius_gluings(n) + [Gluing(SideRef(1, "W"), SideRef(n, "E"), True)]
    return SquareTiledSurface(n, tuple(gl), f"projective:{n}", _grid_layout(1, n))


def build_staircase(steps: int) -> SquareTiledSurface:
    """Closed translation surface made of ``2*steps - 1`` squares in a staircase.

    Squares alternate right/up moves starting from square 1; every row and
    every column closes up by a translation.  All corners meet in one vertex.
    """
    _check_positive(steps=steps)
    n = 2 * steps - 1
    # square k sits at x = k // 2, y = (k - 1) // 2
    pos = {k: (k // 2, (k - 1) // 2) for k in range(1, n + 1)}
    at = {v: k for k, v in pos.items()}
    gl = []
    for k, (x, y) in pos.items():
        right = at.get((x + 1, y))
        if right is None:
            # wrap to the leftmost square of the row
            right = min(j for j, (_, yy) in pos.items() if yy == y)
        gl.append(Gluing(SideRef(k, "E"), SideRef(right, "W")))
        up = at.get((x, y + 1))
        if up is None:
            up = min(j for j, (xx, _) in pos.items() if xx == x)
        gl.append(Gluing(SideRef(k, "N"), SideRef(up, "S")))
    top = max(y for _, y in pos.values())
    layout = tuple((top - pos[k][1] + 1, pos[k][0] + 1) for k in range(1, n + 1))
    surf = SquareTiledSurface(n, tuple(gl), f"staircase:{steps}", layout)
    if len(surf.orbits) != 1:
        raise SurfaceError(f"staircase with {steps} steps has {len(surf.orbits)} vertices")
    return surf


BUILDERS = {
    "rectangle": build_rectangle,
    "annulus": build_annulus,
    "torus": build_torus,
    "mobius": build_mobius,
    "klein": build_klein,
    "projective": build_projective,
    "staircase": build_staircase,
}
_TWO_DIM = {"rectangle", "torus"}


def build_named(ref: str) -> SquareTiledSurface:
    """Build from ``name:n`` or ``name:RxC`` (rectangle and torus)."""
    m = re.fullmatch(r"([a-z]+):(\d+)(?:x(\d+))?", ref.strip())
    if not m or m.group(1) not in BUILDERS:
        raise SurfaceError(f"unknown surface reference {ref!r}")
    name, a, b = m.group(1), int(m.group(2)), m.group(3)
    if name in _TWO_DIM:
        if b is None:
            raise SurfaceError(f"{name} needs ROWSxCOLS, got {ref!r}")
        return BUILDERS[name](a, int(b))
    if b is not None:
        raise SurfaceError(f"{name} takes a single size, got {ref!r}")
    return BUILDERS[name](a)


# -- text format ------------------------------------------------------------

_SLOT_RE = re.compile(r"(\d+)\.([NESW])")


def _parse_slot(tok: str, lineno: int) -> SideRef:
    m = _SLOT_RE.fullmatch(tok)
    if not m:
        raise SurfaceError(f"line {lineno}: malformed slot {tok!r}")
    return SideRef(int(m.group(1)), m.group(2))


def parse_surface(text: str, name: str = "custom") -> SquareTiledSurface:
    """Parse the ``squares``/``glue`` directive format.

    Errors carry the offending line number.
    """
    n: Optional[int] = None
    gluings: List[Gluing] = []
    seen: Dict[Tuple[int, str], int] = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        toks = line.split()
        if toks[0] == "squares":
            if len(toks) != 2 or not toks[1].isdigit() or int(toks[1]) < 1:
                raise SurfaceError(f"line {lineno}: expected 'squares <n>' with n >= 1")
            if n is not None:
                raise SurfaceError(f"line {lineno}: duplicate 'squares' directive")
            n = int(toks[1])
        elif toks[0] == "glue":
            if n is None:
                raise SurfaceError(f"line {lineno}: 'glue' before 'squares'")
            if len(toks) not in (3, 4) or (len(toks) == 4 and toks[3] != "rev"):
                raise SurfaceError(f"line {lineno}: expected 'glue <i>.<S> <j>.<S> [rev]'")
            a, b = _parse_slot(toks[1], lineno), _parse_slot(toks[2], lineno)
            if a == b:
                raise SurfaceError(f"line {lineno}: slot {a} glued to itself")
            for ref in (a, b):
                if ref.square > n:
                    raise SurfaceError(f"line {lineno}: square {ref.square} out of range 1..{n}")
                slot = (ref.square, ref.side)
                if slot in seen:
                    raise SurfaceError(
                        f"line {lineno}: slot {ref} already glued on line {seen[slot]}"
                    )
                seen[slot] = lineno
            gluings.append(Gluing(a, b, len(toks) == 4))
        else:
            raise SurfaceError(f"line {lineno}: unknown directive {toks[0]!r}")
    if n is None:
        raise SurfaceError("missing 'squares' directive")
    return SquareTiledSurface(n, tuple(gluings), name)


def serialize_surface(surface: SquareTiledSurface) -> str:
    lines = [f"squares {surface.n_squares}"]
    lines += [str(g) for g in surface.gluings]
    return "\n".join(lines) + "\n"


def from_gluings(n: int, gluings: Iterable[Gluing], name: str = "custom") -> SquareTiledSurface:
    return SquareTiledSurface(n, tuple(gluings), name)
