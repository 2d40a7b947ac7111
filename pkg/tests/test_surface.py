import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from nurikabe_surfaces.surface import (
    BUILDERS,
    CORNER_SIDES,
    CORNERS,
    SIDES,
    Gluing,
    SideRef,
    SquareTiledSurface,
    SurfaceError,
    adjacency,
    build_annulus,
    build_klein,
    build_mobius,
    build_named,
    build_projective,
    build_rectangle,
    build_staircase,
    build_torus,
    euler_characteristic,
    parse_surface,
    serialize_surface,
    vertex_orbits,
)


def interior(surface):
    return [o for o in vertex_orbits(surface) if o.interior]


def signatures(surface):
    return sorted(o.signature() for o in surface.orbits)


def all_builders(max_n=12):
    for n in range(1, max_n + 1):
        yield build_mobius(n)
        yield build_klein(n)
        yield build_projective(n)
        yield build_annulus(n)
        if n <= 6:
            yield build_staircase(n)
    for r in range(1, 5):
        for c in range(1, 5):
            yield build_rectangle(r, c)
            yield build_torus(r, c)


class TestRectangle:
    def test_2x3_interior_orbits(self):
        orbits = interior(build_rectangle(2, 3))
        assert len(orbits) == 2
        assert all(o.square_degree == 4 for o in orbits)

    def test_single_cell(self):
        s = build_rectangle(1, 1)
        assert interior(s) == []
        assert len(s.orbits) == 4

    def test_disk_euler(self):
        assert euler_characteristic(build_rectangle(2, 2)) == 1

    @pytest.mark.parametrize("k", range(1, 7))
    def test_2xk_adjacency_is_grid(self, k):
        expected = set()
        for j in range(1, k + 1):
            expected.add((j, k + j))
            if j < k:
                expected.add((j, j + 1))
                expected.add((k + j, k + j + 1))
        assert set(adjacency(build_rectangle(2, k)).edges) == expected

    def test_zero_rejected(self):
        with pytest.raises(SurfaceError):
            build_rectangle(0, 3)


class TestAnnulusTorus:
    def test_annulus_5(self):
        s = build_annulus(5)
        # k - 1 vertices on the middle line plus k - 1 on the glued seam
        assert len(interior(s)) == 8
        assert all(o.square_degree == 4 for o in interior(s))
        assert euler_characteristic(s) == 0

    def test_annulus_1_has_no_interior_vertex(self):
        s = build_annulus(1)
        assert s.n_squares == 2
        assert interior(s) == []

    def test_annulus_adjacency_equals_rectangle(self):
        for k in range(1, 9):
            assert adjacency(build_annulus(k)).edges == adjacency(build_rectangle(2, k)).edges

    def test_torus_2x2(self):
        s = build_torus(2, 2)
        assert all(o.interior and o.square_degree == 4 for o in s.orbits)
        assert euler_characteristic(s) == 0
        assert s.unglued_slots() == []


class TestMobius:
    def test_adjacency_7(self):
        edges = adjacency(build_mobius(7)).edges
        assert {(1, 7), (2, 6), (3, 5)} <= edges
        assert all(i != j for i, j in edges)

    @pytest.mark.parametrize("n", range(1, 13))
    def test_adjacency_shape(self, n):
        expected = {(j, j + 1) for j in range(1, n)}
        expected |= {(min(j, n + 1 - j), max(j, n + 1 - j)) for j in range(1, n + 1) if 2 * j != n + 1}
        assert set(adjacency(build_mobius(n)).edges) == expected

    def test_orbits_4(self):
        sigs = [o.signature()[1:] for o in interior(build_mobius(4))]
        assert sorted(sigs) == [(2, (2, 3)), (4, (1, 2, 3, 4)), (4, (1, 2, 3, 4))]

    def test_mobius_2_counts(self):
        s = build_mobius(2)
        n_glued = len(s.gluings)
        n_edges = n_glued + (4 * s.n_squares - 2 * n_glued)
        assert (len(s.orbits), n_edges, s.n_squares) == (3, 5, 2)
        assert euler_characteristic(s) == 0

    def test_seam_orbit_7(self):
        degree3 = [o for o in interior(build_mobius(7)) if o.square_degree == 3]
        assert degree3 and all(o.incident_squares == {3, 4, 5} for o in degree3)

    def test_side_slots_unglued(self):
        s = build_mobius(5)
        assert {str(r) for r in s.unglued_slots()} == {"1.W", "5.E"}

    def test_zero_rejected(self):
        with pytest.raises(SurfaceError):
            build_mobius(0)


class TestClosedNonOrientable:
    def test_klein_7_orbit_degrees(self):
        sigs = {(o.square_degree, frozenset(o.incident_squares)) for o in interior(build_klein(7))}
        assert (2, frozenset({1, 7})) in sigs
        assert (3, frozenset({3, 4, 5})) in sigs

    def test_klein_5_adjacency(self):
        chain = {(1, 2), (2, 3), (3, 4), (4, 5)}
        assert set(adjacency(build_klein(5)).edges) == chain | {(1, 5), (2, 4)}

    @pytest.mark.parametrize("n", range(1, 13))
    def test_klein_projective_agree(self, n):
        k, p, m = build_klein(n), build_projective(n), build_mobius(n)
        assert k.unglued_slots() == [] and p.unglued_slots() == []
        assert adjacency(k).edges == adjacency(p).edges == adjacency(m).edges
        # same orbit types; the projective plane splits the domain corners
        # into two orbits where the Klein bottle has one (chi 1 versus 0)
        assert set(signatures(k)) == set(signatures(p))
        assert k.whirlpool_masks("loop") == p.whirlpool_masks("loop")
        assert k.whirlpool_masks("square") == p.whirlpool_masks("square")

    @staticmethod
    def corner_orbits(surface):
        n = surface.n_squares
        corners = {(1, "NW"), (1, "SW"), (n, "NE"), (n, "SE")}
        return [o for o in surface.orbits if corners & set(o.corners)]

    @pytest.mark.parametrize("n", range(2, 13))
    def test_klein_corner_orbit(self, n):
        (corner,) = self.corner_orbits(build_klein(n))
        assert corner.interior and corner.incident_squares == {1, n}
        assert len(corner.corners) == 4

    @pytest.mark.parametrize("n", range(2, 13))
    def test_projective_corner_orbits(self, n):
        orbits = self.corner_orbits(build_projective(n))
        assert len(orbits) == 2
        assert all(o.interior and o.incident_squares == {1, n} for o in orbits)
        assert len(self.corner_orbits(build_mobius(n))) == 2
        assert not any(o.interior for o in self.corner_orbits(build_mobius(n)))

    @pytest.mark.parametrize("n", range(1, 13))
    def test_square_degree_4_orbits_shared(self, n):
        def deg4(s):
            return sorted(o.signature() for o in interior(s) if o.square_degree == 4)

        assert deg4(build_mobius(n)) == deg4(build_klein(n)) == deg4(build_projective(n))


class TestStaircase:
    @pytest.mark.parametrize("steps", range(1, 7))
    def test_single_vertex(self, steps):
        s = build_staircase(steps)
        assert len(s.orbits) == 1
        assert s.orbits[0].interior
        assert s.unglued_slots() == []

    def test_one_step_is_torus(self):
        s = build_staircase(1)
        assert s.n_squares == 1
        assert euler_characteristic(s) == 0

    def test_translation_gluings_only(self):
        s = build_staircase(4)
        assert all(not g.reversed for g in s.gluings)
        assert all({g.a.side, g.b.side} in ({"N", "S"}, {"E", "W"}) for g in s.gluings)

    def test_three_steps_connected(self):
        assert adjacency(build_staircase(3)).is_connected()


@pytest.mark.parametrize("surface", list(all_builders()), ids=lambda s: s.name)
def test_orbits_partition_corners(surface):
    seen = [c for o in surface.orbits for c in o.corners]
    assert len(seen) == len(set(seen)) == 4 * surface.n_squares
    assert set(seen) == {(sq, c) for sq in range(1, surface.n_squares + 1) for c in CORNERS}
    for o in surface.orbits:
        assert o.square_degree == len(o.incident_squares) >= 1
    if surface.name.startswith("rectangle"):
        assert all(o.square_degree == 4 for o in interior(surface))


@pytest.mark.parametrize("n", range(1, 13))
def test_euler_characteristics(n):
    assert euler_characteristic(build_mobius(n)) == 0
    assert euler_characteristic(build_klein(n)) == 0
    assert euler_characteristic(build_projective(n)) == 1
    assert euler_characteristic(build_annulus(n)) == 0
    for m in range(1, 13):
        assert euler_characteristic(build_torus(n, m)) == 0
        assert euler_characteristic(build_rectangle(n, m)) == 1


class TestParsing:
    def test_mobius_3_from_text(self):
        text = """
        # three squares with a half-twisted top/bottom gluing
        squares 3
        glue 1.E 2.W
        glue 2.E 3.W
        glue 1.N 3.S rev
        glue 2.N 2.S rev
        glue 3.N 1.S rev
        """
        s = parse_surface(text)
        assert s == build_mobius(3)
        assert signatures(s) == signatures(build_mobius(3))

    def test_self_slot(self):
        with pytest.raises(SurfaceError, match="line 2"):
            parse_surface("squares 2\nglue 1.N 1.N\n")

    def test_duplicate_slot_reports_line(self):
        with pytest.raises(SurfaceError, match=r"line 3: slot 2\.E already glued on line 2"):
            parse_surface("squares 3\nglue 2.E 3.W\nglue 1.E 2.E\n")

    @pytest.mark.parametrize(
        "text, line",
        [
            ("squares 2\nglue 1.N 3.S\n", 2),
            ("squares 2\nglue 1.Q 2.S\n", 2),
            ("squares 2\n\nglue 1.N\n", 3),
            ("squares x\n", 1),
            ("squares 2\nfrobnicate\n", 2),
            ("squares 2\nglue 1.N 2.S backwards\n", 2),
        ],
    )
    def test_malformed(self, text, line):
        with pytest.raises(SurfaceError, match=f"line {line}"):
            parse_surface(text)

    def test_missing_squares(self):
        with pytest.raises(SurfaceError):
            parse_surface("# nothing\n")

    @pytest.mark.parametrize("name", ["mobius:5", "klein:4", "projective:6", "annulus:3",
                                      "torus:2x3", "rectangle:3x2", "staircase:3"])
    def test_round_trip(self, name):
        s = build_named(name)
        text = serialize_surface(s)
        again = parse_surface(text)
        assert again == s
        assert serialize_surface(again) == text

    def test_round_trip_ignores_comments(self):
        text = serialize_surface(build_klein(3))
        commented = "# header\n" + text.replace("\n", "  # note\n", 1)
        assert serialize_surface(parse_surface(commented)) == text

    def test_canonical_order(self):
        text = "squares 2\nglue 2.W 1.E\nglue 2.S 1.N rev\n"
        assert serialize_surface(parse_surface(text)) == "squares 2\nglue 1.N 2.S rev\nglue 1.E 2.W\n"


slot = st.tuples(st.integers(1, 5), st.sampled_from(SIDES))


@st.composite
def random_surfaces(draw):
    n = draw(st.integers(1, 5))
    slots = [(sq, s) for sq in range(1, n + 1) for s in SIDES]
    order = draw(st.permutations(slots))
    n_pairs = draw(st.integers(0, len(slots) // 2))
    gluings = []
    for i in range(n_pairs):
        a, b = order[2 * i], order[2 * i + 1]
        gluings.append(Gluing(SideRef(*a), SideRef(*b), draw(st.booleans())))
    return SquareTiledSurface(n, tuple(gluings))


@settings(max_examples=200, deadline=None)
@given(random_surfaces())
def test_random_surface_invariants(s):
    corners = [c for o in s.orbits for c in o.corners]
    assert len(corners) == len(set(corners)) == 4 * s.n_squares
    text = serialize_surface(s)
    assert serialize_surface(parse_surface(text)) == text
    for o in s.orbits:
        touching = {(sq, side) for sq, c in o.corners for side in CORNER_SIDES[c]}
        glued = all(s.is_glued(sq, side) for sq, side in touching)
        assert o.interior == glued
    assert all(i != j for i, j in s.adjacency_graph.edges)


def test_named_errors():
    for bad in ["mobius", "mobius:0", "sphere:3", "rectangle:3", "mobius:2x3"]:
        with pytest.raises(SurfaceError):
            build_named(bad)


def test_builders_table_complete():
    assert set(BUILDERS) == {"rectangle", "annulus", "torus", "mobius", "klein", "projective", "staircase"}
