import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from nurikabe_surfaces.rules import (
    Clue,
    Coloring,
    Rule,
    check_clues,
    is_valid,
    islands,
    water_connected,
    whirlpool_orbits,
)
from nurikabe_surfaces.surface import (
    build_annulus,
    build_klein,
    build_mobius,
    build_projective,
    build_rectangle,
    build_torus,
)


def W(n, *water):
    return Coloring.from_water(n, water)


def all_colorings(n):
    return (Coloring(n, m) for m in range(1 << n))


class TestColoring:
    def test_string_round_trip(self):
        c = Coloring.from_string(".##.")
        assert c.water == {2, 3}
        assert str(c) == ".##."

    def test_out_of_range(self):
        with pytest.raises(ValueError):
            Coloring.from_water(3, [4])
        with pytest.raises(ValueError):
            Coloring(2, 0b100)

    def test_rule_parse(self):
        assert Rule.parse("LOOP") is Rule.LOOP
        with pytest.raises(ValueError):
            Rule.parse("diamond")


class TestWaterConnected:
    def test_mobius_4_nonadjacent(self):
        # adjacency of mobius(4) is the 4-cycle 1-2-3-4-1
        assert not water_connected(build_mobius(4), W(4, 1, 3))
        assert water_connected(build_mobius(4), W(4, 1, 4))

    def test_diagonal(self):
        assert not water_connected(build_rectangle(2, 2), W(4, 1, 4))

    @pytest.mark.parametrize("surface", [build_mobius(5), build_rectangle(2, 3), build_klein(3)])
    def test_empty_water(self, surface):
        assert water_connected(surface, Coloring(surface.n_squares, 0))

    def test_length_mismatch(self):
        with pytest.raises(ValueError):
            water_connected(build_mobius(4), W(5, 1))


class TestWhirlpools:
    def test_klein_7_loop_not_square(self):
        s, c = build_klein(7), W(7, 1, 3, 4, 5, 7)
        loop = whirlpool_orbits(s, c, "loop")
        assert {frozenset(o.incident_squares) for o in loop} == {frozenset({1, 7}), frozenset({3, 4, 5})}
        assert whirlpool_orbits(s, c, "square") == []

    def test_klein_7_square_valid_loop_invalid(self):
        # connected variant: same two loop whirlpools, no square whirlpool
        s, c = build_klein(7), W(7, 1, 2, 3, 4, 5, 7)
        assert is_valid(s, c, "square").valid
        report = is_valid(s, c, "loop")
        assert report.connected and not report.valid
        assert {o.square_degree for o in report.violating_orbits} == {2, 3}

    def test_2x2_block(self):
        s, c = build_rectangle(2, 2), W(4, 1, 2, 3, 4)
        assert len(whirlpool_orbits(s, c, "loop")) == 1
        assert len(whirlpool_orbits(s, c, "square")) == 1

    def test_mobius_4_seam(self):
        s, c = build_mobius(4), W(4, 2, 3)
        (orbit,) = whirlpool_orbits(s, c, "loop")
        assert orbit.square_degree == 2 and orbit.incident_squares == {2, 3}
        assert whirlpool_orbits(s, c, "square") == []


class TestIsValid:
    def test_mobius_4_234(self):
        s, c = build_mobius(4), W(4, 2, 3, 4)
        loop = is_valid(s, c, Rule.LOOP)
        assert loop.connected and not loop.valid
        assert [o.incident_squares for o in loop.violating_orbits] == [{2, 3}]
        assert is_valid(s, c, Rule.SQUARE).valid

    @pytest.mark.parametrize("surface", [build_mobius(6), build_klein(4), build_torus(3, 3), build_annulus(3)])
    @pytest.mark.parametrize("rule", list(Rule))
    def test_all_land(self, surface, rule):
        r = is_valid(surface, Coloring(surface.n_squares, 0), rule)
        assert r.valid
        assert r.islands == (frozenset(range(1, surface.n_squares + 1)),)

    def test_klein_1(self):
        assert not is_valid(build_klein(1), W(1, 1), "loop").valid
        assert is_valid(build_klein(1), W(1, 1), "square").valid

    def test_islands_partition_land(self):
        s = build_rectangle(3, 3)
        c = W(9, 2, 5, 8)
        assert islands(s, c) == [frozenset({1, 4, 7}), frozenset({3, 6, 9})]


class TestClues:
    def test_single_island(self):
        s = build_rectangle(2, 3)
        assert check_clues(s, Coloring(6, 0), [Clue(1, 6)])
        assert not check_clues(s, Coloring(6, 0), [Clue(1, 3), Clue(6, 3)])

    def test_mobius_4(self):
        assert check_clues(build_mobius(4), W(4, 2, 3, 4), [Clue(1, 1)])

    def test_wrong_size(self):
        assert not check_clues(build_mobius(4), W(4, 2, 3, 4), [Clue(1, 2)])

    def test_island_without_clue(self):
        s = build_rectangle(1, 3)
        assert not check_clues(s, W(3, 2), [Clue(1, 1)])

    def test_clue_on_water(self):
        with pytest.raises(ValueError, match="water"):
            check_clues(build_mobius(4), W(4, 1), [Clue(1, 1)])

    def test_duplicate_clue(self):
        with pytest.raises(ValueError):
            check_clues(build_mobius(4), Coloring(4, 0), [Clue(1, 4), Clue(1, 4)])


def _verdicts(surface, rule):
    return [is_valid(surface, c, rule).valid for c in all_colorings(surface.n_squares)]


@pytest.mark.parametrize("k", range(1, 7))
def test_rule_equivalence_orientable(k):
    for s in (build_rectangle(2, k), build_annulus(k)):
        assert _verdicts(s, "square") == _verdicts(s, "loop")
    if k >= 2:
        s = build_torus(2, k)
        assert _verdicts(s, "square") == _verdicts(s, "loop")


def test_thin_torus_breaks_equivalence():
    # a torus one square wide has interior vertices of square-degree 2
    s = build_torus(2, 1)
    assert {o.square_degree for o in s.orbits} == {2}
    assert _verdicts(s, "square") != _verdicts(s, "loop")


@pytest.mark.parametrize("n", range(1, 13))
def test_klein_projective_verdicts(n):
    for rule in Rule:
        assert _verdicts(build_klein(n), rule) == _verdicts(build_projective(n), rule)


@pytest.mark.parametrize("n", range(1, 13))
def test_square_verdicts_on_three_surfaces(n):
    m = _verdicts(build_mobius(n), "square")
    assert m == _verdicts(build_klein(n), "square") == _verdicts(build_projective(n), "square")


surfaces = st.sampled_from(
    [build_mobius(6), build_klein(7), build_projective(5), build_torus(3, 3), build_rectangle(3, 4)]
)


@settings(max_examples=300, deadline=None)
@given(surfaces, st.data())
def test_monotone_and_nested(surface, data):
    n = surface.n_squares
    mask = data.draw(st.integers(0, (1 << n) - 1))
    c = Coloring(n, mask)
    loop = whirlpool_orbits(surface, c, "loop")
    square = whirlpool_orbits(surface, c, "square")
    assert set(square) <= set(loop)
    if mask:
        drop = data.draw(st.sampled_from(sorted(c.water)))
        smaller = Coloring(n, mask & ~(1 << (drop - 1)))
        for rule in Rule:
            assert set(whirlpool_orbits(surface, smaller, rule)) <= set(whirlpool_orbits(surface, c, rule))
