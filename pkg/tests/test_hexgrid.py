import math

import pytest
from hypothesis import given
from hypothesis import strategies as st

from hexmob.errors import ConfigurationError
from hexmob.hexgrid import (
    HexCoord,
    build_grid,
    cells_within,
    hop_distance,
    la_of,
    nearest_cell,
)
from oracles import bfs_all, brute_nearest, lattice_ball_size

coords = st.builds(HexCoord, st.integers(-50, 50), st.integers(-50, 50))


def test_default_grid_has_28_cells(grid28):
    assert grid28.cell_count == 28
    assert [c.id for c in grid28.cells] == list(range(28))


def test_single_cell_grid_at_origin():
    g = build_grid(1, 1, 1.0, 2.0, 1)
    assert g.cell_count == 1
    assert g.bs_position(0) == (0.0, 0.0)


def test_two_by_two_neighbor_spacing():
    g = build_grid(2, 2, 1.0, 2.0, 4)
    assert g.cell_count == 4
    # cells 0-1 share a row, 0-2 sit diagonally in the odd-offset layout
    for a, b in [(0, 1), (0, 2), (1, 2), (2, 3)]:
        assert math.dist(g.bs_position(a), g.bs_position(b)) == pytest.approx(math.sqrt(3))


def test_adjacent_bs_spacing_in_default_grid(grid28):
    for c in grid28.cells:
        for n in grid28.neighbors(c.id):
            assert math.dist(c.bs, grid28.bs_position(n)) == pytest.approx(math.sqrt(3))


@pytest.mark.parametrize("args", [(0, 7, 1.0, 2.0, 7), (4, 0, 1.0, 2.0, 7),
                                  (4, 7, 0.0, 2.0, 7), (4, 7, 1.0, -1.0, 7),
                                  (4, 7, 1.0, 2.0, 0)])
def test_build_grid_rejects_bad_config(args):
    with pytest.raises(ConfigurationError):
        build_grid(*args)


@given(coords)
def test_cube_coordinates_sum_to_zero(c):
    assert c.q + c.r + c.s == 0


def test_hop_distance_examples():
    c = HexCoord(3, -2)
    assert hop_distance(c, c) == 0
    for n in c.neighbors():
        assert hop_distance(c, n) == 1
    assert hop_distance(HexCoord(0, 0), HexCoord(2, -1)) == 2


def test_hop_distance_matches_bfs_on_default_grid(grid28):
    bfs = bfs_all(grid28)
    for a in range(28):
        for b in range(28):
            assert hop_distance(grid28.coord(a), grid28.coord(b)) == bfs[a][b]


@given(coords, coords)
def test_hop_distance_symmetric_and_identity(a, b):
    assert hop_distance(a, b) == hop_distance(b, a)
    assert (hop_distance(a, b) == 0) == (a == b)


@given(coords, coords, coords)
def test_hop_distance_triangle_inequality(a, b, c):
    assert hop_distance(a, c) <= hop_distance(a, b) + hop_distance(b, c)


def test_nearest_cell_at_bs_is_that_cell(grid28):
    for c in grid28.cells:
        assert nearest_cell(grid28, c.bs) == c.id


def test_nearest_cell_tie_goes_to_smaller_id(grid28):
    (x3, y3), (x4, y4) = grid28.bs_position(3), grid28.bs_position(4)
    mid = ((x3 + x4) / 2, (y3 + y4) / 2)
    assert nearest_cell(grid28, mid) == 3


def test_nearest_cell_out_of_coverage(grid28):
    xmin, ymin, _, _ = grid28.bounds()
    assert nearest_cell(grid28, (xmin - 5.0, ymin - 5.0)) is None


@given(st.floats(-6, 16), st.floats(-6, 12))
def test_nearest_cell_matches_brute_force(x, y):
    g = build_grid(4, 7, 1.0, 2.0, 7)
    assert nearest_cell(g, (x, y)) == brute_nearest(g, (x, y))


def test_cells_within_zero_is_center(grid28):
    assert cells_within(grid28, 10, 0) == {10}


@pytest.mark.parametrize("d", [0, 1, 2, 3])
def test_cells_within_interior_counts(grid15, d):
    center = grid15.cell_at(HexCoord(7 - 7 // 2, 7))  # row 7, col 7
    assert center is not None
    got = cells_within(grid15, center, d)
    assert len(got) == lattice_ball_size(d) == 3 * d * d + 3 * d + 1
    assert center in got


def test_cells_within_clipped_at_boundary(grid28):
    for c in range(28):
        for d in range(4):
            assert len(cells_within(grid28, c, d)) <= 3 * d * d + 3 * d + 1


def test_la_partition(grid28):
    las = [la_of(grid28, c) for c in range(28)]
    assert sorted(set(las)) == [0, 1, 2, 3]
    assert all(las.count(la) == 7 for la in range(4))
    whole = build_grid(4, 7, 1.0, 2.0, 28)
    assert {la_of(whole, c) for c in range(28)} == {0}
    single = build_grid(4, 7, 1.0, 2.0, 1)
    assert [la_of(single, c) for c in range(28)] == list(range(28))


@pytest.mark.parametrize("la_size", [1, 3, 5, 7, 28, 40])
def test_la_of_is_surjective(grid28, la_size):
    g = build_grid(4, 7, 1.0, 2.0, la_size)
    assert {la_of(g, c) for c in range(28)} == set(range(math.ceil(28 / la_size)))
