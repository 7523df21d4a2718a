"""Hexagonal cell layout.

Cells are pointy-top hexagons placed in an odd-row offset arrangement and
addressed internally by axial coordinates ``(q, r)``.  Each cell carries a
base station at its centroid.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from functools import cached_property
from typing import Dict, List, NamedTuple, NewType, Optional, Sequence, Set, Tuple

from .errors import ConfigurationError

CellId = NewType("CellId", int)
LaId = NewType("LaId", int)

SQRT3 = math.sqrt(3.0)

# axial neighbour offsets, counter-clockwise from east
AXIAL_DIRECTIONS: Tuple[Tuple[int, int], ...] = (
    (1, 0), (1, -1), (0, -1), (-1, 0), (-1, 1), (0, 1),
)


class HexCoord(NamedTuple):
    q: int
    r: int

    @property
    def s(self) -> int:
        return -self.q - self.r

    def neighbors(self) -> List["HexCoord"]:
        return [HexCoord(self.q + dq, self.r + dr) for dq, dr in AXIAL_DIRECTIONS]


class Cell(NamedTuple):
    id: CellId
    coord: HexCoord
    bs: Tuple[float, float]


def offset_to_axial(row: int, col: int) -> HexCoord:
    """Odd-row offset (row, col) to axial coordinates."""
    return HexCoord(col - (row - (row & 1)) // 2, row)


def axial_to_point(coord: HexCoord, cell_radius: float) -> Tuple[float, float]:
    """Centroid of a pointy-top hexagon with the given circumradius."""
    x = cell_radius * SQRT3 * (coord.q + coord.r / 2.0)
    y = cell_radius * 1.5 * coord.r
    return x, y


def hop_distance(a: HexCoord, b: HexCoord) -> int:
    dq = a[0] - b[0]
    dr = a[1] - b[1]
    return (abs(dq) + abs(dr) + abs(dq + dr)) // 2


@dataclass(frozen=True)
class Grid:
    cells: Tuple[Cell, ...]
    cell_radius: float
    coverage_radius: float
    la_size: int
    rows: int = 0
    cols: int = 0

    def __len__(self) -> int:
        return len(self.cells)

    @property
    def cell_count(self) -> int:
        return len(self.cells)

    @property
    def la_count(self) -> int:
        return -(-len(self.cells) // self.la_size)

    @cached_property
    def _by_coord(self) -> Dict[HexCoord, CellId]:
        return {c.coord: c.id for c in self.cells}

    @cached_property
    def bs_x(self) -> Tuple[float, ...]:
        return tuple(c.bs[0] for c in self.cells)

    @cached_property
    def bs_y(self) -> Tuple[float, ...]:
        return tuple(c.bs[1] for c in self.cells)

    @property
    def coverage_sq(self) -> float:
        """Squared coverage distance ``(coverage_radius * cell_radius) ** 2``."""
        reach = self.coverage_radius * self.cell_radius
        return reach * reach

    def coord(self, cell: int) -> HexCoord:
        return self.cells[cell].coord

    def bs_position(self, cell: int) -> Tuple[float, float]:
        return self.cells[cell].bs

    def cell_at(self, coord: HexCoord) -> Optional[CellId]:
        return self._by_coord.get(coord)

    def neighbors(self, cell: int) -> List[CellId]:
        """In-grid cells sharing an edge with ``cell``."""
        out = []
        for n in self.coord(cell).neighbors():
            cid = self._by_coord.get(n)
            if cid is not None:
                out.append(cid)
        return out

    def bounds(self) -> Tuple[float, float, float, float]:
        """Bounding rectangle ``(xmin, ymin, xmax, ymax)`` of all hexagons."""
        half_w = SQRT3 * self.cell_radius / 2.0
        xs = self.bs_x
        ys = self.bs_y
        return (
            min(xs) - half_w,
            min(ys) - self.cell_radius,
            max(xs) + half_w,
            max(ys) + self.cell_radius,
        )

    def hop_table(self) -> List[List[int]]:
        """Pairwise hop distances, indexed ``[a][b]``."""
        coords = [c.coord for c in self.cells]
        return [[hop_distance(a, b) for b in coords] for a in coords]


def build_grid(
    rows: int = 4,
    cols: int = 7,
    cell_radius: float = 1.0,
    coverage_radius: float = 2.0,
    la_size: int = 7,
) -> Grid:
    if rows < 1 or cols < 1:
        raise ConfigurationError(f"grid needs at least one row and column, got {rows}x{cols}")
    if not cell_radius > 0 or not coverage_radius > 0:
        raise ConfigurationError(
            f"cell_radius and coverage_radius must be positive "
            f"(got {cell_radius}, {coverage_radius})"
        )
    if la_size < 1:
        raise ConfigurationError(f"la_size must be >= 1, got {la_size}")

    cells = []
    for row in range(rows):
        for col in range(cols):
            coord = offset_to_axial(row, col)
            cid = CellId(len(cells))
            cells.append(Cell(cid, coord, axial_to_point(coord, cell_radius)))
    return Grid(tuple(cells), float(cell_radius), float(coverage_radius), int(la_size), rows, cols)


def nearest_cell(grid: Grid, pos: Sequence[float]) -> Optional[CellId]:
    """Cell whose base station is closest to ``pos``, or None out of coverage.

    Ties go to the smaller cell id.
    """
    x, y = pos[0], pos[1]
    best = -1
    best_d2 = math.inf
    for i, (bx, by) in enumerate(zip(grid.bs_x, grid.bs_y)):
        dx = x - bx
        dy = y - by
        d2 = dx * dx + dy * dy
        if d2 < best_d2:
            best_d2 = d2
            best = i
    if best < 0 or best_d2 > grid.coverage_sq:
        return None
    return CellId(best)


def cells_within(grid: Grid, center: int, d: int) -> Set[CellId]:
    if d < 0:
        raise ConfigurationError(f"distance must be non-negative, got {d}")
    origin = grid.coord(center)
    return {c.id for c in grid.cells if hop_distance(origin, c.coord) <= d}


def la_of(grid: Grid, cell: int) -> LaId:
    return LaId(cell // grid.la_size)


def la_members(grid: Grid, la: int) -> Set[CellId]:
    lo = la * grid.la_size
    return {CellId(i) for i in range(lo, min(lo + grid.la_size, grid.cell_count))}
