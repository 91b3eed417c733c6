"""Level geometry shared by the three games.

Tile ids live in one small alphabet; 0 is reserved for out-of-bounds cells
in windowed observations and never appears inside a generated level.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

TILE_OOB = 0
TILE_FLOOR = 1
TILE_WALL = 2
TILE_GOAL = 3
TILE_PLATFORM = 4
TILE_ROAD = 5
TILE_WATER = 6
TILE_VEHICLE = 7
TILE_LOG = 8

TILE_DTYPE = np.uint8


@dataclass(frozen=True, eq=False)
class MoverTrack:
    """One row of synchronized movers (vehicles or logs).

    Speed is the rational speed_num/speed_den in tiles per tick; den is 4
    (quarter-tile lattice), so per-tick motion uses exact integer
    accumulators.  phase_num is the initial accumulator numerator.
    """

    row: int
    kind: str  # "vehicle" | "log"
    direction: int  # +1 rightward, -1 leftward
    speed_num: int
    speed_den: int
    cells: np.ndarray  # bool (width,), initial occupancy
    phase_num: int = 0
    cell_idx: np.ndarray = field(init=False, repr=False)

    def __post_init__(self) -> None:
        object.__setattr__(self, "cell_idx", np.flatnonzero(self.cells))

    @property
    def speed(self) -> float:
        return self.speed_num / self.speed_den


@dataclass(frozen=True, eq=False)
class LevelLayout:
    """Static level geometry produced by a game generator."""

    width: int
    height: int
    tiles: np.ndarray  # TILE_DTYPE, shape (height, width)
    start: tuple[int, int]
    goal: tuple[int, int] | None = None
    goal_row: int | None = None
    movers: tuple[MoverTrack, ...] = ()
    # Ridge only: (first_col, last_col, standing_row) per platform section.
    sections: tuple[tuple[int, int, int], ...] = field(default=())

    def fingerprint(self) -> bytes:
        """Stable byte identity of the layout (tiles + markers + movers)."""
        parts = [self.tiles.tobytes(), repr((self.start, self.goal, self.goal_row)).encode()]
        for m in self.movers:
            parts.append(
                repr((m.row, m.kind, m.direction, m.speed_num, m.speed_den, m.phase_num)).encode()
            )
            parts.append(m.cells.tobytes())
        return b"|".join(parts)
