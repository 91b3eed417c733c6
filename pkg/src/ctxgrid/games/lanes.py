"""Lanes: cross moving traffic and a log-covered river to the goal row.

Grid rows, top to bottom: goal row, water lanes, a safe median, road lanes,
start row — so height is always road + water + 3.  Movers in one row share a
rational speed (quarter tiles per tick) and advance via exact integer
accumulators; vehicles kill on contact, water kills unless the agent stands
on a log, and logs carry the agent with them (wrapping at the edges, as the
movers themselves do).

Every mover row is generated with a guaranteed clear arc so the row can
always be entered after a bounded wait; solvability is certified separately
by a frontier search over (position, tick).

Dynamics state is the plain tuple (row, col, disps, accs) where disps/accs
hold each mover track's displacement and accumulator numerator.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..context import ContextSchema, EpisodeContext, ParamDef
from ..rng import RngStream
from .layout import (
    TILE_DTYPE,
    TILE_FLOOR,
    TILE_GOAL,
    TILE_LOG,
    TILE_ROAD,
    TILE_VEHICLE,
    TILE_WATER,
    LevelLayout,
    MoverTrack,
)

GAME_ID = "lanes"

ACTION_NAMES = ("noop", "up", "down", "left", "right")
NUM_ACTIONS = 5
_MOVES = ((0, 0), (-1, 0), (1, 0), (0, -1), (0, 1))

_SPEED_DEN = 4
_CLEAR_ARC = 4  # every mover row keeps at least this many adjacent free cells

SCHEMA = ContextSchema(
    game_id=GAME_ID,
    params=(
        ParamDef(
            "min_road_lanes", "int", 2, "map_complexity",
            hard_min=0, hard_max=6,
            range_role="min", range_partner="max_road_lanes",
            doc="Lower bound for the per-episode number of road lanes.",
        ),
        ParamDef(
            "max_road_lanes", "int", 4, "map_complexity",
            hard_min=0, hard_max=6,
            range_role="max", range_partner="min_road_lanes",
            doc="Upper bound for the per-episode number of road lanes.",
        ),
        ParamDef(
            "min_water_lanes", "int", 1, "map_complexity",
            hard_min=0, hard_max=6,
            range_role="min", range_partner="max_water_lanes",
            doc="Lower bound for the per-episode number of water lanes.",
        ),
        ParamDef(
            "max_water_lanes", "int", 2, "map_complexity",
            hard_min=0, hard_max=6,
            range_role="max", range_partner="min_water_lanes",
            doc="Upper bound for the per-episode number of water lanes.",
        ),
        ParamDef(
            "grid_width", "int", 11, "map_complexity",
            hard_min=9, hard_max=21,
            doc="Number of columns.",
        ),
        ParamDef(
            "vehicle_speed_min", "float", 0.25, "game_specific",
            hard_min=0.25, hard_max=1.0, step=0.25,
            range_role="min", range_partner="vehicle_speed_max",
            doc="Lower bound for the per-episode vehicle speed (quarter tiles/tick).",
        ),
        ParamDef(
            "vehicle_speed_max", "float", 0.5, "game_specific",
            hard_min=0.25, hard_max=1.0, step=0.25,
            range_role="max", range_partner="vehicle_speed_min",
            doc="Upper bound for the per-episode vehicle speed (quarter tiles/tick).",
        ),
        ParamDef(
            "log_speed", "float", 0.5, "game_specific",
            hard_min=0.25, hard_max=1.0, step=0.25,
            doc="Log speed in quarter tiles per tick.",
        ),
        ParamDef(
            "vehicle_density", "float", 0.3, "game_specific",
            hard_min=0.0, hard_max=0.6,
            doc="Fraction of placeable road cells occupied by vehicles.",
        ),
        ParamDef(
            "log_density", "float", 0.5, "game_specific",
            hard_min=0.1, hard_max=1.0,
            doc="Controls log count per water row; at least one log always spawns.",
        ),
        ParamDef(
            "log_length", "int", 3, "game_specific",
            hard_min=2, hard_max=4,
            doc="Length of each log in tiles.",
        ),
        ParamDef(
            "vehicles_alternate_direction", "bool", True, "game_specific",
            doc="Alternate mover direction per row instead of drawing it randomly.",
        ),
        ParamDef(
            "visibility", "int", 4, "game_mechanics",
            hard_min=1, hard_max=12,
            doc="Observation half-width; the window is (2*visibility+1) squared.",
        ),
        ParamDef(
            "max_episode_steps", "int", 800, "game_mechanics",
            hard_min=600, hard_max=5000,
            doc="Hard episode step cap; lower bound leaves time to wait out traffic.",
        ),
        ParamDef(
            "goal_reward", "float", 10.0, "reward_structure",
            hard_min=0.0, hard_max=100.0,
            doc="Reward on reaching the goal row.",
        ),
        ParamDef(
            "death_penalty", "float", -5.0, "reward_structure",
            hard_min=-100.0, hard_max=0.0,
            doc="Reward added when run over or drowned.",
        ),
        ParamDef(
            "step_penalty", "float", -0.01, "reward_structure",
            hard_min=-1.0, hard_max=0.0,
            doc="Reward added on every tick.",
        ),
        ParamDef(
            "health", "int", 1, "agent_attribute",
            hard_min=1, hard_max=1,
            doc="Reserved agent-attribute slot; lanes uses one-hit death.",
        ),
    ),
)

EASY = {
    "min_road_lanes": 1,
    "max_road_lanes": 2,
    "min_water_lanes": 0,
    "max_water_lanes": 1,
    "grid_width": 9,
}
HARD = {
    "min_road_lanes": 3,
    "max_road_lanes": 6,
    "min_water_lanes": 2,
    "max_water_lanes": 4,
    "grid_width": 15,
}


@dataclass(frozen=True)
class LanesView:
    road_lanes: int
    water_lanes: int
    vehicle_speed: float
    log_speed: float
    vehicle_density: float
    log_density: float
    log_length: int
    grid_width: int
    alternate: bool
    visibility: int
    max_episode_steps: int
    goal_reward: float
    death_penalty: float
    step_penalty: float

    @classmethod
    def build(cls, values: dict, realized: dict) -> "LanesView":
        return cls(
            road_lanes=realized["road_lanes"],
            water_lanes=realized["water_lanes"],
            vehicle_speed=realized["vehicle_speed"],
            log_speed=values["log_speed"],
            vehicle_density=values["vehicle_density"],
            log_density=values["log_density"],
            log_length=values["log_length"],
            grid_width=values["grid_width"],
            alternate=values["vehicles_alternate_direction"],
            visibility=values["visibility"],
            max_episode_steps=values["max_episode_steps"],
            goal_reward=values["goal_reward"],
            death_penalty=values["death_penalty"],
            step_penalty=values["step_penalty"],
        )

    @classmethod
    def from_episode(cls, ep: EpisodeContext) -> "LanesView":
        return cls.build(ep.resolved.values, ep.realized)


def _place_vehicles(width: int, density: float, stream: RngStream, rot: int) -> np.ndarray:
    """Occupancy with vehicles confined outside a clear arc, then rotated."""
    usable = width - _CLEAR_ARC
    count = int(density * usable)
    slots = list(range(usable))
    for i in range(count):  # partial Fisher-Yates
        j = i + stream.next_below(usable - i)
        slots[i], slots[j] = slots[j], slots[i]
    cells = np.zeros(width, dtype=bool)
    for pos in slots[:count]:
        cells[(pos + rot) % width] = True
    return cells


def _place_logs(width: int, density: float, length: int, stream: RngStream) -> np.ndarray:
    """At least one log per water row; logs sit in equal arcs with jitter."""
    count = max(1, int(density * width / (length + 2)))
    count = min(count, width // (length + 2))
    arc = width // count
    rot = stream.next_below(width)
    cells = np.zeros(width, dtype=bool)
    for i in range(count):
        jitter = stream.next_below(arc - length + 1)
        start = arc * i + jitter
        for k in range(length):
            cells[(start + k + rot) % width] = True
    return cells


def generate(view: LanesView, stream: RngStream) -> LevelLayout:
    nr, nw = view.road_lanes, view.water_lanes
    width = view.grid_width
    height = nr + nw + 3
    tiles = np.full((height, width), TILE_FLOOR, dtype=TILE_DTYPE)
    tiles[0, :] = TILE_GOAL
    water_rows = list(range(1, 1 + nw))
    median_row = 1 + nw
    road_rows = list(range(median_row + 1, median_row + 1 + nr))
    for r in water_rows:
        tiles[r, :] = TILE_WATER
    for r in road_rows:
        tiles[r, :] = TILE_ROAD

    movers: list[MoverTrack] = []
    veh_num = round(view.vehicle_speed * _SPEED_DEN)
    log_num = round(view.log_speed * _SPEED_DEN)
    for k, r in enumerate(water_rows):
        # Water rows always counter-flow: same-direction neighbours at one
        # shared speed would freeze their logs' relative alignment forever.
        direction = 1 if k % 2 == 0 else -1
        cells = _place_logs(width, view.log_density, view.log_length, stream)
        movers.append(MoverTrack(r, "log", direction, log_num, _SPEED_DEN, cells))
    prev_dir, prev_rot = 0, 0
    for k, r in enumerate(road_rows):
        direction = (1 if k % 2 == 0 else -1) if view.alternate else (
            1 if stream.next_below(2) == 0 else -1
        )
        rot = stream.next_below(width)
        if direction == prev_dir:
            # Same direction and speed as the row below: lock the clear
            # arcs together so a crossing corridor persists.
            rot = prev_rot
        cells = _place_vehicles(width, view.vehicle_density, stream, rot)
        movers.append(MoverTrack(r, "vehicle", direction, veh_num, _SPEED_DEN, cells))
        prev_dir, prev_rot = direction, rot

    start = (height - 1, width // 2)
    return LevelLayout(
        width=width,
        height=height,
        tiles=tiles,
        start=start,
        goal_row=0,
        movers=tuple(movers),
    )


LanesState = tuple  # (row, col, disps: tuple[int, ...], accs: tuple[int, ...])


def initial_state(level: LevelLayout, view: LanesView) -> LanesState:
    n = len(level.movers)
    return (level.start[0], level.start[1], (0,) * n, tuple(m.phase_num for m in level.movers))


def _occupied(track: MoverTrack, disp: int, col: int, width: int) -> bool:
    return bool(track.cells[(col - disp) % width])


def step(
    level: LevelLayout, state: LanesState, view: LanesView, action: int
) -> tuple[LanesState, float, str]:
    row, col, disps, accs = state
    width = level.width
    dr, dc = _MOVES[action]
    nrow, ncol = row + dr, col + dc
    if not (0 <= nrow < level.height and 0 <= ncol < width):
        nrow, ncol = row, col  # moves off the grid are no-ops

    # Which mover track (if any) owns the agent's row, before movers advance.
    row_track = -1
    for i, m in enumerate(level.movers):
        if m.row == nrow:
            row_track = i
            break
    on_log_pre = (
        row_track >= 0
        and level.movers[row_track].kind == "log"
        and _occupied(level.movers[row_track], disps[row_track], ncol, width)
    )

    new_disps = list(disps)
    new_accs = list(accs)
    for i, m in enumerate(level.movers):
        acc = new_accs[i] + m.speed_num
        if acc >= m.speed_den:
            acc -= m.speed_den
            new_disps[i] = (new_disps[i] + m.direction) % width
            if on_log_pre and i == row_track:
                ncol = (ncol + m.direction) % width  # carried, wrapping
        new_accs[i] = acc

    reward = view.step_penalty
    cause = "running"
    if row_track >= 0:
        m = level.movers[row_track]
        occupied = _occupied(m, new_disps[row_track], ncol, width)
        if m.kind == "vehicle" and occupied:
            cause = "death"
        elif m.kind == "log" and not occupied:
            cause = "death"
    if cause == "death":
        reward += view.death_penalty
    elif nrow == level.goal_row:
        reward += view.goal_reward
        cause = "goal"
    return (nrow, ncol, tuple(new_disps), tuple(new_accs)), reward, cause


def agent_cell(state: LanesState) -> tuple[int, int]:
    return (state[0], state[1])


def status_vector(
    level: LevelLayout, state: LanesState, view: LanesView, step_count: int
) -> np.ndarray:
    row, col, disps, _ = state
    on_log = 0.0
    for i, m in enumerate(level.movers):
        if m.row == row and m.kind == "log" and _occupied(m, disps[i], col, level.width):
            on_log = 1.0
            break
    remaining = 1.0 - step_count / view.max_episode_steps
    return np.array([remaining, on_log], dtype=np.float64)


def composite_tiles(level: LevelLayout, state: LanesState) -> np.ndarray:
    comp = level.tiles.copy()
    disps = state[2]
    for i, m in enumerate(level.movers):
        cols = (m.cell_idx + disps[i]) % level.width
        comp[m.row, cols] = TILE_VEHICLE if m.kind == "vehicle" else TILE_LOG
    return comp


def solvable(level: LevelLayout, view: LanesView) -> bool:
    """Frontier search over (position, tick), mirroring step() exactly."""
    width, height = level.width, level.height
    frontier = np.zeros((height, width), dtype=bool)
    frontier[level.start] = True
    if level.start[0] == level.goal_row:
        return True

    disps = [0] * len(level.movers)
    accs = [m.phase_num for m in level.movers]
    occ_pre = {i: np.roll(m.cells, 0) for i, m in enumerate(level.movers)}

    for _ in range(view.max_episode_steps):
        moved = frontier.copy()
        moved[:-1] |= frontier[1:]  # up
        moved[1:] |= frontier[:-1]  # down
        moved[:, :-1] |= frontier[:, 1:]  # left
        moved[:, 1:] |= frontier[:, :-1]  # right

        shifts = [0] * len(level.movers)
        for i, m in enumerate(level.movers):
            accs[i] += m.speed_num
            if accs[i] >= m.speed_den:
                accs[i] -= m.speed_den
                disps[i] = (disps[i] + m.direction) % width
                shifts[i] = m.direction

        alive = moved
        for i, m in enumerate(level.movers):
            row_cells = moved[m.row]
            post = np.roll(m.cells, disps[i])
            if m.kind == "vehicle":
                alive[m.row] = row_cells & ~post
            else:
                was_on = row_cells & occ_pre[i]
                not_on = row_cells & ~occ_pre[i]
                carried = np.roll(was_on, shifts[i]) if shifts[i] else was_on
                alive[m.row] = (carried | not_on) & post
            occ_pre[i] = post

        if alive[level.goal_row].any():
            return True
        frontier = alive
        if not frontier.any():
            return False
    return False
