"""Ridge: run and jump across a chain of platforms to the goal marker.

Platforms are one-way: the agent lands when falling through a platform's
standing row and never collides from the side or below.  Horizontal motion
is tile-quantized on the ground (fractional walk accumulator) and float-
integrated in the air; jumps launch from the tile center, which makes the
maximum clearable gap an exact function of the physics parameters:

    flight T = first descending tick with -J*t + g*t*(t+1)/2 >= dh
    landing column offset = floor(speed * T + 0.5)

The generator draws each gap from [gap_min, gap_max] and each height delta
from [-height_variation, +height_variation], then lowers any landing that
the analytic bound cannot clear.  Validation enforces gap_max against the
flat-jump bound and section_width against the widest possible landing, so
generation is failure-free for any context that validates.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from ..context import ContextSchema, EpisodeContext, ParamDef
from ..errors import ContextValidationError, OutOfBounds
from ..rng import RngStream
from .layout import TILE_DTYPE, TILE_FLOOR, TILE_GOAL, TILE_PLATFORM, LevelLayout

GAME_ID = "ridge"

ACTION_NAMES = ("noop", "left", "right", "jump")
NUM_ACTIONS = 4

HEIGHT = 16
_ROW_LO, _ROW_HI = 3, HEIGHT - 4  # standing rows stay clear of ceiling and pit
_EPS = 1e-9  # rounding guard: the analytic bound never exceeds the simulation


def flight_ticks(jump_impulse: float, gravity: float, dh: int = 0) -> int:
    """Airborne ticks for a jump landing dh rows below takeoff (dh<0 = up)."""
    t = int(jump_impulse / gravity) + 1  # first tick with positive fall speed
    while -jump_impulse * t + gravity * t * (t + 1) / 2.0 < dh - _EPS:
        t += 1
    return t


def max_rise(jump_impulse: float, gravity: float) -> float:
    """Peak height (in rows) a jump gains above its takeoff row."""
    best = 0.0
    t = 1
    while True:
        rise = jump_impulse * t - gravity * t * (t + 1) / 2.0
        if rise <= best:
            return best
        best = rise
        t += 1


def max_clearable_gap(
    jump_impulse: float,
    gravity: float,
    agent_speed: float,
    air_control: float,
    dh: int = 0,
) -> int:
    """Largest gap (empty columns) a running jump can cross onto a platform
    dh rows below the takeoff row; -1 when the landing row is unreachable.

    Assumes takeoff at full ground speed, so lateral air control cannot
    extend the jump; it only allows shortening it mid-flight.  Landing on a
    higher platform additionally needs the jump apex to rise above it.
    """
    if dh < 0 and max_rise(jump_impulse, gravity) < -dh + _EPS:
        return -1
    t = flight_ticks(jump_impulse, gravity, dh)
    span = math.floor(agent_speed * t + 0.5 - _EPS)
    return span - 1


def _landing_span(jump_impulse: float, gravity: float, agent_speed: float, dh: int) -> int:
    return max_clearable_gap(jump_impulse, gravity, agent_speed, 0.0, dh) + 1


def _cross_check(values: dict) -> list[ContextValidationError]:
    errors: list[ContextValidationError] = []
    j, g = values["jump_impulse"], values["gravity"]
    s, ac = values["agent_speed"], values["air_control"]
    limit = max_clearable_gap(j, g, s, ac, 0)
    if values["gap_max"] > limit:
        errors.append(OutOfBounds("gap_max", values["gap_max"], 1, limit))
        return errors
    # Widest landing (dropping height_variation rows) must fit inside the
    # two sections around a minimal gap, or some takeoff column over-shoots.
    span = _landing_span(j, g, s, values["height_variation"])
    room = values["gap_min"] + 2 * values["section_width"] - 1
    if span > room:
        needed = math.ceil((span + 1 - values["gap_min"]) / 2)
        errors.append(OutOfBounds("section_width", values["section_width"], needed, 8))
    return errors


SCHEMA = ContextSchema(
    game_id=GAME_ID,
    params=(
        ParamDef(
            "min_num_sections", "int", 3, "map_complexity",
            hard_min=1, hard_max=10,
            range_role="min", range_partner="max_num_sections",
            doc="Lower bound for the per-episode number of platform sections.",
        ),
        ParamDef(
            "max_num_sections", "int", 5, "map_complexity",
            hard_min=1, hard_max=10,
            range_role="max", range_partner="min_num_sections",
            doc="Upper bound for the per-episode number of platform sections.",
        ),
        ParamDef(
            "gap_min", "int", 1, "map_complexity",
            hard_min=1, hard_max=6,
            doc="Smallest gap (in tiles) drawn between consecutive sections.",
        ),
        ParamDef(
            "gap_max", "int", 3, "map_complexity",
            hard_min=1, hard_max=6,
            doc="Largest gap drawn between sections; capped by jump physics.",
        ),
        ParamDef(
            "section_width", "int", 4, "map_complexity",
            hard_min=2, hard_max=8,
            doc="Width of each platform section in tiles.",
        ),
        ParamDef(
            "height_variation", "int", 1, "game_specific",
            hard_min=0, hard_max=2,
            doc="Maximum per-section step of the platform-height random walk.",
        ),
        ParamDef(
            "gravity", "float", 0.35, "game_specific",
            hard_min=0.15, hard_max=0.8,
            doc="Downward velocity gained per airborne tick.",
        ),
        ParamDef(
            "jump_impulse", "float", 1.1, "agent_attribute",
            hard_min=0.6, hard_max=1.8,
            doc="Upward velocity set by a grounded jump.",
        ),
        ParamDef(
            "agent_speed", "float", 0.6, "agent_attribute",
            hard_min=0.25, hard_max=1.0,
            doc="Ground speed and airborne speed cap, in tiles per tick.",
        ),
        ParamDef(
            "air_control", "float", 0.5, "agent_attribute",
            hard_min=0.0, hard_max=1.0,
            doc="Fraction of agent_speed available as airborne acceleration.",
        ),
        ParamDef(
            "visibility", "int", 5, "game_mechanics",
            hard_min=1, hard_max=12,
            doc="Observation half-width; the window is (2*visibility+1) squared.",
        ),
        ParamDef(
            "max_episode_steps", "int", 500, "game_mechanics",
            hard_min=100, hard_max=5000,
            doc="Hard episode step cap.",
        ),
        ParamDef(
            "completion_reward", "float", 10.0, "reward_structure",
            hard_min=0.0, hard_max=100.0,
            doc="Reward on reaching the goal marker.",
        ),
        ParamDef(
            "step_penalty", "float", -0.01, "reward_structure",
            hard_min=-1.0, hard_max=0.0,
            doc="Reward added on every tick.",
        ),
    ),
    ordered_pairs=(("gap_min", "gap_max"),),
    cross_checks=(_cross_check,),
)

EASY = {"min_num_sections": 2, "max_num_sections": 3, "gap_min": 1, "gap_max": 2}
HARD = {"min_num_sections": 5, "max_num_sections": 8, "gap_min": 2, "gap_max": 3}


@dataclass(frozen=True)
class RidgeView:
    num_sections: int
    section_width: int
    gap_min: int
    gap_max: int
    height_variation: int
    gravity: float
    jump_impulse: float
    agent_speed: float
    air_control: float
    visibility: int
    max_episode_steps: int
    completion_reward: float
    step_penalty: float

    @classmethod
    def build(cls, values: dict, realized: dict) -> "RidgeView":
        return cls(
            num_sections=realized["num_sections"],
            section_width=values["section_width"],
            gap_min=values["gap_min"],
            gap_max=values["gap_max"],
            height_variation=values["height_variation"],
            gravity=values["gravity"],
            jump_impulse=values["jump_impulse"],
            agent_speed=values["agent_speed"],
            air_control=values["air_control"],
            visibility=values["visibility"],
            max_episode_steps=values["max_episode_steps"],
            completion_reward=values["completion_reward"],
            step_penalty=values["step_penalty"],
        )

    @classmethod
    def from_episode(cls, ep: EpisodeContext) -> "RidgeView":
        return cls.build(ep.resolved.values, ep.realized)


def generate(view: RidgeView, stream: RngStream) -> LevelLayout:
    n = view.num_sections
    w = view.section_width
    rows = [(_ROW_LO + _ROW_HI) // 2]
    gaps: list[int] = []
    for _ in range(n - 1):
        gap = stream.next_int(view.gap_min, view.gap_max)
        dh = stream.next_int(-view.height_variation, view.height_variation)
        # Lower the landing until the analytic bound clears the gap; dh=0 is
        # always feasible because validation capped gap_max.
        while max_clearable_gap(view.jump_impulse, view.gravity, view.agent_speed,
                                view.air_control, dh) < gap:
            dh += 1
        rows.append(min(max(rows[-1] + dh, _ROW_LO), _ROW_HI))
        gaps.append(gap)

    width = 2 + n * w + sum(gaps)
    tiles = np.full((HEIGHT, width), TILE_FLOOR, dtype=TILE_DTYPE)
    sections: list[tuple[int, int, int]] = []
    x = 1
    for i in range(n):
        tiles[rows[i] + 1, x : x + w] = TILE_PLATFORM
        sections.append((x, x + w - 1, rows[i]))
        x += w + (gaps[i] if i < n - 1 else 0)

    start = (rows[0], 1)
    goal = (rows[-1], sections[-1][1])
    tiles[goal] = TILE_GOAL
    return LevelLayout(
        width=width,
        height=HEIGHT,
        tiles=tiles,
        start=start,
        goal=goal,
        sections=tuple(sections),
    )


# State: (col, xf, y, vx, vy, grounded, h).  Grounded motion keeps the agent
# on integer columns with the fractional walk progress in h; airborne motion
# float-integrates xf/y and lands by crossing a platform's standing row.
RidgeState = tuple


def initial_state(level: LevelLayout, view: RidgeView) -> RidgeState:
    r, c = level.start
    return (c, float(c), float(r), 0.0, 0.0, True, 0.0)


def step(
    level: LevelLayout, state: RidgeState, view: RidgeView, action: int
) -> tuple[RidgeState, float, str]:
    col, xf, y, vx, vy, grounded, h = state
    tiles = level.tiles
    width, height = level.width, level.height
    speed = view.agent_speed
    dirx = -1.0 if action == 1 else (1.0 if action == 2 else 0.0)
    reward = view.step_penalty

    if grounded:
        if action == 3:
            # Jump keeps the current horizontal momentum and launches from
            # the tile center.
            vy = -view.jump_impulse
            grounded = False
            h = 0.0
            xf = float(col)
        else:
            vx = dirx * speed
            h += vx
            while h >= 1.0 and col < width - 1:
                col += 1
                h -= 1.0
            while h <= -1.0 and col > 0:
                col -= 1
                h += 1.0
            xf = float(col)
            row = int(y)
            if tiles[row + 1, col] != TILE_PLATFORM:
                grounded = False  # walked off the edge; fall from the center
                vy = 0.0
                h = 0.0

    if not grounded:
        vx += dirx * speed * view.air_control
        vx = max(-speed, min(speed, vx))
        vy += view.gravity
        y_old = y
        xf += vx
        y += vy
        if vy > 0.0:
            c = math.floor(xf + 0.5)
            if 0 <= c < width:
                # ceil includes an integral start row, so a jump weaker than
                # gravity re-lands instead of tunnelling through its platform.
                r_first = math.ceil(y_old)
                r_last = math.floor(y)
                for r in range(r_first, r_last + 1):
                    if 0 <= r and r + 1 < height and tiles[r + 1, c] == TILE_PLATFORM:
                        col = c
                        xf = float(c)
                        y = float(r)
                        vx = 0.0
                        vy = 0.0
                        h = 0.0
                        grounded = True
                        break
        if y > height - 1:
            return (col, xf, y, vx, vy, grounded, h), reward, "death"

    if grounded and (int(y), col) == level.goal:
        return (col, xf, y, vx, vy, grounded, h), reward + view.completion_reward, "goal"
    return (col, xf, y, vx, vy, grounded, h), reward, "running"


def agent_cell(state: RidgeState) -> tuple[int, int]:
    _, xf, y, _, _, _, _ = state
    return (math.floor(y + 0.5), math.floor(xf + 0.5))


def status_vector(
    level: LevelLayout, state: RidgeState, view: RidgeView, step_count: int
) -> np.ndarray:
    _, _, _, vx, vy, grounded, _ = state
    remaining = 1.0 - step_count / view.max_episode_steps
    return np.array([1.0 if grounded else 0.0, vx, vy, remaining], dtype=np.float64)


def composite_tiles(level: LevelLayout, state: RidgeState) -> np.ndarray:
    return level.tiles


def _jump_lands_on(
    level: LevelLayout, view: RidgeView, takeoff_col: int, takeoff_row: int,
    section: tuple[int, int, int],
) -> bool:
    """Simulate a full-speed rightward jump from a takeoff column."""
    state: RidgeState = (
        takeoff_col, float(takeoff_col), float(takeoff_row),
        view.agent_speed, 0.0, True, 0.0,
    )
    state, _, cause = step(level, state, view, 3)
    for _ in range(400):
        if cause == "death":
            return False
        col, _, y, _, _, grounded, _ = state
        if grounded:  # includes landing straight onto the goal cell
            return section[0] <= col <= section[1] and int(y) == section[2]
        state, _, cause = step(level, state, view, 0)
    return False


def solvable(level: LevelLayout, view: RidgeView) -> bool:
    """Sequential per-gap clearance: some takeoff column on each section
    lands the jump on the next section.  Certifies reachability only; the
    step budget is not modelled for this game."""
    sections = level.sections
    for i in range(len(sections) - 1):
        a0, a1, row = sections[i]
        # Full takeoff speed at column k needs one approach tile when the
        # walk covers a whole tile per tick.
        k_lo = a0 + 1 if view.agent_speed >= 1.0 else a0
        if not any(
            _jump_lands_on(level, view, k, row, sections[i + 1])
            for k in range(k_lo, a1 + 1)
        ):
            return False
    return True
