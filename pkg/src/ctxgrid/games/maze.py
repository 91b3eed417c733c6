"""Maze: reach the goal through a procedurally carved grid.

The interior is a perfect maze carved by an iterative recursive backtracker
on an odd-dimension grid; each remaining interior wall is then knocked out
independently with probability wall_removal_prob.  That one scalar sweeps
the level from a perfect maze (exactly one path between any two cells) to a
fully open room.
"""

from __future__ import annotations

from dataclasses import dataclass
from collections import deque

import numpy as np

from ..context import ContextSchema, EpisodeContext, ParamDef
from ..rng import RngStream
from .layout import TILE_DTYPE, TILE_FLOOR, TILE_GOAL, TILE_WALL, LevelLayout

GAME_ID = "maze"

ACTION_NAMES = ("up", "down", "left", "right")
NUM_ACTIONS = 4
_MOVES = ((-1, 0), (1, 0), (0, -1), (0, 1))

SCHEMA = ContextSchema(
    game_id=GAME_ID,
    params=(
        ParamDef(
            "maze_dim_min", "int", 9, "map_complexity",
            hard_min=5, hard_max=25, step=2,
            range_role="min", range_partner="maze_dim_max",
            doc="Lower bound for the per-episode interior maze dimension (odd).",
        ),
        ParamDef(
            "maze_dim_max", "int", 15, "map_complexity",
            hard_min=5, hard_max=25, step=2,
            range_role="max", range_partner="maze_dim_min",
            doc="Upper bound for the per-episode interior maze dimension (odd).",
        ),
        ParamDef(
            "wall_removal_prob", "float", 0.0, "map_complexity",
            hard_min=0.0, hard_max=1.0,
            doc="Probability of deleting each interior wall after carving; 1 = open room.",
        ),
        ParamDef(
            "visibility", "int", 4, "game_mechanics",
            hard_min=1, hard_max=12,
            doc="Observation half-width; the window is (2*visibility+1) squared.",
        ),
        ParamDef(
            "max_episode_steps", "int", 600, "game_mechanics",
            hard_min=350, hard_max=5000,
            doc="Hard episode step cap; lower bound covers the worst 25x25 maze path.",
        ),
        ParamDef(
            "goal_reward", "float", 10.0, "reward_structure",
            hard_min=0.0, hard_max=100.0,
            doc="Reward on reaching the goal tile.",
        ),
        ParamDef(
            "step_penalty", "float", -0.01, "reward_structure",
            hard_min=-1.0, hard_max=0.0,
            doc="Reward added on every tick.",
        ),
        ParamDef(
            "health", "int", 1, "agent_attribute",
            hard_min=1, hard_max=1,
            doc="Reserved agent-attribute slot; the maze agent is never damaged.",
        ),
        ParamDef(
            "goal_placement", "enum", "far_corner", "game_specific",
            enum_values=("far_corner", "random_open"),
            doc="Goal at the opposite corner, or on a uniformly drawn open tile.",
        ),
    ),
)

EASY = {"maze_dim_min": 5, "maze_dim_max": 9}
HARD = {"maze_dim_min": 15, "maze_dim_max": 21}


@dataclass(frozen=True)
class MazeView:
    """Per-episode parameter view used by generator and dynamics."""

    maze_dim: int
    wall_removal_prob: float
    visibility: int
    max_episode_steps: int
    goal_reward: float
    step_penalty: float
    goal_placement: str

    @classmethod
    def build(cls, values: dict, realized: dict) -> "MazeView":
        return cls(
            maze_dim=realized["maze_dim"],
            wall_removal_prob=values["wall_removal_prob"],
            visibility=values["visibility"],
            max_episode_steps=values["max_episode_steps"],
            goal_reward=values["goal_reward"],
            step_penalty=values["step_penalty"],
            goal_placement=values["goal_placement"],
        )

    @classmethod
    def from_episode(cls, ep: EpisodeContext) -> "MazeView":
        return cls.build(ep.resolved.values, ep.realized)


def generate(view: MazeView, stream: RngStream) -> LevelLayout:
    dim = view.maze_dim
    n = dim + 2  # interior plus a one-tile border wall
    tiles = np.full((n, n), TILE_WALL, dtype=TILE_DTYPE)

    cdim = (dim + 1) // 2  # carving cells sit on odd tile coordinates
    visited = np.zeros((cdim, cdim), dtype=bool)
    visited[0, 0] = True
    tiles[1, 1] = TILE_FLOOR
    stack = [(0, 0)]
    while stack:
        ci, cj = stack[-1]
        options = []
        if ci > 0 and not visited[ci - 1, cj]:
            options.append((ci - 1, cj))
        if ci < cdim - 1 and not visited[ci + 1, cj]:
            options.append((ci + 1, cj))
        if cj > 0 and not visited[ci, cj - 1]:
            options.append((ci, cj - 1))
        if cj < cdim - 1 and not visited[ci, cj + 1]:
            options.append((ci, cj + 1))
        if not options:
            stack.pop()
            continue
        ni, nj = options[stream.next_below(len(options))]
        visited[ni, nj] = True
        tiles[1 + 2 * ni, 1 + 2 * nj] = TILE_FLOOR
        tiles[1 + ci + ni, 1 + cj + nj] = TILE_FLOOR  # wall between the two cells
        stack.append((ni, nj))

    # Wall-removal pass: deterministic row-major scan, one draw per wall so
    # stream consumption does not depend on the probability value.
    p = view.wall_removal_prob
    for r in range(1, n - 1):
        row = tiles[r]
        for c in range(1, n - 1):
            if row[c] == TILE_WALL and stream.next_float() < p:
                row[c] = TILE_FLOOR

    start = (1, 1)
    if view.goal_placement == "far_corner":
        goal = (n - 2, n - 2)
    else:
        open_cells = [
            (r, c)
            for r in range(1, n - 1)
            for c in range(1, n - 1)
            if tiles[r, c] == TILE_FLOOR and (r, c) != start
        ]
        goal = open_cells[stream.next_below(len(open_cells))]
    tiles[goal] = TILE_GOAL
    return LevelLayout(width=n, height=n, tiles=tiles, start=start, goal=goal)


def initial_state(level: LevelLayout, view: MazeView) -> tuple[int, int]:
    return level.start


def step(
    level: LevelLayout, state: tuple[int, int], view: MazeView, action: int
) -> tuple[tuple[int, int], float, str]:
    r, c = state
    dr, dc = _MOVES[action]
    nr, nc = r + dr, c + dc
    # Border rows are always wall, so the index is in bounds.
    if level.tiles[nr, nc] != TILE_WALL:
        r, c = nr, nc
    reward = view.step_penalty
    if (r, c) == level.goal:
        return (r, c), reward + view.goal_reward, "goal"
    return (r, c), reward, "running"


def agent_cell(state: tuple[int, int]) -> tuple[int, int]:
    return state


def status_vector(
    level: LevelLayout, state: tuple[int, int], view: MazeView, step_count: int
) -> np.ndarray:
    remaining = 1.0 - step_count / view.max_episode_steps
    return np.array([remaining], dtype=np.float64)


def composite_tiles(level: LevelLayout, state: tuple[int, int]) -> np.ndarray:
    return level.tiles


def solvable(level: LevelLayout, view: MazeView) -> bool:
    """BFS from start: goal reachable within the episode step budget."""
    dist = shortest_path_length(level)
    return dist is not None and dist <= view.max_episode_steps


def shortest_path_length(level: LevelLayout) -> int | None:
    tiles = level.tiles
    dist = {level.start: 0}
    queue = deque([level.start])
    while queue:
        r, c = queue.popleft()
        d = dist[(r, c)]
        if (r, c) == level.goal:
            return d
        for dr, dc in _MOVES:
            nxt = (r + dr, c + dc)
            if nxt not in dist and tiles[nxt] != TILE_WALL:
                dist[nxt] = d + 1
                queue.append(nxt)
    return None
