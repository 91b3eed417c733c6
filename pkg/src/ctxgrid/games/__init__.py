"""Game registry: schemas, presets, generators, dynamics and oracles.

All three games share one calling convention; the engine dispatches through
the functions below and never touches a game module directly.
"""

from __future__ import annotations

from typing import Any

from ..context import ContextSchema, EpisodeContext
from ..errors import UnknownGame
from ..rng import RngStream
from . import lanes, maze, ridge
from .layout import LevelLayout, MoverTrack

_MODULES = {
    lanes.GAME_ID: lanes,
    maze.GAME_ID: maze,
    ridge.GAME_ID: ridge,
}

GAME_IDS = tuple(sorted(_MODULES))


def _module(game_id: str):
    try:
        return _MODULES[game_id]
    except KeyError:
        raise UnknownGame(game_id) from None


def schema_for(game_id: str) -> ContextSchema:
    """The static context schema of a game; stable across calls."""
    return _module(game_id).SCHEMA


def preset(game_id: str, mode: str) -> dict[str, Any]:
    """The documented easy/hard context spec of a game.

    Presets are data, not code paths: each is an ordinary spec that
    validates against the schema, with the hard mode dominating the easy
    mode in every map-complexity parameter it touches.
    """
    mod = _module(game_id)
    if mode == "easy":
        return dict(mod.EASY)
    if mode == "hard":
        return dict(mod.HARD)
    raise ValueError(f"mode must be 'easy' or 'hard', got {mode!r}")


_VIEWS = {
    "lanes": lanes.LanesView,
    "maze": maze.MazeView,
    "ridge": ridge.RidgeView,
}


def make_view(game_id: str, episode_ctx: EpisodeContext):
    """Per-episode parameter view consumed by generator and dynamics."""
    _module(game_id)
    return _VIEWS[game_id].from_episode(episode_ctx)


def build_view(game_id: str, values: dict, realized: dict):
    """View from raw value maps (static-baseline path, no EpisodeContext)."""
    _module(game_id)
    return _VIEWS[game_id].build(values, realized)


def num_actions(game_id: str) -> int:
    return _module(game_id).NUM_ACTIONS


def action_names(game_id: str) -> tuple[str, ...]:
    return _module(game_id).ACTION_NAMES


def generate_level(
    game_id: str, episode_ctx: EpisodeContext, stream: RngStream
) -> LevelLayout:
    """Deterministic procedural generation from a realized episode context."""
    mod = _module(game_id)
    return mod.generate(make_view(game_id, episode_ctx), stream)


def dynamics_step(
    game_id: str,
    level: LevelLayout,
    agent_state: Any,
    episode_ctx: EpisodeContext,
    action: int,
) -> tuple[Any, float, str]:
    """One tick of game dynamics; pure in all inputs."""
    mod = _module(game_id)
    return mod.step(level, agent_state, make_view(game_id, episode_ctx), action)


def solvable(game_id: str, level: LevelLayout, episode_ctx: EpisodeContext) -> bool:
    """Search-based certificate that a generated level is completable.

    Used by tests and the CLI, never by generation.
    """
    mod = _module(game_id)
    return mod.solvable(level, make_view(game_id, episode_ctx))


__all__ = [
    "GAME_IDS",
    "LevelLayout",
    "MoverTrack",
    "action_names",
    "dynamics_step",
    "generate_level",
    "lanes",
    "make_view",
    "maze",
    "num_actions",
    "preset",
    "ridge",
    "schema_for",
    "solvable",
]
