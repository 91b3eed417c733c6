"""Single-environment core: episode lifecycle, observations, rewards.

Given (game, resolved context, master seed, env index), the whole
trajectory is a pure function of the action sequence: every episode derives
a private RNG stream from (master_seed, env_index, episode_index), realizes
its range parameters from it, and generates its level from the remainder of
the same stream.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Any

import numpy as np

from . import games
from .context import (
    ContextSpec,
    EpisodeContext,
    ResolvedContext,
    collect_errors,
    realize,
    resolve,
    sample_ranges,
)
from .errors import CtxgridError, InvalidAction, InvalidContext, SteppedAfterDone
from .rng import derive


@dataclass(frozen=True)
class Observation:
    """Tile window centered on the agent plus a small status vector.

    tiles is (2v+1) x (2v+1) for the episode's visibility v; cells outside
    the level encode as tile id 0.
    """

    tiles: np.ndarray
    status: np.ndarray

    def tobytes(self) -> bytes:
        return self.tiles.tobytes() + b"/" + self.status.tobytes()


@dataclass(frozen=True)
class StepResult:
    observation: Observation
    reward: float
    done: bool
    info: dict[str, Any]


def _window(tiles: np.ndarray, center: tuple[int, int], v: int) -> np.ndarray:
    size = 2 * v + 1
    out = np.zeros((size, size), dtype=tiles.dtype)
    r0, c0 = center[0] - v, center[1] - v
    src_r0, src_c0 = max(r0, 0), max(c0, 0)
    src_r1 = min(r0 + size, tiles.shape[0])
    src_c1 = min(c0 + size, tiles.shape[1])
    if src_r0 < src_r1 and src_c0 < src_c1:
        out[src_r0 - r0 : src_r1 - r0, src_c0 - c0 : src_c1 - c0] = tiles[
            src_r0:src_r1, src_c0:src_c1
        ]
    return out


class Env:
    """One game instance.  Exclusive access required for reset/step."""

    def __init__(
        self,
        game_id: str,
        resolved: ResolvedContext,
        master_seed: int,
        env_index: int = 0,
        track_context: bool = True,
    ) -> None:
        self.game_id = game_id
        self.schema = games.schema_for(game_id)
        errors = collect_errors(self.schema, resolved.values)
        if errors or set(resolved.values) != {p.name for p in self.schema.params}:
            raise InvalidContext(
                f"resolved context invalid for {game_id}: "
                + (str(errors[0]) if errors else "missing parameters")
            )
        self._game = games._module(game_id)
        self._num_actions = self._game.NUM_ACTIONS
        self.resolved = resolved
        self.master_seed = master_seed
        self.env_index = env_index
        self.track_context = track_context
        self.episode_index = 0
        self.episode: EpisodeContext | None = None
        self.level = None
        self.agent_state: Any = None
        self.step_count = 0
        self._view = None
        self._done = False
        self._episode_return = 0.0

    def set_resolved(self, resolved: ResolvedContext) -> None:
        """Swap the context; takes effect at the next reset."""
        self.resolved = resolved

    def reset(self) -> Observation:
        """Start a fresh episode: derive its stream, realize its context,
        generate its level."""
        self.episode_index += 1
        stream = derive(self.master_seed, self.env_index, self.episode_index)
        if self.track_context:
            self.episode = realize(self.schema, self.resolved, stream, self.episode_index)
            self._view = games.make_view(self.game_id, self.episode)
        else:
            # Static-baseline mode: identical draws, no context bookkeeping.
            realized = sample_ranges(self.schema, self.resolved.values, stream)
            self._view = games.build_view(self.game_id, self.resolved.values, realized)
        self.level = self._game.generate(self._view, stream)
        self.agent_state = self._game.initial_state(self.level, self._view)
        self.step_count = 0
        self._done = False
        self._episode_return = 0.0
        return self._observe()

    def step(self, action: int) -> StepResult:
        if self.level is None:
            raise CtxgridError("step before reset")
        if self._done:
            raise SteppedAfterDone()
        if not isinstance(action, (int, np.integer)) or not 0 <= action < self._num_actions:
            raise InvalidAction(action, self._num_actions)
        self.agent_state, reward, cause = self._game.step(
            self.level, self.agent_state, self._view, int(action)
        )
        self.step_count += 1
        if cause == "running" and self.step_count >= self._view.max_episode_steps:
            cause = "timeout"
        self._episode_return += reward
        done = cause != "running"
        self._done = done
        info: dict[str, Any] = {
            "episode_return": self._episode_return,
            "episode_length": self.step_count,
            "termination_cause": cause,
        }
        if done and self.track_context:
            info["episode_context"] = self.episode
        return StepResult(self._observe(), reward, done, info)

    def get_context(self) -> EpisodeContext:
        """The current episode's realized context; pure read."""
        if self.episode is None:
            raise CtxgridError("no episode active (reset not called or static mode)")
        return self.episode

    def _observe(self) -> Observation:
        comp = self._game.composite_tiles(self.level, self.agent_state)
        center = self._game.agent_cell(self.agent_state)
        tiles = _window(comp, center, self._view.visibility)
        status = self._game.status_vector(
            self.level, self.agent_state, self._view, self.step_count
        )
        return Observation(tiles=tiles, status=status)

    def render_ascii(self) -> str:
        from .render import render_ascii

        return render_ascii(self)

    def render_ppm(self, scale: int = 8) -> bytes:
        from .render import render_ppm

        return render_ppm(self, scale)


def create_env(
    game_id: str,
    resolved: ResolvedContext,
    master_seed: int,
    env_index: int = 0,
) -> Env:
    """Construct an Env; no episode is active until reset."""
    return Env(game_id, resolved, master_seed, env_index=env_index)


def env_from_spec(game_id: str, spec: ContextSpec, master_seed: int, env_index: int = 0) -> Env:
    """Convenience: validate + resolve a spec, then construct the env."""
    schema = games.schema_for(game_id)
    return create_env(game_id, resolve(schema, spec), master_seed, env_index=env_index)
