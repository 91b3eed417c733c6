"""Vectorized environment: N independent engine instances stepped as a batch.

Construction accepts one context spec (broadcast to all envs) or one per
env.  Stepping auto-resets finished episodes: when dones[i] is true,
observations[i] already belongs to the next episode and infos[i] carries the
finished episode's statistics and EpisodeContext.

Context reassignment latches: set_context_to validates eagerly, parks the
spec in a pending slot, and the swap happens at that env's next reset — the
running episode is untouched and no other env is affected in any way
(per-episode RNG streams are derived per env index, never shared).
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Any, Mapping, Sequence

import numpy as np

from . import games
from .context import ContextSpec, EpisodeContext, resolve, validate
from .env import Env, Observation
from .errors import (
    ActionCountMismatch,
    ContextCountMismatch,
    ContextOptionError,
    ContextValidationError,
    IndexOutOfRange,
    InvalidAction,
)


@dataclass(frozen=True)
class BatchStep:
    observations: list[Observation]
    rewards: np.ndarray  # float64, shape (N,)
    dones: np.ndarray  # bool, shape (N,)
    infos: list[dict[str, Any]]

    def stacked_tiles(self) -> np.ndarray | None:
        """Contiguous (N, s, s) tile buffer when all envs share one
        visibility; None for ragged batches."""
        shapes = {o.tiles.shape for o in self.observations}
        if len(shapes) != 1:
            return None
        return np.stack([o.tiles for o in self.observations])


class VecEnv:
    """N independent envs with per-env contexts and latched reassignment."""

    def __init__(
        self,
        game_id: str,
        num_envs: int,
        context_options: Sequence[Mapping[str, Any]],
        master_seed: int,
        track_context: bool = True,
    ) -> None:
        if num_envs <= 0:
            raise ValueError("num_envs must be positive")
        self.game_id = game_id
        self.schema = games.schema_for(game_id)
        self.num_envs = num_envs
        self.master_seed = master_seed
        self.track_context = track_context
        if len(context_options) == 1:
            specs = [dict(context_options[0]) for _ in range(num_envs)]
        elif len(context_options) == num_envs:
            specs = [dict(s) for s in context_options]
        else:
            raise ContextCountMismatch(len(context_options), num_envs)
        self.envs: list[Env] = []
        for i, spec in enumerate(specs):
            try:
                resolved = resolve(self.schema, spec)
            except ContextValidationError as e:
                raise ContextOptionError(i, e) from None
            self.envs.append(
                Env(game_id, resolved, master_seed, env_index=i, track_context=track_context)
            )
        self.pending: list[ContextSpec | None] = [None] * num_envs
        self.last_observations: list[Observation] = [env.reset() for env in self.envs]
        self._num_actions = games.num_actions(game_id)

    def _check_index(self, i: int) -> None:
        if not 0 <= i < self.num_envs:
            raise IndexOutOfRange(i, self.num_envs)

    def reset(self) -> list[Observation]:
        """Force-reset every env, consuming any pending contexts."""
        for i in range(self.num_envs):
            self._apply_pending(i)
        self.last_observations = [env.reset() for env in self.envs]
        return list(self.last_observations)

    def _apply_pending(self, i: int) -> None:
        spec = self.pending[i]
        if spec is not None:
            self.pending[i] = None
            self.envs[i].set_resolved(resolve(self.schema, spec))

    def step(self, actions: Sequence[int]) -> BatchStep:
        """Step all envs in index order; auto-reset the finished ones.

        Semantically identical to stepping each env sequentially.
        """
        if len(actions) != self.num_envs:
            raise ActionCountMismatch(len(actions), self.num_envs)
        for i, a in enumerate(actions):
            if not isinstance(a, (int, np.integer)) or not 0 <= a < self._num_actions:
                raise InvalidAction(a, self._num_actions, env_index=i)
        observations: list[Observation] = []
        rewards = np.empty(self.num_envs, dtype=np.float64)
        dones = np.empty(self.num_envs, dtype=bool)
        infos: list[dict[str, Any]] = []
        for i, env in enumerate(self.envs):
            result = env.step(int(actions[i]))
            rewards[i] = result.reward
            dones[i] = result.done
            infos.append(result.info)
            if result.done:
                self._apply_pending(i)
                observations.append(env.reset())
            else:
                observations.append(result.observation)
        self.last_observations = observations
        return BatchStep(observations, rewards, dones, infos)

    def set_context_to(self, i: int, spec: Mapping[str, Any]) -> None:
        """Latch a new context for env i; applied at its next reset.

        Validates eagerly so a bad spec fails here, not inside some later
        auto-reset.  Replaces the env's whole spec (defaults plus the given
        keys), and replaces any previously pending spec.
        """
        self._check_index(i)
        validate(self.schema, spec)
        self.pending[i] = dict(spec)

    def get_context(self, i: int) -> EpisodeContext:
        """The CURRENT episode's context for env i; pure read."""
        self._check_index(i)
        return self.envs[i].get_context()


def vec_create(
    game_id: str,
    num_envs: int,
    context_options: Sequence[Mapping[str, Any]],
    master_seed: int,
) -> VecEnv:
    """Construct a VecEnv (alias for the class constructor)."""
    return VecEnv(game_id, num_envs, context_options, master_seed)
