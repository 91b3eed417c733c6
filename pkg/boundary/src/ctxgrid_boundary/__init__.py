"""Boundary layer exposing ctxgrid VecEnvs to training stacks.

Exactly two marshaling mechanisms cross this layer: context specs travel as
serialized flat-JSON text, observations as flat numeric buffers (one
contiguous buffer per field when every env shares one window shape, per-env
buffers plus the handle's shape table otherwise).  Errors carry the primary
side's exception name and message verbatim.

The layer holds no state of its own beyond the handle -> VecEnv reference:
closing and reopening a handle with identical arguments reproduces
trajectories bit for bit.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Any, Sequence

import numpy as np

from ctxgrid import VecEnv, parse_context
from ctxgrid.context import EpisodeContext
from ctxgrid.errors import CtxgridError

__version__ = "0.1.0"

__all__ = [
    "BoundaryBatch",
    "BoundaryEnvHandle",
    "BoundaryError",
    "boundary_close",
    "boundary_create",
    "boundary_get_context",
    "boundary_set_context_to",
    "boundary_step",
]


class BoundaryError(Exception):
    """Primary-side failure crossing the boundary: name + message verbatim."""

    def __init__(self, name: str, message: str) -> None:
        super().__init__(f"{name}: {message}")
        self.name = name
        self.message = message


def _surface(exc: Exception) -> BoundaryError:
    return BoundaryError(type(exc).__name__, str(exc))


@dataclass(frozen=True)
class BoundaryBatch:
    """One vectorized step crossing the boundary.

    tiles/status are single flat buffers for homogeneous window shapes and
    lists of per-env flat buffers otherwise; infos are JSON strings with
    lexicographic keys.
    """

    tiles: np.ndarray | list[np.ndarray]
    status: np.ndarray | list[np.ndarray]
    rewards: np.ndarray
    dones: np.ndarray
    infos: list[str]


class BoundaryEnvHandle:
    """Opaque reference to one VecEnv plus its observation descriptor."""

    def __init__(self, venv: VecEnv) -> None:
        self._venv: VecEnv | None = venv
        self.num_envs = venv.num_envs
        self.game_name = venv.game_id
        self.obs_shapes = [
            (obs.tiles.shape[0], obs.tiles.shape[1], obs.status.shape[0])
            for obs in venv.last_observations
        ]
        self.homogeneous = len(set(self.obs_shapes)) == 1
        # Element counts of the flat buffers a step returns.
        self.tiles_elements = sum(r * c for r, c, _ in self.obs_shapes)
        self.status_elements = sum(s for _, _, s in self.obs_shapes)

    @property
    def venv(self) -> VecEnv:
        if self._venv is None:
            raise BoundaryError("ClosedHandle", "handle has been closed")
        return self._venv

    def close(self) -> None:
        self._venv = None


def _context_json(ctx: EpisodeContext) -> str:
    payload = {
        "episode_index": ctx.episode_index,
        "realized": ctx.realized,
        "resolved": ctx.resolved.values,
        "seed_used": ctx.seed_used,
    }
    return json.dumps(payload, sort_keys=True)


def _info_json(info: dict[str, Any]) -> str:
    payload = {
        "episode_length": info["episode_length"],
        "episode_return": info["episode_return"],
        "termination_cause": info["termination_cause"],
    }
    ctx = info.get("episode_context")
    if ctx is not None:
        payload["episode_context"] = json.loads(_context_json(ctx))
    return json.dumps(payload, sort_keys=True)


def boundary_create(
    game_name: str, num_envs: int, context_jsons: Sequence[str], seed: int
) -> BoundaryEnvHandle:
    """Construct a vectorized env from serialized context specs."""
    try:
        specs = [parse_context(text) for text in context_jsons]
        if num_envs <= 0:
            raise ValueError("num_envs must be positive")
        venv = VecEnv(game_name, num_envs, specs, master_seed=seed)
    except (CtxgridError, ValueError) as exc:
        raise _surface(exc) from None
    return BoundaryEnvHandle(venv)


def _flatten(arrays: list[np.ndarray], homogeneous: bool):
    flat = [a.reshape(-1) for a in arrays]
    return np.concatenate(flat) if homogeneous else flat


def boundary_step(handle: BoundaryEnvHandle, actions: Sequence[int]) -> BoundaryBatch:
    """Step all envs; semantics identical to the primary's vec step."""
    venv = handle.venv
    try:
        batch = venv.step([int(a) for a in actions])
    except (CtxgridError, TypeError, ValueError) as exc:
        raise _surface(exc) from None
    return BoundaryBatch(
        tiles=_flatten([o.tiles for o in batch.observations], handle.homogeneous),
        status=_flatten([o.status for o in batch.observations], handle.homogeneous),
        rewards=batch.rewards,
        dones=batch.dones,
        infos=[_info_json(info) for info in batch.infos],
    )


def boundary_set_context_to(handle: BoundaryEnvHandle, i: int, context_json: str) -> None:
    """Latch a serialized context for env i; applied at its next reset."""
    try:
        handle.venv.set_context_to(i, parse_context(context_json))
    except CtxgridError as exc:
        raise _surface(exc) from None


def boundary_get_context(handle: BoundaryEnvHandle, i: int) -> str:
    """Env i's current episode context as canonical JSON."""
    try:
        return _context_json(handle.venv.get_context(i))
    except CtxgridError as exc:
        raise _surface(exc) from None


def boundary_close(handle: BoundaryEnvHandle) -> None:
    handle.close()
