"""Shared test utilities: spec fuzzing, trajectory capture, layout audits."""

from __future__ import annotations

import random

import numpy as np

import ctxgrid as cg
from ctxgrid.games.layout import TILE_PLATFORM, TILE_ROAD, TILE_WATER


def draw_value(p: cg.ParamDef, rnd: random.Random):
    if p.kind == "bool":
        return rnd.random() < 0.5
    if p.kind == "enum":
        return rnd.choice(p.enum_values)
    if p.kind == "int":
        step = int(p.step or 1)
        return p.hard_min + step * rnd.randint(0, (p.hard_max - p.hard_min) // step)
    if p.step is not None:
        n = int(round((p.hard_max - p.hard_min) / p.step))
        return p.hard_min + p.step * rnd.randint(0, n)
    return rnd.uniform(p.hard_min, p.hard_max)


def fuzz_valid_spec(schema: cg.ContextSchema, rnd: random.Random, max_tries: int = 500):
    """A random spec that validates: rejection sampling over the hard bounds."""
    pair_of = {}
    for rp in schema.range_pairs:
        pair_of[rp.lo.name] = rp.hi.name
        pair_of[rp.hi.name] = rp.lo.name
    for lo, hi in schema.ordered_pairs:
        pair_of[lo] = hi
        pair_of[hi] = lo
    for _ in range(max_tries):
        spec = {}
        for p in schema.params:
            if rnd.random() < 0.6:
                spec[p.name] = draw_value(p, rnd)
        # Complete and order any half-drawn pair.
        for name in list(spec):
            partner = pair_of.get(name)
            if partner and partner not in spec:
                spec[partner] = draw_value(schema.by_name[partner], rnd)
        for rp in schema.range_pairs:
            if rp.lo.name in spec and spec[rp.lo.name] > spec[rp.hi.name]:
                spec[rp.lo.name], spec[rp.hi.name] = spec[rp.hi.name], spec[rp.lo.name]
        for lo, hi in schema.ordered_pairs:
            if lo in spec and spec[lo] > spec[hi]:
                spec[lo], spec[hi] = spec[hi], spec[lo]
        if not cg.collect_errors(schema, spec):
            return spec
    raise AssertionError(f"no valid spec found for {schema.game_id} in {max_tries} tries")


def random_actions(game_id: str, rnd: random.Random, length: int) -> list[int]:
    n = cg.num_actions(game_id)
    return [rnd.randrange(n) for _ in range(length)]


def run_trajectory(game_id: str, spec, seed: int, actions) -> bytes:
    """Byte transcript of a single-env run with manual resets on done."""
    env = cg.env_from_spec(game_id, spec, master_seed=seed)
    chunks = [env.reset().tobytes()]
    for a in actions:
        result = env.step(a)
        chunks.append(result.observation.tobytes())
        chunks.append(repr(result.reward).encode())
        chunks.append(b"D" if result.done else b".")
        if result.done:
            chunks.append(env.reset().tobytes())
    return b"|".join(chunks)


def batch_transcript(batch) -> bytes:
    chunks = []
    for obs in batch.observations:
        chunks.append(obs.tobytes())
    chunks.append(batch.rewards.tobytes())
    chunks.append(batch.dones.tobytes())
    return b"|".join(chunks)


def count_platform_runs(tiles: np.ndarray) -> int:
    """Maximal horizontal runs of platform tiles (ridge section count)."""
    runs = 0
    for row in tiles:
        in_run = False
        for t in row:
            if t == TILE_PLATFORM and not in_run:
                runs += 1
                in_run = True
            elif t != TILE_PLATFORM:
                in_run = False
    return runs


def count_lane_rows(tiles: np.ndarray) -> tuple[int, int]:
    """(road rows, water rows) read straight off the base tiles."""
    road = sum(1 for row in tiles if row[0] == TILE_ROAD)
    water = sum(1 for row in tiles if row[0] == TILE_WATER)
    return road, water
