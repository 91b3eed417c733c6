"""Offline renderers: full-level ASCII text and binary PPM (P6) frames.

One glyph / one color per tile id, agent overlaid on top.  Output is a pure
function of the env state, so identical states render to identical bytes.
"""

from __future__ import annotations

import numpy as np

from .games.layout import (
    TILE_FLOOR,
    TILE_GOAL,
    TILE_LOG,
    TILE_OOB,
    TILE_PLATFORM,
    TILE_ROAD,
    TILE_VEHICLE,
    TILE_WALL,
    TILE_WATER,
)

GLYPHS = {
    TILE_OOB: " ",
    TILE_FLOOR: ".",
    TILE_WALL: "#",
    TILE_GOAL: "G",
    TILE_PLATFORM: "=",
    TILE_ROAD: "-",
    TILE_WATER: "~",
    TILE_VEHICLE: "V",
    TILE_LOG: "L",
}
AGENT_GLYPH = "A"

PALETTE = {
    TILE_OOB: (0, 0, 0),
    TILE_FLOOR: (34, 34, 40),
    TILE_WALL: (120, 120, 130),
    TILE_GOAL: (60, 200, 60),
    TILE_PLATFORM: (150, 100, 40),
    TILE_ROAD: (70, 70, 70),
    TILE_WATER: (30, 60, 160),
    TILE_VEHICLE: (210, 50, 50),
    TILE_LOG: (130, 90, 30),
}
AGENT_COLOR = (240, 220, 60)


def _frame(env) -> tuple[np.ndarray, tuple[int, int] | None]:
    comp = env._game.composite_tiles(env.level, env.agent_state)
    cell = env._game.agent_cell(env.agent_state)
    if not (0 <= cell[0] < env.level.height and 0 <= cell[1] < env.level.width):
        cell = None
    return comp, cell


def render_ascii(env) -> str:
    comp, cell = _frame(env)
    rows = []
    for r in range(comp.shape[0]):
        chars = [GLYPHS[t] for t in comp[r]]
        if cell is not None and cell[0] == r:
            chars[cell[1]] = AGENT_GLYPH
        rows.append("".join(chars))
    return "\n".join(rows) + "\n"


def render_ppm(env, scale: int = 8) -> bytes:
    comp, cell = _frame(env)
    h, w = comp.shape
    rgb = np.zeros((h, w, 3), dtype=np.uint8)
    for tile_id, color in PALETTE.items():
        rgb[comp == tile_id] = color
    if cell is not None:
        rgb[cell[0], cell[1]] = AGENT_COLOR
    big = np.repeat(np.repeat(rgb, scale, axis=0), scale, axis=1)
    header = f"P6\n{w * scale} {h * scale}\n255\n".encode("ascii")
    return header + big.tobytes()
