"""Microbenchmark harness: context-machinery overhead as ratios.

Absolute wall times are machine noise; the contract is the overhead shape.
The harness times batched stepping twice — once with the full context
machinery, once in a static-baseline mode that draws identical values but
skips all per-episode context bookkeeping — plus get_context (pure reads)
and set_context_to (validation included, pending slots drained by untimed
resets between timed batches).  Reported numbers are per-env-call
nanoseconds; medians over repetitions after warmup, minima kept for
diagnosis.  Auto-resets inside stepping are part of the step cost.
"""

from __future__ import annotations

import statistics
import time
from dataclasses import dataclass, field
from typing import Any

from . import games
from .rng import RngStream, derive
from .vecenv import VecEnv

_SET_BATCH = 64  # sets per env between drains


@dataclass(frozen=True)
class BenchConfig:
    game_id: str
    num_envs: int = 64
    steps_per_env: int = 10_000
    warmup_steps: int = 200
    repetitions: int = 3
    mode: str = "contextual"  # step variant reported as "step"

    def __post_init__(self) -> None:
        if self.steps_per_env < 1_000:
            raise ValueError("steps_per_env must be at least 1000")
        if self.repetitions < 3:
            raise ValueError("repetitions must be at least 3")
        if self.mode not in ("contextual", "static_baseline"):
            raise ValueError(f"bad mode {self.mode!r}")


@dataclass(frozen=True)
class OpStat:
    median_ns: float
    min_ns: float


@dataclass(frozen=True)
class BenchReport:
    game_id: str
    num_envs: int
    steps_per_env: int
    repetitions: int
    host: str
    stats: dict[str, OpStat] = field(default_factory=dict)
    ratios: dict[str, float] = field(default_factory=dict)


def _action_batches(game_id: str, num_envs: int, steps: int, stream: RngStream) -> list[list[int]]:
    n = games.num_actions(game_id)
    return [[stream.next_below(n) for _ in range(num_envs)] for _ in range(steps)]


def _time_steps(venv: VecEnv, batches: list[list[int]]) -> float:
    t0 = time.perf_counter_ns()
    for actions in batches:
        venv.step(actions)
    dt = time.perf_counter_ns() - t0
    return dt / (len(batches) * venv.num_envs)


def _time_get_context(venv: VecEnv, calls: int) -> float:
    n = venv.num_envs
    t0 = time.perf_counter_ns()
    for i in range(calls):
        venv.get_context(i % n)
    return (time.perf_counter_ns() - t0) / calls


def _time_set_context(venv: VecEnv, spec: dict[str, Any], batches: int) -> float:
    n = venv.num_envs
    total = 0
    for _ in range(batches):
        t0 = time.perf_counter_ns()
        for _ in range(_SET_BATCH):
            for i in range(n):
                venv.set_context_to(i, spec)
        total += time.perf_counter_ns() - t0
        venv.reset()  # drain pending slots; untimed
    return total / (batches * _SET_BATCH * n)


def run_bench(config: BenchConfig) -> BenchReport:
    """Run the full comparison and return the ratio report."""
    import platform

    game = config.game_id
    ctx_venv = VecEnv(game, config.num_envs, [{}], master_seed=2024)
    static_venv = VecEnv(game, config.num_envs, [{}], master_seed=2024, track_context=False)
    warmup = _action_batches(game, config.num_envs, config.warmup_steps, derive(7, 0, 0))
    for venv in (ctx_venv, static_venv):
        for actions in warmup:
            venv.step(actions)

    set_spec = games.preset(game, "easy")
    step_ctx: list[float] = []
    step_static: list[float] = []
    get_ctx: list[float] = []
    set_ctx: list[float] = []
    for rep in range(config.repetitions):
        batches = _action_batches(
            game, config.num_envs, config.steps_per_env, derive(11, rep, 0)
        )
        step_ctx.append(_time_steps(ctx_venv, batches))
        step_static.append(_time_steps(static_venv, batches))
        get_ctx.append(_time_get_context(ctx_venv, config.steps_per_env))
        set_ctx.append(_time_set_context(ctx_venv, set_spec, batches=4))

    stats = {
        "step_contextual": OpStat(statistics.median(step_ctx), min(step_ctx)),
        "step_static": OpStat(statistics.median(step_static), min(step_static)),
        "get_context": OpStat(statistics.median(get_ctx), min(get_ctx)),
        "set_context_to": OpStat(statistics.median(set_ctx), min(set_ctx)),
    }
    step_ref = stats["step_contextual"].median_ns
    ratios = {
        "step_contextual_vs_static": step_ref / stats["step_static"].median_ns,
        "get_context_vs_step": stats["get_context"].median_ns / step_ref,
        "set_context_to_vs_step": stats["set_context_to"].median_ns / step_ref,
    }
    return BenchReport(
        game_id=game,
        num_envs=config.num_envs,
        steps_per_env=config.steps_per_env,
        repetitions=config.repetitions,
        host=f"{platform.platform()} / {platform.python_implementation()} "
        f"{platform.python_version()}",
        stats=stats,
        ratios=ratios,
    )


_ROW_RATIO = {
    "step_static": lambda r: 1.0,
    "step_contextual": lambda r: r.ratios["step_contextual_vs_static"],
    "get_context": lambda r: r.ratios["get_context_vs_step"],
    "set_context_to": lambda r: r.ratios["set_context_to_vs_step"],
}
_ROW_ORDER = ("step_static", "step_contextual", "get_context", "set_context_to")


def emit_report(report: BenchReport, fmt: str = "text") -> str:
    """Render a report; identical reports render to identical bytes.

    CSV rows carry each operation's headline ratio: the contextual step
    against the static baseline, reads and reassignments against the
    contextual step.
    """
    if fmt == "csv":
        lines = ["operation,median_ns,min_ns,ratio_vs_step"]
        for op in _ROW_ORDER:
            s = report.stats[op]
            lines.append(f"{op},{s.median_ns!r},{s.min_ns!r},{_ROW_RATIO[op](report)!r}")
        return "\n".join(lines) + "\n"
    if fmt != "text":
        raise ValueError(f"unknown format {fmt!r}")
    lines = [
        f"game={report.game_id} envs={report.num_envs} "
        f"steps/env={report.steps_per_env} reps={report.repetitions}",
        f"host: {report.host}",
        "",
        f"{'operation':<18} {'median_ns':>12} {'min_ns':>12} {'ratio':>8}",
    ]
    for op in _ROW_ORDER:
        s = report.stats[op]
        lines.append(
            f"{op:<18} {s.median_ns:>12.1f} {s.min_ns:>12.1f} "
            f"{_ROW_RATIO[op](report):>8.3f}"
        )
    return "\n".join(lines) + "\n"
