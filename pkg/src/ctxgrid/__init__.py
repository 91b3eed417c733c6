"""ctxgrid: context-driven procedural grid-game environments.

Three grid games (maze, lanes, ridge) whose procedural generation is driven
by explicit, validated context parameters instead of an opaque level id,
plus a vectorized environment with per-env contexts, between-episode
context reassignment and per-episode context introspection, a curriculum
driver, and a benchmark harness for the context-machinery overhead.
"""

from . import errors
from .bench import BenchConfig, BenchReport, OpStat, emit_report, run_bench
from .context import (
    CATEGORIES,
    ContextSchema,
    ContextSpec,
    EpisodeContext,
    ParamDef,
    ResolvedContext,
    collect_errors,
    parse_context,
    realize,
    resolve,
    serialize_context,
    validate,
)
from .curriculum import (
    ContextSampler,
    CurriculumDriver,
    Fixed,
    Schedule,
    TraceRecord,
    UniformOver,
    make_random_policy,
    sample,
    trace_columns,
    trace_to_csv,
)
from .env import Env, Observation, StepResult, create_env, env_from_spec
from .games import (
    GAME_IDS,
    LevelLayout,
    MoverTrack,
    action_names,
    dynamics_step,
    generate_level,
    num_actions,
    preset,
    schema_for,
    solvable,
)
from .render import render_ascii, render_ppm
from .rng import RngStream, derive as rng_derive, mix64
from .vecenv import BatchStep, VecEnv, vec_create

__version__ = "0.1.0"

__all__ = [
    "BatchStep",
    "BenchConfig",
    "BenchReport",
    "CATEGORIES",
    "ContextSampler",
    "ContextSchema",
    "ContextSpec",
    "CurriculumDriver",
    "Env",
    "EpisodeContext",
    "Fixed",
    "GAME_IDS",
    "LevelLayout",
    "MoverTrack",
    "Observation",
    "OpStat",
    "ParamDef",
    "ResolvedContext",
    "RngStream",
    "Schedule",
    "StepResult",
    "TraceRecord",
    "UniformOver",
    "VecEnv",
    "action_names",
    "collect_errors",
    "create_env",
    "dynamics_step",
    "emit_report",
    "env_from_spec",
    "errors",
    "generate_level",
    "make_random_policy",
    "mix64",
    "num_actions",
    "parse_context",
    "preset",
    "realize",
    "render_ascii",
    "render_ppm",
    "resolve",
    "rng_derive",
    "run_bench",
    "sample",
    "schema_for",
    "serialize_context",
    "solvable",
    "trace_columns",
    "trace_to_csv",
    "validate",
    "vec_create",
]
