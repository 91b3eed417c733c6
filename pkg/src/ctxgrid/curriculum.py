"""Context samplers and an episode-boundary curriculum driver.

The driver runs a policy over a VecEnv and, at every episode boundary,
assigns the context the sampler prescribes for that env's NEXT episode.
Because reassignment latches at reset time, the driver arms each env's
pending slot with sample(completed + 1): the slot is only ever consumed at
the moment one more episode has just finished, so the episode that starts
there sees exactly the stage matching its start-time completion count.

The trace — one record per completed episode with its full realized
context, return and length — is the dataset this module exists to produce.
"""

from __future__ import annotations

import io
from dataclasses import dataclass, field
from typing import Any, Callable, Mapping, Union

from .context import ContextSchema, ContextSpec, EpisodeContext, collect_errors
from .env import Observation
from .errors import ContextValidationError, OutOfBounds, UnknownParameter
from .rng import RngStream
from .vecenv import VecEnv


@dataclass(frozen=True)
class Fixed:
    """Always the same spec."""

    spec: dict[str, Any]


@dataclass(frozen=True)
class UniformOver:
    """Independent uniform draw per listed parameter.

    Carries the target schema so draws know each parameter's kind and
    lattice.  Intervals are inclusive for ints and stepped floats (lattice
    points), half-open for continuous floats.
    """

    intervals: dict[str, tuple[float, float]]
    schema: ContextSchema


@dataclass(frozen=True)
class Schedule:
    """Episode-count stages: the highest stage whose threshold has been
    reached supplies the spec.  Stage 0 must have threshold 0."""

    stages: tuple[tuple[int, dict[str, Any]], ...]


ContextSampler = Union[Fixed, UniformOver, Schedule]


def check_sampler(sampler: ContextSampler, schema: ContextSchema) -> None:
    """Validate every spec/interval a sampler can emit against the schema."""
    if isinstance(sampler, Fixed):
        _check_spec(sampler.spec, schema)
    elif isinstance(sampler, UniformOver):
        if sampler.schema is not schema:
            raise ValueError("sampler schema does not match the target game")
        for name, (lo, hi) in sampler.intervals.items():
            p = schema.by_name.get(name)
            if p is None:
                raise UnknownParameter(name, schema.game_id)
            if p.kind not in ("int", "float"):
                raise ContextValidationError(f"parameter {name!r} is not numeric")
            if not (p.hard_min <= lo <= hi <= p.hard_max):
                raise OutOfBounds(name, (lo, hi), p.hard_min, p.hard_max)
    elif isinstance(sampler, Schedule):
        if not sampler.stages:
            raise ValueError("schedule needs at least one stage")
        if sampler.stages[0][0] != 0:
            raise ValueError("schedule stage 0 must have threshold 0")
        thresholds = [t for t, _ in sampler.stages]
        if any(b <= a for a, b in zip(thresholds, thresholds[1:])):
            raise ValueError("schedule thresholds must be strictly increasing")
        for _, spec in sampler.stages:
            _check_spec(spec, schema)
    else:
        raise TypeError(f"not a sampler: {sampler!r}")


def _check_spec(spec: Mapping[str, Any], schema: ContextSchema) -> None:
    errors = collect_errors(schema, spec)
    if errors:
        raise errors[0]


def sample(
    sampler: ContextSampler, stream: RngStream, episodes_completed: int
) -> ContextSpec:
    """Draw the context spec for the given completion count.

    Deterministic in (sampler, stream state, episodes_completed).
    """
    if isinstance(sampler, Fixed):
        return dict(sampler.spec)
    if isinstance(sampler, Schedule):
        chosen = sampler.stages[0][1]
        for threshold, spec in sampler.stages:
            if threshold <= episodes_completed:
                chosen = spec
        return dict(chosen)
    spec: ContextSpec = {}
    for name in sampler.intervals:
        lo, hi = sampler.intervals[name]
        p = sampler.schema.by_name[name]
        if p.kind == "int":
            step = int(p.step or 1)
            lo_i, hi_i = int(lo), int(hi)
            spec[name] = lo_i + step * stream.next_below((hi_i - lo_i) // step + 1)
        elif p.step is not None:
            n = int(round((hi - lo) / p.step)) + 1
            spec[name] = lo + p.step * stream.next_below(n)
        else:
            spec[name] = lo + stream.next_float() * (hi - lo)
    return spec


@dataclass(frozen=True)
class TraceRecord:
    env_index: int
    episode_index: int
    termination_cause: str
    episode_return: float
    episode_length: int
    context: EpisodeContext


@dataclass
class CurriculumDriver:
    """Owns a VecEnv exclusively and grows one trace record per episode."""

    venv: VecEnv
    sampler: ContextSampler
    stream: RngStream
    episodes_completed: list[int] = field(init=False)
    trace: list[TraceRecord] = field(init=False, default_factory=list)

    def __post_init__(self) -> None:
        check_sampler(self.sampler, self.venv.schema)
        self.episodes_completed = [0] * self.venv.num_envs

    def _arm(self, i: int) -> None:
        spec = sample(self.sampler, self.stream, self.episodes_completed[i] + 1)
        self.venv.set_context_to(i, spec)

    def drive(
        self, policy: Callable[[Observation], int], total_steps: int
    ) -> list[TraceRecord]:
        """Run the policy for total_steps batch steps, reassigning contexts
        at every episode boundary; returns the accumulated trace."""
        for i in range(self.venv.num_envs):
            self._arm(i)
        observations = self.venv.last_observations
        for _ in range(total_steps):
            actions = [policy(observations[i]) for i in range(self.venv.num_envs)]
            batch = self.venv.step(actions)
            for i in range(self.venv.num_envs):
                if batch.dones[i]:
                    info = batch.infos[i]
                    ctx: EpisodeContext = info["episode_context"]
                    self.episodes_completed[i] += 1
                    self.trace.append(
                        TraceRecord(
                            env_index=i,
                            episode_index=ctx.episode_index,
                            termination_cause=info["termination_cause"],
                            episode_return=info["episode_return"],
                            episode_length=info["episode_length"],
                            context=ctx,
                        )
                    )
                    self._arm(i)
            observations = batch.observations
        return self.trace


def trace_columns(schema: ContextSchema) -> list[str]:
    """CSV header: fixed stats columns, then one column per resolved
    parameter (schema order), then one per realized range value."""
    cols = ["env_index", "episode_index", "termination_cause", "episode_return",
            "episode_length"]
    cols.extend(p.name for p in schema.params)
    cols.extend(rp.base for rp in schema.range_pairs)
    return cols


def trace_to_csv(trace: list[TraceRecord], schema: ContextSchema) -> str:
    """Serialize a trace; header row mandatory, values via repr-stable str."""
    out = io.StringIO()
    cols = trace_columns(schema)
    out.write(",".join(cols) + "\n")
    for rec in trace:
        row = [
            str(rec.env_index),
            str(rec.episode_index),
            rec.termination_cause,
            repr(rec.episode_return),
            str(rec.episode_length),
        ]
        row.extend(_csv_value(rec.context.resolved.values[p.name]) for p in schema.params)
        row.extend(_csv_value(rec.context.realized[rp.base]) for rp in schema.range_pairs)
        out.write(",".join(row) + "\n")
    return out.getvalue()


def _csv_value(value: Any) -> str:
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float):
        return repr(value)
    return str(value)


def make_random_policy(stream: RngStream, n_actions: int) -> Callable[[Observation], int]:
    """Uniform random policy drawing from its own stream."""

    def policy(_: Observation) -> int:
        return stream.next_below(n_actions)

    return policy
