"""Typed, bounded, categorized parameter spaces for procedural games.

A game declares its tunable surface as a ContextSchema: an ordered list of
ParamDef entries, each with a kind, default, hard bounds and a category.
Users supply partial assignments (plain dicts, as in a config file); those
are validated against the schema, merged with defaults into a
ResolvedContext, and finally realized per episode: every min/max range pair
collapses to a single sampled value.

Unknown keys are hard errors, never warnings — a silently ignored typo in a
context file would reintroduce exactly the opacity this engine exists to
remove.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Any, Callable, Mapping

from .errors import (
    ContextValidationError,
    InvertedRange,
    NestedValue,
    OutOfBounds,
    ParseError,
    TypeMismatch,
    UnknownParameter,
)
from .rng import RngStream

# A user-facing context spec is a flat mapping from parameter name to value,
# matching the shape of a parsed context file.
ContextSpec = dict[str, Any]

KINDS = ("int", "float", "bool", "enum")

CATEGORIES = (
    "game_mechanics",
    "reward_structure",
    "agent_attribute",
    "map_complexity",
    "game_specific",
)

# Cross-parameter validation hook: receives the effective (defaults-merged,
# coerced) value map and returns any errors it finds.
CrossCheck = Callable[[dict[str, Any]], list[ContextValidationError]]

_FLOAT_STEP_TOL = 1e-9


@dataclass(frozen=True)
class ParamDef:
    """One tunable parameter: kind, default, bounds, category, range role."""

    name: str
    kind: str
    default: Any
    category: str
    hard_min: int | float | None = None
    hard_max: int | float | None = None
    enum_values: tuple[str, ...] = ()
    # Range pairs sample one value per episode; role is "min" or "max" and
    # partner names the other end.
    range_role: str = "none"
    range_partner: str = ""
    # Optional value lattice measured from hard_min (e.g. odd ints via
    # step=2, quarter-tile speeds via step=0.25).
    step: int | float | None = None
    doc: str = ""

    def __post_init__(self) -> None:
        if self.kind not in KINDS:
            raise ValueError(f"{self.name}: bad kind {self.kind!r}")
        if self.category not in CATEGORIES:
            raise ValueError(f"{self.name}: bad category {self.category!r}")
        if self.kind in ("int", "float"):
            if self.hard_min is None or self.hard_max is None:
                raise ValueError(f"{self.name}: numeric params need hard bounds")
            if not self.hard_min <= self.default <= self.hard_max:
                raise ValueError(f"{self.name}: default outside hard bounds")
            if self.step is not None and _off_lattice(
                self.default, self.hard_min, self.step, self.kind
            ):
                raise ValueError(f"{self.name}: default off the step lattice")
        if self.kind == "enum":
            if not self.enum_values:
                raise ValueError(f"{self.name}: enum params need enum_values")
            if self.default not in self.enum_values:
                raise ValueError(f"{self.name}: default not an enum value")
        if self.kind == "bool" and not isinstance(self.default, bool):
            raise ValueError(f"{self.name}: bool default required")
        if self.range_role not in ("none", "min", "max"):
            raise ValueError(f"{self.name}: bad range_role {self.range_role!r}")
        if (self.range_role != "none") != bool(self.range_partner):
            raise ValueError(f"{self.name}: range_role and range_partner must pair")


def _off_lattice(value: Any, origin: Any, step: int | float, kind: str) -> bool:
    if kind == "int":
        return (value - origin) % step != 0
    k = (value - origin) / step
    return abs(k - round(k)) > _FLOAT_STEP_TOL


def _range_base(min_name: str, max_name: str) -> str:
    """Shared base name of a range pair (min_X/max_X or X_min/X_max)."""
    if min_name.startswith("min_") and max_name == "max_" + min_name[4:]:
        return min_name[4:]
    if min_name.endswith("_min") and max_name == min_name[:-4] + "_max":
        return min_name[:-4]
    raise ValueError(f"range pair {min_name}/{max_name} does not follow naming convention")


@dataclass(frozen=True)
class RangePair:
    base: str
    lo: ParamDef
    hi: ParamDef


@dataclass(frozen=True)
class ContextSchema:
    """The full declared parameter space of one game."""

    game_id: str
    params: tuple[ParamDef, ...]
    schema_version: int = 1
    # Ordered lo/hi parameter pairs that are validated for order but not
    # realized per episode (e.g. gap_min/gap_max, sampled per level feature).
    ordered_pairs: tuple[tuple[str, str], ...] = ()
    cross_checks: tuple[CrossCheck, ...] = ()
    _by_name: dict[str, ParamDef] = field(init=False, repr=False, compare=False)
    _range_pairs: tuple[RangePair, ...] = field(init=False, repr=False, compare=False)

    def __post_init__(self) -> None:
        by_name: dict[str, ParamDef] = {}
        for p in self.params:
            if p.name in by_name:
                raise ValueError(f"duplicate parameter {p.name!r}")
            by_name[p.name] = p
        pairs: list[RangePair] = []
        for p in self.params:
            if p.range_role == "none":
                continue
            partner = by_name.get(p.range_partner)
            if partner is None:
                raise ValueError(f"{p.name}: range partner {p.range_partner!r} missing")
            if partner.range_partner != p.name or partner.range_role == p.range_role:
                raise ValueError(f"{p.name}: asymmetric range pair")
            if (partner.kind, partner.hard_min, partner.hard_max, partner.step) != (
                p.kind,
                p.hard_min,
                p.hard_max,
                p.step,
            ):
                raise ValueError(f"{p.name}: range pair must share kind, bounds and step")
            if p.range_role == "min":
                if p.default > partner.default:
                    raise ValueError(f"{p.name}: pair defaults inverted")
                pairs.append(RangePair(_range_base(p.name, partner.name), p, partner))
        for lo_name, hi_name in self.ordered_pairs:
            for n in (lo_name, hi_name):
                if n not in by_name:
                    raise ValueError(f"ordered pair names unknown parameter {n!r}")
            if by_name[lo_name].default > by_name[hi_name].default:
                raise ValueError(f"ordered pair {lo_name}/{hi_name} defaults inverted")
        missing = set(CATEGORIES) - {p.category for p in self.params}
        if missing:
            raise ValueError(f"{self.game_id}: categories not covered: {sorted(missing)}")
        object.__setattr__(self, "_by_name", by_name)
        object.__setattr__(self, "_range_pairs", tuple(pairs))

    @property
    def by_name(self) -> Mapping[str, ParamDef]:
        return self._by_name

    @property
    def range_pairs(self) -> tuple[RangePair, ...]:
        return self._range_pairs

    def defaults(self) -> dict[str, Any]:
        return {p.name: p.default for p in self.params}


@dataclass(frozen=True)
class ResolvedContext:
    """Total parameter assignment: user spec merged over schema defaults."""

    values: dict[str, Any]
    schema_version: int


@dataclass(frozen=True)
class EpisodeContext:
    """What one episode actually ran with.

    ``realized`` holds the per-episode sample for each range pair, keyed by
    the pair's base name (min_num_sections/max_num_sections -> num_sections).
    """

    resolved: ResolvedContext
    realized: dict[str, Any]
    episode_index: int
    seed_used: int


def _check_value(p: ParamDef, value: Any) -> ContextValidationError | None:
    if p.kind == "bool":
        if not isinstance(value, bool):
            return TypeMismatch(p.name, f"expected bool, got {type(value).__name__}")
        return None
    if p.kind == "enum":
        if not isinstance(value, str):
            return TypeMismatch(p.name, f"expected one of {list(p.enum_values)}")
        if value not in p.enum_values:
            return TypeMismatch(
                p.name, f"{value!r} is not one of {list(p.enum_values)}"
            )
        return None
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        return TypeMismatch(p.name, f"expected {p.kind}, got {type(value).__name__}")
    if p.kind == "int" and isinstance(value, float):
        if not value.is_integer():
            return TypeMismatch(p.name, f"expected integral value, got {value!r}")
        value = int(value)
    if not p.hard_min <= value <= p.hard_max:
        return OutOfBounds(p.name, value, p.hard_min, p.hard_max)
    if p.step is not None and _off_lattice(value, p.hard_min, p.step, p.kind):
        return TypeMismatch(
            p.name,
            f"value {value!r} off the allowed lattice (step {p.step} from {p.hard_min})",
        )
    return None


def _coerce(p: ParamDef, value: Any) -> Any:
    if p.kind == "int":
        return int(value)
    if p.kind == "float":
        return float(value)
    return value


def collect_errors(schema: ContextSchema, spec: Mapping[str, Any]) -> list[ContextValidationError]:
    """All validation errors for ``spec``, in deterministic order (may be empty)."""
    errors: list[ContextValidationError] = []
    for name in spec:
        if name not in schema.by_name:
            errors.append(UnknownParameter(name, schema.game_id))
    for p in schema.params:
        if p.name in spec:
            err = _check_value(p, spec[p.name])
            if err is not None:
                errors.append(err)
    if errors:
        return errors

    effective = schema.defaults()
    for name, value in spec.items():
        effective[name] = _coerce(schema.by_name[name], value)

    pairs = [(rp.lo.name, rp.hi.name) for rp in schema.range_pairs]
    pairs.extend(schema.ordered_pairs)
    for lo_name, hi_name in pairs:
        if lo_name not in spec and hi_name not in spec:
            continue  # schema guarantees default order
        lo, hi = effective[lo_name], effective[hi_name]
        if lo > hi:
            errors.append(InvertedRange(lo_name, hi_name, lo, hi))
    if errors:
        return errors

    for check in schema.cross_checks:
        errors.extend(check(effective))
    return errors


def validate(schema: ContextSchema, spec: Mapping[str, Any]) -> None:
    """Raise the first validation error, if any."""
    errors = collect_errors(schema, spec)
    if errors:
        raise errors[0]


def resolve(schema: ContextSchema, spec: Mapping[str, Any]) -> ResolvedContext:
    """Merge ``spec`` over the schema defaults into a total assignment.

    Idempotent: resolving a fully specified spec returns the same values.
    """
    validate(schema, spec)
    values = schema.defaults()
    for name, value in spec.items():
        values[name] = _coerce(schema.by_name[name], value)
    return ResolvedContext(values=values, schema_version=schema.schema_version)


def sample_ranges(
    schema: ContextSchema, values: Mapping[str, Any], stream: RngStream
) -> dict[str, Any]:
    """Draw one value per range pair: closed [lo, hi] for ints (on the pair's
    lattice), half-open [lo, hi) for floats, closed lattice for stepped floats.

    Always consumes the same number of draws per pair, so stream usage is
    independent of whether a range happens to be degenerate.
    """
    realized: dict[str, Any] = {}
    for rp in schema.range_pairs:
        lo = values[rp.lo.name]
        hi = values[rp.hi.name]
        if rp.lo.kind == "int":
            step = int(rp.lo.step or 1)
            realized[rp.base] = lo + step * stream.next_below((hi - lo) // step + 1)
        elif rp.lo.step is not None:
            n = int(round((hi - lo) / rp.lo.step)) + 1
            realized[rp.base] = lo + rp.lo.step * stream.next_below(n)
        else:
            realized[rp.base] = lo + stream.next_float() * (hi - lo)
    return realized


def realize(
    schema: ContextSchema,
    resolved: ResolvedContext,
    stream: RngStream,
    episode_index: int,
) -> EpisodeContext:
    """Materialize the per-episode context: sample every range pair."""
    seed_used = stream.state
    realized = sample_ranges(schema, resolved.values, stream)
    return EpisodeContext(
        resolved=resolved,
        realized=realized,
        episode_index=episode_index,
        seed_used=seed_used,
    )


def parse_context(text: str) -> ContextSpec:
    """Parse a flat JSON context file into a spec dict.

    Values must be numbers, booleans or enum identifier strings; nested
    containers and nulls are rejected.
    """
    try:
        obj = json.loads(text)
    except json.JSONDecodeError as e:
        raise ParseError(e.pos, e.msg) from None
    if not isinstance(obj, dict):
        raise ParseError(0, "context file must hold a single JSON object")
    for key, value in obj.items():
        if isinstance(value, (dict, list)):
            raise NestedValue(key)
        if value is None:
            raise ParseError(None, f"key {key!r}: null is not a valid context value")
    return dict(obj)


def serialize_context(spec: Mapping[str, Any]) -> str:
    """Serialize a spec as flat JSON: 2-space indent, lexicographic keys,
    trailing newline.  parse_context(serialize_context(s)) == s."""
    for key, value in spec.items():
        if isinstance(value, (dict, list)):
            raise NestedValue(str(key))
        if value is not None and not isinstance(value, (bool, int, float, str)):
            raise TypeMismatch(str(key), f"unserializable value {value!r}")
    if not spec:
        return "{}\n"
    return json.dumps(dict(spec), indent=2, sort_keys=True) + "\n"


def spec_fingerprint(values: Mapping[str, Any]) -> str:
    """Canonical text form of a value map (used in reports and traces)."""
    return json.dumps(dict(values), sort_keys=True)


def param_to_json(p: ParamDef) -> dict[str, Any]:
    """JSON-friendly view of a ParamDef (the CLI ``schema --json`` row)."""
    return {
        "name": p.name,
        "kind": p.kind,
        "default": p.default,
        "hard_min": p.hard_min,
        "hard_max": p.hard_max,
        "enum_values": list(p.enum_values),
        "category": p.category,
        "range_role": None if p.range_role == "none" else p.range_role,
        "range_partner": p.range_partner or None,
        "step": p.step,
        "doc": p.doc,
    }
