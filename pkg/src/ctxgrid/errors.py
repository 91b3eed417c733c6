"""Exception types shared across the engine.

Validation errors always carry the offending parameter name; a bare
"invalid input" is never raised.
"""

from __future__ import annotations


class CtxgridError(Exception):
    """Base class for every error raised by this package."""


class UnknownGame(CtxgridError):
    def __init__(self, game_id: object) -> None:
        super().__init__(f"unknown game id {game_id!r} (known: lanes, maze, ridge)")
        self.game_id = game_id


class ContextValidationError(CtxgridError, ValueError):
    """Base for context-spec validation failures; ``param`` names the culprit."""

    param: str = ""


class UnknownParameter(ContextValidationError):
    def __init__(self, name: str, game_id: str = "") -> None:
        where = f" in the {game_id} schema" if game_id else ""
        super().__init__(f"unknown parameter {name!r}{where}")
        self.param = name


class TypeMismatch(ContextValidationError):
    def __init__(self, name: str, detail: str) -> None:
        super().__init__(f"parameter {name!r}: {detail}")
        self.param = name
        self.detail = detail


class OutOfBounds(ContextValidationError):
    def __init__(self, name: str, value: object, lo: object, hi: object) -> None:
        super().__init__(f"parameter {name!r}: value {value!r} outside [{lo}, {hi}]")
        self.param = name
        self.value = value
        self.lo = lo
        self.hi = hi


class InvertedRange(ContextValidationError):
    def __init__(self, lo_name: str, hi_name: str, lo: object, hi: object) -> None:
        super().__init__(
            f"inverted range: {lo_name}={lo!r} exceeds {hi_name}={hi!r}"
        )
        self.param = lo_name
        self.lo_name = lo_name
        self.hi_name = hi_name


class ContextOptionError(CtxgridError):
    """A per-env context option failed validation at vec construction."""

    def __init__(self, env_index: int, cause: ContextValidationError) -> None:
        super().__init__(f"context option for env {env_index}: {cause}")
        self.env_index = env_index
        self.cause = cause


class ParseError(CtxgridError):
    def __init__(self, position: int | None, message: str) -> None:
        at = f" at position {position}" if position is not None else ""
        super().__init__(f"context parse error{at}: {message}")
        self.position = position
        self.message = message


class NestedValue(ParseError):
    def __init__(self, key: str) -> None:
        super().__init__(None, f"key {key!r} holds a nested value; context files are flat")
        self.key = key


class InvalidContext(CtxgridError):
    """A ResolvedContext handed to the engine violates its schema."""


class GenerationFailure(CtxgridError):
    """A level generator could not satisfy its own invariants (a bug signal)."""


class InvalidAction(CtxgridError):
    def __init__(self, action: object, num_actions: int, env_index: int | None = None) -> None:
        where = f"env {env_index}: " if env_index is not None else ""
        super().__init__(f"{where}action {action!r} outside alphabet [0, {num_actions})")
        self.action = action
        self.num_actions = num_actions
        self.env_index = env_index


class SteppedAfterDone(CtxgridError):
    def __init__(self) -> None:
        super().__init__("episode is done; call reset before stepping again")


class ContextCountMismatch(CtxgridError):
    def __init__(self, got: int, num_envs: int) -> None:
        super().__init__(
            f"context_options has {got} entries; expected 1 or {num_envs}"
        )
        self.got = got
        self.num_envs = num_envs


class ActionCountMismatch(CtxgridError):
    def __init__(self, got: int, expected: int) -> None:
        super().__init__(f"got {got} actions for {expected} environments")
        self.got = got
        self.expected = expected


class IndexOutOfRange(CtxgridError, IndexError):
    def __init__(self, index: int, num_envs: int) -> None:
        super().__init__(f"env index {index} outside [0, {num_envs})")
        self.index = index
        self.num_envs = num_envs
