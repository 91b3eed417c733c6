"""Command-line surface.

Exit codes: 0 success, 1 domain errors (validation, generation), 2 usage
errors (argparse's convention).  Diagnostics go to stderr only; every
diagnostic names the offending parameter or flag.
"""

from __future__ import annotations

import argparse
import contextlib
import json
import sys
from pathlib import Path

from . import games
from .bench import BenchConfig, emit_report, run_bench
from .context import (
    collect_errors,
    param_to_json,
    parse_context,
    resolve,
    serialize_context,
)
from .curriculum import (
    CurriculumDriver,
    Schedule,
    TraceRecord,
    make_random_policy,
    trace_to_csv,
)
from .env import Env
from .errors import CtxgridError, ParseError
from .rng import RngStream, derive, mix64
from .vecenv import VecEnv

_POLICY_SALT = 0x5EED_AC710


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="ctxgrid",
        description="Context-driven procedural grid games: inspect, validate, roll out, benchmark.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    sub.add_parser("list-games", help="print one game id per line")

    p = sub.add_parser("schema", help="print a game's parameter table")
    p.add_argument("game")
    p.add_argument("--json", action="store_true", help="emit the table as JSON")

    p = sub.add_parser("validate", help="validate a context file against a game schema")
    p.add_argument("game")
    p.add_argument("context_file")

    p = sub.add_parser("rollout", help="run one env with a random policy")
    p.add_argument("game")
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--steps", type=int, required=True)
    p.add_argument("--context", help="context file (flat JSON)")
    p.add_argument("--policy", choices=["random"], default="random")
    p.add_argument("--render", choices=["ascii", "ppm"], help="dump per-step frames")
    p.add_argument("--out", help="directory for frame dumps")
    p.add_argument("--trace", help="write episode trace CSV to this path")

    p = sub.add_parser("curriculum-demo", help="drive a schedule curriculum and dump its trace")
    p.add_argument("--game", required=True)
    p.add_argument("--stages", required=True,
                   help="JSON file: array of {after_episodes, context} objects")
    p.add_argument("--steps", type=int, required=True)
    p.add_argument("--envs", type=int, default=4)
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--out", required=True, help="trace CSV output path")

    p = sub.add_parser("bench", help="measure context-machinery overhead ratios")
    p.add_argument("--game", required=True)
    p.add_argument("--envs", type=int, default=64)
    p.add_argument("--steps-per-env", type=int, default=10_000)
    p.add_argument("--reps", type=int, default=3)
    p.add_argument("--csv", action="store_true")

    return parser


def _cmd_list_games(_: argparse.Namespace, out) -> int:
    for game_id in games.GAME_IDS:
        print(game_id, file=out)
    return 0


def _cmd_schema(args: argparse.Namespace, out) -> int:
    schema = games.schema_for(args.game)
    if args.json:
        print(json.dumps([param_to_json(p) for p in schema.params], indent=2), file=out)
        return 0
    print(f"# {schema.game_id} (schema version {schema.schema_version})", file=out)
    header = f"{'name':<28} {'kind':<6} {'default':<10} {'bounds':<16} {'category':<16}"
    print(header, file=out)
    for p in schema.params:
        if p.kind == "enum":
            bounds = "|".join(p.enum_values)
        else:
            bounds = f"[{p.hard_min}, {p.hard_max}]"
            if p.step is not None:
                bounds += f" /{p.step}"
        print(
            f"{p.name:<28} {p.kind:<6} {str(p.default):<10} {bounds:<16} {p.category:<16}",
            file=out,
        )
    return 0


def _load_spec(path: str):
    return parse_context(Path(path).read_text(encoding="utf-8"))


def _cmd_validate(args: argparse.Namespace, out, err) -> int:
    schema = games.schema_for(args.game)
    try:
        spec = _load_spec(args.context_file)
    except FileNotFoundError:
        print(f"context file {args.context_file!r}: not found", file=err)
        return 1
    except ParseError as e:
        print(str(e), file=err)
        return 1
    errors = collect_errors(schema, spec)
    if errors:
        for e in errors:
            print(str(e), file=err)
        return 1
    print("ok", file=out)
    return 0


def _frame_name(step: int, ext: str) -> str:
    return f"frame_{step:06d}.{ext}"


def _cmd_rollout(args: argparse.Namespace, out, err) -> int:
    schema = games.schema_for(args.game)
    spec = _load_spec(args.context) if args.context else {}
    resolved = resolve(schema, spec)
    env = Env(args.game, resolved, master_seed=args.seed)
    policy = make_random_policy(
        RngStream(mix64(args.seed ^ _POLICY_SALT)), games.num_actions(args.game)
    )

    out_dir: Path | None = None
    if args.render == "ppm" and not args.out:
        print("--render ppm requires --out DIR", file=err)
        return 2
    if args.out:
        out_dir = Path(args.out)
        out_dir.mkdir(parents=True, exist_ok=True)

    def dump_frame(step: int) -> None:
        if args.render == "ascii":
            if out_dir is None:
                print(f"# step {step}", file=out)
                print(env.render_ascii(), end="", file=out)
            else:
                (out_dir / _frame_name(step, "txt")).write_text(env.render_ascii())
        elif args.render == "ppm":
            (out_dir / _frame_name(step, "ppm")).write_bytes(env.render_ppm())

    trace: list[TraceRecord] = []
    obs = env.reset()
    del obs
    if args.render:
        dump_frame(0)
    episode = 1
    for step in range(1, args.steps + 1):
        result = env.step(policy(None))
        if args.render:
            dump_frame(step)
        if result.done:
            info = result.info
            print(
                f"episode {episode}: return={info['episode_return']:.6f} "
                f"length={info['episode_length']} cause={info['termination_cause']}",
                file=out,
            )
            trace.append(
                TraceRecord(
                    env_index=0,
                    episode_index=info["episode_context"].episode_index,
                    termination_cause=info["termination_cause"],
                    episode_return=info["episode_return"],
                    episode_length=info["episode_length"],
                    context=info["episode_context"],
                )
            )
            episode += 1
            env.reset()
    print(f"ran {args.steps} steps, {episode - 1} completed episodes", file=out)
    if args.trace:
        Path(args.trace).write_text(trace_to_csv(trace, schema), encoding="utf-8")
    return 0


def _cmd_curriculum_demo(args: argparse.Namespace, out, err) -> int:
    schema = games.schema_for(args.game)
    raw = json.loads(Path(args.stages).read_text(encoding="utf-8"))
    if not isinstance(raw, list) or not raw:
        print("stages file: expected a non-empty JSON array", file=err)
        return 1
    stages = []
    for entry in raw:
        if not isinstance(entry, dict) or set(entry) != {"after_episodes", "context"}:
            print("stages file: each entry needs after_episodes and context", file=err)
            return 1
        stages.append((int(entry["after_episodes"]), dict(entry["context"])))
    sampler = Schedule(tuple(stages))
    venv = VecEnv(args.game, args.envs, [stages[0][1]], master_seed=args.seed)
    driver = CurriculumDriver(venv, sampler, derive(args.seed, 0xC0FFEE, 0))
    policy = make_random_policy(
        RngStream(mix64(args.seed ^ _POLICY_SALT)), games.num_actions(args.game)
    )
    trace = driver.drive(policy, args.steps)
    Path(args.out).write_text(trace_to_csv(trace, schema), encoding="utf-8")
    print(f"recorded {len(trace)} episodes over {args.steps} steps "
          f"across {args.envs} envs -> {args.out}", file=out)
    return 0


def _cmd_bench(args: argparse.Namespace, out) -> int:
    config = BenchConfig(
        game_id=args.game,
        num_envs=args.envs,
        steps_per_env=args.steps_per_env,
        repetitions=args.reps,
    )
    report = run_bench(config)
    print(emit_report(report, "csv" if args.csv else "text"), end="", file=out)
    return 0


def cli_main(argv=None, out=None, err=None) -> int:
    out = out if out is not None else sys.stdout
    err = err if err is not None else sys.stderr
    parser = _build_parser()
    try:
        with contextlib.redirect_stderr(err):
            args = parser.parse_args(argv)
    except SystemExit as e:
        return int(e.code or 0)
    try:
        if args.command == "list-games":
            return _cmd_list_games(args, out)
        if args.command == "schema":
            return _cmd_schema(args, out)
        if args.command == "validate":
            return _cmd_validate(args, out, err)
        if args.command == "rollout":
            return _cmd_rollout(args, out, err)
        if args.command == "curriculum-demo":
            return _cmd_curriculum_demo(args, out, err)
        if args.command == "bench":
            return _cmd_bench(args, out)
        raise AssertionError(f"unhandled command {args.command}")
    except CtxgridError as e:
        print(str(e), file=err)
        return 1
    except (OSError, json.JSONDecodeError, ValueError) as e:
        print(str(e), file=err)
        return 1


def main() -> None:
    sys.exit(cli_main())
