import csv
import io
import json
import subprocess
import sys

import pytest

import ctxgrid as cg
from ctxgrid.cli import cli_main


def run_cli(*argv):
    out, err = io.StringIO(), io.StringIO()
    code = cli_main(list(argv), out=out, err=err)
    return code, out.getvalue(), err.getvalue()


class TestListGames:
    def test_one_id_per_line(self):
        code, out, err = run_cli("list-games")
        assert code == 0
        assert out.splitlines() == ["lanes", "maze", "ridge"]
        assert err == ""


class TestSchema:
    def test_table_lists_every_param(self):
        code, out, _ = run_cli("schema", "ridge")
        assert code == 0
        for p in cg.schema_for("ridge").params:
            assert p.name in out

    def test_json_round_trips(self):
        code, out, _ = run_cli("schema", "maze", "--json")
        assert code == 0
        rows = json.loads(out)
        assert [r["name"] for r in rows] == [p.name for p in cg.schema_for("maze").params]
        for row in rows:
            assert set(row) >= {"name", "kind", "default", "category"}

    def test_unknown_game_is_domain_error(self):
        code, out, err = run_cli("schema", "chaser")
        assert code == 1
        assert "chaser" in err
        assert out == ""


class TestValidate:
    def test_listing1_file_ok(self, tmp_path):
        path = tmp_path / "listing1.json"
        path.write_text('{"min_num_sections": 2, "max_num_sections": 6}')
        code, out, err = run_cli("validate", "ridge", str(path))
        assert code == 0
        assert out.strip() == "ok"
        assert err == ""

    def test_inverted_range_diagnoses_both_names(self, tmp_path):
        path = tmp_path / "bad.json"
        path.write_text('{"min_num_sections": 5, "max_num_sections": 2}')
        code, out, err = run_cli("validate", "ridge", str(path))
        assert code == 1
        assert "min_num_sections" in err and "max_num_sections" in err
        assert out == ""

    def test_multiple_errors_one_line_each(self, tmp_path):
        path = tmp_path / "bad.json"
        path.write_text('{"bogus": 1, "air_control": 9.0}')
        code, _, err = run_cli("validate", "ridge", str(path))
        assert code == 1
        lines = [line for line in err.splitlines() if line]
        assert len(lines) == 2
        assert any("bogus" in line for line in lines)
        assert any("air_control" in line for line in lines)

    def test_malformed_json(self, tmp_path):
        path = tmp_path / "broken.json"
        path.write_text('{"a": ')
        code, _, err = run_cli("validate", "maze", str(path))
        assert code == 1
        assert "parse error" in err

    def test_missing_file(self):
        code, _, err = run_cli("validate", "maze", "/nonexistent/ctx.json")
        assert code == 1
        assert "not found" in err


class TestUsageErrors:
    def test_unknown_flag_exits_2(self):
        code, _, _ = run_cli("list-games", "--frobnicate")
        assert code == 2

    def test_unknown_subcommand_exits_2(self):
        code, _, _ = run_cli("frobnicate")
        assert code == 2

    def test_missing_required_flag_exits_2(self):
        code, _, _ = run_cli("rollout", "maze")
        assert code == 2


class TestRollout:
    def test_deterministic_stdout(self):
        a = run_cli("rollout", "maze", "--seed", "7", "--steps", "400")
        b = run_cli("rollout", "maze", "--seed", "7", "--steps", "400")
        assert a == b
        assert a[0] == 0

    def test_context_file_applies(self, tmp_path):
        ctx = tmp_path / "ctx.json"
        ctx.write_text('{"maze_dim_min": 5, "maze_dim_max": 5, "max_episode_steps": 350}')
        code, out, _ = run_cli(
            "rollout", "maze", "--seed", "3", "--steps", "720", "--context", str(ctx)
        )
        assert code == 0
        assert "episode 1:" in out

    def test_trace_csv_matches_curriculum_format(self, tmp_path):
        trace = tmp_path / "trace.csv"
        code, _, _ = run_cli(
            "rollout", "maze", "--seed", "3", "--steps", "1500",
            "--trace", str(trace),
        )
        assert code == 0
        rows = list(csv.reader(trace.open()))
        assert rows[0] == cg.trace_columns(cg.schema_for("maze"))

    def test_ascii_render_to_stdout(self):
        code, out, _ = run_cli(
            "rollout", "maze", "--seed", "1", "--steps", "2", "--render", "ascii"
        )
        assert code == 0
        assert "# step 0" in out and "#" in out

    def test_ppm_frames_written(self, tmp_path):
        code, _, _ = run_cli(
            "rollout", "maze", "--seed", "1", "--steps", "3",
            "--render", "ppm", "--out", str(tmp_path),
        )
        assert code == 0
        frames = sorted(tmp_path.glob("frame_*.ppm"))
        assert len(frames) == 4  # initial plus one per step
        assert frames[0].read_bytes().startswith(b"P6\n")

    def test_ppm_without_out_is_usage_error(self):
        code, _, err = run_cli(
            "rollout", "maze", "--seed", "1", "--steps", "1", "--render", "ppm"
        )
        assert code == 2
        assert "--out" in err

    def test_bad_context_file_is_domain_error(self, tmp_path):
        ctx = tmp_path / "ctx.json"
        ctx.write_text('{"visibility": 99}')
        code, _, err = run_cli(
            "rollout", "maze", "--seed", "1", "--steps", "1", "--context", str(ctx)
        )
        assert code == 1
        assert "visibility" in err


class TestCurriculumDemo:
    def test_demo_writes_trace(self, tmp_path):
        stages = tmp_path / "stages.json"
        stages.write_text(json.dumps([
            {"after_episodes": 0, "context": {"maze_dim_min": 5, "maze_dim_max": 7}},
            {"after_episodes": 3, "context": {"maze_dim_min": 11, "maze_dim_max": 13}},
        ]))
        out_csv = tmp_path / "trace.csv"
        code, out, err = run_cli(
            "curriculum-demo", "--game", "maze", "--stages", str(stages),
            "--steps", "1600", "--envs", "2", "--seed", "5", "--out", str(out_csv),
        )
        assert code == 0, err
        rows = list(csv.DictReader(out_csv.open()))
        assert rows
        assert "maze_dim" in rows[0]

    def test_malformed_stage_entry(self, tmp_path):
        stages = tmp_path / "stages.json"
        stages.write_text('[{"after": 0}]')
        code, _, err = run_cli(
            "curriculum-demo", "--game", "maze", "--stages", str(stages),
            "--steps", "10", "--seed", "1", "--out", str(tmp_path / "t.csv"),
        )
        assert code == 1
        assert "after_episodes" in err


class TestBenchCommand:
    def test_csv_output(self):
        code, out, _ = run_cli(
            "bench", "--game", "maze", "--envs", "2",
            "--steps-per-env", "1000", "--reps", "3", "--csv",
        )
        assert code == 0
        assert out.splitlines()[0] == "operation,median_ns,min_ns,ratio_vs_step"
        assert len(out.splitlines()) == 5

    def test_bad_workload_is_domain_error(self):
        code, _, err = run_cli(
            "bench", "--game", "maze", "--steps-per-env", "10", "--reps", "3"
        )
        assert code == 1
        assert "steps_per_env" in err


class TestConsoleEntry:
    def test_module_invocation(self):
        proc = subprocess.run(
            [sys.executable, "-m", "ctxgrid", "list-games"],
            capture_output=True, text=True,
        )
        assert proc.returncode == 0
        assert proc.stdout.splitlines() == ["lanes", "maze", "ridge"]
