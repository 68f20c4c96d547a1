"""Command-line surface: exit codes, JSON shapes, determinism, config."""

import json
import subprocess
import sys
from pathlib import Path

import pytest

from einso.cli import Config, run_command
from einso.exact import StructuralError


def run_cli(args, capsys, cache_dir=None):
    argv = list(args)
    if cache_dir is not None:
        argv = ["--cache-dir", str(cache_dir)] + argv
    code = run_command(argv)
    captured = capsys.readouterr()
    return code, captured.out, captured.err


class TestTriplets:
    def test_json_payload(self, capsys):
        code, out, _ = run_cli(["triplets", "--k1", "3", "--k2", "3", "--k3", "1"], capsys)
        assert code == 0
        payload = json.loads(out)
        assert payload["k"] == [3, 3, 1]
        assert {"triple": ["m1", "m1", "m1"], "value": "3/5"} in payload["entries"]

    def test_unsorted_blocks_are_a_usage_error(self, capsys):
        code, _, err = run_cli(["triplets", "--k1", "2", "--k2", "3", "--k3", "1"], capsys)
        assert code == 2
        assert "k1 >= k2 >= k3" in err

    def test_usage_error(self, capsys):
        code = run_command(["triplets", "--k1", "3"])
        assert code == 2


class TestRicci:
    def test_symbolic_output(self, capsys):
        code, out, _ = run_cli(["ricci", "--k1", "3", "--k2", "3", "--k3", "1"], capsys)
        assert code == 0
        assert "r_1 =" in out and "r_23 =" in out

    def test_evaluated_output(self, capsys):
        args = ["ricci", "--k1", "3", "--k2", "3", "--k3", "1"]
        for v in ("x1", "x2", "x12", "x13", "x23"):
            args += ["--set", f"{v}=1"]
        code, out, _ = run_cli(args, capsys)
        assert code == 0
        payload = json.loads(out)
        assert all(c["value"] == "1/4" for c in payload["components"].values())


class TestClassify:
    def test_naturally_reductive_case(self, capsys):
        args = ["classify", "--k1", "3", "--k2", "3", "--k3", "1",
                "--set", "x1=2/3", "--set", "x2=2/3", "--set", "x12=2/3",
                "--set", "x13=1", "--set", "x23=1"]
        code, out, _ = run_cli(args, capsys)
        assert code == 0
        payload = json.loads(out)
        assert payload["kind"] == "nr" and payload["case"] == 1

    def test_missing_coordinate(self, capsys):
        args = ["classify", "--k1", "3", "--k2", "3", "--k3", "1", "--set", "x1=1"]
        code, _, err = run_cli(args, capsys)
        assert code == 1


class TestSolve:
    def test_tower_solve_json(self, capsys, tmp_path):
        args = ["solve", "--k1", "4", "--k2", "1", "--k3", "1", "--method", "exact",
                "--json"]
        code, out, _ = run_cli(args, capsys, cache_dir=tmp_path / "cache")
        assert code == 0
        payload = json.loads(out)
        assert len(payload) == 3
        kinds = {rec["class"]["kind"] for rec in payload}
        assert kinds == {"nr"}
        for rec in payload:
            assert rec["status"] == "exact"
            for entry in rec["scaled"].values():
                assert entry["lo"] is not None

    def test_budget_exhaustion_exit_code(self, capsys, tmp_path):
        args = ["--max-steps", "40",
                "solve", "--k1", "4", "--k2", "1", "--k3", "1", "--method", "exact"]
        code, _, err = run_cli(args, capsys, cache_dir=tmp_path / "cache")
        assert code == 3

    def test_numeric_method(self, capsys, tmp_path):
        args = ["solve", "--k1", "4", "--k2", "1", "--k3", "1", "--method", "numeric"]
        code, out, _ = run_cli(args, capsys, cache_dir=tmp_path / "cache")
        assert code == 0


class TestDeterminism:
    def test_identical_bytes_for_exact_subcommand(self, tmp_path):
        script = (
            "from einso.cli import run_command; import sys;"
            "sys.exit(run_command(['--cache-dir', '{c}', 'solve', '--k1', '5',"
            " '--k2', '1', '--k3', '1', '--json']))"
        ).format(c=tmp_path / "cache")
        outs = set()
        for _ in range(2):
            proc = subprocess.run(
                [sys.executable, "-c", script],
                capture_output=True, text=True, check=True,
            )
            outs.add(proc.stdout)
        assert len(outs) == 1

    def test_cold_and_warm_cache_agree(self, tmp_path, capsys):
        args = ["solve", "--k1", "5", "--k2", "1", "--k3", "1", "--json"]
        _, cold, _ = run_cli(args, capsys, cache_dir=tmp_path / "c")
        _, warm, _ = run_cli(args, capsys, cache_dir=tmp_path / "c")
        assert cold == warm
        assert list((tmp_path / "c").glob("*.json"))


class TestConfig:
    def test_file_roundtrip(self, tmp_path):
        path = tmp_path / "einso.conf"
        path.write_text(
            "groebner_max_steps = 500\nnumeric_starts = 77\n"
            "refinement_tolerance = 1/1000000\ncache_dir = /tmp/somewhere\n"
        )
        cfg = Config.from_file(path)
        assert cfg.groebner_max_steps == 500
        assert cfg.numeric_starts == 77
        assert str(cfg.cache_dir) == "/tmp/somewhere"

    def test_unknown_key_rejected(self, tmp_path):
        path = tmp_path / "bad.conf"
        path.write_text("volume = 11\n")
        with pytest.raises(StructuralError):
            Config.from_file(path)

    def test_env_cache_override(self, monkeypatch):
        monkeypatch.setenv("EINSTEIN_SO_CACHE", "/tmp/env-cache")
        cfg = Config()
        assert str(cfg.cache_dir) == "/tmp/env-cache"

    def test_positive_limits_enforced(self):
        with pytest.raises(StructuralError):
            Config(groebner_max_steps=0)


class TestVerifySubcommand:
    def test_quick_checks_pass(self, capsys, tmp_path):
        args = ["verify-paper", "--only", "triplets", "--only", "biinvariant", "--json"]
        code, out, _ = run_cli(args, capsys, cache_dir=tmp_path / "cache")
        assert code == 0
        payload = json.loads(out)
        assert payload["all_passed"]
        names = {c["name"] for c in payload["checks"]}
        assert "triplets-bruteforce-equals-closed-form" in names
        # every check's expected value carries its provenance note
        assert all(c["expected"] for c in payload["checks"])
