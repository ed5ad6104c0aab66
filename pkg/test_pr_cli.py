"""
Test script for the command-line harness
Runs every example in docs/CLI_GUIDE.md, then config, manifest and output checks
Run directly (python test_pr_cli.py) or collect with pytest
"""

import contextlib
import io
import json
import os
import re
import shlex
import sys
import tempfile
import traceback
from pathlib import Path

from pr_cli import run_command

os.environ.setdefault("PR_QUIET", "1")

GUIDE = Path(__file__).resolve().parent / "docs" / "CLI_GUIDE.md"
EXIT_COMMENT = re.compile(r"^(?P<cmd>.*?)\s+#\s*exit\s+(?P<code>\d+)\s*$")


def _run(argv):
    """run_command with stdout captured; returns (code, report, stdout text)."""
    buffer = io.StringIO()
    with contextlib.redirect_stdout(buffer):
        code, report = run_command(argv)
    return code, report, buffer.getvalue()


@contextlib.contextmanager
def _in_tmpdir():
    previous = os.getcwd()
    with tempfile.TemporaryDirectory() as tmp:
        os.chdir(tmp)
        try:
            yield Path(tmp)
        finally:
            os.chdir(previous)


def guide_steps():
    """Shell lines from the ```bash blocks of the guide, in order."""
    steps = []
    in_block = False
    for line in GUIDE.read_text(encoding="utf-8").splitlines():
        if line.startswith("```"):
            in_block = line.strip() == "```bash"
            continue
        if in_block and line.strip():
            steps.append(line.strip())
    return steps


def test_guide_has_examples():
    steps = guide_steps()
    commands = [s for s in steps if s.startswith("python pr_cli.py")]
    assert len(commands) >= 25
    assert all(EXIT_COMMENT.match(c) for c in commands)
    groups = {shlex.split(EXIT_COMMENT.match(c).group("cmd"))[2] for c in commands}
    assert groups == {"algebra", "patterns", "largeness", "pr"}


def test_guide_examples_exit_codes():
    failures = []
    with _in_tmpdir() as tmp:
        for step in guide_steps():
            if step.startswith("echo "):
                _, content, redirect, target = shlex.split(step)
                assert redirect == ">"
                (tmp / target).write_text(content + "\n", encoding="utf-8")
                continue
            match = EXIT_COMMENT.match(step)
            argv = shlex.split(match.group("cmd"))[2:]
            code, _, _ = _run(argv)
            if code != int(match.group("code")):
                failures.append((step, code))
    assert failures == [], failures


def test_rado_report_contents():
    code, report, out = _run(["pr", "rado", "--pattern", "ap:3", "--colors", "2", "--max", "30"])
    assert code == 0
    data = json.loads(out)
    assert data["schema"] == "pr-lab/report/v1"
    assert data["outcome"]["n_star"] == 9
    assert data["manifest"]["command"] == "pr rado"
    assert data["manifest"]["params"]["max"] == 30
    assert "wall_time" not in data["manifest"]


def test_decide_coloring_and_expect():
    code, report, _ = _run(["pr", "decide", "--pattern", "schur:add", "--colors", "2", "--n", "4"])
    assert code == 1
    assert report.outcome["verdict"] == "Avoidable"
    assert report.outcome["coloring"] == [[1, 4], [2, 3]]
    code, _, _ = _run(["pr", "decide", "--pattern", "schur:add", "--colors", "2", "--n", "4",
                       "--expect", "avoidable"])
    assert code == 0
    code, _, _ = _run(["pr", "decide", "--pattern", "schur:add", "--colors", "2", "--n", "5",
                       "--expect", "avoidable"])
    assert code == 1


def test_algebra_commands():
    code, report, _ = _run(["algebra", "verify", "--l", "2", "--k", "3", "--samples", "100000", "--seed", "7"])
    assert code == 0 and report.outcome["passed"]
    code, report, _ = _run(["algebra", "eval", "--op", "star", "--l", "2", "--k", "3", "--values", "1,4"])
    assert code == 0 and report.outcome["value"] == 26


def test_patterns_find_mixed():
    code, report, _ = _run(["patterns", "find", "--pattern", "mixed:t=1:d=1:family=ap:3", "--n", "20"])
    assert code == 0
    assert report.outcome["witness"]["occupied"] == [2, 3, 4, 5, 7]


def test_validation_errors_exit_two():
    for argv in (["pr", "decide", "--pattern", "ap:0", "--n", "4"],
                 ["pr", "decide", "--pattern", "schur:add", "--n", "4", "--colors", "2", "--nope"],
                 ["pr", "rado", "--pattern", "ap:3"],
                 ["patterns", "find", "--pattern", "ap:3", "--window", "1-9"],
                 ["patterns", "find", "--pattern", "ap:3", "--n", "9", "--rule", "stripes"],
                 ["algebra", "eval", "--op", "star", "--l", "2", "--k", "3", "--values", "1"],
                 ["frobnicate"]):
        code, report, out = _run(argv)
        assert code == 2, argv
        assert report is None and out == ""


def test_unwritable_output_exit_two():
    with _in_tmpdir() as tmp:
        target = tmp / "missing" / "report.json"
        code, _, _ = _run(["pr", "decide", "--pattern", "schur:add", "--n", "4", "--output", str(target)])
        assert code == 2
        assert not target.exists()


def test_json_config_and_flag_precedence():
    with _in_tmpdir() as tmp:
        (tmp / "run.json").write_text(json.dumps({"pattern": "schur:add", "colors": 2, "n": 9,
                                                  "pr": {"n": 5}}), encoding="utf-8")
        code, report, _ = _run(["pr", "decide", "--config", "run.json"])
        assert code == 0 and report.manifest.params["n"] == 5
        code, report, _ = _run(["pr", "decide", "--config", "run.json", "--n", "4"])
        assert code == 1 and report.manifest.params["n"] == 4
        assert report.manifest.params["pattern"] == "schur:add"


def test_toml_config():
    with _in_tmpdir() as tmp:
        (tmp / "run.toml").write_text(
            'pattern = "ap:3"\ncolors = 2\n\n[pr]\nmax = 12\nsplit-depth = 4\n', encoding="utf-8")
        code, report, _ = _run(["pr", "rado", "--config", "run.toml"])
        assert code == 0
        assert report.outcome["n_star"] == 9
        assert report.manifest.params["split_depth"] == 4
        (tmp / "bad.toml").write_text("pattern = \n", encoding="utf-8")
        code, _, _ = _run(["pr", "rado", "--config", "bad.toml"])
        assert code == 2
        code, _, _ = _run(["pr", "rado", "--config", "run.yaml"])
        assert code == 2


def test_output_is_byte_identical_across_runs():
    with _in_tmpdir() as tmp:
        argv = ["pr", "rado", "--pattern", "schur:add", "--colors", "2", "--max", "10", "--sweep"]
        assert _run(argv + ["--output", "a.json"])[0] == 0
        assert _run(argv + ["--output", "b.json"])[0] == 0
        assert (tmp / "a.json").read_bytes() == (tmp / "b.json").read_bytes()
        text = (tmp / "a.json").read_text(encoding="utf-8")
        assert text.endswith("\n") and "\r" not in text


def test_workers_do_not_change_the_outcome():
    outcomes = []
    for workers in ("1", "2", "4"):
        code, report, _ = _run(["pr", "decide", "--pattern", "ap:3", "--n", "8", "--workers", workers,
                                "--split-depth", "3"])
        assert code == 1
        assert report.manifest.workers == int(workers)
        outcomes.append(report.outcome)
    assert outcomes[0] == outcomes[1] == outcomes[2]


def test_timing_adds_wall_time():
    code, report, out = _run(["pr", "decide", "--pattern", "schur:add", "--n", "5", "--timing"])
    assert code == 0
    assert "wall_time" in json.loads(out)["manifest"]
    assert report.manifest.wall_time >= 0


def test_largeness_csv_rows():
    code, _, out = _run(["largeness", "analyze", "--members", "10-40,60-90", "--window", "0:100",
                         "--g", "10", "--L", "30", "--format", "csv"])
    assert code == 0
    lines = out.splitlines()
    assert len(lines) == 4
    assert lines[0].startswith("command,")
    assert all(line.startswith("largeness analyze,") for line in lines[1:])


def test_export_and_check_model_files():
    with _in_tmpdir() as tmp:
        code, report, _ = _run(["pr", "export-cnf", "--pattern", "schur:add", "--colors", "2", "--n", "3",
                                "--cnf", "s3.cnf"])
        assert code == 0
        assert (report.outcome["num_vars"], report.outcome["num_clauses"]) == (6, 10)
        assert (tmp / "s3.cnf").read_text(encoding="utf-8").splitlines()[2] == "p cnf 6 10"

        # colors 1 | 2,3
        (tmp / "good.model").write_text("s SATISFIABLE\nv 1 -2 -3 4 -5 6 0\n", encoding="utf-8")
        code, report, _ = _run(["pr", "check-model", "--cnf", "s3.cnf", "--model", "good.model"])
        assert code == 0 and report.outcome["accepted"]

        (tmp / "mono.model").write_text("v 1 -2 3 -4 5 -6 0\n", encoding="utf-8")
        code, report, _ = _run(["pr", "check-model", "--cnf", "s3.cnf", "--model", "mono.model"])
        assert code == 1 and not report.outcome["accepted"]

        code, _, _ = _run(["pr", "check-model", "--cnf", "s3.cnf", "--model", "absent.model"])
        assert code == 2


if __name__ == "__main__":
    print("\n" + "=" * 60)
    print("PR CLI - TEST")
    print("=" * 60)

    tests = [(name, fn) for name, fn in list(globals().items()) if name.startswith("test_") and callable(fn)]
    results = []
    for name, fn in tests:
        try:
            fn()
            results.append((name, True))
        except Exception as e:
            print(f"✗ Error in {name}: {e}")
            traceback.print_exc()
            results.append((name, False))

    print("\n" + "=" * 60)
    print("TEST SUMMARY")
    print("=" * 60)
    for name, success in results:
        print(f"{'✓ PASS' if success else '✗ FAIL'} - {name}")
    passed = sum(1 for _, ok in results if ok)
    print(f"\nTotal: {passed}/{len(results)} tests passed")
    print("=" * 60 + "\n")
    sys.exit(0 if passed == len(results) else 1)
