import json
import subprocess
import sys
from pathlib import Path

import pytest

from arcform.config import AnalysisConfig

PKG_ROOT = Path(__file__).resolve().parent.parent


def run_cli(*args, cwd=None):
    return subprocess.run(
        [sys.executable, "-m", "arcform", *map(str, args)],
        capture_output=True, text=True, cwd=cwd or PKG_ROOT)


# --- analyze --------------------------------------------------------------------

def test_analyze_fig1_fixture(fixtures_dir):
    res = run_cli("analyze", fixtures_dir / "fixture_fig1.notes")
    assert res.returncode == 0
    report = json.loads(res.stdout)
    assert report["climax"]["normalized_position"] > 0.5
    assert report["climax"]["asymmetry_index"] > 0


def test_analyze_with_query(fixtures_dir):
    res = run_cli("analyze", fixtures_dir / "passion_chorales.notes",
                  "--query", fixtures_dir / "chorale_query.notes")
    assert res.returncode == 0
    report = json.loads(res.stdout)
    assert len(report["recurrence"]["matches"]) == 5
    assert report["recurrence"]["outlier_index"] == 4


def test_analyze_with_form(fixtures_dir):
    res = run_cli("analyze", fixtures_dir / "fixture_fig1.notes",
                  "--form", "AAB", "--seed", "AB")
    assert res.returncode == 0
    report = json.loads(res.stdout)
    assert report["form"]["minimal_steps"] == 1


def test_analyze_deterministic_bytes(fixtures_dir):
    first = run_cli("analyze", fixtures_dir / "fixture_fig1.notes")
    second = run_cli("analyze", fixtures_dir / "fixture_fig1.notes")
    assert first.stdout == second.stdout
    assert first.returncode == second.returncode == 0


def test_analyze_parse_failure_exit_2(tmp_path):
    bad = tmp_path / "bad.notes"
    bad.write_text("0 0 60\n")
    res = run_cli("analyze", bad)
    assert res.returncode == 2
    assert "non-positive duration" in res.stderr
    assert res.stdout == ""


def test_analyze_missing_file_exit_2(tmp_path):
    res = run_cli("analyze", tmp_path / "nope.notes")
    assert res.returncode == 2


def test_analyze_unknown_extension_exit_2(tmp_path):
    f = tmp_path / "x.xml"
    f.write_text("<score/>")
    res = run_cli("analyze", f)
    assert res.returncode == 2


def test_analyze_precondition_failure_exit_3(tmp_path):
    empty = tmp_path / "empty.notes"
    empty.write_text("# no events\n")
    res = run_cli("analyze", empty)
    assert res.returncode == 3


def test_config_echo_round_trips(fixtures_dir):
    res = run_cli("analyze", fixtures_dir / "fixture_fig1.notes",
                  "--weights", "0.5,0.25,0.25", "--window", "8",
                  "--threshold", "0.7")
    report = json.loads(res.stdout)
    config = AnalysisConfig.from_dict(report["config"])
    assert config.salience_weights == (0.5, 0.25, 0.25)
    assert str(config.window) == "8"
    assert config.threshold == 0.7


def test_config_file_flags_win(fixtures_dir, tmp_path):
    cfg = tmp_path / "a.cfg"
    cfg.write_text("threshold=0.9\nwindow=16\n")
    res = run_cli("analyze", fixtures_dir / "fixture_fig1.notes",
                  "--config", cfg, "--window", "4")
    report = json.loads(res.stdout)
    assert report["config"]["threshold"] == 0.9  # from file
    assert report["config"]["window"] == "4"     # flag wins


def test_out_flag_writes_file(fixtures_dir, tmp_path):
    out = tmp_path / "report.json"
    res = run_cli("analyze", fixtures_dir / "fixture_fig1.notes",
                  "--out", out)
    assert res.returncode == 0 and res.stdout == ""
    assert json.loads(out.read_text())["climax"]["asymmetry_index"] > 0


# --- climax / recur --------------------------------------------------------------

def test_climax_csv_curve(fixtures_dir):
    res = run_cli("climax", fixtures_dir / "fixture_fig1.notes", "--csv")
    assert res.returncode == 0
    lines = res.stdout.splitlines()
    assert lines[0] == "time,salience"
    assert len(lines) > 10
    assert all("," in line for line in lines[1:])


def test_recur_report(fixtures_dir):
    res = run_cli("recur", fixtures_dir / "passion_chorales.notes",
                  "--query", fixtures_dir / "chorale_query.notes")
    assert res.returncode == 0
    report = json.loads(res.stdout)
    matches = report["recurrence"]["matches"]
    assert [m["deviation"] for m in matches[:4]] == [0.0] * 4
    assert matches[4]["deviation"] > 0


# --- form ------------------------------------------------------------------------

def test_form_generate():
    res = run_cli("form", "generate", "--seed", "AB", "--steps", "2")
    assert res.returncode == 0
    assert res.stdout.strip() == "AB AAB AAAB"


def test_form_recognize_derivable():
    res = run_cli("form", "recognize", "AABA", "--seed", "ABA")
    assert res.returncode == 0
    assert res.stdout.strip() == "1"


def test_form_recognize_not_derivable_exit_0():
    res = run_cli("form", "recognize", "ABB", "--seed", "AB")
    assert res.returncode == 0
    assert res.stdout.strip() == "not derivable"


def test_form_recognize_malformed_exit_2():
    res = run_cli("form", "recognize", "a?b", "--seed", "AB")
    assert res.returncode == 2


# --- corpus ----------------------------------------------------------------------

def test_corpus_summary_mean(fixtures_dir):
    res = run_cli("corpus", fixtures_dir / "corpus")
    assert res.returncode == 0
    lines = res.stdout.splitlines()
    assert lines[0].startswith("file,beats_total,normalized_position")
    rows = [line.split(",") for line in lines[1:]]
    assert len(rows) == 4  # 3 pieces + summary
    positions = sorted(float(r[2]) for r in rows[:3])
    assert positions == [0.25, 0.5, 0.75]
    summary = rows[3]
    assert summary[0] == "summary"
    assert float(summary[2]) == 0.5   # mean
    assert float(summary[3]) == 0.5   # median


def test_corpus_skips_corrupt_with_warning(fixtures_dir):
    res = run_cli("corpus", fixtures_dir / "corpus_bad")
    assert res.returncode == 0
    lines = res.stdout.splitlines()
    assert len(lines) == 1 + 3 + 1  # header + valid rows + summary
    assert res.stderr.count("warning: skipped") == 1


def test_corpus_empty_directory_exit_2(tmp_path):
    res = run_cli("corpus", tmp_path)
    assert res.returncode == 2


def test_corpus_deterministic(fixtures_dir):
    a = run_cli("corpus", fixtures_dir / "corpus")
    b = run_cli("corpus", fixtures_dir / "corpus")
    assert a.stdout == b.stdout
