"""End-to-end runs of the command-line front end."""

import json

import pytest
from click.testing import CliRunner

from nbcensus.cli import RunConfig, load_pattern, main, run
from nbcensus.graphs import GraphError

K4_TEXT = "a b\na c\na d\nb c\nb d\nc d\n"
TRIANGLE_TEXT = "x y\ny z\nz x\n"
PATTERN_TEXT = "r: x\ns: y z\nx y\nx z\ny z\n"


@pytest.fixture
def runner():
    return CliRunner()


@pytest.fixture
def k4_file(tmp_path):
    path = tmp_path / "k4.txt"
    path.write_text(K4_TEXT)
    return str(path)


@pytest.fixture
def triangle_file(tmp_path):
    path = tmp_path / "tri.txt"
    path.write_text(TRIANGLE_TEXT)
    return str(path)


def test_cycles_on_k4(runner, k4_file):
    result = runner.invoke(main, ["--input", k4_file, "--counts", "cycles"])
    assert result.exit_code == 0, result.stdout
    report = json.loads(result.stdout)
    assert report["meta"] == {"n": 4, "m": 6, "l": 12}
    assert report["counters"]["cycles"] == {
        "C3": 4, "C4": 3, "C5": 0, "C6": 0, "C7": 0, "C8": 0, "C9": 0}
    assert "errors" not in report


def test_order3_oracle_check_verifies(runner, triangle_file):
    result = runner.invoke(main, [
        "--input", triangle_file, "--counts", "order3", "--oracle-check"])
    assert result.exit_code == 0, result.stdout
    report = json.loads(result.stdout)
    check = report["oracle_check"]["order3"]
    assert check == {"verified": True, "checked": 6}
    section = report["counters"]["order3"]
    assert section["edge"]["C3"]["total"] == 6
    assert section["vertex"]["P3v"]["per_location"] == {
        "x": 2, "y": 2, "z": 2}


def test_oracle_check_skips_when_over_budget(runner, k4_file):
    result = runner.invoke(main, [
        "--input", k4_file, "--counts", "cycles", "--oracle-check",
        "--max-oracle-n", "3"])
    assert result.exit_code == 0
    report = json.loads(result.stdout)
    assert report["oracle_check"]["cycles"]["status"].startswith("skipped")


def test_missing_input_fails_cleanly(runner, tmp_path):
    result = runner.invoke(main, [
        "--input", str(tmp_path / "nope.txt"), "--counts", "cycles"])
    assert result.exit_code == 1
    assert result.stdout == ""
    assert "error:" in result.stderr


def test_unknown_counter_is_usage_error(runner, k4_file):
    result = runner.invoke(main, ["--input", k4_file, "--counts", "order7"])
    assert result.exit_code != 0
    assert "unknown counter" in result.stderr


def test_timings_stay_off_the_report(runner, k4_file):
    result = runner.invoke(main, ["--input", k4_file, "--counts", "cycles"])
    assert "[timing]" not in result.stdout
    assert "[timing] parse:" in result.stderr
    assert "[stats] peak product nnz:" in result.stderr


def test_repeated_runs_are_byte_identical(runner, k4_file, tmp_path):
    args = ["--input", k4_file, "--counts", "order3,cycles,k6"]
    first = runner.invoke(main, args)
    second = runner.invoke(main, args)
    assert first.exit_code == second.exit_code == 0
    assert first.stdout == second.stdout
    out_path = tmp_path / "report.json"
    third = runner.invoke(main, args + ["--output", str(out_path)])
    assert third.exit_code == 0
    assert out_path.read_text() == first.stdout


def test_csv_layout(runner, triangle_file):
    result = runner.invoke(main, [
        "--input", triangle_file, "--counts", "order3,cycles",
        "--format", "csv"])
    assert result.exit_code == 0, result.stdout
    lines = result.stdout.splitlines()
    header = lines[0].split(",")
    assert header[0] == "location"
    assert "o3:C3" in header and "C9" in header
    # 6 directed edges, 3 vertices, header and total
    assert len(lines) == 6 + 3 + 2
    assert lines[-1].startswith("__total__")
    total = dict(zip(header, lines[-1].split(",")))
    assert total["o3:C3"] == "6"
    assert total["C3"] == "1"
    by_row = {line.split(",", 1)[0]: line.split(",") for line in lines[1:]}
    c3_col = header.index("o3:C3")
    assert by_row["x->y"][c3_col] == "1"
    assert by_row["x"][c3_col] == ""  # vertex rows leave edge columns blank
    cyc_col = header.index("C3")
    assert by_row["x->y"][cyc_col] == ""  # cycle totals only


def test_generic_counter_roundtrip(runner, k4_file, tmp_path):
    pattern_path = tmp_path / "pattern.txt"
    pattern_path.write_text(PATTERN_TEXT)
    result = runner.invoke(main, [
        "--input", k4_file, "--counts", f"generic:{pattern_path}",
        "--oracle-check"])
    assert result.exit_code == 0, result.stdout
    report = json.loads(result.stdout)
    section = report["counters"][f"generic:{pattern_path}"]
    assert section["pattern_order"] == 3
    assert section["row_arity"] == 1 and section["col_arity"] == 2
    assert section["total"] == 24
    assert section["entries"]["a->b,c"] == 1
    assert report["oracle_check"][f"generic:{pattern_path}"] == {
        "verified": True, "checked": 1}


def test_pattern_file_needs_root_headers(tmp_path):
    path = tmp_path / "bad.txt"
    path.write_text("x y\ny z\n")
    with pytest.raises(GraphError, match="r: and s:"):
        load_pattern(str(path))
    path.write_text("r: x\ns: q\nx y\n")
    with pytest.raises(GraphError, match="does not appear"):
        load_pattern(str(path))


def test_run_config_validation(k4_file):
    with pytest.raises(ValueError, match="at least one"):
        RunConfig(k4_file, ())
    with pytest.raises(ValueError, match="unknown counter"):
        RunConfig(k4_file, ("order9",))
    with pytest.raises(ValueError, match="repeat"):
        RunConfig(k4_file, ("cycles", "cycles"))
    with pytest.raises(ValueError, match="json or csv"):
        RunConfig(k4_file, ("cycles",), fmt="xml")


def test_run_returns_report_without_click(k4_file):
    status, text = run(RunConfig(k4_file, ("k6",)))
    assert status == 0
    report = json.loads(text)
    assert report["counters"]["k6"]["total"] == 0
