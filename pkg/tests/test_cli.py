import io
import json
import subprocess
import sys

import pytest

from diffconcepts.cli import run_cli
from diffconcepts.export import matrix_from_csv
from diffconcepts.sensor import series_to_csv, Polyline
from diffconcepts.synthetic import bundled_family, curve_family, data_path

from goldens import FINAL_CONTEXT, FINAL_COLUMNS, parse_table

WORKED = str(data_path("worked_example.csv"))


def run(*argv):
    out, err = io.StringIO(), io.StringIO()
    code = run_cli([str(a) for a in argv], stdout=out, stderr=err)
    return code, out.getvalue(), err.getvalue()


def curve_files():
    return [str(data_path("curves", f"{p.name}.json")) for p in curve_family()]


def test_encode_final_context():
    code, out, _ = run("encode", WORKED, "--attrs", "a,w", "--eps", "0", "--format", "json")
    assert code == 0 and out.endswith("\n")
    doc = json.loads(out)
    rows = {tuple(o): {a for a, b in zip(doc["attributes"], r) if b}
            for o, r in zip(doc["objects"], doc["incidence"])}
    assert rows == parse_table(FINAL_CONTEXT, FINAL_COLUMNS)


def test_concepts_count():
    code, out, _ = run("concepts", WORKED, "--attrs", "a,w", "--eps", "0")
    assert code == 0 and len(json.loads(out)) == 28


def test_lattice_formats(tmp_path):
    code, out, _ = run("lattice", WORKED, "--format", "dot")
    assert code == 0 and out.count("[label=") == 28
    dest = tmp_path / "lat.json"
    code, out, _ = run("lattice", WORKED, "--out", dest)
    assert code == 0 and out == ""
    assert json.loads(dest.read_text())["top"] == 1


def test_matrix_and_common_on_family():
    code, out, _ = run("matrix", *curve_files(), "--attrs", "angle,x")
    assert code == 0
    m = matrix_from_csv(out.strip())
    assert m.labels == tuple("abcdefgh")
    code, out, _ = run("common", *curve_files(), "--attrs", "angle")
    assert code == 0 and ["a:>"] in json.loads(out)["common"]


def test_diff_and_derive(tmp_path):
    code, out, _ = run("diff", *curve_files()[:2], "--attrs", "angle,width")
    doc = json.loads(out)
    assert code == 0 and doc["left"] == "a" and doc["right"] == "b"
    assert doc["left_minus_right"] or doc["right_minus_left"]
    code, out, _ = run("diff", WORKED, WORKED)
    assert code == 0 and json.loads(out)["left_minus_right"] == []
    code, out, _ = run("derive", curve_files()[0], "--attrs", "angle,width")
    assert code == 0 and out.splitlines()[0] == "a,w"
    csv_path = tmp_path / "a.csv"
    csv_path.write_text(out)
    code, out2, _ = run("encode", csv_path)
    code_j, out_j, _ = run("encode", curve_files()[0], "--attrs", "angle,width")
    assert code == code_j == 0 and out2 == out_j


def test_resample_option():
    code, out, _ = run("derive", curve_files()[0], "--attrs", "x", "--resample", "0.5")
    assert code == 0 and len(out.splitlines()) > 2 * len(curve_family()[0].points) - 3


@pytest.mark.parametrize("argv", [
    [],
    ["frobnicate", WORKED],
    ["lattice", WORKED, "--format", "csv"],
    ["matrix", WORKED, "--format", "dot"],
    ["diff", WORKED],
    ["matrix", WORKED],
    ["encode", WORKED, "--eps", "-1"],
    ["encode", WORKED, "--max-concepts", "0"],
    ["encode", WORKED, "--include-top", "maybe"],
    ["encode", WORKED, "--attrs", " , "],
])
def test_usage_errors(argv):
    code, out, err = run(*argv)
    assert code == 1 and out == "" and "usage" in err


def test_bad_sensor_selection_is_usage_error():
    code, _, err = run("encode", curve_files()[0], "--attrs", "speed")
    assert code == 1 and "speed" in err


def test_input_errors(tmp_path):
    bad = tmp_path / "bad.csv"
    bad.write_text("w,a\n1,2\n3,oops\n")
    code, out, err = run("encode", bad)
    assert code == 2 and out == "" and "row 3" in err
    code, _, err = run("encode", tmp_path / "missing.csv")
    assert code == 2
    code, _, err = run("encode", WORKED, "--attrs", "a,z")
    assert code == 2 and "'z'" in err
    broken = tmp_path / "p.json"
    broken.write_text('{"name": "p", "points": [{"x": 0}]}')
    assert run("encode", broken)[0] == 2
    single = tmp_path / "one.json"
    single.write_text(Polyline("one", ((0, 0, 1),)).to_json())
    assert run("encode", single, "--attrs", "angle")[0] == 2


def test_caps_exit_3_without_output(tmp_path):
    dest = tmp_path / "out.json"
    code, out, err = run("encode", WORKED, "--max-breakpoints", "3", "--out", dest)
    assert code == 3 and "cap" in err and not dest.exists() and out == ""
    code, out, err = run("lattice", WORKED, "--max-concepts", "5", "--out", dest)
    assert code == 3 and "concept cap of 5" in err and not dest.exists()
    code, out, err = run("matrix", *curve_files(), "--max-concepts", "2")
    assert code == 3 and out == ""


def test_byte_determinism():
    for argv in (["lattice", WORKED, "--format", "dot"], ["matrix", *curve_files(), "--format", "json"]):
        assert run(*argv) == run(*argv)


def test_bundled_data_matches_generator(worked):
    assert bundled_family() == curve_family()
    assert series_to_csv(worked).splitlines()[0] == "w,a"


def test_console_entry_point():
    proc = subprocess.run([sys.executable, "-m", "diffconcepts", "concepts", WORKED],
                          capture_output=True, text=True, check=False)
    assert proc.returncode == 0 and len(json.loads(proc.stdout)) == 28
    proc = subprocess.run([sys.executable, "-m", "diffconcepts", "lattice", WORKED, "--format", "csv"],
                          capture_output=True, text=True, check=False)
    assert proc.returncode == 1 and proc.stdout == ""
