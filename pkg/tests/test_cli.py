import csv
import io
import json
import subprocess
import sys

import pytest

from qstirling.cli import main, run, table_rows
from qstirling.qpoly import LaurentPoly
from qstirling.stirling import stirling_b


def call(*argv):
    out = io.StringIO()
    code = run(list(argv), out)
    return code, out.getvalue()


def test_table_stirling_b_csv():
    code, text = call("table", "stirling-b", "--n", "2", "--format", "csv")
    assert code == 0
    lines = text.splitlines()
    assert lines[0] == "n,k,poly"
    assert "2,1,2 + q + q^2" in lines


def test_table_eulerian_b_json():
    code, text = call("table", "eulerian-b", "--n", "1", "--format", "json")
    assert code == 0
    assert json.loads(text) == [{"n": 1, "k": 0, "poly": "1"}, {"n": 1, "k": 1, "poly": "q"}]


def test_table_stirling_a_single_row():
    code, text = call("table", "stirling-a", "--n", "0", "--format", "csv")
    assert text.splitlines()[1:] == ["0,0,1"]


def test_table_round_trip():
    code, text = call("table", "stirling-b", "--n", "6", "--format", "csv")
    for row in list(csv.DictReader(io.StringIO(text))):
        assert LaurentPoly.parse(row["poly"]) == stirling_b(int(row["n"]), int(row["k"]))
    code, text = call("table", "eulerian-r", "--n", "3", "--r", "3", "--format", "json")
    rows = table_rows("eulerian-r", 3, 3)
    assert [LaurentPoly.parse(d["poly"]) for d in json.loads(text)] == [p for _, _, p in rows]


def test_table_needs_r():
    code, _ = call("table", "stirling-r", "--n", "2")
    assert code == 2


def test_stats_b():
    code, text = call("stats", "b", "--n", "1", "--stats", "des,fmaj", "--format", "csv")
    assert code == 0
    assert text.splitlines() == ["element,des,fmaj", "1,0,0", "-1,1,1"]


def test_stats_a():
    code, text = call("stats", "a", "--n", "2", "--stats", "des,maj", "--format", "csv")
    assert text.splitlines() == ["element,des,maj", "12,0,0", "21,1,1"]


def test_stats_colored():
    code, text = call("stats", "colored", "--n", "1", "--r", "3", "--format", "json")
    rows = json.loads(text)
    assert [r["fmaj_r"] for r in rows] == [0, 1, 2]


def test_stats_errors():
    assert call("stats", "a", "--n", "2", "--stats", "fmaj")[0] == 2
    assert call("stats", "colored", "--n", "2")[0] == 2
    assert call("stats", "b", "--n", "9")[0] == 2


def test_verify_exit_codes():
    assert call("verify", "thm-main-B", "--max-n", "6")[0] == 0
    assert call("verify", "thm-main-B-corrupted", "--max-n", "2")[0] == 1
    assert call("verify", "no-such-id")[0] == 2
    assert main(["verify", "--bogus-flag"]) == 2
    assert call("verify", "all", "thm-main-B")[0] == 2


def test_verify_text_and_csv():
    code, text = call("verify", "cg-relation", "--max-n", "2")
    assert text.splitlines() == ["PASS cg-relation n=0", "PASS cg-relation n=1",
                                 "PASS cg-relation n=2", "3 checks, 0 failed"]
    code, text = call("verify", "--ids", "thm-main-B-corrupted", "--max-n", "1", "--format", "csv")
    rows = list(csv.DictReader(io.StringIO(text)))
    assert code == 1
    assert list(rows[0]) == ["id", "params", "equal", "lhs", "rhs", "witness"]
    assert all(r["equal"] == "false" and r["witness"].startswith("t=") for r in rows)


def test_verify_json_round_trip():
    code, text = call("verify", "genfun-r", "--max-n", "2", "--r", "2", "--order", "4", "--format", "json")
    data = json.loads(text)
    assert code == 0 and data
    assert all(d["equal"] and d["lhs"] == d["rhs"] and d["params"]["order"] == 4 for d in data)


def test_verify_suite_small():
    code, text = call("verify", "all", "--max-n", "4", "--r", "1,2,3", "--order", "6")
    assert code == 0
    assert text.endswith(" 0 failed\n")


def test_verify_list():
    code, text = call("verify", "--list")
    assert code == 0 and "thm-main-B-corrupted" in text.split()


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "qstirling", "table", "stirling-a", "--n", "3"],
                          capture_output=True, text=True)
    assert proc.returncode == 0
    assert proc.stdout.splitlines()[-1].split() == ["3", "3", "1"]


@pytest.mark.parametrize("fmt", ["text", "csv", "json"])
def test_output_is_deterministic(fmt):
    a = call("verify", "all", "--max-n", "3", "--format", fmt)
    b = call("verify", "all", "--max-n", "3", "--format", fmt)
    assert a == b
