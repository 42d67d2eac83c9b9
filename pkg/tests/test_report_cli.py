import csv
import io
import json
import math

import numpy as np
import pytest

from cknlab import cli, report
from cknlab.params import REGION_HEADER
from cknlab.rayleigh import SCAN_HEADER as RAY_HEADER
from cknlab.spectral import SCAN_HEADER as SPEC_HEADER


def run(*argv):
    out, err = io.StringIO(), io.StringIO()
    code = cli.run(list(argv), stdout=out, stderr=err)
    return code, out.getvalue(), err.getvalue()


def run_json(*argv):
    code, out, err = run(*argv)
    return code, json.loads(out), err


def run_csv(*argv):
    code, out, err = run(*argv, "--format", "csv")
    rows = list(csv.reader(io.StringIO(out)))
    return code, rows


# report -------------------------------------------------------------------


def test_floats_roundtrip_with_17_digits():
    xs = [0.1, 1 / 3, math.pi, 1e-300, -2.5e17, 6.0]
    text = report.dumps({"x": xs})
    back = json.loads(text)["x"]
    assert back == xs
    assert "0.10000000000000001" in text


def test_nonfinite_floats_become_strings():
    back = json.loads(report.dumps([math.nan, math.inf, -math.inf]))
    assert back == ["nan", "inf", "-inf"]


def test_keys_sorted_and_output_stable():
    a = report.dumps({"b": 1, "a": {"z": 2.0, "y": [1, 2]}})
    b = report.dumps({"a": {"y": [1, 2], "z": 2.0}, "b": 1})
    assert a == b
    assert a.index('"a"') < a.index('"b"')
    assert a.endswith("\n")


def test_numpy_values_are_plain():
    obj = {"arr": np.arange(3.0), "i": np.int64(4), "f": np.float64(0.5), "t": np.bool_(True)}
    assert json.loads(report.dumps(obj)) == {"arr": [0.0, 1.0, 2.0], "f": 0.5, "i": 4, "t": True}


def test_unserialisable_raises():
    with pytest.raises(TypeError):
        report.dumps({"x": object()})


def test_envelope_has_schema_version():
    env = report.envelope("params", {"x": 1}, True)
    assert env["schema_version"] == 1 and env["pass"] is True


def test_csv_cells():
    text = report.csv_text(("x", "flag", "none"), [(0.1, True, None), (2, False, "s")])
    assert text.splitlines() == ["x,flag,none", "0.10000000000000001,true,", "2,false,s"]


def test_write_text_to_file(tmp_path):
    path = tmp_path / "r.json"
    report.write_text("abc\n", str(path))
    assert path.read_bytes() == b"abc\n"


# subcommands --------------------------------------------------------------


def test_params_sobolev():
    code, doc, _ = run_json("params", "--a", "0", "--b", "0", "--d", "3")
    assert code == 0 and doc["command"] == "params" and doc["schema_version"] == 1
    d = doc["result"]["derived"]
    assert d["p"] == pytest.approx(6, abs=1e-12)
    assert d["alpha"] == pytest.approx(1, abs=1e-12)
    assert d["n"] == pytest.approx(3, abs=1e-12)
    assert "flags" in doc["result"]


def test_params_json_is_byte_identical():
    assert run("params", "--a", "-0.3", "--b", "0.2", "--d", "4")[1] == run("params", "--a", "-0.3", "--b", "0.2", "--d", "4")[1]


@pytest.mark.parametrize("argv", [
    ("params", "--a", "1", "--b", "0", "--d", "3"),
    ("params", "--a", "0", "--b", "1", "--d", "3", "--strict"),
    ("verify-identities", "--d", "5"),
    ("verify-identities", "--n", "1.5"),
    ("integrals", "--cone", "arc", "--d", "2", "--a", "-1"),
    ("integrals", "--cone", "cap", "--theta", "1.0", "--d", "2", "--a", "-1"),
    ("rayleigh", "--d", "3"),
    ("ef-profile", "--Lambda", "1.0"),
    ("params", "--format", "csv"),
])
def test_invalid_arguments_exit_2(argv):
    code, out, err = run(*argv)
    assert code == 2
    assert out == ""
    assert err.startswith("cknlab ")


def test_unknown_subcommand_exit_2(capsys):
    code, _, _ = run("frobnicate")
    assert code == 2
    assert "invalid choice" in capsys.readouterr().err


def test_regions_csv_header():
    code, rows = run_csv("regions", "--d", "3", "--resolution", "5")
    assert code == 0
    assert tuple(rows[0]) == REGION_HEADER == ("a", "b", "admissible", "strict", "fs_breaking",
                                               "del_symmetric", "cd0n", "thm11_applies")
    assert len(rows) == 1 + 25
    assert {r[2] for r in rows[1:]} <= {"true", "false"}


def test_verify_identities_example():
    code, doc, _ = run_json("verify-identities", "--d", "3", "--n", "4", "--alpha", "0.6",
                            "--trials", "500", "--seed", "1")
    assert code == 0 and doc["pass"] is True
    reps = doc["result"]["reports"]
    assert reps and all(r["pass"] for r in reps.values())
    assert all(r["samples"] >= 500 for r in reps.values())


def test_spectrum_single_arc():
    code, doc, _ = run_json("spectrum", "--kind", "arc", "--theta", "1.0")
    assert code == 0
    assert doc["result"]["result"]["lambda1"] == pytest.approx(math.pi**2, rel=1e-8)


def test_spectrum_nonconvex_arc_is_not_a_failure():
    code, doc, _ = run_json("spectrum", "--kind", "arc", "--theta", str(1.5 * math.pi))
    assert code == 0 and doc["result"]["convex"] is False
    assert doc["result"]["result"]["lambda1"] == pytest.approx(4 / 9, rel=1e-8)


def test_spectrum_scan_csv():
    code, rows = run_csv("spectrum", "--kind", "arc")
    assert code == 0
    assert tuple(rows[0]) == SPEC_HEADER
    convex = [r for r in rows[1:] if r[3] == "true"]
    assert convex and all(r[4] == "true" for r in convex)


def test_integrals_csv_tables():
    code, rows = run_csv("integrals", "--a", "0", "--b", "0", "--d", "3", "--R", "1", "2", "4")
    assert code == 0 and rows[0] == ["R", "value", "ratio"] and len(rows) == 4
    code, rows = run_csv("integrals", "--table", "2")
    assert code == 0 and rows[0] == ["R", "value", "ratio"]
    code, _, err = run("integrals", "--table", "7", "--format", "csv")
    assert code == 2 and "q values" in err


def test_integrals_json():
    code, doc, _ = run_json("integrals", "--a", "-0.5", "--b", "0", "--d", "2", "--cone", "arc",
                            "--theta", "2.0")
    assert code == 0
    res = doc["result"]
    assert res["cone"] == {"kind": "arc", "theta": 2.0}
    assert res["volume_growth"]["max_ratio_error"] <= 1e-10
    assert set(res["lemma44"]) == {"0", "2", f"{res['params']['n'] / 2 + 1:g}"}


def test_ef_profile_csv():
    code, rows = run_csv("ef-profile", "--a", "0", "--b", "0", "--d", "3")
    assert code == 0 and rows[0] == ["s", "phi"] and len(rows) == 2001


def test_ef_profile_shooting():
    code, doc, _ = run_json("ef-profile", "--Lambda", "1.0", "--p", "4")
    assert code == 0 and doc["result"]["mode"] == "shooting"
    assert doc["result"]["sup_error_vs_soliton"] <= 1e-4


def test_verify_extremal_single_case():
    code, doc, _ = run_json("verify-extremal", "--a", "-0.4", "--b", "0.1", "--d", "3")
    assert code == 0 and len(doc["result"]["cases"]) == 1
    assert all(c["expected_pass"] == c["pass"] for c in doc["result"]["neumann"])


def test_rayleigh_breaking_example():
    code, doc, _ = run_json("rayleigh", "--d", "2", "--a", "-2", "--b", "-1.5")
    assert code == 0
    rep = doc["result"]["report"]
    assert rep["deficit"] >= 0.01 and rep["breaking_detected"] is True
    assert rep["E_full"] <= rep["E_radial"] + 1e-6


def test_rayleigh_csv_header():
    code, rows = run_csv("rayleigh", "--a", "-0.5", "--b", "0")
    assert code == 0 and tuple(rows[0]) == RAY_HEADER and len(rows) == 2
    assert rows[1][6] == "false"


def test_out_file(tmp_path):
    path = tmp_path / "params.json"
    code, out, _ = run("params", "--out", str(path))
    assert code == 0 and out == ""
    doc = json.loads(path.read_text())
    assert doc["result"]["derived"]["p"] == pytest.approx(6)


def test_out_file_csv(tmp_path):
    path = tmp_path / "regions.csv"
    code, _, _ = run("regions", "--resolution", "3", "--format", "csv", "--out", str(path))
    assert code == 0
    assert path.read_text().splitlines()[0] == ",".join(REGION_HEADER)
