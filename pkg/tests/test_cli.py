import csv
import io
import json
import math
import subprocess
import sys

import pytest

from kgoscillator.cli import main
from kgoscillator.measures import TABLE_COLUMNS


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def parse_csv(text):
    lines = text.splitlines()
    assert lines[0].startswith("# ")
    meta = json.loads(lines[0][2:])
    body = [ln for ln in lines[1:] if not ln.startswith("#")]
    return meta, list(csv.DictReader(io.StringIO("\n".join(body))))


def test_spectrum_gamma_zero(capsys):
    code, out, _ = run(capsys, "spectrum", "--gamma", "0", "--n-max", "3")
    assert code == 0
    meta, rows = parse_csv(out)
    assert meta["command"] == "spectrum"
    E = [float(r["E"]) for r in rows]
    assert E == pytest.approx([1, 1.7320508, 2.2360680, 2.6457513], abs=1e-7)
    assert rows[0]["asymptote"] == ""


def test_spectrum_saturation(capsys):
    code, out, _ = run(capsys, "spectrum", "--gamma", "-0.5", "--n-max", "200")
    assert code == 0
    _, rows = parse_csv(out)
    E = [float(r["E"]) for r in rows]
    assert all(b > a for a, b in zip(E, E[1:]))
    assert abs(E[-1] - 2) < 1.2e-4
    assert float(rows[0]["asymptote"]) == 2.0


def test_spectrum_antiparticle(capsys):
    _, anti, _ = run(capsys, "spectrum", "--gamma", "-0.5", "--branch", "antiparticle",
                     "--n-max", "3", "--format", "json")
    _, part, _ = run(capsys, "spectrum", "--gamma", "0.5", "--n-max", "3", "--format", "json")
    a = [r["E"] for r in json.loads(anti)["rows"]]
    p = [r["E"] for r in json.loads(part)["rows"]]
    assert a == pytest.approx([-e for e in p], abs=1e-12)


def test_spectrum_no_root_exit_code(capsys):
    code, _, err = run(capsys, "spectrum", "--gamma", "-1.5", "--n-max", "3")
    assert code == 2
    assert "error" in err


def test_table_gamma_zero(capsys):
    code, out, _ = run(capsys, "table", "--gamma-list", "0", "--n", "0,1,2")
    assert code == 0
    _, rows = parse_csv(out)
    assert [float(r["Fx"]) for r in rows] == pytest.approx([2, 6, 10], abs=1e-8)


def test_table_column_order(capsys):
    _, out, _ = run(capsys, "table", "--gamma-list", "0", "--n", "0")
    header = out.splitlines()[1].split(",")
    assert tuple(header[:len(TABLE_COLUMNS)]) == TABLE_COLUMNS


def test_table_json(capsys):
    code, out, _ = run(capsys, "table", "--gamma-list", "0", "--n", "0", "--format", "json")
    assert code == 0
    doc = json.loads(out)
    assert set(doc) == {"meta", "rows"}
    assert doc["rows"][0]["S_sum"] == pytest.approx(2.1447, abs=1e-4)
    assert doc["rows"][0]["S_sum"] == pytest.approx(1 + math.log(math.pi), abs=1e-6)


def test_table_nonnormalizable_row(capsys):
    code, out, _ = run(capsys, "table", "--gamma-list", "-0.80", "--n", "0")
    assert code == 0
    _, rows = parse_csv(out)
    assert "nonnormalizable:momentum" in rows[0]["flags"]
    assert rows[0]["p2"] == ""


def test_table_forensic_exit_code(capsys):
    code, out, _ = run(capsys, "table", "--gamma-list", "-0.80", "--n", "0", "--forensic")
    assert code == 3
    _, rows = parse_csv(out)
    assert "forensic:momentum" in rows[0]["flags"]
    assert rows[0]["p2"] != ""


def test_table_compare_paper(capsys):
    _, out, _ = run(capsys, "table", "--gamma-list", "0", "--n", "0", "--compare-paper")
    _, rows = parse_csv(out)
    assert abs(float(rows[0]["dev_Fx"])) < 1e-6
    _, out, _ = run(capsys, "table", "--gamma-list", "0", "--n", "0", "--compare-paper",
                    "--format", "json")
    row = json.loads(out)["rows"][0]
    assert row["published"]["Fx"] == 2.0
    assert row["deviation"]["x2"] == pytest.approx(0, abs=1e-9)


def test_json_round_trip_bit_exact(capsys):
    from kgoscillator.measures import report
    _, out, _ = run(capsys, "table", "--gamma-list", "-0.16", "--n", "1", "--format", "json")
    row = json.loads(out)["rows"][0]
    rep = report(-0.16, 1)
    for key in ("E", "x2", "p2", "dx", "Fx", "Sx", "Fx_paper"):
        assert row[key] == getattr(rep, key)
    assert row["stam_x"]["margin"] == rep.stam_x.margin


def test_csv_round_trip_bit_exact(capsys):
    from kgoscillator.measures import report
    _, out, _ = run(capsys, "table", "--gamma-list", "-0.16", "--n", "1")
    _, rows = parse_csv(out)
    rep = report(-0.16, 1)
    assert float(rows[0]["x2"]) == rep.x2
    assert float(rows[0]["Fx"]) == rep.Fx


def test_deterministic_bytes(capsys):
    args = ("table", "--gamma-list", "0,-0.16", "--n", "0,1", "--compare-paper")
    _, a, _ = run(capsys, *args)
    _, b, _ = run(capsys, *args)
    assert a == b
    _, a, _ = run(capsys, "check", "--gamma-list", "-0.32", "--n", "0", "--compare-paper")
    _, b, _ = run(capsys, "check", "--gamma-list", "-0.32", "--n", "0", "--compare-paper")
    assert a == b


def test_output_file(tmp_path, capsys):
    path = tmp_path / "t.csv"
    code, out, _ = run(capsys, "table", "--gamma-list", "0", "--n", "0", "--output", str(path))
    assert code == 0 and out == ""
    assert path.read_text().startswith("# {")


def test_density_rho(capsys):
    code, out, _ = run(capsys, "density", "--gamma", "0", "--n", "0", "--space", "coordinate",
                       "--kind", "rho", "--grid", "-5:5:11")
    assert code == 0
    meta, rows = parse_csv(out)
    assert meta["grid"] == [-5.0, 5.0, 11]
    vals = [float(r["value"]) for r in rows]
    assert len(vals) == 11
    assert vals == vals[::-1]
    assert vals[5] == pytest.approx(0.5641896, abs=1e-7)


def test_density_fisher_node(capsys):
    code, out, _ = run(capsys, "density", "--gamma", "-0.32", "--n", "1", "--space",
                       "coordinate", "--kind", "fisher", "--grid", "-1e-4:1e-4:3")
    assert code == 0
    _, rows = parse_csv(out)
    vals = [float(r["value"]) for r in rows]
    assert all(math.isfinite(v) and v > 0 for v in vals)
    assert vals[0] == pytest.approx(vals[1], rel=1e-6)
    assert vals[0] == vals[2]


def test_density_default_grid(capsys):
    code, out, _ = run(capsys, "density", "--gamma", "-0.32", "--n", "1", "--kind", "fisher")
    assert code == 0
    meta, rows = parse_csv(out)
    assert len(rows) == 2001
    assert float(rows[0]["a"]) == -meta["radius"]
    vals = [float(r["value"]) for r in rows]
    assert vals == vals[::-1]


def test_density_invalid_exit_code(capsys):
    code, _, err = run(capsys, "density", "--gamma", "-0.80", "--n", "0", "--space",
                       "momentum", "--kind", "shannon")
    assert code == 4
    code, _, _ = run(capsys, "density", "--gamma", "-0.16", "--n", "1", "--space",
                     "momentum", "--kind", "fisher")
    assert code == 4


def test_density_json(capsys):
    _, out, _ = run(capsys, "density", "--gamma", "0", "--n", "1", "--kind", "shannon",
                    "--grid", "-2:2:5", "--format", "json")
    doc = json.loads(out)
    assert doc["curve"]["kind"] == "shannon_density"
    assert doc["curve"]["values"][2] == 0.0


def test_bad_grid():
    with pytest.raises(SystemExit):
        main(["density", "--gamma", "0", "--n", "0", "--grid", "1:0:5"])
    with pytest.raises(SystemExit):
        main(["density", "--gamma", "0", "--n", "0", "--grid", "0:1:1"])


def test_check_gamma_zero(capsys):
    code, out, _ = run(capsys, "check", "--gamma-list", "0", "--n", "0,1,2")
    assert code == 0
    doc = json.loads(out)
    for row in doc["rows"]:
        for name, rec in row["inequalities"].items():
            assert rec["satisfied"], name
            assert rec["margin"] >= 0
    assert all(f["code"] == "paper_fisher_discrepancy" for f in doc["findings"])
    assert {v["verdict"] for v in doc["summary"].values()} == {"holds"}


def test_check_minus_016(capsys):
    _, out, _ = run(capsys, "check", "--gamma-list", "-0.16", "--n", "0")
    row = json.loads(out)["rows"][0]
    cr = row["inequalities"]["cramer_rao_x"]
    assert cr["satisfied"] and 0 < cr["margin"] < 1e-2
    assert row["inequalities"]["stam_x"]["margin"] < 0


def test_check_compare_paper_bbm(capsys):
    _, out, _ = run(capsys, "check", "--gamma-list", "-0.32", "--n", "0", "--compare-paper")
    doc = json.loads(out)
    bbm = [f for f in doc["findings"] if f["code"] == "published_bbm_violation"]
    assert len(bbm) == 1
    assert bbm[0]["published"]["lhs"] == 2.0555
    assert "x2" in bbm[0]["recomputed"]


def test_check_csv(capsys):
    code, out, _ = run(capsys, "check", "--gamma-list", "-0.32", "--n", "0",
                       "--compare-paper", "--format", "csv")
    assert code == 0
    findings = [json.loads(ln[len("# finding "):]) for ln in out.splitlines()
                if ln.startswith("# finding ")]
    assert any(f["code"] == "published_bbm_violation" for f in findings)
    _, rows = parse_csv(out)
    assert [r["relation"] for r in rows] == ["stam_x", "stam_p", "cramer_rao_x",
                                             "cramer_rao_p", "fisher_product", "bbm"]


def test_selftest(capsys):
    code, out, _ = run(capsys, "selftest")
    assert code == 0
    assert "FAIL" not in out and out.count("PASS") >= 12


def test_module_entry_point():
    res = subprocess.run([sys.executable, "-m", "kgoscillator", "spectrum", "--gamma", "0",
                          "--n-max", "1"], capture_output=True, text=True, check=False)
    assert res.returncode == 0
    assert res.stdout.splitlines()[1] == "gamma,branch,n,E,lambda,asymptote"
