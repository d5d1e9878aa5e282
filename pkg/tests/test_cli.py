import json
import os

from zvar.cli import main


def run(tmp_path, name, *argv):
    out = tmp_path / name
    rc = main([*argv, "--out", str(out)])
    return rc, out


def read_csv(out, name):
    with open(out / f"{name}.csv") as fh:
        header = fh.readline().strip().split(",")
        rows = [line.strip().split(",") for line in fh if line.strip()]
    return header, rows


def test_t_coeff_exact_output(tmp_path):
    rc, out = run(tmp_path, "t", "t-coeff", "--n", "2", "--N", "2")
    assert rc == 0
    header, rows = read_csv(out, "t-coeff")
    assert header == ["n", "N", "value"]
    assert rows[0][2] == "15/64"
    meta = json.loads((out / "t-coeff.meta.json").read_text())
    assert meta["subcommand"] == "t-coeff"
    assert "wall_time_s" in meta


def test_curve_g_monotone_rows(tmp_path):
    rc, out = run(tmp_path, "g", "curve-g", "--n", "20", "--points", "100")
    assert rc == 0
    _, rows = read_csv(out, "curve-g")
    vals = [float(r[1]) for r in rows]
    assert len(vals) == 100
    assert vals[-1] == 1.0
    assert all(b >= a - 1e-12 for a, b in zip(vals, vals[1:]))


def test_curve_fz_derivative_column(tmp_path):
    rc, out = run(
        tmp_path, "fz", "curve-fz", "--z", "1/2", "--n", "16", "--points", "8",
        "--derivative",
    )
    assert rc == 0
    header, rows = read_csv(out, "curve-fz")
    assert header == ["s", "value", "derivative"]
    assert len(rows) == 8


def test_zmeasure_table_exact_fractions(tmp_path):
    rc, out = run(tmp_path, "zm", "zmeasure-table", "--n", "2", "--z", "1/2")
    assert rc == 0
    _, rows = read_csv(out, "zmeasure-table")
    vals = dict((r[0], r[1]) for r in rows)
    assert vals == {"2": "9/10", "1+1": "1/10"}


def test_rmt_exact_subcommand(tmp_path):
    rc, out = run(
        tmp_path, "re", "rmt-exact", "--n", "2", "--z", "1/2", "--N", "3"
    )
    assert rc == 0
    _, rows = read_csv(out, "rmt-exact")
    assert rows[0][4] == rows[0][5] == "5/32"
    assert rows[0][6] == "1"


def test_ff_verify_lemma21_subcommand(tmp_path):
    rc, out = run(
        tmp_path, "l21", "ff-verify-lemma21", "--q", "3", "--n", "5", "--h", "2"
    )
    assert rc == 0
    _, rows = read_csv(out, "ff-verify-lemma21")
    assert float(rows[0][6]) <= 1e-6


def test_constants_subcommand(tmp_path):
    rc, out = run(tmp_path, "c", "constants", "--x", "1e5")
    assert rc == 0
    _, rows = read_csv(out, "constants")
    table = {r[0]: float(r[1]) for r in rows}
    assert abs(table["K"] - 0.7642) <= 5e-4
    for q in (3, 5, 7, 11, 13):
        assert 1.0 < table[f"K_{q}"] < 1.5


def test_deterministic_output(tmp_path):
    rc1, out1 = run(
        tmp_path, "a", "gamma-k", "--k", "2", "--c", "1.0",
        "--samples", "20000", "--seed", "7",
    )
    rc2, out2 = run(
        tmp_path, "b", "gamma-k", "--k", "2", "--c", "1.0",
        "--samples", "20000", "--seed", "7",
    )
    assert rc1 == rc2 == 0
    assert (out1 / "gamma-k.csv").read_bytes() == (out2 / "gamma-k.csv").read_bytes()


def test_precondition_exit_code(tmp_path, capsys):
    rc = main(
        ["zmeasure-table", "--n", "2", "--z", "0", "--out", str(tmp_path / "x")]
    )
    assert rc == 2
    err = capsys.readouterr().err
    assert json.loads(err)["type"] == "precondition"


def test_budget_exit_code(tmp_path, capsys):
    rc = main(
        ["ff-variance", "--q", "13", "--n", "8", "--h", "1",
         "--max-enum", "1e6", "--out", str(tmp_path / "y")]
    )
    assert rc == 3
    err = capsys.readouterr().err
    assert json.loads(err)["type"] == "budget"


def test_default_output_layout(tmp_path, monkeypatch):
    monkeypatch.chdir(tmp_path)
    rc = main(["t-coeff", "--n", "1", "--N", "2"])
    assert rc == 0
    runs = os.listdir(tmp_path / "out" / "t-coeff")
    assert len(runs) == 1
