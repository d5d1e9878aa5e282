import json
import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).resolve().parents[1]))

from render import RenderError, discrete_derivative, load_spec, main, render

FIXTURES = Path(__file__).parent / "fixtures"


def write_spec(tmp_path, spec):
    for name in ("fig2.csv", "fig1.csv", "curve-g.csv",
                 "curve-fz-1.5.csv", "curve-fz-2.0.csv", "curve-fz-2.5.csv"):
        (tmp_path / name).write_bytes((FIXTURES / name).read_bytes())
    p = tmp_path / "spec.json"
    p.write_text(json.dumps(spec))
    return p


def fig2_spec(output="fig2.png"):
    return {
        "output": output,
        "panels": [
            {
                "xlabel": "delta",
                "ylabel": "normalized variance",
                "series": [
                    {"csv": "fig2.csv", "x": "delta", "y": "vbap_norm",
                     "label": "data", "style": "scatter"},
                    {"csv": "fig2.csv", "x": "delta", "y": "prediction",
                     "label": "prediction", "style": "line"},
                ],
            }
        ],
    }


def test_render_fig2_png(tmp_path):
    spec = load_spec(write_spec(tmp_path, fig2_spec()))
    out = render(spec)
    assert out.exists() and out.stat().st_size > 1000
    data = out.read_bytes()
    assert data[:8] == b"\x89PNG\r\n\x1a\n"


def test_render_fig1_and_svg_labels(tmp_path):
    spec_dict = {
        "output": "fig1.svg",
        "panels": [
            {
                "xlabel": "delta",
                "ylabel": "V_b normalized",
                "series": [
                    {"csv": "fig1.csv", "x": "delta", "y": "vb_norm",
                     "label": "data", "style": "scatter"},
                    {"csv": "fig1.csv", "x": "delta", "y": "prediction",
                     "label": "prediction", "style": "line"},
                ],
            }
        ],
    }
    out = render(load_spec(write_spec(tmp_path, spec_dict)))
    text = out.read_text()
    assert "data" in text and "prediction" in text


def test_multi_line_panel(tmp_path):
    spec_dict = {
        "output": "family.png",
        "panels": [
            {
                "xlabel": "s",
                "ylabel": "CDF",
                "series": [
                    {"csv": f"curve-fz-{z}.csv", "x": "s", "y": "value",
                     "label": f"z={z}", "style": "line"}
                    for z in ("1.5", "2.0", "2.5")
                ],
            }
        ],
    }
    out = render(load_spec(write_spec(tmp_path, spec_dict)))
    assert out.exists()


def test_derivative_panel(tmp_path):
    spec_dict = {
        "output": "deriv.png",
        "panels": [
            {
                "xlabel": "s",
                "ylabel": "G and G'",
                "series": [
                    {"csv": "curve-g.csv", "x": "s", "y": "value",
                     "label": "curve", "style": "line"},
                    {"csv": "curve-g.csv", "x": "s", "y": "value",
                     "label": "derivative", "style": "line",
                     "derivative": True},
                ],
            }
        ],
    }
    out = render(load_spec(write_spec(tmp_path, spec_dict)))
    assert out.exists()


def test_discrete_derivative_values():
    xs = [0.0, 1.0, 2.0]
    ys = [0.0, 2.0, 6.0]
    assert discrete_derivative(xs, ys) == [2.0, 2.0, 4.0]


def test_deterministic_re_render(tmp_path):
    p = write_spec(tmp_path, fig2_spec())
    out1 = render(load_spec(p)).read_bytes()
    out2 = render(load_spec(p)).read_bytes()
    assert out1 == out2


def test_missing_column_error(tmp_path):
    bad = fig2_spec()
    bad["panels"][0]["series"][0]["y"] = "nope"
    p = write_spec(tmp_path, bad)
    with pytest.raises(RenderError) as exc:
        render(load_spec(p))
    assert exc.value.code == "missing-column"


def test_empty_input_error(tmp_path):
    p = write_spec(tmp_path, fig2_spec())
    (tmp_path / "fig2.csv").write_text("delta,p,vbap_norm,prediction\n0.2,3,0.1,0.1\n")
    with pytest.raises(RenderError) as exc:
        render(load_spec(p))
    assert exc.value.code == "empty-input"


def test_cli_exit_codes(tmp_path, capsys):
    p = write_spec(tmp_path, fig2_spec())
    assert main(["--spec", str(p)]) == 0
    bad = fig2_spec()
    bad["panels"] = []
    p2 = tmp_path / "bad.json"
    p2.write_text(json.dumps(bad))
    assert main(["--spec", str(p2)]) == 2
    err = capsys.readouterr().err
    assert json.loads(err)["type"] == "empty-input"
