#!/usr/bin/env python3
"""Render figure panels (data scatter vs prediction curve) from CSV files.

Driven by a JSON figure spec:

    {
      "output": "fig2.png",
      "panels": [
        {
          "xlabel": "delta", "ylabel": "normalized variance",
          "series": [
            {"csv": "fig2.csv", "x": "delta", "y": "vbap_norm",
             "label": "data", "style": "scatter"},
            {"csv": "fig2.csv", "x": "delta", "y": "prediction",
             "label": "prediction", "style": "line"}
          ]
        }
      ]
    }

CSV paths are resolved relative to the spec file.  A series with
"derivative": true plots the discrete derivative of the named column, which
is the only computation performed here.  Rendering is deterministic: fixed
backend, no timestamps in the output.
"""

from __future__ import annotations

import argparse
import csv
import json
import sys
from dataclasses import dataclass, field
from pathlib import Path

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402


class RenderError(Exception):
    def __init__(self, code: str, message: str):
        super().__init__(message)
        self.code = code


@dataclass(frozen=True)
class SeriesSpec:
    csv: str
    x: str
    y: str
    label: str
    style: str = "line"
    derivative: bool = False


@dataclass(frozen=True)
class PanelSpec:
    series: tuple[SeriesSpec, ...]
    title: str = ""
    xlabel: str = ""
    ylabel: str = ""


@dataclass(frozen=True)
class FigureSpec:
    output: str
    panels: tuple[PanelSpec, ...]
    width: float = 8.0
    height: float = 5.0
    dpi: int = 120
    base_dir: Path = field(default_factory=Path)


def load_spec(path: str | Path) -> FigureSpec:
    path = Path(path)
    raw = json.loads(path.read_text())
    panels = []
    for p in raw.get("panels", []):
        series = tuple(
            SeriesSpec(
                csv=s["csv"],
                x=s["x"],
                y=s["y"],
                label=s.get("label", s["y"]),
                style=s.get("style", "line"),
                derivative=bool(s.get("derivative", False)),
            )
            for s in p.get("series", [])
        )
        if not series:
            raise RenderError("empty-input", "panel has no series")
        panels.append(
            PanelSpec(
                series=series,
                title=p.get("title", ""),
                xlabel=p.get("xlabel", ""),
                ylabel=p.get("ylabel", ""),
            )
        )
    if not panels:
        raise RenderError("empty-input", "figure spec has no panels")
    return FigureSpec(
        output=raw["output"],
        panels=tuple(panels),
        width=float(raw.get("width", 8.0)),
        height=float(raw.get("height", 5.0)),
        dpi=int(raw.get("dpi", 120)),
        base_dir=path.parent,
    )


def read_columns(path: Path, columns: list[str]) -> dict[str, list[float]]:
    with open(path, newline="") as fh:
        reader = csv.DictReader(fh)
        header = reader.fieldnames or []
        for c in columns:
            if c not in header:
                raise RenderError(
                    "missing-column", f"column {c!r} not in {path.name} ({header})"
                )
        out = {c: [] for c in columns}
        for row in reader:
            for c in columns:
                out[c].append(float(row[c]))
    if len(out[columns[0]]) < 2:
        raise RenderError("empty-input", f"{path.name} has fewer than 2 data rows")
    return out


def discrete_derivative(xs: list[float], ys: list[float]) -> list[float]:
    out = []
    for i in range(len(xs)):
        j = max(i, 1)
        out.append((ys[j] - ys[j - 1]) / (xs[j] - xs[j - 1]))
    return out


def render(spec: FigureSpec) -> Path:
    fig, axes = plt.subplots(
        len(spec.panels),
        1,
        figsize=(spec.width, spec.height * len(spec.panels)),
        squeeze=False,
    )
    for ax, panel in zip(axes[:, 0], spec.panels):
        for s in panel.series:
            cols = read_columns(spec.base_dir / s.csv, [s.x, s.y])
            xs, ys = cols[s.x], cols[s.y]
            if s.derivative:
                ys = discrete_derivative(xs, ys)
            if s.style == "scatter":
                ax.plot(xs, ys, "o", markersize=4, label=s.label)
            else:
                ax.plot(xs, ys, "-", label=s.label)
        if panel.title:
            ax.set_title(panel.title)
        ax.set_xlabel(panel.xlabel)
        ax.set_ylabel(panel.ylabel)
        ax.legend()
    fig.tight_layout()
    out = spec.base_dir / spec.output
    if out.suffix == ".svg":
        fig.savefig(out, format="svg", metadata={"Date": None})
    else:
        fig.savefig(out, dpi=spec.dpi)
    plt.close(fig)
    return out


def main(argv=None) -> int:
    ap = argparse.ArgumentParser(description="render figures from CSV files")
    ap.add_argument("--spec", required=True, help="figure spec JSON")
    args = ap.parse_args(argv)
    try:
        out = render(load_spec(args.spec))
    except RenderError as e:
        json.dump({"error": str(e), "type": e.code}, sys.stderr)
        sys.stderr.write("\n")
        return 2
    print(out)
    return 0


if __name__ == "__main__":
    sys.exit(main())
