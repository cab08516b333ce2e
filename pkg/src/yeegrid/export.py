"""Writers for mesh lines: JSON, legacy VTK, solver XML and a sequence CSV.

Coordinates are rendered with 17 significant digits and a dot decimal
separator so that every double survives a text round trip unchanged.
"""

from __future__ import annotations

import csv
import json
from pathlib import Path
from typing import Optional

import numpy as np

from .model import AXES, GridReport, RectilinearGrid


def fmt(value: float) -> str:
    return format(float(value), ".17g")


def _join(values, sep=",") -> str:
    return sep.join(fmt(v) for v in values)


def lines_json(grid: RectilinearGrid, report: Optional[GridReport] = None) -> str:
    parts = [f'"{name}": [{_join(a, ", ")}]' for name, a in zip(AXES, grid.axes)]
    parts.append('"unit": "m"')
    if report is not None:
        parts.append('"report": ' + json.dumps(report.to_dict(), sort_keys=True))
    return "{\n  " + ",\n  ".join(parts) + "\n}\n"


def write_lines_json(grid: RectilinearGrid, report: Optional[GridReport], path) -> None:
    Path(path).write_text(lines_json(grid, report), encoding="utf-8")


def read_lines_json(path) -> RectilinearGrid:
    doc = json.loads(Path(path).read_text(encoding="utf-8"))
    return RectilinearGrid(doc["x"], doc["y"], doc["z"])


def write_vtk_rectilinear(grid: RectilinearGrid, path, title: str = "yeegrid rectilinear mesh") -> None:
    nx, ny, nz = grid.shape
    out = [
        "# vtk DataFile Version 3.0",
        title[:255],
        "ASCII",
        "DATASET RECTILINEAR_GRID",
        f"DIMENSIONS {nx} {ny} {nz}",
    ]
    for name, a in zip(AXES, grid.axes):
        out.append(f"{name.upper()}_COORDINATES {a.size} double")
        out.append(_join(a, " "))
    Path(path).write_text("\n".join(out) + "\n", encoding="utf-8")


def solver_xml(grid: RectilinearGrid) -> str:
    body = "".join(
        f"<{name.upper()}Lines>{_join(a)}</{name.upper()}Lines>" for name, a in zip(AXES, grid.axes)
    )
    return f'<RectilinearGrid DeltaUnit="1" CoordSystem="0">{body}</RectilinearGrid>\n'


def write_solver_xml(grid: RectilinearGrid, path) -> None:
    Path(path).write_text(solver_xml(grid), encoding="utf-8")


def read_solver_xml(path) -> RectilinearGrid:
    import xml.etree.ElementTree as ET

    root = ET.parse(path).getroot()
    axes = [np.array([float(v) for v in root.find(f"{n.upper()}Lines").text.split(",")]) for n in AXES]
    return RectilinearGrid(*axes)


def write_sequence_csv(grid: RectilinearGrid, path) -> None:
    """Index-vs-position rows per axis, the mesh sequence curve."""
    with open(path, "w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["axis", "index", "position"])
        for name, a in zip(AXES, grid.axes):
            for i, v in enumerate(a):
                w.writerow([name, i, fmt(v)])


WRITERS = {
    "json": (".json", lambda g, r, p: write_lines_json(g, r, p)),
    "vtk": (".vtk", lambda g, r, p: write_vtk_rectilinear(g, p)),
    "solver-xml": (".xml", lambda g, r, p: write_solver_xml(g, p)),
    "csv": (".csv", lambda g, r, p: write_sequence_csv(g, p)),
}
