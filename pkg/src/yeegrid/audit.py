"""Independent verification of a rectilinear grid against the sizing rules.

Rules, each checked per axis:

MONOTONE          lines strictly increasing
MIN_CELL          no cell below lambda_min / min_cell_global
MODEL_MAX         cells touching the model extent at most lambda_min / max_cell_model
SPACE_MAX         all other cells at most lambda_min / max_cell_space
CRITICAL_ON_LINE  every snapped critical coordinate is a mesh line, bit for bit
PADDING           the PML starts at least the quarter-mid-wavelength distance
                  outside the model, and the domain reaches past it by pml_n cells
RATIO             neighbouring cells differ by at most grading_ratio_max
                  (a warning instead when the larger cell cannot be halved
                  without dropping below the minimum cell)
PML_COUNT         the outermost pml_n cells per side are uniform at the space target

Findings are returned as data; nothing here raises on a bad grid.
"""

from __future__ import annotations

import math

import numpy as np

from .errors import InvalidArgumentError
from .model import (
    AXES,
    FrequencyBand,
    GridReport,
    MeshParams,
    RectilinearGrid,
    Violation,
    cfl_timestep,
    quarter_mid_padding,
    wavelengths,
)

RULES = (
    "MONOTONE",
    "MIN_CELL",
    "MODEL_MAX",
    "SPACE_MAX",
    "CRITICAL_ON_LINE",
    "PADDING",
    "RATIO",
    "PML_COUNT",
)

TOL = 1e-9


def cell_counts(grid: RectilinearGrid):
    """Cells per axis (lines - 1) and their product."""
    cells = tuple(int(a.size) - 1 for a in grid.axes)
    return cells, math.prod(cells)


def _abs_slack(lines: np.ndarray) -> float:
    # rounding allowance for coordinates far from the origin
    return 8 * float(np.spacing(np.max(np.abs(lines))))


def _audit_axis(name, lines, extent, critical, params, targets, padding, out, warnings):
    d = np.diff(lines)
    bad = np.flatnonzero(d <= 0)
    for i in bad:
        out.append(Violation("MONOTONE", name, int(i), f"line {i + 1} does not exceed line {i}", float(d[i])))
    if bad.size:
        return
    slack = _abs_slack(lines)
    t_min, t_model, t_space = targets["min"], targets["model"], targets["space"]

    for i in np.flatnonzero(d < t_min * (1 - TOL) - slack):
        out.append(Violation("MIN_CELL", name, int(i), f"cell {d[i]:.6g} m below minimum {t_min:.6g} m", float(d[i])))

    m0, m1 = extent
    a, b = lines[:-1], lines[1:]
    in_model = (a < m1) & (b > m0)
    limit = np.where(in_model, t_model, t_space)
    for i in np.flatnonzero(d > limit * (1 + TOL) + slack):
        rule = "MODEL_MAX" if in_model[i] else "SPACE_MAX"
        out.append(Violation(rule, name, int(i), f"cell {d[i]:.6g} m exceeds {limit[i]:.6g} m", float(d[i])))

    if critical is not None:
        crit = np.asarray(critical, dtype=float)
        for i in np.flatnonzero(~np.isin(crit, lines)):
            out.append(Violation("CRITICAL_ON_LINE", name, int(i), f"critical coordinate {crit[i]!r} is not a line", float(crit[i])))

    n = params.pml_n
    r = params.grading_ratio_max
    if lines.size < 2 * n + 2:
        out.append(Violation("PML_COUNT", name, 0, f"{lines.size} lines cannot hold {n} PML cells per side", float(lines.size)))
    else:
        for i in list(range(n)) + list(range(d.size - n, d.size)):
            if abs(d[i] - t_space) > TOL * t_space + slack:
                out.append(Violation("PML_COUNT", name, int(i), f"PML cell {d[i]:.6g} m differs from {t_space:.6g} m", float(d[i])))
        reach = padding + n * t_space
        tol = TOL * reach + slack
        if lines[n] > m0 - padding + tol or lines[0] > m0 - reach + tol:
            out.append(Violation("PADDING", name, 0, f"low side extends {m0 - lines[0]:.6g} m past the model, need {reach:.6g} m", float(m0 - lines[0])))
        if lines[-1 - n] < m1 + padding - tol or lines[-1] < m1 + reach - tol:
            out.append(Violation("PADDING", name, int(lines.size - 1), f"high side extends {lines[-1] - m1:.6g} m past the model, need {reach:.6g} m", float(lines[-1] - m1)))

    if d.size >= 2:
        big = np.maximum(d[:-1], d[1:])
        ratio = big / np.minimum(d[:-1], d[1:])
        for i in np.flatnonzero(ratio > r * (1 + TOL)):
            if big[i] < 2 * t_min * (1 - TOL):
                warnings.append(f"RATIO axis {name} interval {i}: {ratio[i]:.4g} > {r:g}, floored at the minimum cell")
            else:
                out.append(Violation("RATIO", name, int(i), f"adjacent ratio {ratio[i]:.4g} exceeds {r:g}", float(ratio[i])))


def param_warnings(params: MeshParams) -> list:
    w = []
    if not params.max_cell_model > params.max_cell_space:
        w.append(
            f"max_cell_model ({params.max_cell_model:g}) <= max_cell_space ({params.max_cell_space:g}):"
            " cells inside the model are not finer than in free space"
        )
    if params.min_cell_global < params.max_cell_model:
        w.append(
            f"min_cell_global ({params.min_cell_global:g}) < max_cell_model ({params.max_cell_model:g}):"
            " the minimum cell is larger than the model cell target"
        )
    elif params.min_cell_global < 2 * params.max_cell_model:
        w.append(
            f"min_cell_global ({params.min_cell_global:g}) < 2 x max_cell_model:"
            " minimum and maximum cell sizes may not both be satisfiable"
        )
    if params.grading_ratio_max < 2:
        w.append(
            f"grading_ratio_max ({params.grading_ratio_max:g}) < 2: smoothing halves cells,"
            " so the ratio bound cannot always be met"
        )
    return w


def audit(grid: RectilinearGrid, params: MeshParams, band: FrequencyBand, critical=None) -> GridReport:
    """Check every rule on every axis and summarise the grid."""
    lam = wavelengths(band)
    padding = quarter_mid_padding(lam.lambda_min, lam.lambda_max)
    targets = params.targets(lam.lambda_min)
    if critical is None:
        critical = grid.critical
    if grid.model_extent is not None:
        extents = [tuple(e) for e in grid.model_extent]
    elif critical is not None:
        extents = [(float(np.min(c)), float(np.max(c))) for c in critical]
    else:
        raise InvalidArgumentError("audit needs the model extent or critical coordinates")

    violations: list = []
    warnings = param_warnings(params)
    for ax, name in enumerate(AXES):
        crit = None if critical is None else critical[ax]
        _audit_axis(name, grid.axes[ax], extents[ax], crit, params, targets, padding, violations, warnings)

    cells, total = cell_counts(grid)
    deltas = [np.diff(a) for a in grid.axes]
    min_d = tuple(float(d.min()) for d in deltas)
    max_d = tuple(float(d.max()) for d in deltas)
    ratios = []
    for d in deltas:
        if d.size >= 2 and np.all(d > 0):
            ratios.append(float(np.max(np.maximum(d[:-1], d[1:]) / np.minimum(d[:-1], d[1:]))))
        else:
            ratios.append(1.0 if d.size < 2 else float("nan"))
    cfl = cfl_timestep(*min_d, c=band.c) if all(v > 0 for v in min_d) else float("nan")
    return GridReport(
        cells_per_axis=cells,
        total_cells=total,
        min_delta=min_d,
        max_delta=max_d,
        max_adjacent_ratio=tuple(ratios),
        cfl_dt=cfl,
        violations=violations,
        warnings=warnings,
    )
