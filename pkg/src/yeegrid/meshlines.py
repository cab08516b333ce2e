"""Mesh-line generation along one axis, and the three-axis driver.

Per axis the pipeline is::

    project -> snap -> refine edges -> fill intervals -> pad + PML -> smooth grading

Every stage only inserts lines between the ones it received, so snapped
critical coordinates survive bit for bit into the final array.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import NamedTuple, Optional

import numpy as np

from . import kernels
from .errors import EmptyGeometryError, InvalidArgumentError
from .model import (
    AXES,
    FrequencyBand,
    MeshParams,
    RectilinearGrid,
    quarter_mid_padding,
    wavelengths,
)
from .scene import dfs_shapes, fuse_by_material, load_geometries

EPS = 1e-12
# a side that still violates the grading bound against its PML after this
# many extra padding cells is left as is and reported by the audit
MAX_PAD_EXTENSIONS = 64


@dataclass(frozen=True)
class CriticalCoordinate:
    position: float
    is_material_boundary: bool = True
    source_materials: frozenset = frozenset()


@dataclass(frozen=True)
class AxisPlan:
    axis: str
    critical: tuple
    model_extent: tuple
    lambda_min: float
    padding_distance: float
    targets: dict
    n_side: int = 3
    res_fraction: float = 6.0
    pml_n: int = 8
    grading_ratio_max: float = 2.0


class Region(NamedTuple):
    lo: float
    hi: float
    kind: str  # "model" | "space" | "pml"


def _axis_index(axis) -> int:
    if isinstance(axis, str):
        try:
            return AXES.index(axis.lower())
        except ValueError:
            raise InvalidArgumentError(f"unknown axis {axis!r}") from None
    if axis not in (0, 1, 2):
        raise InvalidArgumentError(f"unknown axis {axis!r}")
    return int(axis)


def project_critical_coords(groups, axis) -> list:
    """Distinct vertex projections onto ``axis``, sorted, tagged with their materials."""
    ax = _axis_index(axis)
    if not groups:
        raise EmptyGeometryError("no geometry to project")
    values = []
    owners = []
    for gi, g in enumerate(groups):
        v = np.unique(np.asarray(g.vertices, dtype=float)[:, ax] + 0.0)
        values.append(v)
        owners.append(np.full(v.size, gi))
    values = np.concatenate(values)
    if values.size == 0:
        raise EmptyGeometryError("no vertices to project")
    owners = np.concatenate(owners)
    order = np.lexsort((owners, values))
    values, owners = values[order], owners[order]
    uniq, start = np.unique(values, return_index=True)
    bounds = list(start[1:]) + [values.size]
    out = []
    for p, a, b in zip(uniq, start, bounds):
        mats = frozenset(groups[i].material.id for i in owners[a:b])
        out.append(CriticalCoordinate(float(p), True, mats))
    return out


def snap_coordinates(coords, min_cell: float) -> list:
    """Merge coordinates closer than ``min_cell``.

    The closest adjacent pair is merged first, into the mean of all the
    original coordinates it covers, until every gap is at least ``min_cell``.
    Merged coordinates carry the union of flags and materials.
    """
    coords = list(coords)
    if not coords:
        return []
    pos = np.array([c.position for c in coords], dtype=float)
    if np.any(np.diff(pos) < 0):
        raise InvalidArgumentError("coordinates must be sorted")
    labels, centroids = kernels.merge_close(pos, float(min_cell))
    out = []
    start = 0
    for k, cpos in enumerate(centroids):
        stop = start
        while stop < len(coords) and labels[stop] == k:
            stop += 1
        members = coords[start:stop]
        if len(members) == 1:
            out.append(members[0])
        else:
            out.append(
                CriticalCoordinate(
                    float(cpos),
                    any(c.is_material_boundary for c in members),
                    frozenset().union(*(c.source_materials for c in members)),
                )
            )
        start = stop
    return out


def refinement_offsets(n_side: int, res_fraction: float, lambda_min: float,
                       min_cell: float, ratio: float = 2.0) -> np.ndarray:
    """One-sided offsets of the graded refinement pattern around a boundary."""
    if n_side <= 0:
        return np.zeros(0)
    extent = lambda_min / res_fraction
    s0 = extent * (ratio - 1.0) / (ratio**n_side - 1.0)
    s0 = max(s0, min_cell)
    return np.cumsum(s0 * ratio ** np.arange(n_side, dtype=float))


def refine_edges(coords, n_side: int, res_fraction: float, lambda_min: float,
                 min_cell: float, ratio: float = 2.0, bounds: Optional[tuple] = None) -> np.ndarray:
    """Graded lines inserted on both sides of every material-boundary coordinate.

    Spacing grows by ``ratio`` away from the boundary, spanning
    ``lambda_min / res_fraction`` per side (more if the first step is
    clamped to ``min_cell``). Lines are kept only while they stay at least
    ``min_cell / 2`` short of the midpoint to the neighbouring coordinate
    and at least ``min_cell`` inside ``bounds``.
    """
    offsets = refinement_offsets(n_side, res_fraction, lambda_min, min_cell, ratio)
    if offsets.size == 0 or not coords:
        return np.zeros(0)
    pos = np.array([c.position for c in coords], dtype=float)
    lo, hi = bounds if bounds is not None else (-math.inf, math.inf)
    inserted = []
    for i, c in enumerate(coords):
        if not c.is_material_boundary:
            continue
        p = pos[i]
        if i > 0:
            left = (p - pos[i - 1]) / 2 - min_cell / 2
        else:
            left = p - lo - min_cell
        if i + 1 < len(pos):
            right = (pos[i + 1] - p) / 2 - min_cell / 2
        else:
            right = hi - p - min_cell
        inserted.append(p - offsets[offsets <= left])
        inserted.append(p + offsets[offsets <= right])
    if not inserted:
        return np.zeros(0)
    return np.unique(np.concatenate(inserted))


def classify_regions(model_extent, padded_extent, pml_thickness: float = 0.0) -> list:
    """Tag ``padded_extent`` as model / space / pml intervals, left to right."""
    m0, m1 = (float(v) for v in model_extent)
    p0, p1 = (float(v) for v in padded_extent)
    if m0 > m1 or p0 > p1:
        raise InvalidArgumentError("extents must be given as [min, max]")
    if m0 < p0 or m1 > p1:
        raise InvalidArgumentError("model extent must lie inside the padded extent")
    if pml_thickness < 0:
        raise InvalidArgumentError("pml thickness must be >= 0")
    s0, s1 = p0 + pml_thickness, p1 - pml_thickness
    if s0 > m0 or s1 < m1:
        raise InvalidArgumentError("PML overlaps the model region")
    regions = []
    if pml_thickness > 0:
        regions.append(Region(p0, s0, "pml"))
    if s0 < m0:
        regions.append(Region(s0, m0, "space"))
    regions.append(Region(m0, m1, "model"))
    if m1 < s1:
        regions.append(Region(m1, s1, "space"))
    if pml_thickness > 0:
        regions.append(Region(s1, p1, "pml"))
    return regions


def _subdivide(lines: np.ndarray, parts: np.ndarray) -> np.ndarray:
    """Split interval i of ``lines`` into ``parts[i]`` equal pieces."""
    a = lines[:-1]
    g = np.diff(lines)
    rep = np.repeat(np.arange(a.size), parts)
    first = np.cumsum(parts) - parts
    m = np.arange(rep.size) - np.repeat(first, parts)
    out = np.empty(rep.size + 1)
    out[:-1] = a[rep] + g[rep] * (m / parts[rep])
    out[-1] = lines[-1]
    # keep the original lines exact; a + g * 0 already equals a
    return out


def interval_targets(lines, regions, targets) -> np.ndarray:
    """Per-interval max cell size: the finest target among overlapped regions."""
    lines = np.asarray(lines, dtype=float)
    a, b = lines[:-1], lines[1:]
    t = np.full(a.size, float(targets["space"]))
    for r in regions:
        size = float(targets.get(r.kind, targets["space"]))
        hit = (a < r.hi) & (b > r.lo)
        t = np.where(hit, np.minimum(t, size), t)
    return t


def fill_intervals(fixed_lines, regions, targets, min_cell: float = 0.0) -> np.ndarray:
    """Subdivide each gap into ``ceil(gap / target)`` equal cells.

    Gaps overlapping several regions use the finest target. Subdivision
    never produces cells below ``min_cell``.
    """
    lines = np.asarray(fixed_lines, dtype=float)
    if lines.size < 2:
        return lines.copy()
    if np.any(np.diff(lines) <= 0):
        raise InvalidArgumentError("fixed lines must be strictly increasing")
    g = np.diff(lines)
    t = interval_targets(lines, regions, targets)
    k = np.maximum(np.ceil(g / t * (1.0 - EPS)), 1.0)
    if min_cell > 0:
        k = np.minimum(k, np.maximum(np.floor(g / min_cell * (1.0 + EPS)), 1.0))
    return _subdivide(lines, k.astype(np.int64))


def smooth_grading(lines, r_max: float, min_cell: float = 0.0, frozen=None) -> np.ndarray:
    """Bisect intervals until neighbouring sizes differ by at most ``r_max``.

    Intervals flagged in ``frozen`` are never split; no split goes below
    ``min_cell``.
    """
    lines = np.asarray(lines, dtype=float)
    if lines.size < 3:
        return lines.copy()
    g = np.diff(lines)
    if np.any(g <= 0):
        raise InvalidArgumentError("lines must be strictly increasing")
    fz = np.zeros(g.size, dtype=np.uint8) if frozen is None else np.asarray(frozen, dtype=np.uint8)
    levels = kernels.grading_levels(g, float(r_max), float(min_cell), fz)
    return _subdivide(lines, np.left_shift(1, levels))


def pad_axis(lines, padding_distance: float, space_target: float, pml_n: int) -> np.ndarray:
    """Extend both ends by the padding distance, then append ``pml_n`` PML cells.

    The padding is split into ``ceil(padding / space_target)`` equal cells;
    PML cells are exactly ``space_target`` wide.
    """
    lines = np.asarray(lines, dtype=float)
    if lines.size == 0:
        raise InvalidArgumentError("cannot pad an empty axis")
    if padding_distance < 0 or space_target <= 0 or pml_n < 0:
        raise InvalidArgumentError("padding must be >= 0, target > 0, pml_n >= 0")
    lo, hi = lines[0], lines[-1]
    k = int(math.ceil(padding_distance / space_target * (1.0 - EPS))) if padding_distance > 0 else 0
    pad = padding_distance * (np.arange(1, k + 1) / k) if k else np.zeros(0)
    pml = padding_distance + space_target * np.arange(1, pml_n + 1)
    outward = np.concatenate([pad, pml])
    return np.concatenate([(lo - outward)[::-1], lines, hi + outward])


def _pml_cells(lo: float, hi: float, t: float, pml_n: int):
    steps = t * np.arange(1, pml_n + 1)
    return (lo - steps)[::-1], hi + steps


def _build_axis(plan: AxisPlan):
    """Returns ``(lines, snapped_positions, extensions)``."""
    if not plan.critical:
        raise EmptyGeometryError(f"no geometry on axis {plan.axis}")
    t_model, t_space, t_min = plan.targets["model"], plan.targets["space"], plan.targets["min"]
    r = plan.grading_ratio_max
    crit = snap_coordinates(plan.critical, t_min)
    pos = np.array([c.position for c in crit])
    m0, m1 = plan.model_extent
    lo = min(m0 - plan.padding_distance, pos[0] - t_min)
    hi = max(m1 + plan.padding_distance, pos[-1] + t_min)

    ins = refine_edges(crit, plan.n_side, plan.res_fraction, plan.lambda_min, t_min, r, (lo, hi))
    fixed = np.unique(np.concatenate([pos, ins, [lo, hi]]))
    regions = classify_regions((m0, m1), (lo, hi))
    targets = {"model": t_model, "space": t_space}
    n = plan.pml_n
    extensions = 0

    while True:
        core = fill_intervals(fixed, regions, targets, t_min)
        left_pml, right_pml = _pml_cells(core[0], core[-1], t_space, n)
        lines = np.concatenate([left_pml, core, right_pml])
        frozen = np.zeros(lines.size - 1, dtype=np.uint8)
        frozen[:n] = 1
        frozen[frozen.size - n:] = 1
        out = smooth_grading(lines, r, t_min, frozen)
        d = np.diff(out)
        bad_lo = n > 0 and d[n - 1] > r * (1 + EPS) * d[n]
        bad_hi = n > 0 and d[-n] > r * (1 + EPS) * d[-n - 1]
        # below 2, halving cannot bridge a padding cell and a PML cell, so widening is futile
        if not (bad_lo or bad_hi) or r < 2 or extensions >= MAX_PAD_EXTENSIONS:
            return out, pos, extensions
        # PML cells are fixed at the space target; widen the padding instead
        extensions += 1
        extra = []
        if bad_lo:
            extra.append(fixed[0] - t_space)
        if bad_hi:
            extra.append(fixed[-1] + t_space)
        fixed = np.unique(np.concatenate([fixed, extra]))


def generate_axis(plan: AxisPlan) -> np.ndarray:
    return _build_axis(plan)[0]


def plan_axes(groups, band: FrequencyBand, params: MeshParams) -> list:
    if not groups:
        raise EmptyGeometryError("scene contains no shapes")
    lam = wavelengths(band)
    padding = quarter_mid_padding(lam.lambda_min, lam.lambda_max)
    targets = params.targets(lam.lambda_min)
    plans = []
    for ax, name in enumerate(AXES):
        lo = min(float(g.extent[ax][0]) for g in groups)
        hi = max(float(g.extent[ax][1]) for g in groups)
        plans.append(
            AxisPlan(
                axis=name,
                critical=tuple(project_critical_coords(groups, ax)),
                model_extent=(lo, hi),
                lambda_min=lam.lambda_min,
                padding_distance=padding,
                targets=targets,
                n_side=params.n[ax],
                res_fraction=params.res_fraction[ax],
                pml_n=params.pml_n,
                grading_ratio_max=params.grading_ratio_max,
            )
        )
    return plans


def mesh_groups(groups, band: FrequencyBand, params: MeshParams, threads: int = 1):
    """Meshing core: fused material groups to ``(grid, report)``."""
    from .audit import audit

    plans = plan_axes(groups, band, params)
    if threads == 1:
        built = [_build_axis(p) for p in plans]
    else:
        with ThreadPoolExecutor(max_workers=min(3, threads) if threads > 0 else 3) as pool:
            built = list(pool.map(_build_axis, plans))
    grid = RectilinearGrid(
        built[0][0],
        built[1][0],
        built[2][0],
        band=band,
        params=params,
        model_extent=[p.model_extent for p in plans],
        critical=tuple(b[1] for b in built),
    )
    report = audit(grid, params, band, grid.critical)
    for plan, (_, _, ext) in zip(plans, built):
        if ext:
            report.warnings.append(
                f"axis {plan.axis}: padding widened by {ext} cell(s) to grade into the PML"
            )
    return grid, report


def generate_grid(tree, materials, band: FrequencyBand, params: MeshParams, threads: int = 1):
    """Full pipeline: tree traversal, geometry loading, fusion, meshing, audit."""
    shapes = dfs_shapes(tree)
    if not shapes:
        raise EmptyGeometryError("scene contains no shapes")
    geoms = load_geometries(shapes, threads)
    mats = materials if materials is not None else getattr(tree, "materials", None)
    groups = fuse_by_material(shapes, geoms, mats)
    return mesh_groups(groups, band, params, threads)
