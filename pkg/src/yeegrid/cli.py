"""Command-line front end.

Exit status: 0 when the grid passes every audit rule, 2 when the audit
reports violations, 1 on bad input or any other error.
"""

from __future__ import annotations

import argparse
import json
import sys
import time
from pathlib import Path

from . import kernels
from .errors import MeshError
from .export import WRITERS
from .meshlines import mesh_groups
from .model import AXES, PML_N_RANGE, FrequencyBand, MeshParams
from .scene import dfs_shapes, fuse_by_material, load_geometries, parse_scene

DEFAULTS = {
    "f_min": 0.0,
    "max_cell_model": 40.0,
    "max_cell_space": 30.0,
    "min_cell_global": 300.0,
    "n": (3, 3, 3),
    "res_fraction": (6.0, 6.0, 6.0),
    "pml_n": 8,
    "grading_ratio_max": 2.0,
    "format": ["json"],
    "report": "text",
    "threads": 0,
}


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(f"{self.prog}: error: {message}\n{self.format_usage()}")


def _triple(text, cast):
    parts = text.split(",") if isinstance(text, str) else list(text)
    if len(parts) == 1:
        parts = parts * 3
    if len(parts) != 3:
        raise argparse.ArgumentTypeError(f"expected x,y,z or a single value, got {text!r}")
    try:
        return tuple(cast(p) for p in parts)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(
        prog="yeegrid",
        description=(
            "Generate a non-uniform rectilinear FDTD mesh from a scene file. "
            "Cell-size options are fractions of the shortest excitation wavelength "
            "lambda_min = c / f_max: a value F means cells of lambda_min / F."
        ),
    )
    p.add_argument("--scene", help="scene JSON file (required unless given in --config)")
    p.add_argument("--config", help="JSON file with option defaults; keys are long flag names. Flags win.")
    p.add_argument("--f-min", type=float, help="lowest excitation frequency in Hz; 0 means the band includes DC (default: 0)")
    p.add_argument("--f-max", type=float, help="highest excitation frequency in Hz (required)")
    p.add_argument("--max-cell-model", type=float,
                   help="model cells at most lambda_min / value (default: 40)")
    p.add_argument("--max-cell-space", type=float,
                   help="free-space and PML cells at most lambda_min / value (default: 30)")
    p.add_argument("--min-cell-global", type=float,
                   help="no cell smaller than lambda_min / value anywhere (default: 300)")
    p.add_argument("--n", type=lambda s: _triple(s, int), metavar="X,Y,Z",
                   help="refinement lines per side of each material boundary, per axis (default: 3,3,3)")
    p.add_argument("--res-fraction", type=lambda s: _triple(s, float), metavar="X,Y,Z",
                   help="refinement window per side is lambda_min / value, per axis (default: 6,6,6)")
    p.add_argument("--pml-n", type=int,
                   help=f"PML cells appended per side, in [{PML_N_RANGE[0]}, {PML_N_RANGE[1]}] (default: 8)")
    p.add_argument("--grading-ratio-max", type=float,
                   help="largest allowed ratio between neighbouring cells (default: 2.0)")
    p.add_argument("--out", help="output path; with several formats, used as a stem and suffixed per format")
    p.add_argument("--format", action="append", choices=sorted(WRITERS),
                   help="output format, repeatable (default: json)")
    p.add_argument("--report", choices=["text", "json"], help="report printed to stdout (default: text)")
    p.add_argument("--threads", type=int, help="worker threads, 0 = auto (default: 0)")
    return p


def _load_config(path) -> dict:
    try:
        doc = json.loads(Path(path).read_text(encoding="utf-8"))
    except (OSError, json.JSONDecodeError) as exc:
        raise UsageError(f"cannot read config {path}: {exc}") from None
    if not isinstance(doc, dict):
        raise UsageError(f"config {path} must be a JSON object")
    out = {}
    for key, value in doc.items():
        k = key.lstrip("-").replace("-", "_")
        if k == "n":
            value = _triple(value, int)
        elif k == "res_fraction":
            value = _triple(value, float)
        elif k == "format" and isinstance(value, str):
            value = [value]
        out[k] = value
    return out


def resolve_options(argv) -> dict:
    args = build_parser().parse_args(argv)
    opts = dict(DEFAULTS)
    if args.config:
        cfg = _load_config(args.config)
        unknown = set(cfg) - set(vars(args))
        if unknown:
            raise UsageError(f"unknown config keys: {', '.join(sorted(unknown))}")
        opts.update(cfg)
    opts.update({k: v for k, v in vars(args).items() if v is not None})
    if not opts.get("scene"):
        raise UsageError("--scene is required")
    if opts.get("f_max") is None:
        raise UsageError("--f-max is required")
    if opts.get("format"):
        opts["format"] = list(dict.fromkeys(opts["format"]))
    return opts


def output_paths(out, formats) -> dict:
    if not out:
        return {}
    out = Path(out)
    if len(formats) == 1:
        return {formats[0]: out}
    return {f: out.with_suffix(WRITERS[f][0]) for f in formats}


def format_report(report, params, band, timings) -> str:
    lines = [
        f"parameters: max_cell_model={params.max_cell_model:g} max_cell_space={params.max_cell_space:g} "
        f"min_cell_global={params.min_cell_global:g} n={list(params.n)} "
        f"res_fraction={[float(f) for f in params.res_fraction]} pml_n={params.pml_n} "
        f"grading_ratio_max={params.grading_ratio_max:g}",
        f"band: f_min={band.f_min:g} Hz f_max={band.f_max:g} Hz",
        "cells: " + " x ".join(str(c) for c in report.cells_per_axis) + f" = {report.total_cells:,}",
    ]
    for ax, name in enumerate(AXES):
        lines.append(
            f"  {name}: min delta {report.min_delta[ax]:.6g} m, max delta {report.max_delta[ax]:.6g} m, "
            f"max ratio {report.max_adjacent_ratio[ax]:.4g}"
        )
    lines.append(f"CFL timestep bound: {report.cfl_dt:.6g} s")
    lines.append(
        f"time: ingestion {timings['ingestion']:.3f} s, meshing {timings['meshing']:.3f} s "
        f"(kernels: {kernels.BACKEND})"
    )
    for w in report.warnings:
        lines.append(f"warning: {w}")
    if report.violations:
        lines.append(f"violations: {len(report.violations)}")
        for v in report.violations:
            lines.append(f"  {v.rule} axis {v.axis} index {v.index}: {v.message}")
    else:
        lines.append("audit: all rules pass")
    return "\n".join(lines)


def run(argv=None, stdout=None, stderr=None) -> int:
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    try:
        opts = resolve_options(argv)
    except UsageError as exc:
        print(str(exc).rstrip(), file=stderr)
        return 1
    except SystemExit as exc:  # --help
        return int(exc.code or 0)
    try:
        band = FrequencyBand(float(opts["f_min"]), float(opts["f_max"]))
        params = MeshParams(
            max_cell_model=float(opts["max_cell_model"]),
            max_cell_space=float(opts["max_cell_space"]),
            min_cell_global=float(opts["min_cell_global"]),
            n=opts["n"],
            res_fraction=opts["res_fraction"],
            pml_n=opts["pml_n"],
            grading_ratio_max=float(opts["grading_ratio_max"]),
        )
        threads = int(opts["threads"])
        if threads < 0:
            raise UsageError("--threads must be >= 0")

        t0 = time.perf_counter()
        tree, materials = parse_scene(opts["scene"])
        shapes = dfs_shapes(tree)
        groups = fuse_by_material(shapes, load_geometries(shapes, threads), materials)
        t1 = time.perf_counter()
        grid, report = mesh_groups(groups, band, params, threads)
        t2 = time.perf_counter()
        timings = {"ingestion": t1 - t0, "meshing": t2 - t1}

        for fmt_name, path in output_paths(opts.get("out"), opts["format"]).items():
            WRITERS[fmt_name][1](grid, report, path)
    except (MeshError, UsageError, OSError, ValueError) as exc:
        print(f"yeegrid: error: {exc}", file=stderr)
        return 1

    if opts["report"] == "json":
        doc = report.to_dict()
        doc["parameters"] = params.to_dict()
        doc["band"] = {"f_min": band.f_min, "f_max": band.f_max}
        doc["timings"] = timings
        print(json.dumps(doc, indent=2), file=stdout)
    else:
        print(format_report(report, params, band, timings), file=stdout)
    return 2 if report.violations else 0


def main():
    sys.exit(run())


if __name__ == "__main__":
    main()
