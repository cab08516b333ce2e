"""Non-uniform rectilinear mesh generation for FDTD electromagnetic solvers."""

from pathlib import Path

from .audit import audit, cell_counts
from .errors import MeshError
from .kernels import BACKEND as KERNEL_BACKEND
from .meshlines import generate_axis, generate_grid, mesh_groups
from .model import (
    FrequencyBand,
    GridReport,
    MeshParams,
    RectilinearGrid,
    cfl_timestep,
    quarter_mid_padding,
    target_cell_size,
    wavelengths,
)
from .scene import dfs_shapes, fuse_by_material, load_shape_geometry, parse_scene

EXAMPLE_SCENE = Path(__file__).parent / "data" / "corner_reflector" / "scene.json"

__all__ = [
    "EXAMPLE_SCENE",
    "KERNEL_BACKEND",
    "FrequencyBand",
    "GridReport",
    "MeshError",
    "MeshParams",
    "RectilinearGrid",
    "audit",
    "cell_counts",
    "cfl_timestep",
    "dfs_shapes",
    "fuse_by_material",
    "generate_axis",
    "generate_grid",
    "load_shape_geometry",
    "mesh_groups",
    "parse_scene",
    "quarter_mid_padding",
    "target_cell_size",
    "wavelengths",
]
