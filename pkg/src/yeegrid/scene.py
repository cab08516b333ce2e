"""Scene ingestion: assembly tree, depth-first flattening, per-material fusion.

A scene is a JSON document::

    {
      "unit_scale": 1.0,
      "materials": [{"id": "fr4", "epsilon_r": 4.3, "mu_r": 1, "kind": "dielectric"}],
      "root": {"compound": {"id": "C1", "children": [
          {"shape": {"id": "S1", "material": "fr4", "box": {"min": [0, 0, 0], "max": [1, 1, 1]}}},
          {"shape": {"id": "S2", "material": "fr4", "stl": "part.stl"}}
      ]}}
    }

Sibling order is document order and is preserved by the traversal.
``unit_scale`` multiplies STL coordinates (STL carries no units); inline
boxes are always in meters.
"""

from __future__ import annotations

import json
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path
from typing import Callable, Optional, Union

import numpy as np

from .errors import (
    CycleError,
    DuplicateIdError,
    MalformedSceneError,
    MissingMeshFileError,
    NonFiniteCoordinateError,
    UnknownMaterialError,
)
from .stl import read_stl

MATERIAL_KINDS = ("dielectric", "conductor", "source-region")


@dataclass(frozen=True)
class Material:
    id: str
    epsilon_r: float = 1.0
    mu_r: float = 1.0
    kind: str = "dielectric"

    def __post_init__(self):
        if not (self.epsilon_r > 0 and self.mu_r > 0):
            raise MalformedSceneError(f"material {self.id!r}: epsilon_r and mu_r must be > 0")
        if self.kind not in MATERIAL_KINDS:
            raise MalformedSceneError(
                f"material {self.id!r}: kind must be one of {MATERIAL_KINDS}, got {self.kind!r}"
            )


@dataclass(frozen=True)
class BoxSource:
    min: tuple
    max: tuple

    def __post_init__(self):
        lo = tuple(float(v) for v in self.min)
        hi = tuple(float(v) for v in self.max)
        if len(lo) != 3 or len(hi) != 3:
            raise MalformedSceneError("box corners need 3 coordinates")
        if not all(map(math.isfinite, lo + hi)):
            raise NonFiniteCoordinateError("box corner is not finite")
        if any(a > b for a, b in zip(lo, hi)):
            raise MalformedSceneError(f"box min {lo} exceeds max {hi}")
        object.__setattr__(self, "min", lo)
        object.__setattr__(self, "max", hi)


@dataclass(frozen=True)
class StlSource:
    path: Path
    scale: float = 1.0


@dataclass(frozen=True)
class Shape:
    id: str
    material_id: str
    source: Union[BoxSource, StlSource]


@dataclass(eq=False)
class Compound:
    id: str
    children: list = field(default_factory=list)


Node = Union[Compound, Shape]


def _walk(root: Node, visit: Optional[Callable[[Node], None]] = None):
    """Preorder depth-first walk yielding every node; raises on cycles."""
    # (node, exiting) pairs; the on-path set detects a compound reachable from itself
    stack = [(root, False)]
    on_path: set = set()
    while stack:
        node, exiting = stack.pop()
        if exiting:
            on_path.discard(id(node))
            continue
        if visit is not None:
            visit(node)
        yield node
        if isinstance(node, Compound):
            if id(node) in on_path:
                raise CycleError(f"compound {node.id!r} contains itself")
            on_path.add(id(node))
            stack.append((node, True))
            for child in reversed(node.children):
                if isinstance(child, Compound) and id(child) in on_path:
                    raise CycleError(f"compound {child.id!r} contains itself")
                stack.append((child, False))


@dataclass(eq=False)
class GeometryTree:
    root: Node
    materials: dict = field(default_factory=dict)

    def __post_init__(self):
        validate_tree(self)

    def nodes(self, visit=None):
        return _walk(self.root, visit)


def validate_tree(tree: GeometryTree) -> None:
    seen: set = set()
    for node in _walk(tree.root):
        if isinstance(node, Shape):
            if node.id in seen:
                raise DuplicateIdError(f"shape id {node.id!r} is not unique")
            seen.add(node.id)
            if tree.materials and node.material_id not in tree.materials:
                raise UnknownMaterialError(
                    f"shape {node.id!r} references unknown material {node.material_id!r}"
                )
        elif not isinstance(node, Compound):
            raise MalformedSceneError(f"unexpected node type {type(node).__name__}")


def dfs_shapes(tree: GeometryTree, visit: Optional[Callable[[Node], None]] = None) -> list:
    """Leaf shapes in depth-first preorder; compounds are visited but dropped.

    ``visit`` is called once for every node (compound or shape) reached.
    """
    return [node for node in _walk(tree.root, visit) if isinstance(node, Shape)]


# --- scene document -------------------------------------------------------


def _require(obj, key, where):
    if not isinstance(obj, dict) or key not in obj:
        raise MalformedSceneError(f"{where}: missing key {key!r}")
    return obj[key]


def _parse_node(doc, base: Path, unit_scale: float, where: str) -> Node:
    if not isinstance(doc, dict) or len(doc) != 1:
        raise MalformedSceneError(f"{where}: node must be an object with one key 'compound' or 'shape'")
    ((kind, body),) = doc.items()
    if kind == "compound":
        cid = str(_require(body, "id", where))
        children = body.get("children", [])
        if not isinstance(children, list):
            raise MalformedSceneError(f"{where}/{cid}: children must be a list")
        return Compound(cid, [_parse_node(c, base, unit_scale, f"{where}/{cid}") for c in children])
    if kind == "shape":
        sid = str(_require(body, "id", where))
        mat = str(_require(body, "material", f"{where}/{sid}"))
        if ("box" in body) == ("stl" in body):
            raise MalformedSceneError(f"{where}/{sid}: shape needs exactly one of 'box' or 'stl'")
        if "box" in body:
            box = body["box"]
            try:
                src = BoxSource(_require(box, "min", sid), _require(box, "max", sid))
            except (TypeError, ValueError) as exc:
                raise MalformedSceneError(f"{where}/{sid}: bad box: {exc}") from None
        else:
            path = (base / str(body["stl"])).resolve()
            if not path.is_file():
                raise MissingMeshFileError(f"{where}/{sid}: mesh file not found: {path}")
            src = StlSource(path, unit_scale)
        return Shape(sid, mat, src)
    raise MalformedSceneError(f"{where}: unknown node kind {kind!r}")


def load_scene_document(doc: dict, base_dir=".") -> GeometryTree:
    """Build a tree from an already-decoded scene document."""
    if not isinstance(doc, dict):
        raise MalformedSceneError("scene document must be an object")
    unit_scale = doc.get("unit_scale", 1.0)
    if not isinstance(unit_scale, (int, float)) or not unit_scale > 0:
        raise MalformedSceneError(f"unit_scale must be a positive number, got {unit_scale!r}")
    materials = {}
    for entry in doc.get("materials", []):
        mid = str(_require(entry, "id", "materials"))
        if mid in materials:
            raise DuplicateIdError(f"material id {mid!r} is not unique")
        try:
            materials[mid] = Material(
                mid,
                float(entry.get("epsilon_r", 1.0)),
                float(entry.get("mu_r", 1.0)),
                str(entry.get("kind", "dielectric")),
            )
        except (TypeError, ValueError) as exc:
            raise MalformedSceneError(f"material {mid!r}: {exc}") from None
    root = _parse_node(_require(doc, "root", "scene"), Path(base_dir), float(unit_scale), "root")
    for node in _walk(root):
        if isinstance(node, Shape) and node.material_id not in materials:
            raise UnknownMaterialError(
                f"shape {node.id!r} references unknown material {node.material_id!r}"
            )
    return GeometryTree(root, materials)


def parse_scene(path) -> tuple:
    """Read a scene file; returns ``(tree, materials)``."""
    path = Path(path)
    try:
        doc = json.loads(path.read_text(encoding="utf-8"))
    except FileNotFoundError:
        raise
    except (OSError, UnicodeDecodeError, json.JSONDecodeError) as exc:
        raise MalformedSceneError(f"{path}: {exc}") from None
    tree = load_scene_document(doc, path.parent)
    return tree, tree.materials


# --- geometry -------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class ShapeGeometry:
    vertices: np.ndarray  # (n, 3), unique rows, lexicographically sorted
    extent: np.ndarray  # (3, 2): [min, max] per axis

    @classmethod
    def from_points(cls, points) -> "ShapeGeometry":
        pts = np.asarray(points, dtype=np.float64).reshape(-1, 3)
        if pts.shape[0] == 0:
            raise MalformedSceneError("geometry has no vertices")
        if not np.isfinite(pts).all():
            raise NonFiniteCoordinateError("geometry contains non-finite coordinates")
        # + 0.0 folds -0.0 onto 0.0 so equal values merge
        verts = np.unique(pts + 0.0, axis=0)
        verts.flags.writeable = False
        extent = np.stack([verts.min(axis=0), verts.max(axis=0)], axis=1)
        extent.flags.writeable = False
        return cls(verts, extent)


def load_shape_geometry(shape: Shape) -> ShapeGeometry:
    src = shape.source
    if isinstance(src, BoxSource):
        lo, hi = src.min, src.max
        corners = [[hi[i] if (k >> i) & 1 else lo[i] for i in range(3)] for k in range(8)]
        return ShapeGeometry.from_points(corners)
    tris = read_stl(src.path)
    return ShapeGeometry.from_points(tris.reshape(-1, 3) * src.scale)


def load_geometries(shapes, threads: int = 1) -> list:
    if threads == 1 or len(shapes) < 2:
        return [load_shape_geometry(s) for s in shapes]
    with ThreadPoolExecutor(max_workers=threads or None) as pool:
        return list(pool.map(load_shape_geometry, shapes))


@dataclass(frozen=True, eq=False)
class MaterialGroup:
    material: Material
    vertices: np.ndarray
    extent: np.ndarray
    shape_ids: tuple = ()


def fuse_by_material(shapes, geometries, materials: Optional[dict] = None) -> list:
    """One group per distinct material, in first-encounter order.

    The group's vertex set is the union of its members' vertex sets. This is
    a vertex-level stand-in for a solid boolean union: vertices on faces
    shared between same-material solids are kept.
    """
    order: dict = {}
    for shape, geom in zip(shapes, geometries, strict=True):
        order.setdefault(shape.material_id, []).append((shape.id, geom.vertices))
    groups = []
    for mid, members in order.items():
        mat = (materials or {}).get(mid) or Material(mid)
        merged = ShapeGeometry.from_points(np.concatenate([v for _, v in members]))
        groups.append(MaterialGroup(mat, merged.vertices, merged.extent, tuple(s for s, _ in members)))
    return groups

