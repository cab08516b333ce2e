"""Minimal STL reader (ASCII and binary). Normals are ignored."""

from __future__ import annotations

import re
import struct
from pathlib import Path

import numpy as np

from .errors import EmptyMeshError, NonFiniteCoordinateError, StlError, TruncatedStlError

_BINARY_RECORD = np.dtype(
    [("normal", "<f4", (3,)), ("vertices", "<f4", (3, 3)), ("attr", "<u2")]
)
assert _BINARY_RECORD.itemsize == 50

_VERTEX = re.compile(rb"vertex\s+(\S+)\s+(\S+)\s+(\S+)")


def _is_binary(data: bytes) -> bool:
    if len(data) < 84:
        return not data.lstrip().startswith(b"solid")
    (count,) = struct.unpack_from("<I", data, 80)
    if len(data) == 84 + 50 * count:
        return True
    # exporters sometimes write "solid" into binary headers; trust the size check first
    return not data.lstrip().startswith(b"solid")


def _parse_binary(data: bytes) -> np.ndarray:
    if len(data) < 84:
        raise TruncatedStlError(f"binary STL shorter than its 84-byte header ({len(data)} bytes)")
    (count,) = struct.unpack_from("<I", data, 80)
    need = 84 + 50 * count
    if len(data) < need:
        raise TruncatedStlError(f"binary STL declares {count} triangles but holds {len(data)} of {need} bytes")
    records = np.frombuffer(data, dtype=_BINARY_RECORD, count=count, offset=84)
    return records["vertices"].astype(np.float64)


def _parse_ascii(data: bytes) -> np.ndarray:
    try:
        coords = [tuple(float(v) for v in m.groups()) for m in _VERTEX.finditer(data)]
    except ValueError as exc:
        raise StlError(f"bad number in ASCII STL: {exc}") from None
    if len(coords) % 3:
        raise TruncatedStlError(f"ASCII STL has {len(coords)} vertices, not a multiple of 3")
    if coords and b"endsolid" not in data:
        raise TruncatedStlError("ASCII STL is missing 'endsolid'")
    return np.asarray(coords, dtype=np.float64).reshape(-1, 3, 3)


def parse_stl(data: bytes) -> np.ndarray:
    """Return triangles as a ``(n, 3, 3)`` float64 array."""
    tris = _parse_binary(data) if _is_binary(data) else _parse_ascii(data)
    if tris.shape[0] == 0:
        raise EmptyMeshError("STL contains no triangles")
    if not np.isfinite(tris).all():
        raise NonFiniteCoordinateError("STL contains non-finite coordinates")
    return tris


def read_stl(path) -> np.ndarray:
    path = Path(path)
    try:
        data = path.read_bytes()
    except OSError as exc:
        raise StlError(f"cannot read {path}: {exc}") from exc
    try:
        return parse_stl(data)
    except StlError as exc:
        raise type(exc)(f"{path}: {exc}") from None


def write_stl_binary(path, triangles, header: bytes = b"yeegrid") -> None:
    tris = np.asarray(triangles, dtype=np.float64).reshape(-1, 3, 3)
    rec = np.zeros(tris.shape[0], dtype=_BINARY_RECORD)
    rec["vertices"] = tris
    e1 = tris[:, 1] - tris[:, 0]
    e2 = tris[:, 2] - tris[:, 0]
    nrm = np.cross(e1, e2)
    length = np.linalg.norm(nrm, axis=1, keepdims=True)
    rec["normal"] = np.divide(nrm, length, out=np.zeros_like(nrm), where=length > 0)
    with open(path, "wb") as fh:
        fh.write(header[:80].ljust(80, b" "))
        fh.write(struct.pack("<I", tris.shape[0]))
        fh.write(rec.tobytes())


def write_stl_ascii(path, triangles, name: str = "solid") -> None:
    tris = np.asarray(triangles, dtype=np.float64).reshape(-1, 3, 3)
    lines = [f"solid {name}"]
    for tri in tris:
        lines.append("  facet normal 0 0 0")
        lines.append("    outer loop")
        for v in tri:
            lines.append("      vertex {:.17g} {:.17g} {:.17g}".format(*v))
        lines.append("    endloop")
        lines.append("  endfacet")
    lines.append(f"endsolid {name}")
    Path(path).write_text("\n".join(lines) + "\n", encoding="utf-8")


def box_triangles(lo, hi) -> np.ndarray:
    """12 triangles of an axis-aligned box."""
    lo = np.asarray(lo, dtype=float)
    hi = np.asarray(hi, dtype=float)
    c = np.array([[hi[i] if (k >> i) & 1 else lo[i] for i in range(3)] for k in range(8)])
    faces = [
        (0, 2, 1), (1, 2, 3),  # z-
        (4, 5, 6), (5, 7, 6),  # z+
        (0, 1, 4), (1, 5, 4),  # y-
        (2, 6, 3), (3, 6, 7),  # y+
        (0, 4, 2), (2, 4, 6),  # x-
        (1, 3, 5), (3, 7, 5),  # x+
    ]
    return c[np.array(faces)]
