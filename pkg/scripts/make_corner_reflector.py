"""Regenerate the packaged corner-reflector example scene.

A 90-degree corner reflector (two tilted copper plates, written as binary
STL) fed by a half-wave dipole for the 2.4 GHz band, with a PTFE support.
"""

import json
from pathlib import Path

import numpy as np

from yeegrid.stl import box_triangles, write_stl_binary

OUT = Path(__file__).resolve().parents[1] / "src" / "yeegrid" / "data" / "corner_reflector"

PLATE_LEN = 0.120
PLATE_HEIGHT = 0.140
PLATE_T = 0.001


def plate(angle_deg):
    tris = box_triangles([0.0, -PLATE_T / 2, -PLATE_HEIGHT / 2], [PLATE_LEN, PLATE_T / 2, PLATE_HEIGHT / 2])
    a = np.radians(angle_deg)
    rot = np.array([[np.cos(a), -np.sin(a), 0.0], [np.sin(a), np.cos(a), 0.0], [0.0, 0.0, 1.0]])
    # round to 1 um so the STL float32 storage is the only quantisation
    return np.round(tris @ rot.T, 6)


def box(lo, hi):
    return {"min": lo, "max": hi}


def main():
    OUT.mkdir(parents=True, exist_ok=True)
    write_stl_binary(OUT / "plate_upper.stl", plate(45.0), b"corner reflector upper plate")
    write_stl_binary(OUT / "plate_lower.stl", plate(-45.0), b"corner reflector lower plate")
    xd = 0.0625  # half a wavelength at 2.4 GHz from the apex
    w = 0.0005
    scene = {
        "unit_scale": 1.0,
        "materials": [
            {"id": "copper", "epsilon_r": 1.0, "mu_r": 1.0, "kind": "conductor"},
            {"id": "ptfe", "epsilon_r": 2.1, "mu_r": 1.0, "kind": "dielectric"},
            {"id": "feed", "epsilon_r": 1.0, "mu_r": 1.0, "kind": "source-region"},
        ],
        "root": {"compound": {"id": "assembly", "children": [
            {"compound": {"id": "reflector", "children": [
                {"shape": {"id": "plate_upper", "material": "copper", "stl": "plate_upper.stl"}},
                {"shape": {"id": "plate_lower", "material": "copper", "stl": "plate_lower.stl"}},
            ]}},
            {"compound": {"id": "feed", "children": [
                {"compound": {"id": "dipole", "children": [
                    {"shape": {"id": "arm_top", "material": "copper",
                               "box": box([xd - w, -w, 0.001], [xd + w, w, 0.030])}},
                    {"shape": {"id": "arm_bottom", "material": "copper",
                               "box": box([xd - w, -w, -0.030], [xd + w, w, -0.001])}},
                ]}},
                {"shape": {"id": "gap", "material": "feed",
                           "box": box([xd - w, -w, -0.001], [xd + w, w, 0.001])}},
            ]}},
            {"shape": {"id": "support", "material": "ptfe",
                       "box": box([0.004, -0.002, -0.036], [xd + 0.004, 0.002, -0.032])}},
        ]}},
    }
    (OUT / "scene.json").write_text(json.dumps(scene, indent=2) + "\n", encoding="utf-8")
    print(f"wrote {OUT}")


if __name__ == "__main__":
    main()
