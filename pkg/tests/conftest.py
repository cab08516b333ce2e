import numpy as np
import pytest

from yeegrid.model import FrequencyBand
from yeegrid.scene import BoxSource, Compound, GeometryTree, Material, Shape

ACCEPTANCE_LINES = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)


def box_tree(boxes, materials=None):
    """boxes: list of (material_id, lo, hi)."""
    mids = sorted({m for m, _, _ in boxes})
    mats = materials or {m: Material(m) for m in mids}
    shapes = [Shape(f"s{i}", m, BoxSource(lo, hi)) for i, (m, lo, hi) in enumerate(boxes)]
    return GeometryTree(Compound("root", shapes), mats)


def random_boxes(rng, n_boxes=None, n_materials=None, span=0.1):
    nb = int(rng.integers(1, 11)) if n_boxes is None else n_boxes
    nm = int(rng.integers(1, 6)) if n_materials is None else n_materials
    boxes = []
    for _ in range(nb):
        lo = rng.uniform(-span, span, 3)
        size = 10 ** rng.uniform(-4, -1, 3)
        boxes.append((f"m{int(rng.integers(nm))}", lo, lo + size))
    return boxes


def random_band(rng):
    f_max = 10 ** rng.uniform(9, 10.3)
    f_min = 0.0 if rng.random() < 0.3 else f_max * rng.uniform(0.01, 1.0)
    return FrequencyBand(f_min, f_max)


def assembly_tree():
    """The compound/shape tree whose preorder is C1 C2 C3 S1 C4 C5 S2 S3 S4 C6 S5 S6 S7."""
    s = {i: Shape(f"S{i}", "air", BoxSource((i, 0, 0), (i + 0.5, 1, 1))) for i in range(1, 8)}
    c5 = Compound("C5", [s[2], s[3]])
    c4 = Compound("C4", [c5, s[4]])
    c3 = Compound("C3", [s[1]])
    c2 = Compound("C2", [c3, c4])
    c6 = Compound("C6", [s[5], s[6], s[7]])
    c1 = Compound("C1", [c2, c6])
    return GeometryTree(c1, {"air": Material("air")})


ASSEMBLY_PREORDER = ["C1", "C2", "C3", "S1", "C4", "C5", "S2", "S3", "S4", "C6", "S5", "S6", "S7"]


def assembly_document():
    def shape(i):
        return {"shape": {"id": f"S{i}", "material": f"m{i}", "box": {"min": [i, 0, 0], "max": [i + 0.5, 1, 1]}}}

    def comp(cid, *children):
        return {"compound": {"id": cid, "children": list(children)}}

    root = comp(
        "C1",
        comp("C2", comp("C3", shape(1)), comp("C4", comp("C5", shape(2), shape(3)), shape(4))),
        comp("C6", shape(5), shape(6), shape(7)),
    )
    return {"materials": [{"id": f"m{i}", "epsilon_r": 1 + i} for i in range(1, 8)], "root": root}


@pytest.fixture
def rng():
    return np.random.default_rng(20240607)
