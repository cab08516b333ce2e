import numpy as np
import pytest

from yeegrid.audit import RULES, audit, cell_counts, param_warnings
from yeegrid.meshlines import generate_grid
from yeegrid.model import FrequencyBand, MeshParams, RectilinearGrid, cfl_timestep, wavelengths

from conftest import box_tree

BAND = FrequencyBand(0, 4e9)


@pytest.fixture
def meshed():
    tree = box_tree([("a", (0, 0, 0), (0.03, 0.02, 0.01)), ("b", (0.01, 0.005, 0.01), (0.02, 0.015, 0.0116))])
    return generate_grid(tree, None, BAND, MeshParams())


def with_axis(grid, ax, lines):
    axes = list(grid.axes)
    axes[ax] = lines
    return RectilinearGrid(*axes, band=grid.band, params=grid.params, model_extent=grid.model_extent, critical=grid.critical)


def test_rule_names():
    assert RULES == ("MONOTONE", "MIN_CELL", "MODEL_MAX", "SPACE_MAX", "CRITICAL_ON_LINE", "PADDING", "RATIO", "PML_COUNT")


def test_clean_grid(meshed):
    grid, report = meshed
    assert report.ok and report.violations == []


def test_min_cell_violation_located(meshed):
    grid, _ = meshed
    t_min = MeshParams().targets(wavelengths(BAND).lambda_min)["min"]
    y = np.array(grid.y)
    k = y.size // 2
    y = np.insert(y, k + 1, y[k] + t_min / 10)
    report = audit(with_axis(grid, 1, y), MeshParams(), BAND)
    hits = [v for v in report.violations if v.rule == "MIN_CELL"]
    assert [(v.axis, v.index) for v in hits] == [("y", k)]


def test_non_monotone(meshed):
    grid, _ = meshed
    x = np.array(grid.x)
    x[5], x[6] = x[6], x[5]
    report = audit(with_axis(grid, 0, x), MeshParams(), BAND)
    assert any(v.rule == "MONOTONE" and v.axis == "x" and v.index == 5 for v in report.violations)


def test_missing_critical_line(meshed):
    grid, _ = meshed
    crit = grid.critical
    z = np.array(grid.z)
    z = z[~np.isin(z, crit[2][:1])]
    report = audit(with_axis(grid, 2, z), MeshParams(), BAND)
    assert any(v.rule == "CRITICAL_ON_LINE" and v.axis == "z" for v in report.violations)


def test_coarse_model_cell(meshed):
    grid, _ = meshed
    lo, hi = grid.model_extent[0]
    x = np.array(grid.x)
    inside = (x > lo) & (x < hi)
    report = audit(with_axis(grid, 0, x[~inside]), MeshParams(), BAND)
    assert any(v.rule == "MODEL_MAX" for v in report.violations)


def test_pml_and_padding_checked(meshed):
    grid, _ = meshed
    report = audit(with_axis(grid, 0, np.array(grid.x)[3:]), MeshParams(), BAND)
    rules = {v.rule for v in report.violations}
    assert "PADDING" in rules


def test_pml_count_checked(meshed):
    grid, _ = meshed
    x = np.array(grid.x)
    x[1] += (x[2] - x[1]) * 0.3
    report = audit(with_axis(grid, 0, x), MeshParams(), BAND)
    assert any(v.rule == "PML_COUNT" and v.index in (0, 1) for v in report.violations)


def test_ratio_violation(meshed):
    grid, _ = meshed
    x = np.array(grid.x)
    k = x.size // 2
    x = np.delete(x, [k, k + 1, k + 2])
    params = MeshParams(max_cell_model=1, max_cell_space=1)
    report = audit(with_axis(grid, 0, x), params, BAND)
    assert any(v.rule == "RATIO" for v in report.violations)


def test_audit_is_read_only(meshed):
    grid, _ = meshed
    before = [a.tobytes() for a in grid.axes]
    audit(grid, MeshParams(), BAND)
    assert [a.tobytes() for a in grid.axes] == before
    with pytest.raises(ValueError):
        grid.x[0] = 0.0


def test_cfl_from_smallest_cells(meshed):
    grid, report = meshed
    dmin = [float(np.diff(a).min()) for a in grid.axes]
    assert report.cfl_dt == cfl_timestep(*dmin)
    assert report.min_delta == tuple(dmin)


class TestParamWarnings:
    def test_model_not_finer_than_space(self):
        w = param_warnings(MeshParams(max_cell_model=20, max_cell_space=30))
        assert any("max_cell_model" in s for s in w)

    def test_defaults_clean(self):
        assert param_warnings(MeshParams()) == []

    def test_min_cell_close_to_model(self):
        assert any("min_cell_global" in s for s in param_warnings(MeshParams(min_cell_global=60)))


class TestCellCounts:
    @staticmethod
    def grid(*lines):
        return RectilinearGrid(*[np.arange(n, dtype=float) for n in lines])

    def test_small_scene_counts(self):
        assert cell_counts(self.grid(94, 38, 78)) == ((93, 37, 77), 264_957)

    def test_reflector_counts(self):
        assert cell_counts(self.grid(133, 119, 65)) == ((132, 118, 64), 996_864)

    def test_two_lines_is_one_cell(self):
        assert cell_counts(self.grid(2, 2, 2)) == ((1, 1, 1), 1)

    def test_report_total(self, meshed):
        grid, report = meshed
        assert report.total_cells == np.prod([a.size - 1 for a in grid.axes])
