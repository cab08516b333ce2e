"""Domain types and the closed-form sizing equations.

All mesh sizes are expressed as fractions of the shortest excitation
wavelength: a fraction ``f`` means a cell size of ``lambda_min / f``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import NamedTuple, Optional, Sequence

import numpy as np

from .errors import InvalidArgumentError, InvalidBandError, ParameterError

SPEED_OF_LIGHT = 299_792_458.0

AXES = ("x", "y", "z")

PML_N_RANGE = (4, 50)


class Wavelengths(NamedTuple):
    lambda_min: float
    # None marks an unbounded longest wavelength (DC component in the band)
    lambda_max: Optional[float]

    @property
    def unbounded(self) -> bool:
        return self.lambda_max is None


@dataclass(frozen=True)
class FrequencyBand:
    """Excitation band ``[f_min, f_max]`` in Hz; ``f_min = 0`` means not DC-free."""

    f_min: float
    f_max: float
    c: float = SPEED_OF_LIGHT

    def __post_init__(self):
        for name in ("f_min", "f_max", "c"):
            if not math.isfinite(getattr(self, name)):
                raise InvalidBandError(f"{name} must be finite")
        if self.f_max <= 0:
            raise InvalidBandError(f"f_max must be > 0, got {self.f_max}")
        if not 0 <= self.f_min <= self.f_max:
            raise InvalidBandError(
                f"need 0 <= f_min <= f_max, got f_min={self.f_min}, f_max={self.f_max}"
            )
        if self.c <= 0:
            raise InvalidBandError(f"c must be > 0, got {self.c}")

    @property
    def is_dc(self) -> bool:
        return self.f_min == 0


def wavelengths(band: FrequencyBand) -> Wavelengths:
    if band.f_max <= 0:
        raise InvalidBandError(f"f_max must be > 0, got {band.f_max}")
    lam_min = band.c / band.f_max
    lam_max = band.c / band.f_min if band.f_min > 0 else None
    return Wavelengths(lam_min, lam_max)


def quarter_mid_padding(lambda_min: float, lambda_max: Optional[float]) -> float:
    """Distance between the model and the absorbing boundary.

    Quarter of the mid wavelength, ``lmin*lmax / (2 (lmin + lmax))``.
    An unbounded ``lambda_max`` (pass ``None``) yields the limit ``lmin / 2``.
    """
    if not lambda_min > 0:
        raise InvalidArgumentError(f"lambda_min must be > 0, got {lambda_min}")
    if lambda_max is None or math.isinf(lambda_max):
        return lambda_min / 2.0
    if lambda_max < lambda_min:
        raise InvalidArgumentError("lambda_max must be >= lambda_min")
    return lambda_min * lambda_max / (2.0 * (lambda_min + lambda_max))


def cfl_timestep(dx: float, dy: float, dz: float, c: float = SPEED_OF_LIGHT) -> float:
    """Courant stability bound on the FDTD timestep for the given minimum spacings."""
    if not (dx > 0 and dy > 0 and dz > 0):
        raise InvalidArgumentError(f"spacings must be > 0, got {(dx, dy, dz)}")
    if not c > 0:
        raise InvalidArgumentError(f"c must be > 0, got {c}")
    return 1.0 / (c * math.sqrt(1.0 / dx**2 + 1.0 / dy**2 + 1.0 / dz**2))


def target_cell_size(lambda_min: float, fraction: float) -> float:
    if not (lambda_min > 0 and fraction > 0):
        raise InvalidArgumentError(
            f"lambda_min and fraction must be > 0, got {lambda_min}, {fraction}"
        )
    return lambda_min / fraction


def _triple(value, name, cast):
    if isinstance(value, (int, float)):
        value = [value] * 3
    value = tuple(cast(v) for v in value)
    if len(value) != 3:
        raise ParameterError(f"{name} needs 3 values (x, y, z), got {len(value)}")
    return value


@dataclass(frozen=True)
class MeshParams:
    """Sizing fractions and refinement controls.

    ``max_cell_model``, ``max_cell_space`` and ``min_cell_global`` are
    wavelength fractions: the respective cell size is ``lambda_min / value``.
    ``n`` and ``res_fraction`` are per axis (x, y, z); a scalar is broadcast.
    """

    max_cell_model: float = 40.0
    max_cell_space: float = 30.0
    min_cell_global: float = 300.0
    n: Sequence[int] = (3, 3, 3)
    res_fraction: Sequence[float] = (6.0, 6.0, 6.0)
    pml_n: int = 8
    grading_ratio_max: float = 2.0

    def __post_init__(self):
        object.__setattr__(self, "n", _triple(self.n, "n", int))
        object.__setattr__(self, "res_fraction", _triple(self.res_fraction, "res_fraction", float))
        for name in ("max_cell_model", "max_cell_space", "min_cell_global"):
            v = getattr(self, name)
            if not (math.isfinite(v) and v > 0):
                raise ParameterError(f"{name} must be a positive fraction, got {v}")
        if any(k < 0 for k in self.n):
            raise ParameterError(f"n must be non-negative, got {self.n}")
        if any(not (math.isfinite(f) and f > 0) for f in self.res_fraction):
            raise ParameterError(f"res_fraction must be positive, got {self.res_fraction}")
        lo, hi = PML_N_RANGE
        if isinstance(self.pml_n, bool) or int(self.pml_n) != self.pml_n or not lo <= self.pml_n <= hi:
            raise ParameterError(f"pml_n must be an integer in [{lo}, {hi}], got {self.pml_n}")
        object.__setattr__(self, "pml_n", int(self.pml_n))
        if not (math.isfinite(self.grading_ratio_max) and self.grading_ratio_max > 1):
            raise ParameterError(f"grading_ratio_max must be > 1, got {self.grading_ratio_max}")

    def targets(self, lambda_min: float) -> dict:
        return {
            "model": target_cell_size(lambda_min, self.max_cell_model),
            "space": target_cell_size(lambda_min, self.max_cell_space),
            "min": target_cell_size(lambda_min, self.min_cell_global),
        }

    def to_dict(self) -> dict:
        return {
            "max_cell_model": self.max_cell_model,
            "max_cell_space": self.max_cell_space,
            "min_cell_global": self.min_cell_global,
            "n": list(self.n),
            "res_fraction": list(self.res_fraction),
            "pml_n": self.pml_n,
            "grading_ratio_max": self.grading_ratio_max,
        }


def _frozen_array(a) -> np.ndarray:
    a = np.array(a, dtype=float)
    a.flags.writeable = False
    return a


@dataclass(frozen=True, eq=False)
class RectilinearGrid:
    x: np.ndarray
    y: np.ndarray
    z: np.ndarray
    band: Optional[FrequencyBand] = None
    params: Optional[MeshParams] = None
    # per-axis [min, max] of the model geometry, shape (3, 2)
    model_extent: Optional[np.ndarray] = None
    # per-axis snapped critical coordinates, kept for re-auditing
    critical: Optional[tuple] = None

    def __post_init__(self):
        for name in AXES:
            a = _frozen_array(getattr(self, name))
            if a.ndim != 1 or a.size < 2:
                raise InvalidArgumentError(f"axis {name} needs at least 2 lines")
            object.__setattr__(self, name, a)
        if self.model_extent is not None:
            object.__setattr__(self, "model_extent", _frozen_array(self.model_extent).reshape(3, 2))
        if self.critical is not None:
            object.__setattr__(self, "critical", tuple(_frozen_array(c) for c in self.critical))

    @property
    def axes(self) -> tuple:
        return (self.x, self.y, self.z)

    @property
    def shape(self) -> tuple:
        """Number of lines per axis."""
        return tuple(a.size for a in self.axes)


@dataclass(frozen=True)
class Violation:
    rule: str
    axis: str
    index: int
    message: str
    value: float = float("nan")

    def to_dict(self) -> dict:
        return {
            "rule": self.rule,
            "axis": self.axis,
            "index": self.index,
            "message": self.message,
            "value": None if math.isnan(self.value) else self.value,
        }


@dataclass
class GridReport:
    cells_per_axis: tuple
    total_cells: int
    min_delta: tuple
    max_delta: tuple
    max_adjacent_ratio: tuple
    cfl_dt: float
    violations: list = field(default_factory=list)
    warnings: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.violations

    def to_dict(self) -> dict:
        return {
            "cells_per_axis": list(self.cells_per_axis),
            "total_cells": self.total_cells,
            "min_delta": list(self.min_delta),
            "max_delta": list(self.max_delta),
            "max_adjacent_ratio": list(self.max_adjacent_ratio),
            "cfl_dt": self.cfl_dt,
            "violations": [v.to_dict() for v in self.violations],
            "warnings": list(self.warnings),
        }
