"""Observations in separable Hilbert spaces.

Two concrete spaces are supported: Euclidean vectors, and square-integrable
curves on ``[0, 1]`` observed on a common grid. Curve inner products are
approximated with the composite trapezoidal rule

    <a, b> ~ sum_m (s[m+1] - s[m]) / 2 * (a(s[m]) b(s[m]) + a(s[m+1]) b(s[m+1]))

which is the only quadrature offered.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional, Sequence, Union

import numpy as np

from .errors import DataError, GridViolationError, ShapeMismatchError


def _as_finite_1d(values, what: str) -> np.ndarray:
    arr = np.array(values, dtype=np.float64)
    if arr.ndim != 1:
        raise ShapeMismatchError(f"{what} must be one-dimensional, got shape {arr.shape}")
    if not np.all(np.isfinite(arr)):
        raise DataError(f"{what} contains non-finite values")
    arr.setflags(write=False)
    return arr


@dataclass(frozen=True, eq=False)
class Grid:
    """Strictly increasing abscissae starting at 0 and ending at 1."""

    points: np.ndarray

    def __post_init__(self):
        pts = np.array(self.points, dtype=np.float64)
        if pts.ndim != 1 or pts.size < 2:
            raise GridViolationError("a grid needs at least two points")
        if not np.all(np.isfinite(pts)):
            raise GridViolationError("grid points must be finite")
        if pts[0] != 0.0 or pts[-1] != 1.0:
            raise GridViolationError(
                f"grid must start at 0 and end at 1, got [{pts[0]!r}, {pts[-1]!r}]"
            )
        if np.any(np.diff(pts) <= 0):
            raise GridViolationError("grid points must be strictly increasing")
        pts.setflags(write=False)
        object.__setattr__(self, "points", pts)

    @classmethod
    def uniform(cls, size: int) -> "Grid":
        if size < 2:
            raise GridViolationError("a grid needs at least two points")
        pts = np.linspace(0.0, 1.0, size)
        return cls(pts)

    def __len__(self) -> int:
        return self.points.size

    def __eq__(self, other) -> bool:
        if not isinstance(other, Grid):
            return NotImplemented
        return np.array_equal(self.points, other.points)

    def __hash__(self) -> int:
        return hash(self.points.tobytes())

    def trapezoid_weights(self) -> np.ndarray:
        """Per-node weights ``q`` with ``sum(q * f)`` equal to the trapezoid rule."""
        h = np.diff(self.points)
        q = np.zeros_like(self.points)
        q[:-1] += h / 2
        q[1:] += h / 2
        return q


@dataclass(frozen=True, eq=False)
class Vector:
    coordinates: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "coordinates", _as_finite_1d(self.coordinates, "vector"))

    @property
    def values(self) -> np.ndarray:
        return self.coordinates

    @property
    def dimension(self) -> int:
        return self.coordinates.size


@dataclass(frozen=True, eq=False)
class Curve:
    values: np.ndarray
    grid: Grid

    def __post_init__(self):
        vals = _as_finite_1d(self.values, "curve")
        if vals.size != len(self.grid):
            raise ShapeMismatchError(
                f"curve has {vals.size} values but its grid has {len(self.grid)} points"
            )
        object.__setattr__(self, "values", vals)


HilbertPoint = Union[Vector, Curve]


def _check_compatible(a: HilbertPoint, b: HilbertPoint) -> None:
    if type(a) is not type(b):
        raise ShapeMismatchError(
            f"cannot pair a {type(a).__name__} with a {type(b).__name__}"
        )
    if isinstance(a, Vector):
        if a.dimension != b.dimension:
            raise ShapeMismatchError(f"dimensions differ: {a.dimension} vs {b.dimension}")
    elif a.grid != b.grid:
        raise ShapeMismatchError("curves live on different grids")


def _trapezoid(f: np.ndarray, s: np.ndarray) -> float:
    h = np.diff(s)
    return float(np.sum(h / 2 * (f[:-1] + f[1:])))


def inner_product(a: HilbertPoint, b: HilbertPoint) -> float:
    """Inner product of two points of the same space.

    Vectors use the Euclidean dot product, curves the trapezoidal rule on
    their shared grid.

    >>> inner_product(Vector([1.0, 2.0]), Vector([3.0, -1.0]))
    1.0
    """
    _check_compatible(a, b)
    if isinstance(a, Vector):
        return float(np.sum(a.coordinates * b.coordinates))
    return _trapezoid(a.values * b.values, a.grid.points)


def squared_distance(a: HilbertPoint, b: HilbertPoint) -> float:
    """``||a - b||^2``, computed from the difference (never by expansion)."""
    _check_compatible(a, b)
    diff = a.values - b.values
    if isinstance(a, Vector):
        return float(np.sum(diff * diff))
    return _trapezoid(diff * diff, a.grid.points)


@dataclass(frozen=True, eq=False)
class Side:
    """One side (``X`` or ``Y``) of a paired sample, stored as an ``(n, p)`` array.

    ``grid`` is ``None`` for vector data; for curve data each row holds the
    values at the grid points.
    """

    values: np.ndarray
    grid: Optional[Grid] = None
    quad: np.ndarray = field(init=False, repr=False)

    def __post_init__(self):
        vals = np.array(self.values, dtype=np.float64)
        if vals.ndim == 1:
            vals = vals[:, None]
        if vals.ndim != 2:
            raise ShapeMismatchError(f"expected an (n, p) array, got shape {vals.shape}")
        if not np.all(np.isfinite(vals)):
            raise DataError("sample contains non-finite values")
        if self.grid is not None and vals.shape[1] != len(self.grid):
            raise ShapeMismatchError(
                f"curves have {vals.shape[1]} values but the grid has {len(self.grid)} points"
            )
        vals.setflags(write=False)
        object.__setattr__(self, "values", vals)
        if self.grid is None:
            quad = np.ones(vals.shape[1])
        else:
            quad = self.grid.trapezoid_weights()
        quad.setflags(write=False)
        object.__setattr__(self, "quad", quad)

    @property
    def kind(self) -> str:
        return "vector" if self.grid is None else "curve"

    def __len__(self) -> int:
        return self.values.shape[0]

    def point(self, i: int) -> HilbertPoint:
        if self.grid is None:
            return Vector(self.values[i])
        return Curve(self.values[i], self.grid)

    def points(self) -> list:
        return [self.point(i) for i in range(len(self))]


@dataclass(frozen=True)
class Sample:
    """Paired observations ``(X_i, Y_i)``, ``i = 1..n``."""

    x: Side
    y: Side

    def __post_init__(self):
        if len(self.x) != len(self.y):
            raise ShapeMismatchError(f"|xs| = {len(self.x)} but |ys| = {len(self.y)}")
        if len(self.x) < 1:
            raise DataError("a sample needs at least one observation")

    @property
    def n(self) -> int:
        return len(self.x)

    @property
    def xs(self) -> list:
        return self.x.points()

    @property
    def ys(self) -> list:
        return self.y.points()

    @classmethod
    def from_arrays(
        cls,
        x,
        y,
        x_grid: Optional[Union[Grid, Sequence[float]]] = None,
        y_grid: Optional[Union[Grid, Sequence[float]]] = None,
    ) -> "Sample":
        """Build a sample from ``(n, p)`` arrays; pass a grid to mark a side as curves."""
        if x_grid is not None and not isinstance(x_grid, Grid):
            x_grid = Grid(x_grid)
        if y_grid is not None and not isinstance(y_grid, Grid):
            y_grid = Grid(y_grid)
        return cls(Side(x, x_grid), Side(y, y_grid))

    @classmethod
    def from_points(cls, xs: Sequence[HilbertPoint], ys: Sequence[HilbertPoint]) -> "Sample":
        return cls(_side_from_points(xs, "xs"), _side_from_points(ys, "ys"))

    def permuted(self, perm) -> "Sample":
        perm = np.asarray(perm)
        return Sample(Side(self.x.values[perm], self.x.grid), Side(self.y.values[perm], self.y.grid))


def _side_from_points(points: Sequence[HilbertPoint], what: str) -> Side:
    if len(points) == 0:
        raise DataError(f"{what} is empty")
    first = points[0]
    for p in points[1:]:
        try:
            _check_compatible(first, p)
        except ShapeMismatchError as exc:
            raise ShapeMismatchError(f"{what} are not homogeneous: {exc}") from None
    grid = first.grid if isinstance(first, Curve) else None
    return Side(np.stack([p.values for p in points]), grid)
