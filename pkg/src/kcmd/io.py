"""Dataset manifests, run configuration and JSON output.

A manifest is a JSON document pointing at one CSV file per side::

    {
      "format": "kcmd-manifest/1",
      "x": {"kind": "curve", "path": "x.csv", "grid": [0.0, 0.5, 1.0]},
      "y": {"kind": "vector", "path": "y.csv", "dimension": 2},
      "delimiter": ",",
      "header": false
    }

Relative paths are resolved against the manifest's directory. Each CSV row
is one observation; for curves the columns are the values at the grid
points, in order.

A run configuration is also JSON, every key optional::

    {
      "kernel": {"kind": "gaussian", "omega": "median"},
      "weights": {"family": "alternating", "gamma": 0.5},
      "alpha": 0.05,
      "seed": 0,
      "output": null
    }
"""

from __future__ import annotations

import csv
import json
import math
from dataclasses import dataclass
from pathlib import Path
from typing import Optional, Union

import numpy as np

from .errors import (
    DataError,
    GridViolationError,
    ParseError,
    RowCountMismatchError,
    UsageError,
)
from .hilbert import Grid, Sample, Side
from .kernels import Gaussian
from .weights import WeightFamily

MANIFEST_FORMAT = "kcmd-manifest/1"


@dataclass(frozen=True)
class SideSpec:
    kind: str
    path: Path
    dimension: Optional[int] = None
    grid: Optional[Grid] = None


@dataclass(frozen=True)
class DatasetManifest:
    x: SideSpec
    y: SideSpec
    delimiter: str = ","
    header: bool = False
    format: str = MANIFEST_FORMAT


def _side_spec(raw, base: Path, name: str) -> SideSpec:
    if not isinstance(raw, dict):
        raise DataError(f"manifest entry {name!r} must be an object")
    kind = raw.get("kind")
    if kind not in ("vector", "curve"):
        raise DataError(f"{name}.kind must be 'vector' or 'curve', got {kind!r}")
    if "path" not in raw:
        raise DataError(f"{name}.path is missing")
    path = Path(raw["path"])
    if not path.is_absolute():
        path = base / path
    if not path.is_file():
        raise DataError(f"{name}: file {str(path)!r} does not exist")
    if kind == "curve":
        if "grid" not in raw:
            raise GridViolationError(f"{name}: curve data needs a grid")
        try:
            grid = Grid(raw["grid"])
        except GridViolationError as exc:
            raise GridViolationError(f"{name}: {exc}") from None
        except (TypeError, ValueError):
            raise GridViolationError(f"{name}: grid must be a list of numbers") from None
        return SideSpec(kind, path, None, grid)
    dim = raw.get("dimension")
    if dim is not None and (not isinstance(dim, int) or dim < 1):
        raise DataError(f"{name}.dimension must be a positive integer, got {dim!r}")
    return SideSpec(kind, path, dim, None)


def read_manifest(path: Union[str, Path]) -> DatasetManifest:
    path = Path(path)
    try:
        raw = json.loads(path.read_text())
    except FileNotFoundError:
        raise DataError(f"manifest {str(path)!r} does not exist") from None
    except json.JSONDecodeError as exc:
        raise DataError(f"manifest {str(path)!r} is not valid JSON: {exc}") from None
    if not isinstance(raw, dict):
        raise DataError("manifest must be a JSON object")
    fmt = raw.get("format", MANIFEST_FORMAT)
    if fmt != MANIFEST_FORMAT:
        raise DataError(f"unsupported manifest format {fmt!r}")
    base = path.parent
    delimiter = raw.get("delimiter", ",")
    if not isinstance(delimiter, str) or len(delimiter) != 1:
        raise DataError("delimiter must be a single character")
    return DatasetManifest(
        x=_side_spec(raw.get("x"), base, "x"),
        y=_side_spec(raw.get("y"), base, "y"),
        delimiter=delimiter,
        header=bool(raw.get("header", False)),
        format=fmt,
    )


def read_matrix(path: Path, delimiter: str = ",", header: bool = False) -> np.ndarray:
    """Parse a numeric CSV into an ``(rows, columns)`` float array.

    Raises :class:`ParseError` with the 1-based data row and column of the
    first malformed or non-finite cell, or on ragged rows.
    """
    rows = []
    width = None
    with open(path, newline="") as fh:
        reader = csv.reader(fh, delimiter=delimiter)
        if header:
            next(reader, None)
        for r, line in enumerate(reader, start=1):
            if not line or all(not cell.strip() for cell in line):
                continue
            if width is None:
                width = len(line)
            elif len(line) != width:
                raise ParseError(f"expected {width} columns, found {len(line)}", path, r)
            vals = []
            for c, cell in enumerate(line, start=1):
                try:
                    v = float(cell)
                except ValueError:
                    raise ParseError(f"cannot parse {cell!r} as a number", path, r, c) from None
                if not math.isfinite(v):
                    raise ParseError(f"non-finite value {cell!r}", path, r, c)
                vals.append(v)
            rows.append(vals)
    if not rows:
        raise ParseError("no data rows", path)
    return np.array(rows, dtype=np.float64)


def _load_side(spec: SideSpec, m: DatasetManifest, name: str) -> Side:
    values = read_matrix(spec.path, m.delimiter, m.header)
    if spec.kind == "curve":
        if values.shape[1] != len(spec.grid):
            raise GridViolationError(
                f"{name}: {values.shape[1]} columns but the grid has {len(spec.grid)} points"
            )
        return Side(values, spec.grid)
    if spec.dimension is not None and values.shape[1] != spec.dimension:
        raise DataError(f"{name}: expected dimension {spec.dimension}, found {values.shape[1]} columns")
    return Side(values)


def load_sample(manifest: Union[DatasetManifest, str, Path]) -> Sample:
    if not isinstance(manifest, DatasetManifest):
        manifest = read_manifest(manifest)
    x = _load_side(manifest.x, manifest, "x")
    y = _load_side(manifest.y, manifest, "y")
    if len(x) != len(y):
        raise RowCountMismatchError(f"x has {len(x)} rows but y has {len(y)}")
    return Sample(x, y)


def write_matrix(path: Union[str, Path], values, delimiter: str = ",") -> None:
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh, delimiter=delimiter)
        for row in np.atleast_2d(values):
            writer.writerow([repr(float(v)) for v in row])


@dataclass(frozen=True)
class RunConfig:
    kernel: object = "median"  # "median" or a Gaussian spec
    family: WeightFamily = WeightFamily()
    alpha: float = 0.05
    seed: int = 0
    output: Optional[str] = None

    def echo(self) -> dict:
        kernel = self.kernel if isinstance(self.kernel, str) else self.kernel.to_dict()
        return {
            "kernel": kernel,
            "weights": self.family.to_dict(),
            "alpha": self.alpha,
            "seed": self.seed,
        }


def parse_config(raw: dict) -> RunConfig:
    if not isinstance(raw, dict):
        raise UsageError("config must be a JSON object")
    unknown = set(raw) - {"kernel", "weights", "alpha", "seed", "output"}
    if unknown:
        raise UsageError(f"unknown config keys: {sorted(unknown)}")

    kraw = raw.get("kernel", {"kind": "gaussian", "omega": "median"})
    if kraw == "median":
        kraw = {"kind": "gaussian", "omega": "median"}
    if not isinstance(kraw, dict) or kraw.get("kind", "gaussian") != "gaussian":
        raise UsageError("only the Gaussian kernel can be configured")
    omega = kraw.get("omega", "median")
    if omega == "median":
        kernel = "median"
    elif isinstance(omega, (int, float)) and not isinstance(omega, bool):
        kernel = Gaussian(omega)
    else:
        raise UsageError(f"kernel.omega must be 'median' or a positive number, got {omega!r}")

    wraw = raw.get("weights", {})
    if not isinstance(wraw, dict):
        raise UsageError("weights must be an object")
    family = WeightFamily(wraw.get("family", "alternating"), wraw.get("gamma", 0.5))
    if not family.inferential:
        raise UsageError("the constant-one weight family cannot be used for inference")

    alpha = raw.get("alpha", 0.05)
    if isinstance(alpha, bool) or not isinstance(alpha, (int, float)) or not 0 < alpha < 1:
        raise UsageError(f"alpha must lie in (0, 1), got {alpha!r}")
    seed = raw.get("seed", 0)
    if isinstance(seed, bool) or not isinstance(seed, int) or seed < 0:
        raise UsageError(f"seed must be a nonnegative integer, got {seed!r}")
    output = raw.get("output")
    if output is not None and not isinstance(output, str):
        raise UsageError("output must be a path string or null")
    return RunConfig(kernel, family, float(alpha), seed, output)


def read_config(path: Optional[Union[str, Path]]) -> RunConfig:
    if path is None:
        return RunConfig()
    try:
        raw = json.loads(Path(path).read_text())
    except FileNotFoundError:
        raise UsageError(f"config {str(path)!r} does not exist") from None
    except json.JSONDecodeError as exc:
        raise UsageError(f"config {str(path)!r} is not valid JSON: {exc}") from None
    return parse_config(raw)


def dumps(payload) -> str:
    """Deterministic JSON; floats use Python's shortest round-trip repr."""
    return json.dumps(payload, indent=2, allow_nan=False) + "\n"
