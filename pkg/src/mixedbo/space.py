"""Mixed real/integer/categorical search spaces and their box relaxation.

A configuration is a tuple with one entry per dimension: a float for a real
dimension, an int for an integer dimension and a label for a categorical
dimension.  ``encode`` embeds configurations in a continuous box by keeping
real and integer values as single coordinates and expanding each categorical
dimension into a one-hot block.  ``transform`` projects any point of the box
onto the encoding of a valid configuration: integer coordinates round half-up
to the nearest integer and each one-hot block snaps to its largest coordinate
(lowest index on ties).  ``decode`` composes the projection with the inverse
of the embedding, so every point of the box maps to a valid configuration.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Iterable, Sequence, Union

import numpy as np

from .exceptions import InvalidConfigError, InvalidPointError, SpaceError

Value = Union[float, int, str]
Config = tuple


@dataclass(frozen=True)
class Real:
    lower: float
    upper: float

    def __post_init__(self):
        if not (np.isfinite(self.lower) and np.isfinite(self.upper)):
            raise SpaceError("real bounds must be finite")
        if not self.lower < self.upper:
            raise SpaceError(f"real dimension needs lower < upper, got [{self.lower}, {self.upper}]")

    @property
    def width(self) -> int:
        return 1


@dataclass(frozen=True)
class Integer:
    lower: int
    upper: int

    def __post_init__(self):
        for b in (self.lower, self.upper):
            if not isinstance(b, (int, np.integer)) or isinstance(b, bool):
                raise SpaceError("integer bounds must be integers")
        if self.lower > self.upper:
            raise SpaceError(f"integer dimension needs lower <= upper, got [{self.lower}, {self.upper}]")

    @property
    def width(self) -> int:
        return 1


@dataclass(frozen=True)
class Categorical:
    labels: tuple

    def __init__(self, labels: Iterable[str]):
        labels = tuple(labels)
        if not labels:
            raise SpaceError("categorical dimension needs at least one label")
        if len(set(labels)) != len(labels):
            raise SpaceError("categorical labels must be unique")
        if not all(isinstance(lab, str) for lab in labels):
            raise SpaceError("categorical labels must be strings")
        object.__setattr__(self, "labels", labels)

    @property
    def width(self) -> int:
        return len(self.labels)


Dimension = Union[Real, Integer, Categorical]


class SearchSpace:
    """Ordered collection of dimensions with encode/decode/transform maps."""

    def __init__(self, dims: Sequence[Dimension]):
        dims = tuple(dims)
        if not dims:
            raise SpaceError("search space needs at least one dimension")
        for d in dims:
            if not isinstance(d, (Real, Integer, Categorical)):
                raise SpaceError(f"unknown dimension type: {type(d).__name__}")
        self.dims = dims
        slices = []
        start = 0
        for d in dims:
            slices.append(slice(start, start + d.width))
            start += d.width
        self._slices = tuple(slices)
        self.width = start
        lower = np.empty(self.width)
        upper = np.empty(self.width)
        for d, sl in zip(dims, slices):
            if isinstance(d, Categorical):
                lower[sl], upper[sl] = 0.0, 1.0
            else:
                lower[sl], upper[sl] = float(d.lower), float(d.upper)
        self.lower = lower
        self.upper = upper

    def __len__(self) -> int:
        return len(self.dims)

    def __repr__(self) -> str:
        return f"SearchSpace({list(self.dims)!r})"

    def __eq__(self, other) -> bool:
        return isinstance(other, SearchSpace) and self.dims == other.dims

    def block(self, i: int) -> slice:
        """Encoded-coordinate slice of dimension ``i``."""
        return self._slices[i]

    # -- configurations ----------------------------------------------------

    def validate_config(self, config) -> Config:
        if len(config) != len(self.dims):
            raise InvalidConfigError(f"expected {len(self.dims)} values, got {len(config)}")
        out = []
        for d, v in zip(self.dims, config):
            if isinstance(d, Real):
                if isinstance(v, bool) or not isinstance(v, (int, float, np.floating, np.integer)):
                    raise InvalidConfigError(f"real dimension got {v!r}")
                v = float(v)
                if not np.isfinite(v) or not (d.lower <= v <= d.upper):
                    raise InvalidConfigError(f"{v!r} outside [{d.lower}, {d.upper}]")
            elif isinstance(d, Integer):
                if isinstance(v, bool) or not isinstance(v, (int, np.integer)):
                    raise InvalidConfigError(f"integer dimension got {v!r}")
                v = int(v)
                if not (d.lower <= v <= d.upper):
                    raise InvalidConfigError(f"{v!r} outside [{d.lower}, {d.upper}]")
            else:
                if v not in d.labels:
                    raise InvalidConfigError(f"unknown label {v!r}, expected one of {d.labels}")
            out.append(v)
        return tuple(out)

    def encode(self, config) -> np.ndarray:
        """Embed a valid configuration into the relaxed box."""
        config = self.validate_config(config)
        p = np.zeros(self.width)
        for d, sl, v in zip(self.dims, self._slices, config):
            if isinstance(d, Categorical):
                p[sl.start + d.labels.index(v)] = 1.0
            else:
                p[sl.start] = float(v)
        return p

    def decode(self, point: np.ndarray) -> Config:
        """Map a point of the box to the valid configuration of its cell."""
        p = self.transform(point)
        out = []
        for d, sl in zip(self.dims, self._slices):
            if isinstance(d, Real):
                out.append(float(p[sl.start]))
            elif isinstance(d, Integer):
                out.append(int(p[sl.start]))
            else:
                out.append(d.labels[int(np.argmax(p[sl]))])
        return tuple(out)

    # -- relaxed points ----------------------------------------------------

    def _check_width(self, points: np.ndarray) -> np.ndarray:
        points = np.asarray(points, dtype=float)
        if points.shape[-1] != self.width:
            raise InvalidPointError(f"expected width {self.width}, got {points.shape[-1]}")
        return points

    def transform(self, points: np.ndarray) -> np.ndarray:
        """Snap points onto encodings of valid configurations.

        Accepts a single point ``(width,)`` or a batch ``(n, width)``.  Real
        coordinates within the box pass through unchanged, integer
        coordinates round half-up, one-hot blocks snap to their argmax with
        the lowest index winning ties.  Idempotent by construction.
        """
        points = self._check_width(points)
        single = points.ndim == 1
        p = np.atleast_2d(points).copy()
        for d, sl in zip(self.dims, self._slices):
            if isinstance(d, Real):
                np.clip(p[:, sl.start], d.lower, d.upper, out=p[:, sl.start])
            elif isinstance(d, Integer):
                p[:, sl.start] = np.clip(np.floor(p[:, sl.start] + 0.5), d.lower, d.upper)
            else:
                block = p[:, sl]
                hot = np.argmax(block, axis=1)
                block[:] = 0.0
                block[np.arange(block.shape[0]), hot] = 1.0
        return p[0] if single else p

    def is_fixed_point(self, point: np.ndarray) -> bool:
        return bool(np.array_equal(self.transform(point), self._check_width(point)))

    def sample(self, rng: np.random.Generator, n: int | None = None) -> np.ndarray:
        """Draw points uniformly from the relaxed box."""
        if n is None:
            return rng.uniform(self.lower, self.upper)
        return rng.uniform(self.lower, self.upper, size=(n, self.width))

    # -- enumeration ---------------------------------------------------------

    def grid_axes(self, density: int) -> list:
        """Per-dimension value lists: ``density`` evenly spaced reals, every
        integer, every label."""
        if density < 2:
            raise SpaceError("grid density must be at least 2")
        axes = []
        for d in self.dims:
            if isinstance(d, Real):
                axes.append([float(v) for v in np.linspace(d.lower, d.upper, density)])
            elif isinstance(d, Integer):
                axes.append(list(range(d.lower, d.upper + 1)))
            else:
                axes.append(list(d.labels))
        return axes

    # -- serialization -------------------------------------------------------

    def to_dict(self) -> dict:
        dims = []
        for d in self.dims:
            if isinstance(d, Real):
                dims.append({"kind": "real", "lower": d.lower, "upper": d.upper})
            elif isinstance(d, Integer):
                dims.append({"kind": "integer", "lower": d.lower, "upper": d.upper})
            else:
                dims.append({"kind": "categorical", "labels": list(d.labels)})
        return {"dims": dims}

    @classmethod
    def from_dict(cls, spec: dict) -> "SearchSpace":
        if not isinstance(spec, dict) or "dims" not in spec:
            raise SpaceError('space definition needs a top-level "dims" list')
        dims = []
        for entry in spec["dims"]:
            kind = entry.get("kind")
            if kind == "real":
                dims.append(Real(float(entry["lower"]), float(entry["upper"])))
            elif kind == "integer":
                dims.append(Integer(int(entry["lower"]), int(entry["upper"])))
            elif kind == "categorical":
                dims.append(Categorical(entry["labels"]))
            else:
                raise SpaceError(f"unknown dimension kind {kind!r}")
        return cls(dims)

    @classmethod
    def from_json(cls, text: str) -> "SearchSpace":
        return cls.from_dict(json.loads(text))


def load_space(path) -> SearchSpace:
    with open(path) as fh:
        return SearchSpace.from_json(fh.read())
