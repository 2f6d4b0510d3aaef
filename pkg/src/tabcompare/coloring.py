"""Similarity-based bar coloring: distance matrix, 1D classical MDS, colormap.

All bars of all versions are embedded together on one axis so that similar
bars land close and therefore receive similar colors. The embedding is
classical multidimensional scaling restricted to the top component: square
the distances, double-center, take the leading eigenpair. Coordinates are
min-max normalized to [0, 1] and oriented so the first bar never sits to the
right of the last one, then looked up in a piecewise-linear colormap.

Rest-only bars participate with their zero feature vector, so every bar gets
a color.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .features import BarFeature, bar_distance

__all__ = [
    "DEFAULT_COLORMAP",
    "ColorMap",
    "ColorStop",
    "color_of",
    "distance_matrix",
    "embedding_1d",
    "format_hex",
    "mds_1d",
    "parse_hex",
]

logger = logging.getLogger(__name__)

_EIGENVALUE_FLOOR = 1e-12
_POWER_TOLERANCE = 1e-10
_POWER_MAX_ITERATIONS = 10_000


@dataclass(frozen=True)
class ColorStop:
    t: float
    rgb: tuple[int, int, int]


@dataclass(frozen=True)
class ColorMap:
    """Ordered color stops; lookups interpolate linearly per channel."""

    stops: tuple[ColorStop, ...]

    def __post_init__(self) -> None:
        if len(self.stops) < 2:
            raise ValueError("colormap needs at least two stops")
        if self.stops[0].t != 0.0 or self.stops[-1].t != 1.0:
            raise ValueError("colormap must start at t=0 and end at t=1")
        for a, b in zip(self.stops, self.stops[1:]):
            if not a.t < b.t:
                raise ValueError("colormap stop positions must be strictly increasing")
        for stop in self.stops:
            if not all(0 <= c <= 255 for c in stop.rgb):
                raise ValueError(f"bad RGB bytes {stop.rgb}")


def parse_hex(text: str) -> tuple[int, int, int]:
    if len(text) != 7 or text[0] != "#":
        raise ValueError(f"expected '#RRGGBB', got {text!r}")
    try:
        return tuple(int(text[i : i + 2], 16) for i in (1, 3, 5))  # type: ignore[return-value]
    except ValueError:
        raise ValueError(f"expected '#RRGGBB', got {text!r}") from None


def format_hex(rgb: tuple[int, int, int]) -> str:
    return "#{:02X}{:02X}{:02X}".format(*rgb)


#: Dark violet to yellow ramp, perceptually ordered.
DEFAULT_COLORMAP = ColorMap(
    stops=(
        ColorStop(0.0, parse_hex("#440154")),
        ColorStop(0.25, parse_hex("#3B528B")),
        ColorStop(0.5, parse_hex("#21918C")),
        ColorStop(0.75, parse_hex("#5EC962")),
        ColorStop(1.0, parse_hex("#FDE725")),
    )
)


def color_of(t: float, colormap: ColorMap = DEFAULT_COLORMAP) -> tuple[int, int, int]:
    """Piecewise-linear colormap lookup, rounding half up to integer bytes."""
    if not 0.0 <= t <= 1.0:
        logger.debug("color_of: t=%r outside [0, 1], clamping", t)
        t = min(max(t, 0.0), 1.0)
    stops = colormap.stops
    for lo, hi in zip(stops, stops[1:]):
        if t <= hi.t:
            w = (t - lo.t) / (hi.t - lo.t)
            return tuple(int(a + (b - a) * w + 0.5) for a, b in zip(lo.rgb, hi.rgb))  # type: ignore[return-value]
    return stops[-1].rgb


def distance_matrix(features: Sequence[BarFeature]) -> np.ndarray:
    """Symmetric pairwise bar-distance matrix with an exactly zero diagonal."""
    n = len(features)
    if n < 1:
        raise ValueError("need at least one bar")
    matrix = np.zeros((n, n))
    for i in range(n):
        for j in range(i + 1, n):
            d = bar_distance(features[i], features[j])
            matrix[i, j] = d
            matrix[j, i] = d
    return matrix


def _validate_distance_matrix(matrix: np.ndarray) -> np.ndarray:
    matrix = np.asarray(matrix, dtype=float)
    if matrix.ndim != 2 or matrix.shape[0] != matrix.shape[1]:
        raise ValueError(f"distance matrix must be square, got shape {matrix.shape}")
    if not np.allclose(matrix, matrix.T, rtol=0.0, atol=1e-12):
        raise ValueError("distance matrix must be symmetric")
    if np.any(np.diag(matrix) < 0):
        raise ValueError("distance matrix has a negative diagonal entry")
    return matrix


def _row_matvec(gram: np.ndarray, v: np.ndarray) -> np.ndarray:
    # One dot product per row instead of a single gemv: BLAS gemv rounds SIMD
    # lanes differently, which would give bitwise-identical rows (duplicated
    # bars) coordinates that differ in the last ulp.
    return np.array([row @ v for row in gram])


def _top_eigenpair(gram: np.ndarray) -> tuple[float, np.ndarray]:
    """Leading eigenpair of a symmetric matrix by power iteration.

    The start vector is the largest-norm column of the matrix (lowest index on
    ties): it is fixed, lies in the column space, and for the rank-one
    matrices produced by perfectly 1D-embeddable inputs it already equals the
    leading eigenvector. An all-ones start would be useless here because
    double-centering annihilates the constant vector.
    """
    n = gram.shape[0]
    norms = np.linalg.norm(gram, axis=0)
    start = int(np.argmax(norms))
    if norms[start] <= 0.0:
        return 0.0, np.zeros(n)
    v = gram[:, start] / norms[start]
    for _ in range(_POWER_MAX_ITERATIONS):
        y = _row_matvec(gram, v)
        norm = np.linalg.norm(y)
        if norm == 0.0:
            return 0.0, v
        y /= norm
        if min(np.linalg.norm(y - v), np.linalg.norm(y + v)) <= _POWER_TOLERANCE:
            v = y
            break
        v = y
    return float(v @ _row_matvec(gram, v)), v


def embedding_1d(matrix: np.ndarray) -> np.ndarray:
    """Raw 1D classical MDS coordinates (unnormalized, sign not fixed).

    Zero everywhere when the leading eigenvalue is not meaningfully positive.
    """
    matrix = _validate_distance_matrix(matrix)
    squared = matrix * matrix
    # Double-center by explicit mean subtraction. Using the row means for both
    # sides (valid because the input is symmetric) makes the result bitwise
    # symmetric, and keeps duplicated rows bitwise identical.
    row_means = squared.mean(axis=1)
    grand_mean = row_means.mean()
    gram = -0.5 * (squared - row_means[:, None] - row_means[None, :] + grand_mean)
    eigenvalue, eigenvector = _top_eigenpair(gram)
    if eigenvalue <= _EIGENVALUE_FLOOR:
        return np.zeros(matrix.shape[0])
    return np.sqrt(eigenvalue) * eigenvector


def mds_1d(matrix: np.ndarray) -> np.ndarray:
    """Similarity coordinates in [0, 1], one per bar.

    Min-max normalizes the raw embedding (all-equal collapses to 0.5) and
    flips the axis when the first coordinate exceeds the last, which removes
    the reflection ambiguity and makes repeated runs byte-identical.
    """
    raw = embedding_1d(matrix)
    lo = raw.min()
    hi = raw.max()
    if hi == lo:
        return np.full(raw.shape[0], 0.5)
    coords = (raw - lo) / (hi - lo)
    if coords[0] > coords[-1]:
        coords = 1.0 - coords
    return coords
