"""Core numeric evaluation of planar point configurations.

The central quantity is the discriminant-style product

    Delta = prod_{i != j} |z_i - z_j| = prod_{i < j} |z_i - z_j|^2,

evaluated in log space throughout, together with its normalization
Delta / n^n for configurations rescaled to diameter 2.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import InvalidConfigError, SingularConfigError

# exp() overflows above this; larger log-values are reported as log-only
_LOG_FLOAT_MAX = math.log(np.finfo(float).max)


@dataclass(frozen=True)
class PointConfig:
    """An ordered list of n planar points, stored as an (n, 2) float array."""

    points: np.ndarray

    def __post_init__(self):
        pts = np.asarray(self.points, dtype=float)
        if pts.ndim != 2 or (pts.size and pts.shape[1] != 2):
            pts = pts.reshape(-1, 2)
        if pts.size and not np.isfinite(pts).all():
            raise InvalidConfigError("non-finite coordinate in configuration")
        pts = pts.copy()
        pts.setflags(write=False)
        object.__setattr__(self, "points", pts)

    @classmethod
    def from_complex(cls, z) -> "PointConfig":
        z = np.asarray(z, dtype=complex).ravel()
        return cls(np.column_stack([z.real, z.imag]) if z.size else np.empty((0, 2)))

    @property
    def n(self) -> int:
        return self.points.shape[0]

    @property
    def as_complex(self) -> np.ndarray:
        return self.points[:, 0] + 1j * self.points[:, 1]

    def min_pairwise_distance(self) -> float:
        if self.n < 2:
            return math.inf
        d = pairwise_distances(self.as_complex)
        np.fill_diagonal(d, np.inf)
        return float(d.min())

    def is_distinct(self, tol: float = 0.0) -> bool:
        return self.min_pairwise_distance() > tol


@dataclass(frozen=True)
class EvalReport:
    """Evaluation summary of one configuration."""

    n: int
    delta: float
    log_delta: float
    delta_bar: float
    diameter: float

    @property
    def log_only(self) -> bool:
        """True when delta itself is not representable and only log_delta is meaningful."""
        return self.log_delta > _LOG_FLOAT_MAX


def pairwise_distances(z: np.ndarray) -> np.ndarray:
    """Full (n, n) matrix of |z_i - z_j| with zeros on the diagonal."""
    z = np.asarray(z, dtype=complex)
    return np.abs(z[:, None] - z[None, :])


def discriminant(config: PointConfig) -> tuple[float, float]:
    """Product of squared pairwise distances, with its natural logarithm.

    Returns
    -------
    (delta, log_delta) : tuple of float
        ``delta`` is exp(log_delta) when representable (inf past the float
        range; see EvalReport.log_only), 1.0 for n <= 1 by the empty-product
        convention, and 0.0 with log_delta = -inf when two points coincide.
    """
    n = config.n
    if n <= 1:
        return 1.0, 0.0
    d = pairwise_distances(config.as_complex)
    off = ~np.eye(n, dtype=bool)
    if (d[off] == 0.0).any():
        return 0.0, -math.inf
    log_delta = float(np.sum(np.log(d[off])))
    delta = math.exp(log_delta) if log_delta <= _LOG_FLOAT_MAX else math.inf
    return delta, log_delta


def diameter(config: PointConfig) -> float:
    """Largest pairwise distance. Requires n >= 2."""
    if config.n < 2:
        raise InvalidConfigError("diameter requires at least 2 points")
    return float(pairwise_distances(config.as_complex).max())


def normalize_to_diameter(config: PointConfig, target: float = 2.0) -> PointConfig:
    """Uniformly rescaled copy with the given diameter (relative 1e-14).

    An input already at the target diameter is returned unchanged.
    """
    if target <= 0:
        raise InvalidConfigError("target diameter must be positive")
    diam = diameter(config)
    if diam == 0.0:
        raise InvalidConfigError("zero-diameter configuration cannot be rescaled")
    if abs(diam - target) <= 1e-14 * target:
        return config
    return PointConfig(config.points * (target / diam))


def normalized_discriminant(config: PointConfig, rescale_to_diameter: bool = True) -> float:
    """Delta / n^n, optionally rescaling the configuration to diameter 2 first."""
    n = config.n
    if n < 1:
        raise InvalidConfigError("normalized discriminant requires n >= 1")
    if rescale_to_diameter and n >= 2 and diameter(config) == 0.0:
        raise InvalidConfigError("zero-diameter configuration cannot be rescaled")
    _, log_delta = discriminant(config)
    if log_delta == -math.inf:
        return 0.0
    if rescale_to_diameter and n >= 2:
        log_delta += n * (n - 1) * math.log(2.0 / diameter(config))
    return math.exp(log_delta - n * math.log(n))


def log_delta_bar(config: PointConfig) -> float:
    """log(Delta / n^n) of the configuration rescaled to diameter 2."""
    n = config.n
    if n < 2:
        raise InvalidConfigError("log_delta_bar requires n >= 2")
    _, log_delta = discriminant(config)
    diam = diameter(config)
    if diam == 0.0 or log_delta == -math.inf:
        return -math.inf
    return log_delta + n * (n - 1) * math.log(2.0 / diam) - n * math.log(n)


def evaluate(config: PointConfig) -> EvalReport:
    """Full evaluation report: delta_bar is delta / n^n of the configuration
    as given (rescale beforehand to compare diameter-2 values)."""
    if config.n < 2:
        raise InvalidConfigError("evaluate requires n >= 2")
    delta, log_delta = discriminant(config)
    diam = diameter(config)
    if diam == 0.0:
        raise InvalidConfigError("zero-diameter configuration")
    delta_bar = 0.0 if log_delta == -math.inf else math.exp(
        log_delta - config.n * math.log(config.n))
    return EvalReport(n=config.n, delta=delta, log_delta=log_delta,
                      delta_bar=delta_bar, diameter=diam)


def is_convex_position(config: PointConfig, tol: float = 1e-9) -> bool:
    """True iff every point is a strict vertex of the convex hull.

    Points inside the hull or on the relative interior of a hull edge fail.
    The turn test uses an absolute cross-product threshold tol * diameter^2.
    """
    n = config.n
    if n < 3:
        raise InvalidConfigError("convex position requires n >= 3")
    if not config.is_distinct():
        raise SingularConfigError("coincident points")
    pts = config.points
    eps = tol * diameter(config) ** 2

    order = np.lexsort((pts[:, 1], pts[:, 0]))
    sorted_pts = pts[order]

    def cross(o, a, b):
        return (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])

    def chain(points):
        hull = []
        for p in points:
            while len(hull) > 1 and cross(hull[-2], hull[-1], p) <= eps:
                hull.pop()
            hull.append(p)
        return hull

    lower = chain(sorted_pts)
    upper = chain(sorted_pts[::-1])
    hull_pts = lower[:-1] + upper[:-1]
    return len(hull_pts) == n


def objective_gradient(config: PointConfig) -> np.ndarray:
    """Gradient of f = sum_{j<k} log |z_k - z_j|^2 as a flat (2n,) array.

    Layout is interleaved per point: [df/dx_1, df/dy_1, df/dx_2, ...].
    """
    if config.n < 2:
        raise InvalidConfigError("gradient requires n >= 2")
    if not config.is_distinct():
        raise SingularConfigError("coincident points make the objective singular")
    g = complex_gradient(config.as_complex)
    out = np.empty(2 * config.n)
    out[0::2] = g.real
    out[1::2] = g.imag
    return out


def complex_gradient(z: np.ndarray) -> np.ndarray:
    """Per-point gradient df/dx_k + i df/dy_k of f = sum log |z_k - z_j|^2."""
    diff = z[:, None] - z[None, :]
    np.fill_diagonal(diff, 1.0)
    w = 2.0 * diff / np.abs(diff) ** 2
    np.fill_diagonal(w, 0.0)
    return w.sum(axis=1)
