"""
# +==== BEGIN bridgelab =================+
# PROJECT: bridgelab
# FILE: metrics.py
# CREATION DATE: 18-10-2026
# LAST Modified: 18-10-2026
# DESCRIPTION:
# A toolkit for Schrödinger bridge transports, validated against closed-form oracles.
# /STOP
# COPYRIGHT: (c) Asperguide
# PURPOSE: Distribution comparison helpers: Gaussian kernel density estimates, histogram total variation, moment summaries and plot-ready tables.
# // AR
# +==== END bridgelab =================+
"""

from dataclasses import dataclass
from typing import Callable, List, Optional, Tuple, Union

import numpy as np

try:
    from . import constants as CONST
except ImportError:
    import constants as CONST

Density = Callable[[np.ndarray], np.ndarray]
SamplesOrDensity = Union[np.ndarray, Density]

_KDE_CHUNK = 1024


@dataclass(frozen=True, eq=False)
class KDE1D:
    """Gaussian kernel density estimate over a 1D sample."""
    samples: np.ndarray
    bandwidth: float

    def __post_init__(self) -> None:
        samples = np.asarray(self.samples, dtype=np.float64).ravel()
        if samples.size < 2 or not np.all(np.isfinite(samples)):
            raise CONST.DomainError("a KDE needs at least two finite samples")
        if not (np.isfinite(self.bandwidth) and self.bandwidth > 0):
            raise CONST.DomainError(f"KDE bandwidth must be positive, got {self.bandwidth!r}")
        object.__setattr__(self, "samples", samples)
        object.__setattr__(self, "bandwidth", float(self.bandwidth))

    def __call__(self, x: np.ndarray) -> np.ndarray:
        return self.evaluate(x)

    def evaluate(self, x: np.ndarray) -> np.ndarray:
        x = np.asarray(x, dtype=np.float64)
        flat = x.ravel()
        out = np.empty(flat.size)
        norm = 1.0 / (self.samples.size * self.bandwidth * np.sqrt(2.0 * np.pi))
        for start in range(0, flat.size, _KDE_CHUNK):
            block = flat[start:start + _KDE_CHUNK]
            z = (block[:, None] - self.samples[None, :]) / self.bandwidth
            out[start:start + _KDE_CHUNK] = norm * np.exp(-0.5 * z * z).sum(axis=1)
        return out.reshape(x.shape)

    def support(self, pad: float = 8.0) -> Tuple[float, float]:
        return float(self.samples.min() - pad * self.bandwidth), float(self.samples.max() + pad * self.bandwidth)


def kde_fit(samples: np.ndarray, bandwidth: Optional[float] = None) -> KDE1D:
    """Fit a KDE, defaulting to Silverman's bandwidth 1.06 std n^-1/5.

    Raises:
        DomainError: fewer than two samples, or a degenerate sample with no bandwidth given.
    """
    samples = np.asarray(samples, dtype=np.float64).ravel()
    if samples.size < 2:
        raise CONST.DomainError("a KDE needs at least two samples")
    if bandwidth is None:
        std = float(samples.std(ddof=1))
        if not std > 0:
            raise CONST.DomainError("degenerate sample: Silverman bandwidth is zero")
        bandwidth = 1.06 * std * samples.size ** (-0.2)
    return KDE1D(samples=samples, bandwidth=bandwidth)


def _bin_probabilities(source: SamplesOrDensity, edges: np.ndarray) -> np.ndarray:
    if callable(source):
        left = edges[:-1]
        right = edges[1:]
        middle = 0.5 * (left + right)
        values = [np.asarray(source(points), dtype=np.float64) for points in (left, middle, right)]
        return (right - left) / 6.0 * (values[0] + 4.0 * values[1] + values[2])
    samples = np.asarray(source, dtype=np.float64).ravel()
    if samples.size == 0:
        raise CONST.DomainError("cannot compare an empty sample")
    counts, _ = np.histogram(samples, bins=edges)
    return counts / samples.size


def tv_histogram(a: SamplesOrDensity, b: SamplesOrDensity, bins: int = 200, value_range: Tuple[float, float] = (-6.0, 6.0)) -> float:
    """Half the L1 distance between binned probabilities on a shared binning.

    Samples contribute count / total count per bin; densities are integrated
    per bin with Simpson's rule.

    Raises:
        DomainError: empty samples or an invalid binning.
    """
    low, high = value_range
    if bins < 1 or not high > low:
        raise CONST.DomainError(f"invalid binning: {bins} bins over {value_range}")
    edges = np.linspace(low, high, bins + 1)
    p = _bin_probabilities(a, edges)
    q = _bin_probabilities(b, edges)
    return float(min(1.0, 0.5 * np.abs(p - q).sum()))


@dataclass(frozen=True, eq=False)
class MomentSummary:
    """Sample mean, unbiased covariance and the standard errors of the mean."""
    mean: np.ndarray
    covariance: np.ndarray
    std_error: np.ndarray
    n: int


def moment_summary(samples: np.ndarray) -> MomentSummary:
    samples = np.asarray(samples, dtype=np.float64)
    if samples.ndim == 1:
        samples = samples[:, None]
    if samples.ndim != 2 or samples.shape[0] < 2:
        raise CONST.DomainError("moment summary needs at least two samples")
    n = samples.shape[0]
    covariance = np.atleast_2d(np.cov(samples, rowvar=False, ddof=1))
    return MomentSummary(
        mean=samples.mean(axis=0),
        covariance=covariance,
        std_error=np.sqrt(np.diag(covariance) / n),
        n=n,
    )


def density_rows(grid: np.ndarray, density: Density) -> List[Tuple[float, float]]:
    """(x, density) table rows."""
    grid = np.asarray(grid, dtype=np.float64)
    values = np.asarray(density(grid), dtype=np.float64)
    return [(float(x), float(v)) for x, v in zip(grid, values)]


def histogram2d_rows(
    x: np.ndarray,
    y: np.ndarray,
    bins: int = 200,
    value_range: Tuple[Tuple[float, float], Tuple[float, float]] = ((-6.0, 6.0), (-6.0, 6.0))
) -> List[Tuple[float, float, float]]:
    """(x, y, density) rows of a normalised 2D histogram, one per cell centre."""
    x = np.asarray(x, dtype=np.float64).ravel()
    y = np.asarray(y, dtype=np.float64).ravel()
    if x.size == 0 or x.shape != y.shape:
        raise CONST.DomainError("2D histogram needs two equal nonempty samples")
    counts, x_edges, y_edges = np.histogram2d(x, y, bins=bins, range=value_range)
    area = np.diff(x_edges)[:, None] * np.diff(y_edges)[None, :]
    density = counts / (x.size * area)
    x_centres = 0.5 * (x_edges[1:] + x_edges[:-1])
    y_centres = 0.5 * (y_edges[1:] + y_edges[:-1])
    return [
        (float(xc), float(yc), float(density[i, j]))
        for i, xc in enumerate(x_centres)
        for j, yc in enumerate(y_centres)
    ]

