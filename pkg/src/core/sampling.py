"""
Random samples from U_delta and their empirical copula
"""

import logging
from fractions import Fraction
from typing import Optional, Sequence

import numpy as np

from src.core.bounds import FSplit, build_fsplit
from src.core.diagonal import DiagonalSection, delta_hat
from src.core.geometry import CurveSet, build_curves

logger = logging.getLogger(__name__)


def _right_slopes(fs: FSplit, xs: np.ndarray) -> np.ndarray:
    knots = np.array([float(k) for k in fs.f1.xs])
    slopes = np.array([float(s) for s in fs.f1.slopes])
    idx = np.clip(np.searchsorted(knots, xs, side="right") - 1, 0, len(slopes) - 1)
    return slopes[idx]


def sample_u_delta(
    d: DiagonalSection, count: int, seed: int = 0, curves: Optional[CurveSet] = None
) -> np.ndarray:
    """Draw count points (x, y) from U_delta.

    X is uniform. Given X = x, the conditional law of Y has an atom of mass
    f1'(x) at g_L(x) and the remaining mass at g_U(x), because the partial
    derivative of U in x is 0 below g_L, f1'(x) between the curves and 1
    above g_U. The right slope of f1 is used at its breakpoints.
    """
    if count < 1:
        raise ValueError(f"count must be positive, got {count}")
    dh = delta_hat(d)
    fs = build_fsplit(d, dh)
    curves = curves or build_curves(d, dh, fs)

    rng = np.random.default_rng(seed)
    xs = rng.uniform(0.0, 1.0, size=count)
    coin = rng.uniform(0.0, 1.0, size=count)

    lower_mass = _right_slopes(fs, xs)
    ys = np.where(
        coin < lower_mass,
        curves.g_lower.evaluate_array(xs),
        curves.g_upper.evaluate_array(xs),
    )
    logger.debug(f"Drew {count} samples from U for '{d.provenance}' with seed {seed}")
    return np.column_stack((xs, ys))


def empirical_copula(samples: np.ndarray, points: Sequence[Fraction]) -> np.ndarray:
    """C_n(u, v) = share of samples with X <= u and Y <= v, on points x points"""
    grid = np.array([float(p) for p in points])
    ix = np.searchsorted(grid, samples[:, 0], side="left")
    iy = np.searchsorted(grid, samples[:, 1], side="left")
    counts = np.zeros((len(grid), len(grid)))
    np.add.at(counts, (ix, iy), 1.0)
    return counts.cumsum(axis=0).cumsum(axis=1) / len(samples)
