"""Gaussian products: simultaneous iteration of a vector of means.

Starting from any input vector, each step replaces the iterate with the
tuple of all component means evaluated on it.  When every component is
a mean the envelope [min, max] shrinks monotonically; the iteration
stops once the relative gap is below tolerance and the midpoint of the
final envelope is returned.  Failure to converge is an explicit error:
downstream estimates must never ingest an unconverged product.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .core import MeanExpr, NonConvergenceError, as_samples, evaluate

__all__ = ["GaussConfig", "gauss_step", "gauss_product"]


@dataclass(frozen=True)
class GaussConfig:
    tolerance: float = 1e-13
    max_iterations: int = 10_000

    def __post_init__(self):
        if not self.tolerance > 0.0:
            raise ValueError("tolerance must be positive")
        if self.max_iterations < 1:
            raise ValueError("max_iterations must be at least 1")


def _check_means(means: Sequence[MeanExpr]) -> tuple:
    means = tuple(means)
    if len(means) < 2:
        raise ValueError("a Gaussian product needs at least two means")
    return means


def gauss_step(means: Sequence[MeanExpr], v) -> np.ndarray:
    """One simultaneous step: component i is means[i] evaluated on v."""
    means = _check_means(means)
    vs = as_samples(v)
    return np.array([evaluate(m, vs) for m in means])


def gauss_product(
    means: Sequence[MeanExpr], v, cfg: GaussConfig = GaussConfig()
) -> float:
    """Common limit of the simultaneous iteration, from initial vector v.

    Stops when (max - min) / max of the iterate falls below
    cfg.tolerance and returns the midpoint of the final envelope.
    Raises NonConvergenceError (with the final gap) after
    cfg.max_iterations.
    """
    means = _check_means(means)
    w = as_samples(v)
    gap = float("inf")
    for iteration in range(cfg.max_iterations + 1):
        hi = float(w.max())
        lo = float(w.min())
        gap = (hi - lo) / hi
        if gap <= cfg.tolerance:
            return 0.5 * (hi + lo)
        if iteration == cfg.max_iterations:
            break
        w = gauss_step(means, w)
    raise NonConvergenceError(
        "Gaussian product did not converge",
        iterations=cfg.max_iterations,
        gap=gap,
    )
