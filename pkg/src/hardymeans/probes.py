"""Sampling-based probes for structural properties of means.

The probed properties are universally quantified, so sampling can only
refute them: a ``holds_on_samples`` verdict means "no violation found at
the configured tolerance", never a proof.  A ``violated`` verdict always
carries a reproducible counterexample whose margin exceeds the
tolerance.

Margins are relative.  For the strictness probe the violation is
*proximity* to the min/max bound, so its margin is reported as
``2*tol - separation`` (separation from each bound measured relative to
that bound), which exceeds the tolerance exactly when the separation
falls below it.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .core import MeanExpr, evaluate

__all__ = [
    "PROPERTY_NAMES",
    "ProbeConfig",
    "Counterexample",
    "Verdict",
    "PropertyReport",
    "probe_properties",
    "sample_vector",
]

PROPERTY_NAMES = (
    "symmetry",
    "mean_value",
    "repetition_invariance",
    "homogeneity",
    "increasing",
    "jensen_concavity",
    "jensen_convexity",
    "min_diminishing",
    "strictness",
)


@dataclass(frozen=True)
class ProbeConfig:
    samples: int = 200
    dims: tuple[int, int] = (1, 8)
    seed: int = 0
    tolerance: float = 1e-9
    entry_range: tuple[float, float] = (1e-3, 1e3)

    def __post_init__(self):
        if self.samples < 1:
            raise ValueError("samples must be at least 1")
        if not self.tolerance > 0.0:
            raise ValueError("tolerance must be positive")
        lo, hi = self.dims
        if lo < 1 or hi < lo:
            raise ValueError("dims must satisfy 1 <= lo <= hi")
        lo, hi = self.entry_range
        if not (0.0 < lo < hi):
            raise ValueError("entry_range must satisfy 0 < lo < hi")


@dataclass(frozen=True)
class Counterexample:
    vectors: tuple[tuple[float, ...], ...]
    observed: tuple[float, ...]
    margin: float


@dataclass(frozen=True)
class Verdict:
    holds_on_samples: bool
    counterexample: Counterexample | None = None


@dataclass(frozen=True)
class PropertyReport:
    expr: MeanExpr
    config: ProbeConfig
    verdicts: dict

    def holds(self, name: str) -> bool:
        return self.verdicts[name].holds_on_samples

    def violated(self) -> tuple[str, ...]:
        return tuple(
            name for name in PROPERTY_NAMES if not self.verdicts[name].holds_on_samples
        )


def sample_vector(rng: np.random.Generator, dim: int, entry_range) -> np.ndarray:
    """Log-uniform positive vector; the default range spans the scales
    where concavity failures of two-exponent means show up quickly."""
    lo, hi = entry_range
    return np.exp(rng.uniform(np.log(lo), np.log(hi), size=dim))


class _Tracker:
    """Keeps the worst (largest-margin) counterexample per property."""

    def __init__(self, tolerance: float):
        self.tolerance = tolerance
        self.worst: dict[str, Counterexample] = {}

    def observe(self, name, margin, vectors, observed):
        if margin <= self.tolerance:
            return
        prev = self.worst.get(name)
        if prev is None or margin > prev.margin:
            self.worst[name] = Counterexample(
                vectors=tuple(tuple(float(v) for v in vec) for vec in vectors),
                observed=tuple(float(o) for o in observed),
                margin=float(margin),
            )


def _rel(diff: float, *scales: float) -> float:
    return diff / max(1e-300, *map(abs, scales))


def probe_properties(expr: MeanExpr, cfg: ProbeConfig = ProbeConfig()) -> PropertyReport:
    """Probe the structural properties of a mean on seeded random samples.

    Deterministic: identical configuration (seed included) yields an
    identical report.  Jensen concavity/convexity are probed on
    equidimensional pairs, min-diminishing by appending the minimum of a
    non-constant vector, repetition invariance by blockwise m-fold
    repetition for m in {2, 3}, and increasingness by a +10% bump of a
    random coordinate.
    """
    rng = np.random.default_rng(cfg.seed)
    tracker = _Tracker(cfg.tolerance)
    lo_dim, hi_dim = cfg.dims

    for _ in range(cfg.samples):
        n = int(rng.integers(lo_dim, hi_dim + 1))
        x = sample_vector(rng, n, cfg.entry_range)
        mx = evaluate(expr, x)
        x_min, x_max = float(x.min()), float(x.max())

        # mean-value bounds
        margin = _rel(max(x_min - mx, mx - x_max), x_max)
        tracker.observe("mean_value", margin, [x], [mx])

        # symmetry
        perm = rng.permutation(n)
        mp = evaluate(expr, x[perm])
        tracker.observe(
            "symmetry", _rel(abs(mx - mp), mx, mp), [x, x[perm]], [mx, mp]
        )

        # repetition invariance, blockwise
        for m in (2, 3):
            mr = evaluate(expr, np.repeat(x, m))
            tracker.observe(
                "repetition_invariance", _rel(abs(mx - mr), mx, mr), [x], [mx, mr]
            )

        # homogeneity, with the scale factor confined to two octaves so
        # the scaled vector stays within an evaluable range
        t = float(np.exp(rng.uniform(np.log(0.25), np.log(4.0))))
        mh = evaluate(expr, t * x)
        tracker.observe(
            "homogeneity", _rel(abs(mh - t * mx), t * mx, mh), [x], [mx, mh, t]
        )

        # increasing under a +10% coordinate bump
        bumped = x.copy()
        bumped[int(rng.integers(n))] *= 1.1
        mb = evaluate(expr, bumped)
        tracker.observe("increasing", _rel(mx - mb, mx, mb), [x, bumped], [mx, mb])

        # Jensen concavity / convexity on an equidimensional pair
        y = sample_vector(rng, n, cfg.entry_range)
        my = evaluate(expr, y)
        mmid = evaluate(expr, 0.5 * (x + y))
        chord = 0.5 * (mx + my)
        tracker.observe(
            "jensen_concavity",
            _rel(chord - mmid, mx, my, mmid),
            [x, y],
            [mx, my, mmid],
        )
        tracker.observe(
            "jensen_convexity",
            _rel(mmid - chord, mx, my, mmid),
            [x, y],
            [mx, my, mmid],
        )

        if n >= 2 and x_max > x_min:
            # min-diminishing: appending the minimum must strictly decrease
            ma = evaluate(expr, np.append(x, x_min))
            tracker.observe(
                "min_diminishing", _rel(ma - mx, mx, ma), [x], [mx, ma]
            )
            # strictness: separation from each bound, relative to that
            # bound, must exceed tolerance (means hugging one bound on
            # wide-spread inputs are still strict)
            separation = min((mx - x_min) / x_min, (x_max - mx) / x_max)
            tracker.observe(
                "strictness", 2.0 * cfg.tolerance - separation, [x], [mx]
            )

    verdicts = {
        name: Verdict(
            holds_on_samples=name not in tracker.worst,
            counterexample=tracker.worst.get(name),
        )
        for name in PROPERTY_NAMES
    }
    return PropertyReport(expr=expr, config=cfg, verdicts=verdicts)
