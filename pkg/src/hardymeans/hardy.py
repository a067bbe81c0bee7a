"""Summability-constant machinery.

For a mean M, the central quantity is the smallest constant C with
sum_n M(x_1, ..., x_n) <= C * sum_n x_n over all positive summable
sequences.  The tools here:

* ``pn_sequence``   -- p_n = n * M(1, 1/2, ..., 1/n), a nondecreasing
  lower approximation of the constant for homogeneous means that are
  symmetric, increasing, Jensen concave and repetition invariant; its
  limit is the constant itself, so a finite truncation is certified
  from below.
* ``hardy_constant`` -- dispatches between the homogeneous p_n limit
  and an uncertified sup-over-grid / tail-window estimator for
  non-homogeneous means.
* ``closed_form_hardy`` -- the registry of exactly known constants
  (power means, two-exponent Gini region, Gaussian products of
  registered means) and of exactly known non-summability verdicts.
* ``hardy_sequence_bound`` -- multi-start derivative-free maximization
  of the n-term ratio, always reported as a lower bound, with an
  exhaustive simplex-grid oracle for small n.
* ``liminf_ratio`` -- tail-window lower estimates along named
  non-summable sequences.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy import optimize

from .core import (
    Bajraktarevic,
    Deviation,
    ArithmeticDeviation,
    PairDeviation,
    Gauss,
    Gini,
    MeanComputationError,
    MeanExpr,
    MinOf,
    MaxOf,
    Power,
    QuasiArithmetic,
    as_samples,
    evaluate,
)
from .gauss import GaussConfig, gauss_product
from .probes import ProbeConfig, probe_properties

__all__ = [
    "canonical",
    "ClosedForm",
    "closed_form_hardy",
    "published_tolerance",
    "PnSequence",
    "pn_sequence",
    "prefix_means",
    "HardyConfig",
    "HardyEstimate",
    "hardy_constant",
    "SEQUENCES",
    "LiminfEstimate",
    "liminf_ratio",
    "hardy_ratio",
    "SearchConfig",
    "HardySeqBound",
    "hardy_sequence_bound",
    "simplex_grid_bound",
    "PartialCheck",
    "hardy_partial_check",
]


# ---------------------------------------------------------------------------
# canonical reductions and the closed-form registry


def canonical(expr: MeanExpr) -> MeanExpr:
    """Reduce an expression along exact family identities.

    Quasi-arithmetic means with identity/log/power generators are power
    means; a Gini mean with one zero exponent is a power mean; the
    arithmetic deviation gives the arithmetic mean; a pair deviation
    gives the corresponding two-generator mean, which for power
    generators is a Gini mean.  Only identities that hold exactly are
    applied.
    """
    if isinstance(expr, QuasiArithmetic):
        g = expr.gen
        if g.kind == "identity":
            return Power(1.0)
        if g.kind == "log":
            return Power(0.0)
        if g.kind in ("pow", "neg_pow"):
            return Power(g.p)
        return expr
    if isinstance(expr, Gini):
        if expr.q == 0.0:
            return Power(expr.p)
        if expr.p == 0.0:
            return Power(expr.q)
        return expr
    if isinstance(expr, Bajraktarevic):
        if expr.f.kind in ("pow", "neg_pow") and expr.g.kind == "pow":
            return canonical(Gini(expr.f.p, expr.g.p))
        return expr
    if isinstance(expr, Deviation):
        if isinstance(expr.dev, ArithmeticDeviation):
            return Power(1.0)
        if isinstance(expr.dev, PairDeviation):
            return canonical(Bajraktarevic(expr.dev.f, expr.dev.g))
        return expr
    if isinstance(expr, Gauss):
        return Gauss(tuple(canonical(c) for c in expr.children))
    return expr


@dataclass(frozen=True)
class ClosedForm:
    """Registry answer: an exact constant, or an exact non-summability
    verdict (value None, is_hardy False)."""

    value: float | None
    is_hardy: bool
    provenance: str


def closed_form_hardy(expr: MeanExpr) -> ClosedForm | None:
    """Exact constant or non-summability verdict, when known.

    Power mean: constant (1-p)^(-1/p) for p < 0 or 0 < p < 1, e at
    p = 0, and "not summable" for p >= 1.  Gini: the mean is summable
    exactly when min(p,q) <= 0 and max(p,q) < 1; the constant
    ((1-q)/(1-p))^(1/(p-q)) is registered on the region
    min(p,q) <= 0 <= max(p,q) < 1.  Gaussian products: the product of
    the children's constants, evaluated with the product itself, when
    every child is registered and summable; a product of power means
    with any exponent >= 1 is not summable.  Returns None when the
    registry has nothing exact to say.
    """
    e = canonical(expr)
    if isinstance(e, Power):
        p = e.p
        if p >= 1.0:
            return ClosedForm(None, False, "power mean with p >= 1 is not summable")
        if p == 0.0:
            return ClosedForm(math.e, True, "geometric-mean constant e")
        return ClosedForm((1.0 - p) ** (-1.0 / p), True, "power-mean constant (1-p)^(-1/p)")
    if isinstance(e, Gini):
        p, q = e.p, e.q
        if min(p, q) > 0.0 or max(p, q) >= 1.0:
            return ClosedForm(
                None,
                False,
                "Gini mean is summable only when min(p,q) <= 0 and max(p,q) < 1",
            )
        if max(p, q) < 0.0:
            return None  # summable, but the constant is not registered there
        # p == q == 0 was reduced to Power(0) by canonical()
        return ClosedForm(
            ((1.0 - q) / (1.0 - p)) ** (1.0 / (p - q)),
            True,
            "Gini constant ((1-q)/(1-p))^(1/(p-q))",
        )
    if isinstance(e, Gauss):
        forms = [closed_form_hardy(c) for c in e.children]
        if all(f is not None and f.is_hardy for f in forms):
            constants = [f.value for f in forms]
            return ClosedForm(
                gauss_product(e.children, constants),
                True,
                "product evaluated at the children's constants",
            )
        if all(isinstance(c, Power) for c in e.children):
            # summable iff every exponent is < 1
            return ClosedForm(
                None, False, "product of power means with max exponent >= 1"
            )
        return None
    return None


def published_tolerance(expr: MeanExpr) -> float | None:
    """Relative convergence tolerance of the n_max = 10^4 estimate
    against the registered constant: 0.5% when all exponents are <= 0,
    1.5% when the largest exponent lies in (0, 1) (the singular endpoint
    slows convergence like n^(p-1)); products inherit the worst child."""
    e = canonical(expr)
    if isinstance(e, Power):
        if e.p >= 1.0:
            return None
        return 0.005 if e.p <= 0.0 else 0.015
    if isinstance(e, Gini):
        top = max(e.p, e.q)
        if top >= 1.0 or min(e.p, e.q) > 0.0:
            return None
        return 0.005 if top <= 0.0 else 0.015
    if isinstance(e, Gauss):
        tols = [published_tolerance(c) for c in e.children]
        if any(t is None for t in tols):
            return None
        return max(tols)
    return None


# ---------------------------------------------------------------------------
# prefix means and the p_n sweep


def _prefix_means_fast(expr: MeanExpr, xs: np.ndarray) -> np.ndarray | None:
    """Running-sum evaluation of all prefixes for the families that
    permit it; None when the family has no incremental form or the
    running sums leave the finite range."""
    n_arr = np.arange(1.0, xs.size + 1.0)
    with np.errstate(over="ignore", invalid="ignore", divide="ignore"):
        if isinstance(expr, Power):
            if expr.p == 0.0:
                return np.exp(np.cumsum(np.log(xs)) / n_arr)
            t = xs ** expr.p
            if not np.all(np.isfinite(t)):
                return None
            out = (np.cumsum(t) / n_arr) ** (1.0 / expr.p)
            return out if np.all(np.isfinite(out)) else None
        if isinstance(expr, Gini):
            p, q = expr.p, expr.q
            logx = np.log(xs)
            if p == q:
                t = xs ** p
                if not np.all(np.isfinite(t)):
                    return None
                out = np.exp(np.cumsum(t * logx) / np.cumsum(t))
                return out if np.all(np.isfinite(out)) else None
            if p < q:
                p, q = q, p
            tp, tq = xs ** p, xs ** q
            if not (np.all(np.isfinite(tp)) and np.all(np.isfinite(tq))):
                return None
            out = (np.cumsum(tp) / np.cumsum(tq)) ** (1.0 / (p - q))
            return out if np.all(np.isfinite(out)) else None
        if isinstance(expr, QuasiArithmetic):
            vals = expr.gen(xs)  # explicit OverflowError is part of the contract
            out = expr.gen.inverse(np.cumsum(vals) / n_arr)
            return np.asarray(out, dtype=float)
        if isinstance(expr, MinOf):
            return np.minimum.accumulate(xs)
        if isinstance(expr, MaxOf):
            return np.maximum.accumulate(xs)
    return None


def prefix_means(expr: MeanExpr, x, ns=None) -> np.ndarray:
    """M(x[:n]) for each n in ``ns`` (all prefixes by default).

    Power, Gini and quasi-arithmetic means use running power sums; the
    implicit families fall back to one evaluation per prefix.
    """
    xs = as_samples(x)
    fast = _prefix_means_fast(expr, xs)
    if fast is not None:
        if ns is None:
            return fast
        return fast[np.asarray(list(ns), dtype=int) - 1]
    lengths = range(1, xs.size + 1) if ns is None else ns
    return np.array([evaluate(expr, xs[:k]) for k in lengths])


@dataclass(frozen=True, eq=False)
class PnSequence:
    """Values p_n = n * M(1, 1/2, ..., 1/n) for n = 1..n_max, with the
    monotonicity audit (largest observed decrease)."""

    expr: MeanExpr
    n_max: int
    values: np.ndarray
    max_decrease: float

    @property
    def final(self) -> float:
        return float(self.values[-1])


def pn_sequence(expr: MeanExpr, n_max: int) -> PnSequence:
    if n_max < 1:
        raise ValueError("n_max must be at least 1")
    x = 1.0 / np.arange(1.0, n_max + 1.0)
    values = np.arange(1.0, n_max + 1.0) * prefix_means(expr, x)
    if n_max > 1:
        max_decrease = float(max(0.0, np.max(values[:-1] - values[1:])))
    else:
        max_decrease = 0.0
    return PnSequence(expr=expr, n_max=n_max, values=values, max_decrease=max_decrease)


# ---------------------------------------------------------------------------
# the constant estimator


def default_y_grid() -> tuple[float, ...]:
    """41 log-spaced points across the scale range where
    non-homogeneous quasi-arithmetic means vary."""
    return tuple(float(v) for v in np.geomspace(1e-3, 1e3, 41))


@dataclass(frozen=True)
class HardyConfig:
    n_max: int = 10_000
    y_grid: tuple[float, ...] | None = None  # grid method only; None -> default
    divergence_ceiling: float = 1e6
    # moderate entries keep the gate evaluable for growth-limited means
    probe: ProbeConfig = field(
        default_factory=lambda: ProbeConfig(samples=64, seed=0, entry_range=(0.1, 10.0))
    )

    def __post_init__(self):
        if self.n_max < 1:
            raise ValueError("n_max must be at least 1")
        if not self.divergence_ceiling > 0:
            raise ValueError("divergence_ceiling must be positive")


_GATE_PROPERTIES = (
    "homogeneity",
    "symmetry",
    "increasing",
    "jensen_concavity",
    "repetition_invariance",
)


@dataclass(frozen=True, eq=False)
class HardyEstimate:
    """Estimate of the summability constant with its provenance.

    ``estimate`` is math.inf when the mean is reported non-summable;
    ``reference`` carries the registry constant when one exists, and
    ``reference_kind`` is "closed-form", "not-a-hardy-mean" or None.
    """

    method: str  # "homogeneous-limit" | "sup-liminf-grid"
    estimate: float
    n_max: int
    reference: float | None
    reference_kind: str | None
    tolerance: float | None
    divergent: bool
    notes: tuple[str, ...]
    y_grid: tuple[float, ...] | None = None
    pn: PnSequence | None = None


def _growth_trace(pn: PnSequence) -> str:
    checkpoints = sorted(
        {max(1, pn.n_max // 100), max(1, pn.n_max // 10), max(1, pn.n_max // 2), pn.n_max}
    )
    pairs = ", ".join(f"p_{n}={pn.values[n - 1]:.6g}" for n in checkpoints)
    return f"growth trace: {pairs}"


def hardy_constant(expr: MeanExpr, cfg: HardyConfig = HardyConfig()) -> HardyEstimate:
    """Estimate the summability constant of a mean.

    Homogeneous means (per the seeded probe) use the monotone p_n
    truncation, a certified-from-below estimate when the symmetry,
    increasingness, concavity and repetition probes also pass.
    Non-homogeneous means fall back to the uncertified grid estimator:
    the maximum over a log-spaced y-grid of the minimum over the tail
    window [n_max/2, n_max] of (n/y) * M(y/1, ..., y/n).  Registered
    non-summable means are reported divergent with a growth trace and
    never with a finite certified constant.
    """
    form = closed_form_hardy(expr)
    report = probe_properties(expr, cfg.probe)
    failed = tuple(name for name in _GATE_PROPERTIES if not report.holds(name))

    notes: list[str] = []
    reference = form.value if form is not None else None
    reference_kind = None
    if form is not None:
        reference_kind = "closed-form" if form.is_hardy else "not-a-hardy-mean"
        notes.append(f"registry: {form.provenance}")
    tolerance = published_tolerance(expr)

    if form is not None and not form.is_hardy:
        pn = pn_sequence(expr, cfg.n_max)
        notes.append("not a Hardy mean; no finite certified constant exists")
        notes.append(_growth_trace(pn))
        return HardyEstimate(
            method="homogeneous-limit",
            estimate=math.inf,
            n_max=cfg.n_max,
            reference=None,
            reference_kind=reference_kind,
            tolerance=None,
            divergent=True,
            notes=tuple(notes),
            pn=pn,
        )

    if report.holds("homogeneity"):
        pn = pn_sequence(expr, cfg.n_max)
        exceeded = np.nonzero(pn.values > cfg.divergence_ceiling)[0]
        if exceeded.size:
            witness = int(exceeded[0]) + 1
            notes.append(
                f"p_n exceeded the divergence ceiling {cfg.divergence_ceiling:g} "
                f"at n={witness}; non-Hardy at this scale"
            )
            notes.append(_growth_trace(pn))
            return HardyEstimate(
                method="homogeneous-limit",
                estimate=math.inf,
                n_max=cfg.n_max,
                reference=reference,
                reference_kind=reference_kind,
                tolerance=None,
                divergent=True,
                notes=tuple(notes),
                pn=pn,
            )
        if failed:
            notes.append(
                "estimate (uncertified): probes failed for "
                + ", ".join(failed)
            )
        else:
            notes.append(
                "certified-from-below: monotone p_n truncation of the limit formula"
            )
        return HardyEstimate(
            method="homogeneous-limit",
            estimate=pn.final,
            n_max=cfg.n_max,
            reference=reference,
            reference_kind=reference_kind,
            tolerance=tolerance,
            divergent=False,
            notes=tuple(notes),
            pn=pn,
        )

    # non-homogeneous: sup over the y-grid of a tail-window liminf estimate
    y_grid = cfg.y_grid if cfg.y_grid is not None else default_y_grid()
    window_lo = max(1, cfg.n_max // 2)
    ns = range(window_lo, cfg.n_max + 1)
    n_arr = np.arange(window_lo, cfg.n_max + 1, dtype=float)
    best = -math.inf
    best_y = None
    skipped: list[str] = []
    for y in y_grid:
        x = y / np.arange(1.0, cfg.n_max + 1.0)
        try:
            tail = prefix_means(expr, x, ns=ns)
            value = float(np.min(n_arr / y * tail))
        except (OverflowError, MeanComputationError) as exc:
            skipped.append(f"y={y:g} skipped ({type(exc).__name__})")
            continue
        if value > best:
            best, best_y = value, y
    if best_y is None:
        raise MeanComputationError(
            "no y-grid point was evaluable; widen or shift the grid"
        )
    notes.append("estimate (uncertified): grid/tail-window approximation of a sup-liminf")
    notes.append(f"grid maximum attained at y={best_y:g}")
    if failed:
        notes.append("probes failed for " + ", ".join(failed))
    if skipped:
        notes.append("; ".join(skipped))
    divergent = best > cfg.divergence_ceiling
    return HardyEstimate(
        method="sup-liminf-grid",
        estimate=math.inf if divergent else best,
        n_max=cfg.n_max,
        reference=reference,
        reference_kind=reference_kind,
        tolerance=tolerance,
        divergent=divergent,
        notes=tuple(notes),
        y_grid=tuple(y_grid),
    )


# ---------------------------------------------------------------------------
# tail-window liminf estimates along named non-summable sequences


SEQUENCES = {
    "harmonic": lambda i: 1.0 / i,
    "constant": lambda i: np.ones_like(i, dtype=float),
    "sqrt": lambda i: 1.0 / np.sqrt(i),
}


@dataclass(frozen=True)
class LiminfEstimate:
    sequence: str
    n_max: int
    window: tuple[int, int]
    estimate: float


def liminf_ratio(expr: MeanExpr, sequence: str, n_max: int) -> LiminfEstimate:
    """min over n in [n_max/2, n_max] of M(x_1, ..., x_n) / x_n along a
    named non-summable sequence; a lower estimate of the liminf, which
    in turn lower-bounds the summability constant."""
    if n_max < 2:
        raise ValueError("n_max must be at least 2")
    if sequence not in SEQUENCES:
        raise ValueError(f"unknown sequence {sequence!r}; choose from {sorted(SEQUENCES)}")
    xs = SEQUENCES[sequence](np.arange(1.0, n_max + 1.0))
    lo = max(1, n_max // 2)
    tail = prefix_means(expr, xs, ns=range(lo, n_max + 1))
    estimate = float(np.min(tail / xs[lo - 1 :]))
    return LiminfEstimate(sequence=sequence, n_max=n_max, window=(lo, n_max), estimate=estimate)


# ---------------------------------------------------------------------------
# n-term ratio maximization


def hardy_ratio(expr: MeanExpr, x) -> float:
    """(M(x_1) + M(x_1,x_2) + ... + M(x_1,...,x_n)) / (x_1 + ... + x_n)."""
    xs = as_samples(x)
    return float(math.fsum(prefix_means(expr, xs)) / xs.sum())


@dataclass(frozen=True)
class SearchConfig:
    restarts: int = 12
    seed: int = 0
    budget: int = 2000  # objective evaluations per restart
    extra_starts: tuple = ()  # extra initial vectors (tuples of positives)

    def __post_init__(self):
        if self.restarts < 1:
            raise ValueError("restarts must be at least 1")
        if self.budget < 10:
            raise ValueError("budget must be at least 10")


@dataclass(frozen=True)
class HardySeqBound:
    """Lower estimate of the n-term constant: best ratio found, the
    vector achieving it, and the per-restart best values."""

    n: int
    estimate: float
    maximizer: tuple[float, ...]
    restarts: int
    trace: tuple[float, ...]


def _search_starts(n: int, cfg: SearchConfig, rng: np.random.Generator) -> list[np.ndarray]:
    starts = [np.zeros(n)]
    for c in (1.0, 3.0):
        starts.append(-c * np.arange(n, dtype=float))
    head_heavy = np.full(n, -25.0)
    head_heavy[0] = 0.0
    starts.append(head_heavy)
    for x0 in cfg.extra_starts:
        arr = np.log(as_samples(x0))
        if arr.size != n:
            raise ValueError("extra start has wrong dimension")
        starts.append(arr - arr.max())
    while len(starts) < cfg.restarts:
        starts.append(rng.normal(0.0, 4.0, size=n))
    return starts[: max(cfg.restarts, len(starts))]


def hardy_sequence_bound(
    expr: MeanExpr, n: int, cfg: SearchConfig = SearchConfig()
) -> HardySeqBound:
    """Maximize the n-term ratio by multi-start Nelder-Mead.

    The ratio is scale invariant whenever the mean is homogeneous, so
    the search runs on softmax-parametrized simplex points; boundary
    suprema are reachable because the parametrization lets coordinates
    decay to ~1e-300.  The result is a lower estimate of the n-term
    constant, achieved by the reported vector.
    """
    if n < 1:
        raise ValueError("n must be at least 1")
    if n == 1:
        x = (1.0,)
        return HardySeqBound(
            n=1,
            estimate=hardy_ratio(expr, x),
            maximizer=x,
            restarts=0,
            trace=(),
        )
    rng = np.random.default_rng(cfg.seed)

    def to_point(z: np.ndarray) -> np.ndarray:
        w = np.exp(z - z.max())
        return np.maximum(w / w.sum(), 1e-300)

    def negated(z: np.ndarray) -> float:
        try:
            return -hardy_ratio(expr, to_point(z))
        except (OverflowError, MeanComputationError):
            return math.inf

    best_value = -math.inf
    best_x: np.ndarray | None = None
    trace: list[float] = []
    for z0 in _search_starts(n, cfg, rng):
        res = optimize.minimize(
            negated,
            z0,
            method="Nelder-Mead",
            options={
                "maxfev": cfg.budget,
                "maxiter": cfg.budget,
                "xatol": 1e-12,
                "fatol": 1e-14,
                "adaptive": True,
            },
        )
        value = -res.fun if math.isfinite(res.fun) else -math.inf
        trace.append(value)
        if value > best_value:  # ties keep the earliest restart
            best_value = value
            best_x = to_point(res.x)
    if best_x is None:
        raise MeanComputationError("search budget exhausted with no feasible evaluation")
    maximizer = tuple(float(v) for v in best_x)
    return HardySeqBound(
        n=n,
        estimate=hardy_ratio(expr, maximizer),
        maximizer=maximizer,
        restarts=len(trace),
        trace=tuple(trace),
    )


def _compositions(total: int, parts: int):
    if parts == 1:
        yield (total,)
        return
    for head in range(total + 1):
        for rest in _compositions(total - head, parts - 1):
            yield (head,) + rest


def simplex_grid_bound(
    expr: MeanExpr, n: int, denominator: int = 64, floor: float = 1e-12
) -> float:
    """Exhaustive maximum of the n-term ratio over the closed simplex
    grid {k/denominator}; zero coordinates are replaced by ``floor`` to
    probe boundary limits (the supremum may sit on the boundary, e.g.
    the arithmetic mean at n = 2).  Intended as an oracle for small n.
    """
    if n < 1:
        raise ValueError("n must be at least 1")
    best = -math.inf
    for comp in _compositions(denominator, n):
        x = np.maximum(np.array(comp, dtype=float) / denominator, floor)
        best = max(best, hardy_ratio(expr, x))
    return best


# ---------------------------------------------------------------------------
# truncated partial-sum check


@dataclass(frozen=True)
class PartialCheck:
    ratio: float
    reference: float
    strictly_below: bool


def hardy_partial_check(expr: MeanExpr, x, reference: float) -> PartialCheck:
    """Ratio of summed prefix means to the summed entries of a truncated
    summable sequence, and whether it stays strictly below a reference
    constant."""
    xs = as_samples(x)
    if not reference > 0.0:
        raise ValueError("reference constant must be positive")
    ratio = float(math.fsum(prefix_means(expr, xs)) / xs.sum())
    return PartialCheck(ratio=ratio, reference=reference, strictly_below=ratio < reference)
