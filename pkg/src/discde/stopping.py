"""Dyadic stopping-time generations for the derivative of a solution
quotient, the non-tangential maximal function of 1/w', and weak-L^p tail
fitting of its boundary distribution.

The construction is parametric in (C0, eps0): generation 0 collects the
maximal dyadic squares of at least second generation whose top-half center
satisfies |w'(z_Q)| <= C0^(-1/eps0), and each later generation refines with
the threshold eps0 * |w'(z_Q)| of its father.  The per-square length-decay
test (children's lengths summing to at most half the father's) is recorded
as data, not asserted, since suitable constants need not exist for every
parameter choice.
"""

from __future__ import annotations

import csv
import json
import math
from dataclasses import dataclass, field

import numpy as np

from .geometry import (
    DEFAULT_MAX_GENERATION,
    CarlesonSquare,
    generation_squares,
    stolz_contains,
)

TWO_PI = 2.0 * math.pi

DEFAULT_C0 = 2.0
DEFAULT_EPS0 = 0.125

_TINY = np.finfo(float).tiny


class ThresholdUnderflowError(ValueError):
    """C0^(-1/eps0) underflows double precision."""


def stopping_threshold(c0, eps0):
    if not c0 > 1:
        raise ValueError("C0 must exceed 1")
    if not 0 < eps0 < min(0.25, 1.0 / c0):
        raise ValueError("eps0 must lie in (0, min(1/4, 1/C0))")
    log_thr = -math.log(c0) / eps0
    if log_thr < math.log(_TINY):
        raise ThresholdUnderflowError(
            f"C0^(-1/eps0) = exp({log_thr:.1f}) underflows"
        )
    return math.exp(log_thr)


@dataclass
class StoppingNode:
    square: CarlesonSquare
    wprime_abs: float
    generation: int          # forest generation (not dyadic generation)
    parent: CarlesonSquare or None = None
    truncated: bool = False
    decay_pass: bool or None = None  # filled when the node is refined

    def to_record(self):
        return {
            "generation": self.generation,
            "square": [self.square.generation, self.square.index],
            "wprime_at_center": self.wprime_abs,
            "parent": None if self.parent is None
            else [self.parent.generation, self.parent.index],
            "decay_pass": self.decay_pass,
            "truncated": self.truncated,
        }


def _maximal_descent(wprime_abs, roots, threshold, max_generation,
                     min_generation=2):
    """Maximal dyadic squares below the roots with |w'(z_Q)| <= threshold.

    Depth-first: a branch stops at the first satisfying square, so the
    result is maximal with respect to inclusion by construction.  Squares
    reaching max_generation unresolved are returned separately.
    """
    selected, unresolved = [], []
    stack = list(roots)[::-1]
    while stack:
        sq = stack.pop()
        if sq.generation > max_generation:
            unresolved.append(sq)
            continue
        if sq.generation >= min_generation:
            value = wprime_abs(sq.z_q)
            if value <= threshold:
                selected.append((sq, value))
                continue
        if sq.generation >= max_generation:
            unresolved.append(sq)
            continue
        stack.extend(sq.children()[::-1])
    return selected, unresolved


@dataclass
class StoppingForest:
    """Generations G_0, G_1, ... of stopping squares for one |w'|."""

    wprime_abs: object       # callable z -> |w'(z)|
    c0: float = DEFAULT_C0
    eps0: float = DEFAULT_EPS0
    max_generation: int = 20
    generations: list = field(default_factory=list)  # list of [StoppingNode]
    unresolved: list = field(default_factory=list)   # squares per build step

    def __post_init__(self):
        stopping_threshold(self.c0, self.eps0)  # validates (c0, eps0)

    @property
    def big_l(self):
        """L = C0^(1 + 1/eps0)."""
        return self.c0 ** (1.0 + 1.0 / self.eps0)

    @property
    def big_m(self):
        """M = C0/eps0."""
        return self.c0 / self.eps0

    def length_sums(self):
        return [sum(node.square.ell for node in gen) for gen in self.generations]

    def all_nodes(self):
        return [node for gen in self.generations for node in gen]


def build_g0(wprime_abs, c0=DEFAULT_C0, eps0=DEFAULT_EPS0,
             max_generation=20):
    """Generation 0: maximal dyadic squares (second generation or deeper)
    with |w'(z_Q)| <= C0^(-1/eps0)."""
    threshold = stopping_threshold(c0, eps0)
    forest = StoppingForest(wprime_abs, c0, eps0, max_generation)
    roots = generation_squares(2)
    selected, unresolved = _maximal_descent(
        wprime_abs, roots, threshold, max_generation
    )
    forest.generations.append([
        StoppingNode(sq, v, 0) for sq, v in selected
    ])
    forest.unresolved.append(unresolved)
    return forest


def refine_generation(forest, n=None):
    """Build generation n+1 by refining every square of generation n with
    threshold eps0 * |w'(z_Q)|; records the per-square length-decay result."""
    if not forest.generations:
        raise ValueError("generation 0 has not been built")
    if n is None:
        n = len(forest.generations) - 1
    if n != len(forest.generations) - 1:
        raise ValueError("only the newest generation can be refined")
    next_gen, unresolved_here = [], []
    for node in forest.generations[n]:
        threshold = forest.eps0 * node.wprime_abs
        selected, unresolved = _maximal_descent(
            forest.wprime_abs, list(node.square.children()), threshold,
            forest.max_generation, min_generation=node.square.generation + 1,
        )
        children_length = sum(sq.ell for sq, _ in selected)
        node.decay_pass = children_length <= 0.5 * node.square.ell + 1e-15
        node.truncated = bool(unresolved)
        unresolved_here.extend(unresolved)
        for sq, v in selected:
            next_gen.append(StoppingNode(sq, v, n + 1, parent=node.square))
    forest.generations.append(next_gen)
    forest.unresolved.append(unresolved_here)
    return next_gen


def exhaustive_g0(wprime_abs, c0, eps0, max_generation):
    """Brute-force oracle for build_g0: enumerate all dyadic squares up to
    max_generation, keep those meeting the threshold, filter for maximality."""
    threshold = stopping_threshold(c0, eps0)
    hits = []
    for n in range(2, max_generation + 1):
        for sq in generation_squares(n):
            if wprime_abs(sq.z_q) <= threshold:
                hits.append(sq)
    return [
        sq for sq in hits
        if not any(sq.is_descendant_of(other) for other in hits)
    ]


# ---------------------------------------------------------------------------
# non-tangential maximal function


def stolz_sample(theta, alpha, r_max, n_radii=24):
    """Quasi-uniform sample of the Stolz region at e^(i theta): dyadic radii
    with angular windows proportional to the aperture at each depth."""
    points = []
    depths = np.arange(1, n_radii + 1)
    radii = 1 - (1 - r_max) ** (depths / n_radii)
    for r in radii:
        half_width = math.sqrt(max(alpha * alpha - 1, 0.0)) * (1 - r)
        n_ang = 5
        for t in np.linspace(-half_width, half_width, n_ang):
            z = r * np.exp(1j * (theta + t))
            if stolz_contains(theta, alpha, z):
                points.append(complex(z))
    points.append(complex(r_max * np.exp(1j * theta)))
    return points


def nontangential_max_inv(wprime_abs, alpha=2.0, n_theta=512, r_max=0.999,
                          n_radii=24):
    """Sampled theta -> sup over the Stolz region of 1/|w'|.

    Returns (thetas, samples) as arrays; a lower bound per theta.
    """
    if not alpha > 1:
        raise ValueError("aperture alpha must exceed 1")
    thetas = TWO_PI * np.arange(n_theta) / n_theta
    out = np.empty(n_theta)
    for i, theta in enumerate(thetas):
        best = 0.0
        for z in stolz_sample(theta, alpha, r_max, n_radii):
            v = wprime_abs(z)
            inv = np.inf if v == 0 else 1.0 / v
            if inv > best:
                best = inv
        out[i] = best
    return thetas, out


# ---------------------------------------------------------------------------
# weak-L^p fit


def predicted_p(c0, eps0):
    """p = 1/log2(C0/eps0)."""
    if not c0 > 1 or not 0 < eps0 < 1:
        raise ValueError("need C0 > 1 and eps0 in (0, 1)")
    return 1.0 / math.log2(c0 / eps0)


def distribution_function(samples, lambdas):
    """Lebesgue measure (in theta) of {samples > lambda} on a uniform grid."""
    samples = np.asarray(samples, dtype=float)
    cell = TWO_PI / len(samples)
    return np.array([cell * np.count_nonzero(samples > lam) for lam in lambdas])


def weak_lp_fit(samples, points_per_decade=64, decades=2.0):
    """Fit measure{samples > lambda} ~ C * lambda^(-p) over the top decades.

    Least squares of log-measure against log-lambda on a geometric lambda
    grid spanning the top ``decades`` of the sample range.  Returns
    (p, C, diagnostics dict).
    """
    samples = np.asarray(samples, dtype=float)
    if len(samples) < 256:
        raise ValueError("need at least 256 samples")
    finite = samples[np.isfinite(samples)]
    top = float(np.max(finite))
    if top <= 0 or float(np.min(finite)) == top:
        raise ValueError("degenerate (constant) samples")
    # anchor the window where exceedance counts are resolved (>= 8 samples
    # above the top), not at the raw maximum where counts quantize to 0/1
    lam_hi = float(np.sort(finite)[-8]) * (1 - 1e-12)
    lam_lo = lam_hi / 10.0 ** decades
    n_pts = int(points_per_decade * decades)
    lambdas = np.geomspace(lam_lo, lam_hi, n_pts)
    measure = distribution_function(samples, lambdas)
    keep = measure > 0
    if np.count_nonzero(keep) < 8:
        raise ValueError("distribution collapses over the fit window")
    x = np.log(lambdas[keep])
    y = np.log(measure[keep])
    slope, intercept = np.polyfit(x, y, 1)
    p = -float(slope)
    c = float(math.exp(intercept))
    resid = float(np.sqrt(np.mean((y - (slope * x + intercept)) ** 2)))
    return p, c, {
        "lambda_range": (float(lam_lo), float(lam_hi)),
        "points": int(np.count_nonzero(keep)),
        "rms_residual": resid,
    }


def distribution_bound(lam, c0, eps0):
    """The one-sided tail bound 4 pi K L^(1/log2 M) / lambda^(1/log2 M)
    with K from the two-point hyperbolic estimate at t = 1/2."""
    from .schwarzian import defC_constant

    big_l = c0 ** (1.0 + 1.0 / eps0)
    big_m = c0 / eps0
    expo = 1.0 / math.log2(big_m)
    _, ek = defC_constant(0.5)
    return 4 * math.pi * ek * big_l ** expo / lam ** expo


# ---------------------------------------------------------------------------
# dumps


def dump_forest_jsonl(forest, path):
    with open(path, "w") as fh:
        for node in forest.all_nodes():
            fh.write(json.dumps(node.to_record(), sort_keys=True) + "\n")


def dump_distribution_csv(samples, path, points_per_decade=64, decades=2.0):
    samples = np.asarray(samples, dtype=float)
    finite = samples[np.isfinite(samples)]
    top = float(np.max(finite))
    lambdas = np.geomspace(top / 10.0 ** decades, top * (1 - 1e-12),
                           int(points_per_decade * decades))
    measure = distribution_function(samples, lambdas)
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["lambda", "measure"])
        for lam, m in zip(lambdas, measure):
            writer.writerow([f"{lam!r}", f"{m!r}"])
