"""Integral means, growth norms, Carleson-measure constants and related
functionals on the unit disc.

Conventions: every supremum over the disc is reported as a certified lower
bound obtained from a grid refined toward the boundary, together with the
per-radius maxima so divergence is visible in the data.  Limits r -> 1- are
replaced by evaluation on an exhausting radius schedule.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .geometry import phi

TWO_PI = 2.0 * math.pi


@dataclass
class RadialProfile:
    """Values of a radial functional on an increasing radius schedule."""

    radii: list
    values: list
    monotone: bool = field(init=False)

    def __post_init__(self):
        if any(b <= a for a, b in zip(self.radii, self.radii[1:])):
            raise ValueError("radii must be strictly increasing")
        self.monotone = all(
            b >= a * (1 - 1e-12) - 1e-15 for a, b in zip(self.values, self.values[1:])
        )


@dataclass(frozen=True)
class MeasureDensity:
    """Density of an area measure d(mu) = density(z) dm(z) on the disc."""

    density: object  # vectorized callable z -> nonnegative real
    tag: str = ""

    def __call__(self, zs):
        return self.density(zs)


@dataclass
class SupremumReport:
    """Lower-bound report for a sup-type functional."""

    value: float
    argmax: complex
    per_radius: list  # (radius, max over the circle)

    def __float__(self):
        return float(self.value)


# ---------------------------------------------------------------------------
# circle means


def _circle_values(f, r, n):
    thetas = TWO_PI * np.arange(n) / n
    zs = r * np.exp(1j * thetas)
    try:
        values = np.asarray(f(zs), dtype=complex)
        if values.shape != zs.shape:
            raise TypeError
        return values
    except (TypeError, ValueError):
        return np.array([complex(f(z)) for z in zs])


def _adaptive_circle_mean(integrand_of_values, f, r, n_points, tol, max_points):
    n = n_points
    prev = None
    while True:
        values = _circle_values(f, r, n)
        mean = float(np.mean(integrand_of_values(values)))
        if prev is not None and abs(mean - prev) <= tol * (1 + abs(mean)):
            return mean
        if n >= max_points:
            return mean
        prev = mean
        n *= 2


def circle_mean(f, r, p, n_points=64, tol=1e-8, max_points=1 << 16):
    """(1/2pi) * integral of |f(r e^(i theta))|^p, composite trapezoid.

    Periodic analytic integrands converge geometrically; points double until
    the relative change drops below tol.
    """
    if not 0 < r < 1:
        raise ValueError("radius must lie in (0, 1)")
    if p <= 0:
        raise ValueError("exponent p must be positive")
    if n_points < 64 or n_points & (n_points - 1):
        raise ValueError("n_points must be a power of two >= 64")
    return _adaptive_circle_mean(lambda v: np.abs(v) ** p, f, r, n_points, tol, max_points)


def nevanlinna_m(f, r, n_points=64, tol=1e-8, max_points=1 << 16):
    """Proximity function m(r, f): circle mean of log+ |f|."""
    if not 0 < r < 1:
        raise ValueError("radius must lie in (0, 1)")
    return _adaptive_circle_mean(
        lambda v: np.maximum(np.log(np.maximum(np.abs(v), 1e-300)), 0.0),
        f, r, n_points, tol, max_points,
    )


def hardy_profile(f, radii, p, **kw):
    return RadialProfile(list(radii), [circle_mean(f, r, p, **kw) for r in radii])


# ---------------------------------------------------------------------------
# sup-type functionals


def default_sup_radii(depth=10, r_cap=0.999):
    radii = [0.0] + [1.0 - 2.0 ** (-j) for j in range(1, depth + 1)]
    return [r for r in radii if r <= r_cap]


def _grid_sup(values_on_circle, radii, n_theta):
    """Sweep circles, track per-radius maxima and the global argmax."""
    thetas = TWO_PI * np.arange(n_theta) / n_theta
    best, best_z = -np.inf, 0j
    per_radius = []
    for r in radii:
        zs = r * np.exp(1j * thetas) if r > 0 else np.zeros(1, dtype=complex)
        vals = values_on_circle(zs)
        k = int(np.argmax(vals))
        per_radius.append((r, float(vals[k])))
        if vals[k] > best:
            best, best_z = float(vals[k]), complex(zs[k])
    return best, best_z, per_radius


def _local_refine(values_on_points, z0, scale, rounds=6, n=9):
    """Nested grid search around an argmax candidate."""
    best, best_z = float(values_on_points(np.array([z0]))[0]), z0
    for _ in range(rounds):
        offs = np.linspace(-scale, scale, n)
        zs = best_z + (offs[:, None] + 1j * offs[None, :]).ravel()
        zs = zs[np.abs(zs) < 1]
        if len(zs) == 0:
            break
        vals = values_on_points(zs)
        k = int(np.argmax(vals))
        if vals[k] > best:
            best, best_z = float(vals[k]), complex(zs[k])
        scale /= 3.0
    return best, best_z


def growth_norm(A, alpha, radii=None, n_theta=256, refine=True):
    """Lower bound for sup (1 - |z|^2)^alpha |A(z)| with divergence data.

    ``A`` is a vectorized evaluator.  Returns a SupremumReport carrying the
    per-radius maxima (their trend reveals divergence) and the argmax.
    """
    if alpha < 0:
        raise ValueError("alpha must be nonnegative")
    radii = default_sup_radii() if radii is None else list(radii)

    def on_points(zs):
        w = (1.0 - np.abs(zs) ** 2) ** alpha
        return w * np.abs(np.asarray(A(zs), dtype=complex))

    best, best_z, per_radius = _grid_sup(on_points, radii, n_theta)
    if refine and abs(best_z) > 0:
        scale = max((1 - abs(best_z)) / 2, TWO_PI * abs(best_z) / n_theta)
        best, best_z = _local_refine(on_points, best_z, scale)
    return SupremumReport(best, best_z, per_radius)


def bloch_seminorm(fprime, radii=None, n_theta=256, refine=True):
    """Lower bound for sup (1 - |z|^2) |f'(z)|."""
    return growth_norm(fprime, 1.0, radii=radii, n_theta=n_theta, refine=refine)


def normality_sigma(f_jet, radii=None, n_theta=64, refine=False):
    """Spherical-derivative supremum sigma(f): sup (1-|z|^2)|f'|/(1+|f|^2).

    ``f_jet`` maps a point to (f, f'); evaluated pointwise, so keep grids
    moderate for continuation-backed solutions.
    """
    radii = default_sup_radii(depth=8) if radii is None else list(radii)

    def on_points(zs):
        out = np.empty(len(zs))
        for i, z in enumerate(zs):
            v, dv = f_jet(z)
            out[i] = (1 - abs(z) ** 2) * abs(dv) / (1 + abs(v) ** 2)
        return out

    best, best_z, per_radius = _grid_sup(on_points, radii, n_theta)
    if refine and abs(best_z) > 0:
        best, best_z = _local_refine(on_points, best_z, (1 - abs(best_z)) / 2)
    return SupremumReport(best, best_z, per_radius)


# ---------------------------------------------------------------------------
# area quadrature


def polar_quadrature(r_max=0.999, n_radial=64, n_theta=256, r_min=0.0):
    """Nodes and weights for integrals over the disc against area measure.

    Gauss-Legendre radial nodes on dyadic annuli (integrands are smooth per
    annulus, singular only at the boundary) times a uniform trapezoid in the
    angle.  Returns (nodes, weights) with sum(w * g(z)) ~ integral g dm.
    """
    x, wx = np.polynomial.legendre.leggauss(n_radial)
    edges = [r_min]
    r = max(r_min, 0.5)
    if r > r_min:
        edges.append(0.5)
    while 1 - (1 - edges[-1]) / 2 < r_max:
        edges.append(1 - (1 - edges[-1]) / 2)
    edges.append(r_max)
    thetas = TWO_PI * np.arange(n_theta) / n_theta
    e = np.exp(1j * thetas)
    nodes, weights = [], []
    for lo, hi in zip(edges, edges[1:]):
        if hi <= lo:
            continue
        rr = 0.5 * (hi - lo) * x + 0.5 * (hi + lo)
        ww = 0.5 * (hi - lo) * wx * rr * (TWO_PI / n_theta)
        nodes.append((rr[:, None] * e[None, :]).ravel())
        weights.append(np.repeat(ww, n_theta))
    return np.concatenate(nodes), np.concatenate(weights)


def area_integral(g, nodes, weights):
    vals = np.asarray(g(nodes))
    return float(np.real(np.sum(weights * vals)))


def weighted_area_integral(A, p, beta, r_maxes=(0.9, 0.99, 0.999),
                           n_radial=64, n_theta=256):
    """integral over D of |A|^p (1-|z|^2)^beta dm, with a truncation trend.

    Returns (value at the largest r_max, [(r_max, value)] trend).
    """
    if p <= 0:
        raise ValueError("p must be positive")
    trend = []
    for r_max in sorted(r_maxes):
        nodes, weights = polar_quadrature(r_max, n_radial, n_theta)
        vals = np.abs(np.asarray(A(nodes), dtype=complex)) ** p
        vals = vals * (1 - np.abs(nodes) ** 2) ** beta
        trend.append((r_max, float(np.sum(weights * vals))))
    return trend[-1][1], trend


def default_a_net(max_depth=10, base_angles=8):
    """Pseudo-hyperbolically spread net {r_j e^(i theta)}: r_j = 1 - 2^-j with
    2^(j+3) angles per ring (boundary-concentrated, Möbius-aware)."""
    net = [0j]
    for j in range(1, max_depth + 1):
        r = 1 - 2.0 ** (-j)
        n = base_angles * 2 ** j
        net.extend(r * np.exp(1j * TWO_PI * np.arange(n) / n))
    return net


@dataclass
class NetSupReport:
    value: float
    argmax_a: complex
    refinement_delta: float

    def __float__(self):
        return float(self.value)


def _net_sup(inner_value, a_net, coarse_factor=2):
    """Max of an integral functional over a net, with a refinement delta
    measured against a coarsened evaluation at the argmax."""
    best, best_a = -np.inf, 0j
    for a in a_net:
        v = inner_value(a, 1)
        if v > best:
            best, best_a = v, a
    coarse = inner_value(best_a, coarse_factor)
    return NetSupReport(float(best), complex(best_a), float(abs(best - coarse)))


def fp_norm(A, p, a_net=None, r_max=0.999, n_radial=64, n_theta=256):
    """Lower bound for the Carleson-type coefficient norm

        sup_a ( integral |A|^p (1-|z|^2)^(2p-2) (1-|phi_a(z)|^2) dm )^(1/p).
    """
    if p <= 0:
        raise ValueError("p must be positive")
    a_net = default_a_net(max_depth=4) if a_net is None else list(a_net)
    cache = {}

    def inner(a, coarsen):
        key = coarsen
        if key not in cache:
            nodes, weights = polar_quadrature(r_max, n_radial // coarsen,
                                              max(64, n_theta // coarsen))
            base = (np.abs(np.asarray(A(nodes), dtype=complex)) ** p
                    * (1 - np.abs(nodes) ** 2) ** (2 * p - 2))
            cache[key] = (nodes, weights, base)
        nodes, weights, base = cache[key]
        kernel = 1 - np.abs(phi(a, nodes)) ** 2 if a != 0 else 1 - np.abs(nodes) ** 2
        return float(np.sum(weights * base * kernel))

    report = _net_sup(inner, a_net)
    report.value = report.value ** (1.0 / p)
    return report


def carleson_embedding_constant(mu, a_net=None, r_max=0.999, n_radial=64,
                                n_theta=256):
    """sup over the net of integral (1-|a|^2)/|1 - conj(a) z|^2 d(mu)."""
    a_net = default_a_net(max_depth=4) if a_net is None else list(a_net)
    cache = {}

    def inner(a, coarsen):
        if coarsen not in cache:
            nodes, weights = polar_quadrature(r_max, n_radial // coarsen,
                                              max(64, n_theta // coarsen))
            cache[coarsen] = (nodes, weights, np.asarray(mu(nodes), dtype=float))
        nodes, weights, dens = cache[coarsen]
        a = complex(a)
        kernel = (1 - abs(a) ** 2) / np.abs(1 - a.conjugate() * nodes) ** 2
        return float(np.sum(weights * dens * kernel))

    return _net_sup(inner, a_net)


def measure_of_square(mu, square, r_max=0.999, n_radial=32, n_theta=64):
    """mu(Q) by polar quadrature over the Carleson square, truncated at r_max."""
    lo = square.inner_radius
    if lo >= r_max:
        return 0.0
    x, wx = np.polynomial.legendre.leggauss(n_radial)
    edges = [lo]
    while 1 - (1 - edges[-1]) / 2 < r_max and len(edges) < 40:
        edges.append(1 - (1 - edges[-1]) / 2)
    edges.append(r_max)
    t_lo, t_hi = square.theta_lo, square.theta_hi
    thetas = t_lo + (t_hi - t_lo) * (np.arange(n_theta) + 0.5) / n_theta
    e = np.exp(1j * thetas)
    total = 0.0
    for a, b in zip(edges, edges[1:]):
        if b <= a:
            continue
        rr = 0.5 * (b - a) * x + 0.5 * (b + a)
        ww = 0.5 * (b - a) * wx * rr * ((t_hi - t_lo) / n_theta)
        nodes = (rr[:, None] * e[None, :]).ravel()
        total += float(np.sum(np.repeat(ww, n_theta) * np.asarray(mu(nodes), dtype=float)))
    return total


def carleson_constant(mu, max_generation=6, r_max=0.999, n_radial=32, n_theta=64):
    """max over dyadic squares (up to a generation cap) of mu(Q)/l(Q)."""
    from .geometry import generation_squares

    best, best_sq = -np.inf, None
    for n in range(1, max_generation + 1):
        for sq in generation_squares(n):
            value = measure_of_square(mu, sq, r_max, n_radial, n_theta) / sq.ell
            if value > best:
                best, best_sq = value, sq
    return best, best_sq


def bmoa_seminorm(fprime, a_net=None, r_max=0.99, n_radial=48, n_theta=128):
    """Net-sup lower bound for the square root of
    sup_a integral |f'|^2 (1 - |phi_a(z)|^2) dm.

    ``fprime`` is a vectorized (or scalar) evaluator of the derivative.
    """
    a_net = default_a_net(max_depth=3) if a_net is None else list(a_net)
    nodes, weights = polar_quadrature(r_max, n_radial, n_theta)
    try:
        dv = np.asarray(fprime(nodes), dtype=complex)
        if dv.shape != nodes.shape:
            raise TypeError
    except (TypeError, ValueError):
        dv = np.array([complex(fprime(z)) for z in nodes])
    base = np.abs(dv) ** 2

    def inner(a, coarsen):
        kernel = 1 - np.abs(phi(a, nodes)) ** 2 if a != 0 else 1 - np.abs(nodes) ** 2
        return float(np.sum(weights * base * kernel))

    report = _net_sup(inner, a_net, coarse_factor=1)
    report.value = math.sqrt(max(report.value, 0.0))
    return report
