"""Zero localization for analytic functions on discs, plus the geometric
zero-distribution statistics (Blaschke-type sums, uniform separation,
a-point separation).

The locator is argument-principle driven: count zeros in |z| < r by the
winding number of f, localize them from the power-sum moments of the
logarithmic derivative (the companion polynomial of the Newton identities),
polish with Newton iteration, and certify each zero with a small winding
circle.  Annuli with many zeros are split radially until each piece holds
few enough zeros for the moment method to stay well conditioned.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field

import numpy as np

from .geometry import rho_p

TWO_PI = 2.0 * math.pi

# Moment localization degrades beyond a handful of zeros per region.
_MAX_CLUSTER = 6
_NEWTON_TOL = 1e-12
_MAX_COUNT_POINTS = 1 << 15


class ZeroLocationError(RuntimeError):
    """A zero failed certification or a count would not stabilize."""


def _jet1(f, z):
    v = f(z, 1) if _takes_order(f) else f(z)
    return v


_ORDER_CACHE = {}


def _takes_order(f):
    key = id(f)
    if key not in _ORDER_CACHE:
        try:
            f(0.0, 1)
            _ORDER_CACHE[key] = True
        except TypeError:
            _ORDER_CACHE[key] = False
    return _ORDER_CACHE[key]


def _values_on_circle(f_jet, center, r, n):
    """(f, f') on n equispaced points of the circle |z - center| = r."""
    zs = center + r * np.exp(1j * TWO_PI * np.arange(n) / n)
    vals = np.empty(n, dtype=complex)
    ders = np.empty(n, dtype=complex)
    for i, z in enumerate(zs):
        v, d = f_jet(z)
        vals[i] = v
        ders[i] = d
    return zs, vals, ders


def count_zeros(f_jet, center, r, n_start=64, n_max=_MAX_COUNT_POINTS):
    """Number of zeros in |z - center| < r by the argument principle.

    Trapezoid sums of f'/f on the circle are doubled until the estimate is
    within 1/4 of an integer and stable across one doubling.
    """
    n = n_start
    prev = None
    while n <= n_max:
        zs, vals, ders = _values_on_circle(f_jet, center, r, n)
        if np.any(vals == 0) or np.any(~np.isfinite(vals)):
            r *= 1.0 + 1e-7  # nudge off an exact zero on the contour
            continue
        integrand = ders / vals * (zs - center)
        estimate = float(np.real(np.mean(integrand)))
        rounded = round(estimate)
        if abs(estimate - rounded) < 0.25 and prev == rounded:
            return int(rounded)
        prev = rounded
        n *= 2
    raise ZeroLocationError(
        f"winding count on |z - {center}| = {r} did not stabilize"
    )


def _moments(f_jet, center, r, count, n):
    """Power sums s_k = sum z_i^k of the zeros inside, k = 1..count,
    relative to the circle center."""
    zs, vals, ders = _values_on_circle(f_jet, center, r, n)
    w = ders / vals * (zs - center)
    s = np.empty(count, dtype=complex)
    for k in range(1, count + 1):
        s[k - 1] = np.mean(w * (zs - center) ** k)
    return s


def _power_sums_to_poly(s):
    """Monic polynomial with the given Newton power sums as its root sums."""
    n = len(s)
    e = np.zeros(n + 1, dtype=complex)
    e[0] = 1.0
    for k in range(1, n + 1):
        acc = 0.0 + 0.0j
        for j in range(1, k + 1):
            acc += (-1) ** (j - 1) * e[k - j] * s[j - 1]
        e[k] = acc / k
    # coefficients of prod (x - z_i) = sum (-1)^k e_k x^(n-k)
    return np.array([(-1) ** k * e[k] for k in range(n + 1)])


def _newton_polish(f_jet, z0, tol=_NEWTON_TOL, max_iter=60):
    z = complex(z0)
    for _ in range(max_iter):
        v, d = f_jet(z)
        if d == 0:
            break
        step = v / d
        z = z - step
        if abs(step) <= tol * max(1.0, abs(z)):
            return z
    return z


def _certify(f_jet, zero, radius):
    """Winding number 1 on a small circle around the polished zero."""
    try:
        return count_zeros(f_jet, zero, radius, n_start=64, n_max=4096) == 1
    except ZeroLocationError:
        return False


def _locate_in_annulus(f_jet, r_lo, r_hi, found, depth=0):
    """Zeros with r_lo < |z| <= r_hi, by moment localization with radial
    splitting when the cluster is too large."""
    n_hi = count_zeros(f_jet, 0.0, r_hi)
    n_lo = count_zeros(f_jet, 0.0, r_lo) if r_lo > 0 else 0
    n_here = n_hi - n_lo
    if n_here == 0:
        return
    if n_here > _MAX_CLUSTER and depth < 40:
        r_mid = 0.5 * (r_lo + r_hi)
        _locate_in_annulus(f_jet, r_lo, r_mid, found, depth + 1)
        _locate_in_annulus(f_jet, r_mid, r_hi, found, depth + 1)
        return
    # moments over |z| < r_hi include the already-found inner zeros; subtract
    n_pts = 1 << 12
    s = _moments(f_jet, 0.0, r_hi, n_hi, n_pts)
    inner = [z for z in found if abs(z) <= r_lo]
    for k in range(1, n_hi + 1):
        s[k - 1] -= sum(z ** k for z in inner)
    coeffs = _power_sums_to_poly(s[:n_here])
    candidates = np.roots(coeffs) if n_here > 0 else []
    for cand in candidates:
        zero = _newton_polish(f_jet, cand)
        sep = min((abs(zero - z) for z in found), default=np.inf)
        radius = min(0.25 * (1 - abs(zero)), 1e-4, 0.4 * sep)
        if radius <= 0 or not _certify(f_jet, zero, radius):
            # fall back: re-polish from a jittered start before giving up
            zero = _newton_polish(f_jet, cand * (1 + 1e-3) + 1e-5)
            sep = min((abs(zero - z) for z in found), default=np.inf)
            radius = min(0.25 * (1 - abs(zero)), 1e-4, 0.4 * sep)
            if radius <= 0 or not _certify(f_jet, zero, radius):
                raise ZeroLocationError(
                    f"candidate zero near {cand} failed winding certification"
                )
        found.append(zero)


@dataclass
class ZeroSequence:
    """Zeros of an analytic function in |z| < r_max, sorted by modulus."""

    zeros: list
    r_max: float
    residuals: list = field(default_factory=list)

    def __len__(self):
        return len(self.zeros)

    def __iter__(self):
        return iter(self.zeros)

    def moduli(self):
        return np.array([abs(z) for z in self.zeros])


def find_zeros(f_jet, r_max=0.99, deflate_origin=False):
    """All zeros of f in |z| < r_max; f_jet(z) returns (f(z), f'(z)).

    Every zero is certified by a unit winding number on a small circle and
    the function residual |f(zero)| is recorded.  A simple zero at the
    origin is handled by dividing it out when ``deflate_origin`` is set.
    """
    if not 0 < r_max < 1:
        raise ValueError("r_max must lie in (0, 1)")
    found = []
    v0, d0 = f_jet(0.0)
    if v0 == 0:
        if not deflate_origin:
            raise ZeroLocationError("zero at the origin; normalize first")
        if d0 == 0:
            raise ZeroLocationError("multiple zero at the origin")

        def deflated(z):
            if z == 0:
                # f = d0 z + f''(0)/2 z^2 + ...; the quadratic term needs a
                # limit, taken by a tiny off-origin probe
                z = 1e-7
            v, d = f_jet(z)
            return v / z, (d * z - v) / (z * z)

        inner = find_zeros(deflated, r_max)
        return ZeroSequence([0.0 + 0.0j] + inner.zeros, r_max,
                            [0.0] + inner.residuals)
    # annuli between dyadic radii keep per-region counts small near r = 1
    edges = [0.0, 0.5]
    while 1 - (1 - edges[-1]) / 2 < r_max:
        edges.append(1 - (1 - edges[-1]) / 2)
    edges.append(r_max)
    for lo, hi in zip(edges, edges[1:]):
        if hi > lo:
            _locate_in_annulus(f_jet, lo, hi, found)
    found.sort(key=abs)
    residuals = [abs(f_jet(z)[0]) for z in found]
    return ZeroSequence(found, r_max, residuals)


# ---------------------------------------------------------------------------
# geometric statistics


def blaschke_sum(points, alpha=1.0):
    """sum (1 - |z|^2)^alpha over the points."""
    return float(sum((1 - abs(z) ** 2) ** alpha for z in points))


def transferred_blaschke_sup(make_zeros, kappas, alpha=1.0):
    """sup over base points of the Blaschke-type sum of transferred zeros.

    ``make_zeros(kappa)`` returns the zero list of the disc-automorphism
    transfer anchored at kappa; returns (sup, per-kappa table).
    """
    table = [(kappa, blaschke_sum(make_zeros(kappa), alpha)) for kappa in kappas]
    return max(v for _, v in table), table


def separation_delta(points):
    """min over pairs of the pseudo-hyperbolic distance (1.0 if < 2 points)."""
    pts = list(points)
    if len(pts) < 2:
        return 1.0
    return min(
        rho_p(pts[i], pts[j])
        for i in range(len(pts))
        for j in range(i + 1, len(pts))
    )


def uniform_separation(points, delta=None):
    """Whether the points are pairwise delta-separated in rho_p; returns
    (flag, realized minimum)."""
    realized = separation_delta(points)
    if delta is None:
        return realized > 0, realized
    return realized >= delta, realized


def jensen_check(f_jet, zeros, r, n_points=1 << 12):
    """Jensen identity residual on |z| = r:

        mean of log|f| - log|f(0)| - sum_{|z_i|<r} log(r/|z_i|).

    A small residual certifies the zero list is complete inside |z| < r.
    """
    thetas = TWO_PI * np.arange(n_points) / n_points
    total = 0.0
    for t in thetas:
        v, _ = f_jet(r * cmath.exp(1j * t))
        total += math.log(abs(v))
    mean_log = total / n_points
    v0, _ = f_jet(0.0)
    zero_part = sum(math.log(r / abs(z)) for z in zeros if abs(z) < r)
    return mean_log - math.log(abs(v0)) - zero_part


def a_point_separation(f_jet, a_values, r_max=0.9):
    """Pairwise-union separation of a-points: for each pair of distinct
    target values the a-points of both are pooled and the minimal
    pseudo-hyperbolic gap across the pool is measured.

    Returns (min over pairs, {(a, b): delta}).  A nonvanishing Wronskian
    forces distinct solutions never to share an a-point, so the pooled gap
    stays positive.
    """
    located = {}
    for a in a_values:
        shifted = _shift_jet(f_jet, a)
        located[a] = list(find_zeros(shifted, r_max).zeros)
    table = {}
    values = list(a_values)
    for i in range(len(values)):
        for j in range(i + 1, len(values)):
            pool = located[values[i]] + located[values[j]]
            table[(values[i], values[j])] = separation_delta(pool)
    overall = min(table.values()) if table else 1.0
    return overall, table, located


def _shift_jet(f_jet, a):
    def shifted(z):
        v, d = f_jet(z)
        return v - a, d
    return shifted
