"""Schwarzian and pre-Schwarzian calculus for solution quotients.

For a fundamental pair (f1, f2) with Wronskian -1 the quotient w = f1/f2 is
locally univalent and meromorphic with S_w = 2A; its derivative is the
globally analytic 1/f2^2, so everything involving 1/w' is computed from f2
directly and only w itself is singular at the poles (zeros of f2).
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field

import numpy as np

from .geometry import rho_p, rho_p_to_set
from .zeros import find_zeros

TWO_PI = 2.0 * math.pi


class PoleError(ZeroDivisionError):
    """Evaluation of w (or a quotient jet) at or too near a pole."""


def schwarzian(jet3):
    """Schwarzian derivative from a 3-jet (w, w', w'', w''').

    Equals (w''/w')' - (w''/w')^2 / 2 in expanded form.
    """
    _, w1, w2, w3 = jet3
    if w1 == 0:
        raise PoleError("Schwarzian undefined where w' vanishes")
    h = w2 / w1
    return w3 / w1 - 1.5 * h * h


def pre_schwarzian(jet2):
    """w''/w' from a jet of order >= 2."""
    _, w1, w2 = jet2[0], jet2[1], jet2[2]
    if w1 == 0:
        raise PoleError("pre-Schwarzian undefined where w' vanishes")
    return w2 / w1


@dataclass
class QuotientMap:
    """w = f1/f2 for a fundamental pair with Wronskian -1.

    w' = 1/f2^2 is analytic everywhere; the poles of w are the zeros of f2,
    stored with exclusion radii (twice a Newton-basin estimate) that grid
    sweeps should skip.
    """

    basis: object
    r_max: float = 0.95
    poles: list = field(default_factory=list)
    exclusion_radii: list = field(default_factory=list)

    def __post_init__(self):
        if abs(self.basis.wronskian_target - (-1.0)) > 1e-12:
            raise ValueError("quotient construction requires Wronskian -1")
        seq = find_zeros(lambda z: self.basis.jet(2, z, 1), self.r_max)
        self.poles = list(seq.zeros)
        self.exclusion_radii = []
        for p in self.poles:
            _, d1, d2 = self.basis.jet(2, p, 2)
            basin = abs(d1) / max(abs(d2), 1e-30)
            self.exclusion_radii.append(min(0.05, 2.0 * min(basin, 1e-3)))

    def near_pole(self, z):
        return any(
            abs(z - p) <= r for p, r in zip(self.poles, self.exclusion_radii)
        )

    def _pair_jets(self, z, order):
        j1 = self.basis.jet(1, z, order)
        j2 = self.basis.jet(2, z, order)
        return j1, j2

    def __call__(self, z):
        if self.near_pole(z):
            raise PoleError(f"w has a pole near {z}")
        j1, j2 = self._pair_jets(z, 0)
        if j2[0] == 0:
            raise PoleError(f"w has a pole at {z}")
        return j1[0] / j2[0]

    def wprime(self, z):
        """w'(z) = 1/f2(z)^2, analytic across the poles of w."""
        f2 = self.basis.jet(2, z, 0)[0]
        if f2 == 0:
            raise PoleError(f"pole of w at {z}")
        return 1.0 / (f2 * f2)

    def inv_wprime_abs(self, z):
        """|1/w'(z)| = |f2(z)|^2; finite everywhere, zero at poles of w."""
        return abs(self.basis.jet(2, z, 0)[0]) ** 2

    def log_wprime_derivative(self, z):
        """(log w')' = w''/w' = -2 f2'/f2."""
        f2, d2 = self.basis.jet(2, z, 1)
        if f2 == 0:
            raise PoleError(f"pole of w at {z}")
        return -2.0 * d2 / f2

    def jet3(self, z):
        """(w, w', w'', w''') from order-2 jets of the pair and f2'' = -A f2."""
        j1, j2 = self._pair_jets(z, 2)
        f2, d2, dd2 = j2
        if f2 == 0:
            raise PoleError(f"pole of w at {z}")
        w = j1[0] / f2
        w1 = 1.0 / (f2 * f2)
        h = -2.0 * d2 / f2
        hp = -2.0 * dd2 / f2 + 2.0 * (d2 / f2) ** 2
        w2 = h * w1
        w3 = (hp + h * h) * w1
        return (w, w1, w2, w3)

    def schwarzian_at(self, z):
        return schwarzian(self.jet3(z))


def quotient_from_coefficient(A, r_max=0.95, degree=None):
    """Canonical quotient for a coefficient: the pair f1(0)=0, f1'(0)=1,
    f2(0)=1, f2'(0)=0 has Wronskian -1 and normalizes w(0)=0, w'(0)=1."""
    from .ode import make_basis

    kwargs = {} if degree is None else {"degree": degree}
    basis = make_basis(A, ics=((0.0, 1.0), (1.0, 0.0)),
                       r_max=max(r_max, 0.97), **kwargs)
    return QuotientMap(basis, r_max=r_max)


# ---------------------------------------------------------------------------
# analytic logarithm branches


class LogBranch:
    """A branch of log f fixed by its value at a base point.

    Continuation is by multiplicative increments: walk straight from the
    nearest cached waypoint, bisecting steps until each ratio stays inside
    the principal-log half-plane.  exp(log f(z)) = f(z) holds wherever the
    branch is evaluated; crossing a zero of f raises.
    """

    def __init__(self, f_jet, z0=0.0, base_value=None):
        self._f = f_jet
        v0 = f_jet(complex(z0))[0]
        if v0 == 0:
            raise PoleError("log branch based at a zero")
        self._waypoints = [(complex(z0), cmath.log(v0) if base_value is None
                            else complex(base_value))]

    def _nearest(self, z):
        return min(self._waypoints, key=lambda wp: abs(wp[0] - z))

    def __call__(self, z, cache=True):
        z = complex(z)
        z_from, log_from = self._nearest(z)
        value = self._continue(z_from, log_from, z, depth=0)
        if cache:
            self._waypoints.append((z, value))
            if len(self._waypoints) > 4096:
                del self._waypoints[1:2048]
        return value

    def _continue(self, z_from, log_from, z_to, depth):
        if z_from == z_to:
            return log_from
        v_from = cmath.exp(log_from)
        v_to = self._f(z_to)[0]
        if v_to == 0:
            raise PoleError(f"log branch hit a zero at {z_to}")
        ratio = v_to / v_from
        if abs(ratio - 1.0) < 0.5:
            return log_from + cmath.log(ratio)
        if depth > 60:
            raise PoleError("log continuation failed to converge (zero on path?)")
        z_mid = 0.5 * (z_from + z_to)
        log_mid = self._continue(z_from, log_from, z_mid, depth + 1)
        return self._continue(z_mid, log_mid, z_to, depth + 1)


def log_on_circle(f_jet, r, n_points, base_log=None):
    """Continued values of log f along |z| = r (n equispaced angles).

    The branch starts from the radial continuation to r (angle 0) and walks
    around the circle, so the returned array is a genuine single branch.
    """
    branch = LogBranch(f_jet) if base_log is None else base_log
    out = np.empty(n_points, dtype=complex)
    prev_z = r + 0.0j
    prev_log = branch(prev_z, cache=False)
    for k in range(n_points):
        z = r * cmath.exp(1j * TWO_PI * k / n_points)
        prev_log = branch._continue(prev_z, prev_log, z, depth=0)
        out[k] = prev_log
        prev_z = z
    return out


# ---------------------------------------------------------------------------
# bounds and constants


def pre_schwarzian_bound_check(h, eta, s, samples, poles=()):
    """Compare sup (1 - |a|^2) |w''(a)/w'(a)| against 6/min(eta, s).

    ``h`` evaluates w''/w'; samples must keep pseudo-hyperbolic distance at
    least s from every pole.  Returns (value, bound, passed, argmax).
    """
    if not 0 < eta <= 1:
        raise ValueError("eta must lie in (0, 1]")
    if not 0 < s < 1 and s != 1:
        raise ValueError("s must lie in (0, 1]")
    value, arg = -np.inf, 0j
    for a in samples:
        a = complex(a)
        if poles and rho_p_to_set(a, poles) < s * (1 - 1e-12):
            raise ValueError(
                f"sample {a} is pseudo-hyperbolically closer than {s} to a pole"
            )
        v = (1 - abs(a) ** 2) * abs(h(a))
        if v > value:
            value, arg = v, a
    bound = 6.0 / min(eta, s)
    return value, bound, value <= bound + 1e-9, arg


def defC_constant(t):
    """K(t) = 3 log((1 + q)/(1 - q)) with q = 2t/(1 + t^2); returns (K, e^K)."""
    if not 0 < t < 1:
        raise ValueError("t must lie in (0, 1)")
    q = 2 * t / (1 + t * t)
    k = 3.0 * math.log((1 + q) / (1 - q))
    return k, math.exp(k)


# ---------------------------------------------------------------------------
# factorization f = g * W


@dataclass
class Factorization:
    """f = g W with W a Möbius image of the quotient and g = exp(log g).

    ``normalization`` records which scaling of log w' reproduces g: the
    relation exp(log g)^2 * w' = 1 pins log g = -(1/2) log w' for this
    Wronskian convention.
    """

    alpha: complex
    beta: complex
    log_g: object            # callable z -> log g(z)
    w_factor: object         # callable z -> W(z)
    log_wprime: object       # callable z -> log w'(z)
    log_w_factor_prime: object  # callable or None (alpha = 0: W constant)
    constant_marker: complex or None
    normalization: str = "log g = -(1/2) log w'"

    def g(self, z):
        return cmath.exp(self.log_g(z))

    def reconstruct(self, z):
        return self.g(z) * self.w_factor(z)


def factorize(quotient, alpha, beta, r_max=None):
    """Factor f = alpha f1 + beta f2 as g * W, W = alpha w + beta.

    Requires f2 zero-free on the working disc (the quotient has no poles
    there).  log w' = -2 log f2 is taken on the same branch as log f2, so
    exp(log g)^2 * w' = 1 holds identically.
    """
    r_max = quotient.r_max if r_max is None else r_max
    if any(abs(p) <= r_max for p in quotient.poles):
        raise PoleError(
            "factorization requires a zero-free f2 on the working disc"
        )
    alpha = complex(alpha)
    beta = complex(beta)
    log_f2 = LogBranch(lambda z: quotient.basis.jet(2, z, 1))

    def log_g(z):
        return log_f2(z)

    def log_wprime(z):
        return -2.0 * log_f2(z)

    def w_factor(z):
        return alpha * quotient(z) + beta if alpha != 0 else beta

    if alpha == 0:
        if beta == 0:
            raise ValueError("trivial solution has no factorization")
        return Factorization(alpha, beta, log_g, w_factor, log_wprime,
                             None, constant_marker=beta)

    log_alpha = cmath.log(alpha)

    def log_w_factor_prime(z):
        return log_alpha + log_wprime(z)

    return Factorization(alpha, beta, log_g, w_factor, log_wprime,
                         log_w_factor_prime, constant_marker=None)


# ---------------------------------------------------------------------------
# logarithm mean-growth comparison


def bjest_check(f_jet, A_eval, r, n_theta=1 << 10, n_radial=48):
    """Circle mean of |log(f/f(0))|^2 against the two right-hand terms

        r^2 |f'(0)/f(0)|^2   and   r^2 * integral_{|z|<r} |A|^2 (1-|z|^2)^3 dm

    for a zero-free solution f.  Returns (lhs, (term1, term2), ratio); the
    comparison constant is the fitted ratio, never assumed.
    """
    from .functionals import polar_quadrature

    v0, d0 = f_jet(0.0)
    if v0 == 0:
        raise PoleError("solution vanishes at the origin")
    logs = log_on_circle(f_jet, r, n_theta)
    logs = logs - cmath.log(v0)
    lhs = float(np.mean(np.abs(logs) ** 2))
    term1 = r * r * abs(d0 / v0) ** 2
    nodes, weights = polar_quadrature(r_max=r, n_radial=n_radial, n_theta=256)
    avals = np.abs(np.asarray(A_eval(nodes), dtype=complex)) ** 2
    term2 = r * r * float(np.sum(weights * avals * (1 - np.abs(nodes) ** 2) ** 3))
    rhs = term1 + term2
    ratio = 0.0 if lhs == 0.0 and rhs == 0.0 else lhs / rhs
    return lhs, (term1, term2), ratio


# ---------------------------------------------------------------------------
# the rational value map R(z) = z + 1/(2 z^2)


def roth_map(z):
    z = complex(z)
    if z == 0:
        raise ZeroDivisionError("R has a pole at 0")
    return z + 1.0 / (2.0 * z * z)


def roth_critical_points():
    """Finite critical points of R: the three cube roots of unity."""
    return [cmath.exp(2j * math.pi * k / 3) for k in range(3)]


_OMEGA_EXCLUDED = roth_critical_points() + [0j]


def roth_value_map(w):
    """Preimages R^{-1}(w) restricted to the plane minus the cube roots of
    unity and the origin; w may be infinity.

    Finite w reduces to the cubic 2 z^3 - 2 w z^2 + 1 = 0; roots come from
    the companion matrix and are polished by Newton on the cubic.
    """
    if w is None or (isinstance(w, float) and math.isinf(w)) or w == math.inf:
        return [math.inf]
    w = complex(w)
    if not (math.isfinite(w.real) and math.isfinite(w.imag)):
        return [math.inf]
    coeffs = np.array([2.0, -2.0 * w, 0.0, 1.0], dtype=complex)
    roots = np.roots(coeffs)
    scale = max(1.0, abs(w))
    polished = []
    for z in roots:
        for _ in range(40):
            p = 2 * z**3 - 2 * w * z**2 + 1
            dp = 6 * z**2 - 4 * w * z
            if dp == 0:
                break
            step = p / dp
            z = z - step
            if abs(step) < 1e-14 * max(1.0, abs(z)):
                break
        polished.append(complex(z))
    return [z for z in polished
            if all(abs(z - e) > 1e-8 * scale for e in _OMEGA_EXCLUDED)]
