"""Unit-disc geometry: disc automorphisms, the pseudo-hyperbolic metric,
dyadic Carleson squares with their top halves, and Stolz regions.

Squares are indexed exactly: generation n >= 1 has 2^(n-1) squares whose
base arcs are [(j-1), j] * 4*pi/2^n for j = 1..2^(n-1); the first generation
is the whole boundary circle.  Angles are kept as integer pairs (n, j) so
deep generations carry no floating-point drift.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

TWO_PI = 2.0 * math.pi

DEFAULT_MAX_GENERATION = 24


def phi(a, z):
    """Disc automorphism phi_a(z) = (a - z)/(1 - conj(a) z); an involution."""
    a = complex(a)
    if abs(a) >= 1:
        raise ValueError("automorphism base point must lie in the open disc")
    return (a - z) / (1 - a.conjugate() * z)


def rho_p(z1, z2):
    """Pseudo-hyperbolic distance |z1 - z2| / |1 - conj(z1) z2|."""
    z1 = complex(z1)
    z2 = complex(z2)
    return abs(z1 - z2) / abs(1 - z1.conjugate() * z2)


def rho_p_to_set(z, points):
    """Distance from a point to a finite set; the empty set is at distance 1."""
    if len(points) == 0:
        return 1.0
    return min(rho_p(z, p) for p in points)


def lambda_threshold(s):
    """(9/10 + s) / (1 + 9 s / 10); strictly between 9/10 and 1 on (0, 1)."""
    if not 0 < s < 1:
        raise ValueError("s must lie in (0, 1)")
    return (0.9 + s) / (1.0 + 0.9 * s)


def stolz_contains(theta, alpha, z):
    """Membership in the non-tangential region |z - e^(i theta)| <= alpha (1 - |z|)."""
    if not alpha > 1:
        raise ValueError("aperture alpha must exceed 1")
    z = complex(z)
    return abs(z - np.exp(1j * theta)) <= alpha * (1 - abs(z))


@dataclass(frozen=True, order=True)
class CarlesonSquare:
    """Dyadic Carleson square, identified by (generation, index).

    generation >= 1, index in 1..2^(generation-1).  The square is
    {1 - l/(2 pi) <= |z| < 1, arg z in I} over its base arc I of length
    l = 4 pi / 2^generation; the top half T(Q) is the inner half-annulus
    band of that box.
    """

    generation: int
    index: int

    def __post_init__(self):
        if self.generation < 1:
            raise ValueError("generation must be >= 1")
        if not 1 <= self.index <= 2 ** (self.generation - 1):
            raise ValueError(
                f"index {self.index} out of range for generation {self.generation}"
            )

    @property
    def ell(self):
        """Arc length of the base interval."""
        return TWO_PI / 2 ** (self.generation - 1)

    @property
    def theta_lo(self):
        return TWO_PI * (self.index - 1) / 2 ** (self.generation - 1)

    @property
    def theta_hi(self):
        return TWO_PI * self.index / 2 ** (self.generation - 1)

    @property
    def theta_mid(self):
        return TWO_PI * (self.index - 0.5) / 2 ** (self.generation - 1)

    @property
    def inner_radius(self):
        return 1.0 - self.ell / TWO_PI

    def children(self):
        n, j = self.generation, self.index
        return (CarlesonSquare(n + 1, 2 * j - 1), CarlesonSquare(n + 1, 2 * j))

    def father(self):
        if self.generation == 1:
            raise ValueError("the root square has no father")
        return CarlesonSquare(self.generation - 1, (self.index + 1) // 2)

    def is_descendant_of(self, other):
        if other.generation >= self.generation:
            return False
        shift = self.generation - other.generation
        return (self.index - 1) >> shift == other.index - 1

    def _arg_in_base(self, z):
        theta = math.atan2(z.imag, z.real) % TWO_PI
        lo, hi = self.theta_lo, self.theta_hi
        if hi >= TWO_PI - 1e-15:
            return theta >= lo - 1e-15 or theta <= hi - TWO_PI + 1e-15
        return lo - 1e-15 <= theta <= hi + 1e-15

    def contains(self, z):
        z = complex(z)
        r = abs(z)
        return self.inner_radius <= r < 1 and self._arg_in_base(z)

    def top_half_contains(self, z):
        z = complex(z)
        r = abs(z)
        return (self.inner_radius - 1e-12 <= r
                <= 1.0 - self.ell / (2 * TWO_PI) + 1e-12
                and self._arg_in_base(z))

    @property
    def z_q(self):
        """Radial-angular midpoint of the top half T(Q)."""
        if self.generation < 2:
            raise ValueError("the root square has no top-half center")
        radius = 1.0 - 3.0 * self.ell / (4 * TWO_PI)
        return radius * complex(math.cos(self.theta_mid), math.sin(self.theta_mid))

    def top_half_stencil(self):
        """9-point stencil of T(Q): corners, edge midpoints, center.

        Used to realize the distance from the region T(Q) to a point set.
        """
        r_lo = self.inner_radius
        r_hi = 1.0 - self.ell / (2 * TWO_PI)
        r_mid = 1.0 - 3.0 * self.ell / (4 * TWO_PI)
        thetas = (self.theta_lo, self.theta_mid, self.theta_hi)
        return [r * complex(math.cos(t), math.sin(t))
                for r in (r_lo, r_mid, r_hi) for t in thetas]


def root_square():
    return CarlesonSquare(1, 1)


def generation_squares(n):
    """All squares of generation n, ordered by index."""
    return [CarlesonSquare(n, j) for j in range(1, 2 ** (n - 1) + 1)]


def top_half_center(square):
    return square.z_q


def top_half(square):
    return square.top_half_contains
