import math

import pytest
from hypothesis import given, settings, strategies as st

from discde.geometry import (
    CarlesonSquare,
    generation_squares,
    lambda_threshold,
    phi,
    rho_p,
    rho_p_to_set,
    root_square,
    stolz_contains,
)

in_disc = st.complex_numbers(max_magnitude=0.9, allow_nan=False,
                             allow_infinity=False)


@given(in_disc, in_disc, in_disc)
@settings(max_examples=100, deadline=None)
def test_rho_p_mobius_invariant(a, z1, z2):
    assert rho_p(phi(a, z1), phi(a, z2)) == pytest.approx(rho_p(z1, z2),
                                                          abs=1e-10)


@given(in_disc)
@settings(max_examples=50, deadline=None)
def test_phi_involution(a):
    z = 0.3 - 0.4j
    assert abs(phi(a, phi(a, z)) - z) < 1e-12


def test_rho_p_to_empty_set():
    assert rho_p_to_set(0.5, []) == 1.0


def test_lambda_threshold_bounds():
    assert lambda_threshold(0.5) == pytest.approx(28 / 29)
    for s in (0.01, 0.3, 0.99):
        assert 0.9 < lambda_threshold(s) < 1


def test_generation_counts():
    assert len(generation_squares(1)) == 1
    assert len(generation_squares(5)) == 16


def test_square_arc_lengths():
    q = CarlesonSquare(2, 1)
    assert q.ell == pytest.approx(math.pi)
    assert q.inner_radius == pytest.approx(0.5)
    assert abs(q.z_q - 0.625j) < 1e-12


def test_children_partition_father():
    q = CarlesonSquare(3, 2)
    c1, c2 = q.children()
    assert c1.father() == q and c2.father() == q
    assert c1.theta_lo == pytest.approx(q.theta_lo)
    assert c2.theta_hi == pytest.approx(q.theta_hi)
    assert c1.theta_hi == pytest.approx(c2.theta_lo)


def test_descendants():
    q = CarlesonSquare(2, 2)
    deep = CarlesonSquare(6, 17)
    assert deep.is_descendant_of(q)
    assert not deep.is_descendant_of(CarlesonSquare(2, 1))
    assert not q.is_descendant_of(q)


def test_containment():
    q = CarlesonSquare(2, 1)
    assert q.contains(0.7j)
    assert not q.contains(-0.7j)
    assert not q.contains(0.3j)  # below the inner radius
    assert q.top_half_contains(0.6j)
    assert not q.top_half_contains(0.9j)  # above the band


def test_top_half_stencil_inside():
    q = CarlesonSquare(4, 5)
    for z in q.top_half_stencil():
        assert q.top_half_contains(z)


def test_root_square_covers_circle():
    q = root_square()
    assert q.contains(0.99)
    assert q.contains(-0.99)


def test_stolz_membership():
    assert stolz_contains(0.0, 2.0, 0.9)
    assert not stolz_contains(0.0, 2.0, 0.9j)
    with pytest.raises(ValueError):
        stolz_contains(0.0, 1.0, 0.5)
