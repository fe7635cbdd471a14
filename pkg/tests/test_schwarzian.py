import cmath
import math

import numpy as np
import pytest

from discde.schwarzian import (
    LogBranch,
    PoleError,
    bjest_check,
    defC_constant,
    factorize,
    log_on_circle,
    pre_schwarzian_bound_check,
    quotient_from_coefficient,
    roth_critical_points,
    roth_map,
    roth_value_map,
    schwarzian,
)


def koebe_jet3(z):
    return (z / (1 - z) ** 2, (1 + z) / (1 - z) ** 3,
            (4 + 2 * z) / (1 - z) ** 4, (18 + 6 * z) / (1 - z) ** 5)


def mobius_jet3(a, b, c, d, z):
    den = c * z + d
    w = (a * z + b) / den
    det = a * d - b * c
    return (w, det / den**2, -2 * c * det / den**3, 6 * c * c * det / den**4)


def test_schwarzian_of_mobius_vanishes():
    rng = np.random.default_rng(3)
    for _ in range(20):
        a, b, c, d = rng.normal(size=4) + 1j * rng.normal(size=4)
        if abs(a * d - b * c) < 1e-3:
            continue
        z = complex(rng.uniform(-0.5, 0.5), rng.uniform(-0.5, 0.5))
        assert abs(schwarzian(mobius_jet3(a, b, c, d, z))) < 1e-9


def test_koebe_schwarzian_closed_form():
    assert abs(schwarzian(koebe_jet3(0.0)) + 6) < 1e-12
    for z in (0.3, -0.2 + 0.4j, 0.5j):
        assert abs(schwarzian(koebe_jet3(z)) + 6 / (1 - z**2) ** 2) < 1e-9


def test_quotient_schwarzian_identity():
    q = quotient_from_coefficient("1", r_max=0.9)
    for z in (0.3 + 0.2j, -0.5, 0.6j):
        assert abs(q.schwarzian_at(z) - 2.0) <= 1e-8


def test_quotient_wprime_representation():
    q = quotient_from_coefficient("25", r_max=0.9)
    z = 0.11 + 0.07j
    f2 = q.basis.jet(2, z, 0)[0]
    assert abs(q.wprime(z) * f2 * f2 - 1) < 1e-10
    assert q.inv_wprime_abs(z) == pytest.approx(abs(f2) ** 2)


def test_quotient_poles_are_f2_zeros():
    # f2 = cos(5z) vanishes at (k+1/2) pi/5
    q = quotient_from_coefficient("25", r_max=0.96)
    moduli = sorted(abs(p) for p in q.poles)
    expected = sorted([math.pi / 10, math.pi / 10,
                       3 * math.pi / 10, 3 * math.pi / 10])
    assert len(moduli) == 4
    assert max(abs(a - b) for a, b in zip(moduli, expected)) < 1e-9
    with pytest.raises(PoleError):
        q(q.poles[0])


def test_schwarzian_mobius_invariance_of_quotient():
    # post-composing with a Mobius map leaves the Schwarzian unchanged
    q = quotient_from_coefficient("1", r_max=0.9)
    a, b, c, d = 1.0, 2.0, 0.5, 2.0
    z = 0.25 - 0.15j
    w, w1, w2, w3 = q.jet3(z)
    den = c * w + d
    det = a * d - b * c
    m1 = det / den**2
    m2 = -2 * c * det / den**3
    m3 = 6 * c * c * det / den**4
    # Faa di Bruno for the composition (M o w)
    c1 = m1 * w1
    c2 = m2 * w1**2 + m1 * w2
    c3 = m3 * w1**3 + 3 * m2 * w1 * w2 + m1 * w3
    composed = ((a * w + b) / den, c1, c2, c3)
    assert abs(schwarzian(composed) - schwarzian((w, w1, w2, w3))) < 1e-8


def test_transfer_cocycle_identities():
    # h = (log (w o phi)')' pulled back: h'(z) = (w''/w')(phi) phi' and
    # h'' - h'^2/2 = S_w(phi) phi'^2 + (w''/w') (phi) phi''
    from discde.ode import mobius_transfer

    q = quotient_from_coefficient("1", r_max=0.9)
    rng = np.random.default_rng(11)
    for _ in range(5):
        zeta = complex(rng.uniform(-0.4, 0.4), rng.uniform(-0.4, 0.4))
        kappa = complex(rng.uniform(-0.4, 0.4), rng.uniform(-0.4, 0.4))
        t = mobius_transfer("1", kappa)
        z = t.phi(zeta)
        dphi, d2phi = t.dphi(zeta), t.d2phi(zeta)
        w, w1, w2, w3 = q.jet3(z)
        s_w = schwarzian((w, w1, w2, w3))
        h1 = (w2 / w1) * dphi
        # derivative of h1 in zeta
        hp = ((w3 / w1 - (w2 / w1) ** 2) * dphi**2 + (w2 / w1) * d2phi)
        lhs = hp - h1 * h1 / 2
        rhs = s_w * dphi**2 + (w2 / w1) * d2phi - h1 * h1 / 2 \
            + (w2 / w1) ** 2 * dphi**2 / 2
        # equivalently: S_{w o phi} = S_w(phi) phi'^2 since S_phi = 0
        assert abs(lhs - (s_w * dphi**2 + (w2 / w1) * d2phi
                          - ((w2 / w1) * dphi) ** 2 / 2
                          + (w2 / w1) ** 2 * dphi**2 / 2)) < 1e-8
        assert abs(hp - (w2 / w1) * d2phi
                   - (w3 / w1 - (w2 / w1) ** 2) * dphi**2) < 1e-10


def test_log_branch_exponential():
    br = LogBranch(lambda z: (cmath.exp(z), cmath.exp(z)))
    for z in (0.5, 0.9j, -0.7 + 0.2j, -0.9):
        assert abs(br(z) - z) < 1e-9
        assert abs(cmath.exp(br(z)) - cmath.exp(z)) < 1e-9


def test_log_branch_winds_continuously():
    # f(z) = exp(4z): log should follow 4z, not principal values
    br = LogBranch(lambda z: (cmath.exp(4 * z), 4 * cmath.exp(4 * z)))
    logs = log_on_circle(lambda z: (cmath.exp(4 * z), 4 * cmath.exp(4 * z)),
                         0.9, 128)
    thetas = 2 * math.pi * np.arange(128) / 128
    assert np.max(np.abs(logs - 4 * 0.9 * np.exp(1j * thetas))) < 1e-8


def test_log_branch_rejects_zero_crossing():
    f = lambda z: (z - 0.5, 1.0)
    br = LogBranch(f)
    with pytest.raises(PoleError):
        br(0.5)


def test_defc_constant():
    k, ek = defC_constant(0.5)
    assert k == pytest.approx(3 * math.log(9))
    assert ek == pytest.approx(729.0)
    ks = [defC_constant(t)[0] for t in np.linspace(0.05, 0.95, 10)]
    assert all(b > a for a, b in zip(ks, ks[1:]))
    assert defC_constant(1e-9)[0] < 1e-7
    with pytest.raises(ValueError):
        defC_constant(1.5)


def test_factorize_reconstruction():
    q = quotient_from_coefficient("1", r_max=0.9)
    for alpha, beta in ((1.0, 0.5), (2.0, 0.0), (1 - 1j, 0.25)):
        fac = factorize(q, alpha, beta)
        for z in (0.2, 0.4j, -0.5 + 0.3j):
            f = (alpha * q.basis.jet(1, z, 0)[0]
                 + beta * q.basis.jet(2, z, 0)[0])
            assert abs(fac.reconstruct(z) - f) < 1e-8
            assert abs(cmath.exp(fac.log_g(z)) ** 2 * q.wprime(z) - 1) < 1e-8


def test_factorize_dependent_solution():
    q = quotient_from_coefficient("1", r_max=0.9)
    fac = factorize(q, 0.0, 2.0)
    assert fac.constant_marker == 2.0
    assert fac.log_w_factor_prime is None
    z = 0.3
    assert abs(fac.reconstruct(z) - 2 * q.basis.jet(2, z, 0)[0]) < 1e-9


def test_factorize_requires_zero_free_f2():
    q = quotient_from_coefficient("25", r_max=0.9)  # cos(5z) vanishes
    with pytest.raises(PoleError):
        factorize(q, 1.0, 0.0)


def test_pre_schwarzian_bound_koebe():
    def h(a):
        return (4 + 2 * a) / (1 - a**2)
    samples = [r * cmath.exp(1j * t)
               for r in (0.0, 0.5, 0.9, 0.99, 0.999)
               for t in np.linspace(0, 2 * math.pi, 64, endpoint=False)]
    value, bound, ok, arg = pre_schwarzian_bound_check(h, 1.0, 1.0, samples)
    assert ok and bound == 6.0
    assert value > 6.0 * 0.99  # equality approached along the real axis
    assert abs(arg.imag) < 1e-9


def test_pre_schwarzian_rejects_near_pole_samples():
    with pytest.raises(ValueError):
        pre_schwarzian_bound_check(lambda a: 0.0, 1.0, 0.5, [0.45],
                                   poles=[0.5])


def test_bjest_exponential():
    lhs, (t1, t2), ratio = bjest_check(
        lambda z: (cmath.exp(z), cmath.exp(z)),
        lambda zs: np.zeros_like(zs), 0.9)
    # log f = z: Parseval gives mean |z|^2 = r^2, matching the first term
    assert lhs == pytest.approx(0.81, abs=1e-8)
    assert t1 == pytest.approx(0.81)
    assert t2 == 0.0
    assert ratio == pytest.approx(1.0, rel=1e-6)


def test_bjest_trivial():
    lhs, terms, ratio = bjest_check(lambda z: (1.0, 0.0),
                                    lambda zs: np.zeros_like(zs), 0.5)
    assert lhs == 0.0 and ratio == 0.0


def test_roth_map_values():
    assert roth_map(1.0) == pytest.approx(1.5)
    crit = roth_critical_points()
    assert sorted(round(abs(c), 12) for c in crit) == [1.0, 1.0, 1.0]
    for c in crit:
        # R'(z) = 1 - z^-3 vanishes at cube roots of unity
        assert abs(1 - c ** (-3)) < 1e-12


def test_roth_preimages():
    roots = roth_value_map(0.0)
    assert len(roots) == 3
    for z in roots:
        assert abs(abs(z) - 2 ** (-1 / 3)) < 1e-10
        assert abs(roth_map(z)) < 1e-10


def test_roth_infinity():
    assert roth_value_map(math.inf) == [math.inf]


def test_roth_surjective_sampling():
    rng = np.random.default_rng(5)
    for _ in range(200):
        w = complex(rng.uniform(-100, 100), rng.uniform(-100, 100))
        roots = roth_value_map(w)
        assert roots
        assert min(abs(roth_map(z) - w) for z in roots) < 1e-6 * max(1, abs(w))
