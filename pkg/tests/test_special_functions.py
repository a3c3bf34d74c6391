import cmath
import math

import mpmath
import numpy as np
import pytest

from app.errors import DomainError, PoleError
from app.services.special_functions import (
    gamma_real,
    hurwitz_zeta,
    hurwitz_zeta_hasse,
    lerch_phi,
    polylog,
    polylog_array,
    polylog_direct,
    principal_root,
    principal_root_array,
    riemann_zeta,
)

LI2_HALF = math.pi**2 / 12 - math.log(2) ** 2 / 2


def test_hurwitz_known_values():
    assert hurwitz_zeta(2.0, 1.0) == pytest.approx(math.pi**2 / 6, rel=1e-12)
    assert hurwitz_zeta(0.0, 0.25) == pytest.approx(0.25, rel=1e-12)
    assert hurwitz_zeta(-1.0, 1.0) == pytest.approx(-1 / 12, rel=1e-12)


@pytest.mark.parametrize("nu", [0.1, 0.3, 0.5, 0.75, 1.0])
def test_hurwitz_at_zero_is_half_minus_nu(nu):
    assert hurwitz_zeta(0.0, nu) == pytest.approx(0.5 - nu, abs=1e-12)


@pytest.mark.parametrize("s", [-1.0, -0.5, 0.0, 0.5, 2.0, 4.0, 7.5])
@pytest.mark.parametrize("nu", [0.1, 0.5, 1.0])
def test_euler_maclaurin_matches_hasse(s, nu):
    assert hurwitz_zeta(s, nu) == pytest.approx(hurwitz_zeta_hasse(s, nu), rel=1e-10, abs=1e-13)


@pytest.mark.parametrize(
    "s,nu",
    [
        (-5.0, 0.01),
        (-5.0, 0.5),
        (-4.5, 0.5),
        (-4.5, 1.0),
        (-3.0, 0.1),
        (-3.0, 0.5),
        (-2.5, 0.3),
        (-1.5, 0.1),
        (-1.5, 0.75),
        (-0.75, 0.9),
    ],
)
def test_negative_order_matches_hasse(s, nu):
    assert hurwitz_zeta(s, nu) == pytest.approx(hurwitz_zeta_hasse(s, nu), rel=1e-10, abs=1e-13)


@pytest.mark.parametrize("m", [1, 2, 3, 4, 5])
def test_negative_integer_order_is_bernoulli(m):
    # zeta(-m, nu) = -B_{m+1}(nu) / (m + 1)
    for nu in (0.2, 0.35, 0.9):
        expected = -float(mpmath.bernpoly(m + 1, nu)) / (m + 1)
        assert hurwitz_zeta(-m, nu) == pytest.approx(expected, rel=1e-11, abs=1e-14)


def test_hasse_examples():
    assert hurwitz_zeta_hasse(2.0, 1.0) == pytest.approx(math.pi**2 / 6, rel=1e-12)
    assert hurwitz_zeta_hasse(0.0, 1.0) == pytest.approx(-0.5, rel=1e-12)
    assert hurwitz_zeta_hasse(-2.0, 1.0) == pytest.approx(0.0, abs=1e-12)


def test_hurwitz_pole_and_domain():
    with pytest.raises(PoleError):
        hurwitz_zeta(1.0, 0.5)
    with pytest.raises(PoleError):
        hurwitz_zeta_hasse(1.0, 0.5)
    with pytest.raises(DomainError):
        hurwitz_zeta(2.0, 0.0)
    with pytest.raises(DomainError):
        hurwitz_zeta(2.0, 1.5)


def test_riemann_zeta_reflection_range():
    assert riemann_zeta(-1.0) == pytest.approx(-1 / 12, rel=1e-12)
    assert riemann_zeta(-7.0) == pytest.approx(1 / 240, rel=1e-10)
    assert riemann_zeta(-8.0) == 0.0
    assert riemann_zeta(4.0) == pytest.approx(math.pi**4 / 90, rel=1e-12)


def test_riemann_zeta_near_negative_even_integers():
    # the trivial zeros are simple: zeta(-2 + d) ~ zeta'(-2) d
    slope = -float(mpmath.zeta(3)) / (4 * math.pi**2)
    for d in (1e-5, 1e-7, -1e-9):
        assert riemann_zeta(-2.0 + d) == pytest.approx(slope * d, rel=1e-4)
    assert riemann_zeta(-4.5) == pytest.approx(float(mpmath.zeta(-4.5)), rel=1e-13)


def test_gamma_values():
    assert gamma_real(1.5) == pytest.approx(math.sqrt(math.pi) / 2, rel=1e-15)
    assert gamma_real(5.0) == 24.0
    for x in (0.0, -1.5, 172.0):
        with pytest.raises(DomainError):
            gamma_real(x)


def test_principal_root_branch():
    assert principal_root(4, 2) == pytest.approx(2)
    assert principal_root(-1, 2) == pytest.approx(1j)
    assert principal_root(-8, 3) == pytest.approx(1 + 1j * math.sqrt(3))
    with pytest.raises(DomainError):
        principal_root(0, 2)


def test_principal_root_inverts_power():
    rng = np.random.default_rng(7)
    for w in rng.normal(size=20) + 1j * rng.normal(size=20):
        for p in (1.5, 2.0, 3.0):
            root = principal_root(w, p)
            assert -math.pi / p < cmath.phase(root) <= math.pi / p + 1e-15
            assert abs(cmath.exp(p * cmath.log(root)) - w) <= 1e-12 * abs(w)


def test_principal_root_array_matches_scalar():
    w = np.array([4.0, -1.0, -8.0, 0.3 - 0.2j, 0.0])
    roots = principal_root_array(w, 3.0)
    for value, root in zip(w[:-1], roots[:-1]):
        assert root == pytest.approx(principal_root(value, 3.0), rel=1e-14)
    assert roots[-1] == 0


def test_polylog_examples():
    assert polylog(2, 0) == 0
    assert polylog(2, 0.5).real == pytest.approx(LI2_HALF, rel=1e-12)
    assert polylog(1, 0.3).real == pytest.approx(-math.log(0.7), rel=1e-12)


def test_polylog_log_series_agrees_with_direct_sum():
    for z in (0.6, -0.8, 0.7j, 0.9 * cmath.exp(2j), 0.95):
        for s in (1.5, 2.0, 3.0):
            assert polylog(s, z) == pytest.approx(polylog_direct(s, z), rel=1e-11)


def test_polylog_is_real_on_the_real_axis():
    for x in (-0.999, -0.7, 0.55, 0.9):
        for s in (1.0, 1.5, 2.0, 3.0):
            assert polylog(s, x).imag == 0.0
    values = polylog_array(2.0, np.array([-0.7, 0.8, 0.6j]))
    assert values[0].imag == 0.0 and values[1].imag == 0.0
    assert values[2].imag != 0.0


@pytest.mark.parametrize("m", [1, 2, 3])
@pytest.mark.parametrize("offset", [0.0, 1e-2, 1e-4, 3e-5, 1e-6, 3e-9, 1e-12])
@pytest.mark.parametrize("sign", [1, -1])
def test_polylog_near_integer_order(m, offset, sign):
    s = m + sign * offset
    with mpmath.workdps(40):
        for z in (0.51, -0.9999, 0.8j, 0.95 * cmath.exp(2.5j), -0.6 + 0.3j):
            expected = complex(mpmath.polylog(s, z))
            assert polylog(s, z) == pytest.approx(expected, rel=1e-10)


@pytest.mark.parametrize("s", [1.5, 2.0, 3.0])
def test_polylog_squaring_identity(s):
    rng = np.random.default_rng(11)
    radii = 0.9 * np.sqrt(rng.uniform(size=100))
    angles = rng.uniform(-math.pi, math.pi, size=100)
    for z in radii * np.exp(1j * angles):
        lhs = polylog(s, z) + polylog(s, -z)
        rhs = 2 ** (1 - s) * polylog(s, z * z)
        assert abs(lhs - rhs) <= 1e-10 * max(abs(rhs), 1e-300) + 1e-15


def test_polylog_conjugate_symmetry():
    for z in (0.3 + 0.4j, -0.7 + 0.1j, 0.2 - 0.9j):
        assert polylog(2.5, z.conjugate()) == pytest.approx(polylog(2.5, z).conjugate(), rel=1e-14)


def test_polylog_array_matches_scalar():
    z = np.array([0.1, -0.45, 0.3 + 0.3j, 0.8j, -0.97, 0.6 - 0.7j])
    values = polylog_array(2.0, z)
    for point, value in zip(z, values):
        assert value == pytest.approx(polylog(2.0, point), rel=1e-13)


def test_polylog_domain():
    with pytest.raises(DomainError):
        polylog(2, 0.9999999)
    with pytest.raises(DomainError):
        polylog(0.0, 0.5)


def test_lerch_examples():
    assert lerch_phi(0, 2, 0.5) == pytest.approx(4.0)
    assert lerch_phi(0.5, 2, 1.0).real == pytest.approx(LI2_HALF / 0.5, rel=1e-12)


@pytest.mark.parametrize("k", [1, 2, 3, 4, 5, 6])
def test_multisection_identity(k):
    z = 0.4 + 0.1j
    lhs = sum(z**r * lerch_phi(z**k, 2.0, r / k) for r in range(1, k + 1))
    assert lhs == pytest.approx(k**2 * polylog(2.0, z), rel=1e-10)
