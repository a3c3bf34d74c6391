import math

import numpy as np
import pytest

from app.errors import ConfigError, PoleError
from app.services.special_functions import riemann_zeta
from app.services.weights import (
    ArithmeticProgression,
    Constant,
    Periodic,
    Power,
    Scaled,
    WeightSequence,
    dirichlet_deriv_zero,
    dirichlet_residue,
    dirichlet_value,
    fourier_coeffs,
    parse_family,
    weight_at,
)


def test_weight_at(power2, odd_parts, constant, periodic102):
    assert weight_at(power2, 3) == 3
    assert weight_at(odd_parts, 4) == 0
    assert weight_at(constant, 7) == 1
    # weights[m mod 3]
    assert [weight_at(periodic102, m) for m in (1, 2, 3, 4)] == [0.0, 2.0, 1.0, 0.0]
    scaled = WeightSequence(Scaled(ArithmeticProgression(1, 2), 1.5))
    assert weight_at(scaled, 9) == pytest.approx(9**0.5)
    assert weight_at(scaled, 4) == 0


def test_admissibility_metadata():
    assert WeightSequence(Constant()).s0 == 1.0
    assert WeightSequence(Power(2.5)).s0 == 2.5
    assert WeightSequence(Scaled(Power(2.0), 1.5)).s0 == pytest.approx(2.5)
    assert WeightSequence(ArithmeticProgression(2, 5)).period == 5


@pytest.mark.parametrize(
    "build",
    [
        lambda: ArithmeticProgression(2, 4),
        lambda: ArithmeticProgression(1, 1),
        lambda: Power(0.0),
        lambda: Periodic(()),
        lambda: Periodic((0.0, 0.0)),
        lambda: Scaled(Constant(), -1.0),
        lambda: WeightSequence(Constant(), sigma0=0.5),
        lambda: WeightSequence(Constant(), sigma0=-1.0),
    ],
)
def test_invalid_families_rejected(build):
    with pytest.raises(ConfigError):
        build()


def test_dirichlet_value_examples(constant):
    assert dirichlet_value(constant, 1, 1, 0.0).real == pytest.approx(-0.5, abs=1e-12)
    for s0 in (0.5, 2.0, 3.0):
        seq = WeightSequence(Power(s0))
        zeta = riemann_zeta(1 - s0)
        assert dirichlet_value(seq, 1, 1, 0.0).real == pytest.approx(zeta, rel=1e-10)
        assert dirichlet_value(seq, 1, 2, 0.0).real == pytest.approx(
            (2**s0 - 1) * zeta, rel=1e-10
        )


def test_dirichlet_value_pole(constant):
    with pytest.raises(PoleError):
        dirichlet_value(constant, 1, 1, 1.0)


def test_residues(constant, power2):
    assert dirichlet_residue(constant, 1, 1) == pytest.approx(1.0)
    assert abs(dirichlet_residue(power2, 1, 2)) < 1e-14
    for a, j in ((1, 2), (1, 3), (2, 3), (3, 5)):
        seq = WeightSequence(ArithmeticProgression(a, j))
        assert dirichlet_residue(seq, j, j) == pytest.approx(1 / j)


def test_fourier_coeffs_k1(constant, power2):
    data = fourier_coeffs(constant, 1)
    assert data.b[0] == pytest.approx(-0.5)
    assert data.c[0] == pytest.approx(1.0)
    data = fourier_coeffs(power2, 1)
    assert data.b[0] == pytest.approx(-1 / 12)
    assert data.c[0] == pytest.approx(1.0)


def test_constant_family_coefficients(constant):
    data = fourier_coeffs(constant, 2)
    assert data.b == pytest.approx((-0.5, 0.0), abs=1e-12)
    assert data.c == pytest.approx((0.5, 0.5), abs=1e-14)
    for k in range(1, 9):
        assert fourier_coeffs(constant, k).c == pytest.approx((1 / k,) * k, abs=1e-14)


def test_odd_parts_quarter_coefficients(odd_parts):
    data = fourier_coeffs(odd_parts, 4)
    assert data.b == pytest.approx((0.0, 0.25, 0.0, -0.25), abs=1e-12)


@pytest.mark.parametrize("a,j", [(1, 3), (2, 3), (1, 4), (3, 7)])
def test_progression_value_at_zero(a, j):
    seq = WeightSequence(ArithmeticProgression(a, j))
    assert fourier_coeffs(seq, 1).b[0] == pytest.approx(0.5 - a / j, abs=1e-12)


@pytest.mark.parametrize(
    "family",
    [Constant(), Power(2.0), Power(0.5), ArithmeticProgression(1, 3), Periodic((1.0, 0.0, 2.0))],
)
@pytest.mark.parametrize("k", [2, 5, 6, 12])
def test_fourier_round_trip(family, k):
    data = fourier_coeffs(WeightSequence(family), k)
    for h in range(1, k + 1):
        value, residue = data.value(h), data.residue(h)
        assert abs(data.reconstruct_value(h) - value) <= 1e-10 * max(abs(value), 1.0)
        assert abs(data.reconstruct_residue(h) - residue) <= 1e-10 * max(abs(residue), 1.0)


def test_trivial_character_is_real(periodic102):
    for k in (3, 4, 6):
        data = fourier_coeffs(periodic102, k)
        assert data.value(k).imag == 0.0
        assert data.residue(k).imag == 0.0


def test_constant_matches_power_one():
    constant = WeightSequence(Constant())
    power = WeightSequence(Power(1.0))
    for k in range(1, 13):
        a, b = fourier_coeffs(constant, k), fourier_coeffs(power, k)
        assert np.allclose(a.values_at_zero, b.values_at_zero, rtol=0, atol=1e-12)
        assert np.allclose(a.residues, b.residues, rtol=0, atol=1e-12)


def test_h_is_reduced_mod_k(ap13):
    for h in range(1, 6):
        assert dirichlet_value(ap13, h + 6, 6, 0.0) == pytest.approx(
            dirichlet_value(ap13, h, 6, 0.0), abs=1e-14
        )


@pytest.mark.parametrize(
    "family",
    [Constant(), ArithmeticProgression(1, 3), Periodic((1.0, 0.0, 2.0)), Power(0.5)],
)
@pytest.mark.parametrize("h,k", [(1, 1), (1, 2), (1, 3), (2, 5)])
def test_direct_sum_at_three(family, h, k):
    seq = WeightSequence(family)
    m = np.arange(1, 100_001)
    weights = np.array([weight_at(seq, int(i)) for i in range(1, seq.period + 1)])
    a = weights[(m - 1) % seq.period] * m ** seq.family.shift
    direct = np.sum(a * np.exp(2j * np.pi * ((h * m) % k) / k) / m**3.0)
    assert abs(dirichlet_value(seq, h, k, 3.0) - direct) < 1e-8


def test_derivative_at_zero(constant, power2):
    assert dirichlet_deriv_zero(constant) == pytest.approx(-0.5 * math.log(2 * math.pi), abs=1e-8)
    assert dirichlet_deriv_zero(power2) == pytest.approx(-0.1654211437, abs=1e-8)
    scaled = WeightSequence(Scaled(Constant(), 1.0))
    assert dirichlet_deriv_zero(scaled) == pytest.approx(dirichlet_deriv_zero(constant), abs=1e-12)


@pytest.mark.parametrize(
    "text,family",
    [
        ("constant", Constant()),
        ("power:s0=2.0", Power(2.0)),
        ("ap:a=1,j=3", ArithmeticProgression(1, 3)),
        ("periodic:1,0,2", Periodic((1.0, 0.0, 2.0))),
        ("scaled:base=ap:a=1,j=2;s=1.5", Scaled(ArithmeticProgression(1, 2), 1.5)),
        ("scaled:base=power:s0=2;s=0.5", Scaled(Power(2.0), 0.5)),
    ],
)
def test_parse_family(text, family):
    seq = parse_family(text)
    assert seq.family == family
    assert parse_family(seq.describe()) == seq


def test_parse_sigma0():
    seq = parse_family("power:s0=2.0,sigma0=-0.5")
    assert seq.sigma0 == -0.5
    assert parse_family(seq.describe()) == seq
    assert parse_family("constant:sigma0=-0.2").sigma0 == -0.2
    assert parse_family("periodic:1,0,2;sigma0=-0.3").sigma0 == -0.3
    assert parse_family("scaled:base=constant;s=2;sigma0=-0.4").sigma0 == -0.4


@pytest.mark.parametrize(
    "text",
    [
        "bogus",
        "power:s0=2,t=1",
        "power:",
        "ap:a=1",
        "ap:a=1.5,j=2",
        "periodic:1,x",
        "scaled:s=1.5",
        "scaled:base=constant",
    ],
)
def test_parse_family_rejects(text):
    with pytest.raises(ConfigError):
        parse_family(text)
