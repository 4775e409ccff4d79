import cmath

import numpy as np
import pytest

from boussinesq_lri.errors import BlowUpError, ParameterError
from boussinesq_lri.experiments import run, solitary_wave, error_norm
from boussinesq_lri.lri1 import I1, I2, I3, SchemeParams, step_phi
from boussinesq_lri.spectral import Grid, SpectralField, psi1, sobolev_norm
from boussinesq_lri.state import from_u, to_u, ComplexState

from oracles import assert_lipschitz_form, double_sum, quadrature, random_field, rel_err

TAU = 0.37


@pytest.fixture
def grid():
    return Grid(32)


def test_scheme_params_validation():
    with pytest.raises(ParameterError):
        SchemeParams(c=0.0)
    with pytest.raises(ParameterError):
        SchemeParams(tau=-1e-3)


@pytest.mark.parametrize("op", [I1, I2, I3])
def test_zero_field(grid, op):
    assert np.all(op(SpectralField.zeros(grid), TAU).coeffs == 0)


def test_constant_field(grid):
    a = 0.7 - 0.4j
    f = SpectralField.constant(a, grid)
    assert I1(f, TAU).coeffs[0] == pytest.approx(TAU * a * a)
    assert I2(f, TAU).coeffs[0] == pytest.approx(TAU * abs(a) ** 2)
    assert I3(f, TAU).coeffs[0] == pytest.approx(TAU * np.conj(a) ** 2)
    for op in (I1, I2, I3):
        assert np.all(np.abs(op(f, TAU).coeffs[1:]) < 1e-15)


def test_single_mode(grid):
    e = SpectralField.mode(1, grid)
    out = I1(e, TAU)
    assert out.coeff(2) == pytest.approx(0.5j * (cmath.exp(-2j * TAU) - 1), abs=1e-15)
    assert np.sum(np.abs(out.coeffs)) == pytest.approx(abs(out.coeff(2)))

    out = I2(e, TAU)
    assert out.zero_mode == pytest.approx(TAU, abs=1e-15)
    assert np.sum(np.abs(out.coeffs)) == pytest.approx(TAU)

    out = I3(e, TAU)
    assert out.coeff(-2) == pytest.approx((1 - cmath.exp(-8j * TAU)) / 8j, abs=1e-15)


@pytest.mark.parametrize("L", [np.pi, 5.0])
@pytest.mark.parametrize("seed", range(3))
def test_I1_I2_oracles(L, seed):
    rng = np.random.default_rng(seed)
    f = random_field(rng, Grid(32, L))
    for op, kind in ((I1, "pp"), (I2, "pm")):
        closed = op(f, TAU)
        assert rel_err(closed, double_sum(f, f, TAU, kind, 0)) < 1e-10
        assert rel_err(closed, quadrature(f, f, TAU, kind, 0)) < 1e-10


def test_I3_defining_sum():
    rng = np.random.default_rng(7)
    f = random_field(rng, Grid(32, 2.0))
    assert rel_err(I3(f, TAU), double_sum(f, f, TAU, "mm", 0)) < 1e-12


def test_I3_matches_psi_multiplier(grid):
    rng = np.random.default_rng(8)
    f = random_field(rng, grid)
    fb = f.conj()
    sq = SpectralField.from_values(fb.values() ** 2, grid)
    expected = sq * (TAU * psi1(-2j * TAU * grid.kappa2))
    assert rel_err(I3(f, TAU), expected) < 1e-13


def test_dealiased_products_stay_band_limited(grid):
    rng = np.random.default_rng(9)
    f = random_field(rng, grid, kmax=15)
    high = np.abs(grid.k) > 2 * (grid.M // 3)
    out = I1(f, TAU, dealias=True)
    assert np.all(np.abs(out.coeffs[high]) < 1e-14)


def test_step_zero(grid):
    assert np.all(step_phi(SpectralField.zeros(grid), SchemeParams(1.0, 0.1)).coeffs == 0)


@pytest.mark.filterwarnings("ignore::RuntimeWarning")
def test_step_nonfinite_raises(grid):
    bad = SpectralField.mode(1, grid, np.inf)
    with pytest.raises(BlowUpError):
        step_phi(bad, SchemeParams())


def test_step_matches_literal_formula():
    rng = np.random.default_rng(10)
    g = Grid(32, 3.0)
    u = random_field(rng, g)
    c, tau = 0.4, 0.05
    B = np.sqrt(c + g.kappa2 + g.kappa2**2)
    E = np.exp(1j * tau * B)
    P = psi1(-2j * tau * g.kappa2)
    nl = I1(u, tau) + I2(u, tau) * 2 + I3(u, tau)
    expected = (
        u * E
        - u * (0.5j * c * tau * E / B)
        - u.conj() * (0.5j * c * tau * E * P / B)
        - nl * (0.25j * (-g.kappa2) * E / B)
    )
    assert rel_err(step_phi(u, SchemeParams(c, tau)), expected) < 1e-13


def test_local_error_second_order():
    g = Grid(256, 40.0)
    s0 = solitary_wave(g, 0.0, 0.5)
    errs = []
    for tau in (2e-3, 1e-3, 5e-4):
        out = run("lri1", s0, SchemeParams(1.0, tau), tau)
        errs.append(error_norm(out, solitary_wave(g, tau, 0.5), 1.0).z)
    ratios = np.array(errs[:-1]) / np.array(errs[1:])
    assert np.all(np.abs(ratios - 4) < 0.5)


def test_lipschitz_probe():
    rng = np.random.default_rng(11)
    f = random_field(rng, Grid(32, 10.0), kmax=7, scale=0.05)
    taus = [0.1 * 2.0**-j for j in range(5)]
    K, _ = assert_lipschitz_form(step_phi, f, taus, lambda t: SchemeParams(1.0, t))
    assert K < 10


def test_realness_preserved():
    g = Grid(64, 10.0)
    rng = np.random.default_rng(12)
    s0 = from_u(ComplexState(random_field(rng, g, real=True, kmax=15, scale=0.1), 1.0))
    u = to_u(s0).u
    p = SchemeParams(1.0, 0.05)
    for _ in range(50):
        u = step_phi(u, p)
    assert from_u(ComplexState(u, 1.0)).is_real(1e-8)
