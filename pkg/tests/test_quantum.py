import math

import numpy as np
import pytest
import sympy as sp
from scipy import integrate as sci_integrate

from threepillar.errors import ConfigurationError, InvalidCutoffError, InvalidModelError
from threepillar.quantum import (CutoffInterval, QuadraticHamiltonian, central_force_expectation,
                                 expectation_r, fd_excitation_gaps, fd_ground_state,
                                 ground_state, normal_modes, reduce_hamiltonian, truncated_mean)

GRID = [(m, k) for m in (0.5, 1.0, 2.0) for k in (0.5, 1.0, 4.0, 16.0)]


def symbolic_reduction():
    """Substitute the constraint into H with sympy and read off the coefficients."""
    m, k = sp.symbols("m k", positive=True)
    pr, ps, r, s = sp.symbols("p_r p_s r s")
    px, pz = pr + ps, pr - ps
    x, z = (r + s) / 2, (r - s) / 2
    kinetic = sp.expand((px**2 + ((px + pz) / 2) ** 2 + pz**2) / (2 * m))
    potential = sp.expand(k * (x**2 + ((x + z) / 2) ** 2 + z**2) / 2)
    coeff = lambda expr, a, b: sp.Poly(expr, a, b).coeff_monomial
    return m, k, {
        "c_r": coeff(kinetic, pr, ps)(pr**2), "c_s": coeff(kinetic, pr, ps)(ps**2),
        "c_rs": coeff(kinetic, pr, ps)(pr * ps),
        "v_r": coeff(potential, r, s)(r**2), "v_s": coeff(potential, r, s)(s**2),
        "v_rs": coeff(potential, r, s)(r * s),
    }


def test_reduced_coefficients_unit_model():
    red = reduce_hamiltonian(QuadraticHamiltonian(1.0, 1.0))
    assert red.kinetic_coeffs == (1.5, 1.0)
    assert red.potential_coeffs == (0.375, 0.25)


def test_reduced_coefficients_match_symbolic_substitution():
    m, k, c = symbolic_reduction()
    red = reduce_hamiltonian(QuadraticHamiltonian(2.0, 8.0))
    subs = {m: 2, k: 8}
    assert red.kinetic_coeffs == (float(c["c_r"].subs(subs)), float(c["c_s"].subs(subs)))
    assert red.potential_coeffs == (float(c["v_r"].subs(subs)), float(c["v_s"].subs(subs)))
    assert red.kinetic_coeffs == (0.75, 0.5) and red.potential_coeffs == (3.0, 2.0)
    assert c["c_rs"] == 0 and c["v_rs"] == 0


@pytest.mark.parametrize("m, k", GRID)
def test_cross_terms_vanish_exactly(m, k):
    red = reduce_hamiltonian(QuadraticHamiltonian(m, k))
    assert red.kinetic_cross == 0.0 and red.potential_cross == 0.0
    assert red.kinetic_form[0][1] == 0 and red.potential_form[0][1] == 0


def test_invalid_model():
    for m, k in [(0, 1), (1, -1), (float("nan"), 1), (1, float("inf"))]:
        with pytest.raises(InvalidModelError):
            QuadraticHamiltonian(m, k)


@pytest.mark.parametrize("k, expected", [(1.0, (1.5, 1.0)), (4.0, (3.0, 2.0))])
def test_normal_modes_against_fd_gaps(k, expected):
    red = reduce_hamiltonian(QuadraticHamiltonian(1.0, k))
    modes = normal_modes(red)
    assert (modes.omega_r, modes.omega_s) == pytest.approx(expected, rel=1e-15)
    gaps = fd_excitation_gaps(red, 2001)
    assert gaps == pytest.approx(expected, rel=1e-6)


@pytest.mark.parametrize("m, k", GRID)
def test_mode_ratio_and_effective_masses(m, k):
    modes = normal_modes(reduce_hamiltonian(QuadraticHamiltonian(m, k)))
    assert modes.omega_r / modes.omega_s == pytest.approx(1.5, rel=1e-15)
    assert modes.effective_mass_r == pytest.approx(m / 3) and modes.effective_mass_s == pytest.approx(m / 2)


@pytest.mark.parametrize("k, coeff", [(1.0, 0.25), (16.0, 1.0)])
def test_gaussian_coefficients(k, coeff):
    gs = ground_state(reduce_hamiltonian(QuadraticHamiltonian(1.0, k)))
    assert (gs.gaussian_coefficient_r, gs.gaussian_coefficient_s) == pytest.approx((coeff, coeff), rel=1e-15)


def test_gaussian_coefficients_scale_with_sqrt_km():
    for k in np.logspace(-3, 6, 19):
        for m in (0.3, 1.0, 7.0):
            gs = ground_state(reduce_hamiltonian(QuadraticHamiltonian(m, float(k))))
            assert gs.gaussian_coefficient_r == pytest.approx(math.sqrt(k * m) / 4, rel=1e-14)
            assert gs.gaussian_coefficient_s == pytest.approx(math.sqrt(k * m) / 4, rel=1e-14)
            assert gs.energy == pytest.approx(1.25 * math.sqrt(k / m), rel=1e-14)


def test_fd_ground_energy_unit_model():
    red = reduce_hamiltonian(QuadraticHamiltonian(1.0, 1.0))
    fd = fd_ground_state(red, 2001, 10.0)
    assert fd.energy == pytest.approx(1.25, abs=1e-6)
    # the raw second-order eigenvalue carries the expected -(c a^2 / 4) h^2 error per mode
    h = fd.grid_r[1] - fd.grid_r[0]
    predicted = -(1.5 + 1.0) * 0.25**2 / 4 * h * h
    assert fd.energy_raw - 1.25 == pytest.approx(predicted, rel=2e-3)
    gauss = np.exp(-fd.grid_r**2 / 4)
    gauss /= np.linalg.norm(gauss)
    assert (fd.vector_r @ gauss) ** 2 >= 1 - 1e-6


def test_fd_eigenvector_even():
    fd = fd_ground_state(reduce_hamiltonian(QuadraticHamiltonian(1.0, 1.0)))
    for v in (fd.vector_r, fd.vector_s):
        assert np.max(np.abs(v - v[::-1])) <= 1e-12


def test_fd_configuration_errors():
    red = reduce_hamiltonian(QuadraticHamiltonian(1.0, 1.0))
    with pytest.raises(ConfigurationError):
        fd_ground_state(red, 2000)
    with pytest.raises(ConfigurationError):
        fd_ground_state(red, 51)
    with pytest.raises(ConfigurationError):
        fd_ground_state(red, 2001, box_halfwidth=3.0)


@pytest.mark.parametrize("m, k", GRID)
def test_discretized_states_have_zero_mean_position(m, k):
    fd = fd_ground_state(reduce_hamiltonian(QuadraticHamiltonian(m, k)), 1001)
    assert abs(fd.grid_r @ fd.vector_r**2) <= 1e-12
    assert abs(fd.grid_s @ fd.vector_s**2) <= 1e-12


@pytest.mark.parametrize("k", [1.0, 100.0, 1e6])
def test_expectation_r_vanishes(k):
    gs = ground_state(reduce_hamiltonian(QuadraticHamiltonian(1.0, k)))
    assert abs(expectation_r(gs)) <= 1e-12
    assert abs(expectation_r(gs, excitation=1)) <= 1e-12
    assert abs(expectation_r(gs, excitation=3)) <= 1e-12


@pytest.mark.parametrize("m, k", [(1.0, 1.0), (0.5, 16.0), (2.0, 1e4)])
def test_force_without_cutoff_is_exactly_a_third(m, k):
    model = QuadraticHamiltonian(m, k)
    assert central_force_expectation(model, 12.0) == 4.0
    assert central_force_expectation(model, 0.0) == 0.0


def truncated_force_oracle(m, k, W, lo, hi):
    """2-D quadrature of the truncated ground state; the s integral is kept explicitly."""
    a = math.sqrt(k * m) / 4
    rho_r = lambda r: math.exp(-2 * a * r * r)
    rho_s = lambda s: math.exp(-2 * a * s * s)
    S = sci_integrate.quad(rho_s, -np.inf, np.inf, epsabs=1e-14)[0]
    num = sci_integrate.quad(lambda r: r * rho_r(r), lo, hi, epsabs=0, epsrel=1e-13)[0] * S
    den = sci_integrate.quad(rho_r, lo, hi, epsabs=0, epsrel=1e-13)[0] * S
    return W / 3 - k / 2 * num / den


@pytest.mark.parametrize("m, k, W, lo, hi", [
    (1.0, 1.0, 12.0, -1.0, 2.0),
    (1.0, 4.0, 0.0, -math.inf, 0.5),
    (2.0, 9.0, 3.0, -0.2, math.inf),
    (0.5, 100.0, 1.0, 0.1, 0.4),
])
def test_truncated_force_matches_quadrature(m, k, W, lo, hi):
    model = QuadraticHamiltonian(m, k)
    got = central_force_expectation(model, W, CutoffInterval(lo, hi))
    assert got == pytest.approx(truncated_force_oracle(m, k, W, lo, hi), rel=1e-10, abs=1e-12)


def test_truncated_mean_in_far_tail():
    # 50-digit closed form with mpmath's own erfc
    import mpmath as mp
    mp.mp.dps = 50
    for lo, hi in [(4.0, 5.0), (10.0, 10.5), (30.0, math.inf), (-math.inf, -6.0), (-1.0, 40.0)]:
        e = lambda u: mp.mpf(0) if math.isinf(u) else mp.e ** (-mp.mpf(u) ** 2)
        c = lambda u: mp.erfc(mp.mpf(u)) if math.isfinite(u) else (mp.mpf(0) if u > 0 else mp.mpf(2))
        num = (e(lo) - e(hi)) / 2
        den = mp.sqrt(mp.pi) / 2 * (c(lo) - c(hi))
        assert truncated_mean(lo, hi) == pytest.approx(float(num / den), rel=1e-12)


def test_degenerate_cutoff():
    with pytest.raises(InvalidCutoffError):
        CutoffInterval(1.0, 1.0)
    with pytest.raises(InvalidCutoffError):
        central_force_expectation(QuadraticHamiltonian(1, 1), 0.0, (2.0, -2.0))


def test_force_depends_on_mass_and_stiffness_through_sqrt_km_per_unit_k():
    # the truncated mean <r> is fixed by sqrt(km); (F - W/3)/k is then invariant
    cut = CutoffInterval(-math.inf, 0.3)
    a = QuadraticHamiltonian(4.0, 1.0)
    b = QuadraticHamiltonian(1.0, 4.0)
    fa = central_force_expectation(a, 0.0, cut) / a.stiffness
    fb = central_force_expectation(b, 0.0, cut) / b.stiffness
    assert fa == pytest.approx(fb, rel=1e-14)
