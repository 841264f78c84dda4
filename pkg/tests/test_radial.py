import math

import numpy as np
import pytest

from nil3lab import radial as rd
from nil3lab.surface import warp_g

SQRT2 = math.sqrt(2.0)


def test_t0_min_examples():
    assert rd.t0_min(3.0) == pytest.approx(1.0, abs=1e-14)
    assert rd.t0_min(math.sqrt(20.0)) == pytest.approx(SQRT2, abs=1e-14)
    assert rd.t0_min(1e-8) < 1e-4
    with pytest.raises(ValueError):
        rd.t0_min(0.0)
    with pytest.raises(ValueError):
        rd.t0_min(-2.0)


def test_neck_identity():
    for c in (0.1, 1.0, 3.0, 10.0, 100.0):
        a = rd.t0_min(c)
        assert abs(a * a * (a * a + 8.0) - c * c) <= 1e-10 * max(1.0, c * c)


def test_catenoid_params_validation():
    with pytest.raises(ValueError):
        rd.CatenoidParams(-1.0, 1.0)
    with pytest.raises(ValueError):
        rd.CatenoidParams(3.0, 0.5)  # below the minimal neck
    rd.CatenoidParams(3.0, 1.0)
    rd.CatenoidParams(3.0, 2.0)


def test_catenoid_height_at_neck_and_monotone():
    params = rd.CatenoidParams(3.0, 1.0)
    assert rd.catenoid_height(params, 1.0) == 0.0
    heights = [rd.catenoid_height(params, t) for t in (1.5, 2.0, 3.0, 5.0, 9.0)]
    assert all(h > 0 for h in heights)
    assert all(b > a for a, b in zip(heights, heights[1:]))
    with pytest.raises(ValueError):
        rd.catenoid_height(params, 0.5)


def test_catenoid_height_observed_plateau():
    # defining integrand decays like c/(sqrt(2) s^2): the half-height levels off
    params = rd.CatenoidParams(3.0, 1.0)
    gaps = [
        rd.catenoid_height(params, 2 * t) - rd.catenoid_height(params, t)
        for t in (5.0, 10.0, 20.0)
    ]
    assert all(g > 0 for g in gaps)
    assert gaps[2] < gaps[1] < gaps[0]
    assert gaps[2] < 0.06


def test_catenoid_quadrature_methods_agree_at_minimal_neck():
    # the raw integrand is integrable even at the minimal neck; both routes
    # agree, and an unreachable tolerance surfaces as QuadratureError
    import warnings

    params = rd.CatenoidParams(3.0, 1.0)
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        plain = rd.catenoid_height(params, 3.0, tol=1e-11, method="plain")
    sub = rd.catenoid_height(params, 3.0, tol=1e-12, method="substituted")
    assert abs(plain - sub) <= 1e-11
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        with pytest.raises(rd.QuadratureError):
            rd.catenoid_height(params, 3.0, tol=1e-17, method="plain")


def test_catenoid_quadrature_methods_agree_off_neck():
    params = rd.CatenoidParams(3.0, 2.0)  # non-minimal neck: integrand bounded at t0
    for t in (2.5, 4.0, 7.0):
        a = rd.catenoid_height(params, t, tol=1e-11, method="plain")
        b = rd.catenoid_height(params, t, tol=1e-11, method="substituted")
        assert abs(a - b) <= 1e-11


def test_catenoid_flux_examples():
    params = rd.CatenoidParams(3.0, 1.0)
    f2 = rd.catenoid_flux_check(params, 2.0)
    f5 = rd.catenoid_flux_check(params, 5.0)
    assert abs(f2 - f5) <= 1e-8
    expected = 3.0 / (2.0 * SQRT2)
    assert f2 == pytest.approx(expected, abs=1e-8)
    assert warp_g(1.0) == pytest.approx(expected, abs=1e-14)
    with pytest.raises(ValueError):
        rd.catenoid_flux_check(params, 1.0)


def test_catenoid_flux_constancy_along_profile():
    params = rd.CatenoidParams(3.0, 1.0)
    radii = np.concatenate([[1.05, 1.1, 1.25], np.linspace(1.5, 20.0, 9)])
    fluxes = [rd.catenoid_flux_check(params, r) for r in radii]
    assert max(fluxes) - min(fluxes) <= 1e-8


def test_catenoid_height_agrees_with_first_integral_route():
    # height by quadrature of the defining integrand vs height integrated
    # from the flux first integral with the neck value c/(2 sqrt 2)
    params = rd.CatenoidParams(3.0, 1.0)
    for t in (1.5, 2.0, 4.0):
        via_quad = SQRT2 * rd.catenoid_height(params, t, tol=1e-12)
        via_flux = rd.flux_height_difference(3.0 / (2.0 * SQRT2), 1.0, t, tol=1e-12)
        assert abs(via_quad - via_flux) <= 1e-10


def test_catenoid_degenerate_small_flux():
    c = 1e-3
    params = rd.CatenoidParams(c, rd.t0_min(c))
    flux = rd.catenoid_flux_check(params, 1.0)
    assert abs(flux - c / (2 * SQRT2)) <= 1e-8
    assert rd.catenoid_height(params, 2.0) < 1e-2  # nearly flat plane


def test_barrier_normalization():
    for s, alpha in ((1.0, 1.0), (0.5, 2.0), (3.0, 0.7)):
        params = rd.BarrierParams(s, alpha)
        f0, fp0 = rd.barrier_f(params, 0.0)
        assert f0 == 0.0
        assert abs(fp0 - s) <= 1e-12
    with pytest.raises(ValueError):
        rd.BarrierParams(-1.0, 1.0)
    with pytest.raises(ValueError):
        rd.BarrierParams(1.0, 0.0)


def test_barrier_ode_residual():
    params = rd.BarrierParams(1.0, 1.0)
    for r in (0.0, 1.0, 5.0, 20.0):
        assert abs(rd.barrier_ode_residual(params, r)) <= 1e-10
    grid = np.linspace(0.0, 30.0, 121)
    assert np.max(np.abs(rd.barrier_ode_residual(params, grid))) <= 1e-10


def test_barrier_bounded_and_monotone():
    params = rd.BarrierParams(1.0, 1.0)
    bound = rd.barrier_sup_bound(params)
    f_huge, fp_huge = rd.barrier_f(params, 1e6)
    assert f_huge <= bound
    assert fp_huge < 1e-10
    prof = rd.barrier_profile(params, np.linspace(0.0, 40.0, 81))
    assert np.all(np.diff(prof.value) > 0)
    assert np.all(prof.deriv > 0)


def test_curvature_bound_margin():
    params = rd.BarrierParams(1.0, 1.0)
    report = rd.subsolution_check(params, 1.0, np.array([0.5, 1.0, 5.0, 20.0]))
    assert np.all(report.bound_margin > 0)
    assert report.min_margin > 0


def test_subsolution_property():
    params = rd.BarrierParams(1.0, 1.0)
    grid = np.linspace(1e-3, 30.0, 200)
    report = rd.subsolution_check(params, 1.0, grid)
    assert report.min_operator >= -1e-10
    assert report.ok
    zero = rd.subsolution_check(rd.BarrierParams(0.0, 1.0), 1.0, grid)
    assert np.all(zero.operator_values == 0.0)
    with pytest.raises(ValueError):
        rd.subsolution_check(params, 2.0, grid)  # alpha must equal r0


def test_radial_mse_solve_trivial():
    prof = rd.radial_mse_solve(1.0, 5.0, 0.0, 0.0)
    assert prof.flux == 0.0
    assert np.all(prof.value == 0.0)
    prof7 = rd.radial_mse_solve(1.0, 5.0, 7.0, 7.0)
    assert np.all(prof7.value == 7.0)


def test_radial_mse_solve_catenoid_round_trip():
    params = rd.CatenoidParams(3.0, 1.0)
    u_out = SQRT2 * rd.catenoid_height(params, 4.0, tol=1e-13)
    prof = rd.radial_mse_solve(1.0, 4.0, 0.0, u_out, tol=1e-10)
    assert abs(prof.flux - 3.0 / (2.0 * SQRT2)) <= 1e-8


def test_radial_mse_solve_antisymmetry():
    a = rd.radial_mse_solve(1.0, 4.0, 0.0, 1.0)
    b = rd.radial_mse_solve(1.0, 4.0, 1.0, 0.0)
    assert np.max(np.abs((a.value - 0.5) + (b.value - 0.5))) <= 1e-10
    assert a.flux == pytest.approx(-b.flux, abs=1e-14)


def test_radial_mse_solve_monotone_in_outer_value():
    lo = rd.radial_mse_solve(1.0, 4.0, 0.0, 0.5)
    hi = rd.radial_mse_solve(1.0, 4.0, 0.0, 0.8)
    assert np.all(hi.value[1:] >= lo.value[1:])
    assert np.all(hi.value[1:-1] > lo.value[1:-1])


def test_radial_mse_solve_boundary_residual():
    prof = rd.radial_mse_solve(1.0, 6.0, 0.0, 1.2, tol=1e-10)
    assert prof.bc_residual <= 1e-10
    assert abs(prof.value[-1] - 1.2) <= 1e-10


def test_radial_mse_solve_no_admissible_flux():
    attainable = rd.flux_height_difference(warp_g(1.0), 1.0, 4.0)
    with pytest.raises(rd.NoAdmissibleFluxError) as excinfo:
        rd.radial_mse_solve(1.0, 4.0, 0.0, attainable + 0.5)
    assert excinfo.value.attainable == pytest.approx(attainable, abs=1e-9)
    assert "maximal attainable" in str(excinfo.value)


def test_radial_mse_solve_argument_validation():
    with pytest.raises(ValueError):
        rd.radial_mse_solve(0.0, 4.0, 0.0, 1.0)
    with pytest.raises(ValueError):
        rd.radial_mse_solve(4.0, 1.0, 0.0, 1.0)


def test_radial_profile_validation():
    with pytest.raises(ValueError):
        rd.RadialProfile(np.array([1.0, 1.0]), np.zeros(2), np.zeros(2))
    with pytest.raises(ValueError):
        rd.RadialProfile(np.array([1.0, 2.0]), np.zeros(3), np.zeros(2))
