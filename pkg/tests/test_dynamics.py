"""Grid evolution: spectral and finite-difference derivatives, plane-wave
eigenstates, RK4 accuracy, charge conservation, stability handling, and
the frequency / residual diagnostics."""

import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from nldirac.dynamics import (
    AnalyticSolution,
    FieldState,
    Grid,
    PotentialSpec,
    bilinear_integrals,
    charge_series,
    gaussian_state,
    homogeneous_effective_mass,
    homogeneous_solution,
    homogeneous_state,
    lattice_residual,
    make_plane_wave,
    measure_frequency,
    pairwise_sum,
    parse_potential_spec,
    plane_wave_solution,
    residual_from_dtpsi,
    residual_norm,
    rhs,
    sample_solution,
    spatial_derivative,
    stability_bound,
    step_rk4,
    total_charge,
)
from nldirac.errors import AmplitudeCollapseError, StabilityFault
from nldirac.nalgebra import FunctionSpec
from nldirac.nonlinearity import NonlinearitySpec

DIRAC1 = NonlinearitySpec.dirac_mass(1.0)
IDZ = NonlinearitySpec.f_of_z(FunctionSpec.identity_Z())
HEIS = NonlinearitySpec.heisenberg()

LINE = Grid(1, 64, 16.0)


class TestGrid:
    def test_validation(self):
        with pytest.raises(ValueError):
            Grid(2, [8, 8], [1.0, 1.0])
        with pytest.raises(ValueError):
            Grid(1, 4, 16.0)  # too coarse
        with pytest.raises(ValueError):
            Grid(1, 16, -1.0)
        with pytest.raises(ValueError):
            Grid(3, [8, 8], [1, 1])  # wrong arity

    def test_geometry(self):
        g = Grid(3, [8, 16, 32], [2.0, 4.0, 8.0])
        assert g.dx == (0.25, 0.25, 0.25)
        assert g.cell_volume == pytest.approx(0.25 ** 3)
        assert g.spatial_gamma_indices() == (1, 2, 3)
        assert LINE.spatial_gamma_indices() == (3,)
        assert LINE.physical_axis(0) == 3


def test_spectral_derivative_exact_on_modes():
    x = LINE.axis_coordinates(0)
    for k_index in (0, 1, 3, 7):
        k = 2 * np.pi * k_index / 16.0
        f = np.exp(1j * k * x)[:, None] * np.ones(4)
        df = spatial_derivative(f, LINE, 0, "spectral")
        np.testing.assert_allclose(df, 1j * k * f, atol=1e-12)


def test_finite_difference_orders():
    x = LINE.axis_coordinates(0)
    k = 2 * np.pi * 2 / 16.0
    f = np.exp(1j * k * x)[:, None] * np.ones(4)
    exact = 1j * k * f
    errs = {}
    for method in ("central2", "central4"):
        df = spatial_derivative(f, LINE, 0, method)
        errs[method] = float(np.max(np.abs(df - exact)))
    assert errs["central4"] < errs["central2"] < 1e-1
    # halving dx must shrink central2 error ~4x and central4 ~16x
    fine = Grid(1, 128, 16.0)
    xf = fine.axis_coordinates(0)
    ff = np.exp(1j * k * xf)[:, None] * np.ones(4)
    exact_f = 1j * k * ff
    for method, order in (("central2", 2), ("central4", 4)):
        err_f = float(np.max(np.abs(
            spatial_derivative(ff, fine, 0, method) - exact_f)))
        ratio = errs[method] / err_f
        assert 0.7 * 2 ** order < ratio < 1.4 * 2 ** order, (method, ratio)


class TestPlaneWaves:
    def test_unit_density_and_total_charge(self):
        st8 = make_plane_wave(LINE, 2 * np.pi * 2 / 16, 1.0)
        dens = np.sum(np.abs(st8.values) ** 2, axis=-1)
        np.testing.assert_allclose(dens, 1.0, atol=1e-14)
        assert total_charge(st8) == pytest.approx(16.0, rel=1e-14)

    @pytest.mark.parametrize("branch,sign", [("positive", -1.0),
                                             ("negative", 1.0)])
    def test_semi_discrete_eigenstate(self, branch, sign):
        p = 2 * np.pi * 3 / 16
        state = make_plane_wave(LINE, p, 1.0, branch)
        e = math.hypot(p, 1.0)
        # d_t psi = -i E psi on the positive branch, +i E psi on the negative
        dt_psi = rhs(state, None, DIRAC1)
        np.testing.assert_allclose(dt_psi, sign * 1j * e * state.values,
                                   atol=1e-12)

    def test_incommensurate_momentum_rejected(self):
        with pytest.raises(ValueError):
            make_plane_wave(LINE, 0.7, 1.0)

    def test_zero_momentum_zero_mass_rejected(self):
        with pytest.raises(ValueError):
            make_plane_wave(LINE, 0.0, 0.0)

    def test_continuum_solution_has_zero_residual(self):
        rng = np.random.default_rng(1)
        pts = rng.uniform(-3, 3, size=(16, 4))
        sol = plane_wave_solution([0.1, -0.2, 0.5], 1.0)
        assert residual_norm(sol, None, DIRAC1, pts) <= 1e-12

    def test_sampling_matches_lattice_constructor(self):
        p = 2 * np.pi * 1 / 16
        sol = plane_wave_solution([0.0, 0.0, p], 1.0)
        sampled = sample_solution(sol, LINE, time=0.3)
        direct = make_plane_wave(LINE, p, 1.0, time=0.3)
        np.testing.assert_allclose(sampled.values, direct.values, atol=1e-13)


class TestHomogeneous:
    def test_effective_masses(self):
        assert homogeneous_effective_mass(DIRAC1, 5.0) == 1.0
        assert homogeneous_effective_mass(IDZ, math.sqrt(2)) == \
            pytest.approx(2.0)
        assert homogeneous_effective_mass(HEIS, 1.5) == pytest.approx(4.5)

    def test_imaginary_function_has_no_phase_rotation(self):
        spec = NonlinearitySpec.f_of_z(
            FunctionSpec.poly([(0.0, 0.0), (0.0, 1.0)]))
        with pytest.raises(ValueError):
            homogeneous_effective_mass(spec, 1.0)

    @pytest.mark.parametrize("spec", [DIRAC1, IDZ, HEIS],
                             ids=["mass", "f_of_z", "heisenberg"])
    def test_solution_residual_vanishes(self, spec):
        rng = np.random.default_rng(2)
        pts = rng.uniform(-3, 3, size=(12, 4))
        sol = homogeneous_solution(spec, 1.25)
        assert residual_norm(sol, None, spec, pts) <= 1e-12


class TestGaussian:
    def test_peak_at_center_and_base_component(self):
        state = gaussian_state(LINE, width=1.0, momentum_index=2, base=1)
        mags = np.abs(state.values[:, 1])
        assert np.argmax(mags) == 32  # L/2 at dx = 0.25
        assert np.all(state.values[:, 0] == 0)
        assert np.all(state.values[:, 2] == 0)

    def test_minimum_image_wraps_envelope(self):
        a = gaussian_state(LINE, width=2.0, momentum_index=0, center=0.0)
        mags = np.abs(a.values[:, 0])
        # periodic distance makes the tail symmetric about the boundary
        np.testing.assert_allclose(mags[1:], mags[:0:-1], atol=1e-14)

    def test_invalid_width(self):
        with pytest.raises(ValueError):
            gaussian_state(LINE, width=0.0)


class TestChargeConservation:
    @pytest.mark.parametrize("spec", [DIRAC1, IDZ, HEIS],
                             ids=["mass", "f_of_z", "heisenberg"])
    def test_semi_discrete_rhs_is_anti_hermitian(self, spec):
        state = gaussian_state(LINE, width=1.0, momentum_index=2)
        dpsi = rhs(state, None, spec)
        # d/dt of the charge is 2 Re <psi, d_t psi>; structurally zero
        inner = np.sum(np.conj(state.values) * dpsi) * LINE.cell_volume
        assert abs(inner.real) <= 1e-12 * total_charge(state)

    def test_potential_term_keeps_anti_hermiticity(self):
        pot = parse_potential_spec("axis_sine 0 0.5 1 3")
        state = gaussian_state(LINE, width=1.0, momentum_index=1)
        dpsi = rhs(state, pot, DIRAC1)
        inner = np.sum(np.conj(state.values) * dpsi) * LINE.cell_volume
        assert abs(inner.real) <= 1e-12 * total_charge(state)

    @pytest.mark.parametrize("spec", [DIRAC1, IDZ, HEIS],
                             ids=["mass", "f_of_z", "heisenberg"])
    def test_rk4_charge_drift_tiny(self, spec):
        # conservation is structural; only the integrator's O(dt^4)
        # truncation leaks charge
        state = gaussian_state(LINE, width=1.0, momentum_index=2)
        q0 = total_charge(state)
        for _ in range(50):
            state = step_rk4(state, None, spec, 0.01)
        assert abs(total_charge(state) / q0 - 1.0) <= 1e-8

    def test_charge_series_helper(self):
        state = gaussian_state(LINE, width=1.0, momentum_index=0)
        states = [state]
        for _ in range(3):
            states.append(step_rk4(states[-1], None, DIRAC1, 0.01))
        qs = charge_series(states)
        assert len(qs) == 4
        assert qs[0] == (0.0, pytest.approx(total_charge(state)))
        assert qs[-1][0] == pytest.approx(0.03)


class TestRk4Accuracy:
    def test_one_step_against_exact_phase(self):
        # local truncation error is dt^5/120 ~ 8e-18 at dt = 1e-3
        state = homogeneous_state(LINE, 1.0)
        stepped = step_rk4(state, None, DIRAC1, 0.001)
        exact = np.exp(-1j * 0.001) * state.values
        assert float(np.max(np.abs(stepped.values - exact))) <= 1e-14

    def test_multi_step_plane_wave_phase(self):
        p = 2 * np.pi * 2 / 16
        e = math.hypot(p, 1.0)
        state = make_plane_wave(LINE, p, 1.0)
        ref = state.values.copy()
        n, dt = 200, 0.005
        for _ in range(n):
            state = step_rk4(state, None, DIRAC1, dt)
        exact = np.exp(-1j * e * n * dt) * ref
        assert float(np.max(np.abs(state.values - exact))) <= 1e-9


class TestStability:
    def test_bound_formula(self):
        g = Grid(1, 256, 16.0)
        state = make_plane_wave(g, 0.0, 1.0)
        bound = stability_bound(state, None, DIRAC1)
        expected = 2.5 / (np.pi / (16.0 / 256) + 1.0)
        assert bound == pytest.approx(expected, rel=1e-12)

    def test_constant_potential_enters_bound(self):
        state = homogeneous_state(LINE, 1.0)
        pot = PotentialSpec.constant([2.0, 0.0, 0.0, 0.0])
        with_pot = stability_bound(state, pot, DIRAC1)
        without = stability_bound(state, None, DIRAC1)
        assert with_pot < without

    def test_blowup_raises_stability_fault(self):
        state = make_plane_wave(LINE, 2 * np.pi / 16, 1.0)
        bound = stability_bound(state, None, DIRAC1)
        with pytest.raises(StabilityFault):
            for _ in range(200):
                state = step_rk4(state, None, DIRAC1, 10.0 * bound)

    def test_nonpositive_dt_rejected(self):
        state = homogeneous_state(LINE, 1.0)
        with pytest.raises(ValueError):
            step_rk4(state, None, DIRAC1, 0.0)


class TestFrequency:
    def test_synthetic_phase_slope(self):
        t = np.arange(400) * 0.01
        series = 0.7 * np.exp(-1j * 1.37 * t)
        assert measure_frequency(series, dt=0.01) == pytest.approx(1.37)

    def test_times_argument(self):
        t = np.linspace(0, 3, 301)
        series = np.exp(1j * 0.9 * t)
        assert measure_frequency(series, times=t) == pytest.approx(0.9)

    def test_collapse_error(self):
        series = np.array([1e-9, 1e-9j, -1e-9])
        with pytest.raises(AmplitudeCollapseError):
            measure_frequency(series, dt=0.1)


class TestResiduals:
    def test_exact_time_derivative_gives_zero(self):
        state = make_plane_wave(LINE, 2 * np.pi / 16, 1.0)
        e = math.hypot(2 * np.pi / 16, 1.0)
        dtpsi = -1j * e * state.values
        assert residual_from_dtpsi(state, dtpsi, None, DIRAC1) <= 1e-12

    def test_centered_window_scales_with_dt_squared(self):
        def window(dt):
            sol = homogeneous_solution(DIRAC1, 1.0)
            states = [sample_solution(sol, LINE, time=k * dt)
                      for k in range(3)]
            return lattice_residual(states[0], states[1], states[2],
                                    None, DIRAC1)

        r1, r2 = window(0.02), window(0.01)
        assert 3.0 < r1 / r2 < 5.0  # second-order in the output spacing


def test_pairwise_sum_deterministic_and_accurate():
    rng = np.random.default_rng(9)
    vals = rng.normal(size=1001) * 10.0 ** rng.integers(-8, 8, size=1001)
    a = pairwise_sum(vals)
    b = pairwise_sum(list(vals))
    assert a == b
    assert a == pytest.approx(math.fsum(vals), rel=1e-12, abs=1e-9)


def test_three_dimensional_smoke():
    g = Grid(3, [8, 8, 8], [8.0, 8.0, 8.0])
    p = [0.0, 0.0, 2 * np.pi / 8.0]
    state = make_plane_wave(g, p, 1.0)
    e = math.hypot(p[2], 1.0)
    dtpsi = rhs(state, None, DIRAC1)
    np.testing.assert_allclose(dtpsi, -1j * e * state.values, atol=1e-12)
    q0 = total_charge(state)
    stepped = step_rk4(state, None, DIRAC1, 0.01)
    assert total_charge(stepped) == pytest.approx(q0, rel=1e-12)


def test_bilinear_integrals_on_plane_wave():
    state = make_plane_wave(LINE, 0.0, 1.0)
    s_int, p_int = bilinear_integrals(state)
    # resting positive-branch wave is pure upper component
    assert s_int == pytest.approx(16.0)
    assert p_int == pytest.approx(0.0, abs=1e-13)


@settings(deadline=None, max_examples=25)
@given(st.integers(-3, 3), st.floats(0.1, 2.0))
def test_phase_rotation_leaves_charge_alone(k, lam):
    state = make_plane_wave(LINE, 2 * np.pi * k / 16, 1.0)
    rotated = FieldState(LINE, 0.0, np.exp(1j * lam) * state.values)
    assert total_charge(rotated) == pytest.approx(total_charge(state),
                                                  rel=1e-14)
