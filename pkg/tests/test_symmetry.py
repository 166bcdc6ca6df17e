"""Spin elements, the double-cover map to Lorentz matrices, and the
transformation behavior of exact solutions under boosts, rotations,
parity, and U(1) gauge shifts."""

import math
from fractions import Fraction

import numpy as np
import pytest

from nldirac.clifford import Matrix4C, gamma, gammas, pseudoscalar
from nldirac.dynamics import (
    AnalyticSolution,
    Grid,
    homogeneous_solution,
    make_plane_wave,
    plane_wave_solution,
    residual_norm,
    total_charge,
)
from nldirac.errors import NotASpinElementError
from nldirac.nalgebra import FunctionSpec
from nldirac.nonlinearity import NonlinearitySpec
from nldirac.symmetry import (
    GaugeFunction,
    gauge_transform,
    lorentz_pair,
    parity_pair,
    parse_gauge,
    parse_transform,
    spin_from_plane,
    spin_to_lorentz,
    transform_solution,
)

DIRAC1 = NonlinearitySpec.dirac_mass(1.0)
IDZ = NonlinearitySpec.f_of_z(FunctionSpec.identity_Z())
HEIS = NonlinearitySpec.heisenberg()

LINE = Grid(1, 32, 16.0)

SAMPLE_POINTS = np.random.default_rng(42).uniform(-2, 2, size=(24, 4))

ALL_PLANES = [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)]


class TestDoubleCoverMap:
    def test_kernel_elements_map_to_identity_exactly(self):
        one = Matrix4C.identity(exact=True)
        for s in (one, one.scaled(-1)):
            P = spin_to_lorentz(s)
            for mu in range(4):
                for nu in range(4):
                    assert P[mu, nu] == (1 if mu == nu else 0)

    def test_parity_element(self):
        lp = parity_pair()
        np.testing.assert_array_equal(lp.P, np.diag([1.0, -1, -1, -1]))
        assert lp.S.a[0, 0] == 1 and lp.S.a[2, 2] == -1

    def test_pseudoscalar_gives_total_inversion(self):
        # I anticommutes with every gamma^mu, so conjugation flips all
        # four axes (the PT component of the full Lorentz group)
        P = spin_to_lorentz(pseudoscalar(exact=True))
        for mu in range(4):
            for nu in range(4):
                assert P[mu, nu] == (-1 if mu == nu else 0)

    @pytest.mark.parametrize("plane", ALL_PLANES)
    @pytest.mark.parametrize("theta", [0.3, 1.0])
    def test_defining_relation(self, plane, theta):
        lp = spin_from_plane(plane[0], plane[1], theta)
        s = lp.S.a
        s_inv = np.linalg.inv(s)
        gam = [g.a for g in gammas(exact=False)]
        for mu in range(4):
            lhs = s_inv @ gam[mu] @ s
            rhs = sum(lp.P[mu, nu] * gam[nu] for nu in range(4))
            np.testing.assert_allclose(lhs, rhs, atol=1e-12)

    def test_boost_matrix_entries(self):
        chi = 0.7
        lp = spin_from_plane(0, 1, chi)
        assert lp.P[0, 0] == pytest.approx(math.cosh(chi), rel=1e-13)
        assert abs(lp.P[0, 1]) == pytest.approx(math.sinh(chi), rel=1e-13)
        assert lp.P[2, 2] == pytest.approx(1.0)

    def test_boosted_rest_wave_picks_up_momentum_sinh_chi(self):
        chi = 0.5
        sol = plane_wave_solution([0.0, 0.0, 0.0], 1.0)
        moved = transform_solution(sol, spin_from_plane(0, 1, chi))
        # d_1 psi' = -i q'_1 psi' pointwise, so the ratio reads off the
        # momentum the boost imparted
        x = np.array([0.2, -0.4, 0.3, 0.1])
        v = moved.value(x)
        comp = int(np.argmax(np.abs(v)))
        q1 = (moved.derivs[1](x)[comp] / v[comp]) / (-1j)
        assert abs(q1.imag) < 1e-12
        assert abs(q1.real) == pytest.approx(math.sinh(chi), rel=1e-12)

    def test_rotation_block(self):
        th = 0.4
        lp = spin_from_plane(1, 2, th)
        block = lp.P[1:3, 1:3]
        assert np.linalg.det(block) == pytest.approx(1.0, rel=1e-12)
        assert block[0, 0] == pytest.approx(math.cos(th), rel=1e-12)
        assert lp.P[0, 0] == pytest.approx(1.0)

    def test_double_cover_two_to_one(self):
        th = 1.1
        a = spin_from_plane(1, 2, th)
        b = spin_from_plane(1, 2, th + 2 * math.pi)
        # S flips sign, P does not
        np.testing.assert_allclose(b.S.a, -a.S.a, atol=1e-12)
        np.testing.assert_allclose(b.P, a.P, atol=1e-12)

    def test_homomorphism_property(self):
        a = spin_from_plane(0, 3, 0.5)
        b = spin_from_plane(1, 2, 0.8)
        prod = lorentz_pair(Matrix4C(a.S.a @ b.S.a, exact=False))
        np.testing.assert_allclose(prod.P, a.P @ b.P, atol=1e-10)

    def test_rejects_non_spin_input(self):
        bad = Matrix4C(np.diag([1.0, 1.0, 1.0, 2.0]), exact=False)
        with pytest.raises(NotASpinElementError):
            spin_to_lorentz(bad)
        # exact backend: 2 + gamma^0 is invertible but conjugation by it
        # stretches gamma^1, so the Lorentz condition fails exactly
        with pytest.raises(NotASpinElementError):
            spin_to_lorentz(Matrix4C.identity(exact=True).scaled(2) + gamma(0))


class TestLorentzCovariance:
    @pytest.mark.parametrize("plane,theta", [((0, 3), 0.5), ((1, 2), 1.0),
                                             ((0, 1), 0.3)])
    def test_linear_plane_wave(self, plane, theta):
        sol = plane_wave_solution([0.2, 0.0, 0.4], 1.0)
        lp = spin_from_plane(plane[0], plane[1], theta)
        moved = transform_solution(sol, lp)
        assert residual_norm(moved, None, DIRAC1, SAMPLE_POINTS) <= 1e-10

    @pytest.mark.parametrize("spec", [IDZ, HEIS], ids=["f_of_z", "heis"])
    def test_nonlinear_homogeneous(self, spec):
        sol = homogeneous_solution(spec, 1.2)
        lp = spin_from_plane(0, 3, 0.8)
        moved = transform_solution(sol, lp)
        assert residual_norm(moved, None, spec, SAMPLE_POINTS) <= 1e-10

    def test_parity_moves_linear_solutions_to_solutions(self):
        sol = plane_wave_solution([0.0, 0.3, -0.2], 1.0)
        moved = transform_solution(sol, parity_pair())
        assert residual_norm(moved, None, DIRAC1, SAMPLE_POINTS) <= 1e-10

    def test_full_turn_negates_the_field_but_stays_a_solution(self):
        sol = homogeneous_solution(DIRAC1, 1.0)
        lp = spin_from_plane(1, 2, 2 * math.pi)
        moved = transform_solution(sol, lp)
        x = np.array([0.3, 0.1, -0.2, 0.7])
        np.testing.assert_allclose(moved.value(x), -sol.value(x), atol=1e-12)
        assert residual_norm(moved, None, DIRAC1, SAMPLE_POINTS) <= 1e-10

    def test_potential_pulls_back_as_covector(self):
        # constant potential stays constant but mixes components under a
        # boost; the transformed solution must still solve the equation
        # with the transformed potential
        pot = tuple([lambda x: 0.5] + [lambda x: 0.0] * 3)

        # shifted-frequency rest solution: a_0 = 0.5 lowers omega to m - a_0
        w = np.zeros(4, dtype=complex)
        w[0] = 1.0
        freq = 1.0 - 0.5

        def value(x, w=w):
            return w * np.exp(-1j * freq * x[0])

        derivs = [lambda x, w=w: -1j * freq * w * np.exp(-1j * freq * x[0])]
        derivs += [lambda x: np.zeros(4, dtype=complex)] * 3
        sol = AnalyticSolution(value, derivs, pot)
        assert residual_norm(sol, None, DIRAC1, SAMPLE_POINTS) <= 1e-12

        lp = spin_from_plane(0, 3, 0.6)
        moved = transform_solution(sol, lp)
        assert moved.potential is not None
        assert residual_norm(moved, None, DIRAC1, SAMPLE_POINTS) <= 1e-10


class TestGauge:
    def rest_solution(self):
        return plane_wave_solution([0.0, 0.0, 0.0], 1.0)

    @pytest.mark.parametrize("g", [
        GaugeFunction.constant(0.8),
        GaugeFunction.linear([0.3, 0.0, 0.0, 0.2]),
    ])
    def test_transformed_solution_still_solves(self, g):
        moved = gauge_transform(self.rest_solution(), None, g)
        assert residual_norm(moved, None, DIRAC1, SAMPLE_POINTS) <= 1e-10

    def test_sine_gauge_on_lattice_state(self):
        g = GaugeFunction.sine(0, 0.5, 2)
        state = make_plane_wave(LINE, 2 * np.pi / 16, 1.0)
        new_state, shifted = gauge_transform(state, None, g, LINE)
        assert total_charge(new_state) == pytest.approx(total_charge(state),
                                                        rel=1e-14)
        # the shifted potential carries the gradient along gamma^3
        assert isinstance(shifted[3], np.ndarray)
        assert float(np.max(np.abs(shifted[3]))) > 0.1

    def test_round_trip_with_negated_function(self):
        g = GaugeFunction.linear([0.1, 0.0, 0.0, -0.7])
        state = make_plane_wave(LINE, 0.0, 1.0)
        once, pot_once = gauge_transform(state, None, g, LINE)
        back, pot_back = gauge_transform(once, pot_once, g.negated(), LINE)
        np.testing.assert_allclose(back.values, state.values, atol=1e-13)
        for mu in range(4):
            np.testing.assert_allclose(pot_back[mu], 0.0, atol=1e-13)

    def test_phase_is_pointwise(self):
        g = GaugeFunction.linear([0.0, 0.0, 0.0, 0.25])
        state = make_plane_wave(LINE, 0.0, 1.0)
        new_state, _ = gauge_transform(state, None, g, LINE)
        x = LINE.axis_coordinates(0)
        expected = state.values * np.exp(1j * 0.25 * x)[:, None]
        np.testing.assert_allclose(new_state.values, expected, atol=1e-14)

    def test_parse_gauge_forms(self):
        assert parse_gauge("constant 2.0").kind == "constant"
        g = parse_gauge("linear 1 0 0 -1")
        assert g.k == (1.0, 0.0, 0.0, -1.0)
        g = parse_gauge("sine 0 0.5 3")
        assert (g.axis, g.amplitude, g.k_index) == (0, 0.5, 3)
        with pytest.raises(ValueError):
            parse_gauge("linear 1 0")
        with pytest.raises(ValueError):
            parse_gauge("spiral 1")


class TestParseTransform:
    def test_lorentz_forms(self):
        kind, lp = parse_transform("rot 1 2 0.5")
        assert kind == "lorentz"
        assert lp.P[0, 0] == pytest.approx(1.0)
        kind, lp = parse_transform("boost 3 0.25")
        assert lp.P[0, 0] == pytest.approx(math.cosh(0.25))
        kind, lp = parse_transform("parity")
        np.testing.assert_array_equal(lp.P, np.diag([1.0, -1, -1, -1]))

    def test_gauge_form(self):
        kind, g = parse_transform("gauge linear 0.3 0 0 0.2")
        assert kind == "gauge" and g.kind == "linear"

    def test_rejections(self):
        with pytest.raises(ValueError):
            parse_transform("rot 0 1 0.5")  # temporal index in a rotation
        with pytest.raises(ValueError):
            parse_transform("boost 0 0.5")
        with pytest.raises(ValueError):
            parse_transform("parity now")
        with pytest.raises(ValueError):
            parse_transform("")
