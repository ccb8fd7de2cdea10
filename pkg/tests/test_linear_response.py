import math

import numpy as np
import pytest

from app.core.constants import C, E, HBAR
from app.core.exceptions import NoModeError, SingularInputError
from app.models.material_model import MaterialParams
from app.services.linear_response_service import linear_response_service


def test_chi_s_rejects_singular_inputs(graphene):
    with pytest.raises(SingularInputError):
        linear_response_service.chi_s(graphene, 1e13, 0.0)
    with pytest.raises(SingularInputError):
        linear_response_service.chi_s(graphene, 0.0, 1e4)
    with pytest.raises(SingularInputError):
        linear_response_service.chi_s(graphene, graphene.v_F * 1e4, 1e4)


def test_chi_s_drude_limit(graphene):
    omega = 1e13
    q = 1e-2 * omega / graphene.v_F
    drude = -E ** 2 * graphene.E_F / (math.pi * HBAR ** 2 * omega ** 2)
    chi = linear_response_service.chi_s(graphene, omega, q)
    assert chi.real == pytest.approx(drude, rel=1e-3)
    assert abs(chi.imag) < 1e-9 * abs(chi.real)


def test_chi_s_scales_with_degeneracy_and_layers(graphene):
    omega, q = 2e13, 1e4
    base = linear_response_service.chi_s(graphene, omega, q)
    half = linear_response_service.chi_s(graphene.model_copy(update={"g": 2}), omega, q)
    stacked = linear_response_service.chi_s(graphene.model_copy(update={"n_layers": 3}), omega, q)
    assert half == pytest.approx(0.5 * base)
    assert stacked == pytest.approx(3 * base)


def test_chi_s_vectorized(graphene):
    omega = np.array([1e13, 2e13, 3e13])
    values = linear_response_service.chi_s(graphene, omega, 1e4)
    assert values.shape == (3,)
    assert values[1] == pytest.approx(linear_response_service.chi_s(graphene, 2e13, 1e4))


def test_collision_broadening_gives_absorption(graphene):
    chi = linear_response_service.chi_s(graphene, 2e13, 1e4, gamma_s=1e11)
    assert chi.imag > 0


def test_mode_solves_dispersion(graphene, geometry):
    q = 1e-2 * graphene.k_F
    mode = linear_response_service.solve_mode(q, geometry, graphene)
    residual = linear_response_service.dispersion_residual(mode.omega_s, q, geometry, graphene)
    terms = linear_response_service.dispersion_terms(mode.omega_s, q, geometry, graphene)
    assert abs(residual) < 1e-9 * max(abs(t) for t in terms)
    assert graphene.v_F * q < mode.omega_s < C * q / geometry.n2


@pytest.mark.parametrize("ratio", [3e-3, 1e-2, 3e-2])
def test_long_wavelength_agreement(graphene, geometry, ratio):
    q = ratio * graphene.k_F
    mode = linear_response_service.solve_mode(q, geometry, graphene)
    expected = linear_response_service.long_wavelength_omega(q, geometry, graphene)
    assert mode.omega_s == pytest.approx(expected, rel=1e-2)


def test_retarded_long_wavelength_at_small_q(graphene, geometry):
    q = 1e-3 * graphene.k_F
    mode = linear_response_service.solve_mode(q, geometry, graphene)
    expected = linear_response_service.long_wavelength_omega(q, geometry, graphene, retarded=True)
    assert mode.omega_s == pytest.approx(expected, rel=1e-3)


def test_group_velocity_follows_square_root_dispersion(graphene, geometry):
    q = 1e-2 * graphene.k_F
    mode = linear_response_service.solve_mode(q, geometry, graphene)
    assert mode.v_s == pytest.approx(mode.omega_s / (2 * q), rel=5e-2)
    assert 0 < mode.v_s < C


def test_normalization(graphene, geometry):
    mode = linear_response_service.solve_mode(1e-2 * graphene.k_F, geometry, graphene)
    assert mode.E_s0_sq == pytest.approx(HBAR / mode.chi_derivative)
    assert linear_response_service.normalization_E_s0_sq(mode, graphene) == pytest.approx(mode.E_s0_sq, rel=1e-9)


def test_damping_is_half_the_collision_rate(graphene, geometry):
    mode = linear_response_service.solve_mode(1e-2 * graphene.k_F, geometry, graphene, gamma_c=2e11)
    assert mode.gamma_s == pytest.approx(1e11, rel=5e-2)


def test_complex_root_matches_damping(graphene, geometry):
    q = 1e-2 * graphene.k_F
    root = linear_response_service.complex_root(q, geometry, graphene, gamma_c=2e11)
    mode = linear_response_service.solve_mode(q, geometry, graphene, gamma_c=2e11)
    assert root.real == pytest.approx(mode.omega_s, rel=1e-3)
    assert -root.imag == pytest.approx(mode.gamma_s, rel=0.1)


def test_inverse_problem(graphene, geometry):
    q = 5e-3 * graphene.k_F
    mode = linear_response_service.solve_mode(q, geometry, graphene)
    back = linear_response_service.solve_mode_at_omega(mode.omega_s, geometry, graphene)
    assert back.q_s == pytest.approx(q, rel=1e-8)


def test_no_mode_for_nonpositive_q(graphene, geometry):
    with pytest.raises(NoModeError):
        linear_response_service.solve_mode(0.0, geometry, graphene)


def test_no_mode_when_landau_edge_meets_light_line(geometry):
    fast = MaterialParams(E_F=1e-13, v_F=0.999 * C / geometry.n2)
    with pytest.raises(NoModeError):
        linear_response_service.solve_mode(1e4, geometry, fast)


def test_field_profile(graphene, geometry):
    mode = linear_response_service.solve_mode(1e-2 * graphene.k_F, geometry, graphene)
    at_layer = linear_response_service.field_profile(0.0, mode)
    assert at_layer.shape == (3,)
    assert at_layer[0] == pytest.approx(math.sqrt(mode.E_s0_sq))
    assert at_layer[1] == 0

    z = np.array([-2.0, 2.0]) / mode.q_s
    profile = linear_response_service.field_profile(z, mode)
    assert profile.shape == (3, 2)
    assert np.all(np.abs(profile[0]) < abs(at_layer[0]))


def test_roots_across_three_decades(graphene, geometry):
    for ratio in np.geomspace(1e-4, 1e-1, 151):
        q = ratio * graphene.k_F
        mode = linear_response_service.solve_mode(q, geometry, graphene)
        residual = linear_response_service.dispersion_residual(mode.omega_s, q, geometry, graphene)
        terms = linear_response_service.dispersion_terms(mode.omega_s, q, geometry, graphene)
        assert abs(residual) < 1e-9 * max(abs(t) for t in terms), ratio
        assert mode.omega_s > graphene.v_F * q, ratio


@pytest.mark.parametrize("ratio", [1e-3, 1e-2, 5e-2])
def test_group_velocity_matches_five_point_slope(graphene, geometry, ratio):
    q = ratio * graphene.k_F
    h = 1e-3 * q

    def omega(k):
        return linear_response_service.solve_mode(k, geometry, graphene).omega_s

    slope = (-omega(q + 2 * h) + 8 * omega(q + h) - 8 * omega(q - h) + omega(q - 2 * h)) / (12 * h)
    assert linear_response_service.solve_mode(q, geometry, graphene).v_s == pytest.approx(slope, rel=1e-4)


def test_normalization_is_converged_in_the_derivative_step(graphene, geometry):
    mode = linear_response_service.solve_mode(1e-2 * graphene.k_F, geometry, graphene)
    full = HBAR / linear_response_service.chi_derivative(graphene, mode.omega_s, mode.q_s, step=1e-6)
    halved = HBAR / linear_response_service.chi_derivative(graphene, mode.omega_s, mode.q_s, step=5e-7)
    assert abs(halved - full) / full < 1e-6


def test_damping_is_linear_in_collision_rate(graphene, geometry):
    q = 1e-2 * graphene.k_F
    single = linear_response_service.solve_mode(q, geometry, graphene, gamma_c=1e11).gamma_s
    double = linear_response_service.solve_mode(q, geometry, graphene, gamma_c=2e11).gamma_s
    assert double / single == pytest.approx(2.0, rel=1e-2)
