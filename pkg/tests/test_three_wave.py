import logging
import math

import numpy as np
import pytest

from app.core.constants import HBAR, K_B
from app.core.exceptions import NoPhaseMatchError, NoThresholdError, TotalInternalReflectionError
from app.core.units import from_internal, to_internal
from app.models.gain_model import Chi2Method
from app.models.material_model import DetectionGeometry
from app.services.three_wave_service import expm1_ratio, three_wave_service


def test_fresnel_normal_incidence():
    assert three_wave_service.fresnel_T_s(0.0, 1.0, 2.0) == pytest.approx(2 / 3)
    assert three_wave_service.fresnel_R_s(0.0, 1.0, 2.0) == pytest.approx(-1 / 3)


def test_fresnel_without_interface():
    assert three_wave_service.fresnel_T_s(0.7, 1.5, 1.5) == pytest.approx(1.0)
    assert three_wave_service.fresnel_R_s(0.7, 1.5, 1.5) == pytest.approx(0.0)


def test_fresnel_oblique():
    assert three_wave_service.fresnel_T_s(math.pi / 4, 1.0, 2.0) == pytest.approx(0.5486, abs=1e-4)
    assert abs(three_wave_service.fresnel_R_s(math.pi / 4, 1.0, 2.0)) <= 1.0


def test_snell_and_total_internal_reflection():
    theta2 = three_wave_service.snell(math.pi / 4, 1.0, 2.0)
    assert 2.0 * math.sin(theta2) == pytest.approx(math.sin(math.pi / 4))
    with pytest.raises(TotalInternalReflectionError):
        three_wave_service.snell(math.radians(60), 2.0, 1.0)


def test_phase_match_anchor(fig2_point):
    assert from_internal(fig2_point.omega_s, "THz") == pytest.approx(1.0, abs=0.1)


def test_phase_match_closure(fig2_point):
    point = fig2_point
    assert point.omega_p - point.omega_i - point.omega_s == pytest.approx(0.0, abs=1e-12 * point.omega_p)
    assert point.q_p - point.q_i - point.q_s == pytest.approx(0.0, abs=1e-12 * point.q_p)
    assert point.mode.q_s == pytest.approx(abs(point.q_s))
    assert point.method is Chi2Method.RESONANT


def test_negative_idler_angles_reach_higher_frequencies(geometry, graphene, fig2_point):
    negative = three_wave_service.phase_match(geometry, graphene, math.radians(-20.0))
    normal = three_wave_service.phase_match(geometry, graphene, 0.0)
    assert negative.q_s > fig2_point.q_s
    assert negative.omega_s > normal.omega_s > fig2_point.omega_s


def test_frequency_falls_toward_pump_angle(geometry, graphene):
    angles = [0.0, 10.0, 20.0, 30.0, 40.0]
    omegas = [three_wave_service.phase_match(geometry, graphene, math.radians(a)).omega_s for a in angles]
    assert all(np.diff(omegas) < 0)


def test_degenerate_angle_has_no_phase_match(geometry, graphene):
    with pytest.raises(NoPhaseMatchError):
        three_wave_service.phase_match(geometry, graphene, geometry.theta_1p)


def test_select_method(geometry, graphene):
    assert three_wave_service.select_method(geometry, graphene) is Chi2Method.RESONANT
    detuned = geometry.model_copy(update={"omega_p": 1.5 * geometry.omega_p})
    assert three_wave_service.select_method(detuned, graphene) is Chi2Method.NUMERIC
    assert three_wave_service.select_method(detuned, graphene, Chi2Method.CLOSED) is Chi2Method.CLOSED


def test_coupling_phase_and_scaling(fig2_point):
    gamma = fig2_point.Gamma_coupling
    assert gamma.real == pytest.approx(0.0, abs=1e-12 * abs(gamma))
    assert gamma.imag > 0
    doubled = fig2_point.model_copy(update={"T_i": 2 * fig2_point.T_i, "T_p": 2 * fig2_point.T_p})
    assert abs(three_wave_service.coupling_Gamma(doubled)) ** 2 == pytest.approx(16 * abs(gamma) ** 2)


def test_gain_is_linear_in_intensity(fig2_point):
    assert three_wave_service.gain_G(fig2_point, 0.0) == 0
    one = three_wave_service.gain_G(fig2_point, 1e16)
    two = three_wave_service.gain_G(fig2_point, 2e16)
    assert two == pytest.approx(2 * one)
    assert one.real > 0


def test_gain_order_of_magnitude(fig2_point):
    assert 1e-11 < fig2_point.mode.E_s0_sq < 4e-11
    assert 1e11 < three_wave_service.gain_G(fig2_point, to_internal(1.0, "GW/cm2")).real < 5e12


def test_threshold_linear_in_plasmon_damping(fig2_point):
    single = three_wave_service.threshold_intensity(fig2_point, 1e11)
    assert three_wave_service.threshold_intensity(fig2_point, 2e11) == pytest.approx(2 * single)
    assert three_wave_service.gain_G(fig2_point, single).real == pytest.approx(1e11)


def test_threshold_quadratic_in_interband_rate(geometry, graphene):
    base = three_wave_service.phase_match(geometry, graphene)
    broad = three_wave_service.phase_match(geometry, graphene.model_copy(update={"gamma_pol": 2e12}))
    ratio = three_wave_service.threshold_intensity(broad, 1e11) / three_wave_service.threshold_intensity(base, 1e11)
    assert ratio == pytest.approx(4.0, rel=1e-9)


def test_no_threshold_without_gain(fig2_point):
    flipped = fig2_point.model_copy(update={"chi2_i": -fig2_point.chi2_i})
    with pytest.raises(NoThresholdError):
        three_wave_service.threshold_intensity(flipped, 1e11)


def test_graphene_outgains_ti(fig2_point, graphene, ti):
    assert three_wave_service.gain_ratio(fig2_point, graphene, ti) == pytest.approx(64.0, rel=1e-9)


def test_gain_weakly_dependent_on_idler_angle(geometry, graphene):
    gains = []
    for angle in np.linspace(-60.0, 30.0, 10):
        point = three_wave_service.phase_match(geometry, graphene, math.radians(angle))
        if three_wave_service.is_valid(point, 1e11):
            gains.append(three_wave_service.gain_G(point, geometry.I_p).real)
    assert len(gains) >= 8
    assert max(gains) / min(gains) < 3.0


def test_validity_flag(fig2_point):
    assert three_wave_service.is_valid(fig2_point, 1e11)
    assert not three_wave_service.is_valid(fig2_point, fig2_point.omega_s)


def test_amplification_limits():
    v_s, gamma_s = 1e6, 1e11
    assert three_wave_service.amplification_factor(0.0, 5e10, gamma_s, v_s) == pytest.approx(1.0)
    for x in (1e-5, 1e-3, 1e-1):
        assert three_wave_service.amplification_factor(x, 0.0, gamma_s, v_s) == pytest.approx(1.0, rel=1e-12)

    x = 1e-4
    threshold = 1 + 2 * gamma_s * x / v_s
    near = three_wave_service.amplification_factor(x, gamma_s * (1 + 1e-9), gamma_s, v_s)
    assert near == pytest.approx(threshold, rel=1e-6)
    assert three_wave_service.amplification_factor(x, gamma_s, gamma_s, v_s) == pytest.approx(threshold, rel=1e-12)


def test_amplification_overflows_to_infinity():
    assert math.isinf(three_wave_service.amplification_factor(1.0, 1e13, 1e11, 1e6))


def test_detector_average_factor():
    assert expm1_ratio(0.0) == 1.0
    assert expm1_ratio(math.log(2)) == pytest.approx(1 / math.log(2))
    values = [expm1_ratio(x) for x in np.linspace(-5, 5, 41)]
    assert all(np.diff(values) > 0)
    n_detector, xi = three_wave_service.detector_average(0.1, 1e11, 1e11, 1e6, 3.0)
    assert xi == 0
    assert n_detector == 3.0


def test_slow_plasmons_enhance_gain_exponent():
    _, xi = three_wave_service.detector_average(0.1, 3e11, 1e11, 1e6, 1.0)
    _, slower = three_wave_service.detector_average(0.1, 3e11, 1e11, 5e5, 1.0)
    assert slower == pytest.approx(2 * xi)


def test_bose_factor():
    assert three_wave_service.bose_N_T(to_internal(1.0, "THz"), 300.0) == pytest.approx(5.75, rel=1e-2)
    x = HBAR * to_internal(1.0, "THz") / (K_B * 300.0)
    assert three_wave_service.bose_N_T(to_internal(1.0, "THz"), 300.0) == pytest.approx(1 / math.expm1(x), rel=1e-12)
    assert three_wave_service.bose_N_T(to_internal(1.0, "THz"), 1e-3) == 0.0
    assert three_wave_service.bose_N_T(to_internal(1.0, "THz"), 0.0) == 0.0


def test_antenna_power_independent_of_aperture(detection):
    omega_s = to_internal(1.0, "THz")
    power = three_wave_service.antenna_power(omega_s, 300.0, detection, 1e6)
    wider = detection.model_copy(update={"L_y": 1.0})
    assert three_wave_service.antenna_power(omega_s, 300.0, wider, 3e6) == pytest.approx(power)


def test_flux_at_threshold_is_of_order_thermal_flux(fig2_point):
    gamma_s = 1e11
    mode = fig2_point.mode
    det = DetectionGeometry(L_x=mode.v_s / gamma_s, delta_omega=to_internal(0.01, "THz"), T=300.0)
    I_th = three_wave_service.threshold_intensity(fig2_point, gamma_s)
    flux = three_wave_service.idler_flux(fig2_point, I_th, det, gamma_s)
    N_T = three_wave_service.bose_N_T(mode.omega_s, det.T)
    estimate = det.delta_omega * gamma_s * det.L_x * N_T / (2 * math.pi * mode.v_s)
    assert 0.5 < flux / estimate < 2.0


def test_flux_grows_with_collection_length(fig2_point, detection):
    I_p = to_internal(1.0, "GW/cm2")
    short = three_wave_service.idler_flux(fig2_point, I_p, detection, 1e11)
    longer = three_wave_service.idler_flux(fig2_point, I_p, detection.model_copy(update={"L_x": 0.2}), 1e11)
    cold = three_wave_service.idler_flux(fig2_point, I_p, detection.model_copy(update={"T": 1e-3}), 1e11)
    assert longer > short > cold > 0


def test_reflected_idler_and_pair_ratio(fig2_point, caplog):
    I_p = to_internal(1.0, "GW/cm2")
    with caplog.at_level(logging.INFO, logger="plasmon_opa"):
        R_i, kappa = three_wave_service.reflected_idler_coefficients(fig2_point, I_p)
    assert "pair ratio" in caplog.text
    assert R_i == pytest.approx(three_wave_service.fresnel_R_s(fig2_point.geom.theta_1i, 1.0, 2.0))
    assert abs(R_i) <= 1
    density = three_wave_service.photon_density(I_p, fig2_point)
    assert three_wave_service.pair_amplitude_ratio(fig2_point, I_p) == pytest.approx(abs(kappa) ** 2 * density)


def test_gain_report(fig2_point, detection):
    I_p = to_internal(1.0, "GW/cm2")
    report = three_wave_service.gain_report(fig2_point, I_p, detection, 1e11)
    assert report.method is Chi2Method.RESONANT
    assert report.I_threshold == pytest.approx(three_wave_service.threshold_intensity(fig2_point, 1e11))
    assert report.G == three_wave_service.gain_G(fig2_point, I_p)
    assert report.Xi == pytest.approx(2 * (report.G.real - 1e11) * detection.L_x / fig2_point.mode.v_s)
    assert report.amplification >= 1.0
    assert report.omega_s == fig2_point.omega_s
