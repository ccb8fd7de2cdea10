import math
from typing import Optional, Tuple

import numpy as np
from scipy import optimize

from app.core.config import PHASE_MATCH_RTOL, PHASE_MATCH_SCAN_POINTS, SERIES_THRESHOLD
from app.core.constants import C, HBAR, K_B
from app.core.exceptions import (
    LandauDampingError,
    NoPhaseMatchError,
    NoThresholdError,
    TotalInternalReflectionError,
)
from app.models.chi2_model import Broadening, KGridSpec
from app.models.gain_model import Chi2Method, GainReport, OperatingPoint
from app.models.material_model import DetectionGeometry, Geometry, MaterialParams
from app.services.chi2_closed_service import chi2_closed_service
from app.services.chi2_oracle_service import chi2_oracle_service
from app.services.linear_response_service import linear_response_service
from app.utils.logger import logger

# Stand-in residual outside the window where the dispersion relation is real
_OUTSIDE = 1e30


def expm1_ratio(x: float) -> float:
    """(e^x - 1)/x, with its Taylor series near zero"""
    if x > 700:
        return math.inf
    if abs(x) < SERIES_THRESHOLD:
        return 1.0 + x / 2.0 + x ** 2 / 6.0 + x ** 3 / 24.0
    return math.expm1(x) / x


class ThreeWaveService:
    """Pump decay into an idler photon and a surface plasmon at expectation level"""

    def snell(self, theta1: float, n1: float, n2: float) -> float:
        sine = n1 * math.sin(theta1) / n2
        if abs(sine) > 1.0:
            raise TotalInternalReflectionError(f"No refracted wave for theta1={theta1:.6f} rad, n1={n1}, n2={n2}")
        return math.asin(sine)

    def fresnel_T_s(self, theta1: float, n1: float, n2: float) -> float:
        """Amplitude transmission for s polarization"""
        theta2 = self.snell(theta1, n1, n2)
        a, b = n1 * math.cos(theta1), n2 * math.cos(theta2)
        return 2.0 * a / (a + b)

    def fresnel_R_s(self, theta1: float, n1: float, n2: float) -> float:
        """Amplitude reflection for s polarization"""
        theta2 = self.snell(theta1, n1, n2)
        a, b = n1 * math.cos(theta1), n2 * math.cos(theta2)
        return (a - b) / (a + b)

    def select_method(self, geom: Geometry, mat: MaterialParams,
                      requested: Optional[Chi2Method] = None) -> Chi2Method:
        """Resonant closed form near the 2 E_F resonance, brute force elsewhere"""
        if requested is not None:
            return requested
        if abs(geom.omega_p - 2 * mat.v_F * mat.k_F) < mat.gamma_pol:
            return Chi2Method.RESONANT
        return Chi2Method.NUMERIC

    def chi2_pair(self, geom: Geometry, mat: MaterialParams, omega_s: float, q_i: float, q_s: float,
                  method: Chi2Method, gamma_s: float = 0.0,
                  grid: Optional[KGridSpec] = None) -> Tuple[complex, complex]:
        """
        chi^(s,2)_xyy and chi^(i,2)_yyx for one phase-matched triple.

        Args:
            geom: Pump geometry
            mat: Material; gamma_pol broadens the pump and idler legs
            omega_s: Plasmon frequency (rad/s)
            q_i, q_s: Signed idler and plasmon wave numbers (1/cm)
            method: Which evaluation path to use
            gamma_s: Broadening of the plasmon leg in the closed form
            grid: Oracle grid for the numeric path

        Returns:
            Tuple[complex, complex]: (chi2_s, chi2_i)
        """
        omega_p = geom.omega_p
        omega_i = omega_p - omega_s
        q_p = q_i + q_s
        if method is Chi2Method.RESONANT:
            chi = chi2_closed_service.chi2_resonant(omega_p, omega_i, omega_s, q_p, mat)
            return chi, chi.conjugate()
        if method is Chi2Method.CLOSED:
            broadening = Broadening(gamma1=mat.gamma_pol, gamma2=mat.gamma_pol, gamma3=gamma_s)
            sigma = chi2_closed_service.sigma2_xyy(omega_p, omega_i, q_p, q_i, mat, broadening, difference=True)
            chi = chi2_closed_service.chi2_from_sigma2(sigma, omega_s + 1j * gamma_s)
            return chi, chi.conjugate()

        grid = grid or KGridSpec(eta=mat.gamma_pol)
        chi_s = chi2_oracle_service.chi2_component(("x", "y", "y"), omega_p, -omega_i, q_p, -q_i, mat, grid).value
        chi_i = chi2_oracle_service.chi2_component(("y", "y", "x"), omega_p, -omega_s, q_p, -q_s, mat, grid).value
        return chi_s, chi_i

    def coupling_Gamma(self, point: OperatingPoint) -> complex:
        """Gamma = i (2 pi sqrt(omega_i omega_p) / n1^2) T_i T_p E_s0*"""
        E_s0 = math.sqrt(point.mode.E_s0_sq)
        magnitude = 2 * math.pi * math.sqrt(point.omega_i * point.omega_p) / point.geom.n1 ** 2
        return 1j * magnitude * point.T_i * point.T_p * E_s0

    def phase_match(self, geom: Geometry, mat: MaterialParams, theta_1i: Optional[float] = None,
                    gamma_s: float = 1e11, gamma_c: float = 0.0,
                    method: Optional[Chi2Method] = None,
                    grid: Optional[KGridSpec] = None) -> OperatingPoint:
        """
        Solve frequency and in-plane momentum conservation for the plasmon.

        Args:
            geom: Pump geometry and dielectric environment
            mat: Material of the layer
            theta_1i: Signed idler angle; defaults to geom.theta_1i
            gamma_s: Plasmon damping, sets the low end of the scanned window
            gamma_c: Collision broadening used for the mode's own damping
            method: chi2 evaluation path; chosen automatically when None
            grid: Oracle grid for the numeric path

        Returns:
            OperatingPoint: Consistent triple with Fresnel factors and coupling
        """
        if theta_1i is None:
            theta_1i = geom.theta_1i
        else:
            geom = geom.model_copy(update={"theta_1i": theta_1i})
        omega_p = geom.omega_p
        q_p = omega_p * geom.n1 * math.sin(geom.theta_1p) / C
        n_max = max(geom.n1, geom.n2)

        def q_plasmon(omega: float) -> float:
            return q_p - (omega_p - omega) * geom.n1 * math.sin(theta_1i) / C

        def residual(omega: float) -> float:
            q = abs(q_plasmon(omega))
            if q == 0 or omega * n_max >= C * q:
                return _OUTSIDE
            if omega <= mat.v_F * q:
                return -_OUTSIDE
            return float(np.real(linear_response_service.dispersion_residual(omega, q, geom, mat)))

        grid_omega = np.geomspace(10 * gamma_s, 0.5 * omega_p, PHASE_MATCH_SCAN_POINTS)
        values = np.array([residual(w) for w in grid_omega])
        crossings = np.flatnonzero((values[:-1] < 0) & (values[1:] > 0))
        if crossings.size == 0:
            raise NoPhaseMatchError(
                f"No phase-matched plasmon for theta_1i={math.degrees(theta_1i):.3f} deg "
                f"in [{grid_omega[0]:.3e}, {grid_omega[-1]:.3e}] rad/s"
            )
        i = crossings[0]
        omega_root = optimize.brentq(residual, grid_omega[i], grid_omega[i + 1],
                                     rtol=PHASE_MATCH_RTOL, xtol=PHASE_MATCH_RTOL * grid_omega[i])

        q_s = q_plasmon(omega_root)
        if omega_root <= mat.v_F * abs(q_s) * (1 + 1e-6):
            raise LandauDampingError(f"Phase-matched root {omega_root:.6e} rad/s is Landau damped")
        mode = linear_response_service.solve_mode(abs(q_s), geom, mat, gamma_c)
        omega_i = omega_p - mode.omega_s
        q_i = q_p - q_s

        method = self.select_method(geom, mat, method)
        chi2_s, chi2_i = self.chi2_pair(geom, mat, mode.omega_s, q_i, q_s, method, gamma_s, grid)

        point = OperatingPoint(
            geom=geom, mat=mat, mode=mode, omega_i=omega_i, q_p=q_p, q_i=q_i, q_s=q_s,
            theta_2p=self.snell(geom.theta_1p, geom.n1, geom.n2),
            theta_2i=self.snell(theta_1i, geom.n1, geom.n2),
            T_p=self.fresnel_T_s(geom.theta_1p, geom.n1, geom.n2),
            T_i=self.fresnel_T_s(theta_1i, geom.n1, geom.n2),
            chi2_s=chi2_s, chi2_i=chi2_i, method=method,
        )
        point = point.model_copy(update={"Gamma_coupling": self.coupling_Gamma(point)})
        logger.debug(f"Phase match at theta_1i={math.degrees(theta_1i):.3f} deg: omega_s={mode.omega_s:.6e} rad/s")
        return point

    def is_valid(self, point: OperatingPoint, gamma_s: float) -> bool:
        """Whether omega_s is well separated from the plasmon and interband rates"""
        return point.omega_s >= 2.0 * max(gamma_s, point.mat.gamma_pol)

    def gain_G(self, point: OperatingPoint, I_p: float) -> complex:
        """
        Parametric gain rate for a classical pump of intensity I_p.

        Args:
            point: Phase-matched operating point
            I_p: Pump intensity (erg s^-1 cm^-2)

        Returns:
            complex: G, whose real part enters the instability criterion
        """
        geom = point.geom
        product_ = point.chi2_s * point.chi2_i.conjugate()
        gamma_sq = abs(point.Gamma_coupling) ** 2
        return complex(gamma_sq * product_ * I_p * geom.n1 ** 2
                       / (C ** 2 * HBAR * geom.omega_p * point.T_i * math.cos(geom.theta_1i)))

    def threshold_intensity(self, point: OperatingPoint, gamma_s: float) -> float:
        """Pump intensity at which Re G equals gamma_s"""
        per_unit = self.gain_G(point, 1.0).real
        if per_unit <= 0:
            raise NoThresholdError(f"Re G per unit intensity is {per_unit:.3e}; no instability")
        return gamma_s / per_unit

    def gain_ratio(self, point: OperatingPoint, mat_a: MaterialParams, mat_b: MaterialParams) -> float:
        """Re G of material a over material b with the same phase-matched triple"""
        values = []
        for mat in (mat_a, mat_b):
            chi_s, chi_i = self.chi2_pair(point.geom, mat, point.omega_s, point.q_i, point.q_s, Chi2Method.RESONANT)
            other = point.model_copy(update={"chi2_s": chi_s, "chi2_i": chi_i})
            values.append(self.gain_G(other, 1.0).real)
        return values[0] / values[1]

    def amplification_factor(self, x: float, ReG: float, gamma_s: float, v_s: float) -> float:
        """
        Plasmon occupation relative to thermal after propagating a distance x.

        Args:
            x: Distance from the thermal boundary (cm)
            ReG: Gain rate (1/s)
            gamma_s: Damping rate (1/s)
            v_s: Group velocity (cm/s)

        Returns:
            float: <a+a>(x) / <a+a>_T
        """
        exponent = 2.0 * (ReG - gamma_s) * x / v_s
        drive = 2.0 * gamma_s * x / v_s
        if exponent > 700:
            return math.inf
        if abs(exponent) < SERIES_THRESHOLD:
            return 1.0 + math.expm1(exponent) + drive * expm1_ratio(exponent)
        return 1.0 + math.expm1(exponent) * (1.0 + drive / exponent)

    def detector_average(self, L_x: float, ReG: float, gamma_s: float, v_s: float,
                         n_thermal: float) -> Tuple[float, float]:
        """Occupation averaged over the collection length and its exponent Xi"""
        xi = 2.0 * (ReG - gamma_s) * L_x / v_s
        return n_thermal * expm1_ratio(xi), xi

    def bose_N_T(self, omega: float, T: float) -> float:
        if T <= 0:
            return 0.0
        x = HBAR * omega / (K_B * T)
        if x > 700:
            return 0.0
        return 1.0 / math.expm1(x)

    def thermal_occupation(self, omega_s: float, T: float, det: DetectionGeometry, v_s: float) -> float:
        """Plasmon occupation in equilibrium with the reservoir"""
        return self.bose_N_T(omega_s, T) * det.delta_omega / (2 * math.pi * det.L_y * v_s)

    def antenna_power(self, omega_s: float, T: float, det: DetectionGeometry, v_s: float) -> float:
        """Thermal power carried through the aperture, N_T hbar omega_s delta_omega / (2 pi)"""
        return det.L_y * v_s * HBAR * omega_s * self.thermal_occupation(omega_s, T, det, v_s)

    def idler_flux(self, point: OperatingPoint, I_p: float, det: DetectionGeometry, gamma_s: float) -> float:
        """
        Idler photons per second reaching the detector.

        Args:
            point: Phase-matched operating point
            I_p: Pump intensity (erg s^-1 cm^-2)
            det: Detection geometry and reservoir temperature
            gamma_s: Plasmon damping rate (1/s)

        Returns:
            float: Photon flux including the spontaneous floor
        """
        geom, mode = point.geom, point.mode
        ReG = self.gain_G(point, I_p).real
        xi = 2.0 * (ReG - gamma_s) * det.L_x / mode.v_s
        N_T = self.bose_N_T(mode.omega_s, det.T)
        rate = (geom.n1 ** 2 * abs(point.Gamma_coupling) ** 2 * abs(point.chi2_i) ** 2 * I_p * det.L_x
                * det.delta_omega
                / (2 * math.pi * C ** 2 * mode.v_s * HBAR * geom.omega_p * math.cos(geom.theta_1i)))
        return rate * (expm1_ratio(xi) * N_T + 1.0)

    def photon_density(self, I_p: float, point: OperatingPoint) -> float:
        """<c_p+ c_p> equivalent of the pump intensity, I_p n1 / (c hbar omega_p)"""
        return I_p * point.geom.n1 / (C * HBAR * point.omega_p)

    def _parametric_coefficient(self, point: OperatingPoint) -> complex:
        geom = point.geom
        return geom.n1 * point.Gamma_coupling * point.chi2_i / (C * math.cos(geom.theta_1i))

    def reflected_idler_coefficients(self, point: OperatingPoint, I_p: float) -> Tuple[float, complex]:
        """
        Fresnel reflection of the idler noise and the parametric coefficient of a_s+ c_p.

        The pair ratio these coefficients imply at I_p is logged alongside.
        """
        geom = point.geom
        R_i = self.fresnel_R_s(geom.theta_1i, geom.n1, geom.n2)
        kappa = self._parametric_coefficient(point)
        logger.info(f"Reflected idler: R_i = {R_i:.4g}, pair ratio {self.pair_amplitude_ratio(point, I_p):.3e} "
                    f"at {I_p:.3e} erg/(s cm^2)")
        return R_i, kappa

    def pair_amplitude_ratio(self, point: OperatingPoint, I_p: float) -> float:
        """|beta/alpha|^2 of the lowest-order idler-plasmon pair state"""
        return abs(self._parametric_coefficient(point)) ** 2 * self.photon_density(I_p, point)

    def gain_report(self, point: OperatingPoint, I_p: float, det: DetectionGeometry,
                    gamma_s: float) -> GainReport:
        """All expectation-level figures at one operating point"""
        G = self.gain_G(point, I_p)
        try:
            I_threshold = self.threshold_intensity(point, gamma_s)
        except NoThresholdError:
            logger.warning("Gain coefficient is not positive; reporting no threshold")
            I_threshold = None

        mode = point.mode
        n_thermal = self.thermal_occupation(mode.omega_s, det.T, det, mode.v_s)
        n_detector, xi = self.detector_average(det.L_x, G.real, gamma_s, mode.v_s, n_thermal)

        alternate = None
        if point.method is not Chi2Method.NUMERIC:
            other_method = Chi2Method.CLOSED if point.method is Chi2Method.RESONANT else Chi2Method.RESONANT
            chi_s, chi_i = self.chi2_pair(point.geom, point.mat, mode.omega_s, point.q_i, point.q_s,
                                          other_method, gamma_s)
            other_G = self.gain_G(point.model_copy(update={"chi2_s": chi_s, "chi2_i": chi_i}), I_p)
            if G.real != 0 and abs(other_G.real - G.real) > 0.25 * abs(G.real):
                logger.warning(f"{point.method.value} and {other_method.value} gains differ: "
                               f"{G.real:.3e} vs {other_G.real:.3e} 1/s")
                alternate = other_G

        return GainReport(
            G=G,
            I_threshold=I_threshold,
            amplification=self.amplification_factor(det.L_x, G.real, gamma_s, mode.v_s),
            n_detector=n_detector,
            flux_idler=self.idler_flux(point, I_p, det, gamma_s),
            Xi=xi,
            omega_s=mode.omega_s,
            method=point.method,
            alternate_G=alternate,
        )


three_wave_service = ThreeWaveService()
