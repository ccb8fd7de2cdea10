import math
from typing import Callable, Dict

import numpy as np
import pandas as pd
from pydantic import ValidationError

from app.core.constants import HBAR
from app.core.exceptions import ConfigError, NumericalError
from app.core.presets import graphene_preset, ti_preset
from app.core.units import from_internal, to_internal
from app.models.chi2_model import Broadening, KGridSpec, Polarization
from app.models.gain_model import Chi2Method
from app.models.langevin_model import LineSpec
from app.models.material_model import DetectionGeometry, Geometry, MaterialParams
from app.models.oscillator_model import OscillatorParams
from app.models.scan_model import MaterialPreset, ScanConfig, ScanVariable
from app.services.chi2_closed_service import chi2_closed_service
from app.services.chi2_oracle_service import chi2_oracle_service
from app.services.langevin_service import langevin_service
from app.services.linear_response_service import linear_response_service
from app.services.oscillator_service import oscillator_service
from app.services.three_wave_service import three_wave_service
from app.utils.logger import logger


class ScanService:
    """Parameter scans behind the command-line and HTTP front ends"""

    def build_material(self, config: ScanConfig) -> MaterialParams:
        omega_p = to_internal(config.wavelength_um, "um")
        E_F = to_internal(config.E_F_meV, "meV") if config.E_F_meV else 0.5 * HBAR * omega_p
        if config.material is MaterialPreset.TI:
            base = ti_preset(E_F=E_F, gamma_pol=config.gamma)
        else:
            base = graphene_preset(E_F=E_F, gamma_pol=config.gamma)
        update = {"n_layers": config.n_layers, "s_F": config.s_F}
        if config.v_F is not None:
            update["v_F"] = config.v_F
        if config.g is not None:
            update["g"] = config.g
        return MaterialParams(**{**base.model_dump(), **update})

    def build_geometry(self, config: ScanConfig) -> Geometry:
        return Geometry(
            n1=config.n1,
            n2=config.n2,
            theta_1p=to_internal(config.theta_1p_deg, "deg"),
            theta_1i=to_internal(config.theta_1i_deg, "deg"),
            omega_p=to_internal(config.wavelength_um, "um"),
            I_p=to_internal(config.I_p_GW, "GW/cm2"),
        )

    def build_detection(self, config: ScanConfig) -> DetectionGeometry:
        return DetectionGeometry(L_x=config.L_x, L_y=config.L_y, delta_omega=to_internal(config.delta_f_THz, "THz"),
                                 A_D=config.A_D, T=config.T)

    def scan_values(self, config: ScanConfig, expected: ScanVariable, start: float, stop: float,
                    count: int, log: bool = False) -> np.ndarray:
        """
        Scan points for a command, honoring the configured range.

        Args:
            config: Resolved configuration
            expected: Variable the command scans
            start, stop, count: Defaults used when the configuration gives none
            log: Log-spaced points

        Returns:
            np.ndarray: Points in ascending order, in user units
        """
        if config.variable is not None and config.variable is not expected:
            raise ConfigError(f"This command scans {expected.value}, not {config.variable.value}")
        if config.start is not None:
            start, stop = config.start, config.stop
        count = config.count or count
        if log and min(start, stop) <= 0:
            raise ConfigError(f"{expected.value} range must be positive")
        points = np.geomspace(start, stop, count) if log else np.linspace(start, stop, count)
        return np.sort(points)

    def _operating_point(self, config: ScanConfig, method: Chi2Method = None):
        geom = self.build_geometry(config)
        mat = self.build_material(config)
        return three_wave_service.phase_match(geom, mat, gamma_s=config.gamma_s, gamma_c=config.gamma_c,
                                              method=method or config.method, grid=self._grid(config))

    def _grid(self, config: ScanConfig) -> KGridSpec:
        return KGridSpec(n_radial=config.n_radial, n_angular=config.n_angular, k_max=config.k_max,
                         eta=config.eta or config.gamma)

    def cmd_dispersion(self, config: ScanConfig) -> pd.DataFrame:
        """Plasmon dispersion over q_s, given in units of k_F"""
        geom = self.build_geometry(config)
        mat = self.build_material(config)
        rows = []
        for ratio in self.scan_values(config, ScanVariable.Q_S, 1e-3, 1e-1, 50, log=True):
            mode = linear_response_service.solve_mode(ratio * mat.k_F, geom, mat, config.gamma_c)
            rows.append({"q_s": mode.q_s, "omega_s": mode.omega_s, "v_s": mode.v_s,
                         "gamma_s": mode.gamma_s, "E_s0_sq": mode.E_s0_sq})
        logger.info(f"Dispersion scan finished with {len(rows)} modes")
        return pd.DataFrame(rows, columns=["q_s", "omega_s", "v_s", "gamma_s", "E_s0_sq"])

    def cmd_fig2(self, config: ScanConfig) -> pd.DataFrame:
        """Gain and phase-matched plasmon frequency against the idler angle"""
        geom = self.build_geometry(config)
        mat = self.build_material(config)
        rows = []
        for angle in self.scan_values(config, ScanVariable.THETA_1I, -60.0, 60.0, 121):
            try:
                point = three_wave_service.phase_match(geom, mat, to_internal(angle, "deg"), gamma_s=config.gamma_s,
                                                       gamma_c=config.gamma_c, method=config.method,
                                                       grid=self._grid(config))
                ReG = three_wave_service.gain_G(point, geom.I_p).real
                omega_s_THz = from_internal(point.omega_s, "THz")
                valid = three_wave_service.is_valid(point, config.gamma_s)
            except NumericalError as e:
                logger.warning(f"theta_1i={angle:.3f} deg flagged invalid: {e}")
                ReG, omega_s_THz, valid = math.nan, math.nan, False
            rows.append({"theta_1i_deg": float(angle), "ReG": ReG, "omega_s_THz": omega_s_THz,
                         "valid_flag": bool(valid)})
        table = pd.DataFrame(rows, columns=["theta_1i_deg", "ReG", "omega_s_THz", "valid_flag"])
        gains = table.loc[table["valid_flag"] & (table["ReG"] > 0), "ReG"]
        if len(gains) > 1:
            table.attrs["ReG_max_over_min"] = float(gains.max() / gains.min())
            logger.info(f"Re G varies by a factor {table.attrs['ReG_max_over_min']:.3f} over the valid angles")
        return table

    def cmd_fig3(self, config: ScanConfig) -> pd.DataFrame:
        """Threshold pump intensity (GW/cm^2) against the plasmon or interband damping"""
        if config.variable is ScanVariable.GAMMA:
            rows = []
            for gamma in self.scan_values(config, ScanVariable.GAMMA, 5e11, 2e12, 20):
                point = self._operating_point(config.model_copy(update={"gamma": float(gamma)}))
                I_th = three_wave_service.threshold_intensity(point, config.gamma_s)
                rows.append({"gamma": float(gamma), "I_threshold": from_internal(I_th, "GW/cm2")})
            return pd.DataFrame(rows, columns=["gamma", "I_threshold"])

        point = self._operating_point(config)
        rows = []
        for gamma_s in self.scan_values(config, ScanVariable.GAMMA_S, 1e10, 1e12, 20):
            I_th = three_wave_service.threshold_intensity(point, float(gamma_s))
            rows.append({"gamma_s": float(gamma_s), "I_threshold": from_internal(I_th, "GW/cm2")})
        return pd.DataFrame(rows, columns=["gamma_s", "I_threshold"])

    def cmd_chi2(self, config: ScanConfig) -> pd.DataFrame:
        """sigma^(2)_xyy and chi^(2)_xyy at fixed frequencies over q1, given in units of k_F"""
        mat = self.build_material(config)
        omega1 = to_internal(config.chi2_f1_THz, "THz")
        omega2 = to_internal(config.chi2_f2_THz, "THz")
        method = config.method or Chi2Method.CLOSED
        eta = config.eta or config.gamma
        rows = []
        for ratio in self.scan_values(config, ScanVariable.Q_S, 1e-3, 1e-2, 5, log=True):
            q1 = float(ratio * mat.k_F)
            q2 = config.chi2_q_ratio * q1
            if method is Chi2Method.CLOSED:
                sigma = chi2_closed_service.sigma2_xyy(omega1, omega2, q1, q2, mat, Broadening.uniform(eta))
            elif method is Chi2Method.NUMERIC:
                sigma = complex(chi2_oracle_service.sigma2_numeric(
                    Polarization.along("y"), Polarization.along("y"), omega1, omega2, q1, q2, mat,
                    self._grid(config))[0])
            else:
                raise ConfigError("The chi2 table needs method = closed or numeric")
            chi = chi2_closed_service.chi2_from_sigma2(sigma, omega1 + omega2 + 1j * eta)
            rows.append({"q1": q1, "q2": q2, "sigma_re": sigma.real, "sigma_im": sigma.imag,
                         "chi_re": chi.real, "chi_im": chi.imag})
        return pd.DataFrame(rows, columns=["q1", "q2", "sigma_re", "sigma_im", "chi_re", "chi_im"])

    def cmd_flux(self, config: ScanConfig) -> pd.DataFrame:
        """Gain, detector occupation and idler flux against pump intensity (GW/cm^2)"""
        point = self._operating_point(config)
        det = self.build_detection(config)
        rows = []
        for intensity in self.scan_values(config, ScanVariable.I_P, 0.1, 10.0, 20, log=True):
            report = three_wave_service.gain_report(point, to_internal(intensity, "GW/cm2"), det, config.gamma_s)
            rows.append({"I_p": float(intensity), "ReG": report.G.real, "Xi": report.Xi,
                         "amplification": report.amplification, "n_detector": report.n_detector,
                         "flux_idler": report.flux_idler})
        return pd.DataFrame(rows, columns=["I_p", "ReG", "Xi", "amplification", "n_detector", "flux_idler"])

    def cmd_langevin(self, config: ScanConfig) -> pd.DataFrame:
        """Simulated occupation profile along the line for the phase-matched plasmon"""
        point = self._operating_point(config, Chi2Method.RESONANT)
        det = self.build_detection(config)
        mode = point.mode
        n_thermal = three_wave_service.thermal_occupation(mode.omega_s, det.T, det, mode.v_s)
        length = config.line_lengths * mode.v_s / config.gamma_s
        dx = length / config.n_cells
        spec = LineSpec(L=length, n_cells=config.n_cells, dt=config.courant * dx / mode.v_s, n_traj=config.n_traj,
                        seed=config.seed, v_s=mode.v_s, gamma_s=config.gamma_s, ReG=config.ReG,
                        n_thermal=n_thermal, n_thermal_boundary=n_thermal)
        profile = langevin_service.simulate(spec)
        return pd.DataFrame({"x": profile.x, "mean_occupation": profile.mean_occupation, "stderr": profile.stderr},
                            columns=["x", "mean_occupation", "stderr"])

    def cmd_osc0d(self, config: ScanConfig) -> pd.DataFrame:
        """Coupled-amplitude trajectory at a pump set relative to the 0D threshold"""
        point = self._operating_point(config, Chi2Method.RESONANT)
        zeta_s, zeta_i = oscillator_service.zeta_coefficients(point.mode, point.chi2_s, point.chi2_i,
                                                              point.omega_i, config.osc_l, point.geom.theta_1i)
        params = OscillatorParams.build(zeta_s, zeta_i, config.gamma_s, config.osc_l, theta_i=point.geom.theta_1i)
        threshold = oscillator_service.threshold_0d(params)
        params = params.model_copy(update={"E_p": complex(math.sqrt(config.osc_pump_ratio * threshold))})
        t_span = config.osc_decay_times / config.gamma_s
        trajectory = oscillator_service.integrate(params, 1.0, 0.0, t_span, t_span / config.osc_steps)
        return pd.DataFrame({
            "t": trajectory.t,
            "abs_E_s": [abs(value) for value in trajectory.E_s],
            "abs_E_i": [abs(value) for value in trajectory.E_i_conj],
        }, columns=["t", "abs_E_s", "abs_E_i"])

    @property
    def commands(self) -> Dict[str, Callable[[ScanConfig], pd.DataFrame]]:
        return {
            "dispersion": self.cmd_dispersion,
            "fig2": self.cmd_fig2,
            "fig3": self.cmd_fig3,
            "chi2": self.cmd_chi2,
            "flux": self.cmd_flux,
            "langevin": self.cmd_langevin,
            "osc0d": self.cmd_osc0d,
        }

    def run(self, command: str, config: ScanConfig) -> pd.DataFrame:
        if command not in self.commands:
            raise ConfigError(f"Unknown command {command!r}")
        logger.info(f"Running {command}")
        try:
            return self.commands[command](config)
        except ValidationError as e:
            raise ConfigError(f"{command}: derived parameters are invalid: {e}")


scan_service = ScanService()
