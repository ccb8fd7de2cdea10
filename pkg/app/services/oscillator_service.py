import math
from typing import Tuple

import numpy as np
from scipy.linalg import expm

from app.core.exceptions import NoThresholdError, StepSizeError
from app.models.mode_model import PlasmonMode
from app.models.oscillator_model import OscillatorParams, Trajectory
from app.utils.logger import logger


class OscillatorService:
    """Mean-field model of a plasmon amplitude and an idler amplitude coupled by the pump"""

    def zeta_coefficients(self, mode: PlasmonMode, chi2_s: complex, chi2_i: complex, omega_i: float,
                          l: float, theta_i: float) -> Tuple[complex, complex]:
        """
        Coupling coefficients of the two amplitude equations.

        Args:
            mode: Solved plasmon mode carrying Re d(chi_s)/d(omega)
            chi2_s: chi^(s,2)_xyy
            chi2_i: chi^(i,2)_yyx
            omega_i: Idler frequency (rad/s)
            l: Idler cylinder length (cm)
            theta_i: Idler angle (rad)

        Returns:
            Tuple[complex, complex]: (zeta_s, zeta_i)
        """
        zeta_s = 0.5 * chi2_s / mode.chi_derivative
        zeta_i = math.pi * omega_i * complex(chi2_i).conjugate() / (l * math.cos(theta_i))
        return complex(zeta_s), complex(zeta_i)

    def system_matrix(self, params: OscillatorParams) -> np.ndarray:
        """Generator of d/dt (E_s, E_i*)"""
        return np.array([
            [-params.gamma_s, 1j * params.zeta_s * params.E_p],
            [-1j * params.zeta_i.conjugate() * params.E_p.conjugate(), -params.gamma_i],
        ], dtype=complex)

    def eigenvalues(self, params: OscillatorParams) -> Tuple[complex, complex]:
        mean = 0.5 * (params.gamma_s + params.gamma_i)
        half_gap = 0.5 * (params.gamma_i - params.gamma_s)
        coupling = params.zeta_s * params.zeta_i.conjugate() * abs(params.E_p) ** 2
        root = np.sqrt(complex(half_gap ** 2 + coupling))
        return complex(-mean + root), complex(-mean - root)

    def growth_rate(self, params: OscillatorParams) -> float:
        """Largest real part of the two eigenvalues"""
        return max(lam.real for lam in self.eigenvalues(params))

    def threshold_0d(self, params: OscillatorParams) -> float:
        """|E_p|^2 above which the coupled amplitudes grow"""
        coupling = (params.zeta_s * params.zeta_i.conjugate()).real
        if coupling <= 0:
            raise NoThresholdError(f"Re(zeta_s zeta_i*) = {coupling:.3e} admits no instability")
        return params.gamma_s * params.gamma_i / coupling

    def integrate(self, params: OscillatorParams, E_s0_init: complex, E_i0_init: complex,
                  t_span: float, dt: float) -> Trajectory:
        """
        Fourth-order Runge-Kutta integration of the coupled amplitudes.

        Args:
            params: Couplings, decay rates and pump amplitude
            E_s0_init: Initial plasmon amplitude
            E_i0_init: Initial conjugate idler amplitude
            t_span: Integration time (s)
            dt: Fixed step (s)

        Returns:
            Trajectory: Samples at every step plus the analytic eigenvalues
        """
        if dt * max(params.gamma_s, params.gamma_i) >= 0.1:
            raise StepSizeError(f"dt * max(gamma) = {dt * max(params.gamma_s, params.gamma_i):.3f} must be < 0.1")
        matrix = self.system_matrix(params)
        n_steps = int(round(t_span / dt))
        state = np.array([E_s0_init, E_i0_init], dtype=complex)
        samples = np.empty((n_steps + 1, 2), dtype=complex)
        samples[0] = state
        for n in range(n_steps):
            k1 = matrix @ state
            k2 = matrix @ (state + 0.5 * dt * k1)
            k3 = matrix @ (state + 0.5 * dt * k2)
            k4 = matrix @ (state + dt * k3)
            state = state + dt / 6.0 * (k1 + 2 * k2 + 2 * k3 + k4)
            samples[n + 1] = state
        logger.debug(f"Integrated coupled amplitudes over {n_steps} steps")
        return Trajectory(
            t=list(np.arange(n_steps + 1) * dt),
            E_s=list(samples[:, 0]),
            E_i_conj=list(samples[:, 1]),
            eigenvalues=self.eigenvalues(params),
        )

    def exact(self, params: OscillatorParams, E_s0_init: complex, E_i0_init: complex, t: float) -> np.ndarray:
        """Matrix-exponential solution at time t"""
        return expm(self.system_matrix(params) * t) @ np.array([E_s0_init, E_i0_init], dtype=complex)


oscillator_service = OscillatorService()
