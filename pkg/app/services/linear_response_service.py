from typing import Tuple, Union

import numpy as np
from scipy import optimize

from app.core.config import (
    DISPERSION_GROUP_VELOCITY_STEP,
    DISPERSION_SCAN_POINTS,
    NORMALIZATION_DERIVATIVE_STEP,
)
from app.core.constants import C, E, HBAR
from app.core.exceptions import (
    AnomalousDispersionError,
    LandauDampingError,
    NoModeError,
    SingularInputError,
)
from app.models.material_model import Geometry, MaterialParams
from app.models.mode_model import PlasmonMode
from app.utils.logger import logger

ArrayLike = Union[float, complex, np.ndarray]


class LinearResponseService:
    """Intraband linear response of a degenerate Dirac layer and its TM surface plasmon"""

    def chi_s(self, mat: MaterialParams, omega: ArrayLike, q: ArrayLike, gamma_s: float = 0.0) -> ArrayLike:
        """
        Nonlocal intraband 2D susceptibility.

        A single relaxation rate enters every occurrence of omega + i*gamma.

        Args:
            mat: Material of the layer
            omega: Angular frequency, may be complex (rad/s)
            q: In-plane wave number (1/cm)
            gamma_s: Collision broadening (1/s)

        Returns:
            complex: chi_s in cm, scaled by layer count and g/4
        """
        omega = np.asarray(omega, dtype=complex)
        q = np.asarray(q, dtype=float)
        if np.any(q <= 0):
            raise SingularInputError("chi_s requires q > 0")
        if np.any(omega == 0):
            raise SingularInputError("chi_s requires a nonzero frequency")

        a = omega + 1j * gamma_s
        b = mat.v_F * q
        if np.any(np.abs(a - b) <= 1e-12 * np.abs(a)):
            raise SingularInputError("v_F q sits on the branch point omega + i gamma")

        prefactor = 2.0 * E ** 2 * mat.E_F / (np.pi * HBAR ** 2 * omega)
        bracket = 1.0 - a / (a + b) * np.sqrt((a + b) / (a - b))
        value = mat.scale * prefactor * a / b ** 2 * bracket
        return value if value.ndim else complex(value)

    def chi_derivative(self, mat: MaterialParams, omega: float, q: float,
                       step: float = NORMALIZATION_DERIVATIVE_STEP) -> float:
        """Re d(chi_s)/d(omega) by a centered difference with relative step"""
        h = step * omega
        upper = self.chi_s(mat, omega + h, q)
        lower = self.chi_s(mat, omega - h, q)
        return float(np.real(upper - lower) / (2.0 * h))

    def decay_constants(self, omega: ArrayLike, q: ArrayLike, geom: Geometry) -> Tuple[ArrayLike, ArrayLike]:
        """Transverse decay constants p1, p2 on the principal branch (Re p >= 0)"""
        omega = np.asarray(omega, dtype=complex)
        p1 = np.sqrt(q ** 2 - geom.eps1 * omega ** 2 / C ** 2 + 0j)
        p2 = np.sqrt(q ** 2 - geom.eps2 * omega ** 2 / C ** 2 + 0j)
        p1 = np.where(np.real(p1) < 0, -p1, p1)
        p2 = np.where(np.real(p2) < 0, -p2, p2)
        if p1.ndim == 0:
            return complex(p1), complex(p2)
        return p1, p2

    def dispersion_terms(self, omega: ArrayLike, q: ArrayLike, geom: Geometry, mat: MaterialParams,
                         gamma_s: float = 0.0) -> Tuple[ArrayLike, ArrayLike, ArrayLike]:
        """The three terms 4 pi chi_s, eps1/p1 and eps2/p2"""
        p1, p2 = self.decay_constants(omega, q, geom)
        return 4.0 * np.pi * self.chi_s(mat, omega, q, gamma_s), geom.eps1 / p1, geom.eps2 / p2

    def dispersion_residual(self, omega: ArrayLike, q: ArrayLike, geom: Geometry, mat: MaterialParams,
                            gamma_s: float = 0.0) -> ArrayLike:
        """Left-hand side of 4 pi chi_s + eps1/p1 + eps2/p2 = 0"""
        chi_term, term1, term2 = self.dispersion_terms(omega, q, geom, mat, gamma_s)
        return chi_term + term1 + term2

    def long_wavelength_omega(self, q: ArrayLike, geom: Geometry, mat: MaterialParams,
                              retarded: bool = False) -> ArrayLike:
        """
        Local, long-wavelength plasmon frequency.

        omega^2 = 4 e^2 E_F q / (hbar^2 (eps1 + eps2)); with retarded=True the
        leading correction from the finite speed of light is applied.
        """
        q = np.asarray(q, dtype=float)
        eps_sum = geom.eps1 + geom.eps2
        omega0 = np.sqrt(4.0 * E ** 2 * mat.E_F * mat.scale * q / (HBAR ** 2 * eps_sum))
        if retarded:
            shift = (geom.eps1 ** 2 + geom.eps2 ** 2) * omega0 ** 2 / (4.0 * C ** 2 * q ** 2 * eps_sum)
            omega0 = omega0 * (1.0 - shift)
        return omega0 if omega0.ndim else float(omega0)

    def _real_root(self, q: float, geom: Geometry, mat: MaterialParams) -> float:
        lower = mat.v_F * q * (1.0 + 1e-6)
        upper = 0.99 * C * q / max(geom.n1, geom.n2)
        if lower >= upper:
            raise NoModeError(f"No window between the Landau edge and the light line at q={q:.6e}")

        grid = np.geomspace(lower, upper, DISPERSION_SCAN_POINTS)
        values = np.real(self.dispersion_residual(grid, q, geom, mat))
        crossings = np.flatnonzero((values[:-1] < 0) & (values[1:] > 0))
        if crossings.size == 0:
            raise NoModeError(f"Dispersion relation has no bracketed root at q={q:.6e} 1/cm")
        if crossings.size > 1:
            logger.warning(f"{crossings.size} dispersion roots at q={q:.6e}; returning the lowest")

        i = crossings[0]
        return optimize.brentq(
            lambda w: float(np.real(self.dispersion_residual(w, q, geom, mat))),
            grid[i], grid[i + 1], xtol=1e-15 * grid[i], rtol=4 * np.finfo(float).eps, maxiter=200,
        )

    def normalization_E_s0_sq(self, mode: PlasmonMode, mat: MaterialParams, geom: Geometry = None) -> float:
        """
        Mode normalization |E_s0|^2 = hbar / Re(d chi_s / d omega).

        Args:
            mode: A solved plasmon mode
            mat: Material of the layer
            geom: Unused in the quasi-electrostatic normalization

        Returns:
            float: |E_s0|^2
        """
        derivative = self.chi_derivative(mat, mode.omega_s, mode.q_s)
        if derivative <= 0:
            raise AnomalousDispersionError(f"Re d(chi_s)/d(omega) = {derivative:.6e} is not positive")
        return HBAR / derivative

    def damping_gamma_s(self, mode: PlasmonMode, mat: MaterialParams, gamma_c: float) -> float:
        """Amplitude damping hbar^-1 Im[chi_s] |E_s0|^2 for collision broadening gamma_c"""
        if gamma_c == 0:
            return 0.0
        chi = self.chi_s(mat, mode.omega_s, mode.q_s, gamma_c)
        return float(np.imag(chi)) * mode.E_s0_sq / HBAR

    def solve_mode(self, q: float, geom: Geometry, mat: MaterialParams, gamma_c: float = 0.0) -> PlasmonMode:
        """
        Solve the dispersion relation at real q.

        Args:
            q: In-plane wave number (1/cm)
            geom: Dielectric environment
            mat: Material of the layer
            gamma_c: Collision broadening used only for the damping rate

        Returns:
            PlasmonMode: The lossless root with its group velocity, damping and normalization
        """
        if q <= 0:
            raise NoModeError("Plasmon wave number must be positive")

        omega_s = self._real_root(q, geom, mat)
        if omega_s <= mat.v_F * q:
            raise LandauDampingError(f"Root omega={omega_s:.6e} lies in the Landau region v_F q={mat.v_F * q:.6e}")

        h = DISPERSION_GROUP_VELOCITY_STEP * q
        v_s = (self._real_root(q + h, geom, mat) - self._real_root(q - h, geom, mat)) / (2.0 * h)

        derivative = self.chi_derivative(mat, omega_s, q)
        if derivative <= 0:
            raise AnomalousDispersionError(f"Re d(chi_s)/d(omega) = {derivative:.6e} is not positive")
        E_s0_sq = HBAR / derivative

        p1, p2 = self.decay_constants(omega_s, q, geom)
        mode = PlasmonMode(omega_s=omega_s, q_s=q, v_s=v_s, gamma_s=0.0, E_s0_sq=E_s0_sq,
                           p1=p1, p2=p2, chi_derivative=derivative)
        if gamma_c > 0:
            mode = mode.model_copy(update={"gamma_s": self.damping_gamma_s(mode, mat, gamma_c)})
        logger.debug(f"Mode at q={q:.6e}: omega_s={omega_s:.6e}, v_s={v_s:.6e}, gamma_s={mode.gamma_s:.6e}")
        return mode

    def solve_mode_at_omega(self, omega: float, geom: Geometry, mat: MaterialParams,
                            gamma_c: float = 0.0) -> PlasmonMode:
        """Inverse problem: the mode whose real frequency is omega"""
        lower = max(geom.n1, geom.n2) * omega / C / 0.99
        upper = omega / (mat.v_F * (1.0 + 1e-6))
        if lower >= upper:
            raise NoModeError(f"No wave-number window for omega={omega:.6e}")

        grid = np.geomspace(lower, upper, DISPERSION_SCAN_POINTS)
        values = np.real(self.dispersion_residual(omega, grid, geom, mat))
        crossings = np.flatnonzero(np.sign(values[:-1]) != np.sign(values[1:]))
        if crossings.size == 0:
            raise NoModeError(f"Dispersion relation has no bracketed root at omega={omega:.6e} rad/s")

        i = crossings[0]
        q = optimize.brentq(
            lambda k: float(np.real(self.dispersion_residual(omega, k, geom, mat))),
            grid[i], grid[i + 1], xtol=1e-15 * grid[i], rtol=4 * np.finfo(float).eps, maxiter=200,
        )
        return self.solve_mode(q, geom, mat, gamma_c)

    def complex_root(self, q: float, geom: Geometry, mat: MaterialParams, gamma_c: float) -> complex:
        """Complex frequency root at real q with collision broadening, started from the lossless root"""
        omega_real = self._real_root(q, geom, mat)
        guess = complex(omega_real, -0.5 * gamma_c)
        root = optimize.newton(
            lambda w: complex(self.dispersion_residual(w, q, geom, mat, gamma_c)),
            guess, tol=1e-12 * omega_real, maxiter=100,
        )
        return complex(root)

    def field_profile(self, z: ArrayLike, mode: PlasmonMode) -> np.ndarray:
        """
        Evanescent TM field (E_x, E_y, E_z) of the mode.

        Args:
            z: Distance from the layer, positive into medium 1 (cm)
            mode: A solved plasmon mode

        Returns:
            np.ndarray: Complex array of shape (3,) or (3, len(z))
        """
        z = np.asarray(z, dtype=float)
        E_s0 = np.sqrt(mode.E_s0_sq)
        above = z >= 0
        p = np.where(above, mode.p1, mode.p2)
        sign = np.where(above, 1.0, -1.0)
        envelope = E_s0 * np.exp(-sign * p * z)
        E_x = envelope
        E_y = np.zeros_like(envelope)
        E_z = sign * 1j * mode.q_s / p * envelope
        return np.stack([E_x, E_y, E_z])


linear_response_service = LinearResponseService()
