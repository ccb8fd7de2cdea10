from typing import Optional

import numpy as np

from app.core.constants import E, HBAR
from app.core.exceptions import PermutationRefusedError, SingularInputError
from app.models.chi2_model import Broadening, Chi2Component
from app.models.material_model import MaterialParams
from app.utils.logger import logger


class Chi2ClosedService:
    """Closed-form second-order response of massless Dirac fermions with spatial dispersion"""

    def _frequencies(self, omega1: float, omega2: float, broadening: Optional[Broadening],
                     difference: bool):
        broadening = broadening or Broadening()
        sign = -1.0 if difference else 1.0
        w1 = omega1 + 1j * broadening.gamma1
        w2 = sign * omega2 + 1j * broadening.gamma2
        w3 = omega1 + sign * omega2 + 1j * broadening.gamma3
        return w1, w2, w3, sign

    def sigma2_xyy(self, omega1: float, omega2: float, q1: float, q2: float, mat: MaterialParams,
                   broadening: Optional[Broadening] = None, difference: bool = False) -> complex:
        """
        sigma^(2)_xyy(omega1 + omega2; omega1, omega2) to first order in the wave numbers.

        Each frequency carries its own broadening: omega1 + i*gamma1,
        omega2 + i*gamma2 and omega1 + omega2 + i*gamma3. With difference=True
        the signs of omega2 and q2 are flipped while +i*gamma2 is kept.

        Args:
            omega1, omega2: Signed frequencies (rad/s)
            q1, q2: Signed wave numbers along x (1/cm)
            mat: Material of the layer
            broadening: Rates added to the three frequencies
            difference: Evaluate the difference-frequency process

        Returns:
            complex: Second-order 2D conductivity
        """
        w1, w2, w3, sign = self._frequencies(omega1, omega2, broadening, difference)
        q2 = sign * q2
        K = mat.v_F * mat.k_F
        K2 = K ** 2

        factors = (w1, w2, w3, w1 ** 2 - 4 * K2, w2 ** 2 - 4 * K2, w3 ** 2 - 4 * K2)
        if any(abs(f) <= 1e-12 * K2 for f in factors[3:]) or any(abs(f) <= 1e-12 * K for f in factors[:3]):
            raise SingularInputError("Second-order conductivity evaluated on a pole")

        numerator = (
            4 * K2 * w1 * w2 * w3 ** 2 * (q1 * w2 ** 2 + q2 * w1 ** 2)
            + 4 * K2 ** 2 * (
                q1 * w2 ** 4
                - (6 * q1 + 4 * q2) * w1 * w2 ** 3
                - 8 * (q1 + q2) * w1 ** 2 * w2 ** 2
                - (4 * q1 + 6 * q2) * w1 ** 3 * w2
                + q2 * w1 ** 4
            )
            - 16 * K2 ** 3 * (q1 * w2 * (w2 - 2 * w1) + q2 * w1 * (w1 - 2 * w2))
        )
        denominator = w1 ** 2 * w2 ** 2 * w3 * factors[3] * factors[4] * factors[5]
        prefactor = -mat.s_F * E ** 3 * mat.v_F ** 2 / (2 * np.pi * HBAR ** 2)
        return complex(mat.scale * prefactor * numerator / denominator)

    def intraband_limit(self, omega1: float, omega2: float, q1: float, q2: float, mat: MaterialParams,
                        broadening: Optional[Broadening] = None, difference: bool = False) -> complex:
        """
        sigma^(2)_xyy for frequencies far below 2 v_F k_F.

        Follows from the kinetic equation for a degenerate Dirac gas with the
        Lorentz force kept to first order in the wave numbers.
        """
        w1, w2, w3, sign = self._frequencies(omega1, omega2, broadening, difference)
        q2 = sign * q2
        if any(abs(w) == 0 for w in (w1, w2, w3)):
            raise SingularInputError("Intraband conductivity evaluated at zero frequency")
        Q = q1 * w2 * (w2 - 2 * w1) + q2 * w1 * (w1 - 2 * w2)
        value = -mat.s_F * E ** 3 * mat.v_F ** 2 * Q / (8 * np.pi * HBAR ** 2 * w1 ** 2 * w2 ** 2 * w3)
        return complex(mat.scale * value)

    def chi2_from_sigma2(self, sigma: complex, omega_sum: complex) -> complex:
        """chi^(2) = i sigma^(2) / (omega1 + omega2)"""
        if omega_sum == 0:
            raise SingularInputError("Cannot convert a conductivity at zero mixing frequency")
        return 1j * sigma / omega_sum

    def chi2_resonant(self, omega_p: float, omega_i: float, omega_s: float, q_p: float,
                      mat: MaterialParams) -> complex:
        """
        Resonant chi^(s,2)_xyy = chi^(i,2)*_yyx for a pump close to 2 v_F k_F.

        Args:
            omega_p, omega_i, omega_s: Pump, idler and plasmon frequencies (rad/s)
            q_p: Pump in-plane wave number (1/cm)
            mat: Material; gamma_pol is the interband rate in the denominator

        Returns:
            complex: Real, positive for q_p > 0
        """
        detuning = abs(omega_p - 2 * mat.v_F * mat.k_F)
        if detuning >= mat.gamma_pol:
            logger.warning(f"Resonant chi2 used {detuning / mat.gamma_pol:.3g} gamma away from 2 v_F k_F")
        value = 3 * E ** 3 * mat.v_F ** 2 * q_p / (16 * np.pi * HBAR ** 2 * omega_i * omega_s ** 2 * mat.gamma_pol)
        return complex(mat.scale * value)

    def component_xyy(self, omega1: float, omega2: float, q1: float, q2: float, mat: MaterialParams,
                      broadening: Optional[Broadening] = None) -> Chi2Component:
        """The sum-frequency xyy susceptibility as a tagged component"""
        broadening = broadening or Broadening()
        sigma = self.sigma2_xyy(omega1, omega2, q1, q2, mat, broadening)
        value = self.chi2_from_sigma2(sigma, omega1 + omega2 + 1j * broadening.gamma3)
        return Chi2Component(indices=("x", "y", "y"), omega1=omega1, omega2=omega2, q1=q1, q2=q2,
                             value=value, broadening=broadening)

    def permutation_partner(self, component: Chi2Component, which: int = 1) -> Chi2Component:
        """
        Relabel a lossless component by the full permutation symmetry.

        which=1 maps chi_ijk(w3; w1, w2) to chi_jik(-w1; -w3, w2), which=2 maps
        it to chi_kji(-w2; w1, -w3) and which=0 is the identity. Wave numbers
        travel with their frequencies.

        Args:
            component: The component to relabel
            which: Permutation selector

        Returns:
            Chi2Component: Partner carrying the same value
        """
        if not component.broadening.is_lossless:
            raise PermutationRefusedError("Permutation relations do not hold once dissipation is included")
        i, j, k = component.indices
        if which == 0:
            return component
        if which == 1:
            return component.model_copy(update={
                "indices": (j, i, k),
                "omega1": -component.omega3, "q1": -component.q3,
            })
        if which == 2:
            return component.model_copy(update={
                "indices": (k, j, i),
                "omega2": -component.omega3, "q2": -component.q3,
            })
        raise ValueError(f"Unknown permutation selector {which}")


chi2_closed_service = Chi2ClosedService()
