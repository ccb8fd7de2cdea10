from typing import Optional


class PlasmonOpaError(Exception):
    """Base class for every error raised by the package"""

    exit_code = 1


class ConfigError(PlasmonOpaError):
    """Bad configuration file, flag or record field"""

    exit_code = 2


class NumericalError(PlasmonOpaError):
    """A numerical procedure could not produce a trustworthy answer"""

    exit_code = 3


class SingularInputError(NumericalError):
    """Input sits on a pole or branch point of a response function"""


class NoModeError(NumericalError):
    """No bracketed root of the dispersion relation"""


class LandauDampingError(NumericalError):
    """Root found inside the intraband Landau-damping region w <= v_F q"""


class AnomalousDispersionError(NumericalError):
    """Re(d chi_s / d omega) is not positive at the mode"""


class NoPhaseMatchError(NumericalError):
    """Phase-matching root problem has no solution in the scanned window"""


class NoThresholdError(NumericalError):
    """Gain coefficient is not positive, so no instability threshold exists"""


class ConvergenceError(NumericalError):
    """Quadrature refinement did not meet the requested tolerance"""

    def __init__(self, message: str, coarse: Optional[complex] = None, fine: Optional[complex] = None):
        super().__init__(message)
        self.coarse = coarse
        self.fine = fine


class PermutationRefusedError(PlasmonOpaError):
    """Permutation relations requested for a lossy (broadened) component"""

    exit_code = 2


class TotalInternalReflectionError(NumericalError):
    """Snell's law has no real refraction angle"""


class StepSizeError(NumericalError):
    """Integrator step too large for the decay rates involved"""


class CFLViolationError(NumericalError):
    """Advection step exceeds one cell per time step"""
