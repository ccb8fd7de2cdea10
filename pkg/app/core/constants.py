import math

from pydantic import BaseModel, ConfigDict, Field


class PhysicalConstants(BaseModel):
    """Gaussian-CGS constants used by every formula in the package"""

    model_config = ConfigDict(frozen=True)

    e: float = Field(4.803204712570263e-10, description="Elementary charge (statcoulomb)")
    hbar: float = Field(1.054571817e-27, description="Reduced Planck constant (erg s)")
    c: float = Field(2.99792458e10, description="Speed of light (cm/s)")
    k_B: float = Field(1.380649e-16, description="Boltzmann constant (erg/K)")

    @property
    def alpha(self) -> float:
        """Fine-structure constant e^2/(hbar c)"""
        return self.e ** 2 / (self.hbar * self.c)


CONSTANTS = PhysicalConstants()

E = CONSTANTS.e
HBAR = CONSTANTS.hbar
C = CONSTANTS.c
K_B = CONSTANTS.k_B
TWO_PI = 2.0 * math.pi
