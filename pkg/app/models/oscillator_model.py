import math
from typing import List, Tuple

from pydantic import BaseModel, ConfigDict, Field, model_validator

from app.core.constants import C


class OscillatorParams(BaseModel):
    """Two parametrically coupled amplitudes in the mean-field model"""

    model_config = ConfigDict(frozen=True)

    zeta_s: complex = Field(..., description="Plasmon coupling coefficient")
    zeta_i: complex = Field(..., description="Idler coupling coefficient")
    gamma_s: float = Field(..., gt=0, description="Plasmon decay rate (1/s)")
    gamma_i: float = Field(..., gt=0, description="Idler decay rate c/l (1/s)")
    E_p: complex = Field(0j, description="Pump amplitude (statvolt/cm)")
    l: float = Field(..., gt=0, description="Idler cylinder length (cm)")
    theta_i: float = Field(0.0, description="Idler angle (rad)")

    @model_validator(mode="after")
    def _check_idler_decay(self) -> "OscillatorParams":
        if not math.isclose(self.gamma_i, C / self.l, rel_tol=1e-12):
            raise ValueError("gamma_i must equal c / l")
        return self

    @classmethod
    def build(cls, zeta_s: complex, zeta_i: complex, gamma_s: float, l: float,
              E_p: complex = 0j, theta_i: float = 0.0) -> "OscillatorParams":
        return cls(zeta_s=zeta_s, zeta_i=zeta_i, gamma_s=gamma_s, gamma_i=C / l,
                   E_p=E_p, l=l, theta_i=theta_i)


class Trajectory(BaseModel):
    """Sampled solution of the coupled-amplitude equations"""

    t: List[float]
    E_s: List[complex]
    E_i_conj: List[complex]
    eigenvalues: Tuple[complex, complex]
