from enum import Enum
from typing import Optional

from pydantic import BaseModel, ConfigDict, Field

from app.models.material_model import Geometry, MaterialParams
from app.models.mode_model import PlasmonMode


class Chi2Method(str, Enum):
    """Source of the chi2 product entering the gain"""
    RESONANT = "resonant"
    CLOSED = "closed"
    NUMERIC = "numeric"


class OperatingPoint(BaseModel):
    """A phase-matched pump / idler / plasmon triple"""

    model_config = ConfigDict(frozen=True)

    geom: Geometry
    mat: MaterialParams
    mode: PlasmonMode
    omega_i: float = Field(..., gt=0, description="Idler frequency (rad/s)")
    q_p: float = Field(..., description="Pump in-plane wave number (1/cm)")
    q_i: float = Field(..., description="Idler in-plane wave number, signed (1/cm)")
    q_s: float = Field(..., description="Plasmon in-plane wave number q_p - q_i (1/cm)")
    theta_2p: float = Field(..., description="Refracted pump angle (rad)")
    theta_2i: float = Field(..., description="Refracted idler angle (rad)")
    T_p: float = Field(..., description="Fresnel transmission of the pump")
    T_i: float = Field(..., description="Fresnel transmission of the idler")
    Gamma_coupling: complex = Field(0j, description="Coupling constant of the idler to the plasmon")
    chi2_s: complex = Field(0j, description="chi2_xyy at the plasmon frequency")
    chi2_i: complex = Field(0j, description="chi2_yyx at the idler frequency")
    method: Chi2Method = Chi2Method.RESONANT

    @property
    def omega_p(self) -> float:
        return self.geom.omega_p

    @property
    def omega_s(self) -> float:
        return self.mode.omega_s


class GainReport(BaseModel):
    """Expectation-level amplifier figures for one operating point"""

    model_config = ConfigDict(frozen=True)

    G: complex = Field(..., description="Gain rate (1/s)")
    I_threshold: Optional[float] = Field(None, gt=0, description="Pump intensity with Re G = gamma_s, None if no instability")
    amplification: float = Field(..., ge=0, description="<a+a>/<a+a>_T at x = L_x")
    n_detector: float = Field(..., ge=0, description="Detector-averaged plasmon occupation")
    flux_idler: float = Field(..., ge=0, description="Idler photons per second on the detector")
    Xi: float = Field(..., description="Exponent 2(Re G - gamma_s) L_x / v_s")
    omega_s: float = Field(..., gt=0, description="Phase-matched plasmon frequency (rad/s)")
    method: Chi2Method = Chi2Method.RESONANT
    alternate_G: Optional[complex] = Field(None, description="Gain from the other chi2 path when the two differ by more than 25%")
