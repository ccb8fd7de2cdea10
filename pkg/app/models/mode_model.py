from pydantic import BaseModel, ConfigDict, Field


class PlasmonMode(BaseModel):
    """One TM surface-plasmon solution of the dispersion relation"""

    model_config = ConfigDict(frozen=True)

    omega_s: float = Field(..., gt=0, description="Real mode frequency (rad/s)")
    q_s: float = Field(..., gt=0, description="In-plane wave number (1/cm)")
    v_s: float = Field(..., gt=0, description="Group velocity (cm/s)")
    gamma_s: float = Field(0.0, ge=0, description="Amplitude decay rate (1/s)")
    E_s0_sq: float = Field(..., gt=0, description="Normalization |E_s0|^2")
    p1: complex = Field(..., description="Decay constant in medium 1 (1/cm)")
    p2: complex = Field(..., description="Decay constant in medium 2 (1/cm)")
    chi_derivative: float = Field(..., gt=0, description="Re d(chi_s)/d(omega) at the mode (cm s)")
