import math

from pydantic import BaseModel, ConfigDict, Field, field_validator

from app.core.constants import HBAR


class MaterialParams(BaseModel):
    """A strongly degenerate 2D Dirac material (graphene or a TI surface)"""

    model_config = ConfigDict(frozen=True)

    E_F: float = Field(..., gt=0, description="Fermi energy (erg)")
    v_F: float = Field(..., gt=0, description="Fermi velocity (cm/s)")
    g: int = Field(4, description="Spin x valley degeneracy")
    gamma_pol: float = Field(1e12, ge=0, description="Interband polarization decay rate (1/s)")
    s_F: int = Field(1, description="Band sign of the Fermi level, +1 conduction / -1 valence")
    n_layers: int = Field(1, ge=1, description="Number of uncoupled layers")

    @field_validator("g")
    @classmethod
    def _check_g(cls, value: int) -> int:
        if value not in (2, 4):
            raise ValueError("degeneracy g must be 2 or 4")
        return value

    @field_validator("s_F")
    @classmethod
    def _check_sign(cls, value: int) -> int:
        if value not in (1, -1):
            raise ValueError("s_F must be +1 or -1")
        return value

    @property
    def k_F(self) -> float:
        """Fermi wave number (1/cm)"""
        return self.E_F / (HBAR * self.v_F)

    @property
    def omega_F(self) -> float:
        """v_F k_F = E_F / hbar (rad/s)"""
        return self.E_F / HBAR

    @property
    def scale(self) -> float:
        """Multiplier applied to closed forms written for g = 4, one layer"""
        return self.n_layers * self.g / 4.0


class Geometry(BaseModel):
    """Two half-spaces around the layer plus the pump/idler beams"""

    model_config = ConfigDict(frozen=True)

    n1: float = Field(1.0, ge=1.0, description="Refractive index of the incidence half-space")
    n2: float = Field(2.0, ge=1.0, description="Refractive index of the substrate")
    theta_1p: float = Field(math.pi / 4, description="Pump incidence angle in medium 1 (rad)")
    theta_1i: float = Field(math.radians(20.0), description="Idler angle in medium 1, signed (rad)")
    omega_p: float = Field(..., gt=0, description="Pump angular frequency (rad/s)")
    I_p: float = Field(1e16, ge=0, description="Pump intensity (erg s^-1 cm^-2)")

    @field_validator("theta_1p", "theta_1i")
    @classmethod
    def _check_angle(cls, value: float) -> float:
        if abs(value) >= math.pi / 2:
            raise ValueError("incidence angles must satisfy |theta| < pi/2")
        return value

    @property
    def eps1(self) -> float:
        return self.n1 ** 2

    @property
    def eps2(self) -> float:
        return self.n2 ** 2


class DetectionGeometry(BaseModel):
    """Detector-side quantities for flux and occupation estimates"""

    model_config = ConfigDict(frozen=True)

    L_x: float = Field(0.1, gt=0, description="Collection length (cm)")
    L_y: float = Field(0.1, gt=0, description="Aperture width (cm)")
    delta_omega: float = Field(2 * math.pi * 1e10, gt=0, description="Spectral interval (rad/s)")
    A_D: float = Field(0.01, gt=0, description="Detector area (cm^2)")
    T: float = Field(300.0, gt=0, description="Reservoir temperature (K)")
