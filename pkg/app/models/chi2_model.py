import math
from typing import Optional, Tuple

from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator

AXES = ("x", "y")


class Broadening(BaseModel):
    """Rates added to omega1, omega2 and the mixing frequency"""

    model_config = ConfigDict(frozen=True)

    gamma1: float = Field(0.0, ge=0, description="Broadening of omega1 (1/s)")
    gamma2: float = Field(0.0, ge=0, description="Broadening of omega2 (1/s)")
    gamma3: float = Field(0.0, ge=0, description="Broadening of omega1 + omega2 (1/s)")

    @classmethod
    def uniform(cls, gamma: float) -> "Broadening":
        return cls(gamma1=gamma, gamma2=gamma, gamma3=gamma)

    @property
    def is_lossless(self) -> bool:
        return self.gamma1 == 0 and self.gamma2 == 0 and self.gamma3 == 0


class Chi2Component(BaseModel):
    """A second-order susceptibility value tagged with its arguments"""

    model_config = ConfigDict(frozen=True)

    indices: Tuple[str, str, str] = Field(("x", "y", "y"), description="Output, field-1 and field-2 polarizations")
    omega1: float = Field(..., description="First signed frequency (rad/s)")
    omega2: float = Field(..., description="Second signed frequency (rad/s)")
    q1: float = Field(..., description="First signed in-plane wave number along x (1/cm)")
    q2: float = Field(..., description="Second signed in-plane wave number along x (1/cm)")
    value: complex = Field(0j, description="Susceptibility at omega1 + omega2")
    broadening: Broadening = Field(default_factory=Broadening)

    @field_validator("indices")
    @classmethod
    def _check_indices(cls, value: Tuple[str, str, str]) -> Tuple[str, str, str]:
        if any(axis not in AXES for axis in value):
            raise ValueError("tensor indices must be drawn from {x, y}")
        return value

    @field_validator("value")
    @classmethod
    def _check_value(cls, value: complex) -> complex:
        if not (math.isfinite(value.real) and math.isfinite(value.imag)):
            raise ValueError("susceptibility value must be finite")
        return value

    @property
    def omega3(self) -> float:
        return self.omega1 + self.omega2

    @property
    def q3(self) -> float:
        return self.q1 + self.q2


class Polarization(BaseModel):
    """In-plane unit polarization vector"""

    model_config = ConfigDict(frozen=True)

    eta_x: complex = Field(0j)
    eta_y: complex = Field(0j)

    @model_validator(mode="after")
    def _check_norm(self) -> "Polarization":
        norm = abs(self.eta_x) ** 2 + abs(self.eta_y) ** 2
        if abs(norm - 1.0) > 1e-9:
            raise ValueError(f"polarization must be a unit vector, got |eta|^2 = {norm}")
        return self

    @classmethod
    def along(cls, axis: str) -> "Polarization":
        if axis == "x":
            return cls(eta_x=1.0)
        if axis == "y":
            return cls(eta_y=1.0)
        raise ValueError(f"unknown axis {axis!r}")


class KGridSpec(BaseModel):
    """Polar k-space quadrature grid for the brute-force current integral"""

    model_config = ConfigDict(frozen=True)

    n_radial: int = Field(128, ge=64, description="Gauss-Legendre nodes along |k| per angle")
    n_angular: int = Field(256, ge=64, description="Gauss-Legendre nodes in the polar angle")
    k_max: float = Field(4.0, gt=1.0, description="Radial cutoff in units of k_F")
    refine_width: float = Field(0.01, gt=0, description="Relative half-width of refinement bands around step and pole radii")
    eta: float = Field(..., gt=0, description="Broadening added to every frequency denominator (1/s)")

    def doubled(self) -> "KGridSpec":
        return self.model_copy(update={"n_radial": 2 * self.n_radial, "n_angular": 2 * self.n_angular})


class ConvergenceRow(BaseModel):
    """One line of a grid refinement study"""

    model_config = ConfigDict(frozen=True)

    grid: KGridSpec
    value: complex
    delta: Optional[float] = Field(None, description="|value - previous value|, None for the first grid")
