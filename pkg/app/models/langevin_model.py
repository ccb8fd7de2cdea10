from typing import List

from pydantic import BaseModel, ConfigDict, Field, model_validator

from app.core.config import DEFAULT_SEED


class LineSpec(BaseModel):
    """Discretized plasmon transport line and its ensemble"""

    model_config = ConfigDict(frozen=True)

    L: float = Field(..., gt=0, description="Line length (cm)")
    n_cells: int = Field(..., ge=2, description="Number of spatial cells")
    dt: float = Field(..., gt=0, description="Time step (s)")
    n_steps: int = Field(0, ge=0, description="Steps to run; 0 means ten transit times")
    n_traj: int = Field(1000, ge=100, description="Ensemble size")
    seed: int = Field(DEFAULT_SEED, ge=0, lt=2 ** 64, description="Root RNG seed")
    v_s: float = Field(..., gt=0, description="Group velocity (cm/s)")
    gamma_s: float = Field(..., gt=0, description="Amplitude damping (1/s)")
    ReG: float = Field(0.0, ge=0, description="Parametric gain (1/s)")
    n_thermal: float = Field(..., ge=0, description="Thermal plasmon occupation of the reservoir")
    n_thermal_boundary: float = Field(..., ge=0, description="Occupation injected at x = 0")
    noise: bool = Field(True, description="Include the reservoir noise")

    @model_validator(mode="after")
    def _check_step(self) -> "LineSpec":
        if self.dt * self.gamma_s >= 0.1:
            raise ValueError("time step must satisfy dt * gamma_s < 0.1")
        return self

    @property
    def dx(self) -> float:
        return self.L / self.n_cells

    @property
    def courant(self) -> float:
        return self.v_s * self.dt / self.dx

    @property
    def transit_steps(self) -> int:
        return int(round(self.L / (self.v_s * self.dt)))


class LangevinProfile(BaseModel):
    """Ensemble statistics of the simulated line"""

    x: List[float] = Field(..., description="Cell-center positions (cm)")
    mean_occupation: List[float] = Field(..., description="<a+a>(x)")
    stderr: List[float] = Field(..., description="Monte-Carlo standard error of the mean")
    stationarity: List[float] = Field(default_factory=list, description="Line-averaged occupation sampled once per transit")
    truncated: bool = Field(False, description="Run stopped early after overflow")
    steps_run: int = Field(0, ge=0)
