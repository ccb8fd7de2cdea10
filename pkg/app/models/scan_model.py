from enum import Enum
from typing import Optional

from pydantic import BaseModel, ConfigDict, Field, model_validator

from app.core.config import DEFAULT_SEED, ORACLE_K_MAX, ORACLE_N_ANGULAR, ORACLE_N_RADIAL
from app.models.gain_model import Chi2Method


class ScanVariable(str, Enum):
    THETA_1I = "theta_1i"
    GAMMA_S = "gamma_s"
    Q_S = "q_s"
    I_P = "I_p"
    GAMMA = "gamma"


class OutputFormat(str, Enum):
    CSV = "csv"
    JSON = "json"


class MaterialPreset(str, Enum):
    GRAPHENE = "graphene"
    TI = "ti"
    CUSTOM = "custom"


class ScanConfig(BaseModel):
    """
    Resolved run configuration in user-facing units.

    Angles are in degrees, frequencies in THz (cyclic), intensities in
    GW/cm^2 and energies in meV. Scan ranges are in the units of the scanned
    variable; q_s ranges are in units of k_F and are log-spaced.
    """

    model_config = ConfigDict(frozen=True, extra="forbid")

    # material
    material: MaterialPreset = MaterialPreset.GRAPHENE
    E_F_meV: Optional[float] = Field(None, gt=0, description="Fermi energy; defaults to the pump resonance hbar*omega_p/2")
    v_F: Optional[float] = Field(None, gt=0, description="Fermi velocity override (cm/s)")
    g: Optional[int] = Field(None, description="Degeneracy override")
    n_layers: int = Field(1, ge=1)
    s_F: int = Field(1)
    gamma: float = Field(1e12, gt=0, description="Interband polarization decay rate (1/s)")
    gamma_c: float = Field(2e11, ge=0, description="Collision broadening entering Im chi_s (1/s)")
    gamma_s: float = Field(1e11, gt=0, description="Plasmon damping used for thresholds (1/s)")

    # geometry
    wavelength_um: float = Field(10.0, gt=0)
    n1: float = Field(1.0, ge=1.0)
    n2: float = Field(2.0, ge=1.0)
    theta_1p_deg: float = Field(45.0, gt=-90.0, lt=90.0)
    theta_1i_deg: float = Field(20.0, gt=-90.0, lt=90.0)
    I_p_GW: float = Field(1.0, ge=0)

    # detection
    L_x: float = Field(0.1, gt=0, description="Collection length (cm)")
    L_y: float = Field(0.1, gt=0, description="Aperture width (cm)")
    delta_f_THz: float = Field(0.01, gt=0, description="Detected bandwidth")
    A_D: float = Field(0.01, gt=0, description="Detector area (cm^2)")
    T: float = Field(300.0, gt=0, description="Reservoir temperature (K)")

    # scan
    variable: Optional[ScanVariable] = None
    start: Optional[float] = None
    stop: Optional[float] = None
    count: Optional[int] = Field(None, ge=2)
    method: Optional[Chi2Method] = Field(None, description="chi2 path; automatic for gain scans, closed for the chi2 table")

    # chi2 oracle
    chi2_f1_THz: float = Field(10.0, description="omega1 / 2 pi for the chi2 table")
    chi2_f2_THz: float = Field(6.0, description="omega2 / 2 pi for the chi2 table")
    chi2_q_ratio: float = Field(-0.5, description="q2 / q1 for the chi2 table")
    n_radial: int = Field(ORACLE_N_RADIAL, ge=64)
    n_angular: int = Field(ORACLE_N_ANGULAR, ge=64)
    k_max: float = Field(ORACLE_K_MAX, gt=1.0)
    eta: Optional[float] = Field(None, gt=0, description="Oracle broadening (1/s); defaults to gamma")

    # langevin
    seed: int = Field(DEFAULT_SEED, ge=0)
    n_cells: int = Field(100, ge=2)
    n_traj: int = Field(1000, ge=100)
    courant: float = Field(1.0, gt=0, le=1.0)
    line_lengths: float = Field(5.0, gt=0, description="Line length in units of v_s / gamma_s")
    ReG: float = Field(0.0, ge=0, description="Gain rate for the simulated line (1/s)")

    # 0D oscillator
    osc_l: float = Field(0.1, gt=0, description="Idler cylinder length (cm)")
    osc_pump_ratio: float = Field(2.0, ge=0, description="|E_p|^2 relative to the 0D threshold")
    osc_decay_times: float = Field(10.0, gt=0)
    osc_steps: int = Field(2000, ge=10)

    # output
    out: Optional[str] = None
    format: OutputFormat = OutputFormat.CSV

    @model_validator(mode="after")
    def _check_scan(self) -> "ScanConfig":
        if self.s_F not in (1, -1):
            raise ValueError("s_F must be +1 or -1")
        if self.g is not None and self.g not in (2, 4):
            raise ValueError("g must be 2 or 4")
        if (self.start is None) != (self.stop is None):
            raise ValueError("start and stop must be given together")
        if self.start is not None and self.start == self.stop:
            raise ValueError("scan range must be nonempty")
        return self
