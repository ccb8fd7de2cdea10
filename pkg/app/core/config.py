import os
from dotenv import load_dotenv

load_dotenv()

TOOL_NAME = "plasmon-opa"
TOOL_VERSION = "0.3.0"

LOG_LEVEL = os.getenv("PLASMON_OPA_LOG_LEVEL", "INFO")
OUTPUT_DIR = os.getenv("PLASMON_OPA_OUTPUT_DIR", os.getcwd())

# k-space oracle defaults
ORACLE_N_RADIAL = int(os.getenv("PLASMON_OPA_N_RADIAL", "128"))
ORACLE_N_ANGULAR = int(os.getenv("PLASMON_OPA_N_ANGULAR", "256"))
ORACLE_K_MAX = float(os.getenv("PLASMON_OPA_K_MAX", "4.0"))

# Langevin ensembles
DEFAULT_SEED = int(os.getenv("PLASMON_OPA_SEED", "20240917"))
LANGEVIN_BLOCK_SIZE = int(os.getenv("PLASMON_OPA_LANGEVIN_BLOCK", "256"))

# Dispersion solver
DISPERSION_SCAN_POINTS = 200
DISPERSION_GROUP_VELOCITY_STEP = 1e-5
NORMALIZATION_DERIVATIVE_STEP = 1e-6

# Phase matching
PHASE_MATCH_SCAN_POINTS = 400
PHASE_MATCH_RTOL = 1e-10

# Series switch for (e^x - 1)/x style factors
SERIES_THRESHOLD = 1e-4
