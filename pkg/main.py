from fastapi import FastAPI

from app.core.config import TOOL_NAME, TOOL_VERSION
from app.routes import health
from app.routes import scan
from app.utils.logger import logger

app = FastAPI(
    title="Plasmon OPA API",
    description="""
    Parameter scans for THz plasmon parametric amplification in graphene and
    topological-insulator surface layers.

    ## Scans

    * **dispersion**: Surface-plasmon frequency, group velocity, damping and field normalization
    * **fig2**: Gain and phase-matched plasmon frequency against the idler angle
    * **fig3**: Threshold pump intensity against plasmon or interband damping
    * **chi2**: Second-order conductivity from the closed form or k-space quadrature
    * **flux**: Idler photon flux and detector occupation against pump intensity
    * **langevin**: Stochastic occupation profile along the amplifying line
    * **osc0d**: Coupled-amplitude trajectory of the lumped model
    """,
    version=TOOL_VERSION,
)

app.include_router(health.router, prefix="/health")
app.include_router(scan.router)

logger.info(f"{TOOL_NAME} {TOOL_VERSION} API ready")
