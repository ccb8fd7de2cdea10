import json
from typing import Any, Dict

from fastapi import APIRouter, Body, HTTPException

from app.core.exceptions import ConfigError, NumericalError, PermutationRefusedError
from app.models.scan_model import ScanConfig
from app.services.scan_service import scan_service
from app.utils.logger import logger
from app.utils.output_utils import provenance, render_json

router = APIRouter(
    prefix="/scans",
    tags=["Scans"],
    responses={404: {"description": "Not found"}},
)


@router.get("/")
async def list_scans():
    return {"commands": list(scan_service.commands)}


@router.post("/{command}")
def run_scan(command: str, config: ScanConfig = Body(...)) -> Dict[str, Any]:
    """
    Run one parameter scan and return the same rows the command line writes.

    Path parameter:
    - **command**: dispersion, fig2, fig3, chi2, flux, langevin or osc0d

    The body is a full or partial run configuration; omitted keys take their defaults
    and an empty object runs the figure defaults.
    """
    if command not in scan_service.commands:
        raise HTTPException(status_code=404, detail=f"Unknown scan {command!r}")
    try:
        table = scan_service.run(command, config)
    except (ConfigError, PermutationRefusedError) as e:
        logger.warning(f"Rejected {command} scan: {e}")
        raise HTTPException(status_code=400, detail=str(e))
    except NumericalError as e:
        logger.error(f"{command} scan failed: {e}")
        raise HTTPException(status_code=422, detail=str(e))
    return json.loads(render_json(table, provenance(command, config, table)))
