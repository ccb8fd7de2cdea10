import json
import math
import os
from typing import Any, Dict, List, Optional

import pandas as pd

from app.core.config import OUTPUT_DIR, TOOL_NAME, TOOL_VERSION
from app.models.scan_model import OutputFormat, ScanConfig


def provenance(command: str, config: ScanConfig, table: Optional[pd.DataFrame] = None) -> Dict[str, Any]:
    """Tool version, command and full resolved configuration of a run, plus any table summary"""
    meta = {
        "tool": TOOL_NAME,
        "version": TOOL_VERSION,
        "command": command,
        "seed": config.seed,
        "config": config.model_dump(mode="json"),
    }
    if table is not None and table.attrs:
        meta["summary"] = dict(table.attrs)
    return meta


def format_value(value: Any) -> str:
    """Shortest round-trip text for floats, lowercase booleans"""
    if hasattr(value, "item"):
        value = value.item()
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float):
        return repr(value)
    return str(value)


def _json_value(value: Any) -> Any:
    if hasattr(value, "item"):
        value = value.item()
    if isinstance(value, float) and not math.isfinite(value):
        return repr(value)
    return value


def render_csv(table: pd.DataFrame, meta: Dict[str, Any]) -> str:
    lines = [f"# {key}: {json.dumps(value, sort_keys=True)}" for key, value in meta.items()]
    lines.append(",".join(table.columns))
    for row in table.itertuples(index=False):
        lines.append(",".join(format_value(value) for value in row))
    return "\n".join(lines) + "\n"


def render_json(table: pd.DataFrame, meta: Dict[str, Any]) -> str:
    rows: List[Dict[str, Any]] = [
        {column: _json_value(value) for column, value in zip(table.columns, row)}
        for row in table.itertuples(index=False)
    ]
    return json.dumps({"provenance": meta, "columns": list(table.columns), "rows": rows}, indent=2) + "\n"


def render_table(table: pd.DataFrame, meta: Dict[str, Any], fmt: OutputFormat) -> str:
    if fmt is OutputFormat.JSON:
        return render_json(table, meta)
    return render_csv(table, meta)


def write_table(table: pd.DataFrame, meta: Dict[str, Any], fmt: OutputFormat, path: str) -> str:
    """Write the rendered table; relative paths resolve against OUTPUT_DIR"""
    path = os.path.join(OUTPUT_DIR, path)
    directory = os.path.dirname(path)
    if directory:
        os.makedirs(directory, exist_ok=True)
    with open(path, "w", encoding="utf-8", newline="") as handle:
        handle.write(render_table(table, meta, fmt))
    return path
