import sys
from typing import Dict, List, Optional

import click

from app.core.config import TOOL_NAME, TOOL_VERSION
from app.core.exceptions import ConfigError, PlasmonOpaError
from app.models.scan_model import OutputFormat
from app.services.scan_service import scan_service
from app.utils.config_file import read_config_file, resolve_config
from app.utils.logger import logger
from app.utils.output_utils import provenance, render_table, write_table

EXTRA_ARGS = {"ignore_unknown_options": True, "allow_extra_args": True}


def parse_overrides(args: List[str]) -> Dict[str, str]:
    """
    Turn trailing `--key value` or `--key=value` pairs into a mapping.

    Dashes in keys are accepted as underscores.
    """
    overrides: Dict[str, str] = {}
    index = 0
    while index < len(args):
        token = args[index]
        if not token.startswith("--") or len(token) == 2:
            raise ConfigError(f"Unexpected argument {token!r}")
        key = token[2:]
        if "=" in key:
            key, value = key.split("=", 1)
            index += 1
        elif index + 1 < len(args):
            value = args[index + 1]
            index += 2
        else:
            raise ConfigError(f"Missing value for --{key}")
        overrides[key.replace("-", "_")] = value
    return overrides


def run_command(command: str, config_path: Optional[str], out: Optional[str],
                fmt: Optional[str], extra: List[str]) -> None:
    overrides = parse_overrides(extra)
    if out is not None:
        overrides["out"] = out
    if fmt is not None:
        overrides["format"] = fmt
    file_values = read_config_file(config_path) if config_path else {}
    config = resolve_config(file_values, overrides)

    table = scan_service.run(command, config)
    meta = provenance(command, config, table)
    if config.out:
        path = write_table(table, meta, config.format, config.out)
        logger.info(f"Wrote {len(table)} rows to {path}")
    else:
        click.echo(render_table(table, meta, config.format), nl=False)


def make_command(name: str, help_text: str) -> click.Command:
    @click.command(name=name, help=help_text, context_settings=EXTRA_ARGS)
    @click.option("--config", "config_path", type=click.Path(), default=None, help="key = value file with a [run] section")
    @click.option("--out", default=None, help="Output path; standard output when omitted")
    @click.option("--format", "fmt", type=click.Choice([f.value for f in OutputFormat]), default=None)
    @click.pass_context
    def command(ctx: click.Context, config_path: Optional[str], out: Optional[str], fmt: Optional[str]) -> None:
        try:
            run_command(name, config_path, out, fmt, list(ctx.args))
        except PlasmonOpaError as e:
            logger.error(f"{name} failed: {e}")
            click.echo(f"error: {e}", err=True)
            sys.exit(e.exit_code)

    return command


@click.group(name=TOOL_NAME)
@click.version_option(TOOL_VERSION, prog_name=TOOL_NAME)
def cli() -> None:
    """Plasmon parametric-instability scans for 2D Dirac layers"""


for _name, _handler in scan_service.commands.items():
    cli.add_command(make_command(_name, (_handler.__doc__ or "").strip()))


if __name__ == "__main__":
    cli()
