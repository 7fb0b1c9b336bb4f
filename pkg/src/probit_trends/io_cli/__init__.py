"""Config files, result files, SVG plots and the command-line front end."""
from .cli import build_parser, main, result_fit_summaries, write_result
from .config import ConfigError, format_config, load_config, parse_config
from .results import (
    COLUMNS,
    SCHEMA_VERSION,
    FitSummary,
    SchemaError,
    parse_records,
    read_fits,
    read_records,
    records_to_csv,
    write_fits,
    write_records,
)
from .svg import emit_svg, render_svg

__all__ = [
    "COLUMNS",
    "SCHEMA_VERSION",
    "ConfigError",
    "FitSummary",
    "SchemaError",
    "build_parser",
    "emit_svg",
    "format_config",
    "load_config",
    "main",
    "parse_config",
    "parse_records",
    "read_fits",
    "read_records",
    "records_to_csv",
    "render_svg",
    "result_fit_summaries",
    "write_fits",
    "write_records",
    "write_result",
]
