"""Scenario configuration files: ``key = value`` pairs under ``[section]`` headers.

Only ``[scenario] kind`` and ``[task] d`` are required; every other key falls
back to the per-scenario default of :meth:`ScenarioConfig.default`. List
values are comma separated, ``none`` clears an optional value.
"""
from __future__ import annotations

import configparser
import re
from dataclasses import replace
from pathlib import Path

from ..scenarios import SCENARIOS, ScenarioConfig


class ConfigError(ValueError):
    def __init__(self, message: str, field: str | None = None, line: int | None = None, path: str | None = None):
        self.field = field
        self.line = line
        self.path = path
        where = path or "<config>"
        if line is not None:
            where += f":{line}"
        prefix = f"{where}: " + (f"{field}: " if field else "")
        super().__init__(prefix + message)


def _int(s: str) -> int:
    return int(s)


def _opt_int(s: str):
    return None if s.lower() == "none" else int(s)


def _ints(s: str) -> tuple:
    return tuple(int(p) for p in s.split(",") if p.strip())


def _opt_ints(s: str):
    return None if s.lower() == "none" else _ints(s)


def _floats(s: str) -> tuple:
    return tuple(float(p) for p in s.split(",") if p.strip())


_SCHEMA = {
    "scenario": {"kind": str, "seed": _int, "transform": str, "workers": _int},
    "task": {"d": _int, "sigma": float, "mu_norm": float, "n_small": _int, "var_big": float, "var_small": float},
    "shift": {
        "alpha": float,
        "beta": float,
        "gamma": float,
        "covariance_shift": str,
        "s2": float,
        "kappa": float,
        "c": float,
        "target": _int,
        "aux_sizes": _ints,
        "sigma_aux_factor": float,
    },
    "data": {
        "n_train": _opt_int,
        "n_sub": _ints,
        "d_proj": _ints,
        "nonlinear_n_sub": _opt_ints,
        "nonlinear_d_proj": _opt_ints,
        "n_test": _int,
        "confidence": float,
        "bound_delta": float,
        "tol": float,
    },
    "learners": {
        "logistic_l2_C": _floats,
        "logistic_l1_C": _floats,
        "ridge_alpha": _floats,
        "knn_k": _ints,
        "forest_trees": _ints,
        "forest_max_depth": _opt_int,
    },
}
_REQUIRED = (("scenario", "kind"), ("task", "d"))


def _line_numbers(text: str) -> dict:
    """(section, key) -> 1-based line of its definition."""
    out, section = {}, None
    for i, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        m = re.match(r"^\[([^\]]+)\]", line)
        if m:
            section = m.group(1).strip()
            out[(section, None)] = i
            continue
        m = re.match(r"^([^=:#;\s][^=:]*?)\s*[=:]", line)
        if m and section is not None:
            out[(section, m.group(1).strip().lower())] = i
    return out


def parse_config(text: str, path: str | None = None) -> ScenarioConfig:
    parser = configparser.ConfigParser(interpolation=None, inline_comment_prefixes=("#", ";"))
    try:
        parser.read_string(text, source=path or "<config>")
    except configparser.MissingSectionHeaderError as err:
        raise ConfigError("expected a [section] header", line=err.lineno, path=path) from None
    except configparser.ParsingError as err:
        line = err.errors[0][0] if err.errors else None
        raise ConfigError("unparseable line", line=line, path=path) from None
    except configparser.Error as err:
        raise ConfigError(str(err).splitlines()[0], line=getattr(err, "lineno", None), path=path) from None
    lines = _line_numbers(text)

    for section in parser.sections():
        if section not in _SCHEMA:
            raise ConfigError(f"unknown section [{section}]", line=lines.get((section, None)), path=path)
        for key in parser[section]:
            if key not in {k.lower() for k in _SCHEMA[section]}:
                raise ConfigError("unknown key", field=f"{section}.{key}", line=lines.get((section, key)), path=path)
    for section, key in _REQUIRED:
        if not parser.has_option(section, key):
            raise ConfigError("required field is missing", field=f"{section}.{key}", path=path)

    values: dict = {}
    learner_values: dict = {}
    for section, fields in _SCHEMA.items():
        if not parser.has_section(section):
            continue
        for key, conv in fields.items():
            if not parser.has_option(section, key):
                continue
            raw = parser.get(section, key).strip()
            try:
                value = conv(raw)
            except ValueError:
                raise ConfigError(
                    f"cannot parse {raw!r} as {getattr(conv, '__name__', 'value').lstrip('_')}",
                    field=f"{section}.{key}",
                    line=lines.get((section, key.lower())),
                    path=path,
                ) from None
            (learner_values if section == "learners" else values)[key] = value

    kind = values.pop("kind")
    if kind not in SCENARIOS:
        raise ConfigError(
            f"unknown scenario {kind!r}; expected one of {', '.join(SCENARIOS)}",
            field="scenario.kind",
            line=lines.get(("scenario", "kind")),
            path=path,
        )
    try:
        base = ScenarioConfig.default(kind)
        if learner_values:
            values["learners"] = replace(base.learners, **learner_values)
        return ScenarioConfig.default(kind, **values)
    except (ValueError, TypeError) as err:
        raise ConfigError(str(err), path=path) from None


def load_config(path: str | Path) -> ScenarioConfig:
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as err:
        raise ConfigError(f"cannot read config: {err.strerror}", path=str(path)) from None
    return parse_config(text, str(path))


def format_config(config: ScenarioConfig) -> str:
    """Serialize a config so that :func:`parse_config` reproduces it."""

    def fmt(v):
        if v is None:
            return "none"
        if isinstance(v, tuple):
            return ", ".join(fmt(x) for x in v)
        if isinstance(v, float):
            return repr(v)
        if hasattr(v, "value"):
            return v.value
        return str(v)

    out = []
    for section, fields in _SCHEMA.items():
        out.append(f"[{section}]")
        source = config.learners if section == "learners" else config
        for key in fields:
            out.append(f"{key} = {fmt(getattr(source, key))}")
        out.append("")
    return "\n".join(out)
