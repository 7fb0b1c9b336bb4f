"""records.csv and fit.json: the on-disk form of evaluation records and trend fits."""
from __future__ import annotations

import csv
import io
import json
import math
from dataclasses import asdict, dataclass
from pathlib import Path
from typing import Iterable

from ..numerics import TransformKind
from ..stats import EvalRecord, MetricEstimate, TrendFit, clopper_pearson

SCHEMA_VERSION = 1
COLUMNS = (
    "model_id",
    "family",
    "hyperparams",
    "acc_id",
    "acc_id_ci_lo",
    "acc_id_ci_hi",
    "acc_ood",
    "acc_ood_ci_lo",
    "acc_ood_ci_hi",
    "n_id",
    "n_ood",
    "status",
)
_REQUIRED = ("model_id", "acc_id", "acc_ood")
_HEADER_COMMENT = f"# probit-trends records schema={SCHEMA_VERSION}"


class SchemaError(ValueError):
    def __init__(self, message: str, row: int | None = None, column: str | None = None):
        self.row = row
        self.column = column
        where = []
        if row is not None:
            where.append(f"row {row}")
        if column is not None:
            where.append(f"column {column!r}")
        super().__init__((", ".join(where) + ": " if where else "") + message)


def format_probability(x: float) -> str:
    return f"{x:.9g}"


def _hp_value(v) -> str:
    return repr(v) if isinstance(v, float) else str(v)


def format_hyperparams(hp) -> str:
    """Canonical ``k=v;k=v`` string with keys sorted."""
    return ";".join(f"{k}={_hp_value(hp[k])}" for k in sorted(hp))


def parse_hyperparams(text: str) -> dict:
    out = {}
    for part in filter(None, (p.strip() for p in text.split(";"))):
        key, sep, raw = part.partition("=")
        if not sep:
            raise ValueError(f"expected key=value, got {part!r}")
        for conv in (int, float):
            try:
                out[key] = conv(raw)
                break
            except ValueError:
                continue
        else:
            out[key] = raw
    return out


def _metric_cells(m: MetricEstimate | None) -> tuple:
    if m is None:
        return ("", "", "")
    return tuple(format_probability(v) for v in (m.value, m.ci_lo, m.ci_hi))


def records_to_csv(records: Iterable[EvalRecord]) -> str:
    buf = io.StringIO()
    buf.write(_HEADER_COMMENT + "\n")
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(COLUMNS)
    for r in sorted(records, key=lambda r: r.model_id):
        n_id = r.metric_id.n if r.metric_id is not None else None
        n_ood = r.metric_ood.n if r.metric_ood is not None else None
        w.writerow(
            (r.model_id, r.family, format_hyperparams(r.hyperparams))
            + _metric_cells(r.metric_id)
            + _metric_cells(r.metric_ood)
            + ("" if n_id is None else n_id, "" if n_ood is None else n_ood, r.status)
        )
    return buf.getvalue()


def write_records(records: Iterable[EvalRecord], path: str | Path) -> None:
    Path(path).write_text(records_to_csv(records), encoding="utf-8")


def _prob(row: dict, col: str, line: int) -> float | None:
    raw = (row.get(col) or "").strip()
    if not raw:
        return None
    try:
        v = float(raw)
    except ValueError:
        raise SchemaError(f"not a number: {raw!r}", line, col) from None
    if not 0.0 <= v <= 1.0:
        raise SchemaError(f"probability outside [0, 1]: {raw}", line, col)
    return v


def _count(row: dict, col: str, line: int) -> int | None:
    raw = (row.get(col) or "").strip()
    if not raw:
        return None
    try:
        n = int(raw)
    except ValueError:
        raise SchemaError(f"not an integer: {raw!r}", line, col) from None
    if n < 1:
        raise SchemaError("sample count must be >= 1", line, col)
    return n


def _metric(row: dict, prefix: str, n_col: str, line: int, confidence: float) -> MetricEstimate | None:
    value = _prob(row, prefix, line)
    if value is None:
        return None
    n = _count(row, n_col, line)
    lo, hi = _prob(row, prefix + "_ci_lo", line), _prob(row, prefix + "_ci_hi", line)
    if (lo is None) != (hi is None):
        raise SchemaError("both interval ends or neither", line, prefix + ("_ci_lo" if lo is None else "_ci_hi"))
    if lo is None and n is not None:
        k = round(value * n)
        if abs(k - value * n) > 1e-6 * n:
            raise SchemaError(f"accuracy {value} is not a multiple of 1/{n}", line, prefix)
        lo, hi = clopper_pearson(k, n, confidence)
    try:
        return MetricEstimate(value, n, lo, hi)
    except ValueError as err:
        raise SchemaError(str(err), line, prefix) from None


def parse_records(text: str, confidence: float = 0.95) -> list[EvalRecord]:
    """Parse a records CSV. Only model_id, acc_id and acc_ood are required;
    missing intervals are computed from n, or left exact when n is absent."""
    lines = text.splitlines()
    body = [(i, l) for i, l in enumerate(lines, start=1) if l.strip() and not l.lstrip().startswith("#")]
    if not body:
        raise SchemaError("no header row")
    reader = csv.reader([l for _, l in body])
    header = [h.strip() for h in next(reader)]
    for col in _REQUIRED:
        if col not in header:
            raise SchemaError("required column missing", body[0][0], col)
    unknown = [h for h in header if h not in COLUMNS]
    if unknown:
        raise SchemaError("unknown column", body[0][0], unknown[0])
    records, seen = [], set()
    for (line, _), cells in zip(body[1:], reader):
        if len(cells) != len(header):
            raise SchemaError(f"expected {len(header)} cells, got {len(cells)}", line)
        row = dict(zip(header, cells))
        model_id = row["model_id"].strip()
        if not model_id:
            raise SchemaError("empty model id", line, "model_id")
        if model_id in seen:
            raise SchemaError(f"duplicate model id {model_id!r}", line, "model_id")
        seen.add(model_id)
        status = (row.get("status") or "ok").strip() or "ok"
        try:
            hp = parse_hyperparams(row.get("hyperparams", ""))
        except ValueError as err:
            raise SchemaError(str(err), line, "hyperparams") from None
        m_id = _metric(row, "acc_id", "n_id", line, confidence)
        m_ood = _metric(row, "acc_ood", "n_ood", line, confidence)
        if status == "ok" and (m_id is None or m_ood is None):
            raise SchemaError("accuracy missing", line, "acc_id" if m_id is None else "acc_ood")
        records.append(EvalRecord(model_id, (row.get("family") or "").strip(), hp, m_id, m_ood, status))
    return records


def read_records(path: str | Path, confidence: float = 0.95) -> list[EvalRecord]:
    return parse_records(Path(path).read_text(encoding="utf-8"), confidence)


@dataclass(frozen=True)
class FitSummary:
    transform: str
    slope: float
    intercept: float
    r_squared: float
    n_points: int
    theoretical_slope: float | None = None
    theorem_bound: float | None = None
    scenario: str | None = None
    seed: int | None = None

    @classmethod
    def from_fit(cls, fit: TrendFit, **extra) -> "FitSummary":
        return cls(fit.transform.value, fit.slope, fit.intercept, fit.r_squared, fit.n_points, **extra)

    def to_fit(self) -> TrendFit:
        return TrendFit(TransformKind.parse(self.transform), self.slope, self.intercept, self.r_squared, self.n_points)


def _jsonable(x):
    if isinstance(x, dict):
        return {str(k): _jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_jsonable(v) for v in x]
    if isinstance(x, float):
        return x if math.isfinite(x) else None
    if isinstance(x, (bool, int, str)) or x is None:
        return x
    if hasattr(x, "item"):
        return _jsonable(x.item())
    return str(x)


def fits_to_json(fits: dict, **meta) -> str:
    doc = {"schema": SCHEMA_VERSION, **_jsonable(meta), "fits": {k: asdict(v) for k, v in fits.items()}}
    return json.dumps(doc, indent=2, sort_keys=False) + "\n"


def write_fits(fits: dict, path: str | Path, **meta) -> None:
    Path(path).write_text(fits_to_json(fits, **meta), encoding="utf-8")


def read_fits(path: str | Path) -> dict:
    doc = json.loads(Path(path).read_text(encoding="utf-8"))
    return {k: FitSummary(**v) for k, v in doc["fits"].items()}
