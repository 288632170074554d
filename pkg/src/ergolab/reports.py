"""JSON and CSV report writing with provenance."""

import csv
import dataclasses
import json
import logging
import math
import pathlib
import time
from collections.abc import Callable, Iterable, Sequence
from fractions import Fraction
from importlib import metadata
from typing import Any

import numpy as np
from pydantic import BaseModel

from .measures import EmpiricalMeasure
from .systems import DynamicalSystem, SymbolicPoint, encode_point
from .tracing import TracingCertificate, certificate_to_model, verify_certificate

logger = logging.getLogger(__name__)


def package_version() -> str:
    try:
        return metadata.version("ergolab")
    except metadata.PackageNotFoundError:
        return "0+unknown"


def _number(value: float) -> Any:
    if math.isnan(value):
        return "nan"
    if math.isinf(value):
        return "inf" if value > 0 else "-inf"
    return value


def to_jsonable(obj: Any, sys: DynamicalSystem | None = None) -> Any:
    """
    Plain JSON data for report records.

    Certificates are embedded in their serialized form together with the outcome of an
    independent re-check. Systems are reduced to their names, empirical measures to their
    generating orbit spec, and points are encoded.
    """
    recurse: Callable[[Any], Any] = lambda value: to_jsonable(value, sys)  # noqa: E731
    if isinstance(obj, TracingCertificate):
        if sys is None:
            raise ValueError("Embedding a certificate needs its system")
        data = certificate_to_model(sys, obj).model_dump(mode="json")
        data["verified"] = verify_certificate(sys, obj).valid
        return data
    if isinstance(obj, EmpiricalMeasure):
        return {"base": encode_point(obj.base), "n": obj.n}
    if isinstance(obj, DynamicalSystem):
        return obj.name
    if isinstance(obj, (SymbolicPoint, Fraction)):
        return encode_point(obj)
    if isinstance(obj, BaseModel):
        return obj.model_dump(mode="json")
    if dataclasses.is_dataclass(obj) and not isinstance(obj, type):
        return {f.name: recurse(getattr(obj, f.name)) for f in dataclasses.fields(obj)}
    if isinstance(obj, dict):
        return {_key(k): recurse(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple, set, frozenset)):
        items = sorted(obj) if isinstance(obj, (set, frozenset)) else obj
        return [recurse(v) for v in items]
    if isinstance(obj, np.ndarray):
        return recurse(obj.tolist())
    if isinstance(obj, (bool, np.bool_)):
        return bool(obj)
    if isinstance(obj, (int, np.integer)):
        return int(obj)
    if isinstance(obj, (float, np.floating)):
        return _number(float(obj))
    return obj


def _key(key: Any) -> str:
    if isinstance(key, tuple):
        return ",".join(str(_key(k)) for k in key)
    if isinstance(key, float):
        return repr(key)
    return str(key)


def dump_json(data: Any) -> str:
    """Canonical text: sorted keys, two-space indentation, trailing newline."""
    return json.dumps(data, sort_keys=True, indent=2, ensure_ascii=False) + "\n"


def write_report(
        path: pathlib.Path,
        payload: dict[str, Any],
        provenance: dict[str, Any],
        started: float,
    ) -> pathlib.Path:
    """
    Write ``payload`` with its provenance to ``path`` and timing to ``<path>.meta.json``.

    The report itself holds no wall-clock data, so equal inputs give identical bytes.
    """
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(dump_json({"provenance": provenance, "result": payload}), encoding="utf-8")
    finished = time.time()
    meta = {
        "report": path.name,
        "started": time.strftime("%Y-%m-%dT%H:%M:%SZ", time.gmtime(started)),
        "elapsed_seconds": round(finished - started, 3),
    }
    path.with_name(path.stem + ".meta.json").write_text(dump_json(meta), encoding="utf-8")
    logger.info("Wrote %s", path)
    return path


def write_csv(path: pathlib.Path, columns: Sequence[str], rows: Iterable[Sequence[Any]]) -> pathlib.Path:
    """Plot-ready table with a header row."""
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", encoding="utf-8", newline="") as file:
        writer = csv.writer(file, lineterminator="\n")
        writer.writerow(columns)
        for row in rows:
            writer.writerow([_cell(v) for v in row])
    logger.info("Wrote %s", path)
    return path


def _cell(value: Any) -> Any:
    if isinstance(value, float):
        return repr(value)
    return value
