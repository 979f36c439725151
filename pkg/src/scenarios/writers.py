"""Deterministic CSV and JSON emitters.

Floats are written with 12 significant digits, ``.`` decimals and ``\\n`` line
endings so that identical scenarios produce byte-identical files.
"""

import json
import logging
import math
from pathlib import Path
from typing import Any

import numpy as np
import pandas as pd
from pydantic import BaseModel

logger = logging.getLogger(__name__)

FLOAT_FORMAT = "%.12g"
NS_PER_US = 1000.0


def _round(value: Any) -> Any:
    if isinstance(value, BaseModel):
        return _round(value.model_dump(mode="json", by_alias=True))
    if isinstance(value, dict):
        return {str(k): _round(v) for k, v in value.items()}
    if isinstance(value, list | tuple):
        return [_round(v) for v in value]
    if isinstance(value, np.generic):
        return _round(value.item())
    if isinstance(value, bool) or value is None:
        return value
    if isinstance(value, float):
        if not math.isfinite(value):
            return None
        rounded = float(f"{value:.12g}")
        return 0.0 if rounded == 0 else rounded
    return value


def dumps_json(payload: Any) -> str:
    return json.dumps(_round(payload), indent=2, ensure_ascii=False) + "\n"


def write_json(path: str | Path, payload: Any) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with path.open("w", encoding="utf-8", newline="\n") as handle:
        handle.write(dumps_json(payload))
    logger.info("Wrote %s", path)
    return path


def frame_from_columns(times_us: np.ndarray, columns: dict[str, np.ndarray]) -> pd.DataFrame:
    """Time series table with the time axis converted to ns."""
    data = {"t_ns": np.asarray(times_us) * NS_PER_US}
    data.update({name: np.asarray(values) for name, values in columns.items()})
    return pd.DataFrame(data)


def write_csv(path: str | Path, frame: pd.DataFrame) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    frame.to_csv(path, index=False, float_format=FLOAT_FORMAT, lineterminator="\n", encoding="utf-8")
    logger.info("Wrote %s (%d rows)", path, len(frame))
    return path
