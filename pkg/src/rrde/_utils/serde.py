import json
from pathlib import Path
from typing import Any, Mapping, Sequence, Type, TypeVar, Union

import numpy as np
import pandas as pd
from pydantic import BaseModel

__all__ = ["json_loads", "json_dumps", "model_parse", "write_csv"]

M = TypeVar("M", bound=BaseModel)

CSV_FLOAT_FORMAT = "%.17g"


def json_loads(b: Union[str, bytes]) -> Any:
    d = json.loads(b)
    if isinstance(d, dict):
        return {k: v for k, v in d.items() if v is not None}
    return d


def _default(o: Any) -> Any:
    if isinstance(o, np.ndarray):
        return o.tolist()
    if isinstance(o, np.generic):
        return o.item()
    raise TypeError(f"Object of type {type(o).__name__} is not JSON serializable")


def json_dumps(obj: Any) -> str:
    return json.dumps(obj, default=_default, indent=2)


def model_parse(m: Type[M], d: object, **kwargs: Any) -> M:
    if isinstance(d, (str, bytes)):
        return m.model_validate_json(d, **kwargs)
    return m.model_validate(d, **kwargs)


def write_csv(path: Path, columns: Mapping[str, Sequence[float]]) -> Path:
    """Write named columns as a comma-separated table.

    Floats use 17 significant digits so values round-trip exactly; rows end in LF.
    """
    frame = pd.DataFrame({name: np.asarray(col) for name, col in columns.items()})
    path.parent.mkdir(parents=True, exist_ok=True)
    frame.to_csv(
        path,
        index=False,
        float_format=CSV_FLOAT_FORMAT,
        lineterminator="\n",
    )
    return path
