from pathlib import Path
from typing import Callable, Dict

import numpy as np
import pandas as pd
from loguru import logger

from ..._types.generics import FloatArray
from ..._utils.rng import resolve_seed
from ..._utils.serde import json_loads
from ...errors import ConfigError, InvalidInputError
from ...roughpath import GridPath, brownian_driver

__all__ = [
    "BUILTIN_DRIVERS",
    "function_driver",
    "brownian_driver_from_spec",
    "file_driver",
]

Profile = Callable[[FloatArray], FloatArray]

BUILTIN_DRIVERS: Dict[str, Profile] = {
    "identity": lambda t: t,
    "ramp-down": lambda t: 1.0 - t,
    "parabola": lambda t: 4.0 * (t - 0.5) ** 2 - 0.5,
    "sine": lambda t: np.sin(2.0 * np.pi * t),
}
"""Scalar profiles on [0, horizon], sampled on a uniform grid"""


def function_driver(
    name: str,
    n_steps: int,
    horizon: float = 1.0,
    scale: float = 1.0,
    offset: float = 0.0,
) -> GridPath:
    """offset + scale * profile(t) for a builtin profile"""
    try:
        profile = BUILTIN_DRIVERS[name]
    except KeyError:
        raise InvalidInputError(
            f"unknown driver {name!r}, expected one of {', '.join(BUILTIN_DRIVERS)}"
        ) from None
    if n_steps < 1:
        raise InvalidInputError("n_steps must be at least 1")
    times = np.linspace(0.0, horizon, n_steps + 1)
    return GridPath(times, offset + scale * profile(times))


def brownian_driver_from_spec(n_steps: int, dim: int, seed: int) -> GridPath:
    seed = resolve_seed(seed)
    logger.info("brownian driver n={} dim={} seed={}", n_steps, dim, seed)
    return brownian_driver(n_steps, dim, seed)


def file_driver(path: Path) -> GridPath:
    """Load a path from a JSON path document or a CSV whose first column is time"""
    if not path.exists():
        raise ConfigError(f"driver file {path} does not exist")
    if path.suffix == ".json":
        doc = json_loads(path.read_text())
        return GridPath.from_document(doc)
    frame = pd.read_csv(path)
    if frame.shape[1] < 2:
        raise ConfigError(f"{path} needs a time column and at least one value column")
    return GridPath(frame.iloc[:, 0].to_numpy(), frame.iloc[:, 1:].to_numpy())
