from loguru import logger

from ._api import run, verify_all
from .config import ConfigFile, ExperimentConfig, load_config
from .roughpath import GridPath, RoughPathGrid, lift_piecewise_linear
from .skorohod import skorohod_1d, skorohod_orthant
from .solver import (
    OrthantVectorField,
    SolveResult,
    VectorField,
    solve_reflected,
    solve_reflected_orthant,
    solve_unreflected,
)

from . import errors
from . import roughpath
from . import sewing
from . import skorohod
from . import solver
from . import stores
from . import variation

logger.disable("rrde")

__all__ = [
    "run",
    "verify_all",
    "ConfigFile",
    "ExperimentConfig",
    "load_config",
    "GridPath",
    "RoughPathGrid",
    "lift_piecewise_linear",
    "skorohod_1d",
    "skorohod_orthant",
    "OrthantVectorField",
    "SolveResult",
    "VectorField",
    "solve_reflected",
    "solve_reflected_orthant",
    "solve_unreflected",
    "errors",
    "roughpath",
    "sewing",
    "skorohod",
    "solver",
    "stores",
    "variation",
]
