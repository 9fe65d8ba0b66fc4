from typing import Dict, Type

from ._base import Experiment
from .battery import InvariantBattery
from .convergence import ExponentialConvergence
from .gronwall import GronwallExperiment
from .lift_check import LiftCheck
from .skorohod import SkorohodExperiment
from .solve import SolveExperiment
from .stability import StabilityExperiment
from .wong_zakai import WongZakaiExperiment
from ..config import ExperimentConfig
from ..errors import ConfigError

__all__ = ["EXPERIMENTS", "Experiment", "InvariantBattery", "experiment_for"]

EXPERIMENTS: Dict[str, Type[Experiment]] = {
    cls.name: cls
    for cls in (
        LiftCheck,
        SkorohodExperiment,
        SolveExperiment,
        ExponentialConvergence,
        WongZakaiExperiment,
        StabilityExperiment,
        GronwallExperiment,
    )
}


def experiment_for(config: ExperimentConfig) -> Experiment:
    try:
        return EXPERIMENTS[config.experiment](config)
    except KeyError:
        raise ConfigError(
            f"unknown experiment {config.experiment!r}, "
            f"expected one of {', '.join(EXPERIMENTS)}"
        ) from None
