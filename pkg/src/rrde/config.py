"""Experiment configuration documents.

A config file holds either one experiment object or
`{"experiments": [...], "max_workers": k}`. Unknown experiment, driver and
field names fail validation with the full list of accepted values.
"""

from pathlib import Path
from typing import Dict, List, Literal, Optional, Union

from pydantic import (
    BaseModel,
    ConfigDict,
    Field,
    ValidationError,
    field_validator,
    model_validator,
)
from typing_extensions import Annotated

from ._constants import (
    EXPONENTIAL_ERROR,
    IDENTITY_TOL,
    LIPSCHITZ_CONSTANT,
    MIN_ORDER,
    REMAINDER_DECAY,
    SKOROHOD_CONSTANT,
    STABILITY_BAND,
    STEP_TOL,
)
from ._utils.serde import json_loads, model_parse
from .errors import ConfigError

__all__ = [
    "ExperimentName",
    "BrownianDriverSpec",
    "FunctionDriverSpec",
    "FileDriverSpec",
    "DriverSpec",
    "FieldSpec",
    "Tolerances",
    "GronwallSpec",
    "ExperimentConfig",
    "ConfigFile",
    "load_config",
    "parse_config",
]

ExperimentName = Literal[
    "lift-check",
    "skorohod",
    "solve",
    "exponential-convergence",
    "wong-zakai",
    "stability",
    "gronwall",
]


class _Spec(BaseModel):
    model_config = ConfigDict(extra="forbid")


class BrownianDriverSpec(_Spec):
    kind: Literal["brownian"]
    n: int = Field(1024, ge=1)
    dim: int = Field(1, ge=1)
    seed: int = 0


class FunctionDriverSpec(_Spec):
    kind: Literal["function"]
    name: Literal["identity", "ramp-down", "parabola", "sine"]
    n: int = Field(256, ge=1)
    horizon: float = Field(1.0, gt=0.0)
    scale: float = 1.0
    offset: float = 0.0


class FileDriverSpec(_Spec):
    kind: Literal["file"]
    path: Path


DriverSpec = Annotated[
    Union[BrownianDriverSpec, FunctionDriverSpec, FileDriverSpec],
    Field(discriminator="kind"),
]


class FieldSpec(_Spec):
    name: Literal["constant", "affine", "bounded", "trig", "signed-square"] = "affine"
    params: Dict[str, float] = Field(default_factory=dict)
    dim: int = Field(1, ge=1)
    """Values above 1 solve on the orthant with the decoupled field"""


class Tolerances(_Spec):
    identity: float = Field(IDENTITY_TOL, gt=0.0)
    step: float = Field(STEP_TOL, gt=0.0)
    skorohod_constant: float = Field(SKOROHOD_CONSTANT, gt=0.0)
    lipschitz_constant: float = Field(LIPSCHITZ_CONSTANT, gt=0.0)
    min_order: float = MIN_ORDER
    stability_band: float = Field(STABILITY_BAND, gt=0.0)
    remainder_decay: float = Field(REMAINDER_DECAY, gt=0.0)
    exponential_error: float = Field(EXPONENTIAL_ERROR, gt=0.0)


class GronwallSpec(_Spec):
    C: float = Field(1.0, gt=0.0)
    L: float = Field(1.0, gt=0.0)
    kappa: float = Field(1.0, ge=1.0)
    instances: int = Field(50, ge=1)


class ExperimentConfig(_Spec):
    experiment: ExperimentName
    label: Optional[str] = None
    """Output sub-directory; defaults to the experiment name"""
    driver: DriverSpec = Field(
        default_factory=lambda: FunctionDriverSpec(kind="function", name="identity")
    )
    vf: FieldSpec = Field(default_factory=FieldSpec)
    a: Union[float, List[float]] = 1.0
    p: float = 2.5
    lift: Literal["piecewise-linear", "ito"] = "piecewise-linear"
    allow_non_geometric: bool = False
    scheme: Literal["step2", "first-order"] = "step2"
    levels: int = Field(4, ge=2)
    exponents: List[int] = Field(default_factory=lambda: [6, 7, 8, 9, 10])
    """log2 of the step counts in the exponential convergence sweep"""
    refinements: int = Field(3, ge=1)
    perturbation: float = Field(1e-3, gt=0.0)
    gronwall: GronwallSpec = Field(default_factory=GronwallSpec)
    tolerances: Tolerances = Field(default_factory=Tolerances)
    out: Optional[Path] = None

    @field_validator("p")
    @classmethod
    def _p_range(cls, p: float) -> float:
        if not 2.0 <= p < 3.0:
            raise ValueError(f"p must lie in [2, 3), got {p}")
        return p

    @field_validator("a")
    @classmethod
    def _a_sign(cls, a: Union[float, List[float]]) -> Union[float, List[float]]:
        values = a if isinstance(a, list) else [a]
        if any(v < 0.0 for v in values):
            raise ValueError("initial condition must lie in the closed domain")
        return a

    @field_validator("exponents")
    @classmethod
    def _exponents(cls, exponents: List[int]) -> List[int]:
        if len(exponents) < 2 or any(k < 1 for k in exponents):
            raise ValueError("need at least two positive exponents")
        return sorted(exponents)

    @property
    def output_name(self) -> str:
        return self.label or self.experiment


class ConfigFile(_Spec):
    experiments: List[ExperimentConfig] = Field(min_length=1)
    max_workers: int = Field(1, ge=1)

    @model_validator(mode="after")
    def _unique_outputs(self) -> "ConfigFile":
        names = [e.output_name for e in self.experiments]
        duplicates = sorted({n for n in names if names.count(n) > 1})
        if duplicates:
            raise ValueError(
                "experiments share output directories: "
                f"{', '.join(duplicates)}; set distinct labels"
            )
        return self


def parse_config(data: object) -> ConfigFile:
    """Validate a decoded document; a bare experiment is wrapped in a one-item file"""
    try:
        if isinstance(data, dict) and "experiments" not in data:
            data = {"experiments": [data]}
        return model_parse(ConfigFile, data)
    except ValidationError as e:
        raise ConfigError(str(e)) from e


def load_config(path: Union[str, Path]) -> ConfigFile:
    path = Path(path)
    try:
        data = json_loads(path.read_text())
    except OSError as e:
        raise ConfigError(f"cannot read config {path}: {e}") from e
    except ValueError as e:
        raise ConfigError(f"config {path} is not valid JSON: {e}") from e
    return parse_config(data)
