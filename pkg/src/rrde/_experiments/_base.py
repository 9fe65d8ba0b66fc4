from abc import ABC, abstractmethod
from typing import ClassVar, Union

import numpy as np
from loguru import logger

from .._constants import FULL_TABLE_LIMIT
from ..config import (
    BrownianDriverSpec,
    ExperimentConfig,
    FileDriverSpec,
    FunctionDriverSpec,
)
from ..helpers.builders.drivers import (
    brownian_driver_from_spec,
    file_driver,
    function_driver,
)
from ..helpers.builders.fields import build_field
from ..roughpath import GridPath, RoughPathGrid, ito_lift, lift_piecewise_linear
from ..sewing import (
    GronwallData,
    GronwallVerdict,
    gronwall_constant,
    gronwall_verify,
)
from ..solver import (
    OrthantVectorField,
    SolveResult,
    VectorField,
    solve_reflected,
    solve_reflected_orthant,
)
from ..stores import ReportStore
from ..variation import (
    Control,
    ScaledControl,
    rough_path_control,
    zero_control,
)

__all__ = ["Experiment", "build_driver", "desk_scale", "step_scaled_control"]

Field = Union[VectorField, OrthantVectorField]


def build_driver(config: ExperimentConfig) -> GridPath:
    spec = config.driver
    if isinstance(spec, BrownianDriverSpec):
        return brownian_driver_from_spec(spec.n, spec.dim, spec.seed)
    if isinstance(spec, FunctionDriverSpec):
        return function_driver(spec.name, spec.n, spec.horizon, spec.scale, spec.offset)
    assert isinstance(spec, FileDriverSpec)
    return file_driver(spec.path)


def desk_scale(path: GridPath, limit: int = FULL_TABLE_LIMIT) -> GridPath:
    """Leading piece of `path` with at most `limit` intervals, for O(n^3) checks"""
    if path.n_points - 1 <= limit:
        return path
    logger.debug(
        "restricting {} points to the first {} intervals", path.n_points, limit
    )
    return GridPath(path.times[: limit + 1], path.values[: limit + 1])


def step_scaled_control(X: RoughPathGrid, C: float, L: float, kappa: float) -> Control:
    """Rough path control of X rescaled to pass the lemma's step regularity.

    The widest step ends up with half of 1/c; a driver with no steps of positive
    size keeps its control.
    """
    omega = rough_path_control(X)
    steps = np.diagonal(omega.table(), offset=1)
    widest = float(np.max(steps)) if steps.size else 0.0
    if widest <= 0.0:
        return omega
    return ScaledControl(omega, 0.5 / (gronwall_constant(C, L, kappa) * widest))


class Experiment(ABC):
    name: ClassVar[str]

    def __init__(self, config: ExperimentConfig) -> None:
        self.config = config
        self.tol = config.tolerances
        self.store = ReportStore(config.experiment, config.output_name)

    def execute(self) -> ReportStore:
        logger.info("running {} ({})", self.name, self.store.label)
        self._run()
        n_fail = sum(1 for _, c in self.store.checks.items() if c.status == "fail")
        logger.info(
            "finished {}: {} checks, {} failing",
            self.store.label,
            len(self.store.checks),
            n_fail,
        )
        return self.store

    @abstractmethod
    def _run(self) -> None:
        raise NotImplementedError

    def driver(self) -> GridPath:
        return build_driver(self.config)

    def lift(self, path: GridPath) -> RoughPathGrid:
        if self.config.lift == "ito":
            return ito_lift(path, self.config.p)
        return lift_piecewise_linear(path, self.config.p)

    def field(self, N: int) -> Field:
        spec = self.config.vf
        return build_field(spec.name, N, spec.params, spec.dim)

    def start(self) -> Union[float, np.ndarray]:
        a = self.config.a
        if self.config.vf.dim == 1:
            return float(a[0]) if isinstance(a, list) else float(a)
        values = np.asarray(a if isinstance(a, list) else [a] * self.config.vf.dim)
        return values.astype(np.float64)

    def solve(
        self, vf: Field, X: RoughPathGrid, a: Union[float, np.ndarray]
    ) -> SolveResult:
        if isinstance(vf, VectorField):
            return solve_reflected(
                vf,
                X,
                float(np.asarray(a).ravel()[0]),
                allow_non_geometric=self.config.allow_non_geometric,
                scheme=self.config.scheme,
            )
        return solve_reflected_orthant(
            vf,
            X,
            np.atleast_1d(a),
            allow_non_geometric=self.config.allow_non_geometric,
            scheme=self.config.scheme,
        )

    def gronwall_cross_check(
        self, vf: Field, X: RoughPathGrid, a: Union[float, np.ndarray]
    ) -> GronwallVerdict:
        """Feed g = |y1 - y2| for two nearby starts into the rough Gronwall lemma.

        omega1 is the driver's rough path control scaled so that the widest
        single step carries half of 1/c, and omega2 vanishes.
        """
        first = self.solve(vf, X, a)
        second = self.solve(vf, X, np.asarray(a) + self.config.perturbation)
        gap = np.linalg.norm(first.y.values - second.y.values, axis=1)
        spec = self.config.gronwall
        return gronwall_verify(
            GronwallData(
                g=GridPath(X.times, gap),
                omega1=step_scaled_control(X, spec.C, spec.L, spec.kappa),
                omega2=zero_control(X.times),
                C=spec.C,
                L=spec.L,
                kappa=spec.kappa,
            )
        )
