import itertools

import numpy as np
from typing_extensions import override

from ._base import Experiment, desk_scale
from ..config import BrownianDriverSpec
from ..errors import InvalidParameterError
from ..roughpath import GridPath
from ..sewing import GronwallData, gronwall_constant, gronwall_verify
from ..variation import FunctionControl, ScaledControl, pvar_path
from .._utils.rng import make_rng, resolve_seed

__all__ = ["GronwallExperiment", "random_instance"]


def random_instance(
    rng: np.random.Generator,
    C: float,
    L: float,
    kappa: float,
    n_points: int = 24,
) -> GronwallData:
    """A randomized lemma instance built from p-variation controls.

    omega1 is a scaled 2-variation control of a random walk, omega2 a scaled
    multiple of t - s and g a reflected random walk, so the hypothesis holds
    for some draws and fails for others.
    """
    times = np.linspace(0.0, 1.0, n_points)
    walk = np.cumsum(rng.normal(0.0, rng.uniform(0.05, 0.5), n_points))
    omega1 = ScaledControl(
        pvar_path(GridPath(times, walk), 2.0).control,
        rng.uniform(0.001, 0.2),
    )
    mu = rng.uniform(0.0, 0.5)
    omega2 = FunctionControl(times, lambda s, t: mu * (t - s))
    steps = rng.normal(0.0, rng.uniform(0.001, 0.1), n_points)
    g = np.abs(rng.uniform(0.0, 1.0) + np.cumsum(steps))
    return GronwallData(
        g=GridPath(times, g),
        omega1=omega1,
        omega2=omega2,
        C=C,
        L=L,
        kappa=kappa,
    )


class GronwallExperiment(Experiment):
    name = "gronwall"

    @override
    def _run(self) -> None:
        s, tol = self.store, self.tol
        spec = self.config.gronwall

        # constant arithmetic on a 20-point sweep
        sweep = itertools.product((0.1, 0.5, 1.0, 2.0, 5.0), (0.01, 1.0), (1.0, 2.5))
        worst = 0.0
        for C, L, kappa in sweep:
            expected = max(1.0 / L, (2.0 * C * np.exp(2.0)) ** kappa)
            got = gronwall_constant(C, L, kappa)
            worst = max(worst, abs(got - expected) / expected)
        s.check("constant-arithmetic", worst <= tol.identity, worst, tol.identity)
        s.scalar("c", gronwall_constant(spec.C, spec.L, spec.kappa))

        driver = self.config.driver
        is_brownian = isinstance(driver, BrownianDriverSpec)
        seed = resolve_seed(driver.seed if is_brownian else 0)
        rng = make_rng(seed)
        hypothesis = conclusion = violations = 0
        for _ in range(spec.instances):
            verdict = gronwall_verify(random_instance(rng, spec.C, spec.L, spec.kappa))
            hypothesis += verdict.hypothesis_holds
            conclusion += verdict.conclusion_holds
            violations += not verdict.consistent
        s.scalar("instances", spec.instances)
        s.scalar("hypothesis_true", hypothesis)
        s.scalar("conclusion_true", conclusion)
        s.check("implication", violations == 0, violations, 0)

        X = self.lift(desk_scale(self.driver()))
        try:
            verdict = self.gronwall_cross_check(self.field(X.dim), X, self.start())
        except InvalidParameterError as e:
            s.check("solver-cross-check", False, detail=str(e))
        else:
            s.scalar("cross_check_hypothesis", float(verdict.hypothesis_holds))
            s.check("solver-cross-check", verdict.consistent)
