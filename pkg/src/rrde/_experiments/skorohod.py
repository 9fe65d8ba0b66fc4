import numpy as np
from typing_extensions import override

from ._base import Experiment, desk_scale
from ..roughpath import GridPath
from ..skorohod import (
    check_lipschitz,
    check_skorohod_bound,
    skorohod_1d,
    skorohod_orthant,
)

__all__ = ["SkorohodExperiment"]


class SkorohodExperiment(Experiment):
    """Reflect the configured driver directly, with no equation in between"""

    name = "skorohod"

    @override
    def _run(self) -> None:
        s, tol = self.store, self.tol
        g = self.driver()
        reflect = skorohod_1d if g.dim == 1 else skorohod_orthant
        out = reflect(g)
        s.scalar("n_points", g.n_points)
        s.scalar("m_T", float(np.sum(out.m.values[-1])))
        s.scalar("reflection_steps", out.reflection_steps())

        comp = out.complementarity_sum()
        s.check("complementarity", comp == 0.0, comp, 0.0)
        monotone = bool(np.all(out.dm >= 0.0) and np.all(out.m.values[0] == 0.0))
        s.check("positivity", bool(np.all(out.y.values >= 0.0)) and monotone)

        recursion = reflect(g, method="recursion")
        gap = float(np.max(np.abs(recursion.m.values - out.m.values)))
        s.check("recursion-agrees", gap == 0.0, gap, 0.0)

        small = desk_scale(g)
        bound = check_skorohod_bound(small, reflect(small))
        s.check(
            "measure-bound",
            bound.max_ratio <= tol.skorohod_constant,
            bound.max_ratio,
            tol.skorohod_constant,
        )

        # perturb away from t = 0 so both drivers start in the domain
        bump = self.config.perturbation * np.sin(np.pi * g.times / g.horizon)
        other = GridPath(g.times, g.values + bump[:, None])
        ratio = check_lipschitz(g, other)
        s.check(
            "lipschitz",
            ratio <= tol.lipschitz_constant,
            ratio,
            tol.lipschitz_constant,
        )

        s.tables.put_columns("reflection", out.to_columns())
        s.document("reflection", out.to_document())
