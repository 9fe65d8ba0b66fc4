import numpy as np
from typing_extensions import override

from ._base import Experiment, desk_scale
from ..roughpath import (
    chen_defect,
    cumulative_level1,
    geometricity_defect,
    ito_lift,
)
from ..variation import rough_path_control

__all__ = ["LiftCheck"]


class LiftCheck(Experiment):
    name = "lift-check"

    @override
    def _run(self) -> None:
        s, tol = self.store, self.tol
        path = self.driver()
        X = self.lift(path)
        s.scalar("n_points", X.n_points)
        s.scalar("dim", X.dim)
        s.scalar("p", X.p)

        geo = geometricity_defect(X)
        s.scalar("geometricity_defect", geo)
        s.check(
            "geometricity",
            geo <= tol.identity,
            geo,
            tol.identity,
            expected_fail=self.config.lift == "ito",
        )

        # the Ito blocks sit exactly h/2 away from the geometric ones
        half_step = 0.5 * float(np.max(np.diff(path.times)))
        ito_defect = geometricity_defect(ito_lift(path, X.p))
        s.scalar("ito_defect", ito_defect)
        s.check(
            "ito-negative-control",
            abs(ito_defect - half_step) <= tol.identity,
            ito_defect,
            half_step,
        )

        small = self.lift(desk_scale(path))
        _, level2 = small.pair_tables()
        chen = chen_defect(small, level2)
        s.scalar("chen_defect", chen)
        s.check("chen", chen <= tol.identity, chen, tol.identity)

        omega = rough_path_control(small)
        s.scalar("omega_X", omega(0, small.n_points - 1))

        rebuilt = cumulative_level1(X, origin=path.values[0])
        drift = float(np.max(np.abs(rebuilt.values - path.values)))
        allowed = tol.identity * (1.0 + float(np.max(np.abs(path.values))))
        s.check("level1-reconstruction", drift <= allowed, drift, allowed)

        columns = {"t": path.times}
        for k in range(path.dim):
            columns["x" if path.dim == 1 else f"x_{k + 1}"] = path.values[:, k]
        s.tables.put_columns("driver", columns)
