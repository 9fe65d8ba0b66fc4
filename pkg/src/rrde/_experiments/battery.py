import numpy as np
from typing_extensions import override

from ._base import Experiment, desk_scale
from ..errors import InvalidParameterError, NonGeometricDriverError
from ..roughpath import chen_defect, geometricity_defect
from ..solver import remainder_diagnostics
from ..variation import rough_path_control, superadditivity_defect

__all__ = ["InvariantBattery"]


class InvariantBattery(Experiment):
    """Every structural invariant, evaluated on the configured instance.

    Runs on the leading desk-scale piece of the driver so that pair tables
    stay small.
    """

    name = "verify"

    @override
    def _run(self) -> None:
        s, tol = self.store, self.tol
        X = self.lift(desk_scale(self.driver()))
        s.scalar("n_points", X.n_points)

        _, level2 = X.pair_tables()
        chen = chen_defect(X, level2)
        s.check("chen", chen <= tol.identity, chen, tol.identity)

        geo = geometricity_defect(X)
        s.check(
            "geometricity",
            geo <= tol.identity,
            geo,
            tol.identity,
            expected_fail=self.config.lift == "ito",
        )

        omega = rough_path_control(X)
        scale = 1.0 + float(np.max(omega.table()))
        defect = superadditivity_defect(omega)
        limit = tol.identity * scale
        s.check("superadditivity", defect <= limit, defect, limit)

        vf = self.field(X.dim)
        a = self.start()
        try:
            r = self.solve(vf, X, a)
        except NonGeometricDriverError as e:
            s.check("solve", False, detail=str(e))
            return

        s.scalar("outside_hypothesis", float(r.outside_hypothesis))
        comp = r.reflection().complementarity_sum()
        s.check("complementarity", comp == 0.0, comp, 0.0)
        positive = bool(np.all(r.y.values >= 0.0) and np.all(r.dm >= 0.0))
        s.check("positivity", positive and bool(np.all(r.m.values[0] == 0.0)))

        y_scale = 1.0 + float(np.max(np.abs(r.y.values)))
        adjacent = remainder_diagnostics(r, X, vf, self.config.p).max_adjacent
        step_limit = tol.step * y_scale
        s.check("step-identity", adjacent <= step_limit, adjacent, step_limit)

        bound = r.measure_bound()
        s.check(
            "measure-bound",
            bound.max_ratio <= tol.skorohod_constant,
            bound.max_ratio,
            tol.skorohod_constant,
        )

        try:
            verdict = self.gronwall_cross_check(vf, X, a)
        except InvalidParameterError as e:
            s.check("gronwall-implication", False, detail=str(e))
            return
        s.scalar("gronwall_hypothesis", float(verdict.hypothesis_holds))
        s.scalar("gronwall_conclusion", float(verdict.conclusion_holds))
        s.check("gronwall-implication", verdict.consistent)
