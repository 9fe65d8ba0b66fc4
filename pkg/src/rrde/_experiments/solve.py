import numpy as np
from typing_extensions import override

from ._base import Experiment, desk_scale
from .._constants import FULL_TABLE_LIMIT
from ..roughpath import GridPath, cumulative_level1
from ..skorohod import skorohod_1d, skorohod_orthant
from ..solver import remainder_diagnostics

__all__ = ["SolveExperiment"]


class SolveExperiment(Experiment):
    name = "solve"

    @override
    def _run(self) -> None:
        s, tol = self.store, self.tol
        path = self.driver()
        X = self.lift(path)
        vf = self.field(X.dim)
        a = self.start()
        r = self.solve(vf, X, a)

        s.scalar("n_points", X.n_points)
        s.scalar("y_end", float(r.y.values[-1, 0]))
        s.scalar("m_T", r.total_variation_m)
        s.scalar("reflection_steps", r.reflection_steps)
        s.scalar("outside_hypothesis", float(r.outside_hypothesis))

        comp = r.reflection().complementarity_sum()
        s.check("complementarity", comp == 0.0, comp, 0.0)
        positive = bool(np.all(r.y.values >= 0.0) and np.all(r.dm >= 0.0))
        s.check("positivity", positive)

        if X.n_points - 1 <= FULL_TABLE_LIMIT:
            diag = remainder_diagnostics(r, X, vf, self.config.p)
            y_scale = 1.0 + float(np.max(np.abs(r.y.values)))
            s.scalar("remainder_pvar", diag.pvar_p3)
            s.scalar("remainder_two_step", diag.max_two_step)
            s.check(
                "step-identity",
                diag.max_adjacent <= tol.step * y_scale,
                diag.max_adjacent,
                tol.step * y_scale,
            )
            bound = r.measure_bound()
        else:
            bound = self.solve(vf, self.lift(desk_scale(path)), a).measure_bound()
        s.check(
            "measure-bound",
            bound.max_ratio <= tol.skorohod_constant,
            bound.max_ratio,
            tol.skorohod_constant,
        )

        if self.config.vf.name == "constant":
            origin = np.atleast_1d(np.asarray(a, dtype=np.float64))
            drive = cumulative_level1(X)
            value = self.config.vf.params.get("value", 1.0)
            total = drive.values.sum(axis=1, keepdims=True)
            g = GridPath(X.times, origin + value * total)
            reflect = skorohod_1d if g.dim == 1 else skorohod_orthant
            oracle = reflect(g)
            gap = float(np.max(np.abs(oracle.y.values - r.y.values)))
            s.check("constant-field-oracle", gap <= tol.identity, gap, tol.identity)

        s.tables.put_columns("solution", r.to_columns())
        s.document("solution", r.to_document())
