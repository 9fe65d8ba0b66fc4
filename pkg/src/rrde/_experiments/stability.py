import math

import numpy as np
from typing_extensions import override

from ._base import Experiment
from ..solver import stability_probe

__all__ = ["StabilityExperiment"]


class StabilityExperiment(Experiment):
    """Sensitivity to the starting point, across dyadic refinements of the driver.

    Level r uses every 2^(refinements - 1 - r)-th driver point, so the last
    level is the driver itself.
    """

    name = "stability"

    @override
    def _run(self) -> None:
        s, tol = self.store, self.tol
        path = self.driver()
        vf = self.field(path.dim)
        a1 = self.start()
        a2 = np.asarray(a1) + self.config.perturbation

        n_points, sup_diffs, ratios = [], [], []
        for r in range(self.config.refinements):
            stride = 2 ** (self.config.refinements - 1 - r)
            X = self.lift(path.coarsen(stride))
            outcome = stability_probe(vf, X, a1, a2)
            n_points.append(X.n_points)
            sup_diffs.append(outcome.sup_diff)
            ratios.append(outcome.ratio)

        s.array("n_points", n_points)
        s.array("sup_diff", sup_diffs)
        s.array("ratio", ratios)
        low, high = min(ratios), max(ratios)
        if low > 0.0:
            spread = (high - low) / low
        else:
            spread = 0.0 if high == 0.0 else math.inf
        s.scalar("spread", spread)
        band = tol.stability_band
        s.check("refinement-stable", spread <= band, spread, band)

        s.tables.put_columns(
            "stability",
            {"n_points": n_points, "sup_diff": sup_diffs, "ratio": ratios},
        )
