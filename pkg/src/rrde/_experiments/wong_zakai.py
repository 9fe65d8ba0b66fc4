import math

from typing_extensions import override

from ._base import Experiment
from ..solver import wong_zakai_study

__all__ = ["WongZakaiExperiment"]


class WongZakaiExperiment(Experiment):
    """Solutions along dyadic coarsenings of one fine driver"""

    name = "wong-zakai"

    @override
    def _run(self) -> None:
        s = self.store
        path = self.driver()
        vf = self.field(path.dim)
        levels = self.config.levels
        report = wong_zakai_study(vf, path, self.start(), levels, self.config.p)

        s.array("strides", report.strides)
        s.array("n_points", report.n_points)
        s.array("distances", report.distances)
        s.array("m_totals", report.m_totals)
        s.array("y_end", report.y_end)

        s.check(
            "distances-decreasing",
            report.is_decreasing(),
            report.worst_ratio(),
            1.0,
        )
        first, final = report.distances[0], report.distances[-1]
        rate = 10.0 * first / 2 ** (levels - 1)
        s.check("cauchy-rate", final <= rate, final, rate)

        s.tables.put_columns(
            "levels",
            {
                "stride": report.strides,
                "n_points": report.n_points,
                "distance": [math.nan] + report.distances,
                "m_total": report.m_totals,
                "y_end": report.y_end,
            },
        )
