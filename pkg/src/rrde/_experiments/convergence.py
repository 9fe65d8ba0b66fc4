import math
from typing import List

import numpy as np
from typing_extensions import override

from ._base import Experiment
from .._constants import FULL_TABLE_LIMIT
from ..helpers.builders.drivers import function_driver
from ..helpers.builders.fields import build_field
from ..roughpath import lift_piecewise_linear
from ..solver import remainder_diagnostics, solve_reflected

__all__ = ["ExponentialConvergence"]


def empirical_orders(errors: List[float]) -> List[float]:
    """log2(e_n / e_2n) for consecutive dyadic levels"""
    orders = []
    for coarse, fine in zip(errors, errors[1:]):
        if coarse > 0.0 and fine > 0.0:
            orders.append(math.log2(coarse / fine))
        else:
            orders.append(math.nan)
    return orders


class ExponentialConvergence(Experiment):
    """dy = y dx along x_t = t, whose solution a e^t never meets the boundary.

    The driver and field of the config are ignored; only `a`, `exponents`
    and the tolerances are read.
    """

    name = "exponential-convergence"

    @override
    def _run(self) -> None:
        s, tol = self.store, self.tol
        a = float(np.asarray(self.start()).ravel()[0])
        exact = a * math.e
        vf = build_field("affine", 1, {"alpha": 0.0, "beta": 1.0})

        ns, y_end, errors, two_step = [], [], [], []
        for k in self.config.exponents:
            n = 2**k
            X = lift_piecewise_linear(function_driver("identity", n), self.config.p)
            r = solve_reflected(vf, X, a, scheme=self.config.scheme)
            ns.append(n)
            y_end.append(float(r.y.values[-1, 0]))
            errors.append(abs(y_end[-1] - exact))
            if n <= FULL_TABLE_LIMIT:
                diagnostics = remainder_diagnostics(r, X, vf, self.config.p)
                two_step.append(diagnostics.max_two_step)

        orders = empirical_orders(errors)
        s.array("n", ns)
        s.array("y_end", y_end)
        s.array("abs_error", errors)
        s.array("order", orders)
        s.array("remainder_two_step", two_step)

        worst = min(orders)
        s.check("order", worst >= tol.min_order, worst, tol.min_order)
        if 1024 in ns:
            err = errors[ns.index(1024)]
            limit = tol.exponential_error
            s.check("abs-error-1024", err <= limit, err, limit)
        if len(two_step) >= 2:
            decay = min(
                (c / f for c, f in zip(two_step, two_step[1:]) if f > 0.0),
                default=math.inf,
            )
            floor = tol.remainder_decay
            s.check("remainder-decay", decay >= floor, decay, floor)

        s.tables.put_columns(
            "convergence",
            {
                "n": ns,
                "y_end": y_end,
                "abs_error": errors,
                "order": [math.nan] + orders,
            },
        )
