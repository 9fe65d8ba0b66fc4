"""Skorohod reflection on the half-line and the orthant.

The one-dimensional map is explicit: m_t = max(0, max_{u <= t} -g_u) and
y = g + m. On the orthant the normal cone splits along coordinates, so the
map acts componentwise.
"""

import math
from dataclasses import dataclass
from typing import Dict, Literal, NamedTuple

import numpy as np
from loguru import logger

from ._constants import LIPSCHITZ_CONSTANT, SKOROHOD_CONSTANT
from ._types.documents import ReflectionDocument
from ._types.generics import FloatArray
from .errors import (
    InvalidInitialConditionError,
    InvalidParameterError,
    ShapeMismatchError,
)
from .roughpath import GridPath
from .variation import pvar_path

__all__ = [
    "ReflectionOutput",
    "BoundCheck",
    "skorohod_1d",
    "skorohod_orthant",
    "oscillation_table",
    "check_skorohod_bound",
    "check_lipschitz",
    "check_orthant_bound",
    "psi_bound",
    "psi_growth",
]

Domain = Literal["half-line", "orthant"]
Method = Literal["running-max", "recursion"]


@dataclass(frozen=True, eq=False)
class ReflectionOutput:
    y: GridPath
    m: GridPath
    domain: Domain = "half-line"

    @property
    def dim(self) -> int:
        return self.y.dim

    @property
    def g(self) -> GridPath:
        """Driver recovered as y - m"""
        return GridPath(self.y.times, self.y.values - self.m.values)

    @property
    def dm(self) -> FloatArray:
        return self.m.increments

    def complementarity_sum(self) -> float:
        """sum_k y_{k+1} . dm_k; zero for the discrete Skorohod solution"""
        return float(np.sum(self.y.values[1:] * self.dm))

    def reflection_steps(self) -> int:
        return int(np.count_nonzero(np.any(self.dm > 0.0, axis=1)))

    def to_document(self) -> ReflectionDocument:
        return {
            "times": self.y.times.tolist(),
            "y": self.y.values.tolist(),
            "m": self.m.values.tolist(),
            "domain": self.domain,
            "dim": self.dim,
        }

    def to_columns(self) -> Dict[str, FloatArray]:
        columns: Dict[str, FloatArray] = {"t": self.y.times}
        g = self.y.values - self.m.values
        for name, values in (("g", g), ("y", self.y.values), ("m", self.m.values)):
            if self.dim == 1:
                columns[name] = values[:, 0]
            else:
                for k in range(self.dim):
                    columns[f"{name}_{k + 1}"] = values[:, k]
        return columns


class BoundCheck(NamedTuple):
    max_ratio: float
    passed: bool


def _reflect(values: FloatArray, method: Method) -> FloatArray:
    """Reflection measure for each column of `values`, shape (n, d)"""
    if method == "running-max":
        return np.maximum.accumulate(np.maximum(0.0, -values), axis=0)
    if method == "recursion":
        m = np.zeros_like(values)
        for k in range(1, len(values)):
            m[k] = np.maximum(m[k - 1], -values[k])
        return m
    raise InvalidParameterError(f"unknown reflection method {method!r}")


def _check_start(g: GridPath) -> None:
    if np.any(g.values[0] < 0.0):
        raise InvalidInitialConditionError(
            f"driver must start in the closed domain, got {g.values[0].tolist()}"
        )


def skorohod_1d(g: GridPath, method: Method = "running-max") -> ReflectionOutput:
    """Reflect a scalar path at zero.

    Args:
        g: scalar driver with g_0 >= 0
        method: `running-max` (closed form) or `recursion`
            (m_{k+1} = max(m_k, -g_{k+1})); both give identical output

    Returns:
        ReflectionOutput: y = g + m >= 0 with m nondecreasing, m_0 = 0
    """
    if g.dim != 1:
        raise ShapeMismatchError(f"expected a scalar driver, got dimension {g.dim}")
    _check_start(g)
    m = _reflect(g.values, method)
    return ReflectionOutput(
        y=GridPath(g.times, g.values + m),
        m=GridPath(g.times, m),
        domain="half-line",
    )


def skorohod_orthant(g: GridPath, method: Method = "running-max") -> ReflectionOutput:
    """Componentwise reflection into the closed positive orthant"""
    _check_start(g)
    m = _reflect(g.values, method)
    return ReflectionOutput(
        y=GridPath(g.times, g.values + m),
        m=GridPath(g.times, m),
        domain="orthant",
    )


def oscillation_table(g: GridPath) -> FloatArray:
    """||g||_{0,[t_s,t_t]} = max_{s <= u < v <= t} |g_v - g_u| on all pairs"""
    values = g.values
    n = g.n_points
    osc = np.zeros((n, n))
    for t in range(1, n):
        dist = np.linalg.norm(values[t] - values[:t], axis=-1)
        # max over u in [s, t) for every s: reverse running maximum
        reach = np.maximum.accumulate(dist[::-1])[::-1]
        osc[:t, t] = np.maximum(osc[:t, t - 1], reach)
    return osc


def _ratio_table(numerator: FloatArray, denominator: FloatArray) -> FloatArray:
    """numerator / denominator with 0/0 -> 0 and x/0 -> inf"""
    ratio = np.zeros_like(numerator)
    positive = denominator > 0.0
    ratio[positive] = numerator[positive] / denominator[positive]
    ratio[~positive & (numerator > 0.0)] = np.inf
    return ratio


def check_skorohod_bound(g: GridPath, out: ReflectionOutput) -> BoundCheck:
    """Measure bound dm_st <= 8 ||g||_{0,[s,t]} on every grid pair.

    Checked component by component; the constant 8 is not sharp.
    """
    if not g.same_grid(out.m) or g.dim != out.dim:
        raise ShapeMismatchError("driver and reflection output live on different grids")
    worst = 0.0
    for k in range(g.dim):
        osc = oscillation_table(g.component(k))
        mk = out.m.values[:, k]
        dm = np.triu(mk[None, :] - mk[:, None], k=1)
        worst = max(worst, float(np.max(_ratio_table(dm, osc))))
    passed = worst <= SKOROHOD_CONSTANT
    if not passed:
        logger.warning("measure bound ratio {} exceeds {}", worst, SKOROHOD_CONSTANT)
    return BoundCheck(max_ratio=worst, passed=passed)


def check_lipschitz(g1: GridPath, g2: GridPath) -> float:
    """sup|y1 - y2| / sup|g1 - g2| for the reflected pair; at most 2 in one dimension"""
    if not g1.same_grid(g2) or g1.dim != g2.dim:
        raise ShapeMismatchError("drivers live on different grids")
    reflect = skorohod_1d if g1.dim == 1 else skorohod_orthant
    y1, y2 = reflect(g1).y.values, reflect(g2).y.values
    num = float(np.max(np.abs(y1 - y2)))
    den = float(np.max(np.abs(g1.values - g2.values)))
    if den == 0.0:
        return 0.0 if num == 0.0 else math.inf
    ratio = num / den
    if ratio > LIPSCHITZ_CONSTANT:
        logger.warning("Lipschitz ratio {} exceeds {}", ratio, LIPSCHITZ_CONSTANT)
    return ratio


def check_orthant_bound(
    g: GridPath,
    out: ReflectionOutput,
    p: float,
    C1: float,
    C2: float,
) -> BoundCheck:
    """General-domain measure bound with user constants, as a diagnostic.

    ||m||_{V1([s,t])} <= C1 [exp(p C2 (1 + ||g||_0)) ||g||_{Vp} + 1]
                          (exp(C2 (1 + ||g||_0)) + 1) ||g||_0

    Returns the largest lhs/rhs ratio over grid pairs; passes when <= 1.
    """
    if C1 <= 0.0 or C2 <= 0.0:
        raise InvalidParameterError("C1 and C2 must be positive")
    if not g.same_grid(out.m):
        raise ShapeMismatchError("driver and reflection output live on different grids")
    n = g.n_points
    osc = oscillation_table(g)
    gvar = pvar_path(g, p).control.table() ** (1.0 / p)
    steps = np.linalg.norm(out.dm, axis=-1)
    cum = np.concatenate([[0.0], np.cumsum(steps)])
    mvar = np.triu(cum[None, :] - cum[:, None], k=1)
    rhs = (
        C1
        * (np.exp(p * C2 * (1.0 + osc)) * gvar + 1.0)
        * (np.exp(C2 * (1.0 + osc)) + 1.0)
        * osc
    )
    upper = np.triu(np.ones((n, n), dtype=bool), k=1)
    ratio = _ratio_table(np.where(upper, mvar, 0.0), np.where(upper, rhs, 0.0))
    worst = float(np.max(ratio))
    return BoundCheck(max_ratio=worst, passed=worst <= 1.0)


def psi_bound(lam: float, p: float, C1: float, C2: float) -> float:
    """Psi(lam) = C1 [e^{p C2 (1 + r)} lam + 1] (e^{C2 (1 + r)} + 1) r, r = lam^{1/p}"""
    if lam < 0.0:
        raise InvalidParameterError(f"lambda must be nonnegative, got {lam}")
    if not 2.0 <= p < 3.0:
        raise InvalidParameterError(f"p must lie in [2, 3), got {p}")
    if C1 <= 0.0 or C2 <= 0.0:
        raise InvalidParameterError("C1 and C2 must be positive")
    root = lam ** (1.0 / p)
    try:
        return (
            C1
            * (math.exp(p * C2 * (1.0 + root)) * lam + 1.0)
            * (math.exp(C2 * (1.0 + root)) + 1.0)
            * root
        )
    except OverflowError:
        return math.inf


def psi_growth(
    lam: float,
    p: float,
    C1: float,
    C2: float,
    c_fp: float,
    omega_X: float,
) -> float:
    """G_I(lam) = Psi(c_fp (1 + omega_X(I) lam^p))"""
    if lam < 0.0:
        raise InvalidParameterError(f"lambda must be nonnegative, got {lam}")
    if c_fp <= 0.0 or omega_X < 0.0:
        raise InvalidParameterError("c_fp must be positive and omega_X nonnegative")
    try:
        spread = omega_X * lam**p if omega_X > 0.0 else 0.0
    except OverflowError:
        return math.inf
    return psi_bound(c_fp * (1.0 + spread), p, C1, C2)
