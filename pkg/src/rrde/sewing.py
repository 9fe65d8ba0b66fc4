"""Discrete sewing of 2-index germs and the rough Gronwall bound.

On a finite grid the sewn increment of a germ is its finest-partition sum
I_ij = sum_{k=i}^{j-1} Xi_{k,k+1}; the remainder R = I - Xi is the object the
contraction estimate |R_st| <= C_zeta omega(s, t)^zeta controls.
"""

import math
from dataclasses import dataclass
from typing import List, NamedTuple, Optional

import numpy as np
from loguru import logger

from ._constants import IDENTITY_TOL, SUPERADDITIVE_TOL
from ._types.generics import FloatArray, PairFn
from .errors import InvalidInputError, InvalidParameterError, ShapeMismatchError
from .roughpath import GridPath
from .variation import Control, superadditivity_defect

__all__ = [
    "Germ",
    "SewResult",
    "GronwallData",
    "GronwallVerdict",
    "sew",
    "dyadic_sums",
    "contraction_check",
    "gronwall_constant",
    "gronwall_bound",
    "gronwall_verify",
]


class Germ:
    """Vector-valued map Xi on grid pairs (i < j).

    `fn` must be free of side effects; tables may be built from several
    threads at once.
    """

    def __init__(self, times: FloatArray, fn: PairFn) -> None:
        self._times = np.asarray(times, dtype=np.float64)
        self._fn = fn
        self._table: Optional[FloatArray] = None

    @classmethod
    def from_table(cls, times: FloatArray, table: FloatArray) -> "Germ":
        table = np.asarray(table, dtype=np.float64)
        if table.shape[:2] != (len(times), len(times)):
            raise ShapeMismatchError("germ table must be indexed by grid pairs")
        germ = cls(times, lambda i, j: table[i, j])
        germ._table = table if table.ndim == 3 else table[:, :, None]
        return germ

    @property
    def times(self) -> FloatArray:
        return self._times

    @property
    def n_points(self) -> int:
        return len(self._times)

    def __call__(self, i: int, j: int) -> FloatArray:
        value = np.atleast_1d(np.asarray(self._fn(i, j), dtype=np.float64))
        if not np.all(np.isfinite(value)):
            raise InvalidInputError(f"germ is not finite on pair ({i}, {j})")
        return value

    def table(self) -> FloatArray:
        """Germ on all pairs, shape (n, n, dim); zero for i >= j"""
        if self._table is None:
            n = self.n_points
            dim = self(0, 1).shape[0]
            table = np.zeros((n, n, dim))
            for i in range(n):
                for j in range(i + 1, n):
                    table[i, j] = self(i, j)
            self._table = table
        return self._table

    def adjacent(self) -> FloatArray:
        return np.array([self(k, k + 1) for k in range(self.n_points - 1)])


class SewResult(NamedTuple):
    increments: FloatArray
    """I_ij on all pairs, shape (n, n, dim)"""
    remainder: FloatArray
    """R_ij = I_ij - Xi_ij"""


def sew(germ: Germ) -> SewResult:
    """Sew a germ by finest-partition sums.

    The increments are additive (I_ik + I_kj = I_ij) up to rounding, and the
    remainder vanishes on adjacent pairs.
    """
    n = germ.n_points
    adjacent = germ.adjacent()
    increments = np.zeros((n, n, adjacent.shape[1]))
    for j in range(1, n):
        increments[:j, j] = increments[:j, j - 1] + adjacent[j - 1]
    upper = np.triu(np.ones((n, n), dtype=bool), k=1)[:, :, None]
    remainder = np.where(upper, increments - germ.table(), 0.0)
    return SewResult(increments=increments, remainder=remainder)


def dyadic_sums(germ: Germ, i: int, j: int) -> List[FloatArray]:
    """Riemann sums of the germ over successively bisected partitions of [i, j].

    Each level inserts the index midpoint of every interval longer than one
    step; the last entry is the finest-partition sum.
    """
    if not (0 <= i < j < germ.n_points):
        raise InvalidParameterError(f"need 0 <= i < j < {germ.n_points}")
    points = [i, j]
    sums = [germ(i, j)]
    while any(b - a > 1 for a, b in zip(points[:-1], points[1:])):
        refined = [points[0]]
        for a, b in zip(points[:-1], points[1:]):
            if b - a > 1:
                refined.append((a + b) // 2)
            refined.append(b)
        points = refined
        sums.append(sum((germ(a, b) for a, b in zip(points[:-1], points[1:]))))
    return sums


def contraction_check(germ: Germ, omega: Control, zeta: float) -> float:
    """Empirical constant C_hat = max_ij |R_ij| / omega(i, j)^zeta.

    A pair with omega = 0 but a nonzero remainder makes C_hat infinite: the
    germ is not compatible with the claimed control.
    """
    if zeta <= 1.0:
        raise InvalidParameterError(f"zeta must exceed 1, got {zeta}")
    if omega.n_points != germ.n_points:
        raise ShapeMismatchError("germ and control live on different grids")
    remainder = np.linalg.norm(sew(germ).remainder, axis=-1)
    scale = omega.table() ** zeta
    n = germ.n_points
    c_hat = 0.0
    for i in range(n):
        for j in range(i + 1, n):
            r = remainder[i, j]
            if r == 0.0:
                continue
            if scale[i, j] == 0.0:
                logger.debug("remainder {} on a pair with zero control", r)
                return math.inf
            c_hat = max(c_hat, r / scale[i, j])
    return float(c_hat)


def gronwall_constant(C: float, L: float, kappa: float) -> float:
    """c_{L,kappa} = max(1/L, (2 C e^2)^kappa)"""
    if C <= 0.0 or L <= 0.0:
        raise InvalidParameterError("C and L must be positive")
    if kappa < 1.0:
        raise InvalidParameterError(f"kappa must be >= 1, got {kappa}")
    return max(1.0 / L, (2.0 * C * math.e**2) ** kappa)


@dataclass(frozen=True, eq=False)
class GronwallData:
    g: GridPath
    omega1: Control
    omega2: Control
    C: float
    L: float
    kappa: float

    def __post_init__(self) -> None:
        gronwall_constant(self.C, self.L, self.kappa)
        if self.g.dim != 1:
            raise ShapeMismatchError("g must be a scalar path")
        if np.any(self.g.scalar < 0.0):
            raise InvalidInputError("g must be nonnegative")
        n = self.g.n_points
        if self.omega1.n_points != n or self.omega2.n_points != n:
            raise ShapeMismatchError("controls and g live on different grids")
        defect = superadditivity_defect(self.omega1)
        scale = 1.0 + float(np.max(self.omega1.table()))
        if defect > SUPERADDITIVE_TOL * scale:
            raise InvalidParameterError(
                f"omega1 is not superadditive (defect {defect:.3e})"
            )

    @property
    def c(self) -> float:
        return gronwall_constant(self.C, self.L, self.kappa)


class GronwallVerdict(NamedTuple):
    hypothesis_holds: bool
    conclusion_holds: bool

    @property
    def consistent(self) -> bool:
        """False only if the hypothesis holds and the conclusion fails"""
        return self.conclusion_holds or not self.hypothesis_holds


def _bound_terms(d: GronwallData, T: int) -> float:
    c = d.c
    w1 = np.array([d.omega1(0, t) for t in range(T + 1)])
    w2 = np.array([d.omega2(0, t) for t in range(T + 1)])
    g0 = float(d.g.scalar[0])
    with np.errstate(over="ignore"):
        head = 2.0 * g0 * np.exp(c * w1[T]) if g0 > 0.0 else 0.0
        weights = np.where(w2 > 0.0, w2 * np.exp(c * (w1[T] - w1)), 0.0)
    return float(head + 2.0 * np.max(weights))


def gronwall_bound(d: GronwallData, T: Optional[int] = None) -> float:
    """2 e^{c w1(0,T)} { g_0 + sup_{t <= T} w2(0,t) e^{-c w1(0,t)} } over grid points"""
    n = d.g.n_points
    T = n - 1 if T is None else T
    if not 0 <= T < n:
        raise InvalidParameterError(f"T index must lie in [0, {n - 1}]")
    return _bound_terms(d, T)


def gronwall_verify(d: GronwallData, tol: float = IDENTITY_TOL) -> GronwallVerdict:
    """Check the increment hypothesis on the grid and the resulting sup bound.

    The hypothesis is checked on every pair with omega1 <= L. On a grid the
    regularity of omega1 means every single step carries omega1 <= 1/c, so the
    bound's partition argument can be run on grid points; a coarser step makes
    the hypothesis fail.
    """
    g = d.g.scalar
    n = len(g)
    w1 = d.omega1.table()
    w2 = d.omega2.table()
    running_sup = np.maximum.accumulate(g)
    steps = np.array([w1[k, k + 1] for k in range(n - 1)])
    regular = bool(np.all(steps <= 1.0 / d.c))

    upper = np.triu(np.ones((n, n), dtype=bool), k=1)
    admissible = upper & (w1 <= d.L)
    dg = g[None, :] - g[:, None]
    rhs = d.C * running_sup[None, :] * w1 ** (1.0 / d.kappa) + w2
    slack = tol * (1.0 + np.abs(rhs[admissible]))
    hypothesis = regular and bool(np.all(dg[admissible] <= rhs[admissible] + slack))

    conclusion = True
    for T in range(n):
        bound = _bound_terms(d, T)
        if running_sup[T] > bound * (1.0 + tol) + tol:
            conclusion = False
            break
    verdict = GronwallVerdict(hypothesis, conclusion)
    if not verdict.consistent:
        logger.error("rough Gronwall implication violated: {}", verdict)
    return verdict
