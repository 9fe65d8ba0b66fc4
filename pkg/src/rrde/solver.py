"""Reflected step-2 scheme for rough differential equations.

Each step applies the second-order germ and then reflects:

    y~      = y_k + f_i(y_k) X1^i + f'_i(y_k) f_j(y_k) X2^{ij}
    dm_k    = max(0, -y~)
    y_{k+1} = y~ + dm_k

so the discrete expansion holds with zero remainder on every grid step, and
dm_k > 0 only when y_{k+1} = 0.
"""

import math
import warnings
from dataclasses import dataclass, field
from typing import (
    Callable,
    Dict,
    List,
    Literal,
    NamedTuple,
    Optional,
    Sequence,
    Tuple,
    Union,
)

import numpy as np
from loguru import logger

from ._constants import DERIVATIVE_STEP, DERIVATIVE_TOL
from ._types.documents import SolveDocument
from ._types.generics import FloatArray
from .errors import (
    InvalidInitialConditionError,
    InvalidParameterError,
    NonGeometricDriverError,
    ShapeMismatchError,
    VectorFieldError,
)
from .roughpath import GridPath, RoughPathGrid, lift_piecewise_linear
from .skorohod import BoundCheck, ReflectionOutput, check_skorohod_bound
from .variation import Control, pvar_path, remainder_variation

__all__ = [
    "VectorField",
    "OrthantVectorField",
    "SolveResult",
    "RemainderDiagnostics",
    "WongZakaiReport",
    "StabilityProbe",
    "solve_reflected",
    "solve_reflected_orthant",
    "solve_unreflected",
    "remainder_diagnostics",
    "wong_zakai_study",
    "stability_probe",
]

Smoothness = Literal["C1", "C2", "C3"]
Scheme = Literal["step2", "first-order"]

_SMOOTHNESS = ("C1", "C2", "C3")
_SCHEMES = ("step2", "first-order")
_DEFAULT_SAMPLES = np.linspace(-2.0, 2.0, 9)


def _check_scheme(scheme: str) -> None:
    if scheme not in _SCHEMES:
        raise InvalidParameterError(
            f"unknown scheme {scheme!r}, expected one of {', '.join(_SCHEMES)}"
        )


class VectorField:
    """Scalar coefficient y -> f(y) in R^N with its derivative f'(y).

    The derivative is checked against central differences at construction.
    Fields tagged below C3 are accepted, but every solve with them is marked
    as lying outside the well-posedness hypothesis.
    """

    dim = 1

    def __init__(
        self,
        N: int,
        f: Callable[[float], Union[float, FloatArray]],
        df: Callable[[float], Union[float, FloatArray]],
        smoothness: Smoothness = "C3",
        name: str = "custom",
        samples: Optional[FloatArray] = None,
    ) -> None:
        if N < 1:
            raise InvalidParameterError("driver dimension N must be at least 1")
        if smoothness not in _SMOOTHNESS:
            raise InvalidParameterError(f"unknown smoothness tag {smoothness!r}")
        self.N = N
        self.name = name
        self.smoothness = smoothness
        self._f = f
        self._df = df
        self._check_derivative(_DEFAULT_SAMPLES if samples is None else samples)

    @property
    def outside_hypothesis(self) -> bool:
        return self.smoothness != "C3"

    def f(self, y: float) -> FloatArray:
        value = np.atleast_1d(np.asarray(self._f(float(y)), dtype=np.float64))
        if value.shape != (self.N,):
            raise ShapeMismatchError(f"f must return {self.N} components")
        return value

    def df(self, y: float) -> FloatArray:
        value = np.atleast_1d(np.asarray(self._df(float(y)), dtype=np.float64))
        if value.shape != (self.N,):
            raise ShapeMismatchError(f"df must return {self.N} components")
        return value

    def f2(self, y: float) -> FloatArray:
        """f_{2,ij}(y) = f'_i(y) f_j(y)"""
        return np.outer(self.df(y), self.f(y))

    def _check_derivative(self, samples: FloatArray) -> None:
        h = DERIVATIVE_STEP
        for xi in np.asarray(samples, dtype=np.float64).ravel():
            exact = self.df(xi)
            approx = (self.f(xi + h) - self.f(xi - h)) / (2.0 * h)
            if np.any(np.abs(exact - approx) > DERIVATIVE_TOL * (1.0 + np.abs(exact))):
                raise VectorFieldError(
                    f"derivative of {self.name!r} disagrees with finite differences "
                    f"at {xi}: {exact.tolist()} vs {approx.tolist()}"
                )

    def coefficients(self, points: FloatArray) -> Tuple[FloatArray, FloatArray]:
        """f and f2 at each row of `points` (n, 1), shaped (n, 1, N) and (n, 1, N, N)"""
        F = np.array([self.f(y) for y in points[:, 0]])[:, None, :]
        F2 = np.array([self.f2(y) for y in points[:, 0]])[:, None, :, :]
        return F, F2

    def increment(
        self, y: FloatArray, x1: FloatArray, x2: FloatArray, scheme: Scheme
    ) -> FloatArray:
        first = self.f(y[0]) @ x1
        if scheme == "first-order":
            return np.array([first])
        return np.array([first + np.sum(self.f2(y[0]) * x2)])


class OrthantVectorField:
    """Coefficient xi -> f(xi) in L(R^N, R^d) for equations on the closed orthant.

    `df(xi)` has shape (d, N, d) with df[a, i, b] = d f_{a i} / d xi_b, so
    f_{2,ij}(xi) = grad f_i(xi) f_j(xi) reads f2[a, i, j] = sum_b df[a, i, b] f[b, j].
    """

    def __init__(
        self,
        d: int,
        N: int,
        f: Callable[[FloatArray], FloatArray],
        df: Callable[[FloatArray], FloatArray],
        smoothness: Smoothness = "C3",
        name: str = "custom",
        samples: Optional[FloatArray] = None,
    ) -> None:
        if d < 1 or N < 1:
            raise InvalidParameterError("dimensions d and N must be at least 1")
        if smoothness not in _SMOOTHNESS:
            raise InvalidParameterError(f"unknown smoothness tag {smoothness!r}")
        self.dim = d
        self.N = N
        self.name = name
        self.smoothness = smoothness
        self._f = f
        self._df = df
        if samples is None:
            samples = np.array([np.full(d, s) for s in _DEFAULT_SAMPLES])
        self._check_derivative(samples)

    @classmethod
    def decoupled(cls, fields: Sequence[VectorField]) -> "OrthantVectorField":
        """Component a evolves by fields[a] along the shared driver"""
        if not fields:
            raise InvalidParameterError("need at least one component field")
        N = fields[0].N
        if any(vf.N != N for vf in fields):
            raise ShapeMismatchError("component fields use different driver dimensions")
        d = len(fields)

        def f(xi: FloatArray) -> FloatArray:
            return np.array([vf.f(xi[a]) for a, vf in enumerate(fields)])

        def df(xi: FloatArray) -> FloatArray:
            out = np.zeros((d, N, d))
            for a, vf in enumerate(fields):
                out[a, :, a] = vf.df(xi[a])
            return out

        smoothness = min((vf.smoothness for vf in fields), key=_SMOOTHNESS.index)
        name = "decoupled(" + ",".join(vf.name for vf in fields) + ")"
        return cls(d, N, f, df, smoothness=smoothness, name=name)

    @property
    def outside_hypothesis(self) -> bool:
        return self.smoothness != "C3"

    def f(self, xi: FloatArray) -> FloatArray:
        value = np.asarray(self._f(np.asarray(xi, dtype=np.float64)), dtype=np.float64)
        if value.shape != (self.dim, self.N):
            raise ShapeMismatchError(f"f must return a {self.dim}x{self.N} matrix")
        return value

    def df(self, xi: FloatArray) -> FloatArray:
        value = np.asarray(self._df(np.asarray(xi, dtype=np.float64)), dtype=np.float64)
        if value.shape != (self.dim, self.N, self.dim):
            raise ShapeMismatchError(
                f"df must have shape ({self.dim}, {self.N}, {self.dim})"
            )
        return value

    def f2(self, xi: FloatArray) -> FloatArray:
        return np.einsum("aib,bj->aij", self.df(xi), self.f(xi))

    def _check_derivative(self, samples: FloatArray) -> None:
        h = DERIVATIVE_STEP
        for xi in np.atleast_2d(np.asarray(samples, dtype=np.float64)):
            exact = self.df(xi)
            for b in range(self.dim):
                e = np.zeros(self.dim)
                e[b] = h
                approx = (self.f(xi + e) - self.f(xi - e)) / (2.0 * h)
                col = exact[:, :, b]
                if np.any(np.abs(col - approx) > DERIVATIVE_TOL * (1.0 + np.abs(col))):
                    raise VectorFieldError(
                        f"derivative of {self.name!r} in direction {b} disagrees "
                        f"with finite differences at {xi.tolist()}"
                    )

    def coefficients(self, points: FloatArray) -> Tuple[FloatArray, FloatArray]:
        F = np.array([self.f(y) for y in points])
        F2 = np.array([self.f2(y) for y in points])
        return F, F2

    def increment(
        self, y: FloatArray, x1: FloatArray, x2: FloatArray, scheme: Scheme
    ) -> FloatArray:
        first = self.f(y) @ x1
        if scheme == "first-order":
            return first
        return first + np.einsum("aij,ij->a", self.f2(y), x2)


Field = Union[VectorField, OrthantVectorField]


@dataclass(frozen=True, eq=False)
class SolveResult:
    """Output of one reflected (or unreflected) solve on the grid of `X`"""

    y: GridPath
    m: GridPath
    X: RoughPathGrid
    vf: Field
    scheme: Scheme = "step2"
    outside_hypothesis: bool = False
    _cache: Dict[str, FloatArray] = field(default_factory=dict, repr=False)

    @property
    def times(self) -> FloatArray:
        return self.y.times

    @property
    def dm(self) -> FloatArray:
        return self.m.increments

    @property
    def reflection_steps(self) -> int:
        return int(np.count_nonzero(np.any(self.dm > 0.0, axis=1)))

    @property
    def total_variation_m(self) -> float:
        """sum of |dm_k|; equals m_T - m_0 in one dimension"""
        return float(np.sum(np.linalg.norm(self.dm, axis=1)))

    def germ_table(self) -> FloatArray:
        """f_i(y_s) X1_st + f_{2,ij}(y_s) X2_st on all pairs, shape (n, n, d)"""
        if "germ" not in self._cache:
            t1, t2 = self.X.pair_tables()
            F, F2 = self.vf.coefficients(self.y.values)
            germ = np.einsum("sai,sti->sta", F, t1)
            if self.scheme == "step2":
                germ = germ + np.einsum("saij,stij->sta", F2, t2)
            self._cache["germ"] = germ
        return self._cache["germ"]

    def remainder_table(self) -> FloatArray:
        """y#_st = dy_st - germ_st - dm_st on all pairs, zero for s >= t"""
        if "remainder" not in self._cache:
            n = self.y.n_points
            y, m = self.y.values, self.m.values
            dy = y[None, :, :] - y[:, None, :]
            dm = m[None, :, :] - m[:, None, :]
            upper = np.triu(np.ones((n, n), dtype=bool), k=1)[:, :, None]
            self._cache["remainder"] = np.where(upper, dy - self.germ_table() - dm, 0.0)
            logger.debug("evaluated remainder on {} grid pairs", n * (n - 1) // 2)
        return self._cache["remainder"]

    def remainder(self, i: int, j: int) -> FloatArray:
        return self.remainder_table()[i, j]

    def path_control(self, p: float) -> Control:
        """omega_y = ||y||^p_{p-var} on grid pairs"""
        return pvar_path(self.y, p).control

    def reflection(self) -> ReflectionOutput:
        domain = "half-line" if isinstance(self.vf, VectorField) else "orthant"
        return ReflectionOutput(y=self.y, m=self.m, domain=domain)

    def measure_bound(self) -> BoundCheck:
        """Skorohod measure bound for the driver g = y - m of this run"""
        out = self.reflection()
        return check_skorohod_bound(out.g, out)

    def to_document(self) -> SolveDocument:
        return {
            "times": self.times.tolist(),
            "y": self.y.values.tolist(),
            "m": self.m.values.tolist(),
            "reflection_steps": self.reflection_steps,
            "total_variation_m": self.total_variation_m,
            "outside_hypothesis": self.outside_hypothesis,
            "scheme": self.scheme,
        }

    def to_columns(self) -> Dict[str, FloatArray]:
        dm = np.vstack([np.zeros(self.y.dim), self.dm])
        columns: Dict[str, FloatArray] = {"t": self.times}
        for name, values in (("y", self.y.values), ("m", self.m.values), ("dm", dm)):
            if self.y.dim == 1:
                columns[name] = values[:, 0]
            else:
                for k in range(self.y.dim):
                    columns[f"{name}_{k + 1}"] = values[:, k]
        return columns


def _prepare(
    vf: Field,
    X: RoughPathGrid,
    allow_non_geometric: bool,
    scheme: str,
) -> None:
    _check_scheme(scheme)
    if vf.N != X.dim:
        raise ShapeMismatchError(
            f"vector field expects a {vf.N}-dim driver, got {X.dim}"
        )
    if not X.is_geometric():
        if not allow_non_geometric:
            raise NonGeometricDriverError(
                "driver blocks are not geometric; "
                "pass allow_non_geometric=True to proceed"
            )
        logger.warning("solving along a non-geometric driver")
    if vf.outside_hypothesis:
        warnings.warn(
            f"vector field {vf.name!r} is {vf.smoothness}; "
            "well-posedness is only guaranteed for C3 coefficients"
        )


def _march(
    vf: Field,
    X: RoughPathGrid,
    start: FloatArray,
    scheme: Scheme,
    reflect: bool,
) -> Tuple[FloatArray, FloatArray]:
    n, d = X.n_points, len(start)
    y = np.empty((n, d))
    m = np.zeros((n, d))
    y[0] = start
    for k in range(n - 1):
        proposal = y[k] + vf.increment(y[k], X.level1[k], X.level2[k], scheme)
        if not np.all(np.isfinite(proposal)):
            raise InvalidParameterError(f"solution blew up at step {k}")
        if reflect:
            push = np.maximum(0.0, -proposal)
            y[k + 1] = proposal + push
            m[k + 1] = m[k] + push
        else:
            y[k + 1] = proposal
    return y, m


def _solve(
    vf: Field,
    X: RoughPathGrid,
    start: FloatArray,
    allow_non_geometric: bool,
    scheme: Scheme,
) -> SolveResult:
    if np.any(start < 0.0):
        raise InvalidInitialConditionError(
            f"initial condition must lie in the closed domain, got {start.tolist()}"
        )
    _prepare(vf, X, allow_non_geometric, scheme)
    y, m = _march(vf, X, start, scheme, reflect=True)
    result = SolveResult(
        y=GridPath(X.times, y),
        m=GridPath(X.times, m),
        X=X,
        vf=vf,
        scheme=scheme,
        outside_hypothesis=vf.outside_hypothesis,
    )
    logger.debug(
        "solved {} on {} points: {} reflection steps, m_T={}",
        vf.name,
        X.n_points,
        result.reflection_steps,
        result.total_variation_m,
    )
    return result


def solve_reflected(
    vf: VectorField,
    X: RoughPathGrid,
    a: float,
    allow_non_geometric: bool = False,
    scheme: Scheme = "step2",
) -> SolveResult:
    """Reflected solution on the half-line started at `a`.

    Args:
        vf: scalar coefficient with N matching the driver
        X: geometric driver blocks
        a: initial condition, a >= 0
        allow_non_geometric: solve along non-geometric blocks anyway
        scheme: `step2` (default) or `first-order`, which drops the level-2 term

    Returns:
        SolveResult: y >= 0, m nondecreasing from 0, dm_k > 0 only where y_{k+1} = 0
    """
    if not isinstance(vf, VectorField):
        raise ShapeMismatchError("solve_reflected needs a scalar VectorField")
    return _solve(vf, X, np.array([float(a)]), allow_non_geometric, scheme)


def solve_reflected_orthant(
    vf: OrthantVectorField,
    X: RoughPathGrid,
    a: Union[Sequence[float], FloatArray],
    allow_non_geometric: bool = False,
    scheme: Scheme = "step2",
) -> SolveResult:
    """Reflected solution on the closed positive orthant, reflecting componentwise"""
    start = np.atleast_1d(np.asarray(a, dtype=np.float64))
    if start.shape != (vf.dim,):
        raise ShapeMismatchError(f"initial condition must have {vf.dim} components")
    return _solve(vf, X, start, allow_non_geometric, scheme)


def solve_unreflected(
    vf: Field,
    X: RoughPathGrid,
    a: Union[float, Sequence[float], FloatArray],
    scheme: Scheme = "step2",
) -> GridPath:
    """Same stepping without the reflection branch"""
    _check_scheme(scheme)
    if vf.N != X.dim:
        raise ShapeMismatchError(
            f"vector field expects a {vf.N}-dim driver, got {X.dim}"
        )
    start = np.atleast_1d(np.asarray(a, dtype=np.float64))
    y, _ = _march(vf, X, start, scheme, reflect=False)
    return GridPath(X.times, y)


def _solve_any(vf: Field, X: RoughPathGrid, a: Union[float, FloatArray]) -> SolveResult:
    if isinstance(vf, VectorField):
        return solve_reflected(vf, X, float(np.asarray(a).ravel()[0]))
    return solve_reflected_orthant(vf, X, np.atleast_1d(a))


@dataclass(frozen=True)
class RemainderDiagnostics:
    pvar_p3: float
    """(p/3)-variation of the remainder over the whole grid"""
    max_adjacent: float
    """Zero by construction, up to rounding"""
    max_two_step: float
    """max |y#| over pairs (k, k+2), the finest non-adjacent scale"""
    max_nonadjacent: float


def remainder_diagnostics(
    r: SolveResult, X: RoughPathGrid, vf: Field, p: float
) -> RemainderDiagnostics:
    if r.X is not X and not np.array_equal(r.X.times, X.times):
        raise ShapeMismatchError("solve result comes from a different driver grid")
    if r.vf is not vf:
        raise InvalidParameterError("solve result comes from a different vector field")
    if not 2.0 <= p < 3.0:
        raise InvalidParameterError(f"p must lie in [2, 3), got {p}")
    table = np.linalg.norm(r.remainder_table(), axis=-1)
    n = table.shape[0]
    idx = np.arange(n)
    adjacent = table[idx[:-1], idx[1:]]
    two_step = table[idx[:-2], idx[2:]] if n > 2 else np.zeros(1)
    nonadjacent = np.triu(table, k=2)
    pvar = remainder_variation(table, p / 3.0, r.times).norm
    return RemainderDiagnostics(
        pvar_p3=float(pvar),
        max_adjacent=float(np.max(adjacent)),
        max_two_step=float(np.max(two_step)),
        max_nonadjacent=float(np.max(nonadjacent)) if n > 2 else 0.0,
    )


@dataclass(frozen=True)
class WongZakaiReport:
    strides: List[int]
    """Coarsening factor of each level, coarsest first"""
    n_points: List[int]
    distances: List[float]
    """sup distance between consecutive levels on the coarser grid"""
    m_totals: List[float]
    y_end: List[float]

    def is_decreasing(self, slack: float = 0.0) -> bool:
        pairs = zip(self.distances, self.distances[1:])
        return all(b <= a * (1.0 + slack) for a, b in pairs)

    def worst_ratio(self) -> float:
        """Largest distance[l + 1] / distance[l]; at most 1 when decreasing"""
        worst = 0.0
        for a, b in zip(self.distances, self.distances[1:]):
            if a > 0.0:
                worst = max(worst, b / a)
            elif b > 0.0:
                return math.inf
        return worst


def wong_zakai_study(
    vf: Field,
    fine_driver: GridPath,
    a: Union[float, FloatArray],
    levels: int,
    p: float = 2.5,
) -> WongZakaiReport:
    """Solve along piecewise-linear lifts of dyadic coarsenings of `fine_driver`.

    Level l uses every 2^(levels - l)-th point, l = 0..levels; the finest
    level is the driver itself.
    """
    if levels < 2:
        raise InvalidParameterError(f"need at least 2 levels, got {levels}")
    n_int = fine_driver.n_points - 1
    if n_int % (2**levels) != 0:
        raise InvalidParameterError(
            f"{n_int} intervals cannot be coarsened {levels} times dyadically"
        )
    strides = [2 ** (levels - l) for l in range(levels + 1)]
    results: List[SolveResult] = []
    for stride in strides:
        X = lift_piecewise_linear(fine_driver.coarsen(stride), p)
        results.append(_solve_any(vf, X, a))
        logger.info("wong-zakai level stride={} points={}", stride, X.n_points)

    distances = []
    for coarse, fine in zip(results, results[1:]):
        gap = np.abs(fine.y.values[::2] - coarse.y.values)
        distances.append(float(np.max(gap)))
    return WongZakaiReport(
        strides=strides,
        n_points=[r.y.n_points for r in results],
        distances=distances,
        m_totals=[r.total_variation_m for r in results],
        y_end=[float(r.y.values[-1, 0]) for r in results],
    )


class StabilityProbe(NamedTuple):
    sup_diff: float
    ratio: float


def stability_probe(
    vf: Field,
    X: RoughPathGrid,
    a1: Union[float, FloatArray],
    a2: Union[float, FloatArray],
) -> StabilityProbe:
    """sup_t |y1 - y2| for two starting points, and its ratio to |a1 - a2|"""
    r1 = _solve_any(vf, X, a1)
    r2 = _solve_any(vf, X, a2)
    sup_diff = float(np.max(np.abs(r1.y.values - r2.y.values)))
    gap = float(np.max(np.abs(np.atleast_1d(a1) - np.atleast_1d(a2))))
    if gap == 0.0:
        ratio = 0.0 if sup_diff == 0.0 else math.inf
    else:
        ratio = sup_diff / gap
    return StabilityProbe(sup_diff=sup_diff, ratio=ratio)
