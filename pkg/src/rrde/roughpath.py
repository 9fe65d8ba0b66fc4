"""Step-2 rough paths restricted to a finite time grid.

Only the blocks over consecutive grid intervals are stored. Every other pair is
produced on demand by left-to-right Chen composition

    X2_{s,t} = X2_{s,u} + X2_{u,t} + X1_{s,u} (x) X1_{u,t}

so the Chen relation holds by construction up to floating-point accumulation.
"""

from dataclasses import dataclass
from functools import cached_property
from typing import Callable, Optional, Tuple, Union

import numpy as np
from loguru import logger

from ._constants import GEOMETRIC_TOL
from ._types.documents import PathDocument, RoughPathDocument
from ._types.generics import FloatArray
from ._utils.rng import make_rng
from .errors import (
    InvalidInputError,
    InvalidParameterError,
    InvalidRangeError,
    ShapeMismatchError,
)

__all__ = [
    "GridPath",
    "RoughPathGrid",
    "lift_piecewise_linear",
    "ito_lift",
    "query",
    "chen_defect",
    "geometricity_defect",
    "cumulative_level1",
    "brownian_driver",
]


def _frozen(a: FloatArray) -> FloatArray:
    a.setflags(write=False)
    return a


@dataclass(frozen=True, eq=False)
class GridPath:
    """A path sampled on a strictly increasing grid starting at t = 0.

    `values` always has shape (n, d); scalar input is promoted to d = 1.
    """

    times: FloatArray
    values: FloatArray

    def __post_init__(self) -> None:
        times = np.array(self.times, dtype=np.float64)
        values = np.array(self.values, dtype=np.float64)
        if times.ndim != 1:
            raise InvalidInputError("times must be a one-dimensional sequence")
        if values.ndim == 1:
            values = values[:, None]
        if values.ndim != 2:
            raise InvalidInputError("values must be a sequence of vectors")
        if len(times) < 2:
            raise InvalidInputError("a grid path needs at least two points")
        if len(times) != len(values):
            raise ShapeMismatchError(
                f"{len(times)} times but {len(values)} values were given"
            )
        if times[0] != 0.0:
            raise InvalidInputError(f"grid must start at t=0, got {times[0]}")
        if np.any(np.diff(times) <= 0.0):
            raise InvalidInputError("times must be strictly increasing")
        if not np.all(np.isfinite(values)):
            raise InvalidInputError("values must be finite")
        object.__setattr__(self, "times", _frozen(times))
        object.__setattr__(self, "values", _frozen(values))

    @property
    def n_points(self) -> int:
        return len(self.times)

    @property
    def dim(self) -> int:
        return int(self.values.shape[1])

    @property
    def horizon(self) -> float:
        return float(self.times[-1])

    @property
    def increments(self) -> FloatArray:
        return np.diff(self.values, axis=0)

    @property
    def scalar(self) -> FloatArray:
        """Values of a one-dimensional path as a flat array"""
        if self.dim != 1:
            raise ShapeMismatchError(
                f"expected a scalar path, got dimension {self.dim}"
            )
        return self.values[:, 0]

    def component(self, k: int) -> "GridPath":
        return GridPath(self.times, self.values[:, k])

    def shifted(self, offset: Union[float, FloatArray]) -> "GridPath":
        return GridPath(self.times, self.values + np.asarray(offset, dtype=np.float64))

    def same_grid(self, other: "GridPath") -> bool:
        return self.n_points == other.n_points and bool(
            np.array_equal(self.times, other.times)
        )

    def coarsen(self, factor: int) -> "GridPath":
        """Keep every `factor`-th point; the last point must survive"""
        if factor < 1 or (self.n_points - 1) % factor != 0:
            raise InvalidParameterError(
                f"cannot coarsen {self.n_points - 1} intervals by {factor}"
            )
        return GridPath(self.times[::factor], self.values[::factor])

    @classmethod
    def from_function(
        cls,
        fn: Callable[[float], Union[float, FloatArray]],
        n_steps: int,
        horizon: float = 1.0,
    ) -> "GridPath":
        """Sample `fn` on a uniform grid of `n_steps` intervals over [0, horizon]"""
        if n_steps < 1:
            raise InvalidInputError("n_steps must be at least 1")
        times = np.linspace(0.0, horizon, n_steps + 1)
        values = np.array([np.atleast_1d(fn(float(t))) for t in times])
        return cls(times, values)

    def to_document(self) -> PathDocument:
        return {"times": self.times.tolist(), "values": self.values.tolist()}

    @classmethod
    def from_document(cls, doc: PathDocument) -> "GridPath":
        return cls(np.asarray(doc["times"]), np.asarray(doc["values"]))


@dataclass(frozen=True, eq=False)
class RoughPathGrid:
    """Level-1 and level-2 blocks of a rough path over consecutive grid intervals.

    Attributes:
        times: grid, as for `GridPath`
        level1: shape (n-1, N), X1 over [t_k, t_{k+1}]
        level2: shape (n-1, N, N), X2 over [t_k, t_{k+1}]
        p: regularity exponent in [2, 3)
    """

    times: FloatArray
    level1: FloatArray
    level2: FloatArray
    p: float = 2.5

    def __post_init__(self) -> None:
        times = np.array(self.times, dtype=np.float64)
        level1 = np.array(self.level1, dtype=np.float64)
        level2 = np.array(self.level2, dtype=np.float64)
        if times.ndim != 1 or len(times) < 2:
            raise InvalidInputError("a rough path needs a grid of at least two points")
        if times[0] != 0.0 or np.any(np.diff(times) <= 0.0):
            raise InvalidInputError("times must start at 0 and be strictly increasing")
        n_int = len(times) - 1
        if level1.ndim == 1:
            level1 = level1[:, None]
        if level1.ndim != 2 or level1.shape[0] != n_int:
            raise ShapeMismatchError(f"level1 must have shape ({n_int}, N)")
        dim = level1.shape[1]
        if level2.shape != (n_int, dim, dim):
            raise ShapeMismatchError(
                f"level2 must have shape ({n_int}, {dim}, {dim}), got {level2.shape}"
            )
        if not 2.0 <= self.p < 3.0:
            raise InvalidParameterError(f"p must lie in [2, 3), got {self.p}")
        object.__setattr__(self, "times", _frozen(times))
        object.__setattr__(self, "level1", _frozen(level1))
        object.__setattr__(self, "level2", _frozen(level2))

    @property
    def n_points(self) -> int:
        return len(self.times)

    @property
    def dim(self) -> int:
        return int(self.level1.shape[1])

    def query(self, i: int, j: int) -> Tuple[FloatArray, FloatArray]:
        """(X1_{t_i t_j}, X2_{t_i t_j}) by left-to-right Chen composition"""
        n = self.n_points
        if not (0 <= i < j < n):
            raise InvalidRangeError(f"need 0 <= i < j < {n}, got ({i}, {j})")
        acc1 = np.zeros(self.dim)
        acc2 = np.zeros((self.dim, self.dim))
        for k in range(i, j):
            acc2 = acc2 + self.level2[k] + np.einsum("a,b->ab", acc1, self.level1[k])
            acc1 = acc1 + self.level1[k]
        return acc1, acc2

    @cached_property
    def _pair_tables(self) -> Tuple[FloatArray, FloatArray]:
        n, dim = self.n_points, self.dim
        t1 = np.zeros((n, n, dim))
        t2 = np.zeros((n, n, dim, dim))
        for j in range(1, n):
            b1, b2 = self.level1[j - 1], self.level2[j - 1]
            prev1, prev2 = t1[:j, j - 1], t2[:j, j - 1]
            t2[:j, j] = prev2 + b2 + np.einsum("ia,b->iab", prev1, b1)
            t1[:j, j] = prev1 + b1
        logger.debug("composed pair tables on {} grid points", n)
        return _frozen(t1), _frozen(t2)

    def pair_tables(self) -> Tuple[FloatArray, FloatArray]:
        """All pair values, shapes (n, n, N) and (n, n, N, N); zero for i >= j.

        Each entry is composed in the same order as `query`, so the two agree
        bit for bit.
        """
        return self._pair_tables

    def is_geometric(self, tol: float = GEOMETRIC_TOL) -> bool:
        return geometricity_defect(self) <= tol

    def to_document(self) -> RoughPathDocument:
        n_int = self.n_points - 1
        return {
            "times": self.times.tolist(),
            "level1": self.level1.tolist(),
            "level2": self.level2.reshape(n_int, -1).tolist(),
            "p": self.p,
        }

    @classmethod
    def from_document(cls, doc: RoughPathDocument) -> "RoughPathGrid":
        level1 = np.asarray(doc["level1"], dtype=np.float64)
        if level1.ndim == 1:
            level1 = level1[:, None]
        dim = level1.shape[1]
        level2 = np.asarray(doc["level2"], dtype=np.float64).reshape(-1, dim, dim)
        return cls(np.asarray(doc["times"]), level1, level2, doc.get("p", 2.5))


def lift_piecewise_linear(path: GridPath, p: float = 2.5) -> RoughPathGrid:
    """Canonical lift of the piecewise-linear interpolant of `path`.

    On each interval the iterated integral of a straight segment is
    X2^{ij} = 1/2 dx^i dx^j.
    """
    delta = path.increments
    level2 = 0.5 * np.einsum("ka,kb->kab", delta, delta)
    logger.debug("lifted {}-dim path on {} points", path.dim, path.n_points)
    return RoughPathGrid(path.times, delta, level2, p)


def ito_lift(path: GridPath, p: float = 2.5) -> RoughPathGrid:
    """Non-geometric blocks 1/2 dx (x) dx - 1/2 h Id of an Ito-type enhancement"""
    delta = path.increments
    widths = np.diff(path.times)
    eye = np.eye(path.dim)
    level2 = 0.5 * np.einsum("ka,kb->kab", delta, delta) - 0.5 * np.einsum(
        "k,ab->kab", widths, eye
    )
    return RoughPathGrid(path.times, delta, level2, p)


def query(X: RoughPathGrid, i: int, j: int) -> Tuple[FloatArray, FloatArray]:
    return X.query(i, j)


def chen_defect(X: RoughPathGrid, table: FloatArray) -> float:
    """Largest violation of table_st = table_su + table_ut + X1_su (x) X1_ut.

    Args:
        X: supplies the level-1 values
        table: level-2 candidate on all pairs, shape (n, n, N, N)

    Returns:
        float: max-norm defect over all grid triples s < u < t
    """
    n, dim = X.n_points, X.dim
    table = np.asarray(table, dtype=np.float64)
    if table.shape != (n, n, dim, dim):
        raise ShapeMismatchError(
            f"table must have shape {(n, n, dim, dim)}, got {table.shape}"
        )
    t1, _ = X.pair_tables()
    worst = 0.0
    for k in range(1, n - 1):
        outer = np.einsum("ia,jb->ijab", t1[:k, k], t1[k, k + 1 :])
        defect = (
            table[:k, k + 1 :]
            - table[:k, k][:, None]
            - table[k, k + 1 :][None, :]
            - outer
        )
        worst = max(worst, float(np.max(np.abs(defect))))
    return worst


def geometricity_defect(X: RoughPathGrid) -> float:
    """max_k |Sym(X2_k) - 1/2 X1_k (x) X1_k| entrywise"""
    sym = 0.5 * (X.level2 + np.swapaxes(X.level2, 1, 2))
    square = 0.5 * np.einsum("ka,kb->kab", X.level1, X.level1)
    return float(np.max(np.abs(sym - square)))


def cumulative_level1(
    X: RoughPathGrid, origin: Optional[FloatArray] = None
) -> GridPath:
    """Path origin + X1_{0,t_k} rebuilt from the blocks"""
    start = np.zeros(X.dim) if origin is None else np.asarray(origin, dtype=np.float64)
    values = np.vstack([start, start + np.cumsum(X.level1, axis=0)])
    return GridPath(X.times, values)


def brownian_driver(n_steps: int, dim: int, seed: int) -> GridPath:
    """Brownian sample on a uniform grid of [0, 1], anchored at the origin.

    Increments are independent centred Gaussians with variance equal to the
    step width; the same seed always gives the same path.
    """
    if n_steps < 1:
        raise InvalidInputError("n_steps must be at least 1")
    if dim < 1:
        raise InvalidInputError("dim must be at least 1")
    rng = make_rng(seed)
    h = 1.0 / n_steps
    delta = rng.normal(0.0, np.sqrt(h), size=(n_steps, dim))
    values = np.vstack([np.zeros(dim), np.cumsum(delta, axis=0)])
    logger.debug("sampled brownian driver n={} dim={} seed={}", n_steps, dim, seed)
    return GridPath(np.linspace(0.0, 1.0, n_steps + 1), values)
