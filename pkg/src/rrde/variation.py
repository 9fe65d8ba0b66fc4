"""p-variation of grid objects and superadditive controls.

Partition suprema are taken over partitions made of grid points only, which
is the exact p-variation of the grid object. The table of a p-variation
control comes from the dynamic programme

    M(i, i) = 0,  M(i, j) = max_{i <= k < j} M(i, k) + |g_{k j}|^p
"""

import itertools
from abc import ABC, abstractmethod
from dataclasses import dataclass
from typing import Callable, Dict, Literal, Optional, Tuple, Union

import numpy as np
from loguru import logger

from ._types.generics import FloatArray, PairFn
from .errors import InvalidParameterError, InvalidRangeError, ShapeMismatchError
from .roughpath import GridPath, RoughPathGrid

__all__ = [
    "Control",
    "TableControl",
    "FunctionControl",
    "PVarControl",
    "SumControl",
    "PowerControl",
    "ScaledControl",
    "PVarResult",
    "zero_control",
    "pvar_2index",
    "pvar_path",
    "pvar_bruteforce",
    "remainder_variation",
    "rough_path_control",
    "superadditivity_defect",
    "control_algebra",
]

Column = Callable[[int], FloatArray]
"""column(j) -> |g_{k j}|^p for k = 0..j-1"""


class Control(ABC):
    """Nonnegative function on grid pairs i <= j, zero on the diagonal"""

    def __init__(self, times: FloatArray) -> None:
        self._times = np.asarray(times, dtype=np.float64)

    @property
    def times(self) -> FloatArray:
        return self._times

    @property
    def n_points(self) -> int:
        return len(self._times)

    def same_grid(self, other: "Control") -> bool:
        return self.n_points == other.n_points and bool(
            np.array_equal(self._times, other._times)
        )

    def _check_pair(self, i: int, j: int) -> None:
        if not (0 <= i <= j < self.n_points):
            raise InvalidRangeError(
                f"need 0 <= i <= j < {self.n_points}, got ({i}, {j})"
            )

    def __call__(self, i: int, j: int) -> float:
        self._check_pair(i, j)
        if i == j:
            return 0.0
        return self._value(i, j)

    @abstractmethod
    def _value(self, i: int, j: int) -> float:
        raise NotImplementedError

    @abstractmethod
    def table(self) -> FloatArray:
        """All values as an (n, n) array, zero on and below the diagonal"""
        raise NotImplementedError


class TableControl(Control):
    def __init__(self, times: FloatArray, table: FloatArray) -> None:
        super().__init__(times)
        table = np.triu(np.asarray(table, dtype=np.float64), k=1)
        if table.shape != (self.n_points, self.n_points):
            raise ShapeMismatchError(
                f"control table must be {self.n_points}x{self.n_points}"
            )
        self._table = table

    def _value(self, i: int, j: int) -> float:
        return float(self._table[i, j])

    def table(self) -> FloatArray:
        return self._table


class FunctionControl(Control):
    """Closed-form control phi(s, t) evaluated at grid times, e.g. (t - s)^2"""

    def __init__(
        self,
        times: FloatArray,
        fn: Callable[[FloatArray, FloatArray], FloatArray],
    ) -> None:
        super().__init__(times)
        self._fn = fn

    def _value(self, i: int, j: int) -> float:
        return float(self._fn(self._times[i : i + 1], self._times[j : j + 1])[0])

    def table(self) -> FloatArray:
        s, t = np.meshgrid(self._times, self._times, indexing="ij")
        return np.triu(np.asarray(self._fn(s, t), dtype=np.float64), k=1)


class PVarControl(Control):
    """omega_g(i, j) = ||g||^p over [t_i, t_j], computed lazily.

    Single rows of the dynamic programme cost O(n^2) and are memoized; the
    full table costs O(n^3) and is only built on request.
    """

    def __init__(self, times: FloatArray, column: Column) -> None:
        super().__init__(times)
        self._column = column
        self._rows: Dict[int, FloatArray] = {}
        self._table: Optional[FloatArray] = None

    def row(self, i: int) -> FloatArray:
        """omega(i, j) for j = i..n-1"""
        if self._table is not None:
            return self._table[i, i:]
        if i not in self._rows:
            n = self.n_points
            row = np.zeros(n - i)
            for j in range(i + 1, n):
                row[j - i] = np.max(row[: j - i] + self._column(j)[i:j])
            self._rows[i] = row
        return self._rows[i]

    def _value(self, i: int, j: int) -> float:
        return float(self.row(i)[j - i])

    def table(self) -> FloatArray:
        if self._table is None:
            n = self.n_points
            best = np.full((n, n), -np.inf)
            np.fill_diagonal(best, 0.0)
            for j in range(1, n):
                cand = best[:j, :j] + self._column(j)[None, :]
                best[:j, j] = np.max(cand, axis=1)
            self._table = np.triu(best, k=1)
            logger.debug("built full p-variation table on {} points", n)
        return self._table


class SumControl(Control):
    def __init__(self, a: Control, b: Control) -> None:
        if not a.same_grid(b):
            raise ShapeMismatchError("controls live on different grids")
        super().__init__(a.times)
        self._a, self._b = a, b

    def _value(self, i: int, j: int) -> float:
        return self._a(i, j) + self._b(i, j)

    def table(self) -> FloatArray:
        return self._a.table() + self._b.table()


class PowerControl(Control):
    """c^theta, a control whenever theta >= 1"""

    def __init__(self, c: Control, theta: float) -> None:
        if theta < 1.0:
            raise InvalidParameterError(f"power must be >= 1, got {theta}")
        super().__init__(c.times)
        self._c, self._theta = c, theta

    def _value(self, i: int, j: int) -> float:
        return self._c(i, j) ** self._theta

    def table(self) -> FloatArray:
        return self._c.table() ** self._theta


class ScaledControl(Control):
    def __init__(self, c: Control, factor: float) -> None:
        if factor < 0.0:
            raise InvalidParameterError(f"scale must be nonnegative, got {factor}")
        super().__init__(c.times)
        self._c, self._factor = c, factor

    def _value(self, i: int, j: int) -> float:
        return self._factor * self._c(i, j)

    def table(self) -> FloatArray:
        return self._factor * self._c.table()


@dataclass(frozen=True)
class PVarResult:
    norm: float
    control: PVarControl
    p: float


def zero_control(times: FloatArray) -> Control:
    return FunctionControl(times, lambda s, t: np.zeros(np.broadcast(s, t).shape))


def _magnitudes(table: FloatArray) -> FloatArray:
    """Euclidean (vectors) or Frobenius (matrices) norm of every pair value"""
    n = table.shape[0]
    if table.ndim == 2:
        return np.abs(table)
    return np.linalg.norm(table.reshape(n, n, -1), axis=-1)


def _as_table(g: Union[FloatArray, PairFn], n: Optional[int]) -> FloatArray:
    if callable(g):
        if n is None:
            raise InvalidParameterError("grid size is required for a callable map")
        first = np.asarray(g(0, 1), dtype=np.float64)
        table = np.zeros((n, n) + first.shape)
        for i in range(n):
            for j in range(i + 1, n):
                table[i, j] = g(i, j)
        return table
    table = np.asarray(g, dtype=np.float64)
    if table.ndim < 2 or table.shape[0] != table.shape[1]:
        raise ShapeMismatchError("a 2-index map must have shape (n, n, ...)")
    return table


def _control_from_table(
    table: FloatArray, p: float, times: Optional[FloatArray]
) -> PVarResult:
    n = table.shape[0]
    grid = np.arange(n, dtype=np.float64) if times is None else np.asarray(times)
    if len(grid) != n:
        raise ShapeMismatchError(f"{len(grid)} times for a {n}-point map")
    weights = _magnitudes(table) ** p
    control = PVarControl(grid, lambda j: weights[:j, j])
    norm = control(0, n - 1) ** (1.0 / p)
    return PVarResult(norm=norm, control=control, p=p)


def pvar_2index(
    g: Union[FloatArray, PairFn],
    p: float,
    times: Optional[FloatArray] = None,
) -> PVarResult:
    """p-variation of a 2-index map on grid partitions.

    Args:
        g: pair table of shape (n, n, ...) or a function of (i, j)
        p: exponent, p >= 1
        times: grid the control is attached to; defaults to 0..n-1

    Returns:
        PVarResult: norm and the lazily computed control
    """
    if p < 1.0:
        raise InvalidParameterError(f"p-variation needs p >= 1, got {p}")
    n = None if times is None else len(times)
    return _control_from_table(_as_table(g, n), p, times)


def remainder_variation(
    g: Union[FloatArray, PairFn],
    q: float,
    times: Optional[FloatArray] = None,
) -> PVarResult:
    """Same programme as `pvar_2index` for exponents q in (0, 1).

    Remainders of a rough expansion are measured in (p/3)-variation, which is
    below one for every p < 3.
    """
    if q <= 0.0:
        raise InvalidParameterError(f"exponent must be positive, got {q}")
    n = None if times is None else len(times)
    return _control_from_table(_as_table(g, n), q, times)


def pvar_path(y: GridPath, p: float) -> PVarResult:
    """p-variation of a path, i.e. of its increment map dy"""
    if p < 1.0:
        raise InvalidParameterError(f"p-variation needs p >= 1, got {p}")
    values = y.values

    def column(j: int) -> FloatArray:
        return np.linalg.norm(values[j] - values[:j], axis=-1) ** p

    control = PVarControl(y.times, column)
    norm = control(0, y.n_points - 1) ** (1.0 / p)
    return PVarResult(norm=norm, control=control, p=p)


def pvar_bruteforce(
    g: Union[FloatArray, PairFn], p: float, n: Optional[int] = None
) -> float:
    """Exhaustive search over all 2^(n-2) grid partitions of [t_0, t_{n-1}].

    Exponential cost; a reference for small grids.
    """
    table = _as_table(g, n)
    size = table.shape[0]
    weights = _magnitudes(table) ** p
    best = 0.0
    interior = range(1, size - 1)
    for mask in itertools.product((False, True), repeat=size - 2):
        points = [0] + [k for k, keep in zip(interior, mask) if keep] + [size - 1]
        total = sum(weights[a, b] for a, b in zip(points[:-1], points[1:]))
        best = max(best, float(total))
    return best


def _prefix_signature(X: RoughPathGrid) -> Tuple[FloatArray, FloatArray]:
    """X1_{0 k} and X2_{0 k} for every k"""
    n, dim = X.n_points, X.dim
    s = np.zeros((n, dim))
    a = np.zeros((n, dim, dim))
    for k in range(1, n):
        a[k] = a[k - 1] + X.level2[k - 1] + np.outer(s[k - 1], X.level1[k - 1])
        s[k] = s[k - 1] + X.level1[k - 1]
    return s, a


def rough_path_control(X: RoughPathGrid, p: Optional[float] = None) -> Control:
    """Homogeneous control of a rough path.

    omega_X = 2^(p-1) (||X1||^p_{p-var} + ||X2||^(p/2)_{p/2-var}), which gives
    |X1_st| + |X2_st|^(1/2) <= omega_X(s, t)^(1/p) on every pair.
    """
    p = X.p if p is None else p
    s, a = _prefix_signature(X)

    def level1_column(j: int) -> FloatArray:
        return np.linalg.norm(s[j] - s[:j], axis=-1) ** p

    def level2_column(j: int) -> FloatArray:
        inc = s[j] - s[:j]
        pairs = a[j] - a[:j] - np.einsum("ka,kb->kab", s[:j], inc)
        return np.linalg.norm(pairs.reshape(j, -1), axis=-1) ** (p / 2.0)

    c1 = PVarControl(X.times, level1_column)
    c2 = PVarControl(X.times, level2_column)
    return ScaledControl(SumControl(c1, c2), 2.0 ** (p - 1.0))


def superadditivity_defect(c: Control) -> float:
    """max over i < k < j of c(i, k) + c(k, j) - c(i, j); <= 0 for a control"""
    table = c.table()
    n = table.shape[0]
    if n < 3:
        return 0.0
    worst = -np.inf
    for k in range(1, n - 1):
        excess = table[:k, k][:, None] + table[k, k + 1 :][None, :] - table[:k, k + 1 :]
        worst = max(worst, float(np.max(excess)))
    return float(worst)


def control_algebra(
    a: Control,
    b: Control,
    op: Literal["sum", "power-mix"] = "sum",
    theta: float = 3.0,
) -> Control:
    """Combine two controls on the same grid.

    `sum` gives a + b. `power-mix` gives a + b^theta (theta >= 1), the shape
    omega_X + omega^3 used when comparing two solutions.
    """
    if not a.same_grid(b):
        raise ShapeMismatchError("controls live on different grids")
    if op == "sum":
        return SumControl(a, b)
    if op == "power-mix":
        return SumControl(a, PowerControl(b, theta))
    raise InvalidParameterError(f"unknown control operation {op!r}")
