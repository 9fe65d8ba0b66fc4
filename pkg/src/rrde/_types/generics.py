from typing import Any, Callable

import numpy as np
import numpy.typing as npt

__all__ = ["FloatArray", "PairFn"]

FloatArray = npt.NDArray[np.float64]
"""Dense float64 array"""

PairFn = Callable[[int, int], Any]
"""Function of a grid index pair (i, j), i < j"""
