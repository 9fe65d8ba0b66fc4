import math
from typing import (
    Dict,
    Generic,
    List,
    Mapping,
    Optional,
    Sequence,
    Tuple,
    TypeVar,
    Union,
)

import numpy as np
from loguru import logger

from .._types.generics import FloatArray
from .._types.report import CheckOutcome, CheckStatus, Report

__all__ = ["ReportStore", "TableStore"]

T = TypeVar("T")

Number = Union[float, int, np.floating, np.integer]


def _finite_or_none(x: Number) -> Optional[float]:
    value = float(x)
    return value if math.isfinite(value) else None


class BaseStore(Generic[T]):
    def __init__(self) -> None:
        self._data: Dict[str, T] = {}

    def put(self, key: str, obj: T) -> None:
        self._data[key] = obj

    def get(self, key: str) -> Optional[T]:
        return self._data.get(key)

    def items(self) -> List[Tuple[str, T]]:
        return list(self._data.items())

    def __len__(self) -> int:
        return len(self._data)


class TableStore(BaseStore[Dict[str, FloatArray]]):
    """Named column tables, written out as one CSV each"""

    def put_columns(self, name: str, columns: Mapping[str, Sequence[float]]) -> None:
        lengths = {len(col) for col in columns.values()}
        if len(lengths) > 1:
            raise ValueError(f"table {name!r} has columns of different lengths")
        self.put(name, {k: np.asarray(v, dtype=np.float64) for k, v in columns.items()})


class CheckStore(BaseStore[CheckOutcome]):
    def record(
        self,
        name: str,
        passed: bool,
        value: Optional[Number] = None,
        threshold: Optional[Number] = None,
        expected_fail: bool = False,
        detail: Optional[str] = None,
    ) -> CheckOutcome:
        """Store an outcome; an expected failure that fails is not a failure"""
        status: CheckStatus
        if passed:
            status = "pass"
        elif expected_fail:
            status = "expected-fail"
        else:
            status = "fail"
            logger.warning(
                "check {} failed (value={}, threshold={})", name, value, threshold
            )
        outcome = CheckOutcome(
            name=name,
            status=status,
            value=None if value is None else _finite_or_none(value),
            threshold=None if threshold is None else _finite_or_none(threshold),
            detail=detail,
        )
        self.put(name, outcome)
        return outcome


class ReportStore:
    def __init__(self, experiment: str, label: Optional[str] = None) -> None:
        self.experiment = experiment
        self.label = label or experiment
        self.scalars: BaseStore[Optional[float]] = BaseStore()
        self.arrays: BaseStore[List[Optional[float]]] = BaseStore()
        self.checks = CheckStore()
        self.tables = TableStore()
        self.documents: BaseStore[Mapping[str, object]] = BaseStore()

    def scalar(self, name: str, value: Number) -> None:
        self.scalars.put(name, _finite_or_none(value))

    def array(self, name: str, values: Sequence[Number]) -> None:
        self.arrays.put(name, [_finite_or_none(v) for v in values])

    def document(self, name: str, doc: Mapping[str, object]) -> None:
        """Keep a JSON document, written out as `<name>.json`"""
        self.documents.put(name, doc)

    def check(
        self,
        name: str,
        passed: bool,
        value: Optional[Number] = None,
        threshold: Optional[Number] = None,
        expected_fail: bool = False,
        detail: Optional[str] = None,
    ) -> CheckOutcome:
        return self.checks.record(name, passed, value, threshold, expected_fail, detail)

    def to_report(self, config: Optional[Mapping[str, object]] = None) -> Report:
        files = [f"{name}.csv" for name, _ in self.tables.items()]
        files += [f"{name}.json" for name, _ in self.documents.items()]
        return Report(
            experiment=self.experiment,
            label=self.label,
            config=dict(config or {}),
            scalars=dict(self.scalars.items()),
            arrays=dict(self.arrays.items()),
            checks=[c for _, c in self.checks.items()],
            files=files,
        )
