import math

import numpy as np
import pytest

from rrde.errors import InvariantViolation
from rrde.stores import ReportStore, TableStore
from rrde._types.report import Summary


@pytest.fixture
def report_store() -> ReportStore:
    return ReportStore("solve", "touching")


def test_scalar_store(report_store: ReportStore):
    report_store.scalar("m_T", 0.5)
    report_store.scalar("ratio", math.inf)
    assert len(report_store.scalars) == 2
    value = report_store.scalars.get("m_T")
    assert value == 0.5
    value = report_store.scalars.get("ratio")
    assert value is None
    value = report_store.scalars.get("invalid-name")
    assert value is None


def test_array_store(report_store: ReportStore):
    report_store.array("distances", np.array([0.1, 0.05, np.nan]))
    values = report_store.arrays.get("distances")
    assert values == [0.1, 0.05, None]


def test_check_store(report_store: ReportStore):
    passed = report_store.check("complementarity", True, 0.0, 0.0)
    assert passed.status == "pass"
    failed = report_store.check("order", False, 1.2, 1.9)
    assert failed.status == "fail"
    expected = report_store.check("geometricity", False, expected_fail=True)
    assert expected.status == "expected-fail"
    assert len(report_store.checks) == 3


def test_document_store(report_store: ReportStore):
    report_store.document("reflection", {"domain": "half-line", "dim": 1})

    assert len(report_store.documents) == 1
    assert report_store.documents.get("reflection") == {
        "domain": "half-line",
        "dim": 1,
    }
    assert report_store.documents.get("solution") is None


def test_table_store():
    tables = TableStore()
    tables.put_columns("solution", {"t": [0.0, 1.0], "y": [1.0, 2.0]})
    table = tables.get("solution")
    assert table
    np.testing.assert_array_equal(table["y"], [1.0, 2.0])
    with pytest.raises(ValueError):
        tables.put_columns("broken", {"t": [0.0, 1.0], "y": [1.0]})


def test_report(report_store: ReportStore):
    report_store.scalar("n_points", 65)
    report_store.check("positivity", True)
    report_store.check("measure-bound", False, 9.0, 8.0)
    report_store.tables.put_columns("solution", {"t": [0.0, 1.0]})
    report_store.document("solution", {"times": [0.0, 1.0], "scheme": "step2"})

    report = report_store.to_report({"experiment": "solve"})

    assert report.label == "touching"
    assert report.files == ["solution.csv", "solution.json"]
    assert not report.passed
    assert report.failing() == ["measure-bound"]
    assert report.config == {"experiment": "solve"}


def test_summary_names_failing_checks(report_store: ReportStore):
    report_store.check("order", False, 1.2, 1.9)
    other = ReportStore("skorohod")
    other.check("lipschitz", True)

    summary = Summary(reports=[report_store.to_report(), other.to_report()])

    assert summary.failing() == ["touching:order"]
    with pytest.raises(InvariantViolation) as e:
        summary.raise_for_failures()
    assert e.value.check == "touching:order"
