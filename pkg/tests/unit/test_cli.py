import json
from pathlib import Path
from typing import Any, Dict, Iterator

import numpy as np
import pandas as pd
import pytest
from loguru import logger

from rrde.cli import EXIT_BAD_CONFIG, EXIT_CHECK_FAILED, EXIT_OK, main


@pytest.fixture(autouse=True)
def restore_logging() -> Iterator[None]:
    yield
    logger.remove()
    logger.disable("rrde")


def write_config(tmp_path: Path, document: Dict[str, Any]) -> str:
    path = tmp_path / "config.json"
    path.write_text(json.dumps(document))
    return str(path)


def test_run_skorohod_on_a_ramp(tmp_path: Path):
    config = write_config(
        tmp_path,
        {
            "experiment": "skorohod",
            "driver": {"kind": "function", "name": "ramp-down", "n": 256},
        },
    )
    out = tmp_path / "out"

    assert main(["run", config, "--out", str(out)]) == EXIT_OK

    body = (out / "skorohod" / "reflection.csv").read_bytes()
    assert b"\r" not in body
    frame = pd.read_csv(out / "skorohod" / "reflection.csv")
    assert list(frame.columns) == ["t", "g", "y", "m"]
    np.testing.assert_allclose(frame["y"], 1.0 - frame["t"], atol=1e-15)
    np.testing.assert_array_equal(frame["m"], np.zeros(257))
    report = json.loads((out / "skorohod" / "report.json").read_text())
    assert report["files"] == ["reflection.csv", "reflection.json"]
    doc = json.loads((out / "skorohod" / "reflection.json").read_text())
    assert doc["domain"] == "half-line"
    assert doc["dim"] == 1
    np.testing.assert_allclose(doc["times"], frame["t"], atol=1e-15)
    np.testing.assert_allclose(np.ravel(doc["y"]), frame["y"], atol=1e-15)
    assert {c["name"]: c["status"] for c in report["checks"]}["measure-bound"] == "pass"


def test_run_exponential_convergence(tmp_path: Path):
    config = write_config(tmp_path, {"experiment": "exponential-convergence"})
    out = tmp_path / "out"

    assert main(["run", config, "--out", str(out)]) == EXIT_OK

    frame = pd.read_csv(out / "exponential-convergence" / "convergence.csv")
    assert list(frame.columns) == ["n", "y_end", "abs_error", "order"]
    assert list(frame["n"]) == [64, 128, 256, 512, 1024]
    assert np.isnan(frame["order"].iloc[0])
    assert frame["order"].iloc[-1] >= 1.9


def test_run_solve_writes_the_solution_document(tmp_path: Path):
    config = write_config(tmp_path, {"experiment": "solve"})
    out = tmp_path / "out"

    assert main(["run", config, "--out", str(out)]) == EXIT_OK

    report = json.loads((out / "solve" / "report.json").read_text())
    assert report["files"] == ["solution.csv", "solution.json"]
    doc = json.loads((out / "solve" / "solution.json").read_text())
    assert doc["scheme"] == "step2"
    assert doc["reflection_steps"] == 0
    assert doc["outside_hypothesis"] is False
    assert len(doc["times"]) == len(doc["y"]) == len(doc["m"]) == 257
    assert doc["y"][-1][0] == pytest.approx(np.e, rel=1e-4)
    frame = pd.read_csv(out / "solve" / "solution.csv")
    np.testing.assert_allclose(np.ravel(doc["y"]), frame["y"], atol=1e-14)


def test_verify_default_config(tmp_path: Path, capsys: pytest.CaptureFixture[str]):
    config = write_config(tmp_path, {"experiment": "solve"})

    assert main(["verify", config]) == EXIT_OK

    summary = json.loads(capsys.readouterr().out)
    checks = summary["reports"][0]["checks"]
    assert {c["name"] for c in checks} >= {
        "chen",
        "geometricity",
        "superadditivity",
        "complementarity",
        "measure-bound",
        "gronwall-implication",
    }
    assert all(c["status"] == "pass" for c in checks)
    assert not (tmp_path / "rrde-out").exists()


def test_verify_reports_ito_blocks_as_expected_failure(
    tmp_path: Path, capsys: pytest.CaptureFixture[str]
):
    config = write_config(
        tmp_path,
        {"experiment": "solve", "lift": "ito", "allow_non_geometric": True},
    )

    assert main(["verify", config]) == EXIT_OK

    summary = json.loads(capsys.readouterr().out)
    status = {c["name"]: c["status"] for c in summary["reports"][0]["checks"]}
    assert status["geometricity"] == "expected-fail"


def test_ito_blocks_without_override_fail_verification(tmp_path: Path):
    config = write_config(tmp_path, {"experiment": "solve", "lift": "ito"})

    assert main(["verify", config]) == EXIT_CHECK_FAILED
    assert main(["run", config, "--out", str(tmp_path)]) == EXIT_BAD_CONFIG


def test_invalid_config_exits_with_two(
    tmp_path: Path, capsys: pytest.CaptureFixture[str]
):
    config = write_config(tmp_path, {"experiment": "solve", "p": 0.5})

    assert main(["verify", config]) == EXIT_BAD_CONFIG
    assert "[2, 3)" in capsys.readouterr().err
    assert main(["run", str(tmp_path / "missing.json")]) == EXIT_BAD_CONFIG


def test_failing_check_is_named(tmp_path: Path, capsys: pytest.CaptureFixture[str]):
    config = write_config(
        tmp_path,
        {
            "experiment": "exponential-convergence",
            "exponents": [4, 5, 6],
            "tolerances": {"min_order": 5.0},
        },
    )

    code = main(["run", config, "--out", str(tmp_path / "out"), "--verbose"])

    assert code == EXIT_CHECK_FAILED
    assert "check failed: exponential-convergence:order" in capsys.readouterr().err


def test_indivisible_wong_zakai_grid_is_a_config_error(tmp_path: Path):
    config = write_config(
        tmp_path,
        {
            "experiment": "wong-zakai",
            "driver": {"kind": "function", "name": "sine", "n": 100},
            "levels": 3,
        },
    )

    assert main(["run", config, "--out", str(tmp_path / "out")]) == EXIT_BAD_CONFIG
