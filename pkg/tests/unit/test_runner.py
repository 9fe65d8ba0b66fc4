from pathlib import Path

import numpy as np
import pytest

from rrde import ConfigFile, ExperimentConfig, run, verify_all
from rrde._experiments._base import step_scaled_control
from rrde._utils.rng import SEED_ENV
from rrde.config import parse_config
from rrde.roughpath import GridPath, brownian_driver, lift_piecewise_linear
from rrde.runner import ExperimentRunner
from rrde.sewing import gronwall_constant
from rrde.variation import superadditivity_defect


def brownian_solve(label: str = "solve") -> ExperimentConfig:
    return parse_config(
        {
            "experiment": "solve",
            "label": label,
            "driver": {"kind": "brownian", "n": 128, "seed": 3},
            "vf": {"name": "bounded"},
            "a": 0.25,
        }
    ).experiments[0]


@pytest.mark.parametrize(
    "experiment", ["lift-check", "stability", "wong-zakai", "gronwall"]
)
def test_default_experiments_pass(tmp_path: Path, experiment: str):
    summary = run(parse_config({"experiment": experiment}), out=tmp_path)

    report = summary.reports[0]
    assert summary.passed, report.failing()
    assert (tmp_path / experiment / "report.json").exists()
    for name in report.files:
        assert (tmp_path / experiment / name).exists()


def test_constant_field_solve_matches_its_oracle(tmp_path: Path):
    config = parse_config(
        {
            "experiment": "solve",
            "driver": {"kind": "function", "name": "sine", "n": 128},
            "vf": {"name": "constant", "params": {"value": 0.5}},
            "a": 0.1,
        }
    )

    report = run(config, out=tmp_path).reports[0]

    status = {c.name: c.status for c in report.checks}
    assert status["constant-field-oracle"] == "pass"
    assert report.scalars["reflection_steps"] > 0


def test_orthant_solve(tmp_path: Path):
    config = parse_config(
        {
            "experiment": "solve",
            "driver": {"kind": "brownian", "n": 64, "dim": 2, "seed": 5},
            "vf": {"name": "trig", "dim": 2},
            "a": [0.1, 0.3],
        }
    )

    report = run(config, out=tmp_path).reports[0]

    assert report.passed, report.failing()
    header = (tmp_path / "solve" / "solution.csv").read_text().splitlines()[0]
    assert header == "t,y_1,y_2,m_1,m_2,dm_1,dm_2"


def test_reruns_are_byte_identical(tmp_path: Path):
    run(brownian_solve(), out=tmp_path / "first")
    run(brownian_solve(), out=tmp_path / "second")

    first = (tmp_path / "first" / "solve" / "solution.csv").read_bytes()
    second = (tmp_path / "second" / "solve" / "solution.csv").read_bytes()
    assert first == second


def test_seed_override_changes_the_driver(
    tmp_path: Path, monkeypatch: pytest.MonkeyPatch
):
    run(brownian_solve(), out=tmp_path / "configured")
    monkeypatch.setenv(SEED_ENV, "4")
    run(brownian_solve(), out=tmp_path / "override")

    first = (tmp_path / "configured" / "solve" / "solution.csv").read_bytes()
    second = (tmp_path / "override" / "solve" / "solution.csv").read_bytes()
    assert first != second


def test_concurrent_experiments_write_separate_directories(tmp_path: Path):
    config = ConfigFile(
        experiments=[brownian_solve("left"), brownian_solve("right")],
        max_workers=2,
    )

    summary = ExperimentRunner(config, tmp_path).run()

    assert [r.label for r in summary.reports] == ["left", "right"]
    left = (tmp_path / "left" / "solution.csv").read_bytes()
    right = (tmp_path / "right" / "solution.csv").read_bytes()
    assert left == right


def test_verify_all_writes_nothing(tmp_path: Path, monkeypatch: pytest.MonkeyPatch):
    monkeypatch.chdir(tmp_path)

    summary = verify_all(brownian_solve())

    assert summary.reports[0].experiment == "solve"
    assert summary.reports[0].files == []
    assert list(tmp_path.iterdir()) == []
    values = summary.reports[0].scalars
    assert values["n_points"] == 129
    assert np.isfinite(values["gronwall_hypothesis"])


@pytest.mark.parametrize("kappa", [1.0, 2.5])
def test_gronwall_cross_check_hypothesis_holds_on_a_smooth_driver(kappa: float):
    config = parse_config(
        {
            "experiment": "solve",
            "driver": {"kind": "function", "name": "identity", "n": 64},
            "vf": {"name": "affine"},
            "a": 1.0,
            "gronwall": {"kappa": kappa},
        }
    )

    report = verify_all(config).reports[0]

    assert report.scalars["gronwall_hypothesis"] == 1.0
    assert report.scalars["gronwall_conclusion"] == 1.0
    status = {c.name: c.status for c in report.checks}
    assert status["gronwall-implication"] == "pass"


def test_gronwall_experiment_cross_check_is_not_vacuous(tmp_path: Path):
    report = run(parse_config({"experiment": "gronwall"}), out=tmp_path).reports[0]

    assert report.scalars["cross_check_hypothesis"] == 1.0
    assert report.passed, report.failing()


def test_step_scaled_control_passes_the_step_gate():
    X = lift_piecewise_linear(brownian_driver(128, 1, seed=3))
    c = gronwall_constant(1.0, 1.0, 2.5)

    omega = step_scaled_control(X, 1.0, 1.0, 2.5)

    steps = np.diagonal(omega.table(), offset=1)
    assert np.max(steps) == pytest.approx(0.5 / c, rel=1e-12)
    assert superadditivity_defect(omega) <= 1e-12 * (1.0 + np.max(omega.table()))


def test_step_scaled_control_keeps_a_flat_driver():
    X = lift_piecewise_linear(GridPath(np.linspace(0.0, 1.0, 9), np.zeros(9)))

    omega = step_scaled_control(X, 1.0, 1.0, 1.0)

    assert np.all(omega.table() == 0.0)
