"""Desk-scale acceptance battery; run alone with `pytest -m slow`."""

import itertools
import math
from pathlib import Path
from typing import Callable

import numpy as np
import pytest

from rrde import run
from rrde._experiments.gronwall import random_instance
from rrde.config import parse_config
from rrde.helpers.builders.fields import build_field
from rrde.roughpath import (
    GridPath,
    brownian_driver,
    chen_defect,
    geometricity_defect,
    ito_lift,
    lift_piecewise_linear,
)
from rrde.sewing import (
    Germ,
    contraction_check,
    gronwall_constant,
    gronwall_verify,
    sew,
)
from rrde.skorohod import (
    check_lipschitz,
    check_skorohod_bound,
    skorohod_1d,
)
from rrde.solver import (
    VectorField,
    remainder_diagnostics,
    solve_reflected,
    stability_probe,
    wong_zakai_study,
)
from rrde.variation import FunctionControl, pvar_2index, pvar_bruteforce

pytestmark = pytest.mark.slow

Driver = Callable[[int], GridPath]


def walk(rng: np.random.Generator, n: int, dim: int) -> GridPath:
    steps = rng.normal(0.0, 1.0 / math.sqrt(n), (n - 1, dim))
    values = np.vstack([np.zeros((1, dim)), np.cumsum(steps, axis=0)])
    return GridPath(np.linspace(0.0, 1.0, n), values)


def test_chen_relation_on_random_lifts(rng):
    worst = 0.0
    for _ in range(100):
        n = int(rng.integers(3, 201))
        dim = int(rng.integers(1, 4))
        X = lift_piecewise_linear(walk(rng, n, dim))
        _, level2 = X.pair_tables()
        worst = max(worst, chen_defect(X, level2))

    assert worst <= 1e-12


def test_geometricity_and_its_negative_control(rng):
    for n in (16, 100, 257):
        path = walk(rng, n, 3)
        h = 1.0 / (n - 1)

        assert geometricity_defect(lift_piecewise_linear(path)) <= 1e-14
        assert abs(geometricity_defect(ito_lift(path)) - 0.5 * h) <= 1e-14


@pytest.mark.parametrize("p", [1.0, 2.0, 2.5, 3.0])
def test_pvar_dynamic_programme_against_enumeration(rng, p):
    for _ in range(200):
        n = int(rng.integers(2, 13))
        table = np.triu(rng.normal(0.0, 1.0, (n, n)), k=1)

        dp = pvar_2index(table, p).control(0, n - 1)

        assert abs(dp - pvar_bruteforce(table, p)) <= 1e-12 * max(1.0, dp)


def test_skorohod_map_properties(rng):
    times = np.linspace(0.0, 1.0, 100)
    for _ in range(1000):
        values = rng.uniform(0.0, 0.3) + np.concatenate(
            [[0.0], np.cumsum(rng.normal(0.0, 0.1, 99))]
        )
        other = rng.uniform(0.0, 0.3) + np.concatenate(
            [[0.0], np.cumsum(rng.normal(0.0, 0.1, 99))]
        )
        g, g2 = GridPath(times, values), GridPath(times, other)
        out = skorohod_1d(g)

        assert out.complementarity_sum() == 0.0
        assert check_skorohod_bound(g, out).max_ratio <= 8.0
        assert check_lipschitz(g, g2) <= 2.0


def test_sewing(rng):
    values = np.cumsum(rng.integers(-3, 4, 65)).astype(np.float64)
    grid = np.linspace(0.0, 1.0, 65)
    additive = Germ(grid, lambda i, j: values[j] - values[i])
    assert np.all(sew(additive).remainder == 0.0)

    def young(n: int) -> Germ:
        times = np.linspace(0.0, 1.0, n + 1)
        return Germ(times, lambda i, j: times[i] * (times[j] - times[i]))

    assert abs(sew(young(2**10)).increments[0, -1, 0] - 0.5) <= 5e-4

    constants = []
    for n in (16, 32, 64, 128):
        germ = young(n)
        omega = FunctionControl(germ.times, lambda s, t: t - s)
        constants.append(contraction_check(germ, omega, zeta=2.0))
    assert max(constants) <= 2.0 * min(constants)


def test_rough_gronwall(rng):
    sweep = itertools.product((0.1, 0.5, 1.0, 2.0, 5.0), (0.01, 1.0), (1.0, 2.5))
    for C, L, kappa in sweep:
        expected = max(1.0 / L, (2.0 * C * math.e**2) ** kappa)
        assert abs(gronwall_constant(C, L, kappa) - expected) <= 1e-12 * expected

    verdicts = [
        gronwall_verify(random_instance(rng, C=1.0, L=1.0, kappa=1.0))
        for _ in range(500)
    ]

    assert all(v.consistent for v in verdicts)
    assert any(v.hypothesis_holds for v in verdicts)


def test_constant_field_oracle(rng):
    for _ in range(100):
        n = int(rng.integers(2, 201))
        dim = int(rng.integers(1, 4))
        steps = np.round(rng.normal(0.0, 1.0, (n, dim)) * 2**5) / 2**8
        values = np.vstack([np.zeros((1, dim)), np.cumsum(steps, axis=0)])
        path = GridPath(np.linspace(0.0, 1.0, n + 1), values)
        e1 = np.eye(dim)[0]
        vf = VectorField(dim, lambda y: e1, lambda y: np.zeros(dim))
        a = float(rng.integers(0, 64)) / 2**8

        result = solve_reflected(vf, lift_piecewise_linear(path), a)
        oracle = skorohod_1d(path.component(0).shifted(a))

        assert np.max(np.abs(result.y.values - oracle.y.values)) <= 1e-14


def test_exponential_convergence(time_driver: Driver, exponential_field):
    errors = []
    for k in range(6, 11):
        X = lift_piecewise_linear(time_driver(2**k))
        y_end = solve_reflected(exponential_field, X, 1.0).y.values[-1, 0]
        errors.append(abs(y_end - math.e))

    assert all(math.log2(a / b) >= 1.9 for a, b in zip(errors, errors[1:]))
    assert errors[-1] <= 1e-5


def test_absorbing_boundary(time_driver: Driver):
    vf = VectorField(1, lambda y: -1.0, lambda y: 0.0)
    for n in (16, 128, 1024):
        path = time_driver(n)

        result = solve_reflected(vf, lift_piecewise_linear(path), 0.0)

        assert np.all(result.y.values == 0.0)
        np.testing.assert_array_equal(result.m.scalar, path.times)


def test_remainder_decay(time_driver: Driver, exponential_field):
    two_step = []
    for n in (64, 128, 256, 512):
        X = lift_piecewise_linear(time_driver(n))
        r = solve_reflected(exponential_field, X, 1.0)
        diagnostics = remainder_diagnostics(r, X, exponential_field, 2.5)
        two_step.append(diagnostics.max_two_step)

    assert all(a / b >= 3.5 for a, b in zip(two_step, two_step[1:]))


WONG_ZAKAI_INSTANCE = {
    "experiment": "wong-zakai",
    "driver": {"kind": "brownian", "n": 2**12, "seed": 7},
    "vf": {"name": "bounded", "params": {"scale": 0.7}},
    "a": 1.0,
    "levels": 5,
}


def test_wong_zakai_on_a_brownian_driver():
    field = build_field("bounded", 1, {"scale": 0.7})
    fine = brownian_driver(2**12, 1, seed=7)

    report = wong_zakai_study(field, fine, 1.0, levels=5)

    assert len(report.distances) == 5
    assert report.is_decreasing()
    assert report.worst_ratio() < 0.75
    assert report.distances[-1] <= report.distances[0] / 8.0
    assert report.m_totals == [0.0] * 6


def test_wong_zakai_experiment_passes_on_the_brownian_instance(tmp_path: Path):
    summary = run(parse_config(WONG_ZAKAI_INSTANCE), out=tmp_path)

    report = summary.reports[0]
    assert summary.passed, report.failing()
    decreasing = next(c for c in report.checks if c.name == "distances-decreasing")
    assert decreasing.threshold == 1.0
    assert decreasing.value is not None
    assert decreasing.value <= 1.0


@pytest.mark.parametrize(
    "field,a",
    [
        (VectorField(1, lambda y: y, lambda y: 1.0), 1.0),
        (VectorField(1, lambda y: -1.0 + 0.5 * y, lambda y: 0.5), 0.5),
    ],
    ids=["free", "touching"],
)
def test_stability_across_refinements(time_driver: Driver, field, a):
    ratios = []
    for n in (64, 128, 256):
        X = lift_piecewise_linear(time_driver(n))
        ratios.append(stability_probe(field, X, a, a + 1e-3).ratio)

    assert min(ratios) > 0.0
    assert (max(ratios) - min(ratios)) / min(ratios) <= 0.2
