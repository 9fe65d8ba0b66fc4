import numpy as np
import pytest

from rrde.errors import (
    InvalidInputError,
    InvalidParameterError,
    InvalidRangeError,
    ShapeMismatchError,
)
from rrde.roughpath import (
    GridPath,
    RoughPathGrid,
    brownian_driver,
    chen_defect,
    cumulative_level1,
    geometricity_defect,
    ito_lift,
    lift_piecewise_linear,
    query,
)


def random_path(rng: np.random.Generator, n: int, dim: int) -> GridPath:
    times = np.concatenate([[0.0], np.cumsum(rng.uniform(0.1, 1.0, n - 1))])
    values = np.cumsum(rng.normal(0.0, 1.0, (n, dim)), axis=0)
    return GridPath(times, values)


def test_scalar_values_are_promoted():
    path = GridPath([0.0, 0.5, 1.0], [1.0, 2.0, 0.0])

    assert path.dim == 1
    assert path.values.shape == (3, 1)
    assert path.horizon == 1.0
    np.testing.assert_array_equal(path.scalar, [1.0, 2.0, 0.0])


@pytest.mark.parametrize(
    "times,values,error",
    [
        ([0.1, 0.5, 1.0], [0.0, 0.0, 0.0], InvalidInputError),
        ([0.0, 0.5, 0.5], [0.0, 0.0, 0.0], InvalidInputError),
        ([0.0, 0.5, 1.0], [0.0, 0.0], ShapeMismatchError),
        ([0.0, 0.5, 1.0], [0.0, np.nan, 0.0], InvalidInputError),
        ([0.0], [0.0], InvalidInputError),
    ],
)
def test_grid_path_rejects_bad_grids(times, values, error):
    with pytest.raises(error):
        GridPath(times, values)


def test_grid_path_is_read_only():
    path = GridPath([0.0, 1.0], [0.0, 1.0])

    with pytest.raises(ValueError):
        path.values[0, 0] = 5.0


def test_coarsen_keeps_endpoints():
    path = GridPath.from_function(lambda t: t * t, 8)

    coarse = path.coarsen(4)

    assert coarse.n_points == 3
    np.testing.assert_array_equal(coarse.times, [0.0, 0.5, 1.0])
    with pytest.raises(InvalidParameterError):
        path.coarsen(3)


def test_piecewise_linear_lift_blocks():
    path = GridPath([0.0, 1.0, 2.0], [[0.0, 0.0], [1.0, 2.0], [1.0, -1.0]])

    X = lift_piecewise_linear(path)

    np.testing.assert_array_equal(X.level1, [[1.0, 2.0], [0.0, -3.0]])
    np.testing.assert_array_equal(X.level2[0], [[0.5, 1.0], [1.0, 2.0]])
    assert X.is_geometric()
    assert geometricity_defect(X) == 0.0


def test_lift_of_time_and_its_square():
    errors = []
    for n in (16, 32, 64, 128):
        path = GridPath.from_function(lambda t: np.array([t, t * t]), n)

        _, level2 = query(lift_piecewise_linear(path), 0, n)

        assert level2[0, 1] + level2[1, 0] == pytest.approx(1.0, abs=1e-14)
        errors.append(abs(level2[0, 1] - 2.0 / 3.0))
        assert abs(level2[1, 0] - 1.0 / 3.0) == pytest.approx(errors[-1], abs=1e-14)

    assert all(a >= 2.0 * b for a, b in zip(errors, errors[1:]))
    assert errors[-1] <= 1e-4


def test_ito_lift_defect_is_half_the_step(rng):
    n = 64
    times = np.linspace(0.0, 1.0, n + 1)
    path = GridPath(times, np.cumsum(rng.normal(0.0, 0.1, (n + 1, 2)), axis=0))

    X = ito_lift(path)

    assert not X.is_geometric()
    assert abs(geometricity_defect(X) - 0.5 / n) <= 1e-14


def test_query_matches_pair_tables_bitwise(rng):
    X = lift_piecewise_linear(random_path(rng, 30, 3))
    t1, t2 = X.pair_tables()

    for i, j in [(0, 1), (0, 29), (4, 17), (28, 29), (10, 11)]:
        x1, x2 = query(X, i, j)
        np.testing.assert_array_equal(x1, t1[i, j])
        np.testing.assert_array_equal(x2, t2[i, j])


def test_query_rejects_unordered_pairs(rng):
    X = lift_piecewise_linear(random_path(rng, 5, 1))

    with pytest.raises(InvalidRangeError):
        X.query(3, 3)
    with pytest.raises(InvalidRangeError):
        X.query(3, 1)
    with pytest.raises(InvalidRangeError):
        X.query(0, 5)


def test_pair_tables_satisfy_chen(rng):
    for _ in range(10):
        n = int(rng.integers(3, 60))
        dim = int(rng.integers(1, 4))
        X = lift_piecewise_linear(random_path(rng, n, dim))
        _, t2 = X.pair_tables()

        assert chen_defect(X, t2) <= 1e-12


def test_chen_defect_detects_corruption(rng):
    X = lift_piecewise_linear(random_path(rng, 10, 2))
    _, t2 = X.pair_tables()
    corrupted = t2.copy()
    corrupted[2, 7, 0, 1] += 0.25

    assert chen_defect(X, corrupted) >= 0.25 - 1e-12
    with pytest.raises(ShapeMismatchError):
        chen_defect(X, t2[:5])


def test_level1_reconstruction_is_exact():
    times = np.linspace(0.0, 1.0, 9)
    values = np.arange(9.0) * 0.25
    X = lift_piecewise_linear(GridPath(times, values))

    rebuilt = cumulative_level1(X)

    np.testing.assert_array_equal(rebuilt.scalar, values)


def test_rough_path_rejects_p_outside_range():
    with pytest.raises(InvalidParameterError):
        RoughPathGrid([0.0, 1.0], [[1.0]], [[[0.5]]], p=3.0)
    with pytest.raises(ShapeMismatchError):
        RoughPathGrid([0.0, 1.0], [[1.0]], [[[0.5, 0.0]]])


def test_rough_path_document_round_trip(rng):
    X = ito_lift(random_path(rng, 6, 2), p=2.2)

    restored = RoughPathGrid.from_document(X.to_document())

    np.testing.assert_array_equal(restored.level1, X.level1)
    np.testing.assert_array_equal(restored.level2, X.level2)
    assert restored.p == 2.2


def test_brownian_driver_is_seeded():
    first = brownian_driver(128, 2, seed=7)
    second = brownian_driver(128, 2, seed=7)
    other = brownian_driver(128, 2, seed=8)

    assert first.values.shape == (129, 2)
    np.testing.assert_array_equal(first.values[0], [0.0, 0.0])
    np.testing.assert_array_equal(first.values, second.values)
    assert not np.array_equal(first.values, other.values)
    with pytest.raises(InvalidInputError):
        brownian_driver(0, 1, seed=7)


def test_brownian_increments_have_the_step_as_variance():
    n = 10**4

    path = brownian_driver(n, 1, seed=11)

    increments = np.diff(path.values[:, 0])
    assert abs(np.mean(increments)) <= 4.0 / n
    assert np.var(increments) * n == pytest.approx(1.0, rel=0.1)
