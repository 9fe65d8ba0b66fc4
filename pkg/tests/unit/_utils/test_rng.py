import numpy as np
import pytest

from rrde._utils.rng import SEED_ENV, make_rng, resolve_seed


def test_configured_seed_is_used_without_override(monkeypatch: pytest.MonkeyPatch):
    monkeypatch.delenv(SEED_ENV, raising=False)
    assert resolve_seed(7) == 7


def test_environment_overrides_seed(monkeypatch: pytest.MonkeyPatch):
    monkeypatch.setenv(SEED_ENV, "11")
    assert resolve_seed(7) == 11


def test_blank_override_is_ignored(monkeypatch: pytest.MonkeyPatch):
    monkeypatch.setenv(SEED_ENV, "  ")
    assert resolve_seed(7) == 7


def test_generators_are_reproducible():
    first = make_rng(3).normal(size=5)
    second = make_rng(3).normal(size=5)
    np.testing.assert_array_equal(first, second)
