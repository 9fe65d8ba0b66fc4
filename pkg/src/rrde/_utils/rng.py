import os
from typing import Optional

import numpy as np

__all__ = ["SEED_ENV", "resolve_seed", "make_rng"]

SEED_ENV = "RRDE_SEED"


def resolve_seed(seed: int) -> int:
    """`RRDE_SEED` wins over the configured seed when set"""
    override: Optional[str] = os.environ.get(SEED_ENV)
    if override is None or override.strip() == "":
        return seed
    return int(override)


def make_rng(seed: int) -> np.random.Generator:
    return np.random.default_rng(seed)
