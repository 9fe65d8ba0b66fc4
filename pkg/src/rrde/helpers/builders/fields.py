from typing import Callable, Dict, Mapping, Union

import numpy as np

from ...errors import InvalidInputError
from ...solver import OrthantVectorField, VectorField

__all__ = ["BUILTIN_FIELDS", "build_field"]

Params = Mapping[str, float]


def _constant(N: int, params: Params) -> VectorField:
    value = params.get("value", 1.0)
    return VectorField(
        N,
        lambda y: np.full(N, value),
        lambda y: np.zeros(N),
        name="constant",
    )


def _affine(N: int, params: Params) -> VectorField:
    alpha, beta = params.get("alpha", 0.0), params.get("beta", 1.0)
    return VectorField(
        N,
        lambda y: np.full(N, alpha + beta * y),
        lambda y: np.full(N, beta),
        name="affine",
    )


def _bounded(N: int, params: Params) -> VectorField:
    scale = params.get("scale", 1.0)
    return VectorField(
        N,
        lambda y: np.full(N, scale / (1.0 + y * y)),
        lambda y: np.full(N, -2.0 * scale * y / (1.0 + y * y) ** 2),
        name="bounded",
    )


def _trig(N: int, params: Params) -> VectorField:
    # component i is scale * sin(y + i pi / 2)
    scale = params.get("scale", 1.0)
    phases = 0.5 * np.pi * np.arange(N)
    return VectorField(
        N,
        lambda y: scale * np.sin(y + phases),
        lambda y: scale * np.cos(y + phases),
        name="trig",
    )


def _signed_square(N: int, params: Params) -> VectorField:
    scale = params.get("scale", 1.0)
    return VectorField(
        N,
        lambda y: np.full(N, scale * y * abs(y)),
        lambda y: np.full(N, 2.0 * scale * abs(y)),
        smoothness="C1",
        name="signed-square",
        # central differences are O(h) at the kink
        samples=np.linspace(-1.75, 1.75, 8),
    )


BUILTIN_FIELDS: Dict[str, Callable[[int, Params], VectorField]] = {
    "constant": _constant,
    "affine": _affine,
    "bounded": _bounded,
    "trig": _trig,
    "signed-square": _signed_square,
}


def build_field(
    name: str,
    N: int,
    params: Params,
    dim: int = 1,
) -> Union[VectorField, OrthantVectorField]:
    """Builtin field for an N-dim driver; dim > 1 gives the decoupled orthant field"""
    try:
        builder = BUILTIN_FIELDS[name]
    except KeyError:
        raise InvalidInputError(
            f"unknown vector field {name!r}, "
            f"expected one of {', '.join(BUILTIN_FIELDS)}"
        ) from None
    vf = builder(N, params)
    if dim == 1:
        return vf
    return OrthantVectorField.decoupled([vf] * dim)
