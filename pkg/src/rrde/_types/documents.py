from typing import List, Literal, TypedDict
from typing_extensions import NotRequired

__all__ = [
    "PathDocument",
    "RoughPathDocument",
    "ReflectionDocument",
    "SolveDocument",
]


class PathDocument(TypedDict):
    times: List[float]
    values: List[List[float]]


class RoughPathDocument(TypedDict):
    times: List[float]
    level1: List[List[float]]
    level2: List[List[float]]
    """Row-major N*N block per interval"""
    p: float


class ReflectionDocument(TypedDict):
    times: List[float]
    y: List[List[float]]
    m: List[List[float]]
    domain: Literal["half-line", "orthant"]
    dim: int


class SolveDocument(TypedDict):
    times: List[float]
    y: List[List[float]]
    m: List[List[float]]
    reflection_steps: int
    total_variation_m: float
    outside_hypothesis: bool
    scheme: NotRequired[str]
