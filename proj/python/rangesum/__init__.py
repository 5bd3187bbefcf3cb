"""Range-summable random variables from dyadic simulation trees."""

from ._core import (
    ArgumentError,
    Dst,
    GrwLsh,
    LpSketch,
    SamplingError,
    collision_curve,
    dyadic_cover,
)

__all__ = [
    "ArgumentError",
    "Dst",
    "GrwLsh",
    "LpSketch",
    "SamplingError",
    "collision_curve",
    "dyadic_cover",
]
