"""K- and L-theory calculator for hyperbolic and virtually abelian groups."""

from ._kla import (
    KlaError,
    analyze,
    compute,
    h1,
    hnf,
    kernel,
    oracle_suite,
    snf,
)

__all__ = [
    "KlaError",
    "analyze",
    "compute",
    "h1",
    "hnf",
    "kernel",
    "oracle_suite",
    "snf",
]
