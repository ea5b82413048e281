"""Vicious walkers, Schur functions, path determinants, and noncolliding
diffusions, with cross-validation between the exact and stochastic layers."""

from . import combinat, diffusion, lgv, rmt, schur, verify, walks

__all__ = [
    "combinat",
    "diffusion",
    "lgv",
    "rmt",
    "schur",
    "verify",
    "walks",
]

__version__ = "0.1.0"
