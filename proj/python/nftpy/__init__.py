"""Nonlinear Fourier transform for the Zakharov-Shabat system."""

from ._core import (
    NftError,
    Signal,
    auto_window,
    conserved,
    continuous_spectrum,
    find_eigenvalues,
    generate,
    klaus_shaw_count,
    matrix_eigenvalues,
    newton_refine,
    rect_continuous,
    rect_discrete,
    run_cli,
    scattering,
    ssf_propagate,
    sy_a,
    sy_continuous,
    sy_discrete,
)

__all__ = [
    "NftError",
    "Signal",
    "auto_window",
    "conserved",
    "continuous_spectrum",
    "find_eigenvalues",
    "generate",
    "klaus_shaw_count",
    "matrix_eigenvalues",
    "newton_refine",
    "rect_continuous",
    "rect_discrete",
    "run_cli",
    "scattering",
    "ssf_propagate",
    "sy_a",
    "sy_continuous",
    "sy_discrete",
]
