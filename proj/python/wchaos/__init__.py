"""Wiener chaos kernels, quadratic functionals of fBm and the Brownian sheet,
and fourth-moment diagnostics."""

from ._wchaos import (
    NumericalError,
    Params,
    contraction_norm_squared,
    diagnose,
    eval_integral,
    fourth_moment,
    hermite,
    ks_std_normal,
    sample_statistic,
    second_moment,
    set_threads,
    spectrum,
    summarize,
    sweep_point,
    symmetrize,
    threads,
    variance_closed_form_sheet,
    variance_closed_form_sheet_eps,
)

__all__ = [
    "NumericalError",
    "Params",
    "contraction_norm_squared",
    "diagnose",
    "eval_integral",
    "fourth_moment",
    "hermite",
    "ks_std_normal",
    "sample_statistic",
    "second_moment",
    "set_threads",
    "spectrum",
    "summarize",
    "sweep_point",
    "symmetrize",
    "threads",
    "variance_closed_form_sheet",
    "variance_closed_form_sheet_eps",
]
