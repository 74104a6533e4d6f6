"""Numerical laboratory for a time-space fractional stochastic Burgers
equation on (0,1) with Dirichlet boundaries: Mittag-Leffler special
functions, a sine-spectral operator calculus, a mild-solution time stepper
with exact per-mode convolution kernels, Picard iteration, and Monte Carlo
estimators for operator bounds and path regularity."""

from .specfun import (
    MLParams,
    SpecfunReport,
    bdg_constant,
    gamma_fn,
    mainardi,
    mittag_leffler,
    mittag_leffler2,
    stable_density,
    verify_identities,
)

__version__ = "0.1.0"
