"""Numerical toolkit for harmonic analysis of the Laguerre operator on (0, inf) with the
measure gamma_alpha: special functions, heat kernels, Riesz and Laplace-type multiplier
truncations, variation and oscillation, and BLO/BMO seminorms on admissible intervals."""

__version__ = "0.1.0"
