"""Gap statistics of zeta-zero ordinates, with analytic and random-matrix comparisons."""

__version__ = "0.1.0"
