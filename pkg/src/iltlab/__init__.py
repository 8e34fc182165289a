"""Numerical laboratory for the renormalized derivative of planar
intersection local time.

Subpackages:
    processes       reproducible Brownian / symmetric-stable path sampling
    density         mollifier density f_eps and its x1-derivative
    functional      discretized double-integral functional alpha'_eps
    moments         Monte Carlo moment tables and scaling fits
    quadlab         explicit Fourier-space integrals and their asymptotics
    constants       limiting constants (Brownian k, stable c(beta))
    combinatorics   exact verification of the interval-configuration lemmas
    cli             batch front-end
"""

__version__ = "0.1.0"
