"""Linear trends between in- and out-of-distribution accuracy under probit
scaling: statistics, Gaussian-shift theory, simulation scenarios and a CLI."""

__version__ = "0.1.0"
