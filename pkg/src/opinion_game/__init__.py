"""Two-phase competitive opinion dynamics on social networks."""

__version__ = "0.1.0"
