"""Weighted distance sums maximized on paths: construction, oracles and spectral sweeps."""

__version__ = "0.1.0"
