"""Simulation and numerical verification of two-party protocols in the bounded quantum storage model."""

__version__ = "0.1.0"
