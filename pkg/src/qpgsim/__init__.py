"""Simulation of group-velocity-matched sum-frequency conversion of quantum light."""
__version__ = "0.1.0"
