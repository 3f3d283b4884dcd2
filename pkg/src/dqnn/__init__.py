"""Duplication-free quantum neural network: exact statevector simulation,
amplitude encoding, sigmoid readout and parameter-shift training."""

__version__ = "0.1.0"
