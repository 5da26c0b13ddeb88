"""Bound states of the exponential well V(x) = -g^2 exp(-|x|)."""

__version__ = "0.1.0"
