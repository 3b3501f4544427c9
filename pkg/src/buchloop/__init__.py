"""Computational algebra for finite loops, with a focus on Buchsteiner loops."""

__version__ = "0.1.0"
