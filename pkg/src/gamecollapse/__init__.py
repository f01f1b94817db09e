"""Concurrent games with symmetry, generalized species and the collapse between them."""

__version__ = "0.1.0"
