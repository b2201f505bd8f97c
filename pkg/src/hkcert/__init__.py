"""Exact Todd-class, Segre-product and Hilbert-Kunz computations."""

__version__ = "0.1.0"
