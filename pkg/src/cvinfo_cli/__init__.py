"""Covariance-matrix entropy inequalities and Gaussian steering."""

__all__ = ["__version__"]

__version__ = "0.1.0"
