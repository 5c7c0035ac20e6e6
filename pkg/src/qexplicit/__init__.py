"""Riesz-kernel local terms and the explicit formula for imaginary quadratic fields."""

__version__ = "0.1.0"
