"""Rational points of bounded height on the A5+A1 cubic surface
x1^3 + x2*x3^2 + x0*x1*x2 = 0, counted through its universal torsor."""

__version__ = "0.1.0"
