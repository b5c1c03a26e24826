"""Tree modules and Kac polynomials of quivers, computed exactly."""

__version__ = "0.1.0"
