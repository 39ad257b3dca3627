"""calrlab: numerical laboratory for sign-changing layered electromagnetic media."""

__version__ = "0.1.0"
