"""Euler characteristics and ML degrees of Grassmannians minus hyperplane arrangements."""

__version__ = "0.1.0"

from .symfunc import GrSpec  # noqa: E402

__all__ = ["GrSpec", "__version__"]
