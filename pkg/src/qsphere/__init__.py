"""Truncated matrix models of the equivariant spectral triples on SU_q(2) and the Podleś spheres."""

from .scalars import HalfInt, QParam, qint

__version__ = "0.1.0"

__all__ = ["HalfInt", "QParam", "qint", "__version__"]
