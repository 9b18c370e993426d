"""Energy-efficiency toolkit for rateless-coded non-coherent MFSK sensor links."""

from .backend import BACKEND

__version__ = "0.1.0"
__all__ = ["BACKEND", "__version__"]
