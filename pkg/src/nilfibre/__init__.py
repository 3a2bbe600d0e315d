"""Component tableaux, reverse tableaux and BS invariants for parabolic nilfibres."""

__version__ = "0.1.0"

from .diagram import Composition, Diagram, NeighbouringPair, build_diagram, parse_composition

__all__ = [
    "Composition",
    "Diagram",
    "NeighbouringPair",
    "build_diagram",
    "parse_composition",
    "__version__",
]
