"""
horofan: stacky coloured fans.

Exact combinatorics of coloured fans, their stacky versions and maps between
them: isomorphism and good moduli space criteria, the good moduli space fan,
and coloured fantastacks.
"""

from .coloured import ColouredCone, ColouredFan, ColouredLattice, make_fan
from .cone import Cone, cone_from_generators
from .errors import HorofanError
from .lattice import AbelianGroupStructure, IntMatrix, Sublattice
from .stacky import StackyColouredFan, StackyMap, make_stacky_fan

__version__ = "0.1.0"

__all__ = [
    "AbelianGroupStructure",
    "ColouredCone",
    "ColouredFan",
    "ColouredLattice",
    "Cone",
    "HorofanError",
    "IntMatrix",
    "StackyColouredFan",
    "StackyMap",
    "Sublattice",
    "cone_from_generators",
    "make_fan",
    "make_stacky_fan",
]
