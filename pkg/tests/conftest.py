"""Shared fixtures: loaders for the golden corpus and a few small fans."""

import pytest

from horofan.coloured import ColouredLattice, make_fan
from horofan.config import GOLDEN_DIR
from horofan.documents import load_map, read_document, to_stacky_fan
from horofan.lattice import IntMatrix
from horofan.stacky import StackyColouredFan

GOLDEN_FANS = [
    "a2_mod_z2",
    "affine_line",
    "p2_sl2",
    "sl3_beta_11",
    "sl3_beta_21_01",
    "extra_columns_base",
    "cox_base",
    "root_stack_base",
    "no_good_quotient",
    "line_quotient",
    "two_ray_quotient",
]

GOLDEN_MAPS = ["identity", "decolouration", "line_quotient_gms", "cox_map", "double_ray"]


def _load_fan(name: str) -> StackyColouredFan:
    return to_stacky_fan(read_document(GOLDEN_DIR / f"{name}.json"))


def _load_map(name: str):
    path = GOLDEN_DIR / "maps" / f"{name}.json"
    return load_map(read_document(path), path.parent)


@pytest.fixture
def golden_fan():
    return _load_fan


@pytest.fixture
def golden_map():
    return _load_map


@pytest.fixture
def two_colours() -> ColouredLattice:
    return ColouredLattice.of(2, {"alpha1": (1, 0), "alpha2": (0, 1)})


@pytest.fixture
def cox_base(two_colours):
    return make_fan(two_colours, [
        ([(1, 0), (0, 1)], ["alpha1", "alpha2"]),
        ([(0, 1), (-1, -1)], ["alpha2"]),
        ([(1, 0), (-1, -1)], ["alpha1"]),
    ])


@pytest.fixture
def projective_plane():
    lattice = ColouredLattice.of(2)
    return make_fan(lattice, [
        ([(1, 0), (0, 1)], []),
        ([(0, 1), (-1, -1)], []),
        ([(1, 0), (-1, -1)], []),
    ])


@pytest.fixture
def line_quotient(two_colours) -> StackyColouredFan:
    fan = make_fan(two_colours, [([(1, 0), (0, 1)], ["alpha2"])])
    return StackyColouredFan(fan=fan, beta=IntMatrix.from_rows([[1, 0]]))
