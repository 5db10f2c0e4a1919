from fractions import Fraction

import pytest

from horofan.cone import (
    ContainmentMode,
    RationalPoint,
    cone_from_generators,
    cone_group,
    contains,
    dual_cone,
    faces,
    hilbert_basis,
    image_cone,
    intersect,
    is_face,
    is_subcone,
    smallest_face_containing,
    zero_cone,
)
from horofan.errors import DimensionMismatchError, NotStronglyConvexError
from horofan.lattice import IntMatrix, Sublattice


def test_canonical_form_drops_redundant_generators():
    c = cone_from_generators([(1, 0), (0, 1), (1, 1)])
    assert c.rays == ((0, 1), (1, 0))
    assert c.facets == ((0, 1), (1, 0))
    assert c.dimension == 2
    assert c == cone_from_generators([(2, 0), (0, 3), (1, 1)])


def test_lineality_is_detected():
    half_plane = cone_from_generators([(1, 0), (-1, 0), (0, 1)])
    assert not half_plane.is_strongly_convex
    assert half_plane.lineality == ((1, 0),)
    assert half_plane.rays == ((0, 1),)
    with pytest.raises(NotStronglyConvexError):
        faces(half_plane)


def test_zero_cone():
    c = zero_cone(2)
    assert c.is_zero and c.is_strongly_convex
    assert str(c) == "Cone(0 in Z^2)"
    assert faces(c) == [c]


def test_dual_cone():
    c = cone_from_generators([(1, 0), (1, 1)])
    assert dual_cone(c) == cone_from_generators([(0, 1), (1, -1)])
    assert dual_cone(dual_cone(c)) == c


def test_containment_modes():
    c = cone_from_generators([(1, 0), (0, 1)])
    assert contains(c, (1, 0))
    assert not contains(c, (1, 0), ContainmentMode.RELATIVE_INTERIOR)
    assert contains(c, RationalPoint.of([Fraction(1, 2), Fraction(1, 3)]), ContainmentMode.RELATIVE_INTERIOR)
    assert not contains(c, (-1, 1))
    with pytest.raises(DimensionMismatchError):
        contains(c, (1, 0, 0))


def test_faces_of_square_pyramid():
    c = cone_from_generators([(1, 0, 1), (0, 1, 1), (-1, 0, 1), (0, -1, 1)])
    all_faces = faces(c)
    assert len(all_faces) == 10
    assert [f.dimension for f in all_faces].count(2) == 4
    assert all(is_face(c, f) for f in all_faces)


def test_is_face_rejects_interior_rays():
    c = cone_from_generators([(1, 0), (0, 1)])
    assert is_face(c, cone_from_generators([(1, 0)]))
    assert not is_face(c, cone_from_generators([(1, 1)]))


def test_smallest_face_containing():
    c = cone_from_generators([(1, 0), (0, 1)])
    assert smallest_face_containing(c, (3, 0)) == cone_from_generators([(1, 0)])
    assert smallest_face_containing(c, (1, 2)) == c
    assert smallest_face_containing(c, (0, 0)) == zero_cone(2)
    with pytest.raises(ValueError):
        smallest_face_containing(c, (-1, 0))


def test_intersection_and_subcones():
    a = cone_from_generators([(1, 0), (0, 1)])
    b = cone_from_generators([(0, 1), (-1, 0)])
    assert intersect(a, b) == cone_from_generators([(0, 1)])
    assert is_subcone(cone_from_generators([(1, 1)]), a)
    assert not is_subcone(b, a)


def test_image_cone_can_be_a_line():
    image = image_cone(IntMatrix.from_rows([[1, -1]]), cone_from_generators([(1, 0), (0, 1)]))
    assert image.is_linear_subspace
    assert image.lineality_rank == 1


@pytest.mark.parametrize("generators, expected", [
    ([(1, 0), (1, 2)], [(1, 0), (1, 1), (1, 2)]),
    ([(1, 0), (1, 3)], [(1, 0), (1, 1), (1, 2), (1, 3)]),
    ([(1, 0), (-1, 2)], [(-1, 2), (0, 1), (1, 0)]),
    ([(1, 0), (0, 1)], [(0, 1), (1, 0)]),
    ([(1, 0, 0), (0, 1, 0), (1, 1, 2)], [(0, 1, 0), (1, 0, 0), (1, 1, 1), (1, 1, 2)]),
])
def test_hilbert_basis(generators, expected):
    assert hilbert_basis(cone_from_generators(generators)) == expected


def test_hilbert_basis_of_lower_dimensional_cone():
    c = cone_from_generators([(1, 1, 0), (1, -1, 0)])
    assert hilbert_basis(c) == [(1, -1, 0), (1, 0, 0), (1, 1, 0)]


def test_cone_group_is_saturated():
    c = cone_from_generators([(2, 2, 0)])
    assert cone_group(c) == Sublattice.spanned_by([(1, 1, 0)], 3)
