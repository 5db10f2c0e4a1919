from fractions import Fraction

import pytest

from horofan.errors import DimensionMismatchError, NotSaturatedError
from horofan.lattice import (
    AbelianGroupStructure,
    IntMatrix,
    Sublattice,
    cokernel_structure,
    dot,
    hermite_normal_form,
    image_sublattice,
    is_unimodular,
    kernel_basis,
    matrix_rank,
    primitive,
    quotient_map,
    saturation,
    smith_normal_form,
    solve_rational,
    unimodular_inverse,
)


def test_smith_normal_form_factors_and_identity():
    M = IntMatrix.from_rows([[2, 4, 4], [-6, 6, 12], [10, -4, -16]])
    U, D, V = smith_normal_form(M)
    assert U @ M @ V == D
    assert [D.entries[i][i] for i in range(3)] == [2, 6, 12]
    assert is_unimodular(U) and is_unimodular(V)


def test_smith_normal_form_of_rectangular_matrix():
    M = IntMatrix.from_rows([[1, 1, 1], [0, 2, 4]])
    U, D, V = smith_normal_form(M)
    assert U @ M @ V == D
    assert D.entries == ((1, 0, 0), (0, 2, 0))


@pytest.mark.parametrize("rows, free_rank, torsion", [
    ([[2]], 0, (2,)),
    ([[1, -1]], 0, ()),
    ([[1], [1]], 1, ()),
    ([[2, 0], [1, 1]], 0, (2,)),
    ([[2, 0], [0, 4]], 0, (2, 4)),
])
def test_cokernel_structure(rows, free_rank, torsion):
    structure = cokernel_structure(IntMatrix.from_rows(rows))
    assert structure.free_rank == free_rank
    assert structure.torsion == torsion


def test_cokernel_of_matrix_without_rows_is_trivial():
    assert cokernel_structure(IntMatrix.from_rows([], cols=1)).is_trivial


def test_hermite_normal_form_merges_dependent_rows():
    assert hermite_normal_form(IntMatrix.from_rows([[2, 4], [3, 6]])).entries == ((1, 2),)


def test_equal_sublattices_compare_equal():
    a = Sublattice.spanned_by([(1, 1), (0, 2)], 2)
    b = Sublattice.spanned_by([(1, -1), (2, 0), (1, 1)], 2)
    assert a == b
    assert a.contains((3, 1)) and not a.contains((1, 0))


def test_kernel_and_rank():
    kernel = kernel_basis(IntMatrix.from_rows([[1, 1, 0]]))
    assert kernel.rank == 2
    assert kernel.contains((1, -1, 0)) and kernel.contains((0, 0, 1))
    assert matrix_rank(IntMatrix.from_rows([[1, 2], [2, 4]])) == 1


def test_unimodular_inverse():
    M = IntMatrix.from_rows([[2, 1], [1, 1]])
    assert M @ unimodular_inverse(M) == IntMatrix.identity(2)
    with pytest.raises(ValueError):
        unimodular_inverse(IntMatrix.from_rows([[2, 0], [0, 1]]))


def test_solve_rational():
    assert solve_rational(IntMatrix.from_rows([[2, 0], [0, 3]]), (1, 1)) == (Fraction(1, 2), Fraction(1, 3))


def test_saturation_and_image():
    assert saturation(Sublattice.spanned_by([(2, 0)], 2)) == Sublattice.spanned_by([(1, 0)], 2)
    doubled = image_sublattice(IntMatrix.from_rows([[2, 0], [0, 1]]), Sublattice.full(2))
    assert not doubled.is_saturated()


def test_quotient_map_kills_exactly_the_sublattice():
    S = Sublattice.spanned_by([(1, 1, 0)], 3)
    rank, projection = quotient_map(3, S)
    assert rank == 2
    assert projection.apply((1, 1, 0)) == (0, 0)
    assert cokernel_structure(projection).is_trivial
    assert kernel_basis(projection) == S


def test_quotient_map_requires_saturation():
    with pytest.raises(NotSaturatedError):
        quotient_map(2, Sublattice.spanned_by([(2, 0)], 2))


def test_group_structure_labels_and_sums():
    assert AbelianGroupStructure(free_rank=2, torsion=(2,)).label() == "Z^2 ⊕ Z/2"
    assert AbelianGroupStructure().label() == "0"
    total = AbelianGroupStructure(torsion=(2,)).direct_sum(AbelianGroupStructure(free_rank=1, torsion=(3,)))
    assert total == AbelianGroupStructure(free_rank=1, torsion=(6,))
    assert total.order is None
    assert AbelianGroupStructure(torsion=(2, 4)).order == 8


def test_group_structure_rejects_broken_divisibility():
    with pytest.raises(ValueError):
        AbelianGroupStructure(torsion=(2, 3))


def test_vector_helpers():
    assert primitive((4, -6)) == (2, -3)
    assert primitive((0, 0)) == (0, 0)
    with pytest.raises(DimensionMismatchError):
        dot((1, 2), (1, 2, 3))


def test_matrix_shapes_are_checked():
    with pytest.raises(DimensionMismatchError):
        IntMatrix.from_rows([[1, 2], [3]])
    with pytest.raises(DimensionMismatchError):
        IntMatrix.identity(2) @ IntMatrix.identity(3)
