import pytest

from horofan.coloured import ColouredLattice, make_coloured_cone, make_fan
from horofan.cone import cone_from_generators
from horofan.criteria import check_isomorphism
from horofan.errors import Cf1ViolationError, CfViolationError, MismatchError, NotANonColouredRayError
from horofan.fantastack import (
    FantastackInput,
    RootFamily,
    RootSystemDescriptor,
    RootSystemFactor,
    ToricVerdict,
    build_fantastack,
    check_cf,
    class_group,
    cox_beta,
    cox_map,
    fantastack_map,
    is_regular,
    is_simplicial,
    non_toric_test,
    root_stack_beta,
    t_prime_rank,
)
from horofan.lattice import AbelianGroupStructure, IntMatrix
from horofan.report import CheckStatus
from horofan.stacky import validate_map


def _input(fan, columns):
    return FantastackInput(base_fan=fan, beta=IntMatrix.from_columns(columns, rows=fan.rank))


@pytest.fixture
def line_base(golden_fan):
    return golden_fan("extra_columns_base").fan


def _roots(*factors, **assignment):
    return RootSystemDescriptor(
        factors=tuple(RootSystemFactor(family=family, rank=rank) for family, rank in factors),
        colour_assignment=assignment,
    )


def test_extra_columns_satisfy_all_conditions(line_base):
    report = check_cf(_input(line_base, [(1, 0), (1, 0), (1, 1), (0, 2)]))
    assert report.valid
    assert [c.name for c in report.checks] == ["CF1", "CF2", "CF3", "CF4"]


def test_fantastack_with_extra_columns(line_base):
    fi = _input(line_base, [(1, 0), (1, 0), (1, 1), (0, 2)])
    s = build_fantastack(fi)
    assert s.fan.lattice.points == {"alpha": (1, 0, 0, 0)}
    assert s.fan.maximal_cones == (make_coloured_cone([(0, 1, 0, 0), (0, 0, 1, 0), (0, 0, 0, 1)]),)
    assert s.beta == fi.beta
    assert validate_map(fantastack_map(fi)).valid
    assert t_prime_rank(fi) == 2


def test_uncovered_ray_fails_cf4(line_base):
    fi = _input(line_base, [(1, 0), (1, 0), (1, 1)])
    report = check_cf(fi)
    assert [c.name for c in report.violations] == ["CF4"]
    with pytest.raises(CfViolationError) as excinfo:
        build_fantastack(fi)
    assert excinfo.value.failed == ["CF4"]
    assert not isinstance(excinfo.value, Cf1ViolationError)


def test_wrong_colour_column_fails_cf3(line_base):
    report = check_cf(_input(line_base, [(2, 0), (1, 0), (0, 1)]))
    assert report.status_of("CF3") == CheckStatus.FAIL
    assert report.status_of("CF2") == CheckStatus.PASS


def test_empty_fan_fails_cf1():
    fi = FantastackInput(base_fan=make_fan(ColouredLattice.of(2), []), beta=IntMatrix.from_rows([[0], [0]]))
    assert check_cf(fi).status_of("CF1") == CheckStatus.FAIL
    with pytest.raises(Cf1ViolationError):
        build_fantastack(fi)


def test_beta_shape_is_checked(line_base):
    with pytest.raises(ValueError):
        FantastackInput(base_fan=line_base, beta=IntMatrix.identity(3))
    with pytest.raises(ValueError):
        FantastackInput(base_fan=line_base, beta=IntMatrix.from_columns([], rows=2))


def test_cox_beta(cox_base):
    fi = cox_beta(cox_base)
    assert fi.beta == IntMatrix.from_rows([[1, 0, -1], [0, 1, -1]])
    assert t_prime_rank(fi) == 1


def test_cox_fantastack_matches_the_golden_domain(cox_base, golden_map):
    golden = golden_map("cox_map")
    m = cox_map(cox_base)
    assert m.domain.fan.lattice == golden.domain.fan.lattice
    assert set(m.domain.fan.maximal_cones) == set(golden.domain.fan.maximal_cones)
    assert m.Phi == golden.Phi and m.phi == golden.phi
    assert check_isomorphism(m).overall


def test_root_stack_on_the_diagonal_ray(golden_fan):
    base = golden_fan("root_stack_base").fan
    s = build_fantastack(root_stack_beta(base, (1, 1), 2))
    assert s.beta == IntMatrix.from_rows([[1, 0, 2], [0, 1, 2]])
    assert set(s.fan.maximal_cones) == {
        make_coloured_cone([(1, 0, 0), (0, 0, 1)], ["alpha1"]),
        make_coloured_cone([(0, 1, 0), (0, 0, 1)], ["alpha2"]),
    }


def test_root_stack_orders(cox_base):
    assert root_stack_beta(cox_base, (-1, -1), 1) == cox_beta(cox_base)
    tripled = root_stack_beta(cox_base, cone_from_generators([(-1, -1)]), 3)
    assert tripled.beta.column(2) == (-3, -3)
    with pytest.raises(ValueError):
        root_stack_beta(cox_base, (-1, -1), 0)
    with pytest.raises(NotANonColouredRayError):
        root_stack_beta(cox_base, (1, 0), 2)


def test_regular_fans(cox_base, projective_plane):
    assert is_regular(cox_base) and is_simplicial(cox_base)
    assert is_regular(projective_plane)


def test_simplicial_but_not_regular():
    fan = make_fan(ColouredLattice.of(2), [([(1, 0), (1, 2)], [])])
    assert is_simplicial(fan)
    assert not is_regular(fan)


def test_coinciding_colour_points_are_not_simplicial():
    lattice = ColouredLattice.of(2, {"alpha1": (1, 0), "alpha2": (1, 0)})
    fan = make_fan(lattice, [([(1, 0), (0, 1)], ["alpha1", "alpha2"])])
    assert not is_simplicial(fan)
    assert not is_regular(fan)


def test_class_groups(cox_base, golden_fan):
    assert class_group(cox_base) == AbelianGroupStructure(free_rank=1)
    plane = make_fan(ColouredLattice.of(2), [([(1, 0), (0, 1)], [])])
    assert class_group(plane).is_trivial
    assert class_group(golden_fan("two_ray_quotient").fan) == AbelianGroupStructure(free_rank=2)


def test_class_group_needs_cf1():
    with pytest.raises(Cf1ViolationError):
        class_group(make_fan(ColouredLattice.of(1), []))


def test_two_colours_on_one_simple_factor_are_not_toric(golden_fan):
    fan = golden_fan("sl3_beta_11").fan
    assert non_toric_test(fan, _roots((RootFamily.A, 2), alpha1=(0, 1), alpha2=(0, 2))) == ToricVerdict.NOT_TORIC


@pytest.mark.parametrize("factor, node, verdict", [
    ((RootFamily.A, 1), 1, ToricVerdict.INCONCLUSIVE),
    ((RootFamily.A, 2), 1, ToricVerdict.INCONCLUSIVE),
    ((RootFamily.A, 3), 3, ToricVerdict.INCONCLUSIVE),
    ((RootFamily.A, 3), 2, ToricVerdict.NOT_TORIC),
    ((RootFamily.B, 3), 2, ToricVerdict.INCONCLUSIVE),
])
def test_single_colour_placement(golden_fan, factor, node, verdict):
    fan = golden_fan("p2_sl2").fan
    assert non_toric_test(fan, _roots(factor, alpha=(0, node))) == verdict


def test_root_system_must_cover_the_colours(golden_fan):
    fan = golden_fan("sl3_beta_11").fan
    with pytest.raises(MismatchError):
        non_toric_test(fan, _roots((RootFamily.A, 2), alpha1=(0, 1)))


def test_root_system_nodes_are_validated():
    with pytest.raises(ValueError):
        _roots((RootFamily.A, 2), alpha=(0, 3))
    with pytest.raises(ValueError):
        _roots((RootFamily.A, 2), alpha=(1, 1))
    with pytest.raises(ValueError):
        _roots((RootFamily.A, 2), a=(0, 1), b=(0, 1))
