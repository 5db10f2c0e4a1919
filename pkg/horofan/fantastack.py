"""
Coloured fantastacks: the CF1-CF4 conditions, the construction of the fan on N̂,
the Cox and root-stack choices of β, and the combinatorial invariants read off
a coloured fan (simpliciality, regularity, class group, non-toric test).
"""

import logging
from enum import Enum
from typing import Dict, List, Sequence, Tuple, Union

from pydantic import BaseModel, ConfigDict, Field, model_validator

from .coloured import (
    Colour,
    ColouredCone,
    ColouredFan,
    ColouredLattice,
    maximal_coloured_cones,
    maximal_or_trivial,
    non_coloured_rays,
    validate_fan,
)
from .config import CLASSIFIED_ROOT_FAMILIES
from .cone import Cone, cone_from_generators, contains, is_subcone
from .errors import (
    Cf1ViolationError,
    CfViolationError,
    InvalidFanError,
    MismatchError,
    NotANonColouredRayError,
)
from .lattice import IntMatrix, Vector, cokernel_structure, is_zero, unit_vector, vectors_rank
from .report import CheckResult, ValidationReport
from .stacky import StackyColouredFan, StackyMap, make_stacky_fan

logger = logging.getLogger(__name__)


class FantastackInput(BaseModel):
    """A base coloured fan on N with β: Ẑⁿ -> N whose first ℓ columns are the colour points"""

    model_config = ConfigDict(frozen=True)

    base_fan: ColouredFan
    beta: IntMatrix

    @model_validator(mode="after")
    def _check_shape(self):
        if self.beta.rows != self.base_fan.rank:
            raise ValueError(f"beta has {self.beta.rows} rows but N has rank {self.base_fan.rank}")
        if self.beta.cols < self.ell:
            raise ValueError(f"beta has {self.beta.cols} columns but there are {self.ell} colours")
        return self

    @property
    def n(self) -> int:
        return self.beta.cols

    @property
    def ell(self) -> int:
        return len(self.base_fan.lattice.colours)


class RootFamily(str, Enum):
    A = "A"
    B = "B"
    C = "C"
    D = "D"
    E = "E"
    F = "F"
    G = "G"


class RootSystemFactor(BaseModel):
    model_config = ConfigDict(frozen=True)

    family: RootFamily
    rank: int = Field(ge=1)


class RootSystemDescriptor(BaseModel):
    """Simple factors of a root system and the node each colour sits on"""

    model_config = ConfigDict(frozen=True)

    factors: Tuple[RootSystemFactor, ...]
    colour_assignment: Dict[str, Tuple[int, int]]

    @model_validator(mode="after")
    def _check_nodes(self):
        seen = set()
        for label, (factor, node) in self.colour_assignment.items():
            if not 0 <= factor < len(self.factors):
                raise ValueError(f"colour {label} refers to factor {factor}, but there are {len(self.factors)}")
            if not 1 <= node <= self.factors[factor].rank:
                raise ValueError(f"colour {label} sits on node {node} outside 1..{self.factors[factor].rank}")
            if (factor, node) in seen:
                raise ValueError(f"node {node} of factor {factor} carries two colours")
            seen.add((factor, node))
        return self


class ToricVerdict(str, Enum):
    NOT_TORIC = "NotToric"
    INCONCLUSIVE = "Inconclusive"


def satisfies_cf1(f: ColouredFan) -> bool:
    """Colour points together with the support span N_R."""
    vectors = [c.point for c in f.lattice.colours]
    for cc in f.maximal_cones:
        vectors.extend(cc.cone.generators)
    return vectors_rank(vectors, f.rank) == f.rank


def _require_cf1(f: ColouredFan) -> None:
    if not satisfies_cf1(f):
        raise Cf1ViolationError("colour points and support do not span N_R", failed=["CF1"])


def _require_valid(f: ColouredFan) -> None:
    report = validate_fan(f)
    if not report.valid:
        raise InvalidFanError(report.summary())


def check_cf(fi: FantastackInput) -> ValidationReport:
    f, ell = fi.base_fan, fi.ell
    columns = fi.beta.columns()
    points = [c.point for c in f.lattice.colours]

    outside = [j + 1 for j in range(ell, fi.n) if not any(contains(c.cone, columns[j]) for c in maximal_or_trivial(f))]
    wrong = [f.lattice.colours[i].label for i in range(ell) if columns[i] != points[i]]
    uncovered = [
        str(ray) for ray in non_coloured_rays(f)
        if not any(contains(ray, columns[j]) and not is_zero(columns[j]) for j in range(ell, fi.n))
    ]
    return ValidationReport(checks=(
        CheckResult.of("CF1", satisfies_cf1(f), "colour points and support do not span N_R"),
        CheckResult.of("CF2", not outside, f"columns {outside} lie outside the support"),
        CheckResult.of("CF3", not wrong, f"columns for colours {wrong} differ from their colour points"),
        CheckResult.of("CF4", not uncovered, f"rays {uncovered} receive no column"),
    ))


def build_fantastack(fi: FantastackInput) -> StackyColouredFan:
    """The stacky coloured fan (Σ̂ᶜ, β) on N̂ = Zⁿ with colour points e_1..e_ℓ."""
    report = check_cf(fi)
    if not report.valid:
        failed = [c.name for c in report.violations]
        error = Cf1ViolationError if failed == ["CF1"] else CfViolationError
        raise error(report.summary(), failed=failed)
    f, n, ell = fi.base_fan, fi.n, fi.ell
    labels = f.lattice.labels
    columns = fi.beta.columns()
    lattice = ColouredLattice(rank=n, colours=tuple(Colour(label=a, point=unit_vector(n, i)) for i, a in enumerate(labels)))

    cones = []
    for cc in f.maximal_cones:
        generators = [unit_vector(n, i) for i in range(ell) if labels[i] in cc.colour_set]
        generators += [unit_vector(n, j) for j in range(ell, n) if contains(cc.cone, columns[j])]
        cones.append(ColouredCone(cone=cone_from_generators(generators, n), colour_set=cc.colour_set))
    maximal = [cc for cc in maximal_coloured_cones(cones) if not cc.cone.is_zero]
    logger.info(f"fantastack on Z^{n} has {len(maximal)} maximal cones")
    return make_stacky_fan(ColouredFan(lattice=lattice, maximal_cones=tuple(maximal)), fi.beta)


def fantastack_map(fi: FantastackInput) -> StackyMap:
    """The map (β, id_N) from the fantastack to (Σᶜ, id)."""
    rank = fi.base_fan.rank
    return StackyMap(
        domain=build_fantastack(fi),
        codomain=StackyColouredFan(fan=fi.base_fan, beta=IntMatrix.identity(rank)),
        Phi=fi.beta,
        phi=IntMatrix.identity(rank),
    )


def cox_beta(f: ColouredFan) -> FantastackInput:
    """Colour points followed by the primitive generators of the non-coloured rays."""
    _require_valid(f)
    _require_cf1(f)
    columns = [c.point for c in f.lattice.colours] + [ray.rays[0] for ray in non_coloured_rays(f)]
    return FantastackInput(base_fan=f, beta=IntMatrix.from_columns(columns, rows=f.rank))


def cox_map(f: ColouredFan) -> StackyMap:
    return fantastack_map(cox_beta(f))


def root_stack_beta(f: ColouredFan, ray: Union[Cone, Sequence[int]], r: int) -> FantastackInput:
    """cox_beta with the column of one non-coloured ray multiplied by r."""
    if r < 1:
        raise ValueError(f"root order must be at least 1, got {r}")
    if not isinstance(ray, Cone):
        ray = cone_from_generators([ray], f.rank)
    rays = non_coloured_rays(f)
    if ray not in rays:
        raise NotANonColouredRayError(f"{ray} is not a non-coloured ray of the fan")
    fi = cox_beta(f)
    index = fi.ell + rays.index(ray)
    columns = fi.beta.columns()
    columns[index] = tuple(r * x for x in columns[index])
    return FantastackInput(base_fan=f, beta=IntMatrix.from_columns(columns, rows=f.rank))


def cone_point_multiset(f: ColouredFan, cc: ColouredCone) -> List[Vector]:
    """u_ρ for the non-coloured rays of σ, then u_α for α in F, duplicates kept."""
    points = f.lattice.points
    multiset = [ray.rays[0] for ray in non_coloured_rays(f) if is_subcone(ray, cc.cone)]
    multiset += [points[a] for a in sorted(cc.colour_set)]
    return multiset


def is_simplicial(f: ColouredFan) -> bool:
    for cc in f.maximal_cones:
        multiset = cone_point_multiset(f, cc)
        if vectors_rank(multiset, f.rank) != len(multiset):
            return False
    return True


def is_regular(f: ColouredFan) -> bool:
    """Every cone multiset extends to a Z-basis of N."""
    for cc in f.maximal_cones:
        multiset = cone_point_multiset(f, cc)
        if vectors_rank(multiset, f.rank) != len(multiset):
            return False
        if multiset and cokernel_structure(IntMatrix.from_columns(multiset, rows=f.rank)).torsion:
            logger.debug(f"{cc} is simplicial but not regular")
            return False
    return True


def class_group(f: ColouredFan):
    """Cokernel of N^∨ -> Z^{n'}, m ↦ (⟨m, u_α⟩ ; ⟨m, u_ρ⟩)."""
    _require_cf1(f)
    rows = [c.point for c in f.lattice.colours] + [ray.rays[0] for ray in non_coloured_rays(f)]
    structure = cokernel_structure(IntMatrix.from_rows(rows, cols=f.rank))
    expected = len(rows) - f.rank
    if structure.free_rank != expected:
        raise Cf1ViolationError(f"class group has free rank {structure.free_rank}, expected {expected}", failed=["CF1"])
    return structure


def t_prime_rank(fi: FantastackInput) -> int:
    n_prime = fi.ell + len(non_coloured_rays(fi.base_fan))
    return (n_prime - fi.base_fan.rank) + (fi.n - n_prime)


def non_toric_test(f: ColouredFan, rs: RootSystemDescriptor) -> ToricVerdict:
    """Refute toricness from the colour placement on type-A factors."""
    _require_cf1(f)
    if set(rs.colour_assignment) != set(f.lattice.labels):
        raise MismatchError("the root system assigns nodes to a different set of colours than the fan carries")
    nodes: Dict[int, List[int]] = {}
    for factor, node in rs.colour_assignment.values():
        nodes.setdefault(factor, []).append(node)
    for index, placed in sorted(nodes.items()):
        factor = rs.factors[index]
        if factor.family.value not in CLASSIFIED_ROOT_FAMILIES:
            logger.info(f"factor {factor.family.value}{factor.rank} is not classified, skipping")
            continue
        if len(placed) >= 2:
            return ToricVerdict.NOT_TORIC
        if factor.rank >= 2 and placed[0] not in (1, factor.rank):
            return ToricVerdict.NOT_TORIC
    return ToricVerdict.INCONCLUSIVE
