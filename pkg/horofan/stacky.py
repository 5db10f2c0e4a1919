"""
Stacky coloured fans and the maps between them.
"""

import logging
from typing import FrozenSet, List, Mapping, Optional

from pydantic import BaseModel, ConfigDict, model_validator

from .coloured import (
    Colour,
    ColouredCone,
    ColouredFan,
    ColouredLattice,
    colour_renaming,
    decolour,
    face_closure,
    maximal_coloured_cones,
    maximal_or_trivial,
    product,
    require_in_closure,
    validate_fan,
)
from .cone import image_cone, is_subcone
from .errors import DimensionMismatchError, InvalidFanError, InvalidMapError, MismatchError
from .lattice import AbelianGroupStructure, IntMatrix, cokernel_structure, is_zero
from .report import CheckResult, ValidationReport

logger = logging.getLogger(__name__)

_SUBSCRIPTS = str.maketrans("0123456789", "₀₁₂₃₄₅₆₇₈₉")
_SUPERSCRIPTS = str.maketrans("0123456789", "⁰¹²³⁴⁵⁶⁷⁸⁹")


class StackyColouredFan(BaseModel):
    """A coloured fan on N together with a lattice map beta: N -> L"""

    model_config = ConfigDict(frozen=True)

    fan: ColouredFan
    beta: IntMatrix

    @model_validator(mode="after")
    def _check_beta(self):
        if self.beta.cols != self.fan.rank:
            raise ValueError(f"beta has {self.beta.cols} columns but the fan lives in rank {self.fan.rank}")
        return self

    @property
    def codomain_rank(self) -> int:
        return self.beta.rows

    @property
    def lattice(self) -> ColouredLattice:
        return self.fan.lattice


class StackyMap(BaseModel):
    """A candidate map (Phi, phi) of stacky coloured fans"""

    model_config = ConfigDict(frozen=True)

    domain: StackyColouredFan
    codomain: StackyColouredFan
    Phi: IntMatrix
    phi: IntMatrix

    @property
    def dominant_colours(self) -> FrozenSet[str]:
        """C_Φ: colours of the domain that are absent from the codomain."""
        return frozenset(self.domain.lattice.labels) - frozenset(self.codomain.lattice.labels)


def validate_stacky_fan(s: StackyColouredFan) -> ValidationReport:
    fan_report = validate_fan(s.fan)
    witness = "; ".join(f"{v.name}: {v.witness}" for v in fan_report.violations) or None
    structure = cokernel_structure(s.beta)
    return ValidationReport(checks=(
        CheckResult.of("SCF1", fan_report.valid, witness),
        CheckResult.of("SCF2", structure.is_finite, f"cokernel of beta is {structure.label()}"),
    ))


def make_stacky_fan(fan: ColouredFan, beta: IntMatrix) -> StackyColouredFan:
    """Build a stacky coloured fan, raising InvalidFanError unless SCF1 and SCF2 hold."""
    if beta.cols != fan.rank:
        raise DimensionMismatchError(f"beta has {beta.cols} columns but the fan lives in rank {fan.rank}")
    s = StackyColouredFan(fan=fan, beta=beta)
    report = validate_stacky_fan(s)
    if not report.valid:
        raise InvalidFanError(report.summary())
    return s


def identity_stacky_fan(fan: ColouredFan) -> StackyColouredFan:
    return make_stacky_fan(fan, IntMatrix.identity(fan.rank))


def base_coloured_lattice(s: StackyColouredFan) -> ColouredLattice:
    """L with the colour points β(u_α)."""
    colours = tuple(Colour(label=c.label, point=s.beta.apply(c.point)) for c in s.lattice.colours)
    return ColouredLattice(rank=s.codomain_rank, colours=colours)


def k_beta(s: StackyColouredFan) -> AbelianGroupStructure:
    """Character group of K_β, the cokernel of the dual map β^∨."""
    return cokernel_structure(s.beta.transpose())


def describe_diagonalizable_group(structure: AbelianGroupStructure) -> str:
    """Name the diagonalizable group with the given character group, e.g. 'G_m² × μ₂'."""
    parts = []
    if structure.free_rank == 1:
        parts.append("G_m")
    elif structure.free_rank > 1:
        parts.append("G_m" + str(structure.free_rank).translate(_SUPERSCRIPTS))
    parts.extend("μ" + str(d).translate(_SUBSCRIPTS) for d in structure.torsion)
    return " × ".join(parts) if parts else "trivial"


def _incompatible_cone(Phi: IntMatrix, f1: ColouredFan, f2: ColouredFan, dominant: FrozenSet[str]) -> Optional[ColouredCone]:
    if Phi.cols != f1.rank or Phi.rows != f2.rank:
        raise DimensionMismatchError(f"a {Phi.rows}x{Phi.cols} matrix cannot map rank {f1.rank} to rank {f2.rank}")
    targets = maximal_or_trivial(f2)
    for cc1 in maximal_or_trivial(f1):
        image = image_cone(Phi, cc1.cone)
        remaining = cc1.colour_set - dominant
        if not any(is_subcone(image, cc2.cone) and remaining <= cc2.colour_set for cc2 in targets):
            return cc1
    return None


def check_compatibility(Phi: IntMatrix, f1: ColouredFan, f2: ColouredFan, dominant: FrozenSet[str] = frozenset()) -> bool:
    """Every maximal cone of f1 maps into some coloured cone of f2, colours outside C_Φ included."""
    bad = _incompatible_cone(Phi, f1, f2, frozenset(dominant))
    if bad is not None:
        logger.debug(f"{bad} maps into no coloured cone of the target fan")
    return bad is None


def _shape(M: IntMatrix) -> str:
    return f"{M.rows}x{M.cols}"


def validate_map(m: StackyMap) -> ValidationReport:
    """Itemized MSCF1-3, finite cokernels and the colour action on the base lattices."""
    d1, d2 = m.domain, m.codomain
    shapes_ok = (
        m.Phi.rows == d2.fan.rank and m.Phi.cols == d1.fan.rank
        and m.phi.rows == d2.codomain_rank and m.phi.cols == d1.codomain_rank
    )
    checks = [CheckResult.of("dimensions", shapes_ok, f"Phi is {_shape(m.Phi)}, phi is {_shape(m.phi)}")]
    names = ("MSCF1", "MSCF2", "MSCF3", "finite-cokernel-Phi", "finite-cokernel-phi", "base-colour-action")
    if not shapes_ok:
        checks.extend(CheckResult.skipped(name, "dimension mismatch") for name in names)
        return ValidationReport(checks=tuple(checks))

    dominant = m.dominant_colours
    points1, points2 = d1.lattice.points, d2.lattice.points
    problems = []
    for label, point in points2.items():
        if label not in points1:
            problems.append(f"{label} is not a domain colour")
        elif m.Phi.apply(points1[label]) != point:
            problems.append(f"Phi(u_{label})={m.Phi.apply(points1[label])} but u_{label}={point}")
    for label in sorted(dominant):
        if not is_zero(m.Phi.apply(points1[label])):
            problems.append(f"dominant colour {label} maps to {m.Phi.apply(points1[label])}")
    checks.append(CheckResult.of("MSCF1", not problems, "; ".join(problems)))

    bad = _incompatible_cone(m.Phi, d1.fan, d2.fan, dominant)
    checks.append(CheckResult.of("MSCF2", bad is None, f"{bad} maps into no coloured cone"))

    left, right = d2.beta @ m.Phi, m.phi @ d1.beta
    checks.append(CheckResult.of("MSCF3", left == right, f"beta2·Phi={left} but phi·beta1={right}"))

    for name, M in (("finite-cokernel-Phi", m.Phi), ("finite-cokernel-phi", m.phi)):
        structure = cokernel_structure(M)
        checks.append(CheckResult.of(name, structure.is_finite, f"cokernel is {structure.label()}"))

    # the base-lattice colour action must see the same dominant colours
    base1, base2 = base_coloured_lattice(d1).points, base_coloured_lattice(d2).points
    action = []
    for label, point in base1.items():
        expected = base2.get(label, (0,) * d2.codomain_rank)
        if m.phi.apply(point) != expected:
            action.append(f"phi(beta1 u_{label})={m.phi.apply(point)}, expected {expected}")
    checks.append(CheckResult.of("base-colour-action", not action, "; ".join(action)))
    return ValidationReport(checks=tuple(checks))


def require_valid_map(m: StackyMap) -> None:
    report = validate_map(m)
    if not report.valid:
        raise InvalidMapError(report.summary())


def preimage_subfan(m: StackyMap, cc2: ColouredCone) -> List[ColouredCone]:
    """Maximal elements of Φ⁻¹(σ₂ᶜ): domain cones mapping into cc2 with colours outside C_Φ inside F₂."""
    require_in_closure(m.codomain.fan, cc2)
    dominant = m.dominant_colours
    members = [
        cc1 for cc1 in face_closure(m.domain.fan)
        if (cc1.colour_set - dominant) <= cc2.colour_set and is_subcone(image_cone(m.Phi, cc1.cone), cc2.cone)
    ]
    return maximal_coloured_cones(members)


def identity_map(s: StackyColouredFan) -> StackyMap:
    return StackyMap(
        domain=s, codomain=s,
        Phi=IntMatrix.identity(s.fan.rank), phi=IntMatrix.identity(s.codomain_rank),
    )


def decolouration_map(s: StackyColouredFan) -> StackyMap:
    """The map (id, id) from the decoloured stacky fan to s."""
    return StackyMap(
        domain=StackyColouredFan(fan=decolour(s.fan), beta=s.beta), codomain=s,
        Phi=IntMatrix.identity(s.fan.rank), phi=IntMatrix.identity(s.codomain_rank),
    )


def decolour_map(m: StackyMap) -> StackyMap:
    """The same matrices between the decolourations of domain and codomain."""
    return StackyMap(
        domain=StackyColouredFan(fan=decolour(m.domain.fan), beta=m.domain.beta),
        codomain=StackyColouredFan(fan=decolour(m.codomain.fan), beta=m.codomain.beta),
        Phi=m.Phi, phi=m.phi,
    )


def compose(m1: StackyMap, m2: StackyMap) -> StackyMap:
    """m2 ∘ m1."""
    if m1.codomain != m2.domain:
        raise MismatchError("the codomain of the first map is not the domain of the second")
    result = StackyMap(domain=m1.domain, codomain=m2.codomain, Phi=m2.Phi @ m1.Phi, phi=m2.phi @ m1.phi)
    require_valid_map(result)
    return result


def product_stacky_fan(s1: StackyColouredFan, s2: StackyColouredFan, rename: Optional[Mapping[str, str]] = None) -> StackyColouredFan:
    return StackyColouredFan(fan=product(s1.fan, s2.fan, rename), beta=IntMatrix.block_diagonal(s1.beta, s2.beta))


def product_map(m1: StackyMap, m2: StackyMap) -> StackyMap:
    """Φ×Φ' and φ×φ' between the product stacky fans, with consistent colour renaming."""
    rename = colour_renaming(m1.domain.lattice.labels, m2.domain.lattice.labels)
    codomain_labels = set(m2.codomain.lattice.labels)
    codomain_rename = {k: rename.get(k, k) for k in codomain_labels}
    result = StackyMap(
        domain=product_stacky_fan(m1.domain, m2.domain, rename),
        codomain=product_stacky_fan(m1.codomain, m2.codomain, codomain_rename),
        Phi=IntMatrix.block_diagonal(m1.Phi, m2.Phi),
        phi=IntMatrix.block_diagonal(m1.phi, m2.phi),
    )
    require_valid_map(result)
    return result
