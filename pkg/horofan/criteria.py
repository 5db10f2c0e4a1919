"""
Decision procedures on stacky coloured fans: toroidality, unstable cones,
isomorphism criteria, good-moduli-space criteria and the good moduli space fan.
"""

import logging
from enum import Enum, IntEnum
from typing import List, Optional, Tuple

from pydantic import BaseModel, ConfigDict, computed_field

from .coloured import (
    Colour,
    ColouredCone,
    ColouredFan,
    ColouredLattice,
    colour_set,
    face_closure,
    maximal_coloured_cones,
    require_in_closure,
    trivial_coloured_cone,
)
from .config import DEFAULT_UNSTABLE_METHOD
from .cone import (
    Cone,
    cone_from_generators,
    cone_group,
    contains,
    dual_cone,
    image_cone,
    intersect,
    is_subcone,
    smallest_face_containing,
)
from .errors import InvalidFanError, InvalidMapError, NotStronglyConvexError
from .lattice import (
    IntMatrix,
    cokernel_structure,
    dot,
    image_sublattice,
    is_unimodular,
    is_zero,
    kernel_basis,
    negate,
    quotient_map,
    vectors_rank,
)
from .report import CheckResult
from .stacky import (
    StackyColouredFan,
    StackyMap,
    base_coloured_lattice,
    check_compatibility,
    preimage_subfan,
    require_valid_map,
    validate_stacky_fan,
)

logger = logging.getLogger(__name__)


class UnstableMethod(IntEnum):
    DUAL_VANISHING = 1
    RELATIVE_INTERIOR = 2
    KERNEL_FACE = 3


class GmsReason(str, Enum):
    NO_UNIQUE_MAX_UNSTABLE = "NoUniqueMaxUnstable"
    INCOMPATIBLE_IMAGE = "IncompatibleImage"
    OK = "OK"


class IsoVerdict(BaseModel):
    """Outcome of the isomorphism criteria Iso1-Iso3"""

    model_config = ConfigDict(frozen=True)

    iso1: CheckResult
    iso2: CheckResult
    iso3: CheckResult

    @computed_field
    @property
    def overall(self) -> bool:
        return self.iso1.passed and self.iso2.passed and self.iso3.passed


class GmsVerdict(BaseModel):
    """Outcome of the good moduli space criteria GMS1-GMS4"""

    model_config = ConfigDict(frozen=True)

    gms1: CheckResult
    gms2: CheckResult
    gms3: CheckResult
    gms4: CheckResult
    tau: Optional[ColouredCone] = None

    @computed_field
    @property
    def overall(self) -> bool:
        return all(c.passed for c in (self.gms1, self.gms2, self.gms3, self.gms4))


class GmsFanResult(BaseModel):
    """The good moduli space coloured fan of a stacky coloured fan, when it exists"""

    model_config = ConfigDict(frozen=True)

    exists: bool
    reason: GmsReason
    unstable: Tuple[ColouredCone, ...] = ()
    tau: Optional[ColouredCone] = None
    gms_lattice: Optional[ColouredLattice] = None
    gms_fan: Optional[ColouredFan] = None
    projection_phi: Optional[IntMatrix] = None
    Phi: Optional[IntMatrix] = None


def is_toroidal(f: ColouredFan) -> bool:
    return not colour_set(f)


# ---------------------------------------------------------------------------
# unstable cones
# ---------------------------------------------------------------------------

def _vanishes_on_image(beta: IntMatrix, tau: Cone) -> bool:
    # every functional that is nonnegative on β_R(τ) vanishes on it
    image = image_cone(beta, tau)
    return all(
        all(dot(l, g) == 0 for g in image.generators)
        for l in dual_cone(image).generators
    )


def _image_is_subspace(beta: IntMatrix, tau: Cone) -> bool:
    image = image_cone(beta, tau)
    return all(contains(image, negate(beta.apply(v))) for v in tau.rays)


def _kernel_meets_interior(beta: IntMatrix, tau: Cone) -> bool:
    n = tau.ambient_rank
    kernel = kernel_basis(beta)
    kernel_cone = cone_from_generators(list(kernel.basis) + [negate(v) for v in kernel.basis], n)
    meet = intersect(tau, kernel_cone)
    total = tuple(sum(column) for column in zip(*meet.rays)) if meet.rays else (0,) * n
    return smallest_face_containing(tau, total) == tau


_METHODS = {
    UnstableMethod.DUAL_VANISHING: _vanishes_on_image,
    UnstableMethod.RELATIVE_INTERIOR: _image_is_subspace,
    UnstableMethod.KERNEL_FACE: _kernel_meets_interior,
}


def cone_is_unstable(beta: IntMatrix, tau: Cone, method: Optional[int] = DEFAULT_UNSTABLE_METHOD) -> bool:
    """Whether β_R(τ) is a linear subspace, decided by the requested method.

    With method=None all three methods run and must agree.
    """
    if not tau.is_strongly_convex:
        raise NotStronglyConvexError(f"{tau} has lineality rank {tau.lineality_rank}")
    if method is not None:
        return _METHODS[UnstableMethod(method)](beta, tau)
    verdicts = {m: check(beta, tau) for m, check in _METHODS.items()}
    if len(set(verdicts.values())) != 1:
        raise AssertionError(f"unstable methods disagree on {tau} under beta={beta}: {verdicts}")
    return verdicts[UnstableMethod.DUAL_VANISHING]


def is_unstable(s: StackyColouredFan, tau: ColouredCone, method: Optional[int] = DEFAULT_UNSTABLE_METHOD) -> bool:
    require_in_closure(s.fan, tau)
    return cone_is_unstable(s.beta, tau.cone, method)


def unstable_cones(s: StackyColouredFan, method: Optional[int] = DEFAULT_UNSTABLE_METHOD) -> List[ColouredCone]:
    return [cc for cc in face_closure(s.fan) if cone_is_unstable(s.beta, cc.cone, method)]


# ---------------------------------------------------------------------------
# isomorphisms
# ---------------------------------------------------------------------------

def monoid_iso_check(Phi: IntMatrix, sigma1: Cone, sigma2: Cone) -> bool:
    """Whether Φ restricts to a bijection σ₁ ∩ N₁ -> σ₂ ∩ N₂."""
    for sigma in (sigma1, sigma2):
        if not sigma.is_strongly_convex:
            raise NotStronglyConvexError(f"{sigma} has lineality rank {sigma.lineality_rank}")
    if image_cone(Phi, sigma1) != sigma2:
        return False
    group = cone_group(sigma1)
    images = [Phi.apply(b) for b in group.basis]
    if vectors_rank(images, Phi.rows) != group.rank:
        return False
    return image_sublattice(Phi, group) == cone_group(sigma2)


def check_isomorphism(m: StackyMap) -> IsoVerdict:
    """Evaluate Iso1-Iso3 for a valid map of stacky coloured fans."""
    require_valid_map(m)
    problems = []
    if not is_unimodular(m.phi):
        problems.append(f"phi={m.phi} is not invertible over Z")
    labels1, labels2 = set(m.domain.lattice.labels), set(m.codomain.lattice.labels)
    if labels1 != labels2:
        problems.append(f"colours {sorted(labels1 ^ labels2)} do not correspond")
    else:
        base1, base2 = base_coloured_lattice(m.domain).points, base_coloured_lattice(m.codomain).points
        problems.extend(
            f"phi does not carry the colour point of {a}" for a in sorted(labels1)
            if m.phi.apply(base1[a]) != base2[a]
        )
    iso1 = CheckResult.of("Iso1", not problems, "; ".join(problems))

    iso2_witness = iso3_witness = skipped_witness = None
    for cc2 in face_closure(m.codomain.fan):
        pre = preimage_subfan(m, cc2)
        if len(pre) != 1:
            iso2_witness = iso2_witness or f"preimage of {cc2} has {len(pre)} maximal cones"
            skipped_witness = skipped_witness or f"preimage of {cc2} is not a single cone"
            continue
        if pre[0].colour_set != cc2.colour_set:
            iso2_witness = iso2_witness or f"preimage {pre[0]} of {cc2} has different colours"
        if not monoid_iso_check(m.Phi, pre[0].cone, cc2.cone):
            iso3_witness = iso3_witness or f"{pre[0].cone} -> {cc2.cone} is not a monoid isomorphism"
    iso2 = CheckResult.of("Iso2", iso2_witness is None, iso2_witness)
    if iso3_witness is not None:
        iso3 = CheckResult.failing("Iso3", iso3_witness)
    elif skipped_witness is not None:
        iso3 = CheckResult.skipped("Iso3", skipped_witness)
    else:
        iso3 = CheckResult.passing("Iso3")
    verdict = IsoVerdict(iso1=iso1, iso2=iso2, iso3=iso3)
    logger.info(f"isomorphism criteria: overall {verdict.overall}")
    return verdict


# ---------------------------------------------------------------------------
# good moduli spaces
# ---------------------------------------------------------------------------

def check_gms_morphism(m: StackyMap) -> GmsVerdict:
    """Evaluate GMS1-GMS4 for a valid map of stacky coloured fans."""
    require_valid_map(m)
    dominant = m.dominant_colours
    witness = None
    for cc2 in face_closure(m.codomain.fan):
        pre = preimage_subfan(m, cc2)
        if len(pre) != 1:
            witness = f"preimage of {cc2} has {len(pre)} maximal cones"
        elif image_cone(m.Phi, pre[0].cone) != cc2.cone:
            witness = f"{pre[0].cone} maps onto {image_cone(m.Phi, pre[0].cone)}, not {cc2.cone}"
        elif pre[0].colour_set != cc2.colour_set | dominant:
            witness = f"preimage {pre[0]} of {cc2} has the wrong colours"
        if witness:
            break
    gms1 = CheckResult.of("GMS1", witness is None, witness)

    zero_preimage = preimage_subfan(m, trivial_coloured_cone(m.codomain.fan.rank))
    tau = zero_preimage[0] if len(zero_preimage) == 1 else None
    if tau is None:
        reason = "preimage of 0ᶜ is not a single cone"
        gms2 = CheckResult.skipped("GMS2", reason)
        gms4 = CheckResult.skipped("GMS4", reason)
    else:
        gms2 = CheckResult.of("GMS2", cone_is_unstable(m.domain.beta, tau.cone), f"{tau} is not unstable")
        kernel = kernel_basis(m.phi)
        expected = cone_group(image_cone(m.domain.beta, tau.cone))
        gms4 = CheckResult.of(
            "GMS4", kernel == expected,
            f"ker(phi)={list(kernel.basis)} but beta1(tau)^gp={list(expected.basis)}",
        )
    structure = cokernel_structure(m.phi)
    gms3 = CheckResult.of("GMS3", structure.is_trivial, f"cokernel of phi is {structure.label()}")
    verdict = GmsVerdict(gms1=gms1, gms2=gms2, gms3=gms3, gms4=gms4, tau=tau)
    logger.info(f"good moduli space criteria: overall {verdict.overall}")
    return verdict


def _gms_candidate_holds(closure, Phi: IntMatrix, candidate: ColouredCone, dominant) -> bool:
    members = [
        cc for cc in closure
        if (cc.colour_set - dominant) <= candidate.colour_set and is_subcone(image_cone(Phi, cc.cone), candidate.cone)
    ]
    top = maximal_coloured_cones(members)
    if len(top) != 1:
        return False
    return image_cone(Phi, top[0].cone) == candidate.cone and top[0].colour_set == candidate.colour_set | dominant


def gms_fan(s: StackyColouredFan) -> GmsFanResult:
    """Build the good moduli space coloured fan from the unique maximal unstable cone."""
    report = validate_stacky_fan(s)
    if not report.valid:
        raise InvalidFanError(report.summary())
    closure = face_closure(s.fan)
    unstable = [cc for cc in closure if cone_is_unstable(s.beta, cc.cone)]
    tops = [u for u in unstable if all(u.contains_coloured(v) for v in unstable)]
    logger.debug(f"{len(unstable)} unstable coloured cones, {len(tops)} containing all others")
    if not tops:
        return GmsFanResult(exists=False, reason=GmsReason.NO_UNIQUE_MAX_UNSTABLE, unstable=tuple(unstable))
    tau = tops[0]
    dominant = tau.colour_set

    rank_gms, projection = quotient_map(s.codomain_rank, cone_group(image_cone(s.beta, tau.cone)))
    Phi = projection @ s.beta
    lattice_gms = ColouredLattice(
        rank=rank_gms,
        colours=tuple(Colour(label=c.label, point=Phi.apply(c.point)) for c in s.lattice.colours if c.label not in dominant),
    )
    points = lattice_gms.points

    candidates: List[ColouredCone] = []
    for cc in closure:
        image = image_cone(Phi, cc.cone)
        if not image.is_strongly_convex:
            continue
        candidate = ColouredCone(cone=image, colour_set=cc.colour_set - dominant)
        if candidate in candidates or any(is_zero(points[a]) for a in candidate.colour_set):
            continue
        if _gms_candidate_holds(closure, Phi, candidate, dominant):
            candidates.append(candidate)
        else:
            logger.debug(f"rejected candidate {candidate}")
    maximal = [cc for cc in maximal_coloured_cones(candidates) if not cc.cone.is_zero]
    fan = ColouredFan(lattice=lattice_gms, maximal_cones=tuple(maximal))

    exists = check_compatibility(Phi, s.fan, fan, dominant)
    return GmsFanResult(
        exists=exists,
        reason=GmsReason.OK if exists else GmsReason.INCOMPATIBLE_IMAGE,
        unstable=tuple(unstable),
        tau=tau,
        gms_lattice=lattice_gms,
        gms_fan=fan,
        projection_phi=projection,
        Phi=Phi,
    )


def gms_morphism(s: StackyColouredFan, result: Optional[GmsFanResult] = None) -> StackyMap:
    """The map (Φ, φ) from s to (Σ_gmsᶜ, id)."""
    result = result or gms_fan(s)
    if not result.exists:
        raise InvalidMapError(f"no good moduli space fan: {result.reason.value}")
    target = StackyColouredFan(fan=result.gms_fan, beta=IntMatrix.identity(result.gms_lattice.rank))
    return StackyMap(domain=s, codomain=target, Phi=result.Phi, phi=result.projection_phi)
