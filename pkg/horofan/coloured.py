"""
Coloured lattices, coloured cones and coloured fans.

A fan is stored by its maximal coloured cones. The face closure is derived on
demand and always contains the trivial coloured cone 0ᶜ = (0, ∅).
"""

import logging
from functools import lru_cache
from itertools import combinations
from typing import Dict, FrozenSet, Iterable, List, Mapping, Optional, Sequence, Tuple

from pydantic import BaseModel, ConfigDict, model_validator

from .cone import Cone, cone_from_generators, contains, faces, intersect, is_face, is_subcone, zero_cone
from .errors import ConeNotInFanError, NotAFaceError
from .lattice import Vector, as_vector, is_zero
from .report import CheckResult, ValidationReport

logger = logging.getLogger(__name__)


class Colour(BaseModel):
    """A labelled colour point u_α"""

    model_config = ConfigDict(frozen=True)

    label: str
    point: Vector


class ColouredLattice(BaseModel):
    """A lattice Z^rank together with an ordered list of labelled colour points"""

    model_config = ConfigDict(frozen=True)

    rank: int
    colours: Tuple[Colour, ...] = ()

    @model_validator(mode="after")
    def _check_colours(self):
        labels = [c.label for c in self.colours]
        if len(set(labels)) != len(labels):
            raise ValueError("duplicate colour label")
        for c in self.colours:
            if len(c.point) != self.rank:
                raise ValueError(f"colour point of {c.label} does not live in Z^{self.rank}")
        return self

    @classmethod
    def of(cls, rank: int, points: Optional[Mapping[str, Sequence[int]]] = None) -> "ColouredLattice":
        points = points or {}
        return cls(rank=rank, colours=tuple(Colour(label=k, point=as_vector(v)) for k, v in points.items()))

    @property
    def labels(self) -> Tuple[str, ...]:
        return tuple(c.label for c in self.colours)

    @property
    def points(self) -> Dict[str, Vector]:
        return {c.label: c.point for c in self.colours}

    def point(self, label: str) -> Vector:
        for c in self.colours:
            if c.label == label:
                return c.point
        raise KeyError(label)


class ColouredCone(BaseModel):
    """A pair (σ, F) of a cone and a set of colour labels"""

    model_config = ConfigDict(frozen=True)

    cone: Cone
    colour_set: FrozenSet[str] = frozenset()

    def sort_key(self):
        return (self.cone.sort_key(), tuple(sorted(self.colour_set)))

    def contains_coloured(self, other: "ColouredCone") -> bool:
        """Componentwise containment: other.cone ⊆ self.cone and other colours ⊆ self colours."""
        return other.colour_set <= self.colour_set and is_subcone(other.cone, self.cone)

    def __str__(self) -> str:
        colours = "{" + ", ".join(sorted(self.colour_set)) + "}" if self.colour_set else "∅"
        return f"({self.cone}, {colours})"


class ColouredFan(BaseModel):
    """A coloured fan, given by its maximal coloured cones"""

    model_config = ConfigDict(frozen=True)

    lattice: ColouredLattice
    maximal_cones: Tuple[ColouredCone, ...] = ()

    @property
    def rank(self) -> int:
        return self.lattice.rank


def trivial_coloured_cone(rank: int) -> ColouredCone:
    return ColouredCone(cone=zero_cone(rank))


def make_coloured_cone(generators: Iterable[Sequence[int]], colours: Iterable[str] = (), rank: Optional[int] = None) -> ColouredCone:
    return ColouredCone(cone=cone_from_generators(generators, rank), colour_set=frozenset(colours))


def make_fan(lattice: ColouredLattice, cones: Iterable[Tuple[Iterable[Sequence[int]], Iterable[str]]]) -> ColouredFan:
    """Convenience builder from (generators, colour labels) pairs."""
    maximal = tuple(make_coloured_cone(gens, colours, lattice.rank) for gens, colours in cones)
    return ColouredFan(lattice=lattice, maximal_cones=maximal)


def _induced_colours(cc: ColouredCone, tau: Cone, lattice: ColouredLattice) -> FrozenSet[str]:
    points = lattice.points
    return frozenset(a for a in cc.colour_set if a in points and contains(tau, points[a]))


def coloured_face(cc: ColouredCone, tau: Cone, lattice: ColouredLattice) -> ColouredCone:
    """The coloured face (τ, {α ∈ F : u_α ∈ τ}) of cc."""
    if not is_face(cc.cone, tau):
        raise NotAFaceError(f"{tau} is not a face of {cc.cone}")
    return ColouredCone(cone=tau, colour_set=_induced_colours(cc, tau, lattice))


def maximal_or_trivial(f: ColouredFan) -> Tuple[ColouredCone, ...]:
    return f.maximal_cones or (trivial_coloured_cone(f.rank),)


@lru_cache(maxsize=512)
def face_closure(f: ColouredFan) -> Tuple[ColouredCone, ...]:
    closure = {trivial_coloured_cone(f.rank)}
    for cc in f.maximal_cones:
        for tau in faces(cc.cone):
            closure.add(ColouredCone(cone=tau, colour_set=_induced_colours(cc, tau, f.lattice)))
    return tuple(sorted(closure, key=ColouredCone.sort_key))


def find_in_closure(f: ColouredFan, cone: Cone) -> ColouredCone:
    """The member of the face closure whose underlying cone is the given cone."""
    for cc in face_closure(f):
        if cc.cone == cone:
            return cc
    raise ConeNotInFanError(f"{cone} is not a cone of the fan")


def require_in_closure(f: ColouredFan, cc: ColouredCone) -> None:
    if cc not in face_closure(f):
        raise ConeNotInFanError(f"{cc} is not in the face closure of the fan")


def maximal_coloured_cones(cones: Iterable[ColouredCone]) -> List[ColouredCone]:
    """Elements not strictly contained (componentwise) in another element."""
    unique = sorted(set(cones), key=ColouredCone.sort_key)
    return [
        cc for cc in unique
        if not any(other != cc and other.contains_coloured(cc) for other in unique)
    ]


def validate_fan(f: ColouredFan) -> ValidationReport:
    """List every violated fan axiom; an empty report means the fan is valid."""
    violations: List[CheckResult] = []
    points = f.lattice.points
    usable = []
    for cc in f.maximal_cones:
        if cc.cone.ambient_rank != f.rank:
            violations.append(CheckResult.failing("ambient-rank", f"{cc} is not in Z^{f.rank}"))
            continue
        if not cc.cone.is_strongly_convex:
            violations.append(CheckResult.failing("strongly-convex", str(cc)))
            continue
        usable.append(cc)
        for label in sorted(cc.colour_set):
            if label not in points:
                violations.append(CheckResult.failing("unknown-colour", f"{label} in {cc}"))
            elif is_zero(points[label]):
                violations.append(CheckResult.failing("zero-colour-point", f"{label} in {cc}"))
            elif not contains(cc.cone, points[label]):
                violations.append(CheckResult.failing("colour-outside-cone", f"u_{label}={points[label]} not in {cc}"))

    for a, b in combinations(usable, 2):
        pair = f"{a} and {b}"
        if a == b or is_face(a.cone, b.cone) or is_face(b.cone, a.cone):
            violations.append(CheckResult.failing("redundant-maximal-cone", pair))
        meet = intersect(a.cone, b.cone)
        if not (is_face(a.cone, meet) and is_face(b.cone, meet)):
            violations.append(CheckResult.failing("intersection-not-face", f"{pair} meet in {meet}"))
            continue
        shared = a.colour_set & b.colour_set
        if _induced_colours(a, meet, f.lattice) != shared or _induced_colours(b, meet, f.lattice) != shared:
            violations.append(CheckResult.failing("intersection-colours", f"{pair} meet in {meet}"))

    if violations:
        logger.info(f"fan has {len(violations)} axiom violations")
    return ValidationReport(checks=tuple(violations))


def support(f: ColouredFan) -> List[Cone]:
    """The support |Σ| as the list of maximal cones."""
    return [cc.cone for cc in maximal_or_trivial(f)]


def colour_set(f: ColouredFan) -> FrozenSet[str]:
    return frozenset().union(*(cc.colour_set for cc in f.maximal_cones))


def in_support(f: ColouredFan, v: Sequence[int]) -> bool:
    return any(contains(c, v) for c in support(f))


def decolour(f: ColouredFan) -> ColouredFan:
    maximal = []
    for cc in f.maximal_cones:
        plain = ColouredCone(cone=cc.cone)
        if plain not in maximal:
            maximal.append(plain)
    return ColouredFan(lattice=f.lattice, maximal_cones=tuple(maximal))


def non_coloured_rays(f: ColouredFan) -> List[Cone]:
    """Rays ρ with (ρ, ∅) in the face closure, ordered by primitive generator."""
    rays = [cc.cone for cc in face_closure(f) if cc.cone.dimension == 1 and not cc.colour_set]
    return sorted(rays, key=lambda c: c.rays[0])


def open_toroidal_subfan(f: ColouredFan) -> ColouredFan:
    """The subfan of 0ᶜ and the non-coloured rays."""
    return ColouredFan(lattice=f.lattice, maximal_cones=tuple(ColouredCone(cone=r) for r in non_coloured_rays(f)))


def colour_renaming(first: Sequence[str], second: Sequence[str]) -> Dict[str, str]:
    """Rename labels of the second factor that collide with the first by appending primes."""
    used = set(first)
    mapping = {}
    for label in second:
        renamed = label
        while renamed in used:
            renamed += "'"
        used.add(renamed)
        mapping[label] = renamed
    return mapping


def product_lattice(l1: ColouredLattice, l2: ColouredLattice, rename: Optional[Mapping[str, str]] = None) -> ColouredLattice:
    rename = rename if rename is not None else colour_renaming(l1.labels, l2.labels)
    colours = [Colour(label=c.label, point=c.point + (0,) * l2.rank) for c in l1.colours]
    colours += [Colour(label=rename[c.label], point=(0,) * l1.rank + c.point) for c in l2.colours]
    return ColouredLattice(rank=l1.rank + l2.rank, colours=tuple(colours))


def product(f1: ColouredFan, f2: ColouredFan, rename: Optional[Mapping[str, str]] = None) -> ColouredFan:
    """Product fan on the direct sum; colours of f2 are renamed on collision."""
    rename = rename if rename is not None else colour_renaming(f1.lattice.labels, f2.lattice.labels)
    n1, n2 = f1.rank, f2.rank
    lattice = product_lattice(f1.lattice, f2.lattice, rename)
    maximal = []
    for a in maximal_or_trivial(f1):
        for b in maximal_or_trivial(f2):
            generators = [g + (0,) * n2 for g in a.cone.generators] + [(0,) * n1 + h for h in b.cone.generators]
            cc = ColouredCone(
                cone=cone_from_generators(generators, n1 + n2),
                colour_set=a.colour_set | frozenset(rename.get(x, x) for x in b.colour_set),
            )
            if not cc.cone.is_zero:
                maximal.append(cc)
    return ColouredFan(lattice=lattice, maximal_cones=tuple(maximal))
