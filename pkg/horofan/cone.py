"""
Rational polyhedral cones.

A cone is kept in double description: canonical generators (extreme rays plus a
lineality basis) and the inequalities that cut it out (primitive facet normals
plus a Hermite basis of the equations of its span). Facet normals are found by
enumerating supporting hyperplanes through generator subsets, which is exact and
fast enough for the small ranks this library works in.
"""

import logging
import math
from enum import Enum
from fractions import Fraction
from functools import lru_cache
from itertools import combinations, product
from typing import Iterable, List, Optional, Sequence, Tuple, Union

from pydantic import BaseModel, ConfigDict, model_validator

from .errors import DimensionMismatchError, NotStronglyConvexError
from .lattice import (
    IntMatrix,
    Sublattice,
    Vector,
    as_vector,
    clear_denominators,
    dot,
    is_zero,
    kernel_basis,
    matrix_rank,
    negate,
    primitive,
    saturation,
    smith_normal_form,
    solve_rational,
    subtract,
    unimodular_inverse,
    vectors_rank,
)

logger = logging.getLogger(__name__)


class ContainmentMode(str, Enum):
    BOUNDARY = "boundary"
    RELATIVE_INTERIOR = "relative_interior"


class RationalPoint(BaseModel):
    """A point of Q^n with exact coordinates"""

    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    ambient_rank: int
    coordinates: Tuple[Fraction, ...]

    @model_validator(mode="after")
    def _check_rank(self):
        if len(self.coordinates) != self.ambient_rank:
            raise ValueError("coordinate count must equal the ambient rank")
        return self

    @classmethod
    def of(cls, values: Sequence) -> "RationalPoint":
        coordinates = tuple(Fraction(x) for x in values)
        return cls(ambient_rank=len(coordinates), coordinates=coordinates)


class Cone(BaseModel):
    """
    A rational polyhedral cone in R^n.

    Build cones with cone_from_generators; every field is canonical, so two cones
    are equal exactly when they are the same subset of R^n.
    """

    model_config = ConfigDict(frozen=True)

    ambient_rank: int
    rays: Tuple[Vector, ...] = ()
    lineality: Tuple[Vector, ...] = ()
    facets: Tuple[Vector, ...] = ()
    equations: Tuple[Vector, ...] = ()

    @property
    def dimension(self) -> int:
        return self.ambient_rank - len(self.equations)

    @property
    def lineality_rank(self) -> int:
        return len(self.lineality)

    @property
    def is_strongly_convex(self) -> bool:
        return not self.lineality

    @property
    def is_zero(self) -> bool:
        return self.dimension == 0

    @property
    def is_linear_subspace(self) -> bool:
        return not self.facets

    @property
    def generators(self) -> Tuple[Vector, ...]:
        return self.rays + self.lineality + tuple(negate(v) for v in self.lineality)

    @property
    def inequalities(self) -> Tuple[Vector, ...]:
        """Covectors l with l(x) >= 0 on the cone; together they cut it out exactly."""
        return self.facets + self.equations + tuple(negate(e) for e in self.equations)

    def sort_key(self):
        return (self.dimension, self.rays, self.lineality)

    def __str__(self) -> str:
        if self.is_zero:
            return f"Cone(0 in Z^{self.ambient_rank})"
        parts = [str(r) for r in self.rays]
        parts.extend(f"±{v}" for v in self.lineality)
        return "Cone(" + ", ".join(parts) + ")"


def _project_off(g: Vector, lineality: Sequence[Vector], n: int) -> Vector:
    L = IntMatrix.from_rows(lineality, cols=n)
    gram = L @ L.transpose()
    weights = solve_rational(gram, L.apply(g))
    correction = L.transpose().apply_rational(weights)
    return clear_denominators([Fraction(x) - c for x, c in zip(g, correction)])


def _facet_normals(gens: Sequence[Vector], equations: Sequence[Vector], n: int, d: int) -> Tuple[Vector, ...]:
    if d == 0:
        return ()
    normals = set()
    for subset in combinations(gens, d - 1):
        kernel = kernel_basis(IntMatrix.from_rows(list(subset) + list(equations), cols=n))
        if kernel.rank != 1:
            continue
        a = primitive(kernel.basis[0])
        values = [dot(a, g) for g in gens]
        if all(v >= 0 for v in values):
            normals.add(a)
        elif all(v <= 0 for v in values):
            normals.add(negate(a))
    return tuple(sorted(normals))


def _extreme_rays(gens, facets, equations, lineality, n) -> Tuple[Vector, ...]:
    if lineality:
        candidates = {_project_off(g, lineality, n) for g in gens}
        candidates.discard((0,) * n)
    else:
        candidates = set(gens)
    rays = []
    for p in sorted(candidates):
        tight = [f for f in facets if dot(f, p) == 0]
        if vectors_rank(tight + list(equations) + list(lineality), n) == n - 1:
            rays.append(p)
    return tuple(rays)


def cone_from_generators(vectors: Iterable[Sequence[int]], ambient_rank: Optional[int] = None) -> Cone:
    """Canonical cone generated by the given integer vectors."""
    vectors = [as_vector(v) for v in vectors]
    if ambient_rank is None:
        if not vectors:
            raise DimensionMismatchError("the ambient rank of a cone without generators must be given")
        ambient_rank = len(vectors[0])
    bad = [v for v in vectors if len(v) != ambient_rank]
    if bad:
        raise DimensionMismatchError(f"generator {bad[0]} does not live in Z^{ambient_rank}")
    n = ambient_rank
    gens = sorted({primitive(v) for v in vectors if not is_zero(v)})
    equations = kernel_basis(IntMatrix.from_rows(gens, cols=n)).basis
    d = n - len(equations)
    facets = _facet_normals(gens, equations, n, d)
    lineality = kernel_basis(IntMatrix.from_rows(list(facets) + list(equations), cols=n)).basis
    rays = _extreme_rays(gens, facets, equations, lineality, n)
    return Cone(ambient_rank=n, rays=rays, lineality=lineality, facets=facets, equations=equations)


def zero_cone(ambient_rank: int) -> Cone:
    return cone_from_generators([], ambient_rank)


def dual_cone(c: Cone) -> Cone:
    """The dual cone {l : l(x) >= 0 for x in c}, generated by the cached inequalities."""
    return cone_from_generators(c.inequalities, c.ambient_rank)


def _coordinates(c: Cone, p) -> Tuple[Fraction, ...]:
    if isinstance(p, RationalPoint):
        coordinates = p.coordinates
    else:
        coordinates = tuple(Fraction(x) for x in p)
    if len(coordinates) != c.ambient_rank:
        raise DimensionMismatchError(f"point of rank {len(coordinates)} tested against a cone in rank {c.ambient_rank}")
    return coordinates


def contains(c: Cone, p: Union[RationalPoint, Sequence], mode: ContainmentMode = ContainmentMode.BOUNDARY) -> bool:
    x = _coordinates(c, p)
    if any(dot(e, x) != 0 for e in c.equations):
        return False
    if ContainmentMode(mode) == ContainmentMode.RELATIVE_INTERIOR:
        return all(dot(f, x) > 0 for f in c.facets)
    return all(dot(f, x) >= 0 for f in c.facets)


def is_subcone(inner: Cone, outer: Cone) -> bool:
    if inner.ambient_rank != outer.ambient_rank:
        raise DimensionMismatchError("cones live in different ambient ranks")
    return all(contains(outer, g) for g in inner.generators)


def faces(c: Cone) -> List[Cone]:
    """All faces of a strongly convex cone, from the zero cone up to c itself."""
    return list(_face_tuple(c))


@lru_cache(maxsize=4096)
def _face_tuple(c: Cone) -> Tuple[Cone, ...]:
    if not c.is_strongly_convex:
        raise NotStronglyConvexError(f"{c} has lineality rank {c.lineality_rank}")
    start = frozenset(range(len(c.rays)))
    seen = {start}
    queue = [start]
    while queue:
        current = queue.pop()
        for f in c.facets:
            smaller = frozenset(i for i in current if dot(f, c.rays[i]) == 0)
            if smaller not in seen:
                seen.add(smaller)
                queue.append(smaller)
    result = [cone_from_generators([c.rays[i] for i in sorted(s)], c.ambient_rank) for s in seen]
    logger.debug(f"{c} has {len(result)} faces")
    return tuple(sorted(result, key=Cone.sort_key))


def is_face(c: Cone, tau: Cone) -> bool:
    if tau.ambient_rank != c.ambient_rank or not is_subcone(tau, c):
        return False
    return tau in faces(c)


def smallest_face_containing(c: Cone, p: Union[RationalPoint, Sequence]) -> Cone:
    if not c.is_strongly_convex:
        raise NotStronglyConvexError(f"{c} has lineality rank {c.lineality_rank}")
    x = _coordinates(c, p)
    if not contains(c, x):
        raise ValueError(f"point {tuple(x)} is not in {c}")
    tight = [f for f in c.facets if dot(f, x) == 0]
    return cone_from_generators([r for r in c.rays if all(dot(f, r) == 0 for f in tight)], c.ambient_rank)


def intersect(c1: Cone, c2: Cone) -> Cone:
    if c1.ambient_rank != c2.ambient_rank:
        raise DimensionMismatchError(f"cannot intersect cones in ranks {c1.ambient_rank} and {c2.ambient_rank}")
    combined = cone_from_generators(c1.inequalities + c2.inequalities, c1.ambient_rank)
    return dual_cone(combined)


@lru_cache(maxsize=8192)
def image_cone(M: IntMatrix, c: Cone) -> Cone:
    """Cone generated by the images of the generators; may have lineality."""
    if M.cols != c.ambient_rank:
        raise DimensionMismatchError(f"a {M.rows}x{M.cols} matrix cannot act on a cone in rank {c.ambient_rank}")
    return cone_from_generators([M.apply(g) for g in c.generators], M.rows)


def cone_group(c: Cone) -> Sublattice:
    """The saturated sublattice generated by the lattice points of c."""
    return saturation(Sublattice.spanned_by(c.generators, c.ambient_rank))


def _parallelepiped_points(A: IntMatrix) -> List[Vector]:
    # coset representatives of Z^d / A Z^d, reduced into the half-open parallelepiped of A
    U, D, _ = smith_normal_form(A)
    U_inverse = unimodular_inverse(U)
    diagonal = [D.entries[i][i] for i in range(D.rows)]
    points = []
    for y in product(*(range(d) for d in diagonal)):
        x = U_inverse.apply(y)
        weights = solve_rational(A, x)
        floors = tuple(math.floor(w) for w in weights)
        points.append(subtract(x, A.apply(floors)))
    return points


def hilbert_basis(c: Cone) -> List[Vector]:
    """Minimal generating set of the monoid c ∩ Z^n, sorted lexicographically."""
    if not c.is_strongly_convex:
        raise NotStronglyConvexError(f"{c} has lineality rank {c.lineality_rank}")
    if not c.rays:
        return []
    n = c.ambient_rank
    group = cone_group(c)
    d = group.rank
    coordinates = [group.coordinates(r) for r in c.rays]
    candidates = set(c.rays)
    for subset in combinations(coordinates, d):
        A = IntMatrix.from_columns(subset, rows=d)
        if matrix_rank(A) < d:
            continue
        for point in _parallelepiped_points(A):
            if is_zero(point):
                continue
            candidates.add(tuple(sum(p * b[k] for p, b in zip(point, group.basis)) for k in range(n)))
    basis = [
        x for x in candidates
        if not any(h != x and contains(c, subtract(x, h)) for h in candidates)
    ]
    logger.debug(f"Hilbert basis of {c}: {len(basis)} elements from {len(candidates)} candidates")
    return sorted(basis)
