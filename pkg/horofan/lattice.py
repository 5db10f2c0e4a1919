"""
Exact integer linear algebra.

Smith and Hermite normal forms, kernels, cokernels, saturation and quotient
lattices. Elimination runs on numpy arrays of dtype=object, so every entry is a
Python int and nothing overflows.
"""

import logging
from fractions import Fraction
from functools import reduce
from math import gcd
from typing import Iterable, List, Optional, Sequence, Tuple

import numpy as np
from pydantic import BaseModel, ConfigDict, model_validator

from .errors import DimensionMismatchError, NotSaturatedError

logger = logging.getLogger(__name__)

Vector = Tuple[int, ...]


# ---------------------------------------------------------------------------
# vector helpers
# ---------------------------------------------------------------------------

def as_vector(values: Iterable) -> Vector:
    return tuple(int(x) for x in values)


def dot(a: Sequence, b: Sequence):
    if len(a) != len(b):
        raise DimensionMismatchError(f"cannot pair vectors of length {len(a)} and {len(b)}")
    return sum(x * y for x, y in zip(a, b))


def primitive(v: Sequence[int]) -> Vector:
    """Divide an integer vector by the gcd of its coordinates (zero stays zero)."""
    g = reduce(gcd, (abs(int(x)) for x in v), 0)
    if g <= 1:
        return as_vector(v)
    return tuple(int(x) // g for x in v)


def is_zero(v: Sequence) -> bool:
    return all(x == 0 for x in v)


def add(a: Sequence[int], b: Sequence[int]) -> Vector:
    return tuple(int(x) + int(y) for x, y in zip(a, b))


def subtract(a: Sequence[int], b: Sequence[int]) -> Vector:
    return tuple(int(x) - int(y) for x, y in zip(a, b))


def negate(v: Sequence[int]) -> Vector:
    return tuple(-int(x) for x in v)


def unit_vector(n: int, i: int) -> Vector:
    return tuple(1 if j == i else 0 for j in range(n))


def clear_denominators(v: Sequence[Fraction]) -> Vector:
    """Scale a rational vector to a primitive integer vector with the same direction."""
    denominators = [Fraction(x).denominator for x in v]
    lcm = reduce(lambda a, b: a * b // gcd(a, b), denominators, 1)
    return primitive(tuple(int(Fraction(x) * lcm) for x in v))


# ---------------------------------------------------------------------------
# types
# ---------------------------------------------------------------------------

class IntMatrix(BaseModel):
    """Integer matrix; rows are codomain coordinates, so column j is the image of e_j"""

    model_config = ConfigDict(frozen=True)

    rows: int
    cols: int
    entries: Tuple[Tuple[int, ...], ...] = ()

    @model_validator(mode="after")
    def _check_shape(self):
        if self.rows < 0 or self.cols < 0:
            raise ValueError("matrix dimensions must be nonnegative")
        if len(self.entries) != self.rows or any(len(r) != self.cols for r in self.entries):
            raise ValueError(f"entry count does not match shape {self.rows}x{self.cols}")
        return self

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence[int]], cols: Optional[int] = None) -> "IntMatrix":
        rows = [as_vector(r) for r in rows]
        if cols is None:
            if not rows:
                raise DimensionMismatchError("column count of a matrix without rows must be given")
            cols = len(rows[0])
        if any(len(r) != cols for r in rows):
            raise DimensionMismatchError(f"rows of unequal length (expected {cols})")
        return cls(rows=len(rows), cols=cols, entries=tuple(rows))

    @classmethod
    def from_columns(cls, columns: Sequence[Sequence[int]], rows: Optional[int] = None) -> "IntMatrix":
        columns = [as_vector(c) for c in columns]
        if rows is None:
            if not columns:
                raise DimensionMismatchError("row count of a matrix without columns must be given")
            rows = len(columns[0])
        if any(len(c) != rows for c in columns):
            raise DimensionMismatchError(f"columns of unequal length (expected {rows})")
        return cls.from_rows([tuple(c[i] for c in columns) for i in range(rows)], cols=len(columns))

    @classmethod
    def identity(cls, n: int) -> "IntMatrix":
        return cls.from_rows([unit_vector(n, i) for i in range(n)], cols=n)

    @classmethod
    def zero(cls, rows: int, cols: int) -> "IntMatrix":
        return cls.from_rows([(0,) * cols for _ in range(rows)], cols=cols)

    @classmethod
    def from_array(cls, arr: np.ndarray) -> "IntMatrix":
        nrows, ncols = arr.shape
        return cls.from_rows([[int(arr[i, j]) for j in range(ncols)] for i in range(nrows)], cols=ncols)

    @classmethod
    def block_diagonal(cls, a: "IntMatrix", b: "IntMatrix") -> "IntMatrix":
        top = [row + (0,) * b.cols for row in a.entries]
        bottom = [(0,) * a.cols + row for row in b.entries]
        return cls.from_rows(top + bottom, cols=a.cols + b.cols)

    def to_array(self) -> np.ndarray:
        arr = np.zeros((self.rows, self.cols), dtype=object)
        for i, row in enumerate(self.entries):
            for j, x in enumerate(row):
                arr[i, j] = x
        return arr

    def to_lists(self) -> List[List[int]]:
        return [list(r) for r in self.entries]

    @property
    def is_square(self) -> bool:
        return self.rows == self.cols

    def column(self, j: int) -> Vector:
        return tuple(row[j] for row in self.entries)

    def columns(self) -> List[Vector]:
        return [self.column(j) for j in range(self.cols)]

    def transpose(self) -> "IntMatrix":
        return IntMatrix.from_columns(list(self.entries), rows=self.cols)

    def apply(self, v: Sequence[int]) -> Vector:
        if len(v) != self.cols:
            raise DimensionMismatchError(f"cannot apply a {self.rows}x{self.cols} matrix to a vector of length {len(v)}")
        return tuple(sum(a * int(x) for a, x in zip(row, v)) for row in self.entries)

    def apply_rational(self, v: Sequence[Fraction]) -> Tuple[Fraction, ...]:
        if len(v) != self.cols:
            raise DimensionMismatchError(f"cannot apply a {self.rows}x{self.cols} matrix to a vector of length {len(v)}")
        return tuple(sum((a * Fraction(x) for a, x in zip(row, v)), Fraction(0)) for row in self.entries)

    def __matmul__(self, other: "IntMatrix") -> "IntMatrix":
        if self.cols != other.rows:
            raise DimensionMismatchError(f"cannot compose {self.rows}x{self.cols} with {other.rows}x{other.cols}")
        cols = other.columns()
        return IntMatrix.from_rows([[dot(row, c) for c in cols] for row in self.entries], cols=other.cols)

    def __str__(self) -> str:
        return str(self.to_lists())


class AbelianGroupStructure(BaseModel):
    """Finitely generated abelian group Z^r ⊕ Z/d_1 ⊕ ... ⊕ Z/d_k with d_1 | ... | d_k"""

    model_config = ConfigDict(frozen=True)

    free_rank: int = 0
    torsion: Tuple[int, ...] = ()

    @model_validator(mode="after")
    def _check_invariant_factors(self):
        if self.free_rank < 0:
            raise ValueError("free rank must be nonnegative")
        if any(d < 2 for d in self.torsion):
            raise ValueError("invariant factors must be at least 2")
        for a, b in zip(self.torsion, self.torsion[1:]):
            if b % a:
                raise ValueError(f"invariant factors {a} and {b} break the divisibility chain")
        return self

    @property
    def is_trivial(self) -> bool:
        return self.free_rank == 0 and not self.torsion

    @property
    def is_finite(self) -> bool:
        return self.free_rank == 0

    @property
    def order(self) -> Optional[int]:
        if not self.is_finite:
            return None
        return reduce(lambda a, b: a * b, self.torsion, 1)

    def direct_sum(self, other: "AbelianGroupStructure") -> "AbelianGroupStructure":
        factors = self.torsion + other.torsion
        k = len(factors)
        diagonal = IntMatrix.from_rows(
            [tuple(d if j == i else 0 for j in range(k)) for i, d in enumerate(factors)], cols=k
        )
        finite_part = cokernel_structure(diagonal)
        return AbelianGroupStructure(free_rank=self.free_rank + other.free_rank, torsion=finite_part.torsion)

    def label(self) -> str:
        parts = []
        if self.free_rank == 1:
            parts.append("Z")
        elif self.free_rank > 1:
            parts.append(f"Z^{self.free_rank}")
        parts.extend(f"Z/{d}" for d in self.torsion)
        return " ⊕ ".join(parts) if parts else "0"


class Sublattice(BaseModel):
    """Sublattice of Z^n stored by its Hermite basis, so equal lattices compare equal"""

    model_config = ConfigDict(frozen=True)

    ambient_rank: int
    basis: Tuple[Vector, ...] = ()

    @model_validator(mode="after")
    def _check_basis(self):
        if any(len(b) != self.ambient_rank for b in self.basis):
            raise ValueError("basis vectors must have the ambient rank")
        return self

    @classmethod
    def spanned_by(cls, vectors: Iterable[Sequence[int]], ambient_rank: int) -> "Sublattice":
        vectors = [as_vector(v) for v in vectors]
        if any(len(v) != ambient_rank for v in vectors):
            raise DimensionMismatchError(f"vectors do not live in Z^{ambient_rank}")
        return cls(ambient_rank=ambient_rank, basis=_hermite_rows(vectors, ambient_rank))

    @classmethod
    def zero(cls, ambient_rank: int) -> "Sublattice":
        return cls(ambient_rank=ambient_rank)

    @classmethod
    def full(cls, ambient_rank: int) -> "Sublattice":
        return cls.spanned_by([unit_vector(ambient_rank, i) for i in range(ambient_rank)], ambient_rank)

    @property
    def rank(self) -> int:
        return len(self.basis)

    def as_matrix(self) -> IntMatrix:
        return IntMatrix.from_rows(self.basis, cols=self.ambient_rank)

    def coordinates(self, v: Sequence[int]) -> Vector:
        """Integer coefficients of v in the basis; ValueError when v is not in the lattice."""
        if len(v) != self.ambient_rank:
            raise DimensionMismatchError(f"vector of length {len(v)} is not in Z^{self.ambient_rank}")
        residual = list(as_vector(v))
        coefficients = []
        for b in self.basis:
            pivot = next(j for j, x in enumerate(b) if x)
            c, r = divmod(residual[pivot], b[pivot])
            if r:
                raise ValueError(f"{tuple(v)} is not in the lattice")
            coefficients.append(c)
            residual = [x - c * y for x, y in zip(residual, b)]
        if any(residual):
            raise ValueError(f"{tuple(v)} is not in the lattice")
        return tuple(coefficients)

    def contains(self, v: Sequence[int]) -> bool:
        try:
            self.coordinates(v)
        except ValueError:
            return False
        return True

    def is_saturated(self) -> bool:
        return saturation(self) == self


# ---------------------------------------------------------------------------
# normal forms
# ---------------------------------------------------------------------------

def _identity_array(n: int) -> np.ndarray:
    arr = np.zeros((n, n), dtype=object)
    for i in range(n):
        arr[i, i] = 1
    return arr


def _smith(arr: np.ndarray) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
    # Invariant throughout: U @ arr @ V == D.
    m, n = arr.shape
    D = arr.copy()
    U = _identity_array(m)
    V = _identity_array(n)
    for t in range(min(m, n)):
        while True:
            candidates = [(abs(D[i, j]), i, j) for i in range(t, m) for j in range(t, n) if D[i, j] != 0]
            if not candidates:
                return U, D, V
            _, i, j = min(candidates)
            if i != t:
                D[[t, i], :] = D[[i, t], :]
                U[[t, i], :] = U[[i, t], :]
            if j != t:
                D[:, [t, j]] = D[:, [j, t]]
                V[:, [t, j]] = V[:, [j, t]]
            pivot = D[t, t]
            clean = True
            for i in range(t + 1, m):
                q = D[i, t] // pivot
                if q:
                    D[i, :] = D[i, :] - q * D[t, :]
                    U[i, :] = U[i, :] - q * U[t, :]
                if D[i, t] != 0:
                    clean = False
            for j in range(t + 1, n):
                q = D[t, j] // pivot
                if q:
                    D[:, j] = D[:, j] - q * D[:, t]
                    V[:, j] = V[:, j] - q * V[:, t]
                if D[t, j] != 0:
                    clean = False
            if not clean:
                continue
            # the pivot must divide the whole remaining block
            offender = next(
                (i for i in range(t + 1, m) for j in range(t + 1, n) if D[i, j] % pivot != 0), None
            )
            if offender is None:
                break
            D[t, :] = D[t, :] + D[offender, :]
            U[t, :] = U[t, :] + U[offender, :]
        if D[t, t] < 0:
            D[t, :] = -D[t, :]
            U[t, :] = -U[t, :]
    return U, D, V


def smith_normal_form(M: IntMatrix) -> Tuple[IntMatrix, IntMatrix, IntMatrix]:
    """Return (U, D, V) with U·M·V = D, U and V unimodular, D diagonal with d_1 | d_2 | ..."""
    U, D, V = _smith(M.to_array())
    return IntMatrix.from_array(U), IntMatrix.from_array(D), IntMatrix.from_array(V)


def _diagonal(D: IntMatrix) -> List[int]:
    return [D.entries[i][i] for i in range(min(D.rows, D.cols))]


def _hermite_rows(rows: Sequence[Vector], ncols: int) -> Tuple[Vector, ...]:
    A = [list(r) for r in rows]
    m = len(A)
    pivot_row = 0
    for col in range(ncols):
        if pivot_row == m:
            break
        while True:
            nonzero = [r for r in range(pivot_row, m) if A[r][col] != 0]
            if not nonzero:
                break
            p = min(nonzero, key=lambda r: abs(A[r][col]))
            A[pivot_row], A[p] = A[p], A[pivot_row]
            done = True
            for r in range(pivot_row + 1, m):
                if A[r][col]:
                    q = A[r][col] // A[pivot_row][col]
                    A[r] = [x - q * y for x, y in zip(A[r], A[pivot_row])]
                    if A[r][col]:
                        done = False
            if done:
                break
        if A[pivot_row][col] == 0:
            continue
        if A[pivot_row][col] < 0:
            A[pivot_row] = [-x for x in A[pivot_row]]
        for r in range(pivot_row):
            q = A[r][col] // A[pivot_row][col]
            if q:
                A[r] = [x - q * y for x, y in zip(A[r], A[pivot_row])]
        pivot_row += 1
    return tuple(tuple(r) for r in A[:pivot_row])


def hermite_normal_form(M: IntMatrix) -> IntMatrix:
    """Row-style Hermite normal form of M with zero rows dropped."""
    return IntMatrix.from_rows(_hermite_rows([tuple(r) for r in M.entries], M.cols), cols=M.cols)


def matrix_rank(M: IntMatrix) -> int:
    _, D, _ = smith_normal_form(M)
    return sum(1 for d in _diagonal(D) if d)


def vectors_rank(vectors: Sequence[Sequence[int]], ambient_rank: int) -> int:
    return len(_hermite_rows([as_vector(v) for v in vectors], ambient_rank))


def is_unimodular(M: IntMatrix) -> bool:
    if not M.is_square:
        return False
    _, D, _ = smith_normal_form(M)
    return all(d == 1 for d in _diagonal(D))


def unimodular_inverse(M: IntMatrix) -> IntMatrix:
    U, D, V = smith_normal_form(M)
    if not M.is_square or any(d != 1 for d in _diagonal(D)):
        raise ValueError("matrix is not unimodular")
    return V @ U


def solve_rational(M: IntMatrix, b: Sequence) -> Tuple[Fraction, ...]:
    """Solve M x = b over the rationals for square nonsingular M."""
    if not M.is_square or len(b) != M.rows:
        raise DimensionMismatchError("solve_rational needs a square matrix and a matching right-hand side")
    U, D, V = smith_normal_form(M)
    diagonal = _diagonal(D)
    if any(d == 0 for d in diagonal):
        raise ValueError("matrix is singular")
    rhs = U.apply_rational([Fraction(x) for x in b])
    y = [Fraction(r) / d for r, d in zip(rhs, diagonal)]
    return V.apply_rational(y)


# ---------------------------------------------------------------------------
# kernels, cokernels, quotients
# ---------------------------------------------------------------------------

def cokernel_structure(M: IntMatrix) -> AbelianGroupStructure:
    """Structure of Z^rows / image(M)."""
    _, D, _ = smith_normal_form(M)
    nonzero = [d for d in _diagonal(D) if d]
    return AbelianGroupStructure(
        free_rank=M.rows - len(nonzero),
        torsion=tuple(d for d in nonzero if d > 1),
    )


def kernel_basis(M: IntMatrix) -> Sublattice:
    """Saturated sublattice of Z^cols consisting of all integer solutions of M v = 0."""
    _, D, V = smith_normal_form(M)
    r = sum(1 for d in _diagonal(D) if d)
    return Sublattice.spanned_by([V.column(j) for j in range(r, M.cols)], M.cols)


def saturation(S: Sublattice) -> Sublattice:
    if S.rank == 0:
        return S
    # (span_Q S) ∩ Z^n is the kernel of the integer orthogonal complement
    complement = kernel_basis(S.as_matrix())
    return kernel_basis(complement.as_matrix())


def image_sublattice(M: IntMatrix, S: Sublattice) -> Sublattice:
    if M.cols != S.ambient_rank:
        raise DimensionMismatchError(f"cannot map a sublattice of Z^{S.ambient_rank} by a {M.rows}x{M.cols} matrix")
    return Sublattice.spanned_by([M.apply(b) for b in S.basis], M.rows)


def quotient_map(ambient_rank: int, S: Sublattice) -> Tuple[int, IntMatrix]:
    """Surjection Z^n -> Z^(n - rank S) with kernel exactly S (S must be saturated)."""
    if S.ambient_rank != ambient_rank:
        raise DimensionMismatchError(f"sublattice of Z^{S.ambient_rank} is not in Z^{ambient_rank}")
    if saturation(S) != S:
        raise NotSaturatedError(f"sublattice {list(S.basis)} is not saturated")
    k = S.rank
    if k == 0:
        return ambient_rank, IntMatrix.identity(ambient_rank)
    inclusion = IntMatrix.from_columns(S.basis, rows=ambient_rank)
    U, _, _ = smith_normal_form(inclusion)
    rows = []
    for row in U.entries[k:]:
        leading = next((x for x in row if x), 0)
        rows.append(negate(row) if leading < 0 else row)
    projection = IntMatrix.from_rows(rows, cols=ambient_rank)
    logger.debug(f"quotient of Z^{ambient_rank} by rank-{k} sublattice: projection {projection}")
    return ambient_rank - k, projection
