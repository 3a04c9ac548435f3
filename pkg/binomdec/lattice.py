#!/usr/bin/env python3
"""
Integer lattices for binomdec

Column Hermite normal form, Smith normal form with unimodular transforms, and
the saturations Sat, Sat_p and Sat'_p. Entries are Python ints throughout.
"""

import logging
from dataclasses import dataclass
from math import prod
from typing import Iterable, List, Sequence, Tuple

from sympy import isprime

from .exceptions import DimensionMismatch, InfiniteQuotient, InvalidPrime, NotASublattice, NotInLattice

logger = logging.getLogger(__name__)

Vector = Tuple[int, ...]


@dataclass(frozen=True)
class IntMatrix:
    """Dense integer matrix stored row-major"""
    nrows: int
    ncols: int
    entries: Tuple[int, ...]

    def __post_init__(self):
        if len(self.entries) != self.nrows * self.ncols:
            raise DimensionMismatch(
                f"{self.nrows}x{self.ncols} matrix needs {self.nrows * self.ncols} entries, got {len(self.entries)}"
            )

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence[int]], ncols: int = None) -> "IntMatrix":
        rows = [tuple(int(x) for x in row) for row in rows]
        if ncols is None:
            ncols = len(rows[0]) if rows else 0
        if any(len(row) != ncols for row in rows):
            raise DimensionMismatch("rows of unequal length")
        return cls(len(rows), ncols, tuple(x for row in rows for x in row))

    @classmethod
    def from_columns(cls, columns: Sequence[Sequence[int]], nrows: int) -> "IntMatrix":
        columns = [tuple(int(x) for x in col) for col in columns]
        if any(len(col) != nrows for col in columns):
            raise DimensionMismatch(f"columns must have length {nrows}")
        return cls.from_rows([[col[i] for col in columns] for i in range(nrows)], ncols=len(columns))

    @classmethod
    def identity(cls, n: int) -> "IntMatrix":
        return cls.from_rows([[int(i == j) for j in range(n)] for i in range(n)], ncols=n)

    def __getitem__(self, position: Tuple[int, int]) -> int:
        i, j = position
        return self.entries[i * self.ncols + j]

    def rows(self) -> List[List[int]]:
        return [list(self.entries[i * self.ncols:(i + 1) * self.ncols]) for i in range(self.nrows)]

    def column(self, j: int) -> Vector:
        return tuple(self.entries[i * self.ncols + j] for i in range(self.nrows))

    def columns(self) -> List[Vector]:
        return [self.column(j) for j in range(self.ncols)]

    def __matmul__(self, other: "IntMatrix") -> "IntMatrix":
        if self.ncols != other.nrows:
            raise DimensionMismatch(f"cannot multiply {self.nrows}x{self.ncols} by {other.nrows}x{other.ncols}")
        a, b = self.rows(), other.rows()
        return IntMatrix.from_rows(
            [[sum(a[i][t] * b[t][j] for t in range(self.ncols)) for j in range(other.ncols)] for i in range(self.nrows)],
            ncols=other.ncols,
        )

    def is_diagonal(self) -> bool:
        return all(self[i, j] == 0 for i in range(self.nrows) for j in range(self.ncols) if i != j)

    def diagonal(self) -> List[int]:
        return [self[i, i] for i in range(min(self.nrows, self.ncols))]


# Column operations on lists of rows

def _col_addmul(a: List[List[int]], target: int, source: int, factor: int) -> None:
    """column target += factor * column source"""
    if factor:
        for row in a:
            row[target] += factor * row[source]


def _col_swap(a: List[List[int]], i: int, j: int) -> None:
    if i != j:
        for row in a:
            row[i], row[j] = row[j], row[i]


def _col_negate(a: List[List[int]], j: int) -> None:
    for row in a:
        row[j] = -row[j]


def hnf(m: IntMatrix) -> Tuple[IntMatrix, IntMatrix]:
    """
    Column Hermite normal form.

    Returns (H, U) with H = M*U and U unimodular. The nonzero columns of H come
    first, in echelon form with positive pivots; in each pivot row the entries
    to the left of the pivot lie in [0, pivot).
    """
    h = m.rows()
    u = IntMatrix.identity(m.ncols).rows()
    pivot_col = 0
    for i in range(m.nrows):
        if pivot_col >= m.ncols:
            break
        while True:
            nonzero = [j for j in range(pivot_col, m.ncols) if h[i][j]]
            if not nonzero:
                break
            best = min(nonzero, key=lambda j: abs(h[i][j]))
            _col_swap(h, pivot_col, best)
            _col_swap(u, pivot_col, best)
            done = True
            for j in range(pivot_col + 1, m.ncols):
                if h[i][j]:
                    q = h[i][j] // h[i][pivot_col]
                    _col_addmul(h, j, pivot_col, -q)
                    _col_addmul(u, j, pivot_col, -q)
                    if h[i][j]:
                        done = False
            if done:
                break
        if not h[i][pivot_col]:
            continue
        if h[i][pivot_col] < 0:
            _col_negate(h, pivot_col)
            _col_negate(u, pivot_col)
        pivot = h[i][pivot_col]
        for j in range(pivot_col):
            q = h[i][j] // pivot
            _col_addmul(h, j, pivot_col, -q)
            _col_addmul(u, j, pivot_col, -q)
        pivot_col += 1
    return IntMatrix.from_rows(h, ncols=m.ncols), IntMatrix.from_rows(u, ncols=m.ncols)


@dataclass(frozen=True)
class SmithForm:
    diagonal: IntMatrix
    left: IntMatrix
    right: IntMatrix
    left_inverse: IntMatrix

    def __iter__(self):
        # unpacks as (D, U, V)
        return iter((self.diagonal, self.left, self.right))


def snf(m: IntMatrix) -> SmithForm:
    """
    Smith normal form D = U*M*V with U, V unimodular and d_1 | d_2 | ...

    U^-1 is tracked alongside U; pivots are chosen by smallest absolute value.
    """
    nr, nc = m.nrows, m.ncols
    a = m.rows()
    u = IntMatrix.identity(nr).rows()
    u_inv = IntMatrix.identity(nr).rows()
    v = IntMatrix.identity(nc).rows()

    def row_addmul(target: int, source: int, factor: int) -> None:
        # row target += factor * row source, applied to A and U; U^-1 gets the inverse column op
        if not factor:
            return
        for mat in (a, u):
            mat[target] = [x + factor * y for x, y in zip(mat[target], mat[source])]
        _col_addmul(u_inv, source, target, -factor)

    def row_swap(i: int, j: int) -> None:
        if i != j:
            for mat in (a, u):
                mat[i], mat[j] = mat[j], mat[i]
            _col_swap(u_inv, i, j)

    def col_addmul(target: int, source: int, factor: int) -> None:
        _col_addmul(a, target, source, factor)
        _col_addmul(v, target, source, factor)

    def col_swap(i: int, j: int) -> None:
        _col_swap(a, i, j)
        _col_swap(v, i, j)

    for t in range(min(nr, nc)):
        cells = [(abs(a[i][j]), i, j) for i in range(t, nr) for j in range(t, nc) if a[i][j]]
        if not cells:
            break
        _, i, j = min(cells)
        row_swap(t, i)
        col_swap(t, j)
        while True:
            for i in range(t + 1, nr):
                row_addmul(i, t, -(a[i][t] // a[t][t]))
            for j in range(t + 1, nc):
                col_addmul(j, t, -(a[t][j] // a[t][t]))
            leftovers = [(abs(a[i][t]), i, t) for i in range(t + 1, nr) if a[i][t]]
            leftovers += [(abs(a[t][j]), t, j) for j in range(t + 1, nc) if a[t][j]]
            if leftovers:
                _, i, j = min(leftovers)
                row_swap(t, i)
                col_swap(t, j)
                continue
            bad = next(((i, j) for i in range(t + 1, nr) for j in range(t + 1, nc) if a[i][j] % a[t][t]), None)
            if bad is None:
                break
            row_addmul(t, bad[0], 1)
        if a[t][t] < 0:
            for mat in (a, u):
                mat[t] = [-x for x in mat[t]]
            _col_negate(u_inv, t)
    return SmithForm(
        IntMatrix.from_rows(a, ncols=nc),
        IntMatrix.from_rows(u, ncols=nr),
        IntMatrix.from_rows(v, ncols=nc),
        IntMatrix.from_rows(u_inv, ncols=nr),
    )


@dataclass(frozen=True)
class Lattice:
    """
    Sublattice of Z^ambient, stored as the nonzero columns of its column HNF.

    `ambient` lists the variable indices the coordinates refer to.
    """
    ambient: Tuple[int, ...]
    basis: Tuple[Vector, ...]

    @classmethod
    def from_generators(cls, ambient: Iterable[int], vectors: Iterable[Sequence[int]]) -> "Lattice":
        ambient = tuple(ambient)
        vectors = [tuple(int(x) for x in v) for v in vectors]
        if any(len(v) != len(ambient) for v in vectors):
            raise DimensionMismatch(f"generators must have length {len(ambient)}")
        if not vectors:
            return cls(ambient, ())
        h, _ = hnf(IntMatrix.from_columns(vectors, len(ambient)))
        return cls(ambient, tuple(col for col in h.columns() if any(col)))

    @classmethod
    def zero(cls, ambient: Iterable[int]) -> "Lattice":
        return cls(tuple(ambient), ())

    @classmethod
    def full(cls, ambient: Iterable[int]) -> "Lattice":
        ambient = tuple(ambient)
        return cls.from_generators(ambient, [[int(i == j) for i in range(len(ambient))] for j in range(len(ambient))])

    @property
    def dimension(self) -> int:
        return len(self.ambient)

    @property
    def rank(self) -> int:
        return len(self.basis)

    def matrix(self) -> IntMatrix:
        return IntMatrix.from_columns(self.basis, self.dimension)

    def coordinates(self, v: Sequence[int]) -> Tuple[int, ...]:
        """Integer coordinates of v in the basis, by back-substitution"""
        if len(v) != self.dimension:
            raise DimensionMismatch(f"vector of length {len(v)} in a lattice of dimension {self.dimension}")
        residual = [int(x) for x in v]
        coords = []
        for b in self.basis:
            row = next(i for i, x in enumerate(b) if x)
            a, rem = divmod(residual[row], b[row])
            if rem:
                raise NotInLattice(f"{tuple(v)} is not in the lattice")
            residual = [x - a * y for x, y in zip(residual, b)]
            coords.append(a)
        if any(residual):
            raise NotInLattice(f"{tuple(v)} is not in the lattice")
        return tuple(coords)

    def member(self, v: Sequence[int]) -> bool:
        try:
            self.coordinates(v)
        except NotInLattice:
            return False
        return True

    def contains(self, other: "Lattice") -> bool:
        self._same_ambient(other)
        return all(self.member(b) for b in other.basis)

    def _same_ambient(self, other: "Lattice") -> None:
        if self.ambient != other.ambient:
            raise DimensionMismatch(f"lattices over {self.ambient} and {other.ambient}")

    def _saturation_data(self) -> Tuple[List[int], List[Vector]]:
        """Invariant factors d_i and a basis w_i of Sat(L) with L = span(d_i w_i)"""
        form = snf(self.matrix())
        factors = form.diagonal.diagonal()[:self.rank]
        return factors, form.left_inverse.columns()[:self.rank]

    def __str__(self) -> str:
        return "span{" + ", ".join(str(b) for b in self.basis) + "}"


def rank(lattice: Lattice) -> int:
    return lattice.rank


def member(lattice: Lattice, v: Sequence[int]) -> bool:
    return lattice.member(v)


def saturate(lattice: Lattice) -> Lattice:
    """Sat(L) = (Q L) cap Z^n"""
    if not lattice.rank:
        return lattice
    _, sat_basis = lattice._saturation_data()
    return Lattice.from_generators(lattice.ambient, sat_basis)


def _check_prime(p: int) -> None:
    if p != 0 and not isprime(p):
        raise InvalidPrime(f"{p} is neither 0 nor a prime")


def _split_factor(d: int, p: int) -> Tuple[int, int]:
    """d = p^a * m with p not dividing m; returns (p^a, m)"""
    power = 1
    while d % p == 0:
        d //= p
        power *= p
    return power, d


def sat_p(lattice: Lattice, p: int) -> Lattice:
    """Largest lattice between L and Sat(L) with p-power index; Sat_0(L) = L"""
    _check_prime(p)
    if p == 0 or not lattice.rank:
        return lattice
    factors, sat_basis = lattice._saturation_data()
    scaled = [[_split_factor(d, p)[1] * x for x in w] for d, w in zip(factors, sat_basis)]
    return Lattice.from_generators(lattice.ambient, scaled)


def sat_prime_p(lattice: Lattice, p: int) -> Lattice:
    """Largest lattice between L and Sat(L) with index prime to p; Sat'_0(L) = Sat(L)"""
    _check_prime(p)
    if p == 0:
        return saturate(lattice)
    if not lattice.rank:
        return lattice
    factors, sat_basis = lattice._saturation_data()
    scaled = [[_split_factor(d, p)[0] * x for x in w] for d, w in zip(factors, sat_basis)]
    return Lattice.from_generators(lattice.ambient, scaled)


@dataclass(frozen=True)
class QuotientStructure:
    """
    Finite quotient L_sup / L.

    `basis` is a basis w_i of L_sup with L = span(invariants[i] * w_i);
    `factors` and `generators` keep only the entries with invariant > 1.
    """
    sub: Lattice
    sup: Lattice
    invariants: Tuple[int, ...]
    basis: Tuple[Vector, ...]

    @property
    def factors(self) -> Tuple[int, ...]:
        return tuple(d for d in self.invariants if d > 1)

    @property
    def generators(self) -> Tuple[Vector, ...]:
        return tuple(w for d, w in zip(self.invariants, self.basis) if d > 1)

    @property
    def order(self) -> int:
        return prod(self.invariants)


def quotient(sub: Lattice, sup: Lattice) -> QuotientStructure:
    sup._same_ambient(sub)
    if not sup.contains(sub):
        raise NotASublattice(f"{sub} is not contained in {sup}")
    if sub.rank != sup.rank:
        raise InfiniteQuotient(f"rank {sub.rank} sublattice of a rank {sup.rank} lattice")
    if not sup.rank:
        return QuotientStructure(sub, sup, (), ())
    # sub = sup * C
    c = IntMatrix.from_columns([sup.coordinates(b) for b in sub.basis], sup.rank)
    form = snf(c)
    adapted = IntMatrix.from_columns(sup.basis, sup.dimension) @ form.left_inverse
    return QuotientStructure(sub, sup, tuple(form.diagonal.diagonal()), tuple(adapted.columns()))
