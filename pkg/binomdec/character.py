#!/usr/bin/env python3
"""
Partial characters on sublattices of Z^Delta

A partial character assigns a nonzero field value to each HNF basis vector of
its lattice. Extension enumeration follows the invariant factor decomposition
of the quotient L_sup / L.
"""

import logging
from dataclasses import dataclass
from itertools import product
from typing import Iterable, List, NamedTuple, Sequence, Tuple, TYPE_CHECKING

from .exceptions import FieldMismatch, InconsistentCharacter, InvariantViolation, MissingRoots
from .field import FieldCtx, FieldElement, embedding, nth_roots, prime_to_p_part, splitting_extension
from .lattice import IntMatrix, Lattice, hnf, quotient, sat_prime_p, saturate

if TYPE_CHECKING:
    from .bideal import BinomialIdeal, PolynomialRing

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class PartialCharacter:
    lattice: Lattice
    values: Tuple[FieldElement, ...]
    field: FieldCtx

    def __post_init__(self):
        if len(self.values) != self.lattice.rank:
            raise InconsistentCharacter(f"{len(self.values)} values for a rank {self.lattice.rank} lattice")
        for value in self.values:
            if value.ctx != self.field:
                raise FieldMismatch(f"character value in {value.ctx}, expected {self.field}")
            if value.is_zero:
                raise InconsistentCharacter("character values must be nonzero")

    @classmethod
    def from_generators(
        cls, ambient: Iterable[int], pairs: Sequence[Tuple[Sequence[int], FieldElement]], field: FieldCtx
    ) -> "PartialCharacter":
        """
        Character on the lattice spanned by the given vectors, with the given values.

        Relations among the generators must be respected by the values,
        otherwise InconsistentCharacter is raised.
        """
        ambient = tuple(ambient)
        if not pairs:
            return cls(Lattice.zero(ambient), (), field)
        vectors = [tuple(v) for v, _ in pairs]
        values = [field.element(c) for _, c in pairs]
        h, u = hnf(IntMatrix.from_columns(vectors, len(ambient)))
        images = []
        for j in range(h.ncols):
            image = field.one
            for i, value in enumerate(values):
                image = image * value ** u[i, j]
            if any(h.column(j)):
                images.append(image)
            elif not image.is_one:
                raise InconsistentCharacter(
                    f"relation {u.column(j)} among {vectors} evaluates to {image}, not 1"
                )
        return cls(Lattice(ambient, tuple(col for col in h.columns() if any(col))), tuple(images), field)

    @classmethod
    def trivial(cls, lattice: Lattice, field: FieldCtx) -> "PartialCharacter":
        return cls(lattice, tuple(field.one for _ in lattice.basis), field)

    @property
    def ambient(self) -> Tuple[int, ...]:
        return self.lattice.ambient

    def evaluate(self, v: Sequence[int]) -> FieldElement:
        result = self.field.one
        for value, coordinate in zip(self.values, self.lattice.coordinates(v)):
            result = result * value ** coordinate
        return result

    def with_field(self, target: FieldCtx) -> "PartialCharacter":
        if target == self.field:
            return self
        emb = embedding(self.field, target)
        return PartialCharacter(self.lattice, tuple(emb(v) for v in self.values), target)

    def key(self) -> tuple:
        return (self.lattice, tuple(v.coeffs for v in self.values), self.field)

    def __str__(self) -> str:
        pairs = ", ".join(f"{b} -> {v}" for b, v in zip(self.lattice.basis, self.values))
        return f"rho[{pairs}] over {self.field}"


def evaluate(rho: PartialCharacter, v: Sequence[int]) -> FieldElement:
    return rho.evaluate(v)


def lattice_ideal(rho: PartialCharacter, ring: "PolynomialRing") -> "BinomialIdeal":
    """I(rho): basis binomials x^(b+) - rho(b) x^(b-), saturated by the ambient variables"""
    from .bideal import BinomialIdeal

    if ring.field != rho.field:
        raise FieldMismatch(f"character over {rho.field} but ring over {ring.field}")
    generators = []
    for b, value in zip(rho.lattice.basis, rho.values):
        plus = [0] * ring.nvars
        minus = [0] * ring.nvars
        for var, x in zip(rho.ambient, b):
            if x > 0:
                plus[var] = x
            else:
                minus[var] = -x
        generators.append(ring.monomial(tuple(plus)) - ring.monomial(tuple(minus), value))
    ideal = BinomialIdeal(ring, generators)
    if rho.lattice.rank > 1:
        ideal = ideal.saturate_variables(rho.ambient)
    return ideal


def _required_field(rho: PartialCharacter, targets: Sequence[Tuple[int, FieldElement]], allow_extension: bool) -> FieldCtx:
    """Field in which every x^d = c has its full number of roots"""
    current = rho.field
    for d, c in targets:
        if d == 1:
            continue
        c_here = embedding(rho.field, current)(c)
        needed = prime_to_p_part(d, current.p)
        if len(nth_roots(c_here, d)) == needed:
            continue
        if not allow_extension:
            raise MissingRoots(f"x^{d} = {c} has fewer than {needed} roots in {current}")
        current, _ = splitting_extension(current, d, c_here)
    if current.k == rho.field.k:
        return rho.field
    return FieldCtx(current.p, current.k)


def extensions(rho: PartialCharacter, sup: Lattice, allow_extension: bool = False) -> List[PartialCharacter]:
    """
    All characters on `sup` restricting to rho.

    Values of the extensions live in the smallest extension of rho's field that
    holds every needed root (only rho's own field unless allow_extension).
    Ordering: roots sorted canonically, then lexicographic product order.
    """
    structure = quotient(rho.lattice, sup)
    if not structure.factors:
        return [rho]
    targets = [(d, rho.evaluate(tuple(d * x for x in w))) for d, w in zip(structure.invariants, structure.basis)]
    field = _required_field(rho, targets, allow_extension)
    if field != rho.field:
        logger.debug(f"extending {rho.field} to {field} for character extensions")
    emb = embedding(rho.field, field)
    choices = [nth_roots(emb(c), d) if d > 1 else [emb(c)] for d, c in targets]
    result = []
    for values in product(*choices):
        result.append(PartialCharacter.from_generators(rho.ambient, list(zip(structure.basis, values)), field))
    return result


class SaturationPair(NamedTuple):
    partial: PartialCharacter
    saturated: PartialCharacter


def saturations(rho: PartialCharacter, allow_extension: bool = False) -> List[SaturationPair]:
    """
    Pairs (rho_l, chi_l): rho_l runs over the extensions of rho to Sat'_p(L) and
    chi_l is the unique extension of rho_l to Sat(L).
    """
    p = rho.field.p
    prime_part = sat_prime_p(rho.lattice, p)
    full = saturate(rho.lattice)
    pairs = []
    for partial in extensions(rho, prime_part, allow_extension):
        unique = extensions(partial, full, allow_extension=False)
        if len(unique) != 1:
            raise InvariantViolation(f"{len(unique)} p-power extensions of {partial}, expected one")
        pairs.append(SaturationPair(partial, unique[0]))
    return pairs
