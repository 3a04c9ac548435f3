#!/usr/bin/env python3
"""
Primary decomposition of cellular binomial ideals

Memb(I), the hull, unmixed decompositions (direct, one induction step, and
the recursive closure of that step), minimal primary components through
character saturation, associated primes, primality, and the quasipower
variant of the decomposition.
"""

import logging
from dataclasses import dataclass, replace
from typing import Iterable, List, Optional, Sequence, Tuple

from .bideal import BinomialIdeal, Ideal, Monomial, intersect_all, minimal_monomials, prune_redundant
from .cellular import CellularCertificate, cellular_decomposition, is_cellular
from .character import PartialCharacter, lattice_ideal, saturations
from .exceptions import InvariantViolation, NotAFrobeniusPower, NotCellular, UnitIdeal
from .field import FieldCtx, compositum
from .lattice import quotient, sat_prime_p
from .models import ComponentKind

logger = logging.getLogger(__name__)

VARIANTS = ("v1", "v2")
MAX_RECURSION_STEPS = 1000


@dataclass(frozen=True)
class WitnessRecord:
    monomial: Monomial
    character: PartialCharacter
    embedded: bool


@dataclass(frozen=True)
class Provenance:
    kind: ComponentKind
    witness: Optional[Monomial] = None
    character_index: Optional[int] = None
    cell: Optional[int] = None


@dataclass(frozen=True)
class Component:
    ideal: BinomialIdeal
    provenance: Provenance
    associated_prime: Optional[BinomialIdeal] = None
    delta: Tuple[int, ...] = ()

    @property
    def field(self) -> FieldCtx:
        return self.ideal.ring.field

    def extend_field(self, target: FieldCtx, over: Optional[FieldCtx] = None) -> "Component":
        prime = self.associated_prime.extend_field(target, over) if self.associated_prime is not None else None
        return replace(self, ideal=self.ideal.extend_field(target, over), associated_prime=prime)


def _certificate(ideal: BinomialIdeal, delta: Optional[Iterable[int]]) -> CellularCertificate:
    cert = is_cellular(ideal)
    if cert is None:
        raise NotCellular(f"{ideal} is not cellular")
    if delta is not None and tuple(sorted(set(delta))) != cert.delta:
        names = [ideal.ring.variables[i] for i in cert.delta]
        raise NotCellular(f"{ideal} is cellular with respect to {names}, not the given variables")
    return cert


def _nilpotent_prime_part(ideal: Ideal, cert: CellularCertificate) -> BinomialIdeal:
    ring = ideal.ring
    return BinomialIdeal.from_monomials(ring, [ring.unit_exponent(i) for i in cert.nilpotent])


def cellular_character(ideal: BinomialIdeal, delta: Iterable[int]) -> PartialCharacter:
    """The character rho with I cap k[x_delta] = I(rho)"""
    delta = tuple(sorted(set(delta)))
    pairs = []
    for g in ideal.eliminate(delta).generators:
        if len(g) != 2:
            raise NotCellular(f"{g} lies in the ideal but is not a binomial in the cellular variables")
        (u, a), (v, b) = sorted(g.terms.items())
        vector = tuple(u[i] - v[i] for i in delta)
        pairs.append((vector, -b / a))
    return PartialCharacter.from_generators(delta, pairs, ideal.ring.field)


def witnesses(ideal: BinomialIdeal, delta: Optional[Iterable[int]] = None) -> List[WitnessRecord]:
    """One record per staircase monomial m, with the character of (I : m) cap k[x_delta]"""
    cert = _certificate(ideal, delta)
    rho = cellular_character(ideal, cert.delta)
    records = []
    for m in ideal.monomials_outside(cert.nilpotent):
        tau = rho if not any(m) else cellular_character(ideal.quotient_monomial(m), cert.delta)
        records.append(WitnessRecord(m, tau, tau.lattice.rank > rho.lattice.rank))
    logger.debug(f"{len(records)} staircase monomials, {sum(r.embedded for r in records)} embedded")
    return records


def memb(ideal: BinomialIdeal, delta: Optional[Iterable[int]] = None) -> BinomialIdeal:
    """Monomial ideal of the embedded witnesses; zero exactly when I is unmixed"""
    embedded = [r.monomial for r in witnesses(ideal, delta) if r.embedded]
    return BinomialIdeal.from_monomials(ideal.ring, minimal_monomials(embedded))


def hull(ideal: BinomialIdeal, delta: Optional[Iterable[int]] = None, check: bool = False) -> BinomialIdeal:
    cert = _certificate(ideal, delta)
    result = ideal + memb(ideal, cert.delta)
    if check:
        if _certificate(result, None).delta != cert.delta:
            raise InvariantViolation(f"hull of {ideal} changed the cellular variables")
        if not memb(result, cert.delta).is_zero():
            raise InvariantViolation(f"hull of {ideal} is not unmixed")
        if not result.eliminate(cert.delta).equals(ideal.eliminate(cert.delta)):
            raise InvariantViolation(f"hull of {ideal} changed the lattice ideal")
    return result


def _saturated_sum(ideal: BinomialIdeal, rho: PartialCharacter, delta: Tuple[int, ...]) -> BinomialIdeal:
    return (ideal + lattice_ideal(rho, ideal.ring)).saturate_variables(delta)


def _check_intersection(ideal: Ideal, components: Sequence[Component], what: str) -> None:
    ideals = [c.ideal for c in components]
    if not ideals or not intersect_all(ideals).equals(ideal):
        raise InvariantViolation(f"{what} of {ideal} does not intersect back to it")


def unmixed_decomposition(
    ideal: BinomialIdeal, delta: Optional[Iterable[int]] = None, check: bool = False
) -> List[Component]:
    """
    Unmixed decomposition of a cellular binomial ideal

    Args:
        ideal: a cellular binomial ideal
        delta: its cellular variables; derived when omitted
        check: assert that the components intersect to the ideal

    Returns:
        One component per distinct lattice ideal among m = 1 and the
        staircase monomials in Memb(I), in staircase order
    """
    cert = _certificate(ideal, delta)
    records = witnesses(ideal, cert.delta)
    memb_ideal = BinomialIdeal.from_monomials(
        ideal.ring, minimal_monomials(r.monomial for r in records if r.embedded)
    )
    ring = ideal.ring
    seen = set()
    components = []
    for record in records:
        if any(record.monomial) and not memb_ideal.member(ring.monomial(record.monomial)):
            continue
        key = record.character.key()
        if key in seen:
            continue
        seen.add(key)
        saturated = _saturated_sum(ideal, record.character, cert.delta)
        component = saturated + memb(saturated, cert.delta)
        components.append(Component(component, Provenance(ComponentKind.UNMIXED, record.monomial), None, cert.delta))
    logger.info(f"unmixed decomposition with {len(components)} components")
    if check:
        _check_intersection(ideal, components, "unmixed decomposition")
    return components


def _minimal_primary(
    ideal: BinomialIdeal, cert: CellularCertificate, allow_extension: bool, variant: str
) -> List[Component]:
    rho = cellular_character(ideal, cert.delta)
    memb_ideal = memb(ideal, cert.delta) if variant == "v2" else None
    components = []
    for index, (partial, chi) in enumerate(saturations(rho, allow_extension)):
        base = ideal.extend_field(partial.field)
        saturated = _saturated_sum(base, partial, cert.delta)
        if variant == "v2":
            extra = memb_ideal.extend_field(partial.field)
        else:
            extra = memb(saturated, cert.delta)
        prime = lattice_ideal(chi, base.ring) + _nilpotent_prime_part(base, cert)
        components.append(Component(
            saturated + extra, Provenance(ComponentKind.PRIMARY, character_index=index), prime, cert.delta
        ))
    return components


def minimal_primary_components(
    ideal: BinomialIdeal,
    delta: Optional[Iterable[int]] = None,
    allow_extension: bool = False,
    variant: str = "v2",
    cross_check: bool = False,
    check: bool = False,
) -> List[Component]:
    """
    Minimal primary components of a cellular binomial ideal; they intersect to its hull.

    variant "v2" adds Memb(I) to each saturated sum, "v1" adds Memb of the
    saturated sum itself. With cross_check both are computed and must agree.
    """
    if variant not in VARIANTS:
        raise ValueError(f"unknown variant {variant!r}, expected one of {VARIANTS}")
    cert = _certificate(ideal, delta)
    components = _minimal_primary(ideal, cert, allow_extension, variant)
    if cross_check:
        other = "v1" if variant == "v2" else "v2"
        alternative = _minimal_primary(ideal, cert, allow_extension, other)
        if len(alternative) != len(components) or not all(
            a.ideal.equals(b.ideal) for a, b in zip(components, alternative)
        ):
            raise InvariantViolation(f"v1 and v2 primary components of {ideal} differ")
    if check and components:
        target = components[0].field
        _check_intersection(hull(ideal, cert.delta).extend_field(target), components, "minimal primary decomposition")
    return components


def verify_decomposition(ideal: Ideal, ideals: Sequence[Ideal]) -> bool:
    """Whether the ideals, lifted to a common field, intersect to `ideal`"""
    if not ideals:
        return ideal.is_unit()
    base = ideal.ring.field
    target = compositum(base, *(i.ring.field for i in ideals))
    lifted = [i.extend_field(target, over=base) for i in ideals]
    return intersect_all(lifted).equals(ideal.extend_field(target))


def _unify_fields(base: FieldCtx, components: List[Component]) -> Tuple[FieldCtx, List[Component]]:
    target = compositum(base, *(c.field for c in components))
    if target != base:
        logger.info(f"components live over {target}")
    return target, [c.extend_field(target, over=base) for c in components]


def _finish(ideal: BinomialIdeal, components: List[Component], prune: bool, check: bool, what: str) -> List[Component]:
    target, components = _unify_fields(ideal.ring.field, components)
    if prune and len(components) > 1:
        kept = prune_redundant([c.ideal for c in components])
        if len(kept) < len(components):
            logger.info(f"pruned {len(components) - len(kept)} redundant components")
        components = [components[i] for i in kept]
    if check:
        _check_intersection(ideal.extend_field(target), components, what)
    return components


def primary_decomposition_cellular(
    ideal: BinomialIdeal,
    delta: Optional[Iterable[int]] = None,
    allow_extension: bool = False,
    prune: bool = True,
    variant: str = "v2",
    cross_check: bool = False,
    check: bool = False,
) -> List[Component]:
    """Minimal primary components of every unmixed component, concatenated"""
    cert = _certificate(ideal, delta)
    components = []
    for unmixed in unmixed_decomposition(ideal, cert.delta, check=check):
        for component in minimal_primary_components(
            unmixed.ideal, cert.delta, allow_extension, variant, cross_check
        ):
            provenance = replace(component.provenance, witness=unmixed.provenance.witness)
            components.append(replace(component, provenance=provenance))
    return _finish(ideal, components, prune, check, "primary decomposition")


def primary_decomposition(
    ideal: BinomialIdeal,
    allow_extension: bool = False,
    prune: bool = True,
    variant: str = "v2",
    cross_check: bool = False,
    check: bool = False,
) -> List[Component]:
    """Cellular decomposition, then the cellular primary decomposition of every cell"""
    if ideal.is_unit():
        raise UnitIdeal("the unit ideal has no primary decomposition")
    components = []
    for index, (cell, cert) in enumerate(cellular_decomposition(ideal, prune=prune, check=check)):
        for component in primary_decomposition_cellular(
            cell, cert.delta, allow_extension, prune=False, variant=variant, cross_check=cross_check
        ):
            components.append(replace(component, provenance=replace(component.provenance, cell=index)))
    components = _finish(ideal, components, prune, check, "primary decomposition")
    logger.info(f"primary decomposition with {len(components)} components")
    return components


def associated_primes(
    ideal: BinomialIdeal, delta: Optional[Iterable[int]] = None, allow_extension: bool = False
) -> List[BinomialIdeal]:
    """Primes of the saturated characters of every witness, plus the nilpotent variables"""
    cert = _certificate(ideal, delta)
    primes = []
    for record in witnesses(ideal, cert.delta):
        for pair in saturations(record.character, allow_extension):
            ring = ideal.ring.with_field(pair.saturated.field)
            primes.append(lattice_ideal(pair.saturated, ring) + _nilpotent_prime_part(ideal, cert).extend_field(ring.field))
    target = compositum(ideal.ring.field, *(p.ring.field for p in primes))
    result = []
    seen = set()
    for prime in primes:
        prime = prime.extend_field(target, over=ideal.ring.field)
        if prime.key() not in seen:
            seen.add(prime.key())
            result.append(prime)
    return result


def is_primary(ideal: BinomialIdeal) -> bool:
    """Primary over the algebraic closure of the field"""
    if ideal.is_unit():
        raise UnitIdeal("the unit ideal is not primary")
    cert = is_cellular(ideal)
    if cert is None:
        return False
    if not memb(ideal, cert.delta).is_zero():
        return False
    lattice = cellular_character(ideal, cert.delta).lattice
    return quotient(lattice, sat_prime_p(lattice, ideal.ring.field.p)).order == 1


def _extends(wide: PartialCharacter, narrow: PartialCharacter) -> bool:
    if not wide.lattice.contains(narrow.lattice):
        return False
    return all(wide.evaluate(b) == value for b, value in zip(narrow.lattice.basis, narrow.values))


def unmixed_decomposition_stepwise(
    ideal: BinomialIdeal, delta: Optional[Iterable[int]] = None
) -> List[Component]:
    """
    One induction step: I + Memb(I) and, for each inclusion-minimal embedded
    lattice ideal I(tau), the saturation (I + I(tau)) : (prod x_delta)^inf.
    """
    cert = _certificate(ideal, delta)
    records = witnesses(ideal, cert.delta)
    embedded = [r for r in records if r.embedded]
    memb_ideal = BinomialIdeal.from_monomials(ideal.ring, minimal_monomials(r.monomial for r in embedded))
    if memb_ideal.is_zero():
        return [Component(ideal, Provenance(ComponentKind.UNMIXED), None, cert.delta)]

    distinct = []
    seen = set()
    for record in embedded:
        if record.character.key() not in seen:
            seen.add(record.character.key())
            distinct.append(record)
    minimal = [
        r for r in distinct
        if not any(other is not r and _extends(r.character, other.character) for other in distinct)
    ]
    pieces = [Component(ideal + memb_ideal, Provenance(ComponentKind.HULL), None, cert.delta)]
    for record in minimal:
        pieces.append(Component(
            _saturated_sum(ideal, record.character, cert.delta),
            Provenance(ComponentKind.CELLULAR, record.monomial),
            None,
            cert.delta,
        ))
    return pieces


def unmixed_decomposition_recursive(
    ideal: BinomialIdeal, delta: Optional[Iterable[int]] = None, check: bool = False
) -> List[Component]:
    """Apply the induction step until every piece is unmixed; duplicates are dropped"""
    cert = _certificate(ideal, delta)
    worklist = [Component(ideal, Provenance(ComponentKind.CELLULAR), None, cert.delta)]
    leaves: List[Component] = []
    seen = set()
    steps = 0
    while worklist:
        steps += 1
        if steps > MAX_RECURSION_STEPS:
            raise InvariantViolation(f"stepwise unmixed decomposition of {ideal} did not terminate")
        piece = worklist.pop(0)
        if memb(piece.ideal, cert.delta).is_zero():
            if piece.ideal.key() not in seen:
                seen.add(piece.ideal.key())
                leaves.append(replace(piece, provenance=replace(piece.provenance, kind=ComponentKind.UNMIXED)))
            continue
        worklist.extend(unmixed_decomposition_stepwise(piece.ideal, cert.delta))
    if check:
        _check_intersection(ideal, leaves, "recursive unmixed decomposition")
    return leaves


def _frobenius_powers(p: int, q: Optional[int], max_exponent: int) -> List[int]:
    if q is not None:
        rest = q
        while rest > 1 and rest % p == 0:
            rest //= p
        if q < p or rest != 1:
            raise NotAFrobeniusPower(f"{q} is not a positive power of the characteristic {p}")
        return [q]
    if max_exponent < 1:
        raise ValueError(f"max_exponent must be positive, got {max_exponent}")
    return [p ** e for e in range(1, max_exponent + 1)]


def quasipower_decomposition(
    ideal: BinomialIdeal,
    q: Optional[int] = None,
    allow_extension: bool = False,
    prune: bool = True,
    max_exponent: int = 4,
    check: bool = False,
) -> List[Component]:
    """
    Components (I + P^[q]) : (prod x_delta(P))^inf plus their Memb, one per
    candidate associated prime P.

    With q omitted, q = p, p^2, ... is tried up to p^max_exponent until the
    components intersect to I.
    """
    if ideal.is_unit():
        raise UnitIdeal("the unit ideal has no primary decomposition")
    base_field = ideal.ring.field
    candidates = []
    for index, (cell, cert) in enumerate(cellular_decomposition(ideal, prune=prune)):
        for prime in associated_primes(cell, cert.delta, allow_extension):
            candidates.append((prime, cert.delta, index))
    target = compositum(base_field, *(prime.ring.field for prime, _, _ in candidates))
    base = ideal.extend_field(target)
    fixed = q is not None

    for power in _frobenius_powers(base_field.p, q, max_exponent):
        components = []
        try:
            for prime, delta, index in candidates:
                prime = prime.extend_field(target, over=base_field)
                saturated = (base + prime.quasipower(power)).saturate_variables(delta)
                cert = is_cellular(saturated)
                if cert is None or cert.delta != delta:
                    raise NotCellular(f"q = {power} is too small: {saturated} is not cellular in the expected variables")
                components.append(Component(
                    saturated + memb(saturated, delta), Provenance(ComponentKind.QUASIPOWER, cell=index), prime, delta
                ))
        except NotCellular:
            if fixed:
                raise
            logger.debug(f"quasipower exponent {power} too small")
            continue
        if fixed or intersect_all([c.ideal for c in components]).equals(base):
            logger.info(f"quasipower decomposition with q = {power}")
            return _finish(ideal, components, prune, check, "quasipower decomposition")
        logger.debug(f"quasipower exponent {power} does not recover the ideal")
    raise InvariantViolation(f"no quasipower up to {base_field.p}^{max_exponent} decomposes {ideal}")
