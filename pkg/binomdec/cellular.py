#!/usr/bin/env python3
"""
Cellularity testing and cellular decomposition for binomdec
"""

import logging
from dataclasses import dataclass
from typing import Dict, List, Optional, Sequence, Tuple, Union

from .bideal import BinomialIdeal, Ideal, intersect_all, prune_redundant
from .exceptions import InvariantViolation, UnitIdeal

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class CellularCertificate:
    """Cellular variables (delta) and the nilpotency exponent of every other variable"""
    delta: Tuple[int, ...]
    exponents: Tuple[Tuple[int, int], ...]

    def __post_init__(self):
        covered = set(self.delta) | {i for i, _ in self.exponents}
        if len(covered) != len(self.delta) + len(self.exponents):
            raise ValueError("a variable cannot be both cellular and nilpotent")
        if any(e < 1 for _, e in self.exponents):
            raise ValueError("nilpotency exponents start at 1")

    @property
    def nilpotent(self) -> Tuple[int, ...]:
        return tuple(i for i, _ in self.exponents)

    @property
    def exponent_map(self) -> Dict[int, int]:
        return dict(self.exponents)


def _is_nonzerodivisor(ideal: Ideal, i: int) -> bool:
    # I is always contained in (I : x_i)
    return ideal.contains(ideal.quotient_monomial(ideal.ring.unit_exponent(i)))


def is_cellular(ideal: BinomialIdeal) -> Optional[CellularCertificate]:
    """
    Certificate when every variable is a nonzerodivisor or nilpotent modulo I.

    Returns:
        CellularCertificate, or None when some variable is neither
    """
    if ideal.is_unit():
        raise UnitIdeal("the unit ideal is not cellular")
    delta = []
    exponents = []
    for i in range(ideal.ring.nvars):
        if _is_nonzerodivisor(ideal, i):
            delta.append(i)
            continue
        e = ideal.nilpotency_exponent(i)
        if e is None:
            return None
        exponents.append((i, e))
    return CellularCertificate(tuple(delta), tuple(exponents))


def _offending_variable(ideal: BinomialIdeal) -> Optional[int]:
    for i in range(ideal.ring.nvars):
        if _is_nonzerodivisor(ideal, i) or ideal.nilpotency_exponent(i) is not None:
            continue
        return i
    return None


def stabilization_exponent(ideal: Ideal, i: int) -> int:
    """Least e with (I : x_i^e) = (I : x_i^(e+1))"""
    ring = ideal.ring

    def stable(e: int) -> bool:
        lower = ideal.quotient_monomial(ring.unit_exponent(i, e))
        upper = ideal.quotient_monomial(ring.unit_exponent(i, e + 1))
        return lower.contains(upper)

    if stable(0):
        return 0
    high = 1
    while not stable(high):
        high *= 2
    low = high // 2
    while high - low > 1:
        mid = (low + high) // 2
        if stable(mid):
            high = mid
        else:
            low = mid
    return high


def _split(ideal: BinomialIdeal, i: int, check: bool) -> Tuple[BinomialIdeal, BinomialIdeal]:
    ring = ideal.ring
    e = stabilization_exponent(ideal, i)
    left = ideal.quotient_monomial(ring.unit_exponent(i, e))
    right = ideal + BinomialIdeal.from_monomials(ring, [ring.unit_exponent(i, e)])
    logger.debug(f"splitting at {ring.variables[i]}^{e}: {ideal}")
    if check and not left.intersect(right).equals(ideal):
        raise InvariantViolation(f"splitting {ideal} at {ring.variables[i]}^{e} changed the ideal")
    return left, right


def cellular_decomposition(
    ideal: BinomialIdeal, prune: bool = True, check: bool = False
) -> List[Tuple[BinomialIdeal, CellularCertificate]]:
    """
    Cellular binomial ideals intersecting to I.

    The lowest-index offending variable x_i is split off as
    (I : x_i^inf) and I + <x_i^e>, e being the stabilization exponent.
    """
    if ideal.is_unit():
        raise UnitIdeal("the unit ideal has no cellular decomposition")
    cells: Dict[tuple, Tuple[BinomialIdeal, CellularCertificate]] = {}
    stack = [ideal]
    while stack:
        current = stack.pop()
        if current.is_unit():
            continue
        i = _offending_variable(current)
        if i is None:
            cells.setdefault(current.key(), (current, is_cellular(current)))
            continue
        left, right = _split(current, i, check)
        stack.extend([right, left])

    result = sorted(cells.values(), key=lambda cell: (cell[1].delta, cell[0].generator_strings()))
    if prune and len(result) > 1:
        kept = prune_redundant([cell for cell, _ in result])
        if len(kept) < len(result):
            logger.debug(f"pruned {len(result) - len(kept)} redundant cellular components")
        result = [result[i] for i in kept]
    logger.info(f"cellular decomposition with {len(result)} components")
    return result


def verify_cellular_decomposition(
    ideal: BinomialIdeal, components: Sequence[Union[BinomialIdeal, Tuple[BinomialIdeal, CellularCertificate]]]
) -> bool:
    ideals = [c[0] if isinstance(c, tuple) else c for c in components]
    if not ideals:
        return False
    for component in ideals:
        try:
            if is_cellular(component) is None:
                return False
        except UnitIdeal:
            return False
    return intersect_all(ideals).equals(ideal)
