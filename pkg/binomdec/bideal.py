#!/usr/bin/env python3
"""
Binomial ideal engine for binomdec

Polynomials over GF(p^k) with exponent-tuple keys, Buchberger completion under
degrevlex or block elimination orders, and the ideal operations the
decomposition pipeline needs: monomial quotients and saturations, elimination,
sums, intersections, quasipowers and staircases.

Reduced bases are monic and sorted by leading monomial, so two ideals are equal
exactly when their reduced bases under the same order are equal.
"""

import heapq
import logging
from collections import Counter
from dataclasses import dataclass
from functools import reduce
from itertools import product
from typing import Dict, Iterable, List, Optional, Sequence, Tuple, Union

from sympy.polys.monomials import monomial_deg, monomial_div, monomial_divides, monomial_lcm, monomial_mul
from sympy.polys.orderings import grevlex

from .exceptions import (
    InvariantViolation,
    NonBinomialGenerator,
    NotAFrobeniusPower,
    NotNilpotent,
    RingMismatch,
)
from .field import FieldCtx, FieldElement, embedding

logger = logging.getLogger(__name__)

Monomial = Tuple[int, ...]

# process-wide engine counters, exported by monitoring
ENGINE_STATS: Counter = Counter()


@dataclass(frozen=True)
class TermOrder:
    """degrevlex, or a block order whose first block (the eliminated variables) dominates"""
    kind: str = "degrevlex"
    block: Tuple[int, ...] = ()

    def __post_init__(self):
        if self.kind not in ("degrevlex", "block"):
            raise ValueError(f"unknown term order {self.kind!r}")

    @classmethod
    def elimination(cls, block: Iterable[int]) -> "TermOrder":
        return cls("block", tuple(sorted(set(block))))

    def key(self, monomial: Monomial):
        if self.kind == "degrevlex":
            return grevlex(monomial)
        eliminated = tuple(monomial[i] for i in self.block)
        kept = tuple(x for i, x in enumerate(monomial) if i not in self.block)
        return (grevlex(eliminated), grevlex(kept))

    def __str__(self) -> str:
        return self.kind if self.kind == "degrevlex" else f"block{self.block}"


DEGREVLEX = TermOrder()


@dataclass(frozen=True)
class PolynomialRing:
    field: FieldCtx
    variables: Tuple[str, ...]

    def __post_init__(self):
        if len(set(self.variables)) != len(self.variables):
            raise ValueError(f"duplicate variable names in {self.variables}")

    @property
    def nvars(self) -> int:
        return len(self.variables)

    @property
    def zero(self) -> "Polynomial":
        return Polynomial(self, {})

    @property
    def one(self) -> "Polynomial":
        return self.monomial((0,) * self.nvars)

    def unit_exponent(self, i: int, power: int = 1) -> Monomial:
        return tuple(power if j == i else 0 for j in range(self.nvars))

    def gen(self, i: int) -> "Polynomial":
        return self.monomial(self.unit_exponent(i))

    def monomial(self, exponent: Sequence[int], coeff: Union[int, FieldElement] = 1) -> "Polynomial":
        exponent = tuple(int(e) for e in exponent)
        if len(exponent) != self.nvars or min(exponent, default=0) < 0:
            raise ValueError(f"bad exponent {exponent} for {self.nvars} variables")
        return Polynomial(self, {exponent: self.field.element(coeff)})

    def variables_product(self, indices: Iterable[int]) -> Monomial:
        chosen = set(indices)
        return tuple(int(i in chosen) for i in range(self.nvars))

    def index(self, name: str) -> int:
        return self.variables.index(name)

    def adjoin(self, name: str = "t") -> Tuple["PolynomialRing", str]:
        while name in self.variables:
            name = "_" + name
        return PolynomialRing(self.field, self.variables + (name,)), name

    def with_field(self, field: FieldCtx) -> "PolynomialRing":
        return PolynomialRing(field, self.variables)

    def format_monomial(self, exponent: Monomial) -> str:
        parts = []
        for name, e in zip(self.variables, exponent):
            if e == 1:
                parts.append(name)
            elif e > 1:
                parts.append(f"{name}^{e}")
        return "*".join(parts) if parts else "1"

    def __str__(self) -> str:
        return f"{self.field}[{', '.join(self.variables)}]"


class Polynomial:
    """Immutable polynomial: exponent tuple -> nonzero FieldElement"""

    __slots__ = ("ring", "terms", "_hash")

    def __init__(self, ring: PolynomialRing, terms: Dict[Monomial, FieldElement]):
        self.ring = ring
        self.terms = {m: c for m, c in terms.items() if not c.is_zero}
        self._hash = None

    def _check(self, other: "Polynomial") -> None:
        if other.ring != self.ring:
            raise RingMismatch(f"polynomials over {self.ring} and {other.ring}")

    @property
    def is_zero(self) -> bool:
        return not self.terms

    @property
    def is_monomial(self) -> bool:
        return len(self.terms) == 1

    @property
    def is_constant(self) -> bool:
        return all(not any(m) for m in self.terms)

    def __len__(self) -> int:
        return len(self.terms)

    def __eq__(self, other) -> bool:
        return isinstance(other, Polynomial) and self.ring == other.ring and self.terms == other.terms

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash(frozenset(self.terms.items()))
        return self._hash

    def __add__(self, other: "Polynomial") -> "Polynomial":
        if not isinstance(other, Polynomial):
            return NotImplemented
        self._check(other)
        terms = dict(self.terms)
        for m, c in other.terms.items():
            terms[m] = terms[m] + c if m in terms else c
        return Polynomial(self.ring, terms)

    def __neg__(self) -> "Polynomial":
        return Polynomial(self.ring, {m: -c for m, c in self.terms.items()})

    def __sub__(self, other: "Polynomial") -> "Polynomial":
        if not isinstance(other, Polynomial):
            return NotImplemented
        return self + (-other)

    def __mul__(self, other) -> "Polynomial":
        if isinstance(other, Polynomial):
            self._check(other)
            terms: Dict[Monomial, FieldElement] = {}
            for m1, c1 in self.terms.items():
                for m2, c2 in other.terms.items():
                    m = monomial_mul(m1, m2)
                    terms[m] = terms[m] + c1 * c2 if m in terms else c1 * c2
            return Polynomial(self.ring, terms)
        if isinstance(other, (int, FieldElement)):
            c = self.ring.field.element(other)
            return Polynomial(self.ring, {m: v * c for m, v in self.terms.items()})
        return NotImplemented

    __rmul__ = __mul__

    def mul_term(self, exponent: Monomial, coeff: FieldElement) -> "Polynomial":
        return Polynomial(self.ring, {monomial_mul(m, exponent): c * coeff for m, c in self.terms.items()})

    def leading_monomial(self, order: TermOrder = DEGREVLEX) -> Monomial:
        if not self.terms:
            raise ValueError("the zero polynomial has no leading monomial")
        return max(self.terms, key=order.key)

    def leading_coefficient(self, order: TermOrder = DEGREVLEX) -> FieldElement:
        return self.terms[self.leading_monomial(order)]

    def monic(self, order: TermOrder = DEGREVLEX) -> "Polynomial":
        lc = self.leading_coefficient(order)
        return self if lc.is_one else self * lc.inverse()

    def exact_div_monomial(self, exponent: Monomial) -> "Polynomial":
        terms = {}
        for m, c in self.terms.items():
            q = monomial_div(m, exponent)
            if q is None:
                raise ValueError(f"{self} is not divisible by {self.ring.format_monomial(exponent)}")
            terms[q] = c
        return Polynomial(self.ring, terms)

    def degree_in(self, i: int) -> int:
        return max((m[i] for m in self.terms), default=0)

    def supported_on(self, indices: Iterable[int]) -> bool:
        allowed = set(indices)
        return all(not e or i in allowed for m in self.terms for i, e in enumerate(m))

    def lift(self, ring: PolynomialRing) -> "Polynomial":
        """Same polynomial in a ring with extra trailing variables"""
        pad = (0,) * (ring.nvars - self.ring.nvars)
        return Polynomial(ring, {m + pad: c for m, c in self.terms.items()})

    def restrict(self, ring: PolynomialRing) -> "Polynomial":
        """Drop trailing variables, which must not occur"""
        n = ring.nvars
        if any(any(m[n:]) for m in self.terms):
            raise ValueError(f"{self} involves variables outside {ring}")
        return Polynomial(ring, {m[:n]: c for m, c in self.terms.items()})

    def map_coefficients(self, emb, ring: PolynomialRing) -> "Polynomial":
        return Polynomial(ring, {m: emb(c) for m, c in self.terms.items()})

    def frobenius(self, q: int) -> "Polynomial":
        """Termwise q-th power: c x^u -> c^q x^(q u)"""
        return Polynomial(self.ring, {tuple(q * e for e in m): c ** q for m, c in self.terms.items()})

    def format(self, order: TermOrder = DEGREVLEX) -> str:
        if not self.terms:
            return "0"
        pieces = []
        for m in sorted(self.terms, key=order.key, reverse=True):
            c = self.terms[m]
            coeff = str(c) if c.in_prime_field else f"({c})"
            mono = self.ring.format_monomial(m)
            if mono == "1":
                pieces.append(coeff)
            elif coeff == "1":
                pieces.append(mono)
            elif coeff == "-1":
                pieces.append("-" + mono)
            else:
                pieces.append(f"{coeff}*{mono}")
        out = pieces[0]
        for piece in pieces[1:]:
            out += " - " + piece[1:] if piece.startswith("-") else " + " + piece
        return out

    def __str__(self) -> str:
        return self.format()

    def __repr__(self) -> str:
        return f"Polynomial({self})"


# Buchberger engine

def _normal_form(f: Polynomial, basis: Sequence[Polynomial], leads: Sequence[Monomial], order: TermOrder) -> Polynomial:
    """Full reduction of f by a list of polynomials that are monic under `order`"""
    remaining = dict(f.terms)
    remainder = {}
    key = order.key
    while remaining:
        m = max(remaining, key=key)
        c = remaining[m]
        for g, lead in zip(basis, leads):
            q = monomial_div(m, lead)
            if q is None:
                continue
            for gm, gc in g.terms.items():
                t = monomial_mul(gm, q)
                value = remaining[t] - c * gc if t in remaining else -(c * gc)
                if value.is_zero:
                    remaining.pop(t, None)
                else:
                    remaining[t] = value
            break
        else:
            remainder[m] = c
            del remaining[m]
    return Polynomial(f.ring, remainder)


def _pair(i: int, j: int) -> Tuple[int, int]:
    return (i, j) if i < j else (j, i)


def _reduced_basis(basis: List[Polynomial], leads: List[Monomial], order: TermOrder) -> Tuple[Polynomial, ...]:
    keep = [
        i for i, lead in enumerate(leads)
        if not any(j != i and monomial_divides(leads[j], lead) and (leads[j] != lead or j < i) for j in range(len(leads)))
    ]
    kept = [basis[i] for i in keep]
    kept_leads = [leads[i] for i in keep]
    result = []
    for idx, g in enumerate(kept):
        lead = kept_leads[idx]
        tail = Polynomial(g.ring, {m: c for m, c in g.terms.items() if m != lead})
        others = kept[:idx] + kept[idx + 1:]
        other_leads = kept_leads[:idx] + kept_leads[idx + 1:]
        reduced_tail = _normal_form(tail, others, other_leads, order)
        terms = {lead: g.ring.field.one}
        terms.update(reduced_tail.terms)
        result.append(Polynomial(g.ring, terms))
    result.sort(key=lambda g: order.key(g.leading_monomial(order)), reverse=True)
    return tuple(result)


def buchberger(generators: Iterable[Polynomial], order: TermOrder = DEGREVLEX) -> Tuple[Polynomial, ...]:
    """
    Reduced Groebner basis.

    Normal selection strategy (smallest lcm degree, then the order, then pair
    indices) with the coprime and chain criteria.
    """
    ENGINE_STATS["groebner_bases"] += 1
    basis: List[Polynomial] = []
    leads: List[Monomial] = []
    heap: list = []
    pending = set()

    def add(h: Polynomial) -> None:
        h = h.monic(order)
        lead = h.leading_monomial(order)
        new = len(basis)
        for i, other in enumerate(leads):
            lcm = monomial_lcm(other, lead)
            heapq.heappush(heap, (monomial_deg(lcm), order.key(lcm), i, new))
            pending.add((i, new))
        basis.append(h)
        leads.append(lead)

    for f in generators:
        h = _normal_form(f, basis, leads, order)
        if not h.is_zero:
            add(h)

    while heap:
        _, _, i, j = heapq.heappop(heap)
        pending.discard((i, j))
        lcm = monomial_lcm(leads[i], leads[j])
        if monomial_mul(leads[i], leads[j]) == lcm:
            continue
        if any(
            k != i and k != j and monomial_divides(leads[k], lcm)
            and _pair(i, k) not in pending and _pair(j, k) not in pending
            for k in range(len(basis))
        ):
            continue
        s = basis[i].mul_term(monomial_div(lcm, leads[i]), basis[i].ring.field.one) - \
            basis[j].mul_term(monomial_div(lcm, leads[j]), basis[j].ring.field.one)
        ENGINE_STATS["spairs_reduced"] += 1
        h = _normal_form(s, basis, leads, order)
        if not h.is_zero:
            add(h)

    reduced = _reduced_basis(basis, leads, order)
    logger.debug(f"reduced basis of size {len(reduced)} under {order} from {len(basis)} elements")
    return reduced


class Ideal:
    """
    Ideal of a PolynomialRing given by generators.

    Reduced bases are cached per term order; every operation returns a new ideal.
    """

    def __init__(self, ring: PolynomialRing, generators: Iterable[Polynomial] = ()):
        gens = []
        seen = set()
        for g in generators:
            if g.ring != ring:
                raise RingMismatch(f"generator over {g.ring} for an ideal of {ring}")
            if g.is_zero or g in seen:
                continue
            seen.add(g)
            gens.append(g)
        self.ring = ring
        self.generators: Tuple[Polynomial, ...] = tuple(gens)
        self._groebner: Dict[TermOrder, Tuple[Tuple[Polynomial, ...], Tuple[Monomial, ...]]] = {}
        self._memo: dict = {}

    @classmethod
    def unit(cls, ring: PolynomialRing) -> "Ideal":
        return cls(ring, [ring.one])

    def _derive(self, generators: Iterable[Polynomial]) -> "Ideal":
        return type(self)(self.ring, generators)

    def _check_ring(self, other: "Ideal") -> None:
        if other.ring != self.ring:
            raise RingMismatch(f"ideals of {self.ring} and {other.ring}")

    def _as_monomial(self, m: Union[Monomial, Polynomial]) -> Monomial:
        if isinstance(m, Polynomial):
            self._check_ring(m)
            if not m.is_monomial:
                raise ValueError(f"{m} is not a monomial")
            return next(iter(m.terms))
        m = tuple(int(e) for e in m)
        if len(m) != self.ring.nvars:
            raise ValueError(f"exponent {m} does not fit {self.ring}")
        return m

    def _compute_groebner(self, order: TermOrder) -> Tuple[Polynomial, ...]:
        return buchberger(self.generators, order)

    def _basis_and_leads(self, order: TermOrder):
        cached = self._groebner.get(order)
        if cached is None:
            basis = self._compute_groebner(order)
            cached = self._groebner.setdefault(order, (basis, tuple(g.leading_monomial(order) for g in basis)))
        return cached

    def groebner(self, order: TermOrder = DEGREVLEX) -> Tuple[Polynomial, ...]:
        return self._basis_and_leads(order)[0]

    def normal_form(self, f: Polynomial, order: TermOrder = DEGREVLEX) -> Polynomial:
        if f.ring != self.ring:
            raise RingMismatch(f"polynomial over {f.ring} reduced modulo an ideal of {self.ring}")
        basis, leads = self._basis_and_leads(order)
        return _normal_form(f, basis, leads, order)

    def member(self, f: Polynomial) -> bool:
        return self.normal_form(f).is_zero

    def is_zero(self) -> bool:
        return not self.generators

    def is_unit(self) -> bool:
        basis = self.groebner()
        return len(basis) == 1 and basis[0].is_constant

    def contains(self, other: "Ideal") -> bool:
        self._check_ring(other)
        return all(self.member(g) for g in other.generators)

    def equals(self, other: "Ideal") -> bool:
        self._check_ring(other)
        return self.groebner() == other.groebner()

    def key(self) -> tuple:
        """Hashable canonical form"""
        return tuple(tuple(sorted((m, c.coeffs) for m, c in g.terms.items())) for g in self.groebner())

    def __add__(self, other: "Ideal") -> "Ideal":
        self._check_ring(other)
        cls = BinomialIdeal if isinstance(self, BinomialIdeal) and isinstance(other, BinomialIdeal) else Ideal
        return cls(self.ring, self.generators + other.generators)

    def sum(self, other: "Ideal") -> "Ideal":
        return self + other

    def quotient_monomial(self, m: Union[Monomial, Polynomial]) -> "Ideal":
        """(I : m), computed as (I cap <m>) / m with the t-trick"""
        m = self._as_monomial(m)
        if not any(m) or self.is_zero():
            return self
        memo_key = ("quotient", m)
        if memo_key in self._memo:
            return self._memo[memo_key]
        n = self.ring.nvars
        big, _ = self.ring.adjoin("t")
        t = big.gen(n)
        mono = big.monomial(m + (0,))
        gens = [t * g.lift(big) for g in self.generators] + [mono - t * mono]
        basis = type(self)(big, gens).groebner(TermOrder.elimination((n,)))
        result = self._derive(
            g.restrict(self.ring).exact_div_monomial(m) for g in basis if g.degree_in(n) == 0
        )
        return self._memo.setdefault(memo_key, result)

    def saturate_monomial(self, m: Union[Monomial, Polynomial]) -> "Ideal":
        """(I : m^inf) by iterating quotients until the chain stabilizes"""
        m = self._as_monomial(m)
        if not any(m):
            return self
        memo_key = ("saturate", m)
        if memo_key in self._memo:
            return self._memo[memo_key]
        current = self
        while True:
            following = current.quotient_monomial(m)
            if current.contains(following):
                break
            current = following
        return self._memo.setdefault(memo_key, current)

    def saturate_variables(self, indices: Iterable[int]) -> "Ideal":
        return self.saturate_monomial(self.ring.variables_product(indices))

    def eliminate(self, keep: Iterable[int]) -> "Ideal":
        """I cap k[x_i : i in keep]; generators stay in this ring but only involve `keep`"""
        keep = tuple(sorted(set(keep)))
        drop = tuple(i for i in range(self.ring.nvars) if i not in keep)
        if not drop:
            return self
        memo_key = ("eliminate", keep)
        if memo_key in self._memo:
            return self._memo[memo_key]
        basis = self.groebner(TermOrder.elimination(drop))
        result = self._derive(g for g in basis if g.supported_on(keep))
        return self._memo.setdefault(memo_key, result)

    def intersect(self, other: "Ideal") -> "Ideal":
        """I cap J by eliminating t from t*I + (1 - t)*J; the result need not be binomial"""
        self._check_ring(other)
        if self.is_unit():
            return other
        if other.is_unit():
            return self
        if self.is_zero() or other.is_zero():
            return Ideal(self.ring)
        n = self.ring.nvars
        big, _ = self.ring.adjoin("t")
        t = big.gen(n)
        gens = [t * f.lift(big) for f in self.generators]
        gens += [(big.one - t) * g.lift(big) for g in other.generators]
        basis = Ideal(big, gens).groebner(TermOrder.elimination((n,)))
        return Ideal(self.ring, [g.restrict(self.ring) for g in basis if g.degree_in(n) == 0])

    def quasipower(self, q: int) -> "Ideal":
        """Ideal of b^[q] over the reduced basis; q must be a power of the characteristic"""
        p = self.ring.field.p
        rest = q
        while rest > 1 and rest % p == 0:
            rest //= p
        if q < 1 or rest != 1:
            raise NotAFrobeniusPower(f"{q} is not a power of the characteristic {p}")
        if q == 1:
            return self
        return self._derive(g.frobenius(q) for g in self.groebner())

    def nilpotency_exponent(self, i: int) -> Optional[int]:
        """Least e with x_i^e in I, or None when x_i is not nilpotent"""
        memo_key = ("nilpotent", i)
        if memo_key in self._memo:
            return self._memo[memo_key]
        exponent = None
        if self.saturate_monomial(self.ring.unit_exponent(i)).is_unit():
            def inside(e):
                return self.member(self.ring.monomial(self.ring.unit_exponent(i, e)))
            high = 1
            while not inside(high):
                high *= 2
            low = high // 2
            while high - low > 1:
                mid = (low + high) // 2
                if inside(mid):
                    high = mid
                else:
                    low = mid
            exponent = high
        return self._memo.setdefault(memo_key, exponent)

    def monomials_outside(self, indices: Iterable[int]) -> List[Monomial]:
        """Staircase: monomials in the given variables that are not in I"""
        indices = sorted(set(indices))
        bounds = []
        for i in indices:
            e = self.nilpotency_exponent(i)
            if e is None:
                raise NotNilpotent(f"{self.ring.variables[i]} is not nilpotent modulo {self}")
            bounds.append(e)
        staircase = []
        for exps in product(*(range(b) for b in bounds)):
            m = [0] * self.ring.nvars
            for i, e in zip(indices, exps):
                m[i] = e
            m = tuple(m)
            if not self.member(self.ring.monomial(m)):
                staircase.append(m)
        staircase.sort(key=DEGREVLEX.key)
        return staircase

    def extend_field(self, target: FieldCtx, over: Optional[FieldCtx] = None) -> "Ideal":
        if target == self.ring.field:
            return self
        emb = embedding(self.ring.field, target, over)
        ring = self.ring.with_field(target)
        return type(self)(ring, [g.map_coefficients(emb, ring) for g in self.generators])

    def generator_strings(self) -> List[str]:
        return [str(g) for g in self.groebner()]

    def __str__(self) -> str:
        return "<" + ", ".join(str(g) for g in self.generators) + ">"

    def __repr__(self) -> str:
        return f"{type(self).__name__}({self.ring}, {self})"


class BinomialIdeal(Ideal):
    """Ideal generated by binomials and monomials; its reduced bases stay binomial"""

    def __init__(self, ring: PolynomialRing, generators: Iterable[Polynomial] = ()):
        super().__init__(ring, generators)
        for g in self.generators:
            if len(g) > 2:
                raise NonBinomialGenerator(f"{g} has {len(g)} terms", str(g))

    @classmethod
    def from_monomials(cls, ring: PolynomialRing, monomials: Iterable[Monomial]) -> "BinomialIdeal":
        return cls(ring, [ring.monomial(m) for m in monomials])

    def _compute_groebner(self, order: TermOrder) -> Tuple[Polynomial, ...]:
        basis = super()._compute_groebner(order)
        for g in basis:
            if len(g) > 2:
                raise InvariantViolation(f"reduced basis element {g} of a binomial ideal has {len(g)} terms")
        return basis


def intersect_all(ideals: Sequence[Ideal]) -> Ideal:
    if not ideals:
        raise ValueError("intersection of no ideals")
    return reduce(lambda a, b: a.intersect(b), ideals)


def minimal_monomials(monomials: Iterable[Monomial]) -> List[Monomial]:
    """Minimal elements under divisibility, sorted by degrevlex"""
    unique = sorted(set(monomials), key=DEGREVLEX.key)
    minimal = []
    for m in unique:
        if not any(monomial_divides(n, m) for n in minimal):
            minimal.append(m)
    return minimal


def prune_redundant(ideals: Sequence[Ideal]) -> List[int]:
    """
    Indices of the ideals kept after dropping every ideal that contains the
    intersection of the remaining ones. Later entries are dropped first.
    """
    kept = list(range(len(ideals)))
    for idx in reversed(range(len(ideals))):
        others = [ideals[j] for j in kept if j != idx]
        if not others:
            continue
        candidate = ideals[idx]
        if any(candidate.contains(other) for other in others) or candidate.contains(intersect_all(others)):
            kept.remove(idx)
    return kept
