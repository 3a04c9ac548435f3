#!/usr/bin/env python3
"""
Finite field arithmetic for binomdec

Elements of GF(p) and GF(p^k) = GF(p)[z]/(modulus). Polynomial arithmetic over
GF(p) is delegated to sympy's galoistools; coefficient vectors are stored
low-to-high, galoistools lists are high-to-low.
"""

import logging
import re
from dataclasses import dataclass
from functools import lru_cache
from itertools import count
from math import gcd, isqrt
from typing import Iterator, List, Optional, Sequence, Tuple, Union

from sympy import factorint, isprime, primitive_root
from sympy.ntheory import nthroot_mod
from sympy.polys.domains import ZZ
from sympy.polys.galoistools import gf_gcdex, gf_irreducible_p, gf_mul, gf_pow_mod, gf_rem, gf_strip

from .exceptions import DivisionByZero, FieldMismatch, InvalidField, InvalidPrime, ZeroArgument

logger = logging.getLogger(__name__)

# p^k must stay below this
MAX_FIELD_SIZE = 2 ** 31
# root extraction and subfield search enumerate the whole field up to this size
EXHAUSTIVE_LIMIT = 2 ** 16

_FIELD_RE = re.compile(
    r"^\s*GF\(\s*(?P<p>\d+)\s*(?:\^\s*(?P<k>\d+)\s*)?"
    r"(?:;\s*modulus\s*=\s*(?P<modulus>[-\d\s,]+))?\)\s*$"
)


def _to_gf(coeffs: Sequence[int]) -> List[int]:
    return gf_strip([int(c) for c in reversed(coeffs)])


def _from_gf(poly: Sequence[int], k: int) -> Tuple[int, ...]:
    low = [int(c) for c in reversed(poly)]
    return tuple(low + [0] * (k - len(low)))


def default_modulus(p: int, k: int) -> Tuple[int, ...]:
    """Lexicographically smallest monic irreducible of degree k over GF(p), low-to-high"""
    for index in range(p ** k):
        n, digits = index, []
        for _ in range(k):
            n, digit = divmod(n, p)
            digits.append(digit)
        high_to_low = [1] + digits[::-1]
        if high_to_low[-1] == 0:
            continue
        if gf_irreducible_p(high_to_low, p, ZZ):
            return tuple(reversed(high_to_low))
    raise InvalidField(f"no irreducible polynomial of degree {k} over GF({p})")


@dataclass(frozen=True)
class FieldCtx:
    """GF(p) when k == 1, otherwise GF(p)[z]/(modulus)"""
    p: int
    k: int = 1
    modulus: Tuple[int, ...] = ()

    def __post_init__(self):
        if isinstance(self.p, bool) or not isinstance(self.p, int) or not isprime(self.p):
            raise InvalidPrime(f"characteristic {self.p!r} is not a prime")
        if not isinstance(self.k, int) or self.k < 1:
            raise InvalidField(f"extension degree must be a positive integer, got {self.k!r}")
        if self.p ** self.k >= MAX_FIELD_SIZE:
            raise InvalidField(f"GF({self.p}^{self.k}) exceeds the supported field size 2^31")
        if self.k == 1:
            if self.modulus:
                raise InvalidField("a prime field takes no modulus")
            return
        if self.modulus:
            modulus = tuple(int(c) % self.p for c in self.modulus)
        else:
            modulus = default_modulus(self.p, self.k)
        if len(modulus) != self.k + 1 or modulus[-1] != 1:
            raise InvalidField(f"modulus must be monic of degree {self.k}, got {modulus}")
        if not gf_irreducible_p(list(reversed(modulus)), self.p, ZZ):
            raise InvalidField(f"modulus {modulus} is reducible over GF({self.p})")
        object.__setattr__(self, "modulus", modulus)

    @classmethod
    def parse(cls, text: str) -> "FieldCtx":
        """Parse `GF(p)`, `GF(p^k)` or `GF(p^k; modulus=c0,c1,...)`"""
        match = _FIELD_RE.match(text)
        if not match:
            raise InvalidField(f"cannot parse field specification {text!r}")
        p = int(match.group("p"))
        k = int(match.group("k") or 1)
        modulus: Tuple[int, ...] = ()
        if match.group("modulus"):
            modulus = tuple(int(c) for c in match.group("modulus").split(",") if c.strip())
            if len(modulus) != k + 1:
                raise InvalidField(f"modulus for degree {k} needs {k + 1} coefficients, got {len(modulus)}")
        return cls(p, k, modulus)

    @property
    def size(self) -> int:
        return self.p ** self.k

    @property
    def is_prime_field(self) -> bool:
        return self.k == 1

    @property
    def zero(self) -> "FieldElement":
        return FieldElement(self, (0,) * self.k)

    @property
    def one(self) -> "FieldElement":
        return FieldElement(self, (1,) + (0,) * (self.k - 1))

    @property
    def gen(self) -> "FieldElement":
        """The class of z; the element 1 in a prime field"""
        if self.k == 1:
            return self.one
        return FieldElement(self, (0, 1) + (0,) * (self.k - 2))

    def element(self, value: Union[int, Sequence[int], "FieldElement"]) -> "FieldElement":
        if isinstance(value, FieldElement):
            if value.ctx != self:
                raise FieldMismatch(f"element of {value.ctx} used in {self}")
            return value
        if isinstance(value, int) or hasattr(value, "__index__"):
            return FieldElement(self, (int(value) % self.p,) + (0,) * (self.k - 1))
        coeffs = [int(c) % self.p for c in value]
        if len(coeffs) > self.k:
            raise InvalidField(f"{len(coeffs)} coefficients given for an element of {self}")
        return FieldElement(self, tuple(coeffs + [0] * (self.k - len(coeffs))))

    def from_index(self, index: int) -> "FieldElement":
        digits = []
        for _ in range(self.k):
            index, digit = divmod(index, self.p)
            digits.append(digit)
        return FieldElement(self, tuple(digits))

    def elements(self) -> Iterator["FieldElement"]:
        """All elements in canonical order"""
        for index in range(self.size):
            yield self.from_index(index)

    def describe(self) -> str:
        if self.k == 1:
            return f"GF({self.p})"
        return f"GF({self.p}^{self.k}; modulus={','.join(str(c) for c in self.modulus)})"

    def __str__(self) -> str:
        return f"GF({self.p})" if self.k == 1 else f"GF({self.p}^{self.k})"


@dataclass(frozen=True)
class FieldElement:
    ctx: FieldCtx
    coeffs: Tuple[int, ...]

    def _coerce(self, other) -> Optional["FieldElement"]:
        if isinstance(other, FieldElement):
            if other.ctx != self.ctx:
                raise FieldMismatch(f"cannot combine elements of {self.ctx} and {other.ctx}")
            return other
        if isinstance(other, int):
            return self.ctx.element(other)
        return None

    @property
    def is_zero(self) -> bool:
        return not any(self.coeffs)

    @property
    def is_one(self) -> bool:
        return self.coeffs[0] == 1 and not any(self.coeffs[1:])

    @property
    def in_prime_field(self) -> bool:
        return not any(self.coeffs[1:])

    @property
    def index(self) -> int:
        """Canonical index sum(c_i p^i), used for sorting"""
        result = 0
        for c in reversed(self.coeffs):
            result = result * self.ctx.p + c
        return result

    def __lt__(self, other: "FieldElement") -> bool:
        return self.index < self._coerce(other).index

    def __add__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        p = self.ctx.p
        return FieldElement(self.ctx, tuple((a + b) % p for a, b in zip(self.coeffs, other.coeffs)))

    __radd__ = __add__

    def __neg__(self):
        p = self.ctx.p
        return FieldElement(self.ctx, tuple((-a) % p for a in self.coeffs))

    def __sub__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return other + (-self)

    def __mul__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        ctx = self.ctx
        if ctx.k == 1:
            return FieldElement(ctx, ((self.coeffs[0] * other.coeffs[0]) % ctx.p,))
        product = gf_mul(_to_gf(self.coeffs), _to_gf(other.coeffs), ctx.p, ZZ)
        return FieldElement(ctx, _from_gf(gf_rem(product, _to_gf(ctx.modulus), ctx.p, ZZ), ctx.k))

    __rmul__ = __mul__

    def inverse(self) -> "FieldElement":
        if self.is_zero:
            raise DivisionByZero(f"zero has no inverse in {self.ctx}")
        ctx = self.ctx
        if ctx.k == 1:
            return FieldElement(ctx, (pow(self.coeffs[0], -1, ctx.p),))
        s, _, _ = gf_gcdex(_to_gf(self.coeffs), _to_gf(ctx.modulus), ctx.p, ZZ)
        return FieldElement(ctx, _from_gf(s, ctx.k))

    def __truediv__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return self * other.inverse()

    def __rtruediv__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return other * self.inverse()

    def __pow__(self, exponent: int) -> "FieldElement":
        if exponent < 0:
            return self.inverse() ** (-exponent)
        if exponent == 0:
            return self.ctx.one
        if self.is_zero:
            return self
        ctx = self.ctx
        if ctx.k == 1:
            return FieldElement(ctx, (pow(self.coeffs[0], exponent, ctx.p),))
        powered = gf_pow_mod(_to_gf(self.coeffs), exponent, _to_gf(ctx.modulus), ctx.p, ZZ)
        return FieldElement(ctx, _from_gf(powered, ctx.k))

    def __str__(self) -> str:
        p = self.ctx.p
        if self.in_prime_field:
            c = self.coeffs[0]
            return str(c - p if c > p // 2 else c)
        parts = []
        for i in reversed(range(len(self.coeffs))):
            c = self.coeffs[i]
            if c == 0:
                continue
            z = "" if i == 0 else ("z" if i == 1 else f"z^{i}")
            if not z:
                parts.append(str(c))
            elif c == 1:
                parts.append(z)
            else:
                parts.append(f"{c}*{z}")
        return " + ".join(parts)

    def __repr__(self) -> str:
        return f"FieldElement({self} in {self.ctx})"


@dataclass(frozen=True)
class Embedding:
    """Field homomorphism source -> target given by the image of z"""
    source: FieldCtx
    target: FieldCtx
    image: Optional[FieldElement] = None

    def __call__(self, a: FieldElement) -> FieldElement:
        if a.ctx != self.source:
            raise FieldMismatch(f"embedding from {self.source} applied to an element of {a.ctx}")
        if self.source == self.target:
            return a
        if self.image is None:
            return self.target.element(a.coeffs[0])
        result = self.target.zero
        for c in reversed(a.coeffs):
            result = result * self.image + c
        return result


@lru_cache(maxsize=None)
def primitive_element(ctx: FieldCtx) -> FieldElement:
    """Smallest generator of the multiplicative group"""
    if ctx.k == 1:
        return ctx.element(primitive_root(ctx.p))
    order = ctx.size - 1
    primes = list(factorint(order))
    for index in range(2, ctx.size):
        candidate = ctx.from_index(index)
        if all(not (candidate ** (order // r)).is_one for r in primes):
            return candidate
    raise InvalidField(f"{ctx} has no primitive element")  # unreachable


def _discrete_log(c: FieldElement, base: FieldElement) -> int:
    """Baby-step giant-step; base must be primitive"""
    ctx = c.ctx
    order = ctx.size - 1
    m = isqrt(order) + 1
    table = {}
    power = ctx.one
    for j in range(m):
        table.setdefault(power, j)
        power = power * base
    giant = (base ** m).inverse()
    gamma = c
    for i in range(m + 1):
        if gamma in table:
            return (i * m + table[gamma]) % order
        gamma = gamma * giant
    raise InvalidField(f"{base} is not primitive in {ctx}")


def nth_roots(c: FieldElement, d: int) -> List[FieldElement]:
    """All solutions of x^d = c in the field of c, sorted canonically"""
    if d < 1:
        raise ValueError(f"root degree must be positive, got {d}")
    if c.is_zero:
        raise ZeroArgument("nth_roots of zero")
    ctx = c.ctx
    if d == 1:
        return [c]
    if ctx.size <= EXHAUSTIVE_LIMIT:
        return [x for x in ctx.elements() if not x.is_zero and x ** d == c]
    if ctx.k == 1:
        roots = nthroot_mod(c.coeffs[0], d, ctx.p, all_roots=True) or []
        return sorted(ctx.element(int(r)) for r in roots)
    order = ctx.size - 1
    g = gcd(d, order)
    log_c = _discrete_log(c, primitive_element(ctx))
    if log_c % g:
        return []
    reduced_order = order // g
    y0 = (log_c // g) * pow(d // g, -1, reduced_order) % reduced_order if reduced_order > 1 else 0
    w = primitive_element(ctx)
    return sorted(w ** (y0 + j * reduced_order) for j in range(g))


def prime_to_p_part(d: int, p: int) -> int:
    while d % p == 0:
        d //= p
    return d


def _evaluate(coeffs: Sequence[int], x: FieldElement) -> FieldElement:
    result = x.ctx.zero
    for c in reversed(coeffs):
        result = result * x + c
    return result


def _subfield_roots(src: FieldCtx, dst: FieldCtx) -> List[FieldElement]:
    if dst.size <= EXHAUSTIVE_LIMIT:
        candidates = dst.elements()
    else:
        zeta = primitive_element(dst) ** ((dst.size - 1) // (src.size - 1))
        candidates = (zeta ** i for i in range(src.size - 1))
    return sorted(x for x in candidates if _evaluate(src.modulus, x).is_zero)


@lru_cache(maxsize=None)
def embedding(src: FieldCtx, dst: FieldCtx, over: Optional[FieldCtx] = None) -> Embedding:
    """
    Deterministic embedding src -> dst.

    z is sent to the smallest root of src.modulus in dst. With `over`, only
    embeddings agreeing with embedding(over, dst) on `over` are considered,
    so fields reached from a common base stay compatible.
    """
    if src == dst:
        return Embedding(src, dst)
    if src.p != dst.p or dst.k % src.k:
        raise FieldMismatch(f"{src} does not embed into {dst}")
    if src.k == 1:
        return Embedding(src, dst)
    roots = _subfield_roots(src, dst)
    if over is not None and over.k > 1 and over != src:
        base_into_src = embedding(over, src)
        target = embedding(over, dst)(over.gen)
        for root in roots:
            candidate = Embedding(src, dst, root)
            if candidate(base_into_src(over.gen)) == target:
                return candidate
        raise FieldMismatch(f"no embedding {src} -> {dst} compatible over {over}")
    return Embedding(src, dst, roots[0])


def splitting_extension(ctx: FieldCtx, d: int, c: FieldElement) -> Tuple[FieldCtx, Embedding]:
    """Smallest GF(p^(k*j)) where x^d = c has its full set of prime-to-p-part many roots"""
    if c.ctx != ctx:
        raise FieldMismatch(f"element of {c.ctx} passed with context {ctx}")
    if c.is_zero:
        raise ZeroArgument("splitting_extension of zero")
    if d < 1:
        raise ValueError(f"root degree must be positive, got {d}")
    d_prime = prime_to_p_part(d, ctx.p)
    for j in count(1):
        target = ctx if j == 1 else FieldCtx(ctx.p, ctx.k * j)
        emb = embedding(ctx, target)
        q = target.size
        if (q - 1) % d_prime == 0 and (emb(c) ** ((q - 1) // d_prime)).is_one:
            if j > 1:
                logger.debug(f"x^{d} = {c} splits over {target}")
            return target, emb
    raise InvalidField("unreachable")


def compositum(base: FieldCtx, *others: FieldCtx) -> FieldCtx:
    """Smallest field among base/others of lcm degree, or the default one"""
    degree = base.k
    for ctx in others:
        if ctx.p != base.p:
            raise FieldMismatch(f"{ctx} and {base} have different characteristic")
        degree = degree * ctx.k // gcd(degree, ctx.k)
    for ctx in (base,) + others:
        if ctx.k == degree:
            return ctx
    return FieldCtx(base.p, degree)
