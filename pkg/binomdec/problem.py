#!/usr/bin/env python3
"""
Problem file (.bid) parser for binomdec

    # comments run to the end of the line
    field GF(7);
    vars x1 x2 x3;
    ideal x1^2 - x2^2, x3(x1 - x2), x3^3;
    expect primary <x1 - x2, x3^3> | <x1 + x2, x3>;

Generators go through sympy's parser and are expanded over QQ before being
reduced modulo p. In GF(p^k) with k > 1 the symbol z is the field generator.
"""

import logging
import re
from dataclasses import dataclass, field as dataclass_field
from keyword import iskeyword
from pathlib import Path
from tokenize import TokenError
from typing import Dict, List, Optional, Sequence, Tuple, Union

from sympy import Poly, QQ, Symbol
from sympy.parsing.sympy_parser import (
    convert_xor,
    implicit_multiplication,
    parse_expr,
    standard_transformations,
)
from sympy.polys.polyerrors import BasePolynomialError

from .bideal import BinomialIdeal, Ideal, Polynomial, PolynomialRing
from .exceptions import BinomdecError, InvalidField, NonBinomialGenerator, ProblemSyntaxError
from .field import FieldCtx, FieldElement, compositum

logger = logging.getLogger(__name__)

TRANSFORMATIONS = standard_transformations + (implicit_multiplication, convert_xor)
FIELD_SYMBOL = "z"

IDEAL_LIST_SUBCOMMANDS = ("cellular", "unmixed", "primary", "assoc")
IDEAL_SUBCOMMANDS = ("memb", "hull")
FLAG_SUBCOMMANDS = ("isprimary", "verify")

_NAME_RE = re.compile(r"^[A-Za-z_][A-Za-z0-9_]*$")
_CALL_RE = re.compile(r"([A-Za-z0-9_)])\s*\(")
_KEYWORD_RE = re.compile(r"([A-Za-z_]+)(?:\s+|$)")
# only arithmetic characters and declared names are handed to parse_expr
_POLY_CHARS_RE = re.compile(r"[A-Za-z0-9_\s+\-*/^()]*")
_IDENT_RE = re.compile(r"[A-Za-z_][A-Za-z0-9_]*")


@dataclass
class Expectation:
    subcommand: str
    ideals: List[Ideal] = dataclass_field(default_factory=list)
    flag: Optional[bool] = None


@dataclass
class ProblemFile:
    field: FieldCtx
    ring: PolynomialRing
    ideal: BinomialIdeal
    expectations: List[Expectation] = dataclass_field(default_factory=list)
    source: str = "<string>"

    def expectation(self, subcommand: str) -> Optional[Expectation]:
        for item in self.expectations:
            if item.subcommand == subcommand:
                return item
        return None


class _Statement:
    __slots__ = ("text", "offset")

    def __init__(self, text: str, offset: int):
        self.text = text
        self.offset = offset


def _position(source: str, offset: int) -> Tuple[int, int]:
    line = source.count("\n", 0, offset) + 1
    column = offset - (source.rfind("\n", 0, offset) + 1) + 1
    return line, column


def _strip_comments(source: str) -> str:
    # keeps offsets stable so positions still point into the original text
    return re.sub(r"#[^\n]*", lambda m: " " * len(m.group(0)), source)


def _split_top_level(text: str, separator: str, offset: int, source: str) -> List[_Statement]:
    pieces = []
    depth = 0
    start = 0
    for i, ch in enumerate(text):
        if ch in "(<":
            depth += 1
        elif ch in ")>":
            depth -= 1
            if depth < 0:
                line, column = _position(source, offset + i)
                raise ProblemSyntaxError(f"unbalanced {ch!r}", line, column)
        elif ch == separator and depth == 0:
            pieces.append(_Statement(text[start:i], offset + start))
            start = i + 1
    if depth != 0:
        line, column = _position(source, offset + len(text))
        raise ProblemSyntaxError("unclosed bracket", line, column)
    pieces.append(_Statement(text[start:], offset + start))
    return pieces


def _strip_statement(statement: _Statement) -> _Statement:
    stripped = statement.text.lstrip()
    return _Statement(stripped.rstrip(), statement.offset + len(statement.text) - len(stripped))


def _keyword(statement: _Statement) -> Tuple[str, _Statement]:
    match = _KEYWORD_RE.match(statement.text)
    if not match:
        return statement.text, _Statement("", statement.offset + len(statement.text))
    return match.group(1), _Statement(statement.text[match.end():], statement.offset + match.end())


def _convert(expr_text: str, ring: PolynomialRing, source: str, offset: int) -> Polynomial:
    ctx = ring.field
    line, column = _position(source, offset)
    symbols = [Symbol(name) for name in ring.variables]
    local = {name: s for name, s in zip(ring.variables, symbols)}
    gens = list(symbols)
    if ctx.k > 1:
        z = Symbol(FIELD_SYMBOL)
        local[FIELD_SYMBOL] = z
        gens.append(z)
    if not _POLY_CHARS_RE.fullmatch(expr_text):
        bad = sorted(set(_POLY_CHARS_RE.sub("", expr_text)))
        raise ProblemSyntaxError(f"unexpected characters {bad} in {expr_text.strip()!r}", line, column)
    unknown = sorted(set(_IDENT_RE.findall(expr_text)) - set(local))
    if unknown:
        raise ProblemSyntaxError(f"undeclared symbols {unknown} in {expr_text.strip()!r}", line, column)
    try:
        expr = parse_expr(_CALL_RE.sub(r"\1*(", expr_text), local_dict=local, transformations=TRANSFORMATIONS)
    except (SyntaxError, TypeError, ValueError, TokenError) as e:
        raise ProblemSyntaxError(f"cannot parse polynomial {expr_text!r}: {e}", line, column) from e
    unknown = sorted(str(s) for s in getattr(expr, "free_symbols", set()) - set(local.values()))
    if unknown:
        raise ProblemSyntaxError(f"undeclared symbols {unknown} in {expr_text.strip()!r}", line, column)
    try:
        poly = Poly(expr, *gens, domain=QQ)
    except (BasePolynomialError, TypeError, ValueError) as e:
        raise ProblemSyntaxError(f"{expr_text.strip()!r} is not a polynomial: {e}", line, column) from e

    terms: Dict[Tuple[int, ...], FieldElement] = {}
    for monom, coeff in poly.terms():
        numerator, denominator = int(coeff.p), int(coeff.q)
        if denominator % ctx.p == 0:
            raise ProblemSyntaxError(f"coefficient {coeff} is undefined modulo {ctx.p}", line, column)
        value = ctx.element(numerator) / ctx.element(denominator)
        exponent = tuple(monom[:ring.nvars])
        if ctx.k > 1:
            value = value * ctx.gen ** monom[-1]
        terms[exponent] = terms[exponent] + value if exponent in terms else value
    polynomial = Polynomial(ring, terms)
    if len(polynomial) > 2:
        raise NonBinomialGenerator(
            f"line {line}, column {column}: {expr_text.strip()} has {len(polynomial)} terms over {ctx}",
            expr_text.strip(),
        )
    return polynomial


def _parse_generators(body: _Statement, ring: PolynomialRing, source: str) -> List[Polynomial]:
    text = body.text.strip()
    offset = body.offset
    if text.startswith("<") and text.endswith(">"):
        text = text[1:-1]
        offset += body.text.index("<") + 1
    if not text.strip():
        return []
    generators = []
    for piece in _split_top_level(text, ",", offset, source):
        piece = _strip_statement(piece)
        if not piece.text:
            line, column = _position(source, piece.offset)
            raise ProblemSyntaxError("empty generator", line, column)
        generators.append(_convert(piece.text, ring, source, piece.offset))
    return generators


def _parse_field(text: str, source: str, offset: int) -> FieldCtx:
    try:
        return FieldCtx.parse(text)
    except BinomdecError as e:
        line, column = _position(source, offset)
        raise ProblemSyntaxError(str(e), line, column) from e


def _parse_vars(body: _Statement, ctx: FieldCtx, source: str) -> Tuple[str, ...]:
    names = [n for n in re.split(r"[\s,]+", body.text.strip()) if n]
    line, column = _position(source, body.offset)
    if not names:
        raise ProblemSyntaxError("no variables declared", line, column)
    for name in names:
        if not _NAME_RE.match(name) or "__" in name or iskeyword(name):
            raise ProblemSyntaxError(f"invalid variable name {name!r}", line, column)
        if ctx.k > 1 and name == FIELD_SYMBOL:
            raise ProblemSyntaxError(f"{FIELD_SYMBOL} denotes the field generator of {ctx}", line, column)
    if len(set(names)) != len(names):
        raise ProblemSyntaxError(f"duplicate variable names in {names}", line, column)
    return tuple(names)


def _parse_expectation(body: _Statement, ring: PolynomialRing, source: str) -> Expectation:
    line, column = _position(source, body.offset)
    subcommand, rest = _keyword(_strip_statement(body))
    payload = rest.text.strip()
    payload_offset = rest.offset

    if subcommand in FLAG_SUBCOMMANDS:
        if payload not in ("true", "false"):
            raise ProblemSyntaxError(f"expect {subcommand} takes true or false, got {payload!r}", line, column)
        return Expectation(subcommand, flag=payload == "true")
    if subcommand not in IDEAL_LIST_SUBCOMMANDS + IDEAL_SUBCOMMANDS:
        raise ProblemSyntaxError(f"unknown subcommand {subcommand!r} in expect", line, column)

    expected_ring = ring
    match = re.match(r"over\s+(GF\([^)]*\))", payload)
    if match:
        expected_ring = ring.with_field(_parse_field(match.group(1), source, payload_offset))
        payload = payload[match.end():]
        payload_offset += match.end()
    statement = _Statement(payload, payload_offset)
    if subcommand in IDEAL_SUBCOMMANDS:
        return Expectation(subcommand, [BinomialIdeal(expected_ring, _parse_generators(statement, expected_ring, source))])
    ideals = [
        BinomialIdeal(expected_ring, _parse_generators(piece, expected_ring, source))
        for piece in _split_top_level(payload, "|", payload_offset, source)
    ]
    return Expectation(subcommand, ideals)


def parse_problem(source: str, name: str = "<string>") -> ProblemFile:
    """
    Parse the text of a problem file

    Raises:
        ProblemSyntaxError: malformed statements, with line and column
        NonBinomialGenerator: a generator with more than two terms
    """
    cleaned = _strip_comments(source)
    ctx: Optional[FieldCtx] = None
    ring: Optional[PolynomialRing] = None
    generators: Optional[List[Polynomial]] = None
    pending_expectations: List[_Statement] = []

    for statement in _split_top_level(cleaned, ";", 0, source):
        statement = _strip_statement(statement)
        if not statement.text:
            continue
        keyword, body = _keyword(statement)
        line, column = _position(source, statement.offset)
        if keyword == "field":
            if ctx is not None:
                raise ProblemSyntaxError("field declared twice", line, column)
            ctx = _parse_field(body.text.strip(), source, body.offset)
        elif keyword == "vars":
            if ctx is None:
                raise ProblemSyntaxError("vars before field", line, column)
            if ring is not None:
                raise ProblemSyntaxError("vars declared twice", line, column)
            ring = PolynomialRing(ctx, _parse_vars(body, ctx, source))
        elif keyword == "ideal":
            if ring is None:
                raise ProblemSyntaxError("ideal before vars", line, column)
            if generators is not None:
                raise ProblemSyntaxError("ideal declared twice", line, column)
            generators = _parse_generators(body, ring, source)
        elif keyword == "expect":
            pending_expectations.append(body)
        else:
            raise ProblemSyntaxError(f"unknown statement {keyword!r}", line, column)

    end_line, end_column = _position(source, len(source))
    if ring is None or generators is None:
        raise ProblemSyntaxError("a problem needs field, vars and ideal statements", end_line, end_column)
    expectations = [_parse_expectation(body, ring, source) for body in pending_expectations]
    logger.debug(f"parsed {name}: {len(generators)} generators over {ring}")
    return ProblemFile(ctx, ring, BinomialIdeal(ring, generators), expectations, name)


def load_problem(path: Union[str, Path]) -> ProblemFile:
    path = Path(path)
    return parse_problem(path.read_text(encoding="utf-8"), str(path))


def format_problem(problem: ProblemFile) -> str:
    """Text that parses back to an equal ideal"""
    ctx = problem.field
    field_text = str(ctx) if ctx.is_prime_field or ctx == FieldCtx(ctx.p, ctx.k) else ctx.describe()
    generators = ", ".join(str(g) for g in problem.ideal.generators)
    return f"field {field_text};\nvars {' '.join(problem.ring.variables)};\nideal {generators};\n"


def _lift_all(ideals: Sequence[Ideal], base: FieldCtx) -> List[Ideal]:
    target = compositum(base, *(ideal.ring.field for ideal in ideals))
    return [ideal.extend_field(target, over=base) for ideal in ideals]


def ideal_lists_match(expected: Sequence[Ideal], actual: Sequence[Ideal], base: FieldCtx) -> bool:
    """Equality of two ideal collections as sets"""
    if not expected and not actual:
        return True
    try:
        lifted = _lift_all(list(expected) + list(actual), base)
    except InvalidField:
        return False
    expected_keys = {ideal.key() for ideal in lifted[:len(expected)]}
    actual_keys = {ideal.key() for ideal in lifted[len(expected):]}
    return expected_keys == actual_keys
