#!/usr/bin/env python3
"""
Data Models for binomdec reports
"""

from enum import Enum
from typing import List, Optional

from pydantic import BaseModel


class ComponentKind(str, Enum):
    """Pipeline stage that produced a component"""
    CELLULAR = "cellular"
    UNMIXED = "unmixed"
    HULL = "hull"
    PRIMARY = "primary"
    PRIME = "prime"
    QUASIPOWER = "quasipower"


class TermModel(BaseModel):
    """One term; coefficient is the low-to-high vector over Z/p"""
    exponent: List[int]
    coefficient: List[int]


class CharacterModel(BaseModel):
    basis: List[List[int]]
    values: List[List[int]]


class WitnessModel(BaseModel):
    monomial: str
    character: CharacterModel
    embedded: bool


class ProvenanceModel(BaseModel):
    kind: ComponentKind
    witness: Optional[str] = None
    character_index: Optional[int] = None
    cell: Optional[int] = None


class ComponentModel(BaseModel):
    """Model for one ideal in a decomposition"""
    generators: List[str]
    terms: List[List[TermModel]]
    delta: List[str]
    provenance: ProvenanceModel
    associated_prime: Optional[List[str]] = None
    field: str


class DecompositionReport(BaseModel):
    """Model for the result of one CLI run"""
    subcommand: str
    input: str
    field: str
    variables: List[str]
    delta: Optional[List[str]] = None
    memb_generators: Optional[List[str]] = None
    witnesses: Optional[List[WitnessModel]] = None
    components: List[ComponentModel] = []
    primary: Optional[bool] = None
    verified: Optional[bool] = None
    expectations_met: Optional[bool] = None
    term_order: str = "degrevlex"
