#!/usr/bin/env python3
"""
Reporter for binomdec
"""

import json
import logging
import os
import sys
from datetime import datetime, timezone
from typing import Any, Dict, Iterable, List, Optional, Sequence, TextIO

from .bideal import DEGREVLEX, Ideal, Monomial, PolynomialRing
from .character import PartialCharacter
from .decomp import Component, WitnessRecord
from .models import (
    CharacterModel,
    ComponentModel,
    DecompositionReport,
    ProvenanceModel,
    TermModel,
    WitnessModel,
)

logger = logging.getLogger(__name__)


def _variable_names(ring: PolynomialRing, indices: Iterable[int]) -> List[str]:
    return [ring.variables[i] for i in indices]


def terms_of(ideal: Ideal) -> List[List[TermModel]]:
    """Reduced basis as exact term lists"""
    result = []
    for g in ideal.groebner():
        ordered = sorted(g.terms, key=DEGREVLEX.key, reverse=True)
        result.append([TermModel(exponent=list(m), coefficient=list(g.terms[m].coeffs)) for m in ordered])
    return result


def character_model(rho: PartialCharacter) -> CharacterModel:
    return CharacterModel(basis=[list(b) for b in rho.lattice.basis], values=[list(v.coeffs) for v in rho.values])


def witness_model(ring: PolynomialRing, record: WitnessRecord) -> WitnessModel:
    return WitnessModel(
        monomial=ring.format_monomial(record.monomial),
        character=character_model(record.character),
        embedded=record.embedded,
    )


def _monomial_text(ring: PolynomialRing, monomial: Optional[Monomial]) -> Optional[str]:
    return None if monomial is None else ring.format_monomial(monomial)


def component_model(component: Component) -> ComponentModel:
    ring = component.ideal.ring
    provenance = component.provenance
    prime = component.associated_prime
    return ComponentModel(
        generators=component.ideal.generator_strings(),
        terms=terms_of(component.ideal),
        delta=_variable_names(ring, component.delta),
        provenance=ProvenanceModel(
            kind=provenance.kind,
            witness=_monomial_text(ring, provenance.witness),
            character_index=provenance.character_index,
            cell=provenance.cell,
        ),
        associated_prime=prime.generator_strings() if prime is not None else None,
        field=ring.field.describe(),
    )


def ideal_model(ideal: Ideal, kind, delta: Sequence[int] = (), cell: Optional[int] = None) -> ComponentModel:
    """A bare ideal (cellular cell, prime) in component form"""
    return ComponentModel(
        generators=ideal.generator_strings(),
        terms=terms_of(ideal),
        delta=_variable_names(ideal.ring, delta),
        provenance=ProvenanceModel(kind=kind, cell=cell),
        field=ideal.ring.field.describe(),
    )


class Reporter:
    """Renders reports as JSON or text, to stdout or to a file"""

    def __init__(self, config: Dict[str, Any], stream: Optional[TextIO] = None):
        self.config = config
        self.stream = stream

    def render(self, report: DecompositionReport) -> str:
        if self.config['output']['format'] == 'pretty':
            return self._render_pretty(report)
        return json.dumps(report.model_dump(mode='json'), indent=2) + "\n"

    def report(self, report: DecompositionReport) -> Optional[str]:
        """
        Output a report according to the output configuration

        Returns:
            Path of the written file, or None for stdout
        """
        text = self.render(report)
        if self.config['output']['destination'] == 'file':
            return self._output_to_file(report, text)
        (self.stream or sys.stdout).write(text)
        return None

    def _output_to_file(self, report: DecompositionReport, text: str) -> str:
        directory = self.config['output'].get('directory') or 'outputs'
        os.makedirs(directory, exist_ok=True)
        stem = os.path.splitext(os.path.basename(report.input))[0] or 'input'
        extension = 'txt' if self.config['output']['format'] == 'pretty' else 'json'
        timestamp = datetime.now(timezone.utc).strftime('%Y%m%d_%H%M%S')
        filename = os.path.join(directory, f"{report.subcommand}_{stem}_{timestamp}.{extension}")
        with open(filename, 'w') as f:
            f.write(text)
        logger.info(f"Report stored to {filename}")
        return filename

    def _render_pretty(self, report: DecompositionReport) -> str:
        lines = [f"{report.subcommand} {report.input}", f"  field: {report.field}"]
        lines.append(f"  variables: {' '.join(report.variables)}")
        lines.append(f"  term order: {report.term_order}")
        if report.delta is not None:
            lines.append(f"  cellular variables: {' '.join(report.delta) or '(none)'}")
        if report.memb_generators is not None:
            lines.append(f"  Memb: <{', '.join(report.memb_generators)}>" if report.memb_generators else "  Memb: 0")
        for witness in report.witnesses or []:
            flag = "embedded" if witness.embedded else "not embedded"
            lines.append(f"  witness {witness.monomial}: lattice {witness.character.basis} ({flag})")
        for index, component in enumerate(report.components, 1):
            lines.append(f"  [{index}] <{', '.join(component.generators)}>  ({component.provenance.kind.value})")
            if component.field != report.field:
                lines.append(f"      over {component.field}")
            if component.associated_prime is not None:
                lines.append(f"      prime <{', '.join(component.associated_prime)}>")
        for label, value in (("primary", report.primary), ("verified", report.verified),
                             ("expectations met", report.expectations_met)):
            if value is not None:
                lines.append(f"  {label}: {str(value).lower()}")
        return "\n".join(lines) + "\n"
