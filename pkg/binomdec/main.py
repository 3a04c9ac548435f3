#!/usr/bin/env python3
"""
binomdec - primary decomposition of binomial ideals over finite fields

Command-line entry point:

    python -m binomdec <subcommand> [flags] problem.bid

Exit codes: 0 on success, 1 on input or library errors, 2 when a requested
verification or the file's expectations fail.
"""

import argparse
import json
import logging
import sys
import time
from dataclasses import dataclass, field, replace
from datetime import datetime, timezone
from typing import Any, Callable, Dict, List, Optional, Sequence

from . import __version__
from .bideal import ENGINE_STATS, BinomialIdeal, Ideal
from .cellular import CellularCertificate, cellular_decomposition, is_cellular, verify_cellular_decomposition
from .config_loader import LOG_LEVELS, load_config
from .decomp import (
    associated_primes,
    hull,
    is_primary,
    memb,
    primary_decomposition,
    quasipower_decomposition,
    unmixed_decomposition,
    unmixed_decomposition_recursive,
    verify_decomposition,
    witnesses,
)
from .exceptions import BinomdecError, NotCellular
from .field import compositum
from .models import ComponentKind, DecompositionReport
from .monitoring import BinomdecMonitoring
from .problem import Expectation, ProblemFile, ideal_lists_match, load_problem
from .reporter import Reporter, component_model, ideal_model, witness_model

logger = logging.getLogger(__name__)

SUBCOMMANDS = ("cellular", "memb", "hull", "unmixed", "primary", "assoc", "isprimary", "verify")
TEXT_FORMAT = '%(asctime)s - %(name)s - %(levelname)s - %(message)s'

EXIT_OK = 0
EXIT_INPUT_ERROR = 1
EXIT_VERIFICATION_FAILED = 2


class JsonFormatter(logging.Formatter):
    """One JSON object per log record"""

    def format(self, record: logging.LogRecord) -> str:
        payload = {
            'timestamp': datetime.fromtimestamp(record.created, timezone.utc).isoformat(),
            'level': record.levelname,
            'logger': record.name,
            'message': record.getMessage(),
        }
        if record.exc_info:
            payload['exception'] = self.formatException(record.exc_info)
        return json.dumps(payload)


def setup_logging(config: Dict[str, Any], level: Optional[str] = None) -> None:
    """Configure the root logger; records go to stderr so stdout carries only the report"""
    handlers: List[logging.Handler] = [logging.StreamHandler(sys.stderr)]
    if config['logging'].get('file'):
        handlers.append(logging.FileHandler(config['logging']['file']))
    formatter = JsonFormatter() if config['logging']['format'] == 'json' else logging.Formatter(TEXT_FORMAT)
    for handler in handlers:
        handler.setFormatter(formatter)
    logging.basicConfig(level=level or config['logging']['level'], handlers=handlers, force=True)


@dataclass
class RunOptions:
    prune: bool = True
    allow_extension: bool = False
    check: bool = False
    verify: bool = False
    stepwise: bool = False
    quasipower: Optional[str] = None
    cross_check: bool = False
    max_quasipower_exponent: int = 4


@dataclass
class Outcome:
    """A report plus the result ideals (or flag) that expectations compare against"""
    report: DecompositionReport
    ideals: List[Ideal] = field(default_factory=list)
    flag: Optional[bool] = None


def _base_report(problem: ProblemFile, subcommand: str) -> DecompositionReport:
    return DecompositionReport(
        subcommand=subcommand,
        input=problem.source,
        field=problem.field.describe(),
        variables=list(problem.ring.variables),
    )


def _require_cellular(ideal: BinomialIdeal) -> CellularCertificate:
    cert = is_cellular(ideal)
    if cert is None:
        raise NotCellular(f"{ideal} is not cellular; use the cellular or primary subcommands")
    return cert


def _names(problem: ProblemFile, indices: Sequence[int]) -> List[str]:
    return [problem.ring.variables[i] for i in indices]


def run_cellular(problem: ProblemFile, options: RunOptions) -> Outcome:
    report = _base_report(problem, 'cellular')
    cells = cellular_decomposition(problem.ideal, prune=options.prune, check=options.check)
    report.components = [
        ideal_model(cell, ComponentKind.CELLULAR, cert.delta, cell=index) for index, (cell, cert) in enumerate(cells)
    ]
    if options.verify:
        report.verified = verify_cellular_decomposition(problem.ideal, cells)
    return Outcome(report, [cell for cell, _ in cells])


def run_memb(problem: ProblemFile, options: RunOptions) -> Outcome:
    report = _base_report(problem, 'memb')
    cert = _require_cellular(problem.ideal)
    records = witnesses(problem.ideal, cert.delta)
    result = memb(problem.ideal, cert.delta)
    report.delta = _names(problem, cert.delta)
    report.memb_generators = result.generator_strings()
    report.witnesses = [witness_model(problem.ring, record) for record in records]
    return Outcome(report, [result])


def run_hull(problem: ProblemFile, options: RunOptions) -> Outcome:
    report = _base_report(problem, 'hull')
    cert = _require_cellular(problem.ideal)
    result = hull(problem.ideal, cert.delta, check=options.check)
    report.delta = _names(problem, cert.delta)
    report.memb_generators = memb(problem.ideal, cert.delta).generator_strings()
    report.components = [ideal_model(result, ComponentKind.HULL, cert.delta)]
    return Outcome(report, [result])


def run_unmixed(problem: ProblemFile, options: RunOptions) -> Outcome:
    report = _base_report(problem, 'unmixed')
    cert = _require_cellular(problem.ideal)
    if options.stepwise:
        components = unmixed_decomposition_recursive(problem.ideal, cert.delta, check=options.check)
    else:
        components = unmixed_decomposition(problem.ideal, cert.delta, check=options.check)
    report.delta = _names(problem, cert.delta)
    report.components = [component_model(c) for c in components]
    ideals = [c.ideal for c in components]
    if options.verify:
        report.verified = verify_decomposition(problem.ideal, ideals)
    return Outcome(report, ideals)


def run_primary(problem: ProblemFile, options: RunOptions) -> Outcome:
    report = _base_report(problem, 'primary')
    if options.quasipower is not None:
        q = None if options.quasipower == 'auto' else int(options.quasipower)
        components = quasipower_decomposition(
            problem.ideal, q, options.allow_extension, options.prune,
            options.max_quasipower_exponent, check=options.check,
        )
    else:
        components = primary_decomposition(
            problem.ideal, options.allow_extension, options.prune,
            cross_check=options.cross_check, check=options.check,
        )
    report.components = [component_model(c) for c in components]
    ideals = [c.ideal for c in components]
    if options.verify:
        report.verified = verify_decomposition(problem.ideal, ideals)
    return Outcome(report, ideals)


def run_assoc(problem: ProblemFile, options: RunOptions) -> Outcome:
    """Associated primes of a cellular ideal, or of every cell of a cellular decomposition"""
    report = _base_report(problem, 'assoc')
    cert = is_cellular(problem.ideal)
    if cert is not None:
        cells = [(problem.ideal, cert)]
        report.delta = _names(problem, cert.delta)
    else:
        cells = cellular_decomposition(problem.ideal, prune=options.prune)
    found = []
    for index, (cell, cell_cert) in enumerate(cells):
        for prime in associated_primes(cell, cell_cert.delta, options.allow_extension):
            found.append((prime, cell_cert.delta, index))
    base = problem.field
    target = compositum(base, *(prime.ring.field for prime, _, _ in found))
    seen = set()
    primes = []
    for prime, delta, index in found:
        prime = prime.extend_field(target, over=base)
        if prime.key() in seen:
            continue
        seen.add(prime.key())
        primes.append(prime)
        report.components.append(ideal_model(prime, ComponentKind.PRIME, delta, cell=index))
    return Outcome(report, primes)


def run_isprimary(problem: ProblemFile, options: RunOptions) -> Outcome:
    report = _base_report(problem, 'isprimary')
    report.primary = is_primary(problem.ideal)
    return Outcome(report, flag=report.primary)


RUNNERS: Dict[str, Callable[[ProblemFile, RunOptions], Outcome]] = {
    'cellular': run_cellular,
    'memb': run_memb,
    'hull': run_hull,
    'unmixed': run_unmixed,
    'primary': run_primary,
    'assoc': run_assoc,
    'isprimary': run_isprimary,
}


def expectation_met(expectation: Expectation, outcome: Outcome, problem: ProblemFile) -> bool:
    if expectation.flag is not None:
        actual = outcome.report.verified if expectation.subcommand == 'verify' else outcome.flag
        return actual == expectation.flag
    return ideal_lists_match(expectation.ideals, outcome.ideals, problem.field)


def run_verify(problem: ProblemFile, options: RunOptions) -> Outcome:
    """Primary decomposition with verification, then every expectation in the file"""
    checked = replace(options, verify=True)
    outcome = run_primary(problem, checked)
    outcome.report.subcommand = 'verify'
    outcomes = {'primary': outcome, 'verify': outcome}
    results = []
    for expectation in problem.expectations:
        if expectation.subcommand not in outcomes:
            outcomes[expectation.subcommand] = RUNNERS[expectation.subcommand](problem, checked)
        met = expectation_met(expectation, outcomes[expectation.subcommand], problem)
        if not met:
            logger.warning(f"expectation for {expectation.subcommand} not met")
        results.append(met)
    outcome.report.expectations_met = all(results)
    return outcome


RUNNERS['verify'] = run_verify


def _options(args: argparse.Namespace, config: Dict[str, Any]) -> RunOptions:
    decomposition = config['decomposition']
    return RunOptions(
        prune=decomposition['prune'] and not args.no_prune,
        allow_extension=decomposition['allow_extension'] or args.allow_extension,
        check=config['engine']['check_invariants'] or args.check_invariants,
        verify=args.verify,
        stepwise=getattr(args, 'stepwise', False),
        quasipower=getattr(args, 'quasipower', None),
        cross_check=decomposition['cross_check_v1'] or getattr(args, 'v1', False),
        max_quasipower_exponent=decomposition['max_quasipower_exponent'],
    )


def _quasipower_arg(value: str) -> str:
    if value != 'auto' and not value.isdigit():
        raise argparse.ArgumentTypeError(f"expected a power of the characteristic or 'auto', got {value!r}")
    return value


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument('problem', help='problem file (.bid)')
    output = common.add_mutually_exclusive_group()
    output.add_argument('--json', dest='output_format', action='store_const', const='json', help='JSON report')
    output.add_argument('--pretty', dest='output_format', action='store_const', const='pretty', help='text report')
    common.add_argument('--verify', action='store_true', help='recompute the intersection of the result')
    common.add_argument('--no-prune', action='store_true', help='keep redundant components')
    common.add_argument('--allow-extension', action='store_true', help='enlarge the field when roots are missing')
    common.add_argument('--order', choices=['degrevlex'], default=None, help='term order of reported bases')
    common.add_argument('--check-invariants', action='store_true', help='assert intermediate identities')
    common.add_argument('--config', help='configuration file')
    common.add_argument('--log-level', choices=LOG_LEVELS, help='overrides logging.level')
    common.add_argument('--output-dir', help='write the report into this directory')
    common.add_argument('--metrics-file', help='write Prometheus metrics to this file')

    parser = argparse.ArgumentParser(prog='binomdec', description='Primary decomposition of binomial ideals')
    parser.add_argument('--version', action='version', version=f'%(prog)s {__version__}')
    subparsers = parser.add_subparsers(dest='subcommand', required=True)
    subparsers.add_parser('cellular', parents=[common], help='cellular decomposition')
    subparsers.add_parser('memb', parents=[common], help='Memb of a cellular ideal and its witnesses')
    subparsers.add_parser('hull', parents=[common], help='hull of a cellular ideal')
    unmixed = subparsers.add_parser('unmixed', parents=[common], help='unmixed decomposition of a cellular ideal')
    unmixed.add_argument('--stepwise', action='store_true', help='iterate the one-step splitting until unmixed')
    primary = subparsers.add_parser('primary', parents=[common], help='primary decomposition')
    primary.add_argument('--quasipower', type=_quasipower_arg, metavar='Q|auto', help='use quasipower components')
    primary.add_argument('--v1', action='store_true', help='cross-check both component formulas')
    subparsers.add_parser('assoc', parents=[common], help='associated primes')
    subparsers.add_parser('isprimary', parents=[common], help='primary over the algebraic closure')
    verify = subparsers.add_parser('verify', parents=[common], help='decompose, verify and check expectations')
    verify.add_argument('--v1', action='store_true', help='cross-check both component formulas')
    return parser


def _apply_overrides(config: Dict[str, Any], args: argparse.Namespace) -> None:
    if args.output_format:
        config['output']['format'] = args.output_format
    if args.output_dir:
        config['output']['destination'] = 'file'
        config['output']['directory'] = args.output_dir
    if args.metrics_file:
        config['monitoring']['textfile'] = args.metrics_file
    if args.order:
        config['engine']['order'] = args.order


def run(argv: Optional[Sequence[str]] = None, stream=None) -> int:
    """Run the CLI and return the exit code"""
    args = build_parser().parse_args(argv)
    try:
        config = load_config(args.config)
    except (OSError, ValueError) as e:
        print(f"binomdec: configuration error: {e}", file=sys.stderr)
        return EXIT_INPUT_ERROR
    _apply_overrides(config, args)
    setup_logging(config, args.log_level)

    monitoring = BinomdecMonitoring()
    start = time.time()
    status = 'success'
    exit_code = EXIT_OK
    try:
        problem = load_problem(args.problem)
        monitoring.set_info(__version__, problem.field.describe())
        logger.info(f"Running {args.subcommand} on {args.problem} over {problem.field}")
        outcome = RUNNERS[args.subcommand](problem, _options(args, config))
        outcome.report.term_order = config['engine']['order']
        expectation = problem.expectation(args.subcommand)
        if expectation is not None and args.subcommand != 'verify':
            outcome.report.expectations_met = expectation_met(expectation, outcome, problem)
        Reporter(config, stream).report(outcome.report)

        for component in outcome.report.components:
            monitoring.record_components(component.provenance.kind.value, 1)
        degrees = [ideal.ring.field.k for ideal in outcome.ideals] or [problem.field.k]
        monitoring.record_field_extension(max(degrees))
        if outcome.report.verified is False or (
            args.subcommand == 'verify' and outcome.report.expectations_met is False
        ):
            status = 'verification_failed'
            exit_code = EXIT_VERIFICATION_FAILED
            logger.error(f"Verification failed for {args.problem}")
    except (BinomdecError, OSError) as e:
        status = 'error'
        exit_code = EXIT_INPUT_ERROR
        monitoring.record_error(type(e).__name__, args.subcommand)
        logger.error(f"binomdec {args.subcommand} failed: {e}")
        print(f"binomdec: {e}", file=sys.stderr)
    finally:
        monitoring.record_engine_stats(ENGINE_STATS)
        monitoring.record_run(args.subcommand, time.time() - start, status)
        textfile = config['monitoring'].get('textfile')
        if config['monitoring'].get('enabled') and textfile:
            monitoring.write_textfile(textfile)
    return exit_code


def main():
    """Main entry point for binomdec"""
    sys.exit(run())


if __name__ == "__main__":
    main()
