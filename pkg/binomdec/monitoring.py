#!/usr/bin/env python3
"""
Run metrics for binomdec

Metrics live on a registry owned by each BinomdecMonitoring instance, so
several runs in one process (tests, library callers) never collide. The CLI
writes them in the Prometheus textfile format when a metrics file is set.
"""

import logging
from typing import Mapping

from prometheus_client import CollectorRegistry, Counter, Gauge, Histogram, Info, write_to_textfile

from .bideal import ENGINE_STATS

logger = logging.getLogger(__name__)


class BinomdecMonitoring:
    """Prometheus metrics for decomposition runs"""

    def __init__(self):
        self.registry = CollectorRegistry()
        self._init_metrics()
        # engine counters are process-wide; only work done after this point is exported
        self._engine_seen = {key: ENGINE_STATS[key] for key in ('groebner_bases', 'spairs_reduced')}

    def _init_metrics(self):
        """Initialize Prometheus metrics"""
        self.runs_total = Counter(
            'binomdec_runs_total',
            'CLI runs by subcommand and outcome',
            labelnames=['subcommand', 'status'],
            registry=self.registry,
        )
        self.run_duration = Histogram(
            'binomdec_run_duration_seconds',
            'Wall time of one run',
            labelnames=['subcommand'],
            registry=self.registry,
        )
        self.components_total = Counter(
            'binomdec_components_total',
            'Components produced, by kind',
            labelnames=['kind'],
            registry=self.registry,
        )
        self.field_degree = Gauge(
            'binomdec_field_degree',
            'Degree over GF(p) of the field the result lives in',
            registry=self.registry,
        )
        self.groebner_bases = Counter(
            'binomdec_groebner_bases_total',
            'Reduced Groebner bases computed',
            registry=self.registry,
        )
        self.spairs_reduced = Counter(
            'binomdec_spairs_reduced_total',
            'S-polynomials reduced by the Buchberger engine',
            registry=self.registry,
        )
        self.errors_total = Counter(
            'binomdec_errors_total',
            'Errors encountered',
            labelnames=['error_type', 'component'],
            registry=self.registry,
        )
        self.info = Info('binomdec', 'binomdec build and input information', registry=self.registry)

    def record_run(self, subcommand: str, duration: float, status: str = 'success'):
        """Record one finished run"""
        try:
            self.runs_total.labels(subcommand=subcommand, status=status).inc()
            self.run_duration.labels(subcommand=subcommand).observe(duration)
            logger.debug(f"Recorded run: {subcommand} ({status}) in {duration:.3f}s")
        except Exception as e:
            logger.error(f"Error recording run: {e}")

    def record_components(self, kind: str, count: int):
        try:
            self.components_total.labels(kind=kind).inc(count)
        except Exception as e:
            logger.error(f"Error recording components: {e}")

    def record_field_extension(self, degree: int):
        try:
            self.field_degree.set(degree)
            if degree > 1:
                logger.debug(f"Recorded field extension of degree {degree}")
        except Exception as e:
            logger.error(f"Error recording field degree: {e}")

    def record_error(self, error_type: str, component: str):
        """Record an error"""
        try:
            self.errors_total.labels(error_type=error_type, component=component).inc()
            logger.warning(f"Recorded error: {error_type} in {component}")
        except Exception as e:
            logger.error(f"Error recording error (meta-error): {e}")

    def record_engine_stats(self, stats: Mapping[str, int]):
        """Export the engine's process-wide counters; only the growth since the last call is added"""
        try:
            for key, counter in (('groebner_bases', self.groebner_bases), ('spairs_reduced', self.spairs_reduced)):
                current = int(stats.get(key, 0))
                delta = current - self._engine_seen[key]
                if delta > 0:
                    counter.inc(delta)
                self._engine_seen[key] = max(current, self._engine_seen[key])
        except Exception as e:
            logger.error(f"Error recording engine stats: {e}")

    def set_info(self, version: str, field: str):
        try:
            self.info.info({'version': version, 'field': field})
        except Exception as e:
            logger.error(f"Error setting info: {e}")

    def write_textfile(self, path: str):
        try:
            write_to_textfile(path, self.registry)
            logger.info(f"Metrics written to {path}")
        except Exception as e:
            logger.error(f"Error writing metrics to {path}: {e}")
