"""
Experiment orchestration: build nodes and poles for a degree ladder, fit,
sample the fit and report sup-norm errors per derivative order.
"""

import dataclasses
import json
import logging
import math
import re
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path
from typing import Callable, Dict, List, Optional, Tuple, Union

import numpy as np

from . import config as defaults
from .baselines import BASIS_KINDS, direct_fit_eval
from .datasets import load_dataset, load_poles
from .errors import Breakdown, FitWarning, InputError, KrylovLSQError, PoleNodeCollision
from .krylov import derivative_table
from .nodes import (NodeSet, PoleSchedule, chebyshev_first_kind, clustered_nodes, conjugate_pair_poles,
                    legendre_gauss, tapered_real_poles)
from .poly_arnoldi import eval_poly, fit_poly
from .rational_arnoldi import eval_rational, fit_rational
from .sobolev_poly import eval_sobolev_poly, fit_sobolev_poly
from .sobolev_rational import eval_sobolev_rational, fit_sobolev_rational
from .targets import TARGETS, get_target

logger = logging.getLogger(__name__)

PROBLEM_KINDS = ('poly', 'sobolev-poly', 'rational', 'sobolev-rational', 'direct-baseline')
NODE_SOURCES = ('chebyshev', 'legendre', 'clustered')
POLE_SOURCES = ('tapered', 'conjugate')
REPORT_FORMATS = ('csv', 'tsv', 'markdown')
REPORT_ORDERS = 3
DEFAULT_CLUSTERED_COUNT = 2000

_INTERVAL = re.compile(r'^\s*([\[(])\s*([-+0-9.eE]+)\s*,\s*([-+0-9.eE]+)\s*([\])])\s*$')


@dataclass
class ExperimentConfig:
    """
    One experiment: a problem kind run over a list of degrees.

    Attributes:
        kind: One of PROBLEM_KINDS.
        target: Name of the analytic target in targets.TARGETS.
        nodes: 'chebyshev', 'legendre', 'clustered' or 'file:PATH'.
        node_count: Quadrature rules default to 2n+1 nodes, clustered to 2000.
        interval: Sample and node interval, e.g. '[-1,1]' or '(0,1]'.
        poles: 'tapered', 'conjugate' or 'file:PATH'; rational kinds only.
            For 'conjugate' the degree n counts pairs, so 2n poles are used.
        degrees: Degree ladder.
        samples: Number M of uniform sample points.
        max_order: Sobolev kinds draw s_j uniformly from 0..max_order.
        baseline_kind: Explicit basis for 'direct-baseline'.
        workers: Rows evaluated in parallel; 1 runs them in order.
        record_runtime: False writes runtime 0 so reports are reproducible byte for byte.
    """

    kind: str = 'poly'
    target: str = 'runge'
    nodes: str = 'chebyshev'
    node_count: Optional[int] = None
    interval: str = '[-1,1]'
    poles: Optional[str] = None
    degrees: List[int] = field(default_factory=lambda: [30, 60, 120, 240])
    samples: int = defaults.DEFAULT_SAMPLES
    reorth_passes: int = defaults.DEFAULT_REORTH_PASSES
    seed: int = 0
    max_order: int = 0
    baseline_kind: Optional[str] = None
    output: Optional[str] = None
    workers: int = 1
    record_runtime: bool = True
    name: str = 'custom'

    def __post_init__(self):
        self.degrees = [int(n) for n in self.degrees]
        self.validate()

    def validate(self):
        if self.kind not in PROBLEM_KINDS:
            raise InputError(f"unknown problem kind {self.kind!r}; expected one of {', '.join(PROBLEM_KINDS)}")
        if self.target not in TARGETS:
            raise InputError(f"unknown target {self.target!r}; expected one of {', '.join(sorted(TARGETS))}")
        if not self.degrees:
            raise InputError("degree list must not be empty")
        if any(n < 0 for n in self.degrees):
            raise InputError("degrees must be non-negative")
        if self.samples < 1:
            raise InputError(f"samples must be >= 1, got {self.samples}")
        if self.reorth_passes not in (1, 2):
            raise InputError(f"reorth_passes must be 1 or 2, got {self.reorth_passes}")
        if not 0 <= self.max_order < REPORT_ORDERS:
            raise InputError(f"max_order must be between 0 and {REPORT_ORDERS - 1}, got {self.max_order}")
        if self.max_order > TARGETS[self.target][1]:
            raise InputError(f"target {self.target!r} has no derivative of order {self.max_order}")
        if self.workers < 1:
            raise InputError(f"workers must be >= 1, got {self.workers}")
        if not (self.nodes in NODE_SOURCES or self.nodes.startswith('file:')):
            raise InputError(f"unknown node source {self.nodes!r}")
        parse_interval(self.interval)

        if self.kind in ('rational', 'sobolev-rational') and self.poles is None:
            raise InputError(f"problem kind {self.kind!r} needs a pole source")
        if self.poles is not None and not (self.poles in POLE_SOURCES or self.poles.startswith('file:')):
            raise InputError(f"unknown pole source {self.poles!r}")
        if self.kind in ('poly', 'rational') and self.max_order:
            raise InputError(f"problem kind {self.kind!r} takes no derivative data; max_order must be 0")
        if self.kind == 'direct-baseline':
            if self.baseline_kind not in BASIS_KINDS:
                raise InputError(f"direct-baseline needs baseline_kind in {', '.join(BASIS_KINDS)}")
            if self.baseline_kind in ('vandermonde', 'cauchy_with_ones') and self.max_order:
                raise InputError(f"basis {self.baseline_kind!r} takes no derivative data; max_order must be 0")
            if 'cauchy' in self.baseline_kind and self.poles is None:
                raise InputError(f"basis {self.baseline_kind!r} needs a pole source")

    @property
    def sobolev(self) -> bool:
        return self.kind in ('sobolev-poly', 'sobolev-rational') or (
            self.kind == 'direct-baseline' and self.baseline_kind not in ('vandermonde', 'cauchy_with_ones'))

    @property
    def needs_poles(self) -> bool:
        return self.kind in ('rational', 'sobolev-rational') or (
            self.kind == 'direct-baseline' and 'cauchy' in self.baseline_kind)

    def with_overrides(self, **overrides) -> 'ExperimentConfig':
        """Return a copy with every non-None override applied."""
        changes = {k: v for k, v in overrides.items() if v is not None}
        return dataclasses.replace(self, **changes)

    @classmethod
    def from_dict(cls, data: Dict) -> 'ExperimentConfig':
        known = {f.name for f in dataclasses.fields(cls)}
        unknown = sorted(set(data) - known)
        if unknown:
            raise InputError(f"unknown experiment config field(s): {', '.join(unknown)}")
        return cls(**data)

    @classmethod
    def from_json(cls, path: Union[str, Path]) -> 'ExperimentConfig':
        path = Path(path)
        try:
            data = json.loads(path.read_text(encoding='utf-8'))
        except (OSError, json.JSONDecodeError) as exc:
            raise InputError(f"cannot read experiment config {path}: {exc}") from exc
        if not isinstance(data, dict):
            raise InputError(f"experiment config {path} must hold a JSON object")
        data.setdefault('name', path.stem)
        return cls.from_dict(data)

    def to_dict(self) -> Dict:
        return dataclasses.asdict(self)


@dataclass
class ErrorRow:
    n: int
    errors: Tuple[float, ...]
    runtime_ms: float
    flag: str = 'ok'
    warnings: List[FitWarning] = field(default_factory=list)


@dataclass
class ErrorReport:
    name: str
    seed: int
    rows: List[ErrorRow] = field(default_factory=list)

    def row(self, n: int) -> ErrorRow:
        for row in self.rows:
            if row.n == n:
                return row
        raise KeyError(n)

    def error(self, n: int, order: int = 0) -> float:
        errors = self.row(n).errors
        return errors[order] if order < len(errors) else math.nan


def _named(**kwargs) -> Callable[[], ExperimentConfig]:
    return lambda: ExperimentConfig(**kwargs)


NAMED_EXPERIMENTS: Dict[str, Callable[[], ExperimentConfig]] = {
    'runge': _named(name='runge', kind='sobolev-poly', target='runge', nodes='chebyshev', max_order=2,
                    degrees=[30, 60, 120, 240]),
    'runge-legendre': _named(name='runge-legendre', kind='sobolev-poly', target='runge', nodes='legendre',
                             max_order=2, degrees=[30, 60, 120, 240]),
    'runge-direct': _named(name='runge-direct', kind='direct-baseline', baseline_kind='confluent_vandermonde',
                           target='runge', nodes='chebyshev', max_order=2, degrees=[30, 60, 120, 240]),
    'abs': _named(name='abs', kind='rational', target='abs', nodes='clustered', interval='[-1,1]',
                  poles='conjugate', degrees=[15, 30, 60, 120]),
    'abs-direct': _named(name='abs-direct', kind='direct-baseline', baseline_kind='cauchy_with_ones',
                         target='abs', nodes='clustered', interval='[-1,1]', poles='conjugate',
                         degrees=[15, 30, 60, 120]),
    'sqrt': _named(name='sqrt', kind='rational', target='sqrt', nodes='clustered', interval='(0,1]',
                   poles='tapered', degrees=[15, 30, 60, 120]),
    'sqrt-scaled': _named(name='sqrt-scaled', kind='direct-baseline', baseline_kind='scaled_cauchy',
                          target='sqrt', nodes='clustered', interval='(0,1]', poles='tapered',
                          degrees=[15, 30, 60, 120]),
    'tsqrt': _named(name='tsqrt', kind='sobolev-rational', target='tsqrt', nodes='clustered', interval='(0,1]',
                    poles='tapered', max_order=1, degrees=[10, 20, 40, 80]),
}


def get_experiment(name: str) -> ExperimentConfig:
    try:
        return NAMED_EXPERIMENTS[name]()
    except KeyError:
        raise InputError(f"unknown experiment {name!r}; expected one of {', '.join(NAMED_EXPERIMENTS)} "
                         f"or a .json config") from None


def parse_interval(text: str) -> Tuple[float, float, bool, bool]:
    """
    Parse '[a,b]', '(a,b]', '[a,b)' or '(a,b)'.

    Returns:
        Tuple of (a, b, left_open, right_open)
    """
    match = _INTERVAL.match(text)
    if not match:
        raise InputError(f"cannot parse interval {text!r}; expected e.g. '[-1,1]' or '(0,1]'")
    left, a, b, right = match.groups()
    try:
        a, b = float(a), float(b)
    except ValueError:
        raise InputError(f"cannot parse interval {text!r}") from None
    if not b > a:
        raise InputError(f"interval must satisfy a < b, got {text!r}")
    return a, b, left == '(', right == ')'


def sample_grid(interval: str, count: int) -> np.ndarray:
    """Uniform samples over ``interval``; open endpoints are left out."""
    a, b, left_open, right_open = parse_interval(interval)
    extra = int(left_open) + int(right_open)
    grid = np.linspace(a, b, count + extra)
    if left_open:
        grid = grid[1:]
    if right_open:
        grid = grid[:-1]
    return grid


def build_nodes(cfg: ExperimentConfig, n: int, rng: np.random.Generator) -> Tuple[NodeSet, np.ndarray]:
    """Node set and data vector for one row of the experiment."""
    if cfg.nodes.startswith('file:'):
        return load_dataset(cfg.nodes[len('file:'):])

    a, b, _, _ = parse_interval(cfg.interval)
    if cfg.nodes == 'clustered':
        if (a, b) not in ((0.0, 1.0), (-1.0, 1.0)):
            raise InputError(f"clustered nodes live on (0,1] or [-1,1], got {cfg.interval!r}")
        shape = '(0,1]' if a == 0.0 else '[-1,1]'
        nodes = clustered_nodes(cfg.node_count or DEFAULT_CLUSTERED_COUNT, shape)
    else:
        sigma = cfg.node_count or 2 * n + 1
        rule = chebyshev_first_kind if cfg.nodes == 'chebyshev' else legendre_gauss
        nodes = rule(sigma, (a, b))

    if cfg.max_order:
        nodes = nodes.with_orders(rng.integers(0, cfg.max_order + 1, size=nodes.size))
    return nodes, nodes.stack_values(get_target(cfg.target))


def build_poles(source: str, n: int) -> PoleSchedule:
    """Pole schedule for degree n; 'conjugate' uses n pairs."""
    if source == 'tapered':
        return tapered_real_poles(n)
    if source == 'conjugate':
        return conjugate_pair_poles(2 * n)
    if source.startswith('file:'):
        poles = load_poles(source[len('file:'):])
        if poles.shape[0] < n:
            raise InputError(f"pole file lists {poles.shape[0]} poles but degree {n} needs {n}")
        return PoleSchedule.from_poles(poles[:n])
    raise InputError(f"unknown pole source {source!r}")


_FITTERS = {
    'poly': fit_poly,
    'sobolev-poly': fit_sobolev_poly,
    'rational': fit_rational,
    'sobolev-rational': fit_sobolev_rational,
}


def fit_model(cfg: ExperimentConfig, nodes: NodeSet, f: np.ndarray, n: int):
    """
    Run the Arnoldi path of ``cfg.kind`` at degree n.

    Returns:
        Tuple of (model, basis)
    """
    if cfg.kind not in _FITTERS:
        raise InputError(f"problem kind {cfg.kind!r} has no Arnoldi path")
    degree = build_poles(cfg.poles, n) if cfg.needs_poles else n
    return _FITTERS[cfg.kind](nodes, f, degree, cfg.reorth_passes)


def evaluate_model(model, x: np.ndarray, order: int = 0) -> np.ndarray:
    """Stacked values of the fit (derivatives up to ``order`` for Sobolev models)."""
    if model.kind == 'poly':
        return eval_poly(model, x)
    if model.kind == 'rational':
        return eval_rational(model, x)
    if model.kind == 'sobolev-poly':
        return eval_sobolev_poly(model, x, order)
    return eval_sobolev_rational(model, x, order)


def _fit_and_sample(cfg: ExperimentConfig, nodes: NodeSet, f: np.ndarray, n: int,
                    x: np.ndarray) -> Tuple[np.ndarray, List[FitWarning]]:
    order = cfg.max_order if cfg.sobolev else 0
    if cfg.kind != 'direct-baseline':
        model, _ = fit_model(cfg, nodes, f, n)
        return evaluate_model(model, x, order), []

    poles = build_poles(cfg.poles, n) if cfg.needs_poles else None
    direct = direct_fit_eval(cfg.baseline_kind, nodes, poles, f, poles.n if poles is not None else n, x, order)
    return direct.values, direct.warnings


def sup_errors(values: np.ndarray, x: np.ndarray, order: int, target) -> Tuple[float, ...]:
    """Max-norm error of each derivative order 0..order over the samples x."""
    table = derivative_table(values, np.full(x.shape[0], order))
    with np.errstate(invalid='ignore'):
        return tuple(float(np.max(np.abs(table[i] - target(x, i)))) for i in range(order + 1))


def _run_row(cfg: ExperimentConfig, n: int) -> ErrorRow:
    rng = np.random.default_rng([cfg.seed, n])
    target = get_target(cfg.target)
    order = cfg.max_order if cfg.sobolev else 0
    x = sample_grid(cfg.interval, cfg.samples)
    missing = tuple(math.nan for _ in range(order + 1))

    start = time.perf_counter()
    try:
        nodes, f = build_nodes(cfg, n, rng)
        values, warnings = _fit_and_sample(cfg, nodes, f, n, x)
    except Breakdown as exc:
        logger.warning("%s n=%d: %s", cfg.name, n, exc)
        return ErrorRow(n, missing, 0.0, 'breakdown', [FitWarning(str(exc), 'BREAKDOWN', n)])
    except PoleNodeCollision as exc:
        logger.warning("%s n=%d: %s", cfg.name, n, exc)
        return ErrorRow(n, missing, 0.0, 'pole_collision', [FitWarning(str(exc), 'POLE_COLLISION', n)])
    except KrylovLSQError as exc:
        logger.warning("%s n=%d failed: %s", cfg.name, n, exc)
        return ErrorRow(n, missing, 0.0, 'error', [FitWarning(str(exc), 'ERROR', n)])
    runtime_ms = (time.perf_counter() - start) * 1000.0 if cfg.record_runtime else 0.0

    errors = sup_errors(values, x, order, target)
    flag = 'rank_deficient' if any(w.warning_type == 'RANK_DEFICIENT' for w in warnings) else 'ok'
    for w in warnings:
        w.n = n
    logger.info("%s n=%d err0=%.3e flag=%s", cfg.name, n, errors[0], flag)
    return ErrorRow(n, errors, runtime_ms, flag, warnings)


def run_experiment(cfg: ExperimentConfig) -> ErrorReport:
    """
    Run every degree of ``cfg``.

    A failing row is flagged and the run continues. Rows may be computed in
    a thread pool but the report is always ordered by n.
    """
    cfg.validate()
    degrees = sorted(set(cfg.degrees))
    logger.info("experiment %s: kind=%s degrees=%s seed=%d", cfg.name, cfg.kind, degrees, cfg.seed)
    if cfg.workers > 1:
        with ThreadPoolExecutor(max_workers=cfg.workers) as pool:
            rows = list(pool.map(lambda n: _run_row(cfg, n), degrees))
    else:
        rows = [_run_row(cfg, n) for n in degrees]
    return ErrorReport(cfg.name, cfg.seed, sorted(rows, key=lambda r: r.n))


def _cell(value: float, digits: int, missing: str) -> str:
    if value is None or math.isnan(value):
        return missing
    return f"{value:.{digits}g}"


def render_report(report: ErrorReport, fmt: str = 'csv') -> str:
    """Render ``report`` as csv, tsv or a markdown table."""
    if fmt not in REPORT_FORMATS:
        raise InputError(f"unknown report format {fmt!r}; expected one of {', '.join(REPORT_FORMATS)}")
    header = ['n'] + [f'err{i}' for i in range(REPORT_ORDERS)] + ['runtime_ms', 'flag']

    def cells(row: ErrorRow, digits: int, missing: str) -> List[str]:
        errors = list(row.errors) + [math.nan] * (REPORT_ORDERS - len(row.errors))
        return ([str(row.n)] + [_cell(e, digits, missing) for e in errors]
                + [_cell(row.runtime_ms, digits, missing), row.flag])

    if fmt == 'markdown':
        lines = [f"Seed: {report.seed}", '',
                 '| ' + ' | '.join(header) + ' |',
                 '|' + '|'.join('---' for _ in header) + '|']
        lines += ['| ' + ' | '.join(cells(row, defaults.MARKDOWN_DIGITS, '-')) + ' |' for row in report.rows]
    else:
        sep = ',' if fmt == 'csv' else '\t'
        lines = [f"# seed={report.seed}", sep.join(header)]
        lines += [sep.join(cells(row, defaults.CSV_DIGITS, '')) for row in report.rows]
    return '\n'.join(lines) + '\n'


def emit_report(report: ErrorReport, fmt: str = 'csv', path: Optional[Union[str, Path]] = None) -> str:
    """Render ``report`` and write it to ``path`` when given."""
    text = render_report(report, fmt)
    if path is not None:
        Path(path).write_text(text, encoding='utf-8')
        logger.info("report written to %s", path)
    return text


def parse_report(text: str) -> List[Dict[str, str]]:
    """Read rows back from a csv, tsv or markdown report."""
    lines = [line for line in text.splitlines() if line.strip()]
    if lines and lines[0].startswith('Seed:'):
        table = [line.strip().strip('|').split('|') for line in lines[1:]]
        table = [[c.strip() for c in row] for row in table]
        header, body = table[0], table[2:]
    else:
        lines = [line for line in lines if not line.startswith('#')]
        sep = '\t' if '\t' in lines[0] else ','
        header, body = lines[0].split(sep), [line.split(sep) for line in lines[1:]]
    return [dict(zip(header, row)) for row in body]

