#!/usr/bin/env python3
"""
Command-line interface for Krylov least squares fitting.
"""

import argparse
import csv
import logging
import sys
from pathlib import Path

import numpy as np

from . import config as defaults
from .baselines import BASIS_KINDS, build_basis_matrix, direct_fit_eval, displacement_residual
from .errors import InputError, KrylovLSQError
from .experiments import (NAMED_EXPERIMENTS, REPORT_FORMATS, ExperimentConfig, build_nodes, build_poles,
                          emit_report, evaluate_model, fit_model, get_experiment, run_experiment,
                          sample_grid, sup_errors)
from .nodes import NodeSet, tapered_real_poles
from .targets import TARGETS, get_target

logger = logging.getLogger(__name__)

FIT_COMMANDS = {
    'fit-poly': 'poly',
    'fit-sobolev-poly': 'sobolev-poly',
    'fit-rational': 'rational',
    'fit-sobolev-rational': 'sobolev-rational',
}


def _add_common(parser: argparse.ArgumentParser):
    parser.add_argument('--n', type=int, default=10, help='Degree (pole count for rational fits)')
    parser.add_argument('--reorth', type=int, choices=(1, 2), default=defaults.DEFAULT_REORTH_PASSES,
                        help='Gram-Schmidt passes per Arnoldi step (default: 2)')
    parser.add_argument('--seed', type=int, default=0, help='Seed for random derivative orders')
    parser.add_argument('--samples', type=int, default=defaults.DEFAULT_SAMPLES, metavar='M',
                        help='Number of uniform sample points (default: 1000)')
    parser.add_argument('--out', type=Path, help='Output file path (default: print to stdout)')
    parser.add_argument('--nodes', default='chebyshev',
                        help='chebyshev | legendre | clustered | file:PATH (default: chebyshev)')
    parser.add_argument('--node-count', type=int, help='Number of generated nodes')
    parser.add_argument('--interval', default='[-1,1]', help="Interval such as '[-1,1]' or '(0,1]'")
    parser.add_argument('--poles', help='tapered | conjugate | file:PATH')
    parser.add_argument('--target', default='runge', choices=sorted(TARGETS), help='Analytic target function')
    parser.add_argument('--max-order', type=int, default=0,
                        help='Largest random derivative order per node (Sobolev fits)')


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog='krylov_lsq',
        description='Weighted (Sobolev) polynomial and rational least squares by (rational) Arnoldi',
        formatter_class=argparse.RawDescriptionHelpFormatter,
        epilog="""
Examples:
  # Sobolev polynomial fit of the Runge function on Chebyshev nodes
  python -m krylov_lsq fit-sobolev-poly --n 60 --max-order 2

  # Rational fit of sqrt(t) with tapered poles, plot data to a file
  python -m krylov_lsq fit-rational --n 30 --nodes clustered --interval "(0,1]" --poles tapered --target sqrt --out sqrt.csv

  # Reproduce an error table
  python -m krylov_lsq experiment runge --out runge.csv
        """
    )
    parser.add_argument('-v', '--verbose', action='count', default=0, help='-v for info, -vv for debug logging')
    sub = parser.add_subparsers(dest='command', required=True)

    for name, kind in FIT_COMMANDS.items():
        fit = sub.add_parser(name, help=f'Fit by the {kind} Arnoldi path and report sup errors')
        _add_common(fit)

    baseline = sub.add_parser('baseline', help='Solve directly in an explicit basis')
    _add_common(baseline)
    baseline.add_argument('--basis', required=True, choices=BASIS_KINDS, help='Explicit basis kind')
    baseline.add_argument('--no-warnings', action='store_true', help='Suppress warning messages')

    experiment = sub.add_parser('experiment', help='Run a named experiment or a JSON config')
    experiment.add_argument('name', help=f"One of {', '.join(NAMED_EXPERIMENTS)} or a path to a .json config")
    experiment.add_argument('--reorth', type=int, choices=(1, 2))
    experiment.add_argument('--seed', type=int)
    experiment.add_argument('--samples', type=int, metavar='M')
    experiment.add_argument('--n', type=int, help='Run a single degree (shorthand for --degrees N)')
    experiment.add_argument('--degrees', type=int, nargs='+', metavar='N')
    experiment.add_argument('--nodes', help='chebyshev | legendre | clustered | file:PATH')
    experiment.add_argument('--poles', help='tapered | conjugate | file:PATH')
    experiment.add_argument('--workers', type=int)
    experiment.add_argument('--out', type=Path)
    experiment.add_argument('--format', choices=REPORT_FORMATS, default='csv')
    experiment.add_argument('--no-runtime', action='store_true', help='Write runtime 0 for reproducible reports')

    displacement = sub.add_parser('displacement-check', help='Displacement rank of Vandermonde or Cauchy matrices')
    displacement.add_argument('--kind', choices=('poly', 'rational'), default='poly')
    displacement.add_argument('--m', type=int, default=5, help='Number of random nodes')
    displacement.add_argument('--n', type=int, default=3, help='Degree or number of poles')
    displacement.add_argument('--seed', type=int, default=0)
    return parser


def _config_from_args(args, kind: str, baseline_kind=None) -> ExperimentConfig:
    return ExperimentConfig(
        kind=kind, target=args.target, nodes=args.nodes, node_count=args.node_count, interval=args.interval,
        poles=args.poles, degrees=[args.n], samples=args.samples, reorth_passes=args.reorth, seed=args.seed,
        max_order=args.max_order, baseline_kind=baseline_kind, name=args.command,
    )


def _write_plot_data(path: Path, x: np.ndarray, values: np.ndarray, order: int, target, seed: int):
    """Seed line, then x, order, fit value and target value per sample and derivative order."""
    stacked = values.reshape(x.shape[0], order + 1)
    with path.open('w', newline='', encoding='utf-8') as handle:
        writer = csv.writer(handle, lineterminator='\n')
        handle.write(f"# seed={seed}\n")
        writer.writerow(['x', 'order', 'value_re', 'value_im', 'target'])
        for i in range(order + 1):
            reference = target(x, i)
            # stacked columns run from the highest order down to 0
            column = stacked[:, order - i]
            for xj, vj, tj in zip(x, column, reference):
                writer.writerow([f"{xj:.17g}", i, f"{vj.real:.17g}", f"{vj.imag:.17g}", f"{float(tj):.17g}"])


def _print_errors(errors):
    for i, err in enumerate(errors):
        print(f"  order {i}: sup error {err:.3e}")


def _run_fit(args) -> int:
    cfg = _config_from_args(args, FIT_COMMANDS[args.command])
    nodes, f = build_nodes(cfg, args.n, np.random.default_rng([args.seed, args.n]))
    model, basis = fit_model(cfg, nodes, f, args.n)
    order = cfg.max_order if cfg.sobolev else 0
    x = sample_grid(cfg.interval, cfg.samples)
    values = evaluate_model(model, x, order)

    print(f"{cfg.kind} fit: degree {model.degree}, {nodes.size} nodes, {nodes.dim} data entries")
    print(f"  ||Q^H Q - I||_max = {basis.orthogonality_error():.3e}")
    _print_errors(sup_errors(values, x, order, get_target(cfg.target)))
    if args.out:
        _write_plot_data(args.out, x, values, order, get_target(cfg.target), args.seed)
        print(f"Plot data written to: {args.out}")
    return 0


def _run_baseline(args) -> int:
    cfg = _config_from_args(args, 'direct-baseline', args.basis)
    nodes, f = build_nodes(cfg, args.n, np.random.default_rng([args.seed, args.n]))
    poles = build_poles(cfg.poles, args.n) if cfg.needs_poles else None
    order = cfg.max_order if cfg.sobolev else 0
    x = sample_grid(cfg.interval, cfg.samples)
    result = direct_fit_eval(args.basis, nodes, poles, f, poles.n if poles is not None else args.n, x, order)

    if result.warnings and not args.no_warnings:
        print("=" * 70)
        print("BASELINE WARNINGS")
        print("=" * 70)
        for warning in result.warnings:
            print(str(warning))
        print("")
    print(f"direct {args.basis} solve: {result.coefficients.shape[0]} coefficients")
    _print_errors(sup_errors(result.values, x, order, get_target(cfg.target)))
    if args.out:
        _write_plot_data(args.out, x, result.values, order, get_target(cfg.target), args.seed)
        print(f"Plot data written to: {args.out}")
    return 0


def _degrees_from_args(args):
    if args.n is not None and args.degrees:
        raise InputError("give either --n or --degrees, not both")
    return [args.n] if args.n is not None else args.degrees


def _run_experiment(args) -> int:
    if args.name.endswith('.json'):
        cfg = ExperimentConfig.from_json(args.name)
    else:
        cfg = get_experiment(args.name)
    cfg = cfg.with_overrides(reorth_passes=args.reorth, seed=args.seed, samples=args.samples,
                             degrees=_degrees_from_args(args), workers=args.workers,
                             nodes=args.nodes, poles=args.poles,
                             output=str(args.out) if args.out else None)
    if args.no_runtime:
        cfg = cfg.with_overrides(record_runtime=False)

    report = run_experiment(cfg)
    text = emit_report(report, args.format, cfg.output)
    if cfg.output:
        print(f"Report written to: {cfg.output}")
    else:
        print(text, end='')
    flagged = [row for row in report.rows if row.flag != 'ok']
    if flagged:
        print(f"\n{len(flagged)} row(s) flagged: " + ', '.join(f"n={r.n} ({r.flag})" for r in flagged),
              file=sys.stderr)
    return 0


def _run_displacement(args) -> int:
    rng = np.random.default_rng(args.seed)
    z = rng.standard_normal(args.m) + 1j * rng.standard_normal(args.m)
    nodes = NodeSet(z, np.ones(args.m))
    if args.kind == 'poly':
        basis = build_basis_matrix('vandermonde', nodes, n=args.n)
        residual, rank = displacement_residual('poly', np.diag(z), basis.matrix)
    else:
        poles = tapered_real_poles(args.n)
        basis = build_basis_matrix('cauchy_with_ones', nodes, poles)
        residual, rank = displacement_residual('rational', np.diag(z), basis.matrix, poles)
    print(f"{args.kind} displacement: {args.m} x {basis.matrix.shape[1]} matrix, "
          f"residual norm {np.linalg.norm(residual):.3e}, rank {rank}")
    return 0


_HANDLERS = {
    'baseline': _run_baseline,
    'experiment': _run_experiment,
    'displacement-check': _run_displacement,
}


def main(argv=None) -> int:
    """Main CLI entry point."""
    parser = build_parser()
    args = parser.parse_args(argv)

    level = logging.WARNING if args.verbose == 0 else logging.INFO if args.verbose == 1 else logging.DEBUG
    logging.basicConfig(level=level, stream=sys.stderr, format='%(levelname)s %(name)s: %(message)s')

    logger.debug("running %s", args.command)
    handler = _HANDLERS.get(args.command, _run_fit)
    try:
        return handler(args)
    except KrylovLSQError as e:
        print(f"Error: {e}", file=sys.stderr)
        return 1
    except OSError as e:
        print(f"Error writing output file: {e}", file=sys.stderr)
        return 1


if __name__ == '__main__':
    sys.exit(main())
