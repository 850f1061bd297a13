"""
QA Checklist - Krylov least squares fits
Run this after a fit to verify the structure of the computed basis and recurrence.
"""

import numpy as np

from krylov_lsq import config
from krylov_lsq.nodes import NodeSet, chebyshev_first_kind, tapered_real_poles
from krylov_lsq.sobolev_poly import build_jordan, fit_sobolev_poly
from krylov_lsq.sobolev_rational import fit_sobolev_rational
from krylov_lsq.targets import get_target

RELATION_TOL = 1e-10
POLE_TOL = 1e-12


def _recurrence(model):
    """(H, K) for rational models, (H, None) for polynomial ones."""
    if hasattr(model, 'k'):
        return model.h.matrix, model.k.matrix
    return model.hessenberg.matrix, None


def run_qa_checklist(model, basis, nodes: NodeSet = None, warnings: list = None,
                     ortho_tol: float = config.ORTHO_TOL) -> dict:
    """
    Run structural QA checks on a fit.
    Returns dict with check results and overall pass/fail status.
    """
    results = {}
    warnings = warnings or []
    h, k = _recurrence(model)

    # Check 1: orthonormal basis
    ortho = basis.orthogonality_error()
    results['orthonormality'] = {
        'pass': ortho <= ortho_tol,
        'message': f'||Q^H Q - I||_max = {ortho:.2e}',
        'severity': 'OK' if ortho <= ortho_tol else 'CRITICAL'
    }

    # Check 2: unreduced Hessenberg recurrence
    sub = np.abs(np.diagonal(h, offset=-1))
    if k is not None:
        sub = np.maximum(sub, np.abs(np.diagonal(k, offset=-1)))
    zero_steps = np.flatnonzero(sub == 0) + 1
    results['recurrence'] = {
        'pass': zero_steps.size == 0,
        'message': 'Recurrence is unreduced' if zero_steps.size == 0 else f'Vanishing subdiagonal at step(s) {zero_steps.tolist()}',
        'severity': 'CRITICAL' if zero_steps.size else 'OK'
    }

    # Check 3: A Q_n = Q_{n+1} H  or  A Q K = Q H
    if nodes is not None:
        op, _, _ = build_jordan(nodes)
        q = basis.matrix
        if k is None:
            residual = op.matmat(q[:, :-1]) - q @ h
        else:
            residual = op.matmat(q @ k) - q @ h
        coeffs = np.abs(h).max(initial=0.0) if k is None else max(np.abs(h).max(initial=0.0), np.abs(k).max(initial=0.0))
        scale = max(1.0, op.max_abs()) * max(1.0, float(coeffs))
        rel = float(np.abs(residual).max(initial=0.0)) / scale
        results['arnoldi_relation'] = {
            'pass': rel <= RELATION_TOL,
            'message': f'Relative recurrence residual {rel:.2e}',
            'severity': 'OK' if rel <= RELATION_TOL else 'CRITICAL'
        }
    else:
        results['arnoldi_relation'] = {
            'pass': True,
            'message': 'No node set given (N/A)',
            'severity': 'OK'
        }

    # Check 4: pencil subdiagonal ratios recover the finite poles
    if k is not None:
        poles = model.poles.poles
        ratios = model.subdiagonal_ratios()
        finite = np.isfinite(poles)
        err = np.abs(ratios[finite] - poles[finite]) / np.maximum(1.0, np.abs(poles[finite]))
        worst = float(err.max(initial=0.0))
        results['pole_ratios'] = {
            'pass': worst <= POLE_TOL,
            'message': f'Largest relative pole mismatch {worst:.2e}',
            'severity': 'OK' if worst <= POLE_TOL else 'WARNING',
        }
        if worst > POLE_TOL:
            results['pole_ratios']['action_required'] = 'Check that no pole is close to a node'
    else:
        results['pole_ratios'] = {
            'pass': True,
            'message': 'Polynomial fit (N/A)',
            'severity': 'OK'
        }

    # Check 5: warnings recorded during the fit
    serious = [w for w in warnings if getattr(w, 'warning_type', 'GENERAL') in ('RANK_DEFICIENT', 'BREAKDOWN')]
    results['fit_warnings'] = {
        'pass': not serious,
        'message': 'No fit warnings' if not serious else f'{len(serious)} serious warning(s): {serious[0]}',
        'severity': 'WARNING' if serious else 'OK'
    }

    # Overall pass/fail
    critical_fails = [name for name, v in results.items() if v['severity'] == 'CRITICAL' and not v['pass']]
    warnings_count = [name for name, v in results.items() if v['severity'] == 'WARNING' and not v['pass']]

    results['_summary'] = {
        'total_checks': len(results) - 1,  # Exclude summary itself
        'passed': sum(1 for v in results.values() if isinstance(v, dict) and v.get('pass', False)),
        'critical_failures': len(critical_fails),
        'warnings': len(warnings_count),
        'overall_status': 'PASS' if len(critical_fails) == 0 else 'FAIL',
        'ready_for_use': len(critical_fails) == 0 and len(warnings_count) == 0
    }

    return results


def print_qa_report(results: dict):
    """Print formatted QA report."""
    print("=" * 80)
    print("QA CHECKLIST REPORT")
    print("=" * 80)

    for check_name, check_result in results.items():
        if check_name == '_summary':
            continue

        status_symbol = 'PASS' if check_result['pass'] else 'FAIL'
        print(f"\n[{status_symbol}] {check_name.upper().replace('_', ' ')}")
        print(f"    Status: {check_result['severity']}")
        print(f"    {check_result['message']}")

        if 'action_required' in check_result:
            print(f"    ACTION: {check_result['action_required']}")

    summary = results['_summary']
    print("\n" + "=" * 80)
    print("SUMMARY")
    print("=" * 80)
    print(f"Total Checks: {summary['total_checks']}")
    print(f"Passed: {summary['passed']}")
    print(f"Critical Failures: {summary['critical_failures']}")
    print(f"Warnings: {summary['warnings']}")
    print(f"\nOverall Status: {summary['overall_status']}")
    print(f"Ready for use: {'YES' if summary['ready_for_use'] else 'NO (inspect the fit)'}")
    print("=" * 80)


def quick_qa(nodes: NodeSet, target: str, n: int, rational: bool = False):
    """
    Quick QA workflow: fit the target on ``nodes`` and run all checks.
    """
    f = nodes.stack_values(get_target(target))
    if rational:
        model, basis = fit_sobolev_rational(nodes, f, tapered_real_poles(n))
    else:
        model, basis = fit_sobolev_poly(nodes, f, n)
    print(f"Fitted {model.kind} model of degree {model.degree} on {nodes.size} nodes")
    results = run_qa_checklist(model, basis, nodes)
    print_qa_report(results)
    return model, basis, results


if __name__ == '__main__':
    rng = np.random.default_rng(0)
    example = chebyshev_first_kind(121)
    example = example.with_orders(rng.integers(0, 3, size=example.size))

    print("EXAMPLE QA CHECK")
    print("=" * 80)
    quick_qa(example, 'runge', 60)
