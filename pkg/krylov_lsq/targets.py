"""Analytic target functions with derivatives, keyed by name."""

from typing import Callable, Dict, Tuple

import numpy as np

from .errors import InputError

# derivative(t, i) -> i-th derivative at points t
Derivative = Callable[[np.ndarray, int], np.ndarray]


def _unsupported(name: str, order: int, top: int):
    raise InputError(f"target {name!r} provides derivatives up to order {top}, got {order}")


def runge(t: np.ndarray, order: int = 0) -> np.ndarray:
    """1 / (1 + 25 t^2)."""
    t = np.asarray(t)
    d = 1.0 + 25.0 * t ** 2
    if order == 0:
        return 1.0 / d
    if order == 1:
        return -50.0 * t / d ** 2
    if order == 2:
        return (3750.0 * t ** 2 - 50.0) / d ** 3
    _unsupported('runge', order, 2)


def absolute(t: np.ndarray, order: int = 0) -> np.ndarray:
    """|t| for real t."""
    t = np.asarray(t).real
    if order == 0:
        return np.abs(t)
    if order == 1:
        return np.sign(t)
    _unsupported('abs', order, 1)


def sqrt(t: np.ndarray, order: int = 0) -> np.ndarray:
    t = np.asarray(t)
    if order == 0:
        return np.sqrt(t)
    if order == 1:
        return 0.5 / np.sqrt(t)
    _unsupported('sqrt', order, 1)


def t_sqrt_t(t: np.ndarray, order: int = 0) -> np.ndarray:
    """t sqrt(t) = t^(3/2)."""
    t = np.asarray(t)
    if order == 0:
        return t * np.sqrt(t)
    if order == 1:
        return 1.5 * np.sqrt(t)
    if order == 2:
        return 0.75 / np.sqrt(t)
    _unsupported('tsqrt', order, 2)


def constant(t: np.ndarray, order: int = 0) -> np.ndarray:
    """The constant 1."""
    t = np.asarray(t)
    return np.full(t.shape, 1.0 if order == 0 else 0.0)


TARGETS: Dict[str, Tuple[Derivative, int]] = {
    'runge': (runge, 2),
    'abs': (absolute, 1),
    'sqrt': (sqrt, 1),
    'tsqrt': (t_sqrt_t, 2),
    'constant': (constant, 8),
}


def get_target(name: str) -> Derivative:
    try:
        return TARGETS[name][0]
    except KeyError:
        raise InputError(f"unknown target {name!r}; expected one of {', '.join(sorted(TARGETS))}") from None
