"""Node sets, weights and pole schedules used by the fitting experiments."""

import logging
import math
from dataclasses import dataclass
from typing import Callable, Optional, Sequence, Tuple

import numpy as np
from scipy import special

from . import config
from .errors import ConvergenceError, DuplicateNodes, InputError
from .linalg import as_vector

logger = logging.getLogger(__name__)

# A clustering law maps (j, count) with j = 1..count to points in (0, 1].
ClusteringLaw = Callable[[np.ndarray, int], np.ndarray]

INFINITY = complex('inf')


@dataclass(frozen=True)
class NodeSet:
    """
    Fitting nodes with per-node weight, derivative order and Jordan alphas.

    Attributes:
        z: Complex nodes, pairwise distinct.
        w: Complex weights.
        orders: Derivative order s_j >= 0 per node.
        alphas: Per node the tuple (alpha_1, ..., alpha_{s_j}), all non-zero.
    """

    z: np.ndarray
    w: np.ndarray
    orders: np.ndarray = None
    alphas: Tuple[np.ndarray, ...] = None

    def __post_init__(self):
        z = as_vector(self.z, 'nodes')
        w = as_vector(self.w, 'weights')
        if z.shape != w.shape:
            raise InputError(f"got {z.shape[0]} nodes but {w.shape[0]} weights")
        if z.shape[0] < 1:
            raise InputError("a node set needs at least one node")
        if np.unique(z).shape[0] != z.shape[0]:
            raise DuplicateNodes("nodes must be pairwise distinct")

        orders = np.zeros(z.shape[0], dtype=int) if self.orders is None else np.asarray(self.orders, dtype=int)
        if orders.shape != z.shape:
            raise InputError(f"got {z.shape[0]} nodes but {orders.shape[0]} derivative orders")
        if np.any(orders < 0):
            raise InputError("derivative orders must be non-negative")

        if self.alphas is None:
            alphas = tuple(np.ones(s, dtype=np.complex128) for s in orders)
        else:
            if len(self.alphas) != z.shape[0]:
                raise InputError(f"got {z.shape[0]} nodes but {len(self.alphas)} alpha tuples")
            alphas = tuple(np.asarray(a, dtype=np.complex128).reshape(-1) for a in self.alphas)
            for j, (a, s) in enumerate(zip(alphas, orders)):
                if a.shape[0] != s:
                    raise InputError(f"node {j} has order {s} but {a.shape[0]} alpha values")
                if np.any(a == 0) or not np.all(np.isfinite(a)):
                    raise InputError(f"alpha values of node {j} must be finite and non-zero")

        object.__setattr__(self, 'z', z)
        object.__setattr__(self, 'w', w)
        object.__setattr__(self, 'orders', orders)
        object.__setattr__(self, 'alphas', alphas)

    @property
    def size(self) -> int:
        """Number of nodes sigma."""
        return self.z.shape[0]

    @property
    def dim(self) -> int:
        """Number of data entries m = sigma + sum(s_j)."""
        return int(self.size + self.orders.sum())

    @property
    def max_order(self) -> int:
        return int(self.orders.max())

    def is_plain(self) -> bool:
        """True when no node carries derivative data."""
        return not np.any(self.orders)

    def with_orders(self, orders: Sequence[int], alphas=None) -> 'NodeSet':
        return NodeSet(self.z, self.w, orders, alphas)

    def min_gap(self) -> float:
        """Smallest pairwise distance between nodes."""
        if self.size < 2:
            return math.inf
        diff = np.abs(self.z[:, None] - self.z[None, :])
        np.fill_diagonal(diff, np.inf)
        return float(diff.min())

    def stack_values(self, derivative: Callable[[np.ndarray, int], np.ndarray]) -> np.ndarray:
        """
        Assemble a data vector in block order.

        ``derivative(t, i)`` returns the i-th derivative at points t. Within
        each node the entries run from order s_j down to 0.
        """
        out = np.empty(self.dim, dtype=np.complex128)
        pos = 0
        for zj, s in zip(self.z, self.orders):
            for i in range(s, -1, -1):
                out[pos] = derivative(np.array([zj]), i)[0]
                pos += 1
        return out


@dataclass(frozen=True)
class PoleSchedule:
    """
    Poles xi_k = mu_k / nu_k and shifts phi_k = rho_k / eta_k.

    Infinity is encoded by nu = 0 (poles) or eta = 0 (shifts).
    """

    mu: np.ndarray
    nu: np.ndarray
    rho: np.ndarray
    eta: np.ndarray

    def __post_init__(self):
        arrays = [np.asarray(a, dtype=np.complex128).reshape(-1) for a in (self.mu, self.nu, self.rho, self.eta)]
        n = arrays[0].shape[0]
        if any(a.shape[0] != n for a in arrays):
            raise InputError("mu, nu, rho and eta must have equal length")
        for a in arrays:
            if not np.all(np.isfinite(a)):
                raise InputError("pole and shift ratios must be finite numbers")
        mu, nu, rho, eta = arrays
        if np.any((mu == 0) & (nu == 0)) or np.any((rho == 0) & (eta == 0)):
            raise InputError("0/0 is not a valid pole or shift")
        # xi_k == phi_k  <=>  mu_k eta_k - nu_k rho_k == 0
        if np.any(mu * eta - nu * rho == 0):
            raise InputError("every pole must differ from its shift")
        for name, a in zip(('mu', 'nu', 'rho', 'eta'), arrays):
            object.__setattr__(self, name, a)

    @classmethod
    def from_poles(cls, poles: Sequence[complex], shifts: Optional[Sequence[complex]] = None) -> 'PoleSchedule':
        """
        Build a schedule from pole values (complex('inf') for infinity).

        Shifts default to {inf, xi_1, ..., xi_{n-1}}.
        """
        xi = np.asarray(poles, dtype=np.complex128).reshape(-1)
        if shifts is None:
            phi = np.concatenate([[INFINITY], xi[:-1]]) if xi.size else xi
        else:
            phi = np.asarray(shifts, dtype=np.complex128).reshape(-1)
            if phi.shape != xi.shape:
                raise InputError(f"got {xi.shape[0]} poles but {phi.shape[0]} shifts")
        mu, nu = _ratio(xi)
        rho, eta = _ratio(phi)
        return cls(mu, nu, rho, eta)

    @property
    def n(self) -> int:
        return self.mu.shape[0]

    @property
    def poles(self) -> np.ndarray:
        return _value(self.mu, self.nu)

    @property
    def shifts(self) -> np.ndarray:
        return _value(self.rho, self.eta)

    def finite_poles(self) -> np.ndarray:
        return self.mu[self.nu != 0] / self.nu[self.nu != 0]

    def min_distance_to(self, points: np.ndarray) -> float:
        """Smallest distance between a finite pole and any of ``points``."""
        finite = self.finite_poles()
        if finite.size == 0:
            return math.inf
        return float(np.abs(finite[:, None] - np.asarray(points)[None, :]).min())


def _ratio(values: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
    infinite = ~np.isfinite(values)
    num = np.where(infinite, 1.0, values).astype(np.complex128)
    den = np.where(infinite, 0.0, 1.0).astype(np.complex128)
    return num, den


def _value(num: np.ndarray, den: np.ndarray) -> np.ndarray:
    out = np.full(num.shape, INFINITY, dtype=np.complex128)
    finite = den != 0
    out[finite] = num[finite] / den[finite]
    return out


def _map_interval(t: np.ndarray, lam: np.ndarray, interval: Tuple[float, float]) -> Tuple[np.ndarray, np.ndarray]:
    a, b = interval
    if not b > a:
        raise InputError(f"interval must satisfy a < b, got {interval}")
    half = (b - a) / 2.0
    return a + half * (t + 1.0), half * lam


def chebyshev_first_kind(sigma: int, interval: Tuple[float, float] = (-1.0, 1.0)) -> NodeSet:
    """
    Chebyshev-Gauss nodes of the first kind.

    The stored weight is sqrt(pi/sigma) so |w_j|^2 is the quadrature weight
    for the measure dt / sqrt(1 - t^2).
    """
    if sigma < 1:
        raise InputError(f"sigma must be >= 1, got {sigma}")
    j = np.arange(1, sigma + 1)
    t = np.cos((2 * j - 1) * np.pi / (2 * sigma))
    # cos(pi/2) is 6e-17 in floating point
    t[np.abs(t) < 1e-15] = 0.0
    lam = np.full(sigma, np.pi / sigma)
    z, lam = _map_interval(t, lam, interval)
    return NodeSet(z, np.sqrt(lam))


def legendre_gauss(sigma: int, interval: Tuple[float, float] = (-1.0, 1.0),
                   max_iter: int = config.NEWTON_MAX_ITER) -> NodeSet:
    """
    Legendre-Gauss nodes by Newton iteration from Chebyshev initial guesses.

    Weights lambda_j = 2 / ((1 - z_j^2) P'_sigma(z_j)^2); the stored node
    weight is sqrt(lambda_j).
    """
    if sigma < 1:
        raise InputError(f"sigma must be >= 1, got {sigma}")
    j = np.arange(1, sigma + 1)
    t = np.cos((4 * j - 1) * np.pi / (4 * sigma + 2))

    for iteration in range(max_iter):
        p = special.eval_legendre(sigma, t)
        dp = _legendre_derivative(sigma, t, p)
        step = p / dp
        t = t - step
        if np.max(np.abs(step)) <= config.NEWTON_TOL:
            break
    else:
        raise ConvergenceError(f"Legendre-Gauss Newton iteration did not converge in {max_iter} steps")
    logger.debug("Legendre-Gauss(%d) converged after %d Newton steps", sigma, iteration + 1)

    # one polishing step after the stopping test
    t = t - special.eval_legendre(sigma, t) / _legendre_derivative(sigma, t, special.eval_legendre(sigma, t))
    t = np.sort(t)[::-1]
    t[np.abs(t) < 1e-15] = 0.0
    dp = _legendre_derivative(sigma, t, special.eval_legendre(sigma, t))
    lam = 2.0 / ((1.0 - t ** 2) * dp ** 2)
    z, lam = _map_interval(t, lam, interval)
    return NodeSet(z, np.sqrt(lam))


def _legendre_derivative(n: int, t: np.ndarray, p: np.ndarray) -> np.ndarray:
    # (1 - t^2) P_n'(t) = n (P_{n-1}(t) - t P_n(t))
    return n * (special.eval_legendre(n - 1, t) - t * p) / (1.0 - t ** 2)


def tapered_law(j: np.ndarray, count: int) -> np.ndarray:
    """exp(-sqrt(2) pi (sqrt(count) - sqrt(j))), clustered at 0, equal to 1 at j = count."""
    return np.exp(-math.sqrt(2.0) * math.pi * (math.sqrt(count) - np.sqrt(j)))


def clustered_nodes(count: int, interval: str = '(0,1]', law: ClusteringLaw = tapered_law) -> NodeSet:
    """
    Exponentially clustered nodes around zero with unit weights.

    ``interval`` is '(0,1]' or '[-1,1]'. For '[-1,1]' count must be even;
    each sign gets count // 2 nodes, mirrored.
    """
    if count < 2:
        raise InputError(f"count must be >= 2, got {count}")
    if interval == '(0,1]':
        z = law(np.arange(1, count + 1), count)
    elif interval == '[-1,1]':
        if count % 2:
            raise InputError(f"count must be even on [-1,1], got {count}")
        half = count // 2
        positive = law(np.arange(1, half + 1), half)
        z = np.concatenate([-positive[::-1], positive])
    else:
        raise InputError(f"unknown interval {interval!r}; expected '(0,1]' or '[-1,1]'")
    return NodeSet(z, np.ones(z.shape[0]))


def _tapered_values(count: int) -> np.ndarray:
    return -2.0 * tapered_law(np.arange(1, count + 1), count)


def tapered_real_poles(n: int) -> PoleSchedule:
    """Poles xi_j = -2 exp(-sqrt(2) pi (sqrt(n) - sqrt(j))), shifts {inf, xi_1, ..., xi_{n-1}}."""
    if n < 1:
        raise InputError(f"n must be >= 1, got {n}")
    return PoleSchedule.from_poles(_tapered_values(n).astype(np.complex128))


def conjugate_pair_poles(n: int) -> PoleSchedule:
    """
    Poles +-i sqrt(|delta_j|) for j = 1..n/2, interleaved (+, -) per j.

    delta_j is the tapered value computed over the n/2 pairs.
    """
    if n < 2 or n % 2:
        raise InputError(f"conjugate pair poles need an even n >= 2, got {n}")
    radii = np.sqrt(np.abs(_tapered_values(n // 2)))
    poles = np.empty(n, dtype=np.complex128)
    poles[0::2] = 1j * radii
    poles[1::2] = -1j * radii
    return PoleSchedule.from_poles(poles)
