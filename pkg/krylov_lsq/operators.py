"""Block-diagonal Jordan-like operators.

A diagonal matrix diag(z) is the special case where every block has size
one, so the polynomial and the Sobolev paths share one implementation.
"""

from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np
from scipy import linalg as sla

from .errors import InputError, PoleNodeCollision
from .linalg import as_vector


@dataclass(frozen=True)
class JordanOperator:
    """
    Block-diagonal operator with upper bidiagonal blocks.

    Block j has size s_j + 1, the node z_j on its diagonal and the
    superdiagonal (alpha_{s_j}, ..., alpha_1) from top to bottom.

    Attributes:
        diagonal: Length-m diagonal (each node repeated s_j + 1 times).
        superdiagonal: Length m-1; zero across block boundaries.
        offsets: For every row, its distance from the bottom of its block,
            i.e. the derivative order that row carries.
        block_sizes: s_j + 1 per block.
    """

    diagonal: np.ndarray
    superdiagonal: np.ndarray
    offsets: np.ndarray
    block_sizes: np.ndarray

    @classmethod
    def from_blocks(cls, nodes: Sequence[complex], orders: Optional[Sequence[int]] = None,
                    alphas: Optional[Sequence[Sequence[complex]]] = None) -> 'JordanOperator':
        """
        Build the operator from per-block nodes, orders and alpha values.

        ``alphas[j]`` lists (alpha_1, ..., alpha_{s_j}); missing alphas are 1.
        """
        z = as_vector(nodes, 'nodes')
        if orders is None:
            orders = np.zeros(z.shape[0], dtype=int)
        s = np.asarray(orders, dtype=int)
        if s.shape != z.shape:
            raise InputError(f"got {z.shape[0]} nodes but {s.shape[0]} orders")
        if np.any(s < 0):
            raise InputError("derivative orders must be non-negative")

        sizes = s + 1
        m = int(sizes.sum())
        diagonal = np.repeat(z, sizes)
        superdiagonal = np.zeros(max(m - 1, 0), dtype=np.complex128)
        offsets = np.concatenate([np.arange(size - 1, -1, -1) for size in sizes]) if m else np.zeros(0, int)

        start = 0
        for j, size in enumerate(sizes):
            if size > 1:
                alpha = np.ones(size - 1, dtype=np.complex128) if alphas is None else as_vector(alphas[j], 'alpha')
                if alpha.shape[0] != size - 1:
                    raise InputError(f"node {j} needs {size - 1} alpha values, got {alpha.shape[0]}")
                if np.any(alpha == 0):
                    raise InputError(f"alpha values of node {j} must be non-zero")
                # top-to-bottom order is alpha_{s_j}, ..., alpha_1
                superdiagonal[start:start + size - 1] = alpha[::-1]
            start += size

        return cls(diagonal=diagonal, superdiagonal=superdiagonal,
                   offsets=offsets.astype(int), block_sizes=sizes)

    @classmethod
    def diagonal_of(cls, nodes: Sequence[complex]) -> 'JordanOperator':
        return cls.from_blocks(nodes)

    @property
    def dim(self) -> int:
        return self.diagonal.shape[0]

    @property
    def bottom_rows(self) -> np.ndarray:
        """Indices of the last row of every block (the function-value rows)."""
        return np.cumsum(self.block_sizes) - 1

    def matvec(self, u: np.ndarray) -> np.ndarray:
        out = self.diagonal * u
        if self.dim > 1:
            out[:-1] += self.superdiagonal * u[1:]
        return out

    def matmat(self, u: np.ndarray) -> np.ndarray:
        """Apply J to every column of u."""
        out = self.diagonal[:, None] * u
        if self.dim > 1:
            out[:-1] += self.superdiagonal[:, None] * u[1:]
        return out

    def shifted_apply(self, a: complex, b: complex, u: np.ndarray) -> np.ndarray:
        """Return (a*J - b*I) u."""
        return a * self.matvec(u) - b * u

    def solve_shifted(self, a: complex, b: complex, u: np.ndarray) -> np.ndarray:
        """
        Solve (a*J - b*I) x = u by banded back-substitution.

        Raises PoleNodeCollision when a diagonal entry a*z - b vanishes.
        """
        diag = a * self.diagonal - b
        if np.any(diag == 0):
            raise PoleNodeCollision(
                f"shifted operator ({a}) J - ({b}) I is singular: a pole coincides with a node"
            )
        if self.dim == 1:
            return u / diag
        banded = np.zeros((2, self.dim), dtype=np.complex128)
        banded[0, 1:] = a * self.superdiagonal
        banded[1, :] = diag
        return sla.solve_banded((0, 1), banded, u, check_finite=False)

    def to_dense(self) -> np.ndarray:
        return np.diag(self.diagonal) + np.diag(self.superdiagonal, k=1)

    def max_abs(self) -> float:
        """Return ||J||_max."""
        parts = [np.abs(self.diagonal).max(initial=0.0), np.abs(self.superdiagonal).max(initial=0.0)]
        return float(max(parts))
