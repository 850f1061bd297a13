"""
Shared fixtures for the krylov_lsq test suite.
"""

import mpmath
import numpy as np
import pytest

from krylov_lsq.nodes import NodeSet


@pytest.fixture
def rng():
    """Seeded generator so every test is reproducible."""
    return np.random.default_rng(20240521)


@pytest.fixture
def random_nodes(rng):
    """Twelve random complex nodes with positive weights."""
    z = rng.standard_normal(12) + 1j * rng.standard_normal(12)
    w = rng.uniform(0.5, 1.5, 12)
    return NodeSet(z, w)


def _to_mp(a):
    a = np.atleast_2d(a)
    return mpmath.matrix([[mpmath.mpc(complex(x).real, complex(x).imag) for x in row] for row in a])


@pytest.fixture
def mp_oracle():
    """
    Extended-precision normal equations: solve (WB)^H (WB) c = (WB)^H W f
    at 50 digits and return the values S c at sample rows S.
    """
    def solve(basis, weights, f, sample_rows):
        with mpmath.workdps(50):
            wb = _to_mp(np.asarray(weights)[:, None] * basis)
            wf = _to_mp((np.asarray(weights) * f)[:, None])
            gram = wb.H * wb
            rhs = wb.H * wf
            c = mpmath.lu_solve(gram, rhs)
            values = _to_mp(sample_rows) * c
            return np.array([complex(values[i, 0]) for i in range(values.rows)])
    return solve
