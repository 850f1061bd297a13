"""Default tolerances and settings shared by the fitting modules.

Every function that uses one of these accepts a keyword override.
"""

# Orthonormality bound ||Q^H Q - I||_max accepted for a Krylov basis.
ORTHO_TOL = 1e-12

# Relative tail norm below which the next Krylov vector counts as dependent.
BREAKDOWN_TOL = 1e-14

# Relative pivot size below which solve_dense_ls reports rank deficiency.
RANK_TOL = 1e-14

DISPLACEMENT_RANK_TOL = 1e-10

# "Twice is enough"
DEFAULT_REORTH_PASSES = 2

DEFAULT_SAMPLES = 1000

NEWTON_MAX_ITER = 100
NEWTON_TOL = 1e-14

CSV_DIGITS = 17
MARKDOWN_DIGITS = 3
