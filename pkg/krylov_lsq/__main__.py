"""
CLI entry point for the krylov_lsq package.
Allows running: python -m krylov_lsq
"""

import sys

from .cli import main

if __name__ == '__main__':
    sys.exit(main())
