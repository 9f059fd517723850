"""Higher Amitsur groups and universal torsor obstructions, in exact arithmetic.

Submodules: intlat (integer lattices, Smith normal form), fingroup (finite
groups), gmod (G-modules), resolve (free resolutions), cohom (cohomology and
its maps), extcalc (extensions), cyclofield (cyclotomic fields), amitsur
(presentations, Am^n, beta, restriction kernels) and cli.
"""
from .intlat import BACKEND

__version__ = "0.1.0"

__all__ = ["BACKEND", "__version__"]
