"""Numerical toolkit for parabolic implosion of quadratic polynomials.

Subpackages cover continued fractions, the parabolic germ and its Fatou
coordinates, Lavaurs and horn maps with virtual multipliers, Julia-Lavaurs
raster classification, the Blaschke critical-circle-map model with its
dynamical partitions, and hyperbolic-geometry ball constructions.
"""

__version__ = "0.1.0"

from . import cfrac, circlemap, fatou, hypgeo, maps, parabolic, raster  # noqa: E402,F401
from .cfrac import GOLDEN_MEAN, cf_expand, convergents, is_bounded_type  # noqa: F401
from .circlemap import CircleMapLift, rotation_number, tune_rotation  # noqa: F401
from .fatou import FatouAtlas, build_atlas, phi_attracting, psi_repelling  # noqa: F401
from .maps import LavaursSystem, end_translation, horn_map, lavaurs_map, solve_sigma  # noqa: F401
from .parabolic import ParabolicPolynomial, escape_test, germ_coefficients, petal_certificate  # noqa: F401
