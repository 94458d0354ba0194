"""Exact Cech-cohomological engine for monomial line bundles with connection."""

from .algebra import DlogForm, LaurentPoly, UnitMonomial, d, dlog, exterior_derivative, lp_arith, wedge
from .atlas import Atlas, Chart, builtin_atlas, is_log_form, is_regular_form, is_regular_function, load_atlas
from .bundles import (LineBundle, ObstructionReport, O, atiyah_obstruction, check_cocycle, dual,
                      is_trivial, monomial_picard_group, tensor, trivialization)
from .cech import (FormCochain, UnitCochain, coboundary, dlog_cochain, pic_c_equal,
                   solve_coboundary)
from .connections import (Connection, CurvatureForm, curvature, is_integrable, is_regular,
                          pic_group_report, solve_connection, tensor_connection, twist_trivial)
from .parse import ParseError, parse_expression, parse_form, parse_poly
from .topology import chern_class, mv_cohomology, pic_ci_structure

__version__ = "0.1.0"
