"""Truncated power series, germ calculus, coprimality, flows and foliation holonomy."""

from .calculus import (DiffeoGerm, commutator, comp_inverse, compose, diffeo_from, frechet_dir,
                       h_map, identity, inversion_map, log_map, loray_defect, solvable2_test)
from .coprimality import (build_index_matrix, build_system, composite_at_rank, decide_coprime,
                          epsilon_bounds, milnor_dim_estimate, system_rank)
from .errors import (DimensionError, DomainError, GermError, InconclusiveError, InvalidWeightError,
                     NotInvertibleError, NumericError, TruncationError)
from .flows import OdeSpec, VectorField, companion_field, flow_residual, flow_series, lie_derivative, ode_solve
from .foliation import (FoliationPair, LoopSpec, blowup_chart_x, generator_loops, holonomy, holonomy_jet,
                        product_loop, rnd_star_test, singular_data, solvability_report, tangent_cubic)
from .linalg import exact_rank
from .norms import (WeightSequence, a_norm, amplitude, check_composition_bound, check_derivative_bound,
                    check_product_bound, comparison, deriv_constant, naive_polydisc_radius, radius_bounds)
from .series import GaussianRational, Series, exp_series, jet, monomials, valuation

__version__ = "0.1.0"
