"""Sampling recovery of structured trigonometric function classes.

Random point sets with verified L_2 universal discretization, greedy
(Weak Orthogonal Matching Pursuit) recovery from point samples, brute-force
best v-term oracles, and the tooling to measure error decay rates.
"""
__version__ = "0.1.0"
__schema_version__ = 1

from .index_sets import (IndexSet, dyadic_block, full_cube, hyperbolic_cross, layer,  # noqa: E402
                         linf_shell, parse_index_set)
from .trig import (PointSet, QuadratureGrid, SparseCoefFn, evaluate,  # noqa: E402
                   inner_product_discrete, lp_norm_discrete, lp_norm_mixed, lp_norm_mu)
from .classes import (ClassParamsA, ClassParamsW, a_beta_norm, delta_s, generate_A,  # noqa: E402
                      generate_W, layer_part, membership_A, membership_W)
from .discretization import (UdReport, draw_points, gram_spectrum, m_budget,  # noqa: E402
                             verify_one_sided, verify_ud)
from .greedy import (DictionaryOnPoints, WompTrace, best_v_term_discrete,  # noqa: E402
                     best_v_term_sup, greedy_a1_lp, nikolskii_check, riesz_bessel_check,
                     threshold_v, up_constant, womp)
from .rates import RateFit, fit_rate  # noqa: E402
from .recovery import (RecoveryConfig, RecoveryReport, empirical_rho, layered_approx,  # noqa: E402
                       recover)
