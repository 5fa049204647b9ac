"""Exact-arithmetic pre-Lie algebras, their bimodules and cochain complexes,
with checks, constructions and brute-force searches for the operator
structures built on them."""

from .algebra import (Algebra, Bimodule, LinearMap, check_bimodule, check_pre_lie, direct_sum, dual_bimodule,
                      regular_bimodule, semidirect_product, sub_adjacent, trivial_bimodule)
from .cochain import (BimoduleCochain, BlockMap, Cochain, MixedCochain, bidegree_of, cohomology_dims,
                      cohomology_table, delta, horizontal_lift, mn_bracket, partial)
from .errors import *  # noqa: F401,F403
from .linalg import Matrix, Tensor3
from .operators import (OnStructure, check_compatible, check_deformation_pair, check_nijenhuis,
                        check_nijenhuis_structure, check_o_operator, check_on_structure, check_rota_baxter,
                        deformed_bimodule, deformed_product, hierarchy, induced_pre_lie, nijenhuis_tower,
                        on_from_compatible)
from .report import Report
from .search import SearchConfig, enumerate_operators, search_strong_mc, solve_cocycle_space, verify_family
from .structures import (SymForm2, SymTensor2, check_hn, check_kvb, check_kvn, check_pseudo_hessian,
                         check_s_matrix, hn_from_kvb, kvn_from_hn, kvn_from_kvb, r_hierarchy)
from .twilled import (TwilledAlgebra, check_mc, check_rb_strong_mc, check_strong_mc, hierarchy_from_mc,
                      make_twilled, mc_from_on, omega_twist, on_from_mc, twilled_from_o_operator)

__version__ = "0.1.0"
