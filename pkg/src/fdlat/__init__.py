"""Exact combinatorics of unrelated poset copies in subset lattices.

The package computes exact lower and upper estimates for the maximum
number of pairwise unrelated copies of full segment posets inside the
powerset lattice of an n-element set, and uses separated estimate pairs
to decide, with accuracy 1/2, how many elements are needed to generate
direct powers of free distributive lattices.  A desk-scale oracle layer
(explicit lattices, brute-force counts, exhaustive searches) cross-checks
the closed forms, and a CLI reproduces all computational tables and
verification campaigns.
"""

from .bigcomb import ConstraintViolation, FactorialTable, binom, factorial, fsp, multinomial
from .estimates import (
    EstimateParams,
    f_lower_full,
    f_lower_general,
    f_lower_max,
    flat_lower,
    g2,
    g3_doublestar,
    g3_star,
    g_upper,
)
from .gmin import (
    EstimatePair,
    GminResult,
    SeparationReport,
    chain_pair,
    corollary_upper,
    crown_pair,
    default_pair,
    find_best_p,
    gmin_power,
    is_separated,
    strict_increase_check,
)
from .minsearch import (
    MinResult,
    SimplexPoint3,
    SimplexPoint4,
    compute_Mn,
    decomposition_check,
    fha_eval,
    fhb_eval,
    min_fhb,
    verify_min_location,
)

__version__ = "0.1.0"
