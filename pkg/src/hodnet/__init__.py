"""Interlaced polynomial lattice rules: construction, quality criterion and randomized QMC."""

from ._kernels import BACKEND
from .cbc import (
    BudgetExceeded,
    ConstructionResult,
    cbc_construct_fast,
    cbc_construct_naive,
    cbc_error_bound,
    cbc_partial_bound,
    circulant_apply,
)
from .criterion import (
    BoundParams,
    CriterionParams,
    Weights,
    chi,
    criterion_B,
    criterion_B_dual_oracle,
    criterion_B_partial,
    kernel_wce_squared,
    r_weight,
    shifted_mean_square_wce,
    walsh_decay_constant,
)
from .galois import GFPoly, is_irreducible, laurent_digits, primitive_element, smallest_irreducible
from .interlace import deinterlace_int, interlace_int, interlace_net, interlace_point, mu_weight
from .pointset import (
    PointSet,
    PolyLattice,
    character_sum,
    dual_contains,
    generate_points,
    load_external_net,
    sobol_points,
    walsh_char,
)
from .randomize import DigitalShift, RmseReport, apply_shift, qmc_estimate, random_shift, rmse_experiment, test_function

__version__ = "0.1.0"
