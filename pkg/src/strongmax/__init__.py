"""Grid-scale laboratory for discrete strong maximal operators,
Muckenhoupt-type weight constants, sharp Tauberian estimates and greedy
rectangle covering, with every inequality exposed as a checkable quantity.
"""

from strongmax.lattice import (
    CellSet,
    Grid,
    GridBox,
    PointMassMeasure,
    WeightField,
    box,
    box_count,
    enumerate_boxes,
    grid,
    load_weight,
    measure,
    save_weight,
    slice_1d,
    weighted_measure,
)
from strongmax.maximal import (
    BoxSummer,
    PerturbedIndicator,
    ScalarField,
    box_average,
    composed_max,
    directional_max,
    indicator,
    perturbed_level_set_1d,
    point_mass_max_level_set_1d,
    strong_level_set,
    strong_max_field_bruteforce,
    weighted_strong_level_set,
    weighted_strong_max_field_bruteforce,
)
from strongmax.weights import (
    DominationPair,
    WeightConstantsReport,
    a1_constant_1d,
    ainfty_upper_from_domination,
    ap_constant_1d,
    ap_rec,
    ap_star,
    certified_exponent,
    checkerboard_weight,
    constant_weight,
    constants_report,
    domination_exponent,
    fujii_wilson_1d,
    generate_weight,
    hruscev_rec,
    lognormal_weight,
    power_weight,
    rhi_constant_from_domination,
    rhi_verify,
    tensor_weight,
)
from strongmax.tauberian import (
    AlphaSchedule,
    DiracCounterexample,
    SolyanikParams,
    TauberianEstimate,
    dirac_counterexample,
    embedding_alpha0,
    fromsol_domination,
    iter_bound,
    measure_1d_bound,
    mw_reduction_threshold,
    params_from_strong_bound,
    solyanik_1d_bound,
    strong_bound,
    tauberian_exhaustive,
    tauberian_search,
    valid_alpha_grid,
    weak_type_from_tauberian,
)
from strongmax.covering import (
    MassRetentionReport,
    SelectionResult,
    SparsityReport,
    cf_select,
    random_boxes,
    verify_inclusion,
    verify_mass_retention,
    verify_sparsity,
)

__version__ = "0.1.0"
