"""Deterministic low-coherence matrices, threshold edge colorings, and
exact verification of the monochromatic clique bounds they imply."""

from .clique import (
    CliqueResult,
    ColorClassGraph,
    ContradictionCheck,
    RamseyReport,
    blue_clique_contradiction_check,
    greedy_clique_lower_bound,
    max_clique_brute,
    max_clique_exact,
    min_sparsity_for_theorem,
    red_clique_contradiction_check,
    verify_ramsey,
)
from .coloring import (
    BLUE,
    RED,
    WHITE,
    EdgeColoring,
    color_edges,
    color_edges_exact_devore,
    read_coloring,
    threshold,
    write_coloring,
)
from .devore import (
    ColumnSupport,
    DeVoreParams,
    ExactInnerProduct,
    PolyIndex,
    RegimeReport,
    certified_sparsity,
    coherence_exact,
    column_support,
    eval_table,
    inner_product_exact,
    is_prime,
    load_structural,
    poly_eval,
    poly_from_index,
    poly_to_index,
    regime_calculator,
    rip_certificate_coherence,
    save_structural,
    to_dense,
)
from .errors import BudgetExceededError
from .klbound import (
    TraceAudit,
    VectorFamily,
    kl_lower_bound,
    max_offdiag_coherence,
    random_unit_family,
    run_property_trials,
    trace_argument_audit,
)
from .matrices import ColumnMatrix, load_dense, save_dense
from .rip import (
    RipCertificate,
    coherence_certificate,
    delta_exhaustive,
    delta_sampled,
    random_baseline,
)

__version__ = "0.1.0"
