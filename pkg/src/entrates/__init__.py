"""Asymptotic entanglement conversion rates for multipartite pure states.

The package computes, for dense desk-scale states: entanglement entropies
across all bipartitions, optimal asymptotic conversion rates and their
reversibility certificates, pairwise-entanglement decompositions of
tripartite states, an executable measure-and-prepare conversion channel
with finite-copy bound audits, and a separable product-overlap optimizer
used to cross-check the bounds. A CLI (``entrates``) exposes the same
functionality with deterministic JSON reports.
"""

__version__ = "0.1.0"

from .errors import (
    DimensionError,
    EntratesError,
    InvariantViolationError,
    StateFileError,
)
from .statespace import (
    MAX_TOTAL_DIM,
    Bipartition,
    DensityMatrix,
    PartyLayout,
    PureState,
    SchmidtSpectrum,
    bures_distance,
    catalog_state,
    fidelity,
    haar_random_pure,
    make_pure_state,
    merge_parties,
    partial_trace,
    schmidt_coefficients,
    tensor,
    tensor_power,
    trace_distance,
)
from .entanglement import (
    EntropyProfile,
    binary_entropy,
    entanglement_entropy,
    entropy_profile,
    generalized_robustness_pure,
    quantum_relative_entropy,
    ree_pure,
    von_neumann_entropy,
)
from .rates import (
    CutRatio,
    RateReport,
    ReversibilityReport,
    aen_rate,
    enumerate_bipartitions,
    is_reversible,
    locc_upper_bound,
)
from .reg import (
    RegDecomposition,
    reg_entropies,
    reg_synthesize,
    spectrum_with_entropy,
    verify_reg,
)
from .sepopt import (
    CertifiedSeparableState,
    OverlapResult,
    max_product_overlap,
    sample_separable,
)
from .protocol import (
    BoundCheckReport,
    ProtocolChannel,
    alice_side_cut,
    apply_channel,
    audit_prop1,
    audit_prop3,
    build_protocol,
    output_robustness_bound,
    prop2_bound,
    prop3_fidelity_check,
    success_probability,
)

__all__ = [
    "__version__",
    "EntratesError",
    "StateFileError",
    "InvariantViolationError",
    "DimensionError",
    "MAX_TOTAL_DIM",
    "PartyLayout",
    "PureState",
    "DensityMatrix",
    "Bipartition",
    "SchmidtSpectrum",
    "make_pure_state",
    "catalog_state",
    "tensor",
    "tensor_power",
    "merge_parties",
    "partial_trace",
    "schmidt_coefficients",
    "fidelity",
    "bures_distance",
    "trace_distance",
    "haar_random_pure",
    "EntropyProfile",
    "von_neumann_entropy",
    "binary_entropy",
    "entanglement_entropy",
    "entropy_profile",
    "quantum_relative_entropy",
    "ree_pure",
    "generalized_robustness_pure",
    "CutRatio",
    "RateReport",
    "ReversibilityReport",
    "enumerate_bipartitions",
    "aen_rate",
    "locc_upper_bound",
    "is_reversible",
    "RegDecomposition",
    "reg_entropies",
    "spectrum_with_entropy",
    "reg_synthesize",
    "verify_reg",
    "OverlapResult",
    "CertifiedSeparableState",
    "max_product_overlap",
    "sample_separable",
    "ProtocolChannel",
    "BoundCheckReport",
    "alice_side_cut",
    "build_protocol",
    "apply_channel",
    "success_probability",
    "output_robustness_bound",
    "audit_prop1",
    "audit_prop3",
    "prop2_bound",
    "prop3_fidelity_check",
]
