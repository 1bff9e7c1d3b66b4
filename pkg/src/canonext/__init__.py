"""Finite order theory: presentations and C-ideals, filter completions,
canonical extensions via the Δ(A) dcpo presentation, σ-extensions and
canonicity checks."""
from .order import (
    MonotoneMap, OrderError, Poset, Preorder, SizeLimitError, down_set,
    dual_order, hasse_edges, is_codirected, is_directed, poset_from_pairs,
    product_order, quotient_to_poset, saturate_order, up_set,
)
from .lattice import (
    FiniteLattice, Inequation, NotALattice, OrderedAlgebra, eval_term,
    filters_of, ideals_of, is_distributive, is_operator, lattice_from_poset,
    parse_inequation, parse_term, satisfies_inequation,
)
from .completions import (
    check_cocompletion_axioms, extend_map_f, extend_operation_f,
    filter_completion, ideal_completion, lift_algebra_to_f,
)
from .presentations import (
    Presentation, all_c_ideals, c_ideal_closure, free_dcpo, is_cover_preserving,
    is_cover_stable, lift_operation, universal_property_oracle,
)
from .canonical import (
    DeltaPresentation, canonical_extension, check_canonicity, closed_elements,
    mu_embedding, sigma_extension_direct, sigma_extension_via_lift,
    verify_density_compactness,
)
from .io import parse, serialize
from .dot import emit_dot

__version__ = "0.1.0"

__all__ = [
    "MonotoneMap",
    "OrderError",
    "Poset",
    "Preorder",
    "SizeLimitError",
    "down_set",
    "dual_order",
    "hasse_edges",
    "is_codirected",
    "is_directed",
    "poset_from_pairs",
    "product_order",
    "quotient_to_poset",
    "saturate_order",
    "up_set",
    "FiniteLattice",
    "Inequation",
    "NotALattice",
    "OrderedAlgebra",
    "eval_term",
    "filters_of",
    "ideals_of",
    "is_distributive",
    "is_operator",
    "lattice_from_poset",
    "parse_inequation",
    "parse_term",
    "satisfies_inequation",
    "check_cocompletion_axioms",
    "extend_map_f",
    "extend_operation_f",
    "filter_completion",
    "ideal_completion",
    "lift_algebra_to_f",
    "Presentation",
    "all_c_ideals",
    "c_ideal_closure",
    "free_dcpo",
    "is_cover_preserving",
    "is_cover_stable",
    "lift_operation",
    "universal_property_oracle",
    "DeltaPresentation",
    "canonical_extension",
    "check_canonicity",
    "closed_elements",
    "mu_embedding",
    "sigma_extension_direct",
    "sigma_extension_via_lift",
    "verify_density_compactness",
    "parse",
    "serialize",
    "emit_dot",
]
