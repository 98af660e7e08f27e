//! Fragments, slices and the partial orders between them, plus the AM-GM
//! oracle and the uniform-regularity criterion.

pub mod amgm;
pub mod fragment;
pub mod order;
pub mod regularity;

pub use amgm::{entropy_gap, masked_amgm_gap, weighted_amgm_gap, AmGmGap};
pub use fragment::{
    is_fragment, is_slice, union_fragments, OrderOneFragment, ProductOfFragments, Union,
    CO_THICKNESS_TOLERANCE,
};
pub use order::{collects_with, covers, covers_product, refines, Refinement, REFINEMENT_CAP};
pub use regularity::{
    boundary_probe, check_uniform_regularity, check_uniform_regularity_with_cap, covering_graph,
    regularity_cap, CoverNode, CoveringGraph, Regularity, RegularityReport, Witness,
    DEFAULT_REGULARITY_CAP, REGULARITY_CAP_ENV,
};
