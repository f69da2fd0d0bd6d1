mod ar;
mod hom;
mod module;
mod proj;

pub use ar::{
    ar_quiver, decompose_module, end_top_dim, AlmostSplitSequence, ArQuiver, ArVertex, AssReport,
    Ext1, FamilyCheck, KnitOptions, ModuleCategory, Summand,
};
pub use hom::{
    block_matrix, end_matrices, find_isomorphism, hom_space, is_isomorphic, is_split_epi,
    is_split_mono, HomSpace,
};
pub use module::{dim_vector_string, CModule, DirectSum, ModuleMap, Quotient};
pub use proj::{
    global_dimension, is_projective, matrix_between_projectives, minimal_presentation,
    projective_cover, projective_dimension, projective_sum, projective_summand, radical_spaces,
    simple, socle_spaces, top_dims, yoneda_map, yoneda_projective, Dimension, Presentation,
    ProjectiveCover,
};
