//! Exact algebraic combinatorics: partitions, dimensions, Littlewood–Richardson
//! and walled-Brauer branching coefficients, symmetric-group and GL characters.

pub(crate) mod characters;
mod dimension;
mod littlewood_richardson;
mod partition;
mod weight;

pub use characters::{gl_character, mn_character, mn_character_full, CycleType};
pub use dimension::{conjugacy_class_size, dim_gl, dim_gl_rational, dim_specht, factorial};
pub use littlewood_richardson::{
    horn_positive, lr_coeff, lr_product, multi_lr_coeff, multi_lr_product, wb_branch,
};
pub use partition::{partitions, partitions_bounded, Partition};
pub use weight::SignedWeight;
