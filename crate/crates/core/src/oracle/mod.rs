//! Dense exact diagonalization on `(C^r)^{⊗n}`.

mod equivalence;
mod model;
mod operator;
mod thermal;

pub use equivalence::{spectra_equal_under_equivalence, spin_one_intertwiner, spin_one_matrices, EquivalenceReport};
pub use model::{class_members, hamiltonian, MbTerm, Model, ModelInstance, ModelKind, MAX_CLASS_ENUMERATION};
pub use operator::{
    build_p, build_perm_operator, build_q, build_transposition, compose, cycle_count, cycle_lengths, DenseOperator,
    MAX_DENSE_DIM,
};
pub use thermal::{
    log_partition_function, magnetized_partition_function, partition_function, spectrum, thermal_expectation,
    BlockEigen,
};
