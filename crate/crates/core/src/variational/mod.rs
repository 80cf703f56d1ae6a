//! Thermodynamic-limit free energies as constrained maxima of an entropy
//! plus quadratic-energy functional, critical temperatures and maximizers.

mod bilinear;
mod critical;
mod maximize;
mod multiblock;
pub(crate) mod optimize;
mod profile;

pub use maximize::{free_energy, free_energy_comparable, maximize_f, MaximizerReport, Method, DEDUP_TOL, VALUE_TOL};
pub(crate) use maximize::maximize_linear;
pub use profile::{energy_entropy_split, f_value, Couplings, ProfilePoint, TwoBlockParams};
pub use critical::{
    beta_crit, beta_crit_bisection, beta_crit_bounds, beta_crit_homogeneous, gamma_value, BetaCrit, BetaCritMethod,
    BISECTION_TOL, PREDICATE_GAP,
};
pub use multiblock::{multi_block_beta_crit, multi_block_free_energy, MultiBlockResult, MultiBlockSpec, REFINE_GAIN};
pub use bilinear::{bilinear_biquadratic_convert, BilinearBiquadraticForm};
