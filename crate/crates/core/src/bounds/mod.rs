//! Closed-form witnesses and upper bounds for combinations of moduli of the
//! generators, `Σ λ_i |δ_{e_i}|`.
//!
//! For `p > 2` (and `p = inf`, with `r = 2`) the norm lies between `‖λ‖_r`
//! and `K_G ‖λ‖_r` where `1/r = 1/2 + 1/p`; the lower side is realized by a
//! family built from the rows of a Walsh matrix. For `p <= 2` the norm is at
//! most `‖λ‖_1`, and the family of all sign vectors shows it is at least
//! `‖λ‖_1`. Both lower bounds need the nonzero coefficients to share a sign:
//! `|δ_{e_1}| - |δ_{e_2}|` has norm at most 1 in `c_0`.

mod certificate;
mod upper;
mod walsh;
mod witness;

pub use certificate::{certify_moduli_norm, BoundCertificate};
pub use upper::{krivine_upper, structural_upper, triangle_upper, GrothendieckConstant};
pub use walsh::{walsh_matrix, WalshMatrix, MAX_DENSE_ORDER};
pub use witness::{
    allsign_witness, moduli_candidates, split_allsign_witness, walsh_witness,
    walsh_witness_on_support, MAX_ALLSIGN_SUPPORT,
};

pub(crate) use witness::is_l1_regime;
