//! Local and global L-function data: class functions on local Galois
//! groups, `Z_v`, `μ_Art,v`, and the regularization of sums over places.

pub mod datum;
pub mod global;
pub mod zeta;

pub use datum::{ClassFunctionQ, LocalGaloisDatum};
pub use global::{
    euler_partial_product, power_series, regularized_sum, z_infty_at, zeta_closed_forms, ExplicitPlace, GlobalZeta,
    LogQValue, Regularization, TailCharacter,
};
pub use zeta::{a_psi_phi, cm_characters, lemma_indl_check, mu_art_v, z_minus_mu, z_v_at_one, z_v_rational, IndLCheck};
