//! Explicit towers of local fields over `F_{q_v}((z))`.

pub mod aut;
pub mod elem_series;
pub mod solve;
pub mod tower;

pub use aut::{mu_l, tame_shape, tame_tower, TameAbelianAut, TameShape, TowerAut};
pub use elem_series::ElemSeries;
pub use solve::{check_frobenius_recursion, predicted_ell_valuation, solve_frobenius_recursion, solve_kummer};
pub use tower::{derivative_congruence_check, eval_poly, LevelKind, LocalFieldTower, TowerElem};
