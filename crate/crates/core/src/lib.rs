//! Exact arithmetic for periods of local shtukas with complex multiplication.
//!
//! The crate is organised bottom-up:
//!
//! * [`algebra`]: finite fields, polynomials, precision-tracked Laurent series,
//!   rationals and rational functions over `Q`.
//! * [`local`]: explicit towers of extensions of `F_q((z))` with exact
//!   valuations, uniformizer re-expansion and the root solvers used for the
//!   `ℓ⁺` series.
//! * [`shtuka`]: CM algebras, standard-form local shtukas, period elements
//!   `Ω(E_v, φ, ψ)` and their valuations, computed both from explicit series
//!   and from closed formulas.
//! * [`lfunctions`]: local Galois data, class functions, the local zeta
//!   operator `Z_v`, the Artin measure, and the regularized sum over places.
//! * [`carlitz`]: the Carlitz module end to end, including the regularized
//!   product formula.
//! * [`schema`]: the JSON input formats shared with the command-line tool.

pub mod algebra;
pub mod carlitz;
pub mod config;
mod error;
pub mod lfunctions;
pub mod local;
pub mod schema;
pub mod shtuka;

pub use algebra::{
    ff::{Fe, FieldEmbedding, FqField},
    poly::{poly_irreducibles, PolyFq},
    rat::Rat,
    ratfunc::{QPoly, RatFunc},
    series::TruncSeries,
};
pub use config::TowerConfig;
pub use error::{Error, Result};
pub use lfunctions::{ClassFunctionQ, LocalGaloisDatum, LogQValue};
pub use local::{LocalFieldTower, TameAbelianAut, TowerAut, TowerElem};
pub use shtuka::{CMAlgebra, CMType, Embedding, LocalShtukaStd, PeriodElement, ScalingData};
