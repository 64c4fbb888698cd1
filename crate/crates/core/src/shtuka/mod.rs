//! Local shtukas with complex multiplication and their periods.

pub mod amotive;
pub mod cm;
pub mod period;
pub mod scaling;
pub mod standard;

pub use amotive::{amotive_to_local_shtuka, AMotiveModel, LocalShtukaMatrix, RzSeries};
pub use cm::{CMAlgebra, CMType, Component, Embedding};
pub use period::{
    galois_character_check, omega_period, omega_period_with, omega_valuation_via_l, period_valuation_series,
    shtuka_period, tau_invariance_check, GaloisCheck, OmegaOptions, OmegaPeriod, PeriodElement, ShtukaPeriod, TauCheck,
};
pub use scaling::{
    averaged_period_valuation, cm_period_valuation, cm_period_valuation_series, integral_u_omega, AveragedValuation,
    IntegralValue, ScalingData,
};
pub use standard::{tau_invariant_unit_part, LocalShtukaStd, TauComponent, UnitPart};
