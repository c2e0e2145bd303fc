//! Certified evaluation of Sudler products `P_N(α) = ∏_{r=1}^N 2|sin πrα|`
//! and the numerical criteria deciding whether `liminf P_N(α)` is zero for
//! badly approximable `α`.
//!
//! The layers, bottom up:
//!
//! * [`interval`] and [`cf`]: directed-rounding enclosures and exact
//!   continued-fraction arithmetic (convergents, surds, Ostrowski digits).
//! * [`sudler`]: direct and decomposed products, perturbed products
//!   `P_{q_n}(α, ε)`, the surrogate `H_k`.
//! * [`limit`]: enclosures of the limit functions `G_r(α, ε)`.
//! * [`criterion`]: the grid inequality behind `liminf P_N(α) = 0` when
//!   partial quotients exceed 7 infinitely often.
//! * [`period`]: lower-approximation functions certifying
//!   `liminf P_N(α) > 0` for short periods.

pub mod cf;
pub mod criterion;
pub mod error;
pub mod interval;
pub mod limit;
pub mod period;
pub mod real;
pub mod report;
pub mod sudler;
mod tail;

pub use cf::{ContinuedFraction, QuadraticSurd};
pub use error::{Error, Result};
pub use interval::{Enclosure, DEFAULT_PRECISION};
pub use real::Real;
