//! Stationary mean age-of-information (AoI) for single-server LIFO buffers
//! with pushout of the oldest waiting message.
//!
//! A buffer of `m` cells holds the message in service and up to `m - 1`
//! waiting messages ordered newest first. An arrival to a full buffer evicts
//! the oldest waiting message; with `m = 1` there is nothing waiting, so it
//! replaces the message in service. Larger buffers never interrupt service.
//! Arrivals are
//! Poisson with rate λ and service times are i.i.d. with a general law.
//!
//! The crate has three parts:
//!
//! * [`distributions`]: service laws with closed-form Laplace transforms
//!   and their first two derivatives, plus a name registry that parses the
//!   `det:<d>` / `exp:<mu>` / `erlang:<k>:<nu>` / `gamma:<alpha>:<nu>` grammar.
//! * [`analytic`]: exact mean AoI for `m = 1, 2, 3`, the `m = 3` value
//!   obtained from the embedded departure chain by Palm inversion.
//! * [`simulator`]: an event-driven simulator for any `m` that integrates
//!   the AoI sawtooth exactly.

pub mod analytic;
pub mod distributions;
mod error;
pub mod simulator;
pub mod stats;

pub use analytic::{AoiEstimate, EstimateMethod, SystemParams};
pub use distributions::ServiceDistribution;
pub use error::{AoiError, Result};
