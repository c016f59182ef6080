//! Certified normal approximations for lattice laws.
//!
//! * [`kernels`]: exact binomial, hypergeometric and Poisson probabilities.
//! * [`normal`]: standard normal distribution function, density, quantile.
//! * [`approx`]: normal approximations to interval probabilities with
//!   guaranteed error bounds.
//! * [`extremal`]: exact worst-case interval discrepancy and Kolmogorov
//!   distance, the ground truth every bound is checked against.
//! * [`clopper_pearson`]: exact Clopper-Pearson bounds and closed-form
//!   brackets around them.
//! * [`rate`]: Bernoulli rate function, its rational lower bound, and the
//!   two-sided normal bounds on binomial distribution functions built on it.
//! * [`verify`]: exhaustive grid sweeps that check every inequality above.

#![forbid(unsafe_code)]

pub mod approx;
pub mod clopper_pearson;
pub mod constants;
pub mod error;
pub mod extremal;
pub mod interval;
pub mod kernels;
pub mod normal;
pub mod rate;
pub mod special;
pub mod verify;

pub use error::{Error, Result};
pub use interval::LatticeInterval;
pub use kernels::{DiscreteLaw, Family, LawTable};
