//! Matveev lower bounds for the four linear forms, the bound chain that
//! follows from them, and the envelope constants handed to the reduction.

pub mod chain;
pub mod envelopes;
pub mod matveev;
pub mod nonvanishing;

pub use chain::{compute_bound_chain, derive_absolute_bound, height_bound_gamma1_case1, BoundChain, ChainRow};
pub use envelopes::{envelope, Base, Campaign, EnvelopeConstant, Envelopes, Sign};
pub use matveev::{lower_bound_coefficient, matveev_constant, FormLabel, MatveevB, MatveevInstance};
pub use nonvanishing::{nonvanishing_spot_check, NonvanishingReport};
