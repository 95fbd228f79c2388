//! Fair division of indivisible goods with parallel (PRAM-style) algorithms.
//!
//! The crate is organised bottom-up:
//!
//! * [`model`]: instances, allocations, payments, file formats, seeded
//!   generators and brute-force oracles.
//! * [`pram`]: deterministic fork-join primitives (reduction, bitonic sort,
//!   min-plus APSP, boolean transitive closure) that report depth and work.
//! * [`verify`]: EF / EF1 / EFX checks and the envy graph.
//! * [`allocate`]: Round-Robin, the two-agent EF1+fPO split, identical-agent
//!   striping and welfare maximisation.
//! * [`matching`]: EF1+PO for restricted additive valuations via a bucketed
//!   maximum-weight perfect matching, plus alpha-rounding.
//! * [`subsidy`]: envy-freeability, minimal envy-eliminating payments and
//!   constrained payments via the payment rejection graph.
//! * [`hardness`]: the LFMM to Fixed-Order Round-Robin reduction.

pub mod allocate;
pub mod error;
pub mod hardness;
pub mod matching;
pub mod model;
pub mod pram;
pub mod subsidy;
pub mod verify;

pub use error::{Error, Result};
pub use model::{Allocation, Instance, PaymentConstraint, PaymentVector, ValuationClass};
