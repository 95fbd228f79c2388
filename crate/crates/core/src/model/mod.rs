//! Domain types, file formats, seeded generators and brute-force oracles.

mod allocation;
pub mod generate;
mod instance;
pub mod io;
pub mod oracle;
mod payment;

pub use allocation::{Allocation, BundleValue};
pub use generate::{random_allocation, random_instance, InstanceParams};
pub use instance::{validate_instance, Instance, InstanceFile, ValuationClass, MAX_VALUE};
pub use oracle::{brute_force_max_welfare, brute_force_min_payments, brute_force_po_check};
pub use payment::{is_envy_free_with_payments, satisfies_constraints, PaymentConstraint, PaymentVector};
