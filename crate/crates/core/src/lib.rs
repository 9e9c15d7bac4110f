//! Solvers and verifiers for hedonic games with the common ranking
//! property, where every member of a coalition receives the coalition's
//! joint utility. Instances are given as individually rational coalition
//! lists.
//!
//! - [`model`]: coalitions, instances, partitions, ψ and welfare.
//! - [`checks`]: core stability, individual and Nash stability, Pareto
//!   optimality and perfectness, each with a witness on failure.
//! - [`greedy`]: polynomial core stable and individually stable solver.
//! - [`exact`]: exhaustive ψ-maximizer, welfare optimum and perfect
//!   partition search.
//! - [`matching`]: weighted blossom matching and the two solvers for
//!   coalitions of size at most two.
//! - [`generators`]: reduction encoders, the price-of-stability family and
//!   random instances.
//! - [`metrics`]: price of anarchy and price of stability.
//! - [`cli`]: the `hgcrp` command-line front end.

pub mod checks;
pub mod cli;
pub mod error;
pub mod exact;
pub mod generators;
pub mod greedy;
pub mod matching;
pub mod metrics;
pub mod model;

pub use error::{Error, Result};
pub use exact::EnumerationBudget;
pub use model::{AgentId, Coalition, Instance, Partition, PsiVector, Utility};
