//! ROX iterated hashing over pluggable compression-function families, with
//! simulated programmable random oracles and a classical security-game
//! harness.

pub mod bits;
pub mod error;
pub mod experiments;
pub mod family;
pub mod games;
pub mod reductions;
pub mod registry;
pub mod rosim;
pub mod rox;
pub mod seed;
pub mod separations;
pub mod toolkit;

pub use bits::BitString;
pub use error::{Error, Result};
pub use family::{FamilyParams, FunctionFamily};
pub use rosim::OracleSim;
pub use rox::{RoxInstance, RoxLayout};
pub use seed::Seed;
