//! Mining of relaxed co-movement patterns ("platoons") from cross-camera
//! travel paths: groups of at least `m` objects that pass the same route of
//! at least `k` cameras, entering each camera within `eps` of one another
//! and skipping at most `d` cameras between consecutive route cameras.

pub mod cli;
pub mod clustering;
pub mod error;
pub mod evalkit;
pub mod frb;
pub mod io;
pub mod maxgrowth;
pub mod maximality;
pub mod model;
pub mod oracle;
pub mod stats;
#[cfg(test)]
mod testutil;

pub use error::{Error, Result};
pub use frb::{mine_frb, FrbOptions};
pub use maxgrowth::{mine_maxgrowth, MaxGrowthOptions};
pub use maximality::{dominates, remove_non_maximal};
pub use model::{Dataset, MiningParams, Pattern, TimeUnit};
pub use oracle::{mine_bruteforce, OracleLimits};
pub use stats::{MiningOutput, MiningStats};
