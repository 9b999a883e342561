//! Secret-correlation analysis for finite multipartite probability
//! distributions.
//!
//! The crate covers four layers:
//!
//! - [`dist`]: an algebra of joint distributions (marginals, conditioning,
//!   party merging, permutations, mixtures, i.i.d. powers, channels on Eve).
//! - [`measures`]: Shannon entropy and (conditional) mutual information in bits.
//! - [`intrinsic`]: intrinsic information, the minimum of `I(X:Y|Ẽ)` over
//!   channels `E → Ẽ`, by exhaustive deterministic search and random-restart
//!   local search over stochastic channels.
//! - [`protocols`]: the equality filter, the repeated-code block protocol
//!   (exact and Monte Carlo), and bound-information certificates.
//!
//! [`fixtures`] builds the tripartite example distributions `p1`, `p2`, `p3`
//! and their mixture `pmix`.

pub mod dist;
pub mod error;
pub mod fixtures;
pub mod intrinsic;
pub mod measures;
pub mod prob;
pub mod protocols;
mod serde_fmt;

pub use dist::{Channel, JointDistribution, Outcome, Role, Splitting, VariableSpec, Violation};
pub use error::{Error, Result};
pub use fixtures::FixtureId;
pub use intrinsic::{IntrinsicConfig, IntrinsicResult, SearchMethod};
pub use measures::Bits;
pub use prob::{Prob, Ratio};
pub use protocols::{Certificate, CertifyConfig, FilterResult, ProtocolMethod, ProtocolStats};

/// Upper bound on the number of tuples (or candidates) an exhaustive
/// enumeration may visit.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Budget(pub u64);

impl Budget {
    pub const DEFAULT: Budget = Budget(1 << 24);

    pub fn check(&self, needed: u128) -> Result<()> {
        if needed > self.0 as u128 {
            Err(Error::BudgetExceeded {
                needed,
                budget: self.0,
            })
        } else {
            Ok(())
        }
    }
}

impl Default for Budget {
    fn default() -> Self {
        Budget::DEFAULT
    }
}
