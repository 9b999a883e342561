//! Shared inputs for the criterion benches.

use skat_core::fixtures::{self, FixtureId};
use skat_core::{IntrinsicConfig, JointDistribution};

pub fn p1() -> JointDistribution {
    fixtures::build(FixtureId::P1)
}

pub fn pmix() -> JointDistribution {
    fixtures::build(FixtureId::Pmix)
}

/// Continuous search only, with a fixed number of restarts.
pub fn local_config(restarts: usize) -> IntrinsicConfig {
    IntrinsicConfig {
        restarts,
        fold_deterministic_limit: 0,
        ..IntrinsicConfig::default()
    }
}
