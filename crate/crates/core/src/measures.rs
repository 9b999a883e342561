//! Shannon information measures in bits.
//!
//! All measures are computed from marginal entropies with the convention
//! `0 · log 0 = 0`. Conditional mutual information uses
//! `I(X:Y|Z) = H(X,Z) + H(Y,Z) − H(X,Y,Z) − H(Z)`.

use std::collections::BTreeSet;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::dist::JointDistribution;
use crate::error::{Error, Result};

/// Negative results closer to zero than this are rounding noise.
pub const CLAMP_TOLERANCE: f64 = 1e-12;

/// An information quantity in bits.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd, Default, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Bits(pub f64);

impl Bits {
    pub const ZERO: Bits = Bits(0.0);

    pub fn value(self) -> f64 {
        self.0
    }
}

impl fmt::Display for Bits {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:.12}", self.0)
    }
}

/// `-Σ p log2 p` over the given masses.
pub fn entropy_of<I: IntoIterator<Item = f64>>(probs: I) -> f64 {
    -probs
        .into_iter()
        .filter(|&p| p > 0.0)
        .map(|p| p * p.log2())
        .sum::<f64>()
}

/// Clamps rounding noise to zero and rejects genuinely negative values.
pub fn clamp_nonnegative(x: f64) -> Result<Bits> {
    if x >= 0.0 {
        Ok(Bits(x))
    } else if x >= -CLAMP_TOLERANCE {
        Ok(Bits::ZERO)
    } else {
        Err(Error::NegativeInformation(x))
    }
}

fn joint_entropy(d: &JointDistribution, idx: &[usize]) -> f64 {
    if idx.is_empty() {
        return 0.0;
    }
    entropy_of(d.marginal_values(idx).into_values())
}

fn set_indices(d: &JointDistribution, names: &[&str]) -> Result<Vec<usize>> {
    if names.is_empty() {
        return Err(Error::EmptySet);
    }
    d.indices_of(names)
}

fn ensure_disjoint(sets: &[&[&str]]) -> Result<()> {
    let mut seen = BTreeSet::new();
    for set in sets {
        for name in set.iter().collect::<BTreeSet<_>>() {
            if !seen.insert(*name) {
                return Err(Error::OverlappingSets(name.to_string()));
            }
        }
    }
    Ok(())
}

fn union(a: &[usize], b: &[usize]) -> Vec<usize> {
    let mut u: Vec<usize> = a.iter().chain(b).copied().collect();
    u.sort_unstable();
    u.dedup();
    u
}

/// `H(vars)`.
pub fn entropy(d: &JointDistribution, vars: &[&str]) -> Result<Bits> {
    let idx = set_indices(d, vars)?;
    Ok(Bits(joint_entropy(d, &idx).max(0.0)))
}

/// `I(x:y) = H(x) + H(y) − H(x,y)`.
pub fn mutual_information(d: &JointDistribution, x: &[&str], y: &[&str]) -> Result<Bits> {
    conditional_mutual_information(d, x, y, &[])
}

/// `I(x:y|z)`; an empty `z` gives the unconditioned mutual information.
pub fn conditional_mutual_information(
    d: &JointDistribution,
    x: &[&str],
    y: &[&str],
    z: &[&str],
) -> Result<Bits> {
    ensure_disjoint(&[x, y, z])?;
    let xi = set_indices(d, x)?;
    let yi = set_indices(d, y)?;
    let zi = d.indices_of(z)?;
    let xz = union(&xi, &zi);
    let yz = union(&yi, &zi);
    let xyz = union(&xz, &yi);
    let value = joint_entropy(d, &xz) + joint_entropy(d, &yz)
        - joint_entropy(d, &xyz)
        - joint_entropy(d, &zi);
    clamp_nonnegative(value)
}

/// One-way key-rate lower bound
/// `max(0, I(x:y) − I(x:eve), I(x:y) − I(y:eve))`.
///
/// This is the standard Csiszár–Körner style bound for one-way
/// communication from either side; it lower-bounds the distillable key rate
/// across the cut `x | y`.
pub fn ck_lower_bound(d: &JointDistribution, x: &[&str], y: &[&str], eve: &str) -> Result<Bits> {
    if !d.variable(eve)?.is_eve() {
        return Err(Error::NotEavesdropper(eve.to_string()));
    }
    for name in x.iter().chain(y) {
        if d.variable(name)?.is_eve() {
            return Err(Error::NotHonest(name.to_string()));
        }
    }
    let ixy = mutual_information(d, x, y)?.0;
    let ixe = mutual_information(d, x, &[eve])?.0;
    let iye = mutual_information(d, y, &[eve])?.0;
    Ok(Bits((ixy - ixe).max(ixy - iye).max(0.0)))
}
