use serde::Serialize;

use crate::dist::JointDistribution;
use crate::error::{Error, Result};
use crate::prob::Prob;

/// Outcome of publicly announcing whether two honest symbols are equal and
/// keeping only the equal cases.
#[derive(Debug, Clone, PartialEq)]
pub struct FilterResult {
    pub filtered: JointDistribution,
    pub survival_probability: Prob,
}

#[derive(Serialize)]
struct FilterReport<'a> {
    survival_probability: String,
    filtered: &'a JointDistribution,
}

impl Serialize for FilterResult {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        FilterReport {
            survival_probability: self.survival_probability.to_string(),
            filtered: &self.filtered,
        }
        .serialize(s)
    }
}

/// Conditions `d` on the event `p = q`. Eve learns the event, which is what
/// conditioning the whole distribution (her variable included) models.
pub fn equality_filter(d: &JointDistribution, p: &str, q: &str) -> Result<FilterResult> {
    let (pi, qi) = (d.index_of(p)?, d.index_of(q)?);
    for (name, i) in [(p, pi), (q, qi)] {
        if d.variables()[i].is_eve() {
            return Err(Error::NotHonest(name.to_string()));
        }
    }
    if pi == qi {
        return Err(Error::OverlappingSets(p.to_string()));
    }
    let (ps, qs) = (
        d.variables()[pi].alphabet_size,
        d.variables()[qi].alphabet_size,
    );
    if ps != qs {
        return Err(Error::SizeMismatch {
            expected: ps,
            got: qs,
        });
    }
    let (filtered, survival_probability) = d
        .condition_on(|o| o[pi] == o[qi])
        .ok_or_else(|| Error::InvalidArgument(format!("{p} = {q} never happens")))?;
    Ok(FilterResult {
        filtered,
        survival_probability,
    })
}
