//! Bound-information certificates for three honest binary parties.
//!
//! A distribution is certified to carry bound information when
//!
//! 1. no pair of honest parties can distill a key, even helped by the third:
//!    zero-valued channels are exhibited for the cuts `AB | C` and `AC | B`,
//!    which covers every pair (A–B is split by `AC | B`, A–C and B–C by
//!    `AB | C`). Since the key rate is at most the intrinsic information, a
//!    zero witness proves a zero rate;
//! 2. the distribution cannot be created by local operations and public
//!    communication: with a private channel between B and C, the equality
//!    filter achieves a strictly positive key rate across `A | BC`, which is
//!    impossible for LOPC-creatable distributions.
//!
//! When condition 1 fails, the repeated-code protocol is run for increasing
//! block lengths to show that a key can actually be distilled.

use serde::Serialize;

use crate::dist::{JointDistribution, Splitting};
use crate::error::{Error, Result};
use crate::intrinsic::{intrinsic_info, IntrinsicConfig, IntrinsicResult};
use crate::measures::{ck_lower_bound, Bits};
use crate::protocols::{equality_filter, repeated_code_exact, ProtocolStats};
use crate::serde_fmt::sig17;
use crate::Budget;

#[derive(Debug, Clone)]
pub struct CertifyConfig {
    pub intrinsic: IntrinsicConfig,
    /// Intrinsic values at or below this count as zero; key rates must exceed
    /// it to count as positive.
    pub zero_tolerance: f64,
    /// Largest block length tried for the repeated-code protocol.
    pub max_block_length: usize,
    pub budget: Budget,
}

impl Default for CertifyConfig {
    fn default() -> Self {
        CertifyConfig {
            intrinsic: IntrinsicConfig {
                restarts: 64,
                ..IntrinsicConfig::default()
            },
            zero_tolerance: 1e-6,
            max_block_length: 8,
            budget: Budget::DEFAULT,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Verdict {
    BoundInformation,
    Distillable,
    NoSecretCorrelations,
    Undetermined,
}

#[derive(Debug, Clone, Serialize)]
pub struct SplittingEvidence {
    pub intrinsic: IntrinsicResult,
    /// `I(x:y|Ẽ)` recomputed from the embedded witness.
    pub recheck: Bits,
    pub zero_key_rate: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct PrivateChannelEvidence {
    pub intrinsic: IntrinsicResult,
    pub filter_pair: [String; 2],
    #[serde(serialize_with = "sig17")]
    pub survival_probability: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub survival_probability_exact: Option<String>,
    /// One-way key bits per surviving realization.
    pub filtered_key_bits: Bits,
    /// Survival probability times `filtered_key_bits`.
    pub key_rate: Bits,
    pub positive: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct ActivationEvidence {
    pub stats: Vec<ProtocolStats>,
    /// Key bits per realization certified at each block length.
    pub key_rate_lower_bounds: Vec<Bits>,
    pub distillable: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct Certificate {
    pub bound_information: bool,
    pub verdict: Verdict,
    pub reason: String,
    pub honest: Vec<String>,
    pub eve: String,
    pub zero_tolerance: f64,
    pub splittings_without_key: Vec<SplittingEvidence>,
    pub private_channel: PrivateChannelEvidence,
    /// Lower bound on the information of formation across the private-channel
    /// cut: the key rate achieved there.
    pub information_of_formation_lower_bound: Bits,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub activation: Option<ActivationEvidence>,
}

impl Certificate {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("certificate serializes")
    }
}

pub fn certify(d: &JointDistribution, config: &CertifyConfig) -> Result<Certificate> {
    let honest = d.honest_names();
    let eve = d
        .eve()
        .ok_or_else(|| Error::WrongArity("certificates need an eavesdropper variable".into()))?
        .name
        .clone();
    if honest.len() != 3 || d.variables().len() != 4 {
        return Err(Error::WrongArity(format!(
            "certificates cover three honest parties and one eavesdropper, got {} honest of {} variables",
            honest.len(),
            d.variables().len()
        )));
    }
    for name in &honest {
        if d.variable(name)?.alphabet_size != 2 {
            return Err(Error::NonBinary(name.to_string()));
        }
    }
    let (a, b, c) = (honest[0], honest[1], honest[2]);
    let tol = config.zero_tolerance;

    let mut splittings = Vec::new();
    for (x, y) in [([a, b], c), ([a, c], b)] {
        let intrinsic = intrinsic_info(d, &x, &[y], &eve, &config.intrinsic)?;
        let recheck = intrinsic.recheck(d)?;
        let zero_key_rate = intrinsic.value.0 <= tol && recheck.0 <= tol;
        splittings.push(SplittingEvidence {
            intrinsic,
            recheck,
            zero_key_rate,
        });
    }
    let all_zero = splittings.iter().all(|s| s.zero_key_rate);

    let intrinsic = intrinsic_info(d, &[a], &[b, c], &eve, &config.intrinsic)?;
    let (survival, filtered_key_bits) = match equality_filter(d, b, c) {
        Ok(f) => (
            f.survival_probability,
            ck_lower_bound(&f.filtered, &[a], &[b, c], &eve)?,
        ),
        // B and C never agree: nothing survives the filter
        Err(Error::InvalidArgument(_)) => (crate::prob::Prob::ZERO, Bits::ZERO),
        Err(e) => return Err(e),
    };
    let key_rate = Bits(survival.value() * filtered_key_bits.0);
    let positive = key_rate.0 > tol;
    let private_channel = PrivateChannelEvidence {
        intrinsic,
        filter_pair: [b.to_string(), c.to_string()],
        survival_probability: survival.value(),
        survival_probability_exact: survival.exact().map(|r| r.to_string()),
        filtered_key_bits,
        key_rate,
        positive,
    };

    let activation = if all_zero {
        None
    } else {
        let mut stats = Vec::new();
        let mut rates = Vec::new();
        for n in 1..=config.max_block_length {
            let s = repeated_code_exact(d, n, config.budget)?;
            rates.push(Bits(s.key_rate_lower_bound()));
            stats.push(s);
        }
        let distillable = rates.iter().any(|r| r.0 > tol);
        Some(ActivationEvidence {
            stats,
            key_rate_lower_bounds: rates,
            distillable,
        })
    };

    let cut = |x: &[&str], y: &[&str]| Splitting::new(x, y, &eve).to_string();
    let (verdict, reason) = if all_zero && positive {
        (
            Verdict::BoundInformation,
            format!(
                "zero-valued channels for {} and {} rule out keys between every pair; \
                 the equality filter on {b}={c} distills {:.6} key bits per realization across {}, \
                 so the distribution is not creatable by public communication",
                cut(&[a, b], &[c]),
                cut(&[a, c], &[b]),
                key_rate.0,
                cut(&[a], &[b, c]),
            ),
        )
    } else if activation.as_ref().is_some_and(|act| act.distillable) {
        let act = activation.as_ref().expect("checked above");
        let (best_n, best) = act
            .key_rate_lower_bounds
            .iter()
            .enumerate()
            .max_by(|x, y| x.1 .0.total_cmp(&y.1 .0))
            .expect("nonempty");
        (
            Verdict::Distillable,
            format!(
                "distillable: the repeated-code protocol at block length {} yields {:.6} key bits per realization",
                best_n + 1,
                best.0
            ),
        )
    } else if all_zero && private_channel.intrinsic.value.0 <= tol {
        (
            Verdict::NoSecretCorrelations,
            "no secret correlations: every intrinsic information vanishes and no positive rate was found"
                .to_string(),
        )
    } else {
        (
            Verdict::Undetermined,
            "undetermined: neither a bound-information nor a distillability proof was found"
                .to_string(),
        )
    };

    Ok(Certificate {
        bound_information: verdict == Verdict::BoundInformation,
        verdict,
        reason,
        honest: honest.iter().map(|s| s.to_string()).collect(),
        eve: eve.clone(),
        zero_tolerance: tol,
        splittings_without_key: splittings,
        information_of_formation_lower_bound: if positive { key_rate } else { Bits::ZERO },
        private_channel,
        activation,
    })
}
