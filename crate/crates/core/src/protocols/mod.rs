//! Key-distillation protocols and bound-information certificates.

mod certificate;
mod filter;
mod repeated_code;

pub use certificate::{
    certify, ActivationEvidence, Certificate, CertifyConfig, PrivateChannelEvidence,
    SplittingEvidence, Verdict,
};
pub use filter::{equality_filter, FilterResult};
pub use repeated_code::{
    repeated_code_exact, repeated_code_monte_carlo, ProtocolMethod, ProtocolStats,
};
