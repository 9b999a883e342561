//! The `X1,X2:Y1|Z1` measure grammar.

use std::fmt;

use serde::Serialize;
use skat_core::measures::{conditional_mutual_information, entropy, mutual_information};
use skat_core::{Bits, JointDistribution};

use crate::error::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Kind {
    Entropy,
    MutualInformation,
    ConditionalMutualInformation,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Measure {
    pub kind: Kind,
    pub x: Vec<String>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub y: Vec<String>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub z: Vec<String>,
}

impl Measure {
    pub fn parse(expr: &str) -> Result<Self, CliError> {
        let bad = |why: &str| CliError::Usage(format!("bad measure {expr:?}: {why}"));
        let (body, cond) = match expr.split_once('|') {
            Some((b, c)) => (b, Some(c)),
            None => (expr, None),
        };
        let set = |s: &str| -> Result<Vec<String>, CliError> {
            let names: Vec<String> = s.split(',').map(|n| n.trim().to_string()).collect();
            if names.iter().any(String::is_empty) {
                return Err(bad("empty variable name"));
            }
            for (i, n) in names.iter().enumerate() {
                if names[..i].contains(n) {
                    return Err(bad(&format!("{n} listed twice")));
                }
            }
            Ok(names)
        };
        let z = match cond {
            Some(c) if c.contains('|') => return Err(bad("more than one '|'")),
            Some(c) => set(c)?,
            None => Vec::new(),
        };
        match body.split(':').collect::<Vec<_>>()[..] {
            [x] => {
                if cond.is_some() {
                    return Err(bad("conditioning needs the form X:Y|Z"));
                }
                Ok(Measure {
                    kind: Kind::Entropy,
                    x: set(x)?,
                    y: Vec::new(),
                    z,
                })
            }
            [x, y] => Ok(Measure {
                kind: if cond.is_some() {
                    Kind::ConditionalMutualInformation
                } else {
                    Kind::MutualInformation
                },
                x: set(x)?,
                y: set(y)?,
                z,
            }),
            _ => Err(bad("more than one ':'")),
        }
    }

    /// Parses `expr` and insists on `kind`.
    pub fn parse_as(expr: &str, kind: Kind) -> Result<Self, CliError> {
        let m = Measure::parse(expr)?;
        if m.kind != kind {
            let want = match kind {
                Kind::Entropy => "a bare set X",
                Kind::MutualInformation => "X:Y",
                Kind::ConditionalMutualInformation => "X:Y|Z",
            };
            return Err(CliError::Usage(format!(
                "bad measure {expr:?}: expected {want}"
            )));
        }
        Ok(m)
    }

    pub fn evaluate(&self, d: &JointDistribution) -> skat_core::Result<Bits> {
        fn names(v: &[String]) -> Vec<&str> {
            v.iter().map(String::as_str).collect()
        }
        let (x, y, z) = (names(&self.x), names(&self.y), names(&self.z));
        match self.kind {
            Kind::Entropy => entropy(d, &x),
            Kind::MutualInformation => mutual_information(d, &x, &y),
            Kind::ConditionalMutualInformation => conditional_mutual_information(d, &x, &y, &z),
        }
    }
}

impl fmt::Display for Measure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let x = self.x.join(",");
        match self.kind {
            Kind::Entropy => write!(f, "H({x})"),
            Kind::MutualInformation => write!(f, "I({x}:{})", self.y.join(",")),
            Kind::ConditionalMutualInformation => {
                write!(f, "I({x}:{}|{})", self.y.join(","), self.z.join(","))
            }
        }
    }
}
