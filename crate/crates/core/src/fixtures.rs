//! The tripartite example distributions.
//!
//! `p1` is a six-row table over binary `A`, `B`, `C` and a five-symbol Eve:
//!
//! | A B C | E | P   |
//! |-------|---|-----|
//! | 0 0 0 | 0 | 1/6 |
//! | 0 0 1 | 1 | 1/6 |
//! | 0 1 0 | 2 | 1/6 |
//! | 1 0 1 | 3 | 1/6 |
//! | 1 1 0 | 4 | 1/6 |
//! | 1 1 1 | 0 | 1/6 |
//!
//! `p2(A,B,C,E) = p1(B,C,A,E)` and `p3(A,B,C,E) = p1(C,A,B,E)`; `pmix` is
//! their equal-weight mixture with Eve's tagged alphabet canonicalized.

use std::fmt;
use std::str::FromStr;

use crate::dist::{JointDistribution, VariableSpec};
use crate::error::Error;
use crate::prob::Prob;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum FixtureId {
    P1,
    P2,
    P3,
    Pmix,
}

impl FixtureId {
    pub const ALL: [FixtureId; 4] = [FixtureId::P1, FixtureId::P2, FixtureId::P3, FixtureId::Pmix];

    pub fn as_str(&self) -> &'static str {
        match self {
            FixtureId::P1 => "p1",
            FixtureId::P2 => "p2",
            FixtureId::P3 => "p3",
            FixtureId::Pmix => "pmix",
        }
    }
}

impl fmt::Display for FixtureId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for FixtureId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Error> {
        match s {
            "p1" => Ok(FixtureId::P1),
            "p2" => Ok(FixtureId::P2),
            "p3" => Ok(FixtureId::P3),
            "pmix" => Ok(FixtureId::Pmix),
            other => Err(Error::Parse(format!(
                "unknown fixture {other:?} (expected p1, p2, p3 or pmix)"
            ))),
        }
    }
}

/// `A → B → C → A`: the value held by `A` moves to `B`, and so on.
pub const CYCLE: [(&str, &str); 3] = [("A", "B"), ("B", "C"), ("C", "A")];

pub fn build(id: FixtureId) -> JointDistribution {
    match id {
        FixtureId::P1 => p1(),
        FixtureId::P2 => p1().permute(&CYCLE).expect("3-cycle is a bijection"),
        FixtureId::P3 => build(FixtureId::P2)
            .permute(&CYCLE)
            .expect("3-cycle is a bijection"),
        FixtureId::Pmix => {
            let parts = [
                build(FixtureId::P1),
                build(FixtureId::P2),
                build(FixtureId::P3),
            ];
            let third = Prob::ratio(1, 3);
            JointDistribution::mix(&parts, &[third; 3])
                .and_then(|m| m.eve_canonicalize())
                .expect("fixtures share honest variables")
        }
    }
}

fn abce(eve_size: usize) -> Vec<VariableSpec> {
    vec![
        VariableSpec::honest("A", 2),
        VariableSpec::honest("B", 2),
        VariableSpec::honest("C", 2),
        VariableSpec::eve("E", eve_size),
    ]
}

fn p1() -> JointDistribution {
    let sixth = Prob::ratio(1, 6);
    let rows = [
        [0, 0, 0, 0],
        [0, 0, 1, 1],
        [0, 1, 0, 2],
        [1, 0, 1, 3],
        [1, 1, 0, 4],
        [1, 1, 1, 0],
    ];
    JointDistribution::new(abce(5), rows.iter().map(|r| (r.to_vec(), sixth)).collect())
        .expect("p1 table is normalized")
}

/// The eight-row mixture table written out literally, for comparison
/// against [`build`]`(Pmix)`.
pub fn pmix_table() -> JointDistribution {
    let rows: [([usize; 4], Prob); 8] = [
        ([0, 0, 0, 0], Prob::ratio(1, 6)),
        ([0, 0, 1, 1], Prob::ratio(1, 9)),
        ([0, 1, 0, 2], Prob::ratio(1, 9)),
        ([0, 1, 1, 3], Prob::ratio(1, 9)),
        ([1, 0, 0, 4], Prob::ratio(1, 9)),
        ([1, 0, 1, 5], Prob::ratio(1, 9)),
        ([1, 1, 0, 6], Prob::ratio(1, 9)),
        ([1, 1, 1, 0], Prob::ratio(1, 6)),
    ];
    JointDistribution::new(
        abce(7),
        rows.iter().map(|(r, p)| (r.to_vec(), *p)).collect(),
    )
    .expect("pmix table is normalized")
}
