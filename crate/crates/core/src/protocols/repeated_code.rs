//! The repeated-code block protocol.
//!
//! The first honest variable (the broadcaster) draws a uniform bit `s`,
//! publishes `X_i = A_i ⊕ s` for each of `N` realizations, and every other
//! honest party accepts `s_r` only if `R_i ⊕ X_i` is the same for all `i`.
//! A block survives when every receiver accepts.
//!
//! Per realization the only thing that matters for acceptance is the
//! mismatch pattern `(A ⊕ R_1, A ⊕ R_2, ...)`: a block is accepted exactly
//! when the pattern is constant over the block. The exact analysis raises
//! per-pattern masses to the `N`-th power. Eve's view is her `N` symbols
//! plus the broadcast string; since the likelihood of a view only depends on
//! how often each `(e, x)` pair occurs, her information is summed over
//! those type classes instead of over all `(2|E|)^N` views.

use std::collections::BTreeMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::dist::JointDistribution;
use crate::error::{Error, Result};
use crate::measures::{clamp_nonnegative, entropy_of, Bits};
use crate::prob::Prob;
use crate::serde_fmt::{sig17, sig17_vec};
use crate::Budget;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ProtocolMethod {
    Exact,
    MonteCarlo,
}

/// Statistics of one protocol run at block length `N`. Probabilities are
/// conditioned on acceptance where the name says so.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ProtocolStats {
    pub block_length: usize,
    pub broadcaster: String,
    pub receivers: Vec<String>,
    #[serde(serialize_with = "sig17")]
    pub accept_probability: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub accept_probability_exact: Option<String>,
    #[serde(serialize_with = "sig17")]
    pub agree_probability_given_accept: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub agree_probability_exact: Option<String>,
    /// `P(s_r ≠ s | accepted)` for each receiver.
    #[serde(serialize_with = "sig17_vec")]
    pub receiver_error_probabilities: Vec<f64>,
    /// `I(s : Eve's view | accepted)`.
    pub eve_key_information: Bits,
    pub method: ProtocolMethod,
    pub trials: u64,
    pub accepted_trials: u64,
    /// Standard error of `accept_probability`.
    #[serde(serialize_with = "sig17")]
    pub std_error: f64,
    #[serde(serialize_with = "sig17")]
    pub agree_std_error: f64,
    #[serde(serialize_with = "sig17")]
    pub eve_std_error: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub eve_estimator: Option<String>,
}

impl ProtocolStats {
    /// One-way key-rate lower bound per realization:
    /// `accept · max(0, min_r I(s:s_r) − I(s:view)) / N`.
    pub fn key_rate_lower_bound(&self) -> f64 {
        let worst = self
            .receiver_error_probabilities
            .iter()
            .map(|&e| 1.0 - entropy_of([e, 1.0 - e]))
            .fold(f64::INFINITY, f64::min);
        let per_block = (worst - self.eve_key_information.0).max(0.0);
        self.accept_probability * per_block / self.block_length as f64
    }
}

/// Per-realization masses split by mismatch pattern, Eve symbol and the
/// broadcaster's symbol.
struct Layout {
    broadcaster: String,
    receivers: Vec<String>,
    honest: Vec<usize>,
    eve: Option<usize>,
    eve_size: usize,
    /// `weights[pattern][e][a]`
    weights: Vec<Vec<[Prob; 2]>>,
}

impl Layout {
    fn new(d: &JointDistribution) -> Result<Self> {
        let honest: Vec<usize> = d
            .variables()
            .iter()
            .enumerate()
            .filter(|(_, v)| !v.is_eve())
            .map(|(i, _)| i)
            .collect();
        if honest.len() < 2 {
            return Err(Error::WrongArity(
                "the repeated-code protocol needs at least two honest parties".into(),
            ));
        }
        for &i in &honest {
            let v = &d.variables()[i];
            if v.alphabet_size != 2 {
                return Err(Error::NonBinary(v.name.clone()));
            }
        }
        let eve = d.eve_index();
        let eve_size = eve.map_or(1, |e| d.variables()[e].alphabet_size);
        let patterns = 1usize << (honest.len() - 1);
        let mut weights = vec![vec![[Prob::ZERO; 2]; eve_size]; patterns];
        for (o, p) in d.iter() {
            let a = o[honest[0]];
            let pattern = pattern_of(o, &honest);
            let e = eve.map_or(0, |i| o[i]);
            let slot = &mut weights[pattern][e][a];
            *slot = slot.add(p);
        }
        let name = |i: usize| d.variables()[i].name.clone();
        Ok(Layout {
            broadcaster: name(honest[0]),
            receivers: honest[1..].iter().map(|&i| name(i)).collect(),
            honest,
            eve,
            eve_size,
            weights,
        })
    }

    fn pattern_mass(&self, pattern: usize) -> Prob {
        self.weights[pattern].iter().flatten().sum()
    }
}

/// Bit `r` is set when receiver `r` disagrees with the broadcaster.
fn pattern_of(o: &[usize], honest: &[usize]) -> usize {
    let a = o[honest[0]];
    honest[1..]
        .iter()
        .enumerate()
        .fold(0, |acc, (r, &i)| acc | ((a ^ o[i]) << r))
}

fn binomial(n: u128, k: u128) -> u128 {
    let k = k.min(n - k);
    (0..k).fold(1u128, |acc, i| acc.saturating_mul(n - i) / (i + 1))
}

/// Exact statistics of the repeated-code protocol at block length `n`.
///
/// `budget` caps the number of view type classes enumerated for Eve's
/// information.
pub fn repeated_code_exact(
    d: &JointDistribution,
    n: usize,
    budget: Budget,
) -> Result<ProtocolStats> {
    if n == 0 {
        return Err(Error::InvalidArgument(
            "block length must be at least 1".into(),
        ));
    }
    let layout = Layout::new(d)?;
    let patterns = layout.weights.len();
    let powered: Vec<Prob> = (0..patterns)
        .map(|pat| layout.pattern_mass(pat).powi(n as u32))
        .collect();
    let accept: Prob = powered.iter().sum();
    let agree = powered[0].div(&accept);
    let receiver_errors: Vec<f64> = (0..layout.receivers.len())
        .map(|r| {
            let wrong: Prob = (0..patterns)
                .filter(|pat| pat & (1 << r) != 0)
                .map(|pat| powered[pat])
                .sum();
            wrong.div(&accept).value()
        })
        .collect();
    let eve_info = eve_information_exact(&layout, n, accept.value(), budget)?;
    Ok(ProtocolStats {
        block_length: n,
        broadcaster: layout.broadcaster,
        receivers: layout.receivers,
        accept_probability: accept.value(),
        accept_probability_exact: accept.exact().map(|r| r.to_string()),
        agree_probability_given_accept: agree.value(),
        agree_probability_exact: agree.exact().map(|r| r.to_string()),
        receiver_error_probabilities: receiver_errors,
        eve_key_information: eve_info,
        method: ProtocolMethod::Exact,
        trials: 0,
        accepted_trials: 0,
        std_error: 0.0,
        agree_std_error: 0.0,
        eve_std_error: 0.0,
        eve_estimator: None,
    })
}

struct TypeWalk<'a> {
    /// `powers[symbol][pattern][s][c] = W_pattern(symbol, s)^c`
    powers: &'a [Vec<[Vec<f64>; 2]>],
    inv_factorial: &'a [f64],
    n: usize,
    patterns: usize,
    norm: f64,
    ps: [f64; 2],
    neg_cond_entropy: f64,
}

impl TypeWalk<'_> {
    /// Chooses the count of `symbol` given `remaining` positions left, with
    /// `partial[pattern][s]` the product over earlier symbols.
    fn walk(&mut self, symbol: usize, remaining: usize, partial: &[[f64; 2]], coef: f64) {
        let last = symbol + 1 == self.powers.len();
        let counts = if last {
            remaining..=remaining
        } else {
            0..=remaining
        };
        for c in counts {
            let next: Vec<[f64; 2]> = (0..self.patterns)
                .map(|pat| {
                    let p = &self.powers[symbol][pat];
                    [partial[pat][0] * p[0][c], partial[pat][1] * p[1][c]]
                })
                .collect();
            let coef = coef * self.inv_factorial[c];
            if last {
                self.leaf(&next, coef);
            } else {
                self.walk(symbol + 1, remaining - c, &next, coef);
            }
        }
    }

    fn leaf(&mut self, products: &[[f64; 2]], coef: f64) {
        // coef * n! is the number of sequences with this type
        let multiplicity = coef / self.inv_factorial[self.n];
        let joint: [f64; 2] =
            [0, 1].map(|s| products.iter().map(|p| p[s]).sum::<f64>() * 0.5 / self.norm);
        let view = joint[0] + joint[1];
        if view <= 0.0 {
            return;
        }
        for s in 0..2 {
            if joint[s] > 0.0 {
                self.ps[s] += multiplicity * joint[s];
                self.neg_cond_entropy += multiplicity * joint[s] * (joint[s] / view).log2();
            }
        }
    }
}

fn eve_information_exact(layout: &Layout, n: usize, accept: f64, budget: Budget) -> Result<Bits> {
    let patterns = layout.weights.len();
    // per-position view symbols (e, x) that can occur
    let mut symbols = Vec::new();
    for e in 0..layout.eve_size {
        for x in 0..2 {
            let table: Vec<[f64; 2]> = (0..patterns)
                .map(|pat| {
                    let w = &layout.weights[pat][e];
                    // x = a ⊕ s, so a = x ⊕ s
                    [w[x].value(), w[x ^ 1].value()]
                })
                .collect();
            if table.iter().any(|t| t[0] > 0.0 || t[1] > 0.0) {
                symbols.push(table);
            }
        }
    }
    let k = symbols.len() as u128;
    budget.check(binomial(n as u128 + k - 1, k - 1))?;
    let powers: Vec<Vec<[Vec<f64>; 2]>> = symbols
        .iter()
        .map(|table| {
            table
                .iter()
                .map(|w| [0, 1].map(|s| (0..=n).map(|c| w[s].powi(c as i32)).collect()))
                .collect()
        })
        .collect();
    let mut inv_factorial = vec![1.0; n + 1];
    for c in 1..=n {
        inv_factorial[c] = inv_factorial[c - 1] / c as f64;
    }
    let mut walk = TypeWalk {
        powers: &powers,
        inv_factorial: &inv_factorial,
        n,
        patterns,
        norm: accept,
        ps: [0.0; 2],
        neg_cond_entropy: 0.0,
    };
    walk.walk(0, n, &vec![[1.0; 2]; patterns], 1.0);
    let h_s = entropy_of(walk.ps);
    clamp_nonnegative(h_s + walk.neg_cond_entropy)
}

#[derive(Default)]
struct Tally {
    accepted: u64,
    agreed: u64,
    receiver_errors: Vec<u64>,
    /// Eve's view `(e_i * 2 + x_i)_i` -> counts for s = 0, 1
    views: BTreeMap<Vec<u32>, [u64; 2]>,
}

impl Tally {
    fn merge(mut self, other: Tally) -> Tally {
        self.accepted += other.accepted;
        self.agreed += other.agreed;
        if self.receiver_errors.len() < other.receiver_errors.len() {
            self.receiver_errors.resize(other.receiver_errors.len(), 0);
        }
        for (a, b) in self.receiver_errors.iter_mut().zip(other.receiver_errors) {
            *a += b;
        }
        for (view, counts) in other.views {
            let slot = self.views.entry(view).or_default();
            slot[0] += counts[0];
            slot[1] += counts[1];
        }
        self
    }
}

const TRIALS_PER_TASK: u64 = 2048;

/// Monte Carlo estimate of the same statistics.
///
/// Trial `t` uses a generator keyed by `(seed, t)`, so results depend only
/// on `(d, n, trials, seed)`. Eve's information is the plug-in estimate
/// with the Miller–Madow bias correction; it is still biased when views are
/// sparsely sampled.
pub fn repeated_code_monte_carlo(
    d: &JointDistribution,
    n: usize,
    trials: u64,
    seed: u64,
) -> Result<ProtocolStats> {
    if n == 0 {
        return Err(Error::InvalidArgument(
            "block length must be at least 1".into(),
        ));
    }
    if trials == 0 {
        return Err(Error::InvalidArgument(
            "at least one trial is required".into(),
        ));
    }
    let layout = Layout::new(d)?;
    let support: Vec<&Vec<usize>> = d.iter().map(|(o, _)| o).collect();
    let cumulative: Vec<f64> = d
        .iter()
        .scan(0.0, |acc, (_, p)| {
            *acc += p.value();
            Some(*acc)
        })
        .collect();
    let total = *cumulative.last().expect("nonempty support");
    let receivers = layout.receivers.len();

    let run_trial = |t: u64, tally: &mut Tally| {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(t);
        let s = rng.random::<bool>() as usize;
        let mut view = Vec::with_capacity(n);
        let mut keys: Vec<Option<usize>> = vec![None; receivers];
        let mut accepted = true;
        for _ in 0..n {
            let u = rng.random::<f64>() * total;
            let row = cumulative
                .partition_point(|&c| c <= u)
                .min(support.len() - 1);
            let o = support[row];
            let x = o[layout.honest[0]] ^ s;
            for (r, key) in keys.iter_mut().enumerate() {
                let candidate = o[layout.honest[r + 1]] ^ x;
                match key {
                    None => *key = Some(candidate),
                    Some(k) if *k != candidate => accepted = false,
                    _ => {}
                }
            }
            let e = layout.eve.map_or(0, |i| o[i]);
            view.push((e * 2 + x) as u32);
        }
        if !accepted {
            return;
        }
        tally.accepted += 1;
        let mut all_agree = true;
        for (r, key) in keys.iter().enumerate() {
            if key.expect("n >= 1") != s {
                tally.receiver_errors[r] += 1;
                all_agree = false;
            }
        }
        tally.agreed += all_agree as u64;
        tally.views.entry(view).or_default()[s] += 1;
    };

    let tasks = trials.div_ceil(TRIALS_PER_TASK);
    let tally = (0..tasks)
        .into_par_iter()
        .map(|task| {
            let mut tally = Tally {
                receiver_errors: vec![0; receivers],
                ..Tally::default()
            };
            let start = task * TRIALS_PER_TASK;
            for t in start..(start + TRIALS_PER_TASK).min(trials) {
                run_trial(t, &mut tally);
            }
            tally
        })
        .reduce(
            || Tally {
                receiver_errors: vec![0; receivers],
                ..Tally::default()
            },
            Tally::merge,
        );

    let accept = tally.accepted as f64 / trials as f64;
    let std_error = (accept * (1.0 - accept) / trials as f64).sqrt();
    let (agree, agree_std_error, receiver_errors) = if tally.accepted > 0 {
        let m = tally.accepted as f64;
        let agree = tally.agreed as f64 / m;
        (
            agree,
            (agree * (1.0 - agree) / m).sqrt(),
            tally
                .receiver_errors
                .iter()
                .map(|&c| c as f64 / m)
                .collect(),
        )
    } else {
        (0.0, 0.0, vec![0.0; receivers])
    };
    let (eve_info, eve_std_error) = plug_in_information(&tally.views, tally.accepted);
    Ok(ProtocolStats {
        block_length: n,
        broadcaster: layout.broadcaster,
        receivers: layout.receivers,
        accept_probability: accept,
        accept_probability_exact: None,
        agree_probability_given_accept: agree,
        agree_probability_exact: None,
        receiver_error_probabilities: receiver_errors,
        eve_key_information: Bits(eve_info),
        method: ProtocolMethod::MonteCarlo,
        trials,
        accepted_trials: tally.accepted,
        std_error,
        agree_std_error,
        eve_std_error,
        eve_estimator: Some(
            "plug-in with Miller-Madow correction; biased at small samples".to_string(),
        ),
    })
}

/// Miller–Madow corrected plug-in `I(s : view)` and its delta-method
/// standard error.
fn plug_in_information(views: &BTreeMap<Vec<u32>, [u64; 2]>, samples: u64) -> (f64, f64) {
    if samples == 0 {
        return (0.0, 0.0);
    }
    let n = samples as f64;
    let mut s_counts = [0u64; 2];
    for c in views.values() {
        s_counts[0] += c[0];
        s_counts[1] += c[1];
    }
    let mut info = 0.0;
    let mut second_moment = 0.0;
    let mut joint_cells = 0usize;
    for c in views.values() {
        let v = (c[0] + c[1]) as f64;
        for s in 0..2 {
            if c[s] == 0 {
                continue;
            }
            joint_cells += 1;
            let p = c[s] as f64 / n;
            let ratio = (c[s] as f64 * n / (s_counts[s] as f64 * v)).log2();
            info += p * ratio;
            second_moment += p * ratio * ratio;
        }
    }
    let s_cells = s_counts.iter().filter(|&&c| c > 0).count();
    let view_cells = views.len();
    let bias = (joint_cells as f64 - s_cells as f64 - view_cells as f64 + 1.0)
        / (2.0 * n * std::f64::consts::LN_2);
    let variance = ((second_moment - info * info) / n).max(0.0);
    ((info - bias).max(0.0), variance.sqrt())
}
