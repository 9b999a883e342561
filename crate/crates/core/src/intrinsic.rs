//! Intrinsic information `I(X:Y↓E) = min over channels E → Ẽ of I(X:Y|Ẽ)`.
//!
//! Two searches are combined:
//!
//! - an exact search over every deterministic map `E → {0..m-1}`. Maps that
//!   induce the same partition of Eve's alphabet give the same objective, so
//!   only restricted growth strings are visited; each is the
//!   lexicographically smallest map of its partition, which keeps the
//!   "smallest map wins ties" rule intact.
//! - a random-restart coordinate descent over row-stochastic channels, where
//!   each row is improved by golden-section line search towards every vertex
//!   of the simplex.
//!
//! The reported value is the best found, i.e. an upper bound on the true
//! infimum. It is exact whenever a zero witness is found.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Exp1};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::dist::{Channel, JointDistribution, Splitting};
use crate::error::{Error, Result};
use crate::measures::{self, clamp_nonnegative, Bits};

/// Minimum improvement a line-search step must achieve to be accepted.
pub const IMPROVEMENT_TOLERANCE: f64 = 1e-12;

/// Values at or below this are reported as an exact zero.
pub const ZERO_TOLERANCE: f64 = 1e-9;

const GOLDEN_ITERATIONS: usize = 32;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SearchMethod {
    ExhaustiveDeterministic,
    ContinuousLocalSearch,
    Combined,
}

/// How to read [`IntrinsicResult::value`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum BoundKind {
    /// Best value found; the true minimum may be lower.
    UpperBound,
    /// A channel attaining zero was found, so the minimum is zero.
    ExactZero,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IntrinsicResult {
    pub splitting: Splitting,
    pub value: Bits,
    pub bound: BoundKind,
    pub witness: Channel,
    pub method: SearchMethod,
    pub restarts_used: usize,
    pub converged: bool,
}

impl IntrinsicResult {
    fn new(
        splitting: Splitting,
        value: f64,
        witness: Channel,
        method: SearchMethod,
        restarts_used: usize,
        converged: bool,
    ) -> Result<Self> {
        let value = clamp_nonnegative(value)?;
        let bound = if value.0 <= ZERO_TOLERANCE {
            BoundKind::ExactZero
        } else {
            BoundKind::UpperBound
        };
        Ok(IntrinsicResult {
            splitting,
            value,
            bound,
            witness,
            method,
            restarts_used,
            converged,
        })
    }

    /// Recomputes `I(x:y|Ẽ)` for the stored witness on `d`.
    pub fn recheck(&self, d: &JointDistribution) -> Result<Bits> {
        cmi_after_channel(
            d,
            &self.splitting.x(),
            &self.splitting.y(),
            &self.splitting.eve,
            &self.witness,
        )
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct IntrinsicConfig {
    /// Output alphabet of candidate channels; `None` means Eve's alphabet size.
    pub max_output_size: Option<usize>,
    pub restarts: usize,
    pub seed: u64,
    /// Maximum number of full sweeps per restart.
    pub max_iters: usize,
    /// Cap on the number of deterministic candidates.
    pub deterministic_budget: u64,
    /// Local search also runs the deterministic search when it has at most
    /// this many candidates.
    pub fold_deterministic_limit: u64,
}

impl Default for IntrinsicConfig {
    fn default() -> Self {
        IntrinsicConfig {
            max_output_size: None,
            restarts: 32,
            seed: 0,
            max_iters: 500,
            deterministic_budget: 10_000_000,
            fold_deterministic_limit: 100_000,
        }
    }
}

/// `I(x:y|Ẽ)` after passing `eve` through `ch`.
pub fn cmi_after_channel(
    d: &JointDistribution,
    x: &[&str],
    y: &[&str],
    eve: &str,
    ch: &Channel,
) -> Result<Bits> {
    Splitting::new(x, y, eve).check(d)?;
    let t = d.apply_channel(eve, ch)?;
    measures::conditional_mutual_information(&t, x, y, &[eve])
}

/// Dense form of the search objective: nonzero masses `p(x, y, e)` with `x`
/// and `y` compressed to the values that occur.
#[derive(Debug, Clone)]
pub struct CmiObjective {
    entries: Vec<(usize, usize, usize, f64)>,
    by_symbol: Vec<Vec<(usize, f64)>>,
    nx: usize,
    ny: usize,
    eve_size: usize,
}

impl CmiObjective {
    pub fn new(d: &JointDistribution, splitting: &Splitting) -> Result<Self> {
        splitting.check(d)?;
        let xi = d.indices_of(&splitting.x())?;
        let yi = d.indices_of(&splitting.y())?;
        let ei = d.index_of(&splitting.eve)?;
        let mut xs = std::collections::BTreeMap::new();
        let mut ys = std::collections::BTreeMap::new();
        let mut cells = std::collections::BTreeMap::new();
        for (o, p) in d.iter() {
            let xv: Vec<usize> = xi.iter().map(|&i| o[i]).collect();
            let yv: Vec<usize> = yi.iter().map(|&i| o[i]).collect();
            let next_x = xs.len();
            let x = *xs.entry(xv).or_insert(next_x);
            let next_y = ys.len();
            let y = *ys.entry(yv).or_insert(next_y);
            *cells.entry((x, y, o[ei])).or_insert(0.0) += p.value();
        }
        let eve_size = d.variable(&splitting.eve)?.alphabet_size;
        let entries: Vec<(usize, usize, usize, f64)> = cells
            .into_iter()
            .map(|((x, y, e), p)| (x, y, e, p))
            .collect();
        let ny = ys.len();
        let mut by_symbol = vec![Vec::new(); eve_size];
        for &(x, y, e, p) in &entries {
            by_symbol[e].push((x * ny + y, p));
        }
        Ok(CmiObjective {
            entries,
            by_symbol,
            nx: xs.len(),
            ny,
            eve_size,
        })
    }

    pub fn eve_size(&self) -> usize {
        self.eve_size
    }

    /// Eve symbols carrying positive mass.
    fn active_symbols(&self) -> Vec<bool> {
        let mut active = vec![false; self.eve_size];
        for &(_, _, e, _) in &self.entries {
            active[e] = true;
        }
        active
    }

    fn cell_count(&self) -> usize {
        self.nx * self.ny
    }

    /// `(x·ny + y, p(x, y, e))` for every nonzero mass of symbol `e`.
    fn symbol_cells(&self, e: usize) -> &[(usize, f64)] {
        &self.by_symbol[e]
    }

    /// Joint cells `q(x, y, t)` summed over every Eve symbol except `skip`.
    fn cells_without(&self, rows: &[f64], m: usize, skip: usize, out: &mut [f64]) {
        out.iter_mut().for_each(|v| *v = 0.0);
        for &(x, y, e, p) in &self.entries {
            if e == skip {
                continue;
            }
            let base = (x * self.ny + y) * m;
            for (slot, w) in out[base..base + m]
                .iter_mut()
                .zip(&rows[e * m..(e + 1) * m])
            {
                *slot += p * w;
            }
        }
    }

    /// Output symbols ordered by the slope of the objective when row `e`
    /// (currently `row`) moves towards them, steepest descent first. `base`
    /// holds the cells of every other symbol.
    fn vertex_order(&self, base: &[f64], row: &[f64], m: usize, e: usize) -> Vec<usize> {
        let (nx, ny) = (self.nx, self.ny);
        let mut q = base.to_vec();
        for &(cell, p) in &self.by_symbol[e] {
            for (j, w) in row.iter().enumerate() {
                q[cell * m + j] += p * w;
            }
        }
        let mut qxt = vec![0.0; nx * m];
        let mut qyt = vec![0.0; ny * m];
        let mut qt = vec![0.0; m];
        for cell in 0..nx * ny {
            for t in 0..m {
                let v = q[cell * m + t];
                qxt[(cell / ny) * m + t] += v;
                qyt[(cell % ny) * m + t] += v;
                qt[t] += v;
            }
        }
        // an unused output receives the conditional distribution of e itself
        let pe: f64 = self.by_symbol[e].iter().map(|c| c.1).sum();
        let mut px = vec![0.0; nx];
        let mut py = vec![0.0; ny];
        for &(cell, p) in &self.by_symbol[e] {
            px[cell / ny] += p;
            py[cell % ny] += p;
        }
        let slope: Vec<f64> = (0..m)
            .map(|t| {
                self.by_symbol[e]
                    .iter()
                    .map(|&(cell, p)| {
                        let (x, y) = (cell / ny, cell % ny);
                        let ratio = if qt[t] > 0.0 {
                            q[cell * m + t] * qt[t] / (qxt[x * m + t] * qyt[y * m + t])
                        } else {
                            p * pe / (px[x] * py[y])
                        };
                        if ratio > 0.0 {
                            p * ratio.log2()
                        } else {
                            f64::NEG_INFINITY
                        }
                    })
                    .sum()
            })
            .collect();
        let mut order: Vec<usize> = (0..m).collect();
        order.sort_by(|&a, &b| slope[a].total_cmp(&slope[b]));
        order
    }

    /// `I(X:Y|T)` from joint cells `q(x, y, t)`; `marginals` is scratch space.
    fn cmi_from_cells(&self, q: &[f64], m: usize, marginals: &mut Vec<f64>) -> f64 {
        let (nx, ny) = (self.nx, self.ny);
        marginals.clear();
        marginals.resize((nx + ny + 1) * m, 0.0);
        let (qxt, rest) = marginals.split_at_mut(nx * m);
        let (qyt, qt) = rest.split_at_mut(ny * m);
        let mut h_xyt = 0.0;
        for x in 0..nx {
            for y in 0..ny {
                for t in 0..m {
                    let v = q[(x * ny + y) * m + t];
                    if v > 0.0 {
                        h_xyt -= v * v.log2();
                        qxt[x * m + t] += v;
                        qyt[y * m + t] += v;
                        qt[t] += v;
                    }
                }
            }
        }
        let h = |cells: &[f64]| -> f64 {
            cells
                .iter()
                .filter(|&&v| v > 0.0)
                .map(|&v| -v * v.log2())
                .sum()
        };
        h(qxt) + h(qyt) - h_xyt - h(qt)
    }

    /// Objective for a row-major `eve_size × m` stochastic matrix.
    pub fn evaluate_rows(&self, rows: &[f64], m: usize) -> f64 {
        let mut q = vec![0.0; self.nx * self.ny * m];
        for &(x, y, e, p) in &self.entries {
            let base = (x * self.ny + y) * m;
            let row = &rows[e * m..(e + 1) * m];
            for (slot, w) in q[base..base + m].iter_mut().zip(row) {
                *slot += p * w;
            }
        }
        self.cmi_from_cells(&q, m, &mut Vec::new())
    }

    /// Objective for the deterministic map `e -> map[e]` into `m` outputs.
    pub fn evaluate_map(&self, map: &[usize], m: usize) -> f64 {
        let mut q = vec![0.0; self.nx * self.ny * m];
        for &(x, y, e, p) in &self.entries {
            q[(x * self.ny + y) * m + map[e]] += p;
        }
        self.cmi_from_cells(&q, m, &mut Vec::new())
    }

    pub fn evaluate(&self, ch: &Channel) -> Result<f64> {
        if ch.input_size() != self.eve_size {
            return Err(Error::SizeMismatch {
                expected: self.eve_size,
                got: ch.input_size(),
            });
        }
        let rows: Vec<f64> = ch.rows().iter().flatten().copied().collect();
        Ok(self.evaluate_rows(&rows, ch.output_size()))
    }
}

/// Number of set partitions of `k` symbols into at most `m` blocks.
pub fn partition_count(k: usize, m: usize) -> u128 {
    // Stirling numbers of the second kind, row by row.
    let mut row = vec![0u128; m + 1];
    row[0] = 1;
    for _ in 0..k {
        let mut next = vec![0u128; m + 1];
        for j in 1..=m {
            next[j] = (j as u128)
                .saturating_mul(row[j])
                .saturating_add(row[j - 1]);
        }
        row = next;
    }
    row.iter().skip(1).fold(0u128, |a, b| a.saturating_add(*b))
}

fn resolve_output_size(config: &IntrinsicConfig, eve_size: usize) -> Result<usize> {
    let m = config.max_output_size.unwrap_or(eve_size);
    if m == 0 {
        return Err(Error::InvalidArgument(
            "output alphabet must be nonempty".into(),
        ));
    }
    Ok(m)
}

/// Exact minimum over all deterministic maps `E → {0..max_output_size-1}`.
/// Ties go to the lexicographically smallest map.
pub fn min_over_deterministic(
    d: &JointDistribution,
    x: &[&str],
    y: &[&str],
    eve: &str,
    config: &IntrinsicConfig,
) -> Result<IntrinsicResult> {
    let splitting = Splitting::new(x, y, eve);
    let objective = CmiObjective::new(d, &splitting)?;
    deterministic_search(&objective, splitting, config)
}

fn deterministic_search(
    objective: &CmiObjective,
    splitting: Splitting,
    config: &IntrinsicConfig,
) -> Result<IntrinsicResult> {
    let k = objective.eve_size();
    let m = resolve_output_size(config, k)?;
    let count = partition_count(k, m);
    if count > config.deterministic_budget as u128 {
        return Err(Error::BudgetExceeded {
            needed: count,
            budget: config.deterministic_budget,
        });
    }
    // restricted growth strings in lexicographic order
    let mut map = vec![0usize; k];
    let mut prefix_max = vec![0usize; k];
    let mut best = (objective.evaluate_map(&map, m), map.clone());
    loop {
        // advance to the next restricted growth string with labels < m
        let mut i = k;
        let advanced = loop {
            if i <= 1 {
                break false;
            }
            i -= 1;
            let limit = (prefix_max[i - 1] + 1).min(m - 1);
            if map[i] < limit {
                map[i] += 1;
                prefix_max[i] = prefix_max[i - 1].max(map[i]);
                for j in i + 1..k {
                    map[j] = 0;
                    prefix_max[j] = prefix_max[i];
                }
                break true;
            }
        };
        if !advanced {
            break;
        }
        let v = objective.evaluate_map(&map, m);
        if v < best.0 - IMPROVEMENT_TOLERANCE {
            best = (v, map.clone());
        }
    }
    let witness = Channel::deterministic(&best.1, m)?;
    IntrinsicResult::new(
        splitting,
        best.0,
        witness,
        SearchMethod::ExhaustiveDeterministic,
        0,
        true,
    )
}

struct RestartOutcome {
    value: f64,
    rows: Vec<f64>,
    converged: bool,
}

fn random_rows(rng: &mut ChaCha8Rng, k: usize, m: usize) -> Vec<f64> {
    let mut rows = Vec::with_capacity(k * m);
    for _ in 0..k {
        let draws: Vec<f64> = (0..m).map(|_| Exp1.sample(rng)).collect();
        let total: f64 = draws.iter().sum();
        rows.extend(draws.iter().map(|v| v / total));
    }
    rows
}

/// Minimizes `f` on `[0, 1]` by golden-section search; returns `(t, f(t))`.
fn golden_section(mut f: impl FnMut(f64) -> f64) -> (f64, f64) {
    let ratio = (5f64.sqrt() - 1.0) / 2.0;
    let (mut a, mut b) = (0.0, 1.0);
    let mut c = b - ratio * (b - a);
    let mut d = a + ratio * (b - a);
    let (mut fc, mut fd) = (f(c), f(d));
    for _ in 0..GOLDEN_ITERATIONS {
        if fc <= fd {
            b = d;
            d = c;
            fd = fc;
            c = b - ratio * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + ratio * (b - a);
            fd = f(d);
        }
    }
    if fc <= fd {
        (c, fc)
    } else {
        (d, fd)
    }
}

fn descend(objective: &CmiObjective, m: usize, rows: Vec<f64>, max_iters: usize) -> RestartOutcome {
    let k = objective.eve_size();
    let active = objective.active_symbols();
    let mut rows = rows;
    let mut current = objective.evaluate_rows(&rows, m);
    let mut converged = false;
    let mut base = vec![0.0; objective.cell_count() * m];
    let mut scratch = base.clone();
    let mut marginals = Vec::new();
    for _ in 0..max_iters {
        let mut improved = false;
        for e in (0..k).filter(|&e| active[e]) {
            // cells contributed by every symbol except e stay fixed on the line
            objective.cells_without(&rows, m, e, &mut base);
            let order = objective.vertex_order(&base, &rows[e * m..(e + 1) * m], m, e);
            for vertex in order {
                let start: Vec<f64> = rows[e * m..(e + 1) * m].to_vec();
                let point = |t: f64, j: usize| {
                    let target = if j == vertex { 1.0 } else { 0.0 };
                    (1.0 - t) * start[j] + t * target
                };
                let mut line = |t: f64| {
                    scratch.copy_from_slice(&base);
                    for &(cell, p) in objective.symbol_cells(e) {
                        for j in 0..m {
                            scratch[cell * m + j] += p * point(t, j);
                        }
                    }
                    objective.cmi_from_cells(&scratch, m, &mut marginals)
                };
                let (mut t, mut value) = golden_section(&mut line);
                let at_vertex = line(1.0);
                if at_vertex <= value {
                    (t, value) = (1.0, at_vertex);
                }
                if value < current - IMPROVEMENT_TOLERANCE {
                    let row = &mut rows[e * m..(e + 1) * m];
                    for (j, slot) in row.iter_mut().enumerate() {
                        *slot = point(t, j);
                    }
                    let total: f64 = row.iter().sum();
                    row.iter_mut().for_each(|v| *v /= total);
                    current = objective.evaluate_rows(&rows, m);
                    improved = true;
                    break;
                }
            }
        }
        if !improved {
            converged = true;
            break;
        }
    }
    RestartOutcome {
        value: current,
        rows,
        converged,
    }
}

/// Random-restart coordinate descent over stochastic channels.
///
/// Restart `r` draws its starting channel from a generator keyed by
/// `(seed, r)`, so the result is reproducible regardless of how restarts are
/// scheduled. When the deterministic search is small enough it is folded in
/// and can supply the witness.
pub fn local_search(
    d: &JointDistribution,
    x: &[&str],
    y: &[&str],
    eve: &str,
    config: &IntrinsicConfig,
) -> Result<IntrinsicResult> {
    let splitting = Splitting::new(x, y, eve);
    let objective = CmiObjective::new(d, &splitting)?;
    let continuous = continuous_search(&objective, splitting.clone(), config)?;
    let k = objective.eve_size();
    let m = resolve_output_size(config, k)?;
    if partition_count(k, m) <= config.fold_deterministic_limit as u128 {
        let det = deterministic_search(&objective, splitting, config)?;
        if det.value.0 <= continuous.value.0 + IMPROVEMENT_TOLERANCE {
            return Ok(IntrinsicResult {
                method: SearchMethod::Combined,
                restarts_used: continuous.restarts_used,
                ..det
            });
        }
    }
    Ok(continuous)
}

fn continuous_search(
    objective: &CmiObjective,
    splitting: Splitting,
    config: &IntrinsicConfig,
) -> Result<IntrinsicResult> {
    if config.restarts == 0 {
        return Err(Error::InvalidArgument(
            "at least one restart is required".into(),
        ));
    }
    let k = objective.eve_size();
    let m = resolve_output_size(config, k)?;
    let outcomes: Vec<RestartOutcome> = (0..config.restarts)
        .into_par_iter()
        .map(|r| {
            let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
            rng.set_stream(r as u64);
            let start = random_rows(&mut rng, k, m);
            descend(objective, m, start, config.max_iters)
        })
        .collect();
    // first restart wins ties, independent of scheduling
    let best = outcomes
        .into_iter()
        .reduce(|best, o| if o.value < best.value { o } else { best })
        .expect("at least one restart");
    let rows = best.rows.chunks(m).map(<[f64]>::to_vec).collect();
    let witness = Channel::new(k, m, rows)?;
    IntrinsicResult::new(
        splitting,
        best.value,
        witness,
        SearchMethod::ContinuousLocalSearch,
        config.restarts,
        best.converged,
    )
}

/// The toolkit's intrinsic-information estimate: the better of the
/// deterministic and continuous searches.
pub fn intrinsic_info(
    d: &JointDistribution,
    x: &[&str],
    y: &[&str],
    eve: &str,
    config: &IntrinsicConfig,
) -> Result<IntrinsicResult> {
    let splitting = Splitting::new(x, y, eve);
    let objective = CmiObjective::new(d, &splitting)?;
    let det = deterministic_search(&objective, splitting.clone(), config)?;
    if det.bound == BoundKind::ExactZero {
        return Ok(det);
    }
    let cont = continuous_search(&objective, splitting, config)?;
    if det.value.0 <= cont.value.0 + IMPROVEMENT_TOLERANCE {
        Ok(IntrinsicResult {
            restarts_used: cont.restarts_used,
            ..det
        })
    } else {
        Ok(cont)
    }
}
