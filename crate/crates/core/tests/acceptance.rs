//! Acceptance checks. Prints one PASS/FAIL line per criterion and exits
//! non-zero if any criterion fails.

use std::collections::BTreeMap;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::process::ExitCode;
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use skat_core::dist::JointDistribution as Dist;
use skat_core::fixtures::{self, FixtureId};
use skat_core::intrinsic::{intrinsic_info, local_search, min_over_deterministic, partition_count};
use skat_core::measures::{conditional_mutual_information, mutual_information};
use skat_core::protocols::{
    certify, equality_filter, repeated_code_exact, repeated_code_monte_carlo, Verdict,
};
use skat_core::{
    Budget, CertifyConfig, Channel, IntrinsicConfig, Prob, ProtocolStats, Ratio, SearchMethod,
    VariableSpec,
};

#[derive(Default)]
struct Check {
    failures: Vec<String>,
    notes: Vec<String>,
}

impl Check {
    fn ensure(&mut self, ok: bool, what: impl FnOnce() -> String) {
        if !ok {
            self.failures.push(what());
        }
    }

    fn close(&mut self, label: &str, got: f64, want: f64, tol: f64) {
        self.ensure((got - want).abs() <= tol, || {
            format!("{label}: got {got:.17}, want {want:.17} within {tol:e}")
        });
    }

    fn below(&mut self, label: &str, got: f64, limit: f64) {
        self.ensure(got < limit, || {
            format!("{label}: {got:.17} is not below {limit}")
        });
    }

    fn above(&mut self, label: &str, got: f64, limit: f64) {
        self.ensure(got > limit, || {
            format!("{label}: {got:.17} does not exceed {limit}")
        });
    }

    fn in_time(&mut self, label: &str, elapsed: Duration, limit: Duration) {
        self.notes.push(format!("{label} {:.3?}", elapsed));
        self.ensure(elapsed < limit, || {
            format!("{label} took {elapsed:.3?}, limit {limit:?}")
        });
    }
}

fn p1() -> Dist {
    let rows = [
        [0, 0, 0, 0],
        [0, 0, 1, 1],
        [0, 1, 0, 2],
        [1, 0, 1, 3],
        [1, 1, 0, 4],
        [1, 1, 1, 0],
    ];
    table(
        5,
        rows.iter()
            .map(|r| (r.to_vec(), Prob::ratio(1, 6)))
            .collect(),
    )
}

fn pmix_literal() -> Dist {
    let rows = [
        ([0, 0, 0, 0], 6),
        ([0, 0, 1, 1], 9),
        ([0, 1, 0, 2], 9),
        ([0, 1, 1, 3], 9),
        ([1, 0, 0, 4], 9),
        ([1, 0, 1, 5], 9),
        ([1, 1, 0, 6], 9),
        ([1, 1, 1, 0], 6),
    ];
    table(
        7,
        rows.iter()
            .map(|(r, d)| (r.to_vec(), Prob::ratio(1, *d)))
            .collect(),
    )
}

fn table(eve: usize, entries: Vec<(Vec<usize>, Prob)>) -> Dist {
    let vars = vec![
        VariableSpec::honest("A", 2),
        VariableSpec::honest("B", 2),
        VariableSpec::honest("C", 2),
        VariableSpec::eve("E", eve),
    ];
    Dist::new(vars, entries).unwrap()
}

/// Rearranges the honest columns: `P'(a, b, c, e) = P(o)` where `o` is
/// `(a, b, c)` read in the order given by `from`.
fn reorder(d: &Dist, from: [usize; 3]) -> Dist {
    let entries = d
        .iter()
        .map(|(o, p)| {
            let mut out = vec![0; 4];
            for (slot, &src) in from.iter().enumerate() {
                out[src] = o[slot];
            }
            out[3] = o[3];
            (out, *p)
        })
        .collect();
    Dist::new(d.variables().to_vec(), entries).unwrap()
}

/// `I(X:Y|Z)` straight from the probability table.
fn cmi_oracle(d: &Dist, x: &[&str], y: &[&str], z: &[&str]) -> f64 {
    let idx = |names: &[&str]| {
        names
            .iter()
            .map(|n| d.index_of(n).unwrap())
            .collect::<Vec<_>>()
    };
    let (xi, yi, zi) = (idx(x), idx(y), idx(z));
    let key = |o: &[usize], sets: &[&[usize]]| -> Vec<usize> {
        sets.iter().flat_map(|s| s.iter().map(|&i| o[i])).collect()
    };
    let mut xyz = BTreeMap::new();
    let mut xz = BTreeMap::new();
    let mut yz = BTreeMap::new();
    let mut zz = BTreeMap::new();
    for (o, p) in d.iter() {
        let p = p.value();
        *xyz.entry(key(o, &[&xi, &yi, &zi])).or_insert(0.0) += p;
        *xz.entry(key(o, &[&xi, &zi])).or_insert(0.0) += p;
        *yz.entry(key(o, &[&yi, &zi])).or_insert(0.0) += p;
        *zz.entry(key(o, &[&zi])).or_insert(0.0) += p;
    }
    let mut total = 0.0;
    for (o, p) in d.iter() {
        let p = p.value();
        if p == 0.0 {
            continue;
        }
        let pxyz = xyz[&key(o, &[&xi, &yi, &zi])];
        let pxz = xz[&key(o, &[&xi, &zi])];
        let pyz = yz[&key(o, &[&yi, &zi])];
        let pz = zz[&key(o, &[&zi])];
        total += p * (pxyz * pz / (pxz * pyz)).log2();
    }
    total
}

fn random_dist(rng: &mut ChaCha8Rng, honest: &[usize], eve: usize, density: f64) -> Dist {
    let mut vars: Vec<VariableSpec> = honest
        .iter()
        .enumerate()
        .map(|(i, &s)| VariableSpec::honest(((b'A' + i as u8) as char).to_string(), s))
        .collect();
    vars.push(VariableSpec::eve("E", eve));
    let sizes: Vec<usize> = vars.iter().map(|v| v.alphabet_size).collect();
    let total: usize = sizes.iter().product();
    let mut entries = Vec::new();
    for code in 0..total {
        if rng.random::<f64>() > density {
            continue;
        }
        let mut o = vec![0; sizes.len()];
        let mut rest = code;
        for (slot, &s) in o.iter_mut().zip(&sizes).rev() {
            *slot = rest % s;
            rest /= s;
        }
        entries.push((o, rng.random::<f64>() + 0.05));
    }
    if entries.is_empty() {
        entries.push((vec![0; sizes.len()], 1.0));
    }
    let sum: f64 = entries.iter().map(|e| e.1).sum();
    let entries = entries
        .into_iter()
        .map(|(o, w)| (o, Prob::from_f64(w / sum)))
        .collect();
    Dist::new(vars, entries).unwrap()
}

/// Repeated-code statistics by enumerating every block and every masking bit.
struct Enumerated {
    accept: f64,
    agree: f64,
    errors: Vec<f64>,
    eve: f64,
}

fn enumerate_repeated_code(d: &Dist, n: usize) -> Enumerated {
    let honest: Vec<usize> = d
        .variables()
        .iter()
        .enumerate()
        .filter(|(_, v)| !v.is_eve())
        .map(|(i, _)| i)
        .collect();
    let eve = d.eve_index().unwrap();
    let support: Vec<(&Vec<usize>, f64)> = d.iter().map(|(o, p)| (o, p.value())).collect();
    let receivers = honest.len() - 1;
    let mut accept = 0.0;
    let mut agree = 0.0;
    let mut errors = vec![0.0; receivers];
    let mut joint: BTreeMap<(Vec<usize>, usize), f64> = BTreeMap::new();
    let mut idx = vec![0usize; n];
    loop {
        let block: Vec<&Vec<usize>> = idx.iter().map(|&i| support[i].0).collect();
        let p: f64 = idx.iter().map(|&i| support[i].1).product();
        for s in 0..2 {
            let w = p / 2.0;
            let x: Vec<usize> = block.iter().map(|o| o[honest[0]] ^ s).collect();
            let mut keys = Vec::new();
            let mut ok = true;
            for &r in &honest[1..] {
                let first = block[0][r] ^ x[0];
                ok &= block.iter().zip(&x).all(|(o, xi)| o[r] ^ xi == first);
                keys.push(first);
            }
            if !ok {
                continue;
            }
            accept += w;
            if keys.iter().all(|&k| k == s) {
                agree += w;
            }
            for (r, &k) in keys.iter().enumerate() {
                if k != s {
                    errors[r] += w;
                }
            }
            let mut view: Vec<usize> = block.iter().map(|o| o[eve]).collect();
            view.extend(&x);
            *joint.entry((view, s)).or_insert(0.0) += w;
        }
        let mut k = n;
        loop {
            if k == 0 {
                let h = |masses: Vec<f64>| -> f64 {
                    masses
                        .into_iter()
                        .filter(|&v| v > 0.0)
                        .map(|v| {
                            let q = v / accept;
                            -q * q.log2()
                        })
                        .sum()
                };
                let mut views: BTreeMap<Vec<usize>, f64> = BTreeMap::new();
                let mut bits: BTreeMap<usize, f64> = BTreeMap::new();
                for ((v, s), w) in &joint {
                    *views.entry(v.clone()).or_insert(0.0) += w;
                    *bits.entry(*s).or_insert(0.0) += w;
                }
                return Enumerated {
                    accept,
                    agree: agree / accept,
                    errors: errors.iter().map(|e| e / accept).collect(),
                    eve: h(views.into_values().collect()) + h(bits.into_values().collect())
                        - h(joint.into_values().collect()),
                };
            }
            k -= 1;
            idx[k] += 1;
            if idx[k] < support.len() {
                break;
            }
            idx[k] = 0;
        }
    }
}

fn closed_form_agreement(n: i32) -> f64 {
    let good = (2.0f64 / 6.0).powi(n);
    good / (good + 3.0 * (2.0f64 / 9.0).powi(n))
}

fn criterion_1(c: &mut Check) {
    let d = fixtures::build(FixtureId::P1);
    let mut times = Vec::new();
    let mut values = (0.0, 0.0);
    for _ in 0..11 {
        let t = Instant::now();
        let ab_c = conditional_mutual_information(&d, &["A", "B"], &["C"], &["E"]).unwrap();
        let bc_a = conditional_mutual_information(&d, &["B", "C"], &["A"], &["E"]).unwrap();
        times.push(t.elapsed());
        values = (ab_c.0, bc_a.0);
    }
    times.sort();
    c.close("I(AB:C|E)", values.0, 1.0 / 3.0, 1e-12);
    c.close("I(BC:A|E)", values.1, 1.0 / 3.0, 1e-12);
    c.close(
        "oracle I(AB:C|E)",
        cmi_oracle(&p1(), &["A", "B"], &["C"], &["E"]),
        1.0 / 3.0,
        1e-12,
    );
    c.in_time("median", times[times.len() / 2], Duration::from_millis(1));
}

fn criterion_2(c: &mut Check) {
    let d = fixtures::build(FixtureId::P1);
    // 1 -> 0, 4 -> 0, everything else fixed
    let map = Channel::deterministic(&[0, 0, 2, 3, 0], 5).unwrap();
    let merged = d.apply_channel("E", &map).unwrap();
    let v = conditional_mutual_information(&merged, &["A", "B"], &["C"], &["E"]).unwrap();
    c.close("I(AB:C|Ẽ)", v.0, 0.0, 1e-12);
    c.close(
        "oracle I(AB:C|Ẽ)",
        cmi_oracle(&merged, &["A", "B"], &["C"], &["E"]),
        0.0,
        1e-12,
    );
}

fn criterion_3(c: &mut Check) {
    let d = fixtures::build(FixtureId::P1);
    let config = IntrinsicConfig {
        restarts: 64,
        ..IntrinsicConfig::default()
    };
    let t = Instant::now();
    c.ensure(partition_count(5, 5) <= 5u128.pow(5), || {
        "too many deterministic candidates".into()
    });
    for (x, y) in [(["A", "B"], "C"), (["A", "C"], "B")] {
        let r = min_over_deterministic(&d, &x, &[y], "E", &config).unwrap();
        let label = format!("I({}:{y}↓E)", x.join(""));
        c.below(&label, r.value.0, 1e-6 + f64::EPSILON);
        c.ensure(r.method == SearchMethod::ExhaustiveDeterministic, || {
            format!("{label}: wrong method")
        });
        c.below(
            &format!("{label} witness"),
            r.recheck(&d).unwrap().0,
            1e-6 + f64::EPSILON,
        );
    }
    let best = intrinsic_info(&d, &["A"], &["B", "C"], "E", &config).unwrap();
    c.close("I(A:BC↓E)", best.value.0, 1.0 / 3.0, 1e-6);
    // continuous restarts alone
    let continuous = IntrinsicConfig {
        fold_deterministic_limit: 0,
        ..config.clone()
    };
    let r = local_search(&d, &["A"], &["B", "C"], "E", &continuous).unwrap();
    c.ensure(r.method == SearchMethod::ContinuousLocalSearch, || {
        "expected a continuous result".into()
    });
    c.ensure(r.restarts_used == 64, || {
        format!("{} restarts", r.restarts_used)
    });
    c.ensure(r.value.0 >= 1.0 / 3.0 - 1e-6, || {
        format!("a restart reported {:.12} below 1/3", r.value.0)
    });
    c.close(
        "continuous witness recheck",
        r.recheck(&d).unwrap().0,
        r.value.0,
        1e-9,
    );
    c.in_time("total", t.elapsed(), Duration::from_secs(10));
}

fn criterion_4(c: &mut Check) {
    let d = fixtures::build(FixtureId::P1);
    let f = equality_filter(&d, "B", "C").unwrap();
    c.ensure(f.survival_probability.exact() == Ratio::new(1, 3), || {
        format!("survival {} is not exactly 1/3", f.survival_probability)
    });
    let g = &f.filtered;
    c.close(
        "I(A:BC)",
        mutual_information(g, &["A"], &["B", "C"]).unwrap().0,
        1.0,
        1e-12,
    );
    c.close(
        "I(A:E)",
        mutual_information(g, &["A"], &["E"]).unwrap().0,
        0.0,
        1e-12,
    );
    c.close(
        "oracle I(A:BC|E)",
        cmi_oracle(g, &["A"], &["B", "C"], &["E"]),
        1.0,
        1e-12,
    );
    let rate =
        f.survival_probability.value() * mutual_information(g, &["A"], &["B", "C"]).unwrap().0;
    c.close("rate", rate, 1.0 / 3.0, 1e-12);
}

fn criterion_5(c: &mut Check) {
    let base = p1();
    // P2(a,b,c) = P1(b,c,a), P3(a,b,c) = P1(c,a,b)
    let p2 = reorder(&base, [1, 2, 0]);
    let p3 = reorder(&base, [2, 0, 1]);
    c.ensure(p2.approx_eq(&fixtures::build(FixtureId::P2), 0.0), || {
        "p2 fixture differs".into()
    });
    c.ensure(p3.approx_eq(&fixtures::build(FixtureId::P3), 0.0), || {
        "p3 fixture differs".into()
    });
    let third = Prob::ratio(1, 3);
    let mixed = Dist::mix(&[base, p2, p3], &[third, third, third])
        .unwrap()
        .eve_canonicalize()
        .unwrap();
    let want = pmix_literal();
    c.ensure(mixed.variables() == want.variables(), || {
        "variables differ".into()
    });
    c.ensure(mixed.support_size() == want.support_size(), || {
        format!(
            "{} rows instead of {}",
            mixed.support_size(),
            want.support_size()
        )
    });
    for (o, p) in want.iter() {
        c.close(&format!("P{o:?}"), mixed.prob(o), p.value(), 1e-12);
    }
    c.ensure(
        fixtures::build(FixtureId::Pmix).approx_eq(&want, 1e-12),
        || "pmix fixture differs".into(),
    );
}

fn criterion_6(c: &mut Check) {
    let d = fixtures::build(FixtureId::Pmix);
    let t = Instant::now();
    let stats: Vec<ProtocolStats> = (1..=8)
        .map(|n| repeated_code_exact(&d, n, Budget::DEFAULT).unwrap())
        .collect();
    c.in_time("N=1..8", t.elapsed(), Duration::from_secs(30));
    for s in &stats {
        let n = s.block_length as i32;
        let good = (1.0f64 / 3.0).powi(n);
        let accept = good + 3.0 * (2.0f64 / 9.0).powi(n);
        c.close(
            &format!("accept N={n}"),
            s.accept_probability,
            accept,
            1e-12,
        );
        c.close(
            &format!("agree N={n}"),
            s.agree_probability_given_accept,
            closed_form_agreement(n),
            1e-12,
        );
    }
    let two = &stats[1];
    c.ensure(
        two.accept_probability_exact.as_deref() == Some("7/27"),
        || format!("accept at N=2 is {:?}", two.accept_probability_exact),
    );
    c.ensure(
        two.agree_probability_exact.as_deref() == Some("3/7"),
        || format!("agree at N=2 is {:?}", two.agree_probability_exact),
    );
    let eight = &stats[7];
    c.above("agree N=8", eight.agree_probability_given_accept, 0.98);
    c.below("eve information N=8", eight.eve_key_information.0, 0.02);
}

fn criterion_7(c: &mut Check) {
    let d = fixtures::build(FixtureId::Pmix);
    let t = Instant::now();
    for n in 1..=3 {
        let exact = repeated_code_exact(&d, n, Budget::DEFAULT).unwrap();
        let mc = repeated_code_monte_carlo(&d, n, 100_000, 0).unwrap();
        for (label, e, m, se) in [
            (
                "accept",
                exact.accept_probability,
                mc.accept_probability,
                mc.std_error,
            ),
            (
                "agree",
                exact.agree_probability_given_accept,
                mc.agree_probability_given_accept,
                mc.agree_std_error,
            ),
            (
                "eve",
                exact.eve_key_information.0,
                mc.eve_key_information.0,
                mc.eve_std_error,
            ),
        ] {
            c.ensure((e - m).abs() <= 3.0 * se, || {
                format!(
                    "N={n} {label}: exact {e:.6} vs monte carlo {m:.6} (3σ = {:.2e})",
                    3.0 * se
                )
            });
        }
    }
    c.in_time("total", t.elapsed(), Duration::from_secs(10));
}

fn criterion_8(c: &mut Check) {
    let config = CertifyConfig::default();
    for id in [FixtureId::P1, FixtureId::Pmix] {
        let d = fixtures::build(id);
        let cert = certify(&d, &config).unwrap();
        match id {
            FixtureId::P1 => {
                c.ensure(cert.bound_information, || "p1 not certified".into());
                c.ensure(cert.verdict == Verdict::BoundInformation, || {
                    format!("p1: {:?}", cert.verdict)
                });
                c.ensure(cert.splittings_without_key.len() == 2, || {
                    "p1: missing splitting evidence".into()
                });
                c.ensure(cert.private_channel.positive, || {
                    "p1: no private-channel rate".into()
                });
            }
            _ => {
                c.ensure(!cert.bound_information, || "pmix certified as bound".into());
                c.ensure(cert.verdict == Verdict::Distillable, || {
                    format!("pmix: {:?}", cert.verdict)
                });
                c.ensure(
                    cert.activation.as_ref().is_some_and(|a| a.distillable),
                    || "pmix: no distillation evidence".into(),
                );
            }
        }
        for s in &cert.splittings_without_key {
            let again = s.intrinsic.recheck(&d).unwrap().0;
            c.close(
                &format!("{id} {} witness", s.intrinsic.splitting),
                again,
                s.intrinsic.value.0,
                1e-6,
            );
            c.close(
                &format!("{id} {} recheck", s.intrinsic.splitting),
                again,
                s.recheck.0,
                1e-6,
            );
        }
        let pc = &cert.private_channel;
        c.close(
            &format!("{id} {} witness", pc.intrinsic.splitting),
            pc.intrinsic.recheck(&d).unwrap().0,
            pc.intrinsic.value.0,
            1e-6,
        );
        if let Ok(f) = equality_filter(&d, &pc.filter_pair[0], &pc.filter_pair[1]) {
            let bits =
                skat_core::measures::ck_lower_bound(&f.filtered, &["A"], &["B", "C"], "E").unwrap();
            c.close(
                &format!("{id} private-channel rate"),
                f.survival_probability.value() * bits.0,
                pc.key_rate.0,
                1e-6,
            );
        }
        if let Some(act) = &cert.activation {
            for (s, r) in act.stats.iter().zip(&act.key_rate_lower_bounds) {
                let again = repeated_code_exact(&d, s.block_length, Budget::DEFAULT).unwrap();
                c.close(
                    &format!("{id} rate N={}", s.block_length),
                    again.key_rate_lower_bound(),
                    r.0,
                    1e-6,
                );
            }
        }
    }
}

fn criterion_9(c: &mut Check) {
    let mut rng = ChaCha8Rng::seed_from_u64(9);

    // deterministic search against every map E -> {0..k-1}
    let config = IntrinsicConfig::default();
    for case in 0..15 {
        let k = 1 + case % 5;
        let honest: &[usize] = if case % 2 == 0 { &[2, 2] } else { &[2, 3] };
        let d = random_dist(&mut rng, honest, k, 0.7);
        let mut best = f64::INFINITY;
        let mut map = vec![0usize; k];
        'maps: loop {
            let ch = Channel::deterministic(&map, k).unwrap();
            let v = cmi_oracle(&d.apply_channel("E", &ch).unwrap(), &["A"], &["B"], &["E"]);
            best = best.min(v.max(0.0));
            for slot in map.iter_mut().rev() {
                *slot += 1;
                if *slot < k {
                    continue 'maps;
                }
                *slot = 0;
            }
            break;
        }
        let r = min_over_deterministic(&d, &["A"], &["B"], "E", &config).unwrap();
        c.close(
            &format!("deterministic case {case} (|E|={k})"),
            r.value.0,
            best,
            1e-12,
        );
        let witness = cmi_oracle(
            &d.apply_channel("E", &r.witness).unwrap(),
            &["A"],
            &["B"],
            &["E"],
        );
        c.close(
            &format!("deterministic case {case} witness"),
            witness.max(0.0),
            r.value.0,
            1e-12,
        );
    }

    // non-negativity and additivity over i.i.d. powers
    for case in 0..12 {
        let d = random_dist(&mut rng, &[2, 2], 2, 0.5);
        let single = conditional_mutual_information(&d, &["A"], &["B"], &["E"])
            .unwrap()
            .0;
        let oracle = cmi_oracle(&d, &["A"], &["B"], &["E"]);
        c.ensure(oracle >= -1e-12 && single >= 0.0, || {
            format!("case {case}: negative CMI {oracle}")
        });
        c.close(&format!("cmi case {case}"), single, oracle, 1e-9);
        for n in 2..=4 {
            let dn = d.iid_power(n, Budget::DEFAULT).unwrap();
            let v = conditional_mutual_information(&dn, &["A"], &["B"], &["E"])
                .unwrap()
                .0;
            c.close(
                &format!("additivity case {case} n={n}"),
                v,
                n as f64 * single,
                1e-9,
            );
        }
    }

    // exact repeated code against full enumeration
    let mut sources: Vec<(String, Dist)> = FixtureId::ALL
        .iter()
        .map(|&id| (id.to_string(), fixtures::build(id)))
        .collect();
    for case in 0..6 {
        let honest: &[usize] = if case % 2 == 0 { &[2, 2, 2] } else { &[2, 2] };
        sources.push((
            format!("random {case}"),
            random_dist(&mut rng, honest, 3, 0.6),
        ));
    }
    for (name, d) in &sources {
        for n in 1..=3 {
            let s = repeated_code_exact(d, n, Budget::DEFAULT).unwrap();
            let e = enumerate_repeated_code(d, n);
            c.close(
                &format!("{name} N={n} accept"),
                s.accept_probability,
                e.accept,
                1e-12,
            );
            c.close(
                &format!("{name} N={n} agree"),
                s.agree_probability_given_accept,
                e.agree,
                1e-12,
            );
            c.close(
                &format!("{name} N={n} eve"),
                s.eve_key_information.0,
                e.eve.max(0.0),
                1e-12,
            );
            for (r, (a, b)) in s
                .receiver_error_probabilities
                .iter()
                .zip(&e.errors)
                .enumerate()
            {
                c.close(&format!("{name} N={n} receiver {r} error"), *a, *b, 1e-12);
            }
        }
    }
}

fn main() -> ExitCode {
    let criteria: [(&str, fn(&mut Check)); 9] = [
        ("conditional mutual information on p1", criterion_1),
        ("explicit channel removes AB:C correlations", criterion_2),
        (
            "intrinsic information of p1 for all three cuts",
            criterion_3,
        ),
        (
            "equality filter yields one secret bit per kept event",
            criterion_4,
        ),
        ("mixture of the three cyclic distributions", criterion_5),
        ("exact repeated-code statistics on pmix", criterion_6),
        ("Monte Carlo agrees with exact repeated code", criterion_7),
        ("certificates and embedded witnesses", criterion_8),
        ("oracle and property suites", criterion_9),
    ];
    let mut failed = 0;
    for (i, (title, run)) in criteria.iter().enumerate() {
        let mut check = Check::default();
        let start = Instant::now();
        if let Err(panic) = catch_unwind(AssertUnwindSafe(|| run(&mut check))) {
            let msg = panic
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| panic.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_else(|| "panicked".into());
            check.failures.push(msg);
        }
        let status = if check.failures.is_empty() {
            "PASS"
        } else {
            "FAIL"
        };
        let timing = if check.notes.is_empty() {
            format!("{:.2?}", start.elapsed())
        } else {
            check.notes.join(", ")
        };
        println!("criterion {} {status}  {title} ({timing})", i + 1);
        for f in &check.failures {
            println!("    {f}");
        }
        if !check.failures.is_empty() {
            failed += 1;
        }
    }
    println!(
        "acceptance: {} passed, {failed} failed",
        criteria.len() - failed
    );
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
