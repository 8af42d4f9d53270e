//! The fourteen acceptance criteria, each run as a function returning a
//! one-line report.
//!
//! Monte Carlo trial counts are multiplied by [`AcceptanceConfig::scale`];
//! `1.0` is the full suite. Exact criteria ignore the scale.

use std::collections::HashMap;
use std::time::Instant;

use num_bigint::BigUint;
use num_rational::BigRational;
use num_traits::One;
use serde::Serialize;

use crate::enumeration::{brute_force_word_count, count_bracelets, count_words, enumerate_words};
use crate::error::{Error, Result};
use crate::geometry::occupancy_word;
use crate::montecarlo::{chi_square, collect_trials, EstimatorResult, Z_THRESHOLD};
use crate::random_points::{
    closed_form, equidistribution_paths, estimate, estimate_bracelet_prob, estimate_region_stats, phi,
    phi_sum_oracle, sample_uniform_config, transfer_check, ClosedForm, Model, Statistic,
};
use crate::realization::realize;
use crate::uniform_sampler::{binomial_parity_check, lln_clt_experiment, SampleKind, WordSampler};
use crate::words::{Bracelet, Word};

pub const CRITERIA: [u8; 14] = [1, 2, 3, 4, 5, 6, 7, 8, 9, 10, 11, 12, 13, 14];

/// Criteria that cannot hold as stated; see the report detail.
pub const EXPECTED_FAILURES: [u8; 1] = [10];

/// `#B_n` for `n = 3..10`.
pub const TABLE_1: [u64; 8] = [1, 5, 9, 30, 69, 203, 519, 1466];

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct AcceptanceConfig {
    pub seed: u64,
    pub workers: usize,
    pub scale: f64,
}

impl Default for AcceptanceConfig {
    fn default() -> Self {
        AcceptanceConfig {
            seed: 20240601,
            workers: 0,
            scale: 1.0,
        }
    }
}

impl AcceptanceConfig {
    fn trials(&self, full: u64) -> u64 {
        ((full as f64 * self.scale).round() as u64).max(100)
    }

    fn seed_for(&self, id: u8, k: u64) -> u64 {
        self.seed.wrapping_mul(1_000_003).wrapping_add(1000 * u64::from(id) + k)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CriterionReport {
    pub id: u8,
    pub title: String,
    pub passed: bool,
    pub expected_failure: bool,
    pub detail: String,
    pub elapsed_secs: f64,
    pub budget_secs: Option<f64>,
}

impl CriterionReport {
    /// Passed, or failed while listed in [`EXPECTED_FAILURES`].
    pub fn as_expected(&self) -> bool {
        self.passed != self.expected_failure
    }

    pub fn line(&self) -> String {
        let status = match (self.passed, self.expected_failure) {
            (true, false) => "PASS",
            (false, false) => "FAIL",
            (false, true) => "FAIL (expected)",
            (true, true) => "PASS (unexpected)",
        };
        format!(
            "[{status}] {:>2}. {} ({:.1}s): {}",
            self.id, self.title, self.elapsed_secs, self.detail
        )
    }
}

struct Outcome {
    passed: bool,
    detail: String,
}

fn outcome(passed: bool, detail: String) -> Result<Outcome> {
    Ok(Outcome { passed, detail })
}

pub fn title(id: u8) -> &'static str {
    match id {
        1 => "word count formula vs brute force, n = 3..12",
        2 => "bracelet counts, n = 3..10",
        3 => "random configurations give interlacing signatures",
        4 => "every realizable word n <= 7 is realized",
        5 => "P(b_n) for n = 3..6",
        6 => "E[H_2] for n = 3, 5, 8",
        7 => "E[L_0], E[L_1], E[L_2], E[L_e] for n = 3, 5, 8",
        8 => "phi closed form vs literal sum",
        9 => "transfer between exponential and circle models",
        10 => "equidistribution of region types, n = 10^5",
        11 => "uniform word and bracelet samplers",
        12 => "LLN and CLT moments of uniform words",
        13 => "binomial parity identity",
        14 => "estimates do not depend on the worker count",
        _ => "unknown criterion",
    }
}

fn budget(id: u8) -> Option<f64> {
    match id {
        1 => Some(60.0),
        2 => Some(120.0),
        3 => Some(300.0),
        4 => Some(600.0),
        _ => None,
    }
}

pub fn run_criterion(id: u8, config: &AcceptanceConfig) -> Result<CriterionReport> {
    let start = Instant::now();
    let out = match id {
        1 => criterion_1(),
        2 => criterion_2(),
        3 => criterion_3(config),
        4 => criterion_4(),
        5 => criterion_5(config),
        6 => criterion_6(config),
        7 => criterion_7(config),
        8 => criterion_8(),
        9 => criterion_9(config),
        10 => criterion_10(config),
        11 => criterion_11(config),
        12 => criterion_12(config),
        13 => criterion_13(),
        14 => criterion_14(config),
        _ => return Err(Error::InvalidArgument(format!("no acceptance criterion {id}"))),
    }?;
    let elapsed_secs = start.elapsed().as_secs_f64();
    let budget_secs = budget(id);
    let in_time = budget_secs.is_none_or(|b| elapsed_secs <= b);
    let detail = if in_time {
        out.detail
    } else {
        format!("{}; over the {:.0}s budget", out.detail, budget_secs.unwrap())
    };
    Ok(CriterionReport {
        id,
        title: title(id).to_string(),
        passed: out.passed && in_time,
        expected_failure: EXPECTED_FAILURES.contains(&id),
        detail,
        elapsed_secs,
        budget_secs,
    })
}

pub fn run_all(config: &AcceptanceConfig) -> Result<Vec<CriterionReport>> {
    CRITERIA.iter().map(|&id| run_criterion(id, config)).collect()
}

fn criterion_1() -> Result<Outcome> {
    let mut mismatches = Vec::new();
    for n in 3..=12usize {
        let formula = BigUint::from(3u8).pow(n as u32) + 1u8 - (BigUint::one() << (n + 1));
        let counted = count_words(n)?;
        let enumerated = enumerate_words(n)?.count() as u64;
        let brute = brute_force_word_count(n)?;
        if counted != formula || BigUint::from(enumerated) != formula || BigUint::from(brute) != formula {
            mismatches.push(format!("n={n}: formula {formula}, count {counted}, enumerated {enumerated}, brute {brute}"));
        }
    }
    outcome(
        mismatches.is_empty(),
        if mismatches.is_empty() {
            "3^n - 2^(n+1) + 1 matches enumeration and brute force for every n".into()
        } else {
            mismatches.join("; ")
        },
    )
}

fn criterion_2() -> Result<Outcome> {
    let counts: Vec<u64> = (3..=10).map(count_bracelets).collect::<Result<_>>()?;
    outcome(counts == TABLE_1, format!("#B_n = {counts:?}, expected {TABLE_1:?}"))
}

fn criterion_3(config: &AcceptanceConfig) -> Result<Outcome> {
    let trials = config.trials(100_000);
    let mut failures = 0usize;
    for n in 3..=12usize {
        let bad = collect_trials(trials, config.seed_for(3, n as u64), config.workers, |_, rng| {
            let c = sample_uniform_config(n, rng).expect("n >= 3");
            !occupancy_word(&c).expect("generic").signature().is_interlacing()
        })?;
        failures += bad.iter().filter(|&&b| b).count();
    }
    outcome(
        failures == 0,
        format!("{trials} configurations for each n = 3..12, {failures} non-interlacing"),
    )
}

fn criterion_4() -> Result<Outcome> {
    let (mut words, mut bracelet_failures, mut exact_failures) = (0usize, 0usize, 0usize);
    for n in 3..=7usize {
        for w in enumerate_words(n)? {
            words += 1;
            let r = realize(&w)?;
            let got = occupancy_word(&r.config)?;
            if got.canonical_bracelet() != w.canonical_bracelet() {
                bracelet_failures += 1;
            }
            if got != w.rotate_left(r.offset) {
                exact_failures += 1;
            }
        }
    }
    outcome(
        bracelet_failures == 0,
        format!(
            "{words} words, {bracelet_failures} bracelet-level failures, {exact_failures} failures at word level"
        ),
    )
}

fn fmt_result(r: &EstimatorResult) -> String {
    format!(
        "{} n={}: {:.6} ± {:.6} vs {} (z = {:.2})",
        r.statistic,
        r.n,
        r.estimate,
        r.std_error,
        r.target_exact.as_deref().unwrap_or("?"),
        r.z.unwrap_or(f64::NAN)
    )
}

fn within_all(results: &[EstimatorResult]) -> bool {
    results.iter().all(|r| r.z.is_some() && r.within(Z_THRESHOLD))
}

fn criterion_5(config: &AcceptanceConfig) -> Result<Outcome> {
    let trials = config.trials(1_000_000);
    let mut results = Vec::new();
    for n in 3..=6usize {
        let b = Bracelet::distinguished(n)?;
        results.push(estimate_bracelet_prob(n, &b, Model::Uniform, trials, config.seed_for(5, n as u64), config.workers)?);
    }
    let exact_at_3 = results[0].estimate == 1.0;
    let parts: Vec<String> = results.iter().map(fmt_result).collect();
    outcome(within_all(&results) && exact_at_3, format!("{trials} trials; {}", parts.join("; ")))
}

fn region_results(config: &AcceptanceConfig, id: u8, names: &[&str]) -> Result<(u64, Vec<EstimatorResult>)> {
    let trials = config.trials(1_000_000);
    let mut out = Vec::new();
    for n in [3usize, 5, 8] {
        for r in estimate_region_stats(n, trials, config.seed_for(id, n as u64), config.workers)? {
            if names.contains(&r.statistic.as_str()) {
                out.push(r);
            }
        }
    }
    Ok((trials, out))
}

fn criterion_6(config: &AcceptanceConfig) -> Result<Outcome> {
    let (trials, results) = region_results(config, 6, &["h2"])?;
    let parts: Vec<String> = results.iter().map(fmt_result).collect();
    outcome(within_all(&results), format!("{trials} trials; {}", parts.join("; ")))
}

fn criterion_7(config: &AcceptanceConfig) -> Result<Outcome> {
    let (trials, results) = region_results(config, 7, &["l0", "l1", "l2", "le"])?;
    let worst = results
        .iter()
        .max_by(|a, b| a.z.unwrap().abs().total_cmp(&b.z.unwrap().abs()))
        .expect("twelve comparisons");
    outcome(
        results.len() == 12 && within_all(&results),
        format!(
            "{trials} trials, {} comparisons, largest |z| {:.2} at {}",
            results.len(),
            worst.z.unwrap().abs(),
            fmt_result(worst)
        ),
    )
}

fn criterion_8() -> Result<Outcome> {
    let mut mismatches = Vec::new();
    let xs = [(1, 4), (1, 3), (2, 5)].map(|(a, b)| BigRational::new(a.into(), b.into()));
    for x in &xs {
        for n in 3..=8usize {
            if phi(x, n)? != phi_sum_oracle(x, n)? {
                mismatches.push(format!("x={x} n={n}"));
            }
        }
    }
    for n in 3..=8usize {
        let third = BigRational::new(1.into(), 3.into());
        if phi(&third, n)? != closed_form(ClosedForm::Phi13, n)? {
            mismatches.push(format!("phi(1/3) n={n}"));
        }
    }
    outcome(
        mismatches.is_empty(),
        if mismatches.is_empty() {
            "exact equality for x in {1/4, 1/3, 2/5}, n = 3..8, and at phi(1/3)".into()
        } else {
            format!("mismatch at {}", mismatches.join(", "))
        },
    )
}

fn criterion_9(config: &AcceptanceConfig) -> Result<Outcome> {
    let trials = config.trials(1_000_000);
    let r = transfer_check(4, 2, trials, config.seed_for(9, 0), config.workers)?;
    outcome(
        r.consistent(Z_THRESHOLD),
        format!(
            "{trials} trials; exponential {:.6}, circle {:.6}, exact {:.6}; z(exp, circle) = {:.2}, z(exp, exact) = {:.2}, z(circle, exact) = {:.2}, z(total, 2n) = {:.2}",
            r.exponential.estimate,
            r.circle.estimate,
            r.closed_form,
            r.z_exponential_circle,
            r.z_exponential_closed,
            r.z_circle_closed,
            r.total_exponential.z.unwrap()
        ),
    )
}

pub const EQUIDISTRIBUTION_TOLERANCE: f64 = 0.02;

fn criterion_10(config: &AcceptanceConfig) -> Result<Outcome> {
    let n = 100_000;
    let grid: Vec<f64> = (1..=100).map(|i| f64::from(i) / 100.0).collect();
    let r = equidistribution_paths(n, &grid, 1, config.seed_for(10, 0), config.workers)?;
    let tol = EQUIDISTRIBUTION_TOLERANCE;
    let h_literal = r.sup_dev_h_over_n.iter().all(|&d| d < tol);
    let h_fraction = r.sup_dev_h_fraction.iter().all(|&d| d < tol);
    let l_ok = r.sup_dev_l.iter().all(|&d| d < tol);
    let f = |a: [f64; 3]| format!("({:.4}, {:.4}, {:.4})", a[0], a[1], a[2]);
    outcome(
        h_literal && l_ok,
        format!(
            "sup |h_k/n - (t/4, t/2, t/4)| = {}; sup |l_k - (t/8, t/2, 3t/8)| = {}; \
             the arrangement has 2n regions so h_k/n tends to (t/2, t, t/2); \
             with h_k/(2n) the deviation is {} ({})",
            f(r.sup_dev_h_over_n),
            f(r.sup_dev_l),
            f(r.sup_dev_h_fraction),
            if h_fraction { "within 0.02" } else { "above 0.02" }
        ),
    )
}

fn chi_square_words(n: usize, samples: u64, seed: u64, workers: usize) -> Result<f64> {
    let sampler = WordSampler::new(n)?;
    let index: HashMap<Word, usize> = enumerate_words(n)?.zip(0..).collect();
    let mut counts = vec![0u64; index.len()];
    for w in collect_trials(samples, seed, workers, |_, rng| sampler.sample_word(rng))? {
        counts[index[&w]] += 1;
    }
    let probs = vec![1.0 / counts.len() as f64; counts.len()];
    Ok(chi_square(&counts, &probs)?.p_value)
}

fn criterion_11(config: &AcceptanceConfig) -> Result<Outcome> {
    let samples = config.trials(1_000_000);
    let p3 = chi_square_words(3, samples, config.seed_for(11, 3), config.workers)?;
    let p4 = chi_square_words(4, samples, config.seed_for(11, 4), config.workers)?;
    let accepted = config.trials(100_000);
    let sampler = WordSampler::new(4)?;
    let draws = collect_trials(accepted, config.seed_for(11, 5), config.workers, |_, rng| {
        let (b, _, attempts) = sampler.sample_bracelet(rng);
        (b, attempts)
    })?;
    let mut classes: HashMap<Bracelet, u64> = HashMap::new();
    let mut attempts = 0;
    for (b, a) in draws {
        *classes.entry(b).or_insert(0) += 1;
        attempts += a;
    }
    let obs: Vec<u64> = classes.values().copied().collect();
    let pb = if obs.len() == 5 {
        chi_square(&obs, &[0.2; 5])?.p_value
    } else {
        0.0
    };
    let rate = accepted as f64 / attempts as f64;
    let threshold = 1e-3;
    outcome(
        p3 > threshold && p4 > threshold && pb > threshold && rate >= 1.0 / 16.0,
        format!(
            "p-values: 12 words {p3:.4}, 50 words {p4:.4} ({samples} samples); {} bracelets {pb:.4} ({accepted} accepted, acceptance rate {rate:.3})",
            obs.len()
        ),
    )
}

fn criterion_12(config: &AcceptanceConfig) -> Result<Outcome> {
    let n = 10_000;
    let trials = config.trials(10_000);
    let r = lln_clt_experiment(n, trials, &[1.0], config.seed_for(12, 0), config.workers, SampleKind::Word)?;
    let g = &r.grid[0];
    let rel = |v: f64, target: f64| (v / target - 1.0).abs();
    let mean_ok = (r.mean_f[0] - 1.0 / 6.0).abs() < 0.01;
    let f0_ok = rel(g.var_f0, 2.0 / 9.0) < 0.1;
    let s10_ok = rel(g.var_s10, 8.0 / 9.0) < 0.1;
    outcome(
        mean_ok && f0_ok && s10_ok,
        format!(
            "{trials} words, n = {n}: mean F0/n = {:.5}, Var F0 term = {:.4} (2/9 = {:.4}), Var S10 term = {:.4} (8/9 = {:.4}), Corr(F0, F1) = {:.4}",
            r.mean_f[0],
            g.var_f0,
            2.0 / 9.0,
            g.var_s10,
            8.0 / 9.0,
            g.corr_f0_f1
        ),
    )
}

fn criterion_13() -> Result<Outcome> {
    let mut bad = Vec::new();
    for n in 1..=40usize {
        let (even, odd) = binomial_parity_check(n);
        let third = BigRational::new(1.into(), BigUint::from(3u8).pow(n as u32).into());
        if even - odd != third {
            bad.push(n);
        }
    }
    outcome(
        bad.is_empty(),
        if bad.is_empty() {
            "P(even) - P(odd) = 3^-n exactly for n = 1..40".into()
        } else {
            format!("identity fails at n = {bad:?}")
        },
    )
}

fn criterion_14(config: &AcceptanceConfig) -> Result<Outcome> {
    let trials = config.trials(20_000);
    let mut differing = Vec::new();
    for stat in Statistic::ALL {
        let runs: Vec<String> = [1usize, 2, 3, 8]
            .iter()
            .map(|&w| {
                estimate(stat, 5, trials, config.seed_for(14, 0), w)
                    .map(|r| serde_json::to_string(&r).expect("serializable"))
            })
            .collect::<Result<_>>()?;
        if runs.iter().any(|r| r != &runs[0]) {
            differing.push(stat.name());
        }
    }
    outcome(
        differing.is_empty(),
        if differing.is_empty() {
            format!("identical JSON for every statistic with 1, 2, 3 and 8 workers ({trials} trials)")
        } else {
            format!("output depends on workers for {differing:?}")
        },
    )
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exact_criteria_pass() {
        let config = AcceptanceConfig::default();
        for id in [2, 8, 13] {
            let r = run_criterion(id, &config).unwrap();
            assert!(r.passed, "{}", r.line());
        }
        assert!(run_criterion(15, &config).is_err());
    }

    #[test]
    fn report_lines() {
        let mut r = CriterionReport {
            id: 10,
            title: title(10).into(),
            passed: false,
            expected_failure: true,
            detail: "x".into(),
            elapsed_secs: 1.0,
            budget_secs: None,
        };
        assert!(r.as_expected());
        assert!(r.line().starts_with("[FAIL (expected)] 10."));
        r.passed = true;
        assert!(!r.as_expected());
        assert_eq!(AcceptanceConfig { scale: 0.0, ..Default::default() }.trials(10), 100);
    }
}
