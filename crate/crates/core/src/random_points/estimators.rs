//! Monte Carlo estimators for uniform points, compared with exact targets.

use std::fmt;
use std::str::FromStr;

use num_traits::ToPrimitive;
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::closed_forms::{closed_form, erlang_p_kl, f_n, p_no_black, ClosedForm};
use super::model::{sample_erlang, sample_exp, sample_exp_model, sample_uniform_config};
use crate::coord::format_rational;
use crate::error::{Error, Result};
use crate::geometry::{occupancy_word, region_stats, FloatConfig, OrientedDot};
use crate::montecarlo::{collect_trials, run_trials, two_sample_z, z_score, EstimatorResult, RunningStats};
use crate::words::{Bracelet, MIN_N};

fn check_n(n: usize) -> Result<()> {
    if n < MIN_N {
        return Err(Error::OutOfRange {
            n,
            min: MIN_N,
            max: usize::MAX,
        });
    }
    Ok(())
}

fn with_closed_form(result: EstimatorResult, form: ClosedForm, n: usize) -> Result<EstimatorResult> {
    let exact = closed_form(form, n)?;
    let value = exact.to_f64().expect("finite rational");
    Ok(result.with_target(value, Some(format_rational(&exact))))
}

/// Which random model produces the configurations.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Model {
    /// `n` i.i.d. uniform points.
    Uniform,
    /// Exponential spacings with fair-coin colors, normalized.
    Exponential,
}

fn sample_config(model: Model, n: usize, rng: &mut ChaCha8Rng) -> FloatConfig {
    match model {
        Model::Uniform => sample_uniform_config(n, rng).expect("n checked"),
        Model::Exponential => loop {
            let s = sample_exp_model(n, rng).expect("n checked");
            if let Ok(c) = s.to_config() {
                if c.check_generic().is_ok() {
                    break c;
                }
            }
        },
    }
}

/// Fraction of trials whose configuration falls in the class `target`.
pub fn estimate_bracelet_prob(
    n: usize,
    target: &Bracelet,
    model: Model,
    trials: u64,
    seed: u64,
    workers: usize,
) -> Result<EstimatorResult> {
    check_n(n)?;
    if target.n() != n {
        return Err(Error::InvalidArgument(format!("bracelet has n = {}, expected {n}", target.n())));
    }
    let stats = run_trials(trials, seed, workers, 1, |rng, out| {
        let config = sample_config(model, n, rng);
        let word = occupancy_word(&config).expect("generic configuration");
        out[0] = f64::from(u8::from(word.canonical_bracelet() == *target));
    })?;
    let result = EstimatorResult::new("pb", n, &stats[0], seed);
    if *target == Bracelet::distinguished(n)? {
        with_closed_form(result, ClosedForm::Pbn, n)
    } else {
        Ok(result)
    }
}

const REGION_STATS: [(&str, Option<ClosedForm>); 6] = [
    ("h2", Some(ClosedForm::H2)),
    ("h0", Some(ClosedForm::H2)),
    ("l0", Some(ClosedForm::L0)),
    ("l1", Some(ClosedForm::L1)),
    ("l2", Some(ClosedForm::L2)),
    ("le", Some(ClosedForm::Le)),
];

fn region_sample(config: &FloatConfig, out: &mut [f64]) {
    let s = region_stats(config, &[]).expect("generic configuration");
    out[0] = s.counts[2] as f64;
    out[1] = s.counts[0] as f64;
    out[2] = s.total_lengths[0];
    out[3] = s.total_lengths[1];
    out[4] = s.total_lengths[2];
    out[5] = s.empty_length;
}

/// Estimates of `E[H_2]`, `E[H_0]`, `E[L_0]`, `E[L_1]`, `E[L_2]`, `E[L_e]`
/// for uniform points, each against its exact value.
pub fn estimate_region_stats(n: usize, trials: u64, seed: u64, workers: usize) -> Result<Vec<EstimatorResult>> {
    check_n(n)?;
    let stats = run_trials(trials, seed, workers, REGION_STATS.len(), |rng, out| {
        region_sample(&sample_config(Model::Uniform, n, rng), out);
    })?;
    REGION_STATS
        .iter()
        .zip(&stats)
        .map(|(&(name, form), s)| {
            let r = EstimatorResult::new(name, n, s, seed);
            match form {
                Some(f) => with_closed_form(r, f, n),
                None => Ok(r),
            }
        })
        .collect()
}

/// Statistics accepted by [`estimate`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Statistic {
    H2,
    L0,
    L1,
    L2,
    Le,
    /// Probability of the distinguished bracelet `b_n`.
    Pb,
}

impl Statistic {
    pub const ALL: [Statistic; 6] = [
        Statistic::H2,
        Statistic::L0,
        Statistic::L1,
        Statistic::L2,
        Statistic::Le,
        Statistic::Pb,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Statistic::H2 => "h2",
            Statistic::L0 => "l0",
            Statistic::L1 => "l1",
            Statistic::L2 => "l2",
            Statistic::Le => "le",
            Statistic::Pb => "pb",
        }
    }
}

impl fmt::Display for Statistic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Statistic {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Statistic::ALL
            .into_iter()
            .find(|c| c.name() == s)
            .ok_or_else(|| Error::UnknownStatistic(s.to_string()))
    }
}

/// One statistic for uniform points against its exact value.
pub fn estimate(stat: Statistic, n: usize, trials: u64, seed: u64, workers: usize) -> Result<EstimatorResult> {
    check_n(n)?;
    let (form, column) = match stat {
        Statistic::Pb => {
            return estimate_bracelet_prob(n, &Bracelet::distinguished(n)?, Model::Uniform, trials, seed, workers)
        }
        Statistic::H2 => (ClosedForm::H2, 0),
        Statistic::L0 => (ClosedForm::L0, 2),
        Statistic::L1 => (ClosedForm::L1, 3),
        Statistic::L2 => (ClosedForm::L2, 4),
        Statistic::Le => (ClosedForm::Le, 5),
    };
    let stats = run_trials(trials, seed, workers, 1, |rng, out| {
        let mut all = [0.0; REGION_STATS.len()];
        region_sample(&sample_config(Model::Uniform, n, rng), &mut all);
        out[0] = all[column];
    })?;
    with_closed_form(EstimatorResult::new(stat.name(), n, &stats[0], seed), form, n)
}

/// Simulates `P(X < U, X < V)` with `X ~ Exp(1)`, `U ~ Erlang(k)`, `V ~ Erlang(l)`.
pub fn estimate_erlang_p_kl(k: usize, l: usize, trials: u64, seed: u64, workers: usize) -> Result<EstimatorResult> {
    let exact = erlang_p_kl(k, l)?;
    let stats = run_trials(trials, seed, workers, 1, |rng, out| {
        let x = sample_exp(rng);
        let u = sample_erlang(k, rng);
        let v = sample_erlang(l, rng);
        out[0] = f64::from(u8::from(x < u && x < v));
    })?;
    let r = EstimatorResult::new(&format!("p_{k}_{l}"), k + l, &stats[0], seed);
    Ok(r.with_target(exact.to_f64().expect("finite"), Some(format_rational(&exact))))
}

/// Frequencies, in the exponential spacing model, of `Q = {O_0 = B_R, O_1 = W_L}`
/// (target `f_n`) and of `A_∅` = no black dot among `X_1..X_{n-1}` (target `2^{-(n-1)}`).
pub fn estimate_ocdc_events(n: usize, trials: u64, seed: u64, workers: usize) -> Result<[EstimatorResult; 2]> {
    check_n(n)?;
    let stats = run_trials(trials, seed, workers, 2, |rng, out| {
        let s = sample_exp_model(n, rng).expect("n checked");
        let o = s.ocdc();
        out[0] = f64::from(u8::from(o[0] == OrientedDot::BlackRight && o[1] == OrientedDot::WhiteLeft));
        out[1] = f64::from(u8::from(o[1..].iter().all(|d| !d.is_black())));
    })?;
    let f = f_n(n)?;
    let a = p_no_black(n)?;
    Ok([
        EstimatorResult::new("f_n", n, &stats[0], seed).with_target(f.to_f64().unwrap(), Some(format_rational(&f))),
        EstimatorResult::new("p_a_empty", n, &stats[1], seed)
            .with_target(a.to_f64().unwrap(), Some(format_rational(&a))),
    ])
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct TransferReport {
    pub n: usize,
    pub k: usize,
    /// `E[L_k(T, Γ)]/(2n)` from the exponential model.
    pub exponential: EstimatorResult,
    /// `E[L_{k,n}]` from uniform points.
    pub circle: EstimatorResult,
    pub closed_form: f64,
    pub z_exponential_circle: f64,
    pub z_exponential_closed: f64,
    pub z_circle_closed: f64,
    /// `Σ_k L_k(T, Γ)` in the exponential scale, against `2n`.
    pub total_exponential: EstimatorResult,
}

impl TransferReport {
    pub fn consistent(&self, threshold: f64) -> bool {
        [self.z_exponential_circle, self.z_exponential_closed, self.z_circle_closed]
            .iter()
            .all(|z| z.abs() <= threshold)
            && self.total_exponential.within(threshold)
    }
}

/// Checks `E[L_{k,n}] = E[L_k(T, Γ)]/(2n)` with both sides simulated.
pub fn transfer_check(n: usize, k: usize, trials: u64, seed: u64, workers: usize) -> Result<TransferReport> {
    check_n(n)?;
    let form = match k {
        0 => ClosedForm::L0,
        1 => ClosedForm::L1,
        2 => ClosedForm::L2,
        _ => return Err(Error::InvalidArgument(format!("region type {k} is not 0, 1 or 2"))),
    };
    let exp_stats = run_trials(trials, seed, workers, 2, |rng, out| {
        let s = loop {
            let s = sample_exp_model(n, rng).expect("n checked");
            if s.to_config().is_ok_and(|c| c.check_generic().is_ok()) {
                break s;
            }
        };
        let scale = 2.0 * s.total();
        let r = region_stats(&s.to_config().expect("checked"), &[]).expect("generic");
        out[0] = scale * r.total_lengths[k] / (2 * n) as f64;
        out[1] = scale * r.total_lengths.iter().sum::<f64>();
    })?;
    // disjoint seed stream for the circle model
    let circle_seed = seed ^ 0x9e37_79b9_7f4a_7c15;
    let circle_stats = run_trials(trials, circle_seed, workers, 1, |rng, out| {
        let r = region_stats(&sample_config(Model::Uniform, n, rng), &[]).expect("generic");
        out[0] = r.total_lengths[k];
    })?;
    let exact = closed_form(form, n)?;
    let target = exact.to_f64().unwrap();
    let exponential = EstimatorResult::new(&format!("l{k}_exponential"), n, &exp_stats[0], seed)
        .with_target(target, Some(format_rational(&exact)));
    let circle = EstimatorResult::new(&format!("l{k}_circle"), n, &circle_stats[0], circle_seed)
        .with_target(target, Some(format_rational(&exact)));
    let total_exponential = EstimatorResult::new("total_exponential", n, &exp_stats[1], seed)
        .with_target((2 * n) as f64, Some((2 * n).to_string()));
    Ok(TransferReport {
        n,
        k,
        z_exponential_circle: two_sample_z(&exp_stats[0], &circle_stats[0]),
        z_exponential_closed: exponential.z.unwrap(),
        z_circle_closed: circle.z.unwrap(),
        exponential,
        circle,
        closed_form: target,
        total_exponential,
    })
}

/// Bracelet frequencies under the two models, with the z-score of their difference.
pub fn compare_models(n: usize, target: &Bracelet, trials: u64, seed: u64, workers: usize) -> Result<(EstimatorResult, EstimatorResult, f64)> {
    let a = estimate_bracelet_prob(n, target, Model::Uniform, trials, seed, workers)?;
    let b = estimate_bracelet_prob(n, target, Model::Exponential, trials, seed.wrapping_add(1), workers)?;
    let z = z_score(a.estimate, (a.std_error.powi(2) + b.std_error.powi(2)).sqrt(), b.estimate);
    Ok((a, b, z))
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct EquidistributionReport {
    pub n: usize,
    pub trials: u64,
    pub t_grid: Vec<f64>,
    /// Mean of `h_k(t)/n`.
    pub h_over_n: Vec<[f64; 3]>,
    /// Mean of `ℓ_k(t)`.
    pub l: Vec<[f64; 3]>,
    /// `sup_t |h_k(t)/n - (t/4, t/2, t/4)_k|`.
    pub sup_dev_h_over_n: [f64; 3],
    /// `sup_t |h_k(t)/(2n) - (t/4, t/2, t/4)_k|`: the fraction of the `2n` regions.
    pub sup_dev_h_fraction: [f64; 3],
    /// `sup_t |ℓ_k(t) - (t/8, t/2, 3t/8)_k|`.
    pub sup_dev_l: [f64; 3],
}

pub const H_LIMIT: [f64; 3] = [0.25, 0.5, 0.25];
pub const L_LIMIT: [f64; 3] = [0.125, 0.5, 0.375];

/// Mean paths of `h_k(t)/n` and `ℓ_k(t)` over `trials` uniform configurations.
pub fn equidistribution_paths(n: usize, t_grid: &[f64], trials: u64, seed: u64, workers: usize) -> Result<EquidistributionReport> {
    check_n(n)?;
    let g = t_grid.len();
    let stats = run_trials(trials, seed, workers, 6 * g, |rng, out| {
        let config = sample_uniform_config(n, rng).expect("n checked");
        let r = region_stats(&config, t_grid).expect("generic");
        for (j, (h, l)) in r.h_grid.iter().zip(&r.l_grid).enumerate() {
            for k in 0..3 {
                out[6 * j + k] = h[k] as f64 / n as f64;
                out[6 * j + 3 + k] = l[k];
            }
        }
    })?;
    let mean = |j: usize, off: usize| -> [f64; 3] { std::array::from_fn(|k| stats[6 * j + off + k].mean()) };
    let h_over_n: Vec<[f64; 3]> = (0..g).map(|j| mean(j, 0)).collect();
    let l: Vec<[f64; 3]> = (0..g).map(|j| mean(j, 3)).collect();
    let sup = |f: &dyn Fn(usize, usize) -> f64| -> [f64; 3] {
        std::array::from_fn(|k| (0..g).map(|j| f(j, k)).fold(0.0, f64::max))
    };
    let sup_dev_h_over_n = sup(&|j, k| (h_over_n[j][k] - H_LIMIT[k] * t_grid[j]).abs());
    let sup_dev_h_fraction = sup(&|j, k| (h_over_n[j][k] / 2.0 - H_LIMIT[k] * t_grid[j]).abs());
    let sup_dev_l = sup(&|j, k| (l[j][k] - L_LIMIT[k] * t_grid[j]).abs());
    Ok(EquidistributionReport {
        n,
        trials,
        t_grid: t_grid.to_vec(),
        h_over_n,
        l,
        sup_dev_h_over_n,
        sup_dev_h_fraction,
        sup_dev_l,
    })
}

/// Largest gap between consecutive points among `n` uniform points on `[0, 1/2]`.
pub fn max_spacing<R: Rng + ?Sized>(n: usize, rng: &mut R) -> f64 {
    let mut xs: Vec<f64> = (0..n).map(|_| 0.5 * rng.gen::<f64>()).collect();
    xs.sort_by(f64::total_cmp);
    xs.windows(2).map(|w| w[1] - w[0]).fold(0.0, f64::max)
}

/// Mean of `n M_n / log n` over `trials` draws; the limit is `1/2`.
pub fn max_spacing_check(n: usize, trials: u64, seed: u64, workers: usize) -> Result<EstimatorResult> {
    if n < 2 {
        return Err(Error::InvalidArgument("max spacing needs n >= 2".into()));
    }
    let values = collect_trials(trials, seed, workers, |_, rng| max_spacing(n, rng))?;
    let mut stats = RunningStats::default();
    for m in values {
        stats.push(n as f64 * m / (n as f64).ln());
    }
    Ok(EstimatorResult::new("n_max_spacing_over_log_n", n, &stats, seed).with_target(0.5, Some("1/2".into())))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::montecarlo::{trial_rng, Z_THRESHOLD};

    #[test]
    fn triangles_always_give_the_distinguished_bracelet() {
        let b3 = Bracelet::distinguished(3).unwrap();
        for model in [Model::Uniform, Model::Exponential] {
            let r = estimate_bracelet_prob(3, &b3, model, 5000, 1, 0).unwrap();
            assert_eq!(r.estimate, 1.0);
            assert_eq!(r.z, Some(0.0));
        }
    }

    #[test]
    fn bracelet_probability_small_run() {
        let r = estimate(Statistic::Pb, 4, 40_000, 9, 0).unwrap();
        assert!(r.within(Z_THRESHOLD), "{r:?}");
        assert_eq!(r.target_exact.as_deref(), Some("1/3"));
    }

    #[test]
    fn region_stats_small_run() {
        for n in [3, 6] {
            let rs = estimate_region_stats(n, 40_000, 5, 0).unwrap();
            for r in &rs {
                assert!(r.within(Z_THRESHOLD), "{r:?}");
            }
            // H_0 = H_2 trial by trial
            assert_eq!(rs[0].estimate, rs[1].estimate);
        }
    }

    #[test]
    fn ocdc_event_frequencies() {
        for n in [3, 4, 7] {
            let [f, a] = estimate_ocdc_events(n, 100_000, 11, 0).unwrap();
            assert!(f.within(Z_THRESHOLD), "{f:?}");
            assert!(a.within(Z_THRESHOLD), "{a:?}");
        }
    }

    #[test]
    fn erlang_simulation() {
        for k in 1..=3 {
            for l in 1..=3 {
                let r = estimate_erlang_p_kl(k, l, 100_000, 17, 0).unwrap();
                assert!(r.within(Z_THRESHOLD), "{r:?}");
            }
        }
    }

    #[test]
    fn exponential_total_has_mean_n() {
        let stats = run_trials(100_000, 3, 0, 1, |rng, out| {
            out[0] = sample_exp_model(6, rng).unwrap().total();
        })
        .unwrap();
        assert!((stats[0].mean() - 6.0).abs() <= Z_THRESHOLD * stats[0].std_error());
    }

    #[test]
    fn transfer_small_run() {
        let r = transfer_check(3, 1, 40_000, 21, 0).unwrap();
        assert_eq!(r.exponential.target_exact.as_deref(), Some("5/18"));
        assert!(r.consistent(Z_THRESHOLD), "{r:?}");
    }

    #[test]
    fn models_agree_on_bracelets() {
        let (a, b, z) = compare_models(4, &Bracelet::distinguished(4).unwrap(), 40_000, 8, 0).unwrap();
        assert!(z.abs() <= Z_THRESHOLD, "{a:?} {b:?}");
    }

    #[test]
    fn paths_end_at_the_totals() {
        let grid = [0.0, 0.5, 1.0];
        let r = equidistribution_paths(50, &grid, 20, 2, 0).unwrap();
        assert_eq!(r.h_over_n[0], [0.0; 3]);
        assert_eq!(r.l[0], [0.0; 3]);
        assert!((r.l[2].iter().sum::<f64>() - 1.0).abs() < 1e-9);
        // every configuration has 2n regions
        assert!((r.h_over_n[2].iter().sum::<f64>() - 2.0).abs() < 1e-9);
    }

    #[test]
    fn max_spacing_properties() {
        let mean = |n| {
            let v = collect_trials(200, 4, 0, |_, rng| max_spacing(n, rng)).unwrap();
            assert!(v.iter().all(|&m| m <= 0.5));
            v.iter().sum::<f64>() / v.len() as f64
        };
        let (a, b, c) = (mean(100), mean(1000), mean(10_000));
        assert!(a > b && b > c);
        let mut rng = trial_rng(1, 1);
        assert!(max_spacing(2, &mut rng) <= 0.5);
    }
}
