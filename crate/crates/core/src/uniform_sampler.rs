//! Exact uniform sampling of realizable words and bracelets, the folded
//! word / lattice walk bijection, and prefix statistics of uniform words.
//!
//! A realizable word is drawn by first choosing the number `2p` of letters
//! 0 or 2 in its signature with weight `2·C(n,2p)·2^{n-2p}`, then their
//! positions, then whether the first of them is a 0 or a 2 (the rest
//! alternate), then a fair coin for every letter 1.

use num_bigint::{BigUint, RandBigInt};
use num_rational::BigRational;
use num_traits::{One, Zero};
use rand::seq::index;
use rand::Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::montecarlo::{collect_trials, RunningStats};
use crate::words::{Bracelet, FoldedWord, Pair, Word, MIN_N};

/// Cumulative weights of the number of extreme signature letters.
#[derive(Clone, Debug)]
pub struct WordSampler {
    n: usize,
    /// `cumulative[p - 1] = Σ_{q <= p} 2·C(n,2q)·2^{n-2q}`.
    cumulative: Vec<BigUint>,
}

impl WordSampler {
    pub fn new(n: usize) -> Result<Self> {
        if n < MIN_N {
            return Err(Error::OutOfRange {
                n,
                min: MIN_N,
                max: usize::MAX,
            });
        }
        // w_1 = 2·C(n,2)·2^{n-2}, then w_{p+1} = w_p (n-2p)(n-2p-1) / (4(2p+1)(2p+2))
        let mut weight = BigUint::from(n * (n - 1)) << (n - 2);
        let mut total = BigUint::zero();
        let mut cumulative = Vec::with_capacity(n / 2);
        for p in 1..=n / 2 {
            total += &weight;
            cumulative.push(total.clone());
            let m = n - 2 * p;
            if m >= 2 {
                weight = weight * BigUint::from(m * (m - 1)) / BigUint::from(4 * (2 * p + 1) * (2 * p + 2));
            }
        }
        Ok(WordSampler { n, cumulative })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// `#W_n`.
    pub fn total(&self) -> &BigUint {
        self.cumulative.last().expect("n >= 3 gives p = 1")
    }

    /// Exact weight of `p` (number of 0s, equal to the number of 2s).
    pub fn weight(&self, p: usize) -> BigUint {
        assert!((1..=self.n / 2).contains(&p));
        if p == 1 {
            self.cumulative[0].clone()
        } else {
            &self.cumulative[p - 1] - &self.cumulative[p - 2]
        }
    }

    fn sample_p<R: Rng + ?Sized>(&self, rng: &mut R) -> usize {
        let r = rng.gen_biguint_below(self.total());
        self.cumulative.partition_point(|c| c <= &r) + 1
    }

    /// Folded letters of a uniform realizable word.
    pub fn sample_folded<R: Rng + ?Sized>(&self, rng: &mut R) -> Vec<Pair> {
        let n = self.n;
        let p = self.sample_p(rng);
        let mut extreme = index::sample(rng, n, 2 * p).into_vec();
        extreme.sort_unstable();
        let mut letters = vec![Pair::P00; n];
        let mut is_two = rng.gen::<bool>();
        let mut next = 0;
        for (i, slot) in letters.iter_mut().enumerate() {
            if next < extreme.len() && extreme[next] == i {
                *slot = if is_two { Pair::P11 } else { Pair::P00 };
                is_two = !is_two;
                next += 1;
            } else {
                *slot = if rng.gen::<bool>() { Pair::P10 } else { Pair::P01 };
            }
        }
        letters
    }

    pub fn sample_word<R: Rng + ?Sized>(&self, rng: &mut R) -> Word {
        let folded = FoldedWord::new(self.sample_folded(rng)).expect("n >= 3");
        let first_is_11 = folded.first_balanced() == Some(Pair::P11);
        folded.unfold(first_is_11)
    }

    /// A uniform bracelet class and the accepted word, which is uniform
    /// within its class. Also returns the number of attempts.
    pub fn sample_bracelet<R: Rng + ?Sized>(&self, rng: &mut R) -> (Bracelet, Word, u64) {
        let mut attempts = 0;
        loop {
            attempts += 1;
            let w = self.sample_word(rng);
            let b = w.canonical_bracelet();
            if rng.gen_range(0..b.orbit_size) == 0 {
                return (b, w, attempts);
            }
        }
    }
}

pub fn sample_uniform_word<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Result<Word> {
    Ok(WordSampler::new(n)?.sample_word(rng))
}

pub fn sample_uniform_bracelet<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Result<Bracelet> {
    Ok(WordSampler::new(n)?.sample_bracelet(rng).0)
}

/// Walk with steps in `{-1, 0, +1}` started at 0.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct LatticeWalk {
    pub steps: Vec<i8>,
}

impl LatticeWalk {
    pub fn new(steps: Vec<i8>) -> Result<Self> {
        if let Some(s) = steps.iter().find(|s| !(-1..=1).contains(*s)) {
            return Err(Error::Malformed(format!("walk step {s} is not -1, 0 or 1")));
        }
        Ok(LatticeWalk { steps })
    }

    /// `S_0..S_n`.
    pub fn positions(&self) -> Vec<i64> {
        let mut s = vec![0i64];
        for &step in &self.steps {
            s.push(s.last().unwrap() + i64::from(step));
        }
        s
    }

    /// `K_0..K_n`, running count of 0-steps.
    pub fn zero_counts(&self) -> Vec<usize> {
        let mut k = vec![0usize];
        for &step in &self.steps {
            k.push(k.last().unwrap() + usize::from(step == 0));
        }
        k
    }

    /// Even and nonzero number of 0-steps.
    pub fn is_positive_class(&self) -> bool {
        let k = self.steps.iter().filter(|&&s| s == 0).count();
        k > 0 && k % 2 == 0
    }
}

/// Steps `f(xy) = x - y`.
pub fn word_to_walk(folded: &FoldedWord) -> LatticeWalk {
    LatticeWalk {
        steps: folded
            .letters()
            .iter()
            .map(|p| {
                let (x, y) = p.bits();
                x as i8 - y as i8
            })
            .collect(),
    }
}

/// Inverse of [`word_to_walk`] on walks with an even nonzero number of
/// 0-steps: the 0-steps become `11` and `00` alternately, starting with
/// `11` when `first_zero_is_11`.
pub fn walk_to_word(walk: &LatticeWalk, first_zero_is_11: bool) -> Result<FoldedWord> {
    if !walk.is_positive_class() {
        return Err(Error::InvalidArgument(
            "walk needs an even, nonzero number of 0-steps".into(),
        ));
    }
    let mut next_is_11 = first_zero_is_11;
    let letters = walk
        .steps
        .iter()
        .map(|&s| match s {
            1 => Pair::P10,
            -1 => Pair::P01,
            _ => {
                let p = if next_is_11 { Pair::P11 } else { Pair::P00 };
                next_is_11 = !next_is_11;
                p
            }
        })
        .collect();
    FoldedWord::new(letters)
}

/// Prefix statistics of a word up to position `x`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct WordStats {
    pub x: usize,
    /// Signature letter counts `F^0, F^1, F^2`.
    pub f: [usize; 3],
    /// Folded letter counts `S^{00}, S^{11}, S^{10}, S^{01}`.
    pub s00: usize,
    pub s11: usize,
    pub s10: usize,
    pub s01: usize,
}

pub fn word_stats(word: &Word, x: usize) -> Result<WordStats> {
    let f = word.signature().prefix_counts(x)?;
    let mut counts = [0usize; 4];
    for p in &word.fold().letters()[..x] {
        counts[*p as usize] += 1;
    }
    Ok(WordStats {
        x,
        f,
        s00: counts[Pair::P00 as usize],
        s11: counts[Pair::P11 as usize],
        s10: counts[Pair::P10 as usize],
        s01: counts[Pair::P01 as usize],
    })
}

/// Statistics at each of the increasing positions `xs`, from folded letters.
fn folded_prefix_stats(letters: &[Pair], xs: &[usize]) -> Vec<WordStats> {
    let mut counts = [0usize; 4];
    let mut pos = 0;
    xs.iter()
        .map(|&x| {
            for p in &letters[pos..x] {
                counts[*p as usize] += 1;
            }
            pos = x;
            let [s00, s01, s10, s11] = counts;
            WordStats {
                x,
                f: [s00, s01 + s10, s11],
                s00,
                s11,
                s10,
                s01,
            }
        })
        .collect()
}

/// `(α, β, γ, δ)` = counts of `11, 00, 10, 01` after `i` letters of a word
/// whose walk has `S_i = a` and `K_i = p` and whose first 0-step is `11`.
pub fn walk_to_word_counts(i: usize, a: i64, p: usize) -> Result<[usize; 4]> {
    let (i, pi) = (i as i64, p as i64);
    let g2 = i - pi + a;
    let d2 = i - pi - a;
    if pi > i || g2 < 0 || d2 < 0 || g2 % 2 != 0 {
        return Err(Error::InvalidArgument(format!("no walk has S_{i} = {a}, K_{i} = {p}")));
    }
    Ok([p.div_ceil(2), p / 2, (g2 / 2) as usize, (d2 / 2) as usize])
}

/// Exact `(P(even), P(odd))` for a Binomial(n, 1/3) variable, by summation.
pub fn binomial_parity_check(n: usize) -> (BigRational, BigRational) {
    let mut even = BigRational::zero();
    let mut odd = BigRational::zero();
    let mut binom = BigUint::one();
    let denom = num_traits::pow(BigUint::from(3u8), n);
    for k in 0..=n {
        // C(n,k) 2^{n-k} / 3^n
        let term = BigRational::new((binom.clone() << (n - k)).into(), denom.clone().into());
        if k % 2 == 0 {
            even += term;
        } else {
            odd += term;
        }
        binom = binom * BigUint::from(n - k) / BigUint::from(k + 1);
    }
    (even, odd)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum SampleKind {
    Word,
    Bracelet,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct GridPoint {
    pub c: f64,
    /// Empirical variance of `2(F^0_{cn} - cn/6)/√n`; limit `(2/9)c`.
    pub var_f0: f64,
    /// Empirical variance of `2(S^{00}_{cn} - cn/6)/√n`; limit `(2/9)c`.
    pub var_s00: f64,
    /// Empirical variance of `2(S^{10}_{cn} - cn/3)/√n`; limit `(8/9)c`.
    pub var_s10: f64,
    /// Empirical variance of `2(S^{01}_{cn} - cn/3)/√n`; limit `(8/9)c`.
    pub var_s01: f64,
    /// Correlation of the `F^0` and `F^1` fluctuations; limit `-1`.
    pub corr_f0_f1: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct LlnCltReport {
    pub n: usize,
    pub trials: u64,
    pub seed: u64,
    pub kind: SampleKind,
    /// Means of `S^{00}_n/n, S^{11}_n/n, S^{10}_n/n, S^{01}_n/n`; limit `(1/6, 1/6, 1/3, 1/3)`.
    pub mean_s: [f64; 4],
    /// Means of `F^0_n/n, F^1_n/n, F^2_n/n`; limit `(1/6, 2/3, 1/6)`.
    pub mean_f: [f64; 3],
    pub grid: Vec<GridPoint>,
}

pub const DEFAULT_C_GRID: [f64; 4] = [0.25, 0.5, 0.75, 1.0];

fn sample_variance(xs: &[f64]) -> f64 {
    let mut s = RunningStats::default();
    xs.iter().for_each(|&x| s.push(x));
    s.variance()
}

fn correlation(xs: &[f64], ys: &[f64]) -> f64 {
    let m = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / m;
    let my = ys.iter().sum::<f64>() / m;
    let cov: f64 = xs.iter().zip(ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let vx: f64 = xs.iter().map(|x| (x - mx).powi(2)).sum();
    let vy: f64 = ys.iter().map(|y| (y - my).powi(2)).sum();
    cov / (vx * vy).sqrt()
}

/// Prefix counts of uniform words (or bracelets) at the positions `cn`.
pub fn lln_clt_experiment(
    n: usize,
    trials: u64,
    c_grid: &[f64],
    seed: u64,
    workers: usize,
    kind: SampleKind,
) -> Result<LlnCltReport> {
    if trials < 2 {
        return Err(Error::InvalidArgument("need at least two trials".into()));
    }
    if let Some(c) = c_grid.iter().find(|c| !(0.0..=1.0).contains(*c)) {
        return Err(Error::InvalidArgument(format!("grid value {c} is not in [0, 1]")));
    }
    let sampler = WordSampler::new(n)?;
    let xs: Vec<usize> = c_grid.iter().map(|&c| (c * n as f64).floor() as usize).collect();
    let mut at = xs.clone();
    at.push(n);
    let mut order: Vec<usize> = (0..at.len()).collect();
    order.sort_by_key(|&j| at[j]);
    let sorted: Vec<usize> = order.iter().map(|&j| at[j]).collect();
    let samples: Vec<Vec<WordStats>> = collect_trials(trials, seed, workers, |_, rng| {
        let letters = match kind {
            SampleKind::Word => sampler.sample_folded(rng),
            SampleKind::Bracelet => sampler.sample_bracelet(rng).1.fold().letters().to_vec(),
        };
        let stats = folded_prefix_stats(&letters, &sorted);
        let mut out = stats.clone();
        for (k, &j) in order.iter().enumerate() {
            out[j] = stats[k];
        }
        out
    })?;
    let nf = n as f64;
    let mean = |f: &dyn Fn(&WordStats) -> usize| -> f64 {
        samples.iter().map(|s| f(&s[xs.len()]) as f64 / nf).sum::<f64>() / trials as f64
    };
    let mean_s = [mean(&|s| s.s00), mean(&|s| s.s11), mean(&|s| s.s10), mean(&|s| s.s01)];
    let mean_f = [mean(&|s| s.f[0]), mean(&|s| s.f[1]), mean(&|s| s.f[2])];
    let scale = 2.0 / nf.sqrt();
    let grid = c_grid
        .iter()
        .enumerate()
        .map(|(j, &c)| {
            let x = xs[j] as f64;
            let fluct = |f: &dyn Fn(&WordStats) -> usize, rate: f64| -> Vec<f64> {
                samples.iter().map(|s| scale * (f(&s[j]) as f64 - rate * x)).collect()
            };
            let f0 = fluct(&|s| s.f[0], 1.0 / 6.0);
            let f1 = fluct(&|s| s.f[1], 2.0 / 3.0);
            GridPoint {
                c,
                var_f0: sample_variance(&f0),
                var_s00: sample_variance(&fluct(&|s| s.s00, 1.0 / 6.0)),
                var_s10: sample_variance(&fluct(&|s| s.s10, 1.0 / 3.0)),
                var_s01: sample_variance(&fluct(&|s| s.s01, 1.0 / 3.0)),
                corr_f0_f1: correlation(&f0, &f1),
            }
        })
        .collect();
    Ok(LlnCltReport {
        n,
        trials,
        seed,
        kind,
        mean_s,
        mean_f,
        grid,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::enumeration::{count_words, enumerate_report, enumerate_words};
    use crate::montecarlo::{chi_square, trial_rng};
    use std::collections::{BTreeMap, HashSet};

    fn binomial(n: usize, k: usize) -> BigUint {
        (0..k).fold(BigUint::one(), |acc, i| acc * BigUint::from(n - i) / BigUint::from(i + 1))
    }

    #[test]
    fn weights_sum_to_word_count() {
        for n in 3..=40 {
            let s = WordSampler::new(n).unwrap();
            assert_eq!(s.total(), &count_words(n).unwrap());
            for p in 1..=n / 2 {
                let expected = (BigUint::from(2u8) * binomial(n, 2 * p)) << (n - 2 * p);
                assert_eq!(s.weight(p), expected);
            }
        }
        assert!(WordSampler::new(2).is_err());
    }

    #[test]
    fn sampled_words_are_realizable_and_reproducible() {
        let s = WordSampler::new(9).unwrap();
        for i in 0..500 {
            let w = s.sample_word(&mut trial_rng(1, i));
            assert!(w.is_realizable());
            assert_eq!(w, s.sample_word(&mut trial_rng(1, i)));
        }
    }

    fn word_frequencies(n: usize, samples: u64) -> (Vec<u64>, Vec<f64>) {
        let sampler = WordSampler::new(n).unwrap();
        let words: Vec<Word> = enumerate_words(n).unwrap().collect();
        let index: BTreeMap<Word, usize> = words.iter().cloned().zip(0..).collect();
        let mut counts = vec![0u64; words.len()];
        for w in collect_trials(samples, 5, 0, |_, rng| sampler.sample_word(rng)).unwrap() {
            counts[index[&w]] += 1;
        }
        (counts, vec![1.0 / words.len() as f64; words.len()])
    }

    #[test]
    fn words_are_uniform() {
        for n in [3, 4, 5] {
            let (obs, probs) = word_frequencies(n, 200_000);
            let r = chi_square(&obs, &probs).unwrap();
            assert!(r.p_value > 1e-3, "n = {n}: {r:?}");
        }
    }

    #[test]
    fn extreme_letter_count_has_the_exact_law() {
        let n = 6;
        let sampler = WordSampler::new(n).unwrap();
        let total = 3u64.pow(6) - 2u64.pow(7) + 1;
        let probs: Vec<f64> = (1..=3)
            .map(|p| u64::try_from(sampler.weight(p)).unwrap() as f64 / total as f64)
            .collect();
        let mut obs = vec![0u64; 3];
        for w in collect_trials(100_000, 6, 0, |_, rng| sampler.sample_word(rng)).unwrap() {
            obs[w.signature().count(0) - 1] += 1;
        }
        assert!(chi_square(&obs, &probs).unwrap().p_value > 1e-3);
    }

    #[test]
    fn bracelets_are_uniform() {
        for (n, samples) in [(4usize, 50_000u64), (5, 30_000), (6, 30_000)] {
            let sampler = WordSampler::new(n).unwrap();
            let report = enumerate_report(n).unwrap();
            let draws = collect_trials(samples, 7, 0, |_, rng| sampler.sample_bracelet(rng)).unwrap();
            let mut counts: BTreeMap<Word, u64> = BTreeMap::new();
            let mut attempts = 0;
            for (b, w, a) in draws {
                assert_eq!(w.canonical_bracelet(), b);
                *counts.entry(b.canonical_word).or_insert(0) += 1;
                attempts += a;
            }
            assert_eq!(counts.len() as u64, report.bracelet_count);
            let obs: Vec<u64> = counts.into_values().collect();
            let probs = vec![1.0 / obs.len() as f64; obs.len()];
            assert!(chi_square(&obs, &probs).unwrap().p_value > 1e-3, "n = {n}");
            assert!(samples as f64 / attempts as f64 >= 1.0 / (4 * n) as f64);
        }
        let b3 = sample_uniform_bracelet(3, &mut trial_rng(0, 0)).unwrap();
        assert_eq!(b3, Bracelet::distinguished(3).unwrap());
    }

    #[test]
    fn walk_of_triangle_word() {
        let f = "101100".parse::<Word>().unwrap().fold();
        let walk = word_to_walk(&f);
        assert_eq!(walk.steps, vec![0, 0, 1]);
        assert_eq!(walk.positions(), vec![0, 0, 0, 1]);
        assert_eq!(walk.zero_counts(), vec![0, 1, 2, 2]);
        assert_eq!(walk_to_word(&walk, true).unwrap(), f);
        assert_eq!(walk_to_word_counts(3, 1, 2).unwrap(), [1, 1, 1, 0]);
        assert!(walk_to_word_counts(3, 0, 2).is_err());
        assert!(walk_to_word(&LatticeWalk::new(vec![0, 1, 1]).unwrap(), true).is_err());
        assert!(walk_to_word(&LatticeWalk::new(vec![1, 1, -1]).unwrap(), true).is_err());
        assert!(LatticeWalk::new(vec![2]).is_err());
    }

    #[test]
    fn walk_bijection_on_small_n() {
        for n in 3..=6 {
            let plus: HashSet<FoldedWord> = enumerate_words(n)
                .unwrap()
                .map(|w| w.fold())
                .filter(|f| f.first_balanced() == Some(Pair::P11))
                .collect();
            let walks: HashSet<LatticeWalk> = (0..3u32.pow(n as u32))
                .map(|mut code| {
                    let steps = (0..n)
                        .map(|_| {
                            let s = (code % 3) as i8 - 1;
                            code /= 3;
                            s
                        })
                        .collect();
                    LatticeWalk::new(steps).unwrap()
                })
                .filter(LatticeWalk::is_positive_class)
                .collect();
            assert_eq!(plus.len(), walks.len());
            let images: HashSet<LatticeWalk> = plus.iter().map(word_to_walk).collect();
            assert_eq!(images, walks);
            for f in &plus {
                assert_eq!(&walk_to_word(&word_to_walk(f), true).unwrap(), f);
            }
            for w in &walks {
                assert_eq!(&word_to_walk(&walk_to_word(w, true).unwrap()), w);
            }
        }
    }

    #[test]
    fn walk_counts_match_word_counts() {
        for w in enumerate_words(6).unwrap() {
            let f = w.fold();
            if f.first_balanced() != Some(Pair::P11) {
                continue;
            }
            let walk = word_to_walk(&f);
            let (s, k) = (walk.positions(), walk.zero_counts());
            for i in 0..=6 {
                let st = word_stats(&w, i).unwrap();
                assert_eq!(walk_to_word_counts(i, s[i], k[i]).unwrap(), [st.s11, st.s00, st.s10, st.s01]);
            }
        }
    }

    #[test]
    fn f_and_s_statistics_agree() {
        let sampler = WordSampler::new(30).unwrap();
        for i in 0..200 {
            let w = sampler.sample_word(&mut trial_rng(2, i));
            for x in 0..=30 {
                let st = word_stats(&w, x).unwrap();
                assert_eq!(st.f[0] + st.f[2], st.s00 + st.s11);
                assert_eq!(st.f[1], st.s10 + st.s01);
                assert_eq!(st.f[0], st.s00);
                assert_eq!(st.f[2], st.s11);
                assert_eq!(st.f.iter().sum::<usize>(), x);
            }
            let xs: Vec<usize> = (0..=30).collect();
            let fast = folded_prefix_stats(w.fold().letters(), &xs);
            assert!(xs.iter().all(|&x| fast[x] == word_stats(&w, x).unwrap()));
        }
        assert!(word_stats(&"101100".parse().unwrap(), 4).is_err());
    }

    #[test]
    fn binomial_parity() {
        let q = |a: i64, b: i64| BigRational::new(a.into(), b.into());
        assert_eq!(binomial_parity_check(1), (q(2, 3), q(1, 3)));
        assert_eq!(binomial_parity_check(2), (q(5, 9), q(4, 9)));
        for n in 1..=40 {
            let (even, odd) = binomial_parity_check(n);
            let third_n = BigRational::new(BigUint::one().into(), num_traits::pow(BigUint::from(3u8), n).into());
            assert_eq!(&even - &odd, third_n);
            assert_eq!(even + odd, BigRational::one());
        }
    }

    #[test]
    fn small_clt_run() {
        let r = lln_clt_experiment(300, 2000, &DEFAULT_C_GRID, 3, 0, SampleKind::Word).unwrap();
        assert!((r.mean_f[0] - 1.0 / 6.0).abs() < 0.01);
        assert!((r.mean_s[2] - 1.0 / 3.0).abs() < 0.01);
        let last = r.grid.last().unwrap();
        assert!((last.var_f0 / (2.0 / 9.0) - 1.0).abs() < 0.2, "{last:?}");
        assert!((last.var_s10 / (8.0 / 9.0) - 1.0).abs() < 0.2, "{last:?}");
        assert!(last.corr_f0_f1 < -0.9);
        let b = lln_clt_experiment(100, 50, &[0.5], 3, 0, SampleKind::Bracelet).unwrap();
        assert_eq!(b.grid.len(), 1);
    }
}
