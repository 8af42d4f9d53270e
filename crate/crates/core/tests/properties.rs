//! Randomized invariants across modules.

use cyclic_bisectors::geometry::{arrangement, occupancy_word, region_stats, FloatConfig, PointConfig};
use cyclic_bisectors::montecarlo::{trial_rng, RunningStats};
use cyclic_bisectors::realization::realize;
use cyclic_bisectors::uniform_sampler::{walk_to_word, word_stats, word_to_walk, WordSampler};
use cyclic_bisectors::Pair;
use proptest::prelude::*;

fn generic_config() -> impl Strategy<Value = FloatConfig> {
    prop::collection::vec(0.0f64..1.0, 3..=12).prop_filter_map("non-generic", |xs| {
        PointConfig::from_unsorted(xs).ok().filter(|c| c.check_generic().is_ok())
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn occupancy_words_interlace(c in generic_config()) {
        let w = occupancy_word(&c).unwrap();
        prop_assert_eq!(w.n(), c.n());
        prop_assert_eq!(w.popcount(), c.n());
        prop_assert!(w.signature().is_interlacing());
    }

    #[test]
    fn region_counts_and_lengths(c in generic_config()) {
        let n = c.n();
        let s = region_stats(&c, &[]).unwrap();
        prop_assert_eq!(s.counts[0], s.counts[2]);
        prop_assert_eq!(s.counts[1], 2 * n - 2 * s.counts[2]);
        prop_assert!((s.total_lengths.iter().sum::<f64>() - 1.0).abs() < 1e-9);
        prop_assert!(arrangement(&c).unwrap().point_counts().iter().all(|&k| k <= 1));
    }

    #[test]
    fn bracelet_is_invariant_under_isometries(c in generic_config(), delta in 0.0f64..1.0) {
        let b = occupancy_word(&c).unwrap().canonical_bracelet();
        if let Ok(r) = c.rotated(&delta) {
            if r.check_generic().is_ok() {
                prop_assert_eq!(occupancy_word(&r).unwrap().canonical_bracelet(), b.clone());
            }
        }
        let m = c.reflected().unwrap();
        if m.check_generic().is_ok() {
            prop_assert_eq!(occupancy_word(&m).unwrap().canonical_bracelet(), b);
        }
    }

    #[test]
    fn exact_and_float_words_agree(c in generic_config()) {
        if c.genericity_margin() > 1e-9 {
            prop_assert_eq!(occupancy_word(&c.to_exact()).unwrap(), occupancy_word(&c).unwrap());
        }
    }

    #[test]
    fn sampled_words_are_realized(n in 3usize..=9, seed: u64) {
        let w = WordSampler::new(n).unwrap().sample_word(&mut trial_rng(seed, 0));
        let r = realize(&w).unwrap();
        prop_assert!(r.config.positions().windows(2).all(|p| p[0] < p[1]));
        prop_assert!(r.config.check_generic().is_ok());
        let got = occupancy_word(&r.config).unwrap();
        prop_assert_eq!(got.canonical_bracelet(), w.canonical_bracelet());
        prop_assert_eq!(got, w.rotate_left(r.offset));
    }

    #[test]
    fn walks_of_sampled_words(n in 3usize..=60, seed: u64) {
        let w = WordSampler::new(n).unwrap().sample_word(&mut trial_rng(seed, 1));
        let f = w.fold();
        let walk = word_to_walk(&f);
        prop_assert!(walk.is_positive_class());
        let first_is_11 = f.first_balanced() == Some(Pair::P11);
        prop_assert_eq!(walk_to_word(&walk, first_is_11).unwrap(), f);
        let k = walk.zero_counts();
        prop_assert!(k.windows(2).all(|p| p[1] - p[0] <= 1));
        for x in 0..=n {
            let s = word_stats(&w, x).unwrap();
            prop_assert_eq!(s.f[0] + s.f[2], s.s00 + s.s11);
            prop_assert_eq!(s.f[1], s.s10 + s.s01);
            prop_assert_eq!(s.s00 + s.s11 + s.s10 + s.s01, x);
        }
    }

    #[test]
    fn running_stats_merge_in_any_split(xs in prop::collection::vec(-1e3f64..1e3, 2..200), cut in 0usize..200) {
        let cut = cut.min(xs.len());
        let mut whole = RunningStats::default();
        xs.iter().for_each(|&x| whole.push(x));
        let (mut a, mut b) = (RunningStats::default(), RunningStats::default());
        xs[..cut].iter().for_each(|&x| a.push(x));
        xs[cut..].iter().for_each(|&x| b.push(x));
        a.merge(&b);
        prop_assert_eq!(a.count(), whole.count());
        prop_assert!((a.mean() - whole.mean()).abs() < 1e-9);
        prop_assert!((a.variance() - whole.variance()).abs() < 1e-6 * (1.0 + whole.variance()));
    }
}
