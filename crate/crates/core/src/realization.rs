//! Explicit point configurations for words with interlacing signature.
//!
//! After rotating the word so that its signature starts with a 0, every
//! index `h` of the word gets a candidate position `r_h`:
//!
//! * the `k`-th index whose signature letter is 2 sits at `k/s`,
//! * the `k`-th index whose letter is 0 sits at `(2k-1)/(2s)`,
//! * indices strictly between a 2 and the next 0 (descending component)
//!   sit just after their 2 at offsets `η(2^d - 1)`, and indices strictly
//!   between a 0 and the next 2 (ascending component) sit just before
//!   their 2 at offsets `-η(2^d - 1)`, `d` being the index distance.
//!
//! Here `s` counts the indices of `0..2n` carrying a 2. Every position then
//! moves by `2^h ε` to break coincidences between bisectors, and the
//! points are the positions of the indices where the word has a 1.
//!
//! The weights `2^h` have pairwise distinct pair sums, so no bisector can
//! meet another bisector or an antipodal bisector after the move. A shift
//! linear in `h` is not enough: for `11011000` it leaves a bisector on top
//! of an antipodal one.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::Serialize;
use serde_json::json;

use crate::coord::{format_rational, Coordinate};
use crate::error::{Error, Result};
use crate::geometry::{arrangement, ExactConfig, PointConfig};
use crate::words::Word;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum ComponentKind {
    Ascending,
    Descending,
}

/// Maximal run of signature-1 indices between a 0 and a 2 (ascending) or
/// between a 2 and a 0 (descending). May be empty.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Component {
    pub kind: ComponentKind,
    /// 1-based rank of the anchoring 2.
    pub k: usize,
    pub indices: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct RealizationPlan {
    pub n: usize,
    /// The input word was rotated left by this amount before construction.
    pub rotation: usize,
    /// Rotated word; its signature starts with 0.
    pub word: Word,
    pub s: usize,
    /// Indices in `0..2n` whose signature letter is 2, increasing.
    pub twos: Vec<usize>,
    /// Indices in `0..2n` whose signature letter is 0, increasing; starts at 0.
    pub zeros: Vec<usize>,
    pub eta: BigRational,
    pub epsilon: BigRational,
    /// Unperturbed candidate positions, increasing, in `(0, 1 + 1/(4s))`.
    pub anchors: Vec<BigRational>,
    /// Perturbed positions reduced to `[0, 1)`.
    pub positions: Vec<BigRational>,
    pub components: Vec<Component>,
}

impl RealizationPlan {
    /// The configuration made of the positions of the 1s of the word.
    pub fn points(&self) -> ExactConfig {
        let chosen: Vec<BigRational> = self
            .positions
            .iter()
            .zip(self.word.bits())
            .filter(|(_, &b)| b == 1)
            .map(|(p, _)| p.clone())
            .collect();
        PointConfig::from_unsorted(chosen).expect("construction yields distinct positions")
    }

    pub fn to_json(&self) -> serde_json::Value {
        let fmt = |v: &[BigRational]| v.iter().map(format_rational).collect::<Vec<_>>();
        json!({
            "s": self.s,
            "T": self.twos,
            "Z": self.zeros,
            "eta": format_rational(&self.eta),
            "epsilon": format_rational(&self.epsilon),
            "r": fmt(&self.positions),
            "anchors": fmt(&self.anchors),
            "components": self.components,
        })
    }
}

#[derive(Clone, Debug)]
pub struct Realization {
    pub config: ExactConfig,
    /// `occupancy_word(config) == input.rotate_left(offset)`.
    pub offset: usize,
    pub plan: RealizationPlan,
}

fn shift(epsilon: &BigRational, h: usize) -> BigRational {
    epsilon * num_traits::pow(BigInt::from(2), h)
}

fn ratio(num: usize, den: usize) -> BigRational {
    BigRational::new(BigInt::from(num), BigInt::from(den))
}

pub fn realize(word: &Word) -> Result<Realization> {
    let n = word.n();
    let len = 2 * n;
    let sig = word.signature();
    if !sig.is_interlacing() {
        return Err(Error::NotRealizable(word.to_string()));
    }
    let rotation = sig
        .letters()
        .iter()
        .position(|&l| l == 0)
        .expect("interlacing signatures contain a 0");
    let v = word.rotate_left(rotation);
    let letters = v.signature().letters().to_vec();
    let letter = |h: usize| letters[h % n];

    let twos: Vec<usize> = (0..len).filter(|&h| letter(h) == 2).collect();
    let zeros: Vec<usize> = (0..len).filter(|&h| letter(h) == 0).collect();
    let s = twos.len();
    assert_eq!(s, zeros.len());
    assert_eq!(zeros[0], 0);
    for k in 0..s {
        assert!(zeros[k] < twos[k] && (k + 1 == s || twos[k] < zeros[k + 1]));
    }

    let eta = BigRational::new(
        BigInt::one(),
        BigInt::from(s) * num_traits::pow(BigInt::from(2), n + 3),
    );
    // total shift stays below η/8, a quarter of the unperturbed grid step
    let epsilon = &eta / num_traits::pow(BigInt::from(2), 2 * n + 2);
    let offset_of = |d: usize| &eta * (num_traits::pow(BigInt::from(2), d) - BigInt::one());

    let mut anchors = vec![<BigRational as Zero>::zero(); len];
    let mut components = Vec::with_capacity(2 * s);
    for k in 1..=s {
        let i_k = twos[k - 1];
        let j_k = zeros[k - 1];
        let next_zero = if k < s { zeros[k] } else { len };
        let top = ratio(k, s);
        anchors[j_k] = ratio(2 * k - 1, 2 * s);

        let ascending: Vec<usize> = (j_k + 1..i_k).collect();
        for &h in &ascending {
            anchors[h] = &top - offset_of(i_k - h);
        }
        let descending: Vec<usize> = (i_k + 1..next_zero).collect();
        for &h in &descending {
            anchors[h] = &top + offset_of(h - i_k);
        }
        for c in [&ascending, &descending] {
            // the offset bound needs at most n indices per component
            assert!(c.len() <= n, "component of {} indices exceeds n = {n}", c.len());
        }
        anchors[i_k] = top;
        components.push(Component {
            kind: ComponentKind::Ascending,
            k,
            indices: ascending,
        });
        components.push(Component {
            kind: ComponentKind::Descending,
            k,
            indices: descending,
        });
    }

    let positions: Vec<BigRational> = anchors
        .iter()
        .enumerate()
        .map(|(h, r)| (r + shift(&epsilon, h)).frac())
        .collect();

    let plan = RealizationPlan {
        n,
        rotation,
        word: v,
        s,
        twos,
        zeros,
        eta,
        epsilon,
        anchors,
        positions,
        components,
    };
    let config = plan.points();
    // The smallest position is that of the last 2, so reading starts there.
    let offset = (rotation + plan.twos[s - 1]) % len;
    Ok(Realization {
        config,
        offset,
        plan,
    })
}

/// Number of values of `sorted` in the cyclic open interval from `a` to `b`.
fn count_in_arc(sorted: &[BigRational], a: &BigRational, b: &BigRational) -> usize {
    sorted
        .iter()
        .filter(|&x| if a <= b { a < x && x < b } else { x > a || x < b })
        .count()
}

/// Checks where the bisectors of a constructed configuration land: one per
/// component index (next to its position, on the side the component
/// faces), two near each 0 anchor, and nothing else.
pub fn verify_bisector_layout(plan: &RealizationPlan) -> bool {
    let config = plan.points();
    let Ok(arr) = arrangement(&config) else {
        return false;
    };
    let boundaries = &arr.boundaries;
    let len = 2 * plan.n;
    let r = &plan.positions;
    let mut total = 0;
    for c in &plan.components {
        for &h in &c.indices {
            let count = match c.kind {
                ComponentKind::Descending => count_in_arc(boundaries, &r[(h + len - 1) % len], &r[h]),
                ComponentKind::Ascending => count_in_arc(boundaries, &r[h], &r[(h + 1) % len]),
            };
            if count != 1 {
                return false;
            }
            total += 1;
        }
    }
    let window = ratio(1, 8 * plan.s);
    for k in 1..=plan.s {
        let centre = ratio(2 * k - 1, 2 * plan.s);
        let lo = (&centre - &window).frac();
        let hi = (&centre + &window).frac();
        if count_in_arc(boundaries, &lo, &hi) != 2 {
            return false;
        }
        total += 2;
    }
    total == len && boundaries.len() == len
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::occupancy_word;

    fn w(s: &str) -> Word {
        s.parse().unwrap()
    }

    fn all_realizable(n: usize) -> Vec<Word> {
        (0u32..1 << (2 * n))
            .map(|code| Word::new((0..2 * n).map(|i| ((code >> i) & 1) as u8).collect()).unwrap())
            .filter(|w| w.is_realizable())
            .collect()
    }

    #[test]
    fn realizes_the_triangle_word() {
        let word = w("101100");
        let r = realize(&word).unwrap();
        assert_eq!(r.config.n(), 3);
        assert!(r.config.check_generic().is_ok());
        let got = occupancy_word(&r.config).unwrap();
        assert_eq!(got, word.rotate_left(r.offset));
        assert_eq!(got.canonical_bracelet(), word.canonical_bracelet());
        assert!(verify_bisector_layout(&r.plan));
    }

    #[test]
    fn rejects_non_interlacing_words() {
        assert!(matches!(
            realize(&w("010101")),
            Err(Error::NotRealizable(_))
        ));
    }

    #[test]
    fn plan_respects_bounds() {
        for word in all_realizable(5) {
            let p = realize(&word).unwrap().plan;
            let n = p.n;
            let s = p.s;
            let bound = ratio(1, s) / num_traits::pow(BigInt::from(2), n + 2);
            assert!(p.eta < bound);
            assert!(p.epsilon < &p.eta / BigInt::from(2 * n));
            assert!(shift(&p.epsilon, 2 * n - 1) * BigInt::from(8) <= p.eta);
            for (k, &i) in p.twos.iter().enumerate() {
                assert_eq!(p.anchors[i], ratio(k + 1, s));
            }
            for (k, &j) in p.zeros.iter().enumerate() {
                assert_eq!(p.anchors[j], ratio(2 * k + 1, 2 * s));
            }
            let reach = &p.eta * (num_traits::pow(BigInt::from(2), n) - BigInt::one());
            assert!(reach < ratio(1, 4 * s));
            for c in &p.components {
                let anchor = &p.anchors[p.twos[c.k - 1]];
                for &h in &c.indices {
                    let d = num_traits::Signed::abs(&(&p.anchors[h] - anchor));
                    assert!(d < reach);
                }
            }
        }
    }

    #[test]
    fn every_word_up_to_n7_round_trips_exactly() {
        for n in 3..=7 {
            for word in all_realizable(n) {
                let r = realize(&word).unwrap();
                assert!(r.config.check_generic().is_ok(), "{word}");
                assert_eq!(
                    occupancy_word(&r.config).unwrap(),
                    word.rotate_left(r.offset),
                    "{word}"
                );
                let p = &r.plan;
                assert!(p.anchors.windows(2).all(|a| a[0] < a[1]));
                let moved: Vec<BigRational> = (0..2 * n)
                    .map(|h| &p.anchors[h] + shift(&p.epsilon, h))
                    .collect();
                assert!(moved.windows(2).all(|a| a[0] < a[1]));
                assert!(verify_bisector_layout(p), "{word}");
            }
        }
    }

    #[test]
    fn bisector_layout_for_all_words_n4() {
        let words = all_realizable(4);
        assert_eq!(words.len(), 50);
        for word in words {
            let plan = realize(&word).unwrap().plan;
            assert!(verify_bisector_layout(&plan), "{word}");
            assert_eq!(arrangement(&plan.points()).unwrap().boundaries.len(), 8);
        }
    }

    #[test]
    fn empty_components_need_the_perturbation() {
        // signature 0 2 0 2 ...: every component is empty
        let word = w("10101010");
        assert_eq!(word.signature().to_string(), "2020");
        let r = realize(&word).unwrap();
        assert!(r.plan.components.iter().all(|c| c.indices.is_empty()));
        assert!(verify_bisector_layout(&r.plan));

        // without the perturbation two bisectors coincide
        let unperturbed: Vec<BigRational> = r
            .plan
            .anchors
            .iter()
            .zip(r.plan.word.bits())
            .filter(|(_, &b)| b == 1)
            .map(|(a, _)| a.frac())
            .collect();
        let c = PointConfig::from_unsorted(unperturbed).unwrap();
        assert!(c.check_generic().is_err());
    }

    #[test]
    fn plan_json_shape() {
        let r = realize(&w("101100")).unwrap();
        let v = r.plan.to_json();
        for key in ["s", "T", "Z", "eta", "epsilon", "r", "components"] {
            assert!(v.get(key).is_some(), "missing {key}");
        }
        assert_eq!(v["s"], 2);
        assert_eq!(v["r"].as_array().unwrap().len(), 6);
    }
}
