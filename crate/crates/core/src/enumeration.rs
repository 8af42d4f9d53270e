//! Exhaustive generation and counting of realizable words and bracelets.
//!
//! Words are produced signature by signature: interlacing signatures in
//! lexicographic order, then the `2^{#1s}` ways of splitting every letter 1
//! into `(v_i, v_{i+n}) ∈ {(0,1), (1,0)}` in binary order, the first letter 1
//! being the most significant bit.

use std::collections::{BTreeMap, HashSet};

use num_bigint::BigUint;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::words::{Signature, Word, MIN_N};

/// Largest `n` accepted by the exhaustive routines.
pub const MAX_ENUMERATION_N: usize = 14;

fn check_range(n: usize) -> Result<()> {
    if (MIN_N..=MAX_ENUMERATION_N).contains(&n) {
        Ok(())
    } else {
        Err(Error::OutOfRange {
            n,
            min: MIN_N,
            max: MAX_ENUMERATION_N,
        })
    }
}

/// Letters of the `code`-th signature in lexicographic order.
fn decode_signature(n: usize, mut code: u64) -> Vec<u8> {
    let mut letters = vec![0u8; n];
    for slot in letters.iter_mut().rev() {
        *slot = (code % 3) as u8;
        code /= 3;
    }
    letters
}

/// Interlacing signatures of length `n` in lexicographic order.
pub fn interlacing_signatures(n: usize) -> Result<impl Iterator<Item = Signature>> {
    check_range(n)?;
    let total = 3u64.pow(n as u32);
    Ok((0..total)
        .map(move |code| Signature::new(decode_signature(n, code)).expect("valid letters"))
        .filter(Signature::is_interlacing))
}

/// All words with signature `sig`, in binary order of the letter-1 choices.
pub fn words_with_signature(sig: &Signature) -> impl Iterator<Item = Word> + '_ {
    let n = sig.n();
    let ones: Vec<usize> = (0..n).filter(|&i| sig.letters()[i] == 1).collect();
    let m = ones.len();
    (0u64..1 << m).map(move |mask| {
        let mut bits = vec![0u8; 2 * n];
        for (i, &l) in sig.letters().iter().enumerate() {
            if l == 2 {
                bits[i] = 1;
                bits[i + n] = 1;
            }
        }
        for (rank, &i) in ones.iter().enumerate() {
            let hi = ((mask >> (m - 1 - rank)) & 1) as u8;
            bits[i] = hi;
            bits[i + n] = 1 - hi;
        }
        Word::new(bits).expect("valid word")
    })
}

/// Every realizable word of length `2n`, each exactly once.
pub fn enumerate_words(n: usize) -> Result<impl Iterator<Item = Word>> {
    Ok(interlacing_signatures(n)?.flat_map(|sig| words_with_signature(&sig).collect::<Vec<_>>()))
}

/// `3^n - 2^{n+1} + 1`.
pub fn count_words(n: usize) -> Result<BigUint> {
    if n < MIN_N {
        return Err(Error::OutOfRange {
            n,
            min: MIN_N,
            max: usize::MAX,
        });
    }
    let three = num_traits::pow(BigUint::from(3u8), n);
    let two = num_traits::pow(BigUint::from(2u8), n + 1);
    Ok(three + 1u8 - two)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct EnumerationReport {
    pub n: usize,
    pub word_count: u64,
    pub bracelet_count: u64,
    pub formula_count: u64,
    /// Orbit size -> number of bracelet classes of that size.
    pub orbit_size_histogram: BTreeMap<usize, u64>,
}

impl EnumerationReport {
    /// Number of words lying in classes smaller than `4n`.
    pub fn words_in_small_orbits(&self) -> u64 {
        self.orbit_size_histogram
            .iter()
            .filter(|(&size, _)| size < 4 * self.n)
            .map(|(&size, &classes)| size as u64 * classes)
            .sum()
    }
}

fn pack(word: &Word) -> u32 {
    word.bits()
        .iter()
        .fold(0u32, |acc, &b| (acc << 1) | u32::from(b))
}

/// Enumerates all realizable words, partitioned by signature across the
/// rayon pool, and deduplicates their canonical bracelets.
pub fn enumerate_report(n: usize) -> Result<EnumerationReport> {
    check_range(n)?;
    let sigs: Vec<Signature> = interlacing_signatures(n)?.collect();
    let (word_count, classes) = sigs
        .par_iter()
        .map(|sig| {
            let mut seen = HashSet::new();
            let mut count = 0u64;
            for w in words_with_signature(sig) {
                count += 1;
                let b = w.canonical_bracelet();
                seen.insert((pack(&b.canonical_word), b.orbit_size));
            }
            (count, seen)
        })
        .reduce(
            || (0, HashSet::new()),
            |(c1, a), (c2, b)| {
                let (mut big, small) = if a.len() >= b.len() { (a, b) } else { (b, a) };
                big.extend(small);
                (c1 + c2, big)
            },
        );
    let mut orbit_size_histogram = BTreeMap::new();
    for &(_, size) in &classes {
        *orbit_size_histogram.entry(size).or_insert(0) += 1;
    }
    let formula_count = u64::try_from(count_words(n)?).expect("fits for n <= 14");
    Ok(EnumerationReport {
        n,
        word_count,
        bracelet_count: classes.len() as u64,
        formula_count,
        orbit_size_histogram,
    })
}

pub fn count_bracelets(n: usize) -> Result<u64> {
    Ok(enumerate_report(n)?.bracelet_count)
}

/// Words of length `2n` passing the realizability test, by exhausting
/// all `4^n` binary words.
pub fn brute_force_word_count(n: usize) -> Result<u64> {
    check_range(n)?;
    let len = 2 * n;
    Ok((0u64..1 << len)
        .into_par_iter()
        .filter(|&code| {
            let letters: Vec<u8> = (0..n)
                .map(|i| (((code >> i) & 1) + ((code >> (i + n)) & 1)) as u8)
                .collect();
            Signature::new(letters).expect("valid letters").is_interlacing()
        })
        .count() as u64)
}
