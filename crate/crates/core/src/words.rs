//! Occupancy words, signatures, folded words and bracelets.
//!
//! The mathematical literature indexes a word of length `2n` from 1 and
//! cyclically. Here every index is 0-based: position `i` in this crate is
//! position `i + 1` in the usual 1-based notation, and cyclic indices are
//! reduced modulo `n` (signatures) or `2n` (words).

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Smallest polygon size handled anywhere in the crate.
pub const MIN_N: usize = 3;

/// Binary word of length `2n`; bit `i` is the number of polygon vertices in
/// region `i` of the arrangement.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub struct Word {
    bits: Vec<u8>,
}

impl Word {
    pub fn new(bits: Vec<u8>) -> Result<Self> {
        if !bits.len().is_multiple_of(2) {
            return Err(Error::Malformed(format!(
                "word length {} is odd",
                bits.len()
            )));
        }
        if bits.len() < 2 * MIN_N {
            return Err(Error::Malformed(format!(
                "word length {} is below {}",
                bits.len(),
                2 * MIN_N
            )));
        }
        if let Some(b) = bits.iter().find(|&&b| b > 1) {
            return Err(Error::Malformed(format!("letter {b} is not a bit")));
        }
        Ok(Word { bits })
    }

    /// Builds a word without validation. Callers guarantee the invariants.
    pub(crate) fn from_bits_unchecked(bits: Vec<u8>) -> Self {
        debug_assert!(bits.len().is_multiple_of(2) && bits.iter().all(|&b| b <= 1));
        Word { bits }
    }

    /// Number of polygon vertices, i.e. half the word length.
    pub fn n(&self) -> usize {
        self.bits.len() / 2
    }

    pub fn bits(&self) -> &[u8] {
        &self.bits
    }

    pub fn len(&self) -> usize {
        self.bits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bits.is_empty()
    }

    pub fn popcount(&self) -> usize {
        self.bits.iter().map(|&b| b as usize).sum()
    }

    /// Cyclic shift: result `[i]` is `self[(i + k) mod 2n]`.
    pub fn rotate_left(&self, k: usize) -> Word {
        let mut bits = self.bits.clone();
        let len = bits.len();
        bits.rotate_left(k % len);
        Word { bits }
    }

    pub fn reversed(&self) -> Word {
        let mut bits = self.bits.clone();
        bits.reverse();
        Word { bits }
    }

    /// `σ_i = v_i + v_{i+n}`.
    pub fn signature(&self) -> Signature {
        let n = self.n();
        let letters = (0..n).map(|i| self.bits[i] + self.bits[i + n]).collect();
        Signature { letters }
    }

    /// A word is realizable exactly when its signature is interlacing.
    pub fn is_realizable(&self) -> bool {
        self.signature().is_interlacing()
    }

    pub fn fold(&self) -> FoldedWord {
        let n = self.n();
        let letters = (0..n)
            .map(|i| Pair::from_bits(self.bits[i], self.bits[i + n]))
            .collect();
        FoldedWord { letters }
    }

    pub fn canonical_bracelet(&self) -> Bracelet {
        Bracelet::of(self)
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for &b in &self.bits {
            write!(f, "{b}")?;
        }
        Ok(())
    }
}

impl fmt::Debug for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Word({self})")
    }
}

impl FromStr for Word {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bits = s
            .trim()
            .chars()
            .map(|c| match c {
                '0' => Ok(0),
                '1' => Ok(1),
                other => Err(Error::Malformed(format!(
                    "unexpected character {other:?} in word"
                ))),
            })
            .collect::<Result<Vec<u8>>>()?;
        Word::new(bits)
    }
}

impl TryFrom<String> for Word {
    type Error = Error;

    fn try_from(s: String) -> Result<Self> {
        s.parse()
    }
}

impl From<Word> for String {
    fn from(w: Word) -> String {
        w.to_string()
    }
}

/// Length-`n` word over `{0, 1, 2}`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub struct Signature {
    letters: Vec<u8>,
}

impl Signature {
    pub fn new(letters: Vec<u8>) -> Result<Self> {
        if letters.len() < MIN_N {
            return Err(Error::Malformed(format!(
                "signature length {} is below {MIN_N}",
                letters.len()
            )));
        }
        if let Some(l) = letters.iter().find(|&&l| l > 2) {
            return Err(Error::Malformed(format!(
                "signature letter {l} is not in {{0,1,2}}"
            )));
        }
        Ok(Signature { letters })
    }

    pub fn n(&self) -> usize {
        self.letters.len()
    }

    pub fn letters(&self) -> &[u8] {
        &self.letters
    }

    pub fn count(&self, letter: u8) -> usize {
        self.letters.iter().filter(|&&l| l == letter).count()
    }

    /// Reading only the letters 0 and 2 around the circle, they must
    /// strictly alternate, and each must occur at least once.
    pub fn is_interlacing(&self) -> bool {
        let extremes: Vec<u8> = self
            .letters
            .iter()
            .copied()
            .filter(|&l| l != 1)
            .collect();
        if !extremes.contains(&0) || !extremes.contains(&2) {
            return false;
        }
        let m = extremes.len();
        (0..m).all(|i| extremes[i] != extremes[(i + 1) % m])
    }

    /// `(F0, F1, F2)`: letter counts among the first `x` letters.
    pub fn prefix_counts(&self, x: usize) -> Result<[usize; 3]> {
        if x > self.n() {
            return Err(Error::InvalidArgument(format!(
                "prefix length {x} exceeds n = {}",
                self.n()
            )));
        }
        let mut counts = [0usize; 3];
        for &l in &self.letters[..x] {
            counts[l as usize] += 1;
        }
        Ok(counts)
    }
}

impl fmt::Display for Signature {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for &l in &self.letters {
            write!(f, "{l}")?;
        }
        Ok(())
    }
}

impl fmt::Debug for Signature {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Signature({self})")
    }
}

impl FromStr for Signature {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let letters = s
            .trim()
            .chars()
            .map(|c| {
                c.to_digit(3).map(|d| d as u8).ok_or_else(|| {
                    Error::Malformed(format!("unexpected character {c:?} in signature"))
                })
            })
            .collect::<Result<Vec<u8>>>()?;
        Signature::new(letters)
    }
}

impl TryFrom<String> for Signature {
    type Error = Error;

    fn try_from(s: String) -> Result<Self> {
        s.parse()
    }
}

impl From<Signature> for String {
    fn from(s: Signature) -> String {
        s.to_string()
    }
}

/// Letter of a folded word: the pair `(w_i, w_{i+n})`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Debug, Serialize, Deserialize)]
pub enum Pair {
    #[serde(rename = "00")]
    P00,
    #[serde(rename = "01")]
    P01,
    #[serde(rename = "10")]
    P10,
    #[serde(rename = "11")]
    P11,
}

impl Pair {
    pub fn from_bits(first: u8, second: u8) -> Pair {
        match (first, second) {
            (0, 0) => Pair::P00,
            (0, _) => Pair::P01,
            (_, 0) => Pair::P10,
            _ => Pair::P11,
        }
    }

    pub fn bits(self) -> (u8, u8) {
        match self {
            Pair::P00 => (0, 0),
            Pair::P01 => (0, 1),
            Pair::P10 => (1, 0),
            Pair::P11 => (1, 1),
        }
    }

    /// `00` or `11`.
    pub fn is_balanced(self) -> bool {
        matches!(self, Pair::P00 | Pair::P11)
    }
}

impl fmt::Display for Pair {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let (a, b) = self.bits();
        write!(f, "{a}{b}")
    }
}

#[derive(Clone, PartialEq, Eq, Hash, Debug, Serialize, Deserialize)]
pub struct FoldedWord {
    letters: Vec<Pair>,
}

impl FoldedWord {
    pub fn new(letters: Vec<Pair>) -> Result<Self> {
        if letters.len() < MIN_N {
            return Err(Error::Malformed(format!(
                "folded word length {} is below {MIN_N}",
                letters.len()
            )));
        }
        Ok(FoldedWord { letters })
    }

    pub fn n(&self) -> usize {
        self.letters.len()
    }

    pub fn letters(&self) -> &[Pair] {
        &self.letters
    }

    /// First `00` or `11` letter, if any.
    pub fn first_balanced(&self) -> Option<Pair> {
        self.letters.iter().copied().find(|p| p.is_balanced())
    }

    /// Unfolds into a word of length `2n`.
    ///
    /// Balanced letters are decoded by alternation: the first one becomes
    /// `11` when `first_zero_is_11` holds and `00` otherwise, and the
    /// following ones alternate. On folded realizable words whose first
    /// balanced letter agrees with the flag this is the exact inverse of
    /// [`Word::fold`]; without balanced letters the flag is ignored.
    pub fn unfold(&self, first_zero_is_11: bool) -> Word {
        let n = self.n();
        let mut bits = vec![0u8; 2 * n];
        let mut next_is_11 = first_zero_is_11;
        for (i, &p) in self.letters.iter().enumerate() {
            let (a, b) = if p.is_balanced() {
                let bits = if next_is_11 { (1, 1) } else { (0, 0) };
                next_is_11 = !next_is_11;
                bits
            } else {
                p.bits()
            };
            bits[i] = a;
            bits[i + n] = b;
        }
        Word::from_bits_unchecked(bits)
    }
}

impl fmt::Display for FoldedWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.letters.iter().map(|p| p.to_string()).collect();
        write!(f, "({})", parts.join(","))
    }
}

/// Equivalence class of a word under cyclic shifts and reversal,
/// represented by its lexicographically smallest member.
#[derive(Clone, PartialEq, Eq, Hash, Debug, Serialize, Deserialize)]
pub struct Bracelet {
    pub canonical_word: Word,
    /// Number of distinct words in the class; divides `4n`.
    pub orbit_size: usize,
}

impl Bracelet {
    pub fn of(word: &Word) -> Bracelet {
        let forward = word.rotate_left(least_rotation(word.bits()));
        let reversed = word.reversed();
        let backward = reversed.rotate_left(least_rotation(reversed.bits()));
        let period = smallest_period(word.bits());
        let (canonical_word, orbit_size) = if forward == backward {
            (forward, period)
        } else {
            (forward.min(backward), 2 * period)
        };
        Bracelet {
            canonical_word,
            orbit_size,
        }
    }

    pub fn n(&self) -> usize {
        self.canonical_word.n()
    }

    /// The class of `1 0 1^{n-1} 0^{n-1}`.
    pub fn distinguished(n: usize) -> Result<Bracelet> {
        if n < MIN_N {
            return Err(Error::OutOfRange {
                n,
                min: MIN_N,
                max: usize::MAX,
            });
        }
        let mut bits = vec![1u8, 0];
        bits.extend(std::iter::repeat_n(1, n - 1));
        bits.extend(std::iter::repeat_n(0, n - 1));
        Ok(Word::from_bits_unchecked(bits).canonical_bracelet())
    }
}

impl fmt::Display for Bracelet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.canonical_word.fmt(f)
    }
}

/// Start index of the lexicographically least rotation (two-pointer scan, O(len)).
fn least_rotation(s: &[u8]) -> usize {
    let len = s.len();
    let (mut i, mut j, mut k) = (0usize, 1usize, 0usize);
    while i < len && j < len && k < len {
        let a = s[(i + k) % len];
        let b = s[(j + k) % len];
        if a == b {
            k += 1;
            continue;
        }
        if a > b {
            i += k + 1;
        } else {
            j += k + 1;
        }
        if i == j {
            j += 1;
        }
        k = 0;
    }
    i.min(j)
}

/// Smallest `p` dividing `len` with `s` invariant under rotation by `p`.
fn smallest_period(s: &[u8]) -> usize {
    let len = s.len();
    let mut prefix = vec![0usize; len];
    for i in 1..len {
        let mut k = prefix[i - 1];
        while k > 0 && s[i] != s[k] {
            k = prefix[k - 1];
        }
        if s[i] == s[k] {
            k += 1;
        }
        prefix[i] = k;
    }
    let p = len - prefix[len - 1];
    if len.is_multiple_of(p) {
        p
    } else {
        len
    }
}
