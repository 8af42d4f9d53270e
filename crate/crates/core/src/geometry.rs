//! Arrangements of the perpendicular bisectors of a cyclic polygon.
//!
//! Every bisector passes through the centre, so the whole arrangement is
//! described by arc positions on the circle of circumference 1: the points
//! `p_i`, their antipodes `p_i + 1/2`, the bisector positions `l_i` (cyclic
//! midpoints of consecutive points) and the antipodal bisectors
//! `l_i + 1/2`. Regions are the half-open arcs `[m_{k-1}, m_k)` between
//! consecutive boundaries. Region `k` and region `k + n` (in sorted order)
//! are antipodal.
//!
//! The occupancy word is read counterclockwise starting from the region
//! that contains the first point, which is the same as rotating the
//! configuration so that the first point sits at 0.

use std::fmt;

use num_rational::BigRational;
use serde::{Deserialize, Serialize};

use crate::coord::Coordinate;
use crate::error::{Error, Result};
use crate::words::{Word, MIN_N};

/// `n` sorted, distinct positions in `[0, 1)`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PointConfig<C> {
    positions: Vec<C>,
}

pub type ExactConfig = PointConfig<BigRational>;
pub type FloatConfig = PointConfig<f64>;

impl<C: Coordinate> PointConfig<C> {
    /// Validates that the positions are strictly increasing in `[0, 1)`.
    /// Genericity is checked lazily by the operations that need it.
    pub fn new(positions: Vec<C>) -> Result<Self> {
        if positions.len() < MIN_N {
            return Err(Error::Malformed(format!(
                "a configuration needs at least {MIN_N} points, got {}",
                positions.len()
            )));
        }
        let zero = C::zero();
        let one = C::one();
        for p in &positions {
            if *p < zero || *p >= one || p.partial_cmp(&zero).is_none() {
                return Err(Error::Malformed(format!("position {p} is not in [0, 1)")));
            }
        }
        for w in positions.windows(2) {
            if w[0] >= w[1] {
                return Err(Error::Malformed(format!(
                    "positions must be strictly increasing ({} then {})",
                    w[0], w[1]
                )));
            }
        }
        Ok(PointConfig { positions })
    }

    /// Reduces every position modulo 1 and sorts.
    pub fn from_unsorted(positions: Vec<C>) -> Result<Self> {
        let mut positions: Vec<C> = positions.iter().map(|p| p.frac()).collect();
        positions.sort_by(|a, b| a.cmp_total(b));
        Self::new(positions)
    }

    pub fn n(&self) -> usize {
        self.positions.len()
    }

    pub fn positions(&self) -> &[C] {
        &self.positions
    }

    pub fn rotated(&self, delta: &C) -> Result<Self> {
        Self::from_unsorted(self.positions.iter().map(|p| p.add(delta)).collect())
    }

    /// Mirror image `x -> -x mod 1`.
    pub fn reflected(&self) -> Result<Self> {
        Self::from_unsorted(self.positions.iter().map(|p| C::zero().sub(p)).collect())
    }

    pub fn to_f64(&self) -> FloatConfig {
        PointConfig {
            positions: self.positions.iter().map(|p| p.to_f64()).collect(),
        }
    }

    /// Bisector `l_i` of the arc from `p_i` to `p_{i+1}` (indices mod n).
    pub fn bisectors(&self) -> Vec<C> {
        let n = self.n();
        (0..n)
            .map(|i| {
                let a = &self.positions[i];
                let b = &self.positions[(i + 1) % n];
                if a < b {
                    a.add(b).half()
                } else {
                    C::one().add(a).add(b).half().frac()
                }
            })
            .collect()
    }

    /// Critical values: points, antipodes, bisectors and antipodal bisectors,
    /// tagged for diagnostics, sorted.
    fn critical_values(&self) -> Vec<(C, &'static str, usize)> {
        let mut values = Vec::with_capacity(4 * self.n());
        for (i, l) in self.bisectors().into_iter().enumerate() {
            values.push((l.antipode(), "l'", i));
            values.push((l, "l", i));
        }
        for (i, p) in self.positions.iter().enumerate() {
            values.push((p.clone(), "p", i));
            values.push((p.antipode(), "p'", i));
        }
        values.sort_by(|a, b| a.0.cmp_total(&b.0));
        values
    }

    /// Rejects configurations where two critical values coincide (exactly,
    /// or within the float tolerance modulo 1).
    pub fn check_generic(&self) -> Result<()> {
        let values = self.critical_values();
        let len = values.len();
        for i in 0..len {
            let (a, ka, ia) = &values[i];
            let (b, kb, ib) = &values[(i + 1) % len];
            if a.ties(b) {
                return Err(Error::NonGenericConfiguration(format!(
                    "{ka}_{} = {a} and {kb}_{} = {b} coincide",
                    ia + 1,
                    ib + 1
                )));
            }
        }
        Ok(())
    }

    /// Smallest circular gap between two critical values, in `f64`.
    pub fn genericity_margin(&self) -> f64 {
        let values: Vec<f64> = self
            .critical_values()
            .iter()
            .map(|(v, _, _)| v.to_f64())
            .collect();
        let len = values.len();
        (0..len)
            .map(|i| {
                let d = (values[(i + 1) % len] - values[i]).abs();
                d.min(1.0 - d)
            })
            .fold(f64::INFINITY, f64::min)
    }
}

impl FloatConfig {
    /// The same configuration with each `f64` converted exactly to a rational.
    pub fn to_exact(&self) -> ExactConfig {
        PointConfig {
            positions: self
                .positions
                .iter()
                .map(|&p| BigRational::from_float(p).expect("finite position"))
                .collect(),
        }
    }
}

impl<C: Coordinate> fmt::Display for PointConfig<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.positions.iter().map(|p| p.to_string()).collect();
        write!(f, "{}", parts.join(","))
    }
}

/// Element of `P ∪ P'`.
#[derive(Clone, Debug, PartialEq)]
pub struct Dot<C> {
    pub position: C,
    /// `true` for a polygon vertex, `false` for an antipode.
    pub black: bool,
    pub point_index: usize,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Arrangement<C> {
    /// `l_i`, in point order.
    pub bisectors: Vec<C>,
    /// `l_i + 1/2 mod 1`, in point order.
    pub antipodal_bisectors: Vec<C>,
    /// Sorted union of both bisector families (`2n` values).
    pub boundaries: Vec<C>,
    /// Sorted union of points and antipodes (`2n` dots).
    pub dots: Vec<Dot<C>>,
}

impl<C: Coordinate> Arrangement<C> {
    pub fn n(&self) -> usize {
        self.bisectors.len()
    }

    /// Sorted region index of a position: the region `[m_{k-1}, m_k)`
    /// containing it, region 0 being the one that wraps through 0.
    pub fn region_of(&self, x: &C) -> usize {
        let k = self.boundaries.partition_point(|b| b <= x);
        k % self.boundaries.len()
    }

    /// Arc length of sorted region `k`.
    pub fn region_length(&self, k: usize) -> C {
        let m = self.boundaries.len();
        if k == 0 {
            C::one().add(&self.boundaries[0]).sub(&self.boundaries[m - 1])
        } else {
            self.boundaries[k].sub(&self.boundaries[k - 1])
        }
    }

    /// Number of points in each sorted region.
    pub fn point_counts(&self) -> Vec<u8> {
        let mut counts = vec![0u8; self.boundaries.len()];
        for dot in self.dots.iter().filter(|d| d.black) {
            counts[self.region_of(&dot.position)] += 1;
        }
        counts
    }
}

pub fn arrangement<C: Coordinate>(config: &PointConfig<C>) -> Result<Arrangement<C>> {
    config.check_generic()?;
    let bisectors = config.bisectors();
    let antipodal_bisectors: Vec<C> = bisectors.iter().map(|l| l.antipode()).collect();
    let mut boundaries: Vec<C> = bisectors
        .iter()
        .chain(antipodal_bisectors.iter())
        .cloned()
        .collect();
    boundaries.sort_by(|a, b| a.cmp_total(b));

    let mut dots: Vec<Dot<C>> = config
        .positions()
        .iter()
        .enumerate()
        .flat_map(|(i, p)| {
            [
                Dot {
                    position: p.clone(),
                    black: true,
                    point_index: i,
                },
                Dot {
                    position: p.antipode(),
                    black: false,
                    point_index: i,
                },
            ]
        })
        .collect();
    dots.sort_by(|a, b| a.position.cmp_total(&b.position));

    Ok(Arrangement {
        bisectors,
        antipodal_bisectors,
        boundaries,
        dots,
    })
}

/// Sorted region index where the occupancy word starts (the first point's region).
fn word_origin<C: Coordinate>(config: &PointConfig<C>, arr: &Arrangement<C>) -> usize {
    arr.region_of(&config.positions()[0])
}

fn word_from_counts(counts: &[u8], origin: usize) -> Result<Word> {
    let m = counts.len();
    let bits: Vec<u8> = (0..m).map(|j| counts[(origin + j) % m]).collect();
    if bits.iter().any(|&b| b > 1) {
        return Err(Error::NonGenericConfiguration(
            "a region holds two points; positions are too close to resolve".into(),
        ));
    }
    Word::new(bits)
}

pub fn occupancy_word<C: Coordinate>(config: &PointConfig<C>) -> Result<Word> {
    let arr = arrangement(config)?;
    word_from_counts(&arr.point_counts(), word_origin(config, &arr))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Direction {
    L,
    R,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum OrientedDot {
    #[serde(rename = "B_L")]
    BlackLeft,
    #[serde(rename = "B_R")]
    BlackRight,
    #[serde(rename = "W_L")]
    WhiteLeft,
    #[serde(rename = "W_R")]
    WhiteRight,
}

impl OrientedDot {
    pub fn new(black: bool, dir: Direction) -> Self {
        match (black, dir) {
            (true, Direction::L) => OrientedDot::BlackLeft,
            (true, Direction::R) => OrientedDot::BlackRight,
            (false, Direction::L) => OrientedDot::WhiteLeft,
            (false, Direction::R) => OrientedDot::WhiteRight,
        }
    }

    pub fn is_black(self) -> bool {
        matches!(self, OrientedDot::BlackLeft | OrientedDot::BlackRight)
    }

    pub fn direction(self) -> Direction {
        match self {
            OrientedDot::BlackLeft | OrientedDot::WhiteLeft => Direction::L,
            _ => Direction::R,
        }
    }
}

impl fmt::Display for OrientedDot {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            OrientedDot::BlackLeft => "B_L",
            OrientedDot::BlackRight => "B_R",
            OrientedDot::WhiteLeft => "W_L",
            OrientedDot::WhiteRight => "W_R",
        };
        f.write_str(s)
    }
}

/// Oriented colored dot configuration: the `n` dots of `[0, 1/2)` after
/// rotating the first point to 0, each with its color and the side of its
/// nearest opposite-color dot.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Ocdc {
    pub entries: Vec<OrientedDot>,
}

/// For every sorted dot, the cyclic indices of the nearest opposite-color
/// dots on its left and on its right.
fn opposite_neighbours<C>(dots: &[Dot<C>]) -> Vec<(usize, usize)> {
    let m = dots.len();
    let mut right = vec![usize::MAX; m];
    let mut left = vec![usize::MAX; m];
    // Two passes around the circle resolve the wrap-around.
    let mut last = [usize::MAX; 2];
    for step in 0..2 * m {
        let i = step % m;
        let own = dots[i].black as usize;
        if last[1 - own] != usize::MAX {
            left[i] = last[1 - own];
        }
        last[own] = i;
    }
    last = [usize::MAX; 2];
    for step in (0..2 * m).rev() {
        let i = step % m;
        let own = dots[i].black as usize;
        if last[1 - own] != usize::MAX {
            right[i] = last[1 - own];
        }
        last[own] = i;
    }
    left.into_iter().zip(right).collect()
}

/// `D(q)` for every sorted dot, plus the index of `C(q)`.
fn looks<C: Coordinate>(dots: &[Dot<C>]) -> Result<Vec<(Direction, usize)>> {
    opposite_neighbours(dots)
        .into_iter()
        .enumerate()
        .map(|(i, (l, r))| {
            let q = &dots[i].position;
            let to_right = dots[r].position.sub(q).frac();
            let to_left = q.sub(&dots[l].position).frac();
            if to_right.ties(&to_left) {
                return Err(Error::NonGenericConfiguration(format!(
                    "dot at {q} is equidistant from two opposite-color dots"
                )));
            }
            Ok(if to_right < to_left {
                (Direction::R, r)
            } else {
                (Direction::L, l)
            })
        })
        .collect()
}

pub fn ocdc<C: Coordinate>(config: &PointConfig<C>) -> Result<Ocdc> {
    let arr = arrangement(config)?;
    let dir = looks(&arr.dots)?;
    let start = arr
        .dots
        .iter()
        .position(|d| d.black && d.point_index == 0)
        .expect("first point is a dot");
    let m = arr.dots.len();
    let entries = (0..m / 2)
        .map(|j| {
            let i = (start + j) % m;
            OrientedDot::new(arr.dots[i].black, dir[i].0)
        })
        .collect();
    Ok(Ocdc { entries })
}

/// Per-region types and lengths plus the partial processes `h_k(t)` and
/// `ℓ_k(t)` (regions entirely inside the arc `[0, t]`).
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RegionStats {
    /// Region types in word order.
    pub types: Vec<u8>,
    /// Region arc lengths in word order.
    pub lengths: Vec<f64>,
    /// `H_k`: number of regions of type `k`.
    #[serde(rename = "H")]
    pub counts: [usize; 3],
    /// `L_k`: total length of the regions of type `k`.
    #[serde(rename = "L")]
    pub total_lengths: [f64; 3],
    /// Total length of the empty regions.
    #[serde(rename = "Le")]
    pub empty_length: f64,
    pub t_grid: Vec<f64>,
    pub h_grid: Vec<[usize; 3]>,
    pub l_grid: Vec<[f64; 3]>,
}

pub fn region_stats<C: Coordinate>(config: &PointConfig<C>, t_grid: &[f64]) -> Result<RegionStats> {
    if let Some(t) = t_grid.iter().find(|t| !(0.0..=1.0).contains(*t)) {
        return Err(Error::InvalidArgument(format!("grid value {t} is not in [0, 1]")));
    }
    let arr = arrangement(config)?;
    let counts = arr.point_counts();
    let m = counts.len();
    let n = m / 2;
    let sorted_types: Vec<u8> = (0..m).map(|k| counts[k] + counts[(k + n) % m]).collect();
    let sorted_lengths: Vec<f64> = (0..m).map(|k| arr.region_length(k).to_f64()).collect();

    let origin = word_origin(config, &arr);
    // validates that no region holds two points
    let word = word_from_counts(&counts, origin)?;
    let mut empty_length = 0.0;
    let mut types = Vec::with_capacity(m);
    let mut lengths = Vec::with_capacity(m);
    for j in 0..m {
        let k = (origin + j) % m;
        types.push(sorted_types[k]);
        lengths.push(sorted_lengths[k]);
        if word.bits()[j] == 0 {
            empty_length += sorted_lengths[k];
        }
    }
    let mut region_counts = [0usize; 3];
    let mut total_lengths = [0.0f64; 3];
    for (&t, &len) in types.iter().zip(&lengths) {
        region_counts[t as usize] += 1;
        total_lengths[t as usize] += len;
    }

    // Regions 1..m-1 (sorted) end at boundaries[k] and lie inside [0, t]
    // exactly when boundaries[k] <= t; region 0 wraps through 0.
    let right_ends: Vec<f64> = arr.boundaries.iter().map(|b| b.to_f64()).collect();
    let mut cum_h = vec![[0usize; 3]; m];
    let mut cum_l = vec![[0.0f64; 3]; m];
    for k in 1..m {
        cum_h[k] = cum_h[k - 1];
        cum_l[k] = cum_l[k - 1];
        let t = sorted_types[k] as usize;
        cum_h[k][t] += 1;
        cum_l[k][t] += sorted_lengths[k];
    }
    let mut h_grid = Vec::with_capacity(t_grid.len());
    let mut l_grid = Vec::with_capacity(t_grid.len());
    for &t in t_grid {
        if t >= 1.0 {
            h_grid.push(region_counts);
            l_grid.push(total_lengths);
            continue;
        }
        let inside = right_ends[1..].partition_point(|&b| b <= t);
        h_grid.push(cum_h[inside]);
        l_grid.push(cum_l[inside]);
    }

    Ok(RegionStats {
        types,
        lengths,
        counts: region_counts,
        total_lengths,
        empty_length,
        t_grid: t_grid.to_vec(),
        h_grid,
        l_grid,
    })
}

/// Outcome of checking the dot/region correspondences on one configuration.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct LemmaReport {
    pub violations: Vec<String>,
}

impl LemmaReport {
    pub fn holds(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Checks that type-2 regions are exactly the `RL` patterns (mutually
/// nearest black/white pairs), type-0 regions exactly the `LR` patterns,
/// that some region has type 2, and that the signature is interlacing.
pub fn verify_pattern_lemmas<C: Coordinate>(config: &PointConfig<C>) -> Result<LemmaReport> {
    let arr = arrangement(config)?;
    let dots = &arr.dots;
    let m = dots.len();
    let n = m / 2;
    let looks = looks(dots)?;
    let counts = arr.point_counts();
    let region: Vec<usize> = dots.iter().map(|d| arr.region_of(&d.position)).collect();
    let mut dots_in = vec![Vec::new(); m];
    for (i, &r) in region.iter().enumerate() {
        dots_in[r].push(i);
    }
    let mut report = LemmaReport::default();
    let mut fail = |msg: String| report.violations.push(msg);

    for k in 0..m {
        let kind = counts[k] + counts[(k + n) % m];
        if kind as usize != dots_in[k].len() {
            fail(format!(
                "region {k}: type {kind} but {} dots",
                dots_in[k].len()
            ));
        }
    }

    let mut rl = 0;
    let mut lr = 0;
    for i in 0..m {
        let j = (i + 1) % m;
        match (looks[i].0, looks[j].0) {
            (Direction::R, Direction::L) => {
                rl += 1;
                if dots[i].black == dots[j].black {
                    fail(format!("RL pair at dots {i},{j} has a single color"));
                }
                if looks[i].1 != j || looks[j].1 != i {
                    fail(format!("RL pair at dots {i},{j} is not mutually nearest"));
                }
                if region[i] != region[j] || dots_in[region[i]].len() != 2 {
                    fail(format!("RL pair at dots {i},{j} is not a type-2 region"));
                }
            }
            (Direction::L, Direction::R) => {
                lr += 1;
                let crossed = (region[j] + m - region[i]) % m;
                let middle = (region[i] + 1) % m;
                if crossed != 2 || !dots_in[middle].is_empty() {
                    fail(format!(
                        "LR pair at dots {i},{j} does not enclose exactly one empty region pair"
                    ));
                }
            }
            _ => {}
        }
    }
    let type2 = dots_in.iter().filter(|d| d.len() == 2).count();
    let type0 = dots_in.iter().filter(|d| d.is_empty()).count();
    if rl != type2 {
        fail(format!("{rl} RL patterns but {type2} regions of type 2"));
    }
    if lr != type0 {
        fail(format!("{lr} LR patterns but {type0} regions of type 0"));
    }
    if type2 == 0 {
        fail("no region of type 2".into());
    }
    let word = word_from_counts(&counts, word_origin(config, &arr))?;
    if !word.signature().is_interlacing() {
        fail(format!("signature {} is not interlacing", word.signature()));
    }
    Ok(report)
}
