//! Samplers for uniform points and for the exponential spacing model.

use rand::Rng;

use crate::geometry::{Direction, FloatConfig, OrientedDot, PointConfig};
use crate::words::MIN_N;
use crate::error::{Error, Result};

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

/// `n` i.i.d. uniform points on `[0, 1)`, redrawn until generic.
pub fn sample_uniform_config<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Result<FloatConfig> {
    check_n(n)?;
    loop {
        let positions: Vec<f64> = (0..n).map(|_| rng.gen::<f64>()).collect();
        if let Ok(c) = PointConfig::from_unsorted(positions) {
            if c.check_generic().is_ok() {
                return Ok(c);
            }
        }
    }
}

/// Standard exponential by inversion.
pub fn sample_exp<R: Rng + ?Sized>(rng: &mut R) -> f64 {
    -(1.0 - rng.gen::<f64>()).ln()
}

/// Sum of `k` standard exponentials.
pub fn sample_erlang<R: Rng + ?Sized>(k: usize, rng: &mut R) -> f64 {
    (0..k).map(|_| sample_exp(rng)).sum()
}

/// Dots `Y_0 = 0 < Y_1 < ... < Y_n` with exponential spacings and colors
/// `Γ_0 = 1`, `Γ_n = 0`, `Γ_1..Γ_{n-1}` fair coins (1 = black).
#[derive(Clone, Debug, PartialEq)]
pub struct ExpSpacingSample {
    /// `T_1..T_n`.
    pub spacings: Vec<f64>,
    /// `Y_0..Y_n`.
    pub dots: Vec<f64>,
    /// `Γ_0..Γ_n`.
    pub colors: Vec<u8>,
}

pub fn sample_exp_model<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Result<ExpSpacingSample> {
    check_n(n)?;
    let spacings: Vec<f64> = (0..n).map(|_| sample_exp(rng)).collect();
    let mut dots = Vec::with_capacity(n + 1);
    dots.push(0.0);
    for t in &spacings {
        dots.push(dots.last().unwrap() + t);
    }
    let mut colors = Vec::with_capacity(n + 1);
    colors.push(1);
    colors.extend((1..n).map(|_| u8::from(rng.gen::<bool>())));
    colors.push(0);
    Ok(ExpSpacingSample {
        spacings,
        dots,
        colors,
    })
}

impl ExpSpacingSample {
    pub fn n(&self) -> usize {
        self.spacings.len()
    }

    /// `Y_n`.
    pub fn total(&self) -> f64 {
        self.dots[self.n()]
    }

    /// `(Y_i, Γ_i)` for `-n <= i <= 2n - 1`, using
    /// `(Y_{i±n}, Γ_{i±n}) = (Y_i ± Y_n, 1 - Γ_i)`.
    pub fn dot(&self, i: isize) -> (f64, u8) {
        let n = self.n() as isize;
        assert!((-n..2 * n).contains(&i), "dot index {i} outside -n..2n");
        if i < 0 {
            let (y, g) = self.dot(i + n);
            (y - self.total(), 1 - g)
        } else if i < n {
            (self.dots[i as usize], self.colors[i as usize])
        } else {
            let (y, g) = self.dot(i - n);
            (y + self.total(), 1 - g)
        }
    }

    /// The circle configuration: dots scaled by `1/(2Y_n)`, black dots are
    /// points, white dots are antipodes of points.
    pub fn to_config(&self) -> Result<FloatConfig> {
        let scale = 2.0 * self.total();
        let positions = (0..self.n())
            .map(|i| {
                let x = self.dots[i] / scale;
                if self.colors[i] == 1 {
                    x
                } else {
                    x + 0.5
                }
            })
            .collect();
        PointConfig::from_unsorted(positions)
    }

    /// OCDC read directly from the extended dot sequence.
    pub fn ocdc(&self) -> Vec<OrientedDot> {
        let n = self.n() as isize;
        (0..n)
            .map(|i| {
                let (y, g) = self.dot(i);
                let left = (1..=n)
                    .map(|d| self.dot(i - d))
                    .find(|&(_, c)| c != g)
                    .expect("an opposite dot lies within n steps");
                let right = (1..=n)
                    .map(|d| self.dot(i + d))
                    .find(|&(_, c)| c != g)
                    .expect("an opposite dot lies within n steps");
                let dir = if right.0 - y < y - left.0 {
                    Direction::R
                } else {
                    Direction::L
                };
                OrientedDot::new(g == 1, dir)
            })
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::ocdc;
    use crate::montecarlo::trial_rng;

    #[test]
    fn uniform_configs_are_sorted_generic_and_reproducible() {
        let a = sample_uniform_config(7, &mut trial_rng(3, 0)).unwrap();
        let b = sample_uniform_config(7, &mut trial_rng(3, 0)).unwrap();
        assert_eq!(a, b);
        assert!(a.positions().windows(2).all(|p| p[0] < p[1]));
        assert!(a.check_generic().is_ok());
        assert!(sample_uniform_config(2, &mut trial_rng(3, 0)).is_err());
    }

    #[test]
    fn exp_model_structure() {
        for seed in 0..50 {
            let s = sample_exp_model(6, &mut trial_rng(seed, 0)).unwrap();
            assert_eq!(s.colors[0], 1);
            assert_eq!(s.colors[6], 0);
            assert!(s.dots.windows(2).all(|p| p[0] < p[1]));
            for i in -6isize..12 {
                let (y, g) = s.dot(i);
                if (0..6).contains(&i) {
                    let (yp, gp) = s.dot(i + 6);
                    assert!((yp - y - s.total()).abs() < 1e-12);
                    assert_eq!(gp, 1 - g);
                    let (ym, gm) = s.dot(i - 6);
                    assert!((y - ym - s.total()).abs() < 1e-12);
                    assert_eq!(gm, 1 - g);
                }
            }
            // Y_n agrees with the extension of Y_0
            assert_eq!(s.dot(6), (s.total(), 0));
        }
    }

    #[test]
    fn exp_model_ocdc_matches_geometry() {
        for seed in 0..300 {
            let s = sample_exp_model(3 + (seed as usize % 8), &mut trial_rng(seed, 1)).unwrap();
            let config = s.to_config().unwrap();
            assert_eq!(config.positions()[0], 0.0);
            let from_geometry = ocdc(&config).unwrap();
            assert_eq!(from_geometry.entries, s.ocdc(), "seed {seed}");
        }
    }
}
