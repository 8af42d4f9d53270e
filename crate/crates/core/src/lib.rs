//! Occupancy words of perpendicular-bisector arrangements of points on a circle.

pub mod acceptance;
pub mod coord;
pub mod enumeration;
pub mod error;
pub mod geometry;
pub mod montecarlo;
pub mod random_points;
pub mod realization;
pub mod uniform_sampler;
pub mod words;

pub use error::{Error, Result};
pub use words::{Bracelet, FoldedWord, Pair, Signature, Word, MIN_N};
