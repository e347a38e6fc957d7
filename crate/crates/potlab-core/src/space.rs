//! Finite measure spaces: weighted point sets, optionally embedded in
//! Euclidean space, and nonnegative measures over them.

use alloc::vec;
use alloc::vec::Vec;

#[cfg(not(feature = "std"))]
use num_traits::Float;
use thiserror::Error;

use crate::xr::{is_ext_nonneg, is_finite_nonneg};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SpaceError {
    #[error("empty point set")]
    Empty,
    #[error("weight at point {0} must be finite and nonnegative")]
    BadWeight(usize),
    #[error("at least one weight must be positive")]
    AllZeroWeights,
    #[error("coordinate dimension mismatch at point {0}")]
    DimMismatch(usize),
    #[error("nonfinite coordinate at point {0}")]
    BadCoord(usize),
    #[error("expected {expected} entries, found {found}")]
    LengthMismatch { expected: usize, found: usize },
    #[error("measure value at point {0} must be in [0, +inf]")]
    BadMeasureValue(usize),
}

/// A finite point set with quadrature weights (the ambient measure) and
/// optional Euclidean coordinates.
#[derive(Debug, Clone, PartialEq)]
pub struct MeasureSpace {
    weights: Vec<f64>,
    coords: Vec<f64>, // flattened row-major, n * dim entries
    dim: usize,
}

impl MeasureSpace {
    /// A space with weights only (no coordinates).
    pub fn weighted(weights: Vec<f64>) -> Result<Self, SpaceError> {
        Self::build(weights, Vec::new(), 0)
    }

    /// A space embedded in `R^d`; every point must have the same dimension.
    pub fn with_coords(points: Vec<Vec<f64>>, weights: Vec<f64>) -> Result<Self, SpaceError> {
        if points.len() != weights.len() {
            return Err(SpaceError::LengthMismatch {
                expected: weights.len(),
                found: points.len(),
            });
        }
        if points.is_empty() {
            return Err(SpaceError::Empty);
        }
        let dim = points[0].len();
        let mut coords = Vec::with_capacity(points.len() * dim);
        for (i, p) in points.iter().enumerate() {
            if p.len() != dim {
                return Err(SpaceError::DimMismatch(i));
            }
            for &c in p {
                if !c.is_finite() {
                    return Err(SpaceError::BadCoord(i));
                }
                coords.push(c);
            }
        }
        Self::build(weights, coords, dim)
    }

    /// Points on the real line.
    pub fn line(xs: Vec<f64>, weights: Vec<f64>) -> Result<Self, SpaceError> {
        let points = xs.into_iter().map(|x| vec![x]).collect();
        Self::with_coords(points, weights)
    }

    fn build(weights: Vec<f64>, coords: Vec<f64>, dim: usize) -> Result<Self, SpaceError> {
        if weights.is_empty() {
            return Err(SpaceError::Empty);
        }
        let mut any_positive = false;
        for (i, &w) in weights.iter().enumerate() {
            if !is_finite_nonneg(w) {
                return Err(SpaceError::BadWeight(i));
            }
            any_positive |= w > 0.0;
        }
        if !any_positive {
            return Err(SpaceError::AllZeroWeights);
        }
        Ok(Self {
            weights,
            coords,
            dim,
        })
    }

    pub fn n(&self) -> usize {
        self.weights.len()
    }

    /// Coordinate dimension; `0` when the space carries no coordinates.
    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn has_coords(&self) -> bool {
        self.dim > 0
    }

    pub fn weight(&self, i: usize) -> f64 {
        self.weights[i]
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn coord(&self, i: usize) -> &[f64] {
        assert!(self.dim > 0, "space has no coordinates");
        &self.coords[i * self.dim..(i + 1) * self.dim]
    }

    /// Euclidean distance between points `i` and `j`.
    pub fn distance(&self, i: usize, j: usize) -> f64 {
        let (a, b) = (self.coord(i), self.coord(j));
        let mut s = 0.0;
        for k in 0..self.dim {
            let d = a[k] - b[k];
            s += d * d;
        }
        s.sqrt()
    }

    pub fn total_mass(&self) -> f64 {
        self.weights.iter().sum()
    }

    /// Restriction to a subset of points, in the order given.
    pub fn restrict(&self, idx: &[usize]) -> Result<Self, SpaceError> {
        let weights = idx.iter().map(|&i| self.weights[i]).collect();
        if self.dim == 0 {
            Self::build(weights, Vec::new(), 0)
        } else {
            let mut coords = Vec::with_capacity(idx.len() * self.dim);
            for &i in idx {
                coords.extend_from_slice(self.coord(i));
            }
            Self::build(weights, coords, self.dim)
        }
    }
}

/// A nonnegative (extended-real) measure over a [`MeasureSpace`]: one mass
/// per point. Houses charges distinct from the quadrature weights.
#[derive(Debug, Clone, PartialEq)]
pub struct Measure {
    values: Vec<f64>,
}

impl Measure {
    pub fn new(values: Vec<f64>, space: &MeasureSpace) -> Result<Self, SpaceError> {
        if values.len() != space.n() {
            return Err(SpaceError::LengthMismatch {
                expected: space.n(),
                found: values.len(),
            });
        }
        for (i, &v) in values.iter().enumerate() {
            if !is_ext_nonneg(v) {
                return Err(SpaceError::BadMeasureValue(i));
            }
        }
        Ok(Self { values })
    }

    /// Unit mass at point `p`.
    pub fn dirac(p: usize, space: &MeasureSpace) -> Self {
        let mut values = vec![0.0; space.n()];
        values[p] = 1.0;
        Self { values }
    }

    /// The ambient measure itself (the space's weights).
    pub fn from_weights(space: &MeasureSpace) -> Self {
        Self {
            values: space.weights().to_vec(),
        }
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }
}
