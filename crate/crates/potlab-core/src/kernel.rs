//! Dense nonnegative kernels over the extended reals and the kernel
//! calculus: application against weighted functions, potentials of
//! measures, and the reweighting transformations.
//!
//! A kernel stores the matrix `K(x, y)` as a mathematical object, so a
//! singular family keeps `+inf` on its diagonal. Whether quadrature sums
//! include the diagonal is governed by the `exclude_diagonal` flag: when
//! set, self-interaction terms are treated as zero in every sum (the
//! standard Nystrom convention), while reciprocal-distance computations
//! still see the singular value.

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

#[cfg(not(feature = "std"))]
use num_traits::Float;
use thiserror::Error;

use crate::space::{Measure, MeasureSpace};
use crate::xr::{is_ext_nonneg, xmul};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum KernelError {
    #[error("kernel must be square, row {0} has wrong length")]
    NotSquare(usize),
    #[error("kernel entry ({i}, {j}) must be in [0, +inf]")]
    BadEntry { i: usize, j: usize },
    #[error("symmetric flag set but entries ({i}, {j}) and ({j}, {i}) differ")]
    AsymmetricEntries { i: usize, j: usize },
    #[error("kernel size {kernel} does not match space size {space}")]
    SizeMismatch { kernel: usize, space: usize },
    #[error("function entry {0} must be in [0, +inf]")]
    BadFunctionValue(usize),
    #[error("space carries no coordinates of dimension {0}")]
    MissingCoords(usize),
    #[error("exponent {alpha} out of range (need 0 < alpha < {dim})")]
    AlphaOutOfRange { alpha: f64, dim: usize },
    #[error("power {0} must be positive")]
    BadPower(f64),
    #[error("diagonal policy value {0} must be finite and nonnegative")]
    BadDiagonalValue(f64),
    #[error("radial profile must be strictly positive (sample {0})")]
    ProfileNonpositive(usize),
    #[error("radial profile must be nonincreasing (sample {0})")]
    ProfileNotNonincreasing(usize),
    #[error("radial profile needs at least one sample with radius 0 first")]
    ProfileBadGrid,
    #[error("grid coordinates must be strictly increasing (point {0})")]
    UnorderedGrid(usize),
    #[error("kernel must be symmetric for this operation")]
    NotSymmetric,
    #[error("kernel must be positive off the diagonal, entry ({i}, {j}) is zero")]
    ZeroOffDiagonal { i: usize, j: usize },
    #[error("restricted set is empty: K(x, w) is infinite everywhere")]
    EmptyRestriction,
    #[error("weight function entry {0} must be finite and positive")]
    BadWeightFunction(usize),
    #[error("scale factor {0} must be finite and positive")]
    BadScale(f64),
}

/// How constructors of singular families fill the diagonal.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum DiagonalPolicy {
    /// Keep the singular value `+inf` and skip the diagonal in sums.
    Exclude,
    /// Replace the diagonal by a finite ceiling.
    Cap(f64),
    /// Replace the diagonal by a caller-supplied cell value.
    Value(f64),
}

impl Default for DiagonalPolicy {
    fn default() -> Self {
        DiagonalPolicy::Exclude
    }
}

/// A dense `n x n` kernel with values in `[0, +inf]`.
#[derive(Debug, Clone, PartialEq)]
pub struct Kernel {
    n: usize,
    entries: Vec<f64>, // row-major
    symmetric: bool,
    exclude_diagonal: bool,
    name: String,
}

impl Kernel {
    /// Build from rows, auto-detecting exact symmetry.
    pub fn from_entries(name: &str, rows: Vec<Vec<f64>>) -> Result<Self, KernelError> {
        let n = rows.len();
        let mut entries = Vec::with_capacity(n * n);
        for (i, row) in rows.iter().enumerate() {
            if row.len() != n {
                return Err(KernelError::NotSquare(i));
            }
            for (j, &v) in row.iter().enumerate() {
                if !is_ext_nonneg(v) {
                    return Err(KernelError::BadEntry { i, j });
                }
                entries.push(v);
            }
        }
        let symmetric = detect_symmetry(&entries, n);
        Ok(Self {
            n,
            entries,
            symmetric,
            exclude_diagonal: false,
            name: String::from(name),
        })
    }

    /// Build from flat parts with explicit flags; a `symmetric` claim is
    /// validated against the entries.
    pub fn from_parts(
        name: &str,
        n: usize,
        entries: Vec<f64>,
        symmetric: bool,
        exclude_diagonal: bool,
    ) -> Result<Self, KernelError> {
        if entries.len() != n * n {
            return Err(KernelError::NotSquare(n));
        }
        for i in 0..n {
            for j in 0..n {
                if !is_ext_nonneg(entries[i * n + j]) {
                    return Err(KernelError::BadEntry { i, j });
                }
            }
        }
        if symmetric {
            for i in 0..n {
                for j in (i + 1)..n {
                    if entries[i * n + j] != entries[j * n + i] {
                        return Err(KernelError::AsymmetricEntries { i, j });
                    }
                }
            }
        }
        Ok(Self {
            n,
            entries,
            symmetric,
            exclude_diagonal,
            name: String::from(name),
        })
    }

    /// The zero kernel.
    pub fn zero(n: usize) -> Self {
        Self {
            n,
            entries: alloc::vec![0.0; n * n],
            symmetric: true,
            exclude_diagonal: false,
            name: String::from("zero"),
        }
    }

    /// The identity-matrix kernel.
    pub fn identity(n: usize) -> Self {
        let mut entries = alloc::vec![0.0; n * n];
        for i in 0..n {
            entries[i * n + i] = 1.0;
        }
        Self {
            n,
            entries,
            symmetric: true,
            exclude_diagonal: false,
            name: String::from("identity"),
        }
    }

    /// Riesz kernel `|x - y|^(alpha - dim)` for `0 < alpha < dim`.
    pub fn riesz(
        space: &MeasureSpace,
        alpha: f64,
        dim: usize,
        diagonal: DiagonalPolicy,
    ) -> Result<Self, KernelError> {
        if space.dim() != dim || dim == 0 {
            return Err(KernelError::MissingCoords(dim));
        }
        if !(alpha > 0.0 && alpha < dim as f64) {
            return Err(KernelError::AlphaOutOfRange { alpha, dim });
        }
        let exponent = alpha - dim as f64;
        Self::from_distances(
            space,
            |r| r.powf(exponent),
            diagonal,
            &format!("riesz(alpha={alpha}, dim={dim})"),
        )
    }

    /// Reciprocal power of the Euclidean distance, `|x - y|^(-s)` with
    /// `s > 0`. The induced `d = 1/K` is `|x - y|^s`.
    pub fn inverse_distance(
        space: &MeasureSpace,
        s: f64,
        diagonal: DiagonalPolicy,
    ) -> Result<Self, KernelError> {
        if !space.has_coords() {
            return Err(KernelError::MissingCoords(1));
        }
        if !(s > 0.0 && s.is_finite()) {
            return Err(KernelError::BadPower(s));
        }
        Self::from_distances(
            space,
            |r| r.powf(-s),
            diagonal,
            &format!("inverse_distance(s={s})"),
        )
    }

    fn from_distances(
        space: &MeasureSpace,
        k: impl Fn(f64) -> f64,
        diagonal: DiagonalPolicy,
        name: &str,
    ) -> Result<Self, KernelError> {
        let n = space.n();
        let diag = match diagonal {
            DiagonalPolicy::Exclude => f64::INFINITY,
            DiagonalPolicy::Cap(c) | DiagonalPolicy::Value(c) => {
                if !(c.is_finite() && c >= 0.0) {
                    return Err(KernelError::BadDiagonalValue(c));
                }
                c
            }
        };
        let mut entries = alloc::vec![0.0; n * n];
        for i in 0..n {
            entries[i * n + i] = diag;
            for j in (i + 1)..n {
                let v = k(space.distance(i, j));
                entries[i * n + j] = v;
                entries[j * n + i] = v;
            }
        }
        Ok(Self {
            n,
            entries,
            symmetric: true,
            exclude_diagonal: matches!(diagonal, DiagonalPolicy::Exclude),
            name: String::from(name),
        })
    }

    /// Kernel `k(|x - y|)` from a sampled radially nonincreasing profile.
    pub fn radial(space: &MeasureSpace, profile: &RadialProfile) -> Result<Self, KernelError> {
        if !space.has_coords() {
            return Err(KernelError::MissingCoords(1));
        }
        let n = space.n();
        let mut entries = alloc::vec![0.0; n * n];
        for i in 0..n {
            entries[i * n + i] = profile.eval(0.0);
            for j in (i + 1)..n {
                let v = profile.eval(space.distance(i, j));
                entries[i * n + j] = v;
                entries[j * n + i] = v;
            }
        }
        Ok(Self {
            n,
            entries,
            symmetric: true,
            exclude_diagonal: false,
            name: String::from("radial"),
        })
    }

    /// Cumulative kernel on an ordered 1-D grid: `K(x_i, x_j) = 1` when
    /// `x_j <= x_i`. Applying it against unit data integrates from the left
    /// endpoint, which makes it the exactness witness for the lower bounds.
    pub fn volterra(space: &MeasureSpace) -> Result<Self, KernelError> {
        if space.dim() != 1 {
            return Err(KernelError::MissingCoords(1));
        }
        let n = space.n();
        for i in 1..n {
            if space.coord(i)[0] <= space.coord(i - 1)[0] {
                return Err(KernelError::UnorderedGrid(i));
            }
        }
        let mut entries = alloc::vec![0.0; n * n];
        for i in 0..n {
            for j in 0..=i {
                entries[i * n + j] = 1.0;
            }
        }
        Ok(Self {
            n,
            entries,
            symmetric: false,
            exclude_diagonal: false,
            name: String::from("volterra"),
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn is_symmetric(&self) -> bool {
        self.symmetric
    }

    pub fn excludes_diagonal(&self) -> bool {
        self.exclude_diagonal
    }

    /// Raw matrix entry, diagonal included.
    pub fn entry(&self, i: usize, j: usize) -> f64 {
        self.entries[i * self.n + j]
    }

    /// Entry as used by quadrature sums: zero on an excluded diagonal.
    pub fn effective_entry(&self, i: usize, j: usize) -> f64 {
        if self.exclude_diagonal && i == j {
            0.0
        } else {
            self.entries[i * self.n + j]
        }
    }

    pub fn rows(&self) -> Vec<Vec<f64>> {
        (0..self.n)
            .map(|i| self.entries[i * self.n..(i + 1) * self.n].to_vec())
            .collect()
    }

    /// `(Gf)_i = sum_j K(i, j) f_j w_j` under extended arithmetic.
    ///
    /// The quadrature weights of `space` are always folded in; `f` must be
    /// a nonnegative (extended) function.
    pub fn apply(&self, space: &MeasureSpace, f: &[f64]) -> Result<Vec<f64>, KernelError> {
        self.check_space(space)?;
        if f.len() != self.n {
            return Err(KernelError::SizeMismatch {
                kernel: self.n,
                space: f.len(),
            });
        }
        for (j, &v) in f.iter().enumerate() {
            if !is_ext_nonneg(v) {
                return Err(KernelError::BadFunctionValue(j));
            }
        }
        let w = space.weights();
        let mut out = Vec::with_capacity(self.n);
        for i in 0..self.n {
            let mut s = 0.0;
            for j in 0..self.n {
                s += xmul(self.effective_entry(i, j), xmul(f[j], w[j]));
            }
            out.push(s);
        }
        Ok(out)
    }

    /// Potential of a measure: `(G nu)_i = sum_j K(i, j) nu_j`. No
    /// quadrature weights are involved; the measure carries its own mass.
    pub fn potential(&self, nu: &Measure) -> Result<Vec<f64>, KernelError> {
        if nu.len() != self.n {
            return Err(KernelError::SizeMismatch {
                kernel: self.n,
                space: nu.len(),
            });
        }
        let v = nu.values();
        let mut out = Vec::with_capacity(self.n);
        for i in 0..self.n {
            let mut s = 0.0;
            for j in 0..self.n {
                s += xmul(self.effective_entry(i, j), v[j]);
            }
            out.push(s);
        }
        Ok(out)
    }

    /// `G1`: the potential of the ambient measure.
    pub fn potential_of_weights(&self, space: &MeasureSpace) -> Result<Vec<f64>, KernelError> {
        let ones = alloc::vec![1.0; self.n];
        self.apply(space, &ones)
    }

    /// Normalize by a reference point: `K_w(x, y) = K(x, y) / (K(x, w) K(y, w))`
    /// on the set where `K(., w)` is finite. Returns the restricted kernel
    /// together with the surviving indices.
    pub fn modify_w(&self, w: usize) -> Result<(Kernel, Vec<usize>), KernelError> {
        if !self.symmetric {
            return Err(KernelError::NotSymmetric);
        }
        for i in 0..self.n {
            for j in 0..self.n {
                if i != j && self.entry(i, j) == 0.0 {
                    return Err(KernelError::ZeroOffDiagonal { i, j });
                }
            }
        }
        let idx: Vec<usize> = (0..self.n)
            .filter(|&i| self.entry(i, w).is_finite())
            .collect();
        if idx.is_empty() {
            return Err(KernelError::EmptyRestriction);
        }
        let m = idx.len();
        let mut entries = alloc::vec![0.0; m * m];
        for (a, &i) in idx.iter().enumerate() {
            for (b, &j) in idx.iter().enumerate() {
                let denom = self.entry(i, w) * self.entry(j, w);
                entries[a * m + b] = ext_div(self.entry(i, j), denom);
            }
        }
        let kernel = Kernel {
            n: m,
            entries,
            symmetric: true,
            exclude_diagonal: self.exclude_diagonal,
            name: format!("{}_w{}", self.name, w),
        };
        Ok((kernel, idx))
    }

    /// Weight-normalized kernel `K^h(x, y) = K(x, y) / (h(x) h(y))`.
    pub fn modify_h(&self, h: &[f64]) -> Result<Kernel, KernelError> {
        self.check_h(h)?;
        let n = self.n;
        let mut entries = alloc::vec![0.0; n * n];
        for i in 0..n {
            for j in 0..n {
                entries[i * n + j] = ext_div(self.entry(i, j), h[i] * h[j]);
            }
        }
        Ok(Kernel {
            n,
            entries,
            symmetric: self.symmetric,
            exclude_diagonal: self.exclude_diagonal,
            name: format!("{}^h", self.name),
        })
    }

    /// One-sided weighting `G^h(x, y) = K(x, y) h(y)^q / h(x)`, generally
    /// non-symmetric.
    pub fn weighted_gh(&self, h: &[f64], q: f64) -> Result<Kernel, KernelError> {
        self.check_h(h)?;
        let n = self.n;
        let mut entries = alloc::vec![0.0; n * n];
        for i in 0..n {
            for j in 0..n {
                entries[i * n + j] = ext_div(xmul(self.entry(i, j), h[j].powf(q)), h[i]);
            }
        }
        let symmetric = detect_symmetry(&entries, n);
        Ok(Kernel {
            n,
            entries,
            symmetric,
            exclude_diagonal: self.exclude_diagonal,
            name: format!("{}^(h,q={q})", self.name),
        })
    }

    /// Entrywise positive scaling.
    pub fn scaled(&self, c: f64) -> Result<Kernel, KernelError> {
        if !(c.is_finite() && c > 0.0) {
            return Err(KernelError::BadScale(c));
        }
        let entries = self.entries.iter().map(|&v| xmul(v, c)).collect();
        Ok(Kernel {
            n: self.n,
            entries,
            symmetric: self.symmetric,
            exclude_diagonal: self.exclude_diagonal,
            name: format!("{}*{c}", self.name),
        })
    }

    /// Largest off-diagonal entry, if any is finite.
    pub fn max_off_diagonal(&self) -> f64 {
        let mut best = 0.0f64;
        for i in 0..self.n {
            for j in 0..self.n {
                if i != j {
                    best = best.max(self.entry(i, j));
                }
            }
        }
        best
    }

    fn check_space(&self, space: &MeasureSpace) -> Result<(), KernelError> {
        if space.n() != self.n {
            return Err(KernelError::SizeMismatch {
                kernel: self.n,
                space: space.n(),
            });
        }
        Ok(())
    }

    fn check_h(&self, h: &[f64]) -> Result<(), KernelError> {
        if h.len() != self.n {
            return Err(KernelError::SizeMismatch {
                kernel: self.n,
                space: h.len(),
            });
        }
        for (i, &v) in h.iter().enumerate() {
            if !(v.is_finite() && v > 0.0) {
                return Err(KernelError::BadWeightFunction(i));
            }
        }
        Ok(())
    }
}

fn detect_symmetry(entries: &[f64], n: usize) -> bool {
    for i in 0..n {
        for j in (i + 1)..n {
            if entries[i * n + j] != entries[j * n + i] {
                return false;
            }
        }
    }
    true
}

/// Division on [0, +inf] with a positive finite denominator expected;
/// an infinite numerator stays infinite, a zero denominator yields +inf.
fn ext_div(num: f64, den: f64) -> f64 {
    if num == 0.0 {
        0.0
    } else if den == 0.0 || num == f64::INFINITY {
        f64::INFINITY
    } else if den == f64::INFINITY {
        0.0
    } else {
        num / den
    }
}

/// A sampled radially nonincreasing, strictly positive profile `r -> k(r)`.
/// Evaluation interpolates linearly and extends by the boundary values.
#[derive(Debug, Clone, PartialEq)]
pub struct RadialProfile {
    radii: Vec<f64>,
    values: Vec<f64>,
}

impl RadialProfile {
    pub fn new(radii: Vec<f64>, values: Vec<f64>) -> Result<Self, KernelError> {
        if radii.is_empty() || radii.len() != values.len() || radii[0] != 0.0 {
            return Err(KernelError::ProfileBadGrid);
        }
        for i in 0..radii.len() {
            if !values[i].is_finite() || values[i] <= 0.0 {
                return Err(KernelError::ProfileNonpositive(i));
            }
            if i > 0 {
                if radii[i] <= radii[i - 1] || !radii[i].is_finite() {
                    return Err(KernelError::ProfileBadGrid);
                }
                if values[i] > values[i - 1] {
                    return Err(KernelError::ProfileNotNonincreasing(i));
                }
            }
        }
        Ok(Self { radii, values })
    }

    /// Sample a closure on the given radii, validating monotonicity.
    pub fn sampled(k: impl Fn(f64) -> f64, radii: Vec<f64>) -> Result<Self, KernelError> {
        let values = radii.iter().map(|&r| k(r)).collect();
        Self::new(radii, values)
    }

    pub fn eval(&self, r: f64) -> f64 {
        let radii = &self.radii;
        if r <= radii[0] {
            return self.values[0];
        }
        let last = radii.len() - 1;
        if r >= radii[last] {
            return self.values[last];
        }
        let k = match radii.binary_search_by(|x| x.partial_cmp(&r).unwrap()) {
            Ok(k) => return self.values[k],
            Err(k) => k,
        };
        let (r0, r1) = (radii[k - 1], radii[k]);
        let (v0, v1) = (self.values[k - 1], self.values[k]);
        v0 + (v1 - v0) * (r - r0) / (r1 - r0)
    }
}
