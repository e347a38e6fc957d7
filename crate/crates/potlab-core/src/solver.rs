//! Reference-solution generation and direct numerical oracles for the
//! integral inequalities: the kernel iteration `f_k`, Picard fixed points
//! of the monotone integral equations, and the layer-cake / key-lemma /
//! ladder comparisons.
//!
//! Picard iteration from the inhomogeneity is monotone for increasing
//! nonlinearities and therefore converges to the minimal solution, the
//! tightest object a lower bound can be tested against. For decreasing
//! nonlinearities the even and odd iterates bracket the fixed point.

use alloc::vec;
use alloc::vec::Vec;

#[cfg(not(feature = "std"))]
use num_traits::Float;
use thiserror::Error;

use crate::kernel::{Kernel, KernelError};
use crate::nonlinearity::{NonlinError, Nonlinearity};
use crate::quad::adaptive_simpson;
use crate::space::{MeasureSpace, SpaceError};
use crate::xr::{is_ext_nonneg, xmul};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SolverError {
    #[error(transparent)]
    Kernel(#[from] KernelError),
    #[error(transparent)]
    Nonlin(#[from] NonlinError),
    #[error(transparent)]
    Space(#[from] SpaceError),
    #[error("nonlinearity kind does not match this solver")]
    KindMismatch,
    #[error("inhomogeneity entry {0} is invalid for this solver")]
    BadH(usize),
    #[error("sigma entry {0} must be finite and nonnegative")]
    BadSigma(usize),
    #[error("function entry {0} must be in [0, +inf]")]
    BadFunctionValue(usize),
    #[error("solver options invalid: {0}")]
    BadOptions(&'static str),
    #[error("monotone iteration regressed at point {point} (from {prev} to {next})")]
    NonMonotoneIteration { point: usize, prev: f64, next: f64 },
    #[error("seed entry {0} must be finite and positive")]
    BadSeed(usize),
}

/// Per-point outcome of a fixed-point solve.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PointStatus {
    Converged,
    DivergedToInfinity,
    /// Iteration budget exhausted without meeting the tolerance.
    Oscillating,
    /// The iterate left the positive cone; no positive solution was found.
    NoPositiveSolution,
    /// The kernel row never charges this point; the fixed point is zero.
    Degenerate,
}

/// Result of a Picard solve.
#[derive(Debug, Clone, PartialEq)]
pub struct SolveResult {
    pub u: Vec<f64>,
    pub iterations: usize,
    pub status: Vec<PointStatus>,
    /// Sup-norm of the fixed-point defect over converged points.
    pub residual: f64,
}

impl SolveResult {
    pub fn all_converged(&self) -> bool {
        self.status.iter().all(|s| *s == PointStatus::Converged)
    }

    pub fn converged_points(&self) -> impl Iterator<Item = usize> + '_ {
        self.status
            .iter()
            .enumerate()
            .filter(|(_, s)| **s == PointStatus::Converged)
            .map(|(i, _)| i)
    }
}

/// Solver knobs; `sigma` overrides the quadrature weights as the measure
/// the nonlinearity is integrated against.
#[derive(Debug, Clone)]
pub struct SolveOptions {
    pub tol: f64,
    pub max_iter: usize,
    pub ceiling: f64,
    pub damping: f64,
    pub sigma: Option<Vec<f64>>,
}

impl Default for SolveOptions {
    fn default() -> Self {
        Self {
            tol: 1e-10,
            max_iter: 100_000,
            ceiling: 1e100,
            damping: 1.0,
            sigma: None,
        }
    }
}

impl SolveOptions {
    pub fn with_tol(tol: f64) -> Self {
        Self {
            tol,
            ..Self::default()
        }
    }

    fn validate(&self) -> Result<(), SolverError> {
        if !(self.tol > 0.0 && self.tol.is_finite()) {
            return Err(SolverError::BadOptions("tol must be positive and finite"));
        }
        if !(self.ceiling > 0.0) {
            return Err(SolverError::BadOptions("ceiling must be positive"));
        }
        if !(self.damping > 0.0 && self.damping <= 1.0) {
            return Err(SolverError::BadOptions("damping must lie in (0, 1]"));
        }
        Ok(())
    }

    fn sigma_for(&self, space: &MeasureSpace) -> Result<Vec<f64>, SolverError> {
        match &self.sigma {
            None => Ok(space.weights().to_vec()),
            Some(s) => {
                if s.len() != space.n() {
                    return Err(SolverError::BadSigma(s.len()));
                }
                for (i, &v) in s.iter().enumerate() {
                    if !(v.is_finite() && v >= 0.0) {
                        return Err(SolverError::BadSigma(i));
                    }
                }
                Ok(s.clone())
            }
        }
    }
}

/// `sum_j K(i, j) f_j sigma_j` without going through a `MeasureSpace`,
/// so explicit sigma vectors (possibly all zero) are usable.
fn weighted_image(kernel: &Kernel, f: &[f64], sigma: &[f64]) -> Result<Vec<f64>, SolverError> {
    let n = kernel.n();
    debug_assert_eq!(f.len(), n);
    debug_assert_eq!(sigma.len(), n);
    for (j, &v) in f.iter().enumerate() {
        if !is_ext_nonneg(v) {
            return Err(SolverError::BadFunctionValue(j));
        }
    }
    let mut out = Vec::with_capacity(n);
    for i in 0..n {
        let mut s = 0.0;
        for j in 0..n {
            s += xmul(kernel.effective_entry(i, j), xmul(f[j], sigma[j]));
        }
        out.push(s);
    }
    Ok(out)
}

/// The kernel iteration `f_0 = G1`, `f_{k+1} = G(phi(f_k))`.
#[derive(Debug, Clone, PartialEq)]
pub struct IterationTrace {
    /// `levels[k]` is the vector `f_k`.
    pub levels: Vec<Vec<f64>>,
    /// A point is flagged when an iterate left `phi`'s domain or diverged;
    /// flagged points contribute zero to later levels.
    pub flagged: Vec<bool>,
}

/// Run the kernel iteration for `k_max` levels. `phi` reports a domain
/// exit by returning NaN.
pub fn iterate_f(
    kernel: &Kernel,
    space: &MeasureSpace,
    phi: impl Fn(f64) -> f64,
    k_max: usize,
) -> Result<IterationTrace, SolverError> {
    let n = kernel.n();
    let f0 = kernel.potential_of_weights(space)?;
    let mut flagged = vec![false; n];
    for (i, &v) in f0.iter().enumerate() {
        if v.is_infinite() {
            flagged[i] = true;
        }
    }
    let mut levels = vec![f0];
    let sigma = space.weights().to_vec();
    for _ in 0..k_max {
        let prev = levels.last().unwrap();
        let mut arg = Vec::with_capacity(n);
        for (i, &v) in prev.iter().enumerate() {
            if flagged[i] {
                arg.push(0.0);
                continue;
            }
            let p = phi(v);
            if p.is_nan() || p < 0.0 {
                flagged[i] = true;
                arg.push(0.0);
            } else {
                arg.push(p);
            }
        }
        let next = weighted_image(kernel, &arg, &sigma)?;
        for (i, &v) in next.iter().enumerate() {
            if v.is_infinite() {
                flagged[i] = true;
            }
        }
        levels.push(next);
    }
    Ok(IterationTrace { levels, flagged })
}

/// Two sides of a scalar inequality and their residual.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct InequalityCheck {
    pub lhs: f64,
    pub rhs: f64,
    /// Oriented so that validity means `residual >= -1e-9`; vacuous
    /// (infinite against infinite) comparisons report 0.
    pub residual: f64,
}

fn oriented_residual(lhs: f64, rhs: f64) -> f64 {
    if lhs.is_infinite() && rhs.is_infinite() {
        0.0
    } else {
        rhs - lhs
    }
}

fn quadrature(phi: &impl Fn(f64) -> f64, upper: f64) -> f64 {
    if upper == 0.0 {
        return 0.0;
    }
    let coarse = 0.5 * (phi(0.0) + phi(upper)) * upper;
    let tol = (1e-12 * (1.0 + coarse.abs())).min(1e-10);
    adaptive_simpson(phi, 0.0, upper, tol)
}

/// Layer-cake comparison on a weighted point set: the integral of a
/// nondecreasing `phi` up to the total mass against the exact discrete sum
/// of `phi` of sublevel masses.
pub fn layer_cake_check(
    space: &MeasureSpace,
    f: &[f64],
    phi: impl Fn(f64) -> f64,
) -> Result<InequalityCheck, SolverError> {
    let n = space.n();
    if f.len() != n {
        return Err(SolverError::BadFunctionValue(f.len()));
    }
    for (i, &v) in f.iter().enumerate() {
        if !is_ext_nonneg(v) {
            return Err(SolverError::BadFunctionValue(i));
        }
    }
    let lhs = quadrature(&phi, space.total_mass());
    // Sublevel masses by sorting; ties share one cumulative mass.
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| f[a].partial_cmp(&f[b]).unwrap());
    let mut rhs = 0.0;
    let mut cum = 0.0;
    let mut start = 0;
    while start < n {
        let mut end = start;
        while end < n && f[order[end]] == f[order[start]] {
            end += 1;
        }
        for &y in &order[start..end] {
            cum += space.weight(y);
        }
        let level = phi(cum);
        for &y in &order[start..end] {
            rhs += xmul(level, space.weight(y));
        }
        start = end;
    }
    Ok(InequalityCheck {
        lhs,
        rhs,
        residual: oriented_residual(lhs, rhs),
    })
}

/// Key comparison at a point: the integral of `phi` up to `G1(x)` against
/// `G[phi(b G1)](x)`.
pub fn key_lemma_check(
    kernel: &Kernel,
    space: &MeasureSpace,
    b: f64,
    phi: impl Fn(f64) -> f64,
    x: usize,
) -> Result<InequalityCheck, SolverError> {
    if !(b >= 1.0 && b.is_finite()) {
        return Err(SolverError::BadOptions("b must be finite and at least 1"));
    }
    let g1 = kernel.potential_of_weights(space)?;
    let t0 = g1[x];
    let lhs = if t0.is_infinite() {
        f64::INFINITY
    } else {
        quadrature(&phi, t0)
    };
    let arg: Vec<f64> = g1.iter().map(|&v| phi(xmul(b, v))).collect();
    for (i, &v) in arg.iter().enumerate() {
        if !is_ext_nonneg(v) {
            return Err(SolverError::BadFunctionValue(i));
        }
    }
    let rhs = weighted_image(kernel, &arg, &space.weights().to_vec())?[x];
    Ok(InequalityCheck {
        lhs,
        rhs,
        residual: oriented_residual(lhs, rhs),
    })
}

/// Ladder-against-iterate comparison: residuals `f_k(x) - psi_k(f_0(x))`
/// for every point and level.
#[derive(Debug, Clone, PartialEq)]
pub struct IterPsiCheck {
    /// `residuals[k][i]`; `None` when the point was flagged or the ladder
    /// level does not reach `f_0(x_i)`.
    pub residuals: Vec<Vec<Option<f64>>>,
    pub min_residual: f64,
    pub skipped: usize,
}

/// Compare the kernel iterates of the shifted nonlinearity against the
/// tabulated ladder at `f_0`.
pub fn iter_psi_check(
    kernel: &Kernel,
    space: &MeasureSpace,
    g: &Nonlinearity,
    b: f64,
    k_max: usize,
    grid_size: usize,
) -> Result<IterPsiCheck, SolverError> {
    let increasing = g.is_increasing();
    let phi = |t: f64| -> f64 {
        let r = if increasing {
            g.eval(t + 1.0)
        } else {
            g.eval(1.0 - t)
        };
        r.unwrap_or(f64::NAN)
    };
    let trace = iterate_f(kernel, space, phi, k_max)?;
    let f0 = &trace.levels[0];
    let t_max = f0
        .iter()
        .zip(&trace.flagged)
        .filter(|(v, fl)| !**fl && v.is_finite())
        .map(|(v, _)| *v)
        .fold(0.0f64, f64::max);
    let ladder = g.psi_ladder(b, k_max, t_max.max(1e-9), grid_size)?;
    let mut residuals = Vec::with_capacity(k_max + 1);
    let mut min_residual = f64::INFINITY;
    let mut skipped = 0usize;
    for k in 0..=k_max {
        let mut row = Vec::with_capacity(f0.len());
        for i in 0..f0.len() {
            if trace.flagged[i] || !f0[i].is_finite() {
                skipped += 1;
                row.push(None);
                continue;
            }
            match ladder.eval(k, f0[i]) {
                Some(psi) => {
                    let fk = trace.levels[k][i];
                    let res = if fk.is_infinite() {
                        f64::INFINITY
                    } else {
                        fk - psi
                    };
                    min_residual = min_residual.min(res);
                    row.push(Some(res));
                }
                None => {
                    skipped += 1;
                    row.push(None);
                }
            }
        }
        residuals.push(row);
    }
    Ok(IterPsiCheck {
        residuals,
        min_residual,
        skipped,
    })
}

const MONOTONE_SLACK: f64 = 8.0 * f64::EPSILON;

/// Minimal-solution Picard iteration for the increasing problem
/// `u = G(g(u) sigma) + h`, starting from `u = h`. Iterates are pointwise
/// nondecreasing; the limit is the minimal fixed point above `h`.
pub fn picard_increasing(
    kernel: &Kernel,
    space: &MeasureSpace,
    g: &Nonlinearity,
    h: &[f64],
    opts: &SolveOptions,
) -> Result<SolveResult, SolverError> {
    opts.validate()?;
    if !g.is_increasing() {
        return Err(SolverError::KindMismatch);
    }
    let n = kernel.n();
    if h.len() != n {
        return Err(SolverError::BadH(h.len()));
    }
    let general = matches!(g, Nonlinearity::GeneralIncreasing(_));
    for (i, &v) in h.iter().enumerate() {
        if !(v.is_finite() && v >= 0.0) || (general && v < 1.0) {
            return Err(SolverError::BadH(i));
        }
    }
    let sigma = opts.sigma_for(space)?;
    let mut u: Vec<f64> = h.to_vec();
    let mut diverged = vec![false; n];
    let mut iterations = 0usize;
    let mut converged = false;
    while iterations < opts.max_iter {
        iterations += 1;
        let mut gu = Vec::with_capacity(n);
        for &v in &u {
            gu.push(if v.is_infinite() {
                f64::INFINITY
            } else {
                g.eval(v)?
            });
        }
        let image = weighted_image(kernel, &gu, &sigma)?;
        let mut all_small = true;
        for i in 0..n {
            let mut next = image[i] + h[i];
            if next > opts.ceiling {
                next = f64::INFINITY;
                diverged[i] = true;
            }
            if !diverged[i] {
                if next < u[i] {
                    if u[i] - next > MONOTONE_SLACK * (1.0 + u[i]) {
                        return Err(SolverError::NonMonotoneIteration {
                            point: i,
                            prev: u[i],
                            next,
                        });
                    }
                    next = u[i];
                }
                if next - u[i] > opts.tol * (1.0 + next) {
                    all_small = false;
                }
            }
            u[i] = next;
        }
        if all_small {
            converged = true;
            break;
        }
        if diverged.iter().all(|&d| d) {
            break;
        }
    }
    let status: Vec<PointStatus> = diverged
        .iter()
        .map(|&d| {
            if d {
                PointStatus::DivergedToInfinity
            } else if converged {
                PointStatus::Converged
            } else {
                PointStatus::Oscillating
            }
        })
        .collect();
    let residual = defect_sup(kernel, space, g, h, &u, &sigma, &status, false)?;
    Ok(SolveResult {
        u,
        iterations,
        status,
        residual,
    })
}

/// Fixed-point defect `|u - (h +/- G(g(u) sigma))|` over converged points.
#[allow(clippy::too_many_arguments)]
fn defect_sup(
    kernel: &Kernel,
    _space: &MeasureSpace,
    g: &Nonlinearity,
    h: &[f64],
    u: &[f64],
    sigma: &[f64],
    status: &[PointStatus],
    subtract: bool,
) -> Result<f64, SolverError> {
    let mut gu = Vec::with_capacity(u.len());
    for (&v, st) in u.iter().zip(status) {
        if *st == PointStatus::Converged && v.is_finite() {
            gu.push(g.eval(v)?);
        } else {
            gu.push(0.0);
        }
    }
    let image = weighted_image(kernel, &gu, sigma)?;
    let mut worst = 0.0f64;
    for i in 0..u.len() {
        if status[i] == PointStatus::Converged {
            let t = if subtract {
                h[i] - image[i]
            } else {
                h[i] + image[i]
            };
            // Defects of converged points against a partially zeroed image
            // are only meaningful when no other point is pending;
            // callers treat the residual as diagnostic.
            worst = worst.max((t - u[i]).abs());
        }
    }
    Ok(worst)
}

/// Picard iteration for the decreasing problem `u = h - G(g(u) sigma)`,
/// starting from `u = h`. With `g` nonincreasing the iteration map is
/// monotone increasing and the iterates descend from `h` to the largest
/// fixed point below it; monotonicity is asserted every step. A point
/// whose iterate leaves the positive cone is flagged as having no positive
/// solution, and the solve gives up on certifying the remaining points
/// (their values were computed against the dead point's trajectory).
pub fn picard_decreasing(
    kernel: &Kernel,
    space: &MeasureSpace,
    g: &Nonlinearity,
    h: &[f64],
    opts: &SolveOptions,
) -> Result<SolveResult, SolverError> {
    opts.validate()?;
    if g.is_increasing() {
        return Err(SolverError::KindMismatch);
    }
    let n = kernel.n();
    if h.len() != n {
        return Err(SolverError::BadH(h.len()));
    }
    let general = matches!(g, Nonlinearity::GeneralDecreasing(_));
    for (i, &v) in h.iter().enumerate() {
        if !(v.is_finite() && v > 0.0) || (general && v > 1.0 + 1e-12) {
            return Err(SolverError::BadH(i));
        }
    }
    let sigma = opts.sigma_for(space)?;
    let theta = opts.damping;
    let mut u: Vec<f64> = h.to_vec();
    let mut dead = vec![false; n];
    let mut any_dead = false;
    let mut iterations = 0usize;
    let mut converged = false;
    while iterations < opts.max_iter && !any_dead {
        iterations += 1;
        let mut gu = Vec::with_capacity(n);
        for &v in &u {
            gu.push(g.eval(v.max(f64::MIN_POSITIVE))?);
        }
        let image = weighted_image(kernel, &gu, &sigma)?;
        let mut worst_defect = 0.0f64;
        let mut next = Vec::with_capacity(n);
        for i in 0..n {
            let t = h[i] - image[i];
            worst_defect = worst_defect.max((t - u[i]).abs());
            let mut v = (1.0 - theta) * u[i] + theta * t;
            if !(v > 0.0) {
                dead[i] = true;
                any_dead = true;
                v = f64::MIN_POSITIVE;
            }
            // The sequence descends; tolerate rounding-level regressions,
            // reject anything larger as a broken monotonicity contract.
            if v > u[i] && iterations > 1 && !dead[i] {
                if v - u[i] > MONOTONE_SLACK * (1.0 + v) {
                    return Err(SolverError::NonMonotoneIteration {
                        point: i,
                        prev: u[i],
                        next: v,
                    });
                }
                v = u[i];
            }
            next.push(v);
        }
        u = next;
        let scale = 1.0 + u.iter().fold(0.0f64, |a, &v| a.max(v.abs()));
        if worst_defect <= opts.tol * scale && !any_dead {
            converged = true;
            break;
        }
    }
    let status: Vec<PointStatus> = (0..n)
        .map(|i| {
            if dead[i] {
                PointStatus::NoPositiveSolution
            } else if any_dead || !converged {
                PointStatus::Oscillating
            } else {
                PointStatus::Converged
            }
        })
        .collect();
    let residual = defect_sup(kernel, space, g, h, &u, &sigma, &status, true)?;
    Ok(SolveResult {
        u,
        iterations,
        status,
        residual,
    })
}

/// Positive fixed point of the homogeneous sublinear problem
/// `u = G(u^q sigma)` for `0 < q < 1`, iterated from a positive seed.
/// Points never charged by the kernel are degenerate (their value is 0).
pub fn homogeneous_picard(
    kernel: &Kernel,
    space: &MeasureSpace,
    q: f64,
    seed: &[f64],
    opts: &SolveOptions,
) -> Result<SolveResult, SolverError> {
    opts.validate()?;
    if !(q > 0.0 && q < 1.0) {
        return Err(SolverError::BadOptions("q must lie in (0, 1)"));
    }
    let n = kernel.n();
    if seed.len() != n {
        return Err(SolverError::BadSeed(seed.len()));
    }
    for (i, &v) in seed.iter().enumerate() {
        if !(v.is_finite() && v > 0.0) {
            return Err(SolverError::BadSeed(i));
        }
    }
    let sigma = opts.sigma_for(space)?;
    let ones = vec![1.0; n];
    let row_pot = weighted_image(kernel, &ones, &sigma)?;
    let degenerate: Vec<bool> = row_pot.iter().map(|&v| v == 0.0).collect();
    let mut u: Vec<f64> = seed
        .iter()
        .zip(&degenerate)
        .map(|(&v, &d)| if d { 0.0 } else { v })
        .collect();
    let mut diverged = vec![false; n];
    let mut iterations = 0usize;
    let mut converged = false;
    while iterations < opts.max_iter {
        iterations += 1;
        let gu: Vec<f64> = u.iter().map(|&v| v.powf(q)).collect();
        let image = weighted_image(kernel, &gu, &sigma)?;
        let mut all_small = true;
        for i in 0..n {
            if degenerate[i] || diverged[i] {
                continue;
            }
            let mut next = image[i];
            if next > opts.ceiling {
                next = f64::INFINITY;
                diverged[i] = true;
            } else if (next - u[i]).abs() > opts.tol * (1.0 + next) {
                all_small = false;
            }
            u[i] = next;
        }
        if all_small {
            converged = true;
            break;
        }
    }
    let status: Vec<PointStatus> = (0..n)
        .map(|i| {
            if degenerate[i] {
                PointStatus::Degenerate
            } else if diverged[i] {
                PointStatus::DivergedToInfinity
            } else if converged {
                PointStatus::Converged
            } else {
                PointStatus::Oscillating
            }
        })
        .collect();
    // Defect against the homogeneous operator.
    let gu: Vec<f64> = u.iter().map(|&v| if v.is_finite() { v.powf(q) } else { 0.0 }).collect();
    let image = weighted_image(kernel, &gu, &sigma)?;
    let mut residual = 0.0f64;
    for i in 0..n {
        if status[i] == PointStatus::Converged {
            residual = residual.max((image[i] - u[i]).abs());
        }
    }
    Ok(SolveResult {
        u,
        iterations,
        status,
        residual,
    })
}
