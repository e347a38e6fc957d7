//! The monotone nonlinearity `g` and every scalar object derived from it:
//! the integrated reciprocal `F` and its inverse, the shifted functions
//! `phi` and `psi`, the recursively integrated ladder `psi_k`, its limit,
//! and the iteration constants `c(q, k)`.
//!
//! Increasing nonlinearities live on `[1, +inf)` with `g(1) >= 1`;
//! decreasing ones live on `(0, 1]` with `g(1) >= 1`. General (non-power)
//! nonlinearities are monotone tabulations with linear interpolation.

use alloc::vec::Vec;

#[cfg(not(feature = "std"))]
use num_traits::Float;
use thiserror::Error;

use crate::quad::rk4_autonomous;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum NonlinError {
    #[error("power exponent {0} must be nonzero and finite")]
    BadExponent(f64),
    #[error("operation requires an increasing nonlinearity")]
    NotIncreasing,
    #[error("operation requires a decreasing nonlinearity")]
    NotDecreasing,
    #[error("{what} = {value} outside the admissible domain")]
    DomainViolation { what: &'static str, value: f64 },
    #[error("necessary condition fails: {value} is not below {limit}")]
    NecessaryCondition { value: f64, limit: f64 },
    #[error("monotone table is invalid: {0}")]
    BadTable(&'static str),
    #[error("constant b = {0} must satisfy b >= 1")]
    BadB(f64),
    #[error("ladder parameters invalid: {0}")]
    BadLadder(&'static str),
    #[error("closed form {closed} and integrated route {integrated} disagree")]
    RouteDisagreement { closed: f64, integrated: f64 },
}

/// A tabulated monotone function with strictly increasing nodes and
/// strictly positive values; evaluation interpolates linearly.
#[derive(Debug, Clone, PartialEq)]
pub struct MonotoneTable {
    nodes: Vec<f64>,
    values: Vec<f64>,
}

impl MonotoneTable {
    fn new(nodes: Vec<f64>, values: Vec<f64>) -> Result<Self, NonlinError> {
        if nodes.is_empty() || nodes.len() != values.len() {
            return Err(NonlinError::BadTable("nodes and values must match"));
        }
        for i in 0..nodes.len() {
            if !nodes[i].is_finite() {
                return Err(NonlinError::BadTable("nonfinite node"));
            }
            if !(values[i].is_finite() && values[i] > 0.0) {
                return Err(NonlinError::BadTable("values must be finite positive"));
            }
            if i > 0 && nodes[i] <= nodes[i - 1] {
                return Err(NonlinError::BadTable("nodes must be strictly increasing"));
            }
        }
        Ok(Self { nodes, values })
    }

    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    fn last_slope(&self) -> f64 {
        let m = self.nodes.len();
        if m < 2 {
            0.0
        } else {
            (self.values[m - 1] - self.values[m - 2]) / (self.nodes[m - 1] - self.nodes[m - 2])
        }
    }

    /// Interpolate inside the table; extend linearly to the right and by a
    /// constant to the left.
    fn eval(&self, t: f64) -> f64 {
        let m = self.nodes.len();
        if t <= self.nodes[0] {
            return self.values[0];
        }
        if t >= self.nodes[m - 1] {
            return self.values[m - 1] + self.last_slope() * (t - self.nodes[m - 1]);
        }
        let k = match self
            .nodes
            .binary_search_by(|x| x.partial_cmp(&t).unwrap())
        {
            Ok(k) => return self.values[k],
            Err(k) => k,
        };
        let (x0, x1) = (self.nodes[k - 1], self.nodes[k]);
        let (v0, v1) = (self.values[k - 1], self.values[k]);
        v0 + (v1 - v0) * (t - x0) / (x1 - x0)
    }

    /// Exact integral of `1/g` over `[x0, x1]` inside one linear segment
    /// with value `v0` at `x0` and slope `s`.
    fn segment_reciprocal(v0: f64, s: f64, x0: f64, x1: f64) -> f64 {
        if x1 <= x0 {
            return 0.0;
        }
        if s == 0.0 {
            (x1 - x0) / v0
        } else {
            let v1 = v0 + s * (x1 - x0);
            (v1.ln() - v0.ln()) / s
        }
    }

    /// Integral of `1/g` over `[a, b]` (a <= b), with the table's boundary
    /// extensions.
    fn integrate_reciprocal(&self, a: f64, b: f64) -> f64 {
        let m = self.nodes.len();
        let first = self.nodes[0];
        let last = self.nodes[m - 1];
        let mut total = 0.0;
        // Constant extension left of the table.
        if a < first {
            let hi = b.min(first);
            total += (hi - a) / self.values[0];
        }
        // Interior segments.
        for k in 0..m.saturating_sub(1) {
            let (x0, x1) = (self.nodes[k], self.nodes[k + 1]);
            let lo = a.max(x0);
            let hi = b.min(x1);
            if hi > lo {
                let s = (self.values[k + 1] - self.values[k]) / (x1 - x0);
                let v_lo = self.values[k] + s * (lo - x0);
                total += Self::segment_reciprocal(v_lo, s, lo, hi);
            }
        }
        // Linear extension right of the table.
        if b > last {
            let lo = a.max(last);
            let v_lo = self.eval(lo);
            total += Self::segment_reciprocal(v_lo, self.last_slope(), lo, b);
        }
        total
    }
}

/// A monotone nonlinearity together with its domain convention.
#[derive(Debug, Clone, PartialEq)]
pub enum Nonlinearity {
    /// `g(t) = t^q` with `q > 0`, nondecreasing on `[1, +inf)`.
    PowerIncreasing { q: f64 },
    /// `g(t) = t^q` with `q < 0`, nonincreasing on `(0, 1]`.
    PowerDecreasing { q: f64 },
    /// Tabulated nondecreasing `g` on `[1, +inf)` with `g(1) >= 1`.
    GeneralIncreasing(MonotoneTable),
    /// Tabulated nonincreasing `g` on `[0, 1]` with `g(1) >= 1`.
    GeneralDecreasing(MonotoneTable),
}

/// Result of the iteration-constant product `c(q, k)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IterationConstant {
    pub value: f64,
    pub overflow: bool,
}

/// The two independent evaluations of `psi_infinity`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PsiRoutes {
    pub closed_form: f64,
    pub integrated: f64,
}

impl Nonlinearity {
    /// Power nonlinearity; the sign of `q` selects the monotonicity.
    pub fn power(q: f64) -> Result<Self, NonlinError> {
        if !q.is_finite() || q == 0.0 {
            return Err(NonlinError::BadExponent(q));
        }
        Ok(if q > 0.0 {
            Nonlinearity::PowerIncreasing { q }
        } else {
            Nonlinearity::PowerDecreasing { q }
        })
    }

    /// Tabulated nondecreasing nonlinearity on `[1, +inf)`; the first node
    /// must sit at 1 and `g(1) >= 1`.
    pub fn general_increasing(nodes: Vec<f64>, values: Vec<f64>) -> Result<Self, NonlinError> {
        let table = MonotoneTable::new(nodes, values)?;
        if table.nodes[0] != 1.0 {
            return Err(NonlinError::BadTable("first node must be 1"));
        }
        if table.values[0] < 1.0 {
            return Err(NonlinError::BadTable("g(1) must be at least 1"));
        }
        for i in 1..table.values.len() {
            if table.values[i] < table.values[i - 1] {
                return Err(NonlinError::BadTable("values must be nondecreasing"));
            }
        }
        Ok(Nonlinearity::GeneralIncreasing(table))
    }

    /// Tabulated nonincreasing nonlinearity on `[0, 1]`; the last node must
    /// sit at 1 and `g(1) >= 1`.
    pub fn general_decreasing(nodes: Vec<f64>, values: Vec<f64>) -> Result<Self, NonlinError> {
        let table = MonotoneTable::new(nodes, values)?;
        let m = table.nodes.len();
        if table.nodes[m - 1] != 1.0 || table.nodes[0] < 0.0 {
            return Err(NonlinError::BadTable("nodes must end at 1 within [0, 1]"));
        }
        if table.values[m - 1] < 1.0 {
            return Err(NonlinError::BadTable("g(1) must be at least 1"));
        }
        for i in 1..m {
            if table.values[i] > table.values[i - 1] {
                return Err(NonlinError::BadTable("values must be nonincreasing"));
            }
        }
        Ok(Nonlinearity::GeneralDecreasing(table))
    }

    pub fn is_increasing(&self) -> bool {
        matches!(
            self,
            Nonlinearity::PowerIncreasing { .. } | Nonlinearity::GeneralIncreasing(_)
        )
    }

    /// The exponent for power kinds.
    pub fn exponent(&self) -> Option<f64> {
        match self {
            Nonlinearity::PowerIncreasing { q } | Nonlinearity::PowerDecreasing { q } => Some(*q),
            _ => None,
        }
    }

    /// Evaluate `g(t)` with the kind's domain convention. Decreasing kinds
    /// return `+inf` at the origin when the tabulation does not cover it.
    pub fn eval(&self, t: f64) -> Result<f64, NonlinError> {
        match self {
            Nonlinearity::PowerIncreasing { q } => {
                if !(t >= 0.0) {
                    return Err(NonlinError::DomainViolation { what: "t", value: t });
                }
                Ok(t.powf(*q))
            }
            Nonlinearity::PowerDecreasing { q } => {
                if !(t >= 0.0) {
                    return Err(NonlinError::DomainViolation { what: "t", value: t });
                }
                if t == 0.0 {
                    Ok(f64::INFINITY)
                } else {
                    Ok(t.powf(*q))
                }
            }
            Nonlinearity::GeneralIncreasing(table) => {
                if t < 1.0 - 1e-9 {
                    return Err(NonlinError::DomainViolation { what: "t", value: t });
                }
                Ok(table.eval(t.max(1.0)))
            }
            Nonlinearity::GeneralDecreasing(table) => {
                if !(-1e-9..=1.0 + 1e-9).contains(&t) {
                    return Err(NonlinError::DomainViolation { what: "t", value: t });
                }
                Ok(table.eval(t.clamp(0.0, 1.0)))
            }
        }
    }

    /// `F(t) = integral of 1/g over [1, t]` for increasing kinds, `t >= 1`.
    pub fn f_increasing(&self, t: f64) -> Result<f64, NonlinError> {
        if t < 1.0 {
            return Err(NonlinError::DomainViolation { what: "t", value: t });
        }
        match self {
            Nonlinearity::PowerIncreasing { q } => {
                if *q == 1.0 {
                    Ok(t.ln())
                } else {
                    Ok((t.powf(1.0 - q) - 1.0) / (1.0 - q))
                }
            }
            Nonlinearity::GeneralIncreasing(table) => Ok(table.integrate_reciprocal(1.0, t)),
            _ => Err(NonlinError::NotIncreasing),
        }
    }

    /// `a = F(inf)`, the total mass of `1/g` on `[1, +inf)`; `+inf` when the
    /// integral diverges. For tabulated kinds the integral is driven over
    /// doubling horizons until the increment drops below 1e-12 or the
    /// horizon exceeds 1e12.
    pub fn f_increasing_limit(&self) -> Result<f64, NonlinError> {
        match self {
            Nonlinearity::PowerIncreasing { q } => {
                if *q > 1.0 {
                    Ok(1.0 / (q - 1.0))
                } else {
                    Ok(f64::INFINITY)
                }
            }
            Nonlinearity::GeneralIncreasing(table) => {
                let mut horizon = 2.0f64;
                let mut acc = table.integrate_reciprocal(1.0, horizon);
                loop {
                    let next = horizon * 2.0;
                    let inc = table.integrate_reciprocal(horizon, next);
                    acc += inc;
                    horizon = next;
                    if inc < 1e-12 {
                        return Ok(acc);
                    }
                    if horizon > 1e12 {
                        return Ok(f64::INFINITY);
                    }
                }
            }
            _ => Err(NonlinError::NotIncreasing),
        }
    }

    /// `F(t) = integral of 1/g over [t, 1]` for decreasing kinds, `0 <= t <= 1`.
    pub fn f_decreasing(&self, t: f64) -> Result<f64, NonlinError> {
        if !(0.0..=1.0).contains(&t) {
            return Err(NonlinError::DomainViolation { what: "t", value: t });
        }
        match self {
            Nonlinearity::PowerDecreasing { q } => Ok((1.0 - t.powf(1.0 - q)) / (1.0 - q)),
            Nonlinearity::GeneralDecreasing(table) => Ok(table.integrate_reciprocal(t, 1.0)),
            _ => Err(NonlinError::NotDecreasing),
        }
    }

    /// Inverse of `F` on its natural domain: `[0, a)` for increasing kinds,
    /// `[0, F(0)]` for decreasing ones. A `tau` outside the domain signals
    /// the failure of the associated necessary condition.
    pub fn f_inverse(&self, tau: f64) -> Result<f64, NonlinError> {
        if !(tau >= 0.0) {
            return Err(NonlinError::DomainViolation {
                what: "tau",
                value: tau,
            });
        }
        match self {
            Nonlinearity::PowerIncreasing { q } => {
                if *q == 1.0 {
                    return Ok(tau.exp());
                }
                let limit = self.f_increasing_limit()?;
                if tau >= limit {
                    return Err(NonlinError::NecessaryCondition { value: tau, limit });
                }
                Ok((1.0 + (1.0 - q) * tau).powf(1.0 / (1.0 - q)))
            }
            Nonlinearity::PowerDecreasing { q } => {
                let limit = 1.0 / (1.0 - q);
                if tau > limit {
                    return Err(NonlinError::NecessaryCondition { value: tau, limit });
                }
                Ok((1.0 - (1.0 - q) * tau).max(0.0).powf(1.0 / (1.0 - q)))
            }
            Nonlinearity::GeneralIncreasing(_) => {
                let limit = self.f_increasing_limit()?;
                if tau >= limit {
                    return Err(NonlinError::NecessaryCondition { value: tau, limit });
                }
                let mut hi = 2.0f64;
                while self.f_increasing(hi)? < tau {
                    hi *= 2.0;
                    if hi > 1e300 {
                        return Err(NonlinError::NecessaryCondition { value: tau, limit });
                    }
                }
                let mut lo = 1.0f64;
                for _ in 0..200 {
                    let mid = 0.5 * (lo + hi);
                    let fm = self.f_increasing(mid)?;
                    if (fm - tau).abs() <= 1e-12 {
                        return Ok(mid);
                    }
                    if fm < tau {
                        lo = mid;
                    } else {
                        hi = mid;
                    }
                }
                Ok(0.5 * (lo + hi))
            }
            Nonlinearity::GeneralDecreasing(_) => {
                let limit = self.f_decreasing(0.0)?;
                if tau > limit {
                    return Err(NonlinError::NecessaryCondition { value: tau, limit });
                }
                let (mut lo, mut hi) = (0.0f64, 1.0f64);
                for _ in 0..200 {
                    let mid = 0.5 * (lo + hi);
                    let fm = self.f_decreasing(mid)?;
                    if (fm - tau).abs() <= 1e-12 {
                        return Ok(mid);
                    }
                    if fm > tau {
                        lo = mid;
                    } else {
                        hi = mid;
                    }
                }
                Ok(0.5 * (lo + hi))
            }
        }
    }

    /// The damped shift `psi(t)`: `g(t/b + 1)` for increasing kinds,
    /// `g(1 - t/b)` for decreasing kinds (domain `0 <= t <= b`).
    pub fn psi(&self, b: f64, t: f64) -> Result<f64, NonlinError> {
        check_b(b)?;
        if self.is_increasing() {
            if !(t >= -1e-12) {
                return Err(NonlinError::DomainViolation { what: "t", value: t });
            }
            self.eval(t.max(0.0) / b + 1.0)
        } else {
            if !(-1e-12..=b * (1.0 + 1e-12)).contains(&t) {
                return Err(NonlinError::DomainViolation { what: "t", value: t });
            }
            self.eval((1.0 - t / b).clamp(0.0, 1.0))
        }
    }

    /// Tabulate the recursively integrated ladder `psi_0, ..., psi_k` on a
    /// uniform grid over `[0, t_max]` by cumulative trapezoid quadrature.
    ///
    /// For decreasing kinds a level is truncated at the first node where
    /// `psi(psi_k)` stops being finite (the recursion leaves its domain);
    /// the surviving prefix is still reported.
    pub fn psi_ladder(
        &self,
        b: f64,
        levels: usize,
        t_max: f64,
        grid_size: usize,
    ) -> Result<PsiLadder, NonlinError> {
        check_b(b)?;
        if !(t_max > 0.0 && t_max.is_finite()) {
            return Err(NonlinError::BadLadder("t_max must be positive and finite"));
        }
        if grid_size < 2 {
            return Err(NonlinError::BadLadder("grid needs at least two nodes"));
        }
        let step = t_max / (grid_size - 1) as f64;
        let grid: Vec<f64> = (0..grid_size).map(|i| i as f64 * step).collect();
        let mut all = Vec::with_capacity(levels + 1);
        all.push(grid.clone());
        for _ in 0..levels {
            let prev = all.last().unwrap();
            let mut integrand = Vec::with_capacity(prev.len());
            for &v in prev {
                match self.psi(b, v) {
                    Ok(y) if y.is_finite() => integrand.push(y),
                    _ => break,
                }
            }
            let mut next = Vec::with_capacity(integrand.len());
            if !integrand.is_empty() {
                next.push(0.0);
                let mut acc = 0.0;
                for i in 1..integrand.len() {
                    acc += 0.5 * step * (integrand[i - 1] + integrand[i]);
                    next.push(acc);
                }
            }
            // The ladder is nondecreasing in the level index; guard the
            // tabulation against rounding at ties.
            for (i, v) in next.iter_mut().enumerate() {
                if *v < prev[i] {
                    *v = prev[i];
                }
            }
            all.push(next);
        }
        Ok(PsiLadder {
            b,
            step,
            grid,
            levels: all,
        })
    }

    /// The ladder limit at `t`, computed along two independent routes:
    /// the closed form through `F` and a fixed-step RK4 integration of
    /// `y' = psi(y), y(0) = 0`. The routes must agree to 1e-8 relative.
    pub fn psi_infinity(&self, b: f64, t: f64) -> Result<f64, NonlinError> {
        self.psi_infinity_routes(b, t).map(|r| r.closed_form)
    }

    pub fn psi_infinity_routes(&self, b: f64, t: f64) -> Result<PsiRoutes, NonlinError> {
        check_b(b)?;
        if !(t >= 0.0 && t.is_finite()) {
            return Err(NonlinError::DomainViolation { what: "t", value: t });
        }
        let tau = t / b;
        let closed_form = if self.is_increasing() {
            let limit = self.f_increasing_limit()?;
            if tau >= limit {
                return Err(NonlinError::NecessaryCondition { value: tau, limit });
            }
            b * (self.f_inverse(tau)? - 1.0)
        } else {
            let limit = self.f_decreasing(0.0)?;
            if tau >= limit {
                return Err(NonlinError::NecessaryCondition { value: tau, limit });
            }
            b * (1.0 - self.f_inverse(tau)?)
        };
        let integrated = if t == 0.0 {
            0.0
        } else {
            let steps = 16384usize.max((t * 4096.0) as usize).min(1 << 21);
            let rhs = |y: f64| {
                let arg = if self.is_increasing() {
                    y.max(0.0)
                } else {
                    y.clamp(0.0, b)
                };
                self.psi(b, arg).unwrap_or(f64::INFINITY)
            };
            rk4_autonomous(&rhs, 0.0, t, steps)
        };
        // Values past the representable range agree as overflows.
        let both_infinite = closed_form.is_infinite() && integrated.is_infinite();
        let scale = 1.0f64.max(closed_form.abs());
        if !both_infinite && !((closed_form - integrated).abs() <= 1e-8 * scale) {
            return Err(NonlinError::RouteDisagreement {
                closed: closed_form,
                integrated,
            });
        }
        Ok(PsiRoutes {
            closed_form,
            integrated,
        })
    }
}

fn check_b(b: f64) -> Result<(), NonlinError> {
    if !(b >= 1.0 && b.is_finite()) {
        return Err(NonlinError::BadB(b));
    }
    Ok(())
}

/// The iteration constant `c(q, k)`, the product over `j = 1..k` of the
/// geometric sums `(1 + q + ... + q^j)` raised to `q^(k-j)`. For `q = 1`
/// this is `(k + 1)!`, computed exactly in that branch.
pub fn iteration_constant_c(q: f64, k: u32) -> Result<IterationConstant, NonlinError> {
    if !(q > 0.0 && q.is_finite()) {
        return Err(NonlinError::BadExponent(q));
    }
    let mut value = 1.0f64;
    if q == 1.0 {
        for j in 1..=k {
            value *= (j + 1) as f64;
        }
    } else {
        let mut geometric = 1.0f64; // 1 + q + ... + q^j, built incrementally
        let mut qpow = 1.0f64;
        for j in 1..=k {
            qpow *= q;
            geometric += qpow;
            value *= geometric.powf(q.powi((k - j) as i32));
        }
    }
    Ok(IterationConstant {
        value,
        overflow: !value.is_finite(),
    })
}

/// Tabulation of the ladder `psi_0..psi_K` on a uniform grid; levels may be
/// truncated prefixes when the recursion exits its domain.
#[derive(Debug, Clone, PartialEq)]
pub struct PsiLadder {
    b: f64,
    step: f64,
    grid: Vec<f64>,
    levels: Vec<Vec<f64>>,
}

impl PsiLadder {
    pub fn b(&self) -> f64 {
        self.b
    }

    pub fn grid(&self) -> &[f64] {
        &self.grid
    }

    pub fn num_levels(&self) -> usize {
        self.levels.len()
    }

    pub fn level(&self, k: usize) -> &[f64] {
        &self.levels[k]
    }

    /// Largest admissible `t` for level `k` (the whole grid unless the
    /// level was truncated).
    pub fn max_t(&self, k: usize) -> f64 {
        match self.levels[k].len() {
            0 => f64::NEG_INFINITY,
            m => self.step * (m - 1) as f64,
        }
    }

    /// Linear interpolation of level `k` at `t`; `None` outside the level's
    /// valid range.
    pub fn eval(&self, k: usize, t: f64) -> Option<f64> {
        let level = self.levels.get(k)?;
        if level.is_empty() || t < -1e-12 {
            return None;
        }
        let t = t.max(0.0);
        let max_t = self.step * (level.len() - 1) as f64;
        if t > max_t * (1.0 + 1e-12) + 1e-300 {
            return None;
        }
        if level.len() == 1 {
            return Some(level[0]);
        }
        let pos = t.min(max_t) / self.step;
        let i = (pos.floor() as usize).min(level.len() - 2);
        let frac = pos - i as f64;
        Some(level[i] + (level[i + 1] - level[i]) * frac)
    }
}
