//! Closed-form pointwise bounds and their necessary conditions, given a
//! potential value, a maximum-principle constant `b`, and a nonlinearity.
//!
//! Conditions are data, never exceptions: a violated necessary condition
//! makes a lower bound report `+inf` (no finite solution is possible at
//! that point) and an upper bound report `0`. The paper-side inequalities
//! are strict; numerical coincidence within 1e-12 of the threshold is
//! classified as violated and flagged as a boundary case.

use alloc::vec::Vec;

#[cfg(not(feature = "std"))]
use num_traits::Float;
use thiserror::Error;

use crate::kernel::{Kernel, KernelError};
use crate::nonlinearity::{iteration_constant_c, NonlinError, Nonlinearity};
use crate::space::MeasureSpace;
use crate::xr::is_ext_nonneg;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum BoundError {
    #[error(transparent)]
    Nonlin(#[from] NonlinError),
    #[error(transparent)]
    Kernel(#[from] KernelError),
    #[error("potential {0} must be in [0, +inf]")]
    BadPotential(f64),
    #[error("constant b = {0} must be finite and at least 1")]
    BadB(f64),
    #[error("weight h = {0} must be finite and positive")]
    BadH(f64),
    #[error("exponent q = {q} invalid: need {need}")]
    BadExponent { q: f64, need: &'static str },
    #[error("power r = {0} must be positive")]
    BadR(f64),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ConditionStatus {
    Holds,
    Violated,
    NotApplicable,
}

/// Outcome of a strict necessary condition `pot < threshold`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NecessaryCondition {
    pub status: ConditionStatus,
    /// The potential sits within 1e-12 of the threshold.
    pub boundary: bool,
    /// Right-hand side of the strict comparison, in potential units.
    pub threshold: f64,
}

impl NecessaryCondition {
    fn not_applicable() -> Self {
        Self {
            status: ConditionStatus::NotApplicable,
            boundary: false,
            threshold: f64::INFINITY,
        }
    }

    pub fn violated(&self) -> bool {
        self.status == ConditionStatus::Violated
    }
}

/// Evaluate the strict comparison `pot < threshold` with the boundary
/// convention; an infinite threshold is no condition at all (except
/// against an infinite potential).
fn strict_condition(pot: f64, threshold: f64) -> NecessaryCondition {
    if threshold.is_infinite() {
        if pot.is_infinite() {
            NecessaryCondition {
                status: ConditionStatus::Violated,
                boundary: false,
                threshold,
            }
        } else {
            NecessaryCondition::not_applicable()
        }
    } else {
        let tol = 1e-12 * threshold.max(1.0);
        if pot < threshold - tol {
            NecessaryCondition {
                status: ConditionStatus::Holds,
                boundary: false,
                threshold,
            }
        } else {
            NecessaryCondition {
                status: ConditionStatus::Violated,
                boundary: pot <= threshold + tol,
                threshold,
            }
        }
    }
}

/// A bound value with its necessary-condition status.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PointBound {
    pub value: f64,
    pub condition: NecessaryCondition,
}

fn check_pot(pot: f64) -> Result<(), BoundError> {
    if !is_ext_nonneg(pot) {
        return Err(BoundError::BadPotential(pot));
    }
    Ok(())
}

fn check_b(b: f64) -> Result<(), BoundError> {
    if !(b.is_finite() && b >= 1.0) {
        return Err(BoundError::BadB(b));
    }
    Ok(())
}

/// Lower bound `1 + b (F^{-1}(pot / b) - 1)` for an increasing
/// nonlinearity, subject to the strict condition `pot < b F(inf)`.
pub fn lower_bound_general(
    pot: f64,
    b: f64,
    g: &Nonlinearity,
) -> Result<PointBound, BoundError> {
    check_pot(pot)?;
    check_b(b)?;
    if !g.is_increasing() {
        return Err(NonlinError::NotIncreasing.into());
    }
    let limit = g.f_increasing_limit()?;
    let condition = strict_condition(pot, b * limit);
    let value = if condition.violated() {
        f64::INFINITY
    } else if pot.is_infinite() {
        f64::INFINITY
    } else {
        1.0 + b * (g.f_inverse(pot / b)? - 1.0)
    };
    Ok(PointBound { value, condition })
}

/// Power-case lower bound in closed form; `q = 1` uses the exponential
/// branch `1 + b (e^{pot/b} - 1)`.
pub fn lower_bound_power(pot: f64, b: f64, q: f64) -> Result<PointBound, BoundError> {
    check_pot(pot)?;
    check_b(b)?;
    if !(q > 0.0 && q.is_finite()) {
        return Err(BoundError::BadExponent { q, need: "q > 0" });
    }
    let threshold = if q > 1.0 {
        b / (q - 1.0)
    } else {
        f64::INFINITY
    };
    let condition = strict_condition(pot, threshold);
    let value = if condition.violated() {
        f64::INFINITY
    } else if q == 1.0 {
        1.0 + b * ((pot / b).exp() - 1.0)
    } else {
        1.0 + b * ((1.0 + (1.0 - q) * pot / b).powf(1.0 / (1.0 - q)) - 1.0)
    };
    Ok(PointBound { value, condition })
}

/// Upper bound `1 - b (1 - F^{-1}(pot / b))` for a decreasing
/// nonlinearity, subject to `pot < b F(1 - 1/b)`. A violated condition
/// reports the bound `0`: no positive solution is possible there.
pub fn upper_bound_general(
    pot: f64,
    b: f64,
    g: &Nonlinearity,
) -> Result<PointBound, BoundError> {
    check_pot(pot)?;
    check_b(b)?;
    if g.is_increasing() {
        return Err(NonlinError::NotDecreasing.into());
    }
    let threshold = b * g.f_decreasing(1.0 - 1.0 / b)?;
    let condition = strict_condition(pot, threshold);
    let value = if condition.violated() {
        0.0
    } else {
        1.0 - b * (1.0 - g.f_inverse(pot / b)?)
    };
    Ok(PointBound { value, condition })
}

/// Power-case upper bound for `q < 0` in closed form, with the strict
/// condition `pot < (b / (1 - q)) [1 - (1 - 1/b)^{1-q}]`.
pub fn upper_bound_power_negative(pot: f64, b: f64, q: f64) -> Result<PointBound, BoundError> {
    check_pot(pot)?;
    check_b(b)?;
    if !(q < 0.0 && q.is_finite()) {
        return Err(BoundError::BadExponent { q, need: "q < 0" });
    }
    let threshold = b / (1.0 - q) * (1.0 - (1.0 - 1.0 / b).powf(1.0 - q));
    let condition = strict_condition(pot, threshold);
    let value = if condition.violated() {
        0.0
    } else {
        1.0 - b * (1.0 - (1.0 - (1.0 - q) * pot / b).max(0.0).powf(1.0 / (1.0 - q)))
    };
    Ok(PointBound { value, condition })
}

/// Inhomogeneity-weighted power bound: reduces to the normalized forms via
/// the substitution `v = u / h`, so the bound is
/// `h(x) * bound(pot_hq / h(x))` and thresholds scale by `h(x)`.
pub fn bounds_with_h(
    pot_hq: f64,
    h_at_x: f64,
    b: f64,
    q: f64,
) -> Result<PointBound, BoundError> {
    check_pot(pot_hq)?;
    check_b(b)?;
    if !(h_at_x.is_finite() && h_at_x > 0.0) {
        return Err(BoundError::BadH(h_at_x));
    }
    if q == 0.0 || !q.is_finite() {
        return Err(BoundError::BadExponent { q, need: "q != 0" });
    }
    let inner = if q > 0.0 {
        lower_bound_power(pot_hq / h_at_x, b, q)?
    } else {
        upper_bound_power_negative(pot_hq / h_at_x, b, q)?
    };
    Ok(PointBound {
        value: h_at_x * inner.value,
        condition: NecessaryCondition {
            threshold: inner.condition.threshold * h_at_x,
            ..inner.condition
        },
    })
}

/// Homogeneous sublinear lower bound
/// `(1-q)^{1/(1-q)} b^{-q/(1-q)} pot^{1/(1-q)}` for `0 < q < 1`;
/// it carries no necessary condition.
pub fn homogeneous_sublinear_bound(pot: f64, b: f64, q: f64) -> Result<f64, BoundError> {
    check_pot(pot)?;
    check_b(b)?;
    if !(q > 0.0 && q < 1.0) {
        return Err(BoundError::BadExponent { q, need: "0 < q < 1" });
    }
    let e = 1.0 / (1.0 - q);
    Ok((1.0 - q).powf(e) * b.powf(-q * e) * pot.powf(e))
}

/// Result of the iterated-power lower bound on `f_k`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IteratedPowerBound {
    pub value: f64,
    /// The constants overflowed; the reported value degrades to 0.
    pub overflow: bool,
}

/// Lower bound on the k-th kernel iterate:
/// `f_k(x) >= f_0(x)^{1+q+...+q^k} / (c(q,k) b^{q+...+q^k})`.
pub fn iterated_power_bound(
    f0_at_x: f64,
    b: f64,
    q: f64,
    k: u32,
) -> Result<IteratedPowerBound, BoundError> {
    check_pot(f0_at_x)?;
    check_b(b)?;
    if !(q > 0.0 && q.is_finite()) {
        return Err(BoundError::BadExponent { q, need: "q > 0" });
    }
    let c = iteration_constant_c(q, k)?;
    let sum_all = if q == 1.0 {
        (k + 1) as f64
    } else {
        (1.0 - q.powi(k as i32 + 1)) / (1.0 - q)
    };
    let sum_tail = sum_all - 1.0;
    let denom = c.value * b.powf(sum_tail);
    let numer = f0_at_x.powf(sum_all);
    if c.overflow || (!denom.is_finite() && numer.is_finite()) {
        return Ok(IteratedPowerBound {
            value: 0.0,
            overflow: true,
        });
    }
    Ok(IteratedPowerBound {
        value: numer / denom,
        overflow: false,
    })
}

/// Pointwise residuals of the power iterate comparison between
/// `[G1]^r` and `r b^{r-1} G[(G1)^{r-1}]`.
///
/// For `r >= 1` the residual is `rhs - lhs`; for `r <= 1` the inequality
/// reverses and the residual is `lhs - rhs`. With a valid `b` every
/// residual is nonnegative up to roundoff. Points where both sides are
/// infinite are vacuous and report 0.
pub fn power_iterate_residuals(
    kernel: &Kernel,
    space: &MeasureSpace,
    b: f64,
    r: f64,
) -> Result<Vec<f64>, BoundError> {
    check_b(b)?;
    if !(r > 0.0 && r.is_finite()) {
        return Err(BoundError::BadR(r));
    }
    let g1 = kernel.potential_of_weights(space)?;
    let inner: Vec<f64> = g1.iter().map(|&v| v.powf(r - 1.0)).collect();
    let outer = kernel.apply(space, &inner)?;
    let scale = r * b.powf(r - 1.0);
    let mut residuals = Vec::with_capacity(g1.len());
    for (v, o) in g1.iter().zip(&outer) {
        let lhs = v.powf(r);
        let rhs = scale * o;
        let res = if lhs.is_infinite() && rhs.is_infinite() {
            0.0
        } else if r >= 1.0 {
            rhs - lhs
        } else {
            lhs - rhs
        };
        residuals.push(res);
    }
    Ok(residuals)
}

/// Which estimate a report's rows were produced by.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BoundFamily {
    LowerGeneral,
    LowerPower,
    UpperGeneral,
    UpperPower,
    HWeighted,
    HomogeneousSublinear,
    IteratedPower,
}

impl BoundFamily {
    pub fn tag(&self) -> &'static str {
        match self {
            BoundFamily::LowerGeneral => "lower-general",
            BoundFamily::LowerPower => "lower-power",
            BoundFamily::UpperGeneral => "upper-general",
            BoundFamily::UpperPower => "upper-power",
            BoundFamily::HWeighted => "h-weighted",
            BoundFamily::HomogeneousSublinear => "homogeneous-sublinear",
            BoundFamily::IteratedPower => "iterated-power",
        }
    }

    /// True when the estimate bounds solutions from below.
    pub fn is_lower(&self) -> bool {
        !matches!(self, BoundFamily::UpperGeneral | BoundFamily::UpperPower)
    }
}

/// Per-point bound evaluation against an optional reference solution.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoundRow {
    pub point: usize,
    pub pot: f64,
    pub bound: f64,
    pub condition: NecessaryCondition,
    pub reference: Option<f64>,
    /// `reference - bound` when a reference is supplied.
    pub margin: Option<f64>,
}

/// A self-describing table of bound evaluations.
#[derive(Debug, Clone, PartialEq)]
pub struct BoundReport {
    pub family: BoundFamily,
    pub b: f64,
    pub q: Option<f64>,
    pub rows: Vec<BoundRow>,
}

impl BoundReport {
    pub fn new(family: BoundFamily, b: f64, q: Option<f64>) -> Self {
        Self {
            family,
            b,
            q,
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, point: usize, pot: f64, bound: f64, condition: NecessaryCondition, reference: Option<f64>) {
        let margin = reference.map(|u| u - bound);
        self.rows.push(BoundRow {
            point,
            pot,
            bound,
            condition,
            reference,
            margin,
        });
    }

    /// Rows whose reference breaches the bound beyond `1e-9 (1 + |u|)`, in
    /// the direction the family points.
    pub fn violations(&self) -> usize {
        let lower = self.family.is_lower();
        self.rows
            .iter()
            .filter(|row| match (row.margin, row.reference) {
                (Some(m), Some(u)) => {
                    let tol = 1e-9 * (1.0 + u.abs());
                    if lower {
                        m < -tol
                    } else {
                        m > tol
                    }
                }
                _ => false,
            })
            .count()
    }

    /// Worst margin in the family's direction (minimum for lower bounds,
    /// maximum for upper bounds).
    pub fn worst_margin(&self) -> Option<f64> {
        let margins = self.rows.iter().filter_map(|r| r.margin);
        if self.family.is_lower() {
            margins.fold(None, |acc: Option<f64>, m| Some(acc.map_or(m, |a| a.min(m))))
        } else {
            margins.fold(None, |acc: Option<f64>, m| Some(acc.map_or(m, |a| a.max(m))))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const E: f64 = core::f64::consts::E;

    fn close(a: f64, b: f64, tol: f64) -> bool {
        (a - b).abs() <= tol * 1.0f64.max(b.abs())
    }

    #[test]
    fn lower_general_zero_potential_is_trivial() {
        let g = Nonlinearity::power(2.0).unwrap();
        let pb = lower_bound_general(0.0, 1.5, &g).unwrap();
        assert_eq!(pb.value, 1.0);
        assert_eq!(pb.condition.status, ConditionStatus::Holds);
    }

    #[test]
    fn lower_general_exponential_case() {
        let g = Nonlinearity::power(1.0).unwrap();
        let pb = lower_bound_general(1.0, 1.0, &g).unwrap();
        assert!(close(pb.value, E, 1e-12));
        assert_eq!(pb.condition.status, ConditionStatus::NotApplicable);
    }

    #[test]
    fn lower_general_detects_violation_at_limit() {
        let g = Nonlinearity::power(2.0).unwrap();
        let pb = lower_bound_general(1.0, 1.0, &g).unwrap();
        assert!(pb.condition.violated());
        assert!(pb.condition.boundary);
        assert!(pb.value.is_infinite());
    }

    #[test]
    fn lower_power_cases() {
        let pb = lower_bound_power(0.5, 1.0, 2.0).unwrap();
        assert!(close(pb.value, 2.0, 1e-12));
        let pb = lower_bound_power(2.0, 2.0, 1.0).unwrap();
        assert!(close(pb.value, 1.0 + 2.0 * (E - 1.0), 1e-12));
        let pb = lower_bound_power(0.0, 1.0, 0.5).unwrap();
        assert_eq!(pb.value, 1.0);
    }

    #[test]
    fn lower_power_matches_general_route() {
        for &q in &[0.3, 0.5, 1.0, 1.5, 2.0] {
            let g = Nonlinearity::power(q).unwrap();
            for &b in &[1.0, 1.5, 2.0, 4.0] {
                for &pot in &[0.0, 0.1, 0.4, 0.8] {
                    let a = lower_bound_power(pot, b, q).unwrap();
                    let c = lower_bound_general(pot, b, &g).unwrap();
                    if a.value.is_finite() {
                        assert!(close(a.value, c.value, 1e-12), "q={q} b={b} pot={pot}");
                    } else {
                        assert!(c.value.is_infinite());
                    }
                }
            }
        }
    }

    #[test]
    fn upper_general_cases() {
        let g = Nonlinearity::power(-1.0).unwrap();
        let pb = upper_bound_general(0.0, 1.0, &g).unwrap();
        assert_eq!(pb.value, 1.0);
        let pb = upper_bound_general(0.3, 1.0, &g).unwrap();
        assert!(close(pb.value, 0.4f64.sqrt(), 1e-12));
        // b = 1 threshold reads F(0) = 1/2 for q = -1.
        assert!(close(pb.condition.threshold, 0.5, 1e-12));
    }

    #[test]
    fn upper_power_cases() {
        let pb = upper_bound_power_negative(0.09, 1.0, -1.0).unwrap();
        assert!(close(pb.value, 0.82f64.sqrt(), 1e-12));
        assert_eq!(pb.condition.status, ConditionStatus::Holds);
        let pb = upper_bound_power_negative(0.0, 2.0, -1.0).unwrap();
        assert_eq!(pb.value, 1.0);
        // b = 2, q = -1: threshold (2/2)[1 - (1/2)^2] = 0.75.
        assert!(close(pb.condition.threshold, 0.75, 1e-12));
    }

    #[test]
    fn upper_power_violation_reports_zero() {
        let pb = upper_bound_power_negative(0.9, 1.0, -1.0).unwrap();
        assert!(pb.condition.violated());
        assert_eq!(pb.value, 0.0);
    }

    #[test]
    fn h_weighted_reduction() {
        let pb = bounds_with_h(0.0, 3.0, 1.0, 2.0).unwrap();
        assert_eq!(pb.value, 3.0);
        let pb = bounds_with_h(2.0, 2.0, 1.0, 1.0).unwrap();
        assert!(close(pb.value, 2.0 * E, 1e-12));
        // q = 2, b = 1, h = 1, pot at the threshold b h / (q - 1) = 1.
        let pb = bounds_with_h(1.0, 1.0, 1.0, 2.0).unwrap();
        assert!(pb.condition.violated());
        assert!(pb.condition.boundary);
    }

    #[test]
    fn h_weighted_equals_scaled_power_bound() {
        for &(pot, h, b, q) in &[
            (0.3, 2.0, 1.5, 0.5),
            (0.9, 0.5, 2.0, 2.0),
            (0.2, 3.0, 1.0, -1.0),
        ] {
            let lhs = bounds_with_h(pot, h, b, q).unwrap().value;
            let inner = if q > 0.0 {
                lower_bound_power(pot / h, b, q).unwrap().value
            } else {
                upper_bound_power_negative(pot / h, b, q).unwrap().value
            };
            assert_eq!(lhs, h * inner);
        }
    }

    #[test]
    fn homogeneous_cases() {
        assert_eq!(homogeneous_sublinear_bound(0.0, 1.0, 0.5).unwrap(), 0.0);
        assert!(close(
            homogeneous_sublinear_bound(1.0, 1.0, 0.5).unwrap(),
            0.25,
            1e-12
        ));
        assert!(close(
            homogeneous_sublinear_bound(1.0, 4.0, 0.5).unwrap(),
            0.0625,
            1e-12
        ));
        assert!(homogeneous_sublinear_bound(1.0, 1.0, 1.0).is_err());
    }

    #[test]
    fn iterated_power_cases() {
        let r = iterated_power_bound(3.0, 2.0, 0.7, 0).unwrap();
        assert_eq!(r.value, 3.0);
        let r = iterated_power_bound(1.0, 1.0, 1.0, 2).unwrap();
        assert!(close(r.value, 1.0 / 6.0, 1e-15));
        let r = iterated_power_bound(2.0, 1.0, 2.0, 1).unwrap();
        assert!(close(r.value, 8.0 / 3.0, 1e-15));
    }

    #[test]
    fn power_iterate_residual_trivial_at_r_one() {
        let s = MeasureSpace::line(alloc::vec![0.0, 1.0, 2.0], alloc::vec![0.5; 3]).unwrap();
        let k = Kernel::volterra(&s).unwrap();
        let res = power_iterate_residuals(&k, &s, 1.0, 1.0).unwrap();
        for r in res {
            assert!(r.abs() <= 1e-12);
        }
    }

    #[test]
    fn report_counts_violations_directionally() {
        let mut lower = BoundReport::new(BoundFamily::LowerPower, 1.0, Some(2.0));
        let cond = strict_condition(0.0, f64::INFINITY);
        lower.push(0, 0.0, 1.0, cond, Some(0.5)); // reference below a lower bound
        lower.push(1, 0.0, 1.0, cond, Some(2.0));
        assert_eq!(lower.violations(), 1);
        assert_eq!(lower.worst_margin(), Some(-0.5));

        let mut upper = BoundReport::new(BoundFamily::UpperPower, 1.0, Some(-1.0));
        upper.push(0, 0.0, 0.5, cond, Some(0.9)); // reference above an upper bound
        upper.push(1, 0.0, 0.5, cond, Some(0.1));
        assert_eq!(upper.violations(), 1);
        assert_eq!(upper.worst_margin(), Some(0.4));
    }
}
