//! Certification and refutation of the kernel-side hypotheses: the weak
//! maximum principle, the weak domination principle, quasi-metric and
//! Ptolemy constants, and mutual energies.
//!
//! The maximum-principle search space is the family of linear programs
//! indexed by supports: for each nonempty support `S` and each evaluation
//! point `x`, maximize `Gf(x)` over `f >= 0` carried by `S` subject to
//! `Gf <= 1` on `S`. For small instances every support is enumerated and
//! the verdict is a certificate; beyond the exhaustive cutoff only
//! randomized search runs and verdicts are never stronger than
//! `SatisfiedOnTests`.
//!
//! The quasi-metric constant is maximized over ordered triples of distinct
//! points (fewer than three points is vacuous and reported as the floor
//! 1/2). The derived certificate `b = 2 * kappa` presumes kernels whose
//! diagonal dominates their row, `K(x, x) = max_y K(x, y)`, which holds for
//! every radially nonincreasing family built by this crate, including
//! singular diagonals.

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::kernel::{Kernel, KernelError};
use crate::simplex::{simplex_max, Lp};
use crate::space::{Measure, MeasureSpace, SpaceError};
use crate::xr::{xinv, xmul};

/// Slack added to the right side of every certified comparison.
pub const CERT_SLACK: f64 = 1e-9;

/// Largest instance for which the support enumeration is exhaustive.
pub const MAX_EXHAUSTIVE_N: usize = 16;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum PrincipleError {
    #[error(transparent)]
    Kernel(#[from] KernelError),
    #[error(transparent)]
    Space(#[from] SpaceError),
    #[error("instance size {n} exceeds the exhaustive cutoff {max}")]
    TooLargeForExhaustive { n: usize, max: usize },
    #[error("constant b = {0} must be finite and at least 1")]
    BadB(f64),
}

/// Quasi-metric constant report: the maximal triple ratio of `d = 1/K`.
#[derive(Debug, Clone, PartialEq)]
pub struct QuasiMetricReport {
    /// Max over distinct triples of `d(x,y) / (d(x,z) + d(y,z))`, floored
    /// at 1/2.
    pub kappa: f64,
    pub witness_triple: Option<[usize; 3]>,
    /// True when the point set is too small for any triple.
    pub vacuous: bool,
}

/// Ptolemy constant report: the maximal quadruple ratio.
#[derive(Debug, Clone, PartialEq)]
pub struct PtolemyReport {
    pub constant: f64,
    pub witness: Option<[usize; 4]>,
    pub vacuous: bool,
}

/// Which transformation the certified constant refers to.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum KernelTransform {
    Plain,
    WModified,
}

/// `b = 2 kappa` for plain quasi-metric kernels, `b = 8 kappa^3` for
/// point-normalized ones.
pub fn certified_b(report: &QuasiMetricReport, transform: KernelTransform) -> f64 {
    match transform {
        KernelTransform::Plain => 2.0 * report.kappa,
        KernelTransform::WModified => 8.0 * report.kappa * report.kappa * report.kappa,
    }
}

fn ratio_extended(num: f64, den: f64) -> f64 {
    if num == 0.0 || den == f64::INFINITY {
        0.0
    } else if den == 0.0 {
        f64::INFINITY
    } else {
        num / den
    }
}

/// Exhaustive maximization of `d(x,y) / (d(x,z) + d(y,z))` over ordered
/// triples of distinct points, `d = 1/K`.
pub fn quasimetric_constant(kernel: &Kernel) -> Result<QuasiMetricReport, PrincipleError> {
    if !kernel.is_symmetric() {
        return Err(KernelError::NotSymmetric.into());
    }
    let n = kernel.n();
    if n < 3 {
        return Ok(QuasiMetricReport {
            kappa: 0.5,
            witness_triple: None,
            vacuous: true,
        });
    }
    let d: Vec<f64> = (0..n * n).map(|p| xinv(kernel.entry(p / n, p % n))).collect();
    let d = |i: usize, j: usize| d[i * n + j];
    let mut best = 0.0f64;
    let mut witness = None;
    for i in 0..n {
        for j in (i + 1)..n {
            let num = d(i, j);
            if num == 0.0 {
                continue;
            }
            for z in 0..n {
                if z == i || z == j {
                    continue;
                }
                let r = ratio_extended(num, d(i, z) + d(j, z));
                if r > best {
                    best = r;
                    witness = Some([i, j, z]);
                }
            }
        }
    }
    Ok(QuasiMetricReport {
        kappa: best.max(0.5),
        witness_triple: witness,
        vacuous: false,
    })
}

/// Exhaustive maximization of the quadruple-products ratio
/// `d(x,y) d(z,w) / (d(x,w) d(y,z) + d(x,z) d(y,w))` over distinct points,
/// pruned by the symmetries of the expression.
pub fn ptolemy_constant(kernel: &Kernel) -> Result<PtolemyReport, PrincipleError> {
    if !kernel.is_symmetric() {
        return Err(KernelError::NotSymmetric.into());
    }
    let n = kernel.n();
    if n < 4 {
        return Ok(PtolemyReport {
            constant: 0.0,
            witness: None,
            vacuous: true,
        });
    }
    let d: Vec<f64> = (0..n * n).map(|p| xinv(kernel.entry(p / n, p % n))).collect();
    let d = |i: usize, j: usize| d[i * n + j];
    let mut best = 0.0f64;
    let mut witness = None;
    for x in 0..n {
        for y in (x + 1)..n {
            // The pairing {x,y} | {z,w} is unordered; force x < z.
            for z in (x + 1)..n {
                if z == y {
                    continue;
                }
                for w in (z + 1)..n {
                    if w == y {
                        continue;
                    }
                    let num = xmul(d(x, y), d(z, w));
                    if num == 0.0 {
                        continue;
                    }
                    let den = xmul(d(x, w), d(y, z)) + xmul(d(x, z), d(y, w));
                    let r = ratio_extended(num, den);
                    if r > best {
                        best = r;
                        witness = Some([x, y, z, w]);
                    }
                }
            }
        }
    }
    Ok(PtolemyReport {
        constant: best,
        witness,
        vacuous: false,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Verdict {
    /// Every support was enumerated and no optimum exceeded `b`.
    Certified,
    /// Randomized search found no violation within its budget.
    SatisfiedOnTests,
    Violated,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum WmpStrategy {
    ExhaustiveLp,
    Randomized { trials: usize, seed: u64 },
}

/// A replayable counterexample: `apply(K, f) <= 1` on the support while
/// `apply(K, f)(point) = value`.
#[derive(Debug, Clone, PartialEq)]
pub struct WmpWitness {
    pub support: Vec<usize>,
    pub f: Vec<f64>,
    pub point: usize,
    pub value: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct WmpReport {
    pub verdict: Verdict,
    pub b_tested: f64,
    /// Largest ratio actually exhibited; a lower bound for the minimal
    /// constant (exact under the exhaustive strategy).
    pub b_lower_witness: f64,
    pub witness: Option<WmpWitness>,
    pub strategy: WmpStrategy,
    /// Some support admitted an unbounded program (no finite constant
    /// works); the stored witness is a finite scaling of the free ray.
    pub unbounded: bool,
}

struct Scan {
    value: f64,
    witness: Option<WmpWitness>,
    unbounded: bool,
}

fn exhaustive_scan(kernel: &Kernel, space: &MeasureSpace) -> Result<Scan, PrincipleError> {
    let n = kernel.n();
    if n != space.n() {
        return Err(KernelError::SizeMismatch {
            kernel: n,
            space: space.n(),
        }
        .into());
    }
    if n > MAX_EXHAUSTIVE_N {
        return Err(PrincipleError::TooLargeForExhaustive {
            n,
            max: MAX_EXHAUSTIVE_N,
        });
    }
    let w = space.weights();
    let coef = |i: usize, j: usize| xmul(kernel.effective_entry(i, j), w[j]);
    let mut scan = Scan {
        value: 0.0,
        witness: None,
        unbounded: false,
    };
    let record = |scan: &mut Scan, value: f64, support: &[usize], vars: &[usize], amounts: &[f64], point: usize, unbounded: bool| {
        if unbounded {
            scan.unbounded = true;
        }
        if value > scan.value {
            scan.value = value;
            let mut f = vec![0.0; n];
            for (v, &y) in amounts.iter().zip(vars) {
                f[y] = *v;
            }
            scan.witness = Some(WmpWitness {
                support: support.to_vec(),
                f,
                point,
                value,
            });
        }
    };

    for mask in 1u32..(1u32 << n) {
        let support: Vec<usize> = (0..n).filter(|i| mask >> i & 1 == 1).collect();
        // Variables: support atoms that carry mass and are not forced to
        // zero by an infinite row coefficient.
        let vars: Vec<usize> = support
            .iter()
            .copied()
            .filter(|&y| w[y] > 0.0 && support.iter().all(|&s| coef(s, y).is_finite()))
            .collect();
        if vars.is_empty() {
            continue;
        }
        // Binding rows only: all-zero rows cannot constrain anything.
        let rows: Vec<Vec<f64>> = support
            .iter()
            .map(|&s| vars.iter().map(|&y| coef(s, y)).collect::<Vec<f64>>())
            .filter(|row: &Vec<f64>| row.iter().any(|&v| v > 0.0))
            .collect();
        let ones = vec![1.0; rows.len()];
        for x in 0..n {
            if mask >> x & 1 == 1 {
                continue;
            }
            let obj: Vec<f64> = vars.iter().map(|&y| coef(x, y)).collect();
            if obj.iter().all(|&v| v == 0.0) {
                continue;
            }
            if let Some(p) = obj.iter().position(|v| v.is_infinite()) {
                // A positive amount of this atom is feasible and already
                // sends the value to +inf.
                let mut amount = f64::INFINITY;
                for row in &rows {
                    if row[p] > 0.0 {
                        amount = amount.min(1.0 / row[p]);
                    }
                }
                let amount = if amount.is_finite() { amount } else { 1.0 };
                let mut amounts = vec![0.0; vars.len()];
                amounts[p] = amount;
                record(
                    &mut scan,
                    f64::INFINITY,
                    &support,
                    &vars,
                    &amounts,
                    x,
                    true,
                );
                continue;
            }
            match simplex_max(&obj, &rows, &ones) {
                Lp::Optimal { value, x: sol } => {
                    record(&mut scan, value, &support, &vars, &sol, x, false);
                }
                Lp::Unbounded { ray } => {
                    let gain: f64 = ray.iter().zip(&obj).map(|(r, c)| r * c).sum();
                    let t = 1e12 / gain.max(1e-300);
                    let amounts: Vec<f64> = ray.iter().map(|r| r * t).collect();
                    let value: f64 = amounts.iter().zip(&obj).map(|(a, c)| a * c).sum();
                    record(&mut scan, value, &support, &vars, &amounts, x, true);
                    scan.value = f64::INFINITY;
                }
            }
        }
    }
    // Witness values must replay bit-exactly through `apply`; the LP side
    // accumulates in a different order, so re-evaluate once.
    if let Some(w) = scan.witness.as_mut() {
        w.value = kernel.apply(space, &w.f)?[w.point];
    }
    Ok(scan)
}

/// The exact minimal maximum-principle constant of a small instance (within
/// the convention `b >= 1`), found by exhausting every support program.
/// `+inf` when some support admits an unbounded program.
pub fn minimal_b_exhaustive(
    kernel: &Kernel,
    space: &MeasureSpace,
) -> Result<(f64, Option<WmpWitness>), PrincipleError> {
    let scan = exhaustive_scan(kernel, space)?;
    Ok((scan.value.max(1.0), scan.witness))
}

/// Search for violations of `Gf <= 1 on supp f  =>  Gf <= b everywhere`.
pub fn verify_wmp(
    kernel: &Kernel,
    space: &MeasureSpace,
    b: f64,
    strategy: WmpStrategy,
) -> Result<WmpReport, PrincipleError> {
    if !(b.is_finite() && b >= 1.0) {
        return Err(PrincipleError::BadB(b));
    }
    match strategy {
        WmpStrategy::ExhaustiveLp => {
            let scan = exhaustive_scan(kernel, space)?;
            let violated = !(scan.value <= b + CERT_SLACK);
            Ok(WmpReport {
                verdict: if violated {
                    Verdict::Violated
                } else {
                    Verdict::Certified
                },
                b_tested: b,
                b_lower_witness: scan.value,
                witness: scan.witness,
                strategy,
                unbounded: scan.unbounded,
            })
        }
        WmpStrategy::Randomized { trials, seed } => {
            randomized_search(kernel, space, b, trials, seed, strategy)
        }
    }
}

fn randomized_search(
    kernel: &Kernel,
    space: &MeasureSpace,
    b: f64,
    trials: usize,
    seed: u64,
    strategy: WmpStrategy,
) -> Result<WmpReport, PrincipleError> {
    let n = kernel.n();
    if n != space.n() {
        return Err(KernelError::SizeMismatch {
            kernel: n,
            space: space.n(),
        }
        .into());
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut idx: Vec<usize> = (0..n).collect();
    let mut best = 0.0f64;
    let mut best_witness: Option<WmpWitness> = None;
    let mut unbounded = false;
    for _ in 0..trials {
        let m = rng.gen_range(1..=n);
        for i in 0..m {
            let j = rng.gen_range(i..n);
            idx.swap(i, j);
        }
        let mut support: Vec<usize> = idx[..m].to_vec();
        support.sort_unstable();
        let mut f = vec![0.0; n];
        for &y in &support {
            f[y] = 1.0 - rng.gen::<f64>();
        }
        let gf = kernel.apply(space, &f)?;
        let on_support = support.iter().map(|&s| gf[s]).fold(0.0f64, f64::max);
        if on_support.is_infinite() {
            continue;
        }
        if on_support == 0.0 {
            // The support does not see itself at all: any positive mass is
            // feasible, so a nonzero value elsewhere scales freely.
            let (point, &off) = gf
                .iter()
                .enumerate()
                .max_by(|a, b| a.1.partial_cmp(b.1).unwrap())
                .unwrap();
            if off > 0.0 {
                let t = if off.is_finite() { (b + 1.0) / off } else { 1.0 };
                let f: Vec<f64> = f.iter().map(|v| v * t).collect();
                let value = kernel.apply(space, &f)?[point];
                return Ok(WmpReport {
                    verdict: Verdict::Violated,
                    b_tested: b,
                    b_lower_witness: f64::INFINITY,
                    witness: Some(WmpWitness {
                        support,
                        f,
                        point,
                        value,
                    }),
                    strategy,
                    unbounded: true,
                });
            }
            continue;
        }
        let scale = (1.0 - 1e-12) / on_support;
        for v in f.iter_mut() {
            *v *= scale;
        }
        let gf = kernel.apply(space, &f)?;
        // Only off-support values are informative: on the support the
        // normalization caps the image at 1.
        let Some((point, &value)) = gf
            .iter()
            .enumerate()
            .filter(|(i, _)| !support.contains(i))
            .max_by(|a, b| a.1.partial_cmp(b.1).unwrap())
        else {
            continue;
        };
        if value > best {
            best = value;
            best_witness = Some(WmpWitness {
                support: support.clone(),
                f: f.clone(),
                point,
                value,
            });
        }
        if value > b + CERT_SLACK {
            unbounded |= value.is_infinite();
            return Ok(WmpReport {
                verdict: Verdict::Violated,
                b_tested: b,
                b_lower_witness: best,
                witness: best_witness,
                strategy,
                unbounded,
            });
        }
    }
    Ok(WmpReport {
        verdict: Verdict::SatisfiedOnTests,
        b_tested: b,
        b_lower_witness: best,
        witness: best_witness,
        strategy,
        unbounded,
    })
}

/// The weight-normalized kernel whose maximum principle is exactly the
/// domination principle of `(kernel, h)`: entries `K(i, j) w_j / h_i` over
/// a unit-weight copy of the space.
pub fn domination_kernel(
    kernel: &Kernel,
    space: &MeasureSpace,
    h: &[f64],
) -> Result<(Kernel, MeasureSpace), PrincipleError> {
    let n = kernel.n();
    if n != space.n() || h.len() != n {
        return Err(KernelError::SizeMismatch {
            kernel: n,
            space: h.len(),
        }
        .into());
    }
    for (i, &v) in h.iter().enumerate() {
        if !(v.is_finite() && v > 0.0) {
            return Err(KernelError::BadWeightFunction(i).into());
        }
    }
    let w = space.weights();
    let mut entries = vec![0.0; n * n];
    for i in 0..n {
        for j in 0..n {
            entries[i * n + j] = xmul(kernel.effective_entry(i, j), w[j]) / h[i];
        }
    }
    let normalized = Kernel::from_parts(
        &format!("{}~h", kernel.name()),
        n,
        entries,
        false,
        false,
    )?;
    let unit = MeasureSpace::weighted(vec![1.0; n])?;
    Ok((normalized, unit))
}

/// Search for violations of `Gf <= h on supp f  =>  Gf <= b h everywhere`,
/// by reduction to the maximum principle of the normalized kernel.
pub fn verify_domination(
    kernel: &Kernel,
    space: &MeasureSpace,
    h: &[f64],
    b: f64,
    strategy: WmpStrategy,
) -> Result<WmpReport, PrincipleError> {
    let (normalized, unit) = domination_kernel(kernel, space, h)?;
    verify_wmp(&normalized, &unit, b, strategy)
}

/// Mutual energy `sum_{i,j} mu_i K(i, j) nu_j` under extended arithmetic.
pub fn mutual_energy(
    kernel: &Kernel,
    mu: &Measure,
    nu: &Measure,
) -> Result<f64, PrincipleError> {
    let pot = kernel.potential(nu)?;
    if mu.len() != pot.len() {
        return Err(KernelError::SizeMismatch {
            kernel: pot.len(),
            space: mu.len(),
        }
        .into());
    }
    let mut total = 0.0;
    for (m, p) in mu.values().iter().zip(&pot) {
        total += xmul(*m, *p);
    }
    Ok(total)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kernel::DiagonalPolicy;
    use alloc::vec;

    fn line_space(xs: &[f64]) -> MeasureSpace {
        MeasureSpace::line(xs.to_vec(), vec![1.0; xs.len()]).unwrap()
    }

    #[test]
    fn euclidean_metric_kernel_is_metric() {
        let s = line_space(&[0.0, 0.7, 1.3, 2.0, 3.1]);
        let k = Kernel::inverse_distance(&s, 1.0, DiagonalPolicy::Exclude).unwrap();
        let report = quasimetric_constant(&k).unwrap();
        assert!((report.kappa - 1.0).abs() <= 1e-12);
        assert!(!report.vacuous);
    }

    #[test]
    fn snowflake_constant_at_midpoint_grid() {
        // d(x, y) = |x - y|^s on a grid containing midpoints: the maximal
        // triple ratio is exactly 2^(s-1).
        for &s_exp in &[1.0, 1.5, 2.0] {
            let s = line_space(&[0.0, 1.0, 2.0, 3.0, 4.0]);
            let k = Kernel::inverse_distance(&s, s_exp, DiagonalPolicy::Exclude).unwrap();
            let report = quasimetric_constant(&k).unwrap();
            assert!(
                (report.kappa - 2.0f64.powf(s_exp - 1.0)).abs() <= 1e-12,
                "s = {s_exp}: kappa = {}",
                report.kappa
            );
        }
    }

    #[test]
    fn two_points_are_vacuous() {
        let s = line_space(&[0.0, 1.0]);
        let k = Kernel::inverse_distance(&s, 1.0, DiagonalPolicy::Exclude).unwrap();
        let report = quasimetric_constant(&k).unwrap();
        assert_eq!(report.kappa, 0.5);
        assert!(report.vacuous);
        let p = ptolemy_constant(&k).unwrap();
        assert!(p.vacuous);
    }

    #[test]
    fn ptolemy_metric_line_is_ptolemaic() {
        let s = line_space(&[0.0, 1.0, 2.5, 4.0, 5.5]);
        let k = Kernel::inverse_distance(&s, 1.0, DiagonalPolicy::Exclude).unwrap();
        let p = ptolemy_constant(&k).unwrap();
        assert!(p.constant <= 1.0 + 1e-12, "constant = {}", p.constant);
    }

    #[test]
    fn ptolemy_below_four_kappa_squared() {
        let s = line_space(&[0.0, 0.4, 1.1, 2.0, 2.6, 3.9]);
        for &s_exp in &[1.0, 1.5, 2.0] {
            let k = Kernel::inverse_distance(&s, s_exp, DiagonalPolicy::Exclude).unwrap();
            let q = quasimetric_constant(&k).unwrap();
            let p = ptolemy_constant(&k).unwrap();
            assert!(p.constant <= 4.0 * q.kappa * q.kappa + 1e-9);
        }
    }

    #[test]
    fn certified_constants() {
        let report = QuasiMetricReport {
            kappa: 1.0,
            witness_triple: None,
            vacuous: false,
        };
        assert_eq!(certified_b(&report, KernelTransform::Plain), 2.0);
        assert_eq!(certified_b(&report, KernelTransform::WModified), 8.0);
        let vacuous = QuasiMetricReport {
            kappa: 0.5,
            witness_triple: None,
            vacuous: true,
        };
        assert_eq!(certified_b(&vacuous, KernelTransform::Plain), 1.0);
    }

    #[test]
    fn identity_kernel_certified_at_one() {
        let s = MeasureSpace::weighted(vec![1.0; 4]).unwrap();
        let k = Kernel::identity(4);
        let report = verify_wmp(&k, &s, 1.0, WmpStrategy::ExhaustiveLp).unwrap();
        assert_eq!(report.verdict, Verdict::Certified);
        assert!(report.b_lower_witness <= 1.0 + 1e-12);
    }

    #[test]
    fn off_support_spike_is_violated_with_witness() {
        // K = [[0, M], [M, 0]]: a point mass at 0 is invisible on its own
        // support but huge at the other point.
        let m = 50.0;
        let k = Kernel::from_entries("spike", vec![vec![0.0, m], vec![m, 0.0]]).unwrap();
        let s = MeasureSpace::weighted(vec![1.0, 1.0]).unwrap();
        let report = verify_wmp(&k, &s, 1.0, WmpStrategy::ExhaustiveLp).unwrap();
        assert_eq!(report.verdict, Verdict::Violated);
        assert!(report.unbounded);
        let w = report.witness.expect("witness required for violations");
        // Replay the witness through apply.
        let gf = k.apply(&s, &w.f).unwrap();
        for &p in &w.support {
            assert!(gf[p] <= 1.0 + 1e-9);
        }
        assert!(gf[w.point] > report.b_tested);
        assert_eq!(gf[w.point], w.value);
    }

    #[test]
    fn volterra_domination_certified_at_one() {
        let s = MeasureSpace::line(vec![0.0, 0.25, 0.5, 0.75, 1.0], vec![0.2; 5]).unwrap();
        let k = Kernel::volterra(&s).unwrap();
        let h = vec![1.0; 5];
        let report = verify_domination(&k, &s, &h, 1.0, WmpStrategy::ExhaustiveLp).unwrap();
        assert_eq!(report.verdict, Verdict::Certified);
    }

    #[test]
    fn randomized_agrees_with_exhaustive_on_metric_kernel() {
        let s = line_space(&[0.0, 1.0, 2.0, 3.5]);
        let k = Kernel::inverse_distance(&s, 1.0, DiagonalPolicy::Cap(10.0)).unwrap();
        let q = quasimetric_constant(&k).unwrap();
        let b = certified_b(&q, KernelTransform::Plain);
        let exhaustive = verify_wmp(&k, &s, b, WmpStrategy::ExhaustiveLp).unwrap();
        assert_eq!(exhaustive.verdict, Verdict::Certified);
        let randomized = verify_wmp(
            &k,
            &s,
            b,
            WmpStrategy::Randomized {
                trials: 500,
                seed: 7,
            },
        )
        .unwrap();
        assert_eq!(randomized.verdict, Verdict::SatisfiedOnTests);
        assert!(randomized.b_lower_witness <= exhaustive.b_lower_witness + 1e-9);
    }

    #[test]
    fn mutual_energy_cases() {
        let s = MeasureSpace::weighted(vec![1.0, 1.0]).unwrap();
        let k = Kernel::from_entries("swap", vec![vec![0.0, 1.0], vec![1.0, 0.0]]).unwrap();
        let zero = Measure::new(vec![0.0, 0.0], &s).unwrap();
        let mu = Measure::new(vec![1.0, 0.0], &s).unwrap();
        let nu = Measure::new(vec![0.0, 3.0], &s).unwrap();
        assert_eq!(mutual_energy(&k, &mu, &zero).unwrap(), 0.0);
        assert_eq!(mutual_energy(&k, &mu, &nu).unwrap(), 3.0);
        // Atom self-energy picks out the diagonal entry.
        let id = Kernel::identity(2);
        let d1 = Measure::dirac(1, &s);
        assert_eq!(mutual_energy(&id, &d1, &d1).unwrap(), 1.0);
        // Symmetric kernel: energy is symmetric in its arguments.
        assert_eq!(
            mutual_energy(&k, &mu, &nu).unwrap(),
            mutual_energy(&k, &nu, &mu).unwrap()
        );
    }
}
