//! A small dense simplex maximizer for the support linear programs:
//! maximize `c . x` subject to `A x <= b`, `x >= 0`, with `b >= 0` so the
//! slack basis is immediately feasible. Pivoting uses Bland's rule, which
//! rules out cycling on degenerate bases.

use alloc::vec;
use alloc::vec::Vec;

pub(crate) const LP_TOL: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq)]
pub(crate) enum Lp {
    Optimal { value: f64, x: Vec<f64> },
    /// A feasible unbounded direction in the original variables.
    Unbounded { ray: Vec<f64> },
}

pub(crate) fn simplex_max(c: &[f64], a: &[Vec<f64>], b: &[f64]) -> Lp {
    let n = c.len();
    let m = a.len();
    debug_assert!(a.iter().all(|row| row.len() == n));
    debug_assert!(b.iter().all(|&v| v >= 0.0));

    // Tableau: m rows of [vars | slacks | rhs], plus a cost row.
    let width = n + m + 1;
    let mut tab: Vec<Vec<f64>> = (0..m)
        .map(|i| {
            let mut row = vec![0.0; width];
            row[..n].copy_from_slice(&a[i]);
            row[n + i] = 1.0;
            row[width - 1] = b[i];
            row
        })
        .collect();
    let mut cost = vec![0.0; width];
    cost[..n].copy_from_slice(c);
    let mut basis: Vec<usize> = (n..n + m).collect();

    let max_pivots = 200_000usize;
    for _ in 0..max_pivots {
        // Bland: entering variable is the lowest index with positive
        // reduced cost.
        let Some(enter) = (0..n + m).find(|&j| cost[j] > LP_TOL) else {
            break;
        };
        // Ratio test; ties resolved by the smallest basis variable index.
        let mut leave: Option<usize> = None;
        let mut best_ratio = f64::INFINITY;
        for (i, row) in tab.iter().enumerate() {
            if row[enter] > LP_TOL {
                let ratio = row[width - 1] / row[enter];
                let better = match leave {
                    None => true,
                    Some(cur) => {
                        ratio < best_ratio - LP_TOL
                            || ((ratio - best_ratio).abs() <= LP_TOL && basis[i] < basis[cur])
                    }
                };
                if better {
                    best_ratio = ratio;
                    leave = Some(i);
                }
            }
        }
        let Some(leave) = leave else {
            // Unbounded: move along the entering direction.
            let mut ray = vec![0.0; n];
            if enter < n {
                ray[enter] = 1.0;
            }
            for (i, row) in tab.iter().enumerate() {
                if basis[i] < n {
                    ray[basis[i]] = -row[enter];
                }
            }
            return Lp::Unbounded { ray };
        };
        // Pivot.
        let pivot = tab[leave][enter];
        for v in tab[leave].iter_mut() {
            *v /= pivot;
        }
        for i in 0..m {
            if i != leave {
                let factor = tab[i][enter];
                if factor != 0.0 {
                    for j in 0..width {
                        let delta = factor * tab[leave][j];
                        tab[i][j] -= delta;
                    }
                }
            }
        }
        let factor = cost[enter];
        if factor != 0.0 {
            for j in 0..width {
                cost[j] -= factor * tab[leave][j];
            }
        }
        basis[leave] = enter;
    }

    let mut x = vec![0.0; n];
    for (i, &bv) in basis.iter().enumerate() {
        if bv < n {
            x[bv] = tab[i][width - 1].max(0.0);
        }
    }
    let value = x.iter().zip(c).map(|(xi, ci)| xi * ci).sum();
    Lp::Optimal { value, x }
}
