//! Exact Toeplitz log-determinants ln D_n, n = 1..N, for the matrices
//! (f_{t−j})_{t,j=0}^{n-1} built from a moment table, by two independent
//! routes: per-n dense elimination, and the classical O(N²) Toeplitz
//! recursion through monic orthogonal polynomials. A brute-force
//! multi-integral oracle for n ≤ 3 closes the loop at the smallest sizes.
//!
//! Values are kept in log space throughout: D_n grows or decays
//! geometrically·polynomially, and downstream comparisons need a coherent
//! branch of ln D_n, which is fixed by unwinding imaginary parts along n
//! (each increment taken within (−π, π]).

use crate::moments::MomentTable;
use crate::quad::circle_grid;
use crate::symbol::{CircleWeight, FhSymbol};
use num_complex::Complex64;
use serde::Serialize;
use std::f64::consts::PI;
use thiserror::Error;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);

/// Relative pivot floor: a pivot below this times the matrix max-norm is
/// treated as a vanishing minor.
pub(crate) const PIVOT_RTOL: f64 = 1e-13;
/// Reflection-coefficient magnitude above which the recursion is declared
/// broken down.
const REFLECTION_CAP: f64 = 1e8;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum DeterminantError {
    #[error("series order {needed} exceeds the moment table range ±{have}")]
    NotEnoughMoments { needed: usize, have: usize },
    #[error("direct multi-integral evaluation supports n ∈ {{1, 2, 3}}, got {n}")]
    UnsupportedOrder { n: usize },
    #[error("quadrature refinement still moves the value by {achieved:e} (> {tol:e})")]
    ToleranceNotMet { achieved: f64, tol: f64 },
}

/// Which algorithm produced a series.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Method {
    Elimination,
    Recursion,
}

impl std::fmt::Display for Method {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Method::Elimination => "elimination",
            Method::Recursion => "recursion",
        })
    }
}

/// ln D_n for n = 1..=n_max together with the minor ratios
/// χ_k² = D_k/D_{k+1} (k = 0..n_max−1, D_0 = 1).
///
/// On breakdown the series is truncated: `n_max` is the last trustworthy
/// order and `breakdown_at` names the first order where a vanishing minor
/// was detected.
#[derive(Debug, Clone, PartialEq)]
pub struct DeterminantSeries {
    pub n_max: usize,
    pub logdet: Vec<Complex64>,
    pub chi_sq: Vec<Complex64>,
    pub method: Method,
    pub breakdown_at: Option<usize>,
}

impl DeterminantSeries {
    /// ln D_n, 1-based.
    pub fn logdet_at(&self, n: usize) -> Complex64 {
        self.logdet[n - 1]
    }

    /// χ_k², 0-based.
    pub fn chi_sq_at(&self, k: usize) -> Complex64 {
        self.chi_sq[k]
    }

    /// CSV dump: n, logdet_re, logdet_im, chi_sq_re, chi_sq_im, method —
    /// row n carries χ_{n−1}², the ratio that produced D_n from D_{n−1}.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("n,logdet_re,logdet_im,chi_sq_re,chi_sq_im,method\n");
        for n in 1..=self.n_max {
            let ld = self.logdet[n - 1];
            let ch = self.chi_sq[n - 1];
            out.push_str(&format!(
                "{n},{:.16e},{:.16e},{:.16e},{:.16e},{}\n",
                ld.re, ld.im, ch.re, ch.im, self.method
            ));
        }
        out
    }
}

// ---------------------------------------------------------------------------
// Dense complex LU with partial pivoting (shared with the identity verifiers,
// which solve the same Toeplitz systems for orthogonal polynomials).
// ---------------------------------------------------------------------------

pub(crate) struct DenseLu {
    lu: Vec<Vec<Complex64>>,
    piv: Vec<usize>,
    swaps: usize,
    pub(crate) min_pivot: f64,
    pub(crate) max_entry: f64,
}

pub(crate) fn dense_lu(mut a: Vec<Vec<Complex64>>) -> DenseLu {
    let n = a.len();
    let mut max_entry = 0.0f64;
    for row in &a {
        for v in row {
            max_entry = max_entry.max(v.norm());
        }
    }
    let mut piv = vec![0usize; n];
    let mut swaps = 0usize;
    let mut min_pivot = f64::INFINITY;
    for k in 0..n {
        let mut best = k;
        let mut best_mag = a[k][k].norm();
        for i in k + 1..n {
            let m = a[i][k].norm();
            if m > best_mag {
                best = i;
                best_mag = m;
            }
        }
        piv[k] = best;
        if best != k {
            a.swap(k, best);
            swaps += 1;
        }
        min_pivot = min_pivot.min(best_mag);
        if best_mag == 0.0 {
            continue; // degenerate column; leave zeros, caller must check
        }
        let pivot = a[k][k];
        for i in k + 1..n {
            let l = a[i][k] / pivot;
            a[i][k] = l;
            for j in k + 1..n {
                let t = l * a[k][j];
                a[i][j] -= t;
            }
        }
    }
    DenseLu {
        lu: a,
        piv,
        swaps,
        min_pivot,
        max_entry,
    }
}

impl DenseLu {
    pub(crate) fn is_degenerate(&self) -> bool {
        self.is_degenerate_at_scale(0.0)
    }

    /// Degeneracy relative to max(own entries, an external scale). The external
    /// floor matters for small sections whose entries are themselves the tiny
    /// values under suspicion (e.g. a 1×1 matrix holding a vanishing moment).
    pub(crate) fn is_degenerate_at_scale(&self, scale: f64) -> bool {
        !self.min_pivot.is_finite() || self.min_pivot <= PIVOT_RTOL * self.max_entry.max(scale)
    }

    /// Σ Ln(pivot) plus iπ per odd permutation parity; only meaningful when
    /// the factorization is not degenerate.
    pub(crate) fn lndet(&self) -> Complex64 {
        let mut acc = ZERO;
        for k in 0..self.lu.len() {
            acc += self.lu[k][k].ln();
        }
        if self.swaps % 2 == 1 {
            acc += Complex64::new(0.0, PI);
        }
        acc
    }

    /// Solve A x = b using the stored factorization. All row interchanges
    /// are applied to b up front: the stored L carries the *final* row
    /// order, so interleaving swaps with the column updates would pair
    /// multipliers with entries a later swap still has to move.
    pub(crate) fn solve(&self, b: &[Complex64]) -> Vec<Complex64> {
        let n = self.lu.len();
        let mut x = b.to_vec();
        for k in 0..n {
            x.swap(k, self.piv[k]);
        }
        for k in 0..n {
            let xk = x[k];
            for i in k + 1..n {
                let t = self.lu[i][k] * xk;
                x[i] -= t;
            }
        }
        for k in (0..n).rev() {
            let mut s = x[k];
            for j in k + 1..n {
                s -= self.lu[k][j] * x[j];
            }
            x[k] = s / self.lu[k][k];
        }
        x
    }
}

pub(crate) fn toeplitz_matrix(table: &MomentTable, n: usize) -> Vec<Vec<Complex64>> {
    (0..n)
        .map(|t| {
            (0..n)
                .map(|j| table.coeff(t as i64 - j as i64))
                .collect()
        })
        .collect()
}

/// Shift `im` by a multiple of 2π to land nearest `anchor`.
fn unwind_to(im: f64, anchor: f64) -> f64 {
    im - 2.0 * PI * ((im - anchor) / (2.0 * PI)).round()
}

// ---------------------------------------------------------------------------
// Per-n elimination series.
// ---------------------------------------------------------------------------

/// ln D_n for n = 1..=n by independent dense eliminations, O(Σ n³).
pub fn logdet_series_elimination(
    table: &MomentTable,
    n: usize,
) -> Result<DeterminantSeries, DeterminantError> {
    if n > table.n_max {
        return Err(DeterminantError::NotEnoughMoments {
            needed: n,
            have: table.n_max,
        });
    }
    let scale: f64 = table
        .coeffs
        .values()
        .map(|c| c.norm())
        .fold(0.0f64, f64::max);
    let mut logdet: Vec<Complex64> = Vec::with_capacity(n);
    let mut breakdown_at = None;
    let mut prev_im = 0.0f64;
    for k in 1..=n {
        let lu = dense_lu(toeplitz_matrix(table, k));
        if lu.is_degenerate_at_scale(scale) {
            breakdown_at = Some(k);
            break;
        }
        let mut ld = lu.lndet();
        ld.im = unwind_to(ld.im, prev_im);
        prev_im = ld.im;
        logdet.push(ld);
    }
    let n_max = logdet.len();
    let mut chi_sq = Vec::with_capacity(n_max);
    for k in 0..n_max {
        let prev = if k == 0 { ZERO } else { logdet[k - 1] };
        chi_sq.push((prev - logdet[k]).exp());
    }
    Ok(DeterminantSeries {
        n_max,
        logdet,
        chi_sq,
        method: Method::Elimination,
        breakdown_at,
    })
}

// ---------------------------------------------------------------------------
// Toeplitz recursion series.
// ---------------------------------------------------------------------------

/// ln D_n for n = 1..=n by the classical Toeplitz recursion on the monic
/// polynomial pair (Φ_k, Φ̂_k), O(N²). State per step: h_k = D_{k+1}/D_k and
/// the two coefficient vectors; the update is
///   Φ_{k+1}(z) = z Φ_k(z) − a_k z^k Φ̂_k(1/z),
///   Φ̂_{k+1}(z) = z Φ̂_k(z) − b_k z^k Φ_k(1/z),
///   h_{k+1} = h_k (1 − a_k b_k),
/// with a_k = ⟨Φ_k shifted against f_{−(j+1)}⟩/h_k, b_k the mirror image.
pub fn logdet_series_recursion(
    table: &MomentTable,
    n: usize,
) -> Result<DeterminantSeries, DeterminantError> {
    if n > table.n_max {
        return Err(DeterminantError::NotEnoughMoments {
            needed: n,
            have: table.n_max,
        });
    }
    let scale: f64 = table
        .coeffs
        .values()
        .map(|c| c.norm())
        .fold(0.0f64, f64::max);
    let mut logdet: Vec<Complex64> = Vec::with_capacity(n);
    let mut chi_sq: Vec<Complex64> = Vec::with_capacity(n);
    let mut breakdown_at = None;

    let mut h = table.coeff(0); // h_0 = D_1
    let mut c = vec![ONE]; // Φ_0
    let mut d = vec![ONE]; // Φ̂_0
    for k in 1..=n {
        // D_k = D_{k−1}·h_{k−1}
        if !h.is_finite() || h.norm() <= PIVOT_RTOL * scale {
            breakdown_at = Some(k);
            break;
        }
        let ld = if k == 1 {
            h.ln()
        } else {
            logdet[k - 2] + h.ln()
        };
        logdet.push(ld);
        chi_sq.push(h.inv()); // χ_{k−1}² = D_{k−1}/D_k = 1/h_{k−1}
        if k == n {
            break;
        }
        // reflection coefficients for the step Φ_{k−1} → Φ_k
        let a = c
            .iter()
            .enumerate()
            .map(|(j, cj)| cj * table.coeff(-(j as i64 + 1)))
            .sum::<Complex64>()
            / h;
        let b = d
            .iter()
            .enumerate()
            .map(|(j, dj)| dj * table.coeff(j as i64 + 1))
            .sum::<Complex64>()
            / h;
        if !a.is_finite() || !b.is_finite() || a.norm() > REFLECTION_CAP || b.norm() > REFLECTION_CAP
        {
            breakdown_at = Some(k + 1);
            break;
        }
        let deg = c.len(); // = k
        let mut new_c = vec![ZERO; deg + 1];
        let mut new_d = vec![ZERO; deg + 1];
        for j in 0..=deg {
            let mut cc = if j >= 1 { c[j - 1] } else { ZERO };
            let mut dd = if j >= 1 { d[j - 1] } else { ZERO };
            if j < deg {
                cc -= a * d[deg - 1 - j];
                dd -= b * c[deg - 1 - j];
            }
            new_c[j] = cc;
            new_d[j] = dd;
        }
        c = new_c;
        d = new_d;
        h *= ONE - a * b;
    }
    let n_max = logdet.len();
    Ok(DeterminantSeries {
        n_max,
        logdet,
        chi_sq,
        method: Method::Recursion,
        breakdown_at,
    })
}

// ---------------------------------------------------------------------------
// Heine multi-integral oracle, n ≤ 3.
// ---------------------------------------------------------------------------

/// D_n by its n-fold circle integral
/// (1/(2π)^n n!) ∫…∫ Π_{j<k}|e^{iφ_j}−e^{iφ_k}|² Π_j f(e^{iφ_j}) dφ,
/// for n ∈ {1,2,3}, with the same singularity-aware grid as the moments.
/// The returned value carries an internal refinement check against
/// `tol·max(1,|D_n|)`.
pub fn heine_direct(sym: &FhSymbol, n: usize, tol: f64) -> Result<Complex64, DeterminantError> {
    if !(1..=3).contains(&n) {
        return Err(DeterminantError::UnsupportedOrder { n });
    }
    let anchors = sym.anchors();
    let exps: Vec<f64> = (0..anchors.len())
        .map(|k| sym.endpoint_exponent(k))
        .collect();
    let caps: Vec<bool> = (0..anchors.len())
        .map(|k| sym.endpoint_needs_cap(k))
        .collect();
    let kmax = sym
        .v_coeffs()
        .keys()
        .map(|k| k.unsigned_abs())
        .max()
        .unwrap_or(0) as usize;
    let osc = (n - 1 + kmax).max(1);
    let min_panels = if n == 3 { 6 } else { 16 };

    let eval = |refine: u32| -> Complex64 {
        let grid = circle_grid(&anchors, &exps, &caps, osc, refine, min_panels);
        let gf: Vec<Complex64> = grid
            .iter()
            .map(|nd| sym.eval_offset(nd.anchor, nd.delta) * nd.weight)
            .collect();
        let th: Vec<f64> = grid.iter().map(|nd| nd.theta).collect();
        let m = gf.len();
        let two_pi = 2.0 * PI;
        match n {
            1 => gf.iter().sum::<Complex64>() / two_pi,
            2 => {
                let mut acc = ZERO;
                for i in 0..m {
                    let mut inner = ZERO;
                    for j in 0..m {
                        inner += gf[j] * (2.0 - 2.0 * (th[i] - th[j]).cos());
                    }
                    acc += gf[i] * inner;
                }
                acc / (two_pi * two_pi * 2.0)
            }
            _ => {
                // pairwise |z_i − z_j|² table, then the triple sum
                let mut p = vec![0.0f64; m * m];
                for i in 0..m {
                    for j in 0..m {
                        p[i * m + j] = 2.0 - 2.0 * (th[i] - th[j]).cos();
                    }
                }
                let mut acc = ZERO;
                for i in 0..m {
                    for j in 0..m {
                        let pij = p[i * m + j];
                        if pij == 0.0 {
                            continue;
                        }
                        let gij = gf[i] * gf[j] * pij;
                        let mut inner = ZERO;
                        for k in 0..m {
                            inner += gf[k] * (p[i * m + k] * p[j * m + k]);
                        }
                        acc += gij * inner;
                    }
                }
                acc / (two_pi * two_pi * two_pi * 6.0)
            }
        }
    };

    let coarse = eval(0);
    let fine = eval(1);
    let err = (fine - coarse).norm();
    if err > tol * fine.norm().max(1.0) {
        return Err(DeterminantError::ToleranceNotMet { achieved: err, tol });
    }
    Ok(fine)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::moments::compute_moments;
    use crate::symbol::Singularity;
    use std::collections::BTreeMap;

    const TOL: f64 = 1e-12;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn alpha_one() -> FhSymbol {
        FhSymbol::single(c(1.0, 0.0), ZERO).unwrap()
    }

    fn szego_bessel() -> FhSymbol {
        let mut v = BTreeMap::new();
        v.insert(1, c(0.3, 0.0));
        v.insert(-1, c(0.3, 0.0));
        FhSymbol::new(
            vec![Singularity {
                theta: 0.0,
                alpha: ZERO,
                beta: ZERO,
            }],
            v,
        )
        .unwrap()
    }

    #[test]
    fn identity_symbol_has_zero_logdets() {
        let table = compute_moments(&FhSymbol::identity(), 32, TOL).unwrap();
        for series in [
            logdet_series_elimination(&table, 32).unwrap(),
            logdet_series_recursion(&table, 32).unwrap(),
        ] {
            assert_eq!(series.n_max, 32);
            assert!(series.breakdown_at.is_none());
            for n in 1..=32 {
                assert!(
                    series.logdet_at(n).norm() < 1e-10,
                    "{} at n={n}: {}",
                    series.method,
                    series.logdet_at(n)
                );
            }
            for k in 0..32 {
                assert!((series.chi_sq_at(k) - 1.0).norm() < 1e-10);
            }
        }
    }

    #[test]
    fn tridiagonal_case_counts_integers() {
        // f = 2 − 2cos θ has D_n = n+1 (second-difference matrix).
        let table = compute_moments(&alpha_one(), 64, TOL).unwrap();
        let elim = logdet_series_elimination(&table, 64).unwrap();
        let rec = logdet_series_recursion(&table, 64).unwrap();
        for n in 1..=64usize {
            let want = ((n + 1) as f64).ln();
            assert!(
                (elim.logdet_at(n) - want).norm() < 1e-11 * (1.0 + want),
                "elimination at n={n}"
            );
            assert!(
                (rec.logdet_at(n) - want).norm() < 1e-11 * (1.0 + want),
                "recursion at n={n}"
            );
            // χ_{n−1}² = D_{n−1}/D_n = n/(n+1)
            let want_chi = n as f64 / (n + 1) as f64;
            assert!((rec.chi_sq_at(n - 1) - want_chi).norm() < 1e-11);
        }
    }

    #[test]
    fn methods_agree_on_a_complex_jump_symbol() {
        let sym = FhSymbol::single(ZERO, c(0.0, 0.4)).unwrap();
        let table = compute_moments(&sym, 48, TOL).unwrap();
        let elim = logdet_series_elimination(&table, 48).unwrap();
        let rec = logdet_series_recursion(&table, 48).unwrap();
        for n in 1..=48usize {
            let d = (elim.logdet_at(n) - rec.logdet_at(n)).norm();
            assert!(
                d < 1e-9 * (1.0 + elim.logdet_at(n).norm()),
                "methods differ at n={n} by {d}"
            );
        }
    }

    #[test]
    fn smooth_symbol_reaches_its_szego_limit() {
        // V = 0.3(z+1/z): Σ k V_k V_{−k} = 0.09, approached exponentially.
        let table = compute_moments(&szego_bessel(), 17, TOL).unwrap();
        let series = logdet_series_elimination(&table, 16).unwrap();
        let ld = series.logdet_at(16);
        assert!(
            (ld.re - 0.09).abs() < 1e-6 && ld.im.abs() < 1e-10,
            "ln D_16 = {ld}"
        );
    }

    #[test]
    fn positive_symbols_give_positive_determinants() {
        // real α, imaginary β, conjugate-symmetric V ⇒ f > 0 on the circle
        let mut v = BTreeMap::new();
        v.insert(1, c(0.1, 0.05));
        v.insert(-1, c(0.1, -0.05));
        let sym = FhSymbol::new(
            vec![Singularity {
                theta: 0.0,
                alpha: c(0.3, 0.0),
                beta: c(0.0, 0.4),
            }],
            v,
        )
        .unwrap();
        let table = compute_moments(&sym, 24, TOL).unwrap();
        for series in [
            logdet_series_elimination(&table, 24).unwrap(),
            logdet_series_recursion(&table, 24).unwrap(),
        ] {
            for n in 1..=24 {
                assert!(series.logdet_at(n).im.abs() < 1e-8, "Im ln D_{n} ≠ 0");
                assert!(series.logdet_at(n).exp().re > 0.0);
            }
        }
    }

    #[test]
    fn chi_products_rebuild_the_determinant() {
        let sym = FhSymbol::single(c(0.3, 0.0), c(0.0, 0.4)).unwrap();
        let table = compute_moments(&sym, 20, TOL).unwrap();
        for series in [
            logdet_series_elimination(&table, 20).unwrap(),
            logdet_series_recursion(&table, 20).unwrap(),
        ] {
            for n in 1..=20usize {
                let prod: Complex64 = (0..n).map(|k| series.chi_sq_at(k)).product();
                let rebuilt = prod.inv(); // D_n = Π χ_k^{−2}
                let direct = series.logdet_at(n).exp();
                assert!(
                    (rebuilt - direct).norm() < 1e-9 * direct.norm(),
                    "{} χ-product at n={n}: {rebuilt} vs {direct}",
                    series.method
                );
                // and the stepwise form of the same statement
                let prev = if n == 1 { ZERO } else { series.logdet_at(n - 1) };
                let step = (prev - series.logdet_at(n)).exp();
                assert!((step - series.chi_sq_at(n - 1)).norm() < 1e-10 * step.norm());
            }
        }
    }

    #[test]
    fn frozen_small_determinants_for_a_root_jump_pair() {
        // α = 0.3, β = 0.4i at θ = 0; first four determinants frozen from a
        // 50-digit evaluation of the explicit Toeplitz minors.
        let sym = FhSymbol::single(c(0.3, 0.0), c(0.0, 0.4)).unwrap();
        let table = compute_moments(&sym, 5, TOL).unwrap();
        let series = logdet_series_elimination(&table, 4).unwrap();
        let want = [
            1.323646977507947443,
            1.5152789803813403019,
            1.6550833385859530082,
            1.7668863356533104581,
        ];
        for (n, w) in want.iter().enumerate() {
            let got = series.logdet_at(n + 1).exp();
            assert!(
                (got - w).norm() < 1e-12 * w,
                "D_{} = {got}, expected {w}",
                n + 1
            );
        }
    }

    #[test]
    fn lu_solve_survives_crossing_row_swaps() {
        // Zero diagonal forces a pivot swap at every step, and the swaps
        // cross earlier column updates — the pattern that breaks a solver
        // which interleaves permutations with the forward substitution.
        let a = vec![
            vec![c(0.0, 0.0), c(2.0, 1.0), c(-1.0, 0.5), c(0.3, -0.2)],
            vec![c(1.5, -0.4), c(0.1, 0.0), c(0.7, 0.7), c(-2.0, 0.0)],
            vec![c(-0.6, 0.9), c(0.4, -1.2), c(0.05, 0.0), c(1.1, 0.3)],
            vec![c(2.2, 0.1), c(-0.8, 0.6), c(1.3, -0.9), c(0.0, 0.1)],
        ];
        let lu = dense_lu(a.clone());
        assert!(!lu.is_degenerate());
        for rhs_idx in 0..4 {
            let b: Vec<Complex64> = (0..4)
                .map(|i| if i == rhs_idx { ONE } else { ZERO })
                .collect();
            let x = lu.solve(&b);
            for (i, row) in a.iter().enumerate() {
                let ax: Complex64 = row.iter().zip(&x).map(|(m, v)| m * v).sum();
                assert!(
                    (ax - b[i]).norm() < 1e-12,
                    "residual row {i}, rhs e_{rhs_idx}: {:e}",
                    (ax - b[i]).norm()
                );
            }
        }
    }

    #[test]
    fn vanishing_leading_minor_is_flagged_not_interpolated() {
        // β = 1 at θ = 0 gives f_k = −δ_{k,1}: every leading minor vanishes.
        let sym = FhSymbol::single(ZERO, c(1.0, 0.0)).unwrap();
        let table = compute_moments(&sym, 8, TOL).unwrap();
        let elim = logdet_series_elimination(&table, 8).unwrap();
        assert_eq!(elim.breakdown_at, Some(1));
        assert_eq!(elim.n_max, 0);
        assert!(elim.logdet.is_empty());
        let rec = logdet_series_recursion(&table, 8).unwrap();
        assert_eq!(rec.breakdown_at, Some(1));
        assert_eq!(rec.n_max, 0);
    }

    #[test]
    fn series_respects_the_moment_range() {
        let table = compute_moments(&FhSymbol::identity(), 4, TOL).unwrap();
        assert!(matches!(
            logdet_series_elimination(&table, 5),
            Err(DeterminantError::NotEnoughMoments { needed: 5, have: 4 })
        ));
        assert!(logdet_series_recursion(&table, 4).is_ok());
    }

    #[test]
    fn heine_integral_matches_known_small_determinants() {
        // identity, n = 2 → 1
        let id2 = heine_direct(&FhSymbol::identity(), 2, 1e-9).unwrap();
        assert!((id2 - 1.0).norm() < 1e-9, "identity D_2 = {id2}");
        // α = 1, n = 2 → det [[2, −1], [−1, 2]] = 3
        let a2 = heine_direct(&alpha_one(), 2, 1e-9).unwrap();
        assert!((a2 - 3.0).norm() < 1e-8, "D_2 = {a2}");
        // smooth V, n = 1 → I_0(0.6)
        let s1 = heine_direct(&szego_bessel(), 1, 1e-9).unwrap();
        assert!((s1 - 1.0920453643173395).norm() < 1e-9, "D_1 = {s1}");
        // n = 3 against the recursion on the smooth symbol
        let s3 = heine_direct(&szego_bessel(), 3, 1e-7).unwrap();
        let table = compute_moments(&szego_bessel(), 4, TOL).unwrap();
        let want = logdet_series_recursion(&table, 3).unwrap().logdet_at(3).exp();
        assert!(
            (s3 - want).norm() < 1e-7 * want.norm(),
            "triple integral {s3} vs series {want}"
        );
        // unsupported order
        assert!(matches!(
            heine_direct(&FhSymbol::identity(), 4, 1e-9),
            Err(DeterminantError::UnsupportedOrder { n: 4 })
        ));
    }

    #[test]
    fn csv_rows_pair_each_order_with_its_ratio() {
        let table = compute_moments(&alpha_one(), 4, TOL).unwrap();
        let series = logdet_series_recursion(&table, 3).unwrap();
        let csv = series.to_csv();
        let lines: Vec<&str> = csv.trim_end().lines().collect();
        assert_eq!(lines[0], "n,logdet_re,logdet_im,chi_sq_re,chi_sq_im,method");
        assert_eq!(lines.len(), 4);
        assert!(lines[1].starts_with("1,"));
        assert!(lines[1].ends_with(",recursion"));
        // row 1 pairs ln D_1 = ln 2 with χ_0² = 1/2
        let fields: Vec<&str> = lines[1].split(',').collect();
        let ld: f64 = fields[1].parse().unwrap();
        let ch: f64 = fields[3].parse().unwrap();
        assert!((ld - 2.0f64.ln()).abs() < 1e-12);
        assert!((ch - 0.5).abs() < 1e-12);
    }
}
