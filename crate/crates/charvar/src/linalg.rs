//! Numeric rank, null spaces and column spaces of complex matrices via
//! singular-value thresholding.
//!
//! Everything downstream (span-closure tests, conjugator search, cocycle
//! spaces) funnels through these helpers so the rank convention is set in
//! exactly one place: singular values at or below
//! `rel_tol * max(sigma_max, 1)` count as zero. The unit-scale floor keeps
//! matrices that are numerically zero (all entries at rounding level) from
//! being ranked relative to their own noise.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

/// Singular values of `m`, largest first.
pub fn singular_values(m: &DMatrix<Complex64>) -> Vec<f64> {
    if m.nrows() == 0 || m.ncols() == 0 {
        return Vec::new();
    }
    let svd = m.clone().svd(false, false);
    let mut sv: Vec<f64> = svd.singular_values.iter().copied().collect();
    sv.sort_by(|a, b| b.partial_cmp(a).unwrap());
    sv
}

/// Numeric rank: the number of singular values above the threshold.
pub fn rank(m: &DMatrix<Complex64>, rel_tol: f64) -> usize {
    let sv = singular_values(m);
    rank_from_singular_values(&sv, rel_tol)
}

fn threshold(sv: &[f64], rel_tol: f64) -> f64 {
    let smax = sv.first().copied().unwrap_or(0.0);
    rel_tol * smax.max(1.0)
}

/// Rank count on an already-computed, descending singular value list.
pub fn rank_from_singular_values(sv: &[f64], rel_tol: f64) -> usize {
    let cut = threshold(sv, rel_tol);
    sv.iter().filter(|&&s| s > cut).count()
}

/// Orthonormal basis of the null space of `m` (right singular vectors for
/// singular values at or below the threshold).
pub fn null_space(m: &DMatrix<Complex64>, rel_tol: f64) -> Vec<DVector<Complex64>> {
    let n = m.ncols();
    if n == 0 {
        return Vec::new();
    }
    if m.nrows() == 0 {
        // No constraints: the whole space.
        return (0..n)
            .map(|j| DVector::from_fn(n, |i, _| if i == j { Complex64::new(1.0, 0.0) } else { Complex64::new(0.0, 0.0) }))
            .collect();
    }
    let svd = m.clone().svd(false, true);
    let v_t = svd.v_t.expect("requested V^t");
    let sv = &svd.singular_values;
    let smax = sv.iter().cloned().fold(0.0f64, f64::max);
    let cut = rel_tol * smax.max(1.0);
    let mut basis = Vec::new();
    // Rows of V^t beyond the stored singular values also span null directions
    // when nrows < ncols; nalgebra returns min(nrows, ncols) of them, so pad
    // with the orthogonal complement if needed.
    for (k, &s) in sv.iter().enumerate() {
        if s <= cut {
            basis.push(v_t.row(k).transpose().map(|z| z.conj()));
        }
    }
    if v_t.nrows() < n {
        // Wide matrix: complete V^t rows to a full basis and keep the extras.
        let extra = complete_orthonormal(&v_t);
        basis.extend(extra);
    }
    basis
}

/// Orthonormal basis of the column space of `m`.
pub fn column_space(m: &DMatrix<Complex64>, rel_tol: f64) -> Vec<DVector<Complex64>> {
    if m.nrows() == 0 || m.ncols() == 0 {
        return Vec::new();
    }
    let svd = m.clone().svd(true, false);
    let u = svd.u.expect("requested U");
    let sv = &svd.singular_values;
    let smax = sv.iter().cloned().fold(0.0f64, f64::max);
    let cut = rel_tol * smax.max(1.0);
    let mut basis = Vec::new();
    for (k, &s) in sv.iter().enumerate() {
        if s > cut {
            basis.push(u.column(k).into_owned());
        }
    }
    basis
}

/// Vectors orthogonal to all rows of `v_t`, completing them to a basis of
/// the ambient space. `v_t` rows are assumed orthonormal.
fn complete_orthonormal(v_t: &DMatrix<Complex64>) -> Vec<DVector<Complex64>> {
    let n = v_t.ncols();
    let mut held: Vec<DVector<Complex64>> = (0..v_t.nrows())
        .map(|k| v_t.row(k).transpose().map(|z| z.conj()))
        .collect();
    let mut extra = Vec::new();
    for j in 0..n {
        let mut cand = DVector::from_fn(n, |i, _| {
            if i == j {
                Complex64::new(1.0, 0.0)
            } else {
                Complex64::new(0.0, 0.0)
            }
        });
        // Gram-Schmidt against everything held so far.
        for b in &held {
            let coeff = b.dotc(&cand);
            cand -= b * coeff;
        }
        let norm = cand.norm();
        if norm > 1e-6 {
            let cand = cand / Complex64::new(norm, 0.0);
            held.push(cand.clone());
            extra.push(cand);
        }
        if held.len() == n {
            break;
        }
    }
    extra
}
