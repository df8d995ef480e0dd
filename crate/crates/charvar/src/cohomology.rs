//! Twisted cohomology of a presented group acting on sl₂ through the
//! adjoint of a representation.
//!
//! A 1-cocycle assigns θ(g_i) ∈ sl₂ ≅ C³ to each generator; the cocycle
//! rule θ(uv) = θ(u) + Ad_{ρ(u)}·θ(v) extends it along words, and each
//! relator imposes θ(r) = 0. Walking a relator therefore produces one
//! 3×3 coefficient block per generator, and Z¹ is the null space of the
//! stacked system. Coboundaries are the image of sl₂ under
//! a ↦ (Ad_{ρ(g_i)}·a − a)_i, and H¹ = Z¹/B¹ measures deformations of
//! the representation modulo conjugation — by Weil's observation Z¹ is
//! the Zariski tangent space of the representation variety.
//!
//! When every generator image is diagonal or antidiagonal, the adjoint
//! matrices preserve the splitting sl₂ = ⟨h₀⟩ ⊕ ⟨h₊, h₋⟩ (in the basis
//! order fixed by the matrix module), and all three dimensions split into
//! block contributions, reported separately.

use crate::linalg;
use crate::mat2::{adjoint_so3, Mat2, Mat3};
use crate::rep::Representation;
use crate::words::Word;
use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use serde::Serialize;
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum CohomologyError {
    #[error("tangent dimension bookkeeping is only validated for free presentations")]
    NotFree,
}

/// Per-block (Z¹, B¹, H¹) dimensions when the image preserves the
/// diagonal/antidiagonal splitting of sl₂.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct BlockDims {
    pub h0: (usize, usize, usize),
    pub hplus_hminus: (usize, usize, usize),
}

/// Dimension counts with the singular values of the cocycle system kept
/// for auditing borderline rank decisions.
#[derive(Debug, Clone, Serialize)]
pub struct CocycleReport {
    pub dim_z1: usize,
    pub dim_b1: usize,
    pub dim_h1: usize,
    pub singular_values: Vec<f64>,
    pub block_dims: Option<BlockDims>,
}

/// Weil tangent-space dimensions at a representation of a free group.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct TangentDims {
    /// Tangent dimension of the representation variety: dim Z¹ = 3n.
    pub dim_r: usize,
    /// Expected character-variety dimension dim R − 3.
    pub dim_x_expected: usize,
    /// The −3 bookkeeping assumes a trivial stabilizer; false flags
    /// representations (reducible or Ad-reducible) where it is invalid.
    pub applicable: bool,
}

fn adjoint_generator_blocks(rho: &Representation) -> (Vec<DMatrix<Complex64>>, Vec<DMatrix<Complex64>>) {
    let to_dmatrix = |m: &Mat3| DMatrix::from_fn(3, 3, |i, j| m[(i, j)]);
    let fwd = rho
        .images()
        .iter()
        .map(|g| to_dmatrix(&adjoint_so3(g)))
        .collect();
    let inv = rho
        .images()
        .iter()
        .map(|g| to_dmatrix(&adjoint_so3(&g.inverse())))
        .collect();
    (fwd, inv)
}

/// Coefficient blocks of θ(r) as a linear map C^{d·s} → C^d, stacked over
/// all relators into a (d·k) × (d·s) system.
fn cocycle_system(
    fwd: &[DMatrix<Complex64>],
    inv: &[DMatrix<Complex64>],
    relators: &[Word],
    d: usize,
) -> DMatrix<Complex64> {
    let s = fwd.len();
    let mut system = DMatrix::zeros(d * relators.len(), d * s);
    for (j, r) in relators.iter().enumerate() {
        let mut coeffs: Vec<DMatrix<Complex64>> = vec![DMatrix::zeros(d, d); s];
        let mut prefix = DMatrix::identity(d, d);
        for l in r.letters() {
            if l.exp > 0 {
                coeffs[l.gen] += &prefix;
                prefix = &prefix * &fwd[l.gen];
            } else {
                // θ(g⁻¹) = −Ad_{ρ(g)}⁻¹·θ(g), picked up at the shifted prefix.
                prefix = &prefix * &inv[l.gen];
                coeffs[l.gen] -= &prefix;
            }
        }
        for (i, block) in coeffs.iter().enumerate() {
            system.view_mut((j * d, i * d), (d, d)).copy_from(block);
        }
    }
    system
}

/// Stacked (Ad_i − I) blocks: the map sl₂ → C^{d·s} whose image is B¹.
fn coboundary_matrix(fwd: &[DMatrix<Complex64>], d: usize) -> DMatrix<Complex64> {
    let s = fwd.len();
    let mut m = DMatrix::zeros(d * s, d);
    let id = DMatrix::<Complex64>::identity(d, d);
    for (i, g) in fwd.iter().enumerate() {
        m.view_mut((i * d, 0), (d, d)).copy_from(&(g - &id));
    }
    m
}

fn dims_for(
    fwd: &[DMatrix<Complex64>],
    inv: &[DMatrix<Complex64>],
    relators: &[Word],
    d: usize,
    rank_rel: f64,
) -> (usize, usize, Vec<f64>) {
    let s = fwd.len();
    let (dim_z1, singular_values) = if relators.is_empty() {
        (d * s, Vec::new())
    } else {
        let system = cocycle_system(fwd, inv, relators, d);
        let sv = linalg::singular_values(&system);
        let z = d * s - linalg::rank_from_singular_values(&sv, rank_rel);
        (z, sv)
    };
    let dim_b1 = linalg::rank(&coboundary_matrix(fwd, d), rank_rel);
    (dim_z1, dim_b1, singular_values)
}

/// Basis of the cocycle space Z¹ ⊂ C^{3s} together with the singular
/// values of the constraint system (empty for free groups, where every
/// assignment is a cocycle).
pub fn cocycle_space(rho: &Representation) -> (Vec<DVector<Complex64>>, Vec<f64>) {
    let (fwd, inv) = adjoint_generator_blocks(rho);
    let relators = rho.presentation().relators();
    let s = rho.rank();
    if relators.is_empty() {
        let basis = (0..3 * s)
            .map(|i| {
                let mut v = DVector::zeros(3 * s);
                v[i] = Complex64::ONE;
                v
            })
            .collect();
        return (basis, Vec::new());
    }
    let system = cocycle_system(&fwd, &inv, relators, 3);
    let sv = linalg::singular_values(&system);
    let basis = linalg::null_space(&system, rho.tol().rank_rel);
    (basis, sv)
}

/// Basis of the coboundary space B¹ ⊂ C^{3s}.
pub fn coboundary_space(rho: &Representation) -> Vec<DVector<Complex64>> {
    let (fwd, _) = adjoint_generator_blocks(rho);
    linalg::column_space(&coboundary_matrix(&fwd, 3), rho.tol().rank_rel)
}

/// Largest violation of the relator constraints by a candidate cocycle
/// vector θ ∈ C^{3s}; zero (up to rounding) exactly on Z¹. Free
/// presentations have no constraints, so the residual is 0.
pub fn cocycle_residual(rho: &Representation, theta: &DVector<Complex64>) -> f64 {
    let relators = rho.presentation().relators();
    if relators.is_empty() {
        return 0.0;
    }
    let (fwd, inv) = adjoint_generator_blocks(rho);
    let system = cocycle_system(&fwd, &inv, relators, 3);
    (&system * theta).iter().map(|z| z.norm()).fold(0.0, f64::max)
}

/// True iff every image is diagonal or antidiagonal, so the adjoint
/// action preserves the ⟨h₀⟩ ⊕ ⟨h₊,h₋⟩ splitting.
fn preserves_splitting(rho: &Representation) -> bool {
    rho.images().iter().all(|g| {
        let m = g.rep;
        let scale = m.norm_inf().max(1.0);
        let eps = rho.tol().eps_eq * scale;
        let diagonal = m.b.norm() <= eps && m.c.norm() <= eps;
        let antidiagonal = m.a.norm() <= eps && m.d.norm() <= eps;
        diagonal || antidiagonal
    })
}

fn block_of(m: &DMatrix<Complex64>, which: Block) -> DMatrix<Complex64> {
    match which {
        Block::H0 => m.view((0, 0), (1, 1)).into_owned(),
        Block::Hpm => m.view((1, 1), (2, 2)).into_owned(),
    }
}

#[derive(Clone, Copy)]
enum Block {
    H0,
    Hpm,
}

/// Full dimension report; fills `block_dims` when the image preserves
/// the splitting.
pub fn h1_dim(rho: &Representation) -> CocycleReport {
    let (fwd, inv) = adjoint_generator_blocks(rho);
    let relators = rho.presentation().relators();
    let rank_rel = rho.tol().rank_rel;
    let (dim_z1, dim_b1, singular_values) = dims_for(&fwd, &inv, relators, 3, rank_rel);

    let block_dims = preserves_splitting(rho).then(|| {
        let mut per_block = [(0usize, 0usize, 0usize); 2];
        for (slot, which) in [(0, Block::H0), (1, Block::Hpm)] {
            let bf: Vec<DMatrix<Complex64>> =
                fwd.iter().map(|m| block_of(m, which)).collect();
            let bi: Vec<DMatrix<Complex64>> =
                inv.iter().map(|m| block_of(m, which)).collect();
            let d = match which {
                Block::H0 => 1,
                Block::Hpm => 2,
            };
            let (z, b, _) = dims_for(&bf, &bi, relators, d, rank_rel);
            per_block[slot] = (z, b, z - b);
        }
        BlockDims {
            h0: per_block[0],
            hplus_hminus: per_block[1],
        }
    });

    CocycleReport {
        dim_z1,
        dim_b1,
        dim_h1: dim_z1 - dim_b1,
        singular_values,
        block_dims,
    }
}

/// Weil bookkeeping for free groups: the representation variety is smooth
/// of dimension dim Z¹ = 3n, and the expected character dimension drops
/// by the 3-dimensional conjugation orbit. Returns an error on non-free
/// presentations; on reducible or Ad-reducible inputs the numbers are
/// still reported with `applicable` set to false.
pub fn tangent_dims(rho: &Representation) -> Result<TangentDims, CohomologyError> {
    if !rho.presentation().is_free() {
        return Err(CohomologyError::NotFree);
    }
    let report = h1_dim(rho);
    let applicable =
        !crate::classify::is_reducible(rho) && !crate::classify::is_ad_reducible(rho);
    Ok(TangentDims {
        dim_r: report.dim_z1,
        dim_x_expected: report.dim_z1.saturating_sub(3),
        applicable,
    })
}

/// Degree-2 truncation of the matrix exponential of t·θ for θ ∈ sl₂
/// given in (h₀, h₊, h₋) coordinates.
pub fn exp_truncated(theta: &[Complex64; 3], t: f64) -> Mat2 {
    let m = Mat2::new(theta[0], theta[1], theta[2], -theta[0]);
    let tm = Mat2::new(t * m.a, t * m.b, t * m.c, t * m.d);
    let sq = tm * tm;
    Mat2::new(
        Complex64::ONE + tm.a + 0.5 * sq.a,
        tm.b + 0.5 * sq.b,
        tm.c + 0.5 * sq.c,
        Complex64::ONE + tm.d + 0.5 * sq.d,
    )
}

/// Perturbs each generator image by the cocycle direction θ (a stacked
/// vector in C^{3s}): g_i ↦ exp(t·θ_i)·ρ(g_i). The result is generally
/// not determinant-1 to machine precision; it is meant for
/// finite-difference checks only.
pub fn perturbed_images(rho: &Representation, theta: &DVector<Complex64>, t: f64) -> Vec<Mat2> {
    rho.images()
        .iter()
        .enumerate()
        .map(|(i, g)| {
            let th = [theta[3 * i], theta[3 * i + 1], theta[3 * i + 2]];
            exp_truncated(&th, t) * g.rep
        })
        .collect()
}

/// Largest relator defect of a tuple of candidate images, measured in the
/// sign quotient (distance to the nearer of ±Id).
pub fn relator_defect(rho: &Representation, images: &[Mat2]) -> f64 {
    let evaluate = |w: &Word| -> Mat2 {
        let mut out = Mat2::identity();
        for l in w.letters() {
            let g = images[l.gen];
            out = out * if l.exp > 0 { g } else { g.inverse() };
        }
        out
    };
    let id = Mat2::identity();
    rho.presentation()
        .relators()
        .iter()
        .map(|r| {
            let v = evaluate(r);
            (v - id).norm_inf().min((v + id).norm_inf())
        })
        .fold(0.0, f64::max)
}

/// CSV header for dimension sweeps.
pub const CSV_HEADER: &str = "rank,class,dim_z1,dim_b1,dim_h1,h0_block,hpm_block";

/// One CSV row matching [`CSV_HEADER`]; block columns are empty when the
/// image does not preserve the splitting.
pub fn csv_row(rank: usize, class: &str, report: &CocycleReport) -> String {
    let (h0, hpm) = match report.block_dims {
        Some(b) => (b.h0.2.to_string(), b.hplus_hminus.2.to_string()),
        None => (String::new(), String::new()),
    };
    format!(
        "{},{},{},{},{},{},{}",
        rank, class, report.dim_z1, report.dim_b1, report.dim_h1, h0, hpm
    )
}
