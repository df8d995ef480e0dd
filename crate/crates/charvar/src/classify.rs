//! Reducibility, Ad-reducibility, stabilizer type, and the smooth/singular
//! verdict of a character.
//!
//! The primary decision procedure for both reducibility questions is a
//! span-closure (Burnside) test: close the linear span of the identity
//! under left multiplication by the generator images inside the full
//! matrix space. An irreducible family of 2×2 matrices generates all of
//! M₂ as an algebra, so the image is reducible exactly when the closed
//! span stays below dimension 4; likewise the adjoint images act
//! irreducibly on sl₂ exactly when their closure fills the 9-dimensional
//! space of 3×3 matrices. Inverses come for free: a determinant-1 matrix
//! satisfies A⁻¹ = tr(A)·Id − A, which already lies in the span.
//!
//! Both verdicts also have independent cross-check oracles (a common
//! eigenvector search, and central values on sampled double commutators)
//! used by the test suites.

use crate::mat2::{adjoint_so3, psl2_equal, Mat2, Mat3, PSL2Elt};
use crate::rep::Representation;
use crate::words::{commutator, Word};
use nalgebra::DVector;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

/// The stabilizer of a representation under conjugation, up to the cases
/// the classification distinguishes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum StabilizerType {
    FullGroup,
    DiagonalTorus,
    OrderTwo,
    Klein4,
    Trivial,
}

/// Whether the character is a smooth point of the character variety of a
/// free group; NotApplicable outside the free case.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum SingularVerdict {
    Smooth,
    Singular,
    NotApplicable,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClassificationReport {
    pub reducible: bool,
    pub ad_reducible: bool,
    pub is_trivial_character: bool,
    pub klein4_image: bool,
    pub stabilizer_type: StabilizerType,
    pub singular_verdict: SingularVerdict,
}

/// Dimension of the smallest subspace of d×d matrices containing Id and
/// closed under left multiplication by every generator; this is the
/// algebra generated by the generators.
///
/// Gram–Schmidt with re-orthogonalization; a candidate joins the basis
/// when its residual exceeds `rank_rel` times its own norm.
fn span_closure_dim(gens: &[Vec<Complex64>], d: usize, rank_rel: f64) -> usize {
    let full = d * d;
    let mut basis: Vec<DVector<Complex64>> = Vec::new();
    let mut queue: Vec<DVector<Complex64>> = Vec::new();

    let mut identity = DVector::zeros(full);
    for i in 0..d {
        identity[i * d + i] = Complex64::ONE;
    }
    queue.push(identity);

    // Left multiplication: (G·M)[i][j] = Σ_k G[i][k]·M[k][j], row-major.
    let left_mul = |g: &Vec<Complex64>, m: &DVector<Complex64>| -> DVector<Complex64> {
        let mut out = DVector::zeros(full);
        for i in 0..d {
            for j in 0..d {
                let mut acc = Complex64::ZERO;
                for k in 0..d {
                    acc += g[i * d + k] * m[k * d + j];
                }
                out[i * d + j] = acc;
            }
        }
        out
    };

    while let Some(v) = queue.pop() {
        let scale = v.norm();
        if scale == 0.0 {
            continue;
        }
        let mut r = v.clone();
        // Two rounds of projection keep the basis orthonormal to roundoff.
        for _ in 0..2 {
            for q in &basis {
                let coeff = q.dotc(&r);
                r.axpy(-coeff, q, Complex64::ONE);
            }
        }
        if r.norm() <= rank_rel * scale {
            continue;
        }
        let r = r.normalize();
        basis.push(r);
        if basis.len() == full {
            return full;
        }
        // Every element of the closed span is a combination of accepted
        // representatives, so multiplying only the new one suffices.
        for g in gens {
            queue.push(left_mul(g, &v));
        }
    }
    basis.len()
}

fn mat2_flat(m: &Mat2) -> Vec<Complex64> {
    vec![m.a, m.b, m.c, m.d]
}

fn mat3_flat(m: &Mat3) -> Vec<Complex64> {
    // nalgebra stores column-major; emit row-major.
    (0..3)
        .flat_map(|i| (0..3).map(move |j| m[(i, j)]))
        .collect()
}

/// True iff the images preserve a common line in C²: span closure of the
/// generator algebra inside M₂ stays below dimension 4.
pub fn is_reducible(rho: &Representation) -> bool {
    let gens: Vec<Vec<Complex64>> = rho.images().iter().map(|g| mat2_flat(&g.rep)).collect();
    span_closure_dim(&gens, 2, rho.tol().rank_rel) < 4
}

/// True iff the adjoint images preserve a proper subspace of sl₂: span
/// closure inside the 3×3 matrices stays below dimension 9.
pub fn is_ad_reducible(rho: &Representation) -> bool {
    let gens: Vec<Vec<Complex64>> = rho
        .images()
        .iter()
        .map(|g| mat3_flat(&adjoint_so3(g)))
        .collect();
    span_closure_dim(&gens, 3, rho.tol().rank_rel) < 9
}

/// Cross-check for [`is_reducible`]: if every image is ±Id any line works;
/// otherwise each eigenline of some non-central image is tested for
/// invariance under all images.
pub fn reducible_fixed_point_oracle(rho: &Representation) -> bool {
    let eps = rho.tol().eps_eq;
    let id = PSL2Elt::identity();
    let Some(pivot) = rho.images().iter().find(|g| !psl2_equal(g, &id, eps)) else {
        return true;
    };
    eigenlines(&pivot.rep)
        .iter()
        .any(|line| rho.images().iter().all(|g| fixes_line(&g.rep, line)))
}

/// Eigenvector candidates of a det-1 matrix (one line for parabolic, two
/// otherwise).
fn eigenlines(m: &Mat2) -> Vec<[Complex64; 2]> {
    let t = m.trace();
    let disc = (t * t - Complex64::new(4.0, 0.0)).sqrt();
    let mut lines = Vec::new();
    for sign in [1.0, -1.0] {
        let lambda = (t + sign * disc) / 2.0;
        // (A - λ) kills (b, λ - a) and (λ - d, c); pick the better-scaled one.
        let v1 = [m.b, lambda - m.a];
        let v2 = [lambda - m.d, m.c];
        let n1 = v1[0].norm() + v1[1].norm();
        let n2 = v2[0].norm() + v2[1].norm();
        let v = if n1 >= n2 { v1 } else { v2 };
        let n = n1.max(n2);
        if n > 1e-12 {
            lines.push([v[0] / n, v[1] / n]);
        }
    }
    lines
}

fn fixes_line(g: &Mat2, v: &[Complex64; 2]) -> bool {
    let w = [g.a * v[0] + g.b * v[1], g.c * v[0] + g.d * v[1]];
    // Parallel iff the 2×2 determinant |w v| vanishes.
    let cross = w[0] * v[1] - w[1] * v[0];
    cross.norm() <= 1e-8 * g.norm_inf().max(1.0)
}

/// A finite sample of words from the second derived subgroup: commutators
/// of pairs drawn from the generator commutators and their conjugates.
///
/// The conjugates matter: at rank 2 there is only one generator
/// commutator c = [a,b], and [c, c] = 1, while [c, a·c·a⁻¹] is a
/// genuinely nontrivial word of the second derived subgroup.
pub fn gamma_second_sample(rank: usize) -> Vec<Word> {
    let mut layer: Vec<Word> = Vec::new();
    for i in 0..rank {
        for j in i + 1..rank {
            let c = commutator(&Word::generator(i), &Word::generator(j));
            for k in 0..rank.min(2) {
                let g = Word::generator(k);
                layer.push(g.concat(&c).concat(&g.inverse()));
            }
            layer.push(c);
        }
    }
    let mut sample = Vec::new();
    for (i, u) in layer.iter().enumerate() {
        for v in layer.iter().skip(i + 1) {
            let w = commutator(u, v);
            if !w.is_empty() {
                sample.push(w);
            }
        }
    }
    sample
}

/// Cross-check for [`is_ad_reducible`]: a metabelian image sends the whole
/// second derived subgroup to ±Id, so any sampled double commutator
/// landing elsewhere certifies Ad-irreducibility.
pub fn ad_reducible_central_oracle(rho: &Representation) -> bool {
    let eps = rho.tol().eps_eq;
    let id = PSL2Elt::identity();
    gamma_second_sample(rho.rank())
        .iter()
        .all(|w| psl2_equal(&rho.evaluate(w), &id, eps))
}

/// Enumerates the image subgroup in the sign quotient by breadth-first
/// products, up to `cap` elements; None means the cap was exceeded.
pub fn enumerate_image(rho: &Representation, cap: usize) -> Option<Vec<PSL2Elt>> {
    let eps = rho.tol().eps_eq;
    let mut elements: Vec<PSL2Elt> = vec![PSL2Elt::identity()];
    let mut frontier: Vec<PSL2Elt> = vec![PSL2Elt::identity()];
    while let Some(e) = frontier.pop() {
        for g in rho.images() {
            let candidate = e.mul(g);
            if elements.iter().any(|known| psl2_equal(known, &candidate, eps)) {
                continue;
            }
            if elements.len() >= cap {
                return None;
            }
            elements.push(candidate);
            frontier.push(candidate);
        }
    }
    Some(elements)
}

fn all_images_central(rho: &Representation) -> bool {
    let id = PSL2Elt::identity();
    rho.images()
        .iter()
        .all(|g| psl2_equal(g, &id, rho.tol().eps_eq))
}

fn image_is_klein4(rho: &Representation) -> bool {
    let Some(elements) = enumerate_image(rho, 8) else {
        return false;
    };
    let id = PSL2Elt::identity();
    let eps = rho.tol().eps_eq;
    elements.len() == 4
        && elements
            .iter()
            .all(|e| psl2_equal(&e.mul(e), &id, eps))
}

/// Case analysis for the conjugation stabilizer. Order of the tests
/// matters: centrality first, then Ad-irreducibility, then the
/// irreducible-but-Ad-reducible split by image order, and finally the
/// reducible bucket.
///
/// Reducible non-central images whose stabilizer is strictly larger than
/// the diagonal torus (parabolic images, or a single involution class,
/// where extra antidiagonal elements stabilize) are still reported as
/// DiagonalTorus — the classification keys on the connected component.
pub fn stabilizer_type(rho: &Representation) -> StabilizerType {
    if all_images_central(rho) {
        return StabilizerType::FullGroup;
    }
    if !is_ad_reducible(rho) {
        return StabilizerType::Trivial;
    }
    if !is_reducible(rho) {
        if image_is_klein4(rho) {
            return StabilizerType::Klein4;
        }
        return StabilizerType::OrderTwo;
    }
    StabilizerType::DiagonalTorus
}

/// Smooth/singular verdict for characters of free groups.
///
/// Rank ≥ 3: singular exactly at Ad-reducible characters. Rank 2: the
/// reducible locus is smooth (it sits inside the smooth surface W² = XYZ
/// minus nothing), and only irreducible-but-Ad-reducible characters are
/// singular. Rank ≤ 1: a line, smooth everywhere. Non-free presentations
/// get NotApplicable.
pub fn singular_verdict(rho: &Representation) -> SingularVerdict {
    if !rho.presentation().is_free() {
        return SingularVerdict::NotApplicable;
    }
    let n = rho.rank();
    if n <= 1 {
        return SingularVerdict::Smooth;
    }
    let ad_red = is_ad_reducible(rho);
    let singular = if n == 2 {
        ad_red && !is_reducible(rho)
    } else {
        ad_red
    };
    if singular {
        SingularVerdict::Singular
    } else {
        SingularVerdict::Smooth
    }
}

/// Runs the full classification.
pub fn classify(rho: &Representation) -> ClassificationReport {
    let reducible = is_reducible(rho);
    let ad_reducible = is_ad_reducible(rho);
    ClassificationReport {
        reducible,
        ad_reducible,
        is_trivial_character: all_images_central(rho),
        klein4_image: image_is_klein4(rho),
        stabilizer_type: stabilizer_type(rho),
        singular_verdict: singular_verdict(rho),
    }
}
