//! A one-parameter family of torus-bundle group representations whose
//! characters never lift to SL(2,C).
//!
//! The group is the mapping torus of an automorphism of Z²: generators
//! (α, β, μ) with μ acting by α ↦ αβ^{m₂}, β ↦ β(αβ^{m₂})^{m₁}. For even
//! m₁, m₂ and odd p₁, p₂ the assignment
//!
//! ```text
//! α ↦ A = [[a, 1], [0, a⁻¹]]   a = exp(iπ·p₁/m₁)
//! β ↦ B = [[b, 0], [c, b⁻¹]]   b = exp(iπ·p₂/m₂)
//! μ ↦ Id
//! ```
//!
//! satisfies both relators up to sign (−Id exactly, since A^{m₁} and
//! B^{m₂} are −Id by the root-of-unity eigenvalues), so it defines a
//! PSL₂ representation that is *not* liftable: both relators have zero
//! exponent-sum vectors mod 2, leaving the sign obstruction (1, 1)
//! unfixable. The off-diagonal entry c is the one knob left, chosen so
//! tr(AB) = z; sweeping z traces a curve of characters, and different
//! admissible (p₁, p₂) land on different curves because τ_α = 4cos²(πp₁/m₁)
//! and τ_β = 4cos²(πp₂/m₂) are locally constant invariants.

use crate::lift;
use crate::mat2::Mat2;
use crate::rep::{Flavor, RelatorSign, Representation};
use crate::words::{Presentation, Word};
use crate::Tolerances;
use num_complex::Complex64;
use serde::Serialize;
use std::f64::consts::PI;
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum FamilyError {
    #[error("m{which} = {value} must be a positive even integer")]
    BadModulus { which: u8, value: i64 },
    #[error("p{which} = {value} must be odd with 1 <= p{which} <= m{which}/2 = {half}")]
    BadTwist { which: u8, value: i64, half: i64 },
}

/// Parameters of one family member: moduli (m₁, m₂), twists (p₁, p₂) and
/// the trace coordinate z = tr(AB).
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct FamilyParams {
    pub m1: u32,
    pub m2: u32,
    pub p1: u32,
    pub p2: u32,
    pub z: Complex64,
}

fn check_modulus(which: u8, m: u32) -> Result<(), FamilyError> {
    if m == 0 || !m.is_multiple_of(2) {
        return Err(FamilyError::BadModulus { which, value: m as i64 });
    }
    Ok(())
}

fn check_twist(which: u8, p: u32, m: u32) -> Result<(), FamilyError> {
    if p.is_multiple_of(2) || p < 1 || p > m / 2 {
        return Err(FamilyError::BadTwist {
            which,
            value: p as i64,
            half: (m / 2) as i64,
        });
    }
    Ok(())
}

impl FamilyParams {
    pub fn new(m1: u32, m2: u32, p1: u32, p2: u32, z: Complex64) -> Result<Self, FamilyError> {
        check_modulus(1, m1)?;
        check_modulus(2, m2)?;
        check_twist(1, p1, m1)?;
        check_twist(2, p2, m2)?;
        Ok(FamilyParams { m1, m2, p1, p2, z })
    }
}

/// Odd twists 1 ≤ p ≤ m/2, in increasing order.
fn admissible_twists(m: u32) -> Vec<u32> {
    (1..=m / 2).step_by(2).collect()
}

/// All admissible (p₁, p₂) pairs for the given moduli, lexicographic.
pub fn admissible_pairs(m1: u32, m2: u32) -> Vec<(u32, u32)> {
    let ps1 = admissible_twists(m1);
    let ps2 = admissible_twists(m2);
    ps1.iter()
        .flat_map(|&p1| ps2.iter().map(move |&p2| (p1, p2)))
        .collect()
}

const ALPHA: usize = 0;
const BETA: usize = 1;
const MU: usize = 2;

/// Images of the fiber generators under the monodromy automorphism:
/// φ(α) = αβ^{m₂}, φ(β) = β(αβ^{m₂})^{m₁}.
fn monodromy_words(m1: u32, m2: u32) -> (Word, Word) {
    let a = Word::generator(ALPHA);
    let b = Word::generator(BETA);
    let ab_m2 = a.concat(&b.pow(m2 as i64));
    let phi_a = ab_m2.clone();
    let phi_b = b.concat(&ab_m2.pow(m1 as i64));
    (phi_a, phi_b)
}

/// Mapping-torus presentation on generators (α, β, μ): relators
/// μαμ⁻¹·φ(α)⁻¹ and μβμ⁻¹·φ(β)⁻¹.
pub fn family_presentation(m1: u32, m2: u32) -> Result<Presentation, FamilyError> {
    check_modulus(1, m1)?;
    check_modulus(2, m2)?;
    let (phi_a, phi_b) = monodromy_words(m1, m2);
    let mu = Word::generator(MU);
    let conj = |g: usize| mu.concat(&Word::generator(g)).concat(&mu.inverse());
    let relators = vec![
        conj(ALPHA).concat(&phi_a.inverse()),
        conj(BETA).concat(&phi_b.inverse()),
    ];
    let names = vec!["a".to_string(), "b".to_string(), "mu".to_string()];
    Ok(Presentation::new(names, relators).expect("fixed names and in-range relators"))
}

/// Action of the monodromy on H₁ of the fiber, rows = images of (α, β)
/// as exponent vectors: [[1, m₂], [m₁, 1 + m₁m₂]].
pub fn monodromy_abelianization(m1: u32, m2: u32) -> [[i64; 2]; 2] {
    let (phi_a, phi_b) = monodromy_words(m1, m2);
    let sums = |w: &Word| {
        let mut e = [0i64; 2];
        for l in w.letters() {
            e[l.gen] += l.exp as i64;
        }
        e
    };
    [sums(&phi_a), sums(&phi_b)]
}

/// The explicit PSL₂ representation for the given parameters. By
/// construction the relators evaluate to −Id, so validation always
/// succeeds for valid parameters.
pub fn build_family_rep(params: &FamilyParams) -> Representation {
    let a = Complex64::from_polar(1.0, PI * params.p1 as f64 / params.m1 as f64);
    let b = Complex64::from_polar(1.0, PI * params.p2 as f64 / params.m2 as f64);
    let ai = a.inv();
    let bi = b.inv();
    let c = params.z - a * b - ai * bi;
    let mat_a = Mat2::new(a, Complex64::ONE, Complex64::ZERO, ai);
    let mat_b = Mat2::new(b, Complex64::ZERO, c, bi);
    let p = family_presentation(params.m1, params.m2).expect("params already validated");
    Representation::validated(
        p,
        vec![mat_a, mat_b, Mat2::identity()],
        Flavor::PSL2,
        Tolerances::default(),
    )
    .expect("family representation validates by construction")
}

/// Verification record for one family member.
#[derive(Debug, Clone, Serialize)]
pub struct FamilyReport {
    /// ‖A^{m₁} + Id‖ and ‖B^{m₂} + Id‖ both ≤ 1e−8.
    pub powers_ok: bool,
    /// Both relators hold in PSL₂.
    pub relations_ok: bool,
    /// Whether the sign obstruction is solvable (it never is here).
    pub liftable: bool,
    pub tau_alpha: Complex64,
    pub tau_beta: Complex64,
}

pub fn verify_family(params: &FamilyParams) -> FamilyReport {
    let rho = build_family_rep(params);
    let images = rho.images();
    let neg_id = -Mat2::identity();
    let power_defect = |m: &Mat2, k: u32| (m.pow(k) - neg_id).norm_inf();
    let powers_ok = power_defect(&images[ALPHA].rep, params.m1) <= 1e-8
        && power_defect(&images[BETA].rep, params.m2) <= 1e-8;
    let relations_ok = rho
        .validate()
        .iter()
        .all(|s| matches!(s, RelatorSign::Plus | RelatorSign::Minus));
    let liftable = lift::lift_obstruction(&rho)
        .map(|r| r.liftable)
        .unwrap_or(false);
    let tau = |g: usize| {
        let t = images[g].rep.trace();
        t * t
    };
    FamilyReport {
        powers_ok,
        relations_ok,
        liftable,
        tau_alpha: tau(ALPHA),
        tau_beta: tau(BETA),
    }
}

/// One row of the component census.
#[derive(Debug, Clone, Serialize)]
pub struct CensusRow {
    pub m1: u32,
    pub m2: u32,
    pub p1: u32,
    pub p2: u32,
    pub tau_alpha: Complex64,
    pub tau_beta: Complex64,
    pub liftable: bool,
}

/// Census over all admissible (p₁, p₂) pairs.
#[derive(Debug, Clone, Serialize)]
pub struct Census {
    pub rows: Vec<CensusRow>,
    /// Number of distinct (τ_α, τ_β) vectors at separation > 1e−6; one
    /// per admissible pair when the construction behaves.
    pub distinct_count: usize,
    /// Largest variation of (τ_α, τ_β) across the z samples; should be
    /// at rounding level since neither trace depends on z.
    pub max_tau_drift: f64,
}

/// Evaluates every admissible pair at each z sample, checks that the
/// (τ_α, τ_β) invariants do not move with z, and counts distinct
/// invariant vectors.
pub fn component_census(m1: u32, m2: u32, z_samples: &[Complex64]) -> Result<Census, FamilyError> {
    check_modulus(1, m1)?;
    check_modulus(2, m2)?;
    assert!(!z_samples.is_empty(), "need at least one z sample");
    let mut rows = Vec::new();
    let mut max_tau_drift: f64 = 0.0;
    for (p1, p2) in admissible_pairs(m1, m2) {
        let reports: Vec<FamilyReport> = z_samples
            .iter()
            .map(|&z| {
                let params = FamilyParams::new(m1, m2, p1, p2, z).expect("admissible by construction");
                verify_family(&params)
            })
            .collect();
        let first = &reports[0];
        for r in &reports[1..] {
            max_tau_drift = max_tau_drift
                .max((r.tau_alpha - first.tau_alpha).norm())
                .max((r.tau_beta - first.tau_beta).norm());
        }
        rows.push(CensusRow {
            m1,
            m2,
            p1,
            p2,
            tau_alpha: first.tau_alpha,
            tau_beta: first.tau_beta,
            liftable: reports.iter().all(|r| r.liftable),
        });
    }
    // Count distinct (τ_α, τ_β) vectors, two counting as equal when both
    // coordinates agree within 1e-6.
    let mut distinct: Vec<(Complex64, Complex64)> = Vec::new();
    for row in &rows {
        let seen = distinct.iter().any(|&(ta, tb)| {
            (ta - row.tau_alpha).norm() <= 1e-6 && (tb - row.tau_beta).norm() <= 1e-6
        });
        if !seen {
            distinct.push((row.tau_alpha, row.tau_beta));
        }
    }
    Ok(Census {
        rows,
        distinct_count: distinct.len(),
        max_tau_drift,
    })
}

/// Standard z samples used when the caller does not supply any.
pub fn default_z_samples() -> Vec<Complex64> {
    vec![
        Complex64::ZERO,
        Complex64::new(1.0, 1.0),
        Complex64::new(5.0, 0.0),
    ]
}
