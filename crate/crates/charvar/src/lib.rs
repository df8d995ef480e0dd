//! Computing with PSL(2,C) and SL(2,C) representation and character varieties
//! of finitely presented groups.
//!
//! The crate is organized around a small pipeline:
//!
//! - [`words`]: free-group words, group presentations, and mod-2 homological
//!   bookkeeping (exponent vectors, membership in the subgroup generated by
//!   squares).
//! - [`mat2`]: unit-determinant complex 2x2 matrices, equality up to sign,
//!   and the adjoint action on sl2 in the (h0, h+, h-) basis.
//! - [`rep`]: representations of a presented group into PSL2 or SL2,
//!   character values and coordinate vectors, conjugator search.
//! - [`classify`]: reducibility, Ad-reducibility, stabilizer type and the
//!   smooth/singular verdict for free-group characters.
//! - [`tracepoly`]: exact symbolic trace calculus over the rationals in
//!   square-free-word trace variables.
//! - [`lift`]: the SL2 lifting obstruction as a linear system over GF(2).
//! - [`cohomology`]: twisted cohomology H^1(G, Ad o rho) as numeric linear
//!   algebra, with block decompositions for diagonal/dihedral images.
//! - [`family`]: explicit one-parameter families of torus-bundle
//!   representations whose characters do not lift to SL2.

pub mod classify;
pub mod cohomology;
pub mod family;
pub mod lift;
pub mod linalg;
pub mod mat2;
pub mod rep;
pub mod sampling;
pub mod tracepoly;
pub mod words;

/// Numeric tolerances used across the crate.
///
/// All constructions here are algebraically exact; drift only comes from
/// rounding in products of short words, so the defaults are tight.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerances {
    /// Maximum allowed deviation of a determinant from 1.
    pub eps_det: f64,
    /// Entrywise tolerance for matrix equality, relative to max entry magnitude.
    pub eps_eq: f64,
    /// Singular values at or below `rank_rel * max(sigma_max, 1)` are
    /// treated as zero.
    pub rank_rel: f64,
    /// A relator image within this distance of +Id or -Id gets that sign.
    pub sign_tol: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances {
            eps_det: 1e-9,
            eps_eq: 1e-9,
            rank_rel: 1e-8,
            sign_tol: 1e-8,
        }
    }
}

impl Tolerances {
    /// Tolerances with a different entrywise equality bound.
    pub fn with_eps_eq(eps_eq: f64) -> Self {
        Tolerances {
            eps_eq,
            ..Default::default()
        }
    }
}
