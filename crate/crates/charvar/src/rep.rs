//! Representations of a presented group into the 2×2 matrix groups:
//! word evaluation, relator validation, character values, character
//! coordinate vectors, and explicit conjugator search.
//!
//! A representation stores one sign representative per generator. In the
//! sign quotient a relator is only required to evaluate to ±Id; a lift to
//! the determinant-1 group must make every relator exactly +Id. The
//! character value τ(w) = tr²(ρ(w)) is blind to all sign choices, which is
//! what makes it the right coordinate on the quotient.

use crate::linalg;
use crate::mat2::{psl2_equal, Mat2, PSL2Elt};
use crate::words::{ParseError, Presentation, Word};
use crate::Tolerances;
use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Which group the images are taken in: the sign quotient or its
/// determinant-1 double cover.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Flavor {
    PSL2,
    SL2,
}

/// Sign with which a relator evaluates: +Id, −Id, or neither.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum RelatorSign {
    Plus,
    Minus,
    Fail,
}

impl RelatorSign {
    pub fn as_int(self) -> Option<i8> {
        match self {
            RelatorSign::Plus => Some(1),
            RelatorSign::Minus => Some(-1),
            RelatorSign::Fail => None,
        }
    }
}

#[derive(Debug, Error)]
pub enum RepError {
    #[error("expected {expected} generator images, got {got}")]
    WrongImageCount { expected: usize, got: usize },
    #[error("image of generator {generator} has a non-finite entry")]
    NonFiniteEntry { generator: usize },
    #[error("image of generator {generator} has |det - 1| = {residual:.3e}, beyond tolerance")]
    DeterminantDrift { generator: usize, residual: f64 },
    #[error("relator {index} does not evaluate to the required central element")]
    RelatorViolation { index: usize },
    #[error("representations are over different presentations")]
    PresentationMismatch,
    #[error("operation requires an irreducible representation")]
    ReducibleInput,
    #[error("unsupported document schema version {0}")]
    UnsupportedSchema(u32),
    #[error("presentation: {0}")]
    Presentation(#[from] ParseError),
}

/// A homomorphism from a presented group, given by generator images.
#[derive(Debug, Clone)]
pub struct Representation {
    presentation: Presentation,
    images: Vec<PSL2Elt>,
    flavor: Flavor,
    tol: Tolerances,
}

impl Representation {
    /// Builds a representation, checking finiteness and determinant drift
    /// of each image but not the relators; use [`Representation::validate`]
    /// or [`Representation::validated`] for those.
    pub fn new(
        presentation: Presentation,
        images: Vec<Mat2>,
        flavor: Flavor,
        tol: Tolerances,
    ) -> Result<Self, RepError> {
        if images.len() != presentation.rank() {
            return Err(RepError::WrongImageCount {
                expected: presentation.rank(),
                got: images.len(),
            });
        }
        for (i, m) in images.iter().enumerate() {
            if !m.is_finite() {
                return Err(RepError::NonFiniteEntry { generator: i });
            }
            let residual = (m.det() - Complex64::ONE).norm();
            if residual > tol.eps_det {
                return Err(RepError::DeterminantDrift {
                    generator: i,
                    residual,
                });
            }
        }
        Ok(Representation {
            presentation,
            images: images.into_iter().map(PSL2Elt::new).collect(),
            flavor,
            tol,
        })
    }

    /// Like [`Representation::new`] but also rejects any relator that fails
    /// to evaluate to the central element the flavor requires.
    pub fn validated(
        presentation: Presentation,
        images: Vec<Mat2>,
        flavor: Flavor,
        tol: Tolerances,
    ) -> Result<Self, RepError> {
        let rho = Representation::new(presentation, images, flavor, tol)?;
        match rho.first_invalid_relator() {
            None => Ok(rho),
            Some(index) => Err(RepError::RelatorViolation { index }),
        }
    }

    pub fn presentation(&self) -> &Presentation {
        &self.presentation
    }

    pub fn images(&self) -> &[PSL2Elt] {
        &self.images
    }

    pub fn image(&self, generator: usize) -> &PSL2Elt {
        &self.images[generator]
    }

    pub fn flavor(&self) -> Flavor {
        self.flavor
    }

    pub fn tol(&self) -> Tolerances {
        self.tol
    }

    pub fn rank(&self) -> usize {
        self.presentation.rank()
    }

    /// Product of generator images along the letters of `w`; the empty word
    /// evaluates to the identity. For SL2 flavor the stored representatives
    /// make this the honest matrix value, not just a sign class.
    pub fn evaluate(&self, w: &Word) -> PSL2Elt {
        let mut out = Mat2::identity();
        for l in w.letters() {
            assert!(
                l.gen < self.images.len(),
                "word uses generator {} but the presentation has rank {}",
                l.gen,
                self.images.len()
            );
            let g = self.images[l.gen].rep;
            out = out * if l.exp > 0 { g } else { g.inverse() };
        }
        PSL2Elt::new(out)
    }

    /// Evaluates each relator and reports its sign: +Id, −Id, or failure.
    /// A free presentation yields the empty report.
    pub fn validate(&self) -> Vec<RelatorSign> {
        let id = PSL2Elt::identity();
        self.presentation
            .relators()
            .iter()
            .map(|r| {
                let value = self.evaluate(r);
                let diff = (value.rep - id.rep).norm_inf();
                let sum = (value.rep + id.rep).norm_inf();
                let tol = self.tol.eps_eq * 1.0_f64.max(value.rep.norm_inf());
                if diff <= tol {
                    RelatorSign::Plus
                } else if sum <= tol {
                    RelatorSign::Minus
                } else {
                    RelatorSign::Fail
                }
            })
            .collect()
    }

    fn first_invalid_relator(&self) -> Option<usize> {
        self.validate().iter().position(|&s| match self.flavor {
            Flavor::PSL2 => s == RelatorSign::Fail,
            Flavor::SL2 => s != RelatorSign::Plus,
        })
    }

    /// True iff every relator evaluates to the central element the flavor
    /// requires.
    pub fn is_valid(&self) -> bool {
        self.first_invalid_relator().is_none()
    }

    /// The character value τ(w) = tr²(ρ(w)); independent of sign choices.
    pub fn tau(&self, w: &Word) -> Complex64 {
        let t = self.evaluate(w).rep.trace();
        t * t
    }

    /// The same representation conjugated by `m` (det-1).
    pub fn conjugated(&self, m: &Mat2) -> Representation {
        let m_inv = m.inverse();
        Representation {
            presentation: self.presentation.clone(),
            images: self
                .images
                .iter()
                .map(|g| PSL2Elt::new(*m * g.rep * m_inv))
                .collect(),
            flavor: self.flavor,
            tol: self.tol,
        }
    }

    /// Flips the sign of the image of each generator `i` with `signs[i] = 1`.
    pub fn with_flipped_signs(&self, signs: &crate::words::gf2::F2Vector) -> Representation {
        assert_eq!(signs.len(), self.rank());
        Representation {
            presentation: self.presentation.clone(),
            images: self
                .images
                .iter()
                .enumerate()
                .map(|(i, g)| {
                    if signs.get(i) == 1 {
                        PSL2Elt::new(-g.rep)
                    } else {
                        *g
                    }
                })
                .collect(),
            flavor: self.flavor,
            tol: self.tol,
        }
    }

    /// Same images, reinterpreted with the given flavor.
    pub fn with_flavor(&self, flavor: Flavor) -> Representation {
        Representation {
            flavor,
            ..self.clone()
        }
    }

    /// Character coordinates: τ on every square-free positive word with
    /// strictly ascending generator indices of length ≤ min(depth, rank)
    /// (ordered by length, then lexicographically), followed by the
    /// commutators of all generator pairs. The commutator block is what
    /// makes reducibility readable off the vector: a reducible image has
    /// τ = 4 on every commutator.
    pub fn character_coords(&self, depth: usize) -> CharacterVector {
        let words = character_coordinate_words(&self.presentation, depth);
        let values = words.iter().map(|w| self.tau(w)).collect();
        CharacterVector { words, values }
    }
}

/// The word family used by [`Representation::character_coords`].
pub fn character_coordinate_words(p: &Presentation, depth: usize) -> Vec<Word> {
    let n = p.rank();
    let max_len = depth.min(n);
    let mut words: Vec<Word> = Vec::new();
    // Ascending-index subsets, enumerated by length then lexicographically.
    for len in 1..=max_len {
        let mut subset: Vec<usize> = (0..len).collect();
        loop {
            words.push(Word::from_letters(
                subset.iter().map(|&g| crate::words::Letter::new(g, 1)),
            ));
            // Advance to the next ascending subset of this length; position
            // i tops out at n - (len - i).
            let mut advanced = false;
            for i in (0..len).rev() {
                if subset[i] < n - (len - i) {
                    subset[i] += 1;
                    for j in i + 1..len {
                        subset[j] = subset[j - 1] + 1;
                    }
                    advanced = true;
                    break;
                }
            }
            if !advanced {
                break;
            }
        }
    }
    for i in 0..n {
        for j in i + 1..n {
            words.push(crate::words::commutator(
                &Word::generator(i),
                &Word::generator(j),
            ));
        }
    }
    words
}

/// A coordinate family of words together with their τ-values.
#[derive(Debug, Clone)]
pub struct CharacterVector {
    pub words: Vec<Word>,
    pub values: Vec<Complex64>,
}

impl CharacterVector {
    /// Entrywise comparison at relative tolerance `tol`.
    pub fn agrees_with(&self, other: &CharacterVector, tol: f64) -> bool {
        self.values.len() == other.values.len()
            && self
                .values
                .iter()
                .zip(&other.values)
                .all(|(a, b)| (a - b).norm() <= tol * 1.0_f64.max(a.norm()))
    }
}

/// Searches for M with M ρ₁(g_i) M⁻¹ = ρ₂(g_i) in the sign quotient.
///
/// For each of the 2^s sign vectors ε the equation lifts to the linear
/// system M·A_i = ε_i·B_i·M on the four entries of M; candidate solutions
/// come out of the numeric null space, get normalized to determinant 1,
/// and must conjugate every generator image onto its target within 1e−7
/// relative scale. Inputs must be irreducible — on reducible ones the
/// conjugator, when it exists, is far from unique.
pub fn find_conjugator(
    r1: &Representation,
    r2: &Representation,
) -> Result<Option<PSL2Elt>, RepError> {
    if r1.presentation() != r2.presentation() {
        return Err(RepError::PresentationMismatch);
    }
    if crate::classify::is_reducible(r1) || crate::classify::is_reducible(r2) {
        return Err(RepError::ReducibleInput);
    }
    let s = r1.rank();
    let tol = r1.tol();
    for mask in 0u32..(1 << s) {
        let signs: Vec<f64> = (0..s)
            .map(|i| if mask & (1 << i) != 0 { -1.0 } else { 1.0 })
            .collect();
        // Rows of the 4s×4 system: M·A_i − ε_i·B_i·M = 0, unknowns the
        // row-major entries (x, y, z, w) of M.
        let zero = Complex64::ZERO;
        let mut rows: Vec<[Complex64; 4]> = Vec::with_capacity(4 * s);
        for (i, &sign) in signs.iter().enumerate() {
            let a = r1.image(i).rep;
            let b = {
                let m = r2.image(i).rep;
                Mat2::new(sign * m.a, sign * m.b, sign * m.c, sign * m.d)
            };
            rows.push([a.a - b.a, a.c, -b.b, zero]);
            rows.push([a.b, a.d - b.a, zero, -b.b]);
            rows.push([-b.c, zero, a.a - b.d, a.c]);
            rows.push([zero, -b.c, a.b, a.d - b.d]);
        }
        let system = DMatrix::from_fn(rows.len(), 4, |r, c| rows[r][c]);
        for v in linalg::null_space(&system, tol.rank_rel) {
            let m = Mat2::new(v[0], v[1], v[2], v[3]);
            let det = m.det();
            if det.norm() < 1e-12 {
                continue;
            }
            let scale = det.sqrt();
            let m = Mat2::new(m.a / scale, m.b / scale, m.c / scale, m.d / scale);
            let candidate = PSL2Elt::new(m);
            let ok = (0..s).all(|i| {
                let conj = PSL2Elt::new(m * r1.image(i).rep * m.inverse());
                psl2_equal(&conj, r2.image(i), 1e-7)
            });
            if ok {
                return Ok(Some(candidate));
            }
        }
    }
    Ok(None)
}

/// On-disk JSON form of a representation: presentation text, one matrix
/// per generator, and the flavor flag.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RepDocument {
    pub schema: u32,
    pub presentation: String,
    pub images: Vec<Mat2>,
    pub flavor: Flavor,
}

impl RepDocument {
    pub fn from_representation(rho: &Representation) -> Self {
        RepDocument {
            schema: 1,
            presentation: rho.presentation().print(),
            images: rho.images().iter().map(|g| g.rep).collect(),
            flavor: rho.flavor(),
        }
    }

    pub fn into_representation(self, tol: Tolerances) -> Result<Representation, RepError> {
        if self.schema != 1 {
            return Err(RepError::UnsupportedSchema(self.schema));
        }
        let presentation = Presentation::parse(&self.presentation)?;
        Representation::new(presentation, self.images, self.flavor, tol)
    }
}
