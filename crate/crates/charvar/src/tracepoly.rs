//! Exact symbolic trace calculus on free groups.
//!
//! The trace of a word in determinant-1 matrices is a polynomial with
//! rational coefficients in the traces of square-free positive words. The
//! rewriting engine reaches that normal form with three moves, applied in
//! priority order:
//!
//! - R0: traces are blind to cyclic rotation and inversion, so every word
//!   is first replaced by a canonical class representative;
//! - R1 (inverse elimination): tr(g⁻¹u) = tr(g)·tr(u) − tr(gu);
//! - R2 (repeated-letter splitting): tr(gu·gv) = tr(gu)·tr(gv) − tr(u⁻¹v).
//!
//! Both moves come from the fundamental identity
//! tr(AB) + tr(A⁻¹B) = tr(A)·tr(B), itself a consequence of the
//! Cayley–Hamilton relation A² − tr(A)·A + Id = 0. R1 drops the measure
//! (length, inverse-letter count) lexicographically and R2 drops the
//! length outright, so the rewriting terminates; results are memoized per
//! canonical class.
//!
//! Coefficients are arbitrary-precision rationals: the identities relating
//! the squared-trace functions τ carry factors of ½, and verifying them is
//! only meaningful as exact polynomial arithmetic.

use crate::mat2::Mat2;
use crate::rep::Representation;
use crate::words::gf2::F2Vector;
use crate::words::{in_gamma_squared, Presentation, Word};
use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum TraceError {
    #[error("word uses generator {index} but the rank is {rank}")]
    GeneratorOutOfRange { index: usize, rank: usize },
    #[error("product of the words is not in the subgroup generated by squares; the trace product is sign-ambiguous")]
    NotInSquareSubgroup,
    #[error("operation requires a rank-2 free presentation")]
    NotRank2Free,
}

/// Canonical representative of a word's trace class: cyclically reduce,
/// then take the least word among all rotations of the result and of its
/// inverse. Positive letters order before their own inverses, so the
/// class of a square-free positive word is represented positively.
pub fn canonical_class(w: &Word) -> Word {
    let c = w.cyclically_reduced();
    if c.is_empty() {
        return c;
    }
    let inv = c.inverse();
    let mut best: Option<Word> = None;
    for k in 0..c.len() {
        for cand in [c.rotated(k), inv.rotated(k)] {
            if best.as_ref().is_none_or(|b| cand < *b) {
                best = Some(cand);
            }
        }
    }
    best.unwrap()
}

/// A trace variable: the canonical class of a square-free positive word.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct TraceVar(Word);

impl TraceVar {
    /// Wraps a word that is already a canonical square-free positive class
    /// (the reducer's normal form guarantees this at every creation site).
    fn from_canonical(w: Word) -> Self {
        debug_assert!(w.is_positive() && w.is_square_free());
        TraceVar(w)
    }

    pub fn word(&self) -> &Word {
        &self.0
    }

    /// Variable name `t[<letters>]`, letter names joined without
    /// separators (coordinate words use single-letter names).
    pub fn display_name(&self, names: &[String]) -> String {
        let letters: String = self
            .0
            .letters()
            .iter()
            .map(|l| names[l.gen].as_str())
            .collect();
        format!("t[{letters}]")
    }
}

// Variables order by length first so that the rank-2 coordinates read
// (a, b, ab) rather than interleaving words of different lengths.
impl Ord for TraceVar {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        (self.0.len(), self.0.letters()).cmp(&(other.0.len(), other.0.letters()))
    }
}

impl PartialOrd for TraceVar {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

/// A product of trace variables with positive integer exponents.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Monomial {
    factors: Vec<(TraceVar, u32)>, // sorted by variable, exponents ≥ 1
}

impl Monomial {
    pub fn one() -> Self {
        Monomial::default()
    }

    pub fn var(v: TraceVar) -> Self {
        Monomial {
            factors: vec![(v, 1)],
        }
    }

    pub fn is_constant(&self) -> bool {
        self.factors.is_empty()
    }

    pub fn degree(&self) -> u32 {
        self.factors.iter().map(|(_, e)| e).sum()
    }

    pub fn factors(&self) -> &[(TraceVar, u32)] {
        &self.factors
    }

    fn mul(&self, other: &Monomial) -> Monomial {
        let mut map: BTreeMap<TraceVar, u32> = BTreeMap::new();
        for (v, e) in self.factors.iter().chain(&other.factors) {
            *map.entry(v.clone()).or_insert(0) += e;
        }
        Monomial {
            factors: map.into_iter().collect(),
        }
    }
}

/// Sparse polynomial in trace variables over the rationals.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct TracePoly {
    terms: BTreeMap<Monomial, BigRational>,
}

fn rational(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

impl TracePoly {
    pub fn zero() -> Self {
        TracePoly::default()
    }

    pub fn constant(n: i64) -> Self {
        TracePoly::from_coeff(Monomial::one(), rational(n))
    }

    pub fn var(v: TraceVar) -> Self {
        TracePoly::from_coeff(Monomial::var(v), BigRational::one())
    }

    fn from_coeff(m: Monomial, c: BigRational) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(m, c);
        }
        TracePoly { terms }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &BigRational)> {
        self.terms.iter()
    }

    pub fn scale(&self, c: &BigRational) -> TracePoly {
        if c.is_zero() {
            return TracePoly::zero();
        }
        TracePoly {
            terms: self
                .terms
                .iter()
                .map(|(m, a)| (m.clone(), a * c))
                .collect(),
        }
    }

    /// Multiplies by the rational p/q.
    pub fn scale_ratio(&self, p: i64, q: i64) -> TracePoly {
        self.scale(&(rational(p) / rational(q)))
    }

    pub fn variables(&self) -> BTreeSet<TraceVar> {
        self.terms
            .keys()
            .flat_map(|m| m.factors.iter().map(|(v, _)| v.clone()))
            .collect()
    }

    /// Evaluates numerically; `trace_of` supplies the trace of each
    /// variable's word.
    pub fn eval(&self, trace_of: &mut impl FnMut(&Word) -> Complex64) -> Complex64 {
        let mut cache: HashMap<TraceVar, Complex64> = HashMap::new();
        let mut total = Complex64::ZERO;
        for (m, c) in &self.terms {
            let mut term = Complex64::new(c.to_f64().expect("rational out of f64 range"), 0.0);
            for (v, e) in &m.factors {
                let value = *cache
                    .entry(v.clone())
                    .or_insert_with(|| trace_of(v.word()));
                term *= value.powu(*e);
            }
            total += term;
        }
        total
    }

    fn add_term(&mut self, m: Monomial, c: BigRational) {
        use std::collections::btree_map::Entry;
        match self.terms.entry(m) {
            Entry::Vacant(e) => {
                if !c.is_zero() {
                    e.insert(c);
                }
            }
            Entry::Occupied(mut e) => {
                *e.get_mut() += c;
                if e.get().is_zero() {
                    e.remove();
                }
            }
        }
    }

    /// Renders the polynomial with the given generator names; see the
    /// `Display` impl for the ordering contract.
    pub fn format(&self, names: &[String]) -> String {
        if self.terms.is_empty() {
            return "0".to_string();
        }
        // Print order: non-constant monomials by ascending total degree,
        // ties broken by putting higher exponents on earlier variables
        // first; the constant term, if any, comes last.
        let vars: Vec<TraceVar> = self.variables().into_iter().collect();
        let mut entries: Vec<(&Monomial, &BigRational)> = self.terms.iter().collect();
        let sort_key = |m: &Monomial| -> (u32, Vec<i64>) {
            if m.is_constant() {
                return (u32::MAX, Vec::new());
            }
            let exps: Vec<i64> = vars
                .iter()
                .map(|v| {
                    -(m.factors
                        .iter()
                        .find(|(w, _)| w == v)
                        .map_or(0, |(_, e)| *e) as i64)
                })
                .collect();
            (m.degree(), exps)
        };
        entries.sort_by_key(|(m, _)| sort_key(m));

        let mut out = String::new();
        for (i, (m, c)) in entries.iter().enumerate() {
            let negative = c.is_negative();
            let abs = if negative { -(*c).clone() } else { (*c).clone() };
            if i == 0 {
                if negative {
                    out.push('-');
                }
            } else if negative {
                out.push_str(" - ");
            } else {
                out.push_str(" + ");
            }
            let coeff_is_one = abs.is_one();
            if m.is_constant() {
                out.push_str(&format_rational(&abs));
            } else {
                let mono: Vec<String> = m
                    .factors
                    .iter()
                    .map(|(v, e)| {
                        let name = v.display_name(names);
                        if *e == 1 {
                            name
                        } else {
                            format!("{name}^{e}")
                        }
                    })
                    .collect();
                if !coeff_is_one {
                    out.push_str(&format_rational(&abs));
                    out.push('*');
                }
                out.push_str(&mono.join("*"));
            }
        }
        out
    }
}

fn format_rational(r: &BigRational) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

impl fmt::Display for TracePoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let max_gen = self
            .variables()
            .iter()
            .filter_map(|v| v.word().max_generator())
            .max()
            .map_or(0, |g| g + 1);
        write!(f, "{}", self.format(&crate::words::default_names(max_gen)))
    }
}

impl Add for &TracePoly {
    type Output = TracePoly;
    fn add(self, rhs: &TracePoly) -> TracePoly {
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.add_term(m.clone(), c.clone());
        }
        out
    }
}

impl Sub for &TracePoly {
    type Output = TracePoly;
    fn sub(self, rhs: &TracePoly) -> TracePoly {
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.add_term(m.clone(), -c.clone());
        }
        out
    }
}

impl Neg for &TracePoly {
    type Output = TracePoly;
    fn neg(self) -> TracePoly {
        TracePoly {
            terms: self
                .terms
                .iter()
                .map(|(m, c)| (m.clone(), -c.clone()))
                .collect(),
        }
    }
}

impl Mul for &TracePoly {
    type Output = TracePoly;
    fn mul(self, rhs: &TracePoly) -> TracePoly {
        let mut out = TracePoly::zero();
        for (m1, c1) in &self.terms {
            for (m2, c2) in &rhs.terms {
                out.add_term(m1.mul(m2), c1 * c2);
            }
        }
        out
    }
}

/// The rewriting engine; memoizes reductions per canonical word class.
pub struct TraceReducer {
    rank: usize,
    memo: HashMap<Word, TracePoly>,
}

impl TraceReducer {
    pub fn new(rank: usize) -> Self {
        TraceReducer {
            rank,
            memo: HashMap::new(),
        }
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    fn check_rank(&self, w: &Word) -> Result<(), TraceError> {
        match w.max_generator() {
            Some(g) if g >= self.rank => Err(TraceError::GeneratorOutOfRange {
                index: g,
                rank: self.rank,
            }),
            _ => Ok(()),
        }
    }

    /// The trace of `w` as an exact polynomial in square-free variables.
    pub fn reduce_trace(&mut self, w: &Word) -> Result<TracePoly, TraceError> {
        self.check_rank(w)?;
        Ok(self.reduce_class(canonical_class(w)))
    }

    fn reduce_class(&mut self, c: Word) -> TracePoly {
        if let Some(hit) = self.memo.get(&c) {
            return hit.clone();
        }
        let result = self.reduce_class_uncached(&c);
        self.memo.insert(c, result.clone());
        result
    }

    fn reduce_class_uncached(&mut self, c: &Word) -> TracePoly {
        if c.is_empty() {
            return TracePoly::constant(2); // tr(Id)
        }
        if c.is_positive() && c.is_square_free() {
            return TracePoly::var(TraceVar::from_canonical(c.clone()));
        }
        if let Some(i) = c.letters().iter().position(|l| l.exp < 0) {
            // R1 on the rotation g⁻¹·u starting at the inverse letter:
            // tr(g⁻¹u) = tr(g)·tr(u) − tr(gu).
            let r = c.rotated(i);
            let g = Word::generator(r.letters()[0].gen);
            let u = Word::from_letters(r.letters()[1..].iter().copied());
            let t_g = self.reduce_class(canonical_class(&g));
            let t_u = self.reduce_class(canonical_class(&u));
            let t_gu = self.reduce_class(canonical_class(&g.concat(&u)));
            return &(&t_g * &t_u) - &t_gu;
        }
        // Positive with a repeated generator: rotate to g·u·g·v and split
        // via R2: tr(gugv) = tr(gu)·tr(gv) − tr(u⁻¹v).
        let (i1, i2) = first_repeat(c).expect("non-square-free word must repeat a generator");
        let r = c.rotated(i1);
        let split = i2 - i1;
        let g = Word::generator(r.letters()[0].gen);
        let u = Word::from_letters(r.letters()[1..split].iter().copied());
        let v = Word::from_letters(r.letters()[split + 1..].iter().copied());
        let t_gu = self.reduce_class(canonical_class(&g.concat(&u)));
        let t_gv = self.reduce_class(canonical_class(&g.concat(&v)));
        let t_uv = self.reduce_class(canonical_class(&u.inverse().concat(&v)));
        &(&t_gu * &t_gv) - &t_uv
    }

    /// τ(w) = tr(w)², expanded exactly.
    pub fn tau_poly(&mut self, w: &Word) -> Result<TracePoly, TraceError> {
        let t = self.reduce_trace(w)?;
        Ok(&t * &t)
    }

    /// Product of the traces of the given words; well defined on the sign
    /// quotient only when the product of the words lies in the subgroup
    /// generated by squares, which is enforced.
    pub fn sigma_poly(&mut self, ws: &[Word]) -> Result<TracePoly, TraceError> {
        for w in ws {
            self.check_rank(w)?;
        }
        let product = ws
            .iter()
            .fold(Word::empty(), |acc, w| acc.concat(w));
        let free = Presentation::free_of_rank(self.rank);
        if !in_gamma_squared(&product, &free) {
            return Err(TraceError::NotInSquareSubgroup);
        }
        let mut out = TracePoly::constant(1);
        for w in ws {
            let t = self.reduce_trace(w)?;
            out = &out * &t;
        }
        Ok(out)
    }
}

/// First generator with two occurrences in a positive word, as the index
/// pair of its first two occurrences.
fn first_repeat(c: &Word) -> Option<(usize, usize)> {
    let letters = c.letters();
    let mut best: Option<(usize, usize)> = None;
    for (i, l) in letters.iter().enumerate() {
        for (off, m) in letters[i + 1..].iter().enumerate() {
            if m.gen == l.gen {
                let pair = (i, i + 1 + off);
                if best.is_none() {
                    best = Some(pair);
                }
                break;
            }
        }
        if best.is_some() {
            break;
        }
    }
    best
}

fn words_abz() -> (Word, Word, Word) {
    let a = Word::generator(0);
    let b = Word::generator(1);
    let ab = a.concat(&b);
    (a, b, ab)
}

/// Exact polynomial check of the three-word product identity
/// σ_{γ,η,γη} = ½(τ_γ·τ_η + τ_{γη} − τ_{γη⁻¹}) at γ = a, η = b.
pub fn verify_eq3() -> bool {
    let mut red = TraceReducer::new(2);
    let (a, b, ab) = words_abz();
    let lhs = red.sigma_poly(&[a.clone(), b.clone(), ab.clone()]).unwrap();
    let tau_a = red.tau_poly(&a).unwrap();
    let tau_b = red.tau_poly(&b).unwrap();
    let tau_ab = red.tau_poly(&ab).unwrap();
    let tau_ab_inv = red.tau_poly(&a.concat(&b.inverse())).unwrap();
    let rhs = (&(&(&tau_a * &tau_b) + &tau_ab) - &tau_ab_inv).scale_ratio(1, 2);
    lhs == rhs
}

/// Exact polynomial check of the commutator identity
/// σ_{[γ,η]} = τ_γ + τ_η + ½τ_{γη} + ½τ_{γη⁻¹} − ½τ_γ·τ_η − 2 at γ = a, η = b.
pub fn verify_eq4() -> bool {
    let mut red = TraceReducer::new(2);
    let (a, b, ab) = words_abz();
    let comm = crate::words::commutator(&a, &b);
    let lhs = red.sigma_poly(&[comm]).unwrap();
    let tau_a = red.tau_poly(&a).unwrap();
    let tau_b = red.tau_poly(&b).unwrap();
    let tau_ab = red.tau_poly(&ab).unwrap();
    let tau_ab_inv = red.tau_poly(&a.concat(&b.inverse())).unwrap();
    let rhs = &(&(&(&(&tau_a + &tau_b) + &tau_ab.scale_ratio(1, 2))
        + &tau_ab_inv.scale_ratio(1, 2))
        - &(&tau_a * &tau_b).scale_ratio(1, 2))
        - &TracePoly::constant(2);
    lhs == rhs
}

/// Coordinates of a rank-2 character: X = τ(a), Y = τ(b), Z = τ(ab), and
/// W = tr(A)·tr(B)·tr(AB) computed from the stored lift. W is well defined
/// because a·b·ab has even exponent sums, so flipping either generator's
/// sign flips an even number of the three factors. The four values satisfy
/// W² = XYZ.
pub fn xf2_coords(
    rho: &Representation,
) -> Result<(Complex64, Complex64, Complex64, Complex64), TraceError> {
    if !rho.presentation().is_free() || rho.rank() != 2 {
        return Err(TraceError::NotRank2Free);
    }
    let a = rho.image(0).rep;
    let b = rho.image(1).rep;
    let ta = a.trace();
    let tb = b.trace();
    let tab = (a * b).trace();
    Ok((ta * ta, tb * tb, tab * tab, ta * tb * tab))
}

/// Change of coordinates (X, Y, Z, W) ↦ (J_a, J_b, J_ab, J_{ab⁻¹}) with
/// J_{ab⁻¹} = XY + Z − 2W.
pub fn j_coords_from_xf2(
    x: Complex64,
    y: Complex64,
    z: Complex64,
    w: Complex64,
) -> (Complex64, Complex64, Complex64, Complex64) {
    (x, y, z, x * y + z - 2.0 * w)
}

/// The sign action of a rank-2 character vector ε on the lift coordinates
/// (tr a, tr b, tr ab): each coordinate flips by ε evaluated on its word,
/// and ε(ab) = ε(a)·ε(b).
pub fn h1_action_on_sl2_coords(
    eps: &F2Vector,
    coords: (Complex64, Complex64, Complex64),
) -> (Complex64, Complex64, Complex64) {
    assert_eq!(eps.len(), 2, "the action is on rank-2 coordinates");
    let sign = |bit: u8| if bit == 1 { -1.0 } else { 1.0 };
    let sa = sign(eps.get(0));
    let sb = sign(eps.get(1));
    (sa * coords.0, sb * coords.1, sa * sb * coords.2)
}

/// Trace of the image of a word under explicit matrices, for oracle tests.
pub fn numeric_trace(images: &[Mat2], w: &Word) -> Complex64 {
    let mut m = Mat2::identity();
    for l in w.letters() {
        let g = images[l.gen];
        m = m * if l.exp > 0 { g } else { g.inverse() };
    }
    m.trace()
}
