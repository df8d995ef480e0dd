//! Unit-determinant 2×2 complex matrices, equality up to sign, and the
//! adjoint action on sl₂.
//!
//! The Lie algebra sl₂ carries the ordered basis
//!
//! ```text
//! h0 = [1  0]    h+ = [0 1]    h- = [0 0]
//!      [0 -1]         [0 0]         [1 0]
//! ```
//!
//! and `adjoint_so3` writes conjugation v ↦ X v X⁻¹ as a 3×3 matrix in that
//! basis. Since the entries of the adjoint matrix are quadratic in the
//! entries of X, the map is blind to the sign of X and descends to the
//! quotient by ±Id. Everything downstream that decomposes cohomology into
//! blocks depends on this basis order.

use nalgebra::Matrix3;
use num_complex::Complex64;
use serde::de::Error as DeError;
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use std::ops::{Add, Mul, Neg, Sub};

/// 3×3 complex matrix (the adjoint side of the story).
pub type Mat3 = Matrix3<Complex64>;

/// A 2×2 complex matrix `[[a, b], [c, d]]`.
///
/// Determinant-1 is an invariant of use, not of the type: constructors do
/// not reject drift, validation does (see the representation module).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Mat2 {
    pub a: Complex64,
    pub b: Complex64,
    pub c: Complex64,
    pub d: Complex64,
}

impl Mat2 {
    pub fn new(a: Complex64, b: Complex64, c: Complex64, d: Complex64) -> Self {
        Mat2 { a, b, c, d }
    }

    /// Convenience constructor from real entries.
    pub fn from_real(a: f64, b: f64, c: f64, d: f64) -> Self {
        Mat2 {
            a: Complex64::new(a, 0.0),
            b: Complex64::new(b, 0.0),
            c: Complex64::new(c, 0.0),
            d: Complex64::new(d, 0.0),
        }
    }

    pub fn identity() -> Self {
        Mat2::from_real(1.0, 0.0, 0.0, 1.0)
    }

    pub fn diagonal(a: Complex64, d: Complex64) -> Self {
        Mat2::new(a, Complex64::ZERO, Complex64::ZERO, d)
    }

    pub fn trace(&self) -> Complex64 {
        self.a + self.d
    }

    pub fn det(&self) -> Complex64 {
        self.a * self.d - self.b * self.c
    }

    /// Adjugate-formula inverse; exact when det = 1.
    pub fn inverse(&self) -> Mat2 {
        Mat2::new(self.d, -self.b, -self.c, self.a)
    }

    /// Largest entry modulus.
    pub fn norm_inf(&self) -> f64 {
        self.a
            .norm()
            .max(self.b.norm())
            .max(self.c.norm())
            .max(self.d.norm())
    }

    pub fn is_finite(&self) -> bool {
        [self.a, self.b, self.c, self.d]
            .iter()
            .all(|z| z.re.is_finite() && z.im.is_finite())
    }

    /// `self^k` for non-negative k by repeated multiplication.
    pub fn pow(&self, k: u32) -> Mat2 {
        let mut out = Mat2::identity();
        for _ in 0..k {
            out = out * *self;
        }
        out
    }

    pub fn entries(&self) -> [Complex64; 4] {
        [self.a, self.b, self.c, self.d]
    }
}

impl Mul for Mat2 {
    type Output = Mat2;
    fn mul(self, rhs: Mat2) -> Mat2 {
        Mat2::new(
            self.a * rhs.a + self.b * rhs.c,
            self.a * rhs.b + self.b * rhs.d,
            self.c * rhs.a + self.d * rhs.c,
            self.c * rhs.b + self.d * rhs.d,
        )
    }
}

impl Neg for Mat2 {
    type Output = Mat2;
    fn neg(self) -> Mat2 {
        Mat2::new(-self.a, -self.b, -self.c, -self.d)
    }
}

impl Add for Mat2 {
    type Output = Mat2;
    fn add(self, rhs: Mat2) -> Mat2 {
        Mat2::new(self.a + rhs.a, self.b + rhs.b, self.c + rhs.c, self.d + rhs.d)
    }
}

impl Sub for Mat2 {
    type Output = Mat2;
    fn sub(self, rhs: Mat2) -> Mat2 {
        Mat2::new(self.a - rhs.a, self.b - rhs.b, self.c - rhs.c, self.d - rhs.d)
    }
}

// JSON encoding: [[re,im],[re,im],[re,im],[re,im]] row-major.
impl Serialize for Mat2 {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        let arr = [
            [self.a.re, self.a.im],
            [self.b.re, self.b.im],
            [self.c.re, self.c.im],
            [self.d.re, self.d.im],
        ];
        arr.serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for Mat2 {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let arr = <[[f64; 2]; 4]>::deserialize(deserializer)?;
        let m = Mat2::new(
            Complex64::new(arr[0][0], arr[0][1]),
            Complex64::new(arr[1][0], arr[1][1]),
            Complex64::new(arr[2][0], arr[2][1]),
            Complex64::new(arr[3][0], arr[3][1]),
        );
        if !m.is_finite() {
            return Err(D::Error::custom("non-finite matrix entry"));
        }
        Ok(m)
    }
}

/// An element of the sign quotient, stored by a chosen representative.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct PSL2Elt {
    pub rep: Mat2,
}

impl PSL2Elt {
    pub fn new(rep: Mat2) -> Self {
        PSL2Elt { rep }
    }

    pub fn identity() -> Self {
        PSL2Elt::new(Mat2::identity())
    }

    pub fn mul(&self, other: &PSL2Elt) -> PSL2Elt {
        PSL2Elt::new(self.rep * other.rep)
    }

    pub fn inverse(&self) -> PSL2Elt {
        PSL2Elt::new(self.rep.inverse())
    }
}

/// Equality in the sign quotient: true iff X agrees with Y or with −Y
/// entrywise, within `eps_eq` relative to the scale of X.
pub fn psl2_equal(x: &PSL2Elt, y: &PSL2Elt, eps_eq: f64) -> bool {
    let diff = (x.rep - y.rep).norm_inf();
    let sum = (x.rep + y.rep).norm_inf();
    diff.min(sum) <= eps_eq * 1.0_f64.max(x.rep.norm_inf())
}

/// Matrix of v ↦ X v X⁻¹ on sl₂ in the ordered basis (h₀, h₊, h₋).
///
/// For X = [[a,b],[c,d]] with det 1 the images of the basis vectors are
///
/// ```text
/// h0 ↦ (ad+bc) h0 − 2ab h+ + 2cd h-
/// h+ ↦   −ac   h0 +  a² h+ −  c² h-
/// h- ↦    bd   h0 −  b² h+ +  d² h-
/// ```
///
/// so the columns below are those coefficient vectors. All entries are
/// quadratic in (a,b,c,d), hence independent of the sign representative.
pub fn adjoint_so3(x: &PSL2Elt) -> Mat3 {
    let Mat2 { a, b, c, d } = x.rep;
    Mat3::new(
        a * d + b * c,
        -a * c,
        b * d,
        -2.0 * a * b,
        a * a,
        -b * b,
        2.0 * c * d,
        -c * c,
        d * d,
    )
}

/// Residual of the trace identity tr(AB) + tr(A⁻¹B) = tr(A)·tr(B).
pub fn verify_fundamental_identity(a: &Mat2, b: &Mat2) -> f64 {
    let lhs = (*a * *b).trace() + (a.inverse() * *b).trace();
    (lhs - a.trace() * b.trace()).norm()
}

/// Gram matrix of the Killing form of sl₂ in the basis (h₀, h₊, h₋):
/// B(x, y) = 4 tr(xy) on 2×2 matrices gives 8 on h₀ and the off-diagonal
/// pairing 4 between h₊ and h₋.
pub fn killing_gram() -> Mat3 {
    let z = Complex64::ZERO;
    let e8 = Complex64::new(8.0, 0.0);
    let e4 = Complex64::new(4.0, 0.0);
    Mat3::new(e8, z, z, z, z, e4, z, e4, z)
}

/// ‖BᵀKB − K‖∞ where K is the Killing Gram matrix; near zero exactly when
/// B lies in the complex orthogonal group of the form.
pub fn killing_form_residual(b: &Mat3) -> f64 {
    let k = killing_gram();
    let diff = b.transpose() * k * b - k;
    mat3_norm_inf(&diff)
}

/// Largest entry modulus of a 3×3 matrix.
pub fn mat3_norm_inf(m: &Mat3) -> f64 {
    m.iter().map(|z| z.norm()).fold(0.0, f64::max)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sampling;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn rng() -> ChaCha8Rng {
        ChaCha8Rng::seed_from_u64(0x4d415432)
    }

    #[test]
    fn inverse_is_adjugate() {
        let m = Mat2::from_real(1.0, 2.0, 3.0, 7.0); // det 1
        let inv = m.inverse();
        assert_eq!(inv, Mat2::from_real(7.0, -2.0, -3.0, 1.0));
        assert!(((m * inv) - Mat2::identity()).norm_inf() < 1e-14);
    }

    #[test]
    fn trace_of_identity() {
        assert_eq!(Mat2::identity().trace(), Complex64::new(2.0, 0.0));
    }

    #[test]
    fn trace_commutes_under_cyclic_swap() {
        let mut r = rng();
        for _ in 0..50 {
            let a = sampling::random_sl2(&mut r);
            let b = sampling::random_sl2(&mut r);
            let lhs = (a * b).trace();
            let rhs = (b * a).trace();
            assert!((lhs - rhs).norm() <= 1e-12 * lhs.norm().max(1.0));
        }
    }

    #[test]
    fn psl2_equality_semantics() {
        let mut r = rng();
        let a = sampling::random_sl2(&mut r);
        let pa = PSL2Elt::new(a);
        let na = PSL2Elt::new(-a);
        assert!(psl2_equal(&pa, &na, 1e-9));

        let i = Complex64::new(0.0, 1.0);
        let id = PSL2Elt::identity();
        let diag_i = PSL2Elt::new(Mat2::diagonal(i, -i));
        assert!(!psl2_equal(&id, &diag_i, 1e-9));

        // Tiny perturbations are absorbed at unit scale.
        let mut perturbed = a;
        perturbed.b += Complex64::new(1e-12, 0.0);
        assert!(psl2_equal(&pa, &PSL2Elt::new(perturbed), 1e-9));
    }

    #[test]
    fn adjoint_of_identity_and_sign() {
        let id = adjoint_so3(&PSL2Elt::identity());
        assert!(mat3_norm_inf(&(id - Mat3::identity())) < 1e-15);

        let mut r = rng();
        let x = sampling::random_sl2(&mut r);
        let plus = adjoint_so3(&PSL2Elt::new(x));
        let minus = adjoint_so3(&PSL2Elt::new(-x));
        assert_eq!(plus, minus);
    }

    #[test]
    fn adjoint_of_diagonal() {
        let a = Complex64::new(1.5, 0.25);
        let x = PSL2Elt::new(Mat2::diagonal(a, a.inv()));
        let ad = adjoint_so3(&x);
        let expected = Mat3::from_diagonal(&nalgebra::Vector3::new(
            Complex64::ONE,
            a * a,
            (a * a).inv(),
        ));
        assert!(mat3_norm_inf(&(ad - expected)) < 1e-12);
    }

    #[test]
    fn adjoint_trace_identity_sweep() {
        let mut r = rng();
        for _ in 0..200 {
            let x = sampling::random_sl2(&mut r);
            let ad_tr = adjoint_so3(&PSL2Elt::new(x)).trace();
            let t = x.trace();
            let scale = t.norm().powi(2).max(1.0);
            assert!((ad_tr - (t * t - Complex64::ONE)).norm() <= 1e-8 * scale);
            assert!((ad_tr - ((x * x).trace() + Complex64::ONE)).norm() <= 1e-8 * scale);
        }
    }

    #[test]
    fn adjoint_is_multiplicative() {
        let mut r = rng();
        for _ in 0..100 {
            let x = sampling::random_sl2(&mut r);
            let y = sampling::random_sl2(&mut r);
            let lhs = adjoint_so3(&PSL2Elt::new(x * y));
            let rhs = adjoint_so3(&PSL2Elt::new(x)) * adjoint_so3(&PSL2Elt::new(y));
            let scale = mat3_norm_inf(&lhs).max(1.0);
            assert!(mat3_norm_inf(&(lhs - rhs)) <= 1e-8 * scale);
        }
    }

    #[test]
    fn adjoint_lands_in_complex_orthogonal_group() {
        let mut r = rng();
        for _ in 0..100 {
            let x = sampling::bounded_random_sl2(&mut r);
            let ad = adjoint_so3(&PSL2Elt::new(x));
            assert!(killing_form_residual(&ad) <= 1e-8);
            let det = ad.determinant();
            assert!((det - Complex64::ONE).norm() <= 1e-8);
        }
    }

    #[test]
    fn fundamental_identity_special_cases() {
        let mut r = rng();
        let b = sampling::random_sl2(&mut r);
        assert!(verify_fundamental_identity(&Mat2::identity(), &b) < 1e-12);

        let a = sampling::bounded_random_sl2(&mut r);
        // (A, A) reduces to Cayley-Hamilton: tr(A²) + 2 = tr(A)².
        assert!(verify_fundamental_identity(&a, &a) < 1e-10);
    }

    #[test]
    fn fundamental_identity_sweep() {
        let mut r = rng();
        for _ in 0..1000 {
            let a = sampling::bounded_random_sl2(&mut r);
            let b = sampling::bounded_random_sl2(&mut r);
            assert!(verify_fundamental_identity(&a, &b) <= 1e-8);
        }
    }

    #[test]
    fn json_round_trip() {
        let m = Mat2::new(
            Complex64::new(1.0, 2.0),
            Complex64::new(0.0, -1.0),
            Complex64::new(3.5, 0.0),
            Complex64::new(-2.0, 0.25),
        );
        let text = serde_json::to_string(&m).unwrap();
        assert_eq!(text, "[[1.0,2.0],[0.0,-1.0],[3.5,0.0],[-2.0,0.25]]");
        let back: Mat2 = serde_json::from_str(&text).unwrap();
        assert_eq!(back, m);
    }

    #[test]
    fn json_rejects_non_finite() {
        let res: Result<Mat2, _> =
            serde_json::from_str("[[1.0,0.0],[0.0,0.0],[0.0,0.0],[1e999,0.0]]");
        assert!(res.is_err());
    }
}
