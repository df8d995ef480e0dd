//! Seeded random matrices and the crafted fixtures used across the test
//! and acceptance suites.
//!
//! All randomness in the crate flows through caller-supplied RNGs so runs
//! replay deterministically from a single seed.

use crate::mat2::Mat2;
use num_complex::Complex64;
use rand::Rng;
use rand_distr::StandardNormal;

fn gaussian_complex<R: Rng + ?Sized>(rng: &mut R) -> Complex64 {
    let re: f64 = rng.sample(StandardNormal);
    let im: f64 = rng.sample(StandardNormal);
    Complex64::new(re, im)
}

/// Random determinant-1 matrix: Gaussian entries, second column rescaled to
/// force det = 1, condition numbers above 1e6 rejected.
///
/// For a 2×2 matrix with unit determinant the singular values are inverse
/// to each other, so cond = σ_max² = (T + √(T² − 4))/2 with T the squared
/// Frobenius norm.
pub fn random_sl2<R: Rng + ?Sized>(rng: &mut R) -> Mat2 {
    loop {
        let mut m = Mat2::new(
            gaussian_complex(rng),
            gaussian_complex(rng),
            gaussian_complex(rng),
            gaussian_complex(rng),
        );
        let det = m.det();
        if det.norm() < 1e-3 {
            continue;
        }
        m.b /= det;
        m.d /= det;
        let t = m.a.norm_sqr() + m.b.norm_sqr() + m.c.norm_sqr() + m.d.norm_sqr();
        let cond = 0.5 * (t + (t * t - 4.0).max(0.0).sqrt());
        if cond > 1e6 {
            continue;
        }
        return m;
    }
}

/// Like [`random_sl2`] but with every entry of modulus at most 2; keeps
/// products of short words at unit scale for identity sweeps.
pub fn bounded_random_sl2<R: Rng + ?Sized>(rng: &mut R) -> Mat2 {
    loop {
        let m = random_sl2(rng);
        if m.norm_inf() <= 2.0 {
            return m;
        }
    }
}

/// A uniformly random unimodular complex number.
pub fn random_unit<R: Rng + ?Sized>(rng: &mut R) -> Complex64 {
    let angle: f64 = rng.gen_range(0.0..std::f64::consts::TAU);
    Complex64::from_polar(1.0, angle)
}

/// The order-4 rotation pair: diag(i, −i) and the antidiagonal involution.
/// Their images generate Klein's 4-group in the sign quotient, and the
/// commutator evaluates to −Id.
pub fn klein_pair() -> (Mat2, Mat2) {
    let i = Complex64::new(0.0, 1.0);
    let x = Mat2::diagonal(i, -i);
    let y = Mat2::new(
        Complex64::ZERO,
        Complex64::ONE,
        -Complex64::ONE,
        Complex64::ZERO,
    );
    (x, y)
}

/// A random eigenvalue for diagonal fixtures: bounded scale, kept away
/// from ±1 so the resulting generator is never central.
fn generic_eigenvalue<R: Rng + ?Sized>(rng: &mut R) -> Complex64 {
    loop {
        let modulus: f64 = rng.gen_range(0.6..1.8);
        let a = modulus * random_unit(rng);
        if (a * a - Complex64::ONE).norm() > 0.1 {
            return a;
        }
    }
}

/// `n` generic diagonal matrices diag(a, a⁻¹); a reducible (in fact
/// simultaneously diagonal) tuple with non-central entries.
pub fn diagonal_images<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Vec<Mat2> {
    (0..n)
        .map(|_| {
            let a = generic_eigenvalue(rng);
            Mat2::diagonal(a, a.inv())
        })
        .collect()
}

/// `n` matrices generating an irreducible subgroup of the diagonal ∪
/// antidiagonal matrices: one generic diagonal followed by antidiagonal
/// involutions [[0, b], [−b⁻¹, 0]]. Needs n ≥ 2 to be irreducible.
pub fn dihedral_images<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Vec<Mat2> {
    (0..n)
        .map(|k| {
            if k == 0 {
                let a = generic_eigenvalue(rng);
                Mat2::diagonal(a, a.inv())
            } else {
                let b = generic_eigenvalue(rng);
                Mat2::new(Complex64::ZERO, b, -b.inv(), Complex64::ZERO)
            }
        })
        .collect()
}

/// `n` independent Gaussian samples; for n ≥ 2 these are irreducible and
/// Ad-irreducible with overwhelming probability, and the rejection loop
/// makes that a certainty.
pub fn random_irreducible_images<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Vec<Mat2> {
    use crate::rep::{Flavor, Representation};
    use crate::words::Presentation;
    assert!(n >= 2, "a single matrix is always reducible");
    loop {
        let images: Vec<Mat2> = (0..n).map(|_| random_sl2(rng)).collect();
        let rho = Representation::new(
            Presentation::free_of_rank(n),
            images.clone(),
            Flavor::PSL2,
            crate::Tolerances::default(),
        )
        .unwrap();
        if !crate::classify::is_reducible(&rho) && !crate::classify::is_ad_reducible(&rho) {
            return images;
        }
    }
}

/// The four sign classes of Klein's 4-group, as matrices.
pub fn klein_group_elements() -> Vec<Mat2> {
    let (x, y) = klein_pair();
    vec![Mat2::identity(), x, y, x * y]
}

/// A random presentation (small rank, few relators) together with a valid
/// sign-quotient representation: generator images are drawn from Klein's
/// 4-group, and relators are random short words that happen to evaluate
/// to ±Id. Returns the presentation and the images.
pub fn random_finite_image_rep<R: Rng + ?Sized>(
    rng: &mut R,
    rank: usize,
    max_relators: usize,
) -> (crate::words::Presentation, Vec<Mat2>) {
    use crate::words::{default_names, Letter, Presentation, Word};
    let pool = klein_group_elements();
    let images: Vec<Mat2> = (0..rank)
        .map(|_| pool[rng.gen_range(0..pool.len())])
        .collect();

    let eval = |w: &Word| -> Mat2 {
        let mut out = Mat2::identity();
        for l in w.letters() {
            let g = images[l.gen];
            out = out * if l.exp > 0 { g } else { g.inverse() };
        }
        out
    };

    let mut relators: Vec<Word> = Vec::new();
    let mut attempts = 0;
    while relators.len() < max_relators && attempts < 400 {
        attempts += 1;
        let len = rng.gen_range(2..=6);
        let w = Word::from_letters((0..len).map(|_| {
            Letter::new(
                rng.gen_range(0..rank),
                if rng.gen::<bool>() { 1 } else { -1 },
            )
        }));
        if w.is_empty() {
            continue;
        }
        let value = eval(&w);
        let id = Mat2::identity();
        let central = (value - id).norm_inf() < 1e-12 || (value + id).norm_inf() < 1e-12;
        if central {
            relators.push(w);
        }
    }
    let p = Presentation::new(default_names(rank), relators).unwrap();
    (p, images)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn random_sl2_has_unit_determinant() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..200 {
            let m = random_sl2(&mut rng);
            assert!((m.det() - Complex64::ONE).norm() < 1e-12);
            assert!(m.is_finite());
        }
    }

    #[test]
    fn bounded_sampler_respects_bound() {
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        for _ in 0..100 {
            let m = bounded_random_sl2(&mut rng);
            assert!(m.norm_inf() <= 2.0);
            assert!((m.det() - Complex64::ONE).norm() < 1e-12);
        }
    }

    #[test]
    fn sampling_is_deterministic_per_seed() {
        let a = random_sl2(&mut ChaCha8Rng::seed_from_u64(42));
        let b = random_sl2(&mut ChaCha8Rng::seed_from_u64(42));
        assert_eq!(a, b);
    }

    #[test]
    fn klein_pair_traces() {
        let (x, y) = klein_pair();
        assert!(x.trace().norm() < 1e-15);
        assert!(y.trace().norm() < 1e-15);
        assert!((x * y).trace().norm() < 1e-15);
        // The commutator is -Id.
        let comm = x * y * x.inverse() * y.inverse();
        assert!((comm + Mat2::identity()).norm_inf() < 1e-15);
    }
}
