//! The obstruction to lifting a sign-quotient representation to the
//! determinant-1 group, as a linear system over the two-element field.
//!
//! Fix the stored representatives as a tentative lift. Each relator then
//! evaluates to +Id or −Id; flipping the sign of generator i multiplies
//! relator j by (−1)^{e_ji}, where e_ji is the exponent sum of generator i
//! in relator j. So a lift exists exactly when the mod-2 system
//! `E·x = rhs` is solvable, with E the relator exponent matrix and rhs
//! marking the relators that currently evaluate to −Id. The solution
//! space, when nonempty, is a coset of the kernel, and the kernel's size
//! counts the distinct lift classes.

use crate::rep::{Flavor, RelatorSign, RepError, Representation};
use crate::words::gf2::{F2Matrix, F2Vector};
use serde::Serialize;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum LiftError {
    #[error("relator {index} does not evaluate to ±Id; not a valid representation")]
    NotARepresentation { index: usize },
    #[error("representation does not lift; nothing to enumerate")]
    NotLiftable,
    #[error("2^{dim} lift classes exceed the enumeration bound 2^12")]
    TooManyLifts { dim: usize },
    #[error(transparent)]
    Rep(#[from] RepError),
}

/// Everything the obstruction computation found, in one audit-friendly
/// record.
#[derive(Debug, Clone, Serialize)]
pub struct LiftReport {
    pub liftable: bool,
    /// Sign with which each relator evaluates under the stored lift.
    pub relator_signs: Vec<i8>,
    /// Exponent sums of each generator in each relator, mod 2; one row per
    /// relator.
    pub system: F2Matrix,
    /// 1 for each relator evaluating to −Id.
    pub rhs: F2Vector,
    /// Generator sign flips repairing the lift, when one exists.
    pub solution: Option<F2Vector>,
    /// 2^(kernel dimension) when liftable.
    pub lift_class_count: Option<u64>,
}

/// Computes the lifting obstruction; see the module docs for the system.
///
/// On a liftable representation the returned report's `solution` turns
/// the stored representatives into an honest lift (every relator +Id).
pub fn lift_obstruction(rho: &Representation) -> Result<LiftReport, LiftError> {
    let signs = rho.validate();
    if let Some(index) = signs.iter().position(|s| *s == RelatorSign::Fail) {
        return Err(LiftError::NotARepresentation { index });
    }
    let relator_signs: Vec<i8> = signs.iter().map(|s| s.as_int().unwrap()).collect();

    // One row per relator: exponent sums mod 2 of each generator.
    let exp_cols = rho.presentation().relator_exponent_matrix(); // gens × relators
    let system = exp_cols.transpose();
    let mut rhs = F2Vector::zeros(relator_signs.len());
    for (j, s) in relator_signs.iter().enumerate() {
        if *s == -1 {
            rhs.set(j, 1);
        }
    }
    let solution = system.solve(&rhs);
    let liftable = solution.is_some();
    let lift_class_count = liftable.then(|| {
        let dim = system.nullity();
        if dim < 64 {
            1u64 << dim
        } else {
            u64::MAX
        }
    });
    Ok(LiftReport {
        liftable,
        relator_signs,
        system,
        rhs,
        solution,
        lift_class_count,
    })
}

/// Applies the report's sign flips to produce the repaired SL2-flavor
/// representation.
pub fn lifted_representation(
    rho: &Representation,
    report: &LiftReport,
) -> Result<Representation, LiftError> {
    let solution = report.solution.as_ref().ok_or(LiftError::NotLiftable)?;
    Ok(rho.with_flipped_signs(solution).with_flavor(Flavor::SL2))
}

/// One lift per element of the solution coset: the base solution plus
/// every kernel combination. Refuses above 2^12 classes.
pub fn enumerate_lifts(rho: &Representation) -> Result<Vec<Representation>, LiftError> {
    let report = lift_obstruction(rho)?;
    let base = report.solution.clone().ok_or(LiftError::NotLiftable)?;
    let kernel = report.system.null_space_basis();
    if kernel.len() > 12 {
        return Err(LiftError::TooManyLifts { dim: kernel.len() });
    }
    let mut lifts = Vec::with_capacity(1 << kernel.len());
    for mask in 0u32..(1 << kernel.len()) {
        let mut flips = base.clone();
        for (k, basis_vec) in kernel.iter().enumerate() {
            if mask & (1 << k) != 0 {
                flips.add_assign(basis_vec);
            }
        }
        lifts.push(rho.with_flipped_signs(&flips).with_flavor(Flavor::SL2));
    }
    Ok(lifts)
}

/// Exhaustive oracle: tries all 2^s sign assignments on the generator
/// lifts and reports whether any makes every relator +Id.
pub fn brute_force_lift_check(rho: &Representation) -> bool {
    let s = rho.rank();
    assert!(s <= 12, "brute force is bounded to rank 12");
    for mask in 0u32..(1 << s) {
        let mut flips = F2Vector::zeros(s);
        for i in 0..s {
            if mask & (1 << i) != 0 {
                flips.set(i, 1);
            }
        }
        let candidate = rho.with_flipped_signs(&flips).with_flavor(Flavor::SL2);
        if candidate.is_valid() {
            return true;
        }
    }
    false
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mat2::Mat2;
    use crate::sampling;
    use crate::words::Presentation;
    use crate::Tolerances;
    use num_complex::Complex64;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn tol() -> Tolerances {
        Tolerances::default()
    }

    fn klein_on_z2() -> Representation {
        let p = Presentation::parse("gens: x y\nrel: [x,y]\n").unwrap();
        let (x, y) = sampling::klein_pair();
        Representation::new(p, vec![x, y], crate::rep::Flavor::PSL2, tol()).unwrap()
    }

    #[test]
    fn free_groups_always_lift() {
        let mut rng = ChaCha8Rng::seed_from_u64(31);
        let p = Presentation::free(&["a", "b"]).unwrap();
        let rho = Representation::new(
            p,
            vec![
                sampling::random_sl2(&mut rng),
                sampling::random_sl2(&mut rng),
            ],
            crate::rep::Flavor::PSL2,
            tol(),
        )
        .unwrap();
        let report = lift_obstruction(&rho).unwrap();
        assert!(report.liftable);
        assert!(report.relator_signs.is_empty());
        assert_eq!(report.lift_class_count, Some(4)); // 2^2 for rank 2
        assert!(brute_force_lift_check(&rho));

        let lifts = enumerate_lifts(&rho).unwrap();
        assert_eq!(lifts.len(), 4);
        for l in &lifts {
            assert!(l.is_valid());
        }
    }

    #[test]
    fn rank_one_free_group_has_two_lifts() {
        let mut rng = ChaCha8Rng::seed_from_u64(32);
        let p = Presentation::free(&["a"]).unwrap();
        let rho = Representation::new(
            p,
            vec![sampling::random_sl2(&mut rng)],
            crate::rep::Flavor::PSL2,
            tol(),
        )
        .unwrap();
        assert_eq!(enumerate_lifts(&rho).unwrap().len(), 2);
    }

    #[test]
    fn klein_z2_pair_does_not_lift() {
        let rho = klein_on_z2();
        let report = lift_obstruction(&rho).unwrap();
        assert!(!report.liftable);
        assert_eq!(report.relator_signs, vec![-1]);
        // The commutator has zero exponent sums, so the system row is (0,0)
        // with rhs 1: inconsistent.
        assert_eq!(report.system.to_rows(), vec![vec![0, 0]]);
        assert_eq!(report.rhs.to_bits(), vec![1]);
        assert!(report.solution.is_none());
        assert!(!brute_force_lift_check(&rho));
        assert!(matches!(
            enumerate_lifts(&rho),
            Err(LiftError::NotLiftable)
        ));
    }

    #[test]
    fn order_four_rotation_on_z_mod_2_does_not_lift() {
        // <a | a²> with a ↦ diag(i, −i): the relator evaluates to −Id and
        // the exponent row is (0) mod 2, so no sign flip can repair it.
        let p = Presentation::parse("gens: a\nrel: a^2\n").unwrap();
        let i = Complex64::new(0.0, 1.0);
        let rho = Representation::new(
            p,
            vec![Mat2::diagonal(i, -i)],
            crate::rep::Flavor::PSL2,
            tol(),
        )
        .unwrap();
        let report = lift_obstruction(&rho).unwrap();
        assert!(!report.liftable);
        assert_eq!(report.relator_signs, vec![-1]);
        assert_eq!(report.system.to_rows(), vec![vec![0]]);
        assert!(!brute_force_lift_check(&rho));
    }

    #[test]
    fn solver_agrees_with_brute_force_on_random_presentations() {
        let mut rng = ChaCha8Rng::seed_from_u64(33);
        for _ in 0..50 {
            let rank = 1 + (rand::Rng::gen_range(&mut rng, 0..4usize));
            let relators = rand::Rng::gen_range(&mut rng, 0..=3usize);
            let (p, images) = sampling::random_finite_image_rep(&mut rng, rank, relators);
            let rho =
                Representation::new(p, images, crate::rep::Flavor::PSL2, tol()).unwrap();
            assert!(rho.is_valid());
            let report = lift_obstruction(&rho).unwrap();
            assert_eq!(report.liftable, brute_force_lift_check(&rho));
            if let Some(solution) = &report.solution {
                let repaired = rho.with_flipped_signs(solution);
                assert!(repaired
                    .validate()
                    .iter()
                    .all(|s| *s == RelatorSign::Plus));
            }
        }
    }

    #[test]
    fn liftability_is_conjugation_invariant() {
        let mut rng = ChaCha8Rng::seed_from_u64(34);
        let rho = klein_on_z2();
        for _ in 0..20 {
            let m = sampling::random_sl2(&mut rng);
            let conj = rho.conjugated(&m);
            assert!(!lift_obstruction(&conj).unwrap().liftable);
        }
    }

    #[test]
    fn enumerated_lifts_are_closed_under_sign_action() {
        let mut rng = ChaCha8Rng::seed_from_u64(35);
        let p = Presentation::free(&["a", "b"]).unwrap();
        let rho = Representation::new(
            p,
            vec![
                sampling::random_sl2(&mut rng),
                sampling::random_sl2(&mut rng),
            ],
            crate::rep::Flavor::PSL2,
            tol(),
        )
        .unwrap();
        let lifts = enumerate_lifts(&rho).unwrap();
        // Differences of any two lifts' sign patterns index back into the
        // enumeration: the set is a coset of the kernel.
        let patterns: Vec<Vec<u8>> = lifts
            .iter()
            .map(|l| {
                l.images()
                    .iter()
                    .zip(rho.images())
                    .map(|(a, b)| {
                        if (a.rep - b.rep).norm_inf() < 1e-12 {
                            0
                        } else {
                            1
                        }
                    })
                    .collect()
            })
            .collect();
        for p1 in &patterns {
            for p2 in &patterns {
                let diff: Vec<u8> = p1.iter().zip(p2).map(|(x, y)| x ^ y).collect();
                assert!(patterns.contains(&diff));
            }
        }
    }

    #[test]
    fn report_serializes_with_nested_arrays() {
        let rho = klein_on_z2();
        let report = lift_obstruction(&rho).unwrap();
        let text = serde_json::to_string(&report).unwrap();
        assert!(text.contains("\"liftable\":false"));
        assert!(text.contains("\"system\":[[0,0]]"));
        assert!(text.contains("\"rhs\":[1]"));
    }
}
