//! End-to-end acceptance suite: ten criteria, each printing one
//! PASS/FAIL line (run with `--nocapture` to see them on success).
//!
//! Every criterion is deterministic: all randomness flows through
//! fixed-seed ChaCha8 generators, and every tolerance is pinned in the
//! code below.

use charvar::classify::{
    ad_reducible_central_oracle, classify, is_ad_reducible, is_reducible,
    reducible_fixed_point_oracle, singular_verdict, SingularVerdict,
};
use charvar::cohomology::h1_dim;
use charvar::family::{admissible_pairs, component_census, verify_family, FamilyParams};
use charvar::lift::{brute_force_lift_check, lift_obstruction};
use charvar::mat2::{adjoint_so3, verify_fundamental_identity, Mat2, PSL2Elt};
use charvar::rep::{find_conjugator, Flavor, Representation};
use charvar::sampling;
use charvar::tracepoly::{
    j_coords_from_xf2, numeric_trace, verify_eq3, verify_eq4, xf2_coords, TraceReducer,
};
use charvar::words::{Letter, Presentation, Word};
use charvar::Tolerances;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const SEED_BASE: u64 = 0x0005_EED0;

fn rng_for(criterion: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(SEED_BASE + criterion)
}

fn tol() -> Tolerances {
    Tolerances::default()
}

/// Prints the per-criterion verdict line, then fails the test on FAIL.
fn report(number: u32, name: &str, failures: &[String]) {
    let verdict = if failures.is_empty() { "PASS" } else { "FAIL" };
    println!("ACCEPTANCE {number:02} {name}: {verdict}");
    for f in failures {
        println!("  - {f}");
    }
    assert!(failures.is_empty(), "criterion {number} ({name}) failed");
}

fn free_rep(images: Vec<Mat2>) -> Representation {
    let p = Presentation::free_of_rank(images.len());
    Representation::new(p, images, Flavor::PSL2, tol()).unwrap()
}

fn word(p: &Presentation, text: &str) -> Word {
    p.parse_word(text).unwrap()
}

/// Freely reduced random word over `rank` generators, nonempty, length at
/// most `max_len` before reduction.
fn random_word<R: Rng>(rng: &mut R, rank: usize, max_len: usize) -> Word {
    loop {
        let len = rng.gen_range(1..=max_len);
        let letters = (0..len).map(|_| Letter {
            gen: rng.gen_range(0..rank),
            exp: if rng.gen::<bool>() { 1 } else { -1 },
        });
        let w = Word::from_letters(letters);
        if !w.is_empty() {
            return w;
        }
    }
}

#[test]
fn criterion_01_symbolic_identity_suite() {
    let mut failures = Vec::new();
    if !verify_eq3() {
        failures.push("sigma product expansion is not an exact polynomial identity".into());
    }
    if !verify_eq4() {
        failures.push("commutator trace expansion is not an exact polynomial identity".into());
    }

    let mut reducer = TraceReducer::new(2);
    let p = Presentation::free_of_rank(2);
    let got = reducer.reduce_trace(&word(&p, "[a,b]")).unwrap();
    let x = reducer.reduce_trace(&word(&p, "a")).unwrap();
    let y = reducer.reduce_trace(&word(&p, "b")).unwrap();
    let z = reducer.reduce_trace(&word(&p, "a*b")).unwrap();
    let expected = &(&(&(&x * &x) + &(&y * &y)) + &(&z * &z))
        - &(&(&(&x * &y) * &z) + &charvar::tracepoly::TracePoly::constant(2));
    if !(&got - &expected).is_zero() {
        failures.push(format!("commutator trace reduced to {got}, not x²+y²+z²−xyz−2"));
    }
    let pinned = "t[a]^2 + t[b]^2 + t[ab]^2 - t[a]*t[b]*t[ab] - 2";
    if got.to_string() != pinned {
        failures.push(format!("display form {got} differs from pinned {pinned}"));
    }
    report(1, "symbolic-identity-suite", &failures);
}

#[test]
fn criterion_02_trace_oracle_suite() {
    let mut rng = rng_for(2);
    let mut failures = Vec::new();
    let mut reducers: Vec<TraceReducer> = (1..=3).map(TraceReducer::new).collect();
    let mut checked = 0usize;
    for i in 0..500 {
        let rank = rng.gen_range(1..=3);
        let w = random_word(&mut rng, rank, 12);
        let poly = match reducers[rank - 1].reduce_trace(&w) {
            Ok(p) => p,
            Err(e) => {
                failures.push(format!("word #{i} failed to reduce: {e}"));
                continue;
            }
        };
        for _ in 0..20 {
            let images: Vec<Mat2> = (0..rank)
                .map(|_| sampling::bounded_random_sl2(&mut rng))
                .collect();
            let direct = numeric_trace(&images, &w);
            let symbolic = poly.eval(&mut |v| numeric_trace(&images, v));
            let bound = 1e-8 * direct.norm().max(1.0);
            if (symbolic - direct).norm() > bound {
                failures.push(format!(
                    "word #{i}: |symbolic - direct| = {:.3e} > {bound:.3e}",
                    (symbolic - direct).norm()
                ));
            } else {
                checked += 1;
            }
        }
    }
    if checked != 500 * 20 && failures.is_empty() {
        failures.push(format!("only {checked} of 10000 substitutions checked"));
    }
    report(2, "trace-oracle-suite", &failures);
}

#[test]
fn criterion_03_adjoint_and_fundamental_identity_sweeps() {
    let mut rng = rng_for(3);
    let mut failures = Vec::new();
    let mut worst_adjoint: f64 = 0.0;
    for _ in 0..1000 {
        let x = sampling::bounded_random_sl2(&mut rng);
        let ad_trace = adjoint_so3(&PSL2Elt::new(x)).trace();
        let t = x.trace();
        let r1 = (ad_trace - (t * t - Complex64::ONE)).norm();
        let r2 = (ad_trace - ((x * x).trace() + Complex64::ONE)).norm();
        worst_adjoint = worst_adjoint.max(r1).max(r2);
    }
    if worst_adjoint > 1e-8 {
        failures.push(format!(
            "trace-of-adjoint residual {worst_adjoint:.3e} > 1e-8"
        ));
    }
    let mut worst_fundamental: f64 = 0.0;
    for _ in 0..1000 {
        let a = sampling::bounded_random_sl2(&mut rng);
        let b = sampling::bounded_random_sl2(&mut rng);
        worst_fundamental = worst_fundamental.max(verify_fundamental_identity(&a, &b));
    }
    if worst_fundamental > 1e-8 {
        failures.push(format!(
            "fundamental trace identity residual {worst_fundamental:.3e} > 1e-8"
        ));
    }
    report(3, "trace-identity-numeric-sweeps", &failures);
}

#[test]
fn criterion_04_rank_two_character_model() {
    let mut rng = rng_for(4);
    let mut failures = Vec::new();
    for i in 0..200 {
        let rho = free_rep(vec![
            sampling::bounded_random_sl2(&mut rng),
            sampling::bounded_random_sl2(&mut rng),
        ]);
        let (x, y, z, w) = xf2_coords(&rho).unwrap();
        let scale = (x * y * z).norm().max(1.0);
        let surface = (w * w - x * y * z).norm();
        if surface > 1e-9 * scale {
            failures.push(format!("sample #{i}: |W² − XYZ| = {surface:.3e} > 1e-9·scale"));
        }
        let (_, _, _, j_ab_inv) = j_coords_from_xf2(x, y, z, w);
        let tau = rho.tau(&word(rho.presentation(), "a*b^-1"));
        if (j_ab_inv - tau).norm() > 1e-8 {
            failures.push(format!(
                "sample #{i}: |J(ab⁻¹) − τ(ab⁻¹)| = {:.3e} > 1e-8",
                (j_ab_inv - tau).norm()
            ));
        }
    }
    report(4, "rank-two-character-model", &failures);
}

#[test]
fn criterion_05_cohomology_dimension_table() {
    let mut rng = rng_for(5);
    let mut failures = Vec::new();
    for n in 2..=5usize {
        for _ in 0..50 {
            let rho = free_rep(sampling::random_irreducible_images(n, &mut rng));
            let r = h1_dim(&rho);
            if r.dim_h1 != 3 * n - 3 {
                failures.push(format!("irreducible rank {n}: dim H¹ = {} ≠ {}", r.dim_h1, 3 * n - 3));
            }

            let rho = free_rep(sampling::diagonal_images(n, &mut rng));
            let r = h1_dim(&rho);
            let blocks = r.block_dims.map(|b| (b.h0.2, b.hplus_hminus.2));
            if r.dim_h1 != 3 * n - 2 || blocks != Some((n, 2 * n - 2)) {
                failures.push(format!(
                    "diagonal rank {n}: dim H¹ = {}, blocks {blocks:?} ≠ ({}, ({n}, {}))",
                    r.dim_h1,
                    3 * n - 2,
                    2 * n - 2
                ));
            }

            let rho = free_rep(sampling::dihedral_images(n, &mut rng));
            let r = h1_dim(&rho);
            let blocks = r.block_dims.map(|b| (b.h0.2, b.hplus_hminus.2));
            if r.dim_h1 != 3 * n - 3 || blocks != Some((n - 1, 2 * n - 2)) {
                failures.push(format!(
                    "dihedral rank {n}: dim H¹ = {}, blocks {blocks:?} ≠ ({}, ({}, {}))",
                    r.dim_h1,
                    3 * n - 3,
                    n - 1,
                    2 * n - 2
                ));
            }
        }
    }
    report(5, "cohomology-dimension-table", &failures);
}

#[test]
fn criterion_06_lifting_solver_vs_brute_force() {
    let mut rng = rng_for(6);
    let mut failures = Vec::new();
    for i in 0..50 {
        let rank = rng.gen_range(1..=4);
        let max_relators = rng.gen_range(1..=3);
        let (p, images) = sampling::random_finite_image_rep(&mut rng, rank, max_relators);
        let rho = Representation::new(p, images, Flavor::PSL2, tol()).unwrap();
        let solver = lift_obstruction(&rho).unwrap().liftable;
        let brute = brute_force_lift_check(&rho);
        if solver != brute {
            failures.push(format!(
                "presentation #{i}: solver says liftable={solver}, brute force says {brute}"
            ));
        }
    }

    // Klein pair on Z×Z: the standard non-liftable fixture.
    let p = Presentation::parse("gens: x y\nrel: [x,y]\n").unwrap();
    let (x, y) = sampling::klein_pair();
    let klein = Representation::new(p, vec![x, y], Flavor::PSL2, tol()).unwrap();
    let r = lift_obstruction(&klein).unwrap();
    if r.liftable || brute_force_lift_check(&klein) {
        failures.push("Klein pair on Z×Z must not lift".into());
    }

    // Free groups always lift (no relators, no obstruction).
    for n in 1..=3 {
        let images: Vec<Mat2> = (0..n).map(|_| sampling::random_sl2(&mut rng)).collect();
        let rho = free_rep(images);
        if !lift_obstruction(&rho).unwrap().liftable {
            failures.push(format!("free group of rank {n} reported non-liftable"));
        }
    }
    report(6, "lifting-solver-vs-brute-force", &failures);
}

#[test]
fn criterion_07_torus_bundle_family() {
    let mut failures = Vec::new();
    let z_samples = [
        Complex64::ZERO,
        Complex64::new(1.0, 1.0),
        Complex64::new(5.0, 0.0),
    ];
    for (m, expected_count) in [(2u32, 1usize), (6, 4), (10, 9)] {
        for (p1, p2) in admissible_pairs(m, m) {
            for &z in &z_samples {
                let params = FamilyParams::new(m, m, p1, p2, z).unwrap();
                let rho = charvar::family::build_family_rep(&params);
                let neg_id = -Mat2::identity();
                for r in rho.presentation().relators() {
                    let defect = (rho.evaluate(r).rep - neg_id).norm_inf();
                    if defect > 1e-8 {
                        failures.push(format!(
                            "(m={m}, p=({p1},{p2}), z={z}): relator defect {defect:.3e}"
                        ));
                    }
                }
                let report = verify_family(&params);
                if !report.powers_ok {
                    failures.push(format!("(m={m}, p=({p1},{p2}), z={z}): A^m or B^m far from -Id"));
                }
                if report.liftable {
                    failures.push(format!("(m={m}, p=({p1},{p2}), z={z}): must not lift"));
                }
            }
        }
        let census = component_census(m, m, &z_samples).unwrap();
        if census.distinct_count != expected_count || census.rows.len() != expected_count {
            failures.push(format!(
                "census for (m₁,m₂)=({m},{m}): {} rows, {} distinct ≠ {expected_count}",
                census.rows.len(),
                census.distinct_count
            ));
        }
        for (i, a) in census.rows.iter().enumerate() {
            for b in &census.rows[i + 1..] {
                let sep = (a.tau_alpha - b.tau_alpha)
                    .norm()
                    .max((a.tau_beta - b.tau_beta).norm());
                if sep <= 1e-6 {
                    failures.push(format!(
                        "census rows ({},{}) and ({},{}) too close: sep {sep:.3e}",
                        a.p1, a.p2, b.p1, b.p2
                    ));
                }
            }
        }
    }
    report(7, "torus-bundle-family", &failures);
}

#[test]
fn criterion_08_classification_vs_oracles() {
    let mut rng = rng_for(8);
    let mut failures = Vec::new();
    let check = |label: String, rho: &Representation, failures: &mut Vec<String>| {
        let red = is_reducible(rho);
        let ad_red = is_ad_reducible(rho);
        if red != reducible_fixed_point_oracle(rho) {
            failures.push(format!("{label}: reducibility disagrees with fixed-point oracle"));
        }
        if ad_red != ad_reducible_central_oracle(rho) {
            failures.push(format!("{label}: Ad-reducibility disagrees with ±Id oracle"));
        }
        if red && !ad_red {
            failures.push(format!("{label}: reducible but not Ad-reducible"));
        }
    };
    for i in 0..500 {
        let n = rng.gen_range(2..=3);
        let images: Vec<Mat2> = (0..n).map(|_| sampling::random_sl2(&mut rng)).collect();
        let rho = free_rep(images);
        check(format!("random #{i}"), &rho, &mut failures);
    }
    let crafted: Vec<(&str, Vec<Mat2>)> = {
        let diag = sampling::diagonal_images(2, &mut rng);
        let dihedral = sampling::dihedral_images(2, &mut rng);
        let (kx, ky) = sampling::klein_pair();
        let parabolic = vec![
            Mat2::new(
                Complex64::ONE,
                Complex64::ONE,
                Complex64::ZERO,
                Complex64::ONE,
            ),
            Mat2::new(
                Complex64::ONE,
                Complex64::new(0.0, 2.0),
                Complex64::ZERO,
                Complex64::ONE,
            ),
        ];
        vec![
            ("diagonal", diag),
            ("dihedral", dihedral),
            ("klein", vec![kx, ky]),
            ("parabolic", parabolic),
        ]
    };
    for (label, images) in crafted {
        let rho = free_rep(images);
        check(label.to_string(), &rho, &mut failures);
        let report = classify(&rho);
        match label {
            "diagonal" | "parabolic" => {
                if !report.reducible {
                    failures.push(format!("{label} fixture should be reducible"));
                }
            }
            "dihedral" | "klein" => {
                if report.reducible || !report.ad_reducible {
                    failures.push(format!(
                        "{label} fixture should be irreducible but Ad-reducible"
                    ));
                }
            }
            _ => unreachable!(),
        }
    }
    report(8, "classification-vs-oracles", &failures);
}

#[test]
fn criterion_09_conjugator_recovery() {
    let mut rng = rng_for(9);
    let mut failures = Vec::new();
    for i in 0..100 {
        let n = if i % 2 == 0 { 2 } else { 3 };
        let rho1 = free_rep(sampling::random_irreducible_images(n, &mut rng));
        let m = sampling::random_sl2(&mut rng);
        let rho2 = rho1.conjugated(&m);
        match find_conjugator(&rho1, &rho2) {
            Ok(Some(c)) => {
                // Confirm it really conjugates every image at 1e-7.
                let ci = c.inverse();
                for (g1, g2) in rho1.images().iter().zip(rho2.images()) {
                    let moved = PSL2Elt::new(c.rep * g1.rep * ci.rep);
                    if !charvar::mat2::psl2_equal(&moved, g2, 1e-7) {
                        failures.push(format!("sample #{i}: recovered conjugator off by > 1e-7"));
                        break;
                    }
                }
            }
            Ok(None) => failures.push(format!("sample #{i}: conjugator not found")),
            Err(e) => failures.push(format!("sample #{i}: {e}")),
        }

        // Change the character: replace one image and require absence.
        let mut images: Vec<Mat2> = rho2.images().iter().map(|g| g.rep).collect();
        loop {
            let candidate = sampling::random_irreducible_images(n, &mut rng);
            images[0] = candidate[0];
            let trial = free_rep(images.clone());
            let wab = word(trial.presentation(), "a*b");
            if (trial.tau(&wab) - rho2.tau(&wab)).norm() > 1e-3 && !is_reducible(&trial) {
                match find_conjugator(&rho1, &trial) {
                    Ok(Some(_)) => {
                        failures.push(format!("sample #{i}: found conjugator across characters"))
                    }
                    Ok(None) => {}
                    Err(e) => failures.push(format!("sample #{i} (modified): {e}")),
                }
                break;
            }
        }
    }
    report(9, "conjugator-recovery", &failures);
}

#[test]
fn criterion_10_singular_locus_table() {
    let mut rng = rng_for(10);
    let mut failures = Vec::new();
    let expect =
        |label: &str, rho: &Representation, want: SingularVerdict, failures: &mut Vec<String>| {
            let got = singular_verdict(rho);
            if got != want {
                failures.push(format!("{label}: verdict {got:?}, expected {want:?}"));
            }
        };

    let dihedral2 = free_rep(sampling::dihedral_images(2, &mut rng));
    expect("F2 dihedral", &dihedral2, SingularVerdict::Singular, &mut failures);

    let diag2 = free_rep(sampling::diagonal_images(2, &mut rng));
    expect("F2 diagonal", &diag2, SingularVerdict::Smooth, &mut failures);

    let diag3 = free_rep(sampling::diagonal_images(3, &mut rng));
    expect("F3 diagonal", &diag3, SingularVerdict::Singular, &mut failures);

    for n in 2..=4 {
        let generic = free_rep(sampling::random_irreducible_images(n, &mut rng));
        expect(
            &format!("F{n} generic"),
            &generic,
            SingularVerdict::Smooth,
            &mut failures,
        );
    }
    report(10, "singular-locus-table", &failures);
}
