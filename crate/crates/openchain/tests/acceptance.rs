//! Acceptance suite: one test per criterion, each printing a PASS/FAIL line
//! with its measured residual and pinned tolerance.
//!
//! Run with `cargo test --test acceptance` (add `-- --nocapture` to see the
//! per-criterion lines on success).

use num_complex::Complex64;
use openchain::bethe::{self, SolverConfig};
use openchain::boundary::{self, TRIANGULARIZATION_TOL};
use openchain::lattice;
use openchain::linalg::{self, cr, CMatrix};
use openchain::sample;
use openchain::scalar::{BoundarySpec, GeneralBoundary, ModelParams, RootSet, TriangularBoundary};
use openchain::verify;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::time::Instant;

const ETA: Complex64 = Complex64::new(1.0, 0.0);

fn verdict(criterion: &str, passed: bool, detail: &str) {
    let flag = if passed { "PASS" } else { "FAIL" };
    println!("acceptance {flag} {criterion}: {detail}");
    assert!(passed, "{criterion}: {detail}");
}

// Fixed constraint-surface draws per (length, index).
fn surface_draw(length: usize, index: u64) -> (GeneralBoundary, GeneralBoundary) {
    let mut rng = ChaCha8Rng::seed_from_u64(0xacce_0000 + 100 * length as u64 + index);
    boundary::sample_constrained_pair(&mut rng)
}

fn gauge_for(
    right: &GeneralBoundary,
    left: &GeneralBoundary,
) -> (TriangularBoundary, TriangularBoundary) {
    let result = boundary::triangularize(right, left, ETA, TRIANGULARIZATION_TOL)
        .expect("surface draw must triangularize");
    (result.right_tri, result.left_tri)
}

fn solver() -> SolverConfig {
    SolverConfig {
        starts: 250,
        ..Default::default()
    }
}

#[test]
fn criterion_01_yang_baxter() {
    let start = Instant::now();
    let report = verify::check_ybe(ETA, 200, 101, 1e-12);
    let elapsed = start.elapsed();
    let ok = report.passed && elapsed.as_secs_f64() < 1.0;
    verdict(
        "01 yang-baxter",
        ok,
        &format!(
            "200 triples, max residual {:.3e} (tol 1e-12), runtime {:.3}s (< 1s)",
            report.max_residual,
            elapsed.as_secs_f64()
        ),
    );
}

#[test]
fn criterion_02_unitarity() {
    let report = verify::check_unitarity(ETA, 50, 102, 1e-12);
    verdict(
        "02 unitarity",
        report.passed,
        &format!(
            "50 points, max residual {:.3e} (tol 1e-12)",
            report.max_residual
        ),
    );
}

#[test]
fn criterion_03_reflection_equation() {
    let start = Instant::now();
    let mut worst: f64 = 0.0;
    for length in [2usize, 3] {
        let params = ModelParams::homogeneous(ETA, length).unwrap();
        for draw in 0..3u64 {
            let (right, _) = surface_draw(length, draw);
            let report = verify::check_reflection(
                &params,
                &BoundarySpec::General(right),
                10,
                200 + draw,
                1e-9,
            );
            worst = worst.max(report.max_residual);
        }
    }
    let elapsed = start.elapsed();
    let ok = worst <= 1e-9 && elapsed.as_secs_f64() < 30.0;
    verdict(
        "03 reflection equation",
        ok,
        &format!(
            "L in {{2,3}}, 3 surface draws, 10 pairs each: max residual {worst:.3e} (tol 1e-9), runtime {:.2}s (< 30s)",
            elapsed.as_secs_f64()
        ),
    );
}

#[test]
fn criterion_04_dual_reflection() {
    let mut rng = ChaCha8Rng::seed_from_u64(0xacce_0004);
    let mut draw = || Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0));
    let left = GeneralBoundary::new(draw(), draw(), draw(), draw());
    let report = lattice::check_dual_reflection(&left, ETA, 20, 104);
    verdict(
        "04 dual reflection",
        report.passed,
        &format!(
            "20 pairs, max residual {:.3e} (tol 1e-12)",
            report.max_residual
        ),
    );
}

#[test]
fn criterion_05_exchange_relations_and_ablations() {
    let mut worst: f64 = 0.0;
    let mut controls_ok = true;
    for length in [2usize, 3] {
        let params = ModelParams::homogeneous(ETA, length).unwrap();
        let (right, left) = surface_draw(length, 0);
        let (right_tri, _) = gauge_for(&right, &left);
        let spec = BoundarySpec::Triangular(right_tri);
        let report = verify::check_commutation_relations(&params, &spec, 50, 205, 1e-9);
        worst = worst.max(report.max_residual);
        let control = verify::check_commutation_ablations(&params, &spec, 3, 205);
        controls_ok &= control.passed;
    }
    let ok = worst <= 1e-9 && controls_ok;
    verdict(
        "05 exchange relations",
        ok,
        &format!(
            "four relations, L in {{2,3}}, 50 pairs: max residual {worst:.3e} (tol 1e-9); ablation controls fail as required: {controls_ok}"
        ),
    );
}

#[test]
fn criterion_06_pseudo_vacuum() {
    let mut worst: f64 = 0.0;
    let mut control_ok = true;
    for length in [2usize, 3] {
        let params = ModelParams::homogeneous(ETA, length).unwrap();
        let (right, left) = surface_draw(length, 1);
        let (right_tri, left_tri) = gauge_for(&right, &left);
        let report = verify::check_vacuum(&params, &right_tri, &left_tri, 10, 206, 1e-10);
        worst = worst.max(report.max_residual);
        // Negative control in a generic non-triangular gauge.
        let mut general = right;
        if general.delta.norm() < 1e-6 {
            general.delta = Complex64::new(0.8, 0.2);
        }
        let control = verify::check_vacuum_nontriangular_control(&params, &general, 3, 206);
        control_ok &= control.passed;
    }
    let ok = worst <= 1e-10 && control_ok;
    verdict(
        "06 pseudo-vacuum",
        ok,
        &format!(
            "triangular gauge max residual {worst:.3e} (tol 1e-10); non-triangular annihilator control: {control_ok}"
        ),
    );
}

#[test]
fn criterion_07_action_formulas() {
    let mut worst: f64 = 0.0;
    for length in [2usize, 3] {
        let params = ModelParams::homogeneous(ETA, length).unwrap();
        let (right, left) = surface_draw(length, 2);
        let (right_tri, left_tri) = gauge_for(&right, &left);
        let report =
            verify::check_action_formulas(&params, &right_tri, &left_tri, length.min(3), 207, 1e-8);
        worst = worst.max(report.max_residual);
    }
    verdict(
        "07 action formulas",
        worst <= 1e-8,
        &format!("levels up to 3, L in {{2,3}}: max residual {worst:.3e} (tol 1e-8)"),
    );
}

#[test]
fn criterion_08_main_theorem() {
    let cfg = solver();
    let mut worst_bethe: f64 = 0.0;
    let mut worst_eigen: f64 = 0.0;
    let mut all_found = true;
    let mut detail = String::new();
    for length in [2usize, 3] {
        let params = ModelParams::homogeneous(ETA, length).unwrap();
        for draw in 0..3u64 {
            let (right, left) = surface_draw(length, 10 + draw);
            let (right_tri, left_tri) = gauge_for(&right, &left);
            let levels = bethe::solve_ladder(
                length,
                &params,
                &right_tri,
                &left_tri,
                &cfg,
                0x8000 + 97 * draw,
            )
            .unwrap();
            for (n, (states, diag)) in levels.into_iter().enumerate().skip(1) {
                // At least one state per level must verify end to end.
                let mut best: Option<(f64, f64)> = None;
                for state in &states {
                    let report =
                        bethe::verify_eigenpair(state, &params, &right_tri, &left_tri, 5, 208)
                            .unwrap();
                    if report.passed {
                        best = Some((state.residual_norm, report.max_residual));
                        break;
                    }
                }
                match best {
                    Some((bethe_res, eigen_res)) => {
                        worst_bethe = worst_bethe.max(bethe_res);
                        worst_eigen = worst_eigen.max(eigen_res);
                    }
                    None => {
                        all_found = false;
                        detail.push_str(&format!(
                            "no verified state for L={length} N={n} draw={draw} ({} accepted, {diag:?}); ",
                            states.len()
                        ));
                    }
                }
            }
        }
    }
    let ok = all_found && worst_bethe < 1e-11 && worst_eigen <= 1e-8;
    verdict(
        "08 main theorem",
        ok,
        &format!(
            "L in {{2,3}}, N in 1..=L, 3 draws: states found for every case: {all_found}; \
             worst Bethe residual {worst_bethe:.3e} (tol 1e-11); worst eigenpair residual \
             {worst_eigen:.3e} (tol 1e-8, includes dense-spectrum match at 1e-6) {detail}"
        ),
    );
}

#[test]
fn criterion_09_cancellation_coefficients() {
    let cfg = solver();
    let mut worst: f64 = 0.0;
    let mut controls_ok = true;
    for length in [2usize, 3] {
        let params = ModelParams::homogeneous(ETA, length).unwrap();
        let (right, left) = surface_draw(length, 20);
        let (right_tri, left_tri) = gauge_for(&right, &left);
        let n = length.min(3);
        let (states, _) = bethe::solve_bethe(
            n,
            &params,
            &right_tri,
            &left_tri,
            &cfg,
            0x9000 + length as u64,
        )
        .unwrap();
        let state = states
            .first()
            .expect("on-shell state for coefficient check");
        let report =
            verify::check_proof_coefficients(state, &params, &right_tri, &left_tri, 10, 209, 1e-7);
        worst = worst.max(report.max_residual);
        let control =
            verify::check_proof_offshell_control(state, &params, &right_tri, &left_tri, 10, 209);
        controls_ok &= control.passed;
    }
    let ok = worst <= 1e-7 && controls_ok;
    verdict(
        "09 cancellation coefficients",
        ok,
        &format!(
            "all index sets, 10 probes, on shell: max residual {worst:.3e} (tol 1e-7); \
             off-shell controls exceed 1e-3: {controls_ok}"
        ),
    );
}

#[test]
fn criterion_10_transfer_commutativity_and_forms() {
    let mut worst: f64 = 0.0;
    for length in [2usize, 3] {
        let params = ModelParams::homogeneous(ETA, length).unwrap();
        let (right, left) = surface_draw(length, 30);
        let (right_tri, left_tri) = gauge_for(&right, &left);
        // build_transfer enforces the trace-form/kappa-form agreement at
        // 1e-11 internally; a mismatch would error out here.
        let report = verify::check_commutativity(
            &params,
            &BoundarySpec::Triangular(right_tri),
            &BoundarySpec::Triangular(left_tri),
            10,
            210,
            1e-10,
        );
        worst = worst.max(report.max_residual);
    }
    verdict(
        "10 transfer commutativity",
        worst <= 1e-10,
        &format!(
            "10 pairs, L in {{2,3}}: max commutator residual {worst:.3e} (tol 1e-10); \
             trace form vs kappa expansion agreement enforced at 1e-11 on every build"
        ),
    );
}

#[test]
fn criterion_11_hamiltonian_derivative() {
    // The explicit Hamiltonian against the finite-difference derivative of
    // the transfer family, H = eta/(4 alpha alpha_bar) t'(0) on the
    // homogeneous chain (prefactor exposed by the lattice module).
    let mut worst: f64 = 0.0;
    for length in [2usize, 3] {
        let params = ModelParams::homogeneous(ETA, length).unwrap();
        let (right, left) = surface_draw(length, 40);
        let (right_tri, left_tri) = gauge_for(&right, &left);
        let right_spec = BoundarySpec::Triangular(right_tri);
        let left_spec = BoundarySpec::Triangular(left_tri);
        let h = lattice::build_hamiltonian(&params, &right_spec, &left_spec).unwrap();
        let step = cr(1e-6);
        let tp = lattice::build_transfer(step, &params, &right_spec, &left_spec).unwrap();
        let tm = lattice::build_transfer(-step, &params, &right_spec, &left_spec).unwrap();
        let fd = tp
            .sub(&tm)
            .scale(cr(1.0) / (2.0 * step))
            .scale(lattice::hamiltonian_prefactor(ETA, &right_spec, &left_spec));
        worst = worst.max(h.rel_distance(&fd));
    }
    verdict(
        "11 hamiltonian from transfer derivative",
        worst <= 1e-6,
        &format!(
            "L in {{2,3}}, central difference at step 1e-6: relative error {worst:.3e} (tol 1e-6)"
        ),
    );
}

#[test]
fn criterion_12_triangularization() {
    let mut rng = ChaCha8Rng::seed_from_u64(0xacce_0012);
    let mut worst_residual: f64 = 0.0;
    let mut map_ok = true;
    for _ in 0..100 {
        let (right, left) = boundary::sample_constrained_pair(&mut rng);
        let result = boundary::triangularize(&right, &left, ETA, TRIANGULARIZATION_TOL)
            .expect("on-surface draw must triangularize");
        worst_residual = worst_residual
            .max(result.lower_left_residuals[0])
            .max(result.lower_left_residuals[1]);
        let map = boundary::verify_parameter_map(&right, &left, &result);
        map_ok &= map.passed;
    }
    let mut rejected = 0;
    for _ in 0..100 {
        let (right, left) = boundary::sample_unconstrained_pair(&mut rng);
        if boundary::triangularize(&right, &left, ETA, TRIANGULARIZATION_TOL).is_err() {
            rejected += 1;
        }
    }
    // Branch choice: for a pair where both square-root branches share
    // eigenvectors, the two gauges must give the same transfer spectrum.
    let right = GeneralBoundary::new(cr(1.1), cr(0.6), cr(0.0), cr(0.0));
    let left = GeneralBoundary::new(cr(1.9), cr(0.8), cr(0.0), cr(0.0));
    let params = ModelParams::homogeneous(ETA, 2).unwrap();
    let pos = boundary::triangularize_with_branch(&right, &left, ETA, TRIANGULARIZATION_TOL, false)
        .unwrap();
    let neg = boundary::triangularize_with_branch(&right, &left, ETA, TRIANGULARIZATION_TOL, true)
        .unwrap();
    assert!(
        (pos.right_tri.b + neg.right_tri.b).norm() < 1e-12,
        "branch preference did not flip the sign of b"
    );
    let mut spectrum_gap: f64 = 0.0;
    let mut prng = ChaCha8Rng::seed_from_u64(0xacce_0013);
    for _ in 0..3 {
        let u = sample::draw_probe(&mut prng, &params, &[], sample::PROBE_GUARD).unwrap();
        let t_pos = lattice::build_transfer(
            u,
            &params,
            &BoundarySpec::Triangular(pos.right_tri),
            &BoundarySpec::Triangular(pos.left_tri),
        )
        .unwrap();
        let t_neg = lattice::build_transfer(
            u,
            &params,
            &BoundarySpec::Triangular(neg.right_tri),
            &BoundarySpec::Triangular(neg.left_tri),
        )
        .unwrap();
        let e_pos = linalg::eigenvalues(&t_pos).unwrap();
        let e_neg = linalg::eigenvalues(&t_neg).unwrap();
        spectrum_gap = spectrum_gap
            .max(linalg::match_multisets(&e_pos, &e_neg) / t_pos.frobenius_norm().max(1.0));
    }
    let ok = worst_residual <= 1e-10 && map_ok && rejected == 100 && spectrum_gap <= 1e-8;
    verdict(
        "12 triangularization",
        ok,
        &format!(
            "100 on-surface draws: worst lower-left residual {worst_residual:.3e} (tol 1e-10), \
             parameter map confirmed: {map_ok}; off-surface rejections 100/100: {}; \
             b-branch spectrum gap {spectrum_gap:.3e} (tol 1e-8)",
            rejected == 100
        ),
    );
}

#[test]
fn criterion_13_cbar_reduction_and_root_independence() {
    let params = ModelParams::homogeneous(ETA, 2).unwrap();
    let (right, left) = surface_draw(2, 50);
    let (right_tri, left_tri) = gauge_for(&right, &left);
    let mut rng = ChaCha8Rng::seed_from_u64(0xacce_0014);
    let roots = RootSet::new(
        sample::draw_roots(&mut rng, 2, &params, &left_tri, sample::PROBE_GUARD).unwrap(),
    );
    let exact = verify::check_cbar_reduction(&params, &right_tri, &left_tri, &roots, 213, 1e-14);
    // Continuity probe: a left off-diagonal of 1e-30 still collapses.
    let tiny = TriangularBoundary::new(left_tri.a, left_tri.b, cr(1e-30));
    let tiny_report = verify::check_cbar_reduction(&params, &right_tri, &tiny, &roots, 213, 1e-14);
    let mut sweeps_ok = true;
    let mut worst_sweep: f64 = 0.0;
    for n in 1..=2usize {
        let report = verify::check_root_c_independence(
            &params,
            &right_tri,
            &left_tri,
            n,
            &solver(),
            213,
            1e-9,
        );
        sweeps_ok &= report.passed;
        worst_sweep = worst_sweep.max(report.max_residual);
    }
    let ok = exact.passed && tiny_report.passed && sweeps_ok;
    verdict(
        "13 collapsed ansatz and root independence",
        ok,
        &format!(
            "vanishing off-diagonal reduction residual {:.3e} (tol 1e-14, continuity probe {:.3e}); \
             five-value sweep leaves root multisets identical to {worst_sweep:.3e} (tol 1e-9)",
            exact.max_residual, tiny_report.max_residual
        ),
    );
}

#[test]
fn criterion_14_isospectrality() {
    let mut worst: f64 = 0.0;
    let m = CMatrix::from_rows(&[
        vec![Complex64::new(0.9, 0.1), Complex64::new(0.4, -0.2)],
        vec![Complex64::new(-0.3, 0.2), Complex64::new(1.1, 0.0)],
    ]);
    for length in [2usize, 3] {
        let params = ModelParams::homogeneous(ETA, length).unwrap();
        let (right, left) = surface_draw(length, 60);
        let report = verify::check_isospectral(&params, &right, &left, &m, 3, 214, 1e-8);
        worst = worst.max(report.max_residual);
    }
    verdict(
        "14 isospectrality under boundary conjugation",
        worst <= 1e-8,
        &format!("L in {{2,3}}, 3 probes: matched-spectrum gap {worst:.3e} (tol 1e-8)"),
    );
}
