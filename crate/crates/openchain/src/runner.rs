//! Command orchestration: derives the triangular gauge from the configured
//! boundaries, runs the selected checks or the solver, and assembles
//! deterministic JSON (and CSV) outputs.

use crate::bethe::{self, BetheState};
use crate::boundary::{self, TRIANGULARIZATION_TOL};
use crate::config::RunConfig;
use crate::error::{Error, Result};
use crate::lattice;
use crate::linalg::{self, CMatrix};
use crate::report::{self, CheckReport};
use crate::sample;
use crate::scalar::{BoundarySpec, GeneralBoundary, ModelParams, RootSet, TriangularBoundary};
use crate::serde_c64::to_pair;
use crate::verify;
use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

/// Both gauges of the configured boundary pair: the original parameters and
/// the common upper-triangular form the ansatz machinery runs in.
pub struct GaugeContext {
    pub params: ModelParams,
    pub right_general: GeneralBoundary,
    pub left_general: GeneralBoundary,
    pub right_tri: TriangularBoundary,
    pub left_tri: TriangularBoundary,
    pub conjugator: CMatrix,
    pub used_printed_m: bool,
}

impl GaugeContext {
    pub fn from_config(cfg: &RunConfig) -> Result<Self> {
        let params = cfg.model_params()?;
        Self::new(params, &cfg.right, &cfg.left)
    }

    pub fn new(params: ModelParams, right: &BoundarySpec, left: &BoundarySpec) -> Result<Self> {
        let right_general = right.to_general();
        let left_general = left.to_general();
        match (right, left) {
            (BoundarySpec::Triangular(rt), BoundarySpec::Triangular(lt)) => Ok(Self {
                params,
                right_general,
                left_general,
                right_tri: *rt,
                left_tri: *lt,
                conjugator: CMatrix::identity(2),
                used_printed_m: false,
            }),
            _ => {
                let result = boundary::triangularize(
                    &right_general,
                    &left_general,
                    params.eta,
                    TRIANGULARIZATION_TOL,
                )?;
                Ok(Self {
                    params,
                    right_general,
                    left_general,
                    right_tri: result.right_tri,
                    left_tri: result.left_tri,
                    conjugator: result.m,
                    used_printed_m: result.used_printed_m,
                })
            }
        }
    }
}

pub const DEFAULT_SUITE: &[&str] = &[
    "ybe",
    "unitarity",
    "dual_reflection",
    "reflection",
    "reflection_corrupted",
    "commutation",
    "commutation_ablation",
    "action",
    "action_ablation",
    "vacuum",
    "vacuum_control",
    "commutativity",
    "proof_coefficients",
    "proof_offshell_control",
    "spectrum",
    "cbar_reduction",
    "root_c_independence",
    "isospectral",
    "crossing",
];

fn tol_for(cfg: &RunConfig, name: &str) -> f64 {
    cfg.tolerance(name)
        .or_else(|| verify::default_tolerances().get(name).copied())
        .unwrap_or(1e-9)
}

// The on-shell state feeding the proof-coefficient checks: the largest
// excitation number (capped at 2) for which the solver finds roots.
fn proof_state(cfg: &RunConfig, gauge: &GaugeContext, seed: u64) -> Result<BetheState> {
    let mut fallback = None;
    for n in (1..=cfg.length.min(2)).rev() {
        let (states, _) = bethe::solve_bethe(
            n,
            &gauge.params,
            &gauge.right_tri,
            &gauge.left_tri,
            &cfg.solver,
            seed,
        )?;
        if let Some(state) = states.into_iter().next() {
            if n == cfg.length.min(2) {
                return Ok(state);
            }
            fallback.get_or_insert(state);
        }
    }
    fallback.ok_or_else(|| {
        Error::NonConvergence("no on-shell state found for the proof-coefficient checks".into())
    })
}

/// Runs one named check. Unknown names are a config error.
pub fn run_check(
    cfg: &RunConfig,
    gauge: &GaugeContext,
    name: &str,
    seed: u64,
) -> Result<CheckReport> {
    let params = &gauge.params;
    let eta = params.eta;
    let right_spec = BoundarySpec::Triangular(gauge.right_tri);
    let left_spec = BoundarySpec::Triangular(gauge.left_tri);
    let tol = tol_for(cfg, name);
    let report = match name {
        "ybe" => verify::check_ybe(eta, 200, seed, tol),
        "unitarity" => verify::check_unitarity(eta, 50, seed, tol),
        "dual_reflection" => lattice::check_dual_reflection(&gauge.left_general, eta, 20, seed),
        // Gauge-independent statements run in the original gauge.
        "reflection" => verify::check_reflection(
            params,
            &BoundarySpec::General(gauge.right_general),
            10,
            seed,
            tol,
        ),
        "reflection_corrupted" => verify::check_reflection_corrupted(
            params,
            &BoundarySpec::General(gauge.right_general),
            3,
            seed,
        ),
        "commutation" => verify::check_commutation_relations(params, &right_spec, 10, seed, tol),
        "commutation_ablation" => verify::check_commutation_ablations(params, &right_spec, 3, seed),
        "action" => verify::check_action_formulas(
            params,
            &gauge.right_tri,
            &gauge.left_tri,
            params.length.min(3),
            seed,
            tol,
        ),
        "action_ablation" => {
            verify::check_action_ablation(params, &gauge.right_tri, &gauge.left_tri, seed)
        }
        "vacuum" => verify::check_vacuum(params, &gauge.right_tri, &gauge.left_tri, 10, seed, tol),
        "vacuum_control" => {
            // A generic non-triangular right boundary: reuse the configured
            // one when it is already non-triangular, else a fixed probe.
            let general = if gauge.right_general.delta.norm() > 1e-12 {
                gauge.right_general
            } else {
                GeneralBoundary::new(
                    gauge.right_general.alpha,
                    gauge.right_general.beta,
                    gauge.right_general.gamma,
                    Complex64::new(0.8, 0.2),
                )
            };
            verify::check_vacuum_nontriangular_control(params, &general, 3, seed)
        }
        "commutativity" => {
            verify::check_commutativity(params, &right_spec, &left_spec, 10, seed, tol)
        }
        "proof_coefficients" => {
            let state = proof_state(cfg, gauge, seed)?;
            verify::check_proof_coefficients(
                &state,
                params,
                &gauge.right_tri,
                &gauge.left_tri,
                10,
                seed,
                tol,
            )
        }
        "proof_offshell_control" => {
            let state = proof_state(cfg, gauge, seed)?;
            verify::check_proof_offshell_control(
                &state,
                params,
                &gauge.right_tri,
                &gauge.left_tri,
                10,
                seed,
            )
        }
        "spectrum" => {
            let (_, hi) = cfg.excitation_range();
            verify::check_spectrum_match(
                params,
                &gauge.right_tri,
                &gauge.left_tri,
                hi.min(params.length),
                &cfg.solver,
                seed,
                tol,
            )
        }
        "cbar_reduction" => {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let n = params.length.min(2);
            let roots =
                sample::draw_roots(&mut rng, n, params, &gauge.left_tri, sample::PROBE_GUARD)
                    .ok_or_else(|| Error::Input("no admissible roots".into()))?;
            verify::check_cbar_reduction(
                params,
                &gauge.right_tri,
                &gauge.left_tri,
                &RootSet::new(roots),
                seed,
                tol,
            )
        }
        "root_c_independence" => verify::check_root_c_independence(
            params,
            &gauge.right_tri,
            &gauge.left_tri,
            params.length.clamp(1, 2),
            &cfg.solver,
            seed,
            tol,
        ),
        "isospectral" => verify::check_isospectral(
            params,
            &gauge.right_general,
            &gauge.left_general,
            &test_conjugator(&gauge.conjugator),
            3,
            seed,
            tol,
        ),
        "crossing" => verify::probe_crossing(params, &right_spec, &left_spec, 5, seed),
        other => return Err(Error::Config(format!("unknown check name: {other}"))),
    };
    Ok(report)
}

// Isospectrality needs a non-trivial conjugation even when the configured
// boundaries are already triangular (conjugator = identity).
fn test_conjugator(m: &CMatrix) -> CMatrix {
    if m.sub(&CMatrix::identity(2)).frobenius_norm() > 1e-12 {
        m.clone()
    } else {
        CMatrix::from_rows(&[
            vec![Complex64::new(1.0, 0.0), Complex64::new(0.4, -0.1)],
            vec![Complex64::new(-0.2, 0.3), Complex64::new(0.9, 0.0)],
        ])
    }
}

/// `check` subcommand: runs the selected suite (checks are independent jobs
/// and execute concurrently), returns (output, all normative checks
/// passed). Assembly is deterministic: reports are merged by check name.
pub fn cmd_check(cfg: &RunConfig, suite: &[String], seed: u64) -> Result<(Value, bool)> {
    let gauge = GaugeContext::from_config(cfg)?;
    let names: Vec<String> = if suite.is_empty() {
        DEFAULT_SUITE.iter().map(|s| s.to_string()).collect()
    } else {
        suite.to_vec()
    };
    let results: Vec<Result<CheckReport>> = std::thread::scope(|scope| {
        let handles: Vec<_> = names
            .iter()
            .map(|name| {
                let (cfg, gauge) = (&*cfg, &gauge);
                scope.spawn(move || run_check(cfg, gauge, name, seed))
            })
            .collect();
        handles
            .into_iter()
            .map(|h| h.join().expect("check job panicked"))
            .collect()
    });
    let mut reports = results.into_iter().collect::<Result<Vec<_>>>()?;
    reports.sort_by(|a, b| a.check_name.cmp(&b.check_name));
    let summary = report::summarize(&reports);
    let ok = summary.all_normative_passed;
    let out = json!({
        "config_seed": seed,
        "suite": reports,
        "summary": summary,
    });
    Ok((out, ok))
}

/// `solve` subcommand: Bethe roots, eigenpair verification and spectrum
/// coverage for every excitation number in the configured range. Returns
/// (JSON output, CSV companion, all eigenpairs verified).
pub fn cmd_solve(cfg: &RunConfig, seed: u64) -> Result<(Value, String, bool)> {
    let gauge = GaugeContext::from_config(cfg)?;
    let params = &gauge.params;
    let (lo, hi) = cfg.excitation_range();
    let mut all_ok = true;
    let mut state_entries = vec![];
    let mut diagnostics = vec![];
    let mut csv = String::from("state_id,N,probe_re,probe_im,lambda_re,lambda_im,residual\n");
    let mut state_id = 0usize;
    let levels = bethe::solve_ladder(
        hi,
        params,
        &gauge.right_tri,
        &gauge.left_tri,
        &cfg.solver,
        seed,
    )?;
    for (n, (states, diag)) in levels.into_iter().enumerate() {
        if n < lo {
            continue;
        }
        diagnostics.push(json!({"n": n, "diagnostics": diag}));
        for state in states {
            let rows =
                bethe::eigenpair_rows(&state, params, &gauge.right_tri, &gauge.left_tri, 5, seed)?;
            let max_residual = rows.iter().map(|r| r.residual).fold(0.0f64, f64::max);
            let spectrum_ok = rows.iter().all(|r| match r.spectrum_distance {
                Some(d) => d <= 1e-6 * (1.0 + r.lambda.norm()),
                None => true,
            });
            let verified = max_residual <= 1e-8 && spectrum_ok;
            all_ok &= verified;
            for row in &rows {
                csv.push_str(&format!(
                    "{},{},{},{},{},{},{}\n",
                    state_id,
                    n,
                    row.probe.re,
                    row.probe.im,
                    row.lambda.re,
                    row.lambda.im,
                    row.residual
                ));
            }
            state_entries.push(json!({
                "state_id": state_id,
                "n": n,
                "roots": state.roots,
                "residual_norm": state.residual_norm,
                "lambda_fingerprint": state.lambda_fingerprint.iter().map(|&z| to_pair(z)).collect::<Vec<_>>(),
                "near_degenerate": state.near_degenerate,
                "family": state.family,
                "eigenpair": {
                    "max_residual": max_residual,
                    "verified": verified,
                    "rows": rows,
                },
            }));
            state_id += 1;
        }
    }
    let coverage = verify::check_spectrum_match(
        params,
        &gauge.right_tri,
        &gauge.left_tri,
        hi.min(params.length),
        &cfg.solver,
        seed,
        tol_for(cfg, "spectrum"),
    );
    let out = json!({
        "config_seed": seed,
        "gauge": {
            "right_triangular": gauge.right_tri,
            "left_triangular": gauge.left_tri,
            "used_printed_m": gauge.used_printed_m,
        },
        "states": state_entries,
        "solver_diagnostics": diagnostics,
        "spectrum_coverage": coverage,
    });
    Ok((out, csv, all_ok))
}

/// `triangularize` subcommand: constraint value, conjugating matrix and
/// triangular parameters. Errors with a constraint report when violated.
pub fn cmd_triangularize(cfg: &RunConfig) -> Result<(Value, bool)> {
    let params = cfg.model_params()?;
    let right = cfg.right.to_general();
    let left = cfg.left.to_general();
    let cval = boundary::constraint_value(&right, &left);
    match boundary::triangularize(&right, &left, params.eta, TRIANGULARIZATION_TOL) {
        Ok(result) => {
            let map_report = boundary::verify_parameter_map(&right, &left, &result);
            let out = json!({
                "constraint_value": to_pair(cval),
                "triangularizable": true,
                "m": matrix_to_json(&result.m),
                "right_triangular": result.right_tri,
                "left_triangular": result.left_tri,
                "lower_left_residuals": result.lower_left_residuals,
                "used_printed_m": result.used_printed_m,
                "parameter_map": map_report,
            });
            Ok((out, true))
        }
        Err(Error::NotTriangularizable { value, value_abs }) => {
            let out = json!({
                "constraint_value": to_pair(value),
                "constraint_magnitude": value_abs,
                "triangularizable": false,
            });
            Ok((out, false))
        }
        Err(e) => Err(e),
    }
}

/// `spectrum` subcommand: dense transfer spectra at three probe points plus
/// the Bethe coverage report.
pub fn cmd_spectrum(cfg: &RunConfig, seed: u64) -> Result<Value> {
    let gauge = GaugeContext::from_config(cfg)?;
    let params = &gauge.params;
    let right_spec = BoundarySpec::Triangular(gauge.right_tri);
    let left_spec = BoundarySpec::Triangular(gauge.left_tri);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut probes = vec![];
    for _ in 0..3 {
        let u = sample::draw_probe(&mut rng, params, &[], sample::PROBE_GUARD)
            .ok_or_else(|| Error::Input("no admissible probe".into()))?;
        let t = lattice::build_transfer(u, params, &right_spec, &left_spec)?;
        let eigs = linalg::eigenvalues(&t)?;
        probes.push(json!({
            "u": to_pair(u),
            "eigenvalues": eigs.iter().map(|&z| to_pair(z)).collect::<Vec<_>>(),
        }));
    }
    let (_, hi) = cfg.excitation_range();
    let coverage = verify::check_spectrum_match(
        params,
        &gauge.right_tri,
        &gauge.left_tri,
        hi.min(params.length),
        &cfg.solver,
        seed,
        tol_for(cfg, "spectrum"),
    );
    Ok(json!({
        "config_seed": seed,
        "dimension": 1usize << params.length,
        "probes": probes,
        "coverage": coverage,
    }))
}

/// `hamiltonian` subcommand: the explicit open-chain Hamiltonian, its
/// spectrum, and the transfer-derivative cross-check.
pub fn cmd_hamiltonian(cfg: &RunConfig) -> Result<Value> {
    let params = cfg.model_params()?;
    let h = lattice::build_hamiltonian(&params, &cfg.right, &cfg.left)?;
    let eigs = linalg::eigenvalues(&h)?;
    // Central-difference cross-check against the generating transfer family.
    let step = Complex64::new(1e-6, 0.0);
    let tp = lattice::build_transfer(step, &params, &cfg.right, &cfg.left)?;
    let tm = lattice::build_transfer(-step, &params, &cfg.right, &cfg.left)?;
    let pref = lattice::hamiltonian_prefactor(params.eta, &cfg.right, &cfg.left);
    let fd = tp
        .sub(&tm)
        .scale(Complex64::new(1.0, 0.0) / (2.0 * step))
        .scale(pref);
    let derivative_residual = h.rel_distance(&fd);
    Ok(json!({
        "dimension": h.rows(),
        "matrix": matrix_to_json(&h),
        "eigenvalues": eigs.iter().map(|&z| to_pair(z)).collect::<Vec<_>>(),
        "derivative_prefactor": to_pair(pref),
        "derivative_residual": derivative_residual,
    }))
}

fn matrix_to_json(m: &CMatrix) -> Value {
    let rows: Vec<Vec<[f64; 2]>> = (0..m.rows())
        .map(|i| (0..m.cols()).map(|j| to_pair(m[(i, j)])).collect())
        .collect();
    json!(rows)
}

/// Wraps a deterministic report in the output envelope; only the metadata
/// field varies between identical runs.
pub fn envelope(report: Value) -> Value {
    let unix_time = std::time::SystemTime::now()
        .duration_since(std::time::UNIX_EPOCH)
        .map(|d| d.as_secs())
        .unwrap_or(0);
    json!({
        "report": report,
        "metadata": {"unix_time": unix_time, "tool": "openchain", "version": env!("CARGO_PKG_VERSION")},
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn base_config() -> RunConfig {
        RunConfig::from_json(
            r#"{
            "eta": [1.0, 0.0],
            "length": 2,
            "right": {"kind": "triangular", "a": [1.0, 0.0], "b": [0.3, 0.0], "c": [0.7, 0.0]},
            "left": {"kind": "triangular", "a": [2.0, 0.0], "b": [1.0, 0.0], "c": [1.0, 0.0]},
            "seed": 7,
            "solver": {"starts": 60, "newton_tol": 1e-11, "max_iter": 100, "allow_excitations_above_length": false}
        }"#,
        )
        .unwrap()
    }

    #[test]
    fn check_subset_runs_and_passes() {
        let cfg = base_config();
        let (out, ok) = cmd_check(&cfg, &["ybe".into(), "unitarity".into()], 7).unwrap();
        assert!(ok);
        assert_eq!(out["suite"].as_array().unwrap().len(), 2);
        assert_eq!(out["summary"]["total"], 2);
    }

    #[test]
    fn check_rejects_unknown_name() {
        let cfg = base_config();
        assert!(matches!(
            cmd_check(&cfg, &["nonsense".into()], 7),
            Err(Error::Config(_))
        ));
    }

    #[test]
    fn check_outputs_deterministic() {
        let cfg = base_config();
        let (a, _) = cmd_check(&cfg, &["ybe".into(), "vacuum".into()], 11).unwrap();
        let (b, _) = cmd_check(&cfg, &["ybe".into(), "vacuum".into()], 11).unwrap();
        assert_eq!(
            serde_json::to_string(&a).unwrap(),
            serde_json::to_string(&b).unwrap()
        );
    }

    #[test]
    fn solve_produces_states_and_csv() {
        let mut cfg = base_config();
        cfg.n_range = Some([0, 1]);
        let (out, csv, ok) = cmd_solve(&cfg, 42).unwrap();
        assert!(ok, "eigenpair verification failed: {out}");
        let states = out["states"].as_array().unwrap();
        assert!(states.len() >= 2, "expected vacuum plus excited states");
        assert_eq!(states[0]["n"], 0);
        let lines: Vec<&str> = csv.trim().lines().collect();
        assert_eq!(
            lines[0],
            "state_id,N,probe_re,probe_im,lambda_re,lambda_im,residual"
        );
        assert_eq!(lines.len(), 1 + 5 * states.len());
    }

    #[test]
    fn triangularize_reports_both_ways() {
        let mut cfg = base_config();
        let (out, ok) = cmd_triangularize(&cfg).unwrap();
        assert!(ok);
        assert_eq!(out["triangularizable"], true);
        // Raising against lowering violates the constraint.
        cfg.right = BoundarySpec::General(GeneralBoundary::new(
            Complex64::new(1.0, 0.0),
            Complex64::new(0.0, 0.0),
            Complex64::new(1.0, 0.0),
            Complex64::new(0.0, 0.0),
        ));
        cfg.left = BoundarySpec::General(GeneralBoundary::new(
            Complex64::new(1.0, 0.0),
            Complex64::new(0.0, 0.0),
            Complex64::new(0.0, 0.0),
            Complex64::new(1.0, 0.0),
        ));
        let (out, ok) = cmd_triangularize(&cfg).unwrap();
        assert!(!ok);
        assert_eq!(out["triangularizable"], false);
        assert_eq!(out["constraint_value"][0], 1.0);
    }

    #[test]
    fn hamiltonian_command_cross_checks() {
        let cfg = base_config();
        let out = cmd_hamiltonian(&cfg).unwrap();
        assert_eq!(out["dimension"], 4);
        assert!(out["derivative_residual"].as_f64().unwrap() < 1e-6);
    }
}
