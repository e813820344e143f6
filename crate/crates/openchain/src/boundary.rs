//! Simultaneous triangularization of the two scalar boundary matrices:
//! the compatibility constraint on their entries, construction of the
//! conjugating matrix M, extraction of the triangular parameters, and
//! validation of the parameter map.

use crate::error::{Error, Result};
use crate::lattice;
use crate::linalg::{cr, CMatrix, ONE, ZERO};
use crate::report::CheckReport;
use crate::scalar::{BoundarySpec, GeneralBoundary, TriangularBoundary};
use num_complex::Complex64;
use rand::Rng;

/// Default tolerance on the constraint value (relative to the quartic
/// parameter scale) and on the lower-left residuals of the conjugated pair.
pub const TRIANGULARIZATION_TOL: f64 = 1e-10;

// Fixed probe points for the residual and diagonal checks.
const PROBES: [Complex64; 2] = [Complex64::new(0.7313, 0.0), Complex64::new(-1.177, 0.513)];

/// Outcome of a successful simultaneous triangularization.
#[derive(Debug, Clone)]
pub struct TriangularizationResult {
    /// Conjugating matrix: M^{-1} K(u) M and M^{-1} K_bar(u) M are upper
    /// triangular.
    pub m: CMatrix,
    pub right_tri: TriangularBoundary,
    pub left_tri: TriangularBoundary,
    /// Magnitude of the (2,1) entry of the conjugated right/left matrices at
    /// the probe points, relative to the matrix norm.
    pub lower_left_residuals: [f64; 2],
    pub constraint_value: Complex64,
    /// Whether the closed-form M (first column (b+beta, delta), symmetric)
    /// was usable verbatim.
    pub used_printed_m: bool,
}

/// The compatibility constraint, zero iff the two boundary matrices can be
/// made upper triangular in a common basis:
/// (delta_bar gamma - delta gamma_bar)^2
/// - 4 (beta gamma_bar - beta_bar gamma)(delta_bar beta - delta beta_bar).
pub fn constraint_value(right: &GeneralBoundary, left: &GeneralBoundary) -> Complex64 {
    let t1 = left.delta * right.gamma - right.delta * left.gamma;
    let t2 = right.beta * left.gamma - left.beta * right.gamma;
    let t3 = left.delta * right.beta - right.delta * left.beta;
    t1 * t1 - 4.0 * t2 * t3
}

/// Principal square root with the branch pinned to Re >= 0, ties broken by
/// Im >= 0.
pub fn principal_sqrt(z: Complex64) -> Complex64 {
    let s = z.sqrt();
    if s.re < 0.0 || (s.re == 0.0 && s.im < 0.0) {
        -s
    } else {
        s
    }
}

fn mat2_apply(n: [[Complex64; 2]; 2], v: [Complex64; 2]) -> [Complex64; 2] {
    [
        n[0][0] * v[0] + n[0][1] * v[1],
        n[1][0] * v[0] + n[1][1] * v[1],
    ]
}

fn mat2_norm(n: [[Complex64; 2]; 2]) -> f64 {
    n.iter().flatten().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

// Relative alignment defect of v as an eigenvector of n: the cross product
// of n v with v, scaled by |n| |v|^2.
fn eigen_defect(n: [[Complex64; 2]; 2], v: [Complex64; 2]) -> f64 {
    let w = mat2_apply(n, v);
    let cross = (w[0] * v[1] - w[1] * v[0]).norm();
    let scale = mat2_norm(n) * (v[0].norm_sqr() + v[1].norm_sqr());
    if scale == 0.0 {
        0.0
    } else {
        cross / scale
    }
}

// Eigenvector of the traceless matrix [[beta, gamma], [delta, -beta]] for
// eigenvalue `lam` (lam^2 = beta^2 + gamma delta): the larger of the two
// closed-form candidates, or None for the zero matrix.
fn eigenvector_for(g: &GeneralBoundary, lam: Complex64) -> Option<[Complex64; 2]> {
    let v1 = [lam + g.beta, g.delta];
    let v2 = [g.gamma, lam - g.beta];
    let n1 = v1[0].norm_sqr() + v1[1].norm_sqr();
    let n2 = v2[0].norm_sqr() + v2[1].norm_sqr();
    let scale = g.max_param().powi(2).max(lam.norm_sqr());
    if n1.max(n2) <= 1e-28 * scale.max(1e-280) {
        return None;
    }
    Some(if n1 >= n2 { v1 } else { v2 })
}

fn inverse2(m: &CMatrix) -> Result<CMatrix> {
    let det = m[(0, 0)] * m[(1, 1)] - m[(0, 1)] * m[(1, 0)];
    if det.norm() < 1e-14 * m.frobenius_norm().powi(2).max(1e-280) {
        return Err(Error::Defective("conjugating matrix is singular".into()));
    }
    Ok(CMatrix::from_rows(&[
        vec![m[(1, 1)] / det, -m[(0, 1)] / det],
        vec![-m[(1, 0)] / det, m[(0, 0)] / det],
    ]))
}

/// Conjugates a boundary's u-linear part by m: the result is the general
/// boundary whose matrix is m^{-1} K(u) m for every u.
pub fn conjugate_boundary(g: &GeneralBoundary, m: &CMatrix) -> Result<GeneralBoundary> {
    let m_inv = inverse2(m)?;
    let n = CMatrix::from_rows(&[vec![g.beta, g.gamma], vec![g.delta, -g.beta]]);
    let np = m_inv.matmul(&n).matmul(m);
    Ok(GeneralBoundary::new(
        g.alpha,
        (np[(0, 0)] - np[(1, 1)]) * cr(0.5),
        np[(0, 1)],
        np[(1, 0)],
    ))
}

/// Finds M putting both boundary matrices in upper-triangular form and reads
/// off the triangular parameters. Errors when the constraint is violated at
/// tolerance `tol`, or when no common eigenvector exists numerically.
pub fn triangularize(
    right: &GeneralBoundary,
    left: &GeneralBoundary,
    eta: Complex64,
    tol: f64,
) -> Result<TriangularizationResult> {
    triangularize_with_branch(right, left, eta, tol, false)
}

/// [`triangularize`] with the square-root branch preference exposed: when
/// both eigendirections of the right linear part are shared with the left
/// one (for example two diagonal matrices), the preference picks which sign
/// of b the triangular parameters carry. The transfer spectrum must not
/// depend on the choice.
pub fn triangularize_with_branch(
    right: &GeneralBoundary,
    left: &GeneralBoundary,
    eta: Complex64,
    tol: f64,
    prefer_negative_branch: bool,
) -> Result<TriangularizationResult> {
    let cval = constraint_value(right, left);
    let scale = right.max_param().max(left.max_param()).powi(4).max(1.0);
    if cval.norm() > tol * scale {
        return Err(Error::NotTriangularizable {
            value: cval,
            value_abs: cval.norm() / scale,
        });
    }
    let n_right = right.linear_part();
    let n_left = left.linear_part();
    let b = principal_sqrt(right.beta * right.beta + right.gamma * right.delta);

    // Eigenvector of the right linear part for +b, verified against the left
    // linear part; fall back to the -b eigenvector. The constraint
    // guarantees one shared eigendirection, not two.
    let defect_tol = (10.0 * tol).max(1e-9);
    let branch_order = if prefer_negative_branch {
        [-b, b]
    } else {
        [b, -b]
    };
    let mut chosen: Option<([Complex64; 2], Complex64)> = None;
    for lam in branch_order {
        let candidate = match eigenvector_for(right, lam) {
            Some(v) => v,
            // Zero right linear part: any direction works for the right
            // matrix; use an eigenvector of the left one instead.
            None => {
                let b_bar = principal_sqrt(left.beta * left.beta + left.gamma * left.delta);
                match eigenvector_for(left, b_bar) {
                    Some(v) => v,
                    None => [ONE, ZERO],
                }
            }
        };
        if eigen_defect(n_right, candidate) <= defect_tol
            && eigen_defect(n_left, candidate) <= defect_tol
        {
            chosen = Some((candidate, lam));
            break;
        }
    }
    let (common, lam) = chosen.ok_or_else(|| {
        Error::Defective(format!(
            "no common eigenvector to tolerance {defect_tol:.1e} (constraint value {cval})"
        ))
    })?;

    // Closed-form symmetric M when it is invertible and its first column is
    // the shared direction of the chosen branch; otherwise the eigenvector
    // completed by the coordinate vector maximizing |det M|.
    let printed = CMatrix::from_rows(&[
        vec![b + right.beta, right.delta],
        vec![right.delta, b + right.beta],
    ]);
    let printed_det = (b + right.beta) * (b + right.beta) - right.delta * right.delta;
    let printed_usable = lam == b
        && printed_det.norm() > 1e-10 * scale.sqrt()
        && eigen_defect(n_right, [printed[(0, 0)], printed[(1, 0)]]) <= defect_tol
        && eigen_defect(n_left, [printed[(0, 0)], printed[(1, 0)]]) <= defect_tol;
    let (m, used_printed_m) = if printed_usable {
        (printed, true)
    } else {
        let vmax = common[0].norm().max(common[1].norm());
        let v = [common[0] / vmax, common[1] / vmax];
        let m = if v[0].norm() >= v[1].norm() {
            CMatrix::from_rows(&[vec![v[0], ZERO], vec![v[1], ONE]])
        } else {
            CMatrix::from_rows(&[vec![v[0], ONE], vec![v[1], ZERO]])
        };
        (m, false)
    };
    let m_inv = inverse2(&m)?;

    // Read the triangular parameters off the conjugated linear parts.
    let np_right = m_inv
        .matmul(&CMatrix::from_rows(&[
            vec![n_right[0][0], n_right[0][1]],
            vec![n_right[1][0], n_right[1][1]],
        ]))
        .matmul(&m);
    let np_left = m_inv
        .matmul(&CMatrix::from_rows(&[
            vec![n_left[0][0], n_left[0][1]],
            vec![n_left[1][0], n_left[1][1]],
        ]))
        .matmul(&m);
    let right_tri = TriangularBoundary::new(right.alpha, np_right[(0, 0)], np_right[(0, 1)]);
    let left_tri = TriangularBoundary::new(left.alpha, np_left[(0, 0)], np_left[(0, 1)]);

    // Probe-point residuals and eigenvalue preservation.
    let mut residuals = [0.0f64; 2];
    for &u in PROBES.iter() {
        for (idx, (bnd, side)) in [
            (BoundarySpec::General(*right), lattice::Side::Right),
            (BoundarySpec::General(*left), lattice::Side::Left),
        ]
        .iter()
        .enumerate()
        {
            let k = lattice::build_k(u, bnd, *side, eta);
            let conj = m_inv.matmul(&k).matmul(&m);
            let res = conj[(1, 0)].norm() / k.frobenius_norm().max(1e-300);
            residuals[idx] = residuals[idx].max(res);
        }
        // Diagonal of the conjugated right matrix must be {alpha + u b, alpha - u b}.
        let k = lattice::build_k(u, &BoundarySpec::General(*right), lattice::Side::Right, eta);
        let conj = m_inv.matmul(&k).matmul(&m);
        let got = [conj[(0, 0)], conj[(1, 1)]];
        let want = [right.alpha + u * b, right.alpha - u * b];
        let direct = (got[0] - want[0]).norm() + (got[1] - want[1]).norm();
        let crossed = (got[0] - want[1]).norm() + (got[1] - want[0]).norm();
        if direct.min(crossed) > 1e-8 * (1.0 + k.frobenius_norm()) {
            return Err(Error::Defective(
                "conjugated diagonal does not preserve the eigenvalue pair".into(),
            ));
        }
    }
    Ok(TriangularizationResult {
        m,
        right_tri,
        left_tri,
        lower_left_residuals: residuals,
        constraint_value: cval,
        used_printed_m,
    })
}

/// Checks the printed parameter map a = alpha, b^2 = beta^2 + gamma delta,
/// c = gamma + delta (and the barred analogues) against a triangularization
/// result. The c-identities hold for the closed-form M only; with a fallback
/// M they are normalization-dependent and skipped.
pub fn verify_parameter_map(
    right: &GeneralBoundary,
    left: &GeneralBoundary,
    result: &TriangularizationResult,
) -> CheckReport {
    let tol = 1e-10;
    let mut max_residual: f64 = 0.0;
    let mut notes = vec![];
    let scale = right.max_param().max(left.max_param()).max(1.0);
    let pairs: [(&GeneralBoundary, &TriangularBoundary, &str); 2] = [
        (right, &result.right_tri, "right"),
        (left, &result.left_tri, "left"),
    ];
    for (g, t, side) in pairs {
        let a_res = (t.a - g.alpha).norm() / scale;
        let b_res = (t.b * t.b - (g.beta * g.beta + g.gamma * g.delta)).norm() / (scale * scale);
        max_residual = max_residual.max(a_res).max(b_res);
        if result.used_printed_m {
            let c_res = (t.c - (g.gamma + g.delta)).norm() / scale;
            max_residual = max_residual.max(c_res);
        } else {
            notes.push(format!(
                "{side}: c check skipped (fallback M, normalization-dependent)"
            ));
        }
    }
    let mut report = CheckReport::new(
        "parameter_map",
        serde_json::json!({
            "right": right,
            "left": left,
            "used_printed_m": result.used_printed_m,
        }),
        0,
        1,
        max_residual,
        tol,
    );
    report.notes = notes;
    report
}

/// Draws a boundary pair exactly on the constraint surface: seven parameters
/// free, the last solved from the constraint (quadratic in delta_bar).
pub fn sample_constrained_pair(rng: &mut impl Rng) -> (GeneralBoundary, GeneralBoundary) {
    loop {
        let mut draw = || Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0));
        let right = GeneralBoundary::new(draw(), draw(), draw(), draw());
        let (alpha_bar, beta_bar, gamma_bar) = (draw(), draw(), draw());
        // Constraint as a quadratic in delta_bar:
        //   gamma^2 d^2 + (-2 gamma delta gamma_bar - 4 beta (beta gamma_bar - beta_bar gamma)) d
        //   + delta^2 gamma_bar^2 + 4 delta beta_bar (beta gamma_bar - beta_bar gamma) = 0.
        let qa = right.gamma * right.gamma;
        if qa.norm() < 0.05 {
            continue; // degenerate leading coefficient: resample
        }
        let t2 = right.beta * gamma_bar - beta_bar * right.gamma;
        let qb = -2.0 * right.gamma * right.delta * gamma_bar - 4.0 * right.beta * t2;
        let qc =
            right.delta * right.delta * gamma_bar * gamma_bar + 4.0 * right.delta * beta_bar * t2;
        let disc = principal_sqrt(qb * qb - 4.0 * qa * qc);
        let delta_bar = (-qb + disc) / (2.0 * qa);
        let left = GeneralBoundary::new(alpha_bar, beta_bar, gamma_bar, delta_bar);
        let scale = right.max_param().max(left.max_param()).powi(4).max(1.0);
        if constraint_value(&right, &left).norm() <= 1e-12 * scale {
            return (right, left);
        }
    }
}

/// Draws a boundary pair well away from the constraint surface
/// (|constraint| > 0.1 relative to the quartic scale).
pub fn sample_unconstrained_pair(rng: &mut impl Rng) -> (GeneralBoundary, GeneralBoundary) {
    loop {
        let mut draw = || Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0));
        let right = GeneralBoundary::new(draw(), draw(), draw(), draw());
        let left = GeneralBoundary::new(draw(), draw(), draw(), draw());
        let scale = right.max_param().max(left.max_param()).powi(4).max(1.0);
        if constraint_value(&right, &left).norm() > 0.1 * scale {
            return (right, left);
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    const ETA: Complex64 = Complex64::new(1.0, 0.0);

    #[test]
    fn constraint_trivial_cases() {
        let diag = GeneralBoundary::diagonal(cr(1.0), cr(0.5));
        assert_eq!(constraint_value(&diag, &diag), ZERO);
        // Both already upper triangular.
        let up1 = GeneralBoundary::new(cr(1.0), cr(0.5), cr(0.3), ZERO);
        let up2 = GeneralBoundary::new(cr(2.0), cr(0.1), cr(-0.7), ZERO);
        assert_eq!(constraint_value(&up1, &up2), ZERO);
        // Raising against lowering: no common eigenvector.
        let raise = GeneralBoundary::new(cr(1.0), ZERO, ONE, ZERO);
        let lower = GeneralBoundary::new(cr(1.0), ZERO, ZERO, ONE);
        assert_eq!(constraint_value(&raise, &lower), ONE);
    }

    #[test]
    fn constraint_swap_symmetry() {
        let mut rng = ChaCha8Rng::seed_from_u64(42);
        for _ in 0..20 {
            let mut draw =
                || Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0));
            let r = GeneralBoundary::new(draw(), draw(), draw(), draw());
            let l = GeneralBoundary::new(draw(), draw(), draw(), draw());
            let fwd = constraint_value(&r, &l);
            let bwd = constraint_value(&l, &r);
            assert!((fwd.norm() - bwd.norm()).abs() <= 1e-12 * (1.0 + fwd.norm()));
        }
    }

    #[test]
    fn triangularize_printed_example() {
        // beta=2, gamma=3, delta=1 with a diagonal left: b = sqrt(7), c = 4.
        let right = GeneralBoundary::new(cr(1.2), cr(2.0), cr(3.0), cr(1.0));
        let left = GeneralBoundary::diagonal(cr(2.0), cr(0.0));
        // A diagonal left matrix shares an eigenvector with the right one
        // only if the pair satisfies the constraint; a zero left linear part
        // does trivially.
        let result = triangularize(&right, &left, ETA, TRIANGULARIZATION_TOL).unwrap();
        assert!((result.right_tri.a - cr(1.2)).norm() < 1e-12);
        assert!((result.right_tri.b - cr(7f64.sqrt())).norm() < 1e-10);
        assert!((result.right_tri.c - cr(4.0)).norm() < 1e-10);
        assert!(result.used_printed_m);
        assert!(result.lower_left_residuals[0] <= 1e-10);
        assert!(result.lower_left_residuals[1] <= 1e-10);
        let map = verify_parameter_map(&right, &left, &result);
        assert!(map.passed, "parameter map residual {}", map.max_residual);
    }

    #[test]
    fn triangularize_passthrough_for_triangular_inputs() {
        let right = GeneralBoundary::new(cr(1.0), cr(0.4), cr(0.9), ZERO);
        let left = GeneralBoundary::new(cr(2.0), cr(1.0), cr(1.0), ZERO);
        let result = triangularize(&right, &left, ETA, TRIANGULARIZATION_TOL).unwrap();
        // Parameters pass through up to the b-sign convention.
        assert!((result.right_tri.a - right.alpha).norm() < 1e-12);
        assert!(
            (result.right_tri.b - right.beta).norm() < 1e-10
                || (result.right_tri.b + right.beta).norm() < 1e-10
        );
        assert!((result.left_tri.b - left.beta).norm() < 1e-10);
        assert!((result.left_tri.c - left.gamma).norm() < 1e-10);
    }

    #[test]
    fn triangularize_nilpotent_fallback() {
        // beta=1, gamma=1, delta=-1: b^2 = 0, the printed M is singular; the
        // kernel vector (1, -1) completed by a coordinate column must work.
        let right = GeneralBoundary::new(cr(1.0), cr(1.0), cr(1.0), cr(-1.0));
        let left = GeneralBoundary::diagonal(cr(2.0), cr(0.0));
        let result = triangularize(&right, &left, ETA, TRIANGULARIZATION_TOL).unwrap();
        assert!(!result.used_printed_m);
        assert!(result.right_tri.b.norm() < 1e-10);
        assert!(result.lower_left_residuals[0] <= 1e-10);
        let map = verify_parameter_map(&right, &left, &result);
        assert!(map.passed);
        assert!(map.notes.iter().any(|n| n.contains("skipped")));
    }

    #[test]
    fn triangularize_rejects_off_surface() {
        let raise = GeneralBoundary::new(cr(1.0), ZERO, ONE, ZERO);
        let lower = GeneralBoundary::new(cr(1.0), ZERO, ZERO, ONE);
        let err = triangularize(&raise, &lower, ETA, TRIANGULARIZATION_TOL).unwrap_err();
        match err {
            Error::NotTriangularizable { value, .. } => assert!((value - ONE).norm() < 1e-14),
            other => panic!("expected constraint rejection, got {other:?}"),
        }
    }

    #[test]
    fn on_surface_draws_triangularize() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..25 {
            let (right, left) = sample_constrained_pair(&mut rng);
            let result = triangularize(&right, &left, ETA, TRIANGULARIZATION_TOL)
                .expect("on-surface pair must triangularize");
            assert!(result.lower_left_residuals[0] <= 1e-10);
            assert!(result.lower_left_residuals[1] <= 1e-10);
            let map = verify_parameter_map(&right, &left, &result);
            assert!(map.passed, "map residual {}", map.max_residual);
        }
    }

    #[test]
    fn off_surface_draws_rejected() {
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        for _ in 0..25 {
            let (right, left) = sample_unconstrained_pair(&mut rng);
            assert!(matches!(
                triangularize(&right, &left, ETA, TRIANGULARIZATION_TOL),
                Err(Error::NotTriangularizable { .. })
            ));
        }
    }

    #[test]
    fn conjugation_reproduces_triangular_matrix() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let (right, left) = sample_constrained_pair(&mut rng);
        let result = triangularize(&right, &left, ETA, TRIANGULARIZATION_TOL).unwrap();
        let conj = conjugate_boundary(&right, &result.m).unwrap();
        // The conjugated general boundary must equal the triangular read-off.
        assert!((conj.beta - result.right_tri.b).norm() < 1e-10);
        assert!((conj.gamma - result.right_tri.c).norm() < 1e-10);
        assert!(conj.delta.norm() < 1e-10);
    }
}
