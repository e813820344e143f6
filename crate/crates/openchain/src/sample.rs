//! Spectral-point sampling: uniform draws from the working annulus with
//! rejection against the exclusion set, so every printed denominator stays
//! well conditioned.

use crate::scalar::{ModelParams, RootSet, TriangularBoundary};
use num_complex::Complex64;
use rand::Rng;

pub const ANNULUS: (f64, f64) = (0.2, 2.0);

/// Distance kept between probe points and any denominator zero. Larger than
/// the evaluation pole guard: probes must stay well conditioned, not merely
/// evaluable.
pub const PROBE_GUARD: f64 = 0.05;

/// Uniform draw from the annulus 0.2 <= |u| <= 2 (area-uniform).
pub fn annulus_point(rng: &mut impl Rng) -> Complex64 {
    let (r_min, r_max) = ANNULUS;
    let r2 = rng.random_range(r_min * r_min..r_max * r_max);
    let theta = rng.random_range(0.0..std::f64::consts::TAU);
    Complex64::from_polar(r2.sqrt(), theta)
}

/// True when u keeps every denominator of the transfer matrix and of the
/// dressed eigenvalue factors at distance `guard`: the double-row
/// normalization factors, the diagonal shift, and the exchange kernels
/// against each root.
pub fn probe_admissible(
    u: Complex64,
    params: &ModelParams,
    roots: &[Complex64],
    guard: f64,
) -> bool {
    let eta = params.eta;
    if u.norm() < guard || (2.0 * u + eta).norm() < guard {
        return false;
    }
    for &xi in &params.xi {
        if (eta - u - xi).norm() < guard || (eta + u + xi).norm() < guard {
            return false;
        }
    }
    for &uk in roots {
        if (u - uk).norm() < guard
            || (u + uk).norm() < guard
            || (u + uk + eta).norm() < guard
            || (u - uk - eta).norm() < guard
        {
            return false;
        }
    }
    true
}

/// Rejection-samples an admissible probe point; None after 2000 tries.
pub fn draw_probe(
    rng: &mut impl Rng,
    params: &ModelParams,
    roots: &[Complex64],
    guard: f64,
) -> Option<Complex64> {
    for _ in 0..2000 {
        let u = annulus_point(rng);
        if probe_admissible(u, params, roots, guard) {
            return Some(u);
        }
    }
    None
}

/// Rejection-samples `n` pairwise-admissible excitation parameters: each
/// point passes the root exclusion set against the others at the solver's
/// pole guard, plus the probe guard spacing for conditioning.
pub fn draw_roots(
    rng: &mut impl Rng,
    n: usize,
    params: &ModelParams,
    left: &TriangularBoundary,
    guard: f64,
) -> Option<Vec<Complex64>> {
    'outer: for _ in 0..2000 {
        let mut pts = Vec::with_capacity(n);
        for _ in 0..n {
            pts.push(annulus_point(rng));
        }
        let set = RootSet::new(pts.clone());
        if set.exclusion_violation(params, left).is_some() {
            continue 'outer;
        }
        for i in 0..n {
            if !probe_admissible(pts[i], params, &pts[..i], guard) {
                continue 'outer;
            }
        }
        return Some(pts);
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::cr;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn annulus_draws_in_range() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for _ in 0..200 {
            let u = annulus_point(&mut rng);
            assert!(u.norm() >= 0.2 && u.norm() <= 2.0);
        }
    }

    #[test]
    fn probe_rejects_pole_neighborhoods() {
        let params = ModelParams::homogeneous(cr(1.0), 2).unwrap();
        assert!(!probe_admissible(cr(1.0), &params, &[], 0.05)); // eta - u = 0
        assert!(!probe_admissible(cr(-0.5), &params, &[], 0.05)); // 2u + eta = 0
        assert!(!probe_admissible(cr(0.9), &params, &[cr(0.91)], 0.05)); // u - u_k small
        assert!(probe_admissible(cr(0.6), &params, &[cr(1.4)], 0.05));
    }

    #[test]
    fn draw_roots_respects_exclusion() {
        let params = ModelParams::homogeneous(cr(1.0), 2).unwrap();
        let left = TriangularBoundary::new(cr(2.0), cr(1.0), cr(1.0));
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..20 {
            let pts = draw_roots(&mut rng, 3, &params, &left, PROBE_GUARD).unwrap();
            let set = RootSet::new(pts);
            assert!(set.exclusion_violation(&params, &left).is_none());
        }
    }
}
