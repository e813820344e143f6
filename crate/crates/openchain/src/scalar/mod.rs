//! Pure scalar evaluators: Boltzmann weights, exchange kernels, boundary
//! kernels, vacuum and dressed eigenvalue factors, Bethe-vector weights,
//! the transfer-matrix eigenvalue, and the on-shell cancellation
//! coefficients. Everything here is a pure function of complex inputs;
//! evaluation inside the guard band of any printed denominator is an error,
//! never a silent large number.

pub mod functions;
pub mod kernels;

pub use functions::*;

use crate::error::{Error, Result};
use crate::serde_c64;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

/// Relative pole-guard factor; the absolute guard is `1e-8 * (1 + |eta|)`.
pub const POLE_GUARD_REL: f64 = 1e-8;

/// Absolute guard band around every printed denominator zero.
pub fn pole_guard(eta: Complex64) -> f64 {
    POLE_GUARD_REL * (1.0 + eta.norm())
}

/// Errors when `value` (a denominator factor of `kernel`) is inside the
/// guard band.
pub(crate) fn guard_factor(
    kernel: &'static str,
    factor: &'static str,
    value: Complex64,
    eta: Complex64,
) -> Result<Complex64> {
    let guard = pole_guard(eta);
    let magnitude = value.norm();
    if magnitude < guard {
        Err(Error::Pole {
            kernel,
            factor,
            magnitude,
            guard,
        })
    } else {
        Ok(value)
    }
}

/// Chain data: crossing parameter, length and inhomogeneities.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ModelParams {
    #[serde(with = "serde_c64")]
    pub eta: Complex64,
    pub length: usize,
    #[serde(with = "serde_c64::vec")]
    pub xi: Vec<Complex64>,
}

impl ModelParams {
    pub fn new(eta: Complex64, xi: Vec<Complex64>) -> Result<Self> {
        if eta.norm() == 0.0 {
            return Err(Error::Input(
                "crossing parameter eta must be nonzero".into(),
            ));
        }
        if xi.is_empty() {
            return Err(Error::Input("chain length must be at least 1".into()));
        }
        Ok(Self {
            eta,
            length: xi.len(),
            xi,
        })
    }

    /// Homogeneous chain: all inhomogeneities zero.
    pub fn homogeneous(eta: Complex64, length: usize) -> Result<Self> {
        Self::new(eta, vec![Complex64::new(0.0, 0.0); length])
    }

    pub fn guard(&self) -> f64 {
        pole_guard(self.eta)
    }
}

/// Four-parameter scalar boundary matrix data (one instance per side).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GeneralBoundary {
    #[serde(with = "serde_c64")]
    pub alpha: Complex64,
    #[serde(with = "serde_c64")]
    pub beta: Complex64,
    #[serde(with = "serde_c64")]
    pub gamma: Complex64,
    #[serde(with = "serde_c64")]
    pub delta: Complex64,
}

impl GeneralBoundary {
    pub fn new(alpha: Complex64, beta: Complex64, gamma: Complex64, delta: Complex64) -> Self {
        Self {
            alpha,
            beta,
            gamma,
            delta,
        }
    }

    pub fn diagonal(alpha: Complex64, beta: Complex64) -> Self {
        let zero = Complex64::new(0.0, 0.0);
        Self::new(alpha, beta, zero, zero)
    }

    /// The u-linear part [[beta, gamma], [delta, -beta]].
    pub fn linear_part(&self) -> [[Complex64; 2]; 2] {
        [[self.beta, self.gamma], [self.delta, -self.beta]]
    }

    pub fn max_param(&self) -> f64 {
        self.alpha
            .norm()
            .max(self.beta.norm())
            .max(self.gamma.norm())
            .max(self.delta.norm())
    }
}

/// Three-parameter upper-triangular boundary matrix data.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TriangularBoundary {
    #[serde(with = "serde_c64")]
    pub a: Complex64,
    #[serde(with = "serde_c64")]
    pub b: Complex64,
    #[serde(with = "serde_c64")]
    pub c: Complex64,
}

impl TriangularBoundary {
    pub fn new(a: Complex64, b: Complex64, c: Complex64) -> Self {
        Self { a, b, c }
    }

    pub fn diagonal(a: Complex64, b: Complex64) -> Self {
        Self::new(a, b, Complex64::new(0.0, 0.0))
    }
}

/// Either parameterization of one boundary matrix, tagged for configs.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum BoundarySpec {
    General(GeneralBoundary),
    Triangular(TriangularBoundary),
}

impl BoundarySpec {
    /// The alpha / a parameter (shared between the two parameterizations).
    pub fn alpha(&self) -> Complex64 {
        match self {
            BoundarySpec::General(g) => g.alpha,
            BoundarySpec::Triangular(t) => t.a,
        }
    }

    pub fn as_triangular(&self) -> Option<&TriangularBoundary> {
        match self {
            BoundarySpec::Triangular(t) => Some(t),
            BoundarySpec::General(_) => None,
        }
    }

    /// View as general parameters; a triangular boundary is the general form
    /// with delta = 0.
    pub fn to_general(self) -> GeneralBoundary {
        match self {
            BoundarySpec::General(g) => g,
            BoundarySpec::Triangular(t) => {
                GeneralBoundary::new(t.a, t.b, t.c, Complex64::new(0.0, 0.0))
            }
        }
    }
}

/// Subset of {1..N} with strictly increasing members, stored 0-based.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct IndexSet {
    n_max: usize,
    members: Vec<usize>,
}

impl IndexSet {
    /// Builds from 0-based member indices; they must be strictly increasing
    /// and below `n_max`.
    pub fn new(n_max: usize, members: Vec<usize>) -> Result<Self> {
        if !members.windows(2).all(|w| w[0] < w[1]) {
            return Err(Error::Input(
                "index set members must strictly increase".into(),
            ));
        }
        if members.iter().any(|&m| m >= n_max) {
            return Err(Error::Input(format!(
                "index set member out of range 0..{n_max}"
            )));
        }
        Ok(Self { n_max, members })
    }

    pub fn empty(n_max: usize) -> Self {
        Self {
            n_max,
            members: vec![],
        }
    }

    pub fn full(n_max: usize) -> Self {
        Self {
            n_max,
            members: (0..n_max).collect(),
        }
    }

    pub fn n_max(&self) -> usize {
        self.n_max
    }

    pub fn members(&self) -> &[usize] {
        &self.members
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn contains(&self, i: usize) -> bool {
        self.members.binary_search(&i).is_ok()
    }

    /// Sorted complement within {0..n_max-1}.
    pub fn complement(&self) -> IndexSet {
        let members = (0..self.n_max).filter(|i| !self.contains(*i)).collect();
        Self {
            n_max: self.n_max,
            members,
        }
    }

    /// The set extended by one member (which must not already be present).
    pub fn with_member(&self, j: usize) -> IndexSet {
        debug_assert!(!self.contains(j) && j < self.n_max);
        let mut members = self.members.clone();
        let pos = members.partition_point(|&m| m < j);
        members.insert(pos, j);
        Self {
            n_max: self.n_max,
            members,
        }
    }

    /// Position of member `j` within the sorted member list.
    pub fn position_of(&self, j: usize) -> Option<usize> {
        self.members.binary_search(&j).ok()
    }
}

/// Multiset of Bethe parameters.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RootSet {
    #[serde(with = "serde_c64::vec")]
    roots: Vec<Complex64>,
}

impl RootSet {
    pub fn new(roots: Vec<Complex64>) -> Self {
        Self { roots }
    }

    pub fn len(&self) -> usize {
        self.roots.len()
    }

    pub fn is_empty(&self) -> bool {
        self.roots.is_empty()
    }

    pub fn roots(&self) -> &[Complex64] {
        &self.roots
    }

    pub fn root(&self, k: usize) -> Complex64 {
        self.roots[k]
    }

    /// Sub-multiset picked out by an index set.
    pub fn select(&self, set: &IndexSet) -> Vec<Complex64> {
        set.members().iter().map(|&i| self.roots[i]).collect()
    }

    /// Smallest pairwise distance, or infinity for fewer than two roots.
    pub fn min_pair_distance(&self) -> f64 {
        let mut best = f64::INFINITY;
        for i in 0..self.roots.len() {
            for j in i + 1..self.roots.len() {
                best = best.min((self.roots[i] - self.roots[j]).norm());
            }
        }
        best
    }

    /// Checks the exclusion set: every printed denominator that can involve a
    /// root must stay outside the pole guard. Returns the name of the first
    /// violated factor.
    pub fn exclusion_violation(
        &self,
        params: &ModelParams,
        left: &TriangularBoundary,
    ) -> Option<&'static str> {
        let eta = params.eta;
        let g = params.guard();
        for (k, &u) in self.roots.iter().enumerate() {
            if u.norm() < g {
                return Some("|u_k|");
            }
            if (2.0 * u + eta).norm() < g {
                return Some("|2u_k + eta|");
            }
            if (left.a - left.b * u).norm() < g {
                return Some("|a_bar - b_bar u_k|");
            }
            for &xi in &params.xi {
                // a(±u_k ± xi_j) over all four sign choices.
                for &s in &[u + xi, u - xi, -u + xi, -u - xi] {
                    if (s + eta).norm() < g {
                        return Some("|a(±u_k ± xi_j)|");
                    }
                }
            }
            for &v in &self.roots[k + 1..] {
                if (u - v).norm() < g {
                    return Some("|u_k - u_j|");
                }
                if (u + v).norm() < g {
                    return Some("|u_k + u_j|");
                }
                if (u + v + eta).norm() < g {
                    return Some("|u_k + u_j + eta|");
                }
            }
        }
        None
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::cr;

    #[test]
    fn index_set_basics() {
        let s = IndexSet::new(4, vec![0, 2]).unwrap();
        assert_eq!(s.complement().members(), &[1, 3]);
        assert_eq!(s.with_member(1).members(), &[0, 1, 2]);
        assert!(IndexSet::new(4, vec![2, 2]).is_err());
        assert!(IndexSet::new(4, vec![4]).is_err());
        assert_eq!(IndexSet::full(3).complement().members(), &[] as &[usize]);
    }

    #[test]
    fn model_params_validation() {
        assert!(ModelParams::new(cr(0.0), vec![cr(0.0)]).is_err());
        assert!(ModelParams::homogeneous(cr(1.0), 2).is_ok());
    }

    #[test]
    fn exclusion_set_flags_small_roots() {
        let params = ModelParams::homogeneous(cr(1.0), 1).unwrap();
        let left = TriangularBoundary::new(cr(2.0), cr(1.0), cr(1.0));
        let roots = RootSet::new(vec![cr(1e-12)]);
        assert_eq!(roots.exclusion_violation(&params, &left), Some("|u_k|"));
        let roots = RootSet::new(vec![cr(2.0)]);
        // u = a_bar / b_bar = 2 violates |a_bar - b_bar u|.
        assert_eq!(
            roots.exclusion_violation(&params, &left),
            Some("|a_bar - b_bar u_k|")
        );
        let roots = RootSet::new(vec![cr(0.7), cr(-0.7)]);
        assert_eq!(
            roots.exclusion_violation(&params, &left),
            Some("|u_k + u_j|")
        );
        let roots = RootSet::new(vec![cr(0.7), Complex64::new(0.4, 0.3)]);
        assert_eq!(roots.exclusion_violation(&params, &left), None);
    }
}
