//! Operator-valued objects on the 2^L quantum space: R-matrix, monodromy,
//! scalar boundary matrices, the dressed double-row matrix and its entries,
//! the transfer matrix and the open-chain Hamiltonian.
//!
//! Leg ordering convention: the auxiliary space is leg 0, quantum sites are
//! legs 1..L; a 2·2^L operator splits into four 2^L blocks indexed by the
//! auxiliary basis.

use crate::error::{Error, Result};
use crate::linalg::{self, CMatrix, ONE, ZERO};
use crate::report::CheckReport;
use crate::sample::annulus_point;
use crate::scalar::{self, kernels, BoundarySpec, GeneralBoundary, ModelParams};
use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use std::collections::HashMap;
use std::sync::{Arc, Mutex};

/// Required agreement between the trace form and the kappa-expansion form
/// of the transfer matrix.
pub const TRANSFER_FORM_TOL: f64 = 1e-11;

/// Two-site permutation operator.
pub fn permutation() -> CMatrix {
    CMatrix::from_rows(&[
        vec![ONE, ZERO, ZERO, ZERO],
        vec![ZERO, ZERO, ONE, ZERO],
        vec![ZERO, ONE, ZERO, ZERO],
        vec![ZERO, ZERO, ZERO, ONE],
    ])
}

/// Rational 4×4 R-matrix with weights (u+eta, u, eta).
pub fn build_r(u: Complex64, eta: Complex64) -> CMatrix {
    let (a, b, c) = kernels::r_weights(u, eta);
    CMatrix::from_rows(&[
        vec![a, ZERO, ZERO, ZERO],
        vec![ZERO, b, c, ZERO],
        vec![ZERO, c, b, ZERO],
        vec![ZERO, ZERO, ZERO, a],
    ])
}

/// Which side of the chain a scalar boundary matrix sits on.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Side {
    Right,
    Left,
}

/// The 2×2 scalar boundary matrix for the requested side and
/// parameterization. The left carries the (-u-eta) structure.
pub fn build_k(u: Complex64, bnd: &BoundarySpec, side: Side, eta: Complex64) -> CMatrix {
    let g = bnd.to_general();
    let s = match side {
        Side::Right => u,
        Side::Left => -u - eta,
    };
    CMatrix::from_rows(&[
        vec![s * g.beta + g.alpha, s * g.gamma],
        vec![s * g.delta, -s * g.beta + g.alpha],
    ])
}

/// The constant u-derivative of the right scalar boundary matrix.
pub fn build_k_derivative(bnd: &BoundarySpec) -> CMatrix {
    let g = bnd.to_general();
    CMatrix::from_rows(&[vec![g.beta, g.gamma], vec![g.delta, -g.beta]])
}

/// The four auxiliary-space blocks of a 2·2^L operator.
#[derive(Debug, Clone)]
pub struct MonodromyBlocks {
    pub u: Complex64,
    pub t11: CMatrix,
    pub t12: CMatrix,
    pub t21: CMatrix,
    pub t22: CMatrix,
}

impl MonodromyBlocks {
    fn split(u: Complex64, full: &CMatrix) -> Self {
        let d = full.rows() / 2;
        let mut blocks = [
            CMatrix::zeros(d, d),
            CMatrix::zeros(d, d),
            CMatrix::zeros(d, d),
            CMatrix::zeros(d, d),
        ];
        for i in 0..d {
            for j in 0..d {
                blocks[0][(i, j)] = full[(i, j)];
                blocks[1][(i, j)] = full[(i, j + d)];
                blocks[2][(i, j)] = full[(i + d, j)];
                blocks[3][(i, j)] = full[(i + d, j + d)];
            }
        }
        let [t11, t12, t21, t22] = blocks;
        Self {
            u,
            t11,
            t12,
            t21,
            t22,
        }
    }

    /// Reassembles the full 2·2^L operator (auxiliary leg first).
    pub fn assemble(&self) -> CMatrix {
        let d = self.t11.rows();
        let mut full = CMatrix::zeros(2 * d, 2 * d);
        for i in 0..d {
            for j in 0..d {
                full[(i, j)] = self.t11[(i, j)];
                full[(i, j + d)] = self.t12[(i, j)];
                full[(i + d, j)] = self.t21[(i, j)];
                full[(i + d, j + d)] = self.t22[(i, j)];
            }
        }
        full
    }
}

/// Ordered product of R-matrices coupling the auxiliary leg to sites 1..L.
pub fn build_monodromy(u: Complex64, params: &ModelParams) -> Result<MonodromyBlocks> {
    let l = params.length;
    let dim = 1usize << (l + 1);
    if dim > linalg::DIM_CAP {
        return Err(Error::Size {
            requested: dim,
            cap: linalg::DIM_CAP,
        });
    }
    let mut full = CMatrix::identity(dim);
    for (j, &xi) in params.xi.iter().enumerate() {
        let r = build_r(u - xi, params.eta);
        let factor = linalg::embed_pair(&r, 0, j + 1, l + 1)?;
        full = full.matmul(&factor);
    }
    Ok(MonodromyBlocks::split(u, &full))
}

/// T^{-1}(-u) through the unitarity product formula: the reversed product of
/// R(u + xi_j) divided by prod_j (eta - u - xi_j)(eta + u + xi_j).
pub fn build_inverse_monodromy_at_minus(
    u: Complex64,
    params: &ModelParams,
) -> Result<MonodromyBlocks> {
    let l = params.length;
    let eta = params.eta;
    let dim = 1usize << (l + 1);
    if dim > linalg::DIM_CAP {
        return Err(Error::Size {
            requested: dim,
            cap: linalg::DIM_CAP,
        });
    }
    let mut norm = ONE;
    for &xi in &params.xi {
        let f1 = scalar::guard_factor("T_inverse", "eta-u-xi_j", eta - u - xi, eta)?;
        let f2 = scalar::guard_factor("T_inverse", "eta+u+xi_j", eta + u + xi, eta)?;
        norm *= f1 * f2;
    }
    let mut full = CMatrix::identity(dim);
    for (j, &xi) in params.xi.iter().enumerate().rev() {
        let r = build_r(u + xi, eta);
        let factor = linalg::embed_pair(&r, 0, j + 1, l + 1)?;
        full = full.matmul(&factor);
    }
    full = full.scale(ONE / norm);
    Ok(MonodromyBlocks::split(-u, &full))
}

/// Double-row operator blocks and the shifted entries used by the ansatz.
#[derive(Debug, Clone)]
pub struct DoubleRowBlocks {
    pub u: Complex64,
    pub b11: CMatrix,
    pub b12: CMatrix,
    pub b21: CMatrix,
    pub b22: CMatrix,
    shifted_d: CMatrix,
}

impl DoubleRowBlocks {
    pub fn op_a(&self) -> &CMatrix {
        &self.b11
    }

    pub fn op_b(&self) -> &CMatrix {
        &self.b12
    }

    pub fn op_c(&self) -> &CMatrix {
        &self.b21
    }

    /// The shifted diagonal entry B22 - eta/(2u+eta) B11.
    pub fn op_d(&self) -> &CMatrix {
        &self.shifted_d
    }

    pub fn assemble(&self) -> CMatrix {
        MonodromyBlocks {
            u: self.u,
            t11: self.b11.clone(),
            t12: self.b12.clone(),
            t21: self.b21.clone(),
            t22: self.b22.clone(),
        }
        .assemble()
    }
}

/// Dressed double-row matrix B(u) = T(u) K(u) T^{-1}(-u), assembled
/// blockwise, with the shifted diagonal entry extracted.
pub fn build_double_row(
    u: Complex64,
    params: &ModelParams,
    right: &BoundarySpec,
) -> Result<DoubleRowBlocks> {
    let k = build_k(u, right, Side::Right, params.eta);
    dress_scalar_k(u, params, &k)
}

/// Dresses an arbitrary 2×2 scalar matrix through the monodromy sandwich.
pub fn dress_scalar_k(u: Complex64, params: &ModelParams, k: &CMatrix) -> Result<DoubleRowBlocks> {
    let eta = params.eta;
    let t = build_monodromy(u, params)?;
    let tinv = build_inverse_monodromy_at_minus(u, params)?;
    let (k11, k12, k21, k22) = (k[(0, 0)], k[(0, 1)], k[(1, 0)], k[(1, 1)]);
    // (T K) blocks with K scalar in the auxiliary space.
    let tk11 = t.t11.scale(k11).add(&t.t12.scale(k21));
    let tk12 = t.t11.scale(k12).add(&t.t12.scale(k22));
    let tk21 = t.t21.scale(k11).add(&t.t22.scale(k21));
    let tk22 = t.t21.scale(k12).add(&t.t22.scale(k22));
    let b11 = tk11.matmul(&tinv.t11).add(&tk12.matmul(&tinv.t21));
    let b12 = tk11.matmul(&tinv.t12).add(&tk12.matmul(&tinv.t22));
    let b21 = tk21.matmul(&tinv.t11).add(&tk22.matmul(&tinv.t21));
    let b22 = tk21.matmul(&tinv.t12).add(&tk22.matmul(&tinv.t22));
    let shift = scalar::guard_factor("double_row", "2u+eta", 2.0 * u + eta, eta)?;
    let shifted_d = b22.sub(&b11.scale(eta / shift));
    Ok(DoubleRowBlocks {
        u,
        b11,
        b12,
        b21,
        b22,
        shifted_d,
    })
}

/// Double-row transfer matrix t(u) = tr_a(K_bar_a B_a), via block summation
/// over the auxiliary leg. When the left boundary is triangular the
/// kappa-expansion form is assembled as well and the two must agree to
/// [`TRANSFER_FORM_TOL`].
pub fn build_transfer(
    u: Complex64,
    params: &ModelParams,
    right: &BoundarySpec,
    left: &BoundarySpec,
) -> Result<CMatrix> {
    let b = build_double_row(u, params, right)?;
    transfer_from_blocks(u, &b, params, left)
}

/// Transfer matrix from precomputed double-row blocks.
pub fn transfer_from_blocks(
    u: Complex64,
    b: &DoubleRowBlocks,
    params: &ModelParams,
    left: &BoundarySpec,
) -> Result<CMatrix> {
    let eta = params.eta;
    let kbar = build_k(u, left, Side::Left, eta);
    let trace_form = b
        .b11
        .scale(kbar[(0, 0)])
        .add(&b.b21.scale(kbar[(0, 1)]))
        .add(&b.b12.scale(kbar[(1, 0)]))
        .add(&b.b22.scale(kbar[(1, 1)]));
    if let Some(tri) = left.as_triangular() {
        let k1 = scalar::kappa1(u, tri, eta)?;
        let k2 = scalar::kappa2(u, tri, eta);
        let k12 = scalar::kappa12(u, tri, eta);
        let expansion = b
            .op_a()
            .scale(k1)
            .add(&b.op_d().scale(k2))
            .add(&b.op_c().scale(k12));
        let residual = trace_form.rel_distance(&expansion);
        if residual > TRANSFER_FORM_TOL {
            return Err(Error::FormMismatch {
                context: "transfer trace form vs kappa expansion",
                residual,
                cap: TRANSFER_FORM_TOL,
            });
        }
    }
    Ok(trace_form)
}

/// Open-chain Hamiltonian for a homogeneous chain (all xi = 0):
/// sum of permutations plus the two boundary terms,
///
///   H = sum_j P_{j,j+1} + K_bar_1(0)/(2 alpha_bar) + eta K'_L(0)/(2 alpha),
///
/// normalized so that H = eta/(4 alpha alpha_bar) t'(0).
pub fn build_hamiltonian(
    params: &ModelParams,
    right: &BoundarySpec,
    left: &BoundarySpec,
) -> Result<CMatrix> {
    let eta = params.eta;
    if params.xi.iter().any(|xi| xi.norm() != 0.0) {
        return Err(Error::Input(
            "hamiltonian requires a homogeneous chain (all xi = 0)".into(),
        ));
    }
    let alpha = right.alpha();
    let alpha_bar = left.alpha();
    if alpha.norm() == 0.0 || alpha_bar.norm() == 0.0 {
        return Err(Error::Input(
            "hamiltonian requires nonzero alpha on both boundaries".into(),
        ));
    }
    let l = params.length;
    let dim = 1usize << l;
    if dim > linalg::DIM_CAP {
        return Err(Error::Size {
            requested: dim,
            cap: linalg::DIM_CAP,
        });
    }
    let mut h = CMatrix::zeros(dim, dim);
    let p = permutation();
    for j in 1..l {
        h = h.add(&linalg::embed_two_site(&p, j, j + 1, l)?);
    }
    let kbar0 = build_k(ZERO, left, Side::Left, eta);
    h = h.add(&linalg::embed_one_site(&kbar0, 1, l)?.scale(ONE / (2.0 * alpha_bar)));
    let kprime = build_k_derivative(right);
    h = h.add(&linalg::embed_one_site(&kprime, l, l)?.scale(eta / (2.0 * alpha)));
    Ok(h)
}

/// The scalar relating the transfer-matrix derivative at the origin to the
/// Hamiltonian: H = hamiltonian_prefactor * t'(0) on a homogeneous chain.
pub fn hamiltonian_prefactor(
    eta: Complex64,
    right: &BoundarySpec,
    left: &BoundarySpec,
) -> Complex64 {
    eta / (4.0 * right.alpha() * left.alpha())
}

/// Residual of the dual reflection equation for the scalar left boundary at
/// one spectral pair, relative to the larger side.
pub fn dual_reflection_residual(
    left: &GeneralBoundary,
    eta: Complex64,
    u: Complex64,
    v: Complex64,
) -> Result<f64> {
    let spec = BoundarySpec::General(*left);
    let i2 = CMatrix::identity(2);
    let kt_u = build_k(u, &spec, Side::Left, eta).transpose();
    let kt_v = build_k(v, &spec, Side::Left, eta).transpose();
    let k1 = linalg::kron(&kt_u, &i2)?;
    let k2 = linalg::kron(&i2, &kt_v)?;
    let r_a = build_r(-u + v, eta);
    let r_b = build_r(-u - v - 2.0 * eta, eta);
    let lhs = r_a.matmul(&k1).matmul(&r_b).matmul(&k2);
    let rhs = k2.matmul(&r_b).matmul(&k1).matmul(&r_a);
    Ok(lhs.rel_distance(&rhs))
}

/// Samples the dual reflection equation for a scalar left boundary at
/// `samples` random spectral pairs.
pub fn check_dual_reflection(
    left: &GeneralBoundary,
    eta: Complex64,
    samples: usize,
    seed: u64,
) -> CheckReport {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let tolerance = 1e-12;
    let mut max_residual: f64 = 0.0;
    let mut points = vec![];
    for _ in 0..samples {
        let u = annulus_point(&mut rng);
        let v = annulus_point(&mut rng);
        points.push([crate::serde_c64::to_pair(u), crate::serde_c64::to_pair(v)]);
        match dual_reflection_residual(left, eta, u, v) {
            Ok(r) => max_residual = max_residual.max(r),
            Err(_) => max_residual = f64::INFINITY,
        }
    }
    CheckReport::new(
        "dual_reflection",
        serde_json::json!({
            "left": left,
            "eta": crate::serde_c64::to_pair(eta),
            "points": points,
        }),
        seed,
        samples,
        max_residual,
        tolerance,
    )
}

/// Caching evaluator for the commuting transfer family. Cached and uncached
/// evaluation are indistinguishable: the cache stores exact results keyed by
/// the bit pattern of u.
pub struct TransferFamily {
    params: ModelParams,
    right: BoundarySpec,
    left: BoundarySpec,
    cache: Mutex<HashMap<(u64, u64), Arc<CMatrix>>>,
    caching: bool,
}

impl TransferFamily {
    pub fn new(params: ModelParams, right: BoundarySpec, left: BoundarySpec) -> Self {
        Self {
            params,
            right,
            left,
            cache: Mutex::new(HashMap::new()),
            caching: true,
        }
    }

    pub fn without_cache(mut self) -> Self {
        self.caching = false;
        self
    }

    pub fn params(&self) -> &ModelParams {
        &self.params
    }

    pub fn eval(&self, u: Complex64) -> Result<Arc<CMatrix>> {
        let key = (u.re.to_bits(), u.im.to_bits());
        if self.caching {
            if let Some(hit) = self.cache.lock().unwrap().get(&key) {
                return Ok(hit.clone());
            }
        }
        let t = Arc::new(build_transfer(u, &self.params, &self.right, &self.left)?);
        if self.caching {
            self.cache
                .lock()
                .unwrap()
                .entry(key)
                .or_insert_with(|| t.clone());
        }
        Ok(t)
    }
}
