//! Model-level scalar functions: boundary kappa factors, pseudo-vacuum and
//! dressed eigenvalue factors, subset weights, the transfer-matrix
//! eigenvalue, the cleared Bethe residual, and the two cancellation
//! coefficients whose on-shell vanishing certifies the eigenvector property.

use crate::error::Result;
use crate::scalar::{guard_factor, kernels, IndexSet, ModelParams, RootSet, TriangularBoundary};
use num_complex::Complex64;

const ONE: Complex64 = Complex64::new(1.0, 0.0);

/// kappa_1(u) = 2(u+eta)(a_bar - b_bar u) / (2u+eta)
pub fn kappa1(u: Complex64, left: &TriangularBoundary, eta: Complex64) -> Result<Complex64> {
    let d = guard_factor("kappa1", "2u+eta", 2.0 * u + eta, eta)?;
    Ok(2.0 * (u + eta) * (left.a - left.b * u) / d)
}

/// kappa_2(u) = (u+eta) b_bar + a_bar
pub fn kappa2(u: Complex64, left: &TriangularBoundary, _eta: Complex64) -> Complex64 {
    (u + _eta) * left.b + left.a
}

/// kappa_12(u) = -(u+eta) c_bar
pub fn kappa12(u: Complex64, left: &TriangularBoundary, _eta: Complex64) -> Complex64 {
    -(u + _eta) * left.c
}

/// Xi(u) = (2u+eta)(b_bar(u+eta) + a_bar) / (2u (a_bar - b_bar u)),
/// the boundary ratio entering the Bethe equations.
pub fn big_xi(u: Complex64, left: &TriangularBoundary, eta: Complex64) -> Result<Complex64> {
    let d1 = guard_factor("Xi", "u", u, eta)?;
    let d2 = guard_factor("Xi", "a_bar - b_bar u", left.a - left.b * u, eta)?;
    Ok((2.0 * u + eta) * (left.b * (u + eta) + left.a) / (2.0 * d1 * d2))
}

/// All four left-boundary kernels at once.
#[derive(Debug, Clone, Copy)]
pub struct BoundaryKernels {
    pub kappa1: Complex64,
    pub kappa2: Complex64,
    pub kappa12: Complex64,
    pub xi: Complex64,
}

pub fn boundary_kernels(
    u: Complex64,
    left: &TriangularBoundary,
    eta: Complex64,
) -> Result<BoundaryKernels> {
    Ok(BoundaryKernels {
        kappa1: kappa1(u, left, eta)?,
        kappa2: kappa2(u, left, eta),
        kappa12: kappa12(u, left, eta),
        xi: big_xi(u, left, eta)?,
    })
}

/// Pseudo-vacuum eigenvalue factors (Lambda_1, Lambda_2) of the diagonal
/// double-row entries in the triangular gauge.
pub fn vacuum_eigenvalues(
    u: Complex64,
    params: &ModelParams,
    right: &TriangularBoundary,
) -> Result<(Complex64, Complex64)> {
    let eta = params.eta;
    let mut lambda1 = right.a + right.b * u;
    let d0 = guard_factor("Lambda2", "2u+eta", 2.0 * u + eta, eta)?;
    let mut lambda2 = 2.0 * u * (right.a - right.b * (u + eta)) / d0;
    for &xi in &params.xi {
        let am = guard_factor("Lambda1", "a(-u-xi_j)", eta - u - xi, eta)?;
        lambda1 *= (u - xi + eta) / am;
        let ap = guard_factor("Lambda2", "a(u+xi_j)", u + xi + eta, eta)?;
        lambda2 *= (u + xi) * (u - xi) / (ap * am);
    }
    Ok((lambda1, lambda2))
}

/// Dressed eigenvalue factors at level `xs.len()`:
/// Lambda_1 Prod f(u, x_k) and Lambda_2 Prod h(u, x_k).
pub fn dressed_eigenvalues(
    u: Complex64,
    xs: &[Complex64],
    params: &ModelParams,
    right: &TriangularBoundary,
) -> Result<(Complex64, Complex64)> {
    let (mut l1, mut l2) = vacuum_eigenvalues(u, params, right)?;
    for &x in xs {
        l1 *= kernels::f(u, x, params.eta)?;
        l2 *= kernels::h(u, x, params.eta)?;
    }
    Ok((l1, l2))
}

// Sub-list of xs with position k removed.
fn without(xs: &[Complex64], k: usize) -> Vec<Complex64> {
    let mut out = Vec::with_capacity(xs.len() - 1);
    out.extend_from_slice(&xs[..k]);
    out.extend_from_slice(&xs[k + 1..]);
    out
}

fn without2(xs: &[Complex64], i: usize, j: usize) -> Vec<Complex64> {
    debug_assert!(i < j);
    let mut out = Vec::with_capacity(xs.len() - 2);
    for (idx, &x) in xs.iter().enumerate() {
        if idx != i && idx != j {
            out.push(x);
        }
    }
    out
}

/// Off-diagonal coefficients (M_k, N_k) of the diagonal-entry actions on an
/// excitation product: the unwanted-term weights attached to B(u).
/// `k` indexes into `xs`.
pub fn action_mn(
    u: Complex64,
    xs: &[Complex64],
    k: usize,
    params: &ModelParams,
    right: &TriangularBoundary,
) -> Result<(Complex64, Complex64)> {
    let eta = params.eta;
    let xk = xs[k];
    let rest = without(xs, k);
    let (l1, l2) = dressed_eigenvalues(xk, &rest, params, right)?;
    let m_k = kernels::g(u, xk, eta)? * l1 + kernels::w(u, xk, eta)? * l2;
    let n_k = kernels::k(u, xk, eta)? * l2 + kernels::n(u, xk, eta)? * l1;
    Ok((m_k, n_k))
}

/// Single-root coefficient G_i of the annihilation-operator action.
/// `i` indexes into `xs`.
pub fn action_g(
    u: Complex64,
    xs: &[Complex64],
    i: usize,
    params: &ModelParams,
    right: &TriangularBoundary,
) -> Result<Complex64> {
    let eta = params.eta;
    let xi = xs[i];
    let rest = without(xs, i);
    let (l1_u, l2_u) = dressed_eigenvalues(u, &rest, params, right)?;
    let (l1_x, l2_x) = dressed_eigenvalues(xi, &rest, params, right)?;
    let ks = kernels::cb_kernels(u, xi, eta)?;
    Ok(l1_u * ((ks.m + ks.l) * l1_x + ks.p * l2_x) + l2_u * ((ks.q + ks.y) * l1_x + ks.z * l2_x))
}

/// Paired-root coefficient F_ij of the annihilation-operator action.
/// `i < j` index into `xs`.
pub fn action_f_pair(
    u: Complex64,
    xs: &[Complex64],
    i: usize,
    j: usize,
    params: &ModelParams,
    right: &TriangularBoundary,
) -> Result<Complex64> {
    assert!(i < j, "action_f_pair needs i < j");
    let eta = params.eta;
    let (xi, xj) = (xs[i], xs[j]);
    let rest = without2(xs, i, j);
    let (l1_i, l2_i) = dressed_eigenvalues(xi, &rest, params, right)?;
    let (l1_j, l2_j) = dressed_eigenvalues(xj, &rest, params, right)?;
    let z11 = kernels::z11(u, xi, xj, eta)?;
    let z12_ij = kernels::z12(u, xi, xj, eta)?;
    let z12_ji = kernels::z12(u, xj, xi, eta)?;
    let z22 = kernels::z22(u, xi, xj, eta)?;
    Ok(l1_i * (z11 * l1_j + z12_ij * l2_j) + l2_i * (z12_ji * l1_j + z22 * l2_j))
}

/// Subset weight W_I of the generalized Bethe vector.
pub fn bethe_weight(
    set: &IndexSet,
    roots: &RootSet,
    params: &ModelParams,
    right: &TriangularBoundary,
    left: &TriangularBoundary,
) -> Result<Complex64> {
    let eta = params.eta;
    let comp = set.complement();
    let mut num = ONE;
    for &i in comp.members() {
        let ui = roots.root(i);
        let (_, l2) = vacuum_eigenvalues(ui, params, right)?;
        let d = guard_factor("W", "b_bar u_i - a_bar", left.b * ui - left.a, eta)?;
        let mut factor = l2 * left.c * (2.0 * ui + eta) / (2.0 * d);
        for k in 0..roots.len() {
            if k != i {
                factor *= kernels::h(ui, roots.root(k), eta)?;
            }
        }
        num *= factor;
    }
    let mut den = ONE;
    let cm = comp.members();
    for (a, &j) in cm.iter().enumerate() {
        for &k in &cm[a + 1..] {
            den *= kernels::h(roots.root(j), roots.root(k), eta)?
                * kernels::f(roots.root(j), roots.root(k), eta)?;
        }
    }
    let den = guard_factor("W", "pair denominator", den, eta)?;
    Ok(num / den)
}

/// Transfer-matrix eigenvalue Lambda(u) attached to a root set.
pub fn transfer_eigenvalue(
    u: Complex64,
    roots: &RootSet,
    params: &ModelParams,
    right: &TriangularBoundary,
    left: &TriangularBoundary,
) -> Result<Complex64> {
    let eta = params.eta;
    let (l1, l2) = vacuum_eigenvalues(u, params, right)?;
    let mut pf = ONE;
    let mut ph = ONE;
    for &uk in roots.roots() {
        pf *= kernels::f(u, uk, eta)?;
        ph *= kernels::h(u, uk, eta)?;
    }
    Ok(kappa1(u, left, eta)? * l1 * pf + kappa2(u, left, eta) * l2 * ph)
}

/// The two sides of the cleared Bethe equation for root k:
/// (Lambda_1(u_k) Prod f, Xi(u_k) Lambda_2(u_k) Prod h).
fn bethe_terms(
    roots: &RootSet,
    k: usize,
    params: &ModelParams,
    right: &TriangularBoundary,
    left: &TriangularBoundary,
) -> Result<(Complex64, Complex64)> {
    let eta = params.eta;
    let uk = roots.root(k);
    let (l1, l2) = vacuum_eigenvalues(uk, params, right)?;
    let xi = big_xi(uk, left, eta)?;
    let mut pf = ONE;
    let mut ph = ONE;
    for (j, &uj) in roots.roots().iter().enumerate() {
        if j != k {
            pf *= kernels::f(uk, uj, eta)?;
            ph *= kernels::h(uk, uj, eta)?;
        }
    }
    Ok((l1 * pf, xi * l2 * ph))
}

/// Denominator-cleared Bethe residual, one complex component per root:
/// Lambda_1(u_k) Prod_{j != k} f(u_k, u_j) - Xi(u_k) Lambda_2(u_k) Prod_{j != k} h(u_k, u_j).
pub fn bethe_residual(
    roots: &RootSet,
    params: &ModelParams,
    right: &TriangularBoundary,
    left: &TriangularBoundary,
) -> Result<Vec<Complex64>> {
    (0..roots.len())
        .map(|k| bethe_terms(roots, k, params, right, left).map(|(a, b)| a - b))
        .collect()
}

/// Relative residual norm: max over components of |A_k - B_k| / (1 + |A_k| + |B_k|).
/// Also returns the smallest term magnitude max(|A_k|, |B_k|) so callers can
/// detect degenerate 0 = 0 solutions of the cleared form.
pub fn bethe_residual_scaled(
    roots: &RootSet,
    params: &ModelParams,
    right: &TriangularBoundary,
    left: &TriangularBoundary,
) -> Result<(Vec<Complex64>, f64, f64)> {
    let mut components = Vec::with_capacity(roots.len());
    let mut norm: f64 = 0.0;
    let mut min_terms = f64::INFINITY;
    for k in 0..roots.len() {
        let (a, b) = bethe_terms(roots, k, params, right, left)?;
        let comp = a - b;
        norm = norm.max(comp.norm() / (1.0 + a.norm() + b.norm()));
        min_terms = min_terms.min(a.norm().max(b.norm()));
        components.push(comp);
    }
    Ok((components, norm, min_terms))
}

/// Coefficient of the level-l basis vector in (t(u) - Lambda(u)) applied to
/// the Bethe vector, stripped to the Lambda_1-component. Vanishes on shell.
pub fn expansion_coef1(
    u: Complex64,
    set: &IndexSet,
    roots: &RootSet,
    params: &ModelParams,
    right: &TriangularBoundary,
    left: &TriangularBoundary,
) -> Result<Complex64> {
    expansion_coef1_scaled(u, set, roots, params, right, left).map(|(v, _)| v)
}

/// [`expansion_coef1`] together with the summed term magnitudes, for
/// scale-aware vanishing checks.
pub fn expansion_coef1_scaled(
    u: Complex64,
    set: &IndexSet,
    roots: &RootSet,
    params: &ModelParams,
    right: &TriangularBoundary,
    left: &TriangularBoundary,
) -> Result<(Complex64, f64)> {
    let eta = params.eta;
    let comp = set.complement();
    if comp.is_empty() {
        return Ok((Complex64::new(0.0, 0.0), 0.0));
    }
    let u_i = roots.select(set);
    let w_i = bethe_weight(set, roots, params, right, left)?;
    let mut prod_f = ONE;
    for &j in comp.members() {
        prod_f *= kernels::f(u, roots.root(j), eta)?;
    }
    let k1 = kappa1(u, left, eta)?;
    let mut acc = k1 * w_i * (ONE - prod_f);
    let mut scale = (k1 * w_i).norm() * (1.0 + prod_f.norm());
    let k12 = kappa12(u, left, eta);
    for &j in comp.members() {
        let uj = roots.root(j);
        let w_ij = bethe_weight(&set.with_member(j), roots, params, right, left)?;
        let (l1, l2) = dressed_eigenvalues(uj, &u_i, params, right)?;
        let ml = kernels::m(u, uj, eta)? + kernels::l(u, uj, eta)?;
        let p = kernels::p(u, uj, eta)?;
        let term = k12 * w_ij * (ml * l1 + p * l2);
        acc += term;
        scale += term.norm();
    }
    Ok((acc, scale))
}

/// Coefficient of B(u) acting on a level-l basis vector in
/// (t(u) - Lambda(u)) applied to the Bethe vector, assembled directly from
/// W, M, N and F. Vanishes on shell.
pub fn expansion_x(
    u: Complex64,
    set: &IndexSet,
    roots: &RootSet,
    params: &ModelParams,
    right: &TriangularBoundary,
    left: &TriangularBoundary,
) -> Result<Complex64> {
    expansion_x_scaled(u, set, roots, params, right, left).map(|(v, _)| v)
}

/// [`expansion_x`] together with the summed term magnitudes.
pub fn expansion_x_scaled(
    u: Complex64,
    set: &IndexSet,
    roots: &RootSet,
    params: &ModelParams,
    right: &TriangularBoundary,
    left: &TriangularBoundary,
) -> Result<(Complex64, f64)> {
    let eta = params.eta;
    let comp = set.complement();
    let mut acc = Complex64::new(0.0, 0.0);
    let mut scale = 0.0f64;
    let kap1 = kappa1(u, left, eta)?;
    let kap2 = kappa2(u, left, eta);
    let kap12 = kappa12(u, left, eta);
    for &j in comp.members() {
        let set_j = set.with_member(j);
        let xs = roots.select(&set_j);
        let pos = set_j.position_of(j).expect("member present");
        let w = bethe_weight(&set_j, roots, params, right, left)?;
        let (m_j, n_j) = action_mn(u, &xs, pos, params, right)?;
        let term = w * (kap1 * m_j + kap2 * n_j);
        acc += term;
        scale += w.norm() * ((kap1 * m_j).norm() + (kap2 * n_j).norm());
    }
    let cm = comp.members();
    for (a, &j) in cm.iter().enumerate() {
        for &k in &cm[a + 1..] {
            let set_jk = set.with_member(j).with_member(k);
            let xs = roots.select(&set_jk);
            let pj = set_jk.position_of(j).expect("member present");
            let pk = set_jk.position_of(k).expect("member present");
            let w = bethe_weight(&set_jk, roots, params, right, left)?;
            let f_jk = action_f_pair(u, &xs, pj.min(pk), pj.max(pk), params, right)?;
            let term = kap12 * w * f_jk;
            acc += term;
            scale += term.norm();
        }
    }
    Ok((acc, scale))
}

/// The single-root weight L(u, u_j) of the resummed form of the
/// B(u)-coefficient:
///
///   L(u, u_j) = 2 (kappa_1(u) g(u,u_j) + kappa_2(u) n(u,u_j))
///               Xi(u_j) (b_bar u_j - a_bar) / ((2u_j+eta)(u+eta)).
///
/// The (u+eta) in the denominator cancels the explicit (u+eta) factor of
/// kappa_1 g + kappa_2 n, matching the pair weight Q in which the same
/// factor was absorbed.
pub fn resummed_l(
    u: Complex64,
    uj: Complex64,
    left: &TriangularBoundary,
    eta: Complex64,
) -> Result<Complex64> {
    let d1 = guard_factor("L", "2u_j+eta", 2.0 * uj + eta, eta)?;
    let d2 = guard_factor("L", "u+eta", u + eta, eta)?;
    let core = kappa1(u, left, eta)? * kernels::g(u, uj, eta)?
        + kappa2(u, left, eta) * kernels::n(u, uj, eta)?;
    Ok(2.0 * core * big_xi(uj, left, eta)? * (left.b * uj - left.a) / (d1 * d2))
}

/// The paired-root weight Q(u, x, y) of the resummed form.
pub fn resummed_q(
    u: Complex64,
    x: Complex64,
    y: Complex64,
    left: &TriangularBoundary,
    eta: Complex64,
) -> Result<Complex64> {
    let d1 = guard_factor("Q", "2x+eta", 2.0 * x + eta, eta)?;
    let d2 = guard_factor("Q", "2y+eta", 2.0 * y + eta, eta)?;
    let d3 = guard_factor("Q", "x+y", x + y, eta)?;
    let core = kernels::z11(u, x, y, eta)? * big_xi(x, left, eta)? * big_xi(y, left, eta)?;
    Ok(
        -4.0 * core * (left.b * x - left.a) * (left.b * y - left.a) * (x + y + 2.0 * eta)
            / (d1 * d2 * d3),
    )
}

/// Resummed form of the B(u)-coefficient: single-root weights L paired with
/// the difference of restricted h- and f-products, plus pair weights Q
/// evaluated over both root representatives u_j and -u_j-eta. Valid on
/// shell, where the direct assembly satisfies
///
///   expansion_x(u) = W_I (u+eta) / c_bar * expansion_x_resummed(u)
///
/// so both vanish together. The reduction eliminates the dressed vacuum
/// factors through the Bethe equations; the two routes share no
/// intermediate values, which makes their agreement a genuine cross-check.
pub fn expansion_x_resummed(
    u: Complex64,
    set: &IndexSet,
    roots: &RootSet,
    params: &ModelParams,
    right: &TriangularBoundary,
    left: &TriangularBoundary,
) -> Result<Complex64> {
    let _ = right; // the resummed form depends on the right boundary only through the Bethe equations
    let eta = params.eta;
    let comp = set.complement();
    let cm = comp.members();
    let mut acc = Complex64::new(0.0, 0.0);
    for &j in cm {
        let uj = roots.root(j);
        let mut ph = ONE;
        let mut pf = ONE;
        for &k in cm {
            if k != j {
                ph *= kernels::h(uj, roots.root(k), eta)?;
                pf *= kernels::f(uj, roots.root(k), eta)?;
            }
        }
        acc += resummed_l(u, uj, left, eta)? * (ph - pf);
    }
    for &j in cm {
        for &l in cm {
            if l == j {
                continue;
            }
            let (uj, ul) = (roots.root(j), roots.root(l));
            let mut pff = ONE;
            let mut phh = ONE;
            let mut pfh = ONE;
            let mut phf = ONE;
            for &k in cm {
                if k != j && k != l {
                    let uk = roots.root(k);
                    let fj = kernels::f(uj, uk, eta)?;
                    let fl = kernels::f(ul, uk, eta)?;
                    let hj = kernels::h(uj, uk, eta)?;
                    let hl = kernels::h(ul, uk, eta)?;
                    pff *= fj * fl;
                    phh *= hj * hl;
                    pfh *= fj * hl;
                    phf *= hj * fl;
                }
            }
            let sj = -uj - eta;
            let sl = -ul - eta;
            let sum = resummed_q(u, sj, sl, left, eta)? * pff
                + resummed_q(u, uj, ul, left, eta)? * phh
                + resummed_q(u, sj, ul, left, eta)? * pfh
                + resummed_q(u, uj, sl, left, eta)? * phf;
            acc += 0.5 * sum;
        }
    }
    Ok(acc)
}
