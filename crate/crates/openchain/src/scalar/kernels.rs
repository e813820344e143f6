//! Rational kernels of the open-chain exchange algebra.
//!
//! Single-letter names follow the standard Bethe-ansatz conventions for
//! these functions; each evaluator guards every factor of its printed
//! denominator and reports a pole error instead of returning a huge value.

use crate::error::Result;
use crate::scalar::guard_factor;
use num_complex::Complex64;

/// Boltzmann weights (a, b, c) of the rational R-matrix: (u + eta, u, eta).
pub fn r_weights(u: Complex64, eta: Complex64) -> (Complex64, Complex64, Complex64) {
    (u + eta, u, eta)
}

/// f(u,v) = (u-v-eta)(u+v) / ((u+v+eta)(u-v))
pub fn f(u: Complex64, v: Complex64, eta: Complex64) -> Result<Complex64> {
    let d1 = guard_factor("f", "u+v+eta", u + v + eta, eta)?;
    let d2 = guard_factor("f", "u-v", u - v, eta)?;
    Ok((u - v - eta) * (u + v) / (d1 * d2))
}

/// h(u,v) = (u-v+eta)(u+v+2 eta) / ((u-v)(u+v+eta))
pub fn h(u: Complex64, v: Complex64, eta: Complex64) -> Result<Complex64> {
    let d1 = guard_factor("h", "u-v", u - v, eta)?;
    let d2 = guard_factor("h", "u+v+eta", u + v + eta, eta)?;
    Ok((u - v + eta) * (u + v + 2.0 * eta) / (d1 * d2))
}

/// g(u,v) = 2 eta v / ((2v+eta)(u-v))
pub fn g(u: Complex64, v: Complex64, eta: Complex64) -> Result<Complex64> {
    let d1 = guard_factor("g", "2v+eta", 2.0 * v + eta, eta)?;
    let d2 = guard_factor("g", "u-v", u - v, eta)?;
    Ok(2.0 * eta * v / (d1 * d2))
}

/// w(u,v) = -eta / (u+v+eta)
pub fn w(u: Complex64, v: Complex64, eta: Complex64) -> Result<Complex64> {
    let d = guard_factor("w", "u+v+eta", u + v + eta, eta)?;
    Ok(-eta / d)
}

/// k(u,v) = -2 eta (u+eta) / ((u-v)(2u+eta))
pub fn k(u: Complex64, v: Complex64, eta: Complex64) -> Result<Complex64> {
    let d1 = guard_factor("k", "u-v", u - v, eta)?;
    let d2 = guard_factor("k", "2u+eta", 2.0 * u + eta, eta)?;
    Ok(-2.0 * eta * (u + eta) / (d1 * d2))
}

/// n(u,v) = 4 v eta (u+eta) / ((u+v+eta)(2v+eta)(2u+eta))
pub fn n(u: Complex64, v: Complex64, eta: Complex64) -> Result<Complex64> {
    let d1 = guard_factor("n", "u+v+eta", u + v + eta, eta)?;
    let d2 = guard_factor("n", "2v+eta", 2.0 * v + eta, eta)?;
    let d3 = guard_factor("n", "2u+eta", 2.0 * u + eta, eta)?;
    Ok(4.0 * v * eta * (u + eta) / (d1 * d2 * d3))
}

/// m(u,v) = 2 eta u (u-v+eta) / ((2u+eta)(u+v+eta)(u-v))
pub fn m(u: Complex64, v: Complex64, eta: Complex64) -> Result<Complex64> {
    let d1 = guard_factor("m", "2u+eta", 2.0 * u + eta, eta)?;
    let d2 = guard_factor("m", "u+v+eta", u + v + eta, eta)?;
    let d3 = guard_factor("m", "u-v", u - v, eta)?;
    Ok(2.0 * eta * u * (u - v + eta) / (d1 * d2 * d3))
}

/// l(u,v) = -2 eta^2 u / ((2u+eta)(2v+eta)(u-v))
pub fn l(u: Complex64, v: Complex64, eta: Complex64) -> Result<Complex64> {
    let d1 = guard_factor("l", "2u+eta", 2.0 * u + eta, eta)?;
    let d2 = guard_factor("l", "2v+eta", 2.0 * v + eta, eta)?;
    let d3 = guard_factor("l", "u-v", u - v, eta)?;
    Ok(-2.0 * eta * eta * u / (d1 * d2 * d3))
}

/// q(u,v) = eta (u+v) / ((u+v+eta)(u-v))
pub fn q(u: Complex64, v: Complex64, eta: Complex64) -> Result<Complex64> {
    let d1 = guard_factor("q", "u+v+eta", u + v + eta, eta)?;
    let d2 = guard_factor("q", "u-v", u - v, eta)?;
    Ok(eta * (u + v) / (d1 * d2))
}

/// p(u,v) = -2 eta u / ((2u+eta)(u-v))
pub fn p(u: Complex64, v: Complex64, eta: Complex64) -> Result<Complex64> {
    let d1 = guard_factor("p", "2u+eta", 2.0 * u + eta, eta)?;
    let d2 = guard_factor("p", "u-v", u - v, eta)?;
    Ok(-2.0 * eta * u / (d1 * d2))
}

/// y(u,v) = -eta^2 / ((u+v+eta)(2v+eta))
pub fn y(u: Complex64, v: Complex64, eta: Complex64) -> Result<Complex64> {
    let d1 = guard_factor("y", "u+v+eta", u + v + eta, eta)?;
    let d2 = guard_factor("y", "2v+eta", 2.0 * v + eta, eta)?;
    Ok(-eta * eta / (d1 * d2))
}

/// z(u,v) = -eta / (u+v+eta); identical to w as a function.
pub fn z(u: Complex64, v: Complex64, eta: Complex64) -> Result<Complex64> {
    let d = guard_factor("z", "u+v+eta", u + v + eta, eta)?;
    Ok(-eta / d)
}

/// Z11(u, xi, xj): symmetric two-root kernel of the paired creation term.
pub fn z11(u: Complex64, xi: Complex64, xj: Complex64, eta: Complex64) -> Result<Complex64> {
    let d1 = guard_factor("Z11", "2x_i+eta", 2.0 * xi + eta, eta)?;
    let d2 = guard_factor("Z11", "2x_j+eta", 2.0 * xj + eta, eta)?;
    let d3 = guard_factor("Z11", "x_i+x_j+eta", xi + xj + eta, eta)?;
    let d4 = guard_factor("Z11", "u+x_i+eta", u + xi + eta, eta)?;
    let d5 = guard_factor("Z11", "u+x_j+eta", u + xj + eta, eta)?;
    let d6 = guard_factor("Z11", "u-x_i", u - xi, eta)?;
    let d7 = guard_factor("Z11", "u-x_j", u - xj, eta)?;
    let num = 8.0 * eta * eta * xi * xj * (xi + xj) * (u * u - xi * xj + eta * u);
    Ok(num / (d1 * d2 * d3 * d4 * d5 * d6 * d7))
}

/// Z12(u, xi, xj): mixed two-root kernel (asymmetric in its root arguments).
pub fn z12(u: Complex64, xi: Complex64, xj: Complex64, eta: Complex64) -> Result<Complex64> {
    let d1 = guard_factor("Z12", "2x_i+eta", 2.0 * xi + eta, eta)?;
    let d2 = guard_factor("Z12", "x_i-x_j", xi - xj, eta)?;
    let d3 = guard_factor("Z12", "u+x_i+eta", u + xi + eta, eta)?;
    let d4 = guard_factor("Z12", "u+x_j+eta", u + xj + eta, eta)?;
    let d5 = guard_factor("Z12", "u-x_i", u - xi, eta)?;
    let d6 = guard_factor("Z12", "u-x_j", u - xj, eta)?;
    let num = 4.0 * eta * eta * xi * (xj - xi + eta) * (u * u + eta * u + xi * xj + eta * xi);
    Ok(num / (d1 * d2 * d3 * d4 * d5 * d6))
}

/// Z22(u, xi, xj): symmetric two-root kernel of the paired creation term.
pub fn z22(u: Complex64, xi: Complex64, xj: Complex64, eta: Complex64) -> Result<Complex64> {
    let d1 = guard_factor("Z22", "x_i+x_j+eta", xi + xj + eta, eta)?;
    let d2 = guard_factor("Z22", "u+x_i+eta", u + xi + eta, eta)?;
    let d3 = guard_factor("Z22", "u+x_j+eta", u + xj + eta, eta)?;
    let d4 = guard_factor("Z22", "u-x_i", u - xi, eta)?;
    let d5 = guard_factor("Z22", "u-x_j", u - xj, eta)?;
    let num = 2.0 * eta * eta * (xi + xj + 2.0 * eta) * (u * u - (xi + eta) * (xj + eta) + eta * u);
    Ok(num / (d1 * d2 * d3 * d4 * d5))
}

/// The six exchange kernels appearing in the diagonal-action commutators.
#[derive(Debug, Clone, Copy)]
pub struct ExchangeKernels {
    pub f: Complex64,
    pub h: Complex64,
    pub g: Complex64,
    pub w: Complex64,
    pub k: Complex64,
    pub n: Complex64,
}

pub fn exchange_kernels(u: Complex64, v: Complex64, eta: Complex64) -> Result<ExchangeKernels> {
    Ok(ExchangeKernels {
        f: f(u, v, eta)?,
        h: h(u, v, eta)?,
        g: g(u, v, eta)?,
        w: w(u, v, eta)?,
        k: k(u, v, eta)?,
        n: n(u, v, eta)?,
    })
}

/// The six kernels of the creation-annihilation commutator.
#[derive(Debug, Clone, Copy)]
pub struct CbKernels {
    pub m: Complex64,
    pub l: Complex64,
    pub p: Complex64,
    pub q: Complex64,
    pub y: Complex64,
    pub z: Complex64,
}

pub fn cb_kernels(u: Complex64, v: Complex64, eta: Complex64) -> Result<CbKernels> {
    Ok(CbKernels {
        m: m(u, v, eta)?,
        l: l(u, v, eta)?,
        p: p(u, v, eta)?,
        q: q(u, v, eta)?,
        y: y(u, v, eta)?,
        z: z(u, v, eta)?,
    })
}

/// The three paired-creation kernels.
#[derive(Debug, Clone, Copy)]
pub struct ZKernels {
    pub z11: Complex64,
    pub z12: Complex64,
    pub z22: Complex64,
}

pub fn z_kernels(u: Complex64, xi: Complex64, xj: Complex64, eta: Complex64) -> Result<ZKernels> {
    Ok(ZKernels {
        z11: z11(u, xi, xj, eta)?,
        z12: z12(u, xi, xj, eta)?,
        z22: z22(u, xi, xj, eta)?,
    })
}
