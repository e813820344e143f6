//! Dense complex linear algebra substrate.
//!
//! Row-major `Complex64` matrices sized for desk-scale spin chains
//! (hard cap 2^13 on any constructed dimension). Provides Kronecker
//! products, two-site leg embeddings, LU-based solves/inverses/determinants,
//! and full nonsymmetric eigenvalue extraction via Hessenberg reduction
//! followed by shifted QR iteration.

use crate::error::{Error, Result};
use num_complex::Complex64;

/// Hard cap on any constructed matrix dimension.
pub const DIM_CAP: usize = 1 << 13;

/// Condition-estimate cap beyond which `inverse` refuses to answer.
pub const COND_CAP: f64 = 1e12;

pub const ZERO: Complex64 = Complex64::new(0.0, 0.0);
pub const ONE: Complex64 = Complex64::new(1.0, 0.0);

pub fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

pub fn cr(re: f64) -> Complex64 {
    Complex64::new(re, 0.0)
}

/// Dense complex matrix, row-major storage.
#[derive(Debug, Clone, PartialEq)]
pub struct CMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Complex64>,
}

impl CMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            data: vec![ZERO; rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = ONE;
        }
        m
    }

    pub fn from_rows(rows: &[Vec<Complex64>]) -> Self {
        let nr = rows.len();
        let nc = if nr > 0 { rows[0].len() } else { 0 };
        assert!(rows.iter().all(|r| r.len() == nc), "ragged rows");
        let mut data = Vec::with_capacity(nr * nc);
        for r in rows {
            data.extend_from_slice(r);
        }
        Self {
            rows: nr,
            cols: nc,
            data,
        }
    }

    pub fn diag(entries: &[Complex64]) -> Self {
        let n = entries.len();
        let mut m = Self::zeros(n, n);
        for (i, &e) in entries.iter().enumerate() {
            m[(i, i)] = e;
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn data(&self) -> &[Complex64] {
        &self.data
    }

    pub fn row(&self, i: usize) -> &[Complex64] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn trace(&self) -> Complex64 {
        assert!(self.is_square());
        (0..self.rows).map(|i| self[(i, i)]).sum()
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t[(j, i)] = self[(i, j)];
            }
        }
        t
    }

    pub fn dagger(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t[(j, i)] = self[(i, j)].conj();
            }
        }
        t
    }

    pub fn scale(&self, s: Complex64) -> Self {
        Self {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|&x| x * s).collect(),
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        Self {
            rows: self.rows,
            cols: self.cols,
            data: self
                .data
                .iter()
                .zip(&other.data)
                .map(|(&a, &b)| a + b)
                .collect(),
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        Self {
            rows: self.rows,
            cols: self.cols,
            data: self
                .data
                .iter()
                .zip(&other.data)
                .map(|(&a, &b)| a - b)
                .collect(),
        }
    }

    pub fn matmul(&self, other: &Self) -> Self {
        assert_eq!(self.cols, other.rows, "dimension mismatch in matmul");
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self[(i, k)];
                if a == ZERO {
                    continue;
                }
                let orow = other.row(k);
                let out_row = &mut out.data[i * other.cols..(i + 1) * other.cols];
                for (o, &b) in out_row.iter_mut().zip(orow) {
                    *o += a * b;
                }
            }
        }
        out
    }

    pub fn apply(&self, v: &CVector) -> CVector {
        assert_eq!(self.cols, v.dim(), "dimension mismatch in apply");
        let mut out = vec![ZERO; self.rows];
        for i in 0..self.rows {
            let mut acc = ZERO;
            for (j, &x) in v.entries().iter().enumerate() {
                acc += self[(i, j)] * x;
            }
            out[i] = acc;
        }
        CVector::new(out)
    }

    pub fn commutator(&self, other: &Self) -> Self {
        self.matmul(other).sub(&other.matmul(self))
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.data.iter().map(|x| x.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().map(|x| x.norm()).fold(0.0, f64::max)
    }

    pub fn all_finite(&self) -> bool {
        self.data
            .iter()
            .all(|x| x.re.is_finite() && x.im.is_finite())
    }

    /// Relative distance ‖self − other‖_F / max(‖self‖_F, ‖other‖_F, tiny).
    pub fn rel_distance(&self, other: &Self) -> f64 {
        let scale = self
            .frobenius_norm()
            .max(other.frobenius_norm())
            .max(1e-300);
        self.sub(other).frobenius_norm() / scale
    }
}

impl std::ops::Index<(usize, usize)> for CMatrix {
    type Output = Complex64;
    fn index(&self, (i, j): (usize, usize)) -> &Complex64 {
        debug_assert!(i < self.rows && j < self.cols);
        &self.data[i * self.cols + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for CMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Complex64 {
        debug_assert!(i < self.rows && j < self.cols);
        &mut self.data[i * self.cols + j]
    }
}

/// Dense complex vector.
#[derive(Debug, Clone, PartialEq)]
pub struct CVector {
    data: Vec<Complex64>,
}

impl CVector {
    pub fn new(data: Vec<Complex64>) -> Self {
        Self { data }
    }

    pub fn zeros(dim: usize) -> Self {
        Self {
            data: vec![ZERO; dim],
        }
    }

    /// Computational basis vector e_index.
    pub fn basis(dim: usize, index: usize) -> Self {
        assert!(index < dim);
        let mut v = Self::zeros(dim);
        v.data[index] = ONE;
        v
    }

    pub fn dim(&self) -> usize {
        self.data.len()
    }

    pub fn entries(&self) -> &[Complex64] {
        &self.data
    }

    pub fn entries_mut(&mut self) -> &mut [Complex64] {
        &mut self.data
    }

    pub fn norm(&self) -> f64 {
        self.data.iter().map(|x| x.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn scale(&self, s: Complex64) -> Self {
        Self {
            data: self.data.iter().map(|&x| x * s).collect(),
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!(self.dim(), other.dim());
        Self {
            data: self
                .data
                .iter()
                .zip(&other.data)
                .map(|(&a, &b)| a + b)
                .collect(),
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        assert_eq!(self.dim(), other.dim());
        Self {
            data: self
                .data
                .iter()
                .zip(&other.data)
                .map(|(&a, &b)| a - b)
                .collect(),
        }
    }

    pub fn add_assign_scaled(&mut self, other: &Self, s: Complex64) {
        assert_eq!(self.dim(), other.dim());
        for (a, &b) in self.data.iter_mut().zip(&other.data) {
            *a += s * b;
        }
    }

    /// Hermitian inner product ⟨self|other⟩.
    pub fn inner(&self, other: &Self) -> Complex64 {
        assert_eq!(self.dim(), other.dim());
        self.data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| a.conj() * b)
            .sum()
    }

    pub fn all_finite(&self) -> bool {
        self.data
            .iter()
            .all(|x| x.re.is_finite() && x.im.is_finite())
    }
}

impl std::ops::Index<usize> for CVector {
    type Output = Complex64;
    fn index(&self, i: usize) -> &Complex64 {
        &self.data[i]
    }
}

impl std::ops::IndexMut<usize> for CVector {
    fn index_mut(&mut self, i: usize) -> &mut Complex64 {
        &mut self.data[i]
    }
}

/// Kronecker product A ⊗ B.
///
/// Entry ((i·B.rows + k), (j·B.cols + l)) = A(i,j)·B(k,l). Errors when the
/// requested dimension exceeds [`DIM_CAP`].
pub fn kron(a: &CMatrix, b: &CMatrix) -> Result<CMatrix> {
    let rows = a.rows() * b.rows();
    let cols = a.cols() * b.cols();
    if rows > DIM_CAP || cols > DIM_CAP {
        return Err(Error::Size {
            requested: rows.max(cols),
            cap: DIM_CAP,
        });
    }
    let mut out = CMatrix::zeros(rows, cols);
    for i in 0..a.rows() {
        for j in 0..a.cols() {
            let aij = a[(i, j)];
            if aij == ZERO {
                continue;
            }
            for k in 0..b.rows() {
                for l in 0..b.cols() {
                    out[(i * b.rows() + k, j * b.cols() + l)] = aij * b[(k, l)];
                }
            }
        }
    }
    Ok(out)
}

/// Kronecker product of vectors v ⊗ w.
pub fn kron_vec(v: &CVector, w: &CVector) -> CVector {
    let mut out = Vec::with_capacity(v.dim() * w.dim());
    for &a in v.entries() {
        for &b in w.entries() {
            out.push(a * b);
        }
    }
    CVector::new(out)
}

// Internal zero-based embedding of a two-leg operator into an n-leg chain of
// qubits. The first tensor factor of `g` acts on leg `i`, the second on leg
// `j`; legs are counted from the left (slowest index), i != j arbitrary.
pub(crate) fn embed_pair(g: &CMatrix, i: usize, j: usize, n_legs: usize) -> Result<CMatrix> {
    assert_eq!((g.rows(), g.cols()), (4, 4), "embed_pair needs a 4x4 block");
    assert!(i != j && i < n_legs && j < n_legs);
    let dim: usize = 1usize
        .checked_shl(n_legs as u32)
        .filter(|&d| d <= DIM_CAP)
        .ok_or(Error::Size {
            requested: usize::MAX,
            cap: DIM_CAP,
        })?;
    if dim > DIM_CAP {
        return Err(Error::Size {
            requested: dim,
            cap: DIM_CAP,
        });
    }
    // Bit k of a basis index (counting from the most significant of n_legs
    // bits) is the state of leg k.
    let shift_i = n_legs - 1 - i;
    let shift_j = n_legs - 1 - j;
    let mask = !((1usize << shift_i) | (1usize << shift_j));
    let mut out = CMatrix::zeros(dim, dim);
    for row in 0..dim {
        let bi = (row >> shift_i) & 1;
        let bj = (row >> shift_j) & 1;
        let grow = bi * 2 + bj;
        for gcol in 0..4 {
            let v = g[(grow, gcol)];
            if v == ZERO {
                continue;
            }
            let (ci, cj) = (gcol >> 1, gcol & 1);
            let col = (row & mask) | (ci << shift_i) | (cj << shift_j);
            out[(row, col)] = v;
        }
    }
    Ok(out)
}

/// Embeds a 4×4 two-site operator onto legs (i, j) of an L-site chain,
/// identity elsewhere. Legs are 1-based; arbitrary non-adjacent or reversed
/// leg pairs are handled by the index permutation.
pub fn embed_two_site(g: &CMatrix, i: usize, j: usize, l: usize) -> Result<CMatrix> {
    if g.rows() != 4 || g.cols() != 4 {
        return Err(Error::Input(format!(
            "embed_two_site expects a 4x4 operator, got {}x{}",
            g.rows(),
            g.cols()
        )));
    }
    if i == j || i == 0 || j == 0 || i > l || j > l {
        return Err(Error::Input(format!(
            "embed_two_site legs ({i}, {j}) invalid for chain length {l}"
        )));
    }
    embed_pair(g, i - 1, j - 1, l)
}

/// Embeds a 2×2 one-site operator onto leg i (1-based) of an L-site chain.
pub fn embed_one_site(g: &CMatrix, i: usize, l: usize) -> Result<CMatrix> {
    if g.rows() != 2 || g.cols() != 2 {
        return Err(Error::Input(format!(
            "embed_one_site expects a 2x2 operator, got {}x{}",
            g.rows(),
            g.cols()
        )));
    }
    if i == 0 || i > l {
        return Err(Error::Input(format!(
            "embed_one_site leg {i} invalid for chain length {l}"
        )));
    }
    let dim = 1usize << l;
    if dim > DIM_CAP {
        return Err(Error::Size {
            requested: dim,
            cap: DIM_CAP,
        });
    }
    let shift = l - i;
    let mask = !(1usize << shift);
    let mut out = CMatrix::zeros(dim, dim);
    for row in 0..dim {
        let b = (row >> shift) & 1;
        for gc in 0..2 {
            let v = g[(b, gc)];
            if v == ZERO {
                continue;
            }
            let col = (row & mask) | (gc << shift);
            out[(row, col)] = v;
        }
    }
    Ok(out)
}

/// LU decomposition with partial pivoting. Returns (lu, perm, sign swaps).
struct Lu {
    lu: CMatrix,
    perm: Vec<usize>,
    swaps: usize,
    /// Smallest and largest pivot magnitude, for the condition estimate.
    min_pivot: f64,
    max_pivot: f64,
}

fn lu_decompose(a: &CMatrix) -> Lu {
    assert!(a.is_square());
    let n = a.rows();
    let mut lu = a.clone();
    let mut perm: Vec<usize> = (0..n).collect();
    let mut swaps = 0;
    let mut min_pivot = f64::INFINITY;
    let mut max_pivot: f64 = 0.0;
    for col in 0..n {
        // Pivot row
        let mut best = col;
        let mut best_mag = lu[(col, col)].norm();
        for r in col + 1..n {
            let mag = lu[(r, col)].norm();
            if mag > best_mag {
                best = r;
                best_mag = mag;
            }
        }
        if best != col {
            for j in 0..n {
                let tmp = lu[(col, j)];
                lu[(col, j)] = lu[(best, j)];
                lu[(best, j)] = tmp;
            }
            perm.swap(col, best);
            swaps += 1;
        }
        let piv = lu[(col, col)];
        let pmag = piv.norm();
        min_pivot = min_pivot.min(pmag);
        max_pivot = max_pivot.max(pmag);
        if pmag == 0.0 {
            continue; // singular; downstream callers inspect min_pivot
        }
        for r in col + 1..n {
            let factor = lu[(r, col)] / piv;
            lu[(r, col)] = factor;
            for j in col + 1..n {
                let sub = factor * lu[(col, j)];
                lu[(r, j)] -= sub;
            }
        }
    }
    Lu {
        lu,
        perm,
        swaps,
        min_pivot,
        max_pivot,
    }
}

fn lu_solve_one(f: &Lu, b: &[Complex64]) -> Vec<Complex64> {
    let n = f.perm.len();
    let mut y = vec![ZERO; n];
    for i in 0..n {
        let mut acc = b[f.perm[i]];
        for (lij, yj) in f.lu.row(i)[..i].iter().zip(&y) {
            acc -= lij * yj;
        }
        y[i] = acc;
    }
    for i in (0..n).rev() {
        let mut acc = y[i];
        for (lij, yj) in f.lu.row(i)[i + 1..].iter().zip(&y[i + 1..]) {
            acc -= lij * yj;
        }
        y[i] = acc / f.lu[(i, i)];
    }
    y
}

/// Solves A·x = b by LU with partial pivoting.
pub fn solve(a: &CMatrix, b: &CVector) -> Result<CVector> {
    if !a.is_square() || a.rows() != b.dim() {
        return Err(Error::Input("solve: dimension mismatch".into()));
    }
    let f = lu_decompose(a);
    if f.min_pivot <= f.max_pivot * 1e-15 || f.min_pivot == 0.0 {
        return Err(Error::Singular {
            cond: if f.min_pivot == 0.0 {
                f64::INFINITY
            } else {
                f.max_pivot / f.min_pivot
            },
            cap: COND_CAP,
        });
    }
    let x = lu_solve_one(&f, b.entries());
    Ok(CVector::new(x))
}

/// Matrix inverse via LU. Returns the inverse together with the residual
/// ‖A·A⁻¹ − I‖_F / √n. Errors when the pivot-ratio condition estimate
/// exceeds [`COND_CAP`].
pub fn inverse(a: &CMatrix) -> Result<(CMatrix, f64)> {
    if !a.is_square() {
        return Err(Error::Input("inverse: matrix not square".into()));
    }
    let n = a.rows();
    let f = lu_decompose(a);
    let cond = if f.min_pivot == 0.0 {
        f64::INFINITY
    } else {
        f.max_pivot / f.min_pivot
    };
    if cond > COND_CAP {
        return Err(Error::Singular {
            cond,
            cap: COND_CAP,
        });
    }
    let mut inv = CMatrix::zeros(n, n);
    let mut e = vec![ZERO; n];
    for col in 0..n {
        e[col] = ONE;
        let x = lu_solve_one(&f, &e);
        for row in 0..n {
            inv[(row, col)] = x[row];
        }
        e[col] = ZERO;
    }
    let residual = a.matmul(&inv).sub(&CMatrix::identity(n)).frobenius_norm() / (n as f64).sqrt();
    Ok((inv, residual))
}

/// Determinant via LU: product of pivots with the permutation sign.
pub fn determinant(a: &CMatrix) -> Result<Complex64> {
    if !a.is_square() {
        return Err(Error::Input("determinant: matrix not square".into()));
    }
    let f = lu_decompose(a);
    let n = a.rows();
    let mut det = if f.swaps.is_multiple_of(2) { ONE } else { -ONE };
    for i in 0..n {
        det *= f.lu[(i, i)];
    }
    Ok(det)
}

// Givens rotation zeroing b in (a, b): returns (c, s, r) with c real,
// [[c, s], [-conj(s), c]] · (a, b)^T = (r, 0)^T.
fn givens(a: Complex64, b: Complex64) -> (f64, Complex64, Complex64) {
    let an = a.norm();
    let bn = b.norm();
    if bn == 0.0 {
        return (1.0, ZERO, a);
    }
    if an == 0.0 {
        return (0.0, ONE, b);
    }
    let norm = (an * an + bn * bn).sqrt();
    let alpha = a / an;
    let cc = an / norm;
    let s = alpha * b.conj() / norm;
    (cc, s, alpha * norm)
}

// Householder reduction of a square complex matrix to upper Hessenberg form
// (in place, similarity transform).
fn hessenberg(h: &mut CMatrix) {
    let n = h.rows();
    if n < 3 {
        return;
    }
    for k in 0..n - 2 {
        // Build the Householder vector annihilating column k below row k+1.
        let mut xnorm_sq = 0.0;
        for i in k + 1..n {
            xnorm_sq += h[(i, k)].norm_sqr();
        }
        let xnorm = xnorm_sq.sqrt();
        if xnorm == 0.0 {
            continue;
        }
        let x0 = h[(k + 1, k)];
        let phase = if x0.norm() > 0.0 { x0 / x0.norm() } else { ONE };
        let alpha = -phase * xnorm;
        let mut v: Vec<Complex64> = (k + 1..n).map(|i| h[(i, k)]).collect();
        v[0] -= alpha;
        let vnorm_sq: f64 = v.iter().map(|z| z.norm_sqr()).sum();
        if vnorm_sq == 0.0 {
            continue;
        }
        let beta = 2.0 / vnorm_sq;
        // H := P H P with P = I - beta v v^dagger acting on rows/cols k+1..n.
        // Left: rows k+1..n of all columns.
        for j in 0..n {
            let mut dot = ZERO;
            for (idx, i) in (k + 1..n).enumerate() {
                dot += v[idx].conj() * h[(i, j)];
            }
            dot *= beta;
            for (idx, i) in (k + 1..n).enumerate() {
                let sub = v[idx] * dot;
                h[(i, j)] -= sub;
            }
        }
        // Right: columns k+1..n of all rows.
        for i in 0..n {
            let mut dot = ZERO;
            for (idx, j) in (k + 1..n).enumerate() {
                dot += h[(i, j)] * v[idx];
            }
            dot *= beta;
            for (idx, j) in (k + 1..n).enumerate() {
                let sub = dot * v[idx].conj();
                h[(i, j)] -= sub;
            }
        }
    }
}

/// Full nonsymmetric eigenvalue extraction: Hessenberg reduction followed by
/// explicitly shifted QR iteration (Wilkinson shifts, Givens rotations).
/// Returns the multiset of eigenvalues; errors on iteration-cap exhaustion.
pub fn eigenvalues(a: &CMatrix) -> Result<Vec<Complex64>> {
    if !a.is_square() {
        return Err(Error::Input("eigenvalues: matrix not square".into()));
    }
    let n = a.rows();
    if n > DIM_CAP {
        return Err(Error::Size {
            requested: n,
            cap: DIM_CAP,
        });
    }
    if n == 0 {
        return Ok(vec![]);
    }
    if !a.all_finite() {
        return Err(Error::Input("eigenvalues: non-finite entries".into()));
    }
    let mut h = a.clone();
    hessenberg(&mut h);

    let mut eigs = vec![ZERO; n];
    let mut hi = n; // active block is rows/cols 0..hi
    let max_total_iters = 60 * n.max(4);
    let mut iters = 0;
    let mut stagnation = 0;
    while hi > 0 {
        if hi == 1 {
            eigs[0] = h[(0, 0)];
            break;
        }
        // Deflation scan: find the largest lo with a negligible subdiagonal.
        let mut lo = hi - 1;
        while lo > 0 {
            let sub = h[(lo, lo - 1)].norm();
            let scale = h[(lo - 1, lo - 1)].norm() + h[(lo, lo)].norm();
            if sub <= f64::EPSILON * scale.max(1e-300) {
                h[(lo, lo - 1)] = ZERO;
                break;
            }
            lo -= 1;
        }
        if lo == hi - 1 {
            // 1x1 block converged.
            eigs[hi - 1] = h[(hi - 1, hi - 1)];
            hi -= 1;
            stagnation = 0;
            continue;
        }
        if hi - lo == 2
            && h[(hi - 1, hi - 2)].norm()
                <= f64::EPSILON
                    * 16.0
                    * (h[(hi - 2, hi - 2)].norm() + h[(hi - 1, hi - 1)].norm()).max(1e-300)
        {
            // 2x2 block effectively triangular.
            eigs[hi - 1] = h[(hi - 1, hi - 1)];
            eigs[hi - 2] = h[(hi - 2, hi - 2)];
            hi -= 2;
            stagnation = 0;
            continue;
        }
        iters += 1;
        stagnation += 1;
        if iters > max_total_iters {
            return Err(Error::NonConvergence(format!(
                "eigenvalues: QR iteration cap {max_total_iters} reached with active block {lo}..{hi} \
                 (subdiagonal {:.3e})",
                h[(hi - 1, hi - 2)].norm()
            )));
        }
        // Wilkinson shift from the trailing 2x2 of the active block; fall back
        // to an exceptional shift when progress stalls.
        let shift = if stagnation % 12 == 0 {
            h[(hi - 1, hi - 2)] + h[(hi - 1, hi - 1)]
        } else {
            let a11 = h[(hi - 2, hi - 2)];
            let a12 = h[(hi - 2, hi - 1)];
            let a21 = h[(hi - 1, hi - 2)];
            let a22 = h[(hi - 1, hi - 1)];
            let tr = a11 + a22;
            let disc = ((a11 - a22) * (a11 - a22) + cr(4.0) * a12 * a21).sqrt();
            let l1 = (tr + disc) * cr(0.5);
            let l2 = (tr - disc) * cr(0.5);
            if (l1 - a22).norm() < (l2 - a22).norm() {
                l1
            } else {
                l2
            }
        };
        // Explicit shifted QR sweep on the active Hessenberg block via Givens.
        for i in lo..hi {
            h[(i, i)] -= shift;
        }
        let mut rots: Vec<(f64, Complex64)> = Vec::with_capacity(hi - lo - 1);
        for k in lo..hi - 1 {
            let (cc, s, r) = givens(h[(k, k)], h[(k + 1, k)]);
            h[(k, k)] = r;
            h[(k + 1, k)] = ZERO;
            for j in k + 1..hi {
                let x = h[(k, j)];
                let y = h[(k + 1, j)];
                h[(k, j)] = cr(cc) * x + s * y;
                h[(k + 1, j)] = -s.conj() * x + cr(cc) * y;
            }
            rots.push((cc, s));
        }
        // Multiply RQ: apply the conjugated rotations from the right.
        for (k, &(cc, s)) in rots.iter().enumerate() {
            let k = lo + k;
            for i in lo..(k + 2).min(hi) {
                let x = h[(i, k)];
                let y = h[(i, k + 1)];
                h[(i, k)] = x * cr(cc) + y * s.conj();
                h[(i, k + 1)] = -x * s + y * cr(cc);
            }
        }
        for i in lo..hi {
            h[(i, i)] += shift;
        }
    }
    Ok(eigs)
}

/// Greedy minimal matching between two complex multisets; returns the largest
/// pairwise distance of the matching. Used for spectrum comparisons.
pub fn match_multisets(a: &[Complex64], b: &[Complex64]) -> f64 {
    assert_eq!(a.len(), b.len());
    let mut remaining: Vec<Complex64> = b.to_vec();
    let mut worst: f64 = 0.0;
    // Match the hardest points first to keep the greedy pairing tight.
    let mut order: Vec<usize> = (0..a.len()).collect();
    order.sort_by(|&i, &j| {
        b_dist(a[j], &remaining)
            .partial_cmp(&b_dist(a[i], &remaining))
            .unwrap()
    });
    for &i in &order {
        let (best_idx, best_d) = remaining
            .iter()
            .enumerate()
            .map(|(k, &z)| (k, (z - a[i]).norm()))
            .min_by(|x, y| x.1.partial_cmp(&y.1).unwrap())
            .unwrap();
        worst = worst.max(best_d);
        remaining.swap_remove(best_idx);
    }
    worst
}

fn b_dist(z: Complex64, pool: &[Complex64]) -> f64 {
    pool.iter()
        .map(|&w| (w - z).norm())
        .fold(f64::INFINITY, f64::min)
}
