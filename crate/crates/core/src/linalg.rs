//! Small dense helpers on top of nalgebra used throughout the crate.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

pub type CMatrix = DMatrix<Complex64>;
pub type CVector = DVector<Complex64>;

pub const ZERO: Complex64 = Complex64::new(0.0, 0.0);
pub const ONE: Complex64 = Complex64::new(1.0, 0.0);
pub const I: Complex64 = Complex64::new(0.0, 1.0);

pub fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

pub fn real(re: f64) -> Complex64 {
    Complex64::new(re, 0.0)
}

/// Full singular value decomposition `m = U diag(s) V^H` with `s` descending.
///
/// Computed with faer: nalgebra's complex SVD loses accuracy on
/// rank-deficient input, which is exactly where rank decisions are made.
pub struct Svd {
    pub u: CMatrix,
    pub s: Vec<f64>,
    pub v: CMatrix,
}

pub fn svd(m: &CMatrix) -> Svd {
    let (rows, cols) = m.shape();
    if rows == 0 || cols == 0 {
        return Svd { u: CMatrix::identity(rows, rows), s: Vec::new(), v: CMatrix::identity(cols, cols) };
    }
    let f = faer::Mat::<faer::c64>::from_fn(rows, cols, |i, j| {
        let z = m[(i, j)];
        faer::c64::new(z.re, z.im)
    });
    let d = f.svd().expect("SVD of a finite matrix converges");
    let back = |x: faer::MatRef<'_, faer::c64>| CMatrix::from_fn(x.nrows(), x.ncols(), |i, j| c(x[(i, j)].re, x[(i, j)].im));
    let sv = d.S().column_vector();
    Svd { u: back(d.U()), s: (0..sv.nrows()).map(|i| sv[i].re).collect(), v: back(d.V()) }
}

/// Singular values in descending order.
pub fn singular_values(m: &CMatrix) -> Vec<f64> {
    svd(m).s
}

/// Largest singular value (spectral norm).
pub fn norm2(m: &CMatrix) -> f64 {
    singular_values(m).first().copied().unwrap_or(0.0)
}

/// Number of singular values strictly above `threshold`.
pub fn rank(m: &CMatrix, threshold: f64) -> usize {
    singular_values(m).iter().filter(|&&s| s > threshold).count()
}

/// 2-norm condition number; infinite for singular input.
pub fn condition(m: &CMatrix) -> f64 {
    let sv = singular_values(m);
    match (sv.first(), sv.last()) {
        (Some(&hi), Some(&lo)) if lo > 0.0 && sv.len() == m.nrows().min(m.ncols()) => hi / lo,
        _ => f64::INFINITY,
    }
}

/// Orthonormal basis (columns) of the right null space spanned by the
/// `dim` smallest singular directions of `m`, together with the singular
/// values attached to the returned directions and the next one above them.
/// Directions beyond the row count have singular value zero.
pub struct Kernel {
    pub basis: CMatrix,
    pub kernel_sv: Vec<f64>,
    pub gap_sv: Option<f64>,
}

pub fn smallest_right_singular(m: &CMatrix, dim: usize) -> Kernel {
    let n = m.ncols();
    assert!(dim <= n);
    let d = svd(m);
    let sv_of = |k: usize| d.s.get(k).copied().unwrap_or(0.0);
    let basis = d.v.columns(n - dim, dim).into_owned();
    let kernel_sv = (n - dim..n).map(sv_of).collect();
    let gap_sv = (dim < n).then(|| sv_of(n - dim - 1));
    Kernel { basis, kernel_sv, gap_sv }
}

/// Orthonormal basis of the column span of `m`, keeping directions whose
/// singular value exceeds `threshold`.
pub fn column_span(m: &CMatrix, threshold: f64) -> CMatrix {
    let d = svd(m);
    let keep = d.s.iter().filter(|&&s| s > threshold).count();
    d.u.columns(0, keep).into_owned()
}

/// Orthonormal basis of the column span with exactly `dim` columns.
pub fn column_span_dim(m: &CMatrix, dim: usize) -> CMatrix {
    svd(m).u.columns(0, dim).into_owned()
}

pub fn matrix_power(m: &CMatrix, k: usize) -> CMatrix {
    let mut out = CMatrix::identity(m.nrows(), m.ncols());
    for _ in 0..k {
        out = &out * m;
    }
    out
}

pub fn from_columns(n: usize, cols: &[CVector]) -> CMatrix {
    let mut out = CMatrix::zeros(n, cols.len());
    for (j, col) in cols.iter().enumerate() {
        out.set_column(j, col);
    }
    out
}

pub fn columns(m: &CMatrix) -> Vec<CVector> {
    (0..m.ncols()).map(|j| m.column(j).into_owned()).collect()
}

/// Block-diagonal assembly.
pub fn block_diag(blocks: &[CMatrix]) -> CMatrix {
    let n: usize = blocks.iter().map(|b| b.nrows()).sum();
    let mut out = CMatrix::zeros(n, n);
    let mut off = 0;
    for b in blocks {
        out.view_mut((off, off), (b.nrows(), b.ncols())).copy_from(b);
        off += b.nrows();
    }
    out
}

pub fn is_hermitian(m: &CMatrix, tol: f64) -> bool {
    m.is_square() && (m - m.adjoint()).iter().all(|z| z.norm() <= tol)
}

/// Eigen-decomposition of a Hermitian matrix with eigenvalues ascending.
pub fn hermitian_eigen(m: &CMatrix) -> (Vec<f64>, CMatrix) {
    let sym = (m + m.adjoint()) * real(0.5);
    let eig = sym.symmetric_eigen();
    let n = m.nrows();
    let mut idx: Vec<usize> = (0..n).collect();
    idx.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
    let mut vecs = CMatrix::zeros(n, n);
    let mut vals = Vec::with_capacity(n);
    for (col, &k) in idx.iter().enumerate() {
        vals.push(eig.eigenvalues[k]);
        vecs.set_column(col, &eig.eigenvectors.column(k));
    }
    (vals, vecs)
}

/// Fix the phase of a vector so its first entry of maximal modulus is real
/// and positive.
pub fn fix_phase(v: &mut CVector) {
    let mut best = 0;
    let mut best_mod = -1.0;
    for (i, z) in v.iter().enumerate() {
        if z.norm() > best_mod * (1.0 + 1e-9) {
            best = i;
            best_mod = z.norm();
        }
    }
    if best_mod > 0.0 {
        let phase = v[best] / v[best].norm();
        *v /= phase;
    }
}

/// Complex Schur form `m = Z T Z^H`.
///
/// The QR iteration runs on `(m - μI)/s` with `μ` the mean eigenvalue and
/// `s = ||m - μI||_F`, so nearly scalar matrices are not left to stall on
/// round-off. The iteration count is capped; on failure the input is rotated
/// by a fixed Householder reflection and retried.
pub fn schur(m: &CMatrix) -> (CMatrix, CMatrix) {
    let n = m.nrows();
    if n == 0 {
        return (m.clone(), m.clone());
    }
    let mu = m.trace() / real(n as f64);
    let centered = m - CMatrix::identity(n, n) * mu;
    let size = centered.norm();
    if size == 0.0 {
        return (CMatrix::identity(n, n), m.clone());
    }
    let unit = centered / real(size);
    let restore = |t: CMatrix| t * real(size) + CMatrix::identity(n, n) * mu;
    let max_iter = 200 * n;
    if let Some(s) = unit.clone().try_schur(f64::EPSILON, max_iter) {
        let (z, t) = s.unpack();
        return (z, restore(t));
    }
    for attempt in 1..=8 {
        let w = CVector::from_fn(n, |k, _| {
            let t = (k + 1) as f64 * (0.7 + 0.11 * attempt as f64);
            c(t.cos() + 0.5, (1.3 * t).sin())
        });
        let p = CMatrix::identity(n, n) - &w * w.adjoint() * real(2.0 / w.norm_squared());
        if let Some(s) = (&p * &unit * &p).try_schur(f64::EPSILON, max_iter) {
            let (z, t) = s.unpack();
            return (p * z, restore(t));
        }
    }
    panic!("complex Schur iteration failed to converge on a finite {n}x{n} matrix")
}

/// Eigenvalues of a general complex matrix from the diagonal of its Schur form.
pub fn eigenvalues(m: &CMatrix) -> Vec<Complex64> {
    let (_, t) = schur(m);
    (0..t.nrows()).map(|i| t[(i, i)]).collect()
}
