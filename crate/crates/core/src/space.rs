//! Indefinite inner-product spaces: the metric, vectors, signature and the
//! null-vector bound.

use std::fmt;

use num_complex::Complex64;

use crate::error::{KreinError, Result};
use crate::linalg::{self, CMatrix, CVector};
use crate::rng;

const HERMITIAN_TOL: f64 = 1e-12;
const INVERTIBLE_RATIO: f64 = 1e-10;

/// Hermitian nondegenerate form defining `<x, y> = x^H H y`.
///
/// The product is conjugate-linear in the first argument and linear in the
/// second.
#[derive(Clone, PartialEq)]
pub struct Metric {
    form: CMatrix,
    inverse: CMatrix,
    positive: usize,
    negative: usize,
    diagonal: bool,
}

impl fmt::Debug for Metric {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Metric")
            .field("dim", &self.dim())
            .field("signature", &(self.positive, self.negative))
            .finish()
    }
}

impl Metric {
    /// Build from a full Hermitian matrix.
    pub fn from_matrix(form: CMatrix) -> Result<Self> {
        if !form.is_square() || form.nrows() == 0 {
            return Err(KreinError::input(format!(
                "metric must be a non-empty square matrix, got {}x{}",
                form.nrows(),
                form.ncols()
            )));
        }
        if form.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(KreinError::input("metric has non-finite entries"));
        }
        if !linalg::is_hermitian(&form, HERMITIAN_TOL) {
            return Err(KreinError::input("metric is not Hermitian within 1e-12"));
        }
        let sv = linalg::singular_values(&form);
        let (hi, lo) = (sv[0], *sv.last().unwrap());
        if hi == 0.0 || lo < INVERTIBLE_RATIO * hi {
            return Err(KreinError::input(format!(
                "metric is degenerate: smallest singular value {lo:e} below 1e-10 x {hi:e}"
            )));
        }
        let (vals, _) = linalg::hermitian_eigen(&form);
        let positive = vals.iter().filter(|&&v| v > 0.0).count();
        let negative = vals.len() - positive;
        let inverse = form.clone().try_inverse().ok_or_else(|| KreinError::input("metric is not invertible"))?;
        let n = form.nrows();
        let diagonal = (0..n).all(|i| (0..n).all(|j| i == j || form[(i, j)].norm() == 0.0));
        Ok(Metric { form, inverse, positive, negative, diagonal })
    }

    /// Build `diag(s_1, ..., s_N)` from a list of `+1` / `-1` entries.
    pub fn from_signs(signs: &[i8]) -> Result<Self> {
        if signs.is_empty() {
            return Err(KreinError::input("empty signature list"));
        }
        let mut form = CMatrix::zeros(signs.len(), signs.len());
        for (i, &s) in signs.iter().enumerate() {
            match s {
                1 | -1 => form[(i, i)] = linalg::real(f64::from(s)),
                other => return Err(KreinError::input(format!("signature entry {other} is not +1 or -1"))),
            }
        }
        Metric::from_matrix(form)
    }

    /// `diag(+1 x k, -1 x l)`.
    pub fn with_signature(k: usize, l: usize) -> Result<Self> {
        let signs: Vec<i8> = std::iter::repeat_n(1, k).chain(std::iter::repeat_n(-1, l)).collect();
        Metric::from_signs(&signs)
    }

    /// Minkowski metric of signature (1,3).
    pub fn minkowski() -> Self {
        Metric::with_signature(1, 3).expect("valid signature")
    }

    pub fn dim(&self) -> usize {
        self.form.nrows()
    }

    pub fn form(&self) -> &CMatrix {
        &self.form
    }

    pub fn inverse(&self) -> &CMatrix {
        &self.inverse
    }

    pub fn is_diagonal(&self) -> bool {
        self.diagonal
    }

    pub fn signature(&self) -> SignatureInfo {
        SignatureInfo::new(self.positive, self.negative)
    }

    pub(crate) fn check_dim(&self, n: usize, what: &str) -> Result<()> {
        if n != self.dim() {
            return Err(KreinError::input(format!(
                "{what} has dimension {n}, metric has dimension {}",
                self.dim()
            )));
        }
        Ok(())
    }

    /// `<x, y>` on raw coordinate vectors, no dimension check.
    pub(crate) fn product(&self, x: &CVector, y: &CVector) -> Complex64 {
        x.dotc(&(&self.form * y))
    }

    /// A basis `f_1..f_N` with `<f_i, f_j> = +-delta_ij`, split into its
    /// positive and negative members.
    ///
    /// For a diagonal metric the basis vectors are rescaled coordinate axes in
    /// axis order; otherwise they come from the eigenvectors of `H` (ascending
    /// eigenvalue, phase fixed).
    pub fn adapted_basis(&self) -> AdaptedBasis {
        let n = self.dim();
        let mut positive = Vec::new();
        let mut negative = Vec::new();
        if self.diagonal {
            for i in 0..n {
                let h = self.form[(i, i)].re;
                let mut e = CVector::zeros(n);
                e[i] = linalg::real(1.0 / h.abs().sqrt());
                if h > 0.0 {
                    positive.push(e);
                } else {
                    negative.push(e);
                }
            }
        } else {
            let (vals, vecs) = linalg::hermitian_eigen(&self.form);
            for (k, &val) in vals.iter().enumerate() {
                let mut e = vecs.column(k).into_owned();
                linalg::fix_phase(&mut e);
                e /= linalg::real(val.abs().sqrt());
                if val > 0.0 {
                    positive.push(e);
                } else {
                    negative.push(e);
                }
            }
            // Positive axes in order of decreasing eigenvalue read more naturally.
            positive.reverse();
        }
        AdaptedBasis { positive, negative }
    }
}

/// Pseudo-orthonormal basis adapted to a metric.
#[derive(Debug, Clone)]
pub struct AdaptedBasis {
    pub positive: Vec<CVector>,
    pub negative: Vec<CVector>,
}

/// A coordinate vector in a Krein space.
#[derive(Debug, Clone, PartialEq)]
pub struct KreinVector(pub CVector);

impl KreinVector {
    pub fn new(coords: CVector) -> Self {
        KreinVector(coords)
    }

    pub fn from_real(coords: &[f64]) -> Self {
        KreinVector(CVector::from_iterator(coords.len(), coords.iter().map(|&x| linalg::real(x))))
    }

    pub fn from_complex(coords: &[Complex64]) -> Self {
        KreinVector(CVector::from_column_slice(coords))
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn coords(&self) -> &CVector {
        &self.0
    }

    pub fn into_inner(self) -> CVector {
        self.0
    }
}

impl From<CVector> for KreinVector {
    fn from(v: CVector) -> Self {
        KreinVector(v)
    }
}

/// Signature `(k, l)` and the Pontriagin bound `r = min(k, l)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct SignatureInfo {
    pub k: usize,
    pub l: usize,
    pub pontriagin_r: usize,
}

impl SignatureInfo {
    pub fn new(k: usize, l: usize) -> Self {
        SignatureInfo { k, l, pontriagin_r: k.min(l) }
    }

    pub fn dim(&self) -> usize {
        self.k + self.l
    }
}

impl fmt::Display for SignatureInfo {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.k, self.l)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum VectorKind {
    Zero,
    Null,
    Positive,
    Negative,
}

impl VectorKind {
    pub fn as_str(&self) -> &'static str {
        match self {
            VectorKind::Zero => "zero",
            VectorKind::Null => "null",
            VectorKind::Positive => "positive",
            VectorKind::Negative => "negative",
        }
    }
}

pub fn inner_product(metric: &Metric, x: &KreinVector, y: &KreinVector) -> Result<Complex64> {
    metric.check_dim(x.dim(), "left vector")?;
    metric.check_dim(y.dim(), "right vector")?;
    Ok(metric.product(&x.0, &y.0))
}

pub fn classify_vector(metric: &Metric, x: &KreinVector, tol: f64) -> Result<VectorKind> {
    if !(tol > 0.0) {
        return Err(KreinError::input("tolerance must be positive"));
    }
    metric.check_dim(x.dim(), "vector")?;
    if x.0.iter().all(|z| z.norm() <= tol) {
        return Ok(VectorKind::Zero);
    }
    let q = metric.product(&x.0, &x.0).re;
    let euclid = x.0.norm_squared();
    Ok(if q.abs() <= tol * euclid {
        VectorKind::Null
    } else if q > 0.0 {
        VectorKind::Positive
    } else {
        VectorKind::Negative
    })
}

pub fn signature(metric: &Metric) -> SignatureInfo {
    metric.signature()
}

/// Gram matrix `G_ij = <v_i, v_j>`.
pub fn gram(metric: &Metric, vectors: &[KreinVector]) -> Result<CMatrix> {
    if vectors.is_empty() {
        return Err(KreinError::input("gram needs at least one vector"));
    }
    for (i, v) in vectors.iter().enumerate() {
        metric.check_dim(v.dim(), &format!("vector {i}"))?;
    }
    let cols: Vec<CVector> = vectors.iter().map(|v| v.0.clone()).collect();
    let b = linalg::from_columns(metric.dim(), &cols);
    Ok(b.adjoint() * metric.form() * &b)
}

/// Whether the span of `vectors` is nonsingular (`Y ∩ Y^⊥ = {0}`), decided by
/// the smallest singular value of the Gram matrix.
pub fn is_nonsingular_span(metric: &Metric, vectors: &[KreinVector], tol: f64) -> Result<bool> {
    let g = gram(metric, vectors)?;
    let sv = linalg::singular_values(&g);
    Ok(sv.last().copied().unwrap_or(0.0) > tol)
}

/// `min(k, l)` mutually orthogonal independent null vectors for the metric
/// `diag(+1 x k, -1 x l)`, pairing the j-th positive with the j-th negative axis.
pub fn null_witness(sig: SignatureInfo, dim: usize) -> Result<Vec<KreinVector>> {
    if sig.k + sig.l != dim {
        return Err(KreinError::input(format!("signature {sig} does not match dimension {dim}")));
    }
    let s = std::f64::consts::FRAC_1_SQRT_2;
    Ok((0..sig.pontriagin_r)
        .map(|j| {
            let mut w = CVector::zeros(dim);
            w[j] = linalg::real(s);
            w[sig.k + j] = linalg::real(s);
            KreinVector(w)
        })
        .collect())
}

/// Null witness for an arbitrary metric: `(f₊ⱼ + f₋ⱼ)/√2` over the first
/// `r` pairs of the adapted basis. Agrees with [`null_witness`] on diagonal
/// sign metrics.
pub fn null_witness_in(metric: &Metric) -> Vec<KreinVector> {
    let b = metric.adapted_basis();
    let s = linalg::real(std::f64::consts::FRAC_1_SQRT_2);
    b.positive.iter().zip(&b.negative).map(|(p, m)| KreinVector((p + m) * s)).collect()
}

/// Randomized greedy search for a large set of independent, mutually
/// orthogonal null vectors. Returns the largest set size seen over `trials`
/// independent greedy runs.
pub fn max_orthonull_search(metric: &Metric, trials: usize, seed: u64) -> usize {
    let mut rng = rng::stream(seed, rng::STREAM_ORTHONULL);
    let n = metric.dim();
    let hnorm = linalg::norm2(metric.form());
    let mut best = 0;
    for _ in 0..trials.max(1) {
        let mut set: Vec<CVector> = Vec::new();
        loop {
            let m = set.len();
            if 2 * m >= n {
                break;
            }
            // Complement: indefinite-orthogonal to the set and Euclidean-orthogonal to its span.
            let w = if m == 0 {
                CMatrix::identity(n, n)
            } else {
                let mut cons = CMatrix::zeros(2 * m, n);
                for (i, s) in set.iter().enumerate() {
                    let hs = metric.form() * s;
                    cons.set_row(i, &hs.adjoint());
                    cons.set_row(m + i, &s.adjoint());
                }
                linalg::smallest_right_singular(&cons, n - 2 * m).basis
            };
            let restricted = w.adjoint() * metric.form() * &w;
            let (vals, vecs) = linalg::hermitian_eigen(&restricted);
            let cut = 1e-9 * hnorm;
            let pos: Vec<usize> = (0..vals.len()).filter(|&i| vals[i] > cut).collect();
            let neg: Vec<usize> = (0..vals.len()).filter(|&i| vals[i] < -cut).collect();
            if pos.is_empty() || neg.is_empty() {
                break;
            }
            let mut p = CVector::zeros(vals.len());
            let mut q = CVector::zeros(vals.len());
            for &i in &pos {
                p += vecs.column(i) * rng::complex_normal(&mut rng);
            }
            for &i in &neg {
                q += vecs.column(i) * rng::complex_normal(&mut rng);
            }
            let pp = p.dotc(&(&restricted * &p)).re;
            let qq = -q.dotc(&(&restricted * &q)).re;
            if pp <= 0.0 || qq <= 0.0 {
                continue;
            }
            let local = p / linalg::real(pp.sqrt()) + q / linalg::real(qq.sqrt());
            let mut x = &w * local;
            let xn = x.norm();
            x /= linalg::real(xn);
            if !accepts_orthonull(metric, &set, &x, hnorm) {
                break;
            }
            set.push(x);
        }
        best = best.max(set.len());
    }
    best
}

fn accepts_orthonull(metric: &Metric, set: &[CVector], x: &CVector, hnorm: f64) -> bool {
    let tol = 1e-8 * hnorm;
    if metric.product(x, x).norm() > tol {
        return false;
    }
    if set.iter().any(|s| metric.product(s, x).norm() > tol) {
        return false;
    }
    let mut cols = set.to_vec();
    cols.push(x.clone());
    let m = linalg::from_columns(metric.dim(), &cols);
    linalg::singular_values(&m).last().copied().unwrap_or(0.0) > 1e-8
}
