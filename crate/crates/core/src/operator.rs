//! Linear operators on a Krein space: pseudo-adjoint, pseudo-hermiticity,
//! dyads and the two elementary pseudo-hermitian examples.

use std::sync::Arc;

use num_complex::Complex64;

use crate::error::{KreinError, Result};
use crate::linalg::{self, CMatrix, CVector};
use crate::space::{KreinVector, Metric};

/// An `N x N` complex matrix acting on the space of its metric.
#[derive(Debug, Clone, PartialEq)]
pub struct Operator {
    matrix: CMatrix,
    metric: Arc<Metric>,
}

impl Operator {
    pub fn new(matrix: CMatrix, metric: Arc<Metric>) -> Result<Self> {
        if !matrix.is_square() {
            return Err(KreinError::input(format!(
                "operator must be square, got {}x{}",
                matrix.nrows(),
                matrix.ncols()
            )));
        }
        metric.check_dim(matrix.nrows(), "operator")?;
        if matrix.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(KreinError::input("operator has non-finite entries"));
        }
        Ok(Operator { matrix, metric })
    }

    /// Promote a real matrix.
    pub fn from_real(rows: usize, data: &[f64], metric: Arc<Metric>) -> Result<Self> {
        if data.len() != rows * rows {
            return Err(KreinError::input("real matrix data length is not rows^2"));
        }
        let m = CMatrix::from_row_iterator(rows, rows, data.iter().map(|&x| linalg::real(x)));
        Operator::new(m, metric)
    }

    pub fn zero(metric: Arc<Metric>) -> Self {
        let n = metric.dim();
        Operator { matrix: CMatrix::zeros(n, n), metric }
    }

    pub fn identity(metric: Arc<Metric>) -> Self {
        let n = metric.dim();
        Operator { matrix: CMatrix::identity(n, n), metric }
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.matrix
    }

    pub fn into_matrix(self) -> CMatrix {
        self.matrix
    }

    pub fn metric(&self) -> &Metric {
        &self.metric
    }

    pub fn metric_arc(&self) -> &Arc<Metric> {
        &self.metric
    }

    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn apply(&self, x: &KreinVector) -> Result<KreinVector> {
        self.metric.check_dim(x.dim(), "vector")?;
        Ok(KreinVector(&self.matrix * &x.0))
    }

    /// Same metric required; compared by value.
    fn same_space(&self, other: &Operator) -> Result<()> {
        if Arc::ptr_eq(&self.metric, &other.metric) || self.metric == other.metric {
            Ok(())
        } else {
            Err(KreinError::input("operators act on different metrics"))
        }
    }

    /// `self * other`.
    pub fn compose(&self, other: &Operator) -> Result<Operator> {
        self.same_space(other)?;
        Ok(self.with_matrix(&self.matrix * &other.matrix))
    }

    /// `a * self + b * other`.
    pub fn combine(&self, a: Complex64, other: &Operator, b: Complex64) -> Result<Operator> {
        self.same_space(other)?;
        Ok(self.with_matrix(&self.matrix * a + &other.matrix * b))
    }

    pub fn scale(&self, a: Complex64) -> Operator {
        self.with_matrix(&self.matrix * a)
    }

    /// `self - lambda I`.
    pub fn shift(&self, lambda: Complex64) -> Operator {
        let n = self.dim();
        self.with_matrix(&self.matrix - CMatrix::identity(n, n) * lambda)
    }

    pub(crate) fn with_matrix(&self, matrix: CMatrix) -> Operator {
        Operator { matrix, metric: Arc::clone(&self.metric) }
    }

    pub fn frobenius(&self) -> f64 {
        self.matrix.norm()
    }
}

/// Outcome of a pseudo-hermiticity test.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HermiticityReport {
    pub is_pseudo_hermitian: bool,
    /// `||A - A†||_F / max(1, ||A||_F)`
    pub residual: f64,
    pub tolerance: f64,
}

/// The unique `A†` with `<x, A y> = <A† x, y>`, i.e. `H^{-1} A^H H`.
pub fn adjoint(a: &Operator) -> Operator {
    let h = a.metric.form();
    a.with_matrix(a.metric.inverse() * a.matrix.adjoint() * h)
}

pub fn hermiticity_residual(a: &Operator) -> f64 {
    let diff = &a.matrix - adjoint(a).matrix;
    diff.norm() / a.frobenius().max(1.0)
}

pub fn is_pseudo_hermitian(a: &Operator, tol: f64) -> Result<HermiticityReport> {
    if !(tol > 0.0) {
        return Err(KreinError::input("tolerance must be positive"));
    }
    let residual = hermiticity_residual(a);
    Ok(HermiticityReport { is_pseudo_hermitian: residual <= tol, residual, tolerance: tol })
}

/// `(u ⊗ v) x = <v, x> u`, as the matrix `u v^H H`.
pub fn dyad(u: &KreinVector, v: &KreinVector, metric: &Arc<Metric>) -> Result<Operator> {
    metric.check_dim(u.dim(), "left dyad factor")?;
    metric.check_dim(v.dim(), "right dyad factor")?;
    Ok(Operator { matrix: dyad_matrix(metric, &u.0, &v.0), metric: Arc::clone(metric) })
}

pub(crate) fn dyad_matrix(metric: &Metric, u: &CVector, v: &CVector) -> CMatrix {
    u * (metric.form() * v).adjoint()
}

fn check_null(metric: &Metric, x: &CVector, name: &str) -> Result<()> {
    let scale = x.norm_squared() * linalg::norm2(metric.form());
    let q = metric.product(x, x);
    if q.norm() > 1e-10 * scale.max(1e-300) || x.norm() == 0.0 {
        return Err(KreinError::input(format!("{name} is not a null vector: <{name},{name}> = {q}")));
    }
    Ok(())
}

/// `B = i(ṽ ⊗ v - v ⊗ ṽ)` for a null pair with `<v, ṽ> = 1`: pseudo-hermitian
/// with `Bv = -iv` and `Bṽ = iṽ`.
pub fn build_b_example(metric: &Arc<Metric>, v: &KreinVector, vt: &KreinVector) -> Result<Operator> {
    metric.check_dim(v.dim(), "v")?;
    metric.check_dim(vt.dim(), "vt")?;
    check_null(metric, &v.0, "v")?;
    check_null(metric, &vt.0, "vt")?;
    let p = metric.product(&v.0, &vt.0);
    if (p - linalg::ONE).norm() > 1e-10 {
        return Err(KreinError::input(format!("<v, vt> must equal 1, got {p}")));
    }
    let m = (dyad_matrix(metric, &vt.0, &v.0) - dyad_matrix(metric, &v.0, &vt.0)) * linalg::I;
    Operator::new(m, Arc::clone(metric))
}

/// `v ⊗ v` for a null vector `v`: pseudo-hermitian, nonzero and squaring to zero.
pub fn build_nilpotent_example(metric: &Arc<Metric>, v: &KreinVector) -> Result<Operator> {
    metric.check_dim(v.dim(), "v")?;
    check_null(metric, &v.0, "v")?;
    dyad(v, v, metric)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{c, real};

    fn swap() -> Arc<Metric> {
        Arc::new(Metric::from_matrix(CMatrix::from_row_slice(2, 2, &[real(0.0), real(1.0), real(1.0), real(0.0)])).unwrap())
    }

    fn b_matrix() -> CMatrix {
        CMatrix::from_row_slice(2, 2, &[c(0.0, -1.0), real(0.0), real(0.0), c(0.0, 1.0)])
    }

    #[test]
    fn b_is_self_adjoint() {
        let b = Operator::new(b_matrix(), swap()).unwrap();
        assert!((adjoint(&b).matrix() - b.matrix()).norm() < 1e-15);
        let rep = is_pseudo_hermitian(&b, 1e-12).unwrap();
        assert!(rep.is_pseudo_hermitian && rep.residual <= 1e-15);
    }

    #[test]
    fn adjoint_of_projector_dyad() {
        let a = Operator::from_real(2, &[1.0, 0.0, 0.0, 0.0], swap()).unwrap();
        let expect = CMatrix::from_row_slice(2, 2, &[real(0.0), real(0.0), real(0.0), real(1.0)]);
        assert!((adjoint(&a).matrix() - expect).norm() < 1e-15);
    }

    #[test]
    fn adjoint_under_identity_is_conjugate_transpose() {
        let id = Arc::new(Metric::from_signs(&[1, 1]).unwrap());
        let m = CMatrix::from_row_slice(2, 2, &[c(1.0, 2.0), c(3.0, -1.0), c(0.5, 0.0), c(0.0, 4.0)]);
        let a = Operator::new(m.clone(), id).unwrap();
        assert_eq!(adjoint(&a).matrix(), &m.adjoint());
    }

    #[test]
    fn nilpotent_examples() {
        let n0 = Operator::from_real(2, &[0.0, 1.0, 0.0, 0.0], swap()).unwrap();
        assert!(is_pseudo_hermitian(&n0, 1e-12).unwrap().is_pseudo_hermitian);
        let id = Arc::new(Metric::from_signs(&[1, 1]).unwrap());
        let n1 = Operator::from_real(2, &[0.0, 1.0, 0.0, 0.0], id).unwrap();
        let rep = is_pseudo_hermitian(&n1, 1e-12).unwrap();
        assert!(!rep.is_pseudo_hermitian);
        assert!((rep.residual - 2f64.sqrt()).abs() < 1e-12);
    }

    #[test]
    fn dyad_examples() {
        let h = swap();
        let e0 = KreinVector::from_real(&[1.0, 0.0]);
        let e1 = KreinVector::from_real(&[0.0, 1.0]);
        let vv = dyad(&e0, &e0, &h).unwrap();
        assert_eq!(vv.matrix(), &CMatrix::from_row_slice(2, 2, &[real(0.0), real(1.0), real(0.0), real(0.0)]));
        let a = dyad(&e0, &e1, &h).unwrap();
        assert_eq!(a.matrix(), &CMatrix::from_row_slice(2, 2, &[real(1.0), real(0.0), real(0.0), real(0.0)]));
        // The literal v ⊗ ṽ with <v, ṽ> = 1 is idempotent, not nilpotent.
        assert!((a.compose(&a).unwrap().matrix() - a.matrix()).norm() < 1e-15);

        let id = Arc::new(Metric::from_signs(&[1, 1]).unwrap());
        let u = KreinVector::from_complex(&[c(1.0, 1.0), real(2.0)]);
        let v = KreinVector::from_complex(&[c(0.0, 1.0), real(-1.0)]);
        let d = dyad(&u, &v, &id).unwrap();
        let outer = u.coords() * v.coords().adjoint();
        assert_eq!(d.matrix(), &outer);
        let bad = KreinVector::from_real(&[1.0]);
        assert!(dyad(&bad, &u, &id).is_err());
    }

    #[test]
    fn b_example_constructions() {
        let h = swap();
        let b = build_b_example(&h, &KreinVector::from_real(&[1.0, 0.0]), &KreinVector::from_real(&[0.0, 1.0])).unwrap();
        assert!((b.matrix() - b_matrix()).norm() < 1e-15);

        let d = Arc::new(Metric::from_signs(&[1, -1]).unwrap());
        let s = std::f64::consts::FRAC_1_SQRT_2;
        let b = build_b_example(&d, &KreinVector::from_real(&[s, s]), &KreinVector::from_real(&[s, -s])).unwrap();
        let expect = CMatrix::from_row_slice(2, 2, &[real(0.0), c(0.0, -1.0), c(0.0, -1.0), real(0.0)]);
        assert!((b.matrix() - expect).norm() < 1e-15);
    }

    #[test]
    fn b_example_rejects_bad_pairs() {
        let h = swap();
        let err = build_b_example(&h, &KreinVector::from_real(&[1.0, 1.0]), &KreinVector::from_real(&[0.0, 1.0]));
        assert!(matches!(err, Err(KreinError::Input(m)) if m.contains("v is not a null")));
        let err = build_b_example(&h, &KreinVector::from_real(&[1.0, 0.0]), &KreinVector::from_real(&[0.0, 2.0]));
        assert!(matches!(err, Err(KreinError::Input(m)) if m.contains("must equal 1")));
    }
}
