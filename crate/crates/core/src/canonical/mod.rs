//! Canonical decomposition of pseudo-hermitian operators.
//!
//! Every pseudo-hermitian operator splits into mutually orthogonal,
//! nonsingular cells: Jordan chains of real eigenvalues brought to a null leg
//! (optionally with a middle unit vector), and triangle cells for conjugate
//! pairs of complex eigenvalues. The number of null pairs over all cells never
//! exceeds `min(k, l)`.

mod cell;
mod real;
mod triangle;

use std::sync::Arc;

pub use cell::{CanonicalCell, CellKind, NullLeg};
pub(crate) use cell::{cell_terms, evaluate_terms, Slot};
pub use real::reduce_real_cell;
pub use triangle::reduce_complex_pair;

use crate::error::{KreinError, Result};
use crate::linalg::{self, CMatrix};
use crate::operator::{self, Operator};
use crate::space::Metric;
use crate::spectral::{cluster_order, Spectrum};
use crate::tolerance::Tolerances;

pub const RECONSTRUCTION_TOL: f64 = 1e-6;
pub const GRAM_TOL: f64 = 1e-8;

/// Result of `decompose`.
#[derive(Debug, Clone)]
pub struct Decomposition {
    pub cells: Vec<CanonicalCell>,
    /// Columns are the canonical basis vectors grouped by cell.
    pub basis: CMatrix,
    /// `S^H H S`.
    pub gram_pattern: CMatrix,
    /// 2-norm condition number of `basis`.
    pub condition: f64,
    /// `||A - S C S^{-1}||_F / max(1, ||A||_F)`.
    pub residual: f64,
    /// Largest off-block entry of the Gram matrix relative to the column norms.
    pub orthogonality_defect: f64,
    /// Largest null-leg deviation over all cells.
    pub leg_defect: f64,
    pub metric: Arc<Metric>,
}

impl Decomposition {
    /// Block canonical matrix `C` assembled from the cell formulas.
    pub fn canonical_matrix(&self) -> CMatrix {
        linalg::block_diag(&self.cells.iter().map(|c| c.canonical_matrix()).collect::<Vec<_>>())
    }

    /// Total number of null pairs `Σ s`.
    pub fn null_pairs(&self) -> usize {
        self.cells.iter().map(|c| c.null_pairs()).sum()
    }

    /// Column ranges of each cell inside `basis`.
    pub fn cell_ranges(&self) -> Vec<std::ops::Range<usize>> {
        let mut off = 0;
        self.cells
            .iter()
            .map(|c| {
                let r = off..off + c.dim();
                off += c.dim();
                r
            })
            .collect()
    }
}

/// Reduce a pseudo-hermitian operator to its canonical cells.
pub fn decompose(a: &Operator, tol: &Tolerances) -> Result<Decomposition> {
    let spec = Spectrum::analyze(a, tol)?;
    let metric = a.metric_arc();
    let mut complex_cells = Vec::new();
    let mut real_cells = Vec::new();
    for (idx, cluster) in spec.clusters().iter().enumerate() {
        if cluster.is_real {
            let (basis, _) = spec.root_subspace(idx)?;
            let structure = spec.jordan_structure(idx)?;
            let cells = real::reduce_real_root_subspace(a, cluster.value.re, &basis, &structure.chain_lengths, tol.rank)?;
            real_cells.extend(cells);
        } else if cluster.value.im > 0.0 {
            let partner = cluster.partner_index.expect("paired by analysis");
            let cells = triangle::reduce_pair_in(a, &spec, idx, partner)
                .map_err(|e| e.context(format!("complex pair {}", cluster.value)))?;
            complex_cells.extend(cells);
        }
    }
    complex_cells.sort_by(|x, y| y.lambda.im.total_cmp(&x.lambda.im).then(y.lambda.re.total_cmp(&x.lambda.re)));
    real_cells.sort_by(|x, y| cluster_order(x.lambda, y.lambda).then(y.chain_length().cmp(&x.chain_length())));
    let cells: Vec<CanonicalCell> = complex_cells.into_iter().chain(real_cells).collect();
    assemble(a, metric, cells)
}

fn assemble(a: &Operator, metric: &Arc<Metric>, cells: Vec<CanonicalCell>) -> Result<Decomposition> {
    let n = metric.dim();
    let total: usize = cells.iter().map(|c| c.dim()).sum();
    if total != n {
        return Err(KreinError::numerical(format!("cells cover dimension {total}, expected {n}")));
    }
    let pairs: usize = cells.iter().map(|c| c.null_pairs()).sum();
    let r = metric.signature().pontriagin_r;
    if pairs > r {
        return Err(KreinError::contract(format!(
            "decomposition uses {pairs} null pairs, exceeding the Pontriagin bound {r}"
        )));
    }
    let cols: Vec<_> = cells.iter().flat_map(|c| c.basis_vectors()).collect();
    let basis = linalg::from_columns(n, &cols);
    let gram_pattern = basis.adjoint() * metric.form() * &basis;
    let condition = linalg::condition(&basis);
    let leg_defect = cells.iter().map(|c| c.leg_deviation(metric)).fold(0.0, f64::max);

    let mut owner = Vec::with_capacity(n);
    for (ci, c) in cells.iter().enumerate() {
        owner.extend(std::iter::repeat_n(ci, c.dim()));
    }
    let hnorm = linalg::norm2(metric.form());
    let mut orthogonality_defect: f64 = 0.0;
    for i in 0..n {
        for j in 0..n {
            if owner[i] != owner[j] {
                let rel = gram_pattern[(i, j)].norm() / (cols[i].norm() * cols[j].norm() * hnorm);
                orthogonality_defect = orthogonality_defect.max(rel);
            }
        }
    }
    if orthogonality_defect > GRAM_TOL {
        return Err(KreinError::numerical(format!("cells are not mutually orthogonal: defect {orthogonality_defect:e}")));
    }
    if leg_defect > GRAM_TOL {
        return Err(KreinError::numerical(format!("null-leg Gram pattern violated: defect {leg_defect:e}")));
    }

    let mut d = Decomposition {
        cells,
        basis,
        gram_pattern,
        condition,
        residual: f64::NAN,
        orthogonality_defect,
        leg_defect,
        metric: Arc::clone(metric),
    };
    let rebuilt = reconstruct(&d)?;
    d.residual = (a.matrix() - rebuilt.matrix()).norm() / a.frobenius().max(1.0);
    if !(d.residual <= RECONSTRUCTION_TOL) {
        return Err(KreinError::numerical(format!(
            "reconstruction residual {:e} exceeds {RECONSTRUCTION_TOL:e}",
            d.residual
        )));
    }
    Ok(d)
}

/// `S C S^{-1}` from the cell formulas.
pub fn reconstruct(d: &Decomposition) -> Result<Operator> {
    let inv = d
        .basis
        .clone()
        .try_inverse()
        .ok_or_else(|| KreinError::input("decomposition basis is singular"))?;
    let m = &d.basis * d.canonical_matrix() * inv;
    Operator::new(m, Arc::clone(&d.metric))
}

/// Largest `|<Q^i x, Q^j x>|` over `i + j >= q` for the chain generator `x`
/// (first basis vector) of a real cell, `Q = A - λ`.
pub fn chain_orthogonality(a: &Operator, cell: &CanonicalCell) -> f64 {
    if cell.kind == CellKind::ComplexTriangle {
        return 0.0;
    }
    let q = cell.chain_length();
    let qm = a.shift(cell.lambda).into_matrix();
    let mut chain = vec![cell.basis_vectors()[0].clone()];
    for i in 1..(2 * q) {
        let next = &qm * &chain[i - 1];
        chain.push(next);
    }
    let mut worst: f64 = 0.0;
    for i in 0..q {
        for j in 0..q {
            if i + j >= q {
                worst = worst.max(a.metric().product(&chain[i], &chain[j]).norm());
            }
        }
    }
    worst
}

/// Size diagnostics of a triangle cell with `Q = A - λ*`, `Q† = A - λ`
/// (`λ = α + iβ`), each the spectral norm of the power applied to the cell's
/// basis after normalizing that basis to unit columns.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TriangleSizing {
    pub s: usize,
    /// `||Q^{2s}||` on the cell.
    pub q_pow_2s: f64,
    /// `||Q†^{2s}||` on the cell.
    pub qdag_pow_2s: f64,
    /// `||Q^{2s-1}||` on the cell.
    pub q_pow_2s_minus_1: f64,
    /// `||(Q Q†)^s||` on the cell.
    pub mixed_pow_s: f64,
    /// `||(Q Q†)^{s-1}||` on the cell.
    pub mixed_pow_s_minus_1: f64,
}

pub fn triangle_sizing(a: &Operator, cell: &CanonicalCell) -> Option<TriangleSizing> {
    if cell.kind != CellKind::ComplexTriangle {
        return None;
    }
    let s = cell.s;
    let cols: Vec<_> = cell.basis_vectors().into_iter().map(|v| v.normalize()).collect();
    let b = linalg::from_columns(a.dim(), &cols);
    let q = a.shift(cell.lambda.conj());
    let qd = operator::adjoint(&q);
    let mixed = q.matrix() * qd.matrix();
    let on_cell = |m: CMatrix| linalg::norm2(&(m * &b));
    Some(TriangleSizing {
        s,
        q_pow_2s: on_cell(linalg::matrix_power(q.matrix(), 2 * s)),
        qdag_pow_2s: on_cell(linalg::matrix_power(qd.matrix(), 2 * s)),
        q_pow_2s_minus_1: on_cell(linalg::matrix_power(q.matrix(), 2 * s - 1)),
        mixed_pow_s: on_cell(linalg::matrix_power(&mixed, s)),
        mixed_pow_s_minus_1: on_cell(linalg::matrix_power(&mixed, s - 1)),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{c, real};
    use crate::space::KreinVector;

    fn swap() -> Arc<Metric> {
        Arc::new(Metric::from_matrix(CMatrix::from_row_slice(2, 2, &[real(0.0), real(1.0), real(1.0), real(0.0)])).unwrap())
    }

    fn b_op() -> Operator {
        let m = CMatrix::from_row_slice(2, 2, &[c(0.0, -1.0), real(0.0), real(0.0), c(0.0, 1.0)]);
        Operator::new(m, swap()).unwrap()
    }

    fn n0() -> Operator {
        Operator::from_real(2, &[0.0, 1.0, 0.0, 0.0], swap()).unwrap()
    }

    #[test]
    fn nilpotent_chain_becomes_even_cell() {
        let a = n0();
        let chain = [KreinVector::from_real(&[0.0, 1.0]), KreinVector::from_real(&[1.0, 0.0])];
        let cell = reduce_real_cell(&a, 0.0, &chain).unwrap();
        assert_eq!((cell.kind, cell.s, cell.overall_sign), (CellKind::RealJordanEven, 1, 1));
        let vt = &cell.leg.vt[0].0;
        // Q = ṽ⊗ṽ
        let q = operator::dyad_matrix(a.metric(), vt, vt);
        assert!((q - a.matrix()).norm() < 1e-14);
        let g = crate::space::gram(a.metric(), &[cell.leg.v[0].clone(), cell.leg.vt[0].clone()]).unwrap();
        assert!((g - a.metric().form()).norm() < 1e-14);
    }

    #[test]
    fn odd_cell_in_signature_2_1() {
        let metric = Arc::new(Metric::from_signs(&[1, 1, -1]).unwrap());
        let r = std::f64::consts::FRAC_1_SQRT_2;
        let vt = KreinVector::from_real(&[r, 0.0, -r]).0;
        let e = KreinVector::from_real(&[0.0, 1.0, 0.0]).0;
        let q = operator::dyad_matrix(&metric, &e, &vt) + operator::dyad_matrix(&metric, &vt, &e);
        let a = Operator::new(q, Arc::clone(&metric)).unwrap();
        let v = KreinVector::from_real(&[r, 0.0, r]).0;
        let chain: Vec<KreinVector> = [v.clone(), a.matrix() * &v, a.matrix() * a.matrix() * &v].into_iter().map(KreinVector).collect();
        let cell = reduce_real_cell(&a, 0.0, &chain).unwrap();
        assert_eq!((cell.kind, cell.s, cell.chain_length()), (CellKind::RealJordanOdd, 1, 3));
        assert!(cell.leg_deviation(&metric) < 1e-12);
        let d = decompose(&a, &Tolerances::default()).unwrap();
        assert_eq!(d.cells.len(), 1);
        assert_eq!(d.cells[0].kind, CellKind::RealJordanOdd);
    }

    #[test]
    fn simple_cell() {
        let metric = Arc::new(Metric::from_signs(&[1]).unwrap());
        let a = Operator::from_real(1, &[5.0], Arc::clone(&metric)).unwrap();
        let cell = reduce_real_cell(&a, 5.0, &[KreinVector::from_real(&[2.0])]).unwrap();
        assert_eq!((cell.kind, cell.leg.e_sign), (CellKind::SimpleReal, Some(1)));
        let d = decompose(&a, &Tolerances::default()).unwrap();
        assert_eq!(reconstruct(&d).unwrap().matrix()[(0, 0)], real(5.0));
    }

    #[test]
    fn broken_chain_is_contract_error() {
        let a = n0();
        let chain = [KreinVector::from_real(&[1.0, 0.0]), KreinVector::from_real(&[1.0, 0.0])];
        assert!(matches!(reduce_real_cell(&a, 0.0, &chain), Err(KreinError::Contract(_))));
    }

    #[test]
    fn b_is_one_triangle() {
        let cells = reduce_complex_pair(&b_op(), c(0.0, 1.0), &Tolerances::default()).unwrap();
        assert_eq!(cells.len(), 1);
        let cell = &cells[0];
        assert_eq!((cell.kind, cell.s), (CellKind::ComplexTriangle, 1));
        assert!((cell.lambda - c(0.0, 1.0)).norm() < 1e-14);
        let d = decompose(&b_op(), &Tolerances::default()).unwrap();
        assert!((reconstruct(&d).unwrap().matrix() - b_op().matrix()).norm() < 1e-10);
    }

    #[test]
    fn b_plus_diagonal() {
        let form = linalg::block_diag(&[swap().form().clone(), CMatrix::from_diagonal_element(2, 2, real(-1.0))]);
        let metric = Arc::new(Metric::from_matrix(form).unwrap());
        let mut m = CMatrix::zeros(4, 4);
        m.view_mut((0, 0), (2, 2)).copy_from(b_op().matrix());
        m[(2, 2)] = real(2.0);
        m[(3, 3)] = real(-3.0);
        let a = Operator::new(m, metric).unwrap();
        let d = decompose(&a, &Tolerances::default()).unwrap();
        let kinds: Vec<CellKind> = d.cells.iter().map(|c| c.kind).collect();
        assert_eq!(kinds, vec![CellKind::ComplexTriangle, CellKind::SimpleReal, CellKind::SimpleReal]);
        assert_eq!(d.cells[1].lambda, real(2.0));
        assert_eq!(d.null_pairs(), 1);
        assert!(d.residual < 1e-12);
    }

    #[test]
    fn minkowski_diagonal_gives_simple_cells() {
        let metric = Arc::new(Metric::minkowski());
        let a = Operator::new(CMatrix::from_diagonal(&linalg::CVector::from_vec(vec![real(2.0), real(-1.0), real(-3.0), real(-5.0)])), metric).unwrap();
        let d = decompose(&a, &Tolerances::default()).unwrap();
        let signs: Vec<Option<i8>> = d.cells.iter().map(|c| c.leg.e_sign).collect();
        assert_eq!(signs, vec![Some(1), Some(-1), Some(-1), Some(-1)]);
        assert!(d.cells.iter().all(|c| c.kind == CellKind::SimpleReal));
    }

    #[test]
    fn n0_decomposes_to_even_cell() {
        let d = decompose(&n0(), &Tolerances::default()).unwrap();
        assert_eq!(d.cells.len(), 1);
        assert_eq!((d.cells[0].kind, d.cells[0].s), (CellKind::RealJordanEven, 1));
        assert!(chain_orthogonality(&n0(), &d.cells[0]) < 1e-14);
    }

    #[test]
    fn non_pseudo_hermitian_is_rejected() {
        let a = Operator::from_real(2, &[1.0, 2.0, 3.0, 4.0], swap()).unwrap();
        assert!(matches!(decompose(&a, &Tolerances::default()), Err(KreinError::Contract(_))));
    }
}
