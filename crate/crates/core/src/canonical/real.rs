//! Null-leg reduction of Jordan chains of real eigenvalues.

use num_complex::Complex64;

use super::cell::{CanonicalCell, CellKind, NullLeg};
use crate::error::{KreinError, Result};
use crate::linalg::{self, CMatrix, CVector};
use crate::operator::Operator;
use crate::space::KreinVector;

const CHAIN_TOL: f64 = 1e-6;
const LEG_TOL: f64 = 1e-8;

/// Reduce one Jordan chain `x, Qx, ..., Q^{q-1}x` (`Q = A - lam`) to a
/// canonical cell.
///
/// The generator is replaced by `p(Q) x` where the real polynomial `p`
/// satisfies `p(t)^2 D(t) = ε (mod t^q)`, `D(t) = Σ_j <x, Q^{q-1-j} x> t^j`
/// and `ε = sign <x, Q^{q-1} x>`. The new chain then has
/// `<Q^i x, Q^j x> = ε δ_{i+j, q-1}`: its first half and its reversed second
/// half form a null leg, with the middle vector as unit vector for odd `q`.
pub fn reduce_real_cell(a: &Operator, lam: f64, chain_basis: &[KreinVector]) -> Result<CanonicalCell> {
    let q = chain_basis.len();
    if q == 0 {
        return Err(KreinError::input("empty Jordan chain"));
    }
    let metric = a.metric();
    for (i, y) in chain_basis.iter().enumerate() {
        metric.check_dim(y.dim(), &format!("chain vector {i}"))?;
    }
    let shift = a.shift(linalg::real(lam));
    let qm = shift.matrix();
    let qnorm = linalg::norm2(qm).max(1.0);
    let ys: Vec<CVector> = chain_basis.iter().map(|y| y.0.clone()).collect();
    for i in 0..q {
        let image = qm * &ys[i];
        let expected = ys.get(i + 1).cloned().unwrap_or_else(|| CVector::zeros(ys[i].len()));
        let err = (image - expected).norm();
        if err > CHAIN_TOL * qnorm * ys[i].norm().max(1e-300) {
            return Err(KreinError::contract(format!(
                "chain vector {i} is not mapped to its successor by A - {lam} (residual {err:e})"
            )));
        }
    }

    // moments c_k = <x, Q^k x>, real for a pseudo-hermitian Q
    let moments: Vec<f64> = (0..q).map(|k| metric.product(&ys[0], &ys[k]).re).collect();
    let top = moments[q - 1];
    let hnorm = linalg::norm2(metric.form());
    if top.abs() <= 1e-10 * ys[0].norm() * ys[q - 1].norm() * hnorm {
        return Err(KreinError::numerical(format!(
            "chain of length {q} at {lam} spans a singular subspace (<x, Q^(q-1) x> = {top:e})"
        )));
    }
    let eps = top.signum();
    let d: Vec<f64> = (0..q).map(|j| moments[q - 1 - j]).collect();
    let p = series_sqrt(&series_inverse(&d).iter().map(|g| g * eps).collect::<Vec<_>>());

    // y'_i = Q^i p(Q) x = Σ_m p_m y_{m+i}
    let n = ys[0].len();
    let chain: Vec<CVector> = (0..q)
        .map(|i| {
            let mut acc = CVector::zeros(n);
            for (m, &pm) in p.iter().enumerate() {
                if m + i < q {
                    acc += &ys[m + i] * linalg::real(pm);
                }
            }
            acc
        })
        .collect();

    let sign = eps as i8;
    let cell = if q == 1 {
        CanonicalCell {
            kind: CellKind::SimpleReal,
            lambda: Complex64::new(lam, 0.0),
            s: 0,
            leg: NullLeg { v: vec![], vt: vec![], e: Some(KreinVector(chain[0].clone())), signs: vec![], e_sign: Some(sign) },
            overall_sign: sign,
        }
    } else {
        let s = q / 2;
        let odd = q % 2 == 1;
        let v: Vec<KreinVector> = (0..s).map(|j| KreinVector(chain[j].clone())).collect();
        let vt: Vec<KreinVector> = (0..s).map(|j| KreinVector(chain[q - 1 - j].clone())).collect();
        let e = odd.then(|| KreinVector(chain[s].clone()));
        CanonicalCell {
            kind: if odd { CellKind::RealJordanOdd } else { CellKind::RealJordanEven },
            lambda: Complex64::new(lam, 0.0),
            s,
            leg: NullLeg { v, vt, e, signs: vec![sign; s], e_sign: odd.then_some(sign) },
            overall_sign: sign,
        }
    };
    let dev = cell.leg_deviation(metric);
    if dev > LEG_TOL {
        return Err(KreinError::numerical(format!(
            "generator adjustment left a null-leg Gram deviation of {dev:e} at {lam}"
        )));
    }
    Ok(cell)
}

/// Truncated inverse of a power series with nonzero constant term.
fn series_inverse(d: &[f64]) -> Vec<f64> {
    let mut g = vec![0.0; d.len()];
    g[0] = 1.0 / d[0];
    for n in 1..d.len() {
        let acc: f64 = (1..=n).map(|k| d[k] * g[n - k]).sum();
        g[n] = -acc / d[0];
    }
    g
}

/// Truncated square root of a power series with positive constant term.
fn series_sqrt(g: &[f64]) -> Vec<f64> {
    let mut p = vec![0.0; g.len()];
    p[0] = g[0].sqrt();
    for n in 1..g.len() {
        let acc: f64 = (1..n).map(|k| p[k] * p[n - k]).sum();
        p[n] = (g[n] - acc) / (2.0 * p[0]);
    }
    p
}

/// Split the root subspace `basis` of a real eigenvalue into mutually
/// orthogonal canonical chain cells of the given lengths (non-increasing).
pub(crate) fn reduce_real_root_subspace(
    a: &Operator,
    lam: f64,
    basis: &CMatrix,
    chain_lengths: &[usize],
    null_tol: f64,
) -> Result<Vec<CanonicalCell>> {
    let metric = a.metric();
    let h = metric.form();
    let qm = a.shift(linalg::real(lam)).into_matrix();
    let mut remaining = basis.clone();
    let mut cells = Vec::new();
    for (idx, &q) in chain_lengths.iter().enumerate() {
        // Hermitian form <x, Q^{q-1} y> on the remaining subspace; its dominant
        // eigenvector generates a chain of full length spanning a nonsingular subspace.
        let top = linalg::matrix_power(&qm, q - 1);
        let form = remaining.adjoint() * h * &top * &remaining;
        let (vals, vecs) = linalg::hermitian_eigen(&form);
        let k = (0..vals.len()).max_by(|&i, &j| vals[i].abs().total_cmp(&vals[j].abs())).unwrap();
        // relative to the size of Q^{q-1} on the subspace, which already
        // carries the conditioning of the basis
        let size = linalg::norm2(&(&top * &remaining)) * linalg::norm2(h);
        if !(vals[k].abs() > null_tol * size) {
            return Err(KreinError::numerical(format!(
                "no chain generator of length {q} at {lam}: <x, Q^(q-1) x> vanishes on the remaining root subspace"
            )));
        }
        let x = &remaining * vecs.column(k);
        let mut chain = vec![x];
        for i in 1..q {
            let next = &qm * &chain[i - 1];
            chain.push(next);
        }
        let chain_vecs: Vec<KreinVector> = chain.into_iter().map(KreinVector).collect();
        let cell = reduce_real_cell(a, lam, &chain_vecs).map_err(|e| e.context(format!("real eigenvalue {lam}")))?;

        let left = remaining.ncols() - q;
        if idx + 1 < chain_lengths.len() {
            let c = linalg::from_columns(metric.dim(), &cell.basis_vectors());
            let gram = c.adjoint() * h * &c;
            let gram_inv = gram
                .try_inverse()
                .ok_or_else(|| KreinError::numerical(format!("chain cell at {lam} is singular")))?;
            let projector = &c * gram_inv * c.adjoint() * h;
            let complement = (CMatrix::identity(metric.dim(), metric.dim()) - projector) * &remaining;
            remaining = linalg::column_span_dim(&complement, left);
        }
        cells.push(cell);
    }
    Ok(cells)
}
