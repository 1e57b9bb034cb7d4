//! Triangle cells for a pair of complex conjugate eigenvalues.
//!
//! With `λ = α + iβ`, `β > 0`, the root subspaces `X(λ)` and `X(λ*)` are null
//! subspaces paired nondegenerately by the metric. A triangle cell consists of
//! a Jordan chain in `X(λ)` carrying the vectors `ṽ_j` and a chain in `X(λ*)`
//! carrying the dual vectors `v_j`, normalized so that `<v_i, ṽ_j> = δ_ij` and
//! `(A - λ) ṽ_i = 2iβ Σ_{j<i} ṽ_j`. The top vector `x = x₊ + x₋` is the
//! dominant singular pair of the pairing `<x₋, (A - λ)^{s-1} x₊>`.

use num_complex::Complex64;

use super::cell::{CanonicalCell, CellKind, NullLeg};
use crate::error::{KreinError, Result};
use crate::linalg::{self, CMatrix, CVector};
use crate::operator::Operator;
use crate::space::KreinVector;
use crate::spectral::Spectrum;
use crate::tolerance::Tolerances;

const LEG_TOL: f64 = 1e-8;

/// Decompose `X(λ) + X(λ*)` into triangle cells. `lam` may be given with
/// either sign of imaginary part.
pub fn reduce_complex_pair(a: &Operator, lam: Complex64, tol: &Tolerances) -> Result<Vec<CanonicalCell>> {
    let spec = Spectrum::analyze(a, tol)?;
    let idx = spec.nearest_cluster(lam)?;
    let cluster = &spec.clusters()[idx];
    if cluster.is_real {
        return Err(KreinError::input(format!("{lam} is a real eigenvalue cluster")));
    }
    let partner = cluster.partner_index.expect("paired by analysis");
    let (upper, lower) = if cluster.value.im > 0.0 { (idx, partner) } else { (partner, idx) };
    reduce_pair_in(a, &spec, upper, lower)
}

pub(crate) fn reduce_pair_in(a: &Operator, spec: &Spectrum, upper: usize, lower: usize) -> Result<Vec<CanonicalCell>> {
    let (wp, _) = spec.root_subspace(upper)?;
    let (wm, _) = spec.root_subspace(lower)?;
    let structure = spec.jordan_structure(upper)?;
    let mirror = spec.jordan_structure(lower)?;
    if structure.chain_lengths != mirror.chain_lengths {
        return Err(KreinError::numerical(format!(
            "conjugate eigenvalues {} and {} have different Jordan structures {:?} vs {:?}",
            structure.eigenvalue, mirror.eigenvalue, structure.chain_lengths, mirror.chain_lengths
        )));
    }
    // Symmetrize the pair so that the representative is exactly α ± iβ.
    let plus = spec.clusters()[upper].value;
    let minus = spec.clusters()[lower].value;
    let lam = Complex64::new(0.5 * (plus.re + minus.re), 0.5 * (plus.im - minus.im));
    let r = a.metric().signature().pontriagin_r;
    reduce_pair_bases(a, lam, wp, wm, &structure.chain_lengths, r, spec.tolerances().rank * spec.scale())
}

fn reduce_pair_bases(
    a: &Operator,
    lam: Complex64,
    mut wp: CMatrix,
    mut wm: CMatrix,
    chain_lengths: &[usize],
    pontriagin_r: usize,
    pairing_floor: f64,
) -> Result<Vec<CanonicalCell>> {
    let metric = a.metric();
    let h = metric.form();
    let n = metric.dim();
    let beta = lam.im;
    let np = a.shift(lam).into_matrix();
    let nm = a.shift(lam.conj()).into_matrix();
    let mut cells = Vec::new();
    for &s in chain_lengths {
        if s > pontriagin_r {
            return Err(KreinError::contract(format!(
                "triangle cell of dimension {} at {lam} exceeds 2r = {}: Pontriagin bound violated",
                2 * s,
                2 * pontriagin_r
            )));
        }
        let top = linalg::matrix_power(&np, s - 1);
        let pairing = wm.adjoint() * h * &top * &wp;
        let svd = linalg::svd(&pairing);
        if svd.s.first().is_none_or(|&top| top <= pairing_floor) {
            return Err(KreinError::numerical(format!(
                "no top vector yields a nonsingular triangle of size {} at {lam}",
                2 * s
            )));
        }
        let x_plus = &wp * svd.v.column(0);
        let x_minus = &wm * svd.u.column(0);

        // Chain in X(λ): w_1 = (A-λ)^{s-1} x₊ (eigenvector), ..., w_s = x₊.
        let mut up = vec![x_plus];
        let mut down = vec![x_minus];
        for i in 1..s {
            let next_up = &np * &up[i - 1];
            let next_down = &nm * &down[i - 1];
            up.push(next_up);
            down.push(next_down);
        }
        let w = linalg::from_columns(n, &up.iter().rev().cloned().collect::<Vec<_>>());
        let vt_mat = w * krylov_inverse(s, beta)?;
        let d = linalg::from_columns(n, &down);
        let m = d.adjoint() * h * &vt_mat;
        let m_inv = m
            .try_inverse()
            .ok_or_else(|| KreinError::numerical(format!("triangle pairing at {lam} is singular")))?;
        let v_mat = d * m_inv.adjoint();

        let cell = CanonicalCell {
            kind: CellKind::ComplexTriangle,
            lambda: lam,
            s,
            leg: NullLeg {
                v: linalg::columns(&v_mat).into_iter().map(KreinVector).collect(),
                vt: linalg::columns(&vt_mat).into_iter().map(KreinVector).collect(),
                e: None,
                signs: vec![1; s],
                e_sign: None,
            },
            overall_sign: 1,
        };
        let dev = cell.leg_deviation(metric);
        if dev > LEG_TOL {
            return Err(KreinError::numerical(format!("triangle null leg at {lam} deviates by {dev:e}")));
        }

        let left = wp.ncols() - s;
        if left > 0 {
            // X(λ) ∩ D^⊥ and X(λ*) ∩ C^⊥ carry the remaining cells.
            let cp = v_mat.adjoint() * h * &wp;
            let cm = vt_mat.adjoint() * h * &wm;
            wp = &wp * linalg::smallest_right_singular(&cp, left).basis;
            wm = &wm * linalg::smallest_right_singular(&cm, left).basis;
        }
        cells.push(cell);
    }
    Ok(cells)
}

/// `K^{-1}` where the columns of `K` are `T^{s-1} e_s, ..., T e_s, e_s` for
/// `T = 2iβ U`, `U` strictly upper triangular with unit entries. `K`
/// intertwines `T` with the standard nilpotent Jordan block.
fn krylov_inverse(s: usize, beta: f64) -> Result<CMatrix> {
    let mut t = CMatrix::zeros(s, s);
    for i in 0..s {
        for j in (i + 1)..s {
            t[(i, j)] = Complex64::new(0.0, 2.0 * beta);
        }
    }
    let mut cols = vec![CVector::zeros(s); s];
    cols[s - 1][s - 1] = linalg::ONE;
    for j in (0..s - 1).rev() {
        cols[j] = &t * &cols[j + 1];
    }
    linalg::from_columns(s, &cols)
        .try_inverse()
        .ok_or_else(|| KreinError::numerical("triangle Krylov basis is singular"))
}
