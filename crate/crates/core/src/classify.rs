//! Algebraic types of 4×4 pseudo-hermitian operators.
//!
//! Signature (1,3) admits four types, signature (2,2) nine. A type is fixed by
//! the Jordan structure of the real eigenvalues together with the sizes of the
//! triangle cells of the complex pairs; both are read off the canonical
//! decomposition.

use std::fmt;
use std::sync::Arc;

use num_complex::Complex64;

use crate::canonical::{decompose, CellKind, Decomposition};
use crate::error::{KreinError, Result};
use crate::linalg::{self, CMatrix, CVector};
use crate::operator::{dyad_matrix, Operator};
use crate::space::{Metric, SignatureInfo};
use crate::synthesis::AxisAllocator;
use crate::tolerance::Tolerances;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum TypeLabel {
    L1,
    L2,
    L3,
    L4,
    K1,
    K2,
    K3,
    K4,
    K5,
    K6,
    K7,
    K8,
    K9,
}

impl TypeLabel {
    pub const LORENTZ: [TypeLabel; 4] = [TypeLabel::L1, TypeLabel::L2, TypeLabel::L3, TypeLabel::L4];
    pub const SPLIT: [TypeLabel; 9] = [
        TypeLabel::K1,
        TypeLabel::K2,
        TypeLabel::K3,
        TypeLabel::K4,
        TypeLabel::K5,
        TypeLabel::K6,
        TypeLabel::K7,
        TypeLabel::K8,
        TypeLabel::K9,
    ];

    pub fn all() -> impl Iterator<Item = TypeLabel> {
        Self::LORENTZ.into_iter().chain(Self::SPLIT)
    }

    pub fn code(&self) -> &'static str {
        match self {
            TypeLabel::L1 => "L1",
            TypeLabel::L2 => "L2",
            TypeLabel::L3 => "L3",
            TypeLabel::L4 => "L4",
            TypeLabel::K1 => "K1",
            TypeLabel::K2 => "K2",
            TypeLabel::K3 => "K3",
            TypeLabel::K4 => "K4",
            TypeLabel::K5 => "K5",
            TypeLabel::K6 => "K6",
            TypeLabel::K7 => "K7",
            TypeLabel::K8 => "K8",
            TypeLabel::K9 => "K9",
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            TypeLabel::L1 => "[Z−Z*−S₁−S₂]",
            TypeLabel::L2 => "[T−S₁−S₂−S₃]",
            TypeLabel::L3 => "[2N−S₁−S₂]",
            TypeLabel::L4 => "[3N−S₁]",
            TypeLabel::K1 => "[2Z−2Z*]",
            TypeLabel::K2 => "[Z₁−Z₁*−Z₂−Z₂*]",
            TypeLabel::K3 => "[Z₁−Z₁*−2S₁]",
            TypeLabel::K4 => "[Z₁−Z₁*−S₁−S₂]",
            TypeLabel::K5 => "[T₁−T₂−S₁−S₂]",
            TypeLabel::K6 => "[2N₁−2N₂]",
            TypeLabel::K7 => "[2N−S₁−S₂]",
            TypeLabel::K8 => "[3N−S₁]",
            TypeLabel::K9 => "[4N]",
        }
    }

    /// Accepts the code (`"K9"`) or the bracketed name (`"[4N]"`, Lorentz
    /// entries first for names shared by both signatures).
    pub fn parse(s: &str) -> Option<TypeLabel> {
        Self::all().find(|t| t.code() == s).or_else(|| Self::all().find(|t| t.name() == s))
    }

    /// `(k, l)` of the metric the type lives in.
    pub fn signature(&self) -> (usize, usize) {
        if Self::LORENTZ.contains(self) {
            (1, 3)
        } else {
            (2, 2)
        }
    }

    /// Sizes `s` of the triangle cells and lengths of the real Jordan chains,
    /// both sorted descending.
    pub fn fingerprint(&self) -> (&'static [usize], &'static [usize]) {
        match self {
            TypeLabel::L1 => (&[1], &[1, 1]),
            TypeLabel::L2 => (&[], &[1, 1, 1, 1]),
            TypeLabel::L3 => (&[], &[2, 1, 1]),
            TypeLabel::L4 => (&[], &[3, 1]),
            TypeLabel::K1 => (&[2], &[]),
            TypeLabel::K2 => (&[1, 1], &[]),
            TypeLabel::K3 => (&[1], &[2]),
            TypeLabel::K4 => (&[1], &[1, 1]),
            TypeLabel::K5 => (&[], &[1, 1, 1, 1]),
            TypeLabel::K6 => (&[], &[2, 2]),
            TypeLabel::K7 => (&[], &[2, 1, 1]),
            TypeLabel::K8 => (&[], &[3, 1]),
            TypeLabel::K9 => (&[], &[4]),
        }
    }
}

impl fmt::Display for TypeLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// One eigenvalue cluster seen by the classifier.
#[derive(Debug, Clone, PartialEq)]
pub struct EigenvalueEntry {
    pub value: Complex64,
    pub multiplicity: usize,
    /// Jordan chain lengths (real) or triangle sizes (complex, listed at `λ`
    /// with `Im λ > 0` and repeated at `λ*`).
    pub chain_lengths: Vec<usize>,
}

/// Structural and numerical parameters behind a label.
#[derive(Debug, Clone, PartialEq)]
pub struct TypeParametersFound {
    pub eigenvalues: Vec<EigenvalueEntry>,
    pub triangle_sizes: Vec<usize>,
    pub real_chain_lengths: Vec<usize>,
    /// `(λ, sign <x, x>)` for every simple real eigenvector.
    pub eigenvector_signs: Vec<(f64, i8)>,
    /// Leg sign of every real Jordan cell of length ≥ 2, as `(λ, q, ε)`.
    pub chain_signs: Vec<(f64, usize, i8)>,
    /// Set when coinciding eigenvalues merge cells the label lists separately.
    pub degeneracy: Option<String>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct AlgebraicType {
    pub label: TypeLabel,
    pub parameters: TypeParametersFound,
}

/// Label a 4×4 pseudo-hermitian operator under signature (1,3) or (2,2).
pub fn classify_dim4(a: &Operator, tol: &Tolerances) -> Result<AlgebraicType> {
    let sig = check_dim4(a.metric().signature(), a.dim())?;
    let d = decompose(a, tol)?;
    classify_decomposition(&d, sig)
}

fn check_dim4(sig: SignatureInfo, dim: usize) -> Result<(usize, usize)> {
    if dim != 4 {
        return Err(KreinError::input(format!("classification needs dimension 4, got {dim}")));
    }
    match (sig.k, sig.l) {
        (1, 3) | (2, 2) => Ok((sig.k, sig.l)),
        (k, l) => Err(KreinError::input(format!("no type list for signature ({k}, {l}); expected (1, 3) or (2, 2)"))),
    }
}

/// Label from an existing decomposition.
pub fn classify_decomposition(d: &Decomposition, sig: (usize, usize)) -> Result<AlgebraicType> {
    let mut triangle_sizes = Vec::new();
    let mut real_chain_lengths = Vec::new();
    let mut eigenvector_signs = Vec::new();
    let mut chain_signs = Vec::new();
    let mut eigenvalues: Vec<EigenvalueEntry> = Vec::new();
    let mut add = |value: Complex64, q: usize| match eigenvalues.iter_mut().find(|e| e.value == value) {
        Some(e) => {
            e.multiplicity += q;
            e.chain_lengths.push(q);
        }
        None => eigenvalues.push(EigenvalueEntry { value, multiplicity: q, chain_lengths: vec![q] }),
    };
    for cell in &d.cells {
        let lam = cell.lambda;
        match cell.kind {
            CellKind::ComplexTriangle => {
                triangle_sizes.push(cell.s);
                add(lam, cell.s);
                add(lam.conj(), cell.s);
            }
            CellKind::SimpleReal => {
                real_chain_lengths.push(1);
                eigenvector_signs.push((lam.re, cell.leg.e_sign.unwrap_or(1)));
                add(lam, 1);
            }
            _ => {
                let q = cell.chain_length();
                real_chain_lengths.push(q);
                chain_signs.push((lam.re, q, cell.overall_sign));
                add(lam, q);
            }
        }
    }
    triangle_sizes.sort_unstable_by(|a, b| b.cmp(a));
    real_chain_lengths.sort_unstable_by(|a, b| b.cmp(a));
    let candidates: &[TypeLabel] = if sig == (1, 3) { &TypeLabel::LORENTZ } else { &TypeLabel::SPLIT };
    let label = candidates
        .iter()
        .copied()
        .find(|t| {
            let (tri, chains) = t.fingerprint();
            tri == triangle_sizes.as_slice() && chains == real_chain_lengths.as_slice()
        })
        .ok_or_else(|| {
            KreinError::numerical(format!(
                "structure (triangles {triangle_sizes:?}, real chains {real_chain_lengths:?}) matches no type for signature {sig:?}"
            ))
        })?;
    let merged: Vec<String> = eigenvalues
        .iter()
        .filter(|e| e.chain_lengths.len() > 1)
        .map(|e| format!("{} carries {} cells", fmt_complex(e.value), e.chain_lengths.len()))
        .collect();
    let degeneracy = (!merged.is_empty()).then(|| merged.join("; "));
    Ok(AlgebraicType {
        label,
        parameters: TypeParametersFound {
            eigenvalues,
            triangle_sizes,
            real_chain_lengths,
            eigenvector_signs,
            chain_signs,
            degeneracy,
        },
    })
}

fn fmt_complex(z: Complex64) -> String {
    if z.im == 0.0 {
        format!("{}", z.re)
    } else {
        format!("{}{:+}i", z.re, z.im)
    }
}

/// `diag(1,1,-1,-1)` for (2,2) and `diag(1,-1,-1,-1)` for (1,3).
pub fn catalog_metric(sig: SignatureInfo) -> Result<Arc<Metric>> {
    check_dim4(sig, sig.k + sig.l)?;
    Ok(Arc::new(Metric::with_signature(sig.k, sig.l)?))
}

/// One canonical representative per type, written with the dyadic
/// expressions of the type list at `α = 1`, `β = 2`, `λ_i = i` and all free
/// signs `+`. Null pairs are `(f₊ ± f₋)/√2` on the metric axes.
pub fn type_catalog(sig: SignatureInfo) -> Result<Vec<(AlgebraicType, Operator)>> {
    let metric = catalog_metric(sig)?;
    let labels: &[TypeLabel] = if sig.k == 1 { &TypeLabel::LORENTZ } else { &TypeLabel::SPLIT };
    let tol = Tolerances::default();
    labels
        .iter()
        .map(|&label| {
            let op = Operator::new(catalog_matrix(label, &metric)?, Arc::clone(&metric))?;
            let found = classify_dim4(&op, &tol)?;
            if found.label != label {
                return Err(KreinError::numerical(format!(
                    "catalog entry {} classifies as {}",
                    label.code(),
                    found.label.code()
                )));
            }
            Ok((found, op))
        })
        .collect()
}

fn catalog_matrix(label: TypeLabel, metric: &Metric) -> Result<CMatrix> {
    let (alpha, beta) = (1.0, 2.0);
    let l = |i: usize| linalg::real(i as f64);
    let d = |u: &CVector, v: &CVector| dyad_matrix(metric, u, v);
    let mut axes = AxisAllocator::new(metric);
    // α(ṽ⊗v + v⊗ṽ) + iβ(ṽ⊗v - v⊗ṽ)
    let pair_term = |v: &CVector, vt: &CVector, alpha: f64, beta: f64| {
        (d(vt, v) + d(v, vt)) * linalg::real(alpha) + (d(vt, v) - d(v, vt)) * Complex64::new(0.0, beta)
    };
    // ṽ⊗ṽ + λ(v⊗ṽ + ṽ⊗v)
    let two_n = |v: &CVector, vt: &CVector, lam: Complex64| d(vt, vt) + (d(v, vt) + d(vt, v)) * lam;
    let m = match label {
        TypeLabel::K1 => {
            let (v1, t1) = axes.null_pair(1)?;
            let (v2, t2) = axes.null_pair(1)?;
            pair_term(&v1, &t1, alpha, beta)
                + pair_term(&v2, &t2, alpha, beta)
                + (d(&t1, &v2) - d(&v2, &t1)) * Complex64::new(0.0, 2.0 * beta)
        }
        TypeLabel::K2 => {
            let (v1, t1) = axes.null_pair(1)?;
            let (v2, t2) = axes.null_pair(1)?;
            pair_term(&v1, &t1, 1.0, 2.0) + pair_term(&v2, &t2, 3.0, 4.0)
        }
        TypeLabel::K3 => {
            let (v1, t1) = axes.null_pair(1)?;
            let (v2, t2) = axes.null_pair(1)?;
            pair_term(&v1, &t1, alpha, beta) + two_n(&v2, &t2, l(2))
        }
        TypeLabel::K4 | TypeLabel::L1 => {
            let (v1, t1) = axes.null_pair(1)?;
            let e2 = axes.unit(if label == TypeLabel::K4 { 1 } else { -1 })?;
            let e3 = axes.unit(-1)?;
            pair_term(&v1, &t1, alpha, beta) + d(&e2, &e2) * l(2) + d(&e3, &e3) * l(3)
        }
        TypeLabel::K5 | TypeLabel::L2 => {
            let e1 = axes.unit(1)?;
            let e2 = axes.unit(if label == TypeLabel::K5 { 1 } else { -1 })?;
            let e3 = axes.unit(-1)?;
            let e4 = axes.unit(-1)?;
            d(&e1, &e1) * l(1) + d(&e2, &e2) * l(2) - d(&e3, &e3) * l(3) - d(&e4, &e4) * l(4)
        }
        TypeLabel::K6 => {
            let (v1, t1) = axes.null_pair(1)?;
            let (v2, t2) = axes.null_pair(1)?;
            two_n(&v1, &t1, l(1)) + two_n(&v2, &t2, l(2))
        }
        TypeLabel::K7 | TypeLabel::L3 => {
            let (v1, t1) = axes.null_pair(1)?;
            let e2 = axes.unit(if label == TypeLabel::K7 { 1 } else { -1 })?;
            let e3 = axes.unit(-1)?;
            two_n(&v1, &t1, l(1)) + d(&e2, &e2) * l(2) + d(&e3, &e3) * l(3)
        }
        TypeLabel::K8 | TypeLabel::L4 => {
            // Under (1,3) the middle vector e is negative, so e⊗e enters with
            // the opposite sign to keep λ₁ a single eigenvalue of the 3-chain.
            let (v1, t1) = axes.null_pair(1)?;
            let (e_sign, e2_sign) = if label == TypeLabel::K8 { (1, -1) } else { (-1, -1) };
            let e = axes.unit(e_sign)?;
            let e2 = axes.unit(e2_sign)?;
            let ee = d(&e, &e) * linalg::real(f64::from(e_sign));
            (d(&e, &t1) + d(&t1, &e)) - (d(&v1, &t1) + d(&t1, &v1) + ee) * l(1) - d(&e2, &e2) * l(2)
        }
        TypeLabel::K9 => {
            let (v1, t1) = axes.null_pair(1)?;
            let (v2, t2) = axes.null_pair(1)?;
            (d(&v2, &t1) + d(&t2, &t2) + d(&t1, &v2)) + (d(&v1, &t1) + d(&t1, &v1) + d(&v2, &t2) + d(&t2, &v2)) * l(1)
        }
    };
    Ok(m)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::real;

    fn diag(values: &[f64], metric: Arc<Metric>) -> Operator {
        let d = CVector::from_iterator(values.len(), values.iter().map(|&x| real(x)));
        Operator::new(CMatrix::from_diagonal(&d), metric).unwrap()
    }

    #[test]
    fn diagonal_minkowski_is_l2() {
        let t = classify_dim4(&diag(&[2.0, -1.0, -3.0, -5.0], Arc::new(Metric::minkowski())), &Tolerances::default()).unwrap();
        assert_eq!(t.label, TypeLabel::L2);
        assert_eq!(t.label.name(), "[T−S₁−S₂−S₃]");
        let signs: Vec<i8> = t.parameters.eigenvector_signs.iter().map(|s| s.1).collect();
        assert_eq!(signs, vec![1, -1, -1, -1]);
    }

    #[test]
    fn b_block_plus_spacelike_is_l1() {
        // B on the null pair (1,±1,0,0)/√2 of the t-x plane, diag(s1, s2) on y, z.
        let metric = Arc::new(Metric::minkowski());
        let r = std::f64::consts::FRAC_1_SQRT_2;
        let v = CVector::from_vec(vec![real(r), real(r), real(0.0), real(0.0)]);
        let vt = CVector::from_vec(vec![real(r), real(-r), real(0.0), real(0.0)]);
        let b = (dyad_matrix(&metric, &vt, &v) - dyad_matrix(&metric, &v, &vt)) * linalg::I;
        let mut m = b;
        m[(2, 2)] = real(4.0);
        m[(3, 3)] = real(-6.0);
        let t = classify_dim4(&Operator::new(m, metric).unwrap(), &Tolerances::default()).unwrap();
        assert_eq!(t.label, TypeLabel::L1);
    }

    #[test]
    fn item_5_pattern_is_k5() {
        let metric = Arc::new(Metric::with_signature(2, 2).unwrap());
        let t = classify_dim4(&diag(&[1.0, 2.0, 3.0, 4.0], metric), &Tolerances::default()).unwrap();
        assert_eq!(t.label, TypeLabel::K5);
        assert!(t.parameters.degeneracy.is_none());
    }

    #[test]
    fn coinciding_eigenvalues_note_degeneracy() {
        let metric = Arc::new(Metric::with_signature(2, 2).unwrap());
        let t = classify_dim4(&diag(&[1.0, 1.0, 3.0, 4.0], metric), &Tolerances::default()).unwrap();
        assert_eq!(t.label, TypeLabel::K5);
        assert!(t.parameters.degeneracy.is_some());
    }

    #[test]
    fn catalogs() {
        let lorentz = type_catalog(SignatureInfo::new(1, 3)).unwrap();
        let split = type_catalog(SignatureInfo::new(2, 2)).unwrap();
        let labels: Vec<TypeLabel> = lorentz.iter().chain(&split).map(|(t, _)| t.label).collect();
        assert_eq!(labels, TypeLabel::all().collect::<Vec<_>>());
        for (_, op) in lorentz.iter().chain(&split) {
            assert!(crate::operator::hermiticity_residual(op) < 1e-14);
        }
        assert!(matches!(type_catalog(SignatureInfo::new(3, 1)), Err(KreinError::Input(_))));
    }

    #[test]
    fn k1_catalog_eigenvalues() {
        let (_, op) = type_catalog(SignatureInfo::new(2, 2)).unwrap().remove(0);
        let mut ev = linalg::eigenvalues(op.matrix());
        ev.sort_by(|a, b| a.im.total_cmp(&b.im));
        for (z, want) in ev.iter().zip([-2.0, -2.0, 2.0, 2.0]) {
            assert!((z - Complex64::new(1.0, want)).norm() < 1e-6, "{z}");
        }
    }

    #[test]
    fn unsupported_inputs() {
        let tol = Tolerances::default();
        let m3 = Arc::new(Metric::from_signs(&[1, -1, -1]).unwrap());
        assert!(matches!(classify_dim4(&diag(&[1.0, 2.0, 3.0], m3), &tol), Err(KreinError::Input(_))));
        let m4 = Arc::new(Metric::with_signature(3, 1).unwrap());
        assert!(matches!(classify_dim4(&diag(&[1.0, 2.0, 3.0, 4.0], m4), &tol), Err(KreinError::Input(_))));
    }

    #[test]
    fn label_parsing() {
        assert_eq!(TypeLabel::parse("K9"), Some(TypeLabel::K9));
        assert_eq!(TypeLabel::parse("[4N]"), Some(TypeLabel::K9));
        assert_eq!(TypeLabel::parse("[3N−S₁]"), Some(TypeLabel::L4));
        assert_eq!(TypeLabel::parse("K10"), None);
    }
}
