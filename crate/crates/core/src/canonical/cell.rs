//! Canonical cells and their dyadic formulas.

use num_complex::Complex64;

use crate::linalg::{self, CMatrix, CVector};
use crate::space::{KreinVector, Metric};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum CellKind {
    SimpleReal,
    RealJordanEven,
    RealJordanOdd,
    ComplexTriangle,
}

impl CellKind {
    pub fn name(&self) -> &'static str {
        match self {
            CellKind::SimpleReal => "SimpleReal",
            CellKind::RealJordanEven => "RealJordanEven",
            CellKind::RealJordanOdd => "RealJordanOdd",
            CellKind::ComplexTriangle => "ComplexTriangle",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        match s {
            "SimpleReal" => Some(CellKind::SimpleReal),
            "RealJordanEven" => Some(CellKind::RealJordanEven),
            "RealJordanOdd" => Some(CellKind::RealJordanOdd),
            "ComplexTriangle" => Some(CellKind::ComplexTriangle),
            _ => None,
        }
    }

    /// Cell dimension for half-length `s`.
    pub fn dim(&self, s: usize) -> usize {
        match self {
            CellKind::SimpleReal => 1,
            CellKind::RealJordanEven | CellKind::ComplexTriangle => 2 * s,
            CellKind::RealJordanOdd => 2 * s + 1,
        }
    }
}

/// Null leg `v_1..v_s, ṽ_1..ṽ_s` with `<v_i, ṽ_j> = signs[i] δ_ij`, optionally
/// extended by a unit vector `e` with `<e, e> = e_sign`.
#[derive(Debug, Clone, PartialEq)]
pub struct NullLeg {
    pub v: Vec<KreinVector>,
    pub vt: Vec<KreinVector>,
    pub e: Option<KreinVector>,
    pub signs: Vec<i8>,
    pub e_sign: Option<i8>,
}

impl NullLeg {
    pub fn s(&self) -> usize {
        self.v.len()
    }
}

/// Slot of a basis vector inside a cell.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) enum Slot {
    V(usize),
    Vt(usize),
    E,
}

/// One irreducible block of the canonical decomposition.
#[derive(Debug, Clone, PartialEq)]
pub struct CanonicalCell {
    pub kind: CellKind,
    /// Real eigenvalue, or `α + iβ` with `β > 0` for a triangle cell.
    pub lambda: Complex64,
    /// Half-length; zero for `SimpleReal`.
    pub s: usize,
    pub leg: NullLeg,
    /// The `±` in front of the nilpotent part; equals the leg sign for real
    /// chains and is `+1` for triangle cells.
    pub overall_sign: i8,
}

impl CanonicalCell {
    pub fn dim(&self) -> usize {
        self.kind.dim(self.s)
    }

    pub fn null_pairs(&self) -> usize {
        self.s
    }

    /// Jordan chain length `q` for real cells (`2s` or `2s+1`, or 1).
    pub fn chain_length(&self) -> usize {
        match self.kind {
            CellKind::ComplexTriangle => self.s,
            k => k.dim(self.s),
        }
    }

    /// Basis slots in canonical column order: chain order
    /// `v_1..v_s (e) ṽ_s..ṽ_1` for real cells, `v_1..v_s ṽ_1..ṽ_s` for triangles.
    pub(crate) fn slots(&self) -> Vec<Slot> {
        slots_for(self.kind, self.s)
    }

    pub fn basis_vectors(&self) -> Vec<CVector> {
        self.slots().into_iter().map(|slot| self.vector(slot).0.clone()).collect()
    }

    fn vector(&self, slot: Slot) -> &KreinVector {
        match slot {
            Slot::V(j) => &self.leg.v[j],
            Slot::Vt(j) => &self.leg.vt[j],
            Slot::E => self.leg.e.as_ref().expect("cell has a unit vector"),
        }
    }

    fn leg_sign(&self) -> f64 {
        f64::from(self.leg.signs.first().copied().or(self.leg.e_sign).unwrap_or(1))
    }

    /// The target Gram matrix of the basis (in `basis_vectors` order).
    pub fn ideal_gram(&self) -> CMatrix {
        let slots = self.slots();
        let d = slots.len();
        let mut g = CMatrix::zeros(d, d);
        for (i, a) in slots.iter().enumerate() {
            for (j, b) in slots.iter().enumerate() {
                let val = match (a, b) {
                    (Slot::V(p), Slot::Vt(q)) | (Slot::Vt(q), Slot::V(p)) if p == q => f64::from(self.leg.signs[*p]),
                    (Slot::E, Slot::E) => f64::from(self.leg.e_sign.unwrap_or(1)),
                    _ => 0.0,
                };
                g[(i, j)] = linalg::real(val);
            }
        }
        g
    }

    /// The cell operator as a combination of dyads over its slots.
    pub(crate) fn dyad_terms(&self) -> Vec<(Complex64, Slot, Slot)> {
        cell_terms(self.kind, self.s, self.lambda, self.leg_sign())
    }

    /// Matrix of the cell operator in its own canonical basis.
    pub fn canonical_matrix(&self) -> CMatrix {
        let slots = self.slots();
        let d = slots.len();
        let unit = |slot: Slot| {
            let mut x = CVector::zeros(d);
            x[slots.iter().position(|&s| s == slot).unwrap()] = linalg::ONE;
            x
        };
        evaluate_terms(&self.dyad_terms(), &unit, &self.ideal_gram())
    }

    /// Largest deviation of the actual Gram matrix from the null-leg pattern,
    /// each entry relative to `||a|| ||b|| ||H||`.
    pub fn leg_deviation(&self, metric: &Metric) -> f64 {
        let basis = self.basis_vectors();
        let ideal = self.ideal_gram();
        let hnorm = linalg::norm2(metric.form());
        let mut worst: f64 = 0.0;
        for (i, a) in basis.iter().enumerate() {
            for (j, b) in basis.iter().enumerate() {
                let g = metric.product(a, b);
                let dev = (g - ideal[(i, j)]).norm() / (a.norm() * b.norm() * hnorm).max(f64::MIN_POSITIVE);
                worst = worst.max(dev);
            }
        }
        worst
    }
}

pub(crate) fn slots_for(kind: CellKind, s: usize) -> Vec<Slot> {
    match kind {
        CellKind::SimpleReal => vec![Slot::E],
        CellKind::RealJordanEven => (0..s).map(Slot::V).chain((0..s).rev().map(Slot::Vt)).collect(),
        CellKind::RealJordanOdd => {
            (0..s).map(Slot::V).chain(std::iter::once(Slot::E)).chain((0..s).rev().map(Slot::Vt)).collect()
        }
        CellKind::ComplexTriangle => (0..s).map(Slot::V).chain((0..s).map(Slot::Vt)).collect(),
    }
}

/// Dyadic formula of a cell. Real chains: `λ` times the identity of the cell
/// written as `ε Σ(v_j⊗ṽ_j + ṽ_j⊗v_j) (+ ε e⊗e)` plus `ε` times
/// `Σ v_{j+1}⊗ṽ_j + ṽ_s⊗ṽ_s + Σ ṽ_j⊗v_{j+1}` (even) or
/// `Σ v_{j+1}⊗ṽ_j + e⊗ṽ_s + ṽ_s⊗e + Σ ṽ_j⊗v_{j+1}` (odd).
/// Triangles: `α Σ(ṽ_j⊗v_j + v_j⊗ṽ_j) + iβ Σ(ṽ_j⊗v_j - v_j⊗ṽ_j)
/// + 2iβ Σ_{j<i}(ṽ_j⊗v_i - v_i⊗ṽ_j)`.
pub(crate) fn cell_terms(kind: CellKind, s: usize, lambda: Complex64, eps: f64) -> Vec<(Complex64, Slot, Slot)> {
    let r = linalg::real;
    let mut t = Vec::new();
    match kind {
        CellKind::SimpleReal => t.push((lambda * eps, Slot::E, Slot::E)),
        CellKind::RealJordanEven | CellKind::RealJordanOdd => {
            for j in 0..s {
                t.push((lambda * eps, Slot::V(j), Slot::Vt(j)));
                t.push((lambda * eps, Slot::Vt(j), Slot::V(j)));
            }
            for j in 0..s.saturating_sub(1) {
                t.push((r(eps), Slot::V(j + 1), Slot::Vt(j)));
                t.push((r(eps), Slot::Vt(j), Slot::V(j + 1)));
            }
            if kind == CellKind::RealJordanEven {
                t.push((r(eps), Slot::Vt(s - 1), Slot::Vt(s - 1)));
            } else {
                t.push((lambda * eps, Slot::E, Slot::E));
                if s > 0 {
                    t.push((r(eps), Slot::E, Slot::Vt(s - 1)));
                    t.push((r(eps), Slot::Vt(s - 1), Slot::E));
                }
            }
        }
        CellKind::ComplexTriangle => {
            let alpha = r(lambda.re);
            let ib = linalg::I * lambda.im;
            for j in 0..s {
                t.push((alpha + ib, Slot::Vt(j), Slot::V(j)));
                t.push((alpha - ib, Slot::V(j), Slot::Vt(j)));
            }
            for j in 0..s {
                for i in (j + 1)..s {
                    t.push((ib * 2.0, Slot::Vt(j), Slot::V(i)));
                    t.push((-ib * 2.0, Slot::V(i), Slot::Vt(j)));
                }
            }
        }
    }
    t
}

/// `Σ c (a ⊗ b)` with `(a ⊗ b) = a b^H G`.
pub(crate) fn evaluate_terms(terms: &[(Complex64, Slot, Slot)], realize: &dyn Fn(Slot) -> CVector, form: &CMatrix) -> CMatrix {
    let n = form.nrows();
    let mut out = CMatrix::zeros(n, n);
    for &(coef, a, b) in terms {
        let (va, vb) = (realize(a), realize(b));
        out += &va * (form * vb).adjoint() * coef;
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::real;

    fn dummy_leg(s: usize, sign: i8, e: Option<i8>) -> NullLeg {
        let z = KreinVector::from_real(&[0.0]);
        NullLeg { v: vec![z.clone(); s], vt: vec![z.clone(); s], e: e.map(|_| z), signs: vec![sign; s], e_sign: e }
    }

    fn cell(kind: CellKind, s: usize, lambda: Complex64, sign: i8) -> CanonicalCell {
        let e = matches!(kind, CellKind::SimpleReal | CellKind::RealJordanOdd).then_some(sign);
        CanonicalCell { kind, lambda, s, leg: dummy_leg(s, sign, e), overall_sign: sign }
    }

    fn jordan(d: usize, lam: f64) -> CMatrix {
        let mut m = CMatrix::identity(d, d) * real(lam);
        for i in 0..d - 1 {
            m[(i + 1, i)] = real(1.0);
        }
        m
    }

    #[test]
    fn real_cells_are_lower_jordan_blocks() {
        // Columns follow the chain, so Q maps column i to column i+1.
        for sign in [1, -1] {
            for s in 1..4 {
                let even = cell(CellKind::RealJordanEven, s, real(2.5), sign).canonical_matrix();
                assert!((even - jordan(2 * s, 2.5)).norm() < 1e-14, "even s={s} sign={sign}");
                let odd = cell(CellKind::RealJordanOdd, s, real(-1.0), sign).canonical_matrix();
                assert!((odd - jordan(2 * s + 1, -1.0)).norm() < 1e-14, "odd s={s} sign={sign}");
            }
            let simple = cell(CellKind::SimpleReal, 0, real(5.0), sign).canonical_matrix();
            assert_eq!(simple, CMatrix::from_element(1, 1, real(5.0)));
        }
    }

    #[test]
    fn triangle_cell_structure() {
        let (a, b) = (1.0, 2.0);
        let m = cell(CellKind::ComplexTriangle, 2, Complex64::new(a, b), 1).canonical_matrix();
        // columns v1 v2 ṽ1 ṽ2
        let lam = Complex64::new(a, b);
        let ib2 = Complex64::new(0.0, 2.0 * b);
        let mut expect = CMatrix::zeros(4, 4);
        expect[(0, 0)] = lam.conj();
        expect[(1, 0)] = -ib2;
        expect[(1, 1)] = lam.conj();
        expect[(2, 2)] = lam;
        expect[(3, 3)] = lam;
        expect[(2, 3)] = ib2;
        assert!((m - expect).norm() < 1e-14);
    }

    #[test]
    fn triangle_s1_is_b_operator() {
        let m = cell(CellKind::ComplexTriangle, 1, Complex64::new(0.0, 1.0), 1).canonical_matrix();
        let expect = CMatrix::from_row_slice(2, 2, &[Complex64::new(0.0, -1.0), real(0.0), real(0.0), Complex64::new(0.0, 1.0)]);
        assert!((m - expect).norm() < 1e-15);
    }

    #[test]
    fn ideal_gram_is_antidiagonal_for_chains() {
        let g = cell(CellKind::RealJordanOdd, 2, real(0.0), -1).ideal_gram();
        for i in 0..5 {
            for j in 0..5 {
                let expect = if i + j == 4 { -1.0 } else { 0.0 };
                assert_eq!(g[(i, j)], real(expect));
            }
        }
    }
}
