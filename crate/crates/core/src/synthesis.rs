//! Pseudo-hermitian operators of prescribed canonical structure.

use std::sync::Arc;

use num_complex::Complex64;

use crate::canonical::{cell_terms, evaluate_terms, CellKind, Slot};
use crate::classify::TypeLabel;
use crate::error::{KreinError, Result};
use crate::linalg::{self, CMatrix, CVector};
use crate::operator::Operator;
use crate::rng;
use crate::space::Metric;

pub const DEFAULT_MAX_CONDITION: f64 = 100.0;
const MAX_REJECTIONS: usize = 64;

/// A metric-preserving operator with its 2-norm condition number.
#[derive(Debug, Clone)]
pub struct GUnitary {
    pub operator: Operator,
    pub condition: f64,
    /// Number of generator draws rejected on condition before acceptance.
    pub rejections: usize,
}

/// `U = exp(i H^{-1} K)` for a random Hermitian `K` with entries of size
/// `spread`; satisfies `U^H H U = H`. Draws are repeated (continuing the same
/// stream) while the condition number exceeds `max_condition`.
pub fn random_g_unitary(metric: &Arc<Metric>, seed: u64, spread: f64, max_condition: f64) -> Result<GUnitary> {
    if !(spread >= 0.0) || !spread.is_finite() {
        return Err(KreinError::input(format!("spread must be non-negative, got {spread}")));
    }
    if !(max_condition >= 1.0) {
        return Err(KreinError::input(format!("max_condition must be at least 1, got {max_condition}")));
    }
    let n = metric.dim();
    let mut rng = rng::stream(seed, rng::STREAM_G_UNITARY);
    for rejections in 0..MAX_REJECTIONS {
        let mut k = CMatrix::zeros(n, n);
        for i in 0..n {
            k[(i, i)] = linalg::real(spread * rng::normal(&mut rng));
            for j in (i + 1)..n {
                let z = rng::complex_normal(&mut rng) * (spread * std::f64::consts::FRAC_1_SQRT_2);
                k[(i, j)] = z;
                k[(j, i)] = z.conj();
            }
        }
        let generator = metric.inverse() * k * linalg::I;
        let u = if spread == 0.0 { CMatrix::identity(n, n) } else { generator.exp() };
        let condition = linalg::condition(&u);
        if condition <= max_condition {
            let operator = Operator::new(u, Arc::clone(metric))?;
            return Ok(GUnitary { operator, condition, rejections });
        }
    }
    Err(KreinError::numerical(format!(
        "{MAX_REJECTIONS} consecutive G-unitary draws exceeded condition {max_condition}; use a smaller spread"
    )))
}

/// Inverse of a G-unitary: `H^{-1} U^H H`.
pub fn g_unitary_inverse(u: &Operator) -> CMatrix {
    u.metric().inverse() * u.matrix().adjoint() * u.metric().form()
}

/// One requested canonical cell.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CellSpec {
    pub kind: CellKind,
    /// Real eigenvalue, or `α + iβ` with `β > 0` for a triangle.
    pub lambda: Complex64,
    /// Half-length; ignored for `SimpleReal`.
    pub s: usize,
    /// `ε` of the null leg, or `η = <e, e>` for a simple cell. Ignored for triangles.
    pub sign: i8,
}

impl CellSpec {
    pub fn simple(lambda: f64, sign: i8) -> Self {
        CellSpec { kind: CellKind::SimpleReal, lambda: linalg::real(lambda), s: 0, sign }
    }

    pub fn even(lambda: f64, s: usize, sign: i8) -> Self {
        CellSpec { kind: CellKind::RealJordanEven, lambda: linalg::real(lambda), s, sign }
    }

    pub fn odd(lambda: f64, s: usize, sign: i8) -> Self {
        CellSpec { kind: CellKind::RealJordanOdd, lambda: linalg::real(lambda), s, sign }
    }

    pub fn triangle(alpha: f64, beta: f64, s: usize) -> Self {
        CellSpec { kind: CellKind::ComplexTriangle, lambda: Complex64::new(alpha, beta), s, sign: 1 }
    }

    pub fn dim(&self) -> usize {
        self.kind.dim(self.s)
    }

    fn validate(&self) -> Result<()> {
        if !(self.lambda.re.is_finite() && self.lambda.im.is_finite()) {
            return Err(KreinError::input(format!("cell eigenvalue {} is not finite", self.lambda)));
        }
        if self.kind != CellKind::SimpleReal && self.s == 0 {
            return Err(KreinError::input(format!("{} cell needs s >= 1", self.kind.name())));
        }
        match self.kind {
            CellKind::ComplexTriangle if !(self.lambda.im > 0.0) => {
                Err(KreinError::input(format!("triangle cell needs Im λ > 0, got {}", self.lambda)))
            }
            CellKind::ComplexTriangle => Ok(()),
            _ if self.lambda.im != 0.0 => Err(KreinError::input(format!("real cell with complex λ = {}", self.lambda))),
            _ if self.sign != 1 && self.sign != -1 => Err(KreinError::input(format!("cell sign must be ±1, got {}", self.sign))),
            _ => Ok(()),
        }
    }
}

/// Free parameters of a catalog type. Eigenvalues are consumed in order of
/// appearance in the type's cell list; `signs` are the leg signs of its real
/// Jordan cells.
#[derive(Debug, Clone, PartialEq)]
pub struct TypeParameters {
    pub alpha: Vec<f64>,
    pub beta: Vec<f64>,
    pub lambda: Vec<f64>,
    pub signs: Vec<i8>,
}

impl TypeParameters {
    /// Defaults `α = 1, 3`, `β = 2, 4`, `λ = 1, 2, 3, 4`, leg signs `+`
    /// (`-` where the signature forces it).
    pub fn defaults(label: TypeLabel) -> Self {
        let signs = match label {
            TypeLabel::L4 => vec![-1],
            TypeLabel::L3 | TypeLabel::K3 | TypeLabel::K7 | TypeLabel::K8 | TypeLabel::K9 => vec![1],
            TypeLabel::K6 => vec![1, 1],
            _ => vec![],
        };
        TypeParameters { alpha: vec![1.0, 3.0], beta: vec![2.0, 4.0], lambda: vec![1.0, 2.0, 3.0, 4.0], signs }
    }
}

/// Cell list realizing a type. Simple cells take the signs left over by the
/// chain and triangle cells, positive first.
pub fn cells_for_type(label: TypeLabel, p: &TypeParameters) -> Result<Vec<CellSpec>> {
    let need = |what: &str, have: usize, n: usize| {
        if have < n {
            Err(KreinError::input(format!("type {} needs {n} {what} parameter(s), got {have}", label.code())))
        } else {
            Ok(())
        }
    };
    let (n_pairs, n_lambda, n_signs) = match label {
        TypeLabel::L1 => (1, 2, 0),
        TypeLabel::L2 | TypeLabel::K5 => (0, 4, 0),
        TypeLabel::L3 | TypeLabel::K7 => (0, 3, 1),
        TypeLabel::L4 | TypeLabel::K8 => (0, 2, 1),
        TypeLabel::K1 => (1, 0, 0),
        TypeLabel::K2 => (2, 0, 0),
        TypeLabel::K3 => (1, 1, 1),
        TypeLabel::K4 => (1, 2, 0),
        TypeLabel::K6 => (0, 2, 2),
        TypeLabel::K9 => (0, 1, 1),
    };
    need("alpha", p.alpha.len(), n_pairs)?;
    need("beta", p.beta.len(), n_pairs)?;
    need("lambda", p.lambda.len(), n_lambda)?;
    need("sign", p.signs.len(), n_signs)?;
    let (a, b, l, sg) = (&p.alpha, &p.beta, &p.lambda, &p.signs);
    let sig = label.signature();
    let mut cells = match label {
        TypeLabel::L1 | TypeLabel::K4 => vec![CellSpec::triangle(a[0], b[0], 1)],
        TypeLabel::K1 => vec![CellSpec::triangle(a[0], b[0], 2)],
        TypeLabel::K2 => vec![CellSpec::triangle(a[0], b[0], 1), CellSpec::triangle(a[1], b[1], 1)],
        TypeLabel::K3 => vec![CellSpec::triangle(a[0], b[0], 1), CellSpec::even(l[0], 1, sg[0])],
        TypeLabel::L3 | TypeLabel::K7 => vec![CellSpec::even(l[0], 1, sg[0])],
        TypeLabel::L4 | TypeLabel::K8 => vec![CellSpec::odd(l[0], 1, sg[0])],
        TypeLabel::K6 => vec![CellSpec::even(l[0], 1, sg[0]), CellSpec::even(l[1], 1, sg[1])],
        TypeLabel::K9 => vec![CellSpec::even(l[0], 2, sg[0])],
        TypeLabel::L2 | TypeLabel::K5 => vec![],
    };
    let simple_lambdas: &[f64] = match label {
        TypeLabel::L1 | TypeLabel::K4 => &l[0..2],
        TypeLabel::L2 | TypeLabel::K5 => &l[0..4],
        TypeLabel::L3 | TypeLabel::K7 => &l[1..3],
        TypeLabel::L4 | TypeLabel::K8 => &l[1..2],
        _ => &[],
    };
    let mut pos = sig.0;
    for c in &cells {
        let (dp, dn) = cell_axes(c);
        if dp > pos || dn > sig.1 {
            return Err(KreinError::input(format!("cell {:?} does not fit signature {sig:?}", c.kind)));
        }
        pos -= dp;
    }
    for &lam in simple_lambdas {
        let sign = if pos > 0 {
            pos -= 1;
            1
        } else {
            -1
        };
        cells.push(CellSpec::simple(lam, sign));
    }
    Ok(cells)
}

/// Number of (positive, negative) axes a cell occupies.
fn cell_axes(c: &CellSpec) -> (usize, usize) {
    let s = c.s;
    match c.kind {
        CellKind::SimpleReal => if c.sign > 0 { (1, 0) } else { (0, 1) },
        CellKind::RealJordanEven | CellKind::ComplexTriangle => (s, s),
        CellKind::RealJordanOdd => if c.sign > 0 { (s + 1, s) } else { (s, s + 1) },
    }
}

/// What to synthesize.
#[derive(Debug, Clone, PartialEq)]
pub enum SynthesisTarget {
    Type { label: TypeLabel, parameters: TypeParameters },
    Cells(Vec<CellSpec>),
}

#[derive(Debug, Clone, PartialEq)]
pub struct SynthesisSpec {
    pub target: SynthesisTarget,
    pub seed: u64,
    pub max_condition: f64,
    pub spread: f64,
}

impl SynthesisSpec {
    pub fn new(target: SynthesisTarget, seed: u64) -> Self {
        SynthesisSpec { target, seed, max_condition: DEFAULT_MAX_CONDITION, spread: 1.0 }
    }

    pub fn for_type(label: TypeLabel, seed: u64) -> Self {
        Self::new(SynthesisTarget::Type { label, parameters: TypeParameters::defaults(label) }, seed)
    }

    pub fn cells(&self) -> Result<Vec<CellSpec>> {
        match &self.target {
            SynthesisTarget::Type { label, parameters } => cells_for_type(*label, parameters),
            SynthesisTarget::Cells(c) => Ok(c.clone()),
        }
    }
}

/// Hands out metric-adapted axes: null pairs as `(f₊ ± f₋)/√2` on one
/// positive and one negative axis, unit vectors on a single axis.
pub(crate) struct AxisAllocator {
    positive: std::vec::IntoIter<CVector>,
    negative: std::vec::IntoIter<CVector>,
}

impl AxisAllocator {
    pub(crate) fn new(metric: &Metric) -> Self {
        let b = metric.adapted_basis();
        AxisAllocator { positive: b.positive.into_iter(), negative: b.negative.into_iter() }
    }

    pub(crate) fn unit(&mut self, sign: i8) -> Result<CVector> {
        let axis = if sign > 0 { self.positive.next() } else { self.negative.next() };
        axis.ok_or_else(|| {
            KreinError::input(format!("no {} axis left in the metric", if sign > 0 { "positive" } else { "negative" }))
        })
    }

    /// `(v, ṽ)` with `<v, ṽ> = sign`.
    pub(crate) fn null_pair(&mut self, sign: i8) -> Result<(CVector, CVector)> {
        let p = self.unit(1)?;
        let m = self.unit(-1)?;
        let r = linalg::real(std::f64::consts::FRAC_1_SQRT_2);
        Ok(((&p + &m) * r, (&p - &m) * r * linalg::real(f64::from(sign))))
    }
}

/// Block canonical matrix of `cells` in the standard basis, before conjugation.
pub fn canonical_operator(cells: &[CellSpec], metric: &Arc<Metric>) -> Result<Operator> {
    let n = metric.dim();
    let total: usize = cells.iter().map(CellSpec::dim).sum();
    if total != n {
        return Err(KreinError::input(format!("cell dimensions sum to {total}, metric dimension is {n}")));
    }
    let pairs: usize = cells.iter().map(|c| if c.kind == CellKind::SimpleReal { 0 } else { c.s }).sum();
    let r = metric.signature().pontriagin_r;
    if pairs > r {
        return Err(KreinError::input(format!("cells need {pairs} null pairs, the metric admits {r}")));
    }
    let mut axes = AxisAllocator::new(metric);
    let mut c = CMatrix::zeros(n, n);
    for cell in cells {
        cell.validate()?;
        let sign = if cell.kind == CellKind::ComplexTriangle { 1 } else { cell.sign };
        let mut v = Vec::new();
        let mut vt = Vec::new();
        for _ in 0..cell.s {
            let (a, b) = axes.null_pair(sign)?;
            v.push(a);
            vt.push(b);
        }
        let e = match cell.kind {
            CellKind::SimpleReal | CellKind::RealJordanOdd => Some(axes.unit(sign)?),
            _ => None,
        };
        let realize = |slot: Slot| match slot {
            Slot::V(j) => v[j].clone(),
            Slot::Vt(j) => vt[j].clone(),
            Slot::E => e.clone().expect("slot list matches kind"),
        };
        c += evaluate_terms(&cell_terms(cell.kind, cell.s, cell.lambda, f64::from(sign)), &realize, metric.form());
    }
    Operator::new(c, Arc::clone(metric))
}

/// `U C U^{-1}` for the canonical matrix `C` of `spec` and a random
/// G-unitary `U` drawn from its seed.
pub fn synthesize(spec: &SynthesisSpec, metric: &Arc<Metric>) -> Result<Operator> {
    if let SynthesisTarget::Type { label, .. } = &spec.target {
        let sig = metric.signature();
        if (sig.k, sig.l) != label.signature() {
            return Err(KreinError::input(format!(
                "type {} needs signature {:?}, metric has ({}, {})",
                label.code(),
                label.signature(),
                sig.k,
                sig.l
            )));
        }
    }
    let c = canonical_operator(&spec.cells()?, metric)?;
    let u = random_g_unitary(metric, spec.seed, spec.spread, spec.max_condition)?;
    let m = u.operator.matrix() * c.matrix() * g_unitary_inverse(&u.operator);
    Operator::new(m, Arc::clone(metric))
}
