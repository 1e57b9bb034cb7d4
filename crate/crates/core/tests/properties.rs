use std::sync::Arc;

use krein::canonical::{chain_orthogonality, decompose, CellKind};
use krein::classify::{classify_dim4, TypeLabel};
use krein::linalg::{self, real, CMatrix, CVector};
use krein::operator::{adjoint, dyad, hermiticity_residual, Operator};
use krein::rng;
use krein::space::{inner_product, signature, KreinVector, Metric};
use krein::spectral::Spectrum;
use krein::synthesis::{g_unitary_inverse, random_g_unitary, SynthesisSpec};
use krein::Tolerances;
use num_complex::Complex64;
use proptest::prelude::*;
use rand_chacha::ChaCha8Rng;

fn gaussian_matrix(g: &mut ChaCha8Rng, r: usize, c: usize) -> CMatrix {
    CMatrix::from_fn(r, c, |_, _| rng::complex_normal(g))
}

fn gaussian_vector(g: &mut ChaCha8Rng, n: usize) -> KreinVector {
    KreinVector(CVector::from_fn(n, |_, _| rng::complex_normal(g)))
}

/// Congruent image `S^H D S` of a diagonal sign matrix with `k` plus signs,
/// `S = I + small gaussian` to keep it well conditioned.
fn random_metric(g: &mut ChaCha8Rng, k: usize, n: usize) -> Metric {
    let d = CMatrix::from_diagonal(&CVector::from_fn(n, |i, _| real(if i < k { 1.0 } else { -1.0 })));
    let s = CMatrix::identity(n, n) + gaussian_matrix(g, n, n) * real(0.2);
    Metric::from_matrix(s.adjoint() * d * &s).unwrap()
}

fn label_strategy() -> impl Strategy<Value = TypeLabel> {
    prop::sample::select(TypeLabel::all().collect::<Vec<_>>())
}

fn metric_for(label: TypeLabel) -> Arc<Metric> {
    let (k, l) = label.signature();
    Arc::new(Metric::with_signature(k, l).unwrap())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn inner_product_axioms(seed in any::<u64>(), n in 2usize..=8, k in 0usize..=8) {
        let k = k.min(n);
        let mut g = rng::stream(seed, 100);
        let m = random_metric(&mut g, k, n);
        let (x, y, z) = (gaussian_vector(&mut g, n), gaussian_vector(&mut g, n), gaussian_vector(&mut g, n));
        let (a, b) = (rng::complex_normal(&mut g), rng::complex_normal(&mut g));
        let h = linalg::norm2(m.form());
        let xy = inner_product(&m, &x, &y).unwrap();
        let yx = inner_product(&m, &y, &x).unwrap();
        prop_assert!((xy - yx.conj()).norm() <= 1e-11 * h * x.0.norm() * y.0.norm());
        let comb = KreinVector(&y.0 * a + &z.0 * b);
        let lin = inner_product(&m, &x, &comb).unwrap() - (xy * a + inner_product(&m, &x, &z).unwrap() * b);
        prop_assert!(lin.norm() <= 1e-11 * h * x.0.norm() * comb.0.norm().max(y.0.norm() + z.0.norm()));
        prop_assert_eq!(signature(&m).k, k);
        prop_assert_eq!(signature(&m).l, n - k);
    }

    #[test]
    fn adjoint_laws(seed in any::<u64>(), n in 2usize..=6, k in 0usize..=6) {
        let mut g = rng::stream(seed, 101);
        let m = Arc::new(random_metric(&mut g, k.min(n), n));
        let a = Operator::new(gaussian_matrix(&mut g, n, n), Arc::clone(&m)).unwrap();
        let b = Operator::new(gaussian_matrix(&mut g, n, n), Arc::clone(&m)).unwrap();
        let scale = a.frobenius() * b.frobenius() * linalg::condition(m.form());
        prop_assert!((adjoint(&adjoint(&a)).matrix() - a.matrix()).norm() <= 1e-11 * a.frobenius() * linalg::condition(m.form()).powi(2));
        let ab = a.compose(&b).unwrap();
        let rhs = adjoint(&b).compose(&adjoint(&a)).unwrap();
        prop_assert!((adjoint(&ab).matrix() - rhs.matrix()).norm() <= 1e-11 * scale * linalg::condition(m.form()));
        let (x, y) = (gaussian_vector(&mut g, n), gaussian_vector(&mut g, n));
        let lhs = inner_product(&m, &x, &a.apply(&y).unwrap()).unwrap();
        let rhs = inner_product(&m, &adjoint(&a).apply(&x).unwrap(), &y).unwrap();
        prop_assert!((lhs - rhs).norm() <= 1e-11 * a.frobenius() * x.0.norm() * y.0.norm() * linalg::norm2(m.form()) * linalg::condition(m.form()));
        let (u, v) = (gaussian_vector(&mut g, n), gaussian_vector(&mut g, n));
        let uv = dyad(&u, &v, &m).unwrap();
        let vu = dyad(&v, &u, &m).unwrap();
        prop_assert!((adjoint(&uv).matrix() - vu.matrix()).norm() <= 1e-11 * vu.frobenius() * linalg::condition(m.form()));
    }

    #[test]
    fn g_unitaries_preserve_the_metric(seed in any::<u64>(), n in 2usize..=6, k in 0usize..=6) {
        let m = Arc::new(Metric::with_signature(k.min(n), n - k.min(n)).unwrap());
        let u = random_g_unitary(&m, seed, 1.0, 100.0).unwrap();
        let um = u.operator.matrix();
        let defect = (um.adjoint() * m.form() * um - m.form()).norm() / linalg::norm2(um).powi(2);
        prop_assert!(defect <= 1e-10);
        prop_assert!(u.condition <= 100.0);
        let det = um.determinant().norm();
        prop_assert!((1.0 / 100.0..=100.0).contains(&det));
    }

    #[test]
    fn synthesis_is_pseudo_hermitian_and_deterministic(label in label_strategy(), seed in any::<u64>()) {
        let m = metric_for(label);
        let a = krein::synthesis::synthesize(&SynthesisSpec::for_type(label, seed), &m).unwrap();
        let b = krein::synthesis::synthesize(&SynthesisSpec::for_type(label, seed), &m).unwrap();
        prop_assert!(hermiticity_residual(&a) <= 1e-9);
        prop_assert_eq!(a.matrix(), b.matrix());
    }

    #[test]
    fn synthesized_spectrum_matches_cells(label in label_strategy(), seed in any::<u64>()) {
        let m = metric_for(label);
        let spec = SynthesisSpec::for_type(label, seed);
        let a = krein::synthesis::synthesize(&spec, &m).unwrap();
        let s = Spectrum::analyze(&a, &Tolerances::default()).unwrap();
        let mut want: Vec<Complex64> = Vec::new();
        for c in spec.cells().unwrap() {
            want.push(c.lambda);
            if c.kind == CellKind::ComplexTriangle {
                want.push(c.lambda.conj());
            }
        }
        let got: Vec<Complex64> = s.clusters().iter().map(|c| c.value).collect();
        let dist = |p: &Complex64, set: &[Complex64]| set.iter().map(|q| (p - q).norm()).fold(f64::INFINITY, f64::min);
        let hausdorff = got.iter().map(|p| dist(p, &want)).chain(want.iter().map(|p| dist(p, &got))).fold(0.0, f64::max);
        prop_assert!(hausdorff <= 1e-6 * s.scale(), "hausdorff {hausdorff:e}");
        // conjugation closure with matching multiplicities
        for c in s.clusters().iter().filter(|c| !c.is_real) {
            let p = &s.clusters()[c.partner_index.unwrap()];
            prop_assert_eq!(p.multiplicity, c.multiplicity);
            prop_assert!((p.value - c.value.conj()).norm() <= 1e-6 * s.scale());
        }
    }

    #[test]
    fn decomposition_invariants(label in label_strategy(), seed in any::<u64>()) {
        let m = metric_for(label);
        let a = krein::synthesis::synthesize(&SynthesisSpec::for_type(label, seed), &m).unwrap();
        let d = decompose(&a, &Tolerances::default()).unwrap();
        prop_assert!(d.residual <= 1e-6);
        prop_assert!(d.null_pairs() <= m.signature().pontriagin_r);
        prop_assert!(d.orthogonality_defect <= 1e-8 && d.leg_defect <= 1e-8);
        let scale = a.frobenius().max(1.0);
        for (cell, range) in d.cells.iter().zip(d.cell_ranges()) {
            prop_assert!(chain_orthogonality(&a, cell) <= 1e-8 * scale);
            let block = d.gram_pattern.view((range.start, range.start), (range.len(), range.len())).into_owned();
            prop_assert!(linalg::singular_values(&block).last().copied().unwrap() > 1e-8);
        }
    }

    #[test]
    fn classification_is_similarity_invariant(label in label_strategy(), seed in any::<u64>(), other in any::<u64>()) {
        let m = metric_for(label);
        let tol = Tolerances::default();
        let a = krein::synthesis::synthesize(&SynthesisSpec::for_type(label, seed), &m).unwrap();
        let u = random_g_unitary(&m, other, 0.5, 100.0).unwrap();
        let moved = u.operator.matrix() * a.matrix() * g_unitary_inverse(&u.operator);
        let b = Operator::new(moved, Arc::clone(&m)).unwrap();
        prop_assert_eq!(classify_dim4(&a, &tol).unwrap().label, label);
        prop_assert_eq!(classify_dim4(&b, &tol).unwrap().label, label);
    }

    #[test]
    fn classification_is_scale_covariant(label in label_strategy(), seed in any::<u64>(), factor in prop_oneof![-3.0f64..-0.5, 0.5f64..3.0]) {
        let m = metric_for(label);
        let tol = Tolerances::default();
        let a = krein::synthesis::synthesize(&SynthesisSpec::for_type(label, seed), &m).unwrap();
        let t = classify_dim4(&a, &tol).unwrap();
        let ts = classify_dim4(&a.scale(real(factor)), &tol).unwrap();
        prop_assert_eq!(ts.label, t.label);
        prop_assert_eq!(&ts.parameters.real_chain_lengths, &t.parameters.real_chain_lengths);
        prop_assert_eq!(&ts.parameters.triangle_sizes, &t.parameters.triangle_sizes);
        let mut ev: Vec<f64> = t.parameters.eigenvalues.iter().map(|e| e.value.re * factor).collect();
        let mut evs: Vec<f64> = ts.parameters.eigenvalues.iter().map(|e| e.value.re).collect();
        ev.sort_by(f64::total_cmp);
        evs.sort_by(f64::total_cmp);
        for (x, y) in ev.iter().zip(&evs) {
            prop_assert!((x - y).abs() <= 1e-6 * a.frobenius());
        }
    }
}

#[test]
fn signature_is_congruence_invariant() {
    let mut g = rng::stream(5, 102);
    for n in 2..=6 {
        for k in 0..=n {
            let m = random_metric(&mut g, k, n);
            let s = gaussian_matrix(&mut g, n, n);
            let moved = Metric::from_matrix(s.adjoint() * m.form() * &s).unwrap();
            assert_eq!((signature(&moved).k, signature(&moved).l), (k, n - k));
        }
    }
}

#[test]
fn reconjugated_k6_keeps_its_two_clusters() {
    let m = metric_for(TypeLabel::K6);
    let a = krein::synthesis::synthesize(&SynthesisSpec::for_type(TypeLabel::K6, 5051404055583974835), &m).unwrap();
    let u = random_g_unitary(&m, 10251087067960340040, 0.5, 100.0).unwrap();
    let b = Operator::new(u.operator.matrix() * a.matrix() * g_unitary_inverse(&u.operator), Arc::clone(&m)).unwrap();
    assert!(b.frobenius() > 500.0);
    assert_eq!(classify_dim4(&b, &Tolerances::default()).unwrap().label, TypeLabel::K6);
}

#[test]
fn nearly_scalar_operators_classify() {
    use krein::synthesis::{SynthesisTarget, TypeParameters};
    for (label, lambda) in [(TypeLabel::K5, vec![2.0; 4]), (TypeLabel::L2, vec![2.0, 2.0, 2.0, 5.0])] {
        let m = metric_for(label);
        let mut parameters = TypeParameters::defaults(label);
        parameters.lambda = lambda;
        for seed in 0..40 {
            let spec = SynthesisSpec::new(SynthesisTarget::Type { label, parameters: parameters.clone() }, seed);
            let a = krein::synthesis::synthesize(&spec, &m).unwrap();
            assert_eq!(classify_dim4(&a, &Tolerances::default()).unwrap().label, label, "seed {seed}");
        }
    }
}
