//! JSON encoders for library results.

use krein::canonical::{triangle_sizing, CanonicalCell, Decomposition, RECONSTRUCTION_TOL, GRAM_TOL};
use krein::classify::AlgebraicType;
use krein::operator::{HermiticityReport, Operator};
use krein::Tolerances;
use serde_json::Value;

use crate::json::{self, complex, int, num, object};

pub fn tolerances(t: &Tolerances) -> Value {
    object([
        ("cluster", num(t.cluster)),
        ("real_axis", num(t.real_axis)),
        ("rank", num(t.rank)),
        ("defect", num(t.defect)),
        ("hermitian", num(t.hermitian)),
    ])
}

pub fn hermiticity(r: &HermiticityReport) -> Value {
    object([
        ("is_pseudo_hermitian", Value::from(r.is_pseudo_hermitian)),
        ("residual", json::checked(r.residual, r.tolerance)),
    ])
}

pub fn algebraic_type(t: &AlgebraicType) -> Value {
    let p = &t.parameters;
    let (k, l) = t.label.signature();
    let eigenvalues = p
        .eigenvalues
        .iter()
        .map(|e| {
            object([
                ("value", complex(e.value)),
                ("multiplicity", int(e.multiplicity)),
                ("chain_lengths", Value::from(e.chain_lengths.clone())),
            ])
        })
        .collect();
    let eigenvector_signs = p
        .eigenvector_signs
        .iter()
        .map(|&(x, s)| object([("eigenvalue", num(x)), ("sign", Value::from(s))]))
        .collect();
    let chain_signs = p
        .chain_signs
        .iter()
        .map(|&(x, q, s)| object([("eigenvalue", num(x)), ("chain_length", int(q)), ("sign", Value::from(s))]))
        .collect();
    object([
        ("label", Value::from(t.label.code())),
        ("name", Value::from(t.label.name())),
        ("signature", Value::from(vec![k, l])),
        (
            "parameters",
            object([
                ("eigenvalues", Value::Array(eigenvalues)),
                ("triangle_sizes", Value::from(p.triangle_sizes.clone())),
                ("real_chain_lengths", Value::from(p.real_chain_lengths.clone())),
                ("eigenvector_signs", Value::Array(eigenvector_signs)),
                ("chain_signs", Value::Array(chain_signs)),
                ("degeneracy", p.degeneracy.clone().map_or(Value::Null, Value::from)),
            ]),
        ),
    ])
}

fn cell(c: &CanonicalCell) -> Value {
    let vectors = |vs: &[krein::space::KreinVector]| Value::Array(vs.iter().map(|v| json::vector(&v.0)).collect());
    object([
        ("kind", Value::from(c.kind.name())),
        ("lambda", complex(c.lambda)),
        ("s", int(c.s)),
        ("dim", int(c.dim())),
        ("overall_sign", Value::from(c.overall_sign)),
        ("signs", Value::from(c.leg.signs.clone())),
        ("e_sign", c.leg.e_sign.map_or(Value::Null, Value::from)),
        ("v", vectors(&c.leg.v)),
        ("vt", vectors(&c.leg.vt)),
        ("e", c.leg.e.as_ref().map_or(Value::Null, |e| json::vector(&e.0))),
    ])
}

pub fn decomposition(a: &Operator, d: &Decomposition) -> Value {
    let sizing = d
        .cells
        .iter()
        .filter_map(|c| triangle_sizing(a, c))
        .map(|t| {
            object([
                ("s", int(t.s)),
                ("q_pow_2s", num(t.q_pow_2s)),
                ("qdag_pow_2s", num(t.qdag_pow_2s)),
                ("q_pow_2s_minus_1", num(t.q_pow_2s_minus_1)),
                ("mixed_pow_s", num(t.mixed_pow_s)),
                ("mixed_pow_s_minus_1", num(t.mixed_pow_s_minus_1)),
            ])
        })
        .collect();
    object([
        ("cells", Value::Array(d.cells.iter().map(cell).collect())),
        ("basis", json::matrix(&d.basis)),
        ("gram_pattern", json::matrix(&d.gram_pattern)),
        ("canonical_matrix", json::matrix(&d.canonical_matrix())),
        ("condition", num(d.condition)),
        ("residual", json::checked(d.residual, RECONSTRUCTION_TOL)),
        ("orthogonality_defect", json::checked(d.orthogonality_defect, GRAM_TOL)),
        ("leg_defect", json::checked(d.leg_defect, GRAM_TOL)),
        ("null_pairs", int(d.null_pairs())),
        ("pontriagin_r", int(d.metric.signature().pontriagin_r)),
        ("triangle_sizing", Value::Array(sizing)),
    ])
}
