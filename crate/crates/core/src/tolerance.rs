/// Numerical thresholds for spectral and canonical-form computations.
///
/// `cluster`, `real_axis` and `rank` are relative to
/// `scale = max(1, ||A||_F)`. `defect` is the backward-error level used to
/// widen the clustering radius for defective eigenvalues: a Jordan block of
/// size `m` perturbed at level `defect` spreads its eigenvalue over a disc of
/// radius about `defect^(1/m)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerances {
    pub cluster: f64,
    pub real_axis: f64,
    pub rank: f64,
    pub defect: f64,
    /// Admissible pseudo-hermiticity residual for inputs.
    pub hermitian: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances { cluster: 1e-6, real_axis: 1e-8, rank: 1e-8, defect: 1e-12, hermitian: 1e-8 }
    }
}

impl Tolerances {
    pub fn validate(&self) -> crate::Result<()> {
        for (name, v) in [
            ("cluster", self.cluster),
            ("real_axis", self.real_axis),
            ("rank", self.rank),
            ("defect", self.defect),
            ("hermitian", self.hermitian),
        ] {
            if !(v > 0.0 && v.is_finite()) {
                return Err(crate::KreinError::input(format!("tolerance {name} must be positive and finite, got {v}")));
            }
        }
        Ok(())
    }
}
