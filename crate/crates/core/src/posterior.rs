//! Bayesian linear regression over M outcomes with a shared design
//! covariance.
//!
//! All outcomes share one precision matrix `Σ` (initialized to `λI`, grown by
//! rank-1 updates `φφᵀ`), while each outcome keeps its own moment vector
//! `b_m` and posterior mean `μ_m = Σ⁻¹ b_m`. Sampling draws
//! `θ̃_m ~ N(μ_m, Σ⁻¹)` through a Cholesky factorization of `Σ` that can be
//! reused across users within a cohort timestep.

use nalgebra::{DMatrix, DVector};
use rand::Rng;
use rand_distr::StandardNormal;

use crate::error::{Error, Result};

/// A state-action feature vector of fixed dimension with finite entries.
#[derive(Debug, Clone, PartialEq)]
pub struct FeatureVector(DVector<f64>);

impl FeatureVector {
    pub fn new(values: Vec<f64>) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::invalid_argument("feature vector must be non-empty"));
        }
        if values.iter().any(|v| !v.is_finite()) {
            return Err(Error::invalid_argument(
                "feature vector entries must be finite",
            ));
        }
        Ok(FeatureVector(DVector::from_vec(values)))
    }

    pub fn from_slice(values: &[f64]) -> Result<Self> {
        Self::new(values.to_vec())
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn get(&self, index: usize) -> Option<f64> {
        self.0.get(index).copied()
    }

    pub fn as_slice(&self) -> &[f64] {
        self.0.as_slice()
    }

    pub(crate) fn inner(&self) -> &DVector<f64> {
        &self.0
    }

    pub fn dot(&self, other: &DVector<f64>) -> f64 {
        self.0.dot(other)
    }
}

/// One sampled parameter vector per outcome.
#[derive(Debug, Clone)]
pub struct ParameterDraw {
    thetas: Vec<DVector<f64>>,
}

impl ParameterDraw {
    pub fn num_outcomes(&self) -> usize {
        self.thetas.len()
    }

    pub fn theta(&self, outcome: usize) -> &[f64] {
        self.thetas[outcome].as_slice()
    }

    /// Sampled outcome `ỹ_m = φᵀθ̃_m`.
    pub fn predict(&self, phi: &FeatureVector, outcome: usize) -> Result<f64> {
        let theta = self
            .thetas
            .get(outcome)
            .ok_or_else(|| Error::invalid_argument(format!("outcome index {outcome} out of range")))?;
        if theta.len() != phi.dim() {
            return Err(Error::invalid_argument(format!(
                "feature dimension {} does not match draw dimension {}",
                phi.dim(),
                theta.len()
            )));
        }
        Ok(phi.dot(theta))
    }

    /// Sampled outcome vector `[ỹ_1, …, ỹ_M]` for one feature vector.
    pub fn predict_all(&self, phi: &FeatureVector) -> Result<Vec<f64>> {
        (0..self.thetas.len()).map(|m| self.predict(phi, m)).collect()
    }
}

/// Reusable sampler for `θ̃_m ~ N(μ_m, Σ⁻¹)`.
///
/// Holds the Cholesky factor `L` of `Σ` so one factorization serves every
/// draw: for `z ~ N(0, I)`, `μ + L⁻ᵀ z` has covariance `(L Lᵀ)⁻¹ = Σ⁻¹`.
pub struct PosteriorSampler {
    means: Vec<DVector<f64>>,
    l_transpose: DMatrix<f64>,
}

impl PosteriorSampler {
    pub fn draw<R: Rng + ?Sized>(&self, rng: &mut R) -> ParameterDraw {
        let d = self.l_transpose.nrows();
        let thetas = self
            .means
            .iter()
            .map(|mu| {
                let z = DVector::from_fn(d, |_, _| rng.sample::<f64, _>(StandardNormal));
                let noise = self
                    .l_transpose
                    .solve_upper_triangular(&z)
                    .expect("Cholesky factor has positive diagonal");
                mu + noise
            })
            .collect();
        ParameterDraw { thetas }
    }
}

/// Shared Gaussian posterior state for all M outcomes.
#[derive(Debug, Clone)]
pub struct OutcomePosterior {
    dim: usize,
    num_outcomes: usize,
    precision: DMatrix<f64>,
    b: Vec<DVector<f64>>,
    mean: Vec<DVector<f64>>,
    prior_precision: f64,
    noise_variance: f64,
}

impl OutcomePosterior {
    /// Start from the prior `N(0, λ⁻¹I)`: `Σ = λI`, `b_m = 0`, `μ_m = 0`.
    pub fn new(dim: usize, num_outcomes: usize, prior_precision: f64) -> Result<Self> {
        if dim == 0 {
            return Err(Error::invalid_argument("dimension must be positive"));
        }
        if num_outcomes == 0 {
            return Err(Error::invalid_argument(
                "number of outcomes must be positive",
            ));
        }
        if !(prior_precision.is_finite() && prior_precision > 0.0) {
            return Err(Error::invalid_argument(
                "prior precision must be positive and finite",
            ));
        }
        Ok(OutcomePosterior {
            dim,
            num_outcomes,
            precision: DMatrix::identity(dim, dim) * prior_precision,
            b: vec![DVector::zeros(dim); num_outcomes],
            mean: vec![DVector::zeros(dim); num_outcomes],
            prior_precision,
            noise_variance: 1.0,
        })
    }

    /// Override the likelihood noise variance σ² (default 1). Updates scale
    /// as `Σ += φφᵀ/σ²` and `b_m += φ y_m/σ²`.
    pub fn with_noise_variance(mut self, noise_variance: f64) -> Result<Self> {
        if !(noise_variance.is_finite() && noise_variance > 0.0) {
            return Err(Error::invalid_argument(
                "noise variance must be positive and finite",
            ));
        }
        self.noise_variance = noise_variance;
        Ok(self)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn num_outcomes(&self) -> usize {
        self.num_outcomes
    }

    pub fn prior_precision(&self) -> f64 {
        self.prior_precision
    }

    pub fn precision(&self) -> &DMatrix<f64> {
        &self.precision
    }

    pub fn mean(&self, outcome: usize) -> &[f64] {
        self.mean[outcome].as_slice()
    }

    pub fn moment(&self, outcome: usize) -> &[f64] {
        self.b[outcome].as_slice()
    }

    fn check_phi(&self, phi: &FeatureVector) -> Result<()> {
        if phi.dim() != self.dim {
            return Err(Error::invalid_argument(format!(
                "feature dimension {} does not match posterior dimension {}",
                phi.dim(),
                self.dim
            )));
        }
        Ok(())
    }

    /// Ingest one observation: `Σ += φφᵀ`, `b_m += φ y_m`, `μ_m = Σ⁻¹ b_m`
    /// (scaled by 1/σ² when a non-unit noise variance is configured).
    pub fn update(&mut self, phi: &FeatureVector, y: &[f64]) -> Result<()> {
        self.check_phi(phi)?;
        if y.len() != self.num_outcomes {
            return Err(Error::invalid_argument(format!(
                "outcome vector length {} does not match outcome count {}",
                y.len(),
                self.num_outcomes
            )));
        }
        if y.iter().any(|v| !v.is_finite()) {
            return Err(Error::invalid_argument("outcomes must be finite"));
        }
        let inv_var = 1.0 / self.noise_variance;
        let x = phi.inner();
        self.precision.ger(inv_var, x, x, 1.0);
        for (bm, ym) in self.b.iter_mut().zip(y) {
            bm.axpy(ym * inv_var, x, 1.0);
        }
        let chol = nalgebra::Cholesky::new(self.precision.clone())
            .ok_or_else(|| Error::Numerical("posterior precision lost positive definiteness".into()))?;
        for (mu, bm) in self.mean.iter_mut().zip(&self.b) {
            *mu = chol.solve(bm);
        }
        Ok(())
    }

    /// Posterior-mean prediction `[φᵀμ_1, …, φᵀμ_M]`.
    pub fn predict_mean(&self, phi: &FeatureVector) -> Result<Vec<f64>> {
        self.check_phi(phi)?;
        Ok(self.mean.iter().map(|mu| phi.dot(mu)).collect())
    }

    /// Factor `Σ` once for reuse across draws (one factorization per cohort
    /// timestep under parallel assignment).
    pub fn sampler(&self) -> Result<PosteriorSampler> {
        let chol = nalgebra::Cholesky::new(self.precision.clone())
            .ok_or_else(|| Error::Numerical("posterior precision is not positive definite".into()))?;
        Ok(PosteriorSampler {
            means: self.mean.clone(),
            l_transpose: chol.l().transpose(),
        })
    }

    /// Draw `θ̃_m ~ N(μ_m, Σ⁻¹)` for every outcome, factoring Σ for this call.
    pub fn sample_params<R: Rng + ?Sized>(&self, rng: &mut R) -> Result<ParameterDraw> {
        Ok(self.sampler()?.draw(rng))
    }
}
