//! The two clustering objectives, the entropy membership formula, the sigma
//! heuristic, and evaluation of center chromosomes.
//!
//! Compactness `f1 = sum_ij mu_ij * d2_ij` is minimized; membership entropy
//! `f2 = -sum_ij mu_ij * ln(mu_ij)` is maximized. Engines minimize the pair
//! `(g1, g2) = (f1, -f2)`.

use ndarray::Array2;
use serde::{Deserialize, Serialize};

use crate::data::{debug_check_membership_rows, Clustering, Dataset, Provenance};
use crate::error::{EcmError, Result};
use crate::scalar::Scalar;

/// Scale parameter of the entropy membership formula, in squared-distance
/// units.
#[derive(Debug, Clone, Copy)]
pub struct SigmaParam<S: Scalar> {
    pub sigma: S,
}

impl<S: Scalar> SigmaParam<S> {
    pub fn new(sigma: S) -> Result<Self> {
        if !sigma.is_finite() || sigma <= S::zero() {
            return Err(EcmError::InvalidParams(format!(
                "sigma must be a positive real, got {sigma}"
            )));
        }
        Ok(Self { sigma })
    }
}

/// How the squared distance enters the membership exponent.
///
/// The membership formula prints `exp(-d2)` while the experimental protocol
/// prescribes a per-dataset scale `sigma`; dividing `d2` by `sigma` keeps the
/// exponent dimensionless and is the default. The alternatives are kept as
/// options.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ExponentForm {
    #[default]
    D2OverSigma,
    D2OverSigmaSq,
    RawD2,
}

/// Squared Euclidean distances between every point and every center
/// (N x c).
pub fn pairwise_sq_dist<S: Scalar>(ds: &Dataset<S>, centers: &Array2<S>) -> Result<Array2<S>> {
    if ds.n_dims() != centers.ncols() {
        return Err(EcmError::DimensionMismatch(format!(
            "points have {} dims, centers have {}",
            ds.n_dims(),
            centers.ncols()
        )));
    }
    let n = ds.n_points();
    let c = centers.nrows();
    let mut d2 = Array2::zeros((n, c));
    for (i, x) in ds.points().rows().into_iter().enumerate() {
        for (j, v) in centers.rows().into_iter().enumerate() {
            let mut acc = S::zero();
            for (a, b) in x.iter().zip(v.iter()) {
                let diff = *a - *b;
                acc += diff * diff;
            }
            d2[(i, j)] = acc;
        }
    }
    Ok(d2)
}

/// Memberships `mu_ij = exp(-d2_ij/sigma) / sum_k exp(-d2_ik/sigma)`.
///
/// Computed with row-wise stabilization (the row minimum of `d2/sigma` is
/// subtracted before exponentiation), which leaves the normalized result
/// unchanged but keeps the largest exponent at zero.
pub fn entropy_memberships<S: Scalar>(d2: &Array2<S>, sp: SigmaParam<S>) -> Array2<S> {
    let mut mu = Array2::zeros(d2.raw_dim());
    for (i, row) in d2.rows().into_iter().enumerate() {
        let mut min_e = S::infinity();
        for &v in row {
            let e = v / sp.sigma;
            if e < min_e {
                min_e = e;
            }
        }
        let mut sum = S::zero();
        for (j, &v) in row.iter().enumerate() {
            let w = (-(v / sp.sigma - min_e)).exp();
            mu[(i, j)] = w;
            sum += w;
        }
        for j in 0..row.len() {
            mu[(i, j)] = mu[(i, j)] / sum;
        }
    }
    debug_check_membership_rows(&mu);
    mu
}

/// Cluster compactness `sum_ij mu_ij * d2_ij`.
pub fn objective_f1<S: Scalar>(d2: &Array2<S>, mu: &Array2<S>) -> S {
    d2.iter().zip(mu.iter()).map(|(&d, &m)| m * d).sum()
}

/// Membership entropy `-sum_ij mu_ij * ln(mu_ij)` with `0 ln 0 = 0`.
pub fn objective_f2<S: Scalar>(mu: &Array2<S>) -> S {
    mu.iter()
        .map(|&m| {
            if m > S::zero() {
                -(m * m.ln())
            } else {
                S::zero()
            }
        })
        .sum()
}

/// Scale heuristic: the population standard deviation of the squared
/// distances between each point and the dataset mean. Falls back to the mean
/// of those squared distances when the deviation is zero, and to 1 when that
/// is zero too.
pub fn sigma_heuristic<S: Scalar>(ds: &Dataset<S>) -> SigmaParam<S> {
    let n = ds.n_points();
    let d = ds.n_dims();
    let nf = S::of(n as f64);
    let mut mean = vec![S::zero(); d];
    for row in ds.points().rows() {
        for (m, &v) in mean.iter_mut().zip(row.iter()) {
            *m += v;
        }
    }
    for m in &mut mean {
        *m = *m / nf;
    }
    let sq: Vec<S> = ds
        .points()
        .rows()
        .into_iter()
        .map(|row| {
            let mut acc = S::zero();
            for (&v, &m) in row.iter().zip(mean.iter()) {
                let diff = v - m;
                acc += diff * diff;
            }
            acc
        })
        .collect();
    let sq_mean = sq.iter().copied().sum::<S>() / nf;
    let var = sq
        .iter()
        .map(|&s| {
            let dev = s - sq_mean;
            dev * dev
        })
        .sum::<S>()
        / nf;
    let std = var.sqrt();
    let sigma = if std > S::zero() {
        std
    } else if sq_mean > S::zero() {
        sq_mean
    } else {
        S::one()
    };
    SigmaParam { sigma }
}

/// An entropy c-means instance: normalized data, cluster count, membership
/// scale, and chromosome bounds. Evaluating a chromosome reshapes its genes
/// to `c` centers and scores the minimized pair `(f1, -f2)`.
#[derive(Debug, Clone)]
pub struct EcmProblem<S: Scalar> {
    data: Dataset<S>,
    c: usize,
    sigma: S,
    sigma_effective: S,
    form: ExponentForm,
    bounds: Vec<(S, S)>,
}

impl<S: Scalar> EcmProblem<S> {
    /// Builds the instance, deriving sigma from [`sigma_heuristic`] and gene
    /// bounds from the per-feature data range repeated for each center.
    pub fn new(ds: &Dataset<S>, c: usize, form: ExponentForm) -> Result<Self> {
        if c == 0 {
            return Err(EcmError::InvalidParams("c must be >= 1".into()));
        }
        if c > ds.n_points() {
            return Err(EcmError::InvalidParams(format!(
                "c = {c} exceeds the number of points {}",
                ds.n_points()
            )));
        }
        let sigma = sigma_heuristic(ds).sigma;
        let sigma_effective = match form {
            ExponentForm::D2OverSigma => sigma,
            ExponentForm::D2OverSigmaSq => sigma * sigma,
            ExponentForm::RawD2 => S::one(),
        };
        let per_dim = ds.feature_bounds();
        let bounds: Vec<(S, S)> = per_dim
            .iter()
            .cycle()
            .take(c * ds.n_dims())
            .copied()
            .collect();
        Ok(Self {
            data: ds.clone(),
            c,
            sigma,
            sigma_effective,
            form,
            bounds,
        })
    }

    pub fn c(&self) -> usize {
        self.c
    }

    pub fn data(&self) -> &Dataset<S> {
        &self.data
    }

    /// The heuristic sigma before the exponent-form adjustment.
    pub fn sigma(&self) -> S {
        self.sigma
    }

    /// The scale actually dividing `d2` in the exponent.
    pub fn sigma_effective(&self) -> S {
        self.sigma_effective
    }

    pub fn form(&self) -> ExponentForm {
        self.form
    }

    /// Per-gene box bounds (length `c * d`).
    pub fn bounds(&self) -> &[(S, S)] {
        &self.bounds
    }

    fn centers_from_genes(&self, genes: &[S]) -> Array2<S> {
        let d = self.data.n_dims();
        debug_assert_eq!(genes.len(), self.c * d);
        Array2::from_shape_vec((self.c, d), genes.to_vec()).expect("gene count matches c * d")
    }

    /// Memberships induced by the given centers.
    pub fn memberships(&self, centers: &Array2<S>) -> Result<Array2<S>> {
        let d2 = pairwise_sq_dist(&self.data, centers)?;
        Ok(entropy_memberships(
            &d2,
            SigmaParam {
                sigma: self.sigma_effective,
            },
        ))
    }

    /// Scores one chromosome; one call is one function evaluation against
    /// the budget.
    pub fn evaluate(&self, genes: &[S]) -> [S; 2] {
        let centers = self.centers_from_genes(genes);
        let d2 = pairwise_sq_dist(&self.data, &centers)
            .expect("centers reshaped from genes always match data dims");
        let mu = entropy_memberships(
            &d2,
            SigmaParam {
                sigma: self.sigma_effective,
            },
        );
        let f1 = objective_f1(&d2, &mu);
        let f2 = objective_f2(&mu);
        [f1, -f2]
    }

    /// Expands a chromosome into a full [`Clustering`].
    pub fn decode(&self, genes: &[S], provenance: Provenance) -> Clustering<S> {
        let centers = self.centers_from_genes(genes);
        let d2 = pairwise_sq_dist(&self.data, &centers)
            .expect("centers reshaped from genes always match data dims");
        let mu = entropy_memberships(
            &d2,
            SigmaParam {
                sigma: self.sigma_effective,
            },
        );
        let f1 = objective_f1(&d2, &mu);
        let f2 = objective_f2(&mu);
        Clustering {
            centers,
            memberships: mu,
            objectives: [f1, -f2],
            provenance,
        }
    }
}
