//! Alternating-optimization baselines: fuzzy c-means and maximum-entropy
//! inference clustering.
//!
//! Both alternate a membership update with a center update from seeded
//! random centers until the centers stop moving. The returned `Clustering`
//! records the compactness/entropy objective pair so baseline results live
//! in the same objective space as the multi-objective methods.

use ndarray::Array2;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::data::{Clustering, Dataset, Provenance};
use crate::error::{EcmError, Result};
use crate::fuzzy::{entropy_memberships, objective_f1, objective_f2, pairwise_sq_dist, SigmaParam};
use crate::scalar::Scalar;

/// Settings for the alternating-optimization fits. `m` is the FCM
/// fuzzifier and is ignored by MEI.
#[derive(Debug, Clone)]
pub struct AoParams {
    pub c: usize,
    pub m: f64,
    pub max_iter: usize,
    pub tol: f64,
    pub seed: u64,
}

impl Default for AoParams {
    fn default() -> Self {
        Self {
            c: 2,
            m: 2.0,
            max_iter: 5000,
            tol: 1e-16,
            seed: 1,
        }
    }
}

impl AoParams {
    fn validate<S: Scalar>(&self, ds: &Dataset<S>) -> Result<()> {
        if self.c == 0 || self.c > ds.n_points() {
            return Err(EcmError::InvalidParams(format!(
                "c must be in [1, {}], got {}",
                ds.n_points(),
                self.c
            )));
        }
        if self.m <= 1.0 || self.m.is_nan() {
            return Err(EcmError::InvalidParams(format!(
                "fuzzifier m must exceed 1, got {}",
                self.m
            )));
        }
        if self.tol <= 0.0 || self.tol.is_nan() || self.max_iter == 0 {
            return Err(EcmError::InvalidParams(
                "tol must be positive and max_iter nonzero".into(),
            ));
        }
        Ok(())
    }
}

/// FCM membership update: `mu_ij = 1 / sum_k (d2_ij / d2_ik)^(1/(m-1))`.
/// A row containing an exact zero distance goes crisp, with the mass split
/// equally over its zero-distance centers.
pub fn fcm_membership_update<S: Scalar>(d2: &Array2<S>, m: f64) -> Array2<S> {
    let e = S::of(1.0 / (m - 1.0));
    let c = d2.ncols();
    let mut mu = Array2::zeros(d2.raw_dim());
    for (i, row) in d2.rows().into_iter().enumerate() {
        let zeros: Vec<usize> = row
            .iter()
            .enumerate()
            .filter(|(_, &v)| v == S::zero())
            .map(|(j, _)| j)
            .collect();
        if !zeros.is_empty() {
            let share = S::one() / S::of(zeros.len() as f64);
            for j in zeros {
                mu[(i, j)] = share;
            }
            continue;
        }
        for j in 0..c {
            let mut sum = S::zero();
            for k in 0..c {
                sum += (row[j] / row[k]).powf(e);
            }
            mu[(i, j)] = S::one() / sum;
        }
    }
    crate::data::debug_check_membership_rows(&mu);
    mu
}

/// Weighted center update `v_j = sum_i w_ij x_i / sum_i w_ij` with
/// `w = mu^m`. A cluster whose total weight falls below 1e−12 is re-seeded
/// to a uniformly random data point so the cluster count stays fixed.
/// Returns the centers and whether any re-seed happened.
fn weighted_centers<S: Scalar, R: Rng>(
    ds: &Dataset<S>,
    mu: &Array2<S>,
    m: Option<f64>,
    rng: &mut R,
) -> (Array2<S>, bool) {
    let (n, d) = (ds.n_points(), ds.n_dims());
    let c = mu.ncols();
    let mut centers = Array2::zeros((c, d));
    let mut reseeded = false;
    for j in 0..c {
        let mut denom = S::zero();
        let mut num = vec![S::zero(); d];
        for i in 0..n {
            let w = match m {
                Some(m) => mu[(i, j)].powf(S::of(m)),
                None => mu[(i, j)],
            };
            denom += w;
            for (k, nk) in num.iter_mut().enumerate() {
                *nk += w * ds.points()[(i, k)];
            }
        }
        if denom.to64() < 1e-12 {
            reseeded = true;
            let pick = rng.random_range(0..n);
            for k in 0..d {
                centers[(j, k)] = ds.points()[(pick, k)];
            }
        } else {
            for (k, nk) in num.into_iter().enumerate() {
                centers[(j, k)] = nk / denom;
            }
        }
    }
    (centers, reseeded)
}

/// FCM center update `v_j = sum_i mu_ij^m x_i / sum_i mu_ij^m`, with the
/// empty-cluster re-seed guard.
pub fn fcm_center_update<S: Scalar, R: Rng>(
    ds: &Dataset<S>,
    mu: &Array2<S>,
    m: f64,
    rng: &mut R,
) -> Array2<S> {
    weighted_centers(ds, mu, Some(m), rng).0
}

fn random_centers<S: Scalar, R: Rng>(ds: &Dataset<S>, c: usize, rng: &mut R) -> Array2<S> {
    let bounds = ds.feature_bounds();
    let mut centers = Array2::zeros((c, ds.n_dims()));
    for j in 0..c {
        for (k, &(lo, hi)) in bounds.iter().enumerate() {
            centers[(j, k)] = S::of(rng.random_range(lo.to64()..=hi.to64()));
        }
    }
    centers
}

fn max_center_shift<S: Scalar>(a: &Array2<S>, b: &Array2<S>) -> f64 {
    a.iter()
        .zip(b.iter())
        .map(|(&x, &y)| (x.to64() - y.to64()).abs())
        .fold(0.0, f64::max)
}

fn finish<S: Scalar>(
    ds: &Dataset<S>,
    centers: Array2<S>,
    mu: Array2<S>,
    provenance: Provenance,
) -> Clustering<S> {
    let d2 = pairwise_sq_dist(ds, &centers).expect("shapes fixed during fit");
    let f1 = objective_f1(&d2, &mu);
    let f2 = objective_f2(&mu);
    Clustering {
        centers,
        memberships: mu,
        objectives: [f1, -f2],
        provenance,
    }
}

/// Fuzzy c-means fit, returning the clustering and the per-iteration value
/// of the weighted within-cluster sum `J_m` (one entry per membership
/// update).
pub fn fcm_fit_traced<S: Scalar>(
    ds: &Dataset<S>,
    p: &AoParams,
) -> Result<(Clustering<S>, Vec<f64>)> {
    p.validate(ds)?;
    let mut rng = ChaCha8Rng::seed_from_u64(p.seed);
    let mut centers = random_centers(ds, p.c, &mut rng);
    let mut history = Vec::new();
    let mut mu = Array2::zeros((ds.n_points(), p.c));
    for _ in 0..p.max_iter {
        let d2 = pairwise_sq_dist(ds, &centers)?;
        mu = fcm_membership_update(&d2, p.m);
        let j_m: f64 = d2
            .iter()
            .zip(mu.iter())
            .map(|(&d, &u)| u.to64().powf(p.m) * d.to64())
            .sum();
        if let Some(&prev) = history.last() {
            debug_assert!(
                j_m <= prev * (1.0 + 1e-9) + 1e-12,
                "J_m increased: {prev} -> {j_m}"
            );
        }
        history.push(j_m);
        let (next, reseeded) = weighted_centers(ds, &mu, Some(p.m), &mut rng);
        let shift = max_center_shift(&centers, &next);
        centers = next;
        if reseeded {
            // an empty-cluster re-seed may raise the objective; restart the
            // monotone segment
            history.clear();
        }
        if shift < p.tol {
            break;
        }
    }
    let provenance = Provenance {
        method: "fcm".into(),
        seed: p.seed,
        params: format!("c={} m={} max_iter={} tol={}", p.c, p.m, p.max_iter, p.tol),
    };
    Ok((finish(ds, centers, mu, provenance), history))
}

/// Fuzzy c-means fit from seeded random centers.
pub fn fcm_fit<S: Scalar>(ds: &Dataset<S>, p: &AoParams) -> Result<Clustering<S>> {
    fcm_fit_traced(ds, p).map(|(c, _)| c)
}

/// Maximum-entropy inference fit: alternates the entropy membership update
/// with the plain weighted centroid `v_j = sum_i mu_ij x_i / sum_i mu_ij`.
pub fn mei_fit<S: Scalar>(
    ds: &Dataset<S>,
    c: usize,
    sp: SigmaParam<S>,
    max_iter: usize,
    tol: f64,
    seed: u64,
) -> Result<Clustering<S>> {
    if c == 0 || c > ds.n_points() {
        return Err(EcmError::InvalidParams(format!(
            "c must be in [1, {}], got {}",
            ds.n_points(),
            c
        )));
    }
    if tol <= 0.0 || tol.is_nan() || max_iter == 0 {
        return Err(EcmError::InvalidParams(
            "tol must be positive and max_iter nonzero".into(),
        ));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut centers = random_centers(ds, c, &mut rng);
    let mut mu = Array2::zeros((ds.n_points(), c));
    for _ in 0..max_iter {
        let d2 = pairwise_sq_dist(ds, &centers)?;
        mu = entropy_memberships(&d2, sp);
        let (next, _) = weighted_centers(ds, &mu, None, &mut rng);
        let shift = max_center_shift(&centers, &next);
        centers = next;
        if shift < tol {
            break;
        }
    }
    let provenance = Provenance {
        method: "mei".into(),
        seed,
        params: format!(
            "c={} sigma={} max_iter={} tol={}",
            c,
            sp.sigma.to64(),
            max_iter,
            tol
        ),
    };
    Ok(finish(ds, centers, mu, provenance))
}
