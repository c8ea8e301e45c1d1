//! Comparison formulation: minimize (J2, Xie-Beni) over center chromosomes,
//! reusing the NSGA-II engine, with every front member re-scored in the
//! compactness/entropy objective space for cross-method comparison.

use ndarray::Array2;

use crate::data::{Clustering, Dataset, Provenance};
use crate::error::Result;
use crate::fuzzy::{pairwise_sq_dist, EcmProblem, ExponentForm};
use crate::nsga2::{nsga2_run, EngineResult, Nsga2Params};
use crate::scalar::Scalar;

/// Weighted within-cluster sum with squared memberships:
/// `J2 = sum_ij mu_ij^2 * d2_ij`.
pub fn fcm_objective_j2<S: Scalar>(d2: &Array2<S>, mu: &Array2<S>) -> S {
    d2.iter().zip(mu.iter()).map(|(&d, &u)| u * u * d).sum()
}

/// Xie-Beni index `XB = J2 / (N * min_{j!=k} ||v_j - v_k||^2)`. Centers
/// closer than 1e−12 in squared distance (or a single center) yield the
/// +infinity sentinel, which every finite value dominates.
pub fn xie_beni<S: Scalar>(d2: &Array2<S>, mu: &Array2<S>, centers: &Array2<S>) -> S {
    let c = centers.nrows();
    let mut min_sep = S::infinity();
    for j in 0..c {
        for k in j + 1..c {
            let mut acc = S::zero();
            for t in 0..centers.ncols() {
                let diff = centers[(j, t)] - centers[(k, t)];
                acc += diff * diff;
            }
            min_sep = min_sep.min(acc);
        }
    }
    if !min_sep.is_finite() || min_sep.to64() < 1e-12 {
        return S::infinity();
    }
    let n = S::of(d2.nrows() as f64);
    fcm_objective_j2(d2, mu) / (n * min_sep)
}

/// MOGA output: the engine result in (J2, XB) space plus each front
/// member's objectives re-scored in (f1, −f2) space, index-aligned.
#[derive(Debug, Clone)]
pub struct MogaResult<S: Scalar> {
    pub result: EngineResult<S>,
    pub ecm_objectives: Vec<[S; 2]>,
}

fn genes_to_centers<S: Scalar>(genes: &[S], c: usize, d: usize) -> Array2<S> {
    Array2::from_shape_vec((c, d), genes.to_vec()).expect("gene count fixed by bounds")
}

/// Scores a chromosome under the MOGA objectives; memberships come from the
/// FCM update with m = 2.
pub fn moga_evaluate<S: Scalar>(ds: &Dataset<S>, c: usize, genes: &[S]) -> [S; 2] {
    let centers = genes_to_centers(genes, c, ds.n_dims());
    let d2 = pairwise_sq_dist(ds, &centers).expect("shapes fixed by construction");
    let mu = crate::ao::fcm_membership_update(&d2, 2.0);
    [fcm_objective_j2(&d2, &mu), xie_beni(&d2, &mu, &centers)]
}

/// Builds the full clustering for a MOGA chromosome: FCM (m = 2)
/// memberships and the (J2, XB) objective pair.
pub fn moga_decode<S: Scalar>(
    ds: &Dataset<S>,
    c: usize,
    genes: &[S],
    provenance: Provenance,
) -> Clustering<S> {
    let centers = genes_to_centers(genes, c, ds.n_dims());
    let d2 = pairwise_sq_dist(ds, &centers).expect("shapes fixed by construction");
    let mu = crate::ao::fcm_membership_update(&d2, 2.0);
    let objectives = [fcm_objective_j2(&d2, &mu), xie_beni(&d2, &mu, &centers)];
    Clustering {
        centers,
        memberships: mu,
        objectives,
        provenance,
    }
}

/// Runs the (J2, XB) formulation on the NSGA-II engine. `form` selects the
/// exponent form of the compactness/entropy problem used only for
/// re-scoring the front.
pub fn moga_run<S: Scalar>(
    ds: &Dataset<S>,
    c: usize,
    form: ExponentForm,
    p: &Nsga2Params,
) -> Result<MogaResult<S>> {
    let problem = EcmProblem::new(ds, c, form)?;
    let bounds = problem.bounds().to_vec();
    let result = nsga2_run(|genes| moga_evaluate(ds, c, genes), &bounds, p)?;
    let ecm_objectives = result
        .front
        .iter()
        .map(|s| problem.evaluate(&s.genes))
        .collect();
    Ok(MogaResult {
        result,
        ecm_objectives,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ao::fcm_membership_update;
    use crate::metrics::adjusted_rand_index;
    use ndarray::array;
    use proptest::prelude::*;

    #[test]
    fn j2_crisp_is_within_cluster_sum() {
        let d2 = array![[1.0, 9.0], [4.0, 16.0]];
        let mu = array![[1.0, 0.0], [0.0, 1.0]];
        assert_eq!(fcm_objective_j2(&d2, &mu), 17.0);
    }

    #[test]
    fn j2_uniform_hand_case() {
        let d2 = array![[0.0, 2.0], [2.0, 0.0]];
        let mu = array![[0.5, 0.5], [0.5, 0.5]];
        let j2: f64 = fcm_objective_j2(&d2, &mu);
        assert!((j2 - 1.0).abs() < 1e-12);
    }

    #[test]
    fn j2_zero_distances() {
        let d2 = array![[0.0, 0.0]];
        let mu = array![[0.5, 0.5]];
        assert_eq!(fcm_objective_j2(&d2, &mu), 0.0);
    }

    #[test]
    fn xb_coincident_centers_sentinel() {
        let centers = array![[1.0, 1.0], [1.0, 1.0]];
        let d2 = array![[1.0, 1.0]];
        let mu = array![[0.5, 0.5]];
        let xb: f64 = xie_beni(&d2, &mu, &centers);
        assert!(xb.is_infinite());
    }

    #[test]
    fn xb_perfect_fit_is_zero() {
        let ds = Dataset::from_rows(&[vec![0.0], vec![1.0]]).unwrap();
        let centers = array![[0.0], [1.0]];
        let d2 = pairwise_sq_dist(&ds, &centers).unwrap();
        let mu = array![[1.0, 0.0], [0.0, 1.0]];
        assert_eq!(xie_beni(&d2, &mu, &centers), 0.0);
    }

    #[test]
    fn xb_hand_oracle() {
        let ds = Dataset::from_rows(&[vec![0.0], vec![1.0]]).unwrap();
        let centers = array![[0.25], [0.75]];
        let d2 = pairwise_sq_dist(&ds, &centers).unwrap();
        let mu = fcm_membership_update(&d2, 2.0);
        // mu rows are (0.9, 0.1)/(0.1, 0.9); J2 = 0.1125; sep^2 = 0.25
        let xb: f64 = xie_beni(&d2, &mu, &centers);
        assert!((xb - 0.225).abs() < 1e-12);
    }

    #[test]
    fn moga_separates_two_pairs() {
        let ds = Dataset::from_rows(&[
            vec![0.0, 0.0],
            vec![0.1, 0.0],
            vec![10.0, 0.0],
            vec![10.1, 0.0],
        ])
        .unwrap();
        let truth = vec![0usize, 0, 1, 1];
        let p = Nsga2Params {
            pop: 20,
            fe_budget: 1000,
            seed: 4,
            ..Default::default()
        };
        let out = moga_run(&ds, 2, ExponentForm::default(), &p).unwrap();
        assert_eq!(out.result.front.len(), out.ecm_objectives.len());
        let best = out
            .result
            .front
            .iter()
            .map(|s| {
                let cl = moga_decode(&ds, 2, &s.genes, Provenance::default());
                adjusted_rand_index(&cl.labels(), &truth).unwrap()
            })
            .fold(f64::NEG_INFINITY, f64::max);
        assert_eq!(best, 1.0);
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        #[test]
        fn xb_identity_against_parts(
            pts in proptest::collection::vec(-5.0f64..5.0, 4..10),
            c1 in -5.0f64..0.0,
            c2 in 0.1f64..5.0,
        ) {
            let rows: Vec<Vec<f64>> = pts.iter().map(|&x| vec![x]).collect();
            let ds = Dataset::from_rows(&rows).unwrap();
            let centers = array![[c1], [c2]];
            let d2 = pairwise_sq_dist(&ds, &centers).unwrap();
            let mu = fcm_membership_update(&d2, 2.0);
            let sep = (c1 - c2) * (c1 - c2);
            let expected = fcm_objective_j2(&d2, &mu) / (pts.len() as f64 * sep);
            let got = xie_beni(&d2, &mu, &centers);
            prop_assert!((got - expected).abs() <= 1e-9 * expected.abs().max(1.0));
        }
    }
}
