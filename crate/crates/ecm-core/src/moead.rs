//! Generic two-objective MOEA/D with Tchebycheff decomposition.
//!
//! Each weight vector defines a scalar subproblem; solutions improve their
//! neighborhood via differential-evolution variation, and an unbounded
//! external population collects every non-dominated candidate seen.

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{EcmError, Result};
use crate::nsga2::{dominates, EngineResult, Solution};
use crate::scalar::Scalar;

/// Engine parameters. `pop` is the number of subproblems, `T` the
/// neighborhood size, `F` the differential weight, `Cr` the crossover rate.
#[derive(Debug, Clone)]
pub struct MoeadParams {
    pub pop: usize,
    pub fe_budget: usize,
    pub t_neighbors: usize,
    pub f_weight: f64,
    pub cr: f64,
    pub seed: u64,
}

impl Default for MoeadParams {
    fn default() -> Self {
        Self {
            pop: 50,
            fe_budget: 5000,
            t_neighbors: 50,
            f_weight: 0.5,
            cr: 0.5,
            seed: 1,
        }
    }
}

impl MoeadParams {
    fn validate(&self) -> Result<()> {
        if self.pop < 2 {
            return Err(EcmError::InvalidParams(format!(
                "pop must be at least 2, got {}",
                self.pop
            )));
        }
        if self.t_neighbors < 2 || self.t_neighbors > self.pop {
            return Err(EcmError::InvalidParams(format!(
                "T must be in [2, pop], got {}",
                self.t_neighbors
            )));
        }
        if self.fe_budget < self.pop {
            return Err(EcmError::InvalidParams(
                "fe_budget must be at least pop".into(),
            ));
        }
        if !(self.f_weight > 0.0 && self.f_weight <= 2.0) {
            return Err(EcmError::InvalidParams("F must be in (0, 2]".into()));
        }
        if !(0.0..=1.0).contains(&self.cr) {
            return Err(EcmError::InvalidParams("Cr must be in [0, 1]".into()));
        }
        Ok(())
    }
}

/// Evenly spread weight pairs on the 2-simplex: λ_i = (i/(pop−1), 1 −
/// i/(pop−1)), components clamped to ≥ 1e−6 and renormalized so endpoint
/// subproblems still feel both objectives.
pub fn uniform_weights(pop: usize) -> Result<Vec<[f64; 2]>> {
    if pop < 2 {
        return Err(EcmError::InvalidParams(format!(
            "need at least 2 weight vectors, got {pop}"
        )));
    }
    Ok((0..pop)
        .map(|i| {
            let a = i as f64 / (pop - 1) as f64;
            let w = [a.max(1e-6), (1.0 - a).max(1e-6)];
            let sum = w[0] + w[1];
            [w[0] / sum, w[1] / sum]
        })
        .collect())
}

/// For each weight vector, the `t` nearest by Euclidean distance (itself
/// included), ties resolved toward the lower index. `t` is capped at the
/// number of vectors.
pub fn neighborhoods(weights: &[[f64; 2]], t: usize) -> Vec<Vec<usize>> {
    let n = weights.len();
    (0..n)
        .map(|i| {
            let mut order: Vec<usize> = (0..n).collect();
            order.sort_by(|&a, &b| {
                let da = (weights[a][0] - weights[i][0]).powi(2)
                    + (weights[a][1] - weights[i][1]).powi(2);
                let db = (weights[b][0] - weights[i][0]).powi(2)
                    + (weights[b][1] - weights[i][1]).powi(2);
                da.partial_cmp(&db).unwrap().then(a.cmp(&b))
            });
            order.truncate(t.min(n));
            order
        })
        .collect()
}

/// Tchebycheff scalarization: g = max(w1·|g1 − z1|, w2·|g2 − z2|).
pub fn tchebycheff<S: Scalar>(obj: &[S; 2], w: &[f64; 2], z: &[S; 2]) -> f64 {
    let d1 = w[0] * (obj[0].to64() - z[0].to64()).abs();
    let d2 = w[1] * (obj[1].to64() - z[1].to64()).abs();
    d1.max(d2)
}

/// Differential-evolution variation: each gene takes the mutant
/// xi + F·(xj − xl) with probability `cr` (one uniformly chosen index is
/// forced), otherwise keeps xi; the result is clamped to bounds.
pub fn de_variation<S: Scalar, R: Rng>(
    xi: &[S],
    xj: &[S],
    xl: &[S],
    bounds: &[(S, S)],
    f_weight: f64,
    cr: f64,
    rng: &mut R,
) -> Vec<S> {
    let n = xi.len();
    let forced = rng.random_range(0..n);
    (0..n)
        .map(|k| {
            let take = k == forced || rng.random::<f64>() < cr;
            let (lo, hi) = bounds[k];
            if take {
                let mutant = xi[k] + S::of(f_weight) * (xj[k] - xl[k]);
                mutant.max(lo).min(hi)
            } else {
                xi[k]
            }
        })
        .collect()
}

fn ep_insert<S: Scalar>(ep: &mut Vec<Solution<S>>, genes: &[S], obj: [S; 2]) {
    if ep
        .iter()
        .any(|s| s.objectives == obj || dominates(&s.objectives, &obj))
    {
        return;
    }
    ep.retain(|s| !dominates(&obj, &s.objectives));
    ep.push(Solution {
        genes: genes.to_vec(),
        objectives: obj,
    });
}

/// Runs MOEA/D. The budget is checked before every candidate evaluation, so
/// the evaluator is called at most `fe_budget` times (initialization
/// included). Returns the external population sorted by `g1`; duplicate
/// objective pairs are never stored. `best_history` records the ideal point
/// after initialization and after each sweep over the subproblems.
pub fn moead_run<S, F>(
    mut evaluator: F,
    bounds: &[(S, S)],
    p: &MoeadParams,
) -> Result<EngineResult<S>>
where
    S: Scalar,
    F: FnMut(&[S]) -> [S; 2],
{
    p.validate()?;
    if bounds.is_empty() {
        return Err(EcmError::InvalidParams("bounds must be non-empty".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(p.seed);
    let weights = uniform_weights(p.pop)?;
    let neigh = neighborhoods(&weights, p.t_neighbors);

    let mut genes: Vec<Vec<S>> = (0..p.pop)
        .map(|_| {
            bounds
                .iter()
                .map(|&(lo, hi)| S::of(rng.random_range(lo.to64()..=hi.to64())))
                .collect()
        })
        .collect();
    let mut objs: Vec<[S; 2]> = genes.iter().map(|g| evaluator(g)).collect();
    let mut evaluations = p.pop;

    let mut z = [S::infinity(); 2];
    for o in &objs {
        z[0] = z[0].min(o[0]);
        z[1] = z[1].min(o[1]);
    }
    let mut ep: Vec<Solution<S>> = Vec::new();
    for (g, &o) in genes.iter().zip(&objs) {
        ep_insert(&mut ep, g, o);
    }
    let mut best_history = vec![z];

    'outer: loop {
        let before = evaluations;
        for i in 0..p.pop {
            if evaluations >= p.fe_budget {
                break;
            }
            // mates come from the neighborhood, excluding i when enough
            // members remain for two distinct picks
            let mut pool: Vec<usize> = neigh[i].iter().copied().filter(|&k| k != i).collect();
            if pool.len() < 2 {
                pool = neigh[i].clone();
            }
            let j = pool.swap_remove(rng.random_range(0..pool.len()));
            let l = pool.swap_remove(rng.random_range(0..pool.len()));

            let y = de_variation(
                &genes[i], &genes[j], &genes[l], bounds, p.f_weight, p.cr, &mut rng,
            );
            let oy = evaluator(&y);
            evaluations += 1;

            z[0] = z[0].min(oy[0]);
            z[1] = z[1].min(oy[1]);

            for &k in &neigh[i] {
                if tchebycheff(&oy, &weights[k], &z) < tchebycheff(&objs[k], &weights[k], &z) {
                    genes[k] = y.clone();
                    objs[k] = oy;
                }
            }
            ep_insert(&mut ep, &y, oy);
        }
        if evaluations > before {
            best_history.push(z);
        }
        if evaluations >= p.fe_budget {
            break 'outer;
        }
    }

    ep.sort_by(|a, b| {
        a.objectives[0]
            .partial_cmp(&b.objectives[0])
            .unwrap()
            .then(a.objectives[1].partial_cmp(&b.objectives[1]).unwrap())
    });
    let final_population = genes
        .into_iter()
        .zip(objs)
        .map(|(genes, objectives)| Solution { genes, objectives })
        .collect();
    Ok(EngineResult {
        front: ep,
        evaluations,
        best_history,
        final_population,
    })
}
