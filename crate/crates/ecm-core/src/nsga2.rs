//! Generic two-objective NSGA-II over real-vector chromosomes.
//!
//! The engine is problem-agnostic: it takes a closure scoring a gene vector
//! as a minimized objective pair, box bounds, and parameters. Variation is
//! simulated binary crossover plus polynomial mutation, selection is
//! tournament on (rank, crowding distance), and the run stops on a function
//! evaluation budget.

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{EcmError, Result};
use crate::scalar::Scalar;

/// Engine parameters. `pool` is the offspring fraction of `pop` per
/// generation, `tour` the tournament size, `mu_sbx` and `mum` the crossover
/// and mutation distribution indices.
#[derive(Debug, Clone)]
pub struct Nsga2Params {
    pub pop: usize,
    pub fe_budget: usize,
    pub pool: f64,
    pub tour: usize,
    pub mu_sbx: f64,
    pub mum: f64,
    pub seed: u64,
}

impl Default for Nsga2Params {
    fn default() -> Self {
        Self {
            pop: 50,
            fe_budget: 5000,
            pool: 0.5,
            tour: 2,
            mu_sbx: 20.0,
            mum: 20.0,
            seed: 1,
        }
    }
}

impl Nsga2Params {
    /// Offspring per generation: `round(pool * pop)` rounded up to even.
    pub fn offspring_count(&self) -> usize {
        let raw = (self.pool * self.pop as f64).round() as usize;
        if raw % 2 == 1 {
            raw + 1
        } else {
            raw
        }
    }

    fn validate(&self) -> Result<()> {
        if self.pop < 2 || !self.pop.is_multiple_of(2) {
            return Err(EcmError::InvalidParams(format!(
                "pop must be a positive even integer, got {}",
                self.pop
            )));
        }
        if self.fe_budget < self.pop {
            return Err(EcmError::InvalidParams(
                "fe_budget must be at least pop".into(),
            ));
        }
        if !(self.pool > 0.0 && self.pool <= 1.0) {
            return Err(EcmError::InvalidParams("pool must be in (0, 1]".into()));
        }
        if self.offspring_count() < 2 {
            return Err(EcmError::InvalidParams(
                "pool * pop must round to at least 2 offspring".into(),
            ));
        }
        if self.tour < 2 || self.tour > self.pop {
            return Err(EcmError::InvalidParams(format!(
                "tour must be in [2, pop], got {}",
                self.tour
            )));
        }
        if self.mu_sbx <= 0.0 || self.mum <= 0.0 {
            return Err(EcmError::InvalidParams(
                "distribution indices must be positive".into(),
            ));
        }
        Ok(())
    }
}

/// One front member: gene vector plus its minimized objective pair.
#[derive(Debug, Clone, PartialEq)]
pub struct Solution<S: Scalar> {
    pub genes: Vec<S>,
    pub objectives: [S; 2],
}

/// Engine output: the final non-dominated front (sorted by `g1`, duplicate
/// objective pairs removed), the number of evaluator calls, the
/// per-generation component-wise best objectives, and the raw final
/// population (every member, dominated ones included).
#[derive(Debug, Clone)]
pub struct EngineResult<S: Scalar> {
    pub front: Vec<Solution<S>>,
    pub evaluations: usize,
    pub best_history: Vec<[S; 2]>,
    pub final_population: Vec<Solution<S>>,
}

/// Pareto dominance for minimized pairs: no worse in both, better in one.
pub fn dominates<S: Scalar>(a: &[S; 2], b: &[S; 2]) -> bool {
    a[0] <= b[0] && a[1] <= b[1] && (a[0] < b[0] || a[1] < b[1])
}

/// Fast non-dominated sort; returns fronts as index lists, best first.
pub fn non_dominated_sort<S: Scalar>(objs: &[[S; 2]]) -> Vec<Vec<usize>> {
    let n = objs.len();
    if n == 0 {
        return Vec::new();
    }
    let mut dominated: Vec<Vec<usize>> = vec![Vec::new(); n];
    let mut count = vec![0usize; n];
    let mut current: Vec<usize> = Vec::new();
    for i in 0..n {
        for j in 0..n {
            if i == j {
                continue;
            }
            if dominates(&objs[i], &objs[j]) {
                dominated[i].push(j);
            } else if dominates(&objs[j], &objs[i]) {
                count[i] += 1;
            }
        }
        if count[i] == 0 {
            current.push(i);
        }
    }
    let mut fronts = Vec::new();
    while !current.is_empty() {
        let mut next = Vec::new();
        for &i in &current {
            for &j in &dominated[i] {
                count[j] -= 1;
                if count[j] == 0 {
                    next.push(j);
                }
            }
        }
        next.sort_unstable();
        fronts.push(std::mem::replace(&mut current, next));
    }
    fronts
}

/// Crowding distances for one mutually non-dominating front.
///
/// Boundary members of each objective get +infinity; interior members
/// accumulate the normalized gap between their neighbours. An objective
/// that is constant over the front (or has a non-finite range) contributes
/// nothing.
pub fn crowding_distance<S: Scalar>(front_objs: &[[S; 2]]) -> Vec<f64> {
    let m = front_objs.len();
    if m == 0 {
        return Vec::new();
    }
    if m <= 2 {
        return vec![f64::INFINITY; m];
    }
    let mut dist = vec![0.0f64; m];
    for obj in [0, 1] {
        let mut order: Vec<usize> = (0..m).collect();
        order.sort_by(|&a, &b| {
            front_objs[a][obj]
                .partial_cmp(&front_objs[b][obj])
                .expect("objectives must not be NaN")
        });
        dist[order[0]] = f64::INFINITY;
        dist[order[m - 1]] = f64::INFINITY;
        let range = front_objs[order[m - 1]][obj].to64() - front_objs[order[0]][obj].to64();
        if range > 0.0 && range.is_finite() {
            for k in 1..m - 1 {
                let gap =
                    front_objs[order[k + 1]][obj].to64() - front_objs[order[k - 1]][obj].to64();
                if dist[order[k]].is_finite() {
                    dist[order[k]] += gap / range;
                }
            }
        }
    }
    dist
}

/// Spread factor of simulated binary crossover for a uniform draw `u`.
pub fn sbx_beta(u: f64, eta: f64) -> f64 {
    if u <= 0.5 {
        (2.0 * u).powf(1.0 / (eta + 1.0))
    } else {
        (1.0 / (2.0 * (1.0 - u))).powf(1.0 / (eta + 1.0))
    }
}

/// Perturbation fraction of polynomial mutation for a uniform draw `u`.
pub fn mutation_delta(u: f64, eta: f64) -> f64 {
    if u < 0.5 {
        (2.0 * u).powf(1.0 / (eta + 1.0)) - 1.0
    } else {
        1.0 - (2.0 * (1.0 - u)).powf(1.0 / (eta + 1.0))
    }
}

fn clamp<S: Scalar>(v: S, lo: S, hi: S) -> S {
    v.max(lo).min(hi)
}

/// Simulated binary crossover: each gene is blended with probability 0.5,
/// otherwise copied; children are clamped to bounds.
pub fn sbx_crossover<S: Scalar, R: Rng>(
    p1: &[S],
    p2: &[S],
    bounds: &[(S, S)],
    mu_sbx: f64,
    rng: &mut R,
) -> (Vec<S>, Vec<S>) {
    let mut c1 = Vec::with_capacity(p1.len());
    let mut c2 = Vec::with_capacity(p2.len());
    for k in 0..p1.len() {
        let (lo, hi) = bounds[k];
        if rng.random::<f64>() < 0.5 {
            let beta = S::of(sbx_beta(rng.random::<f64>(), mu_sbx));
            let sum = p1[k] + p2[k];
            let diff = p2[k] - p1[k];
            let half = S::of(0.5);
            c1.push(clamp(half * (sum - beta * diff), lo, hi));
            c2.push(clamp(half * (sum + beta * diff), lo, hi));
        } else {
            c1.push(p1[k]);
            c2.push(p2[k]);
        }
    }
    (c1, c2)
}

/// Polynomial mutation: each gene is perturbed with probability `rate` by a
/// delta scaled to the gene's box width, then clamped.
pub fn polynomial_mutation<S: Scalar, R: Rng>(
    genes: &[S],
    bounds: &[(S, S)],
    mum: f64,
    rate: f64,
    rng: &mut R,
) -> Vec<S> {
    genes
        .iter()
        .enumerate()
        .map(|(k, &g)| {
            let (lo, hi) = bounds[k];
            if rng.random::<f64>() < rate {
                let delta = S::of(mutation_delta(rng.random::<f64>(), mum));
                clamp(g + delta * (hi - lo), lo, hi)
            } else {
                g
            }
        })
        .collect()
}

/// Tournament selection over (rank, crowding): samples `tour` distinct
/// members, the winner has the lowest rank, then the highest crowding, then
/// the earliest sampled position.
pub fn binary_tournament<R: Rng>(
    rank: &[usize],
    crowding: &[f64],
    tour: usize,
    rng: &mut R,
) -> usize {
    let n = rank.len();
    let mut picked: Vec<usize> = Vec::with_capacity(tour);
    while picked.len() < tour {
        let cand = rng.random_range(0..n);
        if !picked.contains(&cand) {
            picked.push(cand);
        }
    }
    let mut winner = picked[0];
    for &cand in &picked[1..] {
        if rank[cand] < rank[winner]
            || (rank[cand] == rank[winner] && crowding[cand] > crowding[winner])
        {
            winner = cand;
        }
    }
    winner
}

fn rank_and_crowd<S: Scalar>(objs: &[[S; 2]]) -> (Vec<usize>, Vec<f64>) {
    let fronts = non_dominated_sort(objs);
    let mut rank = vec![0usize; objs.len()];
    let mut crowding = vec![0.0f64; objs.len()];
    for (r, front) in fronts.iter().enumerate() {
        let front_objs: Vec<[S; 2]> = front.iter().map(|&i| objs[i]).collect();
        let dists = crowding_distance(&front_objs);
        for (&i, d) in front.iter().zip(dists) {
            rank[i] = r;
            crowding[i] = d;
        }
    }
    (rank, crowding)
}

/// Runs NSGA-II. `evaluator` maps a gene vector to a minimized objective
/// pair; one call counts once against `fe_budget`. Initialization is
/// uniform within `bounds` and also consumes budget. Returns the final
/// population's first front, sorted by `g1` with duplicate objective pairs
/// removed.
pub fn nsga2_run<S, F>(
    mut evaluator: F,
    bounds: &[(S, S)],
    p: &Nsga2Params,
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
    let n_genes = bounds.len();
    let mutation_rate = 1.0 / n_genes as f64;

    let sample = |rng: &mut ChaCha8Rng| -> Vec<S> {
        bounds
            .iter()
            .map(|&(lo, hi)| S::of(rng.random_range(lo.to64()..=hi.to64())))
            .collect()
    };

    let mut genes: Vec<Vec<S>> = (0..p.pop).map(|_| sample(&mut rng)).collect();
    let mut objs: Vec<[S; 2]> = genes.iter().map(|g| evaluator(g)).collect();
    let mut evaluations = p.pop;

    let best_of = |objs: &[[S; 2]]| -> [S; 2] {
        let mut best = [S::infinity(); 2];
        for o in objs {
            best[0] = best[0].min(o[0]);
            best[1] = best[1].min(o[1]);
        }
        best
    };
    let mut best_history = vec![best_of(&objs)];

    let offspring_count = p.offspring_count();
    while evaluations < p.fe_budget {
        let (rank, crowding) = rank_and_crowd(&objs);
        let mut child_genes: Vec<Vec<S>> = Vec::with_capacity(offspring_count);
        while child_genes.len() < offspring_count {
            let i1 = binary_tournament(&rank, &crowding, p.tour, &mut rng);
            let i2 = binary_tournament(&rank, &crowding, p.tour, &mut rng);
            let (c1, c2) = sbx_crossover(&genes[i1], &genes[i2], bounds, p.mu_sbx, &mut rng);
            child_genes.push(polynomial_mutation(
                &c1,
                bounds,
                p.mum,
                mutation_rate,
                &mut rng,
            ));
            child_genes.push(polynomial_mutation(
                &c2,
                bounds,
                p.mum,
                mutation_rate,
                &mut rng,
            ));
        }
        let child_objs: Vec<[S; 2]> = child_genes.iter().map(|g| evaluator(g)).collect();
        evaluations += child_objs.len();

        genes.extend(child_genes);
        objs.extend(child_objs);

        let fronts = non_dominated_sort(&objs);
        let mut keep: Vec<usize> = Vec::with_capacity(p.pop);
        for front in fronts {
            if keep.len() + front.len() <= p.pop {
                keep.extend(&front);
                if keep.len() == p.pop {
                    break;
                }
            } else {
                let front_objs: Vec<[S; 2]> = front.iter().map(|&i| objs[i]).collect();
                let dists = crowding_distance(&front_objs);
                let mut by_crowding: Vec<usize> = (0..front.len()).collect();
                by_crowding.sort_by(|&a, &b| {
                    dists[b]
                        .partial_cmp(&dists[a])
                        .unwrap()
                        .then(front[a].cmp(&front[b]))
                });
                keep.extend(by_crowding[..p.pop - keep.len()].iter().map(|&k| front[k]));
                break;
            }
        }
        genes = keep
            .iter()
            .map(|&i| std::mem::take(&mut genes[i]))
            .collect();
        objs = keep.iter().map(|&i| objs[i]).collect();
        best_history.push(best_of(&objs));
    }

    let fronts = non_dominated_sort(&objs);
    let mut front: Vec<Solution<S>> = fronts[0]
        .iter()
        .map(|&i| Solution {
            genes: genes[i].clone(),
            objectives: objs[i],
        })
        .collect();
    front.sort_by(|a, b| {
        a.objectives[0]
            .partial_cmp(&b.objectives[0])
            .unwrap()
            .then(a.objectives[1].partial_cmp(&b.objectives[1]).unwrap())
    });
    front.dedup_by(|a, b| a.objectives == b.objectives);
    let final_population = genes
        .into_iter()
        .zip(objs)
        .map(|(genes, objectives)| Solution { genes, objectives })
        .collect();
    Ok(EngineResult {
        front,
        evaluations,
        best_history,
        final_population,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use std::cell::Cell;

    #[test]
    fn dominance_cases() {
        assert!(dominates(&[1.0, 1.0], &[2.0, 2.0]));
        assert!(!dominates(&[1.0, 3.0], &[3.0, 1.0]));
        assert!(!dominates(&[1.0, 1.0], &[1.0, 1.0]));
        assert!(dominates(&[1.0, 1.0], &[1.0, 2.0]));
    }

    #[test]
    fn sort_hand_case() {
        let objs = [[1.0, 1.0], [2.0, 2.0], [0.0, 3.0], [3.0, 0.0]];
        let fronts = non_dominated_sort(&objs);
        assert_eq!(fronts, vec![vec![0, 2, 3], vec![1]]);
    }

    #[test]
    fn sort_identical_points_single_front() {
        let objs = [[1.0, 1.0]; 4];
        let fronts = non_dominated_sort(&objs);
        assert_eq!(fronts.len(), 1);
        assert_eq!(fronts[0].len(), 4);
    }

    #[test]
    fn sort_chain_gives_singletons() {
        let objs = [[1.0, 1.0], [2.0, 2.0], [3.0, 3.0]];
        let fronts = non_dominated_sort(&objs);
        assert_eq!(fronts, vec![vec![0], vec![1], vec![2]]);
    }

    /// Reference sort: repeatedly peel the set of points dominated by no
    /// remaining point.
    fn peel_sort(objs: &[[f64; 2]]) -> Vec<Vec<usize>> {
        let mut remaining: Vec<usize> = (0..objs.len()).collect();
        let mut fronts = Vec::new();
        while !remaining.is_empty() {
            let front: Vec<usize> = remaining
                .iter()
                .copied()
                .filter(|&i| !remaining.iter().any(|&j| dominates(&objs[j], &objs[i])))
                .collect();
            remaining.retain(|i| !front.contains(i));
            fronts.push(front);
        }
        fronts
    }

    #[test]
    fn sort_matches_peeling_oracle_on_200_instances() {
        use rand::SeedableRng;
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..200 {
            let n = rng.random_range(1..=20);
            // small integer grid provokes ties and duplicates
            let objs: Vec<[f64; 2]> = (0..n)
                .map(|_| [rng.random_range(0..6) as f64, rng.random_range(0..6) as f64])
                .collect();
            assert_eq!(non_dominated_sort(&objs), peel_sort(&objs));
        }
    }

    #[test]
    fn crowding_two_points_infinite() {
        let d = crowding_distance(&[[0.0, 1.0], [1.0, 0.0]]);
        assert!(d.iter().all(|v| v.is_infinite()));
    }

    #[test]
    fn crowding_hand_case() {
        let d = crowding_distance(&[[0.0, 4.0], [1.0, 2.0], [4.0, 0.0]]);
        assert!(d[0].is_infinite() && d[2].is_infinite());
        assert!((d[1] - 2.0).abs() < 1e-12);
    }

    #[test]
    fn crowding_collinear_equal_spacing() {
        let d = crowding_distance(&[[0.0, 2.0], [1.0, 1.0], [2.0, 0.0]]);
        assert!((d[1] - 2.0).abs() < 1e-12);
    }

    #[test]
    fn crowding_constant_objective_contributes_zero() {
        let d = crowding_distance(&[[0.0, 1.0], [1.0, 1.0], [2.0, 1.0]]);
        assert!((d[1] - 1.0).abs() < 1e-12);
    }

    #[test]
    fn crowding_nonfinite_range_guarded() {
        let d = crowding_distance(&[[0.0, f64::INFINITY], [1.0, 5.0], [2.0, 0.0]]);
        assert!((d[1] - 1.0).abs() < 1e-12);
    }

    #[test]
    fn sbx_beta_identity_at_half() {
        assert!((sbx_beta(0.5, 20.0) - 1.0).abs() < 1e-12);
    }

    #[test]
    fn sbx_beta_hand_value() {
        let beta = sbx_beta(0.3, 20.0);
        assert!((beta - 0.97595).abs() < 1e-4);
        // children for p1=0, p2=1
        let c1 = 0.5 * (1.0 - beta);
        let c2 = 0.5 * (1.0 + beta);
        assert!((c1 - 0.01203).abs() < 1e-4);
        assert!((c2 - 0.98797).abs() < 1e-4);
    }

    #[test]
    fn mutation_delta_cases() {
        assert_eq!(mutation_delta(0.5, 20.0), 0.0);
        assert_eq!(mutation_delta(0.0, 20.0), -1.0);
        assert!((mutation_delta(0.75, 20.0) - 0.03246).abs() < 1e-4);
    }

    #[test]
    fn sbx_identical_parents_identical_children() {
        use rand::SeedableRng;
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let p = vec![0.25, 0.5, 0.75];
        let bounds = vec![(0.0, 1.0); 3];
        let (c1, c2) = sbx_crossover(&p, &p, &bounds, 20.0, &mut rng);
        assert_eq!(c1, p);
        assert_eq!(c2, p);
    }

    #[test]
    fn tournament_prefers_rank_then_crowding() {
        use rand::SeedableRng;
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        // two members, both always sampled at tour = 2
        for _ in 0..20 {
            let w = binary_tournament(&[0, 1], &[0.0, f64::INFINITY], 2, &mut rng);
            assert_eq!(w, 0);
            let w = binary_tournament(&[0, 0], &[f64::INFINITY, 0.4], 2, &mut rng);
            assert_eq!(w, 0);
            let w = binary_tournament(&[0, 0], &[0.4, f64::INFINITY], 2, &mut rng);
            assert_eq!(w, 1);
        }
    }

    fn segment_problem(x: &[f64]) -> [f64; 2] {
        [x[0], 1.0 - x[0]]
    }

    #[test]
    fn run_covers_linear_front() {
        let p = Nsga2Params {
            pop: 20,
            fe_budget: 400,
            ..Default::default()
        };
        let result = nsga2_run(segment_problem, &[(0.0, 1.0)], &p).unwrap();
        assert!(result.front.len() >= 10);
        let g1s: Vec<f64> = result.front.iter().map(|s| s.objectives[0]).collect();
        assert!(g1s.first().unwrap() < &0.05);
        assert!(g1s.last().unwrap() > &0.95);
        // mutually non-dominating
        for a in &result.front {
            for b in &result.front {
                assert!(!dominates(&a.objectives, &b.objectives));
            }
        }
    }

    #[test]
    fn run_budget_at_pop_returns_initial_front() {
        let p = Nsga2Params {
            pop: 10,
            fe_budget: 10,
            ..Default::default()
        };
        let result = nsga2_run(segment_problem, &[(0.0, 1.0)], &p).unwrap();
        assert_eq!(result.evaluations, 10);
        assert_eq!(result.best_history.len(), 1);
    }

    #[test]
    fn run_is_deterministic() {
        let p = Nsga2Params {
            pop: 12,
            fe_budget: 200,
            seed: 99,
            ..Default::default()
        };
        let a = nsga2_run(segment_problem, &[(0.0, 1.0)], &p).unwrap();
        let b = nsga2_run(segment_problem, &[(0.0, 1.0)], &p).unwrap();
        assert_eq!(a.front, b.front);
        assert_eq!(a.evaluations, b.evaluations);
    }

    #[test]
    fn run_respects_budget_allowance() {
        let calls = Cell::new(0usize);
        let p = Nsga2Params {
            pop: 14,
            fe_budget: 300,
            ..Default::default()
        };
        let counted = |x: &[f64]| {
            calls.set(calls.get() + 1);
            segment_problem(x)
        };
        let result = nsga2_run(counted, &[(0.0, 1.0)], &p).unwrap();
        assert_eq!(calls.get(), result.evaluations);
        assert!(result.evaluations <= p.fe_budget + p.pop);
        assert!(result.evaluations >= p.fe_budget);
    }

    #[test]
    fn best_history_is_monotone() {
        let p = Nsga2Params {
            pop: 16,
            fe_budget: 600,
            seed: 5,
            ..Default::default()
        };
        // a problem with some structure: minimize (x^2+y^2, (x-1)^2+y^2)
        let f = |x: &[f64]| {
            [
                x[0] * x[0] + x[1] * x[1],
                (x[0] - 1.0) * (x[0] - 1.0) + x[1] * x[1],
            ]
        };
        let result = nsga2_run(f, &[(-2.0, 2.0), (-2.0, 2.0)], &p).unwrap();
        for pair in result.best_history.windows(2) {
            assert!(pair[1][0] <= pair[0][0]);
            assert!(pair[1][1] <= pair[0][1]);
        }
    }

    #[test]
    fn invalid_params_rejected() {
        let bounds = [(0.0, 1.0)];
        let odd_pop = Nsga2Params {
            pop: 7,
            ..Default::default()
        };
        assert!(nsga2_run(segment_problem, &bounds, &odd_pop).is_err());
        let small_budget = Nsga2Params {
            pop: 10,
            fe_budget: 5,
            ..Default::default()
        };
        assert!(nsga2_run(segment_problem, &bounds, &small_budget).is_err());
        let bad_tour = Nsga2Params {
            tour: 1,
            ..Default::default()
        };
        assert!(nsga2_run(segment_problem, &bounds, &bad_tour).is_err());
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(16))]

        #[test]
        fn returned_front_valid(seed in 0u64..1000) {
            let p = Nsga2Params {
                pop: 10,
                fe_budget: 120,
                seed,
                ..Default::default()
            };
            let f = |x: &[f64]| [x[0] * x[0], (x[0] - 1.0) * (x[0] - 1.0)];
            let result = nsga2_run(f, &[(-1.0, 2.0)], &p).unwrap();
            prop_assert!(!result.front.is_empty());
            for s in &result.front {
                prop_assert!(s.genes[0] >= -1.0 && s.genes[0] <= 2.0);
                for t in &result.front {
                    prop_assert!(!dominates(&s.objectives, &t.objectives));
                }
            }
            prop_assert!(result.evaluations <= p.fe_budget + p.pop);
        }
    }
}
