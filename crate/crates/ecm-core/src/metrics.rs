//! External validation (adjusted Rand index) and front quality metrics
//! (Schott spacing, multiplicative epsilon indicator).

use crate::data::Clustering;
use crate::error::{EcmError, Result};
use crate::scalar::Scalar;

fn comb2(x: usize) -> f64 {
    let x = x as f64;
    x * (x - 1.0) / 2.0
}

/// Chance-adjusted pair-counting agreement between two partitions, from the
/// contingency table. Returns 0 when the adjustment denominator vanishes
/// (e.g. both partitions are a single cluster).
pub fn adjusted_rand_index(a: &[usize], b: &[usize]) -> Result<f64> {
    if a.len() != b.len() {
        return Err(EcmError::LengthMismatch(a.len(), b.len()));
    }
    let n = a.len();
    if n < 2 {
        return Err(EcmError::InvalidParams(
            "adjusted rand index needs at least 2 points".into(),
        ));
    }
    let ka = a.iter().max().unwrap() + 1;
    let kb = b.iter().max().unwrap() + 1;
    let mut table = vec![0usize; ka * kb];
    let mut rows = vec![0usize; ka];
    let mut cols = vec![0usize; kb];
    for (&x, &y) in a.iter().zip(b.iter()) {
        table[x * kb + y] += 1;
        rows[x] += 1;
        cols[y] += 1;
    }
    let index: f64 = table.iter().map(|&n_ij| comb2(n_ij)).sum();
    let sum_a: f64 = rows.iter().map(|&r| comb2(r)).sum();
    let sum_b: f64 = cols.iter().map(|&c| comb2(c)).sum();
    let expected = sum_a * sum_b / comb2(n);
    let max_index = 0.5 * (sum_a + sum_b);
    if (max_index - expected).abs() < 1e-12 {
        return Ok(0.0);
    }
    Ok((index - expected) / (max_index - expected))
}

/// Hard-assigns every front member and returns the best ARI against the
/// ground truth together with the member index (ties go to the lowest
/// index).
pub fn max_ari_over_front<S: Scalar>(
    members: &[Clustering<S>],
    truth: &[usize],
) -> Result<(f64, usize)> {
    if members.is_empty() {
        return Err(EcmError::EmptyFront);
    }
    let mut best = f64::NEG_INFINITY;
    let mut best_idx = 0;
    for (i, member) in members.iter().enumerate() {
        let ari = adjusted_rand_index(&member.labels(), truth)?;
        if ari > best {
            best = ari;
            best_idx = i;
        }
    }
    Ok((best, best_idx))
}

/// Schott's spacing: the sample standard deviation of each front point's
/// Manhattan distance to its nearest neighbour. Errors on fronts with fewer
/// than two points.
pub fn schott_spacing<S: Scalar>(objectives: &[[S; 2]]) -> Result<f64> {
    let k = objectives.len();
    if k < 2 {
        return Err(EcmError::TooFewPoints(k));
    }
    let pts: Vec<[f64; 2]> = objectives
        .iter()
        .map(|o| [o[0].to64(), o[1].to64()])
        .collect();
    let gaps: Vec<f64> = (0..k)
        .map(|i| {
            let mut min = f64::INFINITY;
            for (j, p) in pts.iter().enumerate() {
                if j != i {
                    let d = (pts[i][0] - p[0]).abs() + (pts[i][1] - p[1]).abs();
                    if d < min {
                        min = d;
                    }
                }
            }
            min
        })
        .collect();
    let mean = gaps.iter().sum::<f64>() / k as f64;
    let var = gaps.iter().map(|g| (mean - g).powi(2)).sum::<f64>() / (k - 1) as f64;
    Ok(var.sqrt())
}

/// Multiplicative epsilon indicator of `candidate` against `control`.
///
/// Both fronts are first translated jointly so every coordinate is at least
/// 1 (the per-coordinate minimum over both fronts is subtracted and 1
/// added), which makes the multiplicative form well-defined for negative
/// objective values. The result is the smallest factor by which every
/// control point must be inflated so that some candidate point covers it;
/// values below 1 mean the candidate dominates the control.
pub fn epsilon_indicator<S: Scalar>(candidate: &[[S; 2]], control: &[[S; 2]]) -> Result<f64> {
    if candidate.is_empty() || control.is_empty() {
        return Err(EcmError::EmptyFront);
    }
    let mut mins = [f64::INFINITY; 2];
    for o in candidate.iter().chain(control.iter()) {
        for m in 0..2 {
            mins[m] = mins[m].min(o[m].to64());
        }
    }
    let shift = |o: &[S; 2]| [o[0].to64() - mins[0] + 1.0, o[1].to64() - mins[1] + 1.0];
    let cand: Vec<[f64; 2]> = candidate.iter().map(shift).collect();
    let mut eps = f64::NEG_INFINITY;
    for p in control.iter().map(shift) {
        let mut best = f64::INFINITY;
        for q in &cand {
            let ratio = (q[0] / p[0]).max(q[1] / p[1]);
            if ratio < best {
                best = ratio;
            }
        }
        if best > eps {
            eps = best;
        }
    }
    Ok(eps)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::data::Provenance;
    use ndarray::{array, Array2};
    use proptest::prelude::*;

    /// Pair-counting reference: classify all point pairs by same/different
    /// cluster in each labeling.
    fn ari_pair_counting(a: &[usize], b: &[usize]) -> f64 {
        let n = a.len();
        let (mut ss, mut sd, mut ds, mut dd) = (0f64, 0f64, 0f64, 0f64);
        for i in 0..n {
            for j in (i + 1)..n {
                match (a[i] == a[j], b[i] == b[j]) {
                    (true, true) => ss += 1.0,
                    (true, false) => sd += 1.0,
                    (false, true) => ds += 1.0,
                    (false, false) => dd += 1.0,
                }
            }
        }
        let num = 2.0 * (ss * dd - sd * ds);
        let den = (ss + sd) * (sd + dd) + (ss + ds) * (ds + dd);
        if den == 0.0 {
            0.0
        } else {
            num / den
        }
    }

    #[test]
    fn identical_partitions_score_one() {
        let a = [0, 0, 1, 1, 2];
        let b = [2, 2, 0, 0, 1];
        assert_eq!(adjusted_rand_index(&a, &b).unwrap(), 1.0);
    }

    #[test]
    fn crossed_pairs_score_minus_half() {
        let a = [0, 0, 1, 1];
        let b = [0, 1, 0, 1];
        assert!((adjusted_rand_index(&a, &b).unwrap() + 0.5).abs() < 1e-15);
    }

    #[test]
    fn single_cluster_degenerate_returns_zero() {
        let a = [0, 0, 0];
        assert_eq!(adjusted_rand_index(&a, &a).unwrap(), 0.0);
    }

    #[test]
    fn length_mismatch_is_an_error() {
        assert!(adjusted_rand_index(&[0, 1], &[0]).is_err());
    }

    fn one_hot_clustering(labels: &[usize], c: usize) -> Clustering<f64> {
        let n = labels.len();
        let mut mu = Array2::zeros((n, c));
        for (i, &l) in labels.iter().enumerate() {
            mu[(i, l)] = 1.0;
        }
        Clustering {
            centers: Array2::zeros((c, 1)),
            memberships: mu,
            objectives: [0.0, 0.0],
            provenance: Provenance::default(),
        }
    }

    #[test]
    fn max_ari_single_member() {
        let truth = [0, 0, 1, 1];
        let front = vec![one_hot_clustering(&[0, 1, 0, 1], 2)];
        let (ari, idx) = max_ari_over_front(&front, &truth).unwrap();
        assert_eq!(idx, 0);
        assert!((ari + 0.5).abs() < 1e-15);
    }

    #[test]
    fn max_ari_finds_true_member() {
        let truth = [0, 0, 1, 1];
        let front = vec![
            one_hot_clustering(&[0, 1, 0, 1], 2),
            one_hot_clustering(&[1, 1, 0, 0], 2),
        ];
        let (ari, idx) = max_ari_over_front(&front, &truth).unwrap();
        assert_eq!((ari, idx), (1.0, 1));
    }

    #[test]
    fn max_ari_tie_picks_lowest_index() {
        let truth = [0, 0, 1, 1];
        let front = vec![
            one_hot_clustering(&[0, 1, 0, 1], 2),
            one_hot_clustering(&[0, 0, 1, 1], 2),
            one_hot_clustering(&[1, 1, 0, 0], 2),
        ];
        let (_, idx) = max_ari_over_front(&front, &truth).unwrap();
        assert_eq!(idx, 1);
    }

    #[test]
    fn empty_front_errors() {
        let front: Vec<Clustering<f64>> = vec![];
        assert!(max_ari_over_front(&front, &[0, 1]).is_err());
    }

    #[test]
    fn spacing_equally_spaced_is_zero() {
        let objs = [[0.0, 0.0], [1.0, 0.0], [2.0, 0.0], [3.0, 0.0]];
        assert_eq!(schott_spacing(&objs).unwrap(), 0.0);
    }

    #[test]
    fn spacing_two_points_is_zero() {
        let objs = [[0.0, 1.0], [4.0, 5.0]];
        assert_eq!(schott_spacing(&objs).unwrap(), 0.0);
    }

    #[test]
    fn spacing_hand_case() {
        let objs = [[0.0, 0.0], [1.0, 0.0], [3.0, 0.0]];
        let expected = (1.0f64 / 3.0).sqrt();
        assert!((schott_spacing(&objs).unwrap() - expected).abs() < 1e-12);
    }

    #[test]
    fn spacing_single_point_errors() {
        assert!(matches!(
            schott_spacing(&[[0.0, 0.0]]),
            Err(EcmError::TooFewPoints(1))
        ));
    }

    #[test]
    fn epsilon_identity_is_one() {
        let front = [[3.0, -1.0], [5.0, -4.0]];
        assert!((epsilon_indicator(&front, &front).unwrap() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn epsilon_halved_candidate() {
        // Joint minima are exactly 1, so the shift is the identity and the
        // halved candidate yields 0.5.
        let control = [[2.0, 2.0]];
        let candidate = [[1.0, 1.0]];
        assert!((epsilon_indicator(&candidate, &control).unwrap() - 0.5).abs() < 1e-12);
    }

    #[test]
    fn epsilon_enumeration_case() {
        let candidate = [[1.0, 3.0], [3.0, 1.0]];
        let control = [[2.0, 2.0]];
        assert!((epsilon_indicator(&candidate, &control).unwrap() - 1.5).abs() < 1e-12);
    }

    #[test]
    fn epsilon_empty_errors() {
        let empty: [[f64; 2]; 0] = [];
        assert!(epsilon_indicator(&empty, &[[1.0, 1.0]]).is_err());
        assert!(epsilon_indicator(&[[1.0, 1.0]], &empty).is_err());
    }

    #[test]
    fn ari_agrees_with_pair_counting_oracle_on_200_instances() {
        use rand::Rng;
        use rand::SeedableRng;
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(42);
        for _ in 0..200 {
            let n = rng.random_range(2..=12);
            let ka = rng.random_range(1..=4);
            let kb = rng.random_range(1..=4);
            let a: Vec<usize> = (0..n).map(|_| rng.random_range(0..ka)).collect();
            let b: Vec<usize> = (0..n).map(|_| rng.random_range(0..kb)).collect();
            let fast = adjusted_rand_index(&a, &b).unwrap();
            let slow = ari_pair_counting(&a, &b);
            assert!(
                (fast - slow).abs() < 1e-12,
                "mismatch on a={a:?} b={b:?}: {fast} vs {slow}"
            );
        }
    }

    #[test]
    fn hard_labels_come_from_memberships() {
        let clustering = Clustering {
            centers: array![[0.0], [1.0]],
            memberships: array![[0.9, 0.1], [0.2, 0.8], [0.6, 0.4]],
            objectives: [0.0, 0.0],
            provenance: Provenance::default(),
        };
        assert_eq!(clustering.labels(), vec![0, 1, 0]);
    }

    proptest! {
        #[test]
        fn ari_symmetric_and_relabel_invariant(
            a in proptest::collection::vec(0usize..3, 4..12),
            b in proptest::collection::vec(0usize..3, 4..12),
        ) {
            let n = a.len().min(b.len());
            let a = &a[..n];
            let b = &b[..n];
            let ab = adjusted_rand_index(a, b).unwrap();
            let ba = adjusted_rand_index(b, a).unwrap();
            prop_assert!((ab - ba).abs() < 1e-12);
            // relabel a by an involution 0<->2
            let relabeled: Vec<usize> =
                a.iter().map(|&x| match x { 0 => 2, 2 => 0, other => other }).collect();
            let rel = adjusted_rand_index(&relabeled, b).unwrap();
            prop_assert!((ab - rel).abs() < 1e-12);
            prop_assert!(ab <= 1.0 + 1e-12);
        }

        #[test]
        fn spacing_translation_invariant(
            pts in proptest::collection::vec((0.0f64..10.0, 0.0f64..10.0), 3..10),
            dx in -5.0f64..5.0,
            dy in -5.0f64..5.0,
        ) {
            let a: Vec<[f64; 2]> = pts.iter().map(|&(x, y)| [x, y]).collect();
            let b: Vec<[f64; 2]> = pts.iter().map(|&(x, y)| [x + dx, y + dy]).collect();
            let sa = schott_spacing(&a).unwrap();
            let sb = schott_spacing(&b).unwrap();
            prop_assert!((sa - sb).abs() < 1e-9);
        }

        #[test]
        fn epsilon_at_most_one_when_candidate_covers_control(
            pts in proptest::collection::vec((0.0f64..10.0, -10.0f64..0.0), 1..8),
            extra in proptest::collection::vec((0.0f64..10.0, -10.0f64..0.0), 0..8),
        ) {
            let control: Vec<[f64; 2]> = pts.iter().map(|&(x, y)| [x, y]).collect();
            let mut candidate = control.clone();
            candidate.extend(extra.iter().map(|&(x, y)| [x, y]));
            let ei = epsilon_indicator(&candidate, &control).unwrap();
            prop_assert!(ei <= 1.0 + 1e-12);
        }
    }
}
