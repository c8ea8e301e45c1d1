//! Trade-off selection from a two-objective front.
//!
//! Points are sorted by compactness, min-max normalized, and measured
//! against the chord joining the front's extremes. If the front starts by
//! dipping below the chord, the deepest point of that initial dip is the
//! knee; otherwise the minimum-compactness member wins.

use serde::{Deserialize, Serialize};

use crate::error::{EcmError, Result};
use crate::scalar::Scalar;

/// Why a particular front member was selected.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SelectionReason {
    KneeBelowChord,
    MinF1FrontAbove,
    DegenerateSmallFront,
}

/// Min-max ranges used to normalize the front before measuring distances.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Normalization {
    pub g1_min: f64,
    pub g1_range: f64,
    pub g2_min: f64,
    pub g2_range: f64,
}

/// Outcome of `select_tradeoff`. `chosen_index` and `signed_distances`
/// refer to the front in its input order; negative distance means below
/// the chord. `deeper_knees` lists points past the first re-crossing that
/// dip further below the chord than the chosen one.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SelectionReport {
    pub chosen_index: usize,
    pub reason: SelectionReason,
    pub signed_distances: Vec<f64>,
    pub normalization: Normalization,
    pub deeper_knees: Vec<usize>,
}

fn norm_coord(v: f64, min: f64, range: f64) -> f64 {
    if range > 0.0 {
        (v - min) / range
    } else {
        0.0
    }
}

/// Picks the trade-off member of a minimized (g1, g2) front.
///
/// The front is sorted by g1, normalized to the unit square, and compared
/// against the chord from the min-g1 point to the max-g1 point. If any of
/// the three points following the min-g1 endpoint lies on or below the
/// chord, the walk from that endpoint collects points while they stay
/// strictly below and stops at the first touch or crossing; the deepest
/// collected point is chosen. Otherwise (or when the walk collects
/// nothing) the min-g1 member is chosen. Fronts with fewer than four
/// points always take the min-g1 member.
pub fn select_tradeoff<S: Scalar>(front: &[[S; 2]]) -> Result<SelectionReport> {
    if front.is_empty() {
        return Err(EcmError::EmptyFront);
    }
    let k = front.len();
    let mut order: Vec<usize> = (0..k).collect();
    order.sort_by(|&a, &b| {
        front[a][0]
            .partial_cmp(&front[b][0])
            .unwrap()
            .then(front[a][1].partial_cmp(&front[b][1]).unwrap())
    });
    let pts: Vec<[f64; 2]> = order
        .iter()
        .map(|&i| [front[i][0].to64(), front[i][1].to64()])
        .collect();

    let g1_min = pts.iter().map(|p| p[0]).fold(f64::INFINITY, f64::min);
    let g1_max = pts.iter().map(|p| p[0]).fold(f64::NEG_INFINITY, f64::max);
    let g2_min = pts.iter().map(|p| p[1]).fold(f64::INFINITY, f64::min);
    let g2_max = pts.iter().map(|p| p[1]).fold(f64::NEG_INFINITY, f64::max);
    let normalization = Normalization {
        g1_min,
        g1_range: g1_max - g1_min,
        g2_min,
        g2_range: g2_max - g2_min,
    };
    let unit: Vec<[f64; 2]> = pts
        .iter()
        .map(|p| {
            [
                norm_coord(p[0], g1_min, normalization.g1_range),
                norm_coord(p[1], g2_min, normalization.g2_range),
            ]
        })
        .collect();

    let a = unit[0];
    let b = unit[k - 1];
    let chord_len = ((b[0] - a[0]).powi(2) + (b[1] - a[1]).powi(2)).sqrt();
    let signed_sorted: Vec<f64> = unit
        .iter()
        .map(|p| {
            let cross = (b[0] - a[0]) * (p[1] - a[1]) - (b[1] - a[1]) * (p[0] - a[0]);
            if chord_len > 0.0 {
                cross / chord_len
            } else {
                0.0
            }
        })
        .collect();
    let mut signed_distances = vec![0.0; k];
    for (pos, &i) in order.iter().enumerate() {
        signed_distances[i] = signed_sorted[pos];
    }

    let report = |chosen_sorted: usize, reason, deeper: Vec<usize>| SelectionReport {
        chosen_index: order[chosen_sorted],
        reason,
        signed_distances: signed_distances.clone(),
        normalization,
        deeper_knees: deeper,
    };

    if k < 4 {
        return Ok(report(0, SelectionReason::DegenerateSmallFront, Vec::new()));
    }

    let lead_touches = (1..=3).any(|i| signed_sorted[i] <= 0.0);
    if lead_touches {
        let mut stop = 1;
        while stop < k && signed_sorted[stop] < 0.0 {
            stop += 1;
        }
        if stop > 1 {
            let chosen = (1..stop)
                .max_by(|&x, &y| {
                    signed_sorted[x]
                        .abs()
                        .partial_cmp(&signed_sorted[y].abs())
                        .unwrap()
                })
                .unwrap();
            let depth = signed_sorted[chosen].abs();
            let deeper: Vec<usize> = (stop..k)
                .filter(|&i| signed_sorted[i] < 0.0 && signed_sorted[i].abs() > depth)
                .map(|i| order[i])
                .collect();
            return Ok(report(chosen, SelectionReason::KneeBelowChord, deeper));
        }
    }
    Ok(report(0, SelectionReason::MinF1FrontAbove, Vec::new()))
}
