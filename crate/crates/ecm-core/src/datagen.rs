//! Seeded synthetic Gaussian-mixture datasets, including the ten built-in
//! benchmark sets (proximity1-5 shrink the gap between four blobs,
//! spread1-5 grow the first blob's spread).
//!
//! Sampling convention, fixed so a seed fully determines the dataset:
//! uniforms are `(next_u64() >> 11) * 2^-53` from ChaCha8 seeded with the
//! given value; each standard normal consumes two uniforms `u1 = 1 - u`
//! (so the log argument stays positive) and `u2`, returning
//! `sqrt(-2 ln u1) * cos(2*pi*u2)`; draws run component by component,
//! point by point, dimension by dimension.

use rand::RngCore;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::data::{Dataset, LabeledDataset};
use crate::error::{EcmError, Result};
use crate::scalar::Scalar;

/// One axis-aligned Gaussian blob.
#[derive(Debug, Clone, PartialEq)]
pub struct GaussianComponent {
    pub mean: Vec<f64>,
    pub stdev: Vec<f64>,
    pub count: usize,
}

/// A mixture of Gaussian components sharing one dimensionality.
#[derive(Debug, Clone, PartialEq)]
pub struct MixtureSpec {
    pub components: Vec<GaussianComponent>,
}

impl MixtureSpec {
    fn validate(&self) -> Result<()> {
        if self.components.is_empty() {
            return Err(EcmError::InvalidParams(
                "mixture needs at least one component".into(),
            ));
        }
        let d = self.components[0].mean.len();
        for (k, comp) in self.components.iter().enumerate() {
            if comp.mean.len() != d || comp.stdev.len() != d || d == 0 {
                return Err(EcmError::InvalidParams(format!(
                    "component {k} has inconsistent dimensionality"
                )));
            }
            if comp.count == 0 {
                return Err(EcmError::InvalidParams(format!(
                    "component {k} has zero count"
                )));
            }
            if comp.stdev.iter().any(|&s| s <= 0.0 || s.is_nan()) {
                return Err(EcmError::InvalidParams(format!(
                    "component {k} has a non-positive stdev"
                )));
            }
        }
        Ok(())
    }
}

fn unit_uniform<R: RngCore>(rng: &mut R) -> f64 {
    (rng.next_u64() >> 11) as f64 * 2.0f64.powi(-53)
}

fn standard_normal<R: RngCore>(rng: &mut R) -> f64 {
    let u1 = 1.0 - unit_uniform(rng);
    let u2 = unit_uniform(rng);
    (-2.0 * u1.ln()).sqrt() * (std::f64::consts::TAU * u2).cos()
}

/// Samples the mixture; labels are component indices in spec order.
pub fn gaussian_mixture<S: Scalar>(spec: &MixtureSpec, seed: u64) -> Result<LabeledDataset<S>> {
    spec.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut rows = Vec::new();
    let mut labels = Vec::new();
    for (k, comp) in spec.components.iter().enumerate() {
        let d = comp.mean.len();
        for _ in 0..comp.count {
            let mut row = Vec::with_capacity(d);
            for j in 0..d {
                let z = standard_normal(&mut rng);
                row.push(S::of(comp.mean[j] + comp.stdev[j] * z));
            }
            rows.push(row);
            labels.push(k);
        }
    }
    LabeledDataset::new(Dataset::from_rows(&rows)?, labels)
}

/// The ten built-in dataset names.
pub const BUILTIN_NAMES: [&str; 10] = [
    "proximity1",
    "proximity2",
    "proximity3",
    "proximity4",
    "proximity5",
    "spread1",
    "spread2",
    "spread3",
    "spread4",
    "spread5",
];

fn four_blobs(means: [[f64; 2]; 4], stdevs: [[f64; 2]; 4]) -> MixtureSpec {
    MixtureSpec {
        components: means
            .iter()
            .zip(stdevs.iter())
            .map(|(m, s)| GaussianComponent {
                mean: m.to_vec(),
                stdev: s.to_vec(),
                count: 100,
            })
            .collect(),
    }
}

/// The generating spec of one built-in dataset.
pub fn builtin_spec(name: &str) -> Result<MixtureSpec> {
    let unit = [[1.0, 1.0]; 4];
    let corner_means = [[0.0, 0.0], [0.0, 10.0], [10.0, 0.0], [10.0, 10.0]];
    let spread = |s: f64| {
        let mut stdevs = unit;
        stdevs[0] = [s, s];
        four_blobs(corner_means, stdevs)
    };
    let proximity = |a: f64, b: f64| four_blobs([[a, a], [a, b], [b, a], [b, b]], unit);
    match name {
        "proximity1" => Ok(proximity(4.0, 10.0)),
        "proximity2" => Ok(proximity(4.5, 9.5)),
        "proximity3" => Ok(proximity(5.0, 9.0)),
        "proximity4" => Ok(proximity(5.5, 8.5)),
        "proximity5" => Ok(proximity(6.0, 8.0)),
        "spread1" => Ok(spread(1.0)),
        "spread2" => Ok(spread(1.5)),
        "spread3" => Ok(spread(2.0)),
        "spread4" => Ok(spread(2.5)),
        "spread5" => Ok(spread(3.0)),
        other => Err(EcmError::UnknownName(format!(
            "'{other}'; expected one of {}",
            BUILTIN_NAMES.join(", ")
        ))),
    }
}

/// Generates a built-in dataset by name.
pub fn builtin<S: Scalar>(name: &str, seed: u64) -> Result<LabeledDataset<S>> {
    gaussian_mixture(&builtin_spec(name)?, seed)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn tight_component_collapses_to_mean() {
        let spec = MixtureSpec {
            components: vec![GaussianComponent {
                mean: vec![3.0, -2.0],
                stdev: vec![1e-9, 1e-9],
                count: 50,
            }],
        };
        let ds: LabeledDataset<f64> = gaussian_mixture(&spec, 7).unwrap();
        for row in ds.dataset.points().rows() {
            assert!((row[0] - 3.0).abs() < 1e-6);
            assert!((row[1] + 2.0).abs() < 1e-6);
        }
    }

    #[test]
    fn proximity1_shape_and_labels() {
        let ds: LabeledDataset<f64> = builtin("proximity1", 1).unwrap();
        assert_eq!(ds.dataset.n_points(), 400);
        assert_eq!(ds.dataset.n_dims(), 2);
        let mut hist = [0usize; 4];
        for &l in &ds.labels {
            hist[l] += 1;
        }
        assert_eq!(hist, [100; 4]);
    }

    #[test]
    fn generation_is_deterministic() {
        let a: LabeledDataset<f64> = builtin("spread3", 42).unwrap();
        let b: LabeledDataset<f64> = builtin("spread3", 42).unwrap();
        assert_eq!(a.dataset.points(), b.dataset.points());
        assert_eq!(a.labels, b.labels);
        let c: LabeledDataset<f64> = builtin("spread3", 43).unwrap();
        assert_ne!(a.dataset.points(), c.dataset.points());
    }

    #[test]
    fn unknown_name_rejected() {
        assert!(matches!(
            builtin_spec("proximity6"),
            Err(EcmError::UnknownName(_))
        ));
    }

    #[test]
    fn builtin_specs_match_table() {
        let s1 = builtin_spec("spread1").unwrap();
        assert!(s1.components.iter().all(|c| c.stdev == vec![1.0, 1.0]));
        assert_eq!(s1.components[1].mean, vec![0.0, 10.0]);
        let s5 = builtin_spec("spread5").unwrap();
        assert_eq!(s5.components[0].stdev, vec![3.0, 3.0]);
        assert_eq!(s5.components[1].stdev, vec![1.0, 1.0]);
        let p4 = builtin_spec("proximity4").unwrap();
        assert_eq!(p4.components[0].mean, vec![5.5, 5.5]);
        assert_eq!(p4.components[3].mean, vec![8.5, 8.5]);
        let p5 = builtin_spec("proximity5").unwrap();
        assert_eq!(p5.components[1].mean, vec![6.0, 8.0]);
        for name in BUILTIN_NAMES {
            let spec = builtin_spec(name).unwrap();
            assert_eq!(spec.components.len(), 4);
            assert!(spec.components.iter().all(|c| c.count == 100));
        }
    }

    #[test]
    fn component_means_obey_clt_bound() {
        let spec = builtin_spec("proximity1").unwrap();
        for seed in 0..20 {
            let ds: LabeledDataset<f64> = gaussian_mixture(&spec, seed).unwrap();
            let pts = ds.dataset.points();
            let mut offset = 0;
            for comp in &spec.components {
                for j in 0..2 {
                    let mean: f64 = (offset..offset + comp.count)
                        .map(|i| pts[(i, j)])
                        .sum::<f64>()
                        / comp.count as f64;
                    let bound = 4.0 * comp.stdev[j] / (comp.count as f64).sqrt();
                    assert!(
                        (mean - comp.mean[j]).abs() < bound,
                        "seed {seed}: component mean {mean} vs {} (bound {bound})",
                        comp.mean[j]
                    );
                }
                offset += comp.count;
            }
        }
    }

    #[test]
    fn sample_spread_is_plausible() {
        let ds: LabeledDataset<f64> = builtin("proximity1", 1).unwrap();
        let pts = ds.dataset.points();
        for k in 0..4 {
            for j in 0..2 {
                let vals: Vec<f64> = (k * 100..(k + 1) * 100).map(|i| pts[(i, j)]).collect();
                let mean = vals.iter().sum::<f64>() / 100.0;
                let var = vals.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>() / 99.0;
                assert!(
                    var.sqrt() > 0.8 && var.sqrt() < 1.2,
                    "component {k} dim {j} std {}",
                    var.sqrt()
                );
            }
        }
    }

    #[test]
    fn invalid_specs_rejected() {
        let empty = MixtureSpec { components: vec![] };
        assert!(gaussian_mixture::<f64>(&empty, 1).is_err());
        let bad_std = MixtureSpec {
            components: vec![GaussianComponent {
                mean: vec![0.0],
                stdev: vec![0.0],
                count: 5,
            }],
        };
        assert!(gaussian_mixture::<f64>(&bad_std, 1).is_err());
        let ragged = MixtureSpec {
            components: vec![
                GaussianComponent {
                    mean: vec![0.0, 1.0],
                    stdev: vec![1.0, 1.0],
                    count: 5,
                },
                GaussianComponent {
                    mean: vec![0.0],
                    stdev: vec![1.0],
                    count: 5,
                },
            ],
        };
        assert!(gaussian_mixture::<f64>(&ragged, 1).is_err());
    }
}
