//! Declarative experiment configuration.
//!
//! A config is a single TOML document: experiment-wide keys at the top,
//! a `[[datasets]]` array, and one optional section per method family.
//! Every key except `output_dir` and the dataset list has a default, so a
//! minimal config is four lines long.

use std::path::PathBuf;

use ecm_core::fuzzy::ExponentForm;
use ecm_core::moead::MoeadParams;
use ecm_core::nsga2::Nsga2Params;
use serde::{Deserialize, Serialize};

use crate::error::{CliError, Result};
use crate::experiment::Method;

/// Root of the experiment config file.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Config {
    /// Directory all artifacts are written under; created if missing.
    pub output_dir: PathBuf,
    /// Cluster count used when a dataset does not override it.
    #[serde(default = "default_c")]
    pub c: usize,
    /// Engine seeds; one seeded run per seed for each population method.
    #[serde(default = "default_seeds")]
    pub seeds: Vec<u64>,
    /// Methods to run, by name: `fcm`, `mei`, `ecm-nsga2`, `ecm-moead`,
    /// `moga`.
    #[serde(default = "default_methods")]
    pub methods: Vec<String>,
    /// How the squared distance enters the membership exponent.
    #[serde(default)]
    pub exponent_form: ExponentForm,
    #[serde(default)]
    pub datasets: Vec<DatasetConfig>,
    #[serde(default)]
    pub fcm: FcmConfig,
    #[serde(default)]
    pub mei: MeiConfig,
    /// Shared by `ecm-nsga2` and `moga`.
    #[serde(default)]
    pub nsga2: Nsga2Config,
    #[serde(default)]
    pub moead: MoeadConfig,
}

/// One dataset: a generator name, or a CSV path with an optional label
/// column.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DatasetConfig {
    /// Built-in generator name, or a label for a CSV source.
    pub name: String,
    /// CSV file path; absent means `name` must be a built-in generator.
    #[serde(default)]
    pub path: Option<PathBuf>,
    /// 0-based column holding ground-truth labels in the CSV.
    #[serde(default)]
    pub label_column: Option<usize>,
    /// Generator seed for built-in datasets.
    #[serde(default = "default_one")]
    pub seed: u64,
    /// Per-dataset cluster count override.
    #[serde(default)]
    pub c: Option<usize>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FcmConfig {
    #[serde(default = "default_restarts")]
    pub restarts: u64,
    #[serde(default = "default_m")]
    pub m: f64,
    #[serde(default = "default_max_iter")]
    pub max_iter: usize,
    #[serde(default = "default_tol")]
    pub tol: f64,
}

impl Default for FcmConfig {
    fn default() -> Self {
        FcmConfig {
            restarts: default_restarts(),
            m: default_m(),
            max_iter: default_max_iter(),
            tol: default_tol(),
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MeiConfig {
    #[serde(default = "default_restarts")]
    pub restarts: u64,
    #[serde(default = "default_max_iter")]
    pub max_iter: usize,
    #[serde(default = "default_tol")]
    pub tol: f64,
}

impl Default for MeiConfig {
    fn default() -> Self {
        MeiConfig {
            restarts: default_restarts(),
            max_iter: default_max_iter(),
            tol: default_tol(),
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Nsga2Config {
    #[serde(default = "default_pop")]
    pub pop: usize,
    #[serde(default = "default_fe")]
    pub fe: usize,
    #[serde(default = "default_pool")]
    pub pool: f64,
    #[serde(default = "default_tour")]
    pub tour: usize,
    #[serde(default = "default_eta")]
    pub mu: f64,
    #[serde(default = "default_eta")]
    pub mum: f64,
}

impl Default for Nsga2Config {
    fn default() -> Self {
        Nsga2Config {
            pop: default_pop(),
            fe: default_fe(),
            pool: default_pool(),
            tour: default_tour(),
            mu: default_eta(),
            mum: default_eta(),
        }
    }
}

impl Nsga2Config {
    pub fn params(&self, seed: u64) -> Nsga2Params {
        Nsga2Params {
            pop: self.pop,
            fe_budget: self.fe,
            pool: self.pool,
            tour: self.tour,
            mu_sbx: self.mu,
            mum: self.mum,
            seed,
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MoeadConfig {
    #[serde(default = "default_pop")]
    pub pop: usize,
    #[serde(default = "default_fe")]
    pub fe: usize,
    #[serde(default = "default_t")]
    pub t: usize,
    #[serde(default = "default_f")]
    pub f: f64,
    #[serde(default = "default_f")]
    pub cr: f64,
}

impl Default for MoeadConfig {
    fn default() -> Self {
        MoeadConfig {
            pop: default_pop(),
            fe: default_fe(),
            t: default_t(),
            f: default_f(),
            cr: default_f(),
        }
    }
}

impl MoeadConfig {
    pub fn params(&self, seed: u64) -> MoeadParams {
        MoeadParams {
            pop: self.pop,
            fe_budget: self.fe,
            t_neighbors: self.t,
            f_weight: self.f,
            cr: self.cr,
            seed,
        }
    }
}

fn default_c() -> usize {
    4
}

fn default_seeds() -> Vec<u64> {
    vec![1, 2, 3, 4, 5]
}

fn default_methods() -> Vec<String> {
    ["fcm", "mei", "ecm-nsga2", "ecm-moead", "moga"]
        .iter()
        .map(|s| s.to_string())
        .collect()
}

fn default_one() -> u64 {
    1
}

fn default_restarts() -> u64 {
    50
}

fn default_m() -> f64 {
    2.0
}

fn default_max_iter() -> usize {
    5000
}

fn default_tol() -> f64 {
    1e-16
}

fn default_pop() -> usize {
    50
}

fn default_fe() -> usize {
    5000
}

fn default_pool() -> f64 {
    0.5
}

fn default_tour() -> usize {
    2
}

fn default_eta() -> f64 {
    20.0
}

fn default_t() -> usize {
    50
}

fn default_f() -> f64 {
    0.5
}

impl Config {
    /// Parses and validates a TOML document.
    pub fn from_toml(text: &str) -> Result<Config> {
        let cfg: Config =
            toml::from_str(text).map_err(|e| CliError::InvalidConfig(e.to_string()))?;
        cfg.validate()?;
        Ok(cfg)
    }

    /// Reads a config file.
    pub fn from_path(path: &std::path::Path) -> Result<Config> {
        let text = std::fs::read_to_string(path)?;
        Config::from_toml(&text)
    }

    /// Parsed method list in config order.
    pub fn method_list(&self) -> Result<Vec<Method>> {
        self.methods.iter().map(|s| Method::parse(s)).collect()
    }

    /// Cluster count for one dataset entry.
    pub fn c_for(&self, ds: &DatasetConfig) -> usize {
        ds.c.unwrap_or(self.c)
    }

    fn validate(&self) -> Result<()> {
        if self.methods.is_empty() {
            return Err(CliError::InvalidConfig("method list is empty".into()));
        }
        if self.datasets.is_empty() {
            return Err(CliError::InvalidConfig("no datasets given".into()));
        }
        if self.seeds.is_empty() {
            return Err(CliError::InvalidConfig("seed list is empty".into()));
        }
        let methods = self.method_list()?;
        let moo = methods.iter().any(|m| m.is_moo());
        for ds in &self.datasets {
            let c = self.c_for(ds);
            if moo && c < 2 {
                return Err(CliError::InvalidConfig(format!(
                    "dataset {}: c = {c} but population methods need c >= 2",
                    ds.name
                )));
            }
            if ds.path.is_none() && ds.label_column.is_some() {
                return Err(CliError::InvalidConfig(format!(
                    "dataset {}: label_column applies only to CSV sources",
                    ds.name
                )));
            }
        }
        if self.fcm.restarts == 0 || self.mei.restarts == 0 {
            return Err(CliError::InvalidConfig("restarts must be >= 1".into()));
        }
        let mut seen = std::collections::BTreeSet::new();
        for ds in &self.datasets {
            if !seen.insert(&ds.name) {
                return Err(CliError::InvalidConfig(format!(
                    "duplicate dataset name: {}",
                    ds.name
                )));
            }
        }
        Ok(())
    }
}
