//! Experiment driver.
//!
//! `run_experiment` resolves a [`Config`] into seeded method runs, writes
//! every front and selection report under the output directory, and returns
//! a deterministic [`Report`] (also written as `report.json`). Wall times go
//! to a separate `timing.json` so reruns of the same config produce a
//! byte-identical report.
//!
//! Layout under `output_dir`:
//!
//! ```text
//! report.json
//! timing.json
//! <dataset>/pareto_overlay.csv
//! <dataset>/<method>/seed<k>/front.csv          population methods
//! <dataset>/<method>/seed<k>/selection.json     entropy-objective engines
//! <dataset>/<method>/seed<k>/chosen.csv
//! <dataset>/<method>/seed<k>/population_front.csv   ecm-moead
//! <dataset>/<method>/seed<k>/ecm_front.csv          moga (re-scored)
//! <dataset>/<method>/front.csv                  restart methods (best run)
//! <dataset>/<method>/clustering.csv
//! ```
//!
//! Cross-method conventions: every method contributes a front in the
//! minimized entropy-objective plane `(g1, g2) = (f1, -f2)` for overlays and
//! the epsilon-indicator matrix (`moga` members are re-scored, restart
//! methods contribute their single fitted solution). Gap-spacing diversity
//! is computed per seed on equal-cardinality sets of distinct objective
//! vectors: the returned front for `ecm-nsga2` and `moga` (re-scored
//! plane), and the non-dominated subset of the final population for
//! `ecm-moead`, whose unbounded external archive grows several hundred
//! points deep and would otherwise make the spacing statistic a measure of
//! archive density rather than distribution quality. Fronts with fewer than
//! two points report spacing 0.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::fs;
use std::path::Path;
use std::time::Instant;

use ecm_core::ao::{fcm_fit, mei_fit, AoParams};
use ecm_core::data::{load_dataset, normalize_minmax, Provenance};
use ecm_core::datagen::builtin;
use ecm_core::fuzzy::SigmaParam;
use ecm_core::metrics::{adjusted_rand_index, epsilon_indicator, schott_spacing};
use ecm_core::moead::moead_run;
use ecm_core::moga::{moga_decode, moga_run};
use ecm_core::nsga2::{dominates, nsga2_run};
use ecm_core::select::select_tradeoff;
use ecm_core::{Clustering64, Dataset64, EcmProblem64, Solution64};
use rayon::prelude::*;
use serde::Serialize;

use crate::config::{Config, DatasetConfig};
use crate::error::{CliError, Result};

/// A runnable method, by config name.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum Method {
    Fcm,
    Mei,
    EcmNsga2,
    EcmMoead,
    Moga,
}

impl Method {
    pub fn parse(name: &str) -> Result<Method> {
        match name {
            "fcm" => Ok(Method::Fcm),
            "mei" => Ok(Method::Mei),
            "ecm-nsga2" => Ok(Method::EcmNsga2),
            "ecm-moead" => Ok(Method::EcmMoead),
            "moga" => Ok(Method::Moga),
            other => Err(CliError::UnknownMethod(other.to_string())),
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Method::Fcm => "fcm",
            Method::Mei => "mei",
            Method::EcmNsga2 => "ecm-nsga2",
            Method::EcmMoead => "ecm-moead",
            Method::Moga => "moga",
        }
    }

    /// Population methods run once per engine seed; the others restart.
    pub fn is_moo(self) -> bool {
        matches!(self, Method::EcmNsga2 | Method::EcmMoead | Method::Moga)
    }
}

/// One loaded dataset with its entropy-objective instance.
pub struct Instance {
    pub name: String,
    pub data: Dataset64,
    pub labels: Option<Vec<usize>>,
    pub c: usize,
    pub problem: EcmProblem64,
}

/// Per-method metrics for one dataset.
#[derive(Debug, Clone, Serialize)]
pub struct MethodReport {
    /// Best ARI over all runs (absent when the dataset has no labels).
    pub max_ari: Option<f64>,
    /// One entry per engine seed; restart methods collapse to one entry.
    pub per_seed_max_ari: Vec<Option<f64>>,
    /// ARI of the knee-selected member, averaged over seeds (engines only).
    pub chosen_ari_mean: Option<f64>,
    pub per_seed_chosen_ari: Vec<Option<f64>>,
    /// Gap-spacing diversity, mean over seeds (see module doc for the basis).
    pub ssm_mean: f64,
    pub per_seed_ssm: Vec<f64>,
    /// Spacing of the native (j2, xb) front; `moga` only.
    pub ssm_own_space_mean: Option<f64>,
    pub front_sizes: Vec<usize>,
    /// Evaluator calls per run (population methods only).
    pub evaluations: Vec<usize>,
}

/// Everything `run_experiment` learned about one dataset.
#[derive(Debug, Clone, Serialize)]
pub struct DatasetReport {
    pub n_points: usize,
    pub n_dims: usize,
    pub c: usize,
    pub sigma: f64,
    pub methods: BTreeMap<String, MethodReport>,
    /// Mean epsilon indicator per ordered pair: `ei_mean[candidate][control]`.
    pub ei_mean: BTreeMap<String, BTreeMap<String, f64>>,
}

/// Whole-experiment report; serialized as `report.json`.
#[derive(Debug, Clone, Serialize)]
pub struct Report {
    pub version: String,
    pub config: Config,
    pub datasets: BTreeMap<String, DatasetReport>,
    /// Average rank per method over labeled datasets (1 = best max ARI).
    pub avg_ranks: BTreeMap<String, f64>,
}

#[derive(Debug, Clone, Serialize)]
struct Timing {
    per_method_seconds: BTreeMap<String, BTreeMap<String, f64>>,
    total_seconds: f64,
}

struct MethodRun {
    report: MethodReport,
    /// Entropy-plane front per seed tag, for overlays and the EI matrix.
    ecm_fronts: Vec<Vec<[f64; 2]>>,
    /// Seed column values for the overlay file.
    seed_tags: Vec<u64>,
    seconds: f64,
}

impl MethodRun {
    fn front_at(&self, k: usize) -> &[[f64; 2]] {
        &self.ecm_fronts[k.min(self.ecm_fronts.len() - 1)]
    }
}

/// Loads, normalizes, and wraps one configured dataset.
pub fn load_instance(cfg: &Config, ds: &DatasetConfig) -> Result<Instance> {
    let (raw, labels) = match &ds.path {
        Some(path) => load_dataset::<f64>(path, ds.label_column)?,
        None => {
            let lds = builtin::<f64>(&ds.name, ds.seed)?;
            (lds.dataset, Some(lds.labels))
        }
    };
    let data = normalize_minmax(&raw);
    let c = cfg.c_for(ds);
    let problem = EcmProblem64::new(&data, c, cfg.exponent_form)?;
    Ok(Instance {
        name: ds.name.clone(),
        data,
        labels,
        c,
        problem,
    })
}

fn ssm0(objs: &[[f64; 2]]) -> f64 {
    if objs.len() < 2 {
        return 0.0;
    }
    schott_spacing(objs).expect("two or more points")
}

fn dedup_objs(objs: &[[f64; 2]]) -> Vec<[f64; 2]> {
    let mut v = objs.to_vec();
    v.sort_by(|a, b| a.partial_cmp(b).expect("finite objectives"));
    v.dedup();
    v
}

/// Deduplicated non-dominated objective pairs of a population.
pub fn population_front(pop: &[Solution64]) -> Vec<[f64; 2]> {
    let nd: Vec<[f64; 2]> = pop
        .iter()
        .map(|s| s.objectives)
        .filter(|o| !pop.iter().any(|q| dominates(&q.objectives, o)))
        .collect();
    dedup_objs(&nd)
}

fn ari_opt(truth: &Option<Vec<usize>>, labels: &[usize]) -> Result<Option<f64>> {
    match truth {
        Some(t) => Ok(Some(adjusted_rand_index(t, labels)?)),
        None => Ok(None),
    }
}

fn front_csv(objs: &[[f64; 2]], header: &str) -> String {
    let mut out = String::from(header);
    out.push('\n');
    for o in objs {
        let _ = writeln!(out, "{},{}", o[0], o[1]);
    }
    out
}

fn mean(v: &[f64]) -> f64 {
    if v.is_empty() {
        return 0.0;
    }
    v.iter().sum::<f64>() / v.len() as f64
}

fn mean_opt(v: &[Option<f64>]) -> Option<f64> {
    let known: Vec<f64> = v.iter().flatten().copied().collect();
    if known.is_empty() || known.len() != v.len() {
        return None;
    }
    Some(mean(&known))
}

fn run_restart_method(
    cfg: &Config,
    inst: &Instance,
    method: Method,
    dir: &Path,
) -> Result<MethodRun> {
    let started = Instant::now();
    let restarts = match method {
        Method::Fcm => cfg.fcm.restarts,
        _ => cfg.mei.restarts,
    };
    let mut best: Option<(f64, u64, Clustering64)> = None;
    for restart in 1..=restarts {
        let cl = match method {
            Method::Fcm => {
                let p = AoParams {
                    c: inst.c,
                    m: cfg.fcm.m,
                    max_iter: cfg.fcm.max_iter,
                    tol: cfg.fcm.tol,
                    seed: restart,
                };
                fcm_fit(&inst.data, &p)?
            }
            _ => {
                let sp = SigmaParam::new(inst.problem.sigma_effective())?;
                mei_fit(
                    &inst.data,
                    inst.c,
                    sp,
                    cfg.mei.max_iter,
                    cfg.mei.tol,
                    restart,
                )?
            }
        };
        // Rank restarts by ARI when truth is known, else by compactness.
        let key = match ari_opt(&inst.labels, &cl.labels())? {
            Some(a) => a,
            None => -cl.objectives[0],
        };
        if best.as_ref().is_none_or(|(k, _, _)| key > *k) {
            best = Some((key, restart, cl));
        }
    }
    let (_, restart, cl) = best.expect("restarts >= 1");
    fs::create_dir_all(dir)?;
    fs::write(dir.join("front.csv"), front_csv(&[cl.objectives], "g1,g2"))?;
    fs::write(dir.join("clustering.csv"), cl.to_csv())?;
    let ari = ari_opt(&inst.labels, &cl.labels())?;
    Ok(MethodRun {
        report: MethodReport {
            max_ari: ari,
            per_seed_max_ari: vec![ari],
            chosen_ari_mean: None,
            per_seed_chosen_ari: vec![],
            ssm_mean: 0.0,
            per_seed_ssm: vec![0.0],
            ssm_own_space_mean: None,
            front_sizes: vec![1],
            evaluations: vec![],
        },
        ecm_fronts: vec![vec![cl.objectives]],
        seed_tags: vec![restart],
        seconds: started.elapsed().as_secs_f64(),
    })
}

fn run_engine_method(
    cfg: &Config,
    inst: &Instance,
    method: Method,
    dir: &Path,
) -> Result<MethodRun> {
    let started = Instant::now();
    let mut per_seed_max_ari = Vec::new();
    let mut per_seed_chosen_ari = Vec::new();
    let mut per_seed_ssm = Vec::new();
    let mut front_sizes = Vec::new();
    let mut evaluations = Vec::new();
    let mut ecm_fronts = Vec::new();
    for &seed in &cfg.seeds {
        let seed_dir = dir.join(format!("seed{seed}"));
        fs::create_dir_all(&seed_dir)?;
        let (front, evals, ssm_objs) = match method {
            Method::EcmNsga2 => {
                let p = cfg.nsga2.params(seed);
                let res = nsga2_run(|g| inst.problem.evaluate(g), inst.problem.bounds(), &p)?;
                let objs: Vec<[f64; 2]> = res.front.iter().map(|s| s.objectives).collect();
                (res.front, res.evaluations, dedup_objs(&objs))
            }
            _ => {
                let p = cfg.moead.params(seed);
                let res = moead_run(|g| inst.problem.evaluate(g), inst.problem.bounds(), &p)?;
                let pf = population_front(&res.final_population);
                fs::write(
                    seed_dir.join("population_front.csv"),
                    front_csv(&pf, "g1,g2"),
                )?;
                (res.front, res.evaluations, pf)
            }
        };
        let objs: Vec<[f64; 2]> = front.iter().map(|s| s.objectives).collect();
        fs::write(seed_dir.join("front.csv"), front_csv(&objs, "g1,g2"))?;

        let provenance = Provenance {
            method: method.name().to_string(),
            seed,
            params: format!("c={} form={:?}", inst.c, cfg.exponent_form),
        };
        let mut best_ari: Option<f64> = None;
        for member in &front {
            let cl = inst.problem.decode(&member.genes, provenance.clone());
            if let Some(a) = ari_opt(&inst.labels, &cl.labels())? {
                best_ari = Some(best_ari.map_or(a, |b| b.max(a)));
            }
        }
        per_seed_max_ari.push(best_ari);

        let sel = select_tradeoff(&objs)?;
        let chosen = inst
            .problem
            .decode(&front[sel.chosen_index].genes, provenance);
        fs::write(
            seed_dir.join("selection.json"),
            serde_json::to_string_pretty(&sel)?,
        )?;
        fs::write(seed_dir.join("chosen.csv"), chosen.to_csv())?;
        per_seed_chosen_ari.push(ari_opt(&inst.labels, &chosen.labels())?);

        per_seed_ssm.push(ssm0(&ssm_objs));
        front_sizes.push(objs.len());
        evaluations.push(evals);
        ecm_fronts.push(objs);
    }
    Ok(MethodRun {
        report: MethodReport {
            max_ari: per_seed_max_ari
                .iter()
                .flatten()
                .copied()
                .fold(None, |b, a| Some(b.map_or(a, |x: f64| x.max(a)))),
            per_seed_max_ari,
            chosen_ari_mean: mean_opt(&per_seed_chosen_ari),
            per_seed_chosen_ari,
            ssm_mean: mean(&per_seed_ssm),
            per_seed_ssm,
            ssm_own_space_mean: None,
            front_sizes,
            evaluations,
        },
        ecm_fronts,
        seed_tags: cfg.seeds.clone(),
        seconds: started.elapsed().as_secs_f64(),
    })
}

fn run_moga(cfg: &Config, inst: &Instance, dir: &Path) -> Result<MethodRun> {
    let started = Instant::now();
    let mut per_seed_max_ari = Vec::new();
    let mut per_seed_ssm = Vec::new();
    let mut per_seed_ssm_own = Vec::new();
    let mut front_sizes = Vec::new();
    let mut evaluations = Vec::new();
    let mut ecm_fronts = Vec::new();
    for &seed in &cfg.seeds {
        let seed_dir = dir.join(format!("seed{seed}"));
        fs::create_dir_all(&seed_dir)?;
        let p = cfg.nsga2.params(seed);
        let mg = moga_run(&inst.data, inst.c, cfg.exponent_form, &p)?;
        let own: Vec<[f64; 2]> = mg.result.front.iter().map(|s| s.objectives).collect();
        fs::write(seed_dir.join("front.csv"), front_csv(&own, "j2,xb"))?;
        fs::write(
            seed_dir.join("ecm_front.csv"),
            front_csv(&mg.ecm_objectives, "g1,g2"),
        )?;

        let mut best_ari: Option<f64> = None;
        for member in &mg.result.front {
            let provenance = Provenance {
                method: Method::Moga.name().to_string(),
                seed,
                params: format!("c={}", inst.c),
            };
            let cl = moga_decode(&inst.data, inst.c, &member.genes, provenance);
            if let Some(a) = ari_opt(&inst.labels, &cl.labels())? {
                best_ari = Some(best_ari.map_or(a, |b| b.max(a)));
            }
        }
        per_seed_max_ari.push(best_ari);

        per_seed_ssm.push(ssm0(&dedup_objs(&mg.ecm_objectives)));
        per_seed_ssm_own.push(ssm0(&dedup_objs(&own)));
        front_sizes.push(own.len());
        evaluations.push(mg.result.evaluations);
        ecm_fronts.push(mg.ecm_objectives);
    }
    Ok(MethodRun {
        report: MethodReport {
            max_ari: per_seed_max_ari
                .iter()
                .flatten()
                .copied()
                .fold(None, |b, a| Some(b.map_or(a, |x: f64| x.max(a)))),
            per_seed_max_ari,
            chosen_ari_mean: None,
            per_seed_chosen_ari: vec![],
            ssm_mean: mean(&per_seed_ssm),
            per_seed_ssm,
            ssm_own_space_mean: Some(mean(&per_seed_ssm_own)),
            front_sizes,
            evaluations,
        },
        ecm_fronts,
        seed_tags: cfg.seeds.clone(),
        seconds: started.elapsed().as_secs_f64(),
    })
}

fn run_method(cfg: &Config, inst: &Instance, method: Method) -> Result<MethodRun> {
    let dir = cfg.output_dir.join(&inst.name).join(method.name());
    match method {
        Method::Fcm | Method::Mei => run_restart_method(cfg, inst, method, &dir),
        Method::EcmNsga2 | Method::EcmMoead => run_engine_method(cfg, inst, method, &dir),
        Method::Moga => run_moga(cfg, inst, &dir),
    }
}

fn overlay_csv(runs: &BTreeMap<Method, MethodRun>) -> String {
    let mut out = String::from("method,seed,g1,g2\n");
    for (method, run) in runs {
        for (tag, front) in run.seed_tags.iter().zip(&run.ecm_fronts) {
            for o in front {
                let _ = writeln!(out, "{},{tag},{},{}", method.name(), o[0], o[1]);
            }
        }
    }
    out
}

fn ei_matrix(
    cfg: &Config,
    runs: &BTreeMap<Method, MethodRun>,
) -> Result<BTreeMap<String, BTreeMap<String, f64>>> {
    let mut matrix = BTreeMap::new();
    for (&cand, cand_run) in runs {
        let mut row = BTreeMap::new();
        for (&ctrl, ctrl_run) in runs {
            if cand == ctrl {
                continue;
            }
            let per_seed: Vec<f64> = (0..cfg.seeds.len())
                .map(|k| epsilon_indicator(cand_run.front_at(k), ctrl_run.front_at(k)))
                .collect::<ecm_core::Result<_>>()?;
            row.insert(ctrl.name().to_string(), mean(&per_seed));
        }
        matrix.insert(cand.name().to_string(), row);
    }
    Ok(matrix)
}

/// Average rank per method from per-dataset max-ARI tables (1 = best; ties
/// share the mean rank). Every table must rank the same method set.
pub fn rank_table(per_dataset: &[BTreeMap<String, f64>]) -> Result<BTreeMap<String, f64>> {
    let Some(first) = per_dataset.first() else {
        return Ok(BTreeMap::new());
    };
    let names: Vec<&String> = first.keys().collect();
    let mut sums: BTreeMap<String, f64> = BTreeMap::new();
    for table in per_dataset {
        if table.len() != names.len() || !names.iter().all(|n| table.contains_key(*n)) {
            return Err(CliError::MethodSetMismatch);
        }
        let mut entries: Vec<(&String, f64)> = table.iter().map(|(k, &v)| (k, v)).collect();
        entries.sort_by(|a, b| {
            b.1.partial_cmp(&a.1)
                .expect("finite ARI")
                .then(a.0.cmp(b.0))
        });
        let mut i = 0;
        while i < entries.len() {
            let mut j = i;
            while j + 1 < entries.len() && entries[j + 1].1 == entries[i].1 {
                j += 1;
            }
            let rank = (i + 1 + j + 1) as f64 / 2.0;
            for e in &entries[i..=j] {
                *sums.entry(e.0.clone()).or_insert(0.0) += rank;
            }
            i = j + 1;
        }
    }
    Ok(sums
        .into_iter()
        .map(|(k, v)| (k, v / per_dataset.len() as f64))
        .collect())
}

/// Runs every configured method over every configured dataset.
///
/// Jobs fan out over a work pool (dataset x method; each job runs its seeds
/// in order); set `ECM_THREADS` before process start to cap the pool. On a
/// job error the completed results are still written, together with an
/// `errors.json` manifest, before the error propagates.
pub fn run_experiment(cfg: &Config) -> Result<Report> {
    let methods = cfg.method_list()?;
    fs::create_dir_all(&cfg.output_dir)?;
    let started = Instant::now();

    let instances: Vec<Instance> = cfg
        .datasets
        .iter()
        .map(|d| load_instance(cfg, d))
        .collect::<Result<_>>()?;

    let jobs: Vec<(usize, Method)> = (0..instances.len())
        .flat_map(|i| methods.iter().map(move |&m| (i, m)))
        .collect();
    let outcomes: Vec<(usize, Method, Result<MethodRun>)> = jobs
        .par_iter()
        .map(|&(i, m)| (i, m, run_method(cfg, &instances[i], m)))
        .collect();

    let mut failures: Vec<String> = Vec::new();
    let mut per_instance: Vec<BTreeMap<Method, MethodRun>> =
        (0..instances.len()).map(|_| BTreeMap::new()).collect();
    for (i, m, outcome) in outcomes {
        match outcome {
            Ok(run) => {
                per_instance[i].insert(m, run);
            }
            Err(e) => failures.push(format!("{}/{}: {e}", instances[i].name, m.name())),
        }
    }

    let mut datasets = BTreeMap::new();
    let mut timing = BTreeMap::new();
    let mut rank_inputs: Vec<BTreeMap<String, f64>> = Vec::new();
    for (inst, runs) in instances.iter().zip(&per_instance) {
        let ds_dir = cfg.output_dir.join(&inst.name);
        fs::create_dir_all(&ds_dir)?;
        fs::write(ds_dir.join("pareto_overlay.csv"), overlay_csv(runs))?;

        let mut method_reports = BTreeMap::new();
        let mut method_secs = BTreeMap::new();
        for (m, run) in runs {
            method_reports.insert(m.name().to_string(), run.report.clone());
            method_secs.insert(m.name().to_string(), run.seconds);
        }
        if inst.labels.is_some() && runs.len() == methods.len() {
            let table: BTreeMap<String, f64> = runs
                .iter()
                .filter_map(|(m, r)| r.report.max_ari.map(|a| (m.name().to_string(), a)))
                .collect();
            if table.len() == methods.len() {
                rank_inputs.push(table);
            }
        }
        datasets.insert(
            inst.name.clone(),
            DatasetReport {
                n_points: inst.data.n_points(),
                n_dims: inst.data.n_dims(),
                c: inst.c,
                sigma: inst.problem.sigma_effective(),
                methods: method_reports,
                ei_mean: ei_matrix(cfg, runs)?,
            },
        );
        timing.insert(inst.name.clone(), method_secs);
    }

    let report = Report {
        version: env!("CARGO_PKG_VERSION").to_string(),
        config: cfg.clone(),
        datasets,
        avg_ranks: rank_table(&rank_inputs)?,
    };
    fs::write(
        cfg.output_dir.join("report.json"),
        serde_json::to_string_pretty(&report)?,
    )?;
    fs::write(
        cfg.output_dir.join("timing.json"),
        serde_json::to_string_pretty(&Timing {
            per_method_seconds: timing,
            total_seconds: started.elapsed().as_secs_f64(),
        })?,
    )?;
    if !failures.is_empty() {
        fs::write(
            cfg.output_dir.join("errors.json"),
            serde_json::to_string_pretty(&failures)?,
        )?;
        return Err(CliError::InvalidConfig(format!(
            "{} job(s) failed; see errors.json",
            failures.len()
        )));
    }
    Ok(report)
}

/// One sweep observation: a parameter value and the best ARI a method
/// reached on a dataset.
#[derive(Debug, Clone, Serialize)]
pub struct SweepRow {
    pub param: String,
    pub value: f64,
    pub dataset: String,
    pub method: String,
    pub max_ari: Option<f64>,
}

fn apply_param(cfg: &mut Config, param: &str, value: f64) -> Result<()> {
    match param {
        "pop" => {
            cfg.nsga2.pop = value as usize;
            cfg.moead.pop = value as usize;
        }
        "fe" => {
            cfg.nsga2.fe = value as usize;
            cfg.moead.fe = value as usize;
        }
        "pool" => cfg.nsga2.pool = value,
        "tour" => cfg.nsga2.tour = value as usize,
        "mu" => cfg.nsga2.mu = value,
        "mum" => cfg.nsga2.mum = value,
        "t" => cfg.moead.t = value as usize,
        "f" => cfg.moead.f = value,
        "cr" => cfg.moead.cr = value,
        "m" => cfg.fcm.m = value,
        "c" => {
            cfg.c = value as usize;
            for ds in &mut cfg.datasets {
                ds.c = None;
            }
        }
        other => return Err(CliError::UnknownParam(other.to_string())),
    }
    Ok(())
}

/// Reruns the base config once per value of one engine parameter, writing
/// each run under `<output_dir>/<param>=<value>/` plus a combined
/// `sweep.csv`.
pub fn sweep(cfg: &Config, param: &str, values: &[f64]) -> Result<Vec<SweepRow>> {
    // Validate the name before paying for any run.
    apply_param(
        &mut cfg.clone(),
        param,
        values.first().copied().unwrap_or(1.0),
    )?;
    let mut rows = Vec::new();
    for &value in values {
        let mut sub = cfg.clone();
        apply_param(&mut sub, param, value)?;
        sub.output_dir = cfg.output_dir.join(format!("{param}={value}"));
        let report = run_experiment(&sub)?;
        for (ds, dr) in &report.datasets {
            for (m, mr) in &dr.methods {
                rows.push(SweepRow {
                    param: param.to_string(),
                    value,
                    dataset: ds.clone(),
                    method: m.clone(),
                    max_ari: mr.max_ari,
                });
            }
        }
    }
    let mut csv = String::from("param,value,dataset,method,max_ari\n");
    for r in &rows {
        let ari = r.max_ari.map_or(String::new(), |a| a.to_string());
        let _ = writeln!(
            csv,
            "{},{},{},{},{ari}",
            r.param, r.value, r.dataset, r.method
        );
    }
    fs::create_dir_all(&cfg.output_dir)?;
    fs::write(cfg.output_dir.join("sweep.csv"), csv)?;
    Ok(rows)
}

/// Renders a generated dataset as headerless CSV, label in the last column,
/// matching what `load_dataset` expects back.
pub fn labeled_csv(ds: &Dataset64, labels: &[usize]) -> String {
    let mut out = String::new();
    for (row, label) in ds.points().rows().into_iter().zip(labels) {
        for v in row.iter() {
            let _ = write!(out, "{v},");
        }
        let _ = writeln!(out, "{label}");
    }
    out
}

/// Reads a two-column objective CSV (one optional header line).
pub fn read_front_csv(path: &Path) -> Result<Vec<[f64; 2]>> {
    let text = fs::read_to_string(path)?;
    let mut out = Vec::new();
    for line in text.lines() {
        let line = line.trim();
        if line.is_empty() {
            continue;
        }
        let mut cells = line.split(',');
        let (Some(a), Some(b)) = (cells.next(), cells.next()) else {
            continue;
        };
        if let (Ok(x), Ok(y)) = (a.trim().parse(), b.trim().parse()) {
            out.push([x, y]);
        }
    }
    if out.is_empty() {
        return Err(CliError::InvalidConfig(format!(
            "no objective rows in {}",
            path.display()
        )));
    }
    Ok(out)
}

/// Spacing of two fronts and the epsilon indicator in both directions.
#[derive(Debug, Clone, Serialize)]
pub struct FrontComparison {
    pub ssm_a: f64,
    pub ssm_b: f64,
    pub ei_a_candidate_b_control: f64,
    pub ei_b_candidate_a_control: f64,
}

pub fn compare_fronts(a: &[[f64; 2]], b: &[[f64; 2]]) -> Result<FrontComparison> {
    Ok(FrontComparison {
        ssm_a: ssm0(a),
        ssm_b: ssm0(b),
        ei_a_candidate_b_control: epsilon_indicator(a, b)?,
        ei_b_candidate_a_control: epsilon_indicator(b, a)?,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn method_names_round_trip() {
        for m in [
            Method::Fcm,
            Method::Mei,
            Method::EcmNsga2,
            Method::EcmMoead,
            Method::Moga,
        ] {
            assert_eq!(Method::parse(m.name()).unwrap(), m);
        }
        assert!(matches!(
            Method::parse("kmeans"),
            Err(CliError::UnknownMethod(_))
        ));
    }

    #[test]
    fn rank_single_table() {
        let table: BTreeMap<String, f64> = [("a", 0.9), ("b", 0.8), ("c", 0.7)]
            .iter()
            .map(|(k, v)| (k.to_string(), *v))
            .collect();
        let ranks = rank_table(&[table]).unwrap();
        assert_eq!(ranks["a"], 1.0);
        assert_eq!(ranks["b"], 2.0);
        assert_eq!(ranks["c"], 3.0);
    }

    #[test]
    fn rank_ties_share_mean_rank() {
        let table: BTreeMap<String, f64> = [("a", 0.9), ("b", 0.9), ("c", 0.7)]
            .iter()
            .map(|(k, v)| (k.to_string(), *v))
            .collect();
        let ranks = rank_table(&[table]).unwrap();
        assert_eq!(ranks["a"], 1.5);
        assert_eq!(ranks["b"], 1.5);
        assert_eq!(ranks["c"], 3.0);
    }

    #[test]
    fn rank_opposite_orders_average() {
        let t1: BTreeMap<String, f64> = [("a", 0.9), ("b", 0.5)]
            .iter()
            .map(|(k, v)| (k.to_string(), *v))
            .collect();
        let t2: BTreeMap<String, f64> = [("a", 0.5), ("b", 0.9)]
            .iter()
            .map(|(k, v)| (k.to_string(), *v))
            .collect();
        let ranks = rank_table(&[t1, t2]).unwrap();
        assert_eq!(ranks["a"], 1.5);
        assert_eq!(ranks["b"], 1.5);
    }

    #[test]
    fn rank_method_set_mismatch() {
        let t1: BTreeMap<String, f64> = [("a", 0.9)]
            .iter()
            .map(|(k, v)| (k.to_string(), *v))
            .collect();
        let t2: BTreeMap<String, f64> = [("b", 0.9)]
            .iter()
            .map(|(k, v)| (k.to_string(), *v))
            .collect();
        assert!(matches!(
            rank_table(&[t1, t2]),
            Err(CliError::MethodSetMismatch)
        ));
    }

    #[test]
    fn unknown_sweep_param() {
        let mut cfg =
            Config::from_toml("output_dir = \"out\"\n[[datasets]]\nname = \"proximity1\"\n")
                .unwrap();
        assert!(matches!(
            apply_param(&mut cfg, "zeta", 1.0),
            Err(CliError::UnknownParam(_))
        ));
    }

    #[test]
    fn population_front_filters_dominated() {
        let s = |g: [f64; 2]| Solution64 {
            genes: vec![],
            objectives: g,
        };
        let pop = vec![
            s([0.0, 2.0]),
            s([1.0, 1.0]),
            s([2.0, 0.0]),
            s([2.0, 2.0]),
            s([1.0, 1.0]),
        ];
        let pf = population_front(&pop);
        assert_eq!(pf, vec![[0.0, 2.0], [1.0, 1.0], [2.0, 0.0]]);
    }
}
