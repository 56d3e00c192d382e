//! Grid dispatch: builds one experiment per grid cell, runs cells on a
//! rayon pool, and writes `report.json` plus `grid.csv`. Outputs are
//! byte-for-byte reproducible: rows are sorted by grid key and every cell's
//! randomness is derived from the master seed and the cell index.

use std::fmt;
use std::fs;
use std::path::Path;

use infolearn::analysis::{
    exact_mi, far_optimal_comparison, generalization_experiment, mc_mi, net_stopping_experiment,
    pac_bayes_check, point_prior, prior_bound, sharpness_experiment, signature_mi,
    stability_profile, threshold_prior,
};
use infolearn::adversary::{build_matrix, certify_lower_bound, find_rich_row};
use infolearn::concepts::{ConceptClass, Hypothesis, RealizableDistribution};
use infolearn::learners::{
    build_cover, Boosted, FarOptimalErm, GenericLearner, LearnerKernel, MinThresholdErm,
    NetLearner, SharpnessLearner,
};
use infolearn::Dist;
use rayon::prelude::*;
use serde::Serialize;

use crate::config::{ConfigError, RawConfig};

const DEFAULT_BUDGET: u64 = 10_000_000;
const DEFAULT_TRIALS: u64 = 100_000;

#[derive(Debug)]
pub enum CliError {
    Config(ConfigError),
    Io(std::io::Error),
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Config(e) => write!(f, "{e}"),
            CliError::Io(e) => write!(f, "{e}"),
        }
    }
}

impl From<ConfigError> for CliError {
    fn from(e: ConfigError) -> Self {
        CliError::Config(e)
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Io(e)
    }
}

#[derive(Clone, Debug, Serialize)]
struct Row {
    n: usize,
    m: usize,
    eps: Option<f64>,
    delta: Option<f64>,
    mi: Option<f64>,
    bound: Option<f64>,
    frequency: Option<f64>,
    stderr: Option<f64>,
    method: String,
    seed: Option<u64>,
    status: String,
    config_hash: String,
    #[serde(skip_serializing_if = "serde_json::Value::is_null")]
    detail: serde_json::Value,
}

#[derive(Serialize)]
struct Report<'a> {
    kind: &'a str,
    config_hash: &'a str,
    budget: u64,
    rows: &'a [Row],
}

struct Cell {
    index: usize,
    n: usize,
    m: usize,
    eps: Option<f64>,
    delta: Option<f64>,
}

struct Plan<'a> {
    kind: &'a str,
    config: &'a RawConfig,
    budget: u64,
    trials: u64,
    seed: Option<u64>,
}

pub fn run(kind: &str, config_path: &Path, out: &Path, workers: usize) -> Result<String, CliError> {
    let config = RawConfig::load(config_path)?;
    validate_keys(kind, &config)?;

    let budget = std::env::var("INFOLEARN_BUDGET")
        .ok()
        .and_then(|v| v.parse().ok())
        .or(config.parse_opt::<u64>("budget")?)
        .unwrap_or(DEFAULT_BUDGET);
    let trials = config.parse_opt::<u64>("trials")?.unwrap_or(DEFAULT_TRIALS);
    let seed = config.parse_opt::<u64>("seed")?;
    if stochastic_kind(kind) && seed.is_none() {
        return Err(ConfigError(format!("kind `{kind}` is stochastic: key `seed` is required")).into());
    }

    let plan = Plan {
        kind,
        config: &config,
        budget,
        trials,
        seed,
    };
    let cells = build_cells(kind, &config)?;

    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(workers.max(1))
        .build()
        .map_err(|e| ConfigError(format!("cannot build worker pool: {e}")))?;
    let mut rows: Vec<Row> =
        pool.install(|| cells.par_iter().map(|cell| run_cell(&plan, cell)).collect());
    rows.sort_by(|a, b| {
        (a.n, a.m)
            .cmp(&(b.n, b.m))
            .then(a.eps.unwrap_or(0.0).total_cmp(&b.eps.unwrap_or(0.0)))
            .then(a.delta.unwrap_or(0.0).total_cmp(&b.delta.unwrap_or(0.0)))
            .then(a.method.cmp(&b.method))
    });

    fs::create_dir_all(out)?;
    let report = Report {
        kind,
        config_hash: &config.hash,
        budget,
        rows: &rows,
    };
    fs::write(
        out.join("report.json"),
        serde_json::to_string_pretty(&report).expect("report serializes") + "\n",
    )?;
    write_csv(&out.join("grid.csv"), &rows)?;

    let failures = rows.iter().filter(|r| r.status != "ok").count();
    Ok(format!(
        "{kind}: {} rows ({failures} failed) -> {}",
        rows.len(),
        out.display()
    ))
}

fn stochastic_kind(kind: &str) -> bool {
    matches!(
        kind,
        "mi-estimate" | "gen-gap" | "pac-bayes" | "sharpness" | "net-learner"
    )
}

fn validate_keys(kind: &str, config: &RawConfig) -> Result<(), ConfigError> {
    const COMMON: &[&str] = &["n", "m", "eps", "delta", "seed", "trials", "budget"];
    let extra: &[&str] = match kind {
        "mi-exact" | "mi-estimate" | "gen-gap" | "pac-bayes" | "stability" => {
            &["class", "learner", "target", "marginal"]
        }
        "prior-bound" => &["class", "target", "marginal"],
        "net-learner" => &["target", "marginal"],
        "lower-bound" => &["learner"],
        "boost" => &["class", "target", "marginal", "m0", "boost-delta", "boost-eps"],
        "sharpness" | "far-optimal" => &[],
        other => return Err(ConfigError(format!("unknown experiment kind `{other}`"))),
    };
    let allowed: Vec<&str> = COMMON.iter().chain(extra).copied().collect();
    config.reject_unknown(&allowed)
}

fn build_cells(kind: &str, config: &RawConfig) -> Result<Vec<Cell>, ConfigError> {
    let ns: Vec<usize> = config.parse_list("n")?;
    if ns.is_empty() {
        return Err(ConfigError("grid axis `n` is empty".to_string()));
    }
    let ms: Vec<usize> = if kind == "boost" {
        vec![0] // derived from m0 and the boosting parameters
    } else {
        let ms = config.parse_list("m")?;
        if ms.is_empty() {
            return Err(ConfigError("grid axis `m` is empty".to_string()));
        }
        ms
    };
    if ns.iter().any(|&n| n == 0) || ms.iter().any(|&m| kind != "boost" && m == 0) {
        return Err(ConfigError("grid values must be positive".to_string()));
    }
    let epss: Vec<Option<f64>> = option_axis(config.parse_list("eps")?);
    let deltas: Vec<Option<f64>> = option_axis(config.parse_list("delta")?);
    if requires_axis(kind, "eps") && epss == [None] {
        return Err(ConfigError(format!("kind `{kind}` needs the `eps` axis")));
    }
    if requires_axis(kind, "delta") && deltas == [None] {
        return Err(ConfigError(format!("kind `{kind}` needs the `delta` axis")));
    }

    let mut cells = Vec::new();
    let mut index = 0;
    for &n in &ns {
        for &m in &ms {
            for &eps in &epss {
                for &delta in &deltas {
                    cells.push(Cell {
                        index,
                        n,
                        m,
                        eps,
                        delta,
                    });
                    index += 1;
                }
            }
        }
    }
    Ok(cells)
}

fn requires_axis(kind: &str, axis: &str) -> bool {
    matches!(
        (kind, axis),
        ("gen-gap", "eps") | ("pac-bayes", "eps") | ("pac-bayes", "delta")
    )
}

fn option_axis(values: Vec<f64>) -> Vec<Option<f64>> {
    if values.is_empty() {
        vec![None]
    } else {
        values.into_iter().map(Some).collect()
    }
}

/// Per-cell seed derivation: splitmix64 over (master, cell index) so cell
/// order and worker count never reorder draws.
fn cell_seed(master: Option<u64>, index: usize) -> u64 {
    let mut z = master
        .unwrap_or(0)
        .wrapping_add(0x9e3779b97f4a7c15u64.wrapping_mul(index as u64 + 1));
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58476d1ce4e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d049bb133111eb);
    z ^ (z >> 31)
}

fn run_cell(plan: &Plan, cell: &Cell) -> Row {
    let seed = cell_seed(plan.seed, cell.index);
    let mut row = Row {
        n: cell.n,
        m: cell.m,
        eps: cell.eps,
        delta: cell.delta,
        mi: None,
        bound: None,
        frequency: None,
        stderr: None,
        method: String::new(),
        seed: plan.seed.map(|_| seed),
        status: "ok".to_string(),
        config_hash: plan.config.hash.clone(),
        detail: serde_json::Value::Null,
    };
    if let Err(e) = fill_cell(plan, cell, seed, &mut row) {
        row.status = e;
    }
    row
}

fn fill_cell(plan: &Plan, cell: &Cell, seed: u64, row: &mut Row) -> Result<(), String> {
    match plan.kind {
        "mi-exact" => {
            let (learner, d) = learner_and_distribution(plan.config, cell)?;
            let report = exact_mi(learner.as_ref(), &d, cell.m, plan.budget)
                .or_else(|_| signature_mi(learner.as_ref(), &d, cell.m, plan.budget))
                .map_err(stringify)?;
            row.mi = Some(report.mi_bits);
            row.method = report.method.to_string();
            row.detail = to_detail(&report);
        }
        "mi-estimate" => {
            let (learner, d) = learner_and_distribution(plan.config, cell)?;
            let report =
                mc_mi(learner.as_ref(), &d, cell.m, plan.trials, seed).map_err(stringify)?;
            row.mi = Some(report.mi_bits);
            row.stderr = report.stderr;
            row.method = report.method.to_string();
            row.detail = to_detail(&report);
        }
        "prior-bound" => {
            let class_name = plan.config.one("class").map_err(stringify)?;
            let target: usize = plan.config.parse_one("target").map_err(stringify)?;
            let (learner, d) = learner_and_distribution(plan.config, cell)?;
            let q = match class_name {
                "thresholds" => threshold_prior(cell.n, target),
                "point-functions" => point_prior(cell.n, target),
                other => return Err(format!("no built-in prior for class `{other}`")),
            };
            let bound =
                prior_bound(learner.as_ref(), &d, cell.m, &q, plan.budget).map_err(stringify)?;
            row.bound = Some(bound.value());
            row.method = "prior-bound".to_string();
        }
        "gen-gap" => {
            let (learner, d) = learner_and_distribution(plan.config, cell)?;
            let eps = cell.eps.expect("validated axis");
            let report = generalization_experiment(
                learner.as_ref(),
                &d,
                cell.m,
                eps,
                plan.trials,
                seed,
                plan.budget,
            )
            .map_err(stringify)?;
            row.mi = Some(report.d_bits);
            row.bound = Some(report.bound);
            row.frequency = Some(report.violation_freq);
            row.stderr = Some(report.stderr);
            row.method = report.d_method.to_string();
            row.detail = to_detail(&report);
        }
        "stability" => {
            let (learner, d) = learner_and_distribution(plan.config, cell)?;
            let report =
                stability_profile(learner.as_ref(), &d, cell.m, plan.budget).map_err(stringify)?;
            row.mi = Some(report.d_bits);
            row.bound = Some(report.sqrt_d_over_m);
            row.frequency = Some(report.gap);
            row.method = "exact".to_string();
            row.detail = to_detail(&report);
        }
        "pac-bayes" => {
            let (learner, d) = learner_and_distribution(plan.config, cell)?;
            let (eps, delta) = (cell.eps.unwrap(), cell.delta.unwrap());
            let report = pac_bayes_check(
                learner.as_ref(),
                &d,
                cell.m,
                delta,
                eps,
                plan.trials,
                seed,
                plan.budget,
            )
            .map_err(stringify)?;
            row.mi = Some(report.d_bits);
            row.bound = Some(delta);
            row.frequency = Some(report.bayes_violation_freq);
            row.stderr = Some(report.bayes_stderr);
            row.method = "signature".to_string();
            row.detail = to_detail(&report);
        }
        "lower-bound" => {
            if !cell.n.is_power_of_two() {
                return Err(format!("lower-bound needs a power-of-two domain, got {}", cell.n));
            }
            let n_bits = cell.n.trailing_zeros() as usize;
            let learner = build_learner(
                plan.config.one("learner").map_err(stringify)?,
                ConceptClass::thresholds(cell.n),
            )?;
            let mx = build_matrix(learner.as_ref(), n_bits, cell.m).map_err(stringify)?;
            let rs = find_rich_row(&mx).map_err(stringify)?;
            let cert = certify_lower_bound(&mx, &rs, plan.budget).map_err(stringify)?;
            row.mi = Some(cert.exact_mi_bits);
            row.bound = Some(cert.floor_bits);
            row.method = cert.mi_method.to_string();
            if !cert.holds {
                row.status = "certificate-violated".to_string();
            }
            row.detail = to_detail(&cert);
        }
        "sharpness" => {
            let cover = build_cover(cell.n, cell.m, seed, 1_000_000).map_err(stringify)?;
            let learner = SharpnessLearner::new(cover);
            let report = sharpness_experiment(&learner, plan.trials, seed).map_err(stringify)?;
            row.mi = Some(report.entropy_plugin_bits);
            row.bound = Some(1.0 / (2.0 * cell.m as f64));
            row.frequency = Some(report.freq_high_error);
            row.stderr = Some(report.freq_stderr);
            row.method = "monte-carlo".to_string();
            row.detail = to_detail(&report);
        }
        "net-learner" => {
            let class = ConceptClass::thresholds(cell.n);
            let marginal = build_marginal(plan.config, cell.n)?;
            let target: usize = plan.config.parse_one("target").map_err(stringify)?;
            let d = RealizableDistribution::new(marginal.clone(), Hypothesis::Threshold(target))
                .map_err(stringify)?;
            let learner = NetLearner::new(class, &marginal, cell.m).map_err(stringify)?;
            let report = net_stopping_experiment(&learner, &d, cell.m, plan.trials, seed, plan.budget)
                .map_err(stringify)?;
            row.mi = Some(report.output_entropy_bits);
            row.bound = Some(report.entropy_bound);
            row.method = "signature".to_string();
            row.detail = to_detail(&report);
        }
        "boost" => {
            let m0: usize = plan.config.parse_one("m0").map_err(stringify)?;
            let bdelta: f64 = plan.config.parse_one("boost-delta").map_err(stringify)?;
            let beps: f64 = plan.config.parse_one("boost-eps").map_err(stringify)?;
            let class = build_class(plan.config.one("class").map_err(stringify)?, cell.n)?;
            let d = distribution_for(plan.config, &class, cell.n)?;
            let base = GenericLearner::new(class);
            let base_mi = exact_mi(&base, &d, m0, plan.budget)
                .or_else(|_| signature_mi(&base, &d, m0, plan.budget))
                .map_err(stringify)?;
            let boosted = Boosted::new(base, m0, bdelta, beps).map_err(stringify)?;
            let m = boosted.expected_len();
            let report = signature_mi(&boosted, &d, m, plan.budget).map_err(stringify)?;
            let k = boosted.k() as f64;
            row.m = m;
            row.mi = Some(report.mi_bits);
            row.bound = Some(base_mi.mi_bits * k + k.log2());
            row.method = report.method.to_string();
            row.detail = serde_json::json!({
                "base_mi_bits": base_mi.mi_bits,
                "k": boosted.k(),
                "validation_len": boosted.validation_len(),
                "validation_len_statement": boosted.validation_len_statement(),
            });
        }
        "far-optimal" => {
            let report = far_optimal_comparison(cell.n, cell.m, plan.budget).map_err(stringify)?;
            row.mi = Some(report.generic_mi);
            row.bound = Some(report.generic_lower_bound);
            row.method = "signature".to_string();
            row.detail = to_detail(&report);
        }
        other => return Err(format!("unknown experiment kind `{other}`")),
    }
    Ok(())
}

fn stringify(e: impl fmt::Display) -> String {
    e.to_string()
}

fn to_detail<T: Serialize>(value: &T) -> serde_json::Value {
    serde_json::to_value(value).unwrap_or(serde_json::Value::Null)
}

fn build_class(name: &str, n: usize) -> Result<ConceptClass, String> {
    match name {
        "thresholds" => Ok(ConceptClass::thresholds(n)),
        "point-functions" => Ok(ConceptClass::point_functions(n)),
        "far-optimal" => Ok(ConceptClass::far_optimal(n)),
        other => Err(format!("unknown class `{other}`")),
    }
}

fn build_marginal(config: &RawConfig, n: usize) -> Result<Dist, String> {
    match config.opt("marginal").map_err(stringify)? {
        None | Some("uniform") => Ok(Dist::uniform(n)),
        Some(spec) => {
            let weights: Vec<f64> = spec
                .split(',')
                .map(|w| w.trim().parse().map_err(|_| format!("key `marginal`: cannot parse `{w}`")))
                .collect::<Result<_, _>>()?;
            if weights.len() != n {
                return Err(format!(
                    "key `marginal`: {} weights for domain size {n}",
                    weights.len()
                ));
            }
            Dist::normalized(weights).map_err(stringify)
        }
    }
}

fn distribution_for(
    config: &RawConfig,
    class: &ConceptClass,
    n: usize,
) -> Result<RealizableDistribution, String> {
    use infolearn::concepts::ClassKind;
    let marginal = build_marginal(config, n)?;
    let target = match class.kind() {
        ClassKind::Thresholds => {
            Hypothesis::Threshold(config.parse_one::<usize>("target").map_err(stringify)?)
        }
        ClassKind::PointFunctions => {
            Hypothesis::Point(config.parse_one::<usize>("target").map_err(stringify)?)
        }
        ClassKind::FarOptimal => Hypothesis::Threshold(2),
        _ => return Err(format!("class `{}` has no CLI target form", class.name())),
    };
    RealizableDistribution::new(marginal, target).map_err(stringify)
}

fn build_learner(
    name: &str,
    class: ConceptClass,
) -> Result<Box<dyn LearnerKernel + Sync>, String> {
    match name {
        "generic" => Ok(Box::new(GenericLearner::new(class))),
        "min-threshold-erm" => Ok(Box::new(MinThresholdErm::new(class.domain_size()))),
        "far-optimal-erm" => Ok(Box::new(FarOptimalErm::new(class.domain_size()))),
        other => Err(format!("unknown learner `{other}`")),
    }
}

fn learner_and_distribution(
    config: &RawConfig,
    cell: &Cell,
) -> Result<(Box<dyn LearnerKernel + Sync>, RealizableDistribution), String> {
    let class = build_class(config.one("class").map_err(stringify)?, cell.n)?;
    let d = distribution_for(config, &class, cell.n)?;
    let learner_name = config.opt("learner").map_err(stringify)?.unwrap_or("generic");
    let learner = build_learner(learner_name, class)?;
    Ok((learner, d))
}

fn write_csv(path: &Path, rows: &[Row]) -> Result<(), CliError> {
    let mut writer = csv::Writer::from_path(path)?;
    writer
        .write_record([
            "N", "m", "eps", "delta", "mi", "bound", "frequency", "stderr", "method", "seed",
            "status",
        ])
        .map_err(io_of_csv)?;
    for row in rows {
        writer
            .write_record([
                row.n.to_string(),
                row.m.to_string(),
                opt_str(row.eps),
                opt_str(row.delta),
                opt_str(row.mi),
                opt_str(row.bound),
                opt_str(row.frequency),
                opt_str(row.stderr),
                row.method.clone(),
                row.seed.map(|s| s.to_string()).unwrap_or_default(),
                row.status.clone(),
            ])
            .map_err(io_of_csv)?;
    }
    writer.flush()?;
    Ok(())
}

fn opt_str(v: Option<f64>) -> String {
    v.map(|x| x.to_string()).unwrap_or_default()
}

fn io_of_csv(e: csv::Error) -> CliError {
    CliError::Io(std::io::Error::other(e))
}

impl From<csv::Error> for CliError {
    fn from(e: csv::Error) -> Self {
        io_of_csv(e)
    }
}
