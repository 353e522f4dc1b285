//! The `pfml` command line.
//!
//! Exit status is 0 on success, 1 when the arguments, configuration or
//! input data are invalid, and 2 when the run fails for another reason
//! (file system errors, missing upstream artifacts).

use std::ffi::OsString;
use std::fs;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use pfml_core::assembly::{assemble_form, AssemblyConfig};
use pfml_core::cohort::{generate_cohort, CohortSpec};
use pfml_core::estimation::{
    estimate_ability_map, gauss_seidel_estimate, BetaPrior, ChiPrior, GsConfig, Grid, NormalPrior, PriorConfig,
};
use pfml_core::fuzzy::{build_rule_base, default_assessment_kb, FuzzySystem};
use pfml_core::irt::{icc_probability, item_information, test_information, test_standard_error};
use pfml_core::pfml::LearnConfig;
use pfml_core::{Ability, ItemParams, PerformanceLevel};

use crate::config::{Config, ConfigError};
use crate::data::{self, fmt_opt, DataError};
use crate::fml::{parse_fml, serialize_fml, FmlError};
use crate::pipeline::{evaluate_kfold, observed_cells, training_set, EvalSettings, FoldReport, Trainer};
use crate::workspace::{write_json, RunContext, Workspace, WorkspaceError};

pub const RESPONSES: &str = "responses/responses.csv";
pub const TRUE_ITEMS: &str = "params/true_items.csv";
pub const TRUE_ABILITIES: &str = "params/true_abilities.csv";
pub const ITEMS: &str = "params/items.csv";
pub const ABILITIES: &str = "params/abilities.csv";
pub const BAYES_ABILITIES: &str = "params/abilities-bayes.csv";
pub const SEED_KB: &str = "kb/seed_kb.xml";
pub const SEED_SYSTEM: &str = "kb/seed_system.xml";
pub const SUMMARY: &str = "results/summary.json";

#[derive(Debug)]
pub struct CliError {
    pub code: i32,
    pub message: String,
}

impl CliError {
    pub fn invalid(message: impl Into<String>) -> Self {
        Self {
            code: 1,
            message: message.into(),
        }
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.message)
    }
}

impl From<pfml_core::Error> for CliError {
    fn from(e: pfml_core::Error) -> Self {
        Self::invalid(e.to_string())
    }
}

impl From<FmlError> for CliError {
    fn from(e: FmlError) -> Self {
        Self::invalid(e.to_string())
    }
}

impl From<ConfigError> for CliError {
    fn from(e: ConfigError) -> Self {
        let code = if matches!(e, ConfigError::Io { .. }) { 2 } else { 1 };
        Self {
            code,
            message: e.to_string(),
        }
    }
}

impl From<DataError> for CliError {
    fn from(e: DataError) -> Self {
        let code = if matches!(e, DataError::Io { .. }) { 2 } else { 1 };
        Self {
            code,
            message: e.to_string(),
        }
    }
}

impl From<WorkspaceError> for CliError {
    fn from(e: WorkspaceError) -> Self {
        Self {
            code: 2,
            message: e.to_string(),
        }
    }
}

type CliResult<T> = Result<T, CliError>;

#[derive(Debug, Parser)]
#[command(name = "pfml", version, about = "3PL assessment pipeline with fuzzy inference and swarm learning")]
pub struct Cli {
    /// Workspace root holding the repository directories.
    #[arg(long, global = true, default_value = ".")]
    pub workspace: PathBuf,
    /// Seed for every random draw of the command.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// Flat `key = value` file with command settings.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Generate a synthetic two-form cohort with known parameters.
    Simulate,
    /// Estimate item parameters and abilities by Gauss-Seidel iteration.
    EstimateGs,
    /// MAP abilities for every student under the estimated items.
    EstimateBayes,
    /// Assemble a test form for one performance level.
    Assemble {
        #[arg(long)]
        level: String,
        #[arg(long)]
        length: Option<usize>,
    },
    /// Write the hand-built knowledge base.
    BuildKb,
    /// Generate the rule base for the stored knowledge base.
    GenRules,
    /// Tune the knowledge base on 3PL-oracle training data.
    Train {
        #[arg(long, value_parser = parse_trainer)]
        method: Trainer,
    },
    /// K-fold evaluation of the seed and learned systems.
    Evaluate {
        #[arg(long, default_value_t = 5)]
        kfold: usize,
        #[arg(long, value_parser = parse_trainer)]
        method: Option<Trainer>,
    },
    /// Emit plot-ready CSV curves.
    Curves {
        #[arg(long, value_enum)]
        kind: CurveKind,
        /// Item as `a=..,b=..,c=..`; repeat for tif-tse.
        #[arg(long, value_parser = parse_item)]
        item: Vec<ItemParams>,
        /// Assembled form to use for tif-tse.
        #[arg(long)]
        level: Option<String>,
        #[arg(long, value_parser = parse_trainer)]
        method: Option<Trainer>,
        #[arg(long, default_value_t = 1)]
        fold: usize,
        #[arg(long, value_enum, default_value_t = SystemChoice::After)]
        system: SystemChoice,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum CurveKind {
    Icc,
    ItemInfo,
    TifTse,
    FitnessHistory,
    Pr,
    Roc,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SystemChoice {
    Before,
    After,
}

impl SystemChoice {
    fn name(self) -> &'static str {
        match self {
            SystemChoice::Before => "before",
            SystemChoice::After => "after",
        }
    }
}

fn parse_trainer(s: &str) -> Result<Trainer, String> {
    s.parse()
}

/// Parses `a=0.96,b=0.59,c=0.23`.
pub fn parse_item(s: &str) -> Result<ItemParams, String> {
    let (mut a, mut b, mut c) = (None, None, None);
    for part in s.split(',') {
        let (k, v) = part
            .split_once('=')
            .ok_or_else(|| format!("`{part}` is not key=value"))?;
        let v: f64 = v.trim().parse().map_err(|_| format!("`{v}` is not a number"))?;
        match k.trim() {
            "a" => a = Some(v),
            "b" => b = Some(v),
            "c" => c = Some(v),
            other => return Err(format!("unknown item key `{other}`")),
        }
    }
    match (a, b, c) {
        (Some(a), Some(b), Some(c)) => ItemParams::new(a, b, c).map_err(|e| e.to_string()),
        _ => Err("item needs a, b and c".into()),
    }
}

fn parse_level(s: &str) -> CliResult<PerformanceLevel> {
    PerformanceLevel::from_name(s).ok_or_else(|| {
        CliError::invalid(format!(
            "unknown level `{s}` (expected BelowBasic, Basic, Proficient or Advanced)"
        ))
    })
}

/// Runs the command line and returns the process exit status.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 1 } else { 0 };
        }
    };
    match execute(&cli) {
        Ok(outputs) => {
            for p in outputs {
                println!("wrote {}", p.display());
            }
            0
        }
        Err(e) => {
            eprintln!("error: {e}");
            e.code
        }
    }
}

const PRIOR_KEYS: [&str; 8] = [
    "prior_theta_mean",
    "prior_theta_sd",
    "prior_b_mean",
    "prior_b_sd",
    "prior_a_dof",
    "prior_a_scale",
    "prior_c_alpha",
    "prior_c_beta",
];

fn prior_from(cfg: &Config) -> CliResult<PriorConfig> {
    let d = PriorConfig::default();
    let prior = PriorConfig {
        theta: NormalPrior {
            mean: cfg.get("prior_theta_mean", d.theta.mean)?,
            sd: cfg.get("prior_theta_sd", d.theta.sd)?,
        },
        b: NormalPrior {
            mean: cfg.get("prior_b_mean", d.b.mean)?,
            sd: cfg.get("prior_b_sd", d.b.sd)?,
        },
        a: ChiPrior {
            dof: cfg.get("prior_a_dof", d.a.dof)?,
            scale: cfg.get("prior_a_scale", d.a.scale)?,
        },
        c: BetaPrior {
            alpha: cfg.get("prior_c_alpha", d.c.alpha)?,
            beta: cfg.get("prior_c_beta", d.c.beta)?,
        },
    };
    prior.validate()?;
    Ok(prior)
}

/// Writes the effective prior into the recorded configuration.
fn record_prior(cfg: &mut Config, prior: &PriorConfig) {
    let values = [
        prior.theta.mean,
        prior.theta.sd,
        prior.b.mean,
        prior.b.sd,
        prior.a.dof,
        prior.a.scale,
        prior.c.alpha,
        prior.c.beta,
    ];
    for (key, v) in PRIOR_KEYS.iter().zip(values) {
        cfg.set(key, v);
    }
}

const PRIOR_NOTE: &str = "prior a ~ scale * chi(dof) and c ~ Beta(alpha, beta) use chosen defaults unless configured";
const SEED_PARTICLE_NOTE: &str = "initial swarm or population holds the seed knowledge base as one member";

fn gs_from(cfg: &Config) -> CliResult<GsConfig> {
    let d = GsConfig::default();
    let gs = GsConfig {
        default_item: ItemParams::new(
            cfg.get("default_a", d.default_item.a())?,
            cfg.get("default_b", d.default_item.b())?,
            cfg.get("default_c", d.default_item.c())?,
        )?,
        max_sweeps: cfg.get("max_sweeps", d.max_sweeps)?,
        tolerance: cfg.get("tolerance", d.tolerance)?,
        ..d
    };
    gs.validate()?;
    Ok(gs)
}

fn learn_from(cfg: &Config, seed: u64) -> CliResult<LearnConfig> {
    let d = LearnConfig::new(pfml_core::pfml::PinningMethod::Method2);
    let learn = LearnConfig {
        max_generations: cfg.get("max_generations", d.max_generations)?,
        fitness_target: cfg.get("fitness_target", d.fitness_target)?,
        seed,
        ..d
    };
    learn.validate()?;
    Ok(learn)
}

fn with_keys(cfg: &Config, keys: &[&str], extra: &[&str]) -> CliResult<()> {
    let mut all: Vec<&str> = keys.to_vec();
    all.extend_from_slice(extra);
    cfg.check_keys(&all)?;
    Ok(())
}

fn load_kb(path: &Path) -> CliResult<FuzzySystem> {
    let text = fs::read_to_string(path).map_err(|e| CliError {
        code: 2,
        message: format!("{}: {e}", path.display()),
    })?;
    Ok(parse_fml(&text)?)
}

fn write_text(path: &Path, text: &str) -> CliResult<()> {
    fs::write(path, text).map_err(|e| CliError {
        code: 2,
        message: format!("{}: {e}", path.display()),
    })
}

fn theta_axis() -> Vec<f64> {
    (0..=800).map(|i| -4.0 + i as f64 / 100.0).collect()
}

fn execute(cli: &Cli) -> CliResult<Vec<PathBuf>> {
    let mut cfg = match &cli.config {
        Some(p) => Config::load(p)?,
        None => Config::default(),
    };
    let ws = Workspace::open(&cli.workspace)?;
    let seed = cli.seed;
    let mut outputs: Vec<PathBuf> = Vec::new();
    let mut notes: Vec<&str> = Vec::new();
    let name = match &cli.command {
        Command::Simulate => "simulate",
        Command::EstimateGs => "estimate-gs",
        Command::EstimateBayes => "estimate-bayes",
        Command::Assemble { .. } => "assemble",
        Command::BuildKb => "build-kb",
        Command::GenRules => "gen-rules",
        Command::Train { .. } => "train",
        Command::Evaluate { .. } => "evaluate",
        Command::Curves { .. } => "curves",
    };
    match &cli.command {
        Command::Simulate => {
            with_keys(
                &cfg,
                &[
                    "n_students",
                    "n_items",
                    "items_per_form",
                    "common_items",
                    "a_min",
                    "a_max",
                    "b_mean",
                    "b_sd",
                    "c_min",
                    "c_max",
                    "theta_mean",
                    "theta_sd",
                ],
                &[],
            )?;
            let d = CohortSpec::default();
            let spec = CohortSpec {
                n_students: cfg.get("n_students", d.n_students)?,
                n_items: cfg.get("n_items", d.n_items)?,
                items_per_form: cfg.get("items_per_form", d.items_per_form)?,
                common_items: cfg.get("common_items", d.common_items)?,
                a_range: (cfg.get("a_min", d.a_range.0)?, cfg.get("a_max", d.a_range.1)?),
                b_normal: (cfg.get("b_mean", d.b_normal.0)?, cfg.get("b_sd", d.b_normal.1)?),
                c_range: (cfg.get("c_min", d.c_range.0)?, cfg.get("c_max", d.c_range.1)?),
                theta_normal: (cfg.get("theta_mean", d.theta_normal.0)?, cfg.get("theta_sd", d.theta_normal.1)?),
                seed,
            };
            let cohort = generate_cohort(&spec)?;
            let m = &cohort.responses;
            let p = ws.path(RESPONSES);
            data::save_responses(&p, m)?;
            outputs.push(p);
            let p = ws.path(TRUE_ITEMS);
            data::save_items(&p, m.item_ids(), &cohort.items)?;
            outputs.push(p);
            let p = ws.path(TRUE_ABILITIES);
            data::save_abilities(&p, m.student_ids(), &cohort.abilities)?;
            outputs.push(p);
        }
        Command::EstimateGs => {
            with_keys(&cfg, &["max_sweeps", "tolerance", "default_a", "default_b", "default_c"], &PRIOR_KEYS)?;
            let m = data::ingest_responses(&ws.require(RESPONSES, "simulate")?)?;
            let prior = prior_from(&cfg)?;
            let est = gauss_seidel_estimate(&m, &gs_from(&cfg)?, &prior)?;
            record_prior(&mut cfg, &prior);
            notes.push(PRIOR_NOTE);
            let p = ws.path(ITEMS);
            data::save_items(&p, m.item_ids(), &est.items)?;
            outputs.push(p);
            let p = ws.path(ABILITIES);
            data::save_abilities(&p, m.student_ids(), &est.abilities)?;
            outputs.push(p);
            let p = ws.path("results/gs-convergence.csv");
            let rows: Vec<Vec<String>> = est
                .changes
                .iter()
                .enumerate()
                .map(|(i, c)| vec![(i + 1).to_string(), c.to_string()])
                .collect();
            data::save_table(&p, &["sweep", "max_change"], &rows)?;
            outputs.push(p);
        }
        Command::EstimateBayes => {
            with_keys(&cfg, &[], &PRIOR_KEYS)?;
            let m = data::ingest_responses(&ws.require(RESPONSES, "simulate")?)?;
            let (item_ids, items) = data::load_items(&ws.require(ITEMS, "estimate-gs")?)?;
            if item_ids != m.item_ids() {
                return Err(CliError::invalid("item ids in params/items.csv do not match the response file"));
            }
            let prior = prior_from(&cfg)?;
            record_prior(&mut cfg, &prior);
            notes.push(PRIOR_NOTE);
            let grid = Grid::theta_default();
            let thetas = m
                .rows()
                .map(|row| estimate_ability_map(row, &items, &prior, &grid))
                .collect::<Result<Vec<Ability>, _>>()?;
            let p = ws.path(BAYES_ABILITIES);
            data::save_abilities(&p, m.student_ids(), &thetas)?;
            outputs.push(p);
        }
        Command::Assemble { level, length } => {
            with_keys(&cfg, &["form_length", "cohort_size", "budget", "level"], &PRIOR_KEYS)?;
            let level = parse_level(level)?;
            cfg.set("level", level.name());
            if let Some(m) = length {
                cfg.set("form_length", m);
            }
            let (ids, bank) = data::load_items(&ws.require(ITEMS, "estimate-gs")?)?;
            let d = AssemblyConfig::new(10.min(bank.len()), level);
            let ac = AssemblyConfig {
                form_length: cfg.get("form_length", d.form_length)?,
                cohort_size: cfg.get("cohort_size", d.cohort_size)?,
                budget: cfg.get("budget", d.budget)?,
                prior: prior_from(&cfg)?,
                seed,
                ..d
            };
            let (form, trace) = assemble_form(&bank, &ac)?;
            let stem = format!("forms/form-{}", level.name());
            let p = ws.path(&format!("{stem}.csv"));
            let rows: Vec<Vec<String>> = form
                .item_indices
                .iter()
                .enumerate()
                .map(|(rank, &i)| {
                    let it = bank[i];
                    vec![
                        (rank + 1).to_string(),
                        ids[i].clone(),
                        it.a().to_string(),
                        it.b().to_string(),
                        it.c().to_string(),
                    ]
                })
                .collect();
            data::save_table(&p, &["rank", "item", "a", "b", "c"], &rows)?;
            outputs.push(p);
            let p = ws.path(&format!("{stem}-curves.csv"));
            let rows: Vec<Vec<String>> = (0..form.theta.len())
                .map(|k| vec![form.theta[k].to_string(), form.tif_curve[k].to_string(), form.tse_curve[k].to_string()])
                .collect();
            data::save_table(&p, &["theta", "tif", "tse"], &rows)?;
            outputs.push(p);
            let p = ws.path(&format!("{stem}-trace.csv"));
            let rows: Vec<Vec<String>> = trace
                .iter()
                .map(|s| {
                    vec![
                        s.iteration.to_string(),
                        s.sigma.to_string(),
                        s.best_objective.to_string(),
                        s.accepted.to_string(),
                    ]
                })
                .collect();
            data::save_table(&p, &["iteration", "sigma", "best_objective", "accepted"], &rows)?;
            outputs.push(p);
        }
        Command::BuildKb => {
            with_keys(&cfg, &[], &[])?;
            let p = ws.path(SEED_KB);
            write_text(&p, &serialize_fml(&default_assessment_kb()))?;
            outputs.push(p);
        }
        Command::GenRules => {
            with_keys(&cfg, &[], &[])?;
            let kb = load_kb(&ws.require(SEED_KB, "build-kb")?)?;
            let p = ws.path(SEED_SYSTEM);
            write_text(&p, &serialize_fml(&build_rule_base(&kb)?))?;
            outputs.push(p);
        }
        Command::Train { method } => {
            with_keys(&cfg, &["max_generations", "fitness_target", "training_rows", "method"], &[])?;
            cfg.set("method", method);
            let kb = load_kb(&ws.require(SEED_KB, "build-kb")?)?;
            let m = data::ingest_responses(&ws.require(RESPONSES, "simulate")?)?;
            let (_, items) = data::load_items(&ws.require(ITEMS, "estimate-gs")?)?;
            let (_, thetas) = data::load_abilities(&ws.require(ABILITIES, "estimate-gs")?)?;
            if items.len() != m.n_items() || thetas.len() != m.n_students() {
                return Err(CliError::invalid("parameter files do not match the response file"));
            }
            let students: Vec<usize> = (0..m.n_students()).collect();
            let cells = observed_cells(&m, &students, &items, &thetas);
            let training = training_set(&cells, cfg.get("training_rows", 500usize)?, seed)?;
            let outcome = method.train(&training, &learn_from(&cfg, seed)?, &kb)?;
            notes.push(SEED_PARTICLE_NOTE);
            let p = ws.path(&format!("kb/learned-{method}.xml"));
            write_text(&p, &serialize_fml(&outcome.system))?;
            outputs.push(p);
            let p = ws.path(&format!("results/fitness-{method}.csv"));
            data::save_table(&p, &["generation", "g_best_mse"], &history_rows(&outcome.history))?;
            outputs.push(p);
        }
        Command::Evaluate { kfold, method } => {
            with_keys(
                &cfg,
                &[
                    "folds",
                    "method",
                    "max_generations",
                    "fitness_target",
                    "training_rows",
                    "max_sweeps",
                    "tolerance",
                    "default_a",
                    "default_b",
                    "default_c",
                ],
                &PRIOR_KEYS,
            )?;
            cfg.set("folds", kfold);
            let trainer = match method {
                Some(t) => *t,
                None => cfg.raw("method").unwrap_or("pfml2").parse().map_err(CliError::invalid)?,
            };
            cfg.set("method", trainer);
            let m = data::ingest_responses(&ws.require(RESPONSES, "simulate")?)?;
            let seed_path = ws.path(SEED_KB);
            let kb = if seed_path.is_file() {
                load_kb(&seed_path)?
            } else {
                default_assessment_kb()
            };
            let settings = EvalSettings {
                folds: *kfold,
                trainer,
                learn: learn_from(&cfg, seed)?,
                gs: gs_from(&cfg)?,
                prior: prior_from(&cfg)?,
                training_rows: cfg.get("training_rows", 500usize)?,
                seed,
            };
            record_prior(&mut cfg, &settings.prior);
            notes.push(PRIOR_NOTE);
            notes.push(SEED_PARTICLE_NOTE);
            let reports = evaluate_kfold(&m, &kb, &settings, |r| {
                eprintln!(
                    "fold {}: auc before {} after {}",
                    r.fold,
                    fmt_opt(r.before.auc),
                    fmt_opt(r.after.auc)
                );
            })?;
            for r in &reports {
                let p = ws.path(&format!("results/fold-{}-curves.csv", r.fold));
                data::save_table(&p, &["system", "threshold", "precision", "recall", "tpr", "fpr"], &fold_rows(r))?;
                outputs.push(p);
                let p = ws.path(&format!("kb/learned-fold-{}-{trainer}.xml", r.fold));
                write_text(&p, &serialize_fml(&r.learned))?;
                outputs.push(p);
            }
            let p = ws.path(SUMMARY);
            write_json(&p, &summary_json(trainer, &reports))?;
            outputs.push(p);
        }
        Command::Curves {
            kind,
            item,
            level,
            method,
            fold,
            system,
            out,
        } => {
            with_keys(&cfg, &[], &[])?;
            let (header, rows) = curve_rows(&ws, *kind, item, level.as_deref(), *method, *fold, *system)?;
            let kind_name = kind.to_possible_value().map(|v| v.get_name().to_owned()).unwrap_or_default();
            let p = match out {
                Some(p) => p.clone(),
                None => ws.path(&format!("results/curves-{kind_name}.csv")),
            };
            data::save_table(&p, &header, &rows)?;
            outputs.push(p);
        }
    }
    let mut ctx = RunContext::new(name, cfg, seed);
    ctx.notes = notes.into_iter().map(str::to_owned).collect();
    for p in &outputs {
        ws.record(p, &ctx)?;
    }
    let mut all = outputs.clone();
    all.push(ws.log_run(&ctx, &outputs)?);
    Ok(all)
}

fn history_rows(history: &[f64]) -> Vec<Vec<String>> {
    history
        .iter()
        .enumerate()
        .map(|(g, f)| vec![g.to_string(), f.to_string()])
        .collect()
}

fn fold_rows(r: &FoldReport) -> Vec<Vec<String>> {
    let mut rows = Vec::new();
    for (label, table) in [("before", &r.before), ("after", &r.after)] {
        for row in &table.rows {
            rows.push(vec![
                label.to_owned(),
                format!("{:.2}", row.threshold),
                fmt_opt(row.precision),
                fmt_opt(row.recall),
                fmt_opt(row.tpr),
                fmt_opt(row.fpr),
            ]);
        }
    }
    rows
}

fn summary_json(trainer: Trainer, reports: &[FoldReport]) -> serde_json::Value {
    let folds: Vec<serde_json::Value> = reports
        .iter()
        .map(|r| {
            serde_json::json!({
                "fold": r.fold,
                "train_students": r.train_students,
                "test_students": r.test_students,
                "training_rows": r.training_rows,
                "test_cells": r.test_cells,
                "gs_sweeps": r.gs_sweeps,
                "generations": r.history.len() - 1,
                "train_mse": r.train_mse,
                "mse_before": r.mse_before,
                "mse_after": r.mse_after,
                "auc_before": r.before.auc,
                "auc_after": r.after.auc,
            })
        })
        .collect();
    let improved = reports
        .iter()
        .filter(|r| matches!((r.before.auc, r.after.auc), (Some(b), Some(a)) if a >= b))
        .count();
    serde_json::json!({
        "method": trainer.name(),
        "folds": folds,
        "folds_auc_not_worse": improved,
    })
}

fn curve_rows(
    ws: &Workspace,
    kind: CurveKind,
    items: &[ItemParams],
    level: Option<&str>,
    method: Option<Trainer>,
    fold: usize,
    system: SystemChoice,
) -> CliResult<(Vec<&'static str>, Vec<Vec<String>>)> {
    let single = || -> CliResult<ItemParams> {
        match items {
            [one] => Ok(*one),
            _ => Err(CliError::invalid("this curve needs exactly one --item a=..,b=..,c=..")),
        }
    };
    match kind {
        CurveKind::Icc => {
            let it = single()?;
            let rows = theta_axis()
                .into_iter()
                .map(|t| vec![format!("{t:.2}"), icc_probability(&it, t).to_string()])
                .collect();
            Ok((vec!["theta", "p"], rows))
        }
        CurveKind::ItemInfo => {
            let it = single()?;
            let rows = theta_axis()
                .into_iter()
                .map(|t| Ok(vec![format!("{t:.2}"), item_information(&it, t)?.to_string()]))
                .collect::<CliResult<_>>()?;
            Ok((vec!["theta", "information"], rows))
        }
        CurveKind::TifTse => {
            let bank: Vec<ItemParams> = match (level, items.is_empty()) {
                (Some(level), true) => {
                    let level = parse_level(level)?;
                    let rel = format!("forms/form-{}.csv", level.name());
                    let (_, rows) = data::load_table(&ws.require(&rel, "assemble")?)?;
                    rows.iter()
                        .map(|r| {
                            let num = |k: usize| r.get(k).and_then(|v| v.parse::<f64>().ok());
                            match (num(2), num(3), num(4)) {
                                (Some(a), Some(b), Some(c)) => Ok(ItemParams::new(a, b, c)?),
                                _ => Err(CliError::invalid(format!("malformed row in {rel}"))),
                            }
                        })
                        .collect::<CliResult<_>>()?
                }
                (None, false) => items.to_vec(),
                _ => return Err(CliError::invalid("tif-tse needs either --item values or --level")),
            };
            let rows = theta_axis()
                .into_iter()
                .map(|t| {
                    Ok(vec![
                        format!("{t:.2}"),
                        test_information(&bank, t)?.to_string(),
                        test_standard_error(&bank, t)?.to_string(),
                    ])
                })
                .collect::<CliResult<_>>()?;
            Ok((vec!["theta", "tif", "tse"], rows))
        }
        CurveKind::FitnessHistory => {
            let method = method.ok_or_else(|| CliError::invalid("fitness-history needs --method"))?;
            let (_, rows) = data::load_table(&ws.require(&format!("results/fitness-{method}.csv"), "train")?)?;
            Ok((vec!["generation", "g_best_mse"], rows))
        }
        CurveKind::Pr | CurveKind::Roc => {
            let rel = format!("results/fold-{fold}-curves.csv");
            let (_, rows) = data::load_table(&ws.require(&rel, "evaluate")?)?;
            let (x, y, header) = if kind == CurveKind::Pr {
                (3, 2, vec!["threshold", "recall", "precision"])
            } else {
                (5, 4, vec!["threshold", "fpr", "tpr"])
            };
            let rows = rows
                .iter()
                .filter(|r| r.first().map(String::as_str) == Some(system.name()))
                .filter(|r| r.len() == 6 && !r[x].is_empty() && !r[y].is_empty())
                .map(|r| vec![r[1].clone(), r[x].clone(), r[y].clone()])
                .collect();
            Ok((header, rows))
        }
    }
}
