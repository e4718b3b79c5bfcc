use std::fs;
use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;
use spatcond::envelopes::{global_envelope, CurveSet, DEFAULT_ALPHA};
use spatcond::estimation::{
    default_r_grid, fit_intensity, fit_minimum_contrast, mple_strauss, mple_strauss_conditional, profile_mple_r,
    ContrastConfig, ContrastModel, FitResult, FittedParams, DEFAULT_QUAD_RESOLUTION,
};
use spatcond::summaries::{estimate, SummaryKind, DEFAULT_F_RESOLUTION};
use spatcond::{RGrid, SeedSpec};
use spatcond_cli::harness::{
    default_rgrid, run_mple_comparison, run_study, run_table1, write_csv, write_manifest, write_study, MpleConfig,
    StudyConfig, Table1Sim, TABLE1_CHAIN, TABLE1_DEFAULT_REPS,
};
use spatcond_cli::io::{csv_files, read_curve, read_pattern, write_curve, write_envelope, write_json, write_pattern};
use spatcond_cli::model::{ModelFile, ModelKind, Sampler};

#[derive(Parser)]
#[command(name = "spatcond", version, about = "Conditional simulation, summaries, envelopes and fitting for planar point processes")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Stat {
    #[value(name = "K", alias = "k")]
    K,
    #[value(name = "F", alias = "f")]
    F,
    #[value(name = "G", alias = "g")]
    G,
    #[value(name = "J", alias = "j")]
    J,
}

impl From<Stat> for SummaryKind {
    fn from(s: Stat) -> Self {
        match s {
            Stat::K => SummaryKind::K,
            Stat::F => SummaryKind::F,
            Stat::G => SummaryKind::G,
            Stat::J => SummaryKind::J,
        }
    }
}

#[derive(Clone, Copy, PartialEq, ValueEnum)]
enum FitModel {
    Poisson,
    Lgcp,
    Strauss,
    StraussCond,
    Dpp,
}

#[derive(Subcommand)]
enum Command {
    /// Simulate patterns, one CSV per replication.
    Simulate {
        #[arg(long, value_enum)]
        model: ModelKind,
        /// TOML file with a section per model.
        #[arg(long)]
        params: PathBuf,
        /// Condition on this many points in the window.
        #[arg(long)]
        condition_n: Option<usize>,
        #[arg(long, default_value_t = 1)]
        reps: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: PathBuf,
    },
    /// Estimate one summary function of a pattern.
    #[command(alias = "summarize")]
    Summarise {
        #[arg(long, value_enum)]
        stat: Stat,
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long)]
        out: PathBuf,
        /// Largest distance; defaults to a quarter of the shorter side.
        #[arg(long)]
        rmax: Option<f64>,
        #[arg(long, default_value_t = 513)]
        nr: usize,
        #[arg(long, default_value_t = DEFAULT_F_RESOLUTION)]
        f_resolution: usize,
    },
    /// Global extreme rank length envelope of a data curve against simulated curves.
    Envelope {
        #[arg(long)]
        data: PathBuf,
        /// Directory of simulated curve CSVs.
        #[arg(long)]
        sims: PathBuf,
        #[arg(long, default_value_t = DEFAULT_ALPHA)]
        alpha: f64,
        #[arg(long)]
        out: PathBuf,
    },
    /// Fit a model to a pattern.
    Fit {
        #[arg(long, value_enum)]
        model: FitModel,
        #[arg(long = "in")]
        input: PathBuf,
        /// Known interaction radius for the Strauss fits.
        #[arg(long = "R", conflicts_with = "profile_r")]
        r: Option<f64>,
        /// Profile the pseudo-likelihood over R in [0.03, 0.07].
        #[arg(long = "profile-R")]
        profile_r: bool,
        #[arg(long, default_value_t = DEFAULT_QUAD_RESOLUTION)]
        quad_resolution: usize,
        #[arg(long)]
        out: PathBuf,
    },
    /// Run an envelope study from a TOML config.
    Study {
        #[arg(long)]
        config: PathBuf,
        /// Output directory; overrides `out` in the config.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Mean Strauss counts from the approximation, optionally simulated.
    Table1 {
        #[arg(long)]
        simulate: bool,
        #[arg(long, default_value_t = TABLE1_DEFAULT_REPS)]
        reps: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value = ".")]
        out: PathBuf,
        #[arg(long, default_value_t = 0)]
        threads: usize,
    },
    /// Compare conditional and unconditional pseudo-likelihood estimates of gamma.
    MpleCompare {
        #[arg(long, default_value_t = 1000)]
        reps: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Fix gamma instead of drawing it uniformly on [0.01, 1].
        #[arg(long)]
        gamma: Option<f64>,
        #[arg(long, default_value_t = DEFAULT_QUAD_RESOLUTION)]
        quad_resolution: usize,
        #[arg(long, default_value = ".")]
        out: PathBuf,
        #[arg(long, default_value_t = 0)]
        threads: usize,
    },
}

fn create_dir(dir: &Path) -> Result<()> {
    fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))
}

fn simulate(
    kind: ModelKind,
    params: &Path,
    condition_n: Option<usize>,
    reps: usize,
    seed: u64,
    out: &Path,
) -> Result<()> {
    let file = ModelFile::read(params)?;
    let model = file.model(kind)?;
    let w = file.window()?;
    let sampler = Sampler::new(&model, &w, &file.sim, file.chains())?;
    create_dir(out)?;
    let width = reps.saturating_sub(1).to_string().len().max(4);
    for k in 0..reps {
        let mut rng = SeedSpec::new(seed, k as u64).rng();
        let x = match condition_n {
            Some(n) => sampler.sample_conditional(n, &mut rng),
            None => sampler.sample(&mut rng),
        }
        .with_context(|| format!("replication {k}"))?;
        write_pattern(&out.join(format!("pattern_{k:0width$}.csv")), &x)?;
    }
    println!("wrote {reps} patterns of model {model} to {}", out.display());
    Ok(())
}

fn summarise(stat: Stat, input: &Path, out: &Path, rmax: Option<f64>, nr: usize, res: usize) -> Result<()> {
    let x = read_pattern(input)?;
    let rgrid = match rmax {
        Some(r) => RGrid::linspace(0.0, r, nr)?,
        None if nr == 513 => default_rgrid(x.window()),
        None => RGrid::linspace(0.0, 0.25 * x.window().min_side(), nr)?,
    };
    let c = estimate(stat.into(), &x, &rgrid, res)?;
    write_curve(out, &c)
}

fn envelope(data: &Path, sims: &Path, alpha: f64, out: &Path) -> Result<()> {
    let d = read_curve(data, None)?;
    let files = csv_files(sims)?;
    if files.is_empty() {
        bail!("no curve files in {}", sims.display());
    }
    let curves = files.iter().map(|f| read_curve(f, Some(d.kind()))).collect::<Result<Vec<_>>>()?;
    let n = curves.len();
    let env = global_envelope(&CurveSet::new(d, curves)?, alpha)?;
    let json = write_envelope(out, &env, n)?;
    println!("p-value {} (alpha {alpha}, {n} simulations); summary in {}", env.p_value, json.display());
    Ok(())
}

#[derive(Serialize)]
struct FitOutput<'a> {
    model: &'a str,
    points: usize,
    #[serde(flatten)]
    fit: FitResult,
}

fn fit(model: FitModel, input: &Path, r: Option<f64>, profile: bool, res: usize, out: &Path) -> Result<()> {
    let x = read_pattern(input)?;
    let plain = |params| FitResult { params, objective: f64::NAN, converged: true, iterations: 0, boundary: false };
    let (name, result) = match model {
        FitModel::Poisson => ("poisson", plain(FittedParams::Poisson(fit_intensity(&x)?))),
        FitModel::Lgcp => ("lgcp", fit_minimum_contrast(&x, ContrastModel::Lgcp, &ContrastConfig::default())?),
        FitModel::Dpp => ("dpp", fit_minimum_contrast(&x, ContrastModel::Dpp, &ContrastConfig::default())?),
        FitModel::Strauss => match r {
            Some(r) => ("strauss", mple_strauss(&x, r, res)?),
            None => ("strauss", profile_mple_r(&x, &default_r_grid(), res)?),
        },
        FitModel::StraussCond => {
            let r = match (r, profile) {
                (Some(r), _) => r,
                (None, true) => match profile_mple_r(&x, &default_r_grid(), res)?.params {
                    FittedParams::Strauss(p) => p.r(),
                    _ => unreachable!("profile fits return Strauss parameters"),
                },
                (None, false) => bail!("strauss-cond needs --R or --profile-R"),
            };
            ("strauss-cond", mple_strauss_conditional(&x, r, res)?)
        }
    };
    write_json(out, &FitOutput { model: name, points: x.len(), fit: result })?;
    println!("{}", serde_json::to_string(&result.params)?);
    Ok(())
}

fn main() -> Result<()> {
    match Cli::parse().command {
        Command::Simulate { model, params, condition_n, reps, seed, out } => {
            simulate(model, &params, condition_n, reps, seed, &out)
        }
        Command::Summarise { stat, input, out, rmax, nr, f_resolution } => {
            summarise(stat, &input, &out, rmax, nr, f_resolution)
        }
        Command::Envelope { data, sims, alpha, out } => envelope(&data, &sims, alpha, &out),
        Command::Fit { model, input, r, profile_r, quad_resolution, out } => {
            fit(model, &input, r, profile_r, quad_resolution, &out)
        }
        Command::Study { config, out } => {
            let cfg = StudyConfig::read(&config)?;
            let dir = out.or_else(|| cfg.out.clone()).unwrap_or_else(|| PathBuf::from("."));
            let rows = run_study(&cfg)?;
            write_study(&dir, &cfg, &rows)?;
            let failed = rows.iter().filter(|r| r.error.is_some()).count();
            let excluded = rows.iter().filter(|r| r.excluded).count();
            println!("{} rows ({excluded} excluded, {failed} failed) in {}", rows.len(), dir.display());
            Ok(())
        }
        Command::Table1 { simulate, reps, seed, out, threads } => {
            let chain = TABLE1_CHAIN;
            let sim = simulate.then_some(Table1Sim { reps, seed, chain, threads });
            let rows = run_table1(sim.as_ref())?;
            create_dir(&out)?;
            write_csv(&out.join("table1.csv"), &rows)?;
            #[derive(Serialize)]
            struct Cfg {
                simulate: bool,
                reps: usize,
            }
            write_manifest(&out, "table1", Some(seed), &Cfg { simulate, reps }, &["table1.csv"])?;
            for r in &rows {
                match (r.sim_mean, r.sim_se) {
                    (Some(m), Some(se)) => println!("beta {:>3} gamma {:.1}: {:.2} ({m:.2} +- {se:.2})", r.beta, r.gamma, r.approx),
                    _ => println!("beta {:>3} gamma {:.1}: {:.2}", r.beta, r.gamma, r.approx),
                }
            }
            Ok(())
        }
        Command::MpleCompare { reps, seed, gamma, quad_resolution, out, threads } => {
            let mut cfg = MpleConfig { reps, seed, resolution: quad_resolution, threads, ..MpleConfig::default() };
            if let Some(g) = gamma {
                cfg.gamma_range = (g, g);
            }
            let (rows, summary) = run_mple_comparison(&cfg)?;
            create_dir(&out)?;
            write_csv(&out.join("mple.csv"), &rows)?;
            write_json(&out.join("mple_summary.json"), &summary)?;
            write_manifest(&out, "mple-compare", Some(seed), &cfg, &["mple.csv", "mple_summary.json"])?;
            println!(
                "mean |gamma_cond - gamma_uncond| = {:.5}, max = {:.5} over {} of {} reps",
                summary.mean_abs_diff, summary.max_abs_diff, summary.compared, summary.reps
            );
            Ok(())
        }
    }
}
