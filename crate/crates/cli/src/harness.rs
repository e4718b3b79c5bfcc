//! Batch experiments: the Strauss count table, the envelope study and the
//! conditional/unconditional pseudo-likelihood comparison.

use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use spatcond::envelopes::{global_envelope, CurveSet};
use spatcond::estimation::{mple_strauss, mple_strauss_conditional, ExclusionRule, DEFAULT_QUAD_RESOLUTION};
use spatcond::models::{ripley_count_mean, DppGaussParams, LgcpParams, PoissonParams, StraussParams};
use spatcond::samplers::{strauss, ChainConfig};
use spatcond::stats::{mean, std_error};
use spatcond::summaries::{estimate_g, estimate_k, j_from, Curve, FLattice, SummaryKind, DEFAULT_F_RESOLUTION};
use spatcond::{PointPattern, RGrid, SeedSpec, Window};

use crate::io::write_json;
use crate::model::{chains, fit_for_study, ChainSection, Model, ModelKind, Sampler, SimOptions, WindowSpec};

pub const VERSION: &str = env!("CARGO_PKG_VERSION");

/// Runs `f` on a pool of `threads` workers, or on rayon's global pool when
/// `threads` is zero.
fn with_threads<T: Send>(threads: usize, f: impl FnOnce() -> T + Send) -> Result<T> {
    if threads == 0 {
        return Ok(f());
    }
    Ok(rayon::ThreadPoolBuilder::new().num_threads(threads).build()?.install(f))
}

// ---------------------------------------------------------------------------
// Strauss count table

pub const TABLE1_BETAS: [f64; 2] = [50.0, 200.0];
pub const TABLE1_GAMMAS: [f64; 6] = [0.0, 0.2, 0.4, 0.6, 0.8, 1.0];
pub const TABLE1_R: f64 = 0.05;
pub const TABLE1_DEFAULT_REPS: usize = 5000;
/// Table chains simulate the process on the unit square itself.
pub const TABLE1_CHAIN: ChainConfig = ChainConfig::free_boundary();

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Table1Row {
    pub beta: f64,
    pub gamma: f64,
    /// Mean of the approximate count distribution.
    pub approx: f64,
    pub sim_mean: Option<f64>,
    pub sim_se: Option<f64>,
    pub sim_reps: Option<usize>,
}

/// Mean and standard error of `N(W)` over `reps` independent chains on the
/// unit square. Rep `k` uses stream `k` of `seed`.
pub fn strauss_count_mean(
    p: &StraussParams,
    reps: usize,
    seed: u64,
    cfg: &ChainConfig,
    threads: usize,
) -> Result<(f64, f64)> {
    let w = Window::unit();
    let counts: Vec<Result<f64>> = with_threads(threads, || {
        (0..reps as u64)
            .into_par_iter()
            .map(|k| Ok(strauss::unconditional(p, &w, cfg, &mut SeedSpec::new(seed, k).rng())?.len() as f64))
            .collect()
    })?;
    let counts = counts.into_iter().collect::<Result<Vec<f64>>>()?;
    Ok((mean(&counts), std_error(&counts)))
}

#[derive(Debug, Clone, Copy)]
pub struct Table1Sim {
    pub reps: usize,
    pub seed: u64,
    pub chain: ChainConfig,
    pub threads: usize,
}

/// The 2 x 6 grid of approximate means, with simulated means when `sim` is
/// given. Cell `c` (row-major) simulates with seed `sim.seed + c`.
pub fn run_table1(sim: Option<&Table1Sim>) -> Result<Vec<Table1Row>> {
    let mut rows = Vec::new();
    for (c, (&beta, &gamma)) in
        TABLE1_BETAS.iter().flat_map(|b| TABLE1_GAMMAS.iter().map(move |g| (b, g))).enumerate()
    {
        let p = StraussParams::new(beta, gamma, TABLE1_R)?;
        let approx = ripley_count_mean(&p)?;
        let (sim_mean, sim_se, sim_reps) = match sim {
            Some(s) => {
                let (m, se) = strauss_count_mean(&p, s.reps, s.seed.wrapping_add(c as u64), &s.chain, s.threads)?;
                (Some(m), Some(se), Some(s.reps))
            }
            None => (None, None, None),
        };
        rows.push(Table1Row { beta, gamma, approx, sim_mean, sim_se, sim_reps });
    }
    Ok(rows)
}

pub fn write_csv<T: Serialize>(path: &Path, rows: &[T]) -> Result<()> {
    let mut wtr = csv::Writer::from_path(path).with_context(|| format!("writing {}", path.display()))?;
    for r in rows {
        wtr.serialize(r)?;
    }
    wtr.flush()?;
    Ok(())
}

#[derive(Debug, Serialize)]
struct Manifest<'a, C: Serialize> {
    software: &'static str,
    version: &'static str,
    command: &'a str,
    seed: Option<u64>,
    config: &'a C,
    outputs: &'a [&'a str],
}

pub fn write_manifest<C: Serialize>(
    dir: &Path,
    command: &str,
    seed: Option<u64>,
    config: &C,
    outputs: &[&str],
) -> Result<()> {
    let m = Manifest { software: "spatcond", version: VERSION, command, seed, config, outputs };
    write_json(&dir.join("manifest.json"), &m)
}

// ---------------------------------------------------------------------------
// Envelope study

/// A single flag or a set of flags in the config file.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Flags {
    One(bool),
    Many(Vec<bool>),
}

impl Flags {
    pub fn values(&self) -> Vec<bool> {
        match self {
            Flags::One(b) => vec![*b],
            Flags::Many(v) => v.clone(),
        }
    }
}

/// `n` equally spaced distances from `min` to `max`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridSpec {
    pub min: f64,
    pub max: f64,
    pub n: usize,
}

/// 513 points from 0 to a quarter of the shorter side.
pub fn default_rgrid(w: &Window) -> RGrid {
    RGrid::linspace(0.0, 0.25 * w.min_side(), 513).expect("valid grid")
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StudyConfig {
    pub model: ModelKind,
    #[serde(default)]
    pub seed: u64,
    #[serde(default = "StudyConfig::default_n_data")]
    pub n_data: usize,
    #[serde(default = "StudyConfig::default_n_env")]
    pub n_env: usize,
    #[serde(default = "StudyConfig::default_conditional")]
    pub conditional: Flags,
    #[serde(default = "StudyConfig::default_statistics")]
    pub statistics: Vec<SummaryKind>,
    /// Simulate from parameters fitted to each data pattern.
    #[serde(default = "StudyConfig::default_refit")]
    pub refit: Flags,
    #[serde(default = "StudyConfig::default_alpha")]
    pub alpha: f64,
    #[serde(default = "StudyConfig::default_f_resolution")]
    pub f_resolution: usize,
    pub rgrid: Option<GridSpec>,
    /// Worker threads across data replications; 0 uses all cores.
    #[serde(default)]
    pub threads: usize,
    pub out: Option<PathBuf>,
    #[serde(default)]
    pub exclusion: ExclusionRule,
    pub window: Option<WindowSpec>,
    pub poisson: Option<PoissonParams>,
    pub lgcp: Option<LgcpParams>,
    pub strauss: Option<StraussParams>,
    pub dpp: Option<DppGaussParams>,
    #[serde(default)]
    pub chain: ChainSection,
    #[serde(default)]
    pub sim: SimOptions,
}

impl StudyConfig {
    fn default_n_data() -> usize {
        100
    }
    fn default_n_env() -> usize {
        499
    }
    fn default_conditional() -> Flags {
        Flags::Many(vec![true, false])
    }
    fn default_statistics() -> Vec<SummaryKind> {
        SummaryKind::ALL.to_vec()
    }
    fn default_refit() -> Flags {
        Flags::One(false)
    }
    fn default_alpha() -> f64 {
        0.05
    }
    fn default_f_resolution() -> usize {
        DEFAULT_F_RESOLUTION
    }

    /// Defaults for `model` with the given true parameters.
    pub fn new(model: Model) -> StudyConfig {
        let mut cfg = StudyConfig {
            model: model.kind(),
            seed: 0,
            n_data: Self::default_n_data(),
            n_env: Self::default_n_env(),
            conditional: Self::default_conditional(),
            statistics: Self::default_statistics(),
            refit: Self::default_refit(),
            alpha: Self::default_alpha(),
            f_resolution: Self::default_f_resolution(),
            rgrid: None,
            threads: 0,
            out: None,
            exclusion: ExclusionRule::default(),
            window: None,
            poisson: None,
            lgcp: None,
            strauss: None,
            dpp: None,
            chain: ChainSection::default(),
            sim: SimOptions::default(),
        };
        match model {
            Model::Poisson(p) => cfg.poisson = Some(p),
            Model::Lgcp(p) => cfg.lgcp = Some(p),
            Model::Strauss(p) => cfg.strauss = Some(p),
            Model::Dpp(p) => cfg.dpp = Some(p),
        }
        cfg
    }

    pub fn parse(text: &str) -> Result<StudyConfig> {
        let cfg: StudyConfig = toml::from_str(text)?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn read(path: &Path) -> Result<StudyConfig> {
        let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
        StudyConfig::parse(&text).with_context(|| format!("parsing {}", path.display()))
    }

    pub fn true_model(&self) -> Result<Model> {
        let missing = || anyhow::anyhow!("study config has no parameters for model {:?}", self.model);
        Ok(match self.model {
            ModelKind::Poisson => Model::Poisson(self.poisson.ok_or_else(missing)?),
            ModelKind::Lgcp => Model::Lgcp(self.lgcp.ok_or_else(missing)?),
            ModelKind::Strauss => Model::Strauss(self.strauss.ok_or_else(missing)?),
            ModelKind::Dpp => Model::Dpp(self.dpp.ok_or_else(missing)?),
        })
    }

    pub fn window(&self) -> Result<Window> {
        self.window.map_or(Ok(Window::unit()), |w| w.window())
    }

    pub fn rgrid(&self) -> Result<RGrid> {
        match self.rgrid {
            Some(g) => Ok(RGrid::linspace(g.min, g.max, g.n)?),
            None => Ok(default_rgrid(&self.window()?)),
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.n_data < 1 {
            bail!("n_data must be at least 1");
        }
        if self.n_env < 39 {
            bail!("n_env must be at least 39");
        }
        if !(self.alpha > 0.0 && self.alpha < 1.0) {
            bail!("alpha must lie in (0, 1)");
        }
        if self.statistics.is_empty() || self.conditional.values().is_empty() || self.refit.values().is_empty() {
            bail!("statistics, conditional and refit must be nonempty");
        }
        self.true_model()?;
        let w = self.window()?;
        let rg = self.rgrid()?;
        if self.statistics.iter().any(|s| matches!(s, SummaryKind::F | SummaryKind::J)) {
            FLattice::new(&w, &rg, self.f_resolution)?;
        }
        Ok(())
    }
}

/// One envelope: a data replication, a statistic and the two flags.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StudyRow {
    pub replication: usize,
    pub statistic: SummaryKind,
    pub conditional: bool,
    pub fitted: bool,
    pub excluded: bool,
    pub data_count: usize,
    /// Simulations behind the envelope.
    pub sims: usize,
    /// Smallest and largest simulated count, for auditing conditioning.
    pub sim_count_min: Option<usize>,
    pub sim_count_max: Option<usize>,
    pub area: Option<f64>,
    pub p_value: Option<f64>,
    /// Parameters the simulations used.
    pub params: String,
    pub error: Option<String>,
}

/// Computes the requested statistics, sharing `F` and `G` with `J`.
struct Summariser {
    rgrid: RGrid,
    lattice: Option<FLattice>,
    stats: Vec<SummaryKind>,
}

impl Summariser {
    fn new(w: &Window, rgrid: RGrid, stats: &[SummaryKind], f_resolution: usize) -> Result<Self> {
        let lattice = if stats.iter().any(|s| matches!(s, SummaryKind::F | SummaryKind::J)) {
            Some(FLattice::new(w, &rgrid, f_resolution)?)
        } else {
            None
        };
        Ok(Summariser { rgrid, lattice, stats: stats.to_vec() })
    }

    /// Curves in the order of `stats`.
    fn curves(&self, x: &PointPattern) -> spatcond::Result<Vec<Curve>> {
        let need = |k| self.stats.contains(&k) || (k != SummaryKind::K && self.stats.contains(&SummaryKind::J));
        let f = match (&self.lattice, need(SummaryKind::F)) {
            (Some(l), true) => Some(l.estimate(x)?),
            _ => None,
        };
        let g = if need(SummaryKind::G) { Some(estimate_g(x, &self.rgrid)?) } else { None };
        self.stats
            .iter()
            .map(|s| match s {
                SummaryKind::K => estimate_k(x, &self.rgrid),
                SummaryKind::F => Ok(f.clone().expect("computed")),
                SummaryKind::G => Ok(g.clone().expect("computed")),
                SummaryKind::J => j_from(f.as_ref().expect("computed"), g.as_ref().expect("computed")),
            })
            .collect()
    }
}

struct Simulated {
    curves: Vec<Vec<Curve>>,
    count_min: usize,
    count_max: usize,
}

fn simulate_set(
    sampler: &Sampler,
    summ: &Summariser,
    conditional: Option<usize>,
    n_env: usize,
    seed: SeedSpec,
) -> Result<Simulated> {
    let mut rng = seed.rng();
    let mut curves = vec![Vec::with_capacity(n_env); summ.stats.len()];
    let (mut lo, mut hi) = (usize::MAX, 0);
    for _ in 0..n_env {
        let x = match conditional {
            Some(n) => sampler.sample_conditional(n, &mut rng)?,
            None => sampler.sample(&mut rng)?,
        };
        lo = lo.min(x.len());
        hi = hi.max(x.len());
        for (set, c) in curves.iter_mut().zip(summ.curves(&x)?) {
            set.push(c);
        }
    }
    Ok(Simulated { curves, count_min: lo, count_max: hi })
}

/// Stream index of the simulation set for a (fitted, conditional) pair.
fn sim_stream(fitted: bool, conditional: bool) -> u64 {
    1 + 2 * fitted as u64 + conditional as u64
}

struct StudyContext<'a> {
    cfg: &'a StudyConfig,
    window: Window,
    truth: Model,
    true_sampler: Sampler,
    summ: Summariser,
}

impl StudyContext<'_> {
    fn replicate(&self, i: usize) -> Vec<StudyRow> {
        let cfg = self.cfg;
        let base = SeedSpec::new(cfg.seed, i as u64);
        let flags = cfg.conditional.values();
        let mut rows = Vec::new();
        let push_all = |rows: &mut Vec<StudyRow>, proto: StudyRow| {
            for &cond in &flags {
                for &s in &cfg.statistics {
                    rows.push(StudyRow { statistic: s, conditional: cond, ..proto.clone() });
                }
            }
        };
        let proto = |fitted: bool, data_count: usize, params: String, error: Option<String>| StudyRow {
            replication: i,
            statistic: SummaryKind::K,
            conditional: false,
            fitted,
            excluded: false,
            data_count,
            sims: 0,
            sim_count_min: None,
            sim_count_max: None,
            area: None,
            p_value: None,
            params,
            error,
        };

        let data = match self.true_sampler.sample(&mut base.rng()) {
            Ok(x) => x,
            Err(e) => {
                for fitted in cfg.refit.values() {
                    push_all(&mut rows, proto(fitted, 0, String::new(), Some(format!("data simulation: {e}"))));
                }
                return rows;
            }
        };
        let n = data.len();
        let data_curves = self.summ.curves(&data);

        for fitted in cfg.refit.values() {
            let model = if fitted {
                match fit_for_study(cfg.model, &data).map(|p| (Model::from_fit(&p), cfg.exclusion.excludes(&p))) {
                    Ok((Some(m), excluded)) => {
                        if excluded {
                            push_all(&mut rows, StudyRow { excluded: true, ..proto(true, n, m.to_string(), None) });
                            continue;
                        }
                        m
                    }
                    Ok((None, _)) => unreachable!("study fits estimate every parameter"),
                    Err(e) => {
                        push_all(&mut rows, proto(true, n, String::new(), Some(format!("fit: {e}"))));
                        continue;
                    }
                }
            } else {
                self.truth
            };
            let params = model.to_string();
            let data_curves = match &data_curves {
                Ok(c) => c,
                Err(e) => {
                    push_all(&mut rows, proto(fitted, n, params, Some(format!("data summary: {e}"))));
                    continue;
                }
            };
            let fitted_sampler;
            let sampler = if fitted {
                match Sampler::new(&model, &self.window, &cfg.sim, chains(&cfg.chain)) {
                    Ok(s) => {
                        fitted_sampler = s;
                        &fitted_sampler
                    }
                    Err(e) => {
                        push_all(&mut rows, proto(fitted, n, params, Some(format!("sampler set-up: {e}"))));
                        continue;
                    }
                }
            } else {
                &self.true_sampler
            };
            for &cond in &flags {
                let seed = base.child(sim_stream(fitted, cond));
                let sims = simulate_set(sampler, &self.summ, cond.then_some(n), cfg.n_env, seed);
                for (k, &stat) in cfg.statistics.iter().enumerate() {
                    let mut row = StudyRow { statistic: stat, conditional: cond, ..proto(fitted, n, params.clone(), None) };
                    match &sims {
                        Ok(s) => {
                            row.sims = s.curves[k].len();
                            row.sim_count_min = Some(s.count_min);
                            row.sim_count_max = Some(s.count_max);
                            match CurveSet::new(data_curves[k].clone(), s.curves[k].clone())
                                .and_then(|cs| global_envelope(&cs, cfg.alpha))
                            {
                                Ok(env) => {
                                    row.area = Some(env.area());
                                    row.p_value = Some(env.p_value);
                                }
                                Err(e) => row.error = Some(format!("envelope: {e}")),
                            }
                        }
                        Err(e) => row.error = Some(format!("simulation: {e:#}")),
                    }
                    rows.push(row);
                }
            }
        }
        rows
    }
}

/// Rows in replication order, then fitted flag, conditional flag and
/// statistic in config order.
pub fn run_study(cfg: &StudyConfig) -> Result<Vec<StudyRow>> {
    cfg.validate()?;
    let window = cfg.window()?;
    let truth = cfg.true_model()?;
    let ctx = StudyContext {
        cfg,
        window,
        truth,
        true_sampler: Sampler::new(&truth, &window, &cfg.sim, chains(&cfg.chain))?,
        summ: Summariser::new(&window, cfg.rgrid()?, &cfg.statistics, cfg.f_resolution)?,
    };
    let per_rep: Vec<Vec<StudyRow>> =
        with_threads(cfg.threads, || (0..cfg.n_data).into_par_iter().map(|i| ctx.replicate(i)).collect())?;
    Ok(per_rep.into_iter().flatten().collect())
}

/// Sorted p-values per (statistic, conditional, fitted) against uniform
/// plotting positions `k / (m + 1)`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct QqRow {
    pub statistic: SummaryKind,
    pub conditional: bool,
    pub fitted: bool,
    pub rank: usize,
    pub p_value: f64,
    pub uniform: f64,
}

pub fn qq_rows(rows: &[StudyRow]) -> Vec<QqRow> {
    let mut groups: BTreeMap<(SummaryKind, bool, bool), Vec<f64>> = BTreeMap::new();
    for r in rows.iter().filter(|r| !r.excluded) {
        if let Some(p) = r.p_value {
            groups.entry((r.statistic, r.conditional, r.fitted)).or_default().push(p);
        }
    }
    let mut out = Vec::new();
    for ((statistic, conditional, fitted), mut ps) in groups {
        ps.sort_by(f64::total_cmp);
        let m = ps.len() as f64;
        for (k, p) in ps.into_iter().enumerate() {
            out.push(QqRow { statistic, conditional, fitted, rank: k + 1, p_value: p, uniform: (k + 1) as f64 / (m + 1.0) });
        }
    }
    out
}

/// Writes `rows.csv`, `qq.csv` and `manifest.json` into `dir`.
pub fn write_study(dir: &Path, cfg: &StudyConfig, rows: &[StudyRow]) -> Result<()> {
    fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
    write_csv(&dir.join("rows.csv"), rows)?;
    write_csv(&dir.join("qq.csv"), &qq_rows(rows))?;
    write_manifest(dir, "study", Some(cfg.seed), cfg, &["rows.csv", "qq.csv"])
}

// ---------------------------------------------------------------------------
// Pseudo-likelihood comparison

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MpleConfig {
    pub reps: usize,
    pub seed: u64,
    pub beta: f64,
    pub r: f64,
    /// `gamma` for rep `k` is uniform on this interval, or fixed when both
    /// ends agree.
    pub gamma_range: (f64, f64),
    pub resolution: usize,
    pub chain: ChainConfig,
    pub threads: usize,
}

impl Default for MpleConfig {
    fn default() -> Self {
        MpleConfig {
            reps: 1000,
            seed: 0,
            beta: 200.0,
            r: 0.05,
            gamma_range: (0.01, 1.0),
            resolution: DEFAULT_QUAD_RESOLUTION,
            chain: ChainConfig::unconditional(),
            threads: 0,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MpleRow {
    pub rep: usize,
    pub gamma: f64,
    pub n: usize,
    pub gamma_uncond: Option<f64>,
    pub gamma_cond: Option<f64>,
    pub abs_diff: Option<f64>,
    pub error: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MpleSummary {
    pub reps: usize,
    pub compared: usize,
    pub mean_abs_diff: f64,
    pub max_abs_diff: f64,
}

fn mple_rep(cfg: &MpleConfig, k: usize) -> Result<MpleRow> {
    let mut rng = SeedSpec::new(cfg.seed, k as u64).rng();
    let (a, b) = cfg.gamma_range;
    let gamma = if a == b { a } else { rng.random_range(a..b) };
    let p = StraussParams::new(cfg.beta, gamma, cfg.r)?;
    let x = strauss::unconditional(&p, &Window::unit(), &cfg.chain, &mut rng)?;
    let mut row = MpleRow { rep: k, gamma, n: x.len(), gamma_uncond: None, gamma_cond: None, abs_diff: None, error: None };
    let fits = mple_strauss(&x, cfg.r, cfg.resolution)
        .and_then(|u| Ok((u, mple_strauss_conditional(&x, cfg.r, cfg.resolution)?)));
    match fits {
        Ok((u, c)) => {
            let (gu, gc) = (u.gamma().expect("Strauss fit"), c.gamma().expect("Strauss fit"));
            row.gamma_uncond = Some(gu);
            row.gamma_cond = Some(gc);
            row.abs_diff = Some((gu - gc).abs());
        }
        Err(e) => row.error = Some(e.to_string()),
    }
    Ok(row)
}

pub fn run_mple_comparison(cfg: &MpleConfig) -> Result<(Vec<MpleRow>, MpleSummary)> {
    if cfg.reps < 1 {
        bail!("reps must be at least 1");
    }
    let (a, b) = cfg.gamma_range;
    if !(0.0 <= a && a <= b && b <= 1.0) {
        bail!("gamma range must satisfy 0 <= lo <= hi <= 1");
    }
    let rows: Vec<Result<MpleRow>> =
        with_threads(cfg.threads, || (0..cfg.reps).into_par_iter().map(|k| mple_rep(cfg, k)).collect())?;
    let rows = rows.into_iter().collect::<Result<Vec<_>>>()?;
    let diffs: Vec<f64> = rows.iter().filter_map(|r| r.abs_diff).collect();
    let summary = MpleSummary {
        reps: cfg.reps,
        compared: diffs.len(),
        mean_abs_diff: if diffs.is_empty() { f64::NAN } else { mean(&diffs) },
        max_abs_diff: diffs.iter().copied().fold(f64::NAN, f64::max),
    };
    Ok((rows, summary))
}
