//! Model selection, parameter files and prepared samplers.

use std::fmt;
use std::path::Path;

use anyhow::{anyhow, Context, Result};
use rand::Rng;
use serde::{Deserialize, Serialize};
use spatcond::estimation::{
    default_r_grid, fit_intensity, fit_minimum_contrast, profile_mple_r, ContrastConfig, ContrastModel, FittedParams,
    DEFAULT_QUAD_RESOLUTION,
};
use spatcond::models::{
    dpp_spectrum, DppGaussParams, DppSpectrum, LgcpParams, PoissonParams, StraussParams, DEFAULT_SPECTRUM_EPS,
};
use spatcond::samplers::{self, dpp, lgcp::GaussField, strauss, ChainConfig};
use spatcond::{PointPattern, Window};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum ModelKind {
    Poisson,
    Lgcp,
    Strauss,
    Dpp,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Model {
    Poisson(PoissonParams),
    Lgcp(LgcpParams),
    Strauss(StraussParams),
    Dpp(DppGaussParams),
}

impl Model {
    pub fn kind(&self) -> ModelKind {
        match self {
            Model::Poisson(_) => ModelKind::Poisson,
            Model::Lgcp(_) => ModelKind::Lgcp,
            Model::Strauss(_) => ModelKind::Strauss,
            Model::Dpp(_) => ModelKind::Dpp,
        }
    }

    /// From a full fit; `None` for the interaction-only Strauss fit.
    pub fn from_fit(p: &FittedParams) -> Option<Model> {
        Some(match *p {
            FittedParams::Poisson(p) => Model::Poisson(p),
            FittedParams::Lgcp(p) => Model::Lgcp(p),
            FittedParams::Strauss(p) => Model::Strauss(p),
            FittedParams::Dpp(p) => Model::Dpp(p),
            FittedParams::StraussInteraction { .. } => return None,
        })
    }
}

/// `key=value` pairs separated by `;`, for CSV cells.
impl fmt::Display for Model {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Model::Poisson(p) => write!(f, "rho={}", p.rho()),
            Model::Lgcp(p) => write!(f, "rho={};sigma2={};delta={}", p.rho(), p.sigma2(), p.delta()),
            Model::Strauss(p) => write!(f, "beta={};gamma={};R={}", p.beta(), p.gamma(), p.r()),
            Model::Dpp(p) => write!(f, "rho={};kappa={}", p.rho(), p.kappa()),
        }
    }
}

/// Optional overrides of a [`ChainConfig`]; unset fields keep the base value.
#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ChainOverrides {
    pub burnin: Option<usize>,
    pub margin: Option<f64>,
    pub boundary_proposals: Option<usize>,
}

impl ChainOverrides {
    pub fn apply(&self, base: ChainConfig) -> ChainConfig {
        ChainConfig {
            burnin: self.burnin.unwrap_or(base.burnin),
            margin: self.margin.or(base.margin),
            thinning: base.thinning,
            boundary_proposals: self.boundary_proposals.unwrap_or(base.boundary_proposals),
        }
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ChainSection {
    #[serde(default)]
    pub unconditional: ChainOverrides,
    #[serde(default)]
    pub conditional: ChainOverrides,
}

/// Sampler settings that are not model parameters.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SimOptions {
    /// Cells per side of the LGCP field grid.
    pub lgcp_grid: usize,
    /// Rejection attempts for conditional LGCP and DPP draws.
    pub max_attempts: usize,
    pub spectrum_eps: f64,
}

impl Default for SimOptions {
    fn default() -> Self {
        SimOptions {
            lgcp_grid: samplers::DEFAULT_GRID,
            max_attempts: samplers::LGCP_DEFAULT_MAX_ATTEMPTS,
            spectrum_eps: DEFAULT_SPECTRUM_EPS,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct WindowSpec {
    pub xmin: f64,
    pub xmax: f64,
    pub ymin: f64,
    pub ymax: f64,
}

impl WindowSpec {
    pub fn window(&self) -> Result<Window> {
        Ok(Window::new(self.xmin, self.xmax, self.ymin, self.ymax)?)
    }
}

impl From<Window> for WindowSpec {
    fn from(w: Window) -> Self {
        WindowSpec { xmin: w.xmin(), xmax: w.xmax(), ymin: w.ymin(), ymax: w.ymax() }
    }
}

/// Parameter file: one section per model, keys named as the parameters.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModelFile {
    pub poisson: Option<PoissonParams>,
    pub lgcp: Option<LgcpParams>,
    pub strauss: Option<StraussParams>,
    pub dpp: Option<DppGaussParams>,
    pub window: Option<WindowSpec>,
    #[serde(default)]
    pub chain: ChainSection,
    #[serde(default)]
    pub sim: SimOptions,
}

impl ModelFile {
    pub fn parse(text: &str) -> Result<ModelFile> {
        Ok(toml::from_str(text)?)
    }

    pub fn read(path: &Path) -> Result<ModelFile> {
        let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
        ModelFile::parse(&text).with_context(|| format!("parsing {}", path.display()))
    }

    pub fn model(&self, kind: ModelKind) -> Result<Model> {
        let missing = |name: &str| anyhow!("parameter file has no [{name}] section");
        Ok(match kind {
            ModelKind::Poisson => Model::Poisson(self.poisson.ok_or_else(|| missing("poisson"))?),
            ModelKind::Lgcp => Model::Lgcp(self.lgcp.ok_or_else(|| missing("lgcp"))?),
            ModelKind::Strauss => Model::Strauss(self.strauss.ok_or_else(|| missing("strauss"))?),
            ModelKind::Dpp => Model::Dpp(self.dpp.ok_or_else(|| missing("dpp"))?),
        })
    }

    pub fn window(&self) -> Result<Window> {
        self.window.map_or(Ok(Window::unit()), |w| w.window())
    }

    pub fn chains(&self) -> (ChainConfig, ChainConfig) {
        chains(&self.chain)
    }
}

pub fn chains(c: &ChainSection) -> (ChainConfig, ChainConfig) {
    (c.unconditional.apply(ChainConfig::unconditional()), c.conditional.apply(ChainConfig::conditional()))
}

/// A model with its expensive set-up (field factorisation, spectrum) done.
#[derive(Debug, Clone)]
pub enum Prepared {
    Poisson(PoissonParams),
    Lgcp(Box<GaussField>),
    Strauss { params: StraussParams, unconditional: ChainConfig, conditional: ChainConfig },
    Dpp(DppSpectrum),
}

pub struct Sampler {
    pub prepared: Prepared,
    pub window: Window,
    pub max_attempts: usize,
}

impl Sampler {
    pub fn new(model: &Model, w: &Window, opts: &SimOptions, chain: (ChainConfig, ChainConfig)) -> Result<Sampler> {
        let prepared = match model {
            Model::Poisson(p) => Prepared::Poisson(*p),
            Model::Lgcp(p) => Prepared::Lgcp(Box::new(GaussField::new(p, w, opts.lgcp_grid, opts.lgcp_grid)?)),
            Model::Strauss(p) => Prepared::Strauss { params: *p, unconditional: chain.0, conditional: chain.1 },
            Model::Dpp(p) => Prepared::Dpp(dpp_spectrum(p, w, opts.spectrum_eps)?),
        };
        Ok(Sampler { prepared, window: *w, max_attempts: opts.max_attempts })
    }

    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> Result<PointPattern> {
        let w = &self.window;
        Ok(match &self.prepared {
            Prepared::Poisson(p) => samplers::poisson::poisson(p, w, rng),
            Prepared::Lgcp(f) => f.sample_cox(rng),
            Prepared::Strauss { params, unconditional, .. } => strauss::unconditional(params, w, unconditional, rng)?,
            Prepared::Dpp(s) => dpp::unconditional(s, w, rng)?,
        })
    }

    /// A draw given exactly `n` points in the window.
    pub fn sample_conditional<R: Rng + ?Sized>(&self, n: usize, rng: &mut R) -> Result<PointPattern> {
        let w = &self.window;
        Ok(match &self.prepared {
            Prepared::Poisson(_) => samplers::poisson::binomial(n, w, rng),
            Prepared::Lgcp(f) => f.sample_cox_conditional(n, self.max_attempts, rng)?,
            Prepared::Strauss { params, conditional, .. } => strauss::conditional(n, params, w, conditional, rng)?,
            Prepared::Dpp(s) => dpp::conditional(n, s, w, self.max_attempts, rng)?,
        })
    }
}

/// Fit `kind` to `x` the way the study does: plug-in intensity for Poisson,
/// minimum contrast on `K` for LGCP and DPP, profile pseudo-likelihood over
/// `R` for Strauss.
pub fn fit_for_study(kind: ModelKind, x: &PointPattern) -> Result<FittedParams> {
    Ok(match kind {
        ModelKind::Poisson => FittedParams::Poisson(fit_intensity(x)?),
        ModelKind::Lgcp => fit_minimum_contrast(x, ContrastModel::Lgcp, &ContrastConfig::default())?.params,
        ModelKind::Dpp => fit_minimum_contrast(x, ContrastModel::Dpp, &ContrastConfig::default())?.params,
        ModelKind::Strauss => profile_mple_r(x, &default_r_grid(), DEFAULT_QUAD_RESOLUTION)?.params,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use spatcond::SeedSpec;

    #[test]
    fn parameter_file_sections() {
        let f = ModelFile::parse(
            "[poisson]\nrho = 100\n[strauss]\nbeta = 200\ngamma = 0.2\nR = 0.05\n[chain.conditional]\nburnin = 50\n",
        )
        .unwrap();
        assert_eq!(f.model(ModelKind::Poisson).unwrap(), Model::Poisson(PoissonParams::new(100.0).unwrap()));
        assert_eq!(f.model(ModelKind::Strauss).unwrap().to_string(), "beta=200;gamma=0.2;R=0.05");
        assert!(f.model(ModelKind::Dpp).is_err());
        let (u, c) = f.chains();
        assert_eq!(u, ChainConfig::unconditional());
        assert_eq!((c.burnin, c.boundary_proposals), (50, 10));
        assert_eq!(f.window().unwrap(), Window::unit());
    }

    #[test]
    fn invalid_parameter_files() {
        assert!(ModelFile::parse("[strauss]\nbeta = 200\ngamma = 1.5\nR = 0.05\n").is_err());
        assert!(ModelFile::parse("[strauss]\nbeta = 200\ngamma = 0.5\nr = 0.05\n").is_err());
        assert!(ModelFile::parse("[dpp]\nrho = 100\nkappa = 0.2\n").is_err());
        assert!(ModelFile::parse("[poisson]\nrho = 100\nextra = 1\n").is_err());
    }

    #[test]
    fn conditional_draws_have_the_requested_count() {
        let w = Window::unit();
        let opts = SimOptions { lgcp_grid: 8, ..SimOptions::default() };
        let chain = (ChainConfig { burnin: 20, ..ChainConfig::unconditional() }, ChainConfig { burnin: 20, ..ChainConfig::conditional() });
        let models = [
            Model::Poisson(PoissonParams::new(50.0).unwrap()),
            Model::Lgcp(LgcpParams::new(50.0, 0.5, 0.1).unwrap()),
            Model::Strauss(StraussParams::new(50.0, 0.5, 0.05).unwrap()),
            Model::Dpp(DppGaussParams::new(50.0, 0.05).unwrap()),
        ];
        let mut rng = SeedSpec::new(5, 0).rng();
        for m in &models {
            let s = Sampler::new(m, &w, &opts, chain).unwrap();
            assert_eq!(s.sample_conditional(37, &mut rng).unwrap().len(), 37, "{m}");
            assert!(s.sample(&mut rng).is_ok());
        }
    }
}
