use std::fmt;
use std::path::{Path, PathBuf};

use kickmix_core::{
    default_time_grid, MapKind, Mixing, ModelParams, ScalingForm, SectorSpec, Species, ThoulessMethod,
};
use serde::{Deserialize, Serialize};

use crate::error::{CliError, FieldError};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Experiment {
    SffExact,
    SffRpa,
    Spectrum,
    LambdaAcrossN,
    Thouless,
    BoundState,
    Extrapolate,
    SymmetryCheck,
}

impl Experiment {
    /// File-name prefix of the experiment's outputs.
    pub fn tag(self) -> &'static str {
        match self {
            Experiment::SffExact => "sff_exact",
            Experiment::SffRpa => "sff_rpa",
            Experiment::Spectrum => "spectrum",
            Experiment::LambdaAcrossN => "lambda_across_n",
            Experiment::Thouless => "thouless",
            Experiment::BoundState => "bound_state",
            Experiment::Extrapolate => "extrapolate",
            Experiment::SymmetryCheck => "symmetry_check",
        }
    }
}

impl fmt::Display for Experiment {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self:?}")
    }
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub enum TimeGrid {
    /// Linear up to 100, then logarithmic up to `min(4 dim, 10⁴)`.
    #[default]
    Default,
    /// Every integer in `start..=end`.
    Range { start: u64, end: u64 },
    Values(Vec<u64>),
}

impl TimeGrid {
    pub fn resolve(&self, dim: usize) -> Vec<u64> {
        match self {
            TimeGrid::Default => default_time_grid(dim),
            TimeGrid::Range { start, end } => (*start..=*end).collect(),
            TimeGrid::Values(v) => v.clone(),
        }
    }
}

/// Scaled-time columns added to series CSVs.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum Collapse {
    /// Divide `t` and `K` by `log L`.
    LogL,
    /// Divide `t` and `K` by `L^γ`.
    PowerGamma(f64),
}

impl Collapse {
    pub fn scale(self, sites: usize) -> f64 {
        match self {
            Collapse::LogL => (sites as f64).ln(),
            Collapse::PowerGamma(gamma) => (sites as f64).powf(gamma),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub experiment: Experiment,
    pub model: ModelParams,
    #[serde(default)]
    pub map: Option<MapKind>,
    #[serde(default)]
    pub t_grid: TimeGrid,
    /// Disorder realizations `R` (SffExact).
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub realizations: Option<usize>,
    /// Chain lengths to sweep; empty runs the model as given.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub sites: Vec<usize>,
    /// `N / L` used to pick the JC excitation number at each swept `L`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub filling: Option<f64>,
    /// Excitation numbers (LambdaAcrossN).
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub excitations: Vec<u32>,
    /// Truncations `N_max` (Extrapolate).
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub max_excitations: Vec<u32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub extrapolation_points: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub thouless_method: Option<ThoulessMethod>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub scaling: Option<ScalingForm>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub collapse: Option<Collapse>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub output_dir: Option<PathBuf>,
    /// Overrides `model.seed`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
}

impl RunConfig {
    pub fn from_json(text: &str) -> Result<Self, CliError> {
        let de = &mut serde_json::Deserializer::from_str(text);
        serde_path_to_error::deserialize(de).map_err(|e| {
            let field = e.path().to_string();
            let field = if field == "." { "<root>".to_string() } else { field };
            CliError::Config(vec![FieldError::new(field, e.into_inner().to_string())])
        })
    }

    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
        Self::from_json(&text)
    }

    pub fn map_kind(&self) -> MapKind {
        self.map.unwrap_or(MapKind::Full)
    }

    pub fn thouless(&self) -> ThoulessMethod {
        self.thouless_method.unwrap_or(ThoulessMethod::FromSffCurve)
    }

    /// Model with the seed override applied.
    pub fn base_model(&self) -> ModelParams {
        let mut p = self.model.clone();
        if let Some(seed) = self.seed {
            p.seed = seed;
        }
        p
    }

    /// One model per swept chain length, or the base model alone.
    pub fn models(&self) -> Vec<ModelParams> {
        let base = self.base_model();
        if self.sites.is_empty() {
            return vec![base];
        }
        self.sites
            .iter()
            .map(|&l| {
                let mut p = base.clone();
                p.sector.sites = l;
                if let (Some(f), Mixing::JaynesCummings) = (self.filling, p.sector.mixing) {
                    if p.sector.excitations.is_some() {
                        p.sector.excitations = Some((f * l as f64).round() as u32);
                    }
                }
                p
            })
            .collect()
    }

    /// Checks every field an experiment needs before any compute starts.
    pub fn validate(&self) -> Result<(), CliError> {
        let mut errs = Vec::new();
        let mut bad = |field: &str, msg: &str| errs.push(FieldError::new(field, msg));

        for p in self.models() {
            if let Err(e) = p.sector.validate() {
                bad("model.sector", &e.to_string());
            }
            if let Err(e) = p.validate() {
                bad("model", &e.to_string());
            }
        }
        if !self.sites.is_empty() {
            if self.model.site_coupling.is_some() {
                bad("sites", "a chain-length sweep needs a uniform coupling");
            }
            if self.model.sector.is_pattern_sector() {
                bad("sites", "a chain-length sweep cannot carry a fixed qubit pattern");
            }
        }
        if let Some(f) = self.filling {
            if !(f > 0.0) {
                bad("filling", "must be positive");
            }
            if self.sites.is_empty() {
                bad("filling", "only used together with a `sites` sweep");
            }
            if self.model.sector.excitations.is_none() {
                bad("filling", "needs a JC sector with a fixed excitation number");
            }
        }
        match &self.t_grid {
            TimeGrid::Range { start, end } if *start == 0 || end < start => {
                bad("t_grid", "range needs 1 ≤ start ≤ end")
            }
            TimeGrid::Values(v) if v.is_empty() || v.contains(&0) => {
                bad("t_grid", "values must be nonempty and positive")
            }
            _ => {}
        }

        match self.experiment {
            Experiment::SffExact => match self.realizations {
                None => bad("realizations", "required for SffExact"),
                Some(0) => bad("realizations", "must be positive"),
                _ => {}
            },
            Experiment::LambdaAcrossN => {
                if self.excitations.is_empty() {
                    bad("excitations", "required for LambdaAcrossN");
                }
                if self.model.sector.mixing != Mixing::JaynesCummings {
                    bad("model.sector.mixing", "LambdaAcrossN needs a JC model");
                }
            }
            Experiment::Thouless => {
                if self.scaling.is_some() && self.sites.len() < 3 {
                    bad("sites", "a scaling fit needs at least three chain lengths");
                }
                if self.thouless() == ThoulessMethod::FromDegenerateSum
                    && (self.model.sector.species, self.model.sector.mixing) != (Species::Fermion, Mixing::JaynesCummings)
                {
                    bad("thouless_method", "the degenerate sum describes JC fermions");
                }
            }
            Experiment::Extrapolate => {
                if self.max_excitations.len() < 2 {
                    bad("max_excitations", "at least two truncations are required");
                }
                if self.model.sector.max_excitations.is_none() {
                    bad("model.sector.max_excitations", "Extrapolate sweeps a truncated sector");
                }
                if self.extrapolation_points == Some(1) || self.extrapolation_points == Some(0) {
                    bad("extrapolation_points", "at least two points are needed");
                }
            }
            Experiment::SffRpa | Experiment::Spectrum | Experiment::BoundState | Experiment::SymmetryCheck => {}
        }
        if self.model.sector.is_pattern_sector() && self.map_kind() == MapKind::Full {
            let needs_map = !matches!(self.experiment, Experiment::BoundState | Experiment::SffExact);
            if needs_map {
                bad("map", "qubit-pattern sectors only carry the Trotter map");
            }
        }
        if errs.is_empty() {
            Ok(())
        } else {
            Err(CliError::Config(errs))
        }
    }
}

/// Sector label used in file names.
pub fn sector_label(spec: &SectorSpec) -> String {
    let mut s = format!("L{}", spec.sites);
    if let Some(n) = spec.excitations {
        s.push_str(&format!("_N{n}"));
    }
    if let Some(n) = spec.max_excitations {
        s.push_str(&format!("_Nmax{n}"));
    }
    if let Some(n) = spec.max_bosons {
        s.push_str(&format!("_Nb{n}"));
    }
    if let Some(p) = &spec.qubit_pattern {
        s.push_str("_m");
        s.extend(p.iter().map(|b| char::from(b'0' + b)));
    }
    if let Some(p) = spec.parity {
        s.push_str(&format!("_{p:?}").to_lowercase());
    }
    s
}
