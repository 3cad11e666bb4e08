//! Experiment configuration: a TOML key-value file naming an action and its
//! parameters. Missing parameters take per-action defaults in
//! [`ExperimentConfig::resolve`], and the resolved form is what the run
//! manifest records, so a manifest reruns identically even if defaults change.

use std::path::{Path, PathBuf};

use corrlab_core::ergostats::{DEFAULT_HORIZON, DEFAULT_TREE_CAP, DEFAULT_WALKS};
use serde::{Deserialize, Serialize};

use crate::error::CliError;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Action {
    Degrees,
    Preimage,
    Measure,
    Correlate,
    Birkhoff,
    MixingReport,
    FiniteCheck,
    Render,
}

impl Action {
    pub fn name(self) -> &'static str {
        match self {
            Action::Degrees => "degrees",
            Action::Preimage => "preimage",
            Action::Measure => "measure",
            Action::Correlate => "correlate",
            Action::Birkhoff => "birkhoff",
            Action::MixingReport => "mixing-report",
            Action::FiniteCheck => "finite-check",
            Action::Render => "render",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum Sampler {
    /// Backward random walks from a start point.
    Ds,
    /// Exact sampler for the invariant measure of ⟨z², z²/2⟩.
    Annulus,
    /// Uniform measure on the unit circle.
    Circle,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub action: Action,
    #[serde(default)]
    pub seed: u64,
    /// Correspondence file, or `builtin:<identity|squaring|semigroup|power:k>`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub correspondence: Option<String>,
    /// Finite instance file (TOML).
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub instance: Option<PathBuf>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub cloud: Option<PathBuf>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sampler: Option<Sampler>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub start: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub point: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub depth: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub samples: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub horizon: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub cap: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub walks: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub phi: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub psi: Option<String>,
    /// Image side length in pixels.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub size: Option<usize>,
    /// `[x_min, x_max, y_min, y_max]`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub window: Option<[f64; 4]>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub output: Option<PathBuf>,
}

pub const BUILTIN_PREFIX: &str = "builtin:";
pub const DEFAULT_SIZE: usize = 512;
pub const DEFAULT_WINDOW: [f64; 4] = [-2.5, 2.5, -2.5, 2.5];

fn require<T>(value: &Option<T>, key: &str, action: Action) -> Result<(), CliError> {
    if value.is_none() {
        return Err(CliError::config(format!("{}: missing required parameter `{key}`", action.name())));
    }
    Ok(())
}

impl ExperimentConfig {
    pub fn new(action: Action) -> Self {
        ExperimentConfig {
            action,
            seed: 0,
            correspondence: None,
            instance: None,
            cloud: None,
            sampler: None,
            start: None,
            point: None,
            depth: None,
            samples: None,
            horizon: None,
            cap: None,
            walks: None,
            phi: None,
            psi: None,
            size: None,
            window: None,
            output: None,
        }
    }

    pub fn from_toml(text: &str) -> Result<Self, CliError> {
        toml::from_str(text).map_err(|e| CliError::config(format!("config: {}", e.to_string().trim_end())))
    }

    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("config serializes")
    }

    /// Makes every relative path absolute against `base`.
    pub fn rebase(mut self, base: &Path) -> Self {
        let abs = |p: PathBuf| if p.is_absolute() { p } else { base.join(p) };
        self.instance = self.instance.map(abs);
        self.cloud = self.cloud.map(abs);
        self.output = self.output.map(abs);
        self.correspondence = self.correspondence.map(|c| {
            if c.starts_with(BUILTIN_PREFIX) {
                c
            } else {
                abs(PathBuf::from(c)).to_string_lossy().into_owned()
            }
        });
        self
    }

    /// Checks required parameters and fills in defaults.
    pub fn resolve(mut self) -> Result<Self, CliError> {
        let a = self.action;
        match a {
            Action::Degrees => require(&self.correspondence, "correspondence", a)?,
            Action::Preimage => {
                require(&self.correspondence, "correspondence", a)?;
                require(&self.point, "point", a)?;
                self.depth.get_or_insert(1);
                self.cap.get_or_insert(DEFAULT_TREE_CAP);
            }
            Action::Measure => {
                let sampler = *self.sampler.get_or_insert(Sampler::Ds);
                self.samples.get_or_insert(10_000);
                if sampler == Sampler::Ds {
                    require(&self.correspondence, "correspondence", a)?;
                    self.start.get_or_insert_with(|| "3".into());
                    self.depth.get_or_insert(20);
                }
            }
            Action::Correlate | Action::MixingReport => {
                require(&self.correspondence, "correspondence", a)?;
                require(&self.cloud, "cloud", a)?;
                require(&self.phi, "phi", a)?;
                require(&self.psi, "psi", a)?;
                self.horizon.get_or_insert(DEFAULT_HORIZON);
                self.cap.get_or_insert(DEFAULT_TREE_CAP);
                self.walks.get_or_insert(DEFAULT_WALKS);
            }
            Action::Birkhoff => {
                require(&self.correspondence, "correspondence", a)?;
                require(&self.start, "start", a)?;
                require(&self.phi, "phi", a)?;
                self.horizon.get_or_insert(DEFAULT_HORIZON);
                self.cap.get_or_insert(DEFAULT_TREE_CAP);
                self.walks.get_or_insert(DEFAULT_WALKS);
            }
            Action::FiniteCheck => require(&self.instance, "instance", a)?,
            Action::Render => {
                require(&self.cloud, "cloud", a)?;
                self.size.get_or_insert(DEFAULT_SIZE);
                self.window.get_or_insert(DEFAULT_WINDOW);
            }
        }
        Ok(self)
    }
}
