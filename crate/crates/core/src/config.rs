//! Experiment configuration and the flat `key = value` file format.
//!
//! Keys ending in `_db`/`_dbw` are converted to linear units here, once;
//! nothing downstream sees decibels except the SNR axis labels.

use std::path::Path;
use std::str::FromStr;

use crate::channel::ShadowingMode;
use crate::consensus::{ConsensusConfig, TopologyKind};
use crate::error::{Error, Result};
use crate::harness::{Method, SweepKind};
use crate::metrics::from_db;
use crate::selection::{SelectionConfig, SolverMode, DEFAULT_EXHAUSTIVE_LIMIT};

/// How the INR setting maps onto interferer powers.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum InrMode {
    /// Every interferer at `noise * INR`.
    #[default]
    PerInterferer,
    /// Interferers share `noise * INR` equally.
    Aggregate,
}

impl FromStr for InrMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "per_interferer" => Ok(InrMode::PerInterferer),
            "aggregate" => Ok(InrMode::Aggregate),
            other => Err(Error::Config(format!("unknown inr_mode `{other}`"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentConfig {
    pub sources: usize,
    /// Linear path loss reference `L`.
    pub path_loss_ref: f64,
    pub path_loss_exp: f64,
    pub shadow_spread_db: f64,
    pub shadowing_mode: ShadowingMode,
    pub distance_source_relay: f64,
    pub distance_relay_dest: f64,
    /// Linear watts.
    pub total_power: f64,
    /// Relay and destination noise variance.
    pub noise_var: f64,
    pub inr_mode: InrMode,
    pub m_min: usize,
    pub topology: TopologyKind,
    pub consensus: ConsensusConfig,
    pub solver: SolverMode,
    pub exhaustive_limit: usize,
    pub trials: usize,
    pub methods: Vec<Method>,
    pub sweep: SweepKind,
    pub seed: u64,

    /// SNR sweep axis in dB.
    pub snr_grid_db: Vec<f64>,
    pub snr_sweep_relays: usize,
    /// Linear INR of the SNR sweep.
    pub snr_sweep_inr: f64,

    /// Relay-count sweep axis.
    pub m_grid: Vec<usize>,
    /// Linear SNR of the relay-count sweep.
    pub m_sweep_snr: f64,
    /// Linear INR of the relay-count sweep.
    pub m_sweep_inr: f64,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        ExperimentConfig {
            sources: 3,
            path_loss_ref: from_db(10.0),
            path_loss_exp: 2.0,
            shadow_spread_db: 3.0,
            shadowing_mode: ShadowingMode::PerLink,
            distance_source_relay: 1.0,
            distance_relay_dest: 1.0,
            total_power: from_db(1.0),
            noise_var: 1.0,
            inr_mode: InrMode::PerInterferer,
            m_min: 1,
            topology: TopologyKind::Ring,
            consensus: ConsensusConfig::default(),
            solver: SolverMode::Centralized,
            exhaustive_limit: DEFAULT_EXHAUSTIVE_LIMIT,
            trials: 100,
            methods: Method::ALL.to_vec(),
            sweep: SweepKind::Snr,
            seed: 1,
            snr_grid_db: vec![-10.0, -5.0, 0.0, 5.0, 10.0],
            snr_sweep_relays: 5,
            snr_sweep_inr: from_db(10.0),
            m_grid: (2..=8).collect(),
            m_sweep_snr: 1.0,
            m_sweep_inr: 1.0,
        }
    }
}

fn parse_value<T: FromStr>(key: &str, raw: &str) -> Result<T> {
    raw.trim().parse().map_err(|_| Error::Config(format!("`{key}`: cannot parse `{raw}`")))
}

fn parse_list<T: FromStr>(key: &str, raw: &str) -> Result<Vec<T>> {
    raw.split(',').filter(|s| !s.trim().is_empty()).map(|s| parse_value(key, s)).collect()
}

impl ExperimentConfig {
    /// Parses a config file on top of the defaults.
    pub fn from_file(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|source| Error::Io { path: path.to_path_buf(), source })?;
        Self::from_str_with_defaults(&text)
    }

    /// Parses `key = value` lines; `#` starts a comment, blank lines are skipped.
    pub fn from_str_with_defaults(text: &str) -> Result<Self> {
        let mut cfg = ExperimentConfig::default();
        for (lineno, line) in text.lines().enumerate() {
            let line = line.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| Error::Config(format!("line {}: expected `key = value`", lineno + 1)))?;
            cfg.set(key.trim(), value.trim())?;
        }
        cfg.validate()?;
        Ok(cfg)
    }

    /// Applies one key. Also used for command-line overrides.
    pub fn set(&mut self, key: &str, value: &str) -> Result<()> {
        match key {
            "sources" => self.sources = parse_value(key, value)?,
            "pathloss_db" => self.path_loss_ref = from_db(parse_value(key, value)?),
            "path_loss_exp" => self.path_loss_exp = parse_value(key, value)?,
            "shadow_db" => self.shadow_spread_db = parse_value(key, value)?,
            "shadowing_mode" => self.shadowing_mode = value.parse()?,
            "distance_source_relay" => self.distance_source_relay = parse_value(key, value)?,
            "distance_relay_dest" => self.distance_relay_dest = parse_value(key, value)?,
            "pt_dbw" => self.total_power = from_db(parse_value(key, value)?),
            "noise_var" => self.noise_var = parse_value(key, value)?,
            "inr_mode" => self.inr_mode = value.parse()?,
            "m_min" => self.m_min = parse_value(key, value)?,
            "topology" => self.topology = value.parse()?,
            "mu_lambda" => self.consensus.mu_lambda = parse_value(key, value)?,
            "mu_tau" => self.consensus.mu_tau = parse_value(key, value)?,
            "max_iters" => self.consensus.max_iters = parse_value(key, value)?,
            "tol_consensus" => self.consensus.tol_consensus = parse_value(key, value)?,
            "tol_power" => self.consensus.tol_power = parse_value(key, value)?,
            "lambda_floor" => self.consensus.lambda_floor = parse_value(key, value)?,
            "solver" => self.solver = value.parse()?,
            "exhaustive_limit" => self.exhaustive_limit = parse_value(key, value)?,
            "trials" => self.trials = parse_value(key, value)?,
            "methods" => self.methods = parse_list(key, value)?,
            "sweep" => self.sweep = value.parse()?,
            "seed" => self.seed = parse_value(key, value)?,
            "snr_grid_db" => self.snr_grid_db = parse_list(key, value)?,
            "snr_sweep_relays" => self.snr_sweep_relays = parse_value(key, value)?,
            "snr_sweep_inr_db" => self.snr_sweep_inr = from_db(parse_value(key, value)?),
            "m_grid" => self.m_grid = parse_list(key, value)?,
            "m_sweep_snr_db" => self.m_sweep_snr = from_db(parse_value(key, value)?),
            "m_sweep_inr_db" => self.m_sweep_inr = from_db(parse_value(key, value)?),
            other => return Err(Error::Config(format!("unknown key `{other}`"))),
        }
        Ok(())
    }

    pub fn validate(&self) -> Result<()> {
        if self.sources == 0 {
            return Err(Error::Config("sources must be at least 1".into()));
        }
        if self.trials == 0 {
            return Err(Error::Config("trials must be at least 1".into()));
        }
        if self.methods.is_empty() {
            return Err(Error::Config("at least one method is required".into()));
        }
        let mut seen = self.methods.clone();
        seen.sort_unstable();
        seen.dedup();
        if seen.len() != self.methods.len() {
            return Err(Error::Config("methods must not repeat".into()));
        }
        if self.snr_grid_db.is_empty() || self.m_grid.is_empty() {
            return Err(Error::Config("sweep grids must be nonempty".into()));
        }
        if self.snr_grid_db.windows(2).any(|w| !(w[0] < w[1])) {
            return Err(Error::Config("snr_grid_db must be strictly increasing".into()));
        }
        if self.m_grid.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::Config("m_grid must be strictly increasing".into()));
        }
        if self.m_grid[0] == 0 || self.snr_sweep_relays == 0 {
            return Err(Error::Config("relay counts must be at least 1".into()));
        }
        let smallest = match self.sweep {
            SweepKind::Snr => self.snr_sweep_relays,
            SweepKind::M => self.m_grid[0],
        };
        if self.m_min < 1 || self.m_min > smallest {
            return Err(Error::Config(format!("m_min = {} must lie in [1, {smallest}]", self.m_min)));
        }
        for (name, v) in [
            ("noise_var", self.noise_var),
            ("total power", self.total_power),
            ("distance_source_relay", self.distance_source_relay),
            ("distance_relay_dest", self.distance_relay_dest),
        ] {
            if !(v > 0.0 && v.is_finite()) {
                return Err(Error::Config(format!("{name} must be positive, got {v}")));
            }
        }
        self.consensus.validate()
    }

    pub fn selection(&self) -> SelectionConfig {
        SelectionConfig {
            m_min: self.m_min,
            m_fix: None,
            consensus: self.consensus,
            solver: self.solver,
            topology: self.topology,
            exhaustive_limit: self.exhaustive_limit,
        }
    }
}
