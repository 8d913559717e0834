//! Monte Carlo driver: paired trials per sweep point, summaries and CSV output.

use std::fmt;
use std::path::Path;
use std::str::FromStr;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::channel::{draw_channels, Distances, NetworkScenario};
use crate::config::{ExperimentConfig, InrMode};
use crate::consensus::{run_consensus, TraceRecord};
use crate::error::{Error, Result};
use crate::metrics::{from_db, local_estimator, output_sinr, to_db};
use crate::selection::{evaluate_set, exhaustive_search, lmmsec_g, smmsec_g, RelaySet, SelectionResult};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Method {
    /// Every relay active.
    None,
    Lmmsec,
    Smmsec,
    Exhaustive,
}

impl Method {
    pub const ALL: [Method; 4] = [Method::None, Method::Lmmsec, Method::Smmsec, Method::Exhaustive];

    pub fn as_str(self) -> &'static str {
        match self {
            Method::None => "none",
            Method::Lmmsec => "lmmsec",
            Method::Smmsec => "smmsec",
            Method::Exhaustive => "exhaustive",
        }
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Method {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "none" => Ok(Method::None),
            "lmmsec" | "lmmsec_g" => Ok(Method::Lmmsec),
            "smmsec" | "smmsec_g" => Ok(Method::Smmsec),
            "exhaustive" => Ok(Method::Exhaustive),
            other => Err(Error::Config(format!("unknown method `{other}`"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum SweepKind {
    #[default]
    Snr,
    M,
}

impl SweepKind {
    pub fn as_str(self) -> &'static str {
        match self {
            SweepKind::Snr => "snr_db",
            SweepKind::M => "relays",
        }
    }
}

impl FromStr for SweepKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "snr" => Ok(SweepKind::Snr),
            "m" => Ok(SweepKind::M),
            other => Err(Error::Config(format!("unknown sweep `{other}`"))),
        }
    }
}

/// One point on a sweep axis, already in linear units.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SweepPoint {
    pub kind: SweepKind,
    /// Axis value as reported (dB for the SNR sweep, a count for the relay sweep).
    pub value: f64,
    pub relays: usize,
    pub snr: f64,
    pub inr: f64,
}

impl SweepPoint {
    pub fn scenario(&self, cfg: &ExperimentConfig) -> NetworkScenario {
        let noise = cfg.noise_var;
        let interferers = cfg.sources - 1;
        let p_int = match cfg.inr_mode {
            InrMode::PerInterferer => noise * self.inr,
            InrMode::Aggregate => noise * self.inr / interferers.max(1) as f64,
        };
        let mut powers = vec![p_int; cfg.sources];
        powers[0] = noise * self.snr;
        NetworkScenario {
            source_powers: powers,
            relays: self.relays,
            relay_noise_var: noise,
            dest_noise_var: noise,
            total_power: cfg.total_power,
            path_loss_ref: cfg.path_loss_ref,
            path_loss_exp: cfg.path_loss_exp,
            shadow_spread_db: cfg.shadow_spread_db,
            distances: Distances {
                source_relay: vec![cfg.distance_source_relay; self.relays],
                relay_dest: vec![cfg.distance_relay_dest; self.relays],
            },
            shadowing_mode: cfg.shadowing_mode,
        }
    }
}

/// Points of the configured sweep, in axis order.
pub fn sweep_points(cfg: &ExperimentConfig) -> Vec<SweepPoint> {
    match cfg.sweep {
        SweepKind::Snr => cfg
            .snr_grid_db
            .iter()
            .map(|&db| SweepPoint {
                kind: SweepKind::Snr,
                value: db,
                relays: cfg.snr_sweep_relays,
                snr: from_db(db),
                inr: cfg.snr_sweep_inr,
            })
            .collect(),
        SweepKind::M => cfg
            .m_grid
            .iter()
            .map(|&m| SweepPoint {
                kind: SweepKind::M,
                value: m as f64,
                relays: m,
                snr: cfg.m_sweep_snr,
                inr: cfg.m_sweep_inr,
            })
            .collect(),
    }
}

/// SplitMix64 finalizer.
fn mix(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Seed of trial `trial` under `master`. Shared by every sweep point so that
/// points see common channel draws (relay streams nest across relay counts).
pub fn trial_seed(master: u64, trial: usize) -> u64 {
    mix(mix(master) ^ trial as u64)
}

#[derive(Debug, Clone, PartialEq)]
pub struct TrialResult {
    pub method: Method,
    pub sweep: SweepKind,
    pub sweep_value: f64,
    pub trial: usize,
    pub seed: u64,
    pub selected: Option<RelaySet>,
    pub mmse: f64,
    pub sinr_linear: f64,
    pub sinr_db: f64,
    pub iterations: usize,
    pub converged: bool,
    /// Hash of the channel draw the method saw.
    pub channel_hash: u64,
    /// Solver error for failed rows; numeric fields are NaN then.
    pub error: Option<String>,
}

impl TrialResult {
    pub fn failed(&self) -> bool {
        self.error.is_some()
    }
}

fn run_method(
    method: Method,
    est: &crate::metrics::LocalEstimator,
    channels: &crate::channel::ChannelRealization,
    scenario: &NetworkScenario,
    sel: &crate::selection::SelectionConfig,
) -> Result<SelectionResult> {
    match method {
        Method::None => {
            let full = RelaySet::full(scenario.relays);
            let eval = evaluate_set(&full, est, channels, scenario, sel)?;
            Ok(SelectionResult {
                selected: full,
                weights: eval.weights,
                mmse: eval.mmse,
                history: Vec::new(),
                iterations: eval.iterations,
                converged: eval.converged,
            })
        }
        Method::Lmmsec => lmmsec_g(est, channels, scenario, sel),
        Method::Smmsec => smmsec_g(est, channels, scenario, sel),
        Method::Exhaustive => exhaustive_search(est, channels, scenario, sel),
    }
}

/// Runs every configured method on one channel draw.
pub fn run_trial(cfg: &ExperimentConfig, point: &SweepPoint, trial: usize, seed: u64) -> Result<Vec<TrialResult>> {
    let scenario = point.scenario(cfg);
    scenario.validate()?;
    let sel = cfg.selection();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let channels = draw_channels(&scenario, &mut rng)?;
    let est = local_estimator(&scenario, &channels);
    let channel_hash = channels.fingerprint();

    let rows = cfg
        .methods
        .iter()
        .map(|&method| {
            let base = TrialResult {
                method,
                sweep: point.kind,
                sweep_value: point.value,
                trial,
                seed,
                selected: None,
                mmse: f64::NAN,
                sinr_linear: f64::NAN,
                sinr_db: f64::NAN,
                iterations: 0,
                converged: false,
                channel_hash,
                error: None,
            };
            let outcome = run_method(method, &est, &channels, &scenario, &sel)
                .and_then(|res| output_sinr(&res.weights, &channels, &scenario, &res.selected).map(|s| (res, s)));
            match outcome {
                Ok((res, sinr)) => TrialResult {
                    mmse: res.mmse,
                    sinr_linear: sinr,
                    sinr_db: to_db(sinr),
                    iterations: res.iterations,
                    converged: res.converged,
                    selected: Some(res.selected),
                    ..base
                },
                Err(e) => {
                    log::warn!("{method} failed at {}={} trial {trial}: {e}", point.kind.as_str(), point.value);
                    TrialResult { error: Some(e.to_string()), ..base }
                }
            }
        })
        .collect();
    Ok(rows)
}

/// All rows of the configured sweep, ordered by (method, sweep value, trial).
pub fn run_sweep(cfg: &ExperimentConfig) -> Result<Vec<TrialResult>> {
    cfg.validate()?;
    let points = sweep_points(cfg);
    let jobs: Vec<(usize, usize)> = (0..points.len()).flat_map(|p| (0..cfg.trials).map(move |t| (p, t))).collect();
    let per_job: Vec<Vec<TrialResult>> =
        jobs.par_iter().map(|&(p, t)| run_trial(cfg, &points[p], t, trial_seed(cfg.seed, t))).collect::<Result<_>>()?;

    let mut keyed: Vec<((usize, usize, usize), TrialResult)> = Vec::with_capacity(per_job.len() * cfg.methods.len());
    for (&(p, t), rows) in jobs.iter().zip(per_job) {
        for (mi, row) in rows.into_iter().enumerate() {
            keyed.push(((mi, p, t), row));
        }
    }
    keyed.sort_by_key(|(k, _)| *k);
    Ok(keyed.into_iter().map(|(_, r)| r).collect())
}

/// Runs the SNR sweep regardless of `cfg.sweep`.
pub fn sweep_snr(cfg: &ExperimentConfig) -> Result<Vec<TrialResult>> {
    run_sweep(&ExperimentConfig { sweep: SweepKind::Snr, ..cfg.clone() })
}

/// Runs the relay-count sweep regardless of `cfg.sweep`.
pub fn sweep_m(cfg: &ExperimentConfig) -> Result<Vec<TrialResult>> {
    run_sweep(&ExperimentConfig { sweep: SweepKind::M, ..cfg.clone() })
}

#[derive(Debug, Clone, PartialEq)]
pub struct PointSummary {
    pub method: Method,
    pub sweep_value: f64,
    /// Mean linear SINR over successful trials, in dB.
    pub mean_sinr_db: f64,
    pub mean_mmse: f64,
    pub mean_selected: f64,
    pub trials: usize,
    pub failures: usize,
}

/// Per-(method, sweep value) means, in row order.
pub fn summarize(rows: &[TrialResult]) -> Vec<PointSummary> {
    let mut out: Vec<PointSummary> = Vec::new();
    let mut sums = (0.0, 0.0, 0.0);
    for row in rows {
        let fresh = out.last().is_none_or(|s| s.method != row.method || s.sweep_value != row.sweep_value);
        if fresh {
            sums = (0.0, 0.0, 0.0);
            out.push(PointSummary {
                method: row.method,
                sweep_value: row.sweep_value,
                mean_sinr_db: f64::NAN,
                mean_mmse: f64::NAN,
                mean_selected: f64::NAN,
                trials: 0,
                failures: 0,
            });
        }
        let s = out.last_mut().expect("pushed above");
        match &row.selected {
            Some(set) if !row.failed() => {
                s.trials += 1;
                sums.0 += row.sinr_linear;
                sums.1 += row.mmse;
                sums.2 += set.active_count() as f64;
            }
            _ => s.failures += 1,
        }
        let n = s.trials as f64;
        s.mean_sinr_db = to_db(sums.0 / n);
        s.mean_mmse = sums.1 / n;
        s.mean_selected = sums.2 / n;
    }
    out
}

pub const CSV_HEADER: [&str; 11] = [
    "method",
    "sweep_param",
    "sweep_value",
    "trial",
    "seed",
    "selected_mask",
    "mmse",
    "sinr_linear",
    "sinr_db",
    "iters",
    "converged",
];

fn csv_err(path: &Path, e: csv::Error) -> Error {
    let source = match e.into_kind() {
        csv::ErrorKind::Io(io) => io,
        other => std::io::Error::other(format!("{other:?}")),
    };
    Error::Io { path: path.to_path_buf(), source }
}

/// Writes one line per row. Floats use Rust's shortest round-trip formatting;
/// failed rows have an empty mask and NaN metrics.
pub fn emit_csv(rows: &[TrialResult], path: &Path) -> Result<()> {
    let mut w = csv::Writer::from_path(path).map_err(|e| csv_err(path, e))?;
    w.write_record(CSV_HEADER).map_err(|e| csv_err(path, e))?;
    for r in rows {
        let mask = r.selected.as_ref().map(|s| s.mask().to_string()).unwrap_or_default();
        w.write_record([
            r.method.as_str().to_string(),
            r.sweep.as_str().to_string(),
            r.sweep_value.to_string(),
            r.trial.to_string(),
            r.seed.to_string(),
            mask,
            r.mmse.to_string(),
            r.sinr_linear.to_string(),
            r.sinr_db.to_string(),
            r.iterations.to_string(),
            r.converged.to_string(),
        ])
        .map_err(|e| csv_err(path, e))?;
    }
    w.flush().map_err(|source| Error::Io { path: path.to_path_buf(), source })
}

/// Consensus on the full relay set of the first trial at the first sweep point.
pub fn consensus_trace(cfg: &ExperimentConfig) -> Result<Vec<TraceRecord>> {
    let point = sweep_points(cfg)[0];
    let scenario = point.scenario(cfg);
    scenario.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(trial_seed(cfg.seed, 0));
    let channels = draw_channels(&scenario, &mut rng)?;
    let est = local_estimator(&scenario, &channels);
    let full = RelaySet::full(scenario.relays);
    let out = run_consensus(
        &full,
        &est,
        &channels,
        scenario.total_power,
        scenario.desired_power(),
        &cfg.consensus,
        &cfg.topology.build(&full),
        true,
    )?;
    Ok(out.trace)
}

pub fn emit_trace(trace: &[TraceRecord], path: &Path) -> Result<()> {
    let mut w = csv::Writer::from_path(path).map_err(|e| csv_err(path, e))?;
    w.write_record(["iteration", "disagreement", "power", "mmse"]).map_err(|e| csv_err(path, e))?;
    for t in trace {
        w.write_record([t.iteration.to_string(), t.disagreement.to_string(), t.power.to_string(), t.mmse.to_string()])
            .map_err(|e| csv_err(path, e))?;
    }
    w.flush().map_err(|source| Error::Io { path: path.to_path_buf(), source })
}
