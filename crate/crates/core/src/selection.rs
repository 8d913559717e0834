//! Relay selection: two greedy backward-elimination schemes and the
//! exhaustive baseline.
//!
//! Every candidate set is scored by re-solving the beamforming weights on it
//! under the full power budget and evaluating the network MMSE. Ties in any
//! argmax/argmin over relays go to the lowest relay index.

use std::cmp::Ordering;
use std::fmt;

use rayon::prelude::*;

use crate::channel::{ChannelRealization, NetworkScenario};
use crate::consensus::{run_consensus, solve_centralized, ConsensusConfig, TopologyKind};
use crate::error::{Error, Result};
use crate::metrics::{network_mmse, BeamWeights, LocalEstimator};

/// Binary cooperation vector over the relays.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct RelaySet {
    alpha: Vec<bool>,
}

impl RelaySet {
    pub fn full(relays: usize) -> Self {
        RelaySet { alpha: vec![true; relays] }
    }

    pub fn empty(relays: usize) -> Self {
        RelaySet { alpha: vec![false; relays] }
    }

    pub fn from_indices(relays: usize, indices: &[usize]) -> Result<Self> {
        let mut set = Self::empty(relays);
        for &m in indices {
            if m >= relays {
                return Err(Error::Domain(format!("relay index {m} out of range for {relays} relays")));
            }
            set.alpha[m] = true;
        }
        Ok(set)
    }

    /// Bit `m` of `mask` enables relay `m`.
    pub fn from_mask(relays: usize, mask: u64) -> Self {
        RelaySet { alpha: (0..relays).map(|m| mask >> m & 1 == 1).collect() }
    }

    pub fn mask(&self) -> u64 {
        self.alpha.iter().enumerate().filter(|(_, a)| **a).map(|(m, _)| 1u64 << m).sum()
    }

    pub fn len(&self) -> usize {
        self.alpha.len()
    }

    pub fn is_empty(&self) -> bool {
        self.alpha.is_empty()
    }

    pub fn contains(&self, relay: usize) -> bool {
        self.alpha.get(relay).copied().unwrap_or(false)
    }

    pub fn active_count(&self) -> usize {
        self.alpha.iter().filter(|a| **a).count()
    }

    pub fn indices(&self) -> impl Iterator<Item = usize> + '_ {
        self.alpha.iter().enumerate().filter(|(_, a)| **a).map(|(m, _)| m)
    }

    pub fn alpha(&self) -> Vec<u8> {
        self.alpha.iter().map(|&a| u8::from(a)).collect()
    }

    pub fn without(&self, relay: usize) -> Self {
        let mut next = self.clone();
        next.alpha[relay] = false;
        next
    }
}

impl fmt::Debug for RelaySet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.indices()).finish()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum SolverMode {
    #[default]
    Centralized,
    Consensus,
}

impl std::str::FromStr for SolverMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "centralized" => Ok(SolverMode::Centralized),
            "consensus" => Ok(SolverMode::Consensus),
            other => Err(Error::Config(format!("unknown solver `{other}`"))),
        }
    }
}

pub const DEFAULT_EXHAUSTIVE_LIMIT: usize = 20;

#[derive(Debug, Clone, PartialEq)]
pub struct SelectionConfig {
    /// Fewest relays any returned set may contain.
    pub m_min: usize,
    /// Exact cardinality for the exhaustive search.
    pub m_fix: Option<usize>,
    pub consensus: ConsensusConfig,
    pub solver: SolverMode,
    /// How candidate sets are wired for the consensus solver.
    pub topology: TopologyKind,
    pub exhaustive_limit: usize,
}

impl Default for SelectionConfig {
    fn default() -> Self {
        SelectionConfig {
            m_min: 1,
            m_fix: None,
            consensus: ConsensusConfig::default(),
            solver: SolverMode::Centralized,
            topology: TopologyKind::Ring,
            exhaustive_limit: DEFAULT_EXHAUSTIVE_LIMIT,
        }
    }
}

impl SelectionConfig {
    pub fn validate(&self, relays: usize) -> Result<()> {
        if self.m_min < 1 || self.m_min > relays {
            return Err(Error::Config(format!("m_min = {} must lie in [1, {relays}]", self.m_min)));
        }
        if let Some(fix) = self.m_fix {
            if fix < self.m_min || fix > relays {
                return Err(Error::Config(format!("m_fix = {fix} must lie in [{}, {relays}]", self.m_min)));
            }
        }
        self.consensus.validate()
    }
}

/// Weights and cost of one candidate set.
#[derive(Debug, Clone, PartialEq)]
pub struct Evaluation {
    pub weights: BeamWeights,
    pub mmse: f64,
    /// Consensus iterations spent (0 for the centralized solver).
    pub iterations: usize,
    pub converged: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct HistoryRecord {
    pub iteration: usize,
    pub candidate: RelaySet,
    pub mmse: f64,
    pub accepted: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SelectionResult {
    pub selected: RelaySet,
    pub weights: BeamWeights,
    pub mmse: f64,
    pub history: Vec<HistoryRecord>,
    /// Consensus iterations and convergence of the returned set's solve.
    pub iterations: usize,
    pub converged: bool,
}

impl SelectionResult {
    fn from_evaluation(selected: RelaySet, eval: Evaluation, history: Vec<HistoryRecord>) -> Self {
        SelectionResult {
            selected,
            weights: eval.weights,
            mmse: eval.mmse,
            history,
            iterations: eval.iterations,
            converged: eval.converged,
        }
    }
}

/// Re-solves the weights on `candidate` under the full budget and scores them.
pub fn evaluate_set(
    candidate: &RelaySet,
    est: &LocalEstimator,
    channels: &ChannelRealization,
    scenario: &NetworkScenario,
    cfg: &SelectionConfig,
) -> Result<Evaluation> {
    if candidate.active_count() == 0 {
        return Err(Error::Domain("cannot evaluate an empty relay set".into()));
    }
    let (weights, iterations, converged) = match cfg.solver {
        SolverMode::Centralized => {
            let (w, _) = solve_centralized(candidate, est, channels, scenario.total_power)?;
            (w, 0, true)
        }
        SolverMode::Consensus => {
            let topology = cfg.topology.build(candidate);
            let out = run_consensus(
                candidate,
                est,
                channels,
                scenario.total_power,
                scenario.desired_power(),
                &cfg.consensus,
                &topology,
                false,
            )?;
            (out.weights, out.state.iteration, out.converged)
        }
    };
    let mmse = network_mmse(candidate, &weights, est, channels, scenario)?;
    Ok(Evaluation { weights, mmse, iterations, converged })
}

/// Index of the best value under `better`, first index on ties.
fn pick(scores: &[(usize, f64)], better: impl Fn(f64, f64) -> bool) -> usize {
    let mut best = scores[0];
    for &s in &scores[1..] {
        if better(s.1, best.1) {
            best = s;
        }
    }
    best.0
}

/// Greedy elimination that scores each relay on its own (it alone enabled,
/// full budget) and drops the relay with the largest standalone MMSE.
pub fn lmmsec_g(
    est: &LocalEstimator,
    channels: &ChannelRealization,
    scenario: &NetworkScenario,
    cfg: &SelectionConfig,
) -> Result<SelectionResult> {
    let relays = channels.relays();
    cfg.validate(relays)?;
    let mut current = RelaySet::full(relays);
    let mut best = evaluate_set(&current, est, channels, scenario, cfg)?;
    let mut history = vec![HistoryRecord { iteration: 0, candidate: current.clone(), mmse: best.mmse, accepted: true }];
    let mut standalone: Vec<Option<f64>> = vec![None; relays];

    for iteration in 1..=relays - cfg.m_min {
        let mut scores = Vec::with_capacity(current.active_count());
        for m in current.indices() {
            let score = match standalone[m] {
                Some(s) => s,
                None => {
                    let single = RelaySet::from_indices(relays, &[m])?;
                    let s = evaluate_set(&single, est, channels, scenario, cfg)?.mmse;
                    standalone[m] = Some(s);
                    s
                }
            };
            scores.push((m, score));
        }
        let worst = pick(&scores, |a, b| a > b);
        let candidate = current.without(worst);
        let eval = evaluate_set(&candidate, est, channels, scenario, cfg)?;
        let accepted = eval.mmse < best.mmse;
        history.push(HistoryRecord { iteration, candidate: candidate.clone(), mmse: eval.mmse, accepted });
        if !accepted {
            break;
        }
        current = candidate;
        best = eval;
    }
    Ok(SelectionResult::from_evaluation(current, best, history))
}

/// Greedy elimination that tries disabling each active relay in turn and
/// keeps the removal with the smallest remaining-set MMSE.
pub fn smmsec_g(
    est: &LocalEstimator,
    channels: &ChannelRealization,
    scenario: &NetworkScenario,
    cfg: &SelectionConfig,
) -> Result<SelectionResult> {
    let relays = channels.relays();
    cfg.validate(relays)?;
    let mut current = RelaySet::full(relays);
    let mut best = evaluate_set(&current, est, channels, scenario, cfg)?;
    let mut history = vec![HistoryRecord { iteration: 0, candidate: current.clone(), mmse: best.mmse, accepted: true }];

    for iteration in 1..=relays - cfg.m_min {
        let mut evals = Vec::with_capacity(current.active_count());
        for m in current.indices() {
            evals.push((m, evaluate_set(&current.without(m), est, channels, scenario, cfg)?));
        }
        let scores: Vec<(usize, f64)> = evals.iter().map(|(m, e)| (*m, e.mmse)).collect();
        let removed = pick(&scores, |a, b| a < b);
        let (_, eval) = evals.into_iter().find(|(m, _)| *m == removed).expect("picked from evals");
        let candidate = current.without(removed);
        let accepted = eval.mmse < best.mmse;
        history.push(HistoryRecord { iteration, candidate: candidate.clone(), mmse: eval.mmse, accepted });
        if !accepted {
            break;
        }
        current = candidate;
        best = eval;
    }
    Ok(SelectionResult::from_evaluation(current, best, history))
}

/// Orders candidates by MMSE, then cardinality, then lexicographically by index list.
fn candidate_order(a: &(RelaySet, Evaluation), b: &(RelaySet, Evaluation)) -> Ordering {
    a.1.mmse
        .total_cmp(&b.1.mmse)
        .then(a.0.active_count().cmp(&b.0.active_count()))
        .then_with(|| a.0.indices().cmp(b.0.indices()))
}

/// Global MMSE minimizer over all admissible subsets.
pub fn exhaustive_search(
    est: &LocalEstimator,
    channels: &ChannelRealization,
    scenario: &NetworkScenario,
    cfg: &SelectionConfig,
) -> Result<SelectionResult> {
    let relays = channels.relays();
    if relays > cfg.exhaustive_limit || relays >= 64 {
        return Err(Error::TooLarge { relays, limit: cfg.exhaustive_limit.min(63) });
    }
    cfg.validate(relays)?;
    let admissible = |mask: &u64| {
        let n = mask.count_ones() as usize;
        match cfg.m_fix {
            Some(fix) => n == fix,
            None => n >= cfg.m_min,
        }
    };
    let best = (1u64..1 << relays)
        .into_par_iter()
        .filter(admissible)
        .map(|mask| {
            let set = RelaySet::from_mask(relays, mask);
            evaluate_set(&set, est, channels, scenario, cfg).map(|e| (set, e))
        })
        .try_reduce_with(|a, b| Ok(if candidate_order(&b, &a) == Ordering::Less { b } else { a }))
        .expect("at least one admissible subset")?;
    let (selected, eval) = best;
    let history = vec![HistoryRecord { iteration: 0, candidate: selected.clone(), mmse: eval.mmse, accepted: true }];
    Ok(SelectionResult::from_evaluation(selected, eval, history))
}
