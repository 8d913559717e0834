//! Total-power-constrained MMSE beamforming.
//!
//! Two routes to the same weights:
//!
//! * [`solve_centralized`]: the KKT closed form
//!   `w_m = alpha_m g_m^* c_m / (lambda + alpha_m |g_m|^2)` with the scalar
//!   multiplier found by bisection on the (strictly decreasing) power curve.
//! * [`run_consensus`]: each relay keeps an auxiliary copy `w_tilde_m` of the
//!   whole weight vector, a power multiplier `lambda_m` and one agreement
//!   multiplier vector `tau_{m,q}` per neighbor, and exchanges magnitude
//!   vectors with its neighbors until the copies agree.

use log::warn;
use num_complex::Complex64;

use crate::channel::ChannelRealization;
use crate::error::{Error, Result};
use crate::metrics::{per_relay_mse, BeamWeights, LocalEstimator};
use crate::selection::RelaySet;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);

/// Directed neighbor lists; relay `m` talks to every `q` in `neighbors[m]`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Topology {
    neighbors: Vec<Vec<usize>>,
}

impl Topology {
    pub fn new(neighbors: Vec<Vec<usize>>) -> Result<Self> {
        let m = neighbors.len();
        for (i, list) in neighbors.iter().enumerate() {
            for &q in list {
                if q == i {
                    return Err(Error::Config(format!("relay {i} lists itself as a neighbor")));
                }
                if q >= m {
                    return Err(Error::Config(format!("relay {i} has out-of-range neighbor {q}")));
                }
            }
            let mut sorted = list.clone();
            sorted.sort_unstable();
            sorted.dedup();
            if sorted.len() != list.len() {
                return Err(Error::Config(format!("relay {i} lists a neighbor twice")));
            }
        }
        Ok(Topology { neighbors })
    }

    /// Each relay talks to the next one, the last wraps to the first.
    pub fn ring(relays: usize) -> Self {
        Self::ring_over(&RelaySet::full(relays))
    }

    /// Ring through the active relays in index order; inactive relays have no links.
    pub fn ring_over(active: &RelaySet) -> Self {
        let idx: Vec<usize> = active.indices().collect();
        let mut neighbors = vec![Vec::new(); active.len()];
        if idx.len() > 1 {
            for (pos, &m) in idx.iter().enumerate() {
                neighbors[m].push(idx[(pos + 1) % idx.len()]);
            }
        }
        Topology { neighbors }
    }

    /// Every active relay talks to every other active relay.
    pub fn complete_over(active: &RelaySet) -> Self {
        let idx: Vec<usize> = active.indices().collect();
        let mut neighbors = vec![Vec::new(); active.len()];
        for &m in &idx {
            neighbors[m] = idx.iter().copied().filter(|&q| q != m).collect();
        }
        Topology { neighbors }
    }

    pub fn relays(&self) -> usize {
        self.neighbors.len()
    }

    pub fn neighbors(&self, relay: usize) -> &[usize] {
        &self.neighbors[relay]
    }

    /// Whether the active relays form one component when links are taken as undirected.
    pub fn is_connected_over(&self, active: &RelaySet) -> bool {
        let idx: Vec<usize> = active.indices().collect();
        let Some(&start) = idx.first() else {
            return true;
        };
        let n = self.relays();
        let mut adj = vec![Vec::new(); n];
        for (m, list) in self.neighbors.iter().enumerate() {
            for &q in list {
                if active.contains(m) && active.contains(q) {
                    adj[m].push(q);
                    adj[q].push(m);
                }
            }
        }
        let mut seen = vec![false; n];
        let mut stack = vec![start];
        seen[start] = true;
        while let Some(m) = stack.pop() {
            for &q in &adj[m] {
                if !seen[q] {
                    seen[q] = true;
                    stack.push(q);
                }
            }
        }
        idx.iter().all(|&m| seen[m])
    }
}

/// Rule for wiring the relays of a candidate set together.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum TopologyKind {
    #[default]
    Ring,
    Complete,
}

impl TopologyKind {
    pub fn build(self, active: &RelaySet) -> Topology {
        match self {
            TopologyKind::Ring => Topology::ring_over(active),
            TopologyKind::Complete => Topology::complete_over(active),
        }
    }
}

impl std::str::FromStr for TopologyKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "ring" => Ok(TopologyKind::Ring),
            "complete" => Ok(TopologyKind::Complete),
            other => Err(Error::Config(format!("unknown topology `{other}`"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConsensusConfig {
    pub mu_lambda: f64,
    pub mu_tau: f64,
    pub max_iters: usize,
    pub tol_consensus: f64,
    pub tol_power: f64,
    /// Lower clamp applied to `lambda_m` wherever it is divided by.
    pub lambda_floor: f64,
}

impl Default for ConsensusConfig {
    fn default() -> Self {
        ConsensusConfig {
            mu_lambda: 1e-3,
            mu_tau: 1e-3,
            max_iters: 10_000,
            tol_consensus: 1e-6,
            tol_power: 1e-6,
            lambda_floor: 1e-8,
        }
    }
}

impl ConsensusConfig {
    pub fn validate(&self) -> Result<()> {
        let positive = [
            ("mu_lambda", self.mu_lambda),
            ("mu_tau", self.mu_tau),
            ("tol_consensus", self.tol_consensus),
            ("tol_power", self.tol_power),
            ("lambda_floor", self.lambda_floor),
        ];
        for (name, v) in positive {
            if !(v > 0.0 && v.is_finite()) {
                return Err(Error::Config(format!("{name} must be positive, got {v}")));
            }
        }
        if self.max_iters == 0 {
            return Err(Error::Config("max_iters must be at least 1".into()));
        }
        Ok(())
    }
}

/// Per-relay state of the consensus iteration.
#[derive(Debug, Clone, PartialEq)]
pub struct ConsensusState {
    /// `w_tilde[m][t]`: relay `m`'s copy of the weight of relay `t`.
    pub w_tilde: Vec<Vec<Complex64>>,
    pub lambda: Vec<f64>,
    /// `tau[m][j]`: multiplier vector for the link from `m` to its `j`-th neighbor.
    pub tau: Vec<Vec<Vec<f64>>>,
    pub iteration: usize,
}

impl ConsensusState {
    /// `w_tilde_m = 1` and `lambda_m = 1` on active relays. Link multipliers start
    /// at magnitude one with the sign the projected update keeps (`-1`); the entry
    /// for a relay's own weight stays at zero.
    pub fn initial(active: &RelaySet, topology: &Topology) -> Self {
        let m = active.len();
        let ones: Vec<Complex64> =
            (0..m).map(|t| if active.contains(t) { Complex64::new(1.0, 0.0) } else { ZERO }).collect();
        let w_tilde = (0..m).map(|r| if active.contains(r) { ones.clone() } else { vec![ZERO; m] }).collect();
        let tau = (0..m)
            .map(|r| {
                topology
                    .neighbors(r)
                    .iter()
                    .map(|_| (0..m).map(|t| if t != r && active.contains(t) { -1.0 } else { 0.0 }).collect())
                    .collect()
            })
            .collect();
        ConsensusState { w_tilde, lambda: vec![1.0; m], tau, iteration: 0 }
    }

    /// `u_m = [|w_tilde_{1,m}|, ..., |w_tilde_{M,m}|]`.
    pub fn magnitudes(&self, relay: usize) -> Vec<f64> {
        self.w_tilde[relay].iter().map(|w| w.norm()).collect()
    }

    /// The deployed weights: each relay transmits its own entry.
    pub fn own_weights(&self) -> BeamWeights {
        BeamWeights { w: (0..self.w_tilde.len()).map(|m| self.w_tilde[m][m]).collect() }
    }

    /// Largest entrywise magnitude gap `max ||w_tilde_m| - |w_tilde_q||` over all pairs of active relays.
    pub fn disagreement(&self, active: &RelaySet) -> f64 {
        let idx: Vec<usize> = active.indices().collect();
        let mut worst = 0.0f64;
        for (a, &m) in idx.iter().enumerate() {
            for &q in &idx[a + 1..] {
                for &t in &idx {
                    worst = worst.max((self.w_tilde[m][t].norm() - self.w_tilde[q][t].norm()).abs());
                }
            }
        }
        worst
    }
}

/// Closed-form weights for a fixed multiplier; inactive relays get zero.
pub fn closed_form_weights(
    active: &RelaySet,
    est: &LocalEstimator,
    channels: &ChannelRealization,
    lambda: f64,
) -> Result<BeamWeights> {
    if !(lambda >= 0.0) {
        return Err(Error::Domain(format!("lambda must be non-negative, got {lambda}")));
    }
    let mut w = vec![ZERO; channels.relays()];
    for m in active.indices() {
        let g = channels.g[m];
        let denom = lambda + g.norm_sqr();
        if denom == 0.0 {
            return Err(Error::Singular { relay: m });
        }
        w[m] = g.conj() * est.corr[m] / denom;
    }
    Ok(BeamWeights { w })
}

/// Power of the closed-form weights at `lambda > 0`.
fn power_at(active: &RelaySet, est: &LocalEstimator, channels: &ChannelRealization, lambda: f64) -> f64 {
    active
        .indices()
        .map(|m| {
            let g2 = channels.g[m].norm_sqr();
            let d = lambda + g2;
            g2 * est.corr[m] * est.corr[m] / (d * d)
        })
        .sum()
}

/// Closed-form weights at `lambda -> 0+`: relays with a dead destination link get zero.
fn unconstrained_weights(active: &RelaySet, est: &LocalEstimator, channels: &ChannelRealization) -> BeamWeights {
    let mut w = vec![ZERO; channels.relays()];
    for m in active.indices() {
        let g = channels.g[m];
        if g.norm_sqr() > 0.0 {
            w[m] = g.conj() * est.corr[m] / g.norm_sqr();
        }
    }
    BeamWeights { w }
}

/// Power of the unconstrained optimum restricted to `active`.
pub fn unconstrained_power(active: &RelaySet, est: &LocalEstimator, channels: &ChannelRealization) -> f64 {
    unconstrained_weights(active, est, channels).power()
}

const MAX_DOUBLINGS: usize = 200;
const MAX_BISECTIONS: usize = 400;

/// Minimizes the network MMSE over `active` subject to `sum |w_m|^2 <= total_power`.
///
/// Returns the weights and the multiplier. When the budget binds the returned
/// weights sit on the feasible side of the bisection bracket.
pub fn solve_centralized(
    active: &RelaySet,
    est: &LocalEstimator,
    channels: &ChannelRealization,
    total_power: f64,
) -> Result<(BeamWeights, f64)> {
    if active.active_count() == 0 {
        return Err(Error::Domain("cannot solve for an empty relay set".into()));
    }
    if !(total_power > 0.0) {
        return Err(Error::Domain(format!("total power must be positive, got {total_power}")));
    }
    let free = unconstrained_weights(active, est, channels);
    if free.power() <= total_power {
        return Ok((free, 0.0));
    }

    let mut lo = 0.0;
    let mut hi = 1.0;
    let mut doublings = 0;
    while power_at(active, est, channels, hi) > total_power {
        lo = hi;
        hi *= 2.0;
        doublings += 1;
        if doublings > MAX_DOUBLINGS {
            return Err(Error::Numeric("could not bracket the power multiplier".into()));
        }
    }
    for _ in 0..MAX_BISECTIONS {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if power_at(active, est, channels, mid) > total_power {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok((closed_form_weights(active, est, channels, hi)?, hi))
}

/// One Jacobi sweep: every relay recomputes its auxiliary vector from the
/// previous multipliers, then the multipliers move along the new vectors.
pub fn consensus_step(
    state: &ConsensusState,
    active: &RelaySet,
    est: &LocalEstimator,
    channels: &ChannelRealization,
    total_power: f64,
    cfg: &ConsensusConfig,
    topology: &Topology,
) -> Result<ConsensusState> {
    let m_count = channels.relays();
    let mut next = state.clone();
    next.iteration = state.iteration + 1;

    for m in 0..m_count {
        let row = &mut next.w_tilde[m];
        if !active.contains(m) {
            row.iter_mut().for_each(|w| *w = ZERO);
            continue;
        }
        let lambda = state.lambda[m].max(cfg.lambda_floor);
        let tau_sum = |t: usize| -> f64 { state.tau[m].iter().map(|tau| tau[t]).sum() };
        for (t, entry) in row.iter_mut().enumerate() {
            *entry = if !active.contains(t) {
                ZERO
            } else if t == m {
                let g = channels.g[m];
                g.conj() * (est.corr[m] - 0.5 * tau_sum(m)) / (lambda + g.norm_sqr())
            } else {
                Complex64::new(-tau_sum(t) / (2.0 * lambda), 0.0)
            };
        }
    }

    let magnitudes: Vec<Vec<f64>> = (0..m_count).map(|m| next.magnitudes(m)).collect();
    for m in active.indices() {
        let norm2: f64 = next.w_tilde[m].iter().map(|w| w.norm_sqr()).sum();
        next.lambda[m] = (state.lambda[m] + cfg.mu_lambda * (norm2 - total_power)).abs();
        for (j, &q) in topology.neighbors(m).iter().enumerate() {
            for t in active.indices().filter(|&t| t != m) {
                next.tau[m][j][t] = (state.tau[m][j][t] + cfg.mu_tau * (magnitudes[m][t] - magnitudes[q][t])).min(0.0);
            }
        }
    }

    let finite = next.w_tilde.iter().flatten().all(|w| w.is_finite())
        && next.lambda.iter().all(|l| l.is_finite())
        && next.tau.iter().flatten().flatten().all(|t| t.is_finite());
    if !finite {
        return Err(Error::Divergence { iteration: next.iteration, mu_lambda: cfg.mu_lambda, mu_tau: cfg.mu_tau });
    }
    Ok(next)
}

/// One line of the optional consensus trace.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TraceRecord {
    pub iteration: usize,
    pub disagreement: f64,
    pub power: f64,
    pub mmse: f64,
}

#[derive(Debug, Clone)]
pub struct ConsensusOutcome {
    pub weights: BeamWeights,
    pub state: ConsensusState,
    pub converged: bool,
    pub trace: Vec<TraceRecord>,
}

/// Iterates [`consensus_step`] from the standard initialization until the
/// copies agree and the budget is met, or `max_iters` is reached.
#[allow(clippy::too_many_arguments)]
pub fn run_consensus(
    active: &RelaySet,
    est: &LocalEstimator,
    channels: &ChannelRealization,
    total_power: f64,
    desired_power: f64,
    cfg: &ConsensusConfig,
    topology: &Topology,
    record_trace: bool,
) -> Result<ConsensusOutcome> {
    cfg.validate()?;
    if active.active_count() == 0 {
        return Err(Error::Domain("cannot run consensus on an empty relay set".into()));
    }
    if topology.relays() != channels.relays() {
        return Err(Error::Domain(format!(
            "topology covers {} relays, channels {}",
            topology.relays(),
            channels.relays()
        )));
    }
    if !topology.is_connected_over(active) {
        warn!("relay topology is disconnected over the active set; consensus cannot agree");
    }

    let mut state = ConsensusState::initial(active, topology);
    let mut trace = Vec::new();
    let mut converged = false;

    for _ in 0..cfg.max_iters {
        let next = consensus_step(&state, active, est, channels, total_power, cfg, topology)?;
        let weights = next.own_weights();
        let disagreement = next.disagreement(active);
        let power: f64 = active.indices().map(|m| weights.w[m].norm_sqr()).sum();
        if record_trace {
            let mmse = active.indices().map(|m| per_relay_mse(m, weights.w[m], est, &channels.g, desired_power)).sum();
            trace.push(TraceRecord { iteration: next.iteration, disagreement, power, mmse });
        }
        // Complementary slackness, per relay copy: either the budget binds to within
        // tol_power, or there is slack and the reflected multiplier update is confined
        // to its band [0, mu_lambda * slack].
        let settled = active.indices().all(|m| {
            let local: f64 = active.indices().map(|t| next.w_tilde[m][t].norm_sqr()).sum();
            let slack = total_power - local;
            slack.abs() <= cfg.tol_power || (slack > 0.0 && next.lambda[m] <= cfg.mu_lambda * slack)
        });
        state = next;
        if disagreement < cfg.tol_consensus && settled {
            converged = true;
            break;
        }
    }

    let mut weights = state.own_weights();
    let power = weights.power();
    if power > total_power {
        let scale = (total_power / power).sqrt();
        weights.w.iter_mut().for_each(|w| *w *= scale);
    }
    Ok(ConsensusOutcome { weights, state, converged, trace })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use std::f64::consts::FRAC_1_SQRT_2;

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    fn one_relay(g: f64, corr: f64) -> (LocalEstimator, ChannelRealization) {
        let est = LocalEstimator { phi: vec![c(0.0)], corr: vec![corr] };
        let ch = ChannelRealization::new(vec![vec![c(1.0)]], vec![c(g)]).unwrap();
        (est, ch)
    }

    #[test]
    fn closed_form_hand_value() {
        let (est, ch) = one_relay(1.0, FRAC_1_SQRT_2);
        let w = closed_form_weights(&RelaySet::full(1), &est, &ch, 1.0).unwrap();
        assert_relative_eq!(w.w[0].re, 0.35355, epsilon = 1e-5);
    }

    #[test]
    fn closed_form_disabled_relay_and_singularity() {
        let est = LocalEstimator { phi: vec![c(0.0); 2], corr: vec![0.5, 0.5] };
        let ch = ChannelRealization::new(vec![vec![c(1.0)]; 2], vec![c(1.0), c(0.0)]).unwrap();
        let only_first = RelaySet::from_indices(2, &[0]).unwrap();
        let w = closed_form_weights(&only_first, &est, &ch, 0.0).unwrap();
        assert_eq!(w.w[1], ZERO);
        assert!(matches!(closed_form_weights(&RelaySet::full(2), &est, &ch, 0.0), Err(Error::Singular { relay: 1 })));
        assert!(closed_form_weights(&RelaySet::full(2), &est, &ch, -1.0).is_err());
    }

    #[test]
    fn closed_form_shrinks_with_lambda() {
        let (est, ch) = one_relay(0.8, 0.6);
        let mut prev = f64::INFINITY;
        for lambda in [0.0, 0.1, 1.0, 10.0, 1e3, 1e6] {
            let w = closed_form_weights(&RelaySet::full(1), &est, &ch, lambda).unwrap().w[0].norm();
            assert!(w < prev);
            prev = w;
        }
        assert!(prev < 1e-6);
    }

    #[test]
    fn centralized_single_relay_cases() {
        let (est, ch) = one_relay(1.0, 1.0);
        let (w, lambda) = solve_centralized(&RelaySet::full(1), &est, &ch, 4.0).unwrap();
        assert_eq!(lambda, 0.0);
        assert_eq!(w.w[0], c(1.0));

        let (w, lambda) = solve_centralized(&RelaySet::full(1), &est, &ch, 0.25).unwrap();
        assert_relative_eq!(w.w[0].norm(), 0.5, epsilon = 1e-12);
        assert_relative_eq!(lambda, 1.0, epsilon = 1e-12);
        assert!(w.power() <= 0.25);
    }

    #[test]
    fn centralized_symmetric_relays_share_equally() {
        let est = LocalEstimator { phi: vec![c(0.0); 2], corr: vec![0.9; 2] };
        let ch = ChannelRealization::new(vec![vec![c(1.0)]; 2], vec![c(0.7); 2]).unwrap();
        let (w, _) = solve_centralized(&RelaySet::full(2), &est, &ch, 0.5).unwrap();
        assert_eq!(w.w[0], w.w[1]);
        assert_relative_eq!(w.power(), 0.5, max_relative = 1e-12);
    }

    #[test]
    fn centralized_tolerates_dead_links() {
        let est = LocalEstimator { phi: vec![c(0.0); 2], corr: vec![0.9, 0.9] };
        let ch = ChannelRealization::new(vec![vec![c(1.0)]; 2], vec![c(1.0), c(0.0)]).unwrap();
        let (w, _) = solve_centralized(&RelaySet::full(2), &est, &ch, 10.0).unwrap();
        assert_eq!(w.w[1], ZERO);
        assert!(solve_centralized(&RelaySet::empty(2), &est, &ch, 1.0).is_err());
    }

    #[test]
    fn frozen_multipliers_reproduce_closed_form() {
        let est = LocalEstimator { phi: vec![c(0.0); 3], corr: vec![0.4, 0.8, 0.6] };
        let g = vec![Complex64::new(0.3, 0.9), Complex64::new(-1.1, 0.2), Complex64::new(0.5, -0.5)];
        let ch = ChannelRealization::new(vec![vec![c(1.0)]; 3], g).unwrap();
        let active = RelaySet::full(3);
        let topo = Topology::ring(3);
        let lambda_star = 0.37;
        let mut state = ConsensusState::initial(&active, &topo);
        state.lambda = vec![lambda_star; 3];
        state.tau.iter_mut().flatten().flatten().for_each(|t| *t = 0.0);
        let next = consensus_step(&state, &active, &est, &ch, 1.0, &ConsensusConfig::default(), &topo).unwrap();
        let closed = closed_form_weights(&active, &est, &ch, lambda_star).unwrap();
        for m in 0..3 {
            assert_eq!(next.w_tilde[m][m], closed.w[m]);
            for t in (0..3).filter(|&t| t != m) {
                assert_eq!(next.w_tilde[m][t].norm(), 0.0);
            }
        }
    }

    #[test]
    fn disabled_relay_has_zero_vector() {
        let est = LocalEstimator { phi: vec![c(0.0); 3], corr: vec![0.4, 0.8, 0.6] };
        let ch = ChannelRealization::new(vec![vec![c(1.0)]; 3], vec![c(1.0); 3]).unwrap();
        let active = RelaySet::from_indices(3, &[0, 2]).unwrap();
        let topo = Topology::ring_over(&active);
        let state = ConsensusState::initial(&active, &topo);
        let next = consensus_step(&state, &active, &est, &ch, 1.0, &ConsensusConfig::default(), &topo).unwrap();
        assert!(next.w_tilde[1].iter().all(|w| *w == ZERO));
        assert!(next.w_tilde[0][1] == ZERO && next.w_tilde[2][1] == ZERO);
    }

    #[test]
    fn lambda_update_hand_value() {
        // Isolated relay, g = 1, lambda = 1: w = c / 2, so c = 2 sqrt(1.5) gives |w|^2 = 1.5.
        let (est, ch) = one_relay(1.0, 2.0 * 1.5f64.sqrt());
        let active = RelaySet::full(1);
        let topo = Topology::ring(1);
        let state = ConsensusState::initial(&active, &topo);
        let next = consensus_step(&state, &active, &est, &ch, 1.0, &ConsensusConfig::default(), &topo).unwrap();
        assert_relative_eq!(next.w_tilde[0][0].norm_sqr(), 1.5, epsilon = 1e-12);
        assert_relative_eq!(next.lambda[0], 1.0005, epsilon = 1e-12);
    }

    #[test]
    fn lambda_stays_non_negative() {
        let (est, ch) = one_relay(2.0, 0.01);
        let active = RelaySet::full(1);
        let topo = Topology::ring(1);
        let cfg = ConsensusConfig { mu_lambda: 5.0, ..ConsensusConfig::default() };
        let mut state = ConsensusState::initial(&active, &topo);
        for _ in 0..50 {
            state = consensus_step(&state, &active, &est, &ch, 1.0, &cfg, &topo).unwrap();
            assert!(state.lambda[0] >= 0.0);
        }
    }

    #[test]
    fn zero_iteration_cap_is_rejected() {
        let (est, ch) = one_relay(1.0, 1.0);
        let cfg = ConsensusConfig { max_iters: 0, ..ConsensusConfig::default() };
        let r = run_consensus(&RelaySet::full(1), &est, &ch, 1.0, 1.0, &cfg, &Topology::ring(1), false);
        assert!(matches!(r, Err(Error::Config(_))));
    }

    #[test]
    fn topology_checks() {
        assert!(Topology::new(vec![vec![0]]).is_err());
        assert!(Topology::new(vec![vec![2], vec![]]).is_err());
        assert!(Topology::new(vec![vec![1, 1], vec![]]).is_err());
        let ring = Topology::ring(4);
        assert_eq!(ring.neighbors(3), &[0]);
        assert!(ring.is_connected_over(&RelaySet::full(4)));
        let split = Topology::new(vec![vec![1], vec![], vec![3], vec![]]).unwrap();
        assert!(!split.is_connected_over(&RelaySet::full(4)));
        assert!(split.is_connected_over(&RelaySet::from_indices(4, &[0, 1]).unwrap()));
    }
}
