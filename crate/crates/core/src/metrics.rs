//! Local MMSE estimation at the relays, the network MMSE cost and the
//! destination output SINR.
//!
//! Relay `m` forms the estimate `s_hat = phi_m x_m` of the desired symbol and
//! forwards the unit-power version `s_tilde = s_hat / sqrt(E|s_hat|^2)`. The
//! correlation `c_m = E[s_1^* s_tilde]` is real and non-negative, which turns
//! the per-relay mean-square error into the quadratic
//! `P_1 - 2 Re{g_m w_m c_m} + |g_m w_m|^2`.

use num_complex::Complex64;
use rand::Rng;

use crate::channel::{complex_gaussian, ChannelRealization, NetworkScenario};
use crate::error::{Error, Result};
use crate::selection::RelaySet;

/// Per-relay MMSE coefficients `phi_m` and correlations `c_m`.
#[derive(Debug, Clone, PartialEq)]
pub struct LocalEstimator {
    pub phi: Vec<Complex64>,
    pub corr: Vec<f64>,
}

impl LocalEstimator {
    pub fn relays(&self) -> usize {
        self.corr.len()
    }
}

/// Relay transmit weights, the diagonal of `W`.
#[derive(Debug, Clone, PartialEq)]
pub struct BeamWeights {
    pub w: Vec<Complex64>,
}

impl BeamWeights {
    pub fn zeros(relays: usize) -> Self {
        BeamWeights { w: vec![Complex64::new(0.0, 0.0); relays] }
    }

    /// Total transmit power `sum |w_m|^2`.
    pub fn power(&self) -> f64 {
        self.w.iter().map(|w| w.norm_sqr()).sum()
    }
}

pub fn local_estimator(scenario: &NetworkScenario, channels: &ChannelRealization) -> LocalEstimator {
    let p1 = scenario.desired_power();
    let (phi, corr) = channels
        .f
        .iter()
        .map(|row| {
            let received: f64 = row.iter().zip(&scenario.source_powers).map(|(f, p)| f.norm_sqr() * p).sum::<f64>()
                + scenario.dest_noise_var;
            let phi = row[0].conj() * p1 / received;
            let corr = (row[0].norm_sqr() * p1 * p1 / received).sqrt();
            (phi, corr)
        })
        .unzip();
    LocalEstimator { phi, corr }
}

/// `E|s_1 - g_m w_m s_tilde_m|^2` in closed form.
pub fn per_relay_mse(relay: usize, w: Complex64, est: &LocalEstimator, g: &[Complex64], desired_power: f64) -> f64 {
    let gw = g[relay] * w;
    let mse = desired_power - 2.0 * gw.re * est.corr[relay] + gw.norm_sqr();
    // The expansion is a sum of squares; clip rounding below zero.
    mse.max(0.0)
}

/// Sum of the per-relay errors over the active relays.
pub fn network_mmse(
    active: &RelaySet,
    weights: &BeamWeights,
    est: &LocalEstimator,
    channels: &ChannelRealization,
    scenario: &NetworkScenario,
) -> Result<f64> {
    check_dims(active, weights, channels)?;
    if active.active_count() == 0 {
        return Err(Error::Domain("MMSE of an empty relay set is undefined".into()));
    }
    let p1 = scenario.desired_power();
    Ok(active.indices().map(|m| per_relay_mse(m, weights.w[m], est, &channels.g, p1)).sum())
}

/// Destination SINR (linear) with effective weights `alpha_m w_m`, treating
/// the sources as independent streams.
pub fn output_sinr(
    weights: &BeamWeights,
    channels: &ChannelRealization,
    scenario: &NetworkScenario,
    active: &RelaySet,
) -> Result<f64> {
    check_dims(active, weights, channels)?;
    let v: Vec<Complex64> = weights
        .w
        .iter()
        .enumerate()
        .map(|(m, w)| if active.contains(m) { *w } else { Complex64::new(0.0, 0.0) })
        .collect();

    let source_gain = |k: usize| -> Complex64 { (0..v.len()).map(|m| channels.g[m] * v[m] * channels.f[m][k]).sum() };
    let signal = scenario.source_powers[0] * source_gain(0).norm_sqr();
    let interference: f64 =
        (1..scenario.sources()).map(|k| scenario.source_powers[k] * source_gain(k).norm_sqr()).sum();
    let relay_noise: f64 =
        scenario.relay_noise_var * v.iter().zip(&channels.g).map(|(v, g)| (g * v).norm_sqr()).sum::<f64>();
    Ok(signal / (interference + relay_noise + scenario.dest_noise_var))
}

/// Signals at the relays, `x = F s + nu`.
pub fn relay_received<R: Rng + ?Sized>(
    scenario: &NetworkScenario,
    channels: &ChannelRealization,
    symbols: &[Complex64],
    rng: &mut R,
) -> Vec<Complex64> {
    let sigma = scenario.relay_noise_var.sqrt();
    channels
        .f
        .iter()
        .map(|row| {
            let clean: Complex64 = row.iter().zip(symbols).map(|(f, s)| f * s).sum();
            clean + complex_gaussian(rng) * sigma
        })
        .collect()
}

/// One transmission through both hops. `symbols` are the transmitted source
/// signals (already scaled by `sqrt(P_k)`). Fresh noise is drawn from `rng`.
pub fn simulate_transmission<R: Rng + ?Sized>(
    scenario: &NetworkScenario,
    channels: &ChannelRealization,
    weights: &BeamWeights,
    symbols: &[Complex64],
    rng: &mut R,
) -> Complex64 {
    let x = relay_received(scenario, channels, symbols, rng);
    let forwarded: Complex64 = x.iter().zip(&weights.w).zip(&channels.g).map(|((x, w), g)| g * w * x).sum();
    forwarded + complex_gaussian(rng) * scenario.dest_noise_var.sqrt()
}

pub fn to_db(linear: f64) -> f64 {
    10.0 * linear.log10()
}

pub fn from_db(db: f64) -> f64 {
    10f64.powf(db / 10.0)
}

fn check_dims(active: &RelaySet, weights: &BeamWeights, channels: &ChannelRealization) -> Result<()> {
    let m = channels.relays();
    if active.len() != m || weights.w.len() != m {
        return Err(Error::Domain(format!(
            "dimension mismatch: {} relays, set of {}, {} weights",
            m,
            active.len(),
            weights.w.len()
        )));
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;
    use std::f64::consts::FRAC_1_SQRT_2;

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    fn single(f: Complex64, g: Complex64) -> (NetworkScenario, ChannelRealization) {
        let sc = NetworkScenario::new(vec![1.0], 1, 1.0, 1.0);
        let ch = ChannelRealization::new(vec![vec![f]], vec![g]).unwrap();
        (sc, ch)
    }

    #[test]
    fn local_estimator_hand_values() {
        let (sc, ch) = single(c(1.0), c(1.0));
        let est = local_estimator(&sc, &ch);
        assert_relative_eq!(est.phi[0].re, 0.5, epsilon = 1e-15);
        assert_eq!(est.phi[0].im, 0.0);
        assert_relative_eq!(est.corr[0], 0.5f64.sqrt(), epsilon = 1e-15);
    }

    #[test]
    fn zero_desired_channel_gives_zero_estimator() {
        let sc = NetworkScenario::new(vec![1.0, 2.0], 1, 1.0, 1.0);
        let ch = ChannelRealization::new(vec![vec![c(0.0), c(1.0)]], vec![c(1.0)]).unwrap();
        let est = local_estimator(&sc, &ch);
        assert_eq!(est.phi[0], c(0.0));
        assert_eq!(est.corr[0], 0.0);
    }

    #[test]
    fn estimator_magnitudes_are_phase_invariant() {
        let sc = NetworkScenario::new(vec![1.0, 0.5], 1, 1.0, 1.0);
        let f = Complex64::new(0.3, -1.2);
        let a = local_estimator(&sc, &ChannelRealization::new(vec![vec![f, c(0.7)]], vec![c(1.0)]).unwrap());
        let rot = Complex64::from_polar(1.0, 1.1);
        let b = local_estimator(&sc, &ChannelRealization::new(vec![vec![f * rot, c(0.7)]], vec![c(1.0)]).unwrap());
        assert_relative_eq!(a.phi[0].norm(), b.phi[0].norm(), epsilon = 1e-15);
        assert_relative_eq!(a.corr[0], b.corr[0], epsilon = 1e-15);
    }

    #[test]
    fn per_relay_mse_hand_values() {
        let est = LocalEstimator { phi: vec![c(0.5)], corr: vec![FRAC_1_SQRT_2] };
        assert_eq!(per_relay_mse(0, c(0.0), &est, &[c(1.0)], 1.0), 1.0);
        assert_relative_eq!(per_relay_mse(0, c(FRAC_1_SQRT_2), &est, &[c(1.0)], 1.0), 0.5, epsilon = 1e-5);
        let est = LocalEstimator { phi: vec![c(1.0)], corr: vec![1.0] };
        assert_eq!(per_relay_mse(0, c(1.0), &est, &[c(1.0)], 1.0), 0.0);
    }

    #[test]
    fn unconstrained_minimizer_of_per_relay_mse() {
        let g = Complex64::new(0.4, -0.9);
        let est = LocalEstimator { phi: vec![c(0.0)], corr: vec![0.6] };
        let best = g.conj() * 0.6 / g.norm_sqr();
        let at_best = per_relay_mse(0, best, &est, &[g], 1.0);
        for (dr, di) in [(1e-3, 0.0), (-1e-3, 0.0), (0.0, 1e-3), (0.0, -1e-3)] {
            assert!(per_relay_mse(0, best + Complex64::new(dr, di), &est, &[g], 1.0) > at_best);
        }
    }

    #[test]
    fn network_mmse_cases() {
        let sc = NetworkScenario::new(vec![1.0], 1, 1.0, 1.0);
        let ch = ChannelRealization::new(vec![vec![c(1.0)]], vec![c(1.0)]).unwrap();
        let est = LocalEstimator { phi: vec![c(0.5)], corr: vec![FRAC_1_SQRT_2] };
        let w = BeamWeights { w: vec![c(FRAC_1_SQRT_2)] };
        assert!(network_mmse(&RelaySet::empty(1), &w, &est, &ch, &sc).is_err());
        let one = network_mmse(&RelaySet::full(1), &w, &est, &ch, &sc).unwrap();
        assert_relative_eq!(one, 0.5, epsilon = 1e-5);

        let sc2 = NetworkScenario::new(vec![1.0], 2, 1.0, 1.0);
        let ch2 = ChannelRealization::new(vec![vec![c(1.0)], vec![c(1.0)]], vec![c(1.0), c(1.0)]).unwrap();
        let est2 = LocalEstimator { phi: vec![c(0.5); 2], corr: vec![FRAC_1_SQRT_2; 2] };
        let w2 = BeamWeights { w: vec![c(FRAC_1_SQRT_2); 2] };
        let two = network_mmse(&RelaySet::full(2), &w2, &est2, &ch2, &sc2).unwrap();
        assert_eq!(two, 2.0 * one);
    }

    #[test]
    fn output_sinr_hand_value_and_zero_weights() {
        let (sc, ch) = single(c(1.0), c(1.0));
        let s = output_sinr(&BeamWeights { w: vec![c(1.0)] }, &ch, &sc, &RelaySet::full(1)).unwrap();
        assert_relative_eq!(s, 0.5, epsilon = 1e-15);
        let s = output_sinr(&BeamWeights::zeros(1), &ch, &sc, &RelaySet::full(1)).unwrap();
        assert_eq!(s, 0.0);
    }

    #[test]
    fn output_sinr_increases_with_weight_scale() {
        let sc = NetworkScenario::new(vec![1.0], 3, 1.0, 1.0);
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let ch = crate::channel::draw_channels(&sc, &mut rng).unwrap();
        let base: Vec<Complex64> = (0..3).map(|_| complex_gaussian(&mut rng)).collect();
        let set = RelaySet::full(3);
        let sinr_at = |t: f64| {
            let w = BeamWeights { w: base.iter().map(|w| w * t).collect() };
            output_sinr(&w, &ch, &sc, &set).unwrap()
        };
        let num: Complex64 = (0..3).map(|m| ch.g[m] * base[m] * ch.f[m][0]).sum();
        let den: f64 = (0..3).map(|m| (ch.g[m] * base[m]).norm_sqr()).sum();
        let limit = num.norm_sqr() / den;
        let mut prev = 0.0;
        for t in [0.1, 0.5, 1.0, 2.0, 10.0, 100.0, 1e4] {
            let s = sinr_at(t);
            assert!(s > prev && s < limit);
            prev = s;
        }
        assert_relative_eq!(prev, limit, max_relative = 1e-6);
    }

    #[test]
    fn noiseless_transmission_is_a_plain_sum() {
        let m = 4;
        let mut sc = NetworkScenario::new(vec![1.0], m, 1.0, 1.0);
        sc.relay_noise_var = 0.0;
        sc.dest_noise_var = 0.0;
        let ch = ChannelRealization::new(vec![vec![c(1.0)]; m], vec![c(1.0); m]).unwrap();
        let w = BeamWeights { w: vec![c(1.0); m] };
        let z = simulate_transmission(&sc, &ch, &w, &[c(1.0)], &mut ChaCha8Rng::seed_from_u64(0));
        assert_eq!(z, c(m as f64));
    }

    #[test]
    fn transmission_is_seed_deterministic() {
        let sc = NetworkScenario::new(vec![1.0, 1.0], 3, 1.0, 1.0);
        let ch = crate::channel::draw_channels(&sc, &mut ChaCha8Rng::seed_from_u64(1)).unwrap();
        let w = BeamWeights { w: vec![c(0.3); 3] };
        let s = [c(1.0), c(-1.0)];
        let a = simulate_transmission(&sc, &ch, &w, &s, &mut ChaCha8Rng::seed_from_u64(2));
        let b = simulate_transmission(&sc, &ch, &w, &s, &mut ChaCha8Rng::seed_from_u64(2));
        assert_eq!(a, b);
    }
}
