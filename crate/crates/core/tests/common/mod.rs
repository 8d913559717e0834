#![allow(dead_code)]

use num_complex::Complex64;
use rand::Rng;
use relaysel::metrics::from_db;
use relaysel::{draw_channels, local_estimator, ChannelRealization, LocalEstimator, NetworkScenario};

/// A random instance in the spirit of the reference setup: K = 3, L = 10 dB,
/// 3 dB shadowing, SNR and INR drawn from [-10, 10] dB.
pub struct Instance {
    pub scenario: NetworkScenario,
    pub channels: ChannelRealization,
    pub est: LocalEstimator,
}

pub fn random_instance<R: Rng>(rng: &mut R, relays: usize, total_power: f64) -> Instance {
    let snr = from_db(rng.gen_range(-10.0..10.0));
    let inr = from_db(rng.gen_range(-10.0..10.0));
    let mut scenario = NetworkScenario::new(vec![snr, inr, inr], relays, 1.0, total_power);
    scenario.path_loss_ref = 10.0;
    scenario.shadow_spread_db = 3.0;
    let channels = draw_channels(&scenario, rng).unwrap();
    let est = local_estimator(&scenario, &channels);
    Instance { scenario, channels, est }
}

pub fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}
