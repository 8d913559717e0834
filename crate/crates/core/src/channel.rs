//! Network scenario description and channel generation.
//!
//! Channels combine unit-variance Rayleigh small-scale fading with an
//! exponential path-loss amplitude `sqrt(L) / sqrt(d^rho)` and a log-normal
//! shadowing amplitude `10^(sigma_s * Z / 10)`.
//!
//! Every relay draws from its own ChaCha stream derived from a single base
//! seed taken from the caller's rng. Within a relay the order is
//! `g_m, f_{m,1}, ..., f_{m,K}`, so a realization for `M` relays and `K`
//! sources is a prefix of the realization for any larger `M` or `K` drawn
//! from the same rng state.

use log::warn;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::error::{Error, Result};

/// How shadowing factors are shared between channel coefficients.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum ShadowingMode {
    /// One independent draw per channel coefficient.
    #[default]
    PerLink,
    /// One draw for the whole of `F` and one for the whole of `g`.
    PerMatrix,
}

impl std::str::FromStr for ShadowingMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "per_link" => Ok(ShadowingMode::PerLink),
            "per_matrix" => Ok(ShadowingMode::PerMatrix),
            other => Err(Error::Config(format!("unknown shadowing_mode `{other}`"))),
        }
    }
}

/// Per-relay hop distances in normalized units.
#[derive(Debug, Clone, PartialEq)]
pub struct Distances {
    pub source_relay: Vec<f64>,
    pub relay_dest: Vec<f64>,
}

impl Distances {
    pub fn unit(relays: usize) -> Self {
        Distances { source_relay: vec![1.0; relays], relay_dest: vec![1.0; relays] }
    }
}

/// Static problem description. All quantities are linear.
#[derive(Debug, Clone, PartialEq)]
pub struct NetworkScenario {
    /// Transmit power of each source; index 0 is the desired source.
    pub source_powers: Vec<f64>,
    pub relays: usize,
    pub relay_noise_var: f64,
    pub dest_noise_var: f64,
    pub total_power: f64,
    pub path_loss_ref: f64,
    pub path_loss_exp: f64,
    pub shadow_spread_db: f64,
    pub distances: Distances,
    pub shadowing_mode: ShadowingMode,
}

impl NetworkScenario {
    /// A scenario with unit distances, no path loss and no shadowing.
    pub fn new(source_powers: Vec<f64>, relays: usize, noise_var: f64, total_power: f64) -> Self {
        NetworkScenario {
            source_powers,
            relays,
            relay_noise_var: noise_var,
            dest_noise_var: noise_var,
            total_power,
            path_loss_ref: 1.0,
            path_loss_exp: 2.0,
            shadow_spread_db: 0.0,
            distances: Distances::unit(relays),
            shadowing_mode: ShadowingMode::PerLink,
        }
    }

    pub fn sources(&self) -> usize {
        self.source_powers.len()
    }

    pub fn desired_power(&self) -> f64 {
        self.source_powers[0]
    }

    /// Checks the hard invariants and logs a warning for parameters outside
    /// their customary ranges.
    pub fn validate(&self) -> Result<()> {
        if self.source_powers.is_empty() {
            return Err(Error::Domain("at least one source is required".into()));
        }
        if self.relays == 0 {
            return Err(Error::Domain("at least one relay is required".into()));
        }
        if !(self.source_powers[0] > 0.0 && self.source_powers[0].is_finite()) {
            return Err(Error::Domain("desired source power must be positive".into()));
        }
        // Interferers may be switched off entirely.
        if self.source_powers[1..].iter().any(|p| !(*p >= 0.0 && p.is_finite())) {
            return Err(Error::Domain("interferer powers must be finite and non-negative".into()));
        }
        for (name, v) in [
            ("relay_noise_var", self.relay_noise_var),
            ("dest_noise_var", self.dest_noise_var),
            ("total_power", self.total_power),
            ("path_loss_ref", self.path_loss_ref),
        ] {
            if !(v > 0.0 && v.is_finite()) {
                return Err(Error::Domain(format!("{name} must be positive, got {v}")));
            }
        }
        if !(self.path_loss_exp >= 0.0) {
            return Err(Error::Domain("path loss exponent must be non-negative".into()));
        }
        if !(self.shadow_spread_db >= 0.0) {
            return Err(Error::Domain("shadowing spread must be non-negative".into()));
        }
        if !(2.0..=5.0).contains(&self.path_loss_exp) {
            warn!("path loss exponent {} outside the usual range [2, 5]", self.path_loss_exp);
        }
        if self.shadow_spread_db > 9.0 {
            warn!("shadowing spread {} dB outside the usual range [0, 9] dB", self.shadow_spread_db);
        }
        let d = &self.distances;
        if d.source_relay.len() != self.relays || d.relay_dest.len() != self.relays {
            return Err(Error::Domain(format!("distance vectors must have one entry per relay ({})", self.relays)));
        }
        if d.source_relay.iter().chain(&d.relay_dest).any(|x| !(*x > 0.0)) {
            return Err(Error::Domain("distances must be positive".into()));
        }
        Ok(())
    }
}

/// One draw of the source->relay matrix `F` (M x K) and relay->destination vector `g`.
#[derive(Debug, Clone, PartialEq)]
pub struct ChannelRealization {
    /// `f[m][k]`: gain from source `k` to relay `m`.
    pub f: Vec<Vec<Complex64>>,
    pub g: Vec<Complex64>,
}

impl ChannelRealization {
    pub fn new(f: Vec<Vec<Complex64>>, g: Vec<Complex64>) -> Result<Self> {
        if f.len() != g.len() {
            return Err(Error::Domain(format!("F has {} rows but g has {} entries", f.len(), g.len())));
        }
        let k = f.first().map_or(0, Vec::len);
        if k == 0 || f.iter().any(|row| row.len() != k) {
            return Err(Error::Domain("F rows must be nonempty and of equal length".into()));
        }
        if f.iter().flatten().chain(&g).any(|z| !z.is_finite()) {
            return Err(Error::Domain("channel entries must be finite".into()));
        }
        Ok(ChannelRealization { f, g })
    }

    pub fn relays(&self) -> usize {
        self.g.len()
    }

    pub fn sources(&self) -> usize {
        self.f.first().map_or(0, Vec::len)
    }

    /// Stable 64-bit fingerprint of the realization (FNV-1a over the IEEE bits).
    pub fn fingerprint(&self) -> u64 {
        let mut h: u64 = 0xcbf2_9ce4_8422_2325;
        let mut eat = |x: f64| {
            for b in x.to_bits().to_le_bytes() {
                h ^= u64::from(b);
                h = h.wrapping_mul(0x0100_0000_01b3);
            }
        };
        for z in self.f.iter().flatten().chain(&self.g) {
            eat(z.re);
            eat(z.im);
        }
        h
    }
}

/// Distance-based amplitude factor `sqrt(L) / sqrt(d^rho)`.
pub fn path_loss(reference: f64, distance: f64, exponent: f64) -> Result<f64> {
    if !(reference > 0.0) || !(distance > 0.0) || !(exponent >= 0.0) {
        return Err(Error::Domain(format!(
            "path loss needs L > 0, d > 0, rho >= 0 (got L={reference}, d={distance}, rho={exponent})"
        )));
    }
    Ok(reference.sqrt() / distance.powf(exponent).sqrt())
}

/// Shadowing amplitude for a given standard-normal sample `z`.
pub fn shadowing_from_normal(spread_db: f64, z: f64) -> Result<f64> {
    if !(spread_db >= 0.0) {
        return Err(Error::Domain(format!("shadowing spread must be >= 0, got {spread_db}")));
    }
    Ok(10f64.powf(spread_db * z / 10.0))
}

/// Log-normal shadowing amplitude with spread `spread_db`.
pub fn shadowing_draw<R: Rng + ?Sized>(spread_db: f64, rng: &mut R) -> Result<f64> {
    let z: f64 = rng.sample(StandardNormal);
    shadowing_from_normal(spread_db, z)
}

/// Circularly-symmetric complex Gaussian with unit variance.
pub fn complex_gaussian<R: Rng + ?Sized>(rng: &mut R) -> Complex64 {
    let re: f64 = rng.sample(StandardNormal);
    let im: f64 = rng.sample(StandardNormal);
    Complex64::new(re, im) * std::f64::consts::FRAC_1_SQRT_2
}

const MATRIX_SHADOW_STREAM: u64 = u64::MAX;

/// Draws one channel realization for `scenario`.
pub fn draw_channels<R: Rng + ?Sized>(scenario: &NetworkScenario, rng: &mut R) -> Result<ChannelRealization> {
    scenario.validate()?;
    let base: u64 = rng.gen();
    let spread = scenario.shadow_spread_db;

    let (beta_g, beta_f) = match scenario.shadowing_mode {
        ShadowingMode::PerLink => (None, None),
        ShadowingMode::PerMatrix => {
            let mut s = ChaCha8Rng::seed_from_u64(base);
            s.set_stream(MATRIX_SHADOW_STREAM);
            (Some(shadowing_draw(spread, &mut s)?), Some(shadowing_draw(spread, &mut s)?))
        }
    };

    let mut f = Vec::with_capacity(scenario.relays);
    let mut g = Vec::with_capacity(scenario.relays);
    for m in 0..scenario.relays {
        let mut s = ChaCha8Rng::seed_from_u64(base);
        s.set_stream(m as u64);
        let gamma_rd = path_loss(scenario.path_loss_ref, scenario.distances.relay_dest[m], scenario.path_loss_exp)?;
        let gamma_sr = path_loss(scenario.path_loss_ref, scenario.distances.source_relay[m], scenario.path_loss_exp)?;

        let g0 = complex_gaussian(&mut s);
        let b = match beta_g {
            Some(b) => b,
            None => shadowing_draw(spread, &mut s)?,
        };
        g.push(g0 * (gamma_rd * b));

        let mut row = Vec::with_capacity(scenario.sources());
        for _ in 0..scenario.sources() {
            let f0 = complex_gaussian(&mut s);
            let b = match beta_f {
                Some(b) => b,
                None => shadowing_draw(spread, &mut s)?,
            };
            row.push(f0 * (gamma_sr * b));
        }
        f.push(row);
    }
    ChannelRealization::new(f, g)
}
