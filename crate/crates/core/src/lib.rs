//! Joint MMSE-consensus distributed beamforming and greedy relay selection
//! for two-hop amplify-and-forward relay networks.
//!
//! The crate is organized bottom-up:
//!
//! * [`channel`]: scenarios and Rayleigh/path-loss/shadowing channel draws.
//! * [`metrics`]: local MMSE estimators, the network MMSE cost, output SINR
//!   and a symbol-level transmission model used for Monte Carlo checks.
//! * [`consensus`]: centralized closed-form weights and the distributed
//!   consensus iteration.
//! * [`selection`]: LMMSEC-G, SMMSEC-G and exhaustive relay selection.
//! * [`config`] and [`harness`]: Monte Carlo sweeps and CSV output.

// `!(x > 0.0)` is used on purpose: it also rejects NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod channel;
pub mod config;
pub mod consensus;
pub mod error;
pub mod harness;
pub mod metrics;
pub mod selection;

pub use channel::{draw_channels, ChannelRealization, NetworkScenario, ShadowingMode};
pub use consensus::{run_consensus, solve_centralized, ConsensusConfig, ConsensusState, Topology};
pub use error::{Error, Result};
pub use metrics::{local_estimator, network_mmse, output_sinr, BeamWeights, LocalEstimator};
pub use selection::{exhaustive_search, lmmsec_g, smmsec_g, RelaySet, SelectionConfig, SelectionResult, SolverMode};
