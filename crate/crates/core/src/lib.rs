//! Link-level simulation core for beam training in RIS-assisted
//! millimeter-wave systems.
//!
//! The crate covers the in-process pieces of the simulator:
//!
//! * [`steering`] / [`codebook`] — array responses, DFT codebooks,
//!   multi-directional beams, and hierarchical wide-beam codebooks;
//! * [`channel`] — Rician sparse cascaded channels and the ground-truth
//!   dominant beam tuple;
//! * [`sounding`] — one training time slot (pilot, noise, energy);
//! * [`binning`] / [`training`] — randomized product-set binning plus the
//!   exhaustive, hierarchical, and multi-directional search procedures;
//! * [`analysis`] — closed-form training overhead and success probability;
//! * [`rate`] — achievable rate and the full-CSI upper-bound surrogate.
//!
//! Everything is `no_std`-compatible (allocation required). Experiment
//! orchestration, config files, CSV output, and the CLI live in the
//! companion `risbt-cli` crate. All randomness flows through
//! caller-provided generators, so every result is reproducible from a seed.

#![cfg_attr(not(feature = "std"), no_std)]
#![deny(unsafe_code)]

extern crate alloc;

pub mod analysis;
pub mod binning;
pub mod channel;
pub mod codebook;
pub mod config;
mod error;
pub mod mat;
pub mod rate;
pub mod rng;
pub mod sounding;
pub mod steering;
pub mod training;

pub use num_complex::{self, Complex64};

pub use channel::{
    cascaded_gain, draw_channel, draw_channel_with, ground_truth_tuple, los_channel_from_indices,
    oracle_tuple, BeamTuple, ChannelConfig, ChannelRealization, LinkPath, LinkPaths, PathSet,
};
pub use codebook::{
    dft_codebook, hierarchical_codebook, multi_beam, Codebook, CodebookKind, CodebookSet,
    GridShape, HierarchicalCodebook, HierarchicalCodebookSet, MultiBeamMode,
};
pub use config::SystemConfig;
pub use error::{Error, Result};
pub use sounding::{sound, Measurement, Sounder, SoundingConfig};
pub use steering::{ula_steering, upa_steering, SteeringGrid};
pub use training::{
    combinatorial_trial, exhaustive_search, hierarchical_search, multidirectional_search,
    scan_round, Method, RoundOutcome, TrainingResult,
};
