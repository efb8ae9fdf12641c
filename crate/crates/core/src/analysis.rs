//! Closed-form training overhead and success-probability prediction.
//!
//! Overhead counts time slots at repetition count 1. The success model for
//! the multi-directional search assumes noiseless bin identification and a
//! uniform random pick among surviving candidates:
//!
//! * an impostor block differing from the truth on axis subset `D` survives
//!   one round with probability `prod_{a in D} p_a`, `p_a = (R_a-1)/(N_a-1)`
//!   (its index must land in the truth's group);
//! * rounds are independent, so the expected survivor count is
//!   `lambda = prod_a (1 + (N_a-1) p_a^L) - 1`;
//! * treating survivors as Poisson, a uniform pick over `1 + K` candidates
//!   succeeds with probability `E[1/(1+K)] = (1 - exp(-lambda)) / lambda`.

#[allow(unused_imports)]
use num_traits::Float;

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use crate::config::SystemConfig;
use crate::error::{Error, Result};
use crate::training::Method;

/// A slot count plus the human-readable formula it came from.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OverheadReport {
    pub method: Method,
    pub slots: u64,
    pub formula: String,
}

fn power_depth(size: usize, base: usize) -> Result<usize> {
    let mut depth = 0usize;
    let mut span = 1usize;
    while span < size {
        span *= base;
        depth += 1;
    }
    if span != size {
        return Err(Error::NotPowerOf {
            what: "hierarchical overhead",
            size,
            base,
        });
    }
    Ok(depth)
}

/// Training overhead in time slots (repetition count 1).
pub fn overhead(method: Method, sys: &SystemConfig, rounds: usize) -> Result<OverheadReport> {
    sys.validate()?;
    let (n_t, n_r, m) = (sys.n_t, sys.n_r, sys.m());
    match method {
        Method::Exhaustive => {
            let slots = (n_t * n_r * m) as u64;
            Ok(OverheadReport {
                method,
                slots,
                formula: format!("N_t*N_r*M = {n_t}*{n_r}*{m} = {slots}"),
            })
        }
        Method::Hierarchical => {
            let c = sys.branching;
            let depths = [
                power_depth(n_t, c)?,
                power_depth(n_r, c)?,
                power_depth(m, c)?,
            ];
            let stages = depths.into_iter().max().unwrap_or(0);
            let mut slots = 0u64;
            let mut per_stage = Vec::with_capacity(stages);
            for s in 0..stages {
                let active = depths.iter().filter(|&&d| d > s).count();
                let probes = (c as u64).pow(active as u32);
                slots += probes;
                per_stage.push(probes);
            }
            // Group equal consecutive stage costs: "(5x8) + (3x2)".
            let mut terms = Vec::new();
            let mut i = 0;
            while i < per_stage.len() {
                let mut j = i;
                while j < per_stage.len() && per_stage[j] == per_stage[i] {
                    j += 1;
                }
                terms.push(format!("({}x{})", j - i, per_stage[i]));
                i = j;
            }
            let max_dim = n_t.max(n_r).max(m);
            let approx = (c as u64).pow(3) * power_depth_ceil(max_dim, c) as u64;
            Ok(OverheadReport {
                method,
                slots,
                formula: format!(
                    "per-stage product rule {} = {slots}; C^3*log_C(max) approximation = {approx}",
                    terms.join(" + ")
                ),
            })
        }
        Method::Multidirectional => {
            sys.validate_binning()?;
            let s = sys.bins_per_round() as u64;
            let l = rounds as u64;
            let slots = s * l;
            Ok(OverheadReport {
                method,
                slots,
                formula: format!("S*L = {s}*{l} = {slots}"),
            })
        }
    }
}

fn power_depth_ceil(size: usize, base: usize) -> usize {
    let mut depth = 0usize;
    let mut span = 1usize;
    while span < size {
        span *= base;
        depth += 1;
    }
    depth
}

/// Predicted outcome statistics of the multi-directional search.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SuccessPrediction {
    /// Expected number of surviving impostor blocks.
    pub lambda: f64,
    /// Union-bound success `max(0, 1 - lambda)`.
    pub p_union: f64,
    /// Poisson-model success under uniform random tie-breaking.
    pub p_poisson: f64,
}

impl SuccessPrediction {
    /// Poisson-model probability that the truth is the only survivor.
    pub fn p_unique(&self) -> f64 {
        (-self.lambda).exp()
    }
}

/// Noiseless success prediction for `rounds` scanning rounds.
pub fn predict_success(sys: &SystemConfig, rounds: usize) -> Result<SuccessPrediction> {
    sys.validate_binning()?;
    if rounds == 0 {
        return Err(Error::InvalidArgument("rounds must be at least 1".into()));
    }
    let lambda = expected_impostors(sys, rounds);
    let p_poisson = if lambda <= 0.0 {
        1.0
    } else if lambda < 1e-9 {
        1.0 - 0.5 * lambda
    } else {
        (1.0 - (-lambda).exp()) / lambda
    };
    Ok(SuccessPrediction {
        lambda,
        p_union: (1.0 - lambda).max(0.0),
        p_poisson,
    })
}

fn expected_impostors(sys: &SystemConfig, rounds: usize) -> f64 {
    let axes = [
        (sys.n_t, sys.r_bs),
        (sys.n_r, sys.r_ue),
        (sys.m(), sys.q),
    ];
    let mut product = 1.0;
    for (n, r) in axes {
        if n == 1 {
            continue;
        }
        let p = (r - 1) as f64 / (n - 1) as f64;
        product *= 1.0 + (n - 1) as f64 * p.powi(rounds as i32);
    }
    product - 1.0
}

/// Round count plus the logarithmic reference scale.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RequiredRounds {
    pub rounds: usize,
    /// `log2(max(N_t, N_r, M))`, the expected order of the answer.
    pub log2_max_dimension: f64,
}

/// Smallest `L` whose Poisson-model success reaches `target`.
pub fn required_rounds(sys: &SystemConfig, target: f64) -> Result<RequiredRounds> {
    if !(target > 0.0 && target < 1.0) {
        return Err(Error::InvalidArgument(format!(
            "target must lie strictly between 0 and 1, got {target}"
        )));
    }
    sys.validate_binning()?;
    let log2_max_dimension = (sys.n_t.max(sys.n_r).max(sys.m()) as f64).log2();
    // If every axis groups the whole range, extra rounds change nothing.
    let improvable = [
        (sys.n_t, sys.r_bs),
        (sys.n_r, sys.r_ue),
        (sys.m(), sys.q),
    ]
    .into_iter()
    .any(|(n, r)| n > 1 && r < n);
    let cap = if improvable { 10_000 } else { 1 };
    for rounds in 1..=cap {
        if predict_success(sys, rounds)?.p_poisson >= target {
            return Ok(RequiredRounds {
                rounds,
                log2_max_dimension,
            });
        }
    }
    Err(Error::UnreachableTarget)
}
