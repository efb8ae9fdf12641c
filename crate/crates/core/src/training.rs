//! The three beam-training procedures.
//!
//! All of them consume time slots through a [`Sounder`], compare noisy
//! energies, and emit a [`TrainingResult`] whose `slots_used` comes from the
//! sounder's own counter, never from a formula. Argmax ties break to the
//! first (smallest row-major) index everywhere.

use alloc::vec::Vec;
use rand::Rng;

use crate::binning::{intersect_decode, make_binning_plan, BinningPlan};
use crate::channel::{BeamTuple, ChannelRealization};
use crate::codebook::{CodebookSet, HierarchicalCodebookSet, MultiBeamMode};
use crate::config::SystemConfig;
use crate::error::{Error, Result};
use crate::sounding::{Sounder, SoundingConfig};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Method {
    Exhaustive,
    Hierarchical,
    Multidirectional,
}

/// Common output contract of the training procedures.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TrainingResult {
    pub method: Method,
    pub chosen: BeamTuple,
    /// Time slots actually consumed (probes times repetitions).
    pub slots_used: u64,
    /// Size of the post-decoding ambiguity set; 1 for the exhaustive and
    /// hierarchical searches.
    pub candidates_remaining: u64,
}

/// Energies of one batch-mode scanning round and the winning bin.
#[derive(Debug, Clone, PartialEq)]
pub struct RoundOutcome {
    pub winning_bin: usize,
    pub energies: Vec<f64>,
}

/// Sounds every single-beam triple once and keeps the strongest.
pub fn exhaustive_search<R: Rng + ?Sized>(
    channel: &ChannelRealization,
    books: &CodebookSet,
    cfg: &SoundingConfig,
    rng: &mut R,
) -> Result<TrainingResult> {
    let mut sounder = Sounder::with_profiles(channel, books, *cfg, rng);
    let mut best = f64::NEG_INFINITY;
    let mut chosen = BeamTuple { bs: 0, ue: 0, ris: 0 };
    for bs in 0..books.bs.beams() {
        for ue in 0..books.ue.beams() {
            for ris in 0..books.ris.beams() {
                let t = BeamTuple { bs, ue, ris };
                let e = sounder.sound_tuple(t);
                if e > best {
                    best = e;
                    chosen = t;
                }
            }
        }
    }
    Ok(TrainingResult {
        method: Method::Exhaustive,
        chosen,
        slots_used: sounder.slots_used(),
        candidates_remaining: 1,
    })
}

/// Stage-by-stage refinement through the hierarchical codebooks.
///
/// At stage `s` every axis whose tree still has a layer `s` is active and
/// contributes its `C` children of the currently selected node; exhausted
/// axes stay frozen at their resolved beam (their leaf column, or the single
/// column of a size-1 grid). The joint argmax over the product of active
/// children advances one child per active axis. Feedback is ideal and costs
/// no slots.
pub fn hierarchical_search<R: Rng + ?Sized>(
    channel: &ChannelRealization,
    books: &HierarchicalCodebookSet,
    cfg: &SoundingConfig,
    rng: &mut R,
) -> Result<TrainingResult> {
    let mut sounder = Sounder::new(channel, &books.base, *cfg, rng);
    let trees = [&books.bs, &books.ue, &books.ris];
    let depths = [
        books.bs.layer_count(),
        books.ue.layer_count(),
        books.ris.layer_count(),
    ];
    let stages = depths.into_iter().max().unwrap_or(0);
    // Currently selected node per axis, as an index into the previous layer
    // (so its children at layer s are node * C .. node * C + C).
    let mut node = [0usize; 3];
    for stage in 0..stages {
        let branching = trees[0].branching();
        // Candidate list per axis: active axes offer their children, frozen
        // axes their resolved beam.
        let candidates: Vec<Vec<usize>> = (0..3)
            .map(|a| {
                if stage < depths[a] {
                    (node[a] * branching..(node[a] + 1) * branching).collect()
                } else {
                    alloc::vec![node[a]]
                }
            })
            .collect();
        let beam_of = |a: usize, idx: usize| -> &[num_complex::Complex64] {
            if depths[a] == 0 {
                // Size-1 axis: the whole codebook is its single column.
                match a {
                    0 => books.base.bs.column(0),
                    1 => books.base.ue.column(0),
                    _ => books.base.ris.column(0),
                }
            } else {
                let layer = core::cmp::min(stage, depths[a] - 1);
                trees[a].beam(layer, idx)
            }
        };
        let mut best = f64::NEG_INFINITY;
        let mut best_choice = [candidates[0][0], candidates[1][0], candidates[2][0]];
        for &cb in &candidates[0] {
            for &cu in &candidates[1] {
                for &cm in &candidates[2] {
                    let e = sounder.sound_beams(beam_of(0, cb), beam_of(2, cm), beam_of(1, cu))?;
                    if e > best {
                        best = e;
                        best_choice = [cb, cu, cm];
                    }
                }
            }
        }
        node = best_choice;
    }
    Ok(TrainingResult {
        method: Method::Hierarchical,
        chosen: BeamTuple {
            bs: node[0],
            ue: node[1],
            ris: node[2],
        },
        slots_used: sounder.slots_used(),
        candidates_remaining: 1,
    })
}

/// One batch-mode scanning round: sounds all `S` bins of the given round and
/// returns the argmax. A zero-energy round resolves to bin 0 by the
/// first-wins tie rule.
pub fn scan_round<R: Rng + ?Sized>(
    channel: &ChannelRealization,
    books: &CodebookSet,
    plan: &BinningPlan,
    round: usize,
    cfg: &SoundingConfig,
    ris_mode: MultiBeamMode,
    rng: &mut R,
) -> Result<RoundOutcome> {
    let mut sounder = Sounder::new(channel, books, *cfg, rng);
    scan_round_with(&mut sounder, plan, round, ris_mode)
}

fn scan_round_with<R: Rng + ?Sized>(
    sounder: &mut Sounder<'_, R>,
    plan: &BinningPlan,
    round: usize,
    ris_mode: MultiBeamMode,
) -> Result<RoundOutcome> {
    if round >= plan.round_count() {
        return Err(Error::InvalidArgument(alloc::format!(
            "round {round} out of range ({} rounds)",
            plan.round_count()
        )));
    }
    let bins = plan.bins_per_round();
    let mut energies = Vec::with_capacity(bins);
    let mut winning_bin = 0usize;
    let mut best = f64::NEG_INFINITY;
    for bin in 0..bins {
        let (bs, ue, ris) = plan.bin_groups(round, bin);
        let e = sounder.sound_groups(bs, ue, ris, ris_mode)?;
        if e > best {
            best = e;
            winning_bin = bin;
        }
        energies.push(e);
    }
    Ok(RoundOutcome {
        winning_bin,
        energies,
    })
}

/// The multi-directional search: a fresh random binning plan, `rounds`
/// batch-mode scans, then intersection decoding.
pub fn multidirectional_search<R: Rng + ?Sized>(
    channel: &ChannelRealization,
    books: &CodebookSet,
    sys: &SystemConfig,
    rounds: usize,
    cfg: &SoundingConfig,
    ris_mode: MultiBeamMode,
    rng: &mut R,
) -> Result<TrainingResult> {
    let plan = make_binning_plan(sys, rounds, rng)?;
    let mut sounder = Sounder::new(channel, books, *cfg, rng);
    let mut winners = Vec::with_capacity(rounds);
    for round in 0..rounds {
        winners.push(scan_round_with(&mut sounder, &plan, round, ris_mode)?.winning_bin);
    }
    let slots_used = sounder.slots_used();
    let outcome = intersect_decode(&plan, &winners, rng)?;
    Ok(TrainingResult {
        method: Method::Multidirectional,
        chosen: outcome.chosen,
        slots_used,
        candidates_remaining: outcome.candidates_remaining,
    })
}

/// The multi-directional search with ideal bin identification: each round's
/// winner is, by construction, the bin containing `truth`.
///
/// This runs the same plan generation and decoding as the full simulation
/// but needs no channel matrices, which is what makes the large
/// perfect-alignment sweeps affordable. On-grid LOS-only channels sounded
/// without noise produce exactly this behavior.
pub fn combinatorial_trial<R: Rng + ?Sized>(
    sys: &SystemConfig,
    rounds: usize,
    truth: BeamTuple,
    rng: &mut R,
) -> Result<TrainingResult> {
    if truth.bs >= sys.n_t || truth.ue >= sys.n_r || truth.ris >= sys.m() {
        return Err(Error::InvalidArgument("truth block out of range".into()));
    }
    let plan = make_binning_plan(sys, rounds, rng)?;
    let winners: Vec<usize> = (0..rounds).map(|r| plan.bin_of(r, truth)).collect();
    let outcome = intersect_decode(&plan, &winners, rng)?;
    Ok(TrainingResult {
        method: Method::Multidirectional,
        chosen: outcome.chosen,
        slots_used: (plan.bins_per_round() * rounds) as u64,
        candidates_remaining: outcome.candidates_remaining,
    })
}
