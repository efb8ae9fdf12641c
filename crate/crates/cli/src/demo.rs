//! Walkthrough of one multi-directional decode on the toy setup: an 8x4x8
//! cube scanned with 4x2x2 beam groups, the marked dominant block at
//! position (5,4,2). Positions in the trace are 1-based to match the usual
//! way the toy is drawn; internally everything is 0-based.

use anyhow::{ensure, Context, Result};
use risbt::binning::{candidate_sets, intersect_decode, make_binning_plan, BinningPlan};
use risbt::rng::stream_rng;
use risbt::training::scan_round;
use risbt::{los_channel_from_indices, BeamTuple, ChannelConfig, CodebookSet, SoundingConfig};

use crate::experiment::ExperimentSpec;

const TAG_DEMO_PLAN: u64 = 0x21;
const TAG_DEMO_SCAN: u64 = 0x22;
const TAG_DEMO_DECODE: u64 = 0x23;

/// The marked block, 1-based (5,4,2).
const TRUTH: BeamTuple = BeamTuple { bs: 4, ue: 3, ris: 1 };

fn fmt_group(g: &[usize]) -> String {
    let mut ids: Vec<usize> = g.iter().map(|&i| i + 1).collect();
    ids.sort_unstable();
    let strs: Vec<String> = ids.iter().map(|i| i.to_string()).collect();
    format!("{{{}}}", strs.join(" "))
}

fn candidates_after(plan: &BinningPlan, winners: &[usize]) -> Result<u64> {
    let partial = BinningPlan {
        dims: plan.dims,
        groups: plan.groups,
        rounds: plan.rounds[..winners.len()].to_vec(),
    };
    let sets = candidate_sets(&partial, winners)?;
    Ok(sets.iter().map(|s| s.len() as u64).product())
}

/// Runs the walkthrough and returns the printable trace.
pub fn run_decode_demo(spec: &ExperimentSpec) -> Result<String> {
    let sys = spec.file.sys;
    sys.validate_binning().context("demo configuration")?;
    ensure!(
        sys.n_t > TRUTH.bs && sys.n_r > TRUTH.ue && sys.m() > TRUTH.ris,
        "the demo needs a cube of at least 5x4x2 to host the marked block (5,4,2)"
    );
    let rounds = sys.rounds;
    let seed = spec.master_seed;

    // On-grid single-path channel whose dominant block is the marked one.
    let chan_cfg = ChannelConfig {
        rician_br_db: f64::INFINITY,
        rician_ru_db: f64::INFINITY,
        nlos_paths_br: 0,
        nlos_paths_ru: 0,
        on_grid: true,
        ..ChannelConfig::from_system(&sys)
    };
    let ky = TRUTH.ris / sys.m_z;
    let kz = TRUTH.ris % sys.m_z;
    let ch = los_channel_from_indices(&chan_cfg, TRUTH.bs, TRUTH.ue, (0, 0), (ky, kz))?;
    debug_assert_eq!(ch.truth, TRUTH);
    let books = CodebookSet::for_config(&sys)?;

    let plan = make_binning_plan(&sys, rounds, &mut stream_rng(seed, &[TAG_DEMO_PLAN]))?;
    let scfg = SoundingConfig::noiseless();

    let mut out = String::new();
    out.push_str("multi-directional decode walkthrough (positions are 1-based)\n");
    out.push_str(&format!(
        "cube {}x{}x{} (N_t x N_r x M), beam groups {}x{}x{}, S={} bins per round, L={}\n",
        sys.n_t,
        sys.n_r,
        sys.m(),
        sys.r_bs,
        sys.r_ue,
        sys.q,
        sys.bins_per_round(),
        rounds
    ));
    out.push_str(&format!(
        "marked dominant block: ({},{},{})\n\n",
        TRUTH.bs + 1,
        TRUTH.ue + 1,
        TRUTH.ris + 1
    ));

    let mut winners = Vec::with_capacity(rounds);
    let mut slots_used = 0u64;
    for round in 0..rounds {
        let outcome = scan_round(
            &ch,
            &books,
            &plan,
            round,
            &scfg,
            spec.file.ris_beam_mode,
            &mut stream_rng(seed, &[TAG_DEMO_SCAN, round as u64]),
        )?;
        slots_used += outcome.energies.len() as u64;
        winners.push(outcome.winning_bin);
        let (bs, ue, ris) = plan.bin_groups(round, outcome.winning_bin);
        let contains = plan.bin_of(round, TRUTH) == outcome.winning_bin;
        out.push_str(&format!(
            "round {}: winning bin {} (energy {:.3})\n",
            round + 1,
            outcome.winning_bin,
            outcome.energies[outcome.winning_bin]
        ));
        out.push_str(&format!("  bs group  {}\n", fmt_group(bs)));
        out.push_str(&format!("  ue group  {}\n", fmt_group(ue)));
        out.push_str(&format!("  ris group {}\n", fmt_group(ris)));
        out.push_str(&format!(
            "  contains marked block: {}\n",
            if contains { "yes" } else { "no" }
        ));
        out.push_str(&format!(
            "  candidates after intersection: {}\n\n",
            candidates_after(&plan, &winners)?
        ));
    }

    let decode = intersect_decode(&plan, &winners, &mut stream_rng(seed, &[TAG_DEMO_DECODE]))?;
    out.push_str(&format!(
        "final: chosen ({},{},{}), candidates_remaining = {}, slots_used = {}\n",
        decode.chosen.bs + 1,
        decode.chosen.ue + 1,
        decode.chosen.ris + 1,
        decode.candidates_remaining,
        slots_used
    ));
    Ok(out)
}

/// The toy setup the walkthrough defaults to.
pub fn demo_default_config() -> crate::config::FileConfig {
    let mut file = crate::config::FileConfig::default();
    file.sys.n_t = 8;
    file.sys.n_r = 4;
    file.sys.m_y = 4;
    file.sys.m_z = 2;
    file.sys.r_bs = 4;
    file.sys.r_ue = 2;
    file.sys.q = 2;
    file.sys.rounds = 3;
    // Exact-orthogonality beams keep the noiseless walkthrough faithful to
    // the ideal-bin-identification story.
    file.ris_beam_mode = risbt::MultiBeamMode::Amplitude;
    file
}
