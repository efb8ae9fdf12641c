//! Randomized product-set binning and intersection decoding.
//!
//! Each scanning round permutes every axis independently and chops the
//! permuted index lists into consecutive groups of `R_BS`, `R_UE`, and `Q`
//! entries. A bin is the Cartesian product of one group per axis, so the
//! `S = (N_t/R_BS) (N_r/R_UE) (M/Q)` bins of a round partition the whole
//! block cube, and intersecting winning bins across rounds reduces to
//! intersecting the per-axis groups.

use alloc::vec;
use alloc::vec::Vec;
use rand::seq::SliceRandom;
use rand::Rng;

use crate::channel::BeamTuple;
use crate::config::SystemConfig;
use crate::error::{Error, Result};

/// The three axis permutations of one scanning round.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BinningRound {
    pub bs: Vec<usize>,
    pub ue: Vec<usize>,
    pub ris: Vec<usize>,
}

/// Per-round randomized grouping of the angular cube into product-set bins.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BinningPlan {
    /// Axis sizes `(N_t, N_r, M)`.
    pub dims: [usize; 3],
    /// Group sizes `(R_BS, R_UE, Q)`.
    pub groups: [usize; 3],
    pub rounds: Vec<BinningRound>,
}

impl BinningPlan {
    /// Bins per round.
    pub fn bins_per_round(&self) -> usize {
        self.groups_per_axis().iter().product()
    }

    pub fn groups_per_axis(&self) -> [usize; 3] {
        [
            self.dims[0] / self.groups[0],
            self.dims[1] / self.groups[1],
            self.dims[2] / self.groups[2],
        ]
    }

    pub fn round_count(&self) -> usize {
        self.rounds.len()
    }

    fn axis_perm(&self, round: usize, axis: usize) -> &[usize] {
        let r = &self.rounds[round];
        match axis {
            0 => &r.bs,
            1 => &r.ue,
            _ => &r.ris,
        }
    }

    /// Indices of one axis group (a consecutive chunk of the permutation).
    pub fn axis_group(&self, round: usize, axis: usize, group: usize) -> &[usize] {
        let width = self.groups[axis];
        &self.axis_perm(round, axis)[group * width..(group + 1) * width]
    }

    /// The three axis groups making up one bin. Bin indices are row-major
    /// over `(bs group, ue group, ris group)`.
    pub fn bin_groups(&self, round: usize, bin: usize) -> (&[usize], &[usize], &[usize]) {
        let [_, gu, gm] = self.groups_per_axis();
        let b_ris = bin % gm;
        let b_ue = (bin / gm) % gu;
        let b_bs = bin / (gm * gu);
        (
            self.axis_group(round, 0, b_bs),
            self.axis_group(round, 1, b_ue),
            self.axis_group(round, 2, b_ris),
        )
    }

    /// Which bin of a round contains the given block.
    pub fn bin_of(&self, round: usize, block: BeamTuple) -> usize {
        let [_, gu, gm] = self.groups_per_axis();
        let find = |axis: usize, idx: usize| {
            let pos = self
                .axis_perm(round, axis)
                .iter()
                .position(|&x| x == idx)
                .expect("index within axis size");
            pos / self.groups[axis]
        };
        (find(0, block.bs) * gu + find(1, block.ue)) * gm + find(2, block.ris)
    }

    /// All blocks sensed by one bin. Intended for small test oracles.
    pub fn blocks_in_bin(&self, round: usize, bin: usize) -> Vec<BeamTuple> {
        let (bs, ue, ris) = self.bin_groups(round, bin);
        let mut out = Vec::with_capacity(bs.len() * ue.len() * ris.len());
        for &i in bs {
            for &j in ue {
                for &k in ris {
                    out.push(BeamTuple { bs: i, ue: j, ris: k });
                }
            }
        }
        out
    }
}

/// Draws `rounds` independent uniform permutations per axis.
pub fn make_binning_plan<R: Rng + ?Sized>(
    cfg: &SystemConfig,
    rounds: usize,
    rng: &mut R,
) -> Result<BinningPlan> {
    cfg.validate_binning()?;
    let m = cfg.m();
    let mut plan_rounds = Vec::with_capacity(rounds);
    for _ in 0..rounds {
        let mut bs: Vec<usize> = (0..cfg.n_t).collect();
        let mut ue: Vec<usize> = (0..cfg.n_r).collect();
        let mut ris: Vec<usize> = (0..m).collect();
        bs.shuffle(rng);
        ue.shuffle(rng);
        ris.shuffle(rng);
        plan_rounds.push(BinningRound { bs, ue, ris });
    }
    Ok(BinningPlan {
        dims: [cfg.n_t, cfg.n_r, m],
        groups: [cfg.r_bs, cfg.r_ue, cfg.q],
        rounds: plan_rounds,
    })
}

/// Decoded block plus the size of the ambiguity set it was drawn from.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct DecodeOutcome {
    pub chosen: BeamTuple,
    pub candidates_remaining: u64,
}

/// Per-axis intersection of the winning groups across rounds. Sets may be
/// empty when winners are inconsistent (possible under noise); callers
/// decide how to fall back. Because bins are product sets, the product of
/// these per-axis sets equals the intersection of the winning block sets.
pub fn candidate_sets(plan: &BinningPlan, winners: &[usize]) -> Result<[Vec<usize>; 3]> {
    if winners.len() != plan.round_count() {
        return Err(Error::InvalidArgument(alloc::format!(
            "expected {} winners, got {}",
            plan.round_count(),
            winners.len()
        )));
    }
    let mut sets: [Vec<usize>; 3] = [Vec::new(), Vec::new(), Vec::new()];
    for (axis, set) in sets.iter_mut().enumerate() {
        let mut count = vec![0u32; plan.dims[axis]];
        let [_, gu, gm] = plan.groups_per_axis();
        for (round, &bin) in winners.iter().enumerate() {
            let g = match axis {
                0 => bin / (gm * gu),
                1 => (bin / gm) % gu,
                _ => bin % gm,
            };
            for &idx in plan.axis_group(round, axis, g) {
                count[idx] += 1;
            }
        }
        *set = (0..plan.dims[axis])
            .filter(|&i| count[i] as usize == plan.round_count())
            .collect();
    }
    Ok(sets)
}

/// Recovers the dominant block as the common element of the winning bins.
///
/// If several blocks survive, one is drawn uniformly at random. If an axis
/// intersection is empty (only possible with noisy winners) that axis falls
/// back to its most frequent winning group, ties to the lexicographically
/// smallest group.
pub fn intersect_decode<R: Rng + ?Sized>(
    plan: &BinningPlan,
    winners: &[usize],
    rng: &mut R,
) -> Result<DecodeOutcome> {
    let mut sets = candidate_sets(plan, winners)?;
    for (axis, set) in sets.iter_mut().enumerate() {
        if set.is_empty() {
            *set = majority_group(plan, winners, axis);
        }
    }
    let candidates = sets.iter().map(|s| s.len() as u64).product::<u64>();
    let pick = |rng: &mut R, s: &[usize]| {
        if s.len() == 1 {
            s[0]
        } else {
            s[rng.random_range(0..s.len())]
        }
    };
    let chosen = BeamTuple {
        bs: pick(rng, &sets[0]),
        ue: pick(rng, &sets[1]),
        ris: pick(rng, &sets[2]),
    };
    Ok(DecodeOutcome {
        chosen,
        candidates_remaining: candidates,
    })
}

fn majority_group(plan: &BinningPlan, winners: &[usize], axis: usize) -> Vec<usize> {
    let [_, gu, gm] = plan.groups_per_axis();
    let mut groups: Vec<Vec<usize>> = winners
        .iter()
        .enumerate()
        .map(|(round, &bin)| {
            let g = match axis {
                0 => bin / (gm * gu),
                1 => (bin / gm) % gu,
                _ => bin % gm,
            };
            let mut grp = plan.axis_group(round, axis, g).to_vec();
            grp.sort_unstable();
            grp
        })
        .collect();
    groups.sort();
    // Longest run of an identical group wins; after sorting, ties already
    // resolve to the lexicographically smallest.
    let mut best: &[usize] = &groups[0];
    let mut best_count = 0usize;
    let mut i = 0;
    while i < groups.len() {
        let mut j = i;
        while j < groups.len() && groups[j] == groups[i] {
            j += 1;
        }
        if j - i > best_count {
            best_count = j - i;
            best = &groups[i];
        }
        i = j;
    }
    best.to_vec()
}
