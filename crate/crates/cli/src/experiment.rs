//! Monte Carlo experiment runners and CSV output.
//!
//! Trials are independent work items: every random stream is derived from
//! `(master seed, experiment tag, trial index, ...)`, results are collected
//! in trial order, and aggregation is a deterministic fold, so the emitted
//! CSV is byte-identical no matter how many worker threads run.

use anyhow::{bail, ensure, Context, Result};
use rayon::prelude::*;

use risbt::analysis::{overhead, predict_success, required_rounds};
use risbt::rate::{achievable_rate, full_csi_baseline, tuple_rate};
use risbt::rng::stream_rng;
use risbt::training::{combinatorial_trial, Method};
use risbt::{
    draw_channel_with, exhaustive_search, hierarchical_search, multidirectional_search, BeamTuple,
    ChannelConfig, CodebookSet, HierarchicalCodebookSet, SoundingConfig, TrainingResult,
};

use crate::config::{FileConfig, MethodSel};

const TAG_BA_CHANNEL: u64 = 0x01;
const TAG_BA_METHOD: u64 = 0x02;
const TAG_COMBINATORIAL: u64 = 0x03;
const TAG_RATE_CHANNEL: u64 = 0x11;
const TAG_RATE_TRAIN: u64 = 0x12;

/// Iteration cap for the alternating-maximization baseline.
const FULL_CSI_ITERATIONS: usize = 200;

/// One experiment invocation: file configuration plus CLI overrides.
#[derive(Debug, Clone)]
pub struct ExperimentSpec {
    pub file: FileConfig,
    pub master_seed: u64,
    /// Worker threads; 0 means one per core.
    pub workers: usize,
    pub noiseless: bool,
    /// Perfect-alignment runs only: skip channel matrices entirely and use
    /// ideal bin identification (valid for the noiseless on-grid regime).
    pub combinatorial: bool,
}

impl ExperimentSpec {
    pub fn new(file: FileConfig, master_seed: u64) -> Self {
        ExperimentSpec {
            file,
            master_seed,
            workers: 0,
            noiseless: false,
            combinatorial: false,
        }
    }

    fn channel_config(&self, on_grid_default: bool) -> ChannelConfig {
        let f = &self.file;
        ChannelConfig {
            n_t: f.sys.n_t,
            n_r: f.sys.n_r,
            m_y: f.sys.m_y,
            m_z: f.sys.m_z,
            rician_br_db: f.rician_br_db,
            rician_ru_db: f.rician_ru_db,
            nlos_paths_br: f.nlos_paths_br,
            nlos_paths_ru: f.nlos_paths_ru,
            on_grid: f.on_grid.unwrap_or(on_grid_default),
        }
    }

    fn sounding(&self, snr_db: f64) -> SoundingConfig {
        if self.noiseless {
            SoundingConfig::noiseless()
        } else {
            SoundingConfig::from_snr_db(snr_db)
        }
    }
}

/// One aggregate CSV row.
#[derive(Debug, Clone, PartialEq)]
pub struct ResultRow {
    pub method: String,
    pub n_t: usize,
    pub n_r: usize,
    pub m: usize,
    pub r_bs: usize,
    pub r_ue: usize,
    pub q: usize,
    pub rounds: usize,
    pub snr_db: f64,
    pub slots_used: u64,
    pub metric: &'static str,
    pub value: f64,
    pub stderr: f64,
    pub trials: u64,
}

pub const CSV_HEADER: &str =
    "method,n_t,n_r,m,r_bs,r_ue,q,rounds,snr_db,slots_used,metric,value,stderr,trials";

/// Six significant digits; plain decimal inside a sane range, scientific
/// outside it.
pub fn fmt_sig6(x: f64) -> String {
    if x == 0.0 {
        return "0.000000".into();
    }
    if !x.is_finite() {
        return format!("{x}");
    }
    let ax = x.abs();
    if !(1e-4..1e6).contains(&ax) {
        return format!("{x:.5e}");
    }
    let exp = ax.log10().floor() as i32;
    let decimals = (5 - exp).max(0) as usize;
    format!("{x:.decimals$}")
}

pub fn rows_to_csv(rows: &[ResultRow]) -> String {
    let mut out = String::from(CSV_HEADER);
    out.push('\n');
    for r in rows {
        out.push_str(&format!(
            "{},{},{},{},{},{},{},{},{},{},{},{},{},{}\n",
            r.method,
            r.n_t,
            r.n_r,
            r.m,
            r.r_bs,
            r.r_ue,
            r.q,
            r.rounds,
            fmt_sig6(r.snr_db),
            r.slots_used,
            r.metric,
            fmt_sig6(r.value),
            fmt_sig6(r.stderr),
            r.trials
        ));
    }
    out
}

fn thread_pool(workers: usize) -> Result<rayon::ThreadPool> {
    rayon::ThreadPoolBuilder::new()
        .num_threads(workers)
        .build()
        .context("building worker pool")
}

fn core_method(sel: MethodSel) -> Option<Method> {
    match sel {
        MethodSel::Exhaustive => Some(Method::Exhaustive),
        MethodSel::Hierarchical => Some(Method::Hierarchical),
        MethodSel::Multidirectional => Some(Method::Multidirectional),
        MethodSel::FullCsi => None,
    }
}

fn draw_truth(sys: &risbt::SystemConfig, rng: &mut impl rand::Rng) -> BeamTuple {
    BeamTuple {
        bs: rng.random_range(0..sys.n_t),
        ue: rng.random_range(0..sys.n_r),
        ris: rng.random_range(0..sys.m()),
    }
}

fn base_row(spec: &ExperimentSpec, method: &str, snr_db: f64) -> ResultRow {
    let sys = &spec.file.sys;
    ResultRow {
        method: method.into(),
        n_t: sys.n_t,
        n_r: sys.n_r,
        m: sys.m(),
        r_bs: sys.r_bs,
        r_ue: sys.r_ue,
        q: sys.q,
        rounds: sys.rounds,
        snr_db,
        slots_used: 0,
        metric: "",
        value: 0.0,
        stderr: 0.0,
        trials: spec.file.trials,
    }
}

/// Perfect beam-alignment probability: fraction of trials whose chosen
/// tuple equals the ground truth exactly. Requires on-grid channels.
pub fn run_ba_probability(spec: &ExperimentSpec) -> Result<Vec<ResultRow>> {
    let file = &spec.file;
    let sys = file.sys;
    ensure!(file.trials >= 1, "trials must be at least 1");
    ensure!(!file.methods.is_empty(), "methods must not be empty");
    ensure!(
        file.on_grid.unwrap_or(true),
        "perfect-alignment probability requires on-grid channels"
    );
    if file.methods.contains(&MethodSel::FullCsi) {
        bail!("full-csi does not select a grid tuple; it has no alignment probability");
    }

    let snr_db = file.snr_db_list[0];
    let pool = thread_pool(spec.workers)?;

    if spec.combinatorial {
        ensure!(
            file.methods == vec![MethodSel::Multidirectional],
            "combinatorial mode applies to the multidirectional method only"
        );
        sys.validate_binning()?;
        let seed = spec.master_seed;
        let hits: Vec<bool> = pool.install(|| {
            (0..file.trials)
                .into_par_iter()
                .map(|t| {
                    let mut rng = stream_rng(seed, &[TAG_COMBINATORIAL, t]);
                    let truth = draw_truth(&sys, &mut rng);
                    let r = combinatorial_trial(&sys, sys.rounds, truth, &mut rng)
                        .expect("validated configuration");
                    r.chosen == truth
                })
                .collect()
        });
        let k = hits.iter().filter(|&&h| h).count() as u64;
        let p = k as f64 / file.trials as f64;
        let mut row = base_row(spec, MethodSel::Multidirectional.label(), snr_db);
        row.slots_used = overhead(Method::Multidirectional, &sys, sys.rounds)?.slots;
        row.metric = "perfect_ba_rate";
        row.value = p;
        row.stderr = (p * (1.0 - p) / file.trials as f64).sqrt();
        return Ok(vec![row]);
    }

    let chan_cfg = spec.channel_config(true);
    ensure!(chan_cfg.on_grid, "perfect-alignment probability requires on-grid channels");
    let books = CodebookSet::for_config(&sys)?;
    let needs_hier = file.methods.contains(&MethodSel::Hierarchical);
    let hier = if needs_hier {
        Some(HierarchicalCodebookSet::for_config(&sys)?)
    } else {
        None
    };

    let seed = spec.master_seed;
    let per_trial: Vec<(Vec<bool>, Vec<u64>)> = pool.install(|| {
        (0..file.trials)
            .into_par_iter()
            .map(|t| -> Result<(Vec<bool>, Vec<u64>)> {
                let mut ch_rng = stream_rng(seed, &[TAG_BA_CHANNEL, t]);
                let ch = draw_channel_with(&chan_cfg, &books, &mut ch_rng)?;
                let mut hits = Vec::with_capacity(file.methods.len());
                let mut slots = Vec::with_capacity(file.methods.len());
                for (mi, &sel) in file.methods.iter().enumerate() {
                    let mut rng = stream_rng(seed, &[TAG_BA_METHOD, t, mi as u64]);
                    let scfg = spec.sounding(snr_db);
                    let res: TrainingResult = match sel {
                        MethodSel::Exhaustive => exhaustive_search(&ch, &books, &scfg, &mut rng)?,
                        MethodSel::Hierarchical => {
                            hierarchical_search(&ch, hier.as_ref().unwrap(), &scfg, &mut rng)?
                        }
                        MethodSel::Multidirectional => multidirectional_search(
                            &ch,
                            &books,
                            &sys,
                            sys.rounds,
                            &scfg,
                            file.ris_beam_mode,
                            &mut rng,
                        )?,
                        MethodSel::FullCsi => unreachable!("rejected above"),
                    };
                    hits.push(res.chosen == ch.truth);
                    slots.push(res.slots_used);
                }
                Ok((hits, slots))
            })
            .collect::<Result<Vec<_>>>()
    })?;

    let mut rows = Vec::with_capacity(file.methods.len());
    for (mi, &sel) in file.methods.iter().enumerate() {
        let k = per_trial.iter().filter(|(h, _)| h[mi]).count() as u64;
        let p = k as f64 / file.trials as f64;
        let expected = overhead(core_method(sel).unwrap(), &sys, sys.rounds)?.slots;
        for (h, s) in &per_trial {
            debug_assert_eq!(h.len(), file.methods.len());
            ensure!(
                s[mi] == expected,
                "slot accounting diverged from the overhead formula for {}",
                sel.label()
            );
        }
        let mut row = base_row(spec, sel.label(), snr_db);
        row.slots_used = expected;
        row.metric = "perfect_ba_rate";
        row.value = p;
        row.stderr = (p * (1.0 - p) / file.trials as f64).sqrt();
        rows.push(row);
    }
    Ok(rows)
}

struct RateMethodRow {
    label: String,
    sel: MethodSel,
    repetitions: u32,
    slots: u64,
}

fn rate_method_rows(spec: &ExperimentSpec) -> Result<Vec<RateMethodRow>> {
    let file = &spec.file;
    let sys = &file.sys;
    let mut rows = Vec::new();
    for &sel in &file.methods {
        match sel {
            MethodSel::FullCsi => rows.push(RateMethodRow {
                label: sel.label().into(),
                sel,
                repetitions: 1,
                slots: 0,
            }),
            MethodSel::Hierarchical => {
                let native = overhead(Method::Hierarchical, sys, sys.rounds)?.slots;
                rows.push(RateMethodRow {
                    label: sel.label().into(),
                    sel,
                    repetitions: 1,
                    slots: native,
                });
                if let Some(budget) = file.hier_budget_slots {
                    // Noncoherent energy accumulation: as many repetitions
                    // per probe as the budget allows.
                    let reps = (budget / native).max(1) as u32;
                    rows.push(RateMethodRow {
                        label: "hierarchical-boosted".into(),
                        sel,
                        repetitions: reps,
                        slots: native * reps as u64,
                    });
                }
            }
            _ => {
                let slots = overhead(core_method(sel).unwrap(), sys, sys.rounds)?.slots;
                rows.push(RateMethodRow {
                    label: sel.label().into(),
                    sel,
                    repetitions: 1,
                    slots,
                });
            }
        }
    }
    Ok(rows)
}

/// Average achievable rate versus SNR. Training runs at each operating SNR
/// and the selected beams are evaluated at that same SNR; the full-CSI
/// baseline's beams do not depend on SNR and are computed once per trial.
pub fn run_rate_curve(spec: &ExperimentSpec) -> Result<Vec<ResultRow>> {
    let file = &spec.file;
    let sys = file.sys;
    ensure!(file.trials >= 1, "trials must be at least 1");
    ensure!(!file.methods.is_empty(), "methods must not be empty");
    ensure!(!file.snr_db_list.is_empty(), "snr_db_list must not be empty");

    let chan_cfg = spec.channel_config(false);
    let books = CodebookSet::for_config(&sys)?;
    let needs_hier = file.methods.contains(&MethodSel::Hierarchical);
    let hier = if needs_hier {
        Some(HierarchicalCodebookSet::for_config(&sys)?)
    } else {
        None
    };
    let method_rows = rate_method_rows(spec)?;
    let n_rows = method_rows.len();
    let n_snr = file.snr_db_list.len();

    let seed = spec.master_seed;
    let pool = thread_pool(spec.workers)?;
    let per_trial: Vec<Vec<f64>> = pool.install(|| {
        (0..file.trials)
            .into_par_iter()
            .map(|t| -> Result<Vec<f64>> {
                let mut ch_rng = stream_rng(seed, &[TAG_RATE_CHANNEL, t]);
                let ch = draw_channel_with(&chan_cfg, &books, &mut ch_rng)?;
                let mut rates = vec![0.0f64; n_rows * n_snr];
                for (ri, row) in method_rows.iter().enumerate() {
                    if row.sel == MethodSel::FullCsi {
                        let b = full_csi_baseline(&ch, &books, 0.0, FULL_CSI_ITERATIONS)?;
                        for (si, &snr) in file.snr_db_list.iter().enumerate() {
                            rates[ri * n_snr + si] =
                                achievable_rate(&ch, &b.f, &b.v, &b.w, snr)?;
                        }
                        continue;
                    }
                    for (si, &snr) in file.snr_db_list.iter().enumerate() {
                        let scfg = spec.sounding(snr).with_repetitions(row.repetitions);
                        let mut rng =
                            stream_rng(seed, &[TAG_RATE_TRAIN, t, ri as u64, si as u64]);
                        let res = match row.sel {
                            MethodSel::Exhaustive => {
                                exhaustive_search(&ch, &books, &scfg, &mut rng)?
                            }
                            MethodSel::Hierarchical => {
                                hierarchical_search(&ch, hier.as_ref().unwrap(), &scfg, &mut rng)?
                            }
                            MethodSel::Multidirectional => multidirectional_search(
                                &ch,
                                &books,
                                &sys,
                                sys.rounds,
                                &scfg,
                                file.ris_beam_mode,
                                &mut rng,
                            )?,
                            MethodSel::FullCsi => unreachable!(),
                        };
                        ensure!(
                            res.slots_used == row.slots,
                            "slot accounting diverged for {}",
                            row.label
                        );
                        rates[ri * n_snr + si] = tuple_rate(&ch, &books, res.chosen, snr)?;
                    }
                }
                Ok(rates)
            })
            .collect::<Result<Vec<_>>>()
    })?;

    let n = file.trials as f64;
    let mut rows = Vec::with_capacity(n_rows * n_snr);
    for (ri, mrow) in method_rows.iter().enumerate() {
        for (si, &snr) in file.snr_db_list.iter().enumerate() {
            let values = per_trial.iter().map(|r| r[ri * n_snr + si]);
            let mean = values.clone().sum::<f64>() / n;
            let var = values.map(|x| (x - mean) * (x - mean)).sum::<f64>() / (n - 1.0).max(1.0);
            let mut row = base_row(spec, &mrow.label, snr);
            row.slots_used = mrow.slots;
            row.metric = "avg_rate_bps_hz";
            row.value = mean;
            row.stderr = (var / n).sqrt();
            rows.push(row);
        }
    }
    Ok(rows)
}

/// CSV for the closed-form prediction: expected impostors, both success
/// approximations, and the round count needed for `target`.
pub fn predict_csv(spec: &ExperimentSpec, target: f64) -> Result<String> {
    let sys = spec.file.sys;
    let p = predict_success(&sys, sys.rounds)?;
    let l = required_rounds(&sys, target)?;
    Ok(format!(
        "lambda,p_union,p_poisson,required_L_for_target\n{},{},{},{}\n",
        fmt_sig6(p.lambda),
        fmt_sig6(p.p_union),
        fmt_sig6(p.p_poisson),
        l.rounds
    ))
}
