//! Acceptance suite. Each test prints one `ACCEPTANCE <id>: PASS/FAIL` line
//! (visible with `--nocapture`) and enforces its tolerance with asserts.
//!
//! Criterion 5c (multidirectional above native hierarchical at every SNR of
//! the reduced-scale rate sweep) is expected to fail and is documented where
//! it is asserted: at this reduced scale the multidirectional search is
//! capped by its decoding ambiguity while the hierarchical search becomes
//! reliable at high SNR, so the ordering claim cannot hold there.

use std::sync::OnceLock;
use std::time::Instant;

use risbt::analysis::{overhead, predict_success};
use risbt::rng::stream_rng;
use risbt::training::{combinatorial_trial, Method};
use risbt::{
    cascaded_gain, draw_channel_with, BeamTuple, ChannelConfig, CodebookSet,
    HierarchicalCodebookSet, MultiBeamMode, SoundingConfig, SystemConfig,
};
use risbt_cli::config::{FileConfig, MethodSel};
use risbt_cli::demo::{demo_default_config, run_decode_demo};
use risbt_cli::experiment::{rows_to_csv, run_ba_probability, run_rate_curve, ExperimentSpec, ResultRow};

fn table_sys(r_bs: usize, r_ue: usize, q: usize, rounds: usize) -> SystemConfig {
    SystemConfig {
        n_t: 32,
        n_r: 32,
        m_y: 16,
        m_z: 16,
        r_bs,
        r_ue,
        q,
        rounds,
        branching: 2,
    }
}

// ---------------------------------------------------------------- criterion 1

#[test]
fn acceptance_1_overhead_exactness() {
    let start = Instant::now();
    let exh = overhead(Method::Exhaustive, &table_sys(4, 4, 32, 4), 4).unwrap();
    assert_eq!(exh.slots, 262_144);
    let hier = overhead(Method::Hierarchical, &table_sys(4, 4, 32, 4), 4).unwrap();
    assert_eq!(hier.slots, 46);
    let md1 = overhead(Method::Multidirectional, &table_sys(8, 4, 16, 4), 4).unwrap();
    assert_eq!(md1.slots, 2048);
    let md2 = overhead(Method::Multidirectional, &table_sys(4, 4, 32, 4), 4).unwrap();
    assert_eq!(md2.slots, 2048);
    let md3 = overhead(Method::Multidirectional, &table_sys(4, 4, 32, 5), 5).unwrap();
    assert_eq!(md3.slots, 2560);
    let elapsed = start.elapsed();
    assert!(elapsed.as_secs_f64() < 1.0, "took {elapsed:?}");
    println!(
        "ACCEPTANCE 1: PASS - overheads 262144 / 46 / 2048 / 2048 / 2560 in {elapsed:?}"
    );
}

// ------------------------------------------------------- criteria 2 and 3

struct TableOnePoint {
    label: &'static str,
    published: f64,
    empirical: f64,
    predicted: f64,
}

fn table_one_points() -> &'static Vec<TableOnePoint> {
    static POINTS: OnceLock<Vec<TableOnePoint>> = OnceLock::new();
    POINTS.get_or_init(|| {
        let cases = [
            ("R=(8,4,16) L=4", table_sys(8, 4, 16, 4), 0.9576),
            ("R=(4,4,32) L=4", table_sys(4, 4, 32, 4), 0.9700),
            ("R=(4,4,32) L=5", table_sys(4, 4, 32, 5), 0.9964),
        ];
        cases
            .into_iter()
            .map(|(label, sys, published)| {
                let mut file = FileConfig::default();
                file.sys = sys;
                file.trials = 100_000;
                let mut spec = ExperimentSpec::new(file, 1);
                spec.combinatorial = true;
                spec.noiseless = true;
                let rows = run_ba_probability(&spec).unwrap();
                TableOnePoint {
                    label,
                    published,
                    empirical: rows[0].value,
                    predicted: predict_success(&sys, sys.rounds).unwrap().p_poisson,
                }
            })
            .collect()
    })
}

#[test]
fn acceptance_2_table_one_replication() {
    for p in table_one_points() {
        let diff = (p.empirical - p.published).abs();
        assert!(
            diff <= 0.005,
            "{}: empirical {:.5} vs published {:.4} (diff {:.4})",
            p.label,
            p.empirical,
            p.published,
            diff
        );
    }
    let summary: Vec<String> = table_one_points()
        .iter()
        .map(|p| format!("{:.2}%", p.empirical * 100.0))
        .collect();
    println!(
        "ACCEPTANCE 2: PASS - perfect-alignment rates {} vs published 95.76/97.00/99.64 (+-0.5pp)",
        summary.join("/")
    );
}

#[test]
fn acceptance_3_analytic_vs_empirical() {
    // The three published operating points, against the same empirical runs.
    for p in table_one_points() {
        let diff = (p.empirical - p.predicted).abs();
        assert!(
            diff <= 0.003,
            "{}: empirical {:.5} vs predicted {:.5} (diff {:.5})",
            p.label,
            p.empirical,
            p.predicted,
            diff
        );
    }
    // A ten-setup matrix of small cubes at 1e5 noiseless trials each.
    let cases: [(usize, usize, usize, usize, usize, usize, usize, usize); 10] = [
        (8, 4, 4, 2, 4, 2, 2, 4),
        (8, 4, 4, 2, 4, 2, 2, 5),
        (8, 4, 4, 2, 2, 2, 2, 4),
        (16, 4, 4, 4, 4, 2, 4, 4),
        (16, 8, 4, 4, 4, 4, 4, 4),
        (8, 8, 4, 2, 2, 2, 2, 5),
        (16, 4, 4, 2, 8, 2, 2, 5),
        (16, 16, 4, 4, 4, 4, 4, 4),
        (32, 4, 4, 2, 4, 2, 2, 4),
        (16, 8, 8, 8, 4, 2, 16, 4),
    ];
    let trials = 100_000u64;
    for (ci, (n_t, n_r, m_y, m_z, r_bs, r_ue, q, rounds)) in cases.into_iter().enumerate() {
        let sys = SystemConfig {
            n_t,
            n_r,
            m_y,
            m_z,
            r_bs,
            r_ue,
            q,
            rounds,
            branching: 2,
        };
        let mut hits = 0u64;
        for t in 0..trials {
            let mut rng = stream_rng(5000 + ci as u64, &[t]);
            let truth = BeamTuple {
                bs: rand::Rng::random_range(&mut rng, 0..n_t),
                ue: rand::Rng::random_range(&mut rng, 0..n_r),
                ris: rand::Rng::random_range(&mut rng, 0..m_y * m_z),
            };
            let r = combinatorial_trial(&sys, rounds, truth, &mut rng).unwrap();
            hits += (r.chosen == truth) as u64;
        }
        let empirical = hits as f64 / trials as f64;
        let predicted = predict_success(&sys, rounds).unwrap().p_poisson;
        let se = (empirical * (1.0 - empirical) / trials as f64).sqrt();
        let tol = (0.01f64).max(3.0 * se);
        assert!(
            (empirical - predicted).abs() <= tol,
            "matrix case {ci}: empirical {empirical:.5} vs predicted {predicted:.5} (tol {tol:.5})"
        );
    }
    println!(
        "ACCEPTANCE 3: PASS - prediction within 0.3pp on the published points and within max(1pp, 3se) on a 10-setup matrix"
    );
}

// ---------------------------------------------------------------- criterion 4

#[test]
fn acceptance_4_quadratic_power_scaling() {
    // LOS-only aligned on-grid receive power across M in {16, 64, 256}.
    let mut powers = Vec::new();
    for (m_y, m_z) in [(4usize, 4usize), (8, 8), (16, 16)] {
        let cfg = ChannelConfig {
            n_t: 8,
            n_r: 2,
            m_y,
            m_z,
            rician_br_db: f64::INFINITY,
            rician_ru_db: f64::INFINITY,
            nlos_paths_br: 0,
            nlos_paths_ru: 0,
            on_grid: true,
        };
        let books = CodebookSet::for_dims(8, 2, m_y, m_z).unwrap();
        let ch = draw_channel_with(&cfg, &books, &mut stream_rng(400, &[m_y as u64])).unwrap();
        let t = ch.truth;
        let gain = cascaded_gain(
            &ch,
            books.bs.column(t.bs),
            books.ris.column(t.ris),
            books.ue.column(t.ue),
        )
        .unwrap();
        powers.push(gain.norm_sqr());
    }
    let ms = [16.0f64, 64.0, 256.0];
    for i in 0..3 {
        for j in 0..3 {
            let expect = (ms[i] / ms[j]) * (ms[i] / ms[j]);
            let got = powers[i] / powers[j];
            assert!(
                (got / expect - 1.0).abs() < 1e-6,
                "M {} vs {}: power ratio {got} expected {expect}",
                ms[i],
                ms[j]
            );
        }
    }
    println!(
        "ACCEPTANCE 4: PASS - receive power grows as M^2 across M = 16/64/256 (ratios exact to 1e-6)"
    );
}

// ---------------------------------------------------------------- criterion 5

fn reduced_scale_file() -> FileConfig {
    let mut file = FileConfig::default();
    file.sys = SystemConfig {
        n_t: 32,
        n_r: 1,
        m_y: 8,
        m_z: 8,
        r_bs: 8,
        r_ue: 1,
        q: 16,
        rounds: 4,
        branching: 2,
    };
    file.rician_br_db = 13.2;
    file.rician_ru_db = 13.2;
    file.nlos_paths_br = 3;
    file.nlos_paths_ru = 3;
    file.snr_db_list = vec![-15.0, -10.0, -5.0, 0.0, 5.0];
    file.methods = vec![
        MethodSel::FullCsi,
        MethodSel::Exhaustive,
        MethodSel::Multidirectional,
        MethodSel::Hierarchical,
    ];
    file.trials = 2000;
    file.ris_beam_mode = MultiBeamMode::PhaseOnly;
    file.hier_budget_slots = Some(64);
    file
}

fn reduced_scale_rows() -> &'static Vec<ResultRow> {
    static ROWS: OnceLock<Vec<ResultRow>> = OnceLock::new();
    ROWS.get_or_init(|| {
        let spec = ExperimentSpec::new(reduced_scale_file(), 11);
        run_rate_curve(&spec).unwrap()
    })
}

fn curve(rows: &[ResultRow], method: &str) -> Vec<(f64, f64, f64)> {
    rows.iter()
        .filter(|r| r.method == method)
        .map(|r| (r.snr_db, r.value, r.stderr))
        .collect()
}

/// `a >= b` at every SNR within two standard errors of the difference.
fn assert_dominates(rows: &[ResultRow], a: &str, b: &str) -> Result<(), String> {
    let ca = curve(rows, a);
    let cb = curve(rows, b);
    let mut failures = Vec::new();
    for ((snr, va, sa), (_, vb, sb)) in ca.iter().zip(&cb) {
        let slack = 2.0 * (sa * sa + sb * sb).sqrt();
        if va - vb < -slack {
            failures.push(format!("{snr} dB: {a} {va:.3} vs {b} {vb:.3}"));
        }
    }
    if failures.is_empty() {
        Ok(())
    } else {
        Err(failures.join("; "))
    }
}

#[test]
fn acceptance_5a_full_csi_bounds_exhaustive() {
    let rows = reduced_scale_rows();
    assert_dominates(rows, "full-csi", "exhaustive").unwrap();
    println!("ACCEPTANCE 5a: PASS - full-csi >= exhaustive at every SNR");
}

#[test]
fn acceptance_5b_exhaustive_bounds_multidirectional() {
    let rows = reduced_scale_rows();
    assert_dominates(rows, "exhaustive", "multidirectional").unwrap();
    println!("ACCEPTANCE 5b: PASS - exhaustive >= multidirectional at every SNR");
}

#[test]
fn acceptance_5c_multidirectional_bounds_native_hierarchical() {
    // Expected to fail at the upper SNR points of this reduced scale: with
    // beam groups at one quarter of each axis (instead of the published
    // scale's one sixteenth), four scanning rounds leave the
    // multidirectional decoder an ambiguity ceiling of ~86% success, while
    // the hierarchical search approaches 100% once its widest beams clear
    // the noise floor. The inequality is asserted as stated; see the rate
    // rows for the measured gap.
    let rows = reduced_scale_rows();
    match assert_dominates(rows, "multidirectional", "hierarchical") {
        Ok(()) => {
            println!("ACCEPTANCE 5c: PASS - multidirectional >= hierarchical at every SNR")
        }
        Err(msg) => {
            println!("ACCEPTANCE 5c: FAIL - {msg}");
            panic!(
                "multidirectional >= hierarchical(native) does not hold at this reduced scale: {msg}"
            );
        }
    }
}

#[test]
fn acceptance_5d_rate_curves_are_monotone_in_snr() {
    let rows = reduced_scale_rows();
    for method in [
        "full-csi",
        "exhaustive",
        "multidirectional",
        "hierarchical",
        "hierarchical-boosted",
    ] {
        let c = curve(rows, method);
        assert_eq!(c.len(), 5, "missing rows for {method}");
        for pair in c.windows(2) {
            let (snr0, v0, s0) = pair[0];
            let (snr1, v1, s1) = pair[1];
            let slack = 2.0 * (s0 * s0 + s1 * s1).sqrt();
            assert!(
                v1 >= v0 - slack,
                "{method}: rate drops from {v0:.3} ({snr0} dB) to {v1:.3} ({snr1} dB)"
            );
        }
    }
    println!("ACCEPTANCE 5d: PASS - all five rate curves are non-decreasing in SNR");
}

#[test]
fn acceptance_5e_boosted_hierarchical_dominates_native() {
    let rows = reduced_scale_rows();
    assert_dominates(rows, "hierarchical-boosted", "hierarchical").unwrap();
    // Strict improvement where the budget actually helps (below 0 dB).
    let native = curve(rows, "hierarchical");
    let boosted = curve(rows, "hierarchical-boosted");
    assert!(
        boosted[0].1 > native[0].1 && boosted[1].1 > native[1].1,
        "no low-SNR improvement: {boosted:?} vs {native:?}"
    );
    println!(
        "ACCEPTANCE 5e: PASS - repetition-boosted hierarchical dominates its native budget at every SNR"
    );
}

// ---------------------------------------------------------------- criterion 6

#[test]
fn acceptance_6_property_suites() {
    // Codebook orthonormality and unit modulus.
    let books = CodebookSet::for_dims(16, 8, 4, 4).unwrap();
    for i in 0..16 {
        for j in 0..16 {
            let g: risbt::Complex64 = books
                .bs
                .column(i)
                .iter()
                .zip(books.bs.column(j))
                .map(|(a, b)| a.conj() * b)
                .sum();
            let expect = if i == j { 1.0 } else { 0.0 };
            assert!((g.norm() - expect).abs() < 1e-10);
        }
    }
    for k in 0..16 {
        for z in books.ris.column(k) {
            assert!((z.norm() - 1.0).abs() < 1e-10);
        }
    }

    // Binning partition on a random plan.
    let sys = SystemConfig {
        n_t: 16,
        n_r: 8,
        m_y: 4,
        m_z: 4,
        r_bs: 4,
        r_ue: 2,
        q: 4,
        rounds: 3,
        branching: 2,
    };
    let plan = risbt::binning::make_binning_plan(&sys, 3, &mut stream_rng(600, &[])).unwrap();
    for round in 0..3 {
        let mut seen = vec![false; sys.tuple_count()];
        for bin in 0..plan.bins_per_round() {
            for b in plan.blocks_in_bin(round, bin) {
                let flat = b.flat_index(sys.n_r, sys.m());
                assert!(!seen[flat]);
                seen[flat] = true;
            }
        }
        assert!(seen.iter().all(|&s| s));
    }

    // Decoder equals the brute-force block intersection on a 16x16x16 cube.
    let cube = SystemConfig {
        n_t: 16,
        n_r: 16,
        m_y: 4,
        m_z: 4,
        r_bs: 4,
        r_ue: 4,
        q: 4,
        rounds: 3,
        branching: 2,
    };
    for seed in 0..50 {
        let mut rng = stream_rng(601, &[seed]);
        let plan = risbt::binning::make_binning_plan(&cube, 3, &mut rng).unwrap();
        let winners: Vec<usize> = (0..3)
            .map(|_| rand::Rng::random_range(&mut rng, 0..plan.bins_per_round()))
            .collect();
        let sets = risbt::binning::candidate_sets(&plan, &winners).unwrap();
        let mut from_axes: Vec<usize> = Vec::new();
        for &bs in &sets[0] {
            for &ue in &sets[1] {
                for &ris in &sets[2] {
                    from_axes.push(BeamTuple { bs, ue, ris }.flat_index(16, 16));
                }
            }
        }
        let mut brute: Vec<usize> = plan
            .blocks_in_bin(0, winners[0])
            .into_iter()
            .map(|b| b.flat_index(16, 16))
            .collect();
        for (round, &w) in winners.iter().enumerate().skip(1) {
            let keep: std::collections::HashSet<usize> = plan
                .blocks_in_bin(round, w)
                .into_iter()
                .map(|b| b.flat_index(16, 16))
                .collect();
            brute.retain(|b| keep.contains(b));
        }
        from_axes.sort_unstable();
        brute.sort_unstable();
        assert_eq!(from_axes, brute, "seed {seed}");
    }

    // Noiseless exhaustive alignment is perfect over 1e4 on-grid trials.
    let mut file = FileConfig::default();
    file.sys = SystemConfig {
        n_t: 8,
        n_r: 4,
        m_y: 4,
        m_z: 2,
        r_bs: 4,
        r_ue: 2,
        q: 2,
        rounds: 3,
        branching: 2,
    };
    file.rician_br_db = f64::INFINITY;
    file.rician_ru_db = f64::INFINITY;
    file.nlos_paths_br = 0;
    file.nlos_paths_ru = 0;
    file.methods = vec![MethodSel::Exhaustive];
    file.trials = 10_000;
    let mut spec = ExperimentSpec::new(file, 602);
    spec.noiseless = true;
    let rows = run_ba_probability(&spec).unwrap();
    assert_eq!(rows[0].value, 1.0, "noiseless exhaustive alignment");

    // Full-CSI baseline: monotone ascent and per-realization dominance.
    let sys = SystemConfig {
        n_t: 16,
        n_r: 2,
        m_y: 4,
        m_z: 4,
        r_bs: 4,
        r_ue: 2,
        q: 4,
        rounds: 3,
        branching: 2,
    };
    let books = CodebookSet::for_config(&sys).unwrap();
    let hier_books = HierarchicalCodebookSet::for_config(&sys).unwrap();
    let chan = ChannelConfig {
        n_t: 16,
        n_r: 2,
        m_y: 4,
        m_z: 4,
        rician_br_db: 13.2,
        rician_ru_db: 13.2,
        nlos_paths_br: 3,
        nlos_paths_ru: 3,
        on_grid: false,
    };
    for t in 0..100u64 {
        let ch = draw_channel_with(&chan, &books, &mut stream_rng(603, &[t])).unwrap();
        let b = risbt::rate::full_csi_baseline(&ch, &books, 0.0, 200).unwrap();
        for pair in b.objective.windows(2) {
            assert!(pair[1] >= pair[0] - 1e-9 * pair[0]);
        }
        let scfg = SoundingConfig::from_snr_db(0.0);
        for (mi, kind) in [0u8, 1, 2].into_iter().enumerate() {
            let mut rng = stream_rng(604, &[t, mi as u64]);
            let res = match kind {
                0 => risbt::exhaustive_search(&ch, &books, &scfg, &mut rng).unwrap(),
                1 => risbt::hierarchical_search(&ch, &hier_books, &scfg, &mut rng).unwrap(),
                _ => risbt::multidirectional_search(
                    &ch,
                    &books,
                    &sys,
                    3,
                    &scfg,
                    MultiBeamMode::PhaseOnly,
                    &mut rng,
                )
                .unwrap(),
            };
            let rate = risbt::rate::tuple_rate(&ch, &books, res.chosen, 0.0).unwrap();
            assert!(
                b.rate >= rate - 1e-12,
                "trial {t} method {kind}: baseline {} vs {rate}",
                b.rate
            );
        }
    }

    // Byte-identical CSV regardless of worker count.
    let mut file = FileConfig::default();
    file.sys = sys;
    file.methods = vec![MethodSel::Exhaustive, MethodSel::Multidirectional];
    file.trials = 200;
    file.snr_db_list = vec![0.0];
    let csv_with = |workers: usize| {
        let mut spec = ExperimentSpec::new(file.clone(), 605);
        spec.workers = workers;
        rows_to_csv(&run_rate_curve(&spec).unwrap())
    };
    assert_eq!(csv_with(1), csv_with(4));

    println!("ACCEPTANCE 6: PASS - codebook, binning, decoder-oracle, exhaustive-alignment, baseline-dominance, and CSV-reproducibility properties hold");
}

// ---------------------------------------------------------------- criterion 7

#[test]
fn acceptance_7_decode_demo() {
    // Every walkthrough that ends unambiguous ends at the marked block, and
    // every noiseless round keeps it.
    let mut unique = 0u32;
    for seed in 1..=25u64 {
        let spec = ExperimentSpec::new(demo_default_config(), seed);
        let trace = run_decode_demo(&spec).unwrap();
        assert!(
            !trace.contains("contains marked block: no"),
            "seed {seed} lost the marked block:\n{trace}"
        );
        if trace.contains("candidates_remaining = 1,") {
            unique += 1;
            assert!(
                trace.contains("final: chosen (5,4,2)"),
                "seed {seed} resolved uniquely but not to (5,4,2):\n{trace}"
            );
        }
    }
    assert!(unique > 0, "no unambiguous walkthrough in 25 seeds");

    // Decode statistics on the toy at L=3 over 1e4 plan draws: the rate of
    // recovering the marked block matches the Poisson model within one
    // percentage point. The raw uniqueness frequency is reported against
    // exp(-lambda); at lambda = 0.76 the Poisson approximation of the
    // survivor count is a few points off, which is informational here.
    let sys = demo_default_config().sys;
    let prediction = predict_success(&sys, 3).unwrap();
    let draws = 10_000u64;
    let mut success = 0u64;
    let mut unambiguous = 0u64;
    for t in 0..draws {
        let mut rng = stream_rng(2, &[0x03, t]);
        let truth = BeamTuple {
            bs: rand::Rng::random_range(&mut rng, 0..sys.n_t),
            ue: rand::Rng::random_range(&mut rng, 0..sys.n_r),
            ris: rand::Rng::random_range(&mut rng, 0..sys.m()),
        };
        let r = combinatorial_trial(&sys, 3, truth, &mut rng).unwrap();
        success += (r.chosen == truth) as u64;
        unambiguous += (r.candidates_remaining == 1) as u64;
    }
    let success_rate = success as f64 / draws as f64;
    let unique_rate = unambiguous as f64 / draws as f64;
    assert!(
        (success_rate - prediction.p_poisson).abs() <= 0.01,
        "success {success_rate:.4} vs predicted {:.4}",
        prediction.p_poisson
    );
    assert!(
        (unique_rate - prediction.p_unique()).abs() <= 0.04,
        "uniqueness {unique_rate:.4} vs exp(-lambda) {:.4}",
        prediction.p_unique()
    );

    // A deterministic seeded walkthrough ends at the marked block.
    let spec = ExperimentSpec::new(demo_default_config(), 3);
    let trace = run_decode_demo(&spec).unwrap();
    assert!(trace.contains("final: chosen (5,4,2)"), "{trace}");

    println!(
        "ACCEPTANCE 7: PASS - walkthrough reaches (5,4,2) whenever unambiguous; L=3 success {:.4} vs predicted {:.4} (uniqueness {:.4} vs {:.4})",
        success_rate,
        prediction.p_poisson,
        unique_rate,
        prediction.p_unique()
    );
}
