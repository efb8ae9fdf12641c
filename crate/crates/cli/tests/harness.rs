//! Harness-level behavior: reproducibility, estimator sanity, slot
//! accounting, and the command-line surface.

use std::process::Command;

use risbt_cli::config::{FileConfig, MethodSel};
use risbt_cli::demo::{demo_default_config, run_decode_demo};
use risbt_cli::experiment::{
    fmt_sig6, predict_csv, rows_to_csv, run_ba_probability, run_rate_curve, ExperimentSpec,
    CSV_HEADER,
};

fn toy_file(rounds: usize) -> FileConfig {
    let mut f = FileConfig::default();
    f.sys.n_t = 8;
    f.sys.n_r = 4;
    f.sys.m_y = 4;
    f.sys.m_z = 2;
    f.sys.r_bs = 4;
    f.sys.r_ue = 2;
    f.sys.q = 2;
    f.sys.rounds = rounds;
    f
}

#[test]
fn csv_is_identical_for_any_worker_count() {
    let mut file = toy_file(3);
    file.methods = vec![
        MethodSel::Exhaustive,
        MethodSel::Hierarchical,
        MethodSel::Multidirectional,
    ];
    file.trials = 300;
    file.snr_db_list = vec![-5.0, 0.0];
    file.hier_budget_slots = Some(64);
    let run = |workers: usize, kind: u8| {
        let mut spec = ExperimentSpec::new(file.clone(), 99);
        spec.workers = workers;
        match kind {
            0 => rows_to_csv(&run_ba_probability(&spec).unwrap()),
            _ => rows_to_csv(&run_rate_curve(&spec).unwrap()),
        }
    };
    assert_eq!(run(1, 0), run(4, 0));
    assert_eq!(run(1, 1), run(3, 1));
    assert_eq!(run(2, 1), run(8, 1));
}

#[test]
fn standard_errors_shrink_like_root_trials() {
    // Binomial standard error over a 100/1000/10000 sweep shrinks by about
    // sqrt(10) per decade.
    let mut ses = Vec::new();
    for (i, trials) in [100u64, 1000, 10000].into_iter().enumerate() {
        let mut file = toy_file(2);
        file.trials = trials;
        let mut spec = ExperimentSpec::new(file, 3 + i as u64);
        spec.combinatorial = true;
        spec.noiseless = true;
        let rows = run_ba_probability(&spec).unwrap();
        ses.push(rows[0].stderr);
    }
    let root10 = 10f64.sqrt();
    for pair in ses.windows(2) {
        let ratio = pair[0] / pair[1];
        assert!(
            (ratio / root10 - 1.0).abs() < 0.2,
            "standard errors {ses:?}: ratio {ratio}"
        );
    }
}

#[test]
fn row_slots_match_the_overhead_formulas() {
    use risbt::analysis::overhead;
    use risbt::training::Method;

    let mut file = toy_file(3);
    file.methods = vec![
        MethodSel::Exhaustive,
        MethodSel::Hierarchical,
        MethodSel::Multidirectional,
        MethodSel::FullCsi,
    ];
    file.trials = 50;
    file.snr_db_list = vec![0.0];
    file.hier_budget_slots = Some(40);
    let spec = ExperimentSpec::new(file.clone(), 5);
    let rows = run_rate_curve(&spec).unwrap();
    let sys = &file.sys;
    for row in &rows {
        let expect = match row.method.as_str() {
            "exhaustive" => overhead(Method::Exhaustive, sys, 3).unwrap().slots,
            "hierarchical" => overhead(Method::Hierarchical, sys, 3).unwrap().slots,
            "hierarchical-boosted" => {
                let native = overhead(Method::Hierarchical, sys, 3).unwrap().slots;
                native * (40 / native).max(1)
            }
            "multidirectional" => overhead(Method::Multidirectional, sys, 3).unwrap().slots,
            "full-csi" => 0,
            other => panic!("unexpected method {other}"),
        };
        assert_eq!(row.slots_used, expect, "method {}", row.method);
    }

    // Alignment-probability rows carry the same accounting.
    let mut file = toy_file(3);
    file.methods = vec![MethodSel::Exhaustive, MethodSel::Multidirectional];
    file.trials = 50;
    let mut spec = ExperimentSpec::new(file.clone(), 6);
    spec.noiseless = true;
    for row in run_ba_probability(&spec).unwrap() {
        let m = match row.method.as_str() {
            "exhaustive" => Method::Exhaustive,
            _ => Method::Multidirectional,
        };
        assert_eq!(row.slots_used, overhead(m, &file.sys, 3).unwrap().slots);
    }
}

#[test]
fn ba_probability_rejects_invalid_setups() {
    let mut file = toy_file(3);
    file.on_grid = Some(false);
    let spec = ExperimentSpec::new(file, 1);
    assert!(run_ba_probability(&spec).is_err());

    let mut file = toy_file(3);
    file.methods = vec![MethodSel::FullCsi];
    let spec = ExperimentSpec::new(file, 1);
    assert!(run_ba_probability(&spec).is_err());

    let mut file = toy_file(3);
    file.methods = vec![MethodSel::Exhaustive];
    let mut spec = ExperimentSpec::new(file, 1);
    spec.combinatorial = true;
    assert!(run_ba_probability(&spec).is_err());

    let mut file = toy_file(3);
    file.trials = 0;
    let spec = ExperimentSpec::new(file, 1);
    assert!(run_ba_probability(&spec).is_err());
}

#[test]
fn rate_curve_rejects_an_empty_sweep() {
    let mut file = toy_file(3);
    file.snr_db_list = vec![];
    let spec = ExperimentSpec::new(file, 1);
    assert!(run_rate_curve(&spec).is_err());
}

#[test]
fn noiseless_exhaustive_alignment_is_perfect() {
    let mut file = toy_file(3);
    file.methods = vec![MethodSel::Exhaustive];
    file.trials = 1000;
    file.rician_br_db = f64::INFINITY;
    file.rician_ru_db = f64::INFINITY;
    file.nlos_paths_br = 0;
    file.nlos_paths_ru = 0;
    let mut spec = ExperimentSpec::new(file, 12);
    spec.noiseless = true;
    let rows = run_ba_probability(&spec).unwrap();
    assert_eq!(rows[0].value, 1.0);
    assert_eq!(rows[0].stderr, 0.0);
}

#[test]
fn predict_csv_shape() {
    let spec = ExperimentSpec::new(FileConfig::default(), 1);
    let csv = predict_csv(&spec, 0.99).unwrap();
    let mut lines = csv.lines();
    assert_eq!(
        lines.next().unwrap(),
        "lambda,p_union,p_poisson,required_L_for_target"
    );
    let row: Vec<&str> = lines.next().unwrap().split(',').collect();
    assert_eq!(row.len(), 4);
    assert_eq!(row[3], "5");
    assert!((row[2].parse::<f64>().unwrap() - 0.9699).abs() < 1e-3);
}

#[test]
fn demo_trace_reports_ambiguity_for_a_single_round() {
    let mut file = demo_default_config();
    file.sys.rounds = 1;
    let spec = ExperimentSpec::new(file, 4);
    let trace = run_decode_demo(&spec).unwrap();
    assert!(trace.contains("candidates_remaining = 16"), "{trace}");
}

#[test]
fn demo_rejects_cubes_that_cannot_host_the_marked_block() {
    let mut file = demo_default_config();
    file.sys.n_t = 4;
    let spec = ExperimentSpec::new(file, 4);
    assert!(run_decode_demo(&spec).is_err());
}

#[test]
fn significant_digit_formatting_is_locale_free() {
    for (x, expect) in [
        (0.125, "0.125000"),
        (1234.5678, "1234.57"),
        (-0.0004999, "-0.000499900"),
        (0.00004999, "4.99900e-5"),
    ] {
        assert_eq!(fmt_sig6(x), expect);
    }
}

// Command-line surface, exercised through the real binary.

fn risbt_bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_risbt"))
}

#[test]
fn cli_ba_prob_end_to_end() {
    let dir = tempfile::tempdir().unwrap();
    let conf = dir.path().join("exp.conf");
    std::fs::write(
        &conf,
        "n_t = 8\nn_r = 4\nm_y = 4\nm_z = 2\nr_bs = 4\nr_ue = 2\nq = 2\nrounds = 3\nmethods = multidirectional\ntrials = 500\n",
    )
    .unwrap();
    let out = dir.path().join("rows.csv");
    let status = risbt_bin()
        .args([
            "ba-prob",
            "--config",
            conf.to_str().unwrap(),
            "--seed",
            "2",
            "--noiseless",
            "--combinatorial",
            "--out",
            out.to_str().unwrap(),
        ])
        .status()
        .unwrap();
    assert!(status.success());
    let text = std::fs::read_to_string(&out).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next().unwrap(), CSV_HEADER);
    let row = lines.next().unwrap();
    assert!(row.starts_with("multidirectional,8,4,8,4,2,2,3,"), "{row}");
}

#[test]
fn cli_rejects_unknown_config_keys() {
    let dir = tempfile::tempdir().unwrap();
    let conf = dir.path().join("bad.conf");
    std::fs::write(&conf, "n_t = 8\nsnr = 3\n").unwrap();
    let output = risbt_bin()
        .args(["ba-prob", "--config", conf.to_str().unwrap()])
        .output()
        .unwrap();
    assert!(!output.status.success());
    let err = String::from_utf8_lossy(&output.stderr);
    assert!(err.contains("unknown key"), "{err}");
}

#[test]
fn cli_decode_demo_reaches_the_marked_block() {
    let output = risbt_bin()
        .args(["decode-demo", "--seed", "3"])
        .output()
        .unwrap();
    assert!(output.status.success());
    let text = String::from_utf8_lossy(&output.stdout);
    assert!(text.contains("final: chosen (5,4,2)"), "{text}");
}
