//! Flat `key=value` experiment configuration.
//!
//! Every key has a default; unknown keys are hard errors so typos cannot
//! silently fall back to defaults. Lines starting with `#` and blank lines
//! are ignored.

use anyhow::{anyhow, bail, Context, Result};
use risbt::{MultiBeamMode, SystemConfig};

/// Method selector as written in config files and CSV output.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MethodSel {
    Exhaustive,
    Hierarchical,
    Multidirectional,
    FullCsi,
}

impl MethodSel {
    pub fn label(&self) -> &'static str {
        match self {
            MethodSel::Exhaustive => "exhaustive",
            MethodSel::Hierarchical => "hierarchical",
            MethodSel::Multidirectional => "multidirectional",
            MethodSel::FullCsi => "full-csi",
        }
    }
}

/// Parsed experiment configuration (before CLI overrides).
#[derive(Debug, Clone, PartialEq)]
pub struct FileConfig {
    pub sys: SystemConfig,
    pub rician_br_db: f64,
    pub rician_ru_db: f64,
    pub nlos_paths_br: usize,
    pub nlos_paths_ru: usize,
    /// None means "experiment-kind default": on-grid for alignment
    /// probability runs, off-grid for rate runs.
    pub on_grid: Option<bool>,
    pub snr_db_list: Vec<f64>,
    pub methods: Vec<MethodSel>,
    pub trials: u64,
    pub ris_beam_mode: MultiBeamMode,
    pub hier_budget_slots: Option<u64>,
}

impl Default for FileConfig {
    fn default() -> Self {
        FileConfig {
            sys: SystemConfig {
                n_t: 32,
                n_r: 32,
                m_y: 16,
                m_z: 16,
                r_bs: 4,
                r_ue: 4,
                q: 32,
                rounds: 4,
                branching: 2,
            },
            rician_br_db: 13.2,
            rician_ru_db: 13.2,
            nlos_paths_br: 3,
            nlos_paths_ru: 3,
            on_grid: None,
            snr_db_list: vec![0.0],
            methods: vec![MethodSel::Multidirectional],
            trials: 1000,
            ris_beam_mode: MultiBeamMode::PhaseOnly,
            hier_budget_slots: None,
        }
    }
}

pub fn parse_config(text: &str) -> Result<FileConfig> {
    let mut cfg = FileConfig::default();
    for (lineno, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let (key, value) = line
            .split_once('=')
            .ok_or_else(|| anyhow!("line {}: expected key=value, got {line:?}", lineno + 1))?;
        let key = key.trim();
        let value = value.trim();
        let ctx = || format!("line {}: key {key}", lineno + 1);
        match key {
            "n_t" => cfg.sys.n_t = value.parse().with_context(ctx)?,
            "n_r" => cfg.sys.n_r = value.parse().with_context(ctx)?,
            "m_y" => cfg.sys.m_y = value.parse().with_context(ctx)?,
            "m_z" => cfg.sys.m_z = value.parse().with_context(ctx)?,
            "r_bs" => cfg.sys.r_bs = value.parse().with_context(ctx)?,
            "r_ue" => cfg.sys.r_ue = value.parse().with_context(ctx)?,
            "q" => cfg.sys.q = value.parse().with_context(ctx)?,
            "rounds" => cfg.sys.rounds = value.parse().with_context(ctx)?,
            "branching" => cfg.sys.branching = value.parse().with_context(ctx)?,
            "rician_br_db" => cfg.rician_br_db = value.parse().with_context(ctx)?,
            "rician_ru_db" => cfg.rician_ru_db = value.parse().with_context(ctx)?,
            "nlos_paths_br" => cfg.nlos_paths_br = value.parse().with_context(ctx)?,
            "nlos_paths_ru" => cfg.nlos_paths_ru = value.parse().with_context(ctx)?,
            "on_grid" => {
                cfg.on_grid = Some(match value {
                    "true" => true,
                    "false" => false,
                    other => bail!("line {}: on_grid must be true or false, got {other:?}", lineno + 1),
                })
            }
            "snr_db_list" => {
                cfg.snr_db_list = value
                    .split(',')
                    .map(|s| s.trim().parse::<f64>().map_err(|e| anyhow!("{e}: {s:?}")))
                    .collect::<Result<Vec<_>>>()
                    .with_context(ctx)?;
            }
            "methods" => {
                let mut methods = Vec::new();
                for name in value.split(',') {
                    let m = match name.trim() {
                        "exhaustive" => MethodSel::Exhaustive,
                        "hierarchical" => MethodSel::Hierarchical,
                        "multidirectional" => MethodSel::Multidirectional,
                        "full-csi" => MethodSel::FullCsi,
                        other => bail!("line {}: unknown method {other:?}", lineno + 1),
                    };
                    if methods.contains(&m) {
                        bail!("line {}: method {name:?} listed twice", lineno + 1);
                    }
                    methods.push(m);
                }
                cfg.methods = methods;
            }
            "trials" => cfg.trials = value.parse().with_context(ctx)?,
            "ris_beam_mode" => {
                cfg.ris_beam_mode = match value {
                    "amplitude" => MultiBeamMode::Amplitude,
                    "phase_only" => MultiBeamMode::PhaseOnly,
                    other => bail!(
                        "line {}: ris_beam_mode must be amplitude or phase_only, got {other:?}",
                        lineno + 1
                    ),
                }
            }
            "hier_budget_slots" => cfg.hier_budget_slots = Some(value.parse().with_context(ctx)?),
            other => bail!("line {}: unknown key {other:?}", lineno + 1),
        }
    }
    if cfg.snr_db_list.is_empty() {
        bail!("snr_db_list must not be empty");
    }
    if cfg.methods.is_empty() {
        bail!("methods must not be empty");
    }
    Ok(cfg)
}
