//! Rician sparse cascaded channels and the ground-truth dominant beam tuple.
//!
//! Two links are modeled: base station to surface (`h1`, `M x N_t`) and
//! surface to user (`h2`, `N_r x M`). Each is a sum of a deterministic-power
//! line-of-sight path and a configurable number of Rayleigh-faded scatter
//! paths, normalized so the expected squared Frobenius norm equals the
//! element-count product. With that scaling an on-grid LOS-only `h1` has
//! unit-modulus entries and the aligned cascade gain is `M * sqrt(N_t N_r)`,
//! which makes the quadratic growth of receive power in `M` explicit.

#[allow(unused_imports)]
use num_traits::Float;

use alloc::vec::Vec;
use core::f64::consts::TAU;
use num_complex::Complex64;
use rand::Rng;

use crate::codebook::CodebookSet;
use crate::config::SystemConfig;
use crate::error::{Error, Result};
use crate::mat::{inner_product, norm, CMat, ColMat};
use crate::rng::complex_gaussian;
use crate::steering::{grid_frequency, ula_steering, upa_steering, SteeringGrid};

/// One selection from each codebook, i.e. one block of the angular cube.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BeamTuple {
    pub bs: usize,
    pub ue: usize,
    pub ris: usize,
}

impl BeamTuple {
    /// Row-major rank used for deterministic tie-breaking.
    pub fn flat_index(&self, n_r: usize, m: usize) -> usize {
        (self.bs * n_r + self.ue) * m + self.ris
    }
}

/// Channel generation parameters.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ChannelConfig {
    pub n_t: usize,
    pub n_r: usize,
    pub m_y: usize,
    pub m_z: usize,
    /// Rician K-factor of the BS-RIS link in dB; `f64::INFINITY` means
    /// LOS-only.
    pub rician_br_db: f64,
    /// Rician K-factor of the RIS-user link in dB.
    pub rician_ru_db: f64,
    pub nlos_paths_br: usize,
    pub nlos_paths_ru: usize,
    /// Draw all angles from the DFT grids (`true`) or uniformly from the
    /// continuous frequency range (`false`).
    pub on_grid: bool,
}

impl ChannelConfig {
    pub fn from_system(sys: &SystemConfig) -> Self {
        ChannelConfig {
            n_t: sys.n_t,
            n_r: sys.n_r,
            m_y: sys.m_y,
            m_z: sys.m_z,
            rician_br_db: 13.2,
            rician_ru_db: 13.2,
            nlos_paths_br: 3,
            nlos_paths_ru: 3,
            on_grid: true,
        }
    }

    pub fn m(&self) -> usize {
        self.m_y * self.m_z
    }

    pub fn validate(&self) -> Result<()> {
        for (what, v) in [
            ("n_t", self.n_t),
            ("n_r", self.n_r),
            ("m_y", self.m_y),
            ("m_z", self.m_z),
        ] {
            if v == 0 {
                return Err(Error::Dimension { what, expected: 1, got: 0 });
            }
        }
        for (what, k) in [("rician_br_db", self.rician_br_db), ("rician_ru_db", self.rician_ru_db)] {
            if k.is_nan() {
                return Err(Error::InvalidArgument(alloc::format!("{what} is NaN")));
            }
        }
        Ok(())
    }

    fn los_only(&self) -> bool {
        (self.rician_br_db.is_infinite() || self.nlos_paths_br == 0)
            && (self.rician_ru_db.is_infinite() || self.nlos_paths_ru == 0)
    }
}

/// One propagation path of a link. `node_freq` is the spatial frequency at
/// the linear-array end (BS departure or user arrival); the pair is the
/// frequency seen across the surface.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LinkPath {
    pub gain: Complex64,
    pub node_freq: f64,
    pub ris_freq_y: f64,
    pub ris_freq_z: f64,
}

/// Paths of one link; index 0 is the line-of-sight path.
#[derive(Debug, Clone, PartialEq)]
pub struct LinkPaths {
    pub paths: Vec<LinkPath>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct PathSet {
    pub br: LinkPaths,
    pub ru: LinkPaths,
}

/// A drawn channel: both matrices, the paths that generated them, and the
/// dominant beam tuple.
#[derive(Debug, Clone)]
pub struct ChannelRealization {
    pub config: ChannelConfig,
    /// BS-to-surface matrix, `M x N_t`.
    pub h1: CMat,
    /// Surface-to-user matrix, `N_r x M`.
    pub h2: CMat,
    pub paths: PathSet,
    pub truth: BeamTuple,
}

fn kappa_linear(db: f64) -> f64 {
    if db.is_infinite() && db > 0.0 {
        f64::INFINITY
    } else {
        10f64.powf(db / 10.0)
    }
}

/// Deterministic line-of-sight amplitude: power `kappa / (kappa + 1)`.
fn los_amplitude(kappa: f64) -> f64 {
    if kappa.is_infinite() {
        1.0
    } else {
        (kappa / (kappa + 1.0)).sqrt()
    }
}

fn draw_freq<R: Rng + ?Sized>(rng: &mut R, n: usize, on_grid: bool) -> f64 {
    if on_grid {
        grid_frequency(rng.random_range(0..n), n)
    } else {
        // Uniform over [-pi, pi).
        (rng.random::<f64>() - 0.5) * TAU
    }
}

fn draw_link<R: Rng + ?Sized>(
    rng: &mut R,
    node_size: usize,
    m_y: usize,
    m_z: usize,
    rician_db: f64,
    nlos_paths: usize,
    on_grid: bool,
) -> LinkPaths {
    let kappa = kappa_linear(rician_db);
    let mut paths = Vec::with_capacity(1 + nlos_paths);
    paths.push(LinkPath {
        gain: Complex64::new(los_amplitude(kappa), 0.0),
        node_freq: draw_freq(rng, node_size, on_grid),
        ris_freq_y: draw_freq(rng, m_y, on_grid),
        ris_freq_z: draw_freq(rng, m_z, on_grid),
    });
    if !kappa.is_infinite() && nlos_paths > 0 {
        let var_each = 1.0 / ((kappa + 1.0) * nlos_paths as f64);
        for _ in 0..nlos_paths {
            paths.push(LinkPath {
                gain: complex_gaussian(rng, var_each),
                node_freq: draw_freq(rng, node_size, on_grid),
                ris_freq_y: draw_freq(rng, m_y, on_grid),
                ris_freq_z: draw_freq(rng, m_z, on_grid),
            });
        }
    }
    LinkPaths { paths }
}

fn assemble(cfg: &ChannelConfig, paths: &PathSet) -> (CMat, CMat) {
    let m = cfg.m();
    let mut h1 = CMat::zeros(m, cfg.n_t);
    let scale1 = ((cfg.n_t * m) as f64).sqrt();
    for p in &paths.br.paths {
        let a_ris = upa_steering(cfg.m_y, cfg.m_z, p.ris_freq_y, p.ris_freq_z).expect("dims checked");
        let a_bs = ula_steering(cfg.n_t, p.node_freq).expect("dims checked");
        h1.add_scaled_outer(p.gain * scale1, &a_ris, &a_bs);
    }
    let mut h2 = CMat::zeros(cfg.n_r, m);
    let scale2 = ((m * cfg.n_r) as f64).sqrt();
    for p in &paths.ru.paths {
        let a_ue = ula_steering(cfg.n_r, p.node_freq).expect("dims checked");
        let a_ris = upa_steering(cfg.m_y, cfg.m_z, p.ris_freq_y, p.ris_freq_z).expect("dims checked");
        h2.add_scaled_outer(p.gain * scale2, &a_ue, &a_ris);
    }
    (h1, h2)
}

/// Draws a channel realization. Deterministic given the generator state.
///
/// Builds the codebooks it needs for the general ground-truth case
/// internally; use [`draw_channel_with`] inside Monte Carlo loops to reuse
/// an existing set.
pub fn draw_channel<R: Rng + ?Sized>(cfg: &ChannelConfig, rng: &mut R) -> Result<ChannelRealization> {
    let books = CodebookSet::for_dims(cfg.n_t, cfg.n_r, cfg.m_y, cfg.m_z)?;
    draw_channel_with(cfg, &books, rng)
}

pub fn draw_channel_with<R: Rng + ?Sized>(
    cfg: &ChannelConfig,
    books: &CodebookSet,
    rng: &mut R,
) -> Result<ChannelRealization> {
    cfg.validate()?;
    let br = draw_link(
        rng,
        cfg.n_t,
        cfg.m_y,
        cfg.m_z,
        cfg.rician_br_db,
        cfg.nlos_paths_br,
        cfg.on_grid,
    );
    let ru = draw_link(
        rng,
        cfg.n_r,
        cfg.m_y,
        cfg.m_z,
        cfg.rician_ru_db,
        cfg.nlos_paths_ru,
        cfg.on_grid,
    );
    let paths = PathSet { br, ru };
    let (h1, h2) = assemble(cfg, &paths);
    let truth = truth_of(cfg, &paths, &h1, &h2, books)?;
    Ok(ChannelRealization {
        config: *cfg,
        h1,
        h2,
        paths,
        truth,
    })
}

/// Builds an on-grid LOS-only realization from explicit grid indices.
///
/// `ris_arrival` and `ris_departure` are `(y, z)` index pairs for the B-R
/// arrival and R-U departure; the dominant surface index is their wrapped
/// per-axis difference.
pub fn los_channel_from_indices(
    cfg: &ChannelConfig,
    bs_index: usize,
    ue_index: usize,
    ris_arrival: (usize, usize),
    ris_departure: (usize, usize),
) -> Result<ChannelRealization> {
    cfg.validate()?;
    if bs_index >= cfg.n_t || ue_index >= cfg.n_r {
        return Err(Error::InvalidArgument("grid index out of range".into()));
    }
    if ris_arrival.0 >= cfg.m_y
        || ris_arrival.1 >= cfg.m_z
        || ris_departure.0 >= cfg.m_y
        || ris_departure.1 >= cfg.m_z
    {
        return Err(Error::InvalidArgument("surface grid index out of range".into()));
    }
    let br = LinkPaths {
        paths: alloc::vec![LinkPath {
            gain: Complex64::new(1.0, 0.0),
            node_freq: grid_frequency(bs_index, cfg.n_t),
            ris_freq_y: grid_frequency(ris_arrival.0, cfg.m_y),
            ris_freq_z: grid_frequency(ris_arrival.1, cfg.m_z),
        }],
    };
    let ru = LinkPaths {
        paths: alloc::vec![LinkPath {
            gain: Complex64::new(1.0, 0.0),
            node_freq: grid_frequency(ue_index, cfg.n_r),
            ris_freq_y: grid_frequency(ris_departure.0, cfg.m_y),
            ris_freq_z: grid_frequency(ris_departure.1, cfg.m_z),
        }],
    };
    let paths = PathSet { br, ru };
    let (h1, h2) = assemble(cfg, &paths);
    let ky = (cfg.m_y + ris_departure.0 - ris_arrival.0) % cfg.m_y;
    let kz = (cfg.m_z + ris_departure.1 - ris_arrival.1) % cfg.m_z;
    let truth = BeamTuple {
        bs: bs_index,
        ue: ue_index,
        ris: ky * cfg.m_z + kz,
    };
    Ok(ChannelRealization {
        config: *cfg,
        h1,
        h2,
        paths,
        truth,
    })
}

fn truth_of(
    cfg: &ChannelConfig,
    paths: &PathSet,
    h1: &CMat,
    h2: &CMat,
    books: &CodebookSet,
) -> Result<BeamTuple> {
    if h1.is_zero() && h2.is_zero() {
        return Err(Error::DegenerateChannel);
    }
    if cfg.on_grid && cfg.los_only() {
        // The LOS path dominates by construction; its indices are exact.
        let bs_grid = SteeringGrid::new(cfg.n_t)?;
        let ue_grid = SteeringGrid::new(cfg.n_r)?;
        let gy = SteeringGrid::new(cfg.m_y)?;
        let gz = SteeringGrid::new(cfg.m_z)?;
        let br = &paths.br.paths[0];
        let ru = &paths.ru.paths[0];
        let py = gy.nearest_index(br.ris_freq_y);
        let pz = gz.nearest_index(br.ris_freq_z);
        let qy = gy.nearest_index(ru.ris_freq_y);
        let qz = gz.nearest_index(ru.ris_freq_z);
        let ky = (cfg.m_y + qy - py) % cfg.m_y;
        let kz = (cfg.m_z + qz - pz) % cfg.m_z;
        Ok(BeamTuple {
            bs: bs_grid.nearest_index(br.node_freq),
            ue: ue_grid.nearest_index(ru.node_freq),
            ris: ky * cfg.m_z + kz,
        })
    } else {
        oracle_tuple_raw(h1, h2, books).map(|(t, _)| t)
    }
}

/// Recomputes the dominant beam tuple of a realization.
///
/// On-grid LOS-only channels use the exact closed form; everything else is
/// the noiseless exhaustive argmax of [`oracle_tuple`].
pub fn ground_truth_tuple(channel: &ChannelRealization, books: &CodebookSet) -> Result<BeamTuple> {
    truth_of(&channel.config, &channel.paths, &channel.h1, &channel.h2, books)
}

const UNIT_NORM_TOL: f64 = 1e-6;
const PASSIVITY_TOL: f64 = 1e-9;

fn check_unit_norm(v: &[Complex64], what: &'static str) -> Result<()> {
    if (norm(v) - 1.0).abs() > UNIT_NORM_TOL {
        return Err(Error::InvalidArgument(alloc::format!(
            "{what} must have unit norm"
        )));
    }
    Ok(())
}

/// Largest entry modulus of a reflection vector.
pub(crate) fn max_modulus(v: &[Complex64]) -> f64 {
    v.iter().map(|z| z.norm()).fold(0.0, f64::max)
}

/// A passive surface cannot amplify, so reflection vectors whose largest
/// entry exceeds unit modulus are rescaled to peak at 1 before use.
pub(crate) fn passivity_scale(v: &[Complex64]) -> f64 {
    let m = max_modulus(v);
    if m > 1.0 + PASSIVITY_TOL {
        1.0 / m
    } else {
        1.0
    }
}

/// Cascade gain `w^H H2 diag(v) H1 f` for unit-norm `f`, `w` and a passive
/// reflection vector `v`.
pub fn cascaded_gain(
    channel: &ChannelRealization,
    f: &[Complex64],
    v: &[Complex64],
    w: &[Complex64],
) -> Result<Complex64> {
    let m = channel.h1.rows();
    if f.len() != channel.h1.cols() {
        return Err(Error::Dimension {
            what: "precoder",
            expected: channel.h1.cols(),
            got: f.len(),
        });
    }
    if v.len() != m {
        return Err(Error::Dimension {
            what: "reflection vector",
            expected: m,
            got: v.len(),
        });
    }
    if w.len() != channel.h2.rows() {
        return Err(Error::Dimension {
            what: "combiner",
            expected: channel.h2.rows(),
            got: w.len(),
        });
    }
    check_unit_norm(f, "precoder")?;
    check_unit_norm(w, "combiner")?;
    let scale = passivity_scale(v);
    let mut x = channel.h1.mul_vec(f);
    for (xm, vm) in x.iter_mut().zip(v) {
        *xm *= vm * scale;
    }
    let y = channel.h2.mul_vec(&x);
    Ok(inner_product(w, &y))
}

/// Per-beam cascade responses, precomputed once per realization:
/// `u[i] = H1 f_i` and `t[j] = H2^H w_j` for every codebook column. The gain
/// of the triple `(i, j, k)` is then `sum_m conj(t_j[m]) v_k[m] u_i[m]`,
/// which turns the exhaustive scans from `O(M N_t)` to `O(M)` per probe.
#[derive(Debug, Clone)]
pub struct CascadeProfiles {
    pub(crate) u: ColMat,
    pub(crate) t: ColMat,
}

impl CascadeProfiles {
    pub fn new(channel: &ChannelRealization, books: &CodebookSet) -> CascadeProfiles {
        let m = channel.h1.rows();
        let u = (0..books.bs.beams())
            .map(|i| channel.h1.mul_vec(books.bs.column(i)))
            .collect();
        let t = (0..books.ue.beams())
            .map(|j| channel.h2.adjoint_mul_vec(books.ue.column(j)))
            .collect();
        CascadeProfiles {
            u: ColMat::from_columns(m, u),
            t: ColMat::from_columns(m, t),
        }
    }

    /// Gain of a single-beam triple.
    pub fn gain(&self, books: &CodebookSet, tuple: BeamTuple) -> Complex64 {
        let u = self.u.col(tuple.bs);
        let t = self.t.col(tuple.ue);
        let v = books.ris.column(tuple.ris);
        let mut acc = Complex64::new(0.0, 0.0);
        for m in 0..u.len() {
            acc += t[m].conj() * v[m] * u[m];
        }
        acc
    }
}

/// Noiseless exhaustive argmax of `|cascaded_gain|` over all single-beam
/// triples. Ties break to the smallest row-major tuple index.
pub fn oracle_tuple(
    channel: &ChannelRealization,
    books: &CodebookSet,
) -> Result<(BeamTuple, f64)> {
    oracle_tuple_raw(&channel.h1, &channel.h2, books)
}

fn oracle_tuple_raw(h1: &CMat, h2: &CMat, books: &CodebookSet) -> Result<(BeamTuple, f64)> {
    if h1.is_zero() && h2.is_zero() {
        return Err(Error::DegenerateChannel);
    }
    let m = h1.rows();
    let mut best = f64::NEG_INFINITY;
    let mut best_tuple = BeamTuple { bs: 0, ue: 0, ris: 0 };
    let mut x = alloc::vec![Complex64::new(0.0, 0.0); m];
    for i in 0..books.bs.beams() {
        let u = h1.mul_vec(books.bs.column(i));
        for j in 0..books.ue.beams() {
            let t = h2.adjoint_mul_vec(books.ue.column(j));
            for mm in 0..m {
                x[mm] = t[mm].conj() * u[mm];
            }
            for k in 0..books.ris.beams() {
                let v = books.ris.column(k);
                let mut acc = Complex64::new(0.0, 0.0);
                for mm in 0..m {
                    acc += v[mm] * x[mm];
                }
                let g = acc.norm();
                if g > best {
                    best = g;
                    best_tuple = BeamTuple { bs: i, ue: j, ris: k };
                }
            }
        }
    }
    Ok((best_tuple, best))
}
