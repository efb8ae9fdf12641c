//! One training time slot: a unit pilot through a beam triple, receiver
//! noise, and the magnitude-only energy measurement.
//!
//! The receiver output per repetition is `y_r = gain + eta_r`. Because the
//! combiner has unit norm, the projected array noise `w^H n_r` is itself a
//! circularly symmetric complex Gaussian with variance `sigma^2`, so it is
//! drawn directly as one scalar per repetition. Measurements keep only
//! `mean |y_r|^2`; carrier phase is never used.

#[allow(unused_imports)]
use num_traits::Float;

use num_complex::Complex64;
use rand::Rng;

use crate::channel::{
    cascaded_gain, passivity_scale, BeamTuple, CascadeProfiles, ChannelRealization,
};
use crate::codebook::{multi_beam, CodebookSet, MultiBeamMode};
use crate::error::Result;

/// Pilot/noise parameters of one sounding slot. Pilot power is fixed to 1,
/// so `noise_var = 10^(-snr_db / 10)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SoundingConfig {
    pub snr_db: f64,
    noise_var: f64,
    pub repetitions: u32,
    pub noiseless: bool,
}

impl SoundingConfig {
    pub fn from_snr_db(snr_db: f64) -> Self {
        SoundingConfig {
            snr_db,
            noise_var: 10f64.powf(-snr_db / 10.0),
            repetitions: 1,
            noiseless: false,
        }
    }

    /// Noise variance given directly; useful where exact floating-point
    /// scaling matters more than a round dB figure.
    pub fn from_noise_var(noise_var: f64) -> Self {
        SoundingConfig {
            snr_db: -10.0 * noise_var.log10(),
            noise_var,
            repetitions: 1,
            noiseless: false,
        }
    }

    pub fn noiseless() -> Self {
        SoundingConfig {
            snr_db: f64::INFINITY,
            noise_var: 0.0,
            repetitions: 1,
            noiseless: true,
        }
    }

    pub fn with_repetitions(mut self, repetitions: u32) -> Self {
        assert!(repetitions >= 1, "repetitions must be at least 1");
        self.repetitions = repetitions;
        self
    }

    pub fn noise_var(&self) -> f64 {
        self.noise_var
    }
}

/// Magnitude-only measurement of one slot: the mean over repetitions of the
/// received energy.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Measurement {
    pub energy: f64,
}

fn measure<R: Rng + ?Sized>(gain: Complex64, cfg: &SoundingConfig, rng: &mut R) -> Measurement {
    if cfg.noiseless {
        return Measurement {
            energy: gain.norm_sqr(),
        };
    }
    let mut acc = 0.0;
    for _ in 0..cfg.repetitions {
        let y = gain + crate::rng::complex_gaussian(rng, cfg.noise_var);
        acc += y.norm_sqr();
    }
    Measurement {
        energy: acc / cfg.repetitions as f64,
    }
}

/// Sounds one beam triple. Deterministic given the generator state.
pub fn sound<R: Rng + ?Sized>(
    channel: &ChannelRealization,
    f: &[Complex64],
    v: &[Complex64],
    w: &[Complex64],
    cfg: &SoundingConfig,
    rng: &mut R,
) -> Result<Measurement> {
    let gain = cascaded_gain(channel, f, v, w)?;
    Ok(measure(gain, cfg, rng))
}

/// Slot-counting sounder used by the training procedures.
///
/// Every probe consumes `repetitions` time slots; [`Sounder::slots_used`]
/// is the ground truth the overhead formulas are checked against. Indexed
/// probes go through precomputed per-beam responses, which is what keeps
/// the exhaustive search affordable; group probes combine those responses
/// linearly and only form the reflection vector explicitly.
pub struct Sounder<'a, R: Rng + ?Sized> {
    channel: &'a ChannelRealization,
    books: &'a CodebookSet,
    cfg: SoundingConfig,
    rng: &'a mut R,
    profiles: Option<CascadeProfiles>,
    probes: u64,
}

impl<'a, R: Rng + ?Sized> Sounder<'a, R> {
    pub fn new(
        channel: &'a ChannelRealization,
        books: &'a CodebookSet,
        cfg: SoundingConfig,
        rng: &'a mut R,
    ) -> Self {
        Sounder {
            channel,
            books,
            cfg,
            rng,
            profiles: None,
            probes: 0,
        }
    }

    /// Precomputes the per-beam cascade responses up front.
    pub fn with_profiles(
        channel: &'a ChannelRealization,
        books: &'a CodebookSet,
        cfg: SoundingConfig,
        rng: &'a mut R,
    ) -> Self {
        let mut s = Self::new(channel, books, cfg, rng);
        s.profiles = Some(CascadeProfiles::new(channel, books));
        s
    }

    pub fn config(&self) -> &SoundingConfig {
        &self.cfg
    }

    /// Probes issued so far.
    pub fn soundings(&self) -> u64 {
        self.probes
    }

    /// Time slots consumed so far (probes times repetitions).
    pub fn slots_used(&self) -> u64 {
        self.probes * self.cfg.repetitions as u64
    }

    /// Sounds arbitrary beam vectors.
    pub fn sound_beams(
        &mut self,
        f: &[Complex64],
        v: &[Complex64],
        w: &[Complex64],
    ) -> Result<f64> {
        let gain = cascaded_gain(self.channel, f, v, w)?;
        self.probes += 1;
        Ok(measure(gain, &self.cfg, self.rng).energy)
    }

    /// Sounds a single-beam triple through the precomputed responses.
    pub fn sound_tuple(&mut self, tuple: BeamTuple) -> f64 {
        let gain = match &self.profiles {
            Some(p) => p.gain(self.books, tuple),
            None => cascaded_gain(
                self.channel,
                self.books.bs.column(tuple.bs),
                self.books.ris.column(tuple.ris),
                self.books.ue.column(tuple.ue),
            )
            .expect("codebook columns are dimension-consistent"),
        };
        self.probes += 1;
        measure(gain, &self.cfg, self.rng).energy
    }

    /// Sounds one bin: simultaneous beam groups at all three nodes.
    pub fn sound_groups(
        &mut self,
        bs_group: &[usize],
        ue_group: &[usize],
        ris_group: &[usize],
        ris_mode: MultiBeamMode,
    ) -> Result<f64> {
        let m = self.books.ris.elements();
        let v = multi_beam(&self.books.ris, ris_group, ris_mode)?;
        let vscale = passivity_scale(&v);
        let gain = match &self.profiles {
            Some(p) => {
                let fs = 1.0 / (bs_group.len() as f64).sqrt();
                let ws = 1.0 / (ue_group.len() as f64).sqrt();
                let mut acc = Complex64::new(0.0, 0.0);
                for (mm, vm) in v.iter().enumerate().take(m) {
                    let mut u = Complex64::new(0.0, 0.0);
                    for &i in bs_group {
                        u += p.u.col(i)[mm];
                    }
                    let mut t = Complex64::new(0.0, 0.0);
                    for &j in ue_group {
                        t += p.t.col(j)[mm];
                    }
                    acc += (t * ws).conj() * (vm * vscale) * (u * fs);
                }
                acc
            }
            None => {
                let f = multi_beam(&self.books.bs, bs_group, MultiBeamMode::Amplitude)?;
                let w = multi_beam(&self.books.ue, ue_group, MultiBeamMode::Amplitude)?;
                cascaded_gain(self.channel, &f, &v, &w)?
            }
        };
        self.probes += 1;
        Ok(measure(gain, &self.cfg, self.rng).energy)
    }
}
