//! Steering vectors and the uniform angular grids they are sampled on.
//!
//! Arrays are half-wavelength spaced, so a direction enters only through its
//! spatial frequency in `[-pi, pi)`. Beam index `k` of an `n`-point grid sits
//! at `2*pi*k/n` wrapped into that interval; index order therefore increases
//! monotonically modulo the wrap.

#[allow(unused_imports)]
use num_traits::Float;

use alloc::vec::Vec;
use core::f64::consts::{PI, TAU};
use num_complex::Complex64;

use crate::error::{Error, Result};

/// Wraps a spatial frequency into `[-pi, pi)`.
pub fn wrap_frequency(omega: f64) -> f64 {
    let mut r = (omega + PI) % TAU;
    if r < 0.0 {
        r += TAU;
    }
    r - PI
}

/// Spatial frequency of grid index `k` on an `n`-point grid.
pub fn grid_frequency(k: usize, n: usize) -> f64 {
    wrap_frequency(TAU * k as f64 / n as f64)
}

/// One axis of quantized spatial frequencies.
#[derive(Debug, Clone, PartialEq)]
pub struct SteeringGrid {
    size: usize,
    spatial_frequencies: Vec<f64>,
}

impl SteeringGrid {
    pub fn new(size: usize) -> Result<Self> {
        if size == 0 {
            return Err(Error::Dimension {
                what: "grid size",
                expected: 1,
                got: 0,
            });
        }
        let spatial_frequencies = (0..size).map(|k| grid_frequency(k, size)).collect();
        Ok(SteeringGrid {
            size,
            spatial_frequencies,
        })
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn frequencies(&self) -> &[f64] {
        &self.spatial_frequencies
    }

    pub fn frequency(&self, k: usize) -> f64 {
        self.spatial_frequencies[k]
    }

    /// Index whose frequency is circularly nearest to `omega`.
    pub fn nearest_index(&self, omega: f64) -> usize {
        let n = self.size as i64;
        let k = (omega * self.size as f64 / TAU).round() as i64;
        k.rem_euclid(n) as usize
    }
}

/// Unit-norm uniform linear array response: entry `n` is
/// `exp(i * n * spatial_frequency) / sqrt(size)`.
pub fn ula_steering(size: usize, spatial_frequency: f64) -> Result<Vec<Complex64>> {
    if size == 0 {
        return Err(Error::Dimension {
            what: "ula size",
            expected: 1,
            got: 0,
        });
    }
    let scale = 1.0 / (size as f64).sqrt();
    Ok((0..size)
        .map(|n| Complex64::from_polar(scale, spatial_frequency * n as f64))
        .collect())
}

/// Unit-norm planar array response: Kronecker product of the two axis
/// responses, y-major element order (element `(iy, iz)` at `iy * size_z + iz`).
pub fn upa_steering(
    size_y: usize,
    size_z: usize,
    freq_y: f64,
    freq_z: f64,
) -> Result<Vec<Complex64>> {
    let ay = ula_steering(size_y, freq_y)?;
    let az = ula_steering(size_z, freq_z)?;
    let mut out = Vec::with_capacity(size_y * size_z);
    for y in &ay {
        for z in &az {
            out.push(y * z);
        }
    }
    Ok(out)
}
