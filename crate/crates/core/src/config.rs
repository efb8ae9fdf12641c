//! System dimensions and search parameters.

use crate::error::{Error, Result};

/// Array sizes, simultaneous-beam counts, and search parameters. This is
/// the single source of dimensional truth for an experiment.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SystemConfig {
    /// Transmit antennas at the base station.
    pub n_t: usize,
    /// Receive antennas at the user.
    pub n_r: usize,
    /// Reflecting elements along the surface's y axis.
    pub m_y: usize,
    /// Reflecting elements along the surface's z axis.
    pub m_z: usize,
    /// Simultaneous beams formed at the base station.
    pub r_bs: usize,
    /// Simultaneous beams formed at the user.
    pub r_ue: usize,
    /// Simultaneous reflecting beams at the surface.
    pub q: usize,
    /// Batch-mode scanning rounds for the multi-directional search.
    pub rounds: usize,
    /// Branching factor of the hierarchical codebooks.
    pub branching: usize,
}

impl SystemConfig {
    /// Total reflecting elements.
    pub fn m(&self) -> usize {
        self.m_y * self.m_z
    }

    /// Number of candidate beam triples.
    pub fn tuple_count(&self) -> usize {
        self.n_t * self.n_r * self.m()
    }

    /// Bins per scanning round.
    pub fn bins_per_round(&self) -> usize {
        (self.n_t / self.r_bs) * (self.n_r / self.r_ue) * (self.m() / self.q)
    }

    pub fn validate(&self) -> Result<()> {
        for (what, v) in [
            ("n_t", self.n_t),
            ("n_r", self.n_r),
            ("m_y", self.m_y),
            ("m_z", self.m_z),
            ("r_bs", self.r_bs),
            ("r_ue", self.r_ue),
            ("q", self.q),
        ] {
            if v == 0 {
                return Err(Error::Dimension {
                    what,
                    expected: 1,
                    got: 0,
                });
            }
        }
        if self.branching < 2 {
            return Err(Error::InvalidArgument(alloc::format!(
                "branching must be at least 2, got {}",
                self.branching
            )));
        }
        Ok(())
    }

    /// Checks the per-axis divisibility the binning plan needs.
    pub fn validate_binning(&self) -> Result<()> {
        self.validate()?;
        for (axis, size, group) in [
            ("bs", self.n_t, self.r_bs),
            ("ue", self.n_r, self.r_ue),
            ("ris", self.m(), self.q),
        ] {
            if size % group != 0 {
                return Err(Error::Indivisible { axis, size, group });
            }
        }
        Ok(())
    }
}
