//! DFT codebooks, multi-directional beams, and hierarchical wide-beam
//! codebooks.
//!
//! Base-station and user codebooks are unitary DFT matrices (unit-norm,
//! pairwise-orthogonal columns). The reflecting surface's codebook is the
//! Kronecker product of the two axis DFTs *without* the `1/sqrt(M)` scaling:
//! its entries are unit-modulus phase shifts, and `|c_i^H c_j| = M` exactly
//! when `i == j`, zero otherwise.

#[allow(unused_imports)]
use num_traits::Float;

use alloc::format;
use alloc::vec::Vec;
use num_complex::Complex64;

use crate::config::SystemConfig;
use crate::error::{Error, Result};
use crate::steering::SteeringGrid;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CodebookKind {
    BsPrecoder,
    UeCombiner,
    RisReflection,
}

/// Angular grid behind a codebook: one axis for the linear arrays, a pair of
/// axes for the planar surface (beam index = `ky * m_z + kz`, y-major).
#[derive(Debug, Clone, PartialEq)]
pub enum BeamGrid {
    Linear(SteeringGrid),
    Planar { y: SteeringGrid, z: SteeringGrid },
}

/// Shape argument for [`dft_codebook`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GridShape {
    Linear(usize),
    Planar(usize, usize),
}

/// An indexed family of beams, one per grid point.
#[derive(Debug, Clone, PartialEq)]
pub struct Codebook {
    kind: CodebookKind,
    elements: usize,
    beams: usize,
    /// Beam-major storage: beam `k` occupies `[k * elements, (k+1) * elements)`.
    vectors: Vec<Complex64>,
    grid: BeamGrid,
}

impl Codebook {
    pub fn kind(&self) -> CodebookKind {
        self.kind
    }

    pub fn elements(&self) -> usize {
        self.elements
    }

    pub fn beams(&self) -> usize {
        self.beams
    }

    pub fn grid(&self) -> &BeamGrid {
        &self.grid
    }

    #[inline]
    pub fn column(&self, k: usize) -> &[Complex64] {
        &self.vectors[k * self.elements..(k + 1) * self.elements]
    }
}

/// Builds the DFT codebook for one node.
///
/// `BsPrecoder`/`UeCombiner` take a linear shape, `RisReflection` a planar
/// one; the element order of the planar codebook matches [`crate::upa_steering`].
pub fn dft_codebook(kind: CodebookKind, shape: GridShape) -> Result<Codebook> {
    match (kind, shape) {
        (CodebookKind::BsPrecoder | CodebookKind::UeCombiner, GridShape::Linear(n)) => {
            let grid = SteeringGrid::new(n)?;
            let mut vectors = Vec::with_capacity(n * n);
            for k in 0..n {
                vectors.extend(crate::steering::ula_steering(n, grid.frequency(k))?);
            }
            Ok(Codebook {
                kind,
                elements: n,
                beams: n,
                vectors,
                grid: BeamGrid::Linear(grid),
            })
        }
        (CodebookKind::RisReflection, GridShape::Planar(my, mz)) => {
            let gy = SteeringGrid::new(my)?;
            let gz = SteeringGrid::new(mz)?;
            let m = my * mz;
            let scale = (m as f64).sqrt();
            let mut vectors = Vec::with_capacity(m * m);
            for ky in 0..my {
                for kz in 0..mz {
                    let unit =
                        crate::steering::upa_steering(my, mz, gy.frequency(ky), gz.frequency(kz))?;
                    vectors.extend(unit.into_iter().map(|z| z * scale));
                }
            }
            Ok(Codebook {
                kind,
                elements: m,
                beams: m,
                vectors,
                grid: BeamGrid::Planar { y: gy, z: gz },
            })
        }
        (kind, shape) => Err(Error::InvalidArgument(format!(
            "codebook kind {kind:?} does not take shape {shape:?}"
        ))),
    }
}

/// How simultaneous beams are combined into one transmit/reflect vector.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MultiBeamMode {
    /// `(1/sqrt(k)) * sum` of the selected columns. Unit norm for the
    /// orthonormal BS/UE codebooks; for the surface this models idealized
    /// per-element amplitude control (entries are generally not unit-modulus).
    Amplitude,
    /// Element-wise phase of the column sum; every entry is unit-modulus, so
    /// the vector is realizable with phase shifters alone. An exactly zero
    /// sum takes phase 0. Only meaningful for the reflection codebook.
    PhaseOnly,
}

/// Synthesizes a multi-directional beam from distinct codebook columns.
pub fn multi_beam(book: &Codebook, indices: &[usize], mode: MultiBeamMode) -> Result<Vec<Complex64>> {
    if indices.is_empty() {
        return Err(Error::InvalidArgument("empty beam index set".into()));
    }
    let mut seen = alloc::vec![false; book.beams()];
    for &k in indices {
        if k >= book.beams() {
            return Err(Error::InvalidArgument(format!(
                "beam index {k} out of range for {} beams",
                book.beams()
            )));
        }
        if seen[k] {
            return Err(Error::InvalidArgument(format!("duplicate beam index {k}")));
        }
        seen[k] = true;
    }
    if mode == MultiBeamMode::PhaseOnly && book.kind() != CodebookKind::RisReflection {
        return Err(Error::InvalidArgument(
            "phase-only combining requires the reflection codebook".into(),
        ));
    }

    let mut sum = alloc::vec![Complex64::new(0.0, 0.0); book.elements()];
    for &k in indices {
        for (dst, src) in sum.iter_mut().zip(book.column(k)) {
            *dst += src;
        }
    }
    match mode {
        MultiBeamMode::Amplitude => {
            let scale = 1.0 / (indices.len() as f64).sqrt();
            for z in &mut sum {
                *z *= scale;
            }
            Ok(sum)
        }
        MultiBeamMode::PhaseOnly => Ok(sum
            .into_iter()
            .map(|z| {
                let r = z.norm();
                if r == 0.0 {
                    Complex64::new(1.0, 0.0)
                } else {
                    z / r
                }
            })
            .collect()),
    }
}

/// A multi-resolution codebook over one node's grid.
///
/// Layer `l` (0-based) holds `branching^(l+1)` beams; the node at position
/// `p` covers the contiguous leaf range of width `leaves / branching^(l+1)`
/// starting at `p` times that width. The deepest layer is the DFT codebook.
#[derive(Debug, Clone)]
pub struct HierarchicalCodebook {
    kind: CodebookKind,
    branching: usize,
    leaves: usize,
    elements: usize,
    layers: Vec<Vec<Vec<Complex64>>>,
}

impl HierarchicalCodebook {
    pub fn kind(&self) -> CodebookKind {
        self.kind
    }

    pub fn branching(&self) -> usize {
        self.branching
    }

    pub fn leaves(&self) -> usize {
        self.leaves
    }

    /// Depth of the tree; zero for a single-leaf grid.
    pub fn layer_count(&self) -> usize {
        self.layers.len()
    }

    pub fn beams_in_layer(&self, layer: usize) -> usize {
        self.layers[layer].len()
    }

    pub fn beam(&self, layer: usize, node: usize) -> &[Complex64] {
        &self.layers[layer][node]
    }

    /// Contiguous leaf range `[start, end)` covered by a node.
    pub fn coverage(&self, layer: usize, node: usize) -> (usize, usize) {
        let width = self.leaves / self.layers[layer].len();
        (node * width, (node + 1) * width)
    }

    pub fn elements(&self) -> usize {
        self.elements
    }
}

/// Builds the hierarchical codebook on top of a DFT codebook.
///
/// Wide beams are amplitude combinations of the covered DFT columns for
/// every kind. For the reflection codebook this keeps each wide beam exactly
/// orthogonal to the leaves outside its coverage (after the passivity
/// rescale applied at sounding time), which the search correctness argument
/// relies on; see [`hierarchical_codebook_with_mode`] for the phase-only
/// alternative and its limitation.
pub fn hierarchical_codebook(base: &Codebook, branching: usize) -> Result<HierarchicalCodebook> {
    hierarchical_codebook_with_mode(base, branching, MultiBeamMode::Amplitude)
}

/// As [`hierarchical_codebook`], but with a selectable combining mode for
/// the reflection codebook's wide beams.
///
/// Phase-only projection of a contiguous column block cancels exactly on a
/// large fraction of elements, and the resulting wide beams lose the
/// containment property (a sibling can out-collect the covering node even
/// without noise), so phase-only trees are offered for study rather than
/// used by default.
pub fn hierarchical_codebook_with_mode(
    base: &Codebook,
    branching: usize,
    ris_mode: MultiBeamMode,
) -> Result<HierarchicalCodebook> {
    if branching < 2 {
        return Err(Error::InvalidArgument(format!(
            "branching must be at least 2, got {branching}"
        )));
    }
    let leaves = base.beams();
    let mut depth = 0usize;
    let mut span = 1usize;
    while span < leaves {
        span *= branching;
        depth += 1;
    }
    if span != leaves {
        return Err(Error::NotPowerOf {
            what: "hierarchical codebook",
            size: leaves,
            base: branching,
        });
    }
    let mode = match base.kind() {
        CodebookKind::RisReflection => ris_mode,
        _ => MultiBeamMode::Amplitude,
    };
    let mut layers = Vec::with_capacity(depth);
    for l in 0..depth {
        let nodes = branching.pow(l as u32 + 1);
        let width = leaves / nodes;
        let mut beams = Vec::with_capacity(nodes);
        for node in 0..nodes {
            let cover: Vec<usize> = (node * width..(node + 1) * width).collect();
            beams.push(multi_beam(base, &cover, mode)?);
        }
        layers.push(beams);
    }
    Ok(HierarchicalCodebook {
        kind: base.kind(),
        branching,
        leaves,
        elements: base.elements(),
        layers,
    })
}

/// The three DFT codebooks of one system.
#[derive(Debug, Clone)]
pub struct CodebookSet {
    pub bs: Codebook,
    pub ue: Codebook,
    pub ris: Codebook,
}

impl CodebookSet {
    pub fn for_dims(n_t: usize, n_r: usize, m_y: usize, m_z: usize) -> Result<Self> {
        Ok(CodebookSet {
            bs: dft_codebook(CodebookKind::BsPrecoder, GridShape::Linear(n_t))?,
            ue: dft_codebook(CodebookKind::UeCombiner, GridShape::Linear(n_r))?,
            ris: dft_codebook(CodebookKind::RisReflection, GridShape::Planar(m_y, m_z))?,
        })
    }

    pub fn for_config(cfg: &SystemConfig) -> Result<Self> {
        cfg.validate()?;
        Self::for_dims(cfg.n_t, cfg.n_r, cfg.m_y, cfg.m_z)
    }
}

/// Hierarchical codebooks for all three nodes plus the underlying DFT set.
#[derive(Debug, Clone)]
pub struct HierarchicalCodebookSet {
    pub base: CodebookSet,
    pub bs: HierarchicalCodebook,
    pub ue: HierarchicalCodebook,
    pub ris: HierarchicalCodebook,
}

impl HierarchicalCodebookSet {
    pub fn for_config(cfg: &SystemConfig) -> Result<Self> {
        let base = CodebookSet::for_config(cfg)?;
        let bs = hierarchical_codebook(&base.bs, cfg.branching)?;
        let ue = hierarchical_codebook(&base.ue, cfg.branching)?;
        let ris = hierarchical_codebook(&base.ris, cfg.branching)?;
        Ok(HierarchicalCodebookSet { base, bs, ue, ris })
    }
}
