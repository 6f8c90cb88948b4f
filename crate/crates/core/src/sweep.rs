//! Entropic-index sweeps, best-row selection and threshold-jump detection.

use std::fmt;

use rayon::prelude::*;

use crate::entropy::{EntropyFunctional, KappaIndex, TsallisIndex};
use crate::error::{Error, Result};
use crate::imaging::{build_histogram, GrayImage};
use crate::threshold::{binarize, edge_pixel_count, optimize_threshold, Connectivity};

/// Index grid used when none is given: every index that appears in the
/// reference tables.
pub const DEFAULT_GRID: [f64; 13] = [
    0.01, 0.05, 0.1, 0.15, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9, 0.99,
];

/// Default jump tolerance in gray levels for [`detect_transitions`].
pub const DEFAULT_JUMP_TOLERANCE: u32 = 20;

/// Indices closer than this are treated as the same grid point.
const GRID_EPSILON: f64 = 1e-9;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum SweepKind {
    Tsallis,
    Kaniadakis,
}

impl fmt::Display for SweepKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            SweepKind::Tsallis => "tsallis",
            SweepKind::Kaniadakis => "kaniadakis",
        })
    }
}

/// Which entropic indices a sweep accepts.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum IndexPolicy {
    /// Open interval `(0, 1)`; the endpoints are excluded.
    #[default]
    UnitInterval,
    /// Tsallis `q > 0, q != 1` and Kaniadakis `κ != 0`, including `|κ| ≥ 1`.
    Extended,
}

impl IndexPolicy {
    /// Validates `x` for `kind` and builds the functional.
    pub fn functional(self, kind: SweepKind, x: f64) -> Result<EntropyFunctional> {
        let name = match kind {
            SweepKind::Tsallis => "tsallis",
            SweepKind::Kaniadakis => "kaniadakis",
        };
        if self == IndexPolicy::UnitInterval && !(x > 0.0 && x < 1.0) {
            return Err(Error::InvalidIndex {
                kind: name,
                value: x,
                reason: "index must lie strictly inside (0, 1)",
            });
        }
        match (kind, self) {
            (SweepKind::Tsallis, _) => TsallisIndex::new(x).map(EntropyFunctional::Tsallis),
            (SweepKind::Kaniadakis, IndexPolicy::UnitInterval) => {
                KappaIndex::new(x).map(EntropyFunctional::Kaniadakis)
            }
            (SweepKind::Kaniadakis, IndexPolicy::Extended) => {
                KappaIndex::extended(x).map(EntropyFunctional::Kaniadakis)
            }
        }
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct SweepOptions {
    pub connectivity: Connectivity,
    pub policy: IndexPolicy,
}

/// Optimal threshold and edge-pixel count at one entropic index.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SweepRow {
    pub index: f64,
    pub threshold: u8,
    pub edge_pixels: usize,
}

/// Sweep rows for one functional, in strictly increasing index order.
#[derive(Clone, Debug, PartialEq)]
pub struct SweepTable {
    kind: SweepKind,
    rows: Vec<SweepRow>,
}

impl SweepTable {
    pub fn new(kind: SweepKind, rows: Vec<SweepRow>) -> Result<Self> {
        if let Some(r) = rows.iter().find(|r| !r.index.is_finite()) {
            return Err(Error::InvalidTable(format!(
                "index {} is not finite",
                r.index
            )));
        }
        if let Some(w) = rows.windows(2).find(|w| w[0].index >= w[1].index) {
            return Err(Error::InvalidTable(format!(
                "indices {} and {} are not strictly increasing",
                w[0].index, w[1].index
            )));
        }
        Ok(Self { kind, rows })
    }

    pub fn kind(&self) -> SweepKind {
        self.kind
    }

    pub fn rows(&self) -> &[SweepRow] {
        &self.rows
    }

    pub fn indices(&self) -> impl Iterator<Item = f64> + '_ {
        self.rows.iter().map(|r| r.index)
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    pub fn len(&self) -> usize {
        self.rows.len()
    }
}

/// For each index: optimize the threshold, binarize and count edge pixels.
///
/// The histogram is built once. Indices may come in any order; rows come
/// back sorted. Work items run in parallel and the result does not depend
/// on scheduling.
pub fn sweep(
    img: &GrayImage,
    kind: SweepKind,
    indices: &[f64],
    opts: SweepOptions,
) -> Result<SweepTable> {
    if indices.is_empty() {
        return Err(Error::Domain("sweep needs at least one index".into()));
    }
    let mut functionals = indices
        .iter()
        .map(|&x| Ok((x, opts.policy.functional(kind, x)?)))
        .collect::<Result<Vec<_>>>()?;
    functionals.sort_by(|a, b| a.0.total_cmp(&b.0));
    if let Some(w) = functionals.windows(2).find(|w| w[0].0 == w[1].0) {
        return Err(Error::Domain(format!("duplicate index {}", w[0].0)));
    }

    let hist = build_histogram(img);
    if hist.occupied_levels() < 2 {
        return Err(Error::Infeasible);
    }
    let rows = functionals
        .par_iter()
        .map(|&(index, f)| {
            let threshold = optimize_threshold(&hist, &f)?.threshold;
            let edge_pixels = edge_pixel_count(&binarize(img, threshold), opts.connectivity);
            Ok(SweepRow {
                index,
                threshold,
                edge_pixels,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    SweepTable::new(kind, rows)
}

/// Row with the most edge pixels; ties go to the smallest index.
pub fn select_best(table: &SweepTable) -> Result<SweepRow> {
    table
        .rows()
        .iter()
        .copied()
        .reduce(|best, r| {
            if r.edge_pixels > best.edge_pixels {
                r
            } else {
                best
            }
        })
        .ok_or(Error::EmptyTable)
}

/// Adjacent pair of sweep rows whose thresholds differ by more than the tolerance.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Transition {
    pub index_before: f64,
    pub index_after: f64,
    pub threshold_before: u8,
    pub threshold_after: u8,
}

impl Transition {
    pub fn jump(&self) -> u32 {
        self.threshold_before.abs_diff(self.threshold_after) as u32
    }
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct TransitionReport {
    pub jumps: Vec<Transition>,
}

impl TransitionReport {
    pub fn is_empty(&self) -> bool {
        self.jumps.is_empty()
    }
}

/// Reports adjacent rows whose thresholds differ by more than `jump_tolerance`.
pub fn detect_transitions(table: &SweepTable, jump_tolerance: u32) -> TransitionReport {
    let jumps = table
        .rows()
        .windows(2)
        .map(|w| Transition {
            index_before: w[0].index,
            index_after: w[1].index,
            threshold_before: w[0].threshold,
            threshold_after: w[1].threshold,
        })
        .filter(|t| t.jump() > jump_tolerance)
        .collect();
    TransitionReport { jumps }
}

/// `threshold_T(x) - threshold_K(1 - x)` at one grid index.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct MirrorPair {
    pub index: f64,
    pub tsallis_threshold: u8,
    pub kaniadakis_threshold: u8,
    pub difference: i32,
}

/// Pairs each Tsallis row at `x` with the Kaniadakis row at `1 - x`, for
/// every `x` whose mirror is on the grid. Both tables must share one grid.
pub fn mirror_check(tsallis: &SweepTable, kaniadakis: &SweepTable) -> Result<Vec<MirrorPair>> {
    let same_grid = tsallis.len() == kaniadakis.len()
        && tsallis
            .indices()
            .zip(kaniadakis.indices())
            .all(|(a, b)| (a - b).abs() <= GRID_EPSILON);
    if !same_grid {
        return Err(Error::GridMismatch);
    }
    let pairs = tsallis
        .rows()
        .iter()
        .filter_map(|t| {
            let mirror = 1.0 - t.index;
            let k = kaniadakis
                .rows()
                .iter()
                .find(|k| (k.index - mirror).abs() <= GRID_EPSILON)?;
            Some(MirrorPair {
                index: t.index,
                tsallis_threshold: t.threshold,
                kaniadakis_threshold: k.threshold,
                difference: t.threshold as i32 - k.threshold as i32,
            })
        })
        .collect();
    Ok(pairs)
}
