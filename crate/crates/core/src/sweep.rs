//! Angular grids, plane cuts and spacing sweeps over the maximum-directivity
//! surface.

use std::f64::consts::PI;

use crate::array::{ArrayGeometry, Direction, ExcitationVector};
use crate::coupling::CouplingMatrix;
use crate::directivity::{directivity, max_directivity};
use crate::error::Result;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PatternKind {
    MaxDirectivity,
    FixedExcitation,
}

/// Directivity in dB sampled over a (φ, θ) grid.
#[derive(Debug, Clone)]
pub struct PatternGrid {
    pub geom: ArrayGeometry,
    pub phi_samples: Vec<f64>,
    pub theta_samples: Vec<f64>,
    /// Row-major, phi-major: `values_db[pi * theta_samples.len() + ti]`.
    pub values_db: Vec<f64>,
    pub kind: PatternKind,
    pub excitation: Option<ExcitationVector>,
}

impl PatternGrid {
    pub fn value(&self, phi_idx: usize, theta_idx: usize) -> f64 {
        self.values_db[phi_idx * self.theta_samples.len() + theta_idx]
    }

    /// Peak value and its (phi, theta) location in radians.
    pub fn peak(&self) -> (f64, f64, f64) {
        let mut best = (f64::NEG_INFINITY, 0.0, 0.0);
        for (pi, &phi) in self.phi_samples.iter().enumerate() {
            for (ti, &theta) in self.theta_samples.iter().enumerate() {
                let v = self.value(pi, ti);
                if v > best.0 {
                    best = (v, phi, theta);
                }
            }
        }
        best
    }
}

fn uniform_samples(count: usize) -> Vec<f64> {
    (0..count).map(|k| PI * k as f64 / (count - 1) as f64).collect()
}

/// Maximum directivity over a uniform (φ, θ) grid with inclusive endpoints.
pub fn pattern_grid(
    coupling: &CouplingMatrix,
    phi_count: usize,
    theta_count: usize,
) -> Result<PatternGrid> {
    assert!(phi_count >= 2 && theta_count >= 2, "grid counts must be at least 2");
    let phi_samples = uniform_samples(phi_count);
    let theta_samples = uniform_samples(theta_count);
    let mut values_db = Vec::with_capacity(phi_count * theta_count);
    for &phi in &phi_samples {
        for &theta in &theta_samples {
            values_db.push(max_directivity(coupling, Direction::new(phi, theta)?)?.db);
        }
    }
    Ok(PatternGrid {
        geom: *coupling.geom(),
        phi_samples,
        theta_samples,
        values_db,
        kind: PatternKind::MaxDirectivity,
        excitation: None,
    })
}

/// Directivity of one fixed excitation over a uniform (φ, θ) grid.
pub fn pattern_grid_fixed(
    coupling: &CouplingMatrix,
    j: &ExcitationVector,
    phi_count: usize,
    theta_count: usize,
) -> Result<PatternGrid> {
    assert!(phi_count >= 2 && theta_count >= 2, "grid counts must be at least 2");
    let phi_samples = uniform_samples(phi_count);
    let theta_samples = uniform_samples(theta_count);
    let mut values_db = Vec::with_capacity(phi_count * theta_count);
    for &phi in &phi_samples {
        for &theta in &theta_samples {
            values_db.push(directivity(j, coupling, Direction::new(phi, theta)?)?.db);
        }
    }
    Ok(PatternGrid {
        geom: *coupling.geom(),
        phi_samples,
        theta_samples,
        values_db,
        kind: PatternKind::FixedExcitation,
        excitation: Some(j.clone()),
    })
}

/// G* in dB along the endfire plane (φ = 0, θ swept uniformly over [0, π]).
pub fn endfire_plane_cut(coupling: &CouplingMatrix, theta_count: usize) -> Result<Vec<(f64, f64)>> {
    assert!(theta_count >= 2, "theta count must be at least 2");
    uniform_samples(theta_count)
        .into_iter()
        .map(|theta| Ok((theta, max_directivity(coupling, Direction::new(0.0, theta)?)?.db)))
        .collect()
}

/// One spacing's endfire cut, or the failure that prevented it.
#[derive(Debug)]
pub struct SpacingCut {
    pub dx: f64,
    pub dz: f64,
    /// dB values aligned with `SweepResult::theta_samples`.
    pub outcome: Result<Vec<f64>>,
}

/// Endfire-plane cuts for a list of equal-axis spacings, with shared theta
/// sampling so the curves overlay directly.
#[derive(Debug)]
pub struct SweepResult {
    /// Fixed azimuth of the cut plane (φ = 0).
    pub phi: f64,
    pub theta_samples: Vec<f64>,
    pub cuts: Vec<SpacingCut>,
}

impl SweepResult {
    pub fn peak_db(&self, cut_idx: usize) -> Option<f64> {
        self.cuts[cut_idx]
            .outcome
            .as_ref()
            .ok()
            .map(|v| v.iter().copied().fold(f64::NEG_INFINITY, f64::max))
    }
}

/// Per-spacing endfire cuts; a failing spacing is recorded in its slot rather
/// than aborting the others.
pub fn spacing_sweep(
    rows_m: usize,
    cols_n: usize,
    spacings: &[f64],
    theta_count: usize,
) -> SweepResult {
    assert!(theta_count >= 2, "theta count must be at least 2");
    let theta_samples = uniform_samples(theta_count);
    let cuts = spacings
        .iter()
        .map(|&s| {
            let outcome = ArrayGeometry::new(rows_m, cols_n, s, s)
                .and_then(CouplingMatrix::build)
                .and_then(|c| {
                    theta_samples
                        .iter()
                        .map(|&theta| {
                            Ok(max_directivity(&c, Direction::new(0.0, theta)?)?.db)
                        })
                        .collect::<Result<Vec<f64>>>()
                });
            SpacingCut { dx: s, dz: s, outcome }
        })
        .collect();
    SweepResult { phi: 0.0, theta_samples, cuts }
}
