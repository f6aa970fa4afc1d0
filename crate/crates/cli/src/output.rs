//! CSV and JSON serialization.
//!
//! CSV values are written with nine decimal places; re-parsing an emitted file
//! reproduces the stored values at that precision. Data files carry no
//! timestamps, so identical configurations produce byte-identical output.

use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::PathBuf;

use serde::Serialize;

use superdir::{
    ArrayGeometry, CouplingMatrix, Direction, ElementIndex, OptimalExcitation, PatternGrid,
    PatternKind, SweepResult,
};

use crate::{Format, OutputOpts};

fn writer(out: &Option<PathBuf>) -> std::io::Result<Box<dyn Write>> {
    Ok(match out {
        Some(path) => Box::new(BufWriter::new(File::create(path)?)),
        None => Box::new(std::io::stdout().lock()),
    })
}

#[derive(Serialize)]
struct GeometryJson {
    m: usize,
    n: usize,
    dx: f64,
    dz: f64,
}

impl From<&ArrayGeometry> for GeometryJson {
    fn from(g: &ArrayGeometry) -> Self {
        Self { m: g.rows_m(), n: g.cols_n(), dx: g.dx(), dz: g.dz() }
    }
}

pub fn write_pattern(grid: &PatternGrid, opts: &OutputOpts) -> std::io::Result<()> {
    let mut w = writer(&opts.out)?;
    match opts.format.unwrap_or(Format::Csv) {
        Format::Csv => {
            if !opts.no_banner {
                let g = &grid.geom;
                writeln!(
                    w,
                    "# superdir pattern m={} n={} dx={} dz={} phi_count={} theta_count={}",
                    g.rows_m(),
                    g.cols_n(),
                    g.dx(),
                    g.dz(),
                    grid.phi_samples.len(),
                    grid.theta_samples.len()
                )?;
            }
            writeln!(w, "phi_deg,theta_deg,directivity_db")?;
            for (pi, &phi) in grid.phi_samples.iter().enumerate() {
                for (ti, &theta) in grid.theta_samples.iter().enumerate() {
                    writeln!(
                        w,
                        "{:.9},{:.9},{:.9}",
                        phi.to_degrees(),
                        theta.to_degrees(),
                        grid.value(pi, ti)
                    )?;
                }
            }
        }
        Format::Json => {
            #[derive(Serialize)]
            struct PatternJson<'a> {
                kind: &'a str,
                geometry: GeometryJson,
                phi_deg: Vec<f64>,
                theta_deg: Vec<f64>,
                values_db: Vec<&'a [f64]>,
            }
            let doc = PatternJson {
                kind: match grid.kind {
                    PatternKind::MaxDirectivity => "max_directivity",
                    PatternKind::FixedExcitation => "fixed_excitation",
                },
                geometry: (&grid.geom).into(),
                phi_deg: grid.phi_samples.iter().map(|v| v.to_degrees()).collect(),
                theta_deg: grid.theta_samples.iter().map(|v| v.to_degrees()).collect(),
                values_db: grid.values_db.chunks(grid.theta_samples.len()).collect(),
            };
            serde_json::to_writer_pretty(&mut w, &doc)?;
            writeln!(w)?;
        }
    }
    w.flush()
}

pub fn write_cut(
    geom: &ArrayGeometry,
    cut: &[(f64, f64)],
    opts: &OutputOpts,
) -> std::io::Result<()> {
    let mut w = writer(&opts.out)?;
    match opts.format.unwrap_or(Format::Csv) {
        Format::Csv => {
            if !opts.no_banner {
                writeln!(
                    w,
                    "# superdir cut m={} n={} dx={} dz={} phi=0",
                    geom.rows_m(),
                    geom.cols_n(),
                    geom.dx(),
                    geom.dz()
                )?;
            }
            writeln!(w, "theta_deg,directivity_db")?;
            for &(theta, db) in cut {
                writeln!(w, "{:.9},{:.9}", theta.to_degrees(), db)?;
            }
        }
        Format::Json => {
            #[derive(Serialize)]
            struct CutJson {
                geometry: GeometryJson,
                phi_deg: f64,
                theta_deg: Vec<f64>,
                directivity_db: Vec<f64>,
            }
            let doc = CutJson {
                geometry: geom.into(),
                phi_deg: 0.0,
                theta_deg: cut.iter().map(|(t, _)| t.to_degrees()).collect(),
                directivity_db: cut.iter().map(|&(_, v)| v).collect(),
            };
            serde_json::to_writer_pretty(&mut w, &doc)?;
            writeln!(w)?;
        }
    }
    w.flush()
}

pub fn write_sweep(sweep: &SweepResult, opts: &OutputOpts) -> std::io::Result<()> {
    let mut w = writer(&opts.out)?;
    match opts.format.unwrap_or(Format::Csv) {
        Format::Csv => {
            if !opts.no_banner {
                writeln!(w, "# superdir sweep phi={}", sweep.phi)?;
            }
            writeln!(w, "spacing_wl,theta_deg,directivity_db")?;
            for cut in &sweep.cuts {
                match &cut.outcome {
                    Ok(values) => {
                        for (&theta, &db) in sweep.theta_samples.iter().zip(values) {
                            writeln!(w, "{},{:.9},{:.9}", cut.dx, theta.to_degrees(), db)?;
                        }
                    }
                    Err(e) => writeln!(w, "# spacing {} failed: {e}", cut.dx)?,
                }
            }
        }
        Format::Json => {
            #[derive(Serialize)]
            struct CutEntry {
                spacing_wl: f64,
                directivity_db: Option<Vec<f64>>,
                error: Option<String>,
            }
            #[derive(Serialize)]
            struct SweepJson {
                phi_deg: f64,
                theta_deg: Vec<f64>,
                cuts: Vec<CutEntry>,
            }
            let doc = SweepJson {
                phi_deg: sweep.phi.to_degrees(),
                theta_deg: sweep.theta_samples.iter().map(|v| v.to_degrees()).collect(),
                cuts: sweep
                    .cuts
                    .iter()
                    .map(|cut| match &cut.outcome {
                        Ok(values) => CutEntry {
                            spacing_wl: cut.dx,
                            directivity_db: Some(values.clone()),
                            error: None,
                        },
                        Err(e) => CutEntry {
                            spacing_wl: cut.dx,
                            directivity_db: None,
                            error: Some(e.to_string()),
                        },
                    })
                    .collect(),
            };
            serde_json::to_writer_pretty(&mut w, &doc)?;
            writeln!(w)?;
        }
    }
    w.flush()
}

pub fn write_weights(
    geom: &ArrayGeometry,
    coupling: &CouplingMatrix,
    dir: Direction,
    opt: &OptimalExcitation,
    opts: &OutputOpts,
) -> std::io::Result<()> {
    #[derive(Serialize)]
    struct WeightJson {
        m: usize,
        n: usize,
        re: f64,
        im: f64,
        abs: f64,
        phase_deg: f64,
    }
    #[derive(Serialize)]
    struct DirectionJson {
        phi_rad: f64,
        theta_rad: f64,
        phi_deg: f64,
        theta_deg: f64,
    }
    #[derive(Serialize)]
    struct WeightsDoc {
        geometry: GeometryJson,
        direction: DirectionJson,
        g_star_db: f64,
        g_star_linear: f64,
        condition_estimate: f64,
        jitter_applied: f64,
        normalization: &'static str,
        weights: Vec<WeightJson>,
    }
    let doc = WeightsDoc {
        geometry: geom.into(),
        direction: DirectionJson {
            phi_rad: dir.phi(),
            theta_rad: dir.theta(),
            phi_deg: dir.phi().to_degrees(),
            theta_deg: dir.theta().to_degrees(),
        },
        g_star_db: opt.achieved.db,
        g_star_linear: opt.achieved.linear,
        condition_estimate: coupling.condition_estimate(),
        jitter_applied: coupling.jitter_applied(),
        normalization: "unit_norm_leading_real_positive",
        weights: opt
            .weights
            .entries()
            .iter()
            .enumerate()
            .map(|(flat, z)| {
                let idx = ElementIndex::from_flat(flat, geom.cols_n());
                WeightJson {
                    m: idx.m,
                    n: idx.n,
                    re: z.re,
                    im: z.im,
                    abs: z.norm(),
                    phase_deg: z.arg().to_degrees(),
                }
            })
            .collect(),
    };
    let mut w = writer(&opts.out)?;
    serde_json::to_writer_pretty(&mut w, &doc)?;
    writeln!(w)?;
    w.flush()
}
