//! The `verify` subcommand: runs every cross-validation route for one
//! geometry and prints a pass/fail table with maximum residuals.

use std::process::ExitCode;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use superdir::{
    average_max_directivity, coupling_entry_oracle, directivity, directivity_quadrature_oracle,
    eigen_crosscheck_full, max_directivity, ArrayGeometry, Complex64, CouplingMatrix, Direction,
    ElementIndex, ExcitationVector,
};

use crate::AppError;

struct Check {
    name: &'static str,
    max_residual: f64,
    tol: f64,
}

impl Check {
    fn passed(&self) -> bool {
        self.max_residual < self.tol
    }
}

fn random_direction(rng: &mut impl Rng) -> Direction {
    Direction::new(
        rng.gen_range(0.0..std::f64::consts::PI),
        rng.gen_range(0.0..std::f64::consts::PI),
    )
    .expect("sampled within domain")
}

fn random_excitation(len: usize, rng: &mut impl Rng) -> ExcitationVector {
    ExcitationVector::new(
        (0..len)
            .map(|_| Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
            .collect(),
    )
}

pub fn run(geom: ArrayGeometry, quad_order: usize, seed: u64) -> Result<ExitCode, AppError> {
    let coupling = CouplingMatrix::build(geom).map_err(|e| AppError::Compute(e.to_string()))?;
    println!(
        "verify m={} n={} dx={} dz={} quad_order={} seed={}",
        geom.rows_m(),
        geom.cols_n(),
        geom.dx(),
        geom.dz(),
        quad_order,
        seed
    );
    println!("condition estimate {:.3e}, jitter applied {:.3e}", coupling.condition_estimate(), coupling.jitter_applied());

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut checks = Vec::new();

    // sinc kernel vs half-space Gram integral, entry by entry
    let mut max_res: f64 = 0.0;
    for i in 0..coupling.dim() {
        for j in 0..=i {
            let oracle = coupling_entry_oracle(
                &geom,
                ElementIndex::from_flat(i, geom.cols_n()),
                ElementIndex::from_flat(j, geom.cols_n()),
                quad_order,
            )
            .map_err(|e| AppError::Compute(e.to_string()))?;
            max_res = max_res.max((oracle - coupling.entry(i, j)).abs());
        }
    }
    checks.push(Check { name: "coupling entries vs quadrature", max_residual: max_res, tol: 1e-6 });

    // quadratic-form directivity vs defining-integral directivity
    let mut max_res: f64 = 0.0;
    for _ in 0..20 {
        let j = random_excitation(geom.len(), &mut rng);
        let dir = random_direction(&mut rng);
        let closed = directivity(&j, &coupling, dir)
            .map_err(|e| AppError::Compute(e.to_string()))?
            .linear;
        let oracle = directivity_quadrature_oracle(&j, &geom, dir, quad_order)
            .map_err(|e| AppError::Compute(e.to_string()))?;
        max_res = max_res.max((closed - oracle).abs() / oracle);
    }
    checks.push(Check { name: "directivity vs quadrature", max_residual: max_res, tol: 1e-6 });

    // generalized eigenproblem vs closed form, plus the rank-1 claim
    let mut max_res: f64 = 0.0;
    let mut max_second: f64 = 0.0;
    for _ in 0..5 {
        let dir = random_direction(&mut rng);
        let closed = max_directivity(&coupling, dir)
            .map_err(|e| AppError::Compute(e.to_string()))?
            .linear;
        let (lambda0, _, second) = eigen_crosscheck_full(&coupling, dir, 1e-12)
            .map_err(|e| AppError::Compute(e.to_string()))?;
        max_res = max_res.max((lambda0 - closed).abs() / closed);
        max_second = max_second.max(second / lambda0);
    }
    checks.push(Check { name: "eigen route vs closed form", max_residual: max_res, tol: 1e-8 });
    checks.push(Check { name: "second eigenvalue (rank-1)", max_residual: max_second, tol: 1e-8 });

    // half-space average of G* equals the element count
    let avg = average_max_directivity(&coupling, quad_order)
        .map_err(|e| AppError::Compute(e.to_string()))?;
    let mn = geom.len() as f64;
    let tol = if geom.dx().min(geom.dz()) >= 0.3 { 1e-3 } else { 1e-2 };
    println!("half-space mean {avg:.4} (target {mn})");
    checks.push(Check { name: "half-space mean vs MN", max_residual: (avg - mn).abs() / mn, tol });

    let mut all_ok = true;
    println!("{:<36} {:>12} {:>10} result", "check", "max residual", "tol");
    for check in &checks {
        let ok = check.passed();
        all_ok &= ok;
        println!(
            "{:<36} {:>12.3e} {:>10.0e} {}",
            check.name,
            check.max_residual,
            check.tol,
            if ok { "PASS" } else { "FAIL" }
        );
    }
    if all_ok {
        Ok(ExitCode::SUCCESS)
    } else {
        let first = checks.iter().find(|c| !c.passed()).expect("some check failed");
        Err(AppError::Compute(format!("check failed: {}", first.name)))
    }
}
