//! Spherical-quadrature oracles.
//!
//! These evaluate the defining half-space integrals directly, independently of
//! the closed-form paths they validate: the coupling-entry oracle checks the
//! sinc kernel, the directivity oracle checks the quadratic-form expression.
//! Each oracle re-evaluates at twice the requested order and reports
//! non-convergence if the two disagree.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::array::{array_output, ArrayGeometry, Direction, ElementIndex, ExcitationVector};
use crate::error::{Error, Result};
use crate::quadrature::rule_on_angle_interval;

/// Absolute convergence tolerance for the coupling-entry oracle.
const COUPLING_ORACLE_TOL: f64 = 1e-9;
/// Relative convergence tolerance for the directivity oracle denominator.
const DIRECTIVITY_ORACLE_TOL: f64 = 1e-8;
/// Bound on the imaginary residual of a real-by-symmetry integral.
const IMAG_RESIDUAL_TOL: f64 = 1e-9;

fn coupling_integral(geom: &ArrayGeometry, dn: f64, dm: f64, order: usize) -> Complex64 {
    let (nodes, weights) = rule_on_angle_interval(order);
    let mut acc = Complex64::new(0.0, 0.0);
    for (&theta, &wt) in nodes.iter().zip(&weights) {
        let sin_theta = theta.sin();
        let fz = geom.dz() * theta.cos();
        let mut inner = Complex64::new(0.0, 0.0);
        for (&phi, &wp) in nodes.iter().zip(&weights) {
            let fx = geom.dx() * sin_theta * phi.cos();
            inner += Complex64::from_polar(1.0, 2.0 * PI * (fx * dn + fz * dm)) * wp;
        }
        acc += inner * (sin_theta * wt);
    }
    acc / (2.0 * PI)
}

/// Numerically evaluates the half-space Gram integral behind a single
/// coupling-matrix entry: `(1/2π)·∫∫ e^{j2π·fx·Δn}·e^{j2π·fz·Δm}·sinθ dφ dθ`.
pub fn coupling_entry_oracle(
    geom: &ArrayGeometry,
    i: ElementIndex,
    j: ElementIndex,
    quad_order: usize,
) -> Result<f64> {
    assert!(quad_order >= 8, "quadrature order must be at least 8");
    let dn = i.n as f64 - j.n as f64;
    let dm = i.m as f64 - j.m as f64;
    let coarse = coupling_integral(geom, dn, dm, quad_order);
    let fine = coupling_integral(geom, dn, dm, quad_order * 2);
    let residual = (fine - coarse).norm();
    if residual > COUPLING_ORACLE_TOL {
        return Err(Error::QuadratureNotConverged {
            order: quad_order,
            residual,
            tol: COUPLING_ORACLE_TOL,
        });
    }
    assert!(
        fine.im.abs() < IMAG_RESIDUAL_TOL,
        "imaginary residual {} exceeds bound",
        fine.im
    );
    Ok(fine.re)
}

fn radiated_power_integral(
    j: &ExcitationVector,
    geom: &ArrayGeometry,
    order: usize,
) -> Result<f64> {
    let (nodes, weights) = rule_on_angle_interval(order);
    let mut acc = 0.0;
    for (&theta, &wt) in nodes.iter().zip(&weights) {
        let sin_theta = theta.sin();
        let mut inner = 0.0;
        for (&phi, &wp) in nodes.iter().zip(&weights) {
            let dir = Direction::new(phi, theta)?;
            inner += array_output(j, geom, dir)?.norm_sqr() * wp;
        }
        acc += inner * sin_theta * wt;
    }
    Ok(acc)
}

/// Directivity from its defining ratio: `2π|J|²` over the quadrature of
/// `|J|²·sinβ` across the half space. The independent check of the
/// quadratic-form expression.
pub fn directivity_quadrature_oracle(
    j: &ExcitationVector,
    geom: &ArrayGeometry,
    dir: Direction,
    quad_order: usize,
) -> Result<f64> {
    if j.len() != geom.len() {
        return Err(Error::DimensionMismatch { expected: geom.len(), got: j.len() });
    }
    if j.norm() == 0.0 {
        return Err(Error::ZeroExcitation);
    }
    let coarse = radiated_power_integral(j, geom, quad_order)?;
    let fine = radiated_power_integral(j, geom, quad_order * 2)?;
    let residual = (fine - coarse).abs() / fine.abs();
    if residual > DIRECTIVITY_ORACLE_TOL {
        return Err(Error::QuadratureNotConverged {
            order: quad_order,
            residual,
            tol: DIRECTIVITY_ORACLE_TOL,
        });
    }
    let numerator = 2.0 * PI * array_output(j, geom, dir)?.norm_sqr();
    Ok(numerator / fine)
}
