//! URA geometry, direction domain, element indexing, steering vectors and the
//! array output functional.
//!
//! The array lies in the xz-plane: `cols_n` elements along x with spacing
//! `dx`, `rows_m` elements along z with spacing `dz`. All spacings are stored
//! as dimensionless multiples of the wavelength; the carrier never appears as
//! a separate parameter. Angles are radians throughout.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Uniform rectangular array shape and normalized spacings.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ArrayGeometry {
    rows_m: usize,
    cols_n: usize,
    dx: f64,
    dz: f64,
}

/// Spacings above this many wavelengths are treated as configuration errors.
const MAX_SPACING_WL: f64 = 10.0;

impl ArrayGeometry {
    pub fn new(rows_m: usize, cols_n: usize, dx: f64, dz: f64) -> Result<Self> {
        if rows_m == 0 || cols_n == 0 {
            return Err(Error::InvalidGeometry(format!(
                "element counts must be at least 1, got M={rows_m}, N={cols_n}"
            )));
        }
        for (name, v) in [("dx", dx), ("dz", dz)] {
            if !v.is_finite() || v <= 0.0 {
                return Err(Error::InvalidGeometry(format!(
                    "{name} must be a positive finite number of wavelengths, got {v}"
                )));
            }
            if v > MAX_SPACING_WL {
                return Err(Error::InvalidGeometry(format!(
                    "{name} = {v} wavelengths exceeds the {MAX_SPACING_WL} wavelength limit"
                )));
            }
        }
        Ok(Self { rows_m, cols_n, dx, dz })
    }

    /// Element count along z.
    pub fn rows_m(&self) -> usize {
        self.rows_m
    }

    /// Element count along x.
    pub fn cols_n(&self) -> usize {
        self.cols_n
    }

    /// x-spacing in wavelengths.
    pub fn dx(&self) -> f64 {
        self.dx
    }

    /// z-spacing in wavelengths.
    pub fn dz(&self) -> f64 {
        self.dz
    }

    /// Total element count MN, the dimension of every vector and matrix built
    /// from this geometry.
    pub fn len(&self) -> usize {
        self.rows_m * self.cols_n
    }

    pub fn is_empty(&self) -> bool {
        false // rows_m, cols_n >= 1 by construction
    }

    /// Iterate element indices in flat order.
    pub fn indices(&self) -> impl Iterator<Item = ElementIndex> + '_ {
        let n = self.cols_n;
        (0..self.len()).map(move |flat| ElementIndex::from_flat(flat, n))
    }
}

/// Azimuth/zenith pair on the half-space domain `[0, π] × [0, π]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Direction {
    phi: f64,
    theta: f64,
}

impl Direction {
    pub fn new(phi: f64, theta: f64) -> Result<Self> {
        for (name, v) in [("phi", phi), ("theta", theta)] {
            if !v.is_finite() || !(0.0..=PI).contains(&v) {
                return Err(Error::InvalidDirection(format!(
                    "{name} must lie in [0, pi] radians, got {v}"
                )));
            }
        }
        Ok(Self { phi, theta })
    }

    /// Direction normal to the array plane: φ = θ = π/2.
    pub fn broadside() -> Self {
        Self { phi: PI / 2.0, theta: PI / 2.0 }
    }

    pub fn phi(&self) -> f64 {
        self.phi
    }

    pub fn theta(&self) -> f64 {
        self.theta
    }
}

/// 2-D element index and its flattened form, `flat = m·N + n` (x-index
/// fastest). All modules share this convention.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ElementIndex {
    pub m: usize,
    pub n: usize,
}

impl ElementIndex {
    pub fn from_flat(flat: usize, cols_n: usize) -> Self {
        Self { m: flat / cols_n, n: flat % cols_n }
    }

    pub fn flat(&self, cols_n: usize) -> usize {
        self.m * cols_n + self.n
    }
}

/// Complex element currents, length MN of the associated geometry.
#[derive(Debug, Clone, PartialEq)]
pub struct ExcitationVector(Vec<Complex64>);

impl ExcitationVector {
    pub fn new(entries: Vec<Complex64>) -> Self {
        Self(entries)
    }

    /// Uniform in-phase excitation.
    pub fn ones(len: usize) -> Self {
        Self(vec![Complex64::new(1.0, 0.0); len])
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn entries(&self) -> &[Complex64] {
        &self.0
    }

    pub fn norm(&self) -> f64 {
        self.0.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn scaled(&self, c: Complex64) -> Self {
        Self(self.0.iter().map(|z| z * c).collect())
    }
}

impl From<Vec<Complex64>> for ExcitationVector {
    fn from(v: Vec<Complex64>) -> Self {
        Self(v)
    }
}

/// Discrete spatial frequencies `(fx, fz)` of the propagation direction:
/// `fx = dx·sinθ·cosφ`, `fz = dz·cosθ`.
pub fn spatial_frequencies(geom: &ArrayGeometry, dir: Direction) -> (f64, f64) {
    let fx = geom.dx * dir.theta.sin() * dir.phi.cos();
    let fz = geom.dz * dir.theta.cos();
    (fx, fz)
}

/// Far-field steering vector: entry at flat index m·N + n is
/// `exp(+j·2π·(n·fx + m·fz))`. Every entry has unit modulus and the first is
/// exactly 1.
pub fn steering_vector(geom: &ArrayGeometry, dir: Direction) -> Vec<Complex64> {
    let (fx, fz) = spatial_frequencies(geom, dir);
    geom.indices()
        .map(|idx| {
            let phase = 2.0 * PI * (idx.n as f64 * fx + idx.m as f64 * fz);
            Complex64::from_polar(1.0, phase)
        })
        .collect()
}

/// Array output `J = a^H j` in the given direction.
pub fn array_output(j: &ExcitationVector, geom: &ArrayGeometry, dir: Direction) -> Result<Complex64> {
    if j.len() != geom.len() {
        return Err(Error::DimensionMismatch { expected: geom.len(), got: j.len() });
    }
    let a = steering_vector(geom, dir);
    Ok(a.iter().zip(j.entries()).map(|(ai, ji)| ai.conj() * ji).sum())
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use proptest::prelude::*;

    #[test]
    fn geometry_rejects_bad_parameters() {
        assert!(ArrayGeometry::new(0, 8, 0.5, 0.5).is_err());
        assert!(ArrayGeometry::new(4, 0, 0.5, 0.5).is_err());
        assert!(ArrayGeometry::new(4, 8, 0.0, 0.5).is_err());
        assert!(ArrayGeometry::new(4, 8, -0.1, 0.5).is_err());
        assert!(ArrayGeometry::new(4, 8, 0.5, 10.5).is_err());
        assert!(ArrayGeometry::new(4, 8, f64::NAN, 0.5).is_err());
        assert!(ArrayGeometry::new(4, 8, 0.5, 0.5).is_ok());
    }

    #[test]
    fn direction_rejects_out_of_domain() {
        assert!(Direction::new(-0.1, 1.0).is_err());
        assert!(Direction::new(1.0, PI + 0.1).is_err());
        assert!(Direction::new(0.0, PI).is_ok());
    }

    #[test]
    fn spatial_frequencies_match_hand_values() {
        let g = ArrayGeometry::new(2, 2, 0.5, 0.5).unwrap();
        // broadside zeroes both projections
        let (fx, fz) = spatial_frequencies(&g, Direction::broadside());
        assert_abs_diff_eq!(fx, 0.0, epsilon = 1e-15);
        assert_abs_diff_eq!(fz, 0.0, epsilon = 1e-15);
        // x-axis endfire
        let (fx, fz) = spatial_frequencies(&g, Direction::new(0.0, PI / 2.0).unwrap());
        assert_abs_diff_eq!(fx, 0.5, epsilon = 1e-15);
        assert_abs_diff_eq!(fz, 0.0, epsilon = 1e-15);
        // 45-degree zenith at 0.45 wavelength spacing
        let g = ArrayGeometry::new(2, 2, 0.45, 0.45).unwrap();
        let (fx, fz) = spatial_frequencies(&g, Direction::new(0.0, PI / 4.0).unwrap());
        assert_abs_diff_eq!(fx, 0.45 * std::f64::consts::FRAC_1_SQRT_2, epsilon = 1e-15);
        assert_abs_diff_eq!(fz, 0.45 * std::f64::consts::FRAC_1_SQRT_2, epsilon = 1e-15);
    }

    #[test]
    fn steering_vector_examples() {
        let g = ArrayGeometry::new(1, 1, 0.5, 0.5).unwrap();
        let a = steering_vector(&g, Direction::new(0.3, 1.1).unwrap());
        assert_eq!(a, vec![Complex64::new(1.0, 0.0)]);

        let g = ArrayGeometry::new(1, 2, 0.5, 0.5).unwrap();
        let a = steering_vector(&g, Direction::broadside());
        for ai in &a {
            assert_abs_diff_eq!(ai.re, 1.0, epsilon = 1e-15);
            assert_abs_diff_eq!(ai.im, 0.0, epsilon = 1e-15);
        }

        // two elements along z, wave from theta = 0: fz = 0.5, phase pi
        let g = ArrayGeometry::new(2, 1, 0.5, 0.5).unwrap();
        let a = steering_vector(&g, Direction::new(0.0, 0.0).unwrap());
        assert_abs_diff_eq!(a[1].re, -1.0, epsilon = 1e-12);
        assert_abs_diff_eq!(a[1].im, 0.0, epsilon = 1e-12);
    }

    #[test]
    fn array_output_examples() {
        let g = ArrayGeometry::new(4, 8, 0.5, 0.5).unwrap();
        let j = ExcitationVector::ones(32);
        let out = array_output(&j, &g, Direction::broadside()).unwrap();
        assert_abs_diff_eq!(out.re, 32.0, epsilon = 1e-12);
        assert_abs_diff_eq!(out.im, 0.0, epsilon = 1e-12);

        // matched filter: a^H a = MN
        let dir = Direction::new(0.7, 2.1).unwrap();
        let j = ExcitationVector::new(steering_vector(&g, dir));
        let out = array_output(&j, &g, dir).unwrap();
        assert_abs_diff_eq!(out.re, 32.0, epsilon = 1e-10);
        assert_abs_diff_eq!(out.im, 0.0, epsilon = 1e-10);

        // hand evaluation, two-element ULA, endfire, alternating signs
        let g = ArrayGeometry::new(1, 2, 0.5, 0.5).unwrap();
        let j = ExcitationVector::new(vec![Complex64::new(1.0, 0.0), Complex64::new(-1.0, 0.0)]);
        let out = array_output(&j, &g, Direction::new(0.0, PI / 2.0).unwrap()).unwrap();
        assert_abs_diff_eq!(out.re, 2.0, epsilon = 1e-12);
        assert_abs_diff_eq!(out.im, 0.0, epsilon = 1e-12);
    }

    #[test]
    fn array_output_dimension_mismatch() {
        let g = ArrayGeometry::new(2, 2, 0.5, 0.5).unwrap();
        let j = ExcitationVector::ones(3);
        assert!(matches!(
            array_output(&j, &g, Direction::broadside()),
            Err(Error::DimensionMismatch { expected: 4, got: 3 })
        ));
    }

    proptest! {
        #[test]
        fn steering_entries_have_unit_modulus(
            m in 1usize..5, n in 1usize..5,
            dx in 0.05f64..2.0, dz in 0.05f64..2.0,
            phi in 0.0f64..PI, theta in 0.0f64..PI,
        ) {
            let g = ArrayGeometry::new(m, n, dx, dz).unwrap();
            let a = steering_vector(&g, Direction::new(phi, theta).unwrap());
            prop_assert_eq!(a[0], Complex64::new(1.0, 0.0));
            for ai in &a {
                prop_assert!((ai.norm() - 1.0).abs() < 1e-12);
            }
        }

        #[test]
        fn flat_index_round_trips(n in 1usize..10, flat in 0usize..100) {
            let idx = ElementIndex::from_flat(flat, n);
            prop_assert_eq!(idx.flat(n), flat);
        }

        #[test]
        fn output_matches_direct_double_sum(
            m in 1usize..4, n in 1usize..4,
            phi in 0.0f64..PI, theta in 0.0f64..PI,
            seed in 0u64..1000,
        ) {
            use rand::{Rng, SeedableRng};
            let g = ArrayGeometry::new(m, n, 0.37, 0.61).unwrap();
            let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
            let j: Vec<Complex64> = (0..g.len())
                .map(|_| Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
                .collect();
            let dir = Direction::new(phi, theta).unwrap();
            let (fx, fz) = spatial_frequencies(&g, dir);
            let mut direct = Complex64::new(0.0, 0.0);
            for mi in 0..m {
                for ni in 0..n {
                    let phase = -2.0 * PI * (fx * ni as f64 + fz * mi as f64);
                    direct += j[mi * n + ni] * Complex64::from_polar(1.0, phase);
                }
            }
            let out = array_output(&ExcitationVector::new(j), &g, dir).unwrap();
            prop_assert!((out - direct).norm() < 1e-10);
        }

        #[test]
        fn broadside_steering_is_all_ones(m in 1usize..6, n in 1usize..6) {
            let g = ArrayGeometry::new(m, n, 0.5, 0.45).unwrap();
            for ai in steering_vector(&g, Direction::broadside()) {
                prop_assert!((ai - Complex64::new(1.0, 0.0)).norm() < 1e-12);
            }
        }
    }
}
