//! The sinc-kernel mutual-coupling matrix and its Cholesky factorization.
//!
//! For flat indices i, j with 2-D indices (m_i, n_i), (m_j, n_j), the entry is
//! `sinc(2·√(dx²·(n_i−n_j)² + dz²·(m_i−m_j)²))`, the Gram matrix of steering
//! vectors over the half space. The matrix is real symmetric with unit
//! diagonal and depends on index differences only.

use crate::array::{ArrayGeometry, ElementIndex};
use crate::error::{Error, Result};

/// `sin(πx)/(πx)` with the removable singularity handled by a short series
/// below |x| = 1e-6 (truncation error < 1e-26 there, far below round-off of
/// the direct quotient).
pub fn sinc(x: f64) -> f64 {
    let px = std::f64::consts::PI * x;
    if x.abs() < 1e-6 {
        let p2 = px * px;
        1.0 - p2 / 6.0 + p2 * p2 / 120.0
    } else {
        px.sin() / px
    }
}

/// Lower-triangular Cholesky factor of a real symmetric positive-definite
/// matrix, stored densely.
#[derive(Debug, Clone)]
pub struct CholeskyFactor {
    dim: usize,
    lower: Vec<f64>, // row-major, upper part unused
}

impl CholeskyFactor {
    /// In-place right-looking factorization. Returns None on a non-positive
    /// pivot.
    fn compute(matrix: &[f64], dim: usize, jitter: f64) -> Option<Self> {
        let mut l = vec![0.0; dim * dim];
        for i in 0..dim {
            for j in 0..=i {
                let mut s = matrix[i * dim + j];
                if i == j {
                    s += jitter;
                }
                for k in 0..j {
                    s -= l[i * dim + k] * l[j * dim + k];
                }
                if i == j {
                    if s <= 0.0 {
                        return None;
                    }
                    l[i * dim + i] = s.sqrt();
                } else {
                    l[i * dim + j] = s / l[j * dim + j];
                }
            }
        }
        Some(Self { dim, lower: l })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn lower(&self, i: usize, j: usize) -> f64 {
        self.lower[i * self.dim + j]
    }

    /// Cheap condition bound: (max diag / min diag)².
    pub fn condition_estimate(&self) -> f64 {
        let diag = (0..self.dim).map(|i| self.lower[i * self.dim + i]);
        let max = diag.clone().fold(f64::MIN, f64::max);
        let min = diag.fold(f64::MAX, f64::min);
        (max / min).powi(2)
    }

    /// Solve L y = b (forward substitution) for a complex right-hand side.
    pub fn solve_lower<T>(&self, b: &[T]) -> Vec<T>
    where
        T: Copy
            + std::ops::Sub<Output = T>
            + std::ops::Mul<f64, Output = T>
            + std::ops::Div<f64, Output = T>,
    {
        debug_assert_eq!(b.len(), self.dim);
        let mut y = b.to_vec();
        for i in 0..self.dim {
            for k in 0..i {
                y[i] = y[i] - y[k] * self.lower[i * self.dim + k];
            }
            y[i] = y[i] / self.lower[i * self.dim + i];
        }
        y
    }

    /// Solve Lᵀ x = y (back substitution).
    pub fn solve_upper<T>(&self, y: &[T]) -> Vec<T>
    where
        T: Copy
            + std::ops::Sub<Output = T>
            + std::ops::Mul<f64, Output = T>
            + std::ops::Div<f64, Output = T>,
    {
        debug_assert_eq!(y.len(), self.dim);
        let mut x = y.to_vec();
        for i in (0..self.dim).rev() {
            for k in (i + 1)..self.dim {
                x[i] = x[i] - x[k] * self.lower[k * self.dim + i];
            }
            x[i] = x[i] / self.lower[i * self.dim + i];
        }
        x
    }

    /// Solve (L Lᵀ) x = b.
    pub fn solve<T>(&self, b: &[T]) -> Vec<T>
    where
        T: Copy
            + std::ops::Sub<Output = T>
            + std::ops::Mul<f64, Output = T>
            + std::ops::Div<f64, Output = T>,
    {
        self.solve_upper(&self.solve_lower(b))
    }
}

/// Jitter escalation: start at 1e-14·MN, multiply by 100 per retry, stop
/// after 1e-8·MN.
const JITTER_START_PER_ELEMENT: f64 = 1e-14;
const JITTER_MAX_PER_ELEMENT: f64 = 1e-8;
const JITTER_GROWTH: f64 = 100.0;

/// The coupling matrix C together with its factorization diagnostics.
#[derive(Debug, Clone)]
pub struct CouplingMatrix {
    geom: ArrayGeometry,
    entries: Vec<f64>, // row-major MN×MN
    chol: CholeskyFactor,
    condition_estimate: f64,
    jitter_applied: f64,
}

impl CouplingMatrix {
    /// Build C for the geometry and factorize it, escalating diagonal jitter
    /// on failure per the policy above.
    pub fn build(geom: ArrayGeometry) -> Result<Self> {
        let dim = geom.len();
        let n = geom.cols_n();
        let mut entries = vec![0.0; dim * dim];
        for i in 0..dim {
            entries[i * dim + i] = 1.0;
            let ei = ElementIndex::from_flat(i, n);
            for j in 0..i {
                let ej = ElementIndex::from_flat(j, n);
                let dn = ei.n as f64 - ej.n as f64;
                let dm = ei.m as f64 - ej.m as f64;
                let r = 2.0 * (geom.dx() * geom.dx() * dn * dn + geom.dz() * geom.dz() * dm * dm).sqrt();
                let v = sinc(r);
                entries[i * dim + j] = v;
                entries[j * dim + i] = v;
            }
        }

        let mut jitter = 0.0;
        let mut last_condition = f64::INFINITY;
        loop {
            match CholeskyFactor::compute(&entries, dim, jitter) {
                Some(chol) => {
                    let condition_estimate = chol.condition_estimate();
                    return Ok(Self { geom, entries, chol, condition_estimate, jitter_applied: jitter });
                }
                None => {
                    if jitter == 0.0 {
                        jitter = JITTER_START_PER_ELEMENT * dim as f64;
                    } else if jitter < JITTER_MAX_PER_ELEMENT * dim as f64 * 0.999 {
                        jitter *= JITTER_GROWTH;
                    } else {
                        // report the condition of a heavily regularized factor
                        // so the caller sees how bad things are
                        if let Some(f) =
                            CholeskyFactor::compute(&entries, dim, 1e-6 * dim as f64)
                        {
                            last_condition = f.condition_estimate();
                        }
                        return Err(Error::FactorizationFailure {
                            condition_estimate: last_condition,
                        });
                    }
                }
            }
        }
    }

    pub fn geom(&self) -> &ArrayGeometry {
        &self.geom
    }

    pub fn dim(&self) -> usize {
        self.geom.len()
    }

    pub fn entry(&self, i: usize, j: usize) -> f64 {
        self.entries[i * self.dim() + j]
    }

    pub fn entries(&self) -> &[f64] {
        &self.entries
    }

    pub fn chol(&self) -> &CholeskyFactor {
        &self.chol
    }

    pub fn condition_estimate(&self) -> f64 {
        self.condition_estimate
    }

    pub fn jitter_applied(&self) -> f64 {
        self.jitter_applied
    }

    /// Quadratic form j^H C j (real by symmetry; the imaginary residual is
    /// returned alongside for callers that assert on it).
    pub fn quadratic_form(&self, j: &[num_complex::Complex64]) -> (f64, f64) {
        let dim = self.dim();
        debug_assert_eq!(j.len(), dim);
        let mut acc = num_complex::Complex64::new(0.0, 0.0);
        for (i, ji) in j.iter().enumerate() {
            let mut row = num_complex::Complex64::new(0.0, 0.0);
            for (k, jk) in j.iter().enumerate() {
                row += jk * self.entries[i * dim + k];
            }
            acc += ji.conj() * row;
        }
        (acc.re, acc.im)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn sinc_values() {
        assert_eq!(sinc(0.0), 1.0);
        assert_abs_diff_eq!(sinc(1.0), 0.0, epsilon = 1e-15);
        assert_abs_diff_eq!(sinc(2.0), 0.0, epsilon = 1e-15);
        assert_abs_diff_eq!(sinc(-3.0), 0.0, epsilon = 1e-15);
        assert_abs_diff_eq!(sinc(0.5), 2.0 / std::f64::consts::PI, epsilon = 1e-15);
        assert_abs_diff_eq!(sinc(2f64.sqrt()), -0.216954294377476, epsilon = 1e-13);
        // series and direct formula agree at the cutoff
        let x = 1.0000001e-6;
        assert_abs_diff_eq!(sinc(x), sinc(0.9999999e-6), epsilon = 1e-14);
    }

    #[test]
    fn single_element_matrix() {
        let g = ArrayGeometry::new(1, 1, 0.5, 0.5).unwrap();
        let c = CouplingMatrix::build(g).unwrap();
        assert_eq!(c.entries(), &[1.0]);
        assert_eq!(c.jitter_applied(), 0.0);
    }

    #[test]
    fn half_wavelength_ula_decouples() {
        let g = ArrayGeometry::new(1, 2, 0.5, 0.5).unwrap();
        let c = CouplingMatrix::build(g).unwrap();
        assert_eq!(c.entry(0, 0), 1.0);
        assert_eq!(c.entry(1, 1), 1.0);
        assert_abs_diff_eq!(c.entry(0, 1), 0.0, epsilon = 1e-15);
    }

    #[test]
    fn diagonal_neighbors_couple_at_half_wavelength() {
        // elements (0,0) and (1,1) of a 2x2 grid: distance sqrt(2)/2
        let g = ArrayGeometry::new(2, 2, 0.5, 0.5).unwrap();
        let c = CouplingMatrix::build(g).unwrap();
        assert_abs_diff_eq!(c.entry(0, 3), sinc(2f64.sqrt()), epsilon = 1e-15);
        assert_abs_diff_eq!(c.entry(0, 3), -0.2169543, epsilon = 1e-7);
    }

    #[test]
    fn symmetry_and_unit_diagonal_are_exact() {
        let g = ArrayGeometry::new(3, 4, 0.37, 0.61).unwrap();
        let c = CouplingMatrix::build(g).unwrap();
        for i in 0..c.dim() {
            assert_eq!(c.entry(i, i), 1.0);
            for j in 0..c.dim() {
                assert_eq!(c.entry(i, j).to_bits(), c.entry(j, i).to_bits());
                if i != j {
                    assert!(c.entry(i, j).abs() < 1.0);
                }
            }
        }
    }

    #[test]
    fn entries_depend_only_on_index_differences() {
        let g = ArrayGeometry::new(3, 3, 0.45, 0.3).unwrap();
        let c = CouplingMatrix::build(g).unwrap();
        let n = g.cols_n();
        for i in 0..c.dim() {
            for j in 0..c.dim() {
                let (ei, ej) = (ElementIndex::from_flat(i, n), ElementIndex::from_flat(j, n));
                for k in 0..c.dim() {
                    for l in 0..c.dim() {
                        let (ek, el) = (ElementIndex::from_flat(k, n), ElementIndex::from_flat(l, n));
                        let same_dn = (ei.n as i64 - ej.n as i64).abs() == (ek.n as i64 - el.n as i64).abs();
                        let same_dm = (ei.m as i64 - ej.m as i64).abs() == (ek.m as i64 - el.m as i64).abs();
                        if same_dn && same_dm {
                            assert_eq!(c.entry(i, j).to_bits(), c.entry(k, l).to_bits());
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn near_zero_spacing_approaches_rank_one() {
        let g = ArrayGeometry::new(2, 2, 0.01, 0.01).unwrap();
        let c = CouplingMatrix::build(g).unwrap();
        for i in 0..4 {
            for j in 0..4 {
                assert!(c.entry(i, j) > 0.99);
            }
        }
    }

    #[test]
    fn factor_reconstructs_matrix() {
        let g = ArrayGeometry::new(2, 3, 0.45, 0.45).unwrap();
        let c = CouplingMatrix::build(g).unwrap();
        let l = c.chol();
        for i in 0..c.dim() {
            for j in 0..c.dim() {
                let mut s = 0.0;
                for k in 0..=i.min(j) {
                    s += l.lower(i, k) * l.lower(j, k);
                }
                let expected = c.entry(i, j) + if i == j { c.jitter_applied() } else { 0.0 };
                assert_abs_diff_eq!(s, expected, epsilon = 1e-12);
            }
        }
    }

    #[test]
    fn solve_recovers_known_solution() {
        use num_complex::Complex64;
        let g = ArrayGeometry::new(2, 2, 0.45, 0.45).unwrap();
        let c = CouplingMatrix::build(g).unwrap();
        let x: Vec<Complex64> = (0..4).map(|k| Complex64::new(k as f64 + 1.0, -(k as f64))).collect();
        // b = C x
        let b: Vec<Complex64> = (0..4)
            .map(|i| (0..4).map(|k| x[k] * c.entry(i, k)).sum())
            .collect();
        let got = c.chol().solve(&b);
        for (g0, x0) in got.iter().zip(&x) {
            assert!((g0 - x0).norm() < 1e-12);
        }
    }

    #[test]
    fn eigenvalues_nonnegative_up_to_roundoff() {
        // Jacobi eigenvalue sweep as an independent check of positive
        // semidefiniteness for small cases.
        for (m, n, s) in [(1, 2, 0.1), (2, 2, 0.25), (2, 4, 0.45), (2, 4, 0.1)] {
            let g = ArrayGeometry::new(m, n, s, s).unwrap();
            let c = CouplingMatrix::build(g).unwrap();
            let dim = c.dim();
            let mut a: Vec<f64> = c.entries().to_vec();
            for _ in 0..100 {
                let mut off = 0.0;
                for p in 0..dim {
                    for q in (p + 1)..dim {
                        off += a[p * dim + q].abs();
                        if a[p * dim + q].abs() < 1e-14 {
                            continue;
                        }
                        let app = a[p * dim + p];
                        let aqq = a[q * dim + q];
                        let apq = a[p * dim + q];
                        let theta = 0.5 * (2.0 * apq).atan2(aqq - app);
                        let (s_, c_) = theta.sin_cos();
                        for k in 0..dim {
                            let akp = a[k * dim + p];
                            let akq = a[k * dim + q];
                            a[k * dim + p] = c_ * akp - s_ * akq;
                            a[k * dim + q] = s_ * akp + c_ * akq;
                        }
                        for k in 0..dim {
                            let apk = a[p * dim + k];
                            let aqk = a[q * dim + k];
                            a[p * dim + k] = c_ * apk - s_ * aqk;
                            a[q * dim + k] = s_ * apk + c_ * aqk;
                        }
                    }
                }
                if off < 1e-13 {
                    break;
                }
            }
            for i in 0..dim {
                assert!(a[i * dim + i] >= -1e-10, "eigenvalue {} at ({m},{n},{s})", a[i * dim + i]);
            }
        }
    }
}
