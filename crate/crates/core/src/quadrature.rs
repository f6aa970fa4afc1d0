//! Gauss–Legendre quadrature rules used by the spherical-integral oracles.

use std::f64::consts::PI;

/// Nodes and weights of the n-point Gauss–Legendre rule on [-1, 1],
/// computed by Newton iteration on the Legendre polynomial.
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    assert!(n >= 1);
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    let half = n.div_ceil(2);
    for i in 0..half {
        // Chebyshev-based initial guess, then Newton.
        let mut z = (PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (p, d) = legendre_with_derivative(n, z);
            dp = d;
            let dz = p / d;
            z -= dz;
            if dz.abs() < 1e-15 {
                break;
            }
        }
        let w = 2.0 / ((1.0 - z * z) * dp * dp);
        nodes[i] = -z;
        nodes[n - 1 - i] = z;
        weights[i] = w;
        weights[n - 1 - i] = w;
    }
    (nodes, weights)
}

/// P_n(x) and P_n'(x) by the three-term recurrence.
fn legendre_with_derivative(n: usize, x: f64) -> (f64, f64) {
    let mut prev = 1.0;
    let mut curr = x;
    for k in 2..=n {
        let next = ((2 * k - 1) as f64 * x * curr - (k - 1) as f64 * prev) / k as f64;
        prev = curr;
        curr = next;
    }
    let deriv = n as f64 * (x * curr - prev) / (x * x - 1.0);
    (curr, deriv)
}

/// The n-point rule mapped to [0, π]: returns (nodes, weights) with the
/// Jacobian π/2 folded into the weights.
pub fn rule_on_angle_interval(n: usize) -> (Vec<f64>, Vec<f64>) {
    let (x, w) = gauss_legendre(n);
    let nodes = x.iter().map(|xi| (xi + 1.0) * PI / 2.0).collect();
    let weights = w.iter().map(|wi| wi * PI / 2.0).collect();
    (nodes, weights)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn integrates_polynomials_exactly() {
        // n-point rule is exact through degree 2n-1
        for n in [2usize, 5, 8] {
            let (x, w) = gauss_legendre(n);
            for deg in 0..(2 * n) {
                let got: f64 = x.iter().zip(&w).map(|(xi, wi)| wi * xi.powi(deg as i32)).sum();
                let exact = if deg % 2 == 0 { 2.0 / (deg as f64 + 1.0) } else { 0.0 };
                assert_abs_diff_eq!(got, exact, epsilon = 1e-13);
            }
        }
    }

    #[test]
    fn weights_sum_to_interval_length() {
        let (_, w) = gauss_legendre(64);
        assert_abs_diff_eq!(w.iter().sum::<f64>(), 2.0, epsilon = 1e-13);
        let (_, w) = rule_on_angle_interval(64);
        assert_abs_diff_eq!(w.iter().sum::<f64>(), PI, epsilon = 1e-12);
    }

    #[test]
    fn integrates_sine_over_angle_interval() {
        let (x, w) = rule_on_angle_interval(16);
        let got: f64 = x.iter().zip(&w).map(|(xi, wi)| wi * xi.sin()).sum();
        assert_abs_diff_eq!(got, 2.0, epsilon = 1e-13);
    }
}
