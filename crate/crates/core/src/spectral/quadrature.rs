//! Gauss–Legendre quadrature on `z ∈ [-1, 1]`.

use std::f64::consts::PI;

/// Nodes and weights of an `n`-point Gauss–Legendre rule.
///
/// Nodes are sorted ascending; the rule integrates polynomials of degree
/// `2n - 1` exactly and its weights sum to 2.
#[derive(Debug, Clone, PartialEq)]
pub struct QuadratureRule {
    nodes: Vec<f64>,
    weights: Vec<f64>,
}

impl QuadratureRule {
    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    /// `Σ w_k f(z_k)`.
    pub fn integrate(&self, f: impl Fn(f64) -> f64) -> f64 {
        self.nodes.iter().zip(&self.weights).map(|(&z, &w)| w * f(z)).sum()
    }
}

/// Legendre polynomial `P_n(x)` and its derivative.
fn legendre_with_derivative(n: usize, x: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = x;
    if n == 0 {
        return (1.0, 0.0);
    }
    for k in 2..=n {
        let kf = k as f64;
        let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
        p0 = p1;
        p1 = p2;
    }
    let nf = n as f64;
    let dp = nf * (x * p1 - p0) / (x * x - 1.0);
    (p1, dp)
}

/// Builds the `n`-point Gauss–Legendre rule by Newton iteration on `P_n`.
///
/// # Panics
///
/// Panics if `n == 0`.
pub fn gauss_legendre(n: usize) -> QuadratureRule {
    assert!(n >= 1, "quadrature rule needs at least one node");
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    let nf = n as f64;
    // Roots come in ± pairs; solve for the non-negative half.
    for i in 0..n.div_ceil(2) {
        // Tricomi's asymptotic guess for the i-th largest root.
        let theta = PI * (i as f64 + 0.75) / (nf + 0.5);
        let mut x = (1.0 - (nf - 1.0) / (8.0 * nf * nf * nf)) * theta.cos();
        for _ in 0..100 {
            let (p, dp) = legendre_with_derivative(n, x);
            let dx = p / dp;
            x -= dx;
            if dx.abs() <= 1e-16 * x.abs().max(1.0) {
                break;
            }
        }
        if n % 2 == 1 && i == n / 2 {
            x = 0.0;
        }
        let (_, dp) = legendre_with_derivative(n, x);
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        nodes[n - 1 - i] = x;
        nodes[i] = -x;
        weights[n - 1 - i] = w;
        weights[i] = w;
    }
    QuadratureRule { nodes, weights }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn one_point_rule_is_midpoint() {
        let rule = gauss_legendre(1);
        assert_eq!(rule.nodes(), &[0.0]);
        assert!((rule.weights()[0] - 2.0).abs() < 1e-15);
    }

    #[test]
    fn two_point_rule() {
        let rule = gauss_legendre(2);
        let r = 1.0 / 3f64.sqrt();
        assert!((rule.nodes()[0] + r).abs() < 1e-15);
        assert!((rule.nodes()[1] - r).abs() < 1e-15);
        assert!((rule.weights()[0] - 1.0).abs() < 1e-15);
        assert!((rule.weights()[1] - 1.0).abs() < 1e-15);
    }

    #[test]
    fn sixteen_points_integrate_example_polynomial() {
        let rule = gauss_legendre(16);
        // z^6 (1 - z^2)^2 = z^6 - 2 z^8 + z^10 -> 2/7 - 4/9 + 2/11 = 16/693
        let exact: f64 = 2.0 / 7.0 - 4.0 / 9.0 + 2.0 / 11.0;
        assert!((exact - 16.0 / 693.0).abs() < 1e-15);
        let got = rule.integrate(|z| z.powi(6) * (1.0 - z * z).powi(2));
        assert!((got - exact).abs() < 1e-14, "{got} vs {exact}");
    }

    #[test]
    fn weights_sum_to_two_and_nodes_ascend() {
        for n in [1, 2, 3, 7, 20, 64, 129, 200] {
            let rule = gauss_legendre(n);
            let s: f64 = rule.weights().iter().sum();
            assert!((s - 2.0).abs() < 1e-13, "n={n}: {s}");
            assert!(rule.nodes().windows(2).all(|w| w[0] < w[1]));
            assert!(rule.weights().iter().all(|&w| w > 0.0));
            assert!(rule.nodes().iter().all(|&z| z > -1.0 && z < 1.0));
        }
    }

    #[test]
    fn nodes_are_legendre_roots() {
        for n in [5, 33, 100] {
            let rule = gauss_legendre(n);
            for &z in rule.nodes() {
                let (p, _) = legendre_with_derivative(n, z);
                assert!(p.abs() < 1e-13, "P_{n}({z}) = {p}");
            }
        }
    }

    #[test]
    fn exact_on_monomials_up_to_degree_2n_minus_1() {
        for n in [1usize, 2, 5, 12, 40] {
            let rule = gauss_legendre(n);
            for k in 0..2 * n {
                let exact = if k % 2 == 1 { 0.0 } else { 2.0 / (k as f64 + 1.0) };
                let got = rule.integrate(|z| z.powi(k as i32));
                assert!((got - exact).abs() < 1e-13, "n={n} k={k}: {got} vs {exact}");
            }
        }
    }
}
