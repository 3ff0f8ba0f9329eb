//! Gauss–Legendre rules and the tensor-product cube integrator used for
//! toral periods.

use rayon::prelude::*;

use crate::summation::NeumaierSum;
use crate::Result;

/// Gauss–Legendre rule on `[-1, 1]`.
#[derive(Debug, Clone)]
pub struct GaussLegendre {
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
}

impl GaussLegendre {
    /// `n`-point rule, nodes by Newton iteration on the three-term recurrence.
    pub fn new(n: usize) -> Self {
        assert!(n >= 1, "Gauss-Legendre rule needs at least one node");
        let mut nodes = vec![0.0; n];
        let mut weights = vec![0.0; n];
        let m = n.div_ceil(2);
        for i in 0..m {
            let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
            let mut dp = 0.0;
            for _ in 0..100 {
                let (p, d) = legendre_with_derivative(n, x);
                dp = d;
                let dx = p / d;
                x -= dx;
                if dx.abs() < 1e-16 {
                    break;
                }
            }
            let (_, d) = legendre_with_derivative(n, x);
            dp = if d != 0.0 { d } else { dp };
            let w = 2.0 / ((1.0 - x * x) * dp * dp);
            nodes[i] = -x;
            nodes[n - 1 - i] = x;
            weights[i] = w;
            weights[n - 1 - i] = w;
        }
        Self { nodes, weights }
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    /// Nodes and weights mapped to `[0, 1)`.
    pub fn unit_interval(&self) -> (Vec<f64>, Vec<f64>) {
        let nodes = self.nodes.iter().map(|x| 0.5 * (x + 1.0)).collect();
        let weights = self.weights.iter().map(|w| 0.5 * w).collect();
        (nodes, weights)
    }
}

fn legendre_with_derivative(n: usize, x: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = x;
    for k in 2..=n {
        let k = k as f64;
        let p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
    }
    let nf = n as f64;
    let d = nf * (x * p1 - p0) / (x * x - 1.0);
    (p1, d)
}

/// Composite Gauss–Legendre on `[a, b]` with `panels` equal panels.
pub fn integrate_composite<F: Fn(f64) -> f64>(
    f: F,
    a: f64,
    b: f64,
    panels: usize,
    order: usize,
) -> f64 {
    let rule = GaussLegendre::new(order);
    let h = (b - a) / panels as f64;
    let mut acc = NeumaierSum::new();
    for p in 0..panels {
        let lo = a + h * p as f64;
        for (x, w) in rule.nodes.iter().zip(&rule.weights) {
            acc.add(0.5 * h * w * f(lo + 0.5 * h * (x + 1.0)));
        }
    }
    acc.value()
}

/// Tensor-product Gauss–Legendre integral over `[0,1)^dim` with
/// `points` nodes per coordinate. Nodes are evaluated in parallel; the
/// reduction runs in row-major node order, so the result does not depend on
/// the thread count.
pub fn integrate_unit_cube<F>(f: F, dim: usize, points: usize) -> f64
where
    F: Fn(&[f64]) -> f64 + Sync,
{
    try_integrate_unit_cube(|x| Ok(f(x)), dim, points).unwrap_or(f64::NAN)
}

/// [`integrate_unit_cube`] for a fallible integrand; the first error in node
/// order is returned.
pub fn try_integrate_unit_cube<F>(f: F, dim: usize, points: usize) -> Result<f64>
where
    F: Fn(&[f64]) -> Result<f64> + Sync,
{
    if dim == 0 {
        return f(&[]);
    }
    let (nodes, weights) = GaussLegendre::new(points).unit_interval();
    let total = points.pow(dim as u32);
    let values: Vec<Result<f64>> = (0..total)
        .into_par_iter()
        .map(|flat| {
            let mut idx = flat;
            let mut x = vec![0.0; dim];
            let mut w = 1.0;
            for slot in x.iter_mut().rev() {
                let k = idx % points;
                idx /= points;
                *slot = nodes[k];
                w *= weights[k];
            }
            f(&x).map(|v| w * v)
        })
        .collect();
    let values = values.into_iter().collect::<Result<Vec<f64>>>()?;
    Ok(crate::summation::compensated_sum(values))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rule_integrates_polynomials_exactly() {
        let rule = GaussLegendre::new(6);
        // exact up to degree 11
        let q: f64 = rule
            .nodes
            .iter()
            .zip(&rule.weights)
            .map(|(x, w)| w * x.powi(10))
            .sum();
        assert!((q - 2.0 / 11.0).abs() < 1e-14);
        let sum_w: f64 = rule.weights.iter().sum();
        assert!((sum_w - 2.0).abs() < 1e-14);
    }

    #[test]
    fn large_rule_is_accurate() {
        let rule = GaussLegendre::new(256);
        let sum_w: f64 = rule.weights.iter().sum();
        assert!((sum_w - 2.0).abs() < 1e-12);
        let q: f64 = rule
            .nodes
            .iter()
            .zip(&rule.weights)
            .map(|(x, w)| w * x.exp())
            .sum();
        assert!((q - (1f64.exp() - (-1f64).exp())).abs() < 1e-13);
    }

    #[test]
    fn cube_integral_of_separable_function() {
        let v = integrate_unit_cube(|x| x.iter().map(|t| (2.0 * t).exp()).product(), 3, 12);
        let one = (2f64.exp() - 1.0) / 2.0;
        assert!((v - one.powi(3)).abs() < 1e-12);
        assert_eq!(integrate_unit_cube(|_| 4.5, 0, 8), 4.5);
    }
}
