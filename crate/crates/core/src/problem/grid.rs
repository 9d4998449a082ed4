use super::analytic::PiecewiseAnalytic;
use crate::convex::WeightedSpace;
use crate::error::{Error, Result};

/// Midpoint grid on `(0, 1)` with cell boundaries `(i/n)^grading`.
#[derive(Debug, Clone, PartialEq)]
pub struct GridDiscretization {
    pub boundaries: Vec<f64>,
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
}

/// Composite midpoint rule on `(0, 1)`; `grading = 1` is uniform, larger
/// values cluster cells toward 0.
pub fn discretize_interval(n: usize, grading: f64) -> Result<GridDiscretization> {
    if n < 2 {
        return Err(Error::InvalidInput(format!("grid needs at least 2 cells, got {n}")));
    }
    if !(grading >= 1.0) || !grading.is_finite() {
        return Err(Error::InvalidInput(format!("grading must be a finite value >= 1, got {grading}")));
    }
    let nf = n as f64;
    let boundaries: Vec<f64> = (0..=n)
        .map(|i| if grading == 1.0 { i as f64 / nf } else { (i as f64 / nf).powf(grading) })
        .collect();
    let nodes = boundaries.windows(2).map(|w| 0.5 * (w[0] + w[1])).collect();
    let weights = boundaries.windows(2).map(|w| w[1] - w[0]).collect();
    Ok(GridDiscretization { boundaries, nodes, weights })
}

impl GridDiscretization {
    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn space(&self) -> WeightedSpace {
        WeightedSpace::new(self.weights.clone()).expect("cell measures are positive")
    }

    /// Point values at the midpoints.
    pub fn sample(&self, f: &PiecewiseAnalytic) -> Vec<f64> {
        f.sample(&self.nodes)
    }

    /// Exact cell averages.
    pub fn cell_averages(&self, f: &PiecewiseAnalytic) -> Result<Vec<f64>> {
        f.cell_averages(&self.boundaries)
    }

    pub fn sample_fn(&self, f: impl Fn(f64) -> f64) -> Vec<f64> {
        self.nodes.iter().map(|&t| f(t)).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::problem::analytic::{PowerTerm, Segment};

    #[test]
    fn uniform_and_graded_examples() {
        let g = discretize_interval(4, 1.0).unwrap();
        assert_eq!(g.weights, vec![0.25; 4]);
        assert_eq!(g.nodes, vec![0.125, 0.375, 0.625, 0.875]);
        let g = discretize_interval(2, 2.0).unwrap();
        assert_eq!(g.boundaries, vec![0.0, 0.25, 1.0]);
        assert_eq!(g.weights, vec![0.25, 0.75]);
    }

    #[test]
    fn weights_partition_unit_interval() {
        for n in [2, 3, 17, 100, 4096] {
            for grading in [1.0, 1.5, 4.0] {
                let g = discretize_interval(n, grading).unwrap();
                assert!((g.weights.iter().sum::<f64>() - 1.0).abs() < 1e-12);
                assert!(g.nodes.windows(2).all(|w| w[0] < w[1]));
                assert!(g.nodes[0] > 0.0 && g.nodes[n - 1] < 1.0);
            }
        }
    }

    #[test]
    fn invalid_parameters() {
        assert!(discretize_interval(1, 1.0).is_err());
        assert!(discretize_interval(10, 0.5).is_err());
        assert!(discretize_interval(10, f64::NAN).is_err());
    }

    #[test]
    fn midpoint_inner_product_converges() {
        // Smooth pair on (0, 1): f = 1 + t², g = t³ − 2t.
        let f = PiecewiseAnalytic::on_unit_interval(Segment::new(vec![PowerTerm::constant(1.0), PowerTerm::new(1.0, 2.0)]));
        let g = PiecewiseAnalytic::on_unit_interval(Segment::new(vec![PowerTerm::new(1.0, 3.0), PowerTerm::new(-2.0, 1.0)]));
        let exact = f.inner(&g).unwrap();
        let mut prev = f64::INFINITY;
        for n in [8, 16, 32, 64, 128] {
            let grid = discretize_interval(n, 1.0).unwrap();
            let space = grid.space();
            let err = ((space.inner(&grid.sample(&f), &grid.sample(&g)) - exact) / exact).abs();
            assert!(err <= 0.5 * prev, "n = {n}: {err} vs {prev}");
            prev = err;
        }
    }
}
