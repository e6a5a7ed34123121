use crate::error::{Error, Result};

/// 0-based vertex index. File formats (TSPLIB, tour files, edge lists) are
/// 1-based; conversion happens at the I/O boundary only.
pub type Vertex = u32;

/// A planar point.
pub type Point = (f64, f64);

/// Instances at or below this dimension cache the full distance matrix;
/// larger ones compute distances on demand.
pub const DEFAULT_MATRIX_THRESHOLD: usize = 5000;

/// TSPLIB EUC_2D distance: the Euclidean norm rounded to the nearest
/// integer, halves rounding up.
pub fn euc2d_distance(p: Point, q: Point) -> i64 {
    let dx = p.0 - q.0;
    let dy = p.1 - q.1;
    let norm = (dx * dx + dy * dy).sqrt();
    (norm + 0.5).floor() as i64
}

/// A named set of cities with the integer EUC_2D metric.
#[derive(Clone, Debug)]
pub struct EuclideanInstance {
    name: String,
    coords: Vec<Point>,
    /// Flattened n*n matrix, present when dimension <= matrix threshold.
    matrix: Option<Vec<i32>>,
}

impl EuclideanInstance {
    pub fn new(name: impl Into<String>, coords: Vec<Point>) -> Result<Self> {
        Self::with_matrix_threshold(name, coords, DEFAULT_MATRIX_THRESHOLD)
    }

    pub fn with_matrix_threshold(
        name: impl Into<String>,
        coords: Vec<Point>,
        matrix_threshold: usize,
    ) -> Result<Self> {
        let n = coords.len();
        if n < 3 {
            return Err(Error::TooFewCities(n));
        }
        for (i, &(x, y)) in coords.iter().enumerate() {
            if !x.is_finite() || !y.is_finite() {
                return Err(Error::NonFiniteCoordinate(i + 1));
            }
        }
        let matrix = if n <= matrix_threshold {
            let mut m = vec![0i32; n * n];
            for i in 0..n {
                for j in (i + 1)..n {
                    let d = euc2d_distance(coords[i], coords[j]) as i32;
                    m[i * n + j] = d;
                    m[j * n + i] = d;
                }
            }
            Some(m)
        } else {
            None
        };
        Ok(Self {
            name: name.into(),
            coords,
            matrix,
        })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn dimension(&self) -> usize {
        self.coords.len()
    }

    pub fn coords(&self) -> &[Point] {
        &self.coords
    }

    pub fn point(&self, v: Vertex) -> Point {
        self.coords[v as usize]
    }

    /// Metric lookup; cached when the matrix was built, recomputed otherwise.
    pub fn distance(&self, u: Vertex, v: Vertex) -> i64 {
        match &self.matrix {
            Some(m) => m[u as usize * self.coords.len() + v as usize] as i64,
            None => euc2d_distance(self.coords[u as usize], self.coords[v as usize]),
        }
    }

    /// Length of the cyclic order under the instance metric, closing edge included.
    pub fn cycle_length(&self, order: &[Vertex]) -> i64 {
        let n = order.len();
        (0..n)
            .map(|i| self.distance(order[i], order[(i + 1) % n]))
            .sum()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn three_four_five_triangle() {
        assert_eq!(euc2d_distance((0.0, 0.0), (3.0, 4.0)), 5);
    }

    #[test]
    fn sqrt_two_rounds_to_one() {
        assert_eq!(euc2d_distance((0.0, 0.0), (1.0, 1.0)), 1);
    }

    #[test]
    fn identical_points_are_zero() {
        assert_eq!(euc2d_distance((2.0, 7.0), (2.0, 7.0)), 0);
    }

    #[test]
    fn half_rounds_up() {
        // distance 2.5 exactly
        assert_eq!(euc2d_distance((0.0, 0.0), (1.5, 2.0)), 3);
    }

    #[test]
    fn matrix_and_on_demand_agree() {
        let coords: Vec<Point> = (0..20)
            .map(|i| ((i * 37 % 11) as f64, (i * 53 % 13) as f64))
            .collect();
        let cached = EuclideanInstance::new("t", coords.clone()).unwrap();
        let lazy = EuclideanInstance::with_matrix_threshold("t", coords, 0).unwrap();
        for u in 0..20u32 {
            for v in 0..20u32 {
                assert_eq!(cached.distance(u, v), lazy.distance(u, v));
            }
        }
    }

    #[test]
    fn rejects_tiny_and_non_finite() {
        assert!(matches!(
            EuclideanInstance::new("t", vec![(0.0, 0.0), (1.0, 1.0)]),
            Err(Error::TooFewCities(2))
        ));
        assert!(matches!(
            EuclideanInstance::new("t", vec![(0.0, 0.0), (1.0, 1.0), (f64::NAN, 0.0)]),
            Err(Error::NonFiniteCoordinate(3))
        ));
    }
}
