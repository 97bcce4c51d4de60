use super::{Result, WaveError};

/// Real samples on the node-centred square grid over `[-1, 1]^2`.
///
/// Node `(i, j)` sits at `(x_i, y_j)` with `x_i = -1 + i h`, `h = 2 / (n - 1)`;
/// values are stored row-major with `y` as the slow index, so
/// `values[j * nx + i]` is the sample at `(x_i, y_j)`.
#[derive(Debug, Clone, PartialEq)]
pub struct ScalarField2D {
    nx: usize,
    ny: usize,
    values: Vec<f64>,
}

impl ScalarField2D {
    pub fn new(nx: usize, ny: usize, values: Vec<f64>) -> Result<Self> {
        check_grid(nx, ny)?;
        if values.len() != nx * ny {
            return Err(WaveError::InvalidGrid(format!(
                "{} values for a {nx}x{ny} grid",
                values.len()
            )));
        }
        if values.iter().any(|v| !v.is_finite()) {
            return Err(WaveError::NonFinite);
        }
        Ok(Self { nx, ny, values })
    }

    pub fn zeros(nx: usize, ny: usize) -> Result<Self> {
        check_grid(nx, ny)?;
        Ok(Self {
            nx,
            ny,
            values: vec![0.0; nx * ny],
        })
    }

    /// Samples `f(x, y)` at every node of an `n x n` grid.
    pub fn from_fn(n: usize, f: impl Fn(f64, f64) -> f64) -> Result<Self> {
        check_grid(n, n)?;
        let h = 2.0 / (n - 1) as f64;
        let mut values = Vec::with_capacity(n * n);
        for j in 0..n {
            let y = -1.0 + j as f64 * h;
            for i in 0..n {
                values.push(f(-1.0 + i as f64 * h, y));
            }
        }
        Self::new(n, n, values)
    }

    pub fn nx(&self) -> usize {
        self.nx
    }

    pub fn ny(&self) -> usize {
        self.ny
    }

    /// Grid spacing `h = 2 / (n - 1)`.
    pub fn spacing(&self) -> f64 {
        2.0 / (self.nx - 1) as f64
    }

    /// Coordinate of node index `i` along either axis.
    pub fn coord(&self, i: usize) -> f64 {
        -1.0 + i as f64 * self.spacing()
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.values[j * self.nx + i]
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn into_values(self) -> Vec<f64> {
        self.values
    }

    pub fn max_abs(&self) -> f64 {
        self.values.iter().fold(0.0, |m, v| m.max(v.abs()))
    }

    /// Plain Euclidean norm of the sample vector.
    pub fn l2_norm(&self) -> f64 {
        self.values.iter().map(|v| v * v).sum::<f64>().sqrt()
    }

    pub fn same_grid(&self, other: &Self) -> bool {
        self.nx == other.nx && self.ny == other.ny
    }

    /// `a * self + b * other` on matching grids.
    pub fn combine(&self, a: f64, other: &Self, b: f64) -> Result<Self> {
        if !self.same_grid(other) {
            return Err(WaveError::InvalidGrid("grid mismatch".into()));
        }
        let values = self
            .values
            .iter()
            .zip(&other.values)
            .map(|(u, v)| a * u + b * v)
            .collect();
        Self::new(self.nx, self.ny, values)
    }

    pub fn scaled(&self, a: f64) -> Self {
        Self {
            nx: self.nx,
            ny: self.ny,
            values: self.values.iter().map(|v| a * v).collect(),
        }
    }
}

fn check_grid(nx: usize, ny: usize) -> Result<()> {
    if nx < 2 || ny < 2 {
        return Err(WaveError::InvalidGrid(format!(
            "grid must be at least 2x2, got {nx}x{ny}"
        )));
    }
    if nx != ny {
        return Err(WaveError::InvalidGrid(format!(
            "grid over [-1,1]^2 must be square, got {nx}x{ny}"
        )));
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn node_centred_coordinates() {
        let f = ScalarField2D::from_fn(5, |x, y| x + 10.0 * y).unwrap();
        assert_eq!(f.spacing(), 0.5);
        assert_eq!(f.get(0, 0), -11.0);
        assert_eq!(f.get(4, 0), 1.0 - 10.0);
        assert_eq!(f.get(2, 4), 10.0);
    }

    #[test]
    fn rejects_bad_grids() {
        assert!(ScalarField2D::zeros(1, 1).is_err());
        assert!(ScalarField2D::zeros(4, 5).is_err());
        assert!(ScalarField2D::new(2, 2, vec![0.0; 3]).is_err());
        assert_eq!(
            ScalarField2D::new(2, 2, vec![0.0, f64::NAN, 0.0, 0.0]),
            Err(WaveError::NonFinite)
        );
    }
}
