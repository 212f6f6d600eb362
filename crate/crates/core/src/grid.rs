//! Uniform sampling lattices and sampled fields.

use crate::error::{Error, Result};
use num_complex::Complex64;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Grid1D {
    pub lo: f64,
    pub hi: f64,
    pub count: usize,
}

impl Grid1D {
    pub fn new(lo: f64, hi: f64, count: usize) -> Result<Self> {
        if !(lo < hi) || count < 2 || !lo.is_finite() || !hi.is_finite() {
            return Err(Error::InvalidParameter(format!(
                "grid needs lo < hi and count >= 2 (lo={lo}, hi={hi}, count={count})"
            )));
        }
        Ok(Self { lo, hi, count })
    }

    /// Grid with spacing `h` whose nodes are `center + k h`, |k| <= half.
    pub fn centered(center: f64, h: f64, half: usize) -> Self {
        let lo = center - half as f64 * h;
        Self { lo, hi: lo + (2 * half) as f64 * h, count: 2 * half + 1 }
    }

    /// Grid starting at `lo` with spacing `h` and `count` nodes.
    pub fn with_spacing(lo: f64, h: f64, count: usize) -> Self {
        Self { lo, hi: lo + (count - 1) as f64 * h, count }
    }

    pub fn spacing(&self) -> f64 {
        (self.hi - self.lo) / (self.count - 1) as f64
    }

    pub fn node(&self, k: usize) -> f64 {
        self.lo + k as f64 * self.spacing()
    }

    pub fn nodes(&self) -> Vec<f64> {
        (0..self.count).map(|k| self.node(k)).collect()
    }

    /// Index of the node nearest to `x` and whether it coincides with it.
    pub fn locate(&self, x: f64) -> Option<(usize, f64)> {
        let h = self.spacing();
        let s = (x - self.lo) / h;
        if s < -1e-9 || s > (self.count - 1) as f64 + 1e-9 {
            return None;
        }
        let k = (s.floor() as isize).clamp(0, self.count as isize - 2) as usize;
        Some((k, s - k as f64))
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct GridND {
    pub axes: Vec<Grid1D>,
}

impl GridND {
    pub fn new(axes: Vec<Grid1D>) -> Result<Self> {
        if axes.is_empty() {
            return Err(Error::InvalidParameter("grid needs at least one axis".into()));
        }
        Ok(Self { axes })
    }

    pub fn cube(n: usize, lo: f64, hi: f64, count: usize) -> Result<Self> {
        let g = Grid1D::new(lo, hi, count)?;
        Ok(Self { axes: vec![g; n] })
    }

    /// Desk-scale defaults: 512^2 over [-8,8]^2 and 96^3 over [-6,6]^3.
    pub fn default_for(n: usize) -> Result<Self> {
        match n {
            2 => Self::cube(2, -8.0, 8.0, 512),
            3 => Self::cube(3, -6.0, 6.0, 96),
            _ => Err(Error::InvalidParameter(format!("no default grid for n={n}"))),
        }
    }

    pub fn dim(&self) -> usize {
        self.axes.len()
    }

    pub fn len(&self) -> usize {
        self.axes.iter().map(|a| a.count).product()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn is_uniform(&self) -> bool {
        let h0 = self.axes[0].spacing();
        self.axes.iter().all(|a| ((a.spacing() - h0) / h0).abs() < 1e-12)
    }

    pub fn cell_volume(&self) -> f64 {
        self.axes.iter().map(|a| a.spacing()).product()
    }

    /// Coordinates of the flat index `idx` (row-major, last axis fastest).
    pub fn point(&self, mut idx: usize, out: &mut [f64]) {
        for d in (0..self.dim()).rev() {
            let c = self.axes[d].count;
            out[d] = self.axes[d].node(idx % c);
            idx /= c;
        }
    }

    pub fn strides(&self) -> Vec<usize> {
        let mut s = vec![1; self.dim()];
        for d in (0..self.dim().saturating_sub(1)).rev() {
            s[d] = s[d + 1] * self.axes[d + 1].count;
        }
        s
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SampledField {
    pub grid: GridND,
    pub values: Vec<Complex64>,
}

impl SampledField {
    pub fn new(grid: GridND, values: Vec<Complex64>) -> Result<Self> {
        if values.len() != grid.len() {
            return Err(Error::InvalidParameter(format!(
                "value count {} does not match grid size {}",
                values.len(),
                grid.len()
            )));
        }
        if values.iter().any(|v| !v.re.is_finite() || !v.im.is_finite()) {
            return Err(Error::InvalidParameter("non-finite sample".into()));
        }
        Ok(Self { grid, values })
    }

    pub fn dim(&self) -> usize {
        self.grid.dim()
    }

    /// Trapezoid-free lattice integral: sum(values) * cell volume.
    pub fn integral(&self) -> Complex64 {
        let s: Complex64 = self.values.iter().sum();
        s * self.grid.cell_volume()
    }

    /// Lattice L^p norm (sum |v|^p * cell volume)^{1/p}.
    pub fn lp_norm(&self, p: f64) -> f64 {
        let s = crate::special::kahan_sum(self.values.iter().map(|v| v.norm().powf(p)));
        (s * self.grid.cell_volume()).powf(1.0 / p)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn nodes_and_spacing() {
        let g = Grid1D::new(-1.0, 1.0, 5).unwrap();
        assert_eq!(g.spacing(), 0.5);
        assert_eq!(g.nodes(), vec![-1.0, -0.5, 0.0, 0.5, 1.0]);
        assert!(Grid1D::new(1.0, 1.0, 4).is_err());
        assert!(Grid1D::new(0.0, 1.0, 1).is_err());
    }

    #[test]
    fn centered_grid_contains_center() {
        let g = Grid1D::centered(0.3, 0.1, 10);
        assert_eq!(g.count, 21);
        assert!((g.node(10) - 0.3).abs() < 1e-15);
    }

    #[test]
    fn row_major_points() {
        let g = GridND::new(vec![Grid1D::new(0.0, 1.0, 2).unwrap(), Grid1D::new(0.0, 2.0, 3).unwrap()]).unwrap();
        let mut p = [0.0; 2];
        g.point(4, &mut p);
        assert_eq!(p, [1.0, 1.0]);
        assert_eq!(g.strides(), vec![3, 1]);
    }

    #[test]
    fn sampled_field_rejects_bad_length() {
        let g = GridND::cube(2, -1.0, 1.0, 3).unwrap();
        assert!(SampledField::new(g, vec![Complex64::new(0.0, 0.0); 8]).is_err());
    }
}
