//! Discrete Fourier transforms on uniform grids, Fourier multipliers, Riesz
//! potentials and slice-theorem checks.
//!
//! Convention: `f^(xi) = int f(x) e^{+i x.xi} dx`. On a grid with origin `lo`,
//! spacing `h` and `N` nodes the coefficient at `xi_k = 2 pi k / (N h)` is
//! `h e^{i lo xi_k} sum_j f_j e^{2 pi i j k / N}`, with `k` in FFT order.

use crate::error::{Error, Result};
use crate::frac1d::{fourier_symbol, Side};
use crate::functions::TestFunction;
use crate::grid::{Grid1D, GridND, SampledField};
use crate::transforms::{self, Quadrature};
use num_complex::Complex64;
use rayon::prelude::*;
use rustfft::{Fft, FftPlanner};
use std::f64::consts::PI;
use std::sync::Arc;

/// Relative magnitude of the zero bin tolerated by singular symbols.
pub const ZERO_BIN_RTOL: f64 = 1e-6;

/// Angular frequencies of an `N`-node grid in FFT order.
pub fn frequencies(grid: &Grid1D) -> Vec<f64> {
    let n = grid.count;
    let dxi = 2.0 * PI / (n as f64 * grid.spacing());
    (0..n)
        .map(|k| if k < (n + 1) / 2 { k as f64 } else { k as f64 - n as f64 } * dxi)
        .collect()
}

#[derive(Debug, Clone, PartialEq)]
pub struct Spectrum {
    pub grid: GridND,
    pub freqs: Vec<Vec<f64>>,
    /// Coefficients in the grid's row-major layout, FFT order on every axis.
    pub coeffs: Vec<Complex64>,
}

impl Spectrum {
    /// Frequency vector of the flat index `idx`.
    pub fn frequency(&self, mut idx: usize, out: &mut [f64]) {
        for d in (0..self.freqs.len()).rev() {
            let c = self.freqs[d].len();
            out[d] = self.freqs[d][idx % c];
            idx /= c;
        }
    }

    pub fn cell_volume(&self) -> f64 {
        self.freqs.iter().map(|f| if f.len() > 1 { f[1] - f[0] } else { 1.0 }).product()
    }
}

fn plan(n: usize, inverse: bool) -> Arc<dyn Fft<f64>> {
    let mut planner = FftPlanner::new();
    if inverse {
        planner.plan_fft_inverse(n)
    } else {
        planner.plan_fft_forward(n)
    }
}

/// In-place FFT along `axis` of a row-major array with extents `dims`.
fn fft_axis(data: &mut [Complex64], dims: &[usize], axis: usize, inverse: bool) {
    let len = dims[axis];
    let inner: usize = dims[axis + 1..].iter().product();
    let outer: usize = dims[..axis].iter().product();
    let fft = plan(len, inverse);
    let lines: Vec<Vec<Complex64>> = (0..outer * inner)
        .into_par_iter()
        .map(|l| {
            let (o, i) = (l / inner, l % inner);
            let base = o * len * inner + i;
            let mut line: Vec<Complex64> = (0..len).map(|k| data[base + k * inner]).collect();
            fft.process(&mut line);
            line
        })
        .collect();
    for (l, line) in lines.into_iter().enumerate() {
        let (o, i) = (l / inner, l % inner);
        let base = o * len * inner + i;
        for (k, v) in line.into_iter().enumerate() {
            data[base + k * inner] = v;
        }
    }
}

fn phase_axis(data: &mut [Complex64], dims: &[usize], axis: usize, factor: &[Complex64]) {
    let inner: usize = dims[axis + 1..].iter().product();
    let len = dims[axis];
    data.par_iter_mut().enumerate().for_each(|(idx, v)| {
        *v *= factor[(idx / inner) % len];
    });
}

fn forward_factors(g: &Grid1D) -> Vec<Complex64> {
    let h = g.spacing();
    frequencies(g).iter().map(|&xi| Complex64::from_polar(h, g.lo * xi)).collect()
}

fn inverse_factors(g: &Grid1D) -> Vec<Complex64> {
    let scale = 1.0 / (g.count as f64 * g.spacing());
    frequencies(g).iter().map(|&xi| Complex64::from_polar(scale, -g.lo * xi)).collect()
}

/// Scaled forward transform approximating the continuous Fourier integral.
pub fn dft(field: &SampledField) -> Result<Spectrum> {
    if !field.grid.is_uniform() {
        return Err(Error::NonUniform);
    }
    let dims: Vec<usize> = field.grid.axes.iter().map(|a| a.count).collect();
    let mut data = field.values.clone();
    for (d, axis) in field.grid.axes.iter().enumerate() {
        fft_axis(&mut data, &dims, d, true);
        phase_axis(&mut data, &dims, d, &forward_factors(axis));
    }
    Ok(Spectrum {
        grid: field.grid.clone(),
        freqs: field.grid.axes.iter().map(frequencies).collect(),
        coeffs: data,
    })
}

/// Inverse of [`dft`].
pub fn idft(spec: &Spectrum) -> Result<SampledField> {
    if !spec.grid.is_uniform() {
        return Err(Error::NonUniform);
    }
    let dims: Vec<usize> = spec.grid.axes.iter().map(|a| a.count).collect();
    let mut data = spec.coeffs.clone();
    for (d, axis) in spec.grid.axes.iter().enumerate() {
        phase_axis(&mut data, &dims, d, &inverse_factors(axis));
        fft_axis(&mut data, &dims, d, false);
    }
    SampledField::new(spec.grid.clone(), data)
}

/// One-dimensional [`dft`] of samples on `grid`.
pub fn dft1(values: &[Complex64], grid: &Grid1D) -> Vec<Complex64> {
    let mut data = values.to_vec();
    plan(data.len(), true).process(&mut data);
    data.iter().zip(forward_factors(grid)).map(|(v, f)| v * f).collect()
}

/// One-dimensional [`idft`].
pub fn idft1(coeffs: &[Complex64], grid: &Grid1D) -> Vec<Complex64> {
    let mut data: Vec<Complex64> = coeffs.iter().zip(inverse_factors(grid)).map(|(v, f)| v * f).collect();
    plan(data.len(), false).process(&mut data);
    data
}

/// A Fourier multiplier `m(tau)` that may be singular at `tau = 0`.
pub trait Symbol: Sync {
    fn eval(&self, tau: f64) -> Complex64;
    fn singular_at_zero(&self) -> bool {
        false
    }
}

/// The constant symbol 1.
pub struct Unit;

impl Symbol for Unit {
    fn eval(&self, _: f64) -> Complex64 {
        Complex64::new(1.0, 0.0)
    }
}

/// Symbol of the Riemann-Liouville integral `I^alpha_{+/-}`: `(-/+ i tau)^{-alpha}`.
pub struct Fractional {
    pub alpha: Complex64,
    pub side: Side,
}

impl Symbol for Fractional {
    fn eval(&self, tau: f64) -> Complex64 {
        if tau == 0.0 {
            // Only reached for non-singular orders: Re alpha < 0 or alpha = 0.
            return if self.alpha == Complex64::new(0.0, 0.0) { Complex64::new(1.0, 0.0) } else { Complex64::new(0.0, 0.0) };
        }
        fourier_symbol(self.alpha, tau, self.side).expect("nonzero frequency")
    }
    fn singular_at_zero(&self) -> bool {
        self.alpha.re >= 0.0 && self.alpha != Complex64::new(0.0, 0.0)
    }
}

/// Riesz symbol `|tau|^{-lambda}`.
pub struct Riesz {
    pub lambda: f64,
}

impl Symbol for Riesz {
    fn eval(&self, tau: f64) -> Complex64 {
        if tau == 0.0 {
            return Complex64::new(if self.lambda == 0.0 { 1.0 } else { 0.0 }, 0.0);
        }
        Complex64::new(tau.abs().powf(-self.lambda), 0.0)
    }
    fn singular_at_zero(&self) -> bool {
        self.lambda > 0.0
    }
}

/// Symbol of `(d/dt)^k`: `(-i tau)^k`.
pub struct Derivative {
    pub order: u32,
}

impl Symbol for Derivative {
    fn eval(&self, tau: f64) -> Complex64 {
        Complex64::new(0.0, -tau).powu(self.order)
    }
}

/// Handling of the zero-frequency bin for symbols singular at the origin.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ZeroBin {
    Zero,
    Error,
}

fn multiply(coeffs: &mut [Complex64], freqs: &[f64], symbol: &dyn Symbol, policy: ZeroBin) -> Result<()> {
    if symbol.singular_at_zero() {
        if policy == ZeroBin::Error {
            let peak = coeffs.iter().map(|c| c.norm()).fold(0.0, f64::max);
            let rel = if peak > 0.0 { coeffs[0].norm() / peak } else { 0.0 };
            if rel > ZERO_BIN_RTOL {
                return Err(Error::ZeroBin(rel));
            }
        }
        coeffs[0] = Complex64::new(0.0, 0.0);
        for (c, &tau) in coeffs.iter_mut().zip(freqs).skip(1) {
            *c *= symbol.eval(tau);
        }
    } else {
        for (c, &tau) in coeffs.iter_mut().zip(freqs) {
            *c *= symbol.eval(tau);
        }
    }
    Ok(())
}

/// Multiplies the spectrum of a 1-D signal by `symbol`.
pub fn apply_multiplier(values: &[Complex64], grid: &Grid1D, symbol: &dyn Symbol, policy: ZeroBin) -> Result<Vec<Complex64>> {
    if values.len() != grid.count {
        return Err(Error::DimensionMismatch { expected: grid.count, got: values.len() });
    }
    let mut c = dft1(values, grid);
    multiply(&mut c, &frequencies(grid), symbol, policy)?;
    Ok(idft1(&c, grid))
}

/// Applies `symbol` along one axis of an n-D field, line by line.
pub fn apply_multiplier_axis(field: &SampledField, axis: usize, symbol: &dyn Symbol, policy: ZeroBin) -> Result<SampledField> {
    if axis >= field.dim() {
        return Err(Error::InvalidParameter(format!("axis {axis} out of range")));
    }
    let dims: Vec<usize> = field.grid.axes.iter().map(|a| a.count).collect();
    let g = field.grid.axes[axis];
    let len = dims[axis];
    let inner: usize = dims[axis + 1..].iter().product();
    let outer: usize = dims[..axis].iter().product();
    let lines: Vec<Vec<Complex64>> = (0..outer * inner)
        .into_par_iter()
        .map(|l| {
            let base = (l / inner) * len * inner + l % inner;
            let line: Vec<Complex64> = (0..len).map(|k| field.values[base + k * inner]).collect();
            apply_multiplier(&line, &g, symbol, policy)
        })
        .collect::<Result<_>>()?;
    let mut out = field.values.clone();
    for (l, line) in lines.into_iter().enumerate() {
        let base = (l / inner) * len * inner + l % inner;
        for (k, v) in line.into_iter().enumerate() {
            out[base + k * inner] = v;
        }
    }
    SampledField::new(field.grid.clone(), out)
}

/// `(I_2^lambda f)^(xi) = |xi|^{-lambda} f^(xi)` on the n-D spectrum; the DC bin must be empty.
pub fn riesz_nd(field: &SampledField, lambda: f64) -> Result<SampledField> {
    let n = field.dim() as f64;
    if !(lambda < n) {
        return Err(Error::InvalidParameter(format!("Riesz order {lambda} must be below n")));
    }
    let mut spec = dft(field)?;
    let peak = spec.coeffs.iter().map(|c| c.norm()).fold(0.0, f64::max);
    if lambda > 0.0 && peak > 0.0 && spec.coeffs[0].norm() / peak > ZERO_BIN_RTOL {
        return Err(Error::ZeroBin(spec.coeffs[0].norm() / peak));
    }
    let dim = field.dim();
    let freqs = spec.freqs.clone();
    spec.coeffs.par_iter_mut().enumerate().for_each_init(
        || vec![0.0; dim],
        |xi, (idx, c)| {
            let mut rest = idx;
            for d in (0..dim).rev() {
                let m = freqs[d].len();
                xi[d] = freqs[d][rest % m];
                rest /= m;
            }
            let r = xi.iter().map(|v| v * v).sum::<f64>().sqrt();
            *c *= if r == 0.0 { if lambda == 0.0 { 1.0 } else { 0.0 } } else { r.powf(-lambda) };
        },
    );
    idft(&spec)
}

/// `(||f||_2^2, (2 pi)^{-n} ||f^||_2^2)` on the lattice.
pub fn parseval(field: &SampledField) -> Result<(f64, f64)> {
    let spec = dft(field)?;
    let lhs = field.lp_norm(2.0).powi(2);
    let s = crate::special::kahan_sum(spec.coeffs.iter().map(|c| c.norm_sqr()));
    Ok((lhs, s * spec.cell_volume() / (2.0 * PI).powi(field.dim() as i32)))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SliceVariant {
    /// `(R_theta f)^(rho) = f^(rho theta)`; probes are unit vectors theta.
    Radon,
    /// `(T_{x'} f)^(xi_n) = f^(-x' xi_n, xi_n)`; probes are points x'.
    Transversal,
}

/// Transforms one slice by quadrature on `offsets` and compares its DFT with the
/// closed-form Fourier transform of `f` at every bin with |rho| <= rho_max.
/// Returns the largest per-probe error relative to the probe's oracle peak.
pub fn slice_check(
    f: &TestFunction,
    variant: SliceVariant,
    probes: &[Vec<f64>],
    offsets: &Grid1D,
    rho_max: f64,
) -> Result<f64> {
    let n = f.dimension();
    if rho_max >= PI / offsets.spacing() {
        return Err(Error::InvalidParameter(format!(
            "probe frequency {rho_max} exceeds the resolvable band {}",
            PI / offsets.spacing()
        )));
    }
    let radius = f.decay_radius();
    if !radius.is_finite() {
        return Err(Error::Unsupported(format!("slice check for {f}")));
    }
    let q = Quadrature::for_radius(radius);
    let t = offsets.nodes();
    let freqs = frequencies(offsets);
    let mut worst: f64 = 0.0;
    for probe in probes {
        let expected_len = if variant == SliceVariant::Radon { n } else { n - 1 };
        if probe.len() != expected_len {
            return Err(Error::DimensionMismatch { expected: expected_len, got: probe.len() });
        }
        let slice: Vec<Complex64> = t
            .par_iter()
            .map(|&t| match variant {
                SliceVariant::Radon => transforms::radon(f, probe, t, &q).map(|r| r.value),
                SliceVariant::Transversal => {
                    let mut x = probe.clone();
                    x.push(t);
                    transforms::transversal(f, &x, &transforms::transversal_quadrature(&q, &x)).map(|r| r.value)
                }
            })
            .collect::<Result<_>>()?;
        let spec = dft1(&slice, offsets);
        let mut err: f64 = 0.0;
        let mut peak: f64 = 0.0;
        for (c, &rho) in spec.iter().zip(&freqs) {
            if rho.abs() > rho_max {
                continue;
            }
            let xi: Vec<f64> = match variant {
                SliceVariant::Radon => probe.iter().map(|v| v * rho).collect(),
                SliceVariant::Transversal => probe.iter().map(|v| -v * rho).chain(std::iter::once(rho)).collect(),
            };
            let exact = f.fourier_exact(&xi)?;
            err = err.max((c - exact).norm());
            peak = peak.max(exact.norm());
        }
        worst = worst.max(err / peak);
    }
    Ok(worst)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::functions::sample;

    fn gaussian_line() -> (Grid1D, Vec<Complex64>) {
        let g = Grid1D::with_spacing(-16.0, 1.0 / 32.0, 1024);
        let v = g.nodes().iter().map(|&x| Complex64::new((-x * x).exp(), 0.0)).collect();
        (g, v)
    }

    #[test]
    fn gaussian_pair() {
        // N h = 2 pi puts xi = 1, 2 on bins.
        let g = Grid1D::with_spacing(-PI * 8.0, PI / 64.0, 1024);
        let v: Vec<Complex64> = g.nodes().iter().map(|&x| Complex64::new((-x * x).exp(), 0.0)).collect();
        let c = dft1(&v, &g);
        let xi = frequencies(&g);
        for target in [0.0, 1.0, 2.0] {
            let k = xi.iter().position(|&x| (x - target).abs() < 1e-9).unwrap();
            assert!((c[k] - PI.sqrt() * (-target * target / 4.0).exp()).norm() < 1e-10);
        }
    }

    #[test]
    fn round_trip_2d() {
        let f = TestFunction::bandlimited(2, 2.0, 4.0, 3).unwrap();
        let field = sample(&f, &GridND::cube(2, -16.0, 16.0, 64).unwrap()).unwrap();
        let back = idft(&dft(&field).unwrap()).unwrap();
        let peak = field.values.iter().map(|v| v.norm()).fold(0.0, f64::max);
        let err = field.values.iter().zip(&back.values).map(|(a, b)| (a - b).norm()).fold(0.0, f64::max);
        assert!(err <= 1e-12 * peak);
    }

    #[test]
    fn parseval_holds() {
        let f = TestFunction::gaussian(2, 1.0).unwrap();
        let field = sample(&f, &GridND::cube(2, -8.0, 8.0, 128).unwrap()).unwrap();
        let (a, b) = parseval(&field).unwrap();
        assert!((a - b).abs() <= 1e-10 * a);
    }

    #[test]
    fn unit_symbol_is_identity() {
        let (g, v) = gaussian_line();
        let w = apply_multiplier(&v, &g, &Unit, ZeroBin::Error).unwrap();
        assert!(v.iter().zip(&w).all(|(a, b)| (a - b).norm() < 1e-14));
    }

    #[test]
    fn zero_bin_policy() {
        let (g, v) = gaussian_line();
        let s = Riesz { lambda: 0.5 };
        assert!(matches!(apply_multiplier(&v, &g, &s, ZeroBin::Error), Err(Error::ZeroBin(_))));
        assert!(apply_multiplier(&v, &g, &s, ZeroBin::Zero).is_ok());
        // Entire symbols ignore the policy.
        assert!(apply_multiplier(&v, &g, &Derivative { order: 1 }, ZeroBin::Error).is_ok());
    }

    #[test]
    fn spectral_derivative_of_gaussian() {
        let (g, v) = gaussian_line();
        let d = apply_multiplier(&v, &g, &Derivative { order: 1 }, ZeroBin::Zero).unwrap();
        for (x, dv) in g.nodes().iter().zip(&d) {
            assert!((dv.re + 2.0 * x * (-x * x).exp()).abs() < 1e-12);
        }
    }

    #[test]
    fn riesz_composition_and_limit() {
        let f = TestFunction::bandlimited(2, 2.0, 4.0, 11).unwrap();
        let field = sample(&f, &GridND::cube(2, -32.0, 32.0, 256).unwrap()).unwrap();
        let a = riesz_nd(&riesz_nd(&field, 0.4).unwrap(), 0.7).unwrap();
        let b = riesz_nd(&field, 1.1).unwrap();
        let peak = b.values.iter().map(|v| v.norm()).fold(0.0, f64::max);
        let err = a.values.iter().zip(&b.values).map(|(x, y)| (x - y).norm()).fold(0.0, f64::max);
        assert!(err < 1e-6 * peak);
        let id = riesz_nd(&field, 1e-9).unwrap();
        let err = id.values.iter().zip(&field.values).map(|(x, y)| (x - y).norm()).fold(0.0, f64::max);
        assert!(err < 1e-6);
        let g = sample(&TestFunction::gaussian(2, 1.0).unwrap(), &GridND::cube(2, -8.0, 8.0, 64).unwrap()).unwrap();
        assert!(riesz_nd(&g, 1.0).is_err());
    }

    #[test]
    fn slice_theorems() {
        let f = TestFunction::gaussian(2, 1.0).unwrap();
        let off = Grid1D::with_spacing(-8.0, 1.0 / 16.0, 256);
        let probes = vec![vec![1.0, 0.0]];
        assert!(slice_check(&f, SliceVariant::Radon, &probes, &off, 8.0).unwrap() < 1e-6);
        let tp = vec![vec![0.0]];
        let en = vec![vec![0.0, 1.0]];
        let a = slice_check(&f, SliceVariant::Transversal, &tp, &off, 8.0).unwrap();
        let b = slice_check(&f, SliceVariant::Radon, &en, &off, 8.0).unwrap();
        assert!(a < 1e-6 && b < 1e-6);
        assert!(slice_check(&f, SliceVariant::Radon, &probes, &off, 60.0).is_err());
    }
}
