//! Fractional integrals of Radon-type transforms in their offset variable:
//! `R^alpha_+`, `T^alpha_+`, `T*^alpha_+` and `P^alpha_+`, the composition
//! `T^alpha_+ T*^beta_+` and the inversion of `T` built from it.
//!
//! Every operator is evaluated slice by slice: the transform is tabulated along
//! a line in its last variable and the one-variable machinery of [`frac1d`]
//! acts on that line.

use crate::error::{Error, Result};
use crate::frac1d::{self, DerivativeProvider, FracOrder, Side, Signal};
use crate::functions::{Closure, Kind, PointFn, TestFunction};
use crate::grid::{Grid1D, GridND, SampledField};
use crate::spectral::{self, Fractional, Symbol, ZeroBin};
use crate::transforms::{self, CylinderField, DirectionSet, Quadrature};
use num_complex::Complex64;
use rayon::prelude::*;
use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

/// How the one-variable fractional integral is evaluated on a slice.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Method {
    /// Product integration, Re alpha > 0.
    Direct,
    /// `I^{alpha+l} w^{(l)}`, any order.
    Continued,
    /// Marchaud difference integral, real alpha in [(1-n)/2, 0).
    Hypersingular,
    /// Fourier multiplier on a periodic slice.
    Spectral,
}

impl FromStr for Method {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "direct" => Ok(Method::Direct),
            "continued" => Ok(Method::Continued),
            "hypersingular" => Ok(Method::Hypersingular),
            "spectral" => Ok(Method::Spectral),
            _ => Err(Error::Parse(format!("unknown method '{s}'"))),
        }
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Method::Direct => "direct",
            Method::Continued => "continued",
            Method::Hypersingular => "hypersingular",
            Method::Spectral => "spectral",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TransformKind {
    R,
    T,
    TStar,
    P,
}

impl FromStr for TransformKind {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "R" | "radon" => Ok(TransformKind::R),
            "T" | "transversal" => Ok(TransformKind::T),
            "Tstar" | "T*" | "dual" => Ok(TransformKind::TStar),
            "P" | "parabolic" => Ok(TransformKind::P),
            _ => Err(Error::Parse(format!("unknown transform '{s}'"))),
        }
    }
}

impl fmt::Display for TransformKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            TransformKind::R => "R",
            TransformKind::T => "T",
            TransformKind::TStar => "Tstar",
            TransformKind::P => "P",
        })
    }
}

/// A line in the offset variable along which the fractional integral acts.
#[derive(Debug, Clone, PartialEq)]
pub enum Line {
    /// `s -> (Tf)(x', s)`.
    T(Vec<f64>),
    /// `s -> (T*f)(x', s)`.
    TStar(Vec<f64>),
    /// `s -> (Rf)(theta, s)`.
    R(Vec<f64>),
}

impl Line {
    /// `I_-` acts on dual slices, `I_+` on the others.
    pub fn side(&self) -> Side {
        match self {
            Line::TStar(_) => Side::Minus,
            _ => Side::Plus,
        }
    }

    fn check(&self, n: usize) -> Result<()> {
        let (want, got) = match self {
            Line::T(xp) | Line::TStar(xp) => (n - 1, xp.len()),
            Line::R(th) => (n, th.len()),
        };
        if want == got {
            Ok(())
        } else {
            Err(Error::DimensionMismatch { expected: want, got })
        }
    }
}

fn slope_factor(xp: &[f64]) -> f64 {
    (1.0 + xp.iter().map(|v| v * v).sum::<f64>()).sqrt()
}

fn with_last(head: &[f64], last: f64) -> Vec<f64> {
    let mut x = head.to_vec();
    x.push(last);
    x
}

/// Anything that can tabulate the transforms of a function along lines.
pub trait SliceSource: Sync {
    fn dim(&self) -> usize;
    /// Half-width of the interval outside which the line function is negligible.
    fn reach(&self, line: &Line) -> Result<f64>;
    fn value(&self, line: &Line, s: f64) -> Result<Complex64>;
    /// Analytic `s`-derivatives of the line function, when known.
    fn derivative(&self, _line: &Line) -> Option<DerivativeProvider> {
        None
    }
}

fn finite_radius(f: &TestFunction) -> Result<f64> {
    let r = f.decay_radius();
    if r.is_finite() {
        Ok(r)
    } else {
        Err(Error::Unsupported(format!("{f} has no finite decay radius")))
    }
}

fn checked(li: transforms::LineIntegral) -> Result<Complex64> {
    if li.boundary > frac1d::TAIL_ERROR {
        Err(Error::Truncation { magnitude: li.boundary, limit: frac1d::TAIL_ERROR })
    } else {
        Ok(li.value)
    }
}

/// Closed forms for the windowed-exponential kinds, quadrature otherwise.
impl SliceSource for TestFunction {
    fn dim(&self) -> usize {
        self.dimension()
    }

    fn reach(&self, line: &Line) -> Result<f64> {
        let r = finite_radius(self)?;
        Ok(match line {
            Line::R(_) => r,
            Line::T(xp) | Line::TStar(xp) => r * slope_factor(xp),
        })
    }

    fn value(&self, line: &Line, s: f64) -> Result<Complex64> {
        line.check(self.dimension())?;
        if !self.atoms().is_empty() {
            return match line {
                Line::T(xp) => self.transversal_exact(&with_last(xp, s)),
                Line::TStar(xp) => self.transversal_dual_exact(&with_last(xp, s)),
                Line::R(th) => self.radon_exact(th, s),
            };
        }
        let r = finite_radius(self)?;
        let base = Quadrature::for_radius(r);
        match line {
            Line::R(th) => match self.radial_profile() {
                Some(f0) => Ok(Complex64::new(transforms::radon_radial(f0, self.dimension(), s, r)?.value, 0.0)),
                None => checked(transforms::radon(self, th, s, &base)?),
            },
            Line::T(xp) => {
                let x = with_last(xp, s);
                checked(transforms::transversal(self, &x, &transforms::transversal_quadrature(&base, &x))?)
            }
            Line::TStar(xp) => {
                let x = with_last(xp, s);
                checked(transforms::transversal_dual(self, &x, &transforms::transversal_quadrature(&base, &x))?)
            }
        }
    }

    fn derivative(&self, line: &Line) -> Option<DerivativeProvider> {
        if self.atoms().is_empty() {
            return None;
        }
        let f = self.clone();
        Some(match line.clone() {
            Line::T(xp) => Arc::new(move |k, s| f.transversal_derivative_exact(&with_last(&xp, s), k)),
            Line::TStar(xp) => {
                let neg: Vec<f64> = xp.iter().map(|v| -v).collect();
                Arc::new(move |k, s| f.transversal_derivative_exact(&with_last(&neg, s), k))
            }
            Line::R(th) => Arc::new(move |k, s| f.radon_derivative_exact(&th, s, k)),
        })
    }
}

/// Quadrature-only slices of an arbitrary point function.
pub struct Numeric<F> {
    pub f: F,
    /// Radius of a ball outside which `f` is negligible.
    pub support: f64,
    /// Box and base step of the hyperplane integrals.
    pub quadrature: Quadrature,
    /// Extra slope added to the step refinement of transversal integrands.
    pub slope: f64,
}

impl<F: PointFn> Numeric<F> {
    pub fn new(f: F, support: f64) -> Self {
        Self { f, support, quadrature: Quadrature::for_radius(support), slope: 0.0 }
    }
}

impl<F: PointFn> SliceSource for Numeric<F> {
    fn dim(&self) -> usize {
        self.f.dim()
    }

    fn reach(&self, line: &Line) -> Result<f64> {
        Ok(match line {
            Line::R(_) => self.support,
            Line::T(xp) | Line::TStar(xp) => self.support * slope_factor(xp),
        })
    }

    fn value(&self, line: &Line, s: f64) -> Result<Complex64> {
        line.check(self.f.dim())?;
        match line {
            Line::R(th) => checked(transforms::radon(&self.f, th, s, &self.quadrature)?),
            Line::T(xp) | Line::TStar(xp) => {
                let x = with_last(xp, s);
                let q = self.quadrature.refined(slope_factor(xp) + self.slope);
                let li = if matches!(line, Line::T(_)) {
                    transforms::transversal(&self.f, &x, &q)?
                } else {
                    transforms::transversal_dual(&self.f, &x, &q)?
                };
                checked(li)
            }
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FracOptions {
    /// Slice spacing for pointwise evaluation.
    pub step: f64,
    /// Difference order of the hypersingular integral.
    pub ell: usize,
    /// Margin added beyond the reach of the line function.
    pub pad: f64,
}

impl Default for FracOptions {
    fn default() -> Self {
        Self { step: 1.0 / 256.0, ell: 1, pad: 1.0 }
    }
}

fn check_method(alpha: Complex64, method: Method, n: usize, ell: usize) -> Result<()> {
    match method {
        Method::Direct if alpha.re <= 0.0 => {
            Err(Error::InvalidParameter(format!("direct method needs Re alpha > 0, got {alpha}")))
        }
        Method::Hypersingular => {
            let lo = (1.0 - n as f64) / 2.0;
            if alpha.im != 0.0 || alpha.re < lo || alpha.re >= 0.0 {
                return Err(Error::InvalidParameter(format!(
                    "hypersingular method needs real alpha in [{lo}, 0), got {alpha}"
                )));
            }
            if ell as f64 <= -alpha.re {
                return Err(Error::InvalidParameter(format!("difference order {ell} must exceed {}", -alpha.re)));
            }
            Ok(())
        }
        _ => Ok(()),
    }
}

/// Grid with the spacing `h` of `query`, holding its nodes from index `k0` on and
/// reaching `[-reach - pad, reach + pad]`, extended equally on both sides so that
/// mirrored queries give mirrored grids.
fn padded(query: &Grid1D, h: f64, reach: f64, pad: f64) -> (Grid1D, usize) {
    let need = (query.lo + reach + pad).max(reach + pad - query.hi).max(0.0);
    let k0 = (need / h).ceil() as usize + 1;
    (Grid1D::with_spacing(query.lo - k0 as f64 * h, h, query.count + 2 * k0), k0)
}

fn mirrored(sig: &Signal) -> Result<Signal> {
    let mut values = sig.values.clone();
    values.reverse();
    Signal::new(Grid1D::with_spacing(-sig.grid.hi, sig.spacing(), sig.grid.count), values)
}

fn hypersingular(sig: &Signal, a: f64, side: Side, ell: usize) -> Result<Signal> {
    let h = sig.spacing();
    match side {
        Side::Plus => frac1d::marchaud_limit(sig, a, h, ell),
        Side::Minus => mirrored(&frac1d::marchaud_limit(&mirrored(sig)?, a, h, ell)?),
    }
}

/// The fractional integral of order `alpha` of a line function, at the nodes of `query`.
///
/// The side is `I_-` for dual lines and `I_+` otherwise; the slice is tabulated
/// with the spacing of `query` on a grid covering the reach of the line.
pub fn fractional_line(
    src: &dyn SliceSource,
    line: &Line,
    alpha: Complex64,
    method: Method,
    opts: &FracOptions,
    query: &Grid1D,
) -> Result<Vec<Complex64>> {
    line.check(src.dim())?;
    check_method(alpha, method, src.dim(), opts.ell)?;
    let h = query.spacing();
    let reach = src.reach(line)?;
    // Periodic evaluation needs room for the slowly decaying tails of the result.
    let pad = if method == Method::Spectral { opts.pad + reach } else { opts.pad };
    let (grid, k0) = padded(query, h, reach, pad);
    let values = grid.nodes().par_iter().map(|&s| src.value(line, s)).collect::<Result<Vec<_>>>()?;
    let mut sig = Signal::new(grid, values)?;
    if let Some(p) = src.derivative(line) {
        sig = sig.with_derivative(p);
    }
    let side = line.side();
    let out = match method {
        Method::Direct => frac1d::rl_integral(&sig, alpha, side)?,
        Method::Continued => frac1d::rl_continued(&sig, FracOrder::new(alpha), side)?,
        Method::Spectral => frac1d::rl_spectral(&sig, alpha, side)?,
        Method::Hypersingular => hypersingular(&sig, -alpha.re, side, opts.ell)?,
    };
    Ok(out.values[k0..k0 + query.count].to_vec())
}

fn split_point(src: &dyn SliceSource, x: &[f64]) -> Result<(Vec<f64>, f64)> {
    let n = src.dim();
    if x.len() != n {
        return Err(Error::DimensionMismatch { expected: n, got: x.len() });
    }
    Ok((x[..n - 1].to_vec(), x[n - 1]))
}

fn at_point(src: &dyn SliceSource, line: Line, alpha: Complex64, s: f64, method: Method, opts: &FracOptions) -> Result<Complex64> {
    let q = Grid1D::centered(s, opts.step, 1);
    Ok(fractional_line(src, &line, alpha, method, opts, &q)?[1])
}

/// `(T^alpha_+ f)(x) = (I^alpha_+ T_{x'} f)(x_n)`.
pub fn t_plus(src: &dyn SliceSource, alpha: Complex64, x: &[f64], method: Method, opts: &FracOptions) -> Result<Complex64> {
    let (xp, xn) = split_point(src, x)?;
    at_point(src, Line::T(xp), alpha, xn, method, opts)
}

/// `(T*^alpha_+ g)(x) = (I^alpha_- T*_{x'} g)(x_n)`.
pub fn t_star_plus(src: &dyn SliceSource, alpha: Complex64, x: &[f64], method: Method, opts: &FracOptions) -> Result<Complex64> {
    let (xp, xn) = split_point(src, x)?;
    at_point(src, Line::TStar(xp), alpha, xn, method, opts)
}

/// `(R^alpha_+ f)(theta, t) = (I^alpha_+ R_theta f)(t)`.
pub fn r_plus(
    src: &dyn SliceSource,
    alpha: Complex64,
    theta: &[f64],
    t: f64,
    method: Method,
    opts: &FracOptions,
) -> Result<Complex64> {
    at_point(src, Line::R(theta.to_vec()), alpha, t, method, opts)
}

/// `T^a_+ f` for real `a` in [(1-n)/2, 0) by the difference hypersingular integral,
/// extrapolated in the cutoff over `{h, 2h, 4h}`.
pub fn t_plus_hypersingular(src: &dyn SliceSource, a: f64, x: &[f64], opts: &FracOptions) -> Result<Complex64> {
    t_plus(src, Complex64::new(a, 0.0), x, Method::Hypersingular, opts)
}

/// `T^alpha_+ f` (or `T*^alpha_+ f` when `dual`) on a grid; the last axis sets the slice spacing.
pub fn t_plus_field(
    src: &dyn SliceSource,
    alpha: Complex64,
    grid: &GridND,
    dual: bool,
    method: Method,
    opts: &FracOptions,
) -> Result<SampledField> {
    let n = src.dim();
    if grid.dim() != n || n < 2 {
        return Err(Error::DimensionMismatch { expected: n, got: grid.dim() });
    }
    let last = grid.axes[n - 1];
    let outer = GridND::new(grid.axes[..n - 1].to_vec())?;
    let rows: Vec<Vec<Complex64>> = (0..outer.len())
        .into_par_iter()
        .map(|i| {
            let mut xp = vec![0.0; n - 1];
            outer.point(i, &mut xp);
            let line = if dual { Line::TStar(xp) } else { Line::T(xp) };
            fractional_line(src, &line, alpha, method, opts, &last)
        })
        .collect::<Result<_>>()?;
    SampledField::new(grid.clone(), rows.concat())
}

/// `R^alpha_+ f` on a direction set times an offset grid.
pub fn r_plus_field(
    src: &dyn SliceSource,
    alpha: Complex64,
    directions: &DirectionSet,
    offsets: &Grid1D,
    method: Method,
    opts: &FracOptions,
) -> Result<CylinderField> {
    let rows: Vec<Vec<Complex64>> = directions
        .directions
        .par_iter()
        .map(|th| fractional_line(src, &Line::R(th.clone()), alpha, method, opts, offsets))
        .collect::<Result<_>>()?;
    CylinderField::new(directions.clone(), *offsets, rows.concat())
}

/// Evaluation route of `P^alpha_+`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PRoute {
    /// Fractional integral of each vertical line of `f`, integrated over the paraboloid.
    Direct,
    /// `B_2 T^alpha_+ B_1 f`.
    Conjugated,
}

fn box_nodes(radius: f64, step: f64) -> Vec<f64> {
    let k = (radius / step).ceil() as i64;
    (-k..=k).map(|j| j as f64 * step).collect()
}

/// `(P^alpha_+ f)(x)` for a function negligible outside the ball of radius `support`.
///
/// The direct route needs Re alpha > 0 and ignores `method`.
pub fn p_plus<F: PointFn>(
    f: &F,
    support: f64,
    alpha: Complex64,
    x: &[f64],
    route: PRoute,
    method: Method,
    opts: &FracOptions,
) -> Result<Complex64> {
    let n = f.dim();
    if x.len() != n {
        return Err(Error::DimensionMismatch { expected: n, got: x.len() });
    }
    if !(n == 2 || n == 3) {
        return Err(Error::Unsupported(format!("parabolic transforms need n in {{2,3}}, got {n}")));
    }
    let (xp, xn) = (&x[..n - 1], x[n - 1]);
    match route {
        PRoute::Direct => {
            check_method(alpha, Method::Direct, n, opts.ell)?;
            let q = transforms::parabolic_quadrature(&Quadrature::for_radius(support), x);
            let axis = box_nodes(support, q.step);
            let shifts: Vec<Vec<f64>> = if n == 2 {
                axis.iter().map(|&s| vec![s]).collect()
            } else {
                axis.iter().flat_map(|&a| axis.iter().map(move |&b| vec![a, b])).collect()
            };
            let half = ((support + opts.pad) / opts.step).ceil() as usize;
            let grid = Grid1D::centered(0.0, opts.step, half);
            let parts: Vec<Complex64> = shifts
                .par_iter()
                .map(|s| {
                    let z: Vec<f64> = s.iter().map(|v| -v).collect();
                    let t = xn - xp.iter().zip(s).map(|(a, b)| (a + b) * (a + b)).sum::<f64>();
                    if t <= grid.lo {
                        return Ok(Complex64::new(0.0, 0.0));
                    }
                    let sig = Signal::from_fn(grid, |u| f.eval(&with_last(&z, u)))?;
                    if sig.sup_norm() == 0.0 {
                        return Ok(Complex64::new(0.0, 0.0));
                    }
                    frac1d::rl_at(&sig, alpha, Side::Plus, t)
                })
                .collect::<Result<_>>()?;
            Ok(parts.iter().sum::<Complex64>() * q.step.powi(n as i32 - 1))
        }
        PRoute::Conjugated => {
            let sheared = Closure {
                n,
                f: |y: &[f64]| {
                    let mut z = [0.0; 3];
                    z[..n].copy_from_slice(y);
                    z[n - 1] -= y[..n - 1].iter().map(|v| v * v).sum::<f64>();
                    f.eval(&z[..n])
                },
            };
            let src = Numeric {
                f: sheared,
                support: support.hypot(support + support * support),
                // The slope term below already refines by the shear; a coarser base keeps the cost linear in it.
                quadrature: Quadrature::new(support, (support / 128.0).min(0.05))?,
                slope: 2.0 * support,
            };
            let r2: f64 = xp.iter().map(|v| v * v).sum();
            let mut z: Vec<f64> = xp.iter().map(|v| 2.0 * v).collect();
            z.push(xn - r2);
            t_plus(&src, alpha, &z, method, opts)
        }
    }
}

/// Rejects inputs outside the band-limited class with spectrum away from `xi_n = 0`.
pub fn check_phi(f: &TestFunction) -> Result<()> {
    match f.kind() {
        Kind::Bandlimited { r0, .. } => {
            let n = f.dimension();
            let low = f.atoms().iter().map(|a| a.freq[n - 1].abs()).fold(f64::INFINITY, f64::min);
            if low < r0 * (1.0 - 1e-12) {
                Err(Error::NotPhi(low))
            } else {
                Ok(())
            }
        }
        _ => Err(Error::NotPhi(0.0)),
    }
}

/// Symbol of `(2 pi)^{n-1} I^alpha_+ I^beta_- I_2^{n-1}` in the last variable, without the constant.
struct CompositionSymbol {
    alpha: Complex64,
    beta: Complex64,
    n: usize,
}

impl Symbol for CompositionSymbol {
    fn eval(&self, tau: f64) -> Complex64 {
        if tau == 0.0 {
            return Complex64::new(0.0, 0.0);
        }
        Fractional { alpha: self.alpha, side: Side::Plus }.eval(tau)
            * Fractional { alpha: self.beta, side: Side::Minus }.eval(tau)
            * tau.abs().powf(1.0 - self.n as f64)
    }
    fn singular_at_zero(&self) -> bool {
        true
    }
}

/// `(2 pi)^{n-1} I^alpha_+ I^beta_- I_2^{n-1} f` by a multiplier along the last axis,
/// where `I_2` is the one-variable Riesz potential.
pub fn composition_rhs(f: &SampledField, alpha: Complex64, beta: Complex64) -> Result<SampledField> {
    let n = f.dim();
    let sym = CompositionSymbol { alpha, beta, n };
    let mut out = spectral::apply_multiplier_axis(f, n - 1, &sym, ZeroBin::Zero)?;
    let c = (2.0 * PI).powi(n as i32 - 1);
    out.values.iter_mut().for_each(|v| *v *= c);
    Ok(out)
}

/// Trapezoid range and step of the inner `y'` integral of [`compose`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ComposeOptions {
    pub y_radius: f64,
    pub y_step: f64,
}

impl ComposeOptions {
    /// Sized from the spectral support of a band-limited `f` and the output grid.
    pub fn for_function(f: &TestFunction, grid: &GridND) -> Result<Self> {
        check_phi(f)?;
        let (r0, _) = match f.kind() {
            Kind::Bandlimited { r0, r1, .. } => (*r0, *r1),
            _ => unreachable!("checked by check_phi"),
        };
        let n = f.dimension();
        let sigma = f.sigma().unwrap_or(1.0);
        // Spectral window radius, matching the spatial decay radius.
        let band = f.atoms().iter().map(|a| a.freq.iter().map(|v| v * v).sum::<f64>().sqrt()).fold(0.0, f64::max)
            + f.decay_radius() / (sigma * sigma);
        let x_max = grid.axes[..n - 1].iter().map(|a| a.lo.abs().max(a.hi.abs())).fold(0.0, f64::max);
        Ok(Self {
            y_radius: 3.0 * band / r0,
            y_step: 2.0 * PI / (1.2 * (x_max + f.decay_radius()) * band),
        })
    }
}

/// `(T^alpha_+ T*^beta_+ f)` on a two-dimensional grid.
///
/// `T*^beta_+ f` is tabulated along `y'` slices and transformed in its last
/// variable; `T` acts on the spectra through the phase `exp(-i x' y' xi)` and the
/// outer `I^alpha_+` is a multiplier, so the last axis is periodized internally
/// over the reach of the slices.
pub fn compose(
    src: &dyn SliceSource,
    alpha: Complex64,
    beta: Complex64,
    grid: &GridND,
    copts: &ComposeOptions,
) -> Result<SampledField> {
    if src.dim() != 2 || grid.dim() != 2 {
        return Err(Error::Unsupported("the composition is implemented for n = 2".into()));
    }
    let out_xn = grid.axes[1];
    let h = out_xn.spacing();
    let reach = src.reach(&Line::TStar(vec![copts.y_radius]))?;
    let (fft_grid, k0) = padded(&out_xn, h, reach, 1.0);
    let ys = box_nodes(copts.y_radius, copts.y_step);
    let freqs = spectral::frequencies(&fft_grid);
    let inner = Fractional { alpha: beta, side: Side::Minus };
    let outer = Fractional { alpha, side: Side::Plus };
    let nodes = fft_grid.nodes();
    // spectra[y][k] of I^beta_- T*_{y'} f
    let spectra: Vec<Vec<Complex64>> = ys
        .par_iter()
        .map(|&y| {
            let line = Line::TStar(vec![y]);
            let v = nodes.iter().map(|&s| src.value(&line, s)).collect::<Result<Vec<_>>>()?;
            let mut c = spectral::dft1(&v, &fft_grid);
            for (ck, &tau) in c.iter_mut().zip(&freqs) {
                *ck *= if tau == 0.0 && inner.singular_at_zero() { Complex64::new(0.0, 0.0) } else { inner.eval(tau) };
            }
            Ok(c)
        })
        .collect::<Result<_>>()?;
    let m = fft_grid.count;
    let mut by_freq = vec![Complex64::new(0.0, 0.0); m * ys.len()];
    for (j, row) in spectra.iter().enumerate() {
        for (k, &c) in row.iter().enumerate() {
            by_freq[k * ys.len() + j] = c;
        }
    }
    let peak = by_freq.iter().map(|c| c.norm()).fold(0.0, f64::max);
    let live: Vec<bool> = (0..m)
        .map(|k| by_freq[k * ys.len()..(k + 1) * ys.len()].iter().any(|c| c.norm() > 1e-16 * peak))
        .collect();
    let dy = copts.y_step;
    let y0 = ys[0];
    let rows: Vec<Vec<Complex64>> = grid.axes[0]
        .nodes()
        .par_iter()
        .map(|&xp| {
            let mut acc = vec![Complex64::new(0.0, 0.0); m];
            for k in 0..m {
                if !live[k] {
                    continue;
                }
                let tau = freqs[k];
                let mut z = Complex64::from_polar(1.0, -xp * y0 * tau);
                let dz = Complex64::from_polar(1.0, -xp * dy * tau);
                let mut s = Complex64::new(0.0, 0.0);
                for c in &by_freq[k * ys.len()..(k + 1) * ys.len()] {
                    s += c * z;
                    z *= dz;
                }
                let w = if tau == 0.0 && outer.singular_at_zero() { Complex64::new(0.0, 0.0) } else { outer.eval(tau) };
                acc[k] = s * dy * w;
            }
            spectral::idft1(&acc, &fft_grid)[k0..k0 + out_xn.count].to_vec()
        })
        .collect();
    SampledField::new(grid.clone(), rows.concat())
}

/// A reconstruction and its relative l2 distance to the input on the grid.
#[derive(Debug, Clone)]
pub struct Inversion {
    pub field: SampledField,
    pub rel_l2: f64,
}

/// Relative l2 distance `|a - b| / |b|` of two fields on the same grid.
pub fn relative_l2(a: &[Complex64], b: &[Complex64]) -> f64 {
    let num: f64 = a.iter().zip(b).map(|(x, y)| (x - y).norm_sqr()).sum();
    let den: f64 = b.iter().map(|y| y.norm_sqr()).sum();
    (num / den).sqrt()
}

/// `(2 pi)^{1-n} T^{(1-n)/2}_+ T*^{(1-n)/2}_+ f`, n = 2.
pub fn invert(f: &TestFunction, grid: &GridND) -> Result<Inversion> {
    check_phi(f)?;
    let n = f.dimension();
    if n != 2 {
        return Err(Error::Unsupported(format!("inversion is implemented for n = 2, got {n}")));
    }
    let a = Complex64::new((1.0 - n as f64) / 2.0, 0.0);
    let mut field = compose(f, a, a, grid, &ComposeOptions::for_function(f, grid)?)?;
    let c = (2.0 * PI).powi(1 - n as i32);
    field.values.iter_mut().for_each(|v| *v *= c);
    let truth = crate::functions::sample(f, grid)?;
    let rel_l2 = relative_l2(&field.values, &truth.values);
    Ok(Inversion { field, rel_l2 })
}

/// A fully specified pointwise evaluation of one of the fractional transforms.
#[derive(Debug, Clone)]
pub struct FracTransformRequest {
    pub kind: TransformKind,
    pub alpha: Complex64,
    pub input: TestFunction,
    pub method: Method,
    pub options: FracOptions,
}

impl FracTransformRequest {
    pub fn validate(&self) -> Result<()> {
        let n = self.input.dimension();
        check_method(self.alpha, self.method, n, self.options.ell)?;
        if self.method == Method::Continued && self.input.atoms().is_empty() && self.alpha.re <= 0.0 {
            if !self.input.decay_radius().is_finite() {
                return Err(Error::Unsupported("continuation needs a rapidly decaying input".into()));
            }
        }
        Ok(())
    }

    /// `point` is `x` for T, T*, P and `[theta.., t]` for R.
    pub fn eval(&self, point: &[f64]) -> Result<Complex64> {
        self.validate()?;
        let f = &self.input;
        let o = &self.options;
        match self.kind {
            TransformKind::T => t_plus(f, self.alpha, point, self.method, o),
            TransformKind::TStar => t_star_plus(f, self.alpha, point, self.method, o),
            TransformKind::R => {
                let n = f.dimension();
                if point.len() != n + 1 {
                    return Err(Error::DimensionMismatch { expected: n + 1, got: point.len() });
                }
                r_plus(f, self.alpha, &point[..n], point[n], self.method, o)
            }
            TransformKind::P => {
                let route = if self.method == Method::Direct { PRoute::Direct } else { PRoute::Conjugated };
                p_plus(f, finite_radius(f)?, self.alpha, point, route, self.method, o)
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::functions::Reflected;

    fn c(a: f64) -> Complex64 {
        Complex64::new(a, 0.0)
    }

    #[test]
    fn first_order_integral_of_gaussian() {
        // I^1 of sqrt(pi) e^{-s^2} at 0 is half the total mass: pi/2.
        let g = TestFunction::gaussian(2, 1.0).unwrap();
        let v = t_plus(&g, c(1.0), &[0.0, 0.0], Method::Direct, &FracOptions::default()).unwrap();
        assert!((v.re - PI / 2.0).abs() < 1e-6 && v.im.abs() < 1e-12);
    }

    #[test]
    fn zero_order_is_the_transform() {
        let f = TestFunction::parse("bandlimited:r0=2,r1=4,seed=1", 2).unwrap();
        let o = FracOptions::default();
        for x in [[0.3, -0.2], [1.5, 2.0]] {
            let v = t_plus(&f, c(0.0), &x, Method::Continued, &o).unwrap();
            assert!((v - f.transversal_exact(&x).unwrap()).norm() < 1e-6);
            let d = t_star_plus(&f, c(0.0), &x, Method::Continued, &o).unwrap();
            assert!((d - f.transversal_exact(&[-x[0], x[1]]).unwrap()).norm() < 1e-6);
        }
        let g = TestFunction::gaussian(2, 1.0).unwrap();
        let r = r_plus(&g, c(0.0), &[0.6, 0.8], 0.4, Method::Continued, &o).unwrap();
        assert!((r.re - PI.sqrt() * (-0.16f64).exp()).abs() < 1e-12);
    }

    #[test]
    fn derivative_ladder() {
        let g = TestFunction::gaussian(2, 1.0).unwrap();
        let o = FracOptions::default();
        let d = 1e-3;
        let at = |xn: f64| t_plus(&g, c(1.5), &[0.4, xn], Method::Direct, &o).unwrap();
        let fd = (at(0.2 + d) - at(0.2 - d)) / (2.0 * d);
        let v = t_plus(&g, c(0.5), &[0.4, 0.2], Method::Direct, &o).unwrap();
        assert!((fd - v).norm() < 1e-4);
    }

    #[test]
    fn dual_is_reflected_transform() {
        let f = TestFunction::parse("bandlimited:r0=2,r1=4,seed=2", 2).unwrap();
        let refl = Numeric::new(Reflected(&f), f.decay_radius());
        let o = FracOptions { step: 1.0 / 64.0, ..Default::default() };
        let x = [0.5, 0.7];
        let a = t_star_plus(&f, c(0.5), &x, Method::Direct, &o).unwrap();
        let b = t_plus(&refl, c(0.5), &[0.5, -0.7], Method::Direct, &o).unwrap();
        assert!((a - b).norm() < 1e-10, "{a} vs {b}");
    }

    #[test]
    fn method_preconditions() {
        let g = TestFunction::gaussian(2, 1.0).unwrap();
        let o = FracOptions::default();
        assert!(t_plus(&g, c(-0.5), &[0.0, 0.0], Method::Direct, &o).is_err());
        assert!(t_plus(&g, c(-0.7), &[0.0, 0.0], Method::Hypersingular, &o).is_err());
        assert!(t_plus(&g, Complex64::new(-0.3, 0.1), &[0.0, 0.0], Method::Hypersingular, &o).is_err());
        let l = TestFunction::logdecay(2, 1.5).unwrap();
        assert!(matches!(t_plus(&l, c(0.5), &[0.0, 0.0], Method::Direct, &o), Err(Error::Unsupported(_))));
        assert!("sideways".parse::<Method>().is_err());
        assert_eq!("hypersingular".parse::<Method>().unwrap(), Method::Hypersingular);
    }

    #[test]
    fn phi_class_check() {
        assert!(check_phi(&TestFunction::parse("bandlimited:r0=2,r1=4,seed=1", 2).unwrap()).is_ok());
        assert!(matches!(check_phi(&TestFunction::gaussian(2, 1.0).unwrap()), Err(Error::NotPhi(_))));
    }

    #[test]
    fn parabolic_routes_agree() {
        let g = TestFunction::gaussian(2, 1.0).unwrap();
        let o = FracOptions { step: 1.0 / 128.0, ..Default::default() };
        let r = g.decay_radius();
        for x in [[0.3, 0.5], [-0.8, 1.2]] {
            let d = p_plus(&g, r, c(0.5), &x, PRoute::Direct, Method::Direct, &o).unwrap();
            let cj = p_plus(&g, r, c(0.5), &x, PRoute::Conjugated, Method::Direct, &o).unwrap();
            assert!((d - cj).norm() < 1e-4, "{d} vs {cj}");
        }
    }
}
