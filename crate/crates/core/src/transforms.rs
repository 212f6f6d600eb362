//! Radon-type transforms R, T, T*, P, the dual R*, and the coordinate maps between them.

use crate::error::{Error, Result};
use crate::functions::PointFn;
use crate::grid::Grid1D;
use crate::special::{composite_gl, gauss_legendre, sphere_area};
use num_complex::Complex64;
use rayon::prelude::*;
use std::f64::consts::PI;

/// Integrand magnitude at the truncation radius above which a result is flagged.
pub const DECAY_WARN: f64 = 1e-12;

/// Directions with |theta_n| below this are excluded from the Lambda maps.
pub const EQUATOR_FLOOR: f64 = 1e-3;

/// Quadrature on the unit sphere: directions and weights summing to |S^{n-1}|.
#[derive(Debug, Clone, PartialEq)]
pub struct DirectionSet {
    pub n: usize,
    pub directions: Vec<Vec<f64>>,
    pub weights: Vec<f64>,
}

impl DirectionSet {
    /// `m` equally spaced angles (2k+1) pi / m on S^1; antipodally closed for even m.
    pub fn circle(m: usize) -> Result<Self> {
        if m < 2 {
            return Err(Error::InvalidParameter("need at least two directions".into()));
        }
        let directions = (0..m)
            .map(|k| {
                let phi = PI * (2 * k + 1) as f64 / m as f64;
                vec![phi.cos(), phi.sin()]
            })
            .collect();
        Ok(Self { n: 2, directions, weights: vec![2.0 * PI / m as f64; m] })
    }

    /// Gauss-Legendre in cos(polar angle) times uniform azimuth on S^2.
    pub fn sphere(polar: usize, azimuth: usize) -> Result<Self> {
        if polar < 1 || azimuth < 2 {
            return Err(Error::InvalidParameter("sphere rule needs polar >= 1, azimuth >= 2".into()));
        }
        let (u, w) = gauss_legendre(polar);
        let mut directions = Vec::with_capacity(polar * azimuth);
        let mut weights = Vec::with_capacity(polar * azimuth);
        for (&z, &wz) in u.iter().zip(&w) {
            let r = (1.0 - z * z).sqrt();
            for j in 0..azimuth {
                let phi = 2.0 * PI * (j as f64 + 0.5) / azimuth as f64;
                directions.push(vec![r * phi.cos(), r * phi.sin(), z]);
                weights.push(wz * 2.0 * PI / azimuth as f64);
            }
        }
        Ok(Self { n: 3, directions, weights })
    }

    /// 128 angles for n = 2; 24 x 48 product rule for n = 3.
    pub fn default_for(n: usize) -> Result<Self> {
        match n {
            2 => Self::circle(128),
            3 => Self::sphere(24, 48),
            _ => Err(Error::InvalidParameter(format!("no direction set for n={n}"))),
        }
    }

    pub fn len(&self) -> usize {
        self.directions.len()
    }

    pub fn is_empty(&self) -> bool {
        self.directions.is_empty()
    }

    pub fn total_weight(&self) -> f64 {
        self.weights.iter().sum()
    }

    /// Index of the antipode of each direction, if the set is antipodally closed.
    pub fn antipodes(&self) -> Option<Vec<usize>> {
        self.directions
            .iter()
            .map(|d| {
                self.directions
                    .iter()
                    .position(|e| d.iter().zip(e).all(|(a, b)| (a + b).abs() < 1e-12))
            })
            .collect()
    }
}

/// Values on directions x offsets, direction-major.
#[derive(Debug, Clone, PartialEq)]
pub struct CylinderField {
    pub directions: DirectionSet,
    pub offsets: Grid1D,
    pub values: Vec<Complex64>,
}

impl CylinderField {
    pub fn new(directions: DirectionSet, offsets: Grid1D, values: Vec<Complex64>) -> Result<Self> {
        if values.len() != directions.len() * offsets.count {
            return Err(Error::InvalidParameter("cylinder field has wrong value count".into()));
        }
        if values.iter().any(|v| !v.re.is_finite() || !v.im.is_finite()) {
            return Err(Error::InvalidParameter("non-finite cylinder value".into()));
        }
        Ok(Self { directions, offsets, values })
    }

    /// Tabulates `phi(theta, t)` on the given layout.
    pub fn from_fn<F>(directions: DirectionSet, offsets: Grid1D, phi: F) -> Result<Self>
    where
        F: Fn(&[f64], f64) -> Complex64 + Sync,
    {
        let t = offsets.nodes();
        let values: Vec<Complex64> = directions
            .directions
            .par_iter()
            .flat_map_iter(|th| t.iter().map(|&t| phi(th, t)).collect::<Vec<_>>())
            .collect();
        Self::new(directions, offsets, values)
    }

    pub fn row(&self, i: usize) -> &[Complex64] {
        let m = self.offsets.count;
        &self.values[i * m..(i + 1) * m]
    }

    /// Linear interpolation in the offset variable.
    pub fn interp(&self, i: usize, t: f64) -> Result<Complex64> {
        let (k, frac) = self.offsets.locate(t).ok_or(Error::OutOfRange(t))?;
        let row = self.row(i);
        Ok(row[k] * (1.0 - frac) + row[k + 1] * frac)
    }
}

/// Trapezoid rule on [-radius, radius] per axis with the given step.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Quadrature {
    pub radius: f64,
    pub step: f64,
}

impl Quadrature {
    pub fn new(radius: f64, step: f64) -> Result<Self> {
        if !(radius > 0.0 && step > 0.0 && step < radius) {
            return Err(Error::InvalidParameter(format!("bad quadrature radius={radius} step={step}")));
        }
        Ok(Self { radius, step })
    }

    /// Covers `radius` with the default step min(radius / 256, 0.05).
    pub fn for_radius(radius: f64) -> Self {
        Self { radius, step: (radius / 256.0).min(0.05) }
    }

    fn nodes(&self) -> Vec<f64> {
        let k = (self.radius / self.step).ceil() as i64;
        (-k..=k).map(|j| j as f64 * self.step).collect()
    }

    /// Same box with the step divided by `factor` (at least 1).
    pub fn refined(&self, factor: f64) -> Self {
        Self { radius: self.radius, step: self.step / factor.max(1.0) }
    }
}

/// A truncated integral and the integrand magnitude at the truncation boundary.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LineIntegral {
    pub value: Complex64,
    pub boundary: f64,
}

impl LineIntegral {
    pub fn truncated(&self) -> bool {
        self.boundary > DECAY_WARN
    }
}

fn orthonormal_complement(theta: &[f64]) -> Vec<Vec<f64>> {
    let n = theta.len();
    if n == 2 {
        return vec![vec![-theta[1], theta[0]]];
    }
    // Householder reflection sending e_n to theta; its other columns span theta-perp.
    let mut v: Vec<f64> = theta.iter().map(|x| -x).collect();
    v[n - 1] += 1.0;
    let vv: f64 = v.iter().map(|x| x * x).sum();
    (0..n - 1)
        .map(|j| {
            let mut e = vec![0.0; n];
            e[j] = 1.0;
            if vv > 1e-24 {
                let c = 2.0 * v[j] / vv;
                for (ei, vi) in e.iter_mut().zip(&v) {
                    *ei -= c * vi;
                }
            }
            e
        })
        .collect()
}

/// Integrates `g(s)` over s in [-r, r]^m with the trapezoid nodes of `q`.
fn box_integral<G: Fn(&[f64]) -> Complex64>(m: usize, q: &Quadrature, g: G) -> Complex64 {
    let nodes = q.nodes();
    let h = q.step.powi(m as i32);
    match m {
        1 => nodes.iter().map(|&s| g(&[s])).sum::<Complex64>() * h,
        2 => {
            let mut total = Complex64::new(0.0, 0.0);
            for &a in &nodes {
                let row: Complex64 = nodes.iter().map(|&b| g(&[a, b])).sum();
                total += row;
            }
            total * h
        }
        _ => unreachable!("dimension checked by callers"),
    }
}

fn boundary_probe<G: Fn(&[f64]) -> Complex64>(m: usize, r: f64, g: G) -> f64 {
    let pts: Vec<Vec<f64>> = if m == 1 {
        vec![vec![-r], vec![r]]
    } else {
        (0..8).map(|k| {
            let a = PI * k as f64 / 4.0;
            vec![r * a.cos(), r * a.sin()]
        }).collect()
    };
    pts.iter().map(|p| g(p).norm()).fold(0.0, f64::max)
}

fn check_n(n: usize) -> Result<()> {
    if n == 2 || n == 3 {
        Ok(())
    } else {
        Err(Error::InvalidParameter(format!("transforms support n in {{2,3}}, got {n}")))
    }
}

/// `(Rf)(theta, t) = int_{theta-perp} f(t theta + y) dy`, truncated to the quadrature box.
pub fn radon<F: PointFn + ?Sized>(f: &F, theta: &[f64], t: f64, q: &Quadrature) -> Result<LineIntegral> {
    let n = f.dim();
    check_n(n)?;
    if theta.len() != n {
        return Err(Error::DimensionMismatch { expected: n, got: theta.len() });
    }
    let basis = orthonormal_complement(theta);
    let point = |s: &[f64]| -> Complex64 {
        let mut buf = [0.0; 3];
        let x = &mut buf[..n];
        for (xi, v) in x.iter_mut().zip(theta) {
            *xi = t * v;
        }
        for (sj, b) in s.iter().zip(&basis) {
            for (xi, bi) in x.iter_mut().zip(b) {
                *xi += sj * bi;
            }
        }
        f.eval(x)
    };
    Ok(LineIntegral { value: box_integral(n - 1, q, point), boundary: boundary_probe(n - 1, q.radius, point) })
}

/// Radial Radon integral and whether its tail passed the Cauchy test.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RadialIntegral {
    pub value: f64,
    pub converged: bool,
}

/// `sigma_{n-2} int_{|t|}^R f0(r) (r^2 - t^2)^{(n-3)/2} r dr` via r = |t| cosh u.
pub fn radon_radial<F: Fn(f64) -> f64>(f0: F, n: usize, t: f64, rmax: f64) -> Result<RadialIntegral> {
    if n < 2 {
        return Err(Error::InvalidParameter("radial formula needs n >= 2".into()));
    }
    let s = sphere_area(n - 1);
    let a = t.abs();
    let partial = |r: f64| -> f64 {
        if r <= a {
            return 0.0;
        }
        if a == 0.0 {
            let (x, w) = composite_gl(0.0, r, 256, 16);
            return s * x.iter().zip(&w).map(|(&x, &w)| w * f0(x) * x.powi(n as i32 - 2)).sum::<f64>();
        }
        let umax = (r / a).acosh();
        let (u, w) = composite_gl(0.0, umax, 256, 16);
        s * a.powi(n as i32 - 1)
            * u.iter()
                .zip(&w)
                .map(|(&u, &w)| w * f0(a * u.cosh()) * u.sinh().powi(n as i32 - 2) * u.cosh())
                .sum::<f64>()
    };
    let full = partial(rmax);
    let inner = partial(0.9 * rmax);
    let converged = (full - inner).abs() <= 1e-10 * full.abs().max(1e-300);
    Ok(RadialIntegral { value: full, converged })
}

fn split(x: &[f64]) -> (&[f64], f64) {
    let n = x.len();
    (&x[..n - 1], x[n - 1])
}

/// `(Tf)(x) = int f(y', x_n + x'.y') dy'`.
pub fn transversal<F: PointFn + ?Sized>(f: &F, x: &[f64], q: &Quadrature) -> Result<LineIntegral> {
    transversal_signed(f, x, q, 1.0)
}

/// `(T*g)(x) = int g(y', x_n - x'.y') dy'`.
pub fn transversal_dual<F: PointFn + ?Sized>(g: &F, x: &[f64], q: &Quadrature) -> Result<LineIntegral> {
    transversal_signed(g, x, q, -1.0)
}

fn transversal_signed<F: PointFn + ?Sized>(f: &F, x: &[f64], q: &Quadrature, sign: f64) -> Result<LineIntegral> {
    let n = f.dim();
    check_n(n)?;
    if x.len() != n {
        return Err(Error::DimensionMismatch { expected: n, got: x.len() });
    }
    let (xp, xn) = split(x);
    let point = |y: &[f64]| -> Complex64 {
        let mut z = [0.0; 3];
        z[..n - 1].copy_from_slice(y);
        z[n - 1] = xn + sign * y.iter().zip(xp).map(|(a, b)| a * b).sum::<f64>();
        f.eval(&z[..n])
    };
    Ok(LineIntegral { value: box_integral(n - 1, q, point), boundary: boundary_probe(n - 1, q.radius, point) })
}

/// Step refinement that keeps the transversal integrand resolved for slope |x'|.
pub fn transversal_quadrature(base: &Quadrature, x: &[f64]) -> Quadrature {
    let (xp, _) = split(x);
    let slope = xp.iter().map(|v| v * v).sum::<f64>().sqrt();
    base.refined((1.0 + slope * slope).sqrt())
}

/// `(Pf)(x) = int f(x' - y', x_n - |y'|^2) dy'` with y' = x' + s, s in the quadrature box.
pub fn parabolic<F: PointFn + ?Sized>(f: &F, x: &[f64], q: &Quadrature) -> Result<LineIntegral> {
    let n = f.dim();
    check_n(n)?;
    if x.len() != n {
        return Err(Error::DimensionMismatch { expected: n, got: x.len() });
    }
    let (xp, xn) = split(x);
    let point = |s: &[f64]| -> Complex64 {
        let mut z = [0.0; 3];
        for (zi, v) in z.iter_mut().zip(s) {
            *zi = -v;
        }
        z[n - 1] = xn - xp.iter().zip(s).map(|(a, b)| (a + b) * (a + b)).sum::<f64>();
        f.eval(&z[..n])
    };
    let value = if n == 2 { parabolic_window_sum(xp[0], xn, q, &point) } else { box_integral(n - 1, q, point) };
    Ok(LineIntegral { value, boundary: boundary_probe(n - 1, q.radius, point) })
}

/// Trapezoid sum of the n = 2 parabolic integrand over the box nodes where its
/// last argument `x_n - (x' + s)^2` stays within the quadrature radius; the other
/// nodes lie outside the support the radius stands for.
fn parabolic_window_sum<G: Fn(&[f64]) -> Complex64>(xp: f64, xn: f64, q: &Quadrature, g: &G) -> Complex64 {
    let r = q.radius;
    let hi2 = xn + r;
    if hi2 < 0.0 {
        return Complex64::new(0.0, 0.0);
    }
    let (a, b) = ((xn - r).max(0.0).sqrt(), hi2.sqrt());
    let k = (r / q.step).ceil() as i64;
    let index = |v: f64, up: bool| -> i64 {
        let j = v / q.step;
        (if up { j.ceil() } else { j.floor() } as i64).clamp(-k - 1, k + 1)
    };
    // s in [-xp + a, -xp + b] and s in [-xp - b, -xp - a]; merged when they touch.
    let mut ranges = vec![(index(-xp - b, true), index(-xp - a, false)), (index(-xp + a, true), index(-xp + b, false))];
    if ranges[0].1 >= ranges[1].0 {
        ranges = vec![(ranges[0].0, ranges[1].1)];
    }
    let mut total = Complex64::new(0.0, 0.0);
    for (lo, hi) in ranges {
        for j in lo.max(-k)..=hi.min(k) {
            total += g(&[j as f64 * q.step]);
        }
    }
    total * q.step
}

/// Step refinement for the parabolic integrand, whose last argument has slope 2|y'|.
pub fn parabolic_quadrature(base: &Quadrature, x: &[f64]) -> Quadrature {
    let (xp, xn) = split(x);
    let r = xp.iter().map(|v| v * v).sum::<f64>().sqrt();
    let reach = (xn.abs() + base.radius).sqrt().min(r + base.radius);
    base.refined(1.0 + 2.0 * reach)
}

/// `(R* phi)(x) = sum_i w_i phi(theta_i, x.theta_i)` (integral over the sphere).
pub fn radon_dual(phi: &CylinderField, x: &[f64]) -> Result<Complex64> {
    let dirs = &phi.directions;
    if x.len() != dirs.n {
        return Err(Error::DimensionMismatch { expected: dirs.n, got: x.len() });
    }
    let mut acc = Complex64::new(0.0, 0.0);
    for (i, (th, w)) in dirs.directions.iter().zip(&dirs.weights).enumerate() {
        let t: f64 = th.iter().zip(x).map(|(a, b)| a * b).sum();
        acc += *w * phi.interp(i, t)?;
    }
    Ok(acc)
}

/// Dual transform as the average over the sphere: `radon_dual / |S^{n-1}|`.
pub fn radon_dual_mean(phi: &CylinderField, x: &[f64]) -> Result<Complex64> {
    Ok(radon_dual(phi, x)? / sphere_area(phi.directions.n))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MapKind {
    Lambda,
    LambdaInv,
    B1,
    B1Inv,
    B2,
    B2Inv,
}

/// Hyperplane parameters for a point of R^n: theta = (x' - e_n)/sqrt(1+|x'|^2), t = -x_n/sqrt(1+|x'|^2).
pub fn transversal_to_cylinder(x: &[f64]) -> (Vec<f64>, f64) {
    let (xp, xn) = split(x);
    let q = (1.0 + xp.iter().map(|v| v * v).sum::<f64>()).sqrt();
    let mut th: Vec<f64> = xp.iter().map(|v| v / q).collect();
    th.push(-1.0 / q);
    (th, -xn / q)
}

/// Inverse parametrization: x' = -theta'/theta_n, x_n = t/theta_n.
pub fn cylinder_to_transversal(theta: &[f64], t: f64) -> Result<Vec<f64>> {
    let n = theta.len();
    let tn = theta[n - 1];
    if tn.abs() < EQUATOR_FLOOR {
        return Err(Error::Equator(tn.abs()));
    }
    let mut x: Vec<f64> = theta[..n - 1].iter().map(|v| -v / tn).collect();
    x.push(t / tn);
    Ok(x)
}

/// Evaluates the mapped field at `point`.
///
/// `Lambda` takes a function on R^n and returns one on the cylinder, whose points
/// are passed as `[theta_1, .., theta_n, t]`; `LambdaInv` goes the other way.
/// The B-maps act on functions on R^n.
pub fn coordinate_map(
    kind: MapKind,
    alpha: Complex64,
    input: &dyn Fn(&[f64]) -> Complex64,
    point: &[f64],
) -> Result<Complex64> {
    match kind {
        MapKind::Lambda => {
            let n = point.len() - 1;
            let (theta, t) = (&point[..n], point[n]);
            let x = cylinder_to_transversal(theta, t)?;
            Ok(Complex64::new(theta[n - 1].abs(), 0.0).powc(alpha - 1.0) * input(&x))
        }
        MapKind::LambdaInv => {
            let (theta, t) = transversal_to_cylinder(point);
            let (xp, _) = split(point);
            let q = 1.0 + xp.iter().map(|v| v * v).sum::<f64>();
            let mut p = theta;
            p.push(t);
            Ok(Complex64::new(q, 0.0).powc((alpha - 1.0) / 2.0) * input(&p))
        }
        MapKind::B1 | MapKind::B1Inv | MapKind::B2 | MapKind::B2Inv => {
            let (xp, xn) = split(point);
            let r2: f64 = xp.iter().map(|v| v * v).sum();
            let mut y: Vec<f64> = match kind {
                MapKind::B2 => xp.iter().map(|v| 2.0 * v).collect(),
                MapKind::B2Inv => xp.iter().map(|v| v / 2.0).collect(),
                _ => xp.to_vec(),
            };
            y.push(match kind {
                MapKind::B1 | MapKind::B2 => xn - r2,
                MapKind::B1Inv => xn + r2,
                _ => xn + r2 / 4.0,
            });
            Ok(input(&y))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::functions::{gaussian_radon_oracle, TestFunction};

    #[test]
    fn direction_sets() {
        for d in [DirectionSet::circle(128).unwrap(), DirectionSet::sphere(24, 48).unwrap()] {
            let s = sphere_area(d.n);
            assert!((d.total_weight() - s).abs() < 1e-12);
            for th in &d.directions {
                assert!((th.iter().map(|v| v * v).sum::<f64>().sqrt() - 1.0).abs() < 1e-14);
            }
            assert!(d.antipodes().is_some());
        }
        assert!(DirectionSet::circle(7).unwrap().antipodes().is_none());
    }

    #[test]
    fn radon_gaussian_matches_oracle() {
        let f = TestFunction::gaussian(2, 1.0).unwrap();
        let q = Quadrature::for_radius(8.0);
        for (th, t) in [([1.0, 0.0], 0.0), ([0.6, 0.8], 0.5), ([-0.28, 0.96], -1.2)] {
            let r = radon(&f, &th, t, &q).unwrap();
            assert!((r.value.re - gaussian_radon_oracle(2, t)).abs() < 1e-13);
            assert!(!r.truncated());
        }
        let f3 = TestFunction::gaussian(3, 1.0).unwrap();
        let q3 = Quadrature::new(7.0, 0.1).unwrap();
        let r = radon(&f3, &[0.0, 0.6, 0.8], 0.3, &q3).unwrap();
        assert!((r.value.re - gaussian_radon_oracle(3, 0.3)).abs() < 1e-12);
    }

    #[test]
    fn radial_formula() {
        let g = |r: f64| (-r * r).exp();
        assert!((radon_radial(g, 3, 0.0, 8.0).unwrap().value - PI).abs() < 1e-13);
        assert!((radon_radial(g, 2, 0.0, 8.0).unwrap().value - PI.sqrt()).abs() < 1e-13);
        for t in [0.5, 1.0] {
            let v = radon_radial(g, 2, t, 8.0).unwrap();
            assert!(v.converged);
            assert!((v.value - gaussian_radon_oracle(2, t)).abs() < 1e-12);
        }
        let slow = |r: f64| 1.0 / ((2.0 + r) * (2.0 + r).ln());
        assert!(!radon_radial(slow, 2, 0.0, 1e3).unwrap().converged);
    }

    #[test]
    fn transversal_and_dual_relations() {
        let f = TestFunction::gaussian(2, 1.0).unwrap();
        let q = Quadrature::for_radius(8.0);
        let v = transversal(&f, &[0.0, 0.7], &q).unwrap().value;
        assert!((v.re - PI.sqrt() * (-0.49f64).exp()).abs() < 1e-13);
        let b = TestFunction::parse("bandlimited:r0=2,r1=4,seed=5", 2).unwrap();
        let qb = Quadrature::new(26.0, 0.02).unwrap();
        let x = [0.7, -0.4];
        let d = transversal_dual(&b, &x, &qb).unwrap().value;
        let t = transversal(&b, &[-0.7, -0.4], &qb).unwrap().value;
        assert!((d - t).norm() < 1e-12);
    }

    #[test]
    fn lambda_round_trip() {
        let psi = |x: &[f64]| Complex64::new(x[0].sin() + x[1] * x[1], x[0] * x[1]);
        let alpha = Complex64::new(0.5, 0.3);
        for x in [[0.3, -0.8], [2.0, 1.5], [-1.1, 0.0]] {
            let lam = |p: &[f64]| coordinate_map(MapKind::Lambda, alpha, &psi, p).unwrap();
            let back = coordinate_map(MapKind::LambdaInv, alpha, &lam, &x).unwrap();
            assert!((back - psi(&x)).norm() < 1e-12);
        }
        let equator = [1.0, 0.0, 0.3];
        assert!(coordinate_map(MapKind::Lambda, alpha, &psi, &equator).is_err());
    }

    #[test]
    fn b_maps_invert() {
        let f = |x: &[f64]| Complex64::new((x[0] - 0.3 * x[1]).cos(), x[1]);
        let a = Complex64::new(0.0, 0.0);
        for x in [[0.3, -0.8], [1.7, 2.5]] {
            let b1 = |p: &[f64]| coordinate_map(MapKind::B1, a, &f, p).unwrap();
            let b2 = |p: &[f64]| coordinate_map(MapKind::B2, a, &f, p).unwrap();
            assert!((coordinate_map(MapKind::B1Inv, a, &b1, &x).unwrap() - f(&x)).norm() < 1e-14);
            assert!((coordinate_map(MapKind::B2Inv, a, &b2, &x).unwrap() - f(&x)).norm() < 1e-14);
        }
    }

    #[test]
    fn dual_of_gaussian_profile() {
        let dirs = DirectionSet::circle(128).unwrap();
        let off = Grid1D::new(-8.0, 8.0, 1601).unwrap();
        let phi = CylinderField::from_fn(dirs, off, |_, t| Complex64::new((-t * t).exp(), 0.0)).unwrap();
        assert!((radon_dual(&phi, &[0.0, 0.0]).unwrap().re - 2.0 * PI).abs() < 1e-12);
        assert!(radon_dual(&phi, &[20.0, 0.0]).is_err());
    }

    #[test]
    fn parabolic_is_conjugated_transversal() {
        use crate::functions::Closure;
        let f = TestFunction::parse("bandlimited:r0=2,r1=4,seed=4", 2).unwrap();
        let b1 = Closure { n: 2, f: |y: &[f64]| f.eval(&[y[0], y[1] - y[0] * y[0]]) };
        let base = Quadrature::for_radius(f.decay_radius());
        for x in [[0.3, 0.5], [-1.2, 4.0], [7.5, 60.0], [0.0, -30.0]] {
            let q = parabolic_quadrature(&base, &x);
            let p = parabolic(&f, &x, &q).unwrap().value;
            let z = [2.0 * x[0], x[1] - x[0] * x[0]];
            let t = transversal(&b1, &z, &q).unwrap().value;
            assert!((p - t).norm() < 1e-12, "{x:?}: {p} vs {t}");
        }
    }
}
