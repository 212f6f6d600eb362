//! Weighted norms on R^n and on the cylinder, the sharp constants and exponent
//! laws of the fractional transforms, and audits of the bounds, transfer
//! identities, dilation laws and sharpness witnesses built on them.

use crate::error::{Error, Result};
use crate::fracradon::{self, FracOptions, Line, Method, Numeric, SliceSource};
use crate::functions::{sample, Dilated, Kind, TestFunction};
use crate::grid::{Grid1D, GridND, SampledField};
use crate::special::{composite_gl, gamma, gamma_real, kahan_sum, sphere_area};
use crate::transforms::{self, CylinderField, DirectionSet, Quadrature};
use num_complex::Complex64;
use rayon::prelude::*;
use std::f64::consts::PI;
use std::fmt;

/// What a report asserts about `measured` relative to `reference`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Claim {
    AtMost,
    Equal,
    /// No explicit constant is known; the ratio is reported without a verdict.
    Informational,
}

impl fmt::Display for Claim {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Claim::AtMost => "<=",
            Claim::Equal => "=",
            Claim::Informational => "informational",
        })
    }
}

/// A measured operator-norm ratio against its theoretical constant.
#[derive(Debug, Clone, PartialEq)]
pub struct NormReport {
    pub operator: String,
    pub input: String,
    pub n: usize,
    pub p: f64,
    /// Target exponent, NaN when the claim concerns a single exponent.
    pub q: f64,
    pub nu: f64,
    pub mu: f64,
    pub alpha: f64,
    pub measured: f64,
    /// NaN for informational reports.
    pub reference: f64,
    pub claim: Claim,
    pub tol: f64,
    pub grid: String,
}

impl NormReport {
    pub fn rel_error(&self) -> f64 {
        (self.measured - self.reference) / self.reference.abs()
    }

    pub fn pass(&self) -> bool {
        match self.claim {
            Claim::AtMost => self.measured <= self.reference * (1.0 + self.tol),
            Claim::Equal => (self.measured - self.reference).abs() <= self.tol * self.reference.abs(),
            Claim::Informational => true,
        }
    }
}

/// Two independently computed sides of an identity.
#[derive(Debug, Clone, PartialEq)]
pub struct IdentityCheck {
    pub name: String,
    pub params: String,
    pub lhs: f64,
    pub rhs: f64,
    pub tol: f64,
}

impl IdentityCheck {
    pub fn new(name: &str, params: String, lhs: f64, rhs: f64, tol: f64) -> Self {
        Self { name: name.to_string(), params, lhs, rhs, tol }
    }

    pub fn rel_error(&self) -> f64 {
        let scale = self.rhs.abs().max(f64::MIN_POSITIVE);
        (self.lhs - self.rhs).abs() / scale
    }

    pub fn pass(&self) -> bool {
        self.rel_error() <= self.tol
    }
}

fn check_p(p: f64) -> Result<()> {
    if p >= 1.0 && p.is_finite() {
        Ok(())
    } else {
        Err(Error::InvalidParameter(format!("need 1 <= p < inf, got {p}")))
    }
}

fn need_n2(n: usize, what: &str) -> Result<()> {
    if n == 2 {
        Ok(())
    } else {
        Err(Error::Unsupported(format!("{what} is implemented for n = 2, got n = {n}")))
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

/// `|x|^e` with `|0|^0 = 1`.
fn power_weight(x: f64, e: f64) -> f64 {
    if e == 0.0 {
        1.0
    } else {
        x.abs().powf(e)
    }
}

fn conj_inv(p: f64) -> f64 {
    1.0 - 1.0 / p
}

/// `(sum_i w_i sum_k h |t_k|^{nu p} |phi_ik|^p)^{1/p}`.
///
/// Fails when `nu < 0` and the offset grid holds the node `t = 0`; use
/// [`midpoint_offsets`] there.
pub fn weighted_norm_cylinder(phi: &CylinderField, p: f64, nu: f64) -> Result<f64> {
    check_p(p)?;
    let t = phi.offsets.nodes();
    let h = phi.offsets.spacing();
    if nu < 0.0 && t.iter().any(|v| v.abs() <= 1e-9 * h) {
        return Err(Error::InvalidParameter(format!("weight |t|^{nu} is singular at the grid node t = 0")));
    }
    let e = nu * p;
    let rows: Vec<f64> = (0..phi.directions.len())
        .into_par_iter()
        .map(|i| {
            let s = kahan_sum(phi.row(i).iter().zip(&t).map(|(v, &t)| power_weight(t, e) * v.norm().powf(p)));
            phi.directions.weights[i] * h * s
        })
        .collect();
    Ok(kahan_sum(rows).powf(1.0 / p))
}

/// Cell midpoints of `[lo, hi]` split into `cells` equal cells.
pub fn midpoint_offsets(lo: f64, hi: f64, cells: usize) -> Result<Grid1D> {
    if cells < 2 || !(lo < hi) {
        return Err(Error::InvalidParameter(format!("midpoint grid needs lo < hi and >= 2 cells, got {cells}")));
    }
    let h = (hi - lo) / cells as f64;
    Grid1D::new(lo + h / 2.0, hi - h / 2.0, cells)
}

/// `||u f||_p` with `u(x) = |x_n|^nu (1 + |x'|^2)^{-mu/2}` on the lattice of `f`.
pub fn weighted_norm_u(f: &SampledField, p: f64, nu: f64, mu: f64) -> Result<f64> {
    check_p(p)?;
    let n = f.dim();
    let last = f.grid.axes[n - 1];
    if nu < 0.0 && last.nodes().iter().any(|v| v.abs() <= 1e-9 * last.spacing()) {
        return Err(Error::InvalidParameter(format!("weight |x_n|^{nu} is singular at the grid node x_n = 0")));
    }
    let m = last.count;
    let rows: Vec<f64> = (0..f.values.len() / m)
        .into_par_iter()
        .map(|row| {
            let mut x = vec![0.0; n];
            f.grid.point(row * m, &mut x);
            let r2: f64 = x[..n - 1].iter().map(|v| v * v).sum();
            let wx = (1.0 + r2).powf(-mu * p / 2.0);
            wx * kahan_sum(
                f.values[row * m..(row + 1) * m]
                    .iter()
                    .enumerate()
                    .map(|(k, v)| power_weight(last.node(k), nu * p) * v.norm().powf(p)),
            )
        })
        .collect();
    Ok((kahan_sum(rows) * f.grid.cell_volume()).powf(1.0 / p))
}

/// `A = 2^{1/p} pi^{(n-1)/2} Gamma((1 - n/p')/2) / Gamma(n/(2p))` for `1 <= p < n/(n-1)`.
pub fn constant_a(p: f64, n: usize) -> Result<f64> {
    if n < 2 {
        return Err(Error::InvalidParameter("constant A needs n >= 2".into()));
    }
    let nf = n as f64;
    if !(p >= 1.0 && p < nf / (nf - 1.0)) {
        return Err(Error::InvalidParameter(format!("constant A needs 1 <= p < {}, got {p}", nf / (nf - 1.0))));
    }
    let num = gamma_real((1.0 - nf * conj_inv(p)) / 2.0);
    Ok(2f64.powf(1.0 / p) * PI.powf((nf - 1.0) / 2.0) * num / gamma_real(nf / (2.0 * p)))
}

/// Interpolation exponents at `alpha0` and the matching sharp weights.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Exponents {
    pub p: f64,
    /// Infinite at `alpha0 = 1`.
    pub q: f64,
    pub nu: f64,
    pub mu: f64,
}

/// `p = (n+1)/(n+alpha0)`, `q = (n+1)/(1-alpha0)`, `nu = -alpha0 - (n-1)/p'`, `mu = -n(1-2/p)`.
pub fn exponents(alpha0: f64, n: usize) -> Result<Exponents> {
    let nf = n as f64;
    let lo = (1.0 - nf) / 2.0;
    if n < 2 || !(alpha0 >= lo && alpha0 <= 1.0) {
        return Err(Error::InvalidParameter(format!("alpha0 must lie in [{lo}, 1], got {alpha0}")));
    }
    let p = (nf + 1.0) / (nf + alpha0);
    let q = if alpha0 == 1.0 { f64::INFINITY } else { (nf + 1.0) / (1.0 - alpha0) };
    Ok(Exponents { p, q, nu: -alpha0 - (nf - 1.0) * conj_inv(p), mu: -nf * (1.0 - 2.0 / p) })
}

fn is_positive(f: &TestFunction) -> bool {
    matches!(f.kind(), Kind::Gaussian { .. } | Kind::Mollifier { .. })
}

fn radon_field(f: &TestFunction, dirs: &DirectionSet, offsets: &Grid1D) -> Result<CylinderField> {
    let t = offsets.nodes();
    let rows: Vec<Vec<Complex64>> = dirs
        .directions
        .par_iter()
        .map(|th| t.iter().map(|&t| f.value(&Line::R(th.clone()), t)).collect())
        .collect::<Result<_>>()?;
    CylinderField::new(dirs.clone(), *offsets, rows.concat())
}

fn grid_label(grid: &GridND) -> String {
    let a = &grid.axes[0];
    format!("lattice {}^{} on [{}, {}]", a.count, grid.dim(), a.lo, a.hi)
}

/// `||Rf||~_{p,nu} / ||f||_p` with `nu = -(n-1)/p'` against `A(p, n)`.
///
/// Equality is claimed at `p = 1` for positive inputs, the bound otherwise.
pub fn radon_norm_audit(f: &TestFunction, p: f64, dirs: &DirectionSet, offsets: &Grid1D, grid: &GridND) -> Result<NormReport> {
    let n = f.dimension();
    let a = constant_a(p, n)?;
    let nu = -(n as f64 - 1.0) * conj_inv(p);
    let phi = radon_field(f, dirs, offsets)?;
    let measured = weighted_norm_cylinder(&phi, p, nu)? / sample(f, grid)?.lp_norm(p);
    let (claim, tol) = if p == 1.0 && is_positive(f) { (Claim::Equal, 1e-4) } else { (Claim::AtMost, 1e-2) };
    Ok(NormReport {
        operator: "R".into(),
        input: f.to_string(),
        n,
        p,
        q: p,
        nu,
        mu: 0.0,
        alpha: 0.0,
        measured,
        reference: a,
        claim,
        tol,
        grid: format!(
            "{} directions x {} offsets on [{}, {}]; {}",
            dirs.len(),
            offsets.count,
            offsets.lo,
            offsets.hi,
            grid_label(grid)
        ),
    })
}

/// `int_a^b |t|^e dt` for `a < b` and `e > -1`.
fn power_integral(a: f64, b: f64, e: f64) -> f64 {
    let prim = |t: f64| t.signum() * t.abs().powf(e + 1.0) / (e + 1.0);
    prim(b) - prim(a)
}

/// Exponent regime of an `L^p` bound for `R^alpha_+`, `0 < alpha < 1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FracRegime {
    /// `q = p` and `nu = -alpha - (n-1)/p'`, for `1 <= p < n/(n-1+alpha)`.
    Weighted,
    /// `nu = 0` and `1/q = 1 - alpha - n/p'`, for `1 < p <= (n+1)/(n+alpha)`.
    Unweighted,
}

impl FracRegime {
    /// `(q, nu)` at the given order, exponent and dimension.
    pub fn exponents(self, alpha: f64, p: f64, n: usize) -> Result<(f64, f64)> {
        let nf = n as f64;
        if n < 2 || !(alpha > 0.0 && alpha < 1.0) {
            return Err(Error::InvalidParameter(format!("need n >= 2 and alpha in (0, 1), got n = {n}, alpha = {alpha}")));
        }
        match self {
            FracRegime::Weighted => {
                let top = nf / (nf - 1.0 + alpha);
                if !(p >= 1.0 && p < top) {
                    return Err(Error::InvalidParameter(format!("weighted bound needs 1 <= p < {top}, got {p}")));
                }
                Ok((p, -alpha - (nf - 1.0) * conj_inv(p)))
            }
            FracRegime::Unweighted => {
                let top = (nf + 1.0) / (nf + alpha);
                if !(p > 1.0 && p <= top) {
                    return Err(Error::InvalidParameter(format!("unweighted bound needs 1 < p <= {top}, got {p}")));
                }
                Ok((1.0 / (1.0 - alpha - nf * conj_inv(p)), 0.0))
            }
        }
    }
}

/// `||R^alpha_+ f||~_{q,nu} / ||f||_p` in either regime. No explicit constant
/// is known, so the report is informational.
///
/// The offsets must start left of the decay radius of `f` and end right of it.
/// Beyond the last cell each slice is replaced by its leading term
/// `M t^{alpha-1} / Gamma(alpha)`, `M` the mass of `f`, integrated in closed form.
#[allow(clippy::too_many_arguments)]
pub fn fractional_radon_audit(
    f: &TestFunction,
    alpha: f64,
    p: f64,
    regime: FracRegime,
    dirs: &DirectionSet,
    offsets: &Grid1D,
    grid: &GridND,
    opts: &FracOptions,
) -> Result<NormReport> {
    let n = f.dimension();
    let (q, nu) = regime.exponents(alpha, p, n)?;
    let r = finite_radius(f)?;
    let h = offsets.spacing();
    let (lo, top) = (offsets.lo - h / 2.0, offsets.hi + h / 2.0);
    if lo > -r || top <= r {
        return Err(Error::InvalidParameter(format!("offsets [{lo}, {top}] must cover [-{r}, {r}]")));
    }
    let mass = f.mass().ok_or_else(|| Error::Unsupported(format!("{f} has no finite mass")))?.norm();
    let e = (nu + alpha - 1.0) * q;
    if mass > 0.0 && e >= -1.0 {
        return Err(Error::InvalidParameter(format!(
            "|t|^{nu} R^{alpha}_+ f is not in L^{q} at infinity for nonzero mass (decay exponent {e})"
        )));
    }
    let phi = fracradon::r_plus_field(f, Complex64::new(alpha, 0.0), dirs, offsets, Method::Direct, opts)?;
    // The weight is integrated exactly over each cell; it may be singular at 0.
    let cells: Vec<f64> = offsets.nodes().iter().map(|&t| power_integral(t - h / 2.0, t + h / 2.0, nu * q)).collect();
    let body = kahan_sum((0..dirs.len()).map(|i| {
        dirs.weights[i] * kahan_sum(phi.row(i).iter().zip(&cells).map(|(v, w)| w * v.norm().powf(q)))
    }));
    let tail = if mass > 0.0 {
        let sigma: f64 = dirs.weights.iter().sum();
        sigma * (mass / gamma_real(alpha)).powf(q) * top.powf(e + 1.0) / (-e - 1.0)
    } else {
        0.0
    };
    let measured = (body + tail).powf(1.0 / q) / sample(f, grid)?.lp_norm(p);
    Ok(NormReport {
        operator: format!("R+^{alpha}"),
        input: f.to_string(),
        n,
        p,
        q,
        nu,
        mu: 0.0,
        alpha,
        measured,
        reference: f64::NAN,
        claim: Claim::Informational,
        tol: f64::NAN,
        grid: format!(
            "{} directions x {} offsets on [{}, {}] + tail; {}",
            dirs.len(),
            offsets.count,
            offsets.lo,
            offsets.hi,
            grid_label(grid)
        ),
    })
}

/// Gauss-Legendre rule on `(0, len]` with panels halving towards 0, for
/// integrands with a mild power singularity at the origin.
fn graded_half_line(len: f64, order: usize) -> (Vec<f64>, Vec<f64>) {
    let top = len.min(1.0);
    let mut edges = vec![0.0];
    edges.extend((0..=40).rev().map(|k| top * 0.5f64.powi(k)));
    let tail = ((len - top) / 0.25).ceil() as usize;
    edges.extend((1..=tail).map(|k| top + (len - top) * k as f64 / tail as f64));
    let (mut x, mut w) = (Vec::new(), Vec::new());
    for pair in edges.windows(2) {
        let (px, pw) = composite_gl(pair[0], pair[1], 1, order);
        x.extend(px);
        w.extend(pw);
    }
    (x, w)
}

/// Rule on `[lo, hi]`, graded towards 0 when 0 lies inside.
fn line_rule(lo: f64, hi: f64) -> (Vec<f64>, Vec<f64>) {
    if lo < 0.0 && hi > 0.0 {
        let (mut x, mut w) = graded_half_line(-lo, 16);
        for v in x.iter_mut() {
            *v = -*v;
        }
        let (xp, wp) = graded_half_line(hi, 16);
        x.extend(xp);
        w.extend(wp);
        (x, w)
    } else {
        composite_gl(lo, hi, ((hi - lo) / 0.25).ceil() as usize, 16)
    }
}

/// `int_{R^2} g(x', x_n) dx` over `x' = tan psi`, `x_n = s sec psi`, `s` in `[s_lo, s_hi]`.
///
/// `s` is the signed distance of the line `y_2 = x_n + x' y_1` to the origin.
fn plane_integral<G>(s_lo: f64, s_hi: f64, g: G) -> Result<f64>
where
    G: Fn(f64, f64) -> Result<f64> + Sync,
{
    let (psi, wpsi) = composite_gl(-PI / 2.0, PI / 2.0, 16, 16);
    let (s, ws) = line_rule(s_lo, s_hi);
    let rows: Vec<f64> = psi
        .par_iter()
        .zip(&wpsi)
        .map(|(&psi, &wp)| -> Result<f64> {
            let sec = 1.0 / psi.cos();
            let xp = psi.tan();
            let mut terms = Vec::with_capacity(s.len());
            for (&s, &w) in s.iter().zip(&ws) {
                terms.push(w * g(xp, s * sec)?);
            }
            Ok(wp * sec.powi(3) * kahan_sum(terms))
        })
        .collect::<Result<_>>()?;
    Ok(kahan_sum(rows))
}

/// Product Gauss-Legendre integral over the square `[-r, r]^2`.
fn square_integral<G: Fn(f64, f64) -> f64 + Sync>(r: f64, g: G) -> f64 {
    let panels = ((2.0 * r / 0.25).ceil() as usize).max(16);
    let (x, w) = composite_gl(-r, r, panels, 16);
    let rows: Vec<f64> = x
        .par_iter()
        .zip(&w)
        .map(|(&a, &wa)| wa * kahan_sum(x.iter().zip(&w).map(|(&b, &wb)| wb * g(a, b))))
        .collect();
    kahan_sum(rows)
}

fn t_value(f: &TestFunction, xp: f64, xn: f64) -> Result<Complex64> {
    f.value(&Line::T(vec![xp]), xn)
}

/// `||Tf||_{p,u} / ||f||_p` against `2^{-1/p} A(p, 2)`, with
/// `u = |x_n|^nu (1+|x'|^2)^{-mu/2}`, `nu = -1/p'`, `mu = -2(1 - 2/p)`.
pub fn transversal_norm_audit(f: &TestFunction, p: f64, grid: &GridND) -> Result<NormReport> {
    let n = f.dimension();
    need_n2(n, "the transversal norm audit")?;
    let a = constant_a(p, n)?;
    let nu = -conj_inv(p);
    let mu = -2.0 * (1.0 - 2.0 / p);
    let r = finite_radius(f)?;
    let integral = plane_integral(-r, r, |xp, xn| {
        let w = power_weight(xn, nu * p) * (1.0 + xp * xp).powf(-mu * p / 2.0);
        Ok(w * t_value(f, xp, xn)?.norm().powf(p))
    })?;
    let measured = integral.powf(1.0 / p) / sample(f, grid)?.lp_norm(p);
    let (claim, tol) = if p == 1.0 && is_positive(f) { (Claim::Equal, 1e-4) } else { (Claim::AtMost, 1e-2) };
    Ok(NormReport {
        operator: "T".into(),
        input: f.to_string(),
        n,
        p,
        q: p,
        nu,
        mu,
        alpha: 0.0,
        measured,
        reference: 2f64.powf(-1.0 / p) * a,
        claim,
        tol,
        grid: format!("Gauss-Legendre in (psi, s), |s| <= {r}; {}", grid_label(grid)),
    })
}

/// `||T^{(1-n)/2 + i gamma}_+ f||_2^2 / ||f||_2^2` against `(2 pi)^n cosh(gamma pi) / pi`.
///
/// Slices are integrated spectrally on `x'` in `[-x_radius, x_radius]` with step
/// `x_step` and offset step `t_step`; `f` must lie in the Phi class.
pub fn l2_identity_check(f: &TestFunction, gamma_: f64, x_radius: f64, x_step: f64, t_step: f64) -> Result<NormReport> {
    let n = f.dimension();
    need_n2(n, "the L2 identity check")?;
    fracradon::check_phi(f)?;
    let alpha = Complex64::new((1.0 - n as f64) / 2.0, gamma_);
    let r = finite_radius(f)?;
    let half = (x_radius / x_step).round() as usize;
    let xs = Grid1D::centered(0.0, x_step, half).nodes();
    let opts = FracOptions::default();
    let rows: Vec<f64> = xs
        .par_iter()
        .map(|&xp| -> Result<f64> {
            let reach = r * (1.0 + xp * xp).sqrt() + 2.0;
            let query = Grid1D::centered(0.0, t_step, (reach / t_step).ceil() as usize);
            let v = fracradon::fractional_line(f, &Line::T(vec![xp]), alpha, Method::Spectral, &opts, &query)?;
            Ok(t_step * kahan_sum(v.iter().map(|v| v.norm_sqr())))
        })
        .collect::<Result<_>>()?;
    let out = x_step * kahan_sum(rows);
    let lattice = GridND::cube(n, -r, r, (2.0 * r / 0.05).ceil() as usize + 1)?;
    let input = sample(f, &lattice)?.lp_norm(2.0).powi(2);
    Ok(NormReport {
        operator: format!("T+^(-1/2+{gamma_}i)"),
        input: f.to_string(),
        n,
        p: 2.0,
        q: 2.0,
        nu: 0.0,
        mu: 0.0,
        alpha: alpha.re,
        measured: out / input,
        reference: l2_identity_reference(n, gamma_),
        claim: Claim::Equal,
        tol: 1e-2,
        grid: format!("x' step {x_step} on [-{x_radius}, {x_radius}], x_n step {t_step}, spectral slices"),
    })
}

/// `(2 pi)^n cosh(gamma pi) / pi`.
pub fn l2_identity_reference(n: usize, gamma_: f64) -> f64 {
    (2.0 * PI).powi(n as i32) * (gamma_ * PI).cosh() / PI
}

/// `c_n = 2^{n/2} pi^{(n-1)/2}`, the square root of the reference at `gamma = 0`.
pub fn isometry_constant(n: usize) -> f64 {
    2f64.powf(n as f64 / 2.0) * PI.powf((n as f64 - 1.0) / 2.0)
}

/// One level of the weak-type audit.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WeakLevel {
    pub lambda: f64,
    /// Cylinder measure of `{|R^alpha_+ f| > lambda}`.
    pub measure: f64,
    /// `lambda^{1/(1-alpha)} * measure`.
    pub scaled: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct WeakTypeReport {
    pub alpha: f64,
    pub levels: Vec<WeakLevel>,
    /// Ratio of the largest to the smallest scaled measure.
    pub spread: f64,
    pub report: NormReport,
}

impl WeakTypeReport {
    pub fn sup(&self) -> f64 {
        self.levels.iter().map(|l| l.scaled).fold(0.0, f64::max)
    }

    pub fn pass(&self) -> bool {
        self.sup().is_finite() && self.spread < 2.0
    }
}

/// Superlevel measures of `R^alpha_+ f` on a cylinder grid, weighted counts of
/// the nodes above each level.
pub fn weak_type_audit(
    f: &TestFunction,
    alpha: f64,
    lambdas: &[f64],
    dirs: &DirectionSet,
    offsets: &Grid1D,
    opts: &FracOptions,
) -> Result<WeakTypeReport> {
    if !(alpha > 0.0 && alpha < 1.0) {
        return Err(Error::InvalidParameter(format!("weak type needs alpha in (0, 1), got {alpha}")));
    }
    let phi = fracradon::r_plus_field(f, Complex64::new(alpha, 0.0), dirs, offsets, Method::Direct, opts)?;
    let h = offsets.spacing();
    let q = 1.0 / (1.0 - alpha);
    let mut levels = Vec::with_capacity(lambdas.len());
    for &lambda in lambdas {
        let mut measure = 0.0;
        let mut cells = 0usize;
        for i in 0..dirs.len() {
            let c = phi.row(i).iter().filter(|v| v.norm() > lambda).count();
            cells += c;
            measure += dirs.weights[i] * h * c as f64;
        }
        if cells > 0 && cells < 4 * dirs.len() {
            return Err(Error::InvalidParameter(format!(
                "offset step {h} is too coarse to resolve the level set at lambda = {lambda}"
            )));
        }
        levels.push(WeakLevel { lambda, measure, scaled: lambda.powf(q) * measure });
    }
    let max = levels.iter().map(|l| l.scaled).fold(0.0, f64::max);
    let min = levels.iter().map(|l| l.scaled).fold(f64::INFINITY, f64::min);
    let spread = if min > 0.0 { max / min } else { f64::INFINITY };
    let report = NormReport {
        operator: format!("R+^{alpha} weak"),
        input: f.to_string(),
        n: f.dimension(),
        p: 1.0,
        q,
        nu: 0.0,
        mu: 0.0,
        alpha,
        measured: max,
        reference: 2.0 * min,
        claim: Claim::AtMost,
        tol: 0.0,
        grid: format!("{} directions x {} offsets on [{}, {}]", dirs.len(), offsets.count, offsets.lo, offsets.hi),
    };
    Ok(WeakTypeReport { alpha, levels, spread, report })
}

/// Partial integrals over growing balls.
#[derive(Debug, Clone, PartialEq)]
pub struct Ladder {
    pub radii: Vec<f64>,
    pub values: Vec<f64>,
}

impl Ladder {
    pub fn strictly_increasing(&self) -> bool {
        self.values.windows(2).all(|w| w[1] > w[0])
    }

    /// `last / first`.
    pub fn growth(&self) -> f64 {
        self.values[self.values.len() - 1] / self.values[0]
    }

    /// Relative change between the last two rungs.
    pub fn cauchy_gap(&self) -> f64 {
        let m = self.values.len();
        (self.values[m - 1] - self.values[m - 2]).abs() / self.values[m - 1].abs()
    }

    pub fn diverges(&self) -> bool {
        self.strictly_increasing() && self.growth() >= 2.0
    }
}

/// Radon transform of `f0(|y|) 1_{|y| <= L}` at offset `u`: a ball section of
/// radius `sqrt(L^2 - u^2)`, integrated in `rho = e^w - 1`.
fn ball_section<F: Fn(f64) -> f64>(f0: &F, n: usize, l: f64, u: f64) -> f64 {
    if u.abs() >= l {
        return 0.0;
    }
    let top = (l * l - u * u).sqrt();
    let (w, ww) = composite_gl(0.0, top.ln_1p(), 32, 16);
    let s = sphere_area(n - 1);
    s * kahan_sum(w.iter().zip(&ww).map(|(&w, &wt)| {
        let e = w.exp();
        let rho = e - 1.0;
        wt * e * f0((u * u + rho * rho).sqrt()) * rho.powi(n as i32 - 2)
    }))
}

/// `(R^alpha_+ f_L)(theta, t)` for a radial `f` cut off at `|y| <= L`, for each `L`.
///
/// The kernel singularity on `[t-1, t]` is removed by `t - u = r^{1/alpha}`, the
/// far part uses `t - u = e^w`.
pub fn divergence_witness(f: &TestFunction, alpha: f64, t: f64, radii: &[f64]) -> Result<Ladder> {
    let n = f.dimension();
    if n < 2 {
        return Err(Error::InvalidParameter("the witness needs n >= 2".into()));
    }
    if !(0.0..1.0).contains(&alpha) {
        return Err(Error::InvalidParameter(format!("the witness needs alpha in [0, 1), got {alpha}")));
    }
    let f0 = f.radial_profile().ok_or_else(|| Error::Unsupported(format!("{f} is not radial")))?;
    if let Some(&l) = radii.iter().find(|&&l| l <= t.abs() + 1.0) {
        return Err(Error::InvalidParameter(format!("radius {l} does not contain the offset {t}")));
    }
    let values = radii
        .par_iter()
        .map(|&l| {
            if alpha == 0.0 {
                return ball_section(&f0, n, l, t);
            }
            let (r, wr) = composite_gl(0.0, 1.0, 16, 16);
            let near = kahan_sum(r.iter().zip(&wr).map(|(&r, &w)| w * ball_section(&f0, n, l, t - r.powf(1.0 / alpha)))) / alpha;
            let (w, ww) = composite_gl(0.0, (t + l).ln(), 64, 16);
            let far = kahan_sum(w.iter().zip(&ww).map(|(&w, &wt)| wt * (alpha * w).exp() * ball_section(&f0, n, l, t - w.exp())));
            (near + far) / gamma_real(alpha)
        })
        .collect();
    Ok(Ladder { radii: radii.to_vec(), values })
}

/// Largest relative error of `|Gamma(1 + i gamma)|^2 = pi gamma / sinh(pi gamma)`.
pub fn gamma_modulus_check(gammas: &[f64]) -> f64 {
    gammas
        .iter()
        .map(|&g| {
            let lhs = gamma(Complex64::new(1.0, g)).norm_sqr();
            let rhs = if g == 0.0 { 1.0 } else { PI * g / (PI * g).sinh() };
            (lhs - rhs).abs() / rhs
        })
        .fold(0.0, f64::max)
}

/// `|Gamma(a + ib)| / (sqrt(2 pi) |b|^{a-1/2} e^{-pi |b|/2}) - 1`.
pub fn gamma_asymptotic_error(a: f64, b: f64) -> f64 {
    let exact = gamma(Complex64::new(a, b)).norm();
    let approx = (2.0 * PI).sqrt() * b.abs().powf(a - 0.5) * (-PI * b.abs() / 2.0).exp();
    exact / approx - 1.0
}

/// `int_Z |t|^{nu p} |Rf|^p = 2 int_{R^2} |x_n|^{nu p} |Tf|^p (1+|x'|^2)^{-(n-p+nu p+1)/2}`.
pub fn transfer_weighted(f: &TestFunction, p: f64, nu: f64) -> Result<IdentityCheck> {
    check_p(p)?;
    let n = f.dimension();
    need_n2(n, "the weighted transfer")?;
    let r = finite_radius(f)?;
    let dirs = DirectionSet::circle(64)?;
    let (t, wt) = line_rule(-r, r);
    let e = nu * p;
    let rows: Vec<f64> = dirs
        .directions
        .par_iter()
        .zip(&dirs.weights)
        .map(|(th, &w)| -> Result<f64> {
            let mut terms = Vec::with_capacity(t.len());
            for (&t, &wt) in t.iter().zip(&wt) {
                terms.push(wt * power_weight(t, e) * f.value(&Line::R(th.clone()), t)?.norm().powf(p));
            }
            Ok(w * kahan_sum(terms))
        })
        .collect::<Result<_>>()?;
    let lhs = kahan_sum(rows);
    let k = (n as f64 - p + e + 1.0) / 2.0;
    let rhs = 2.0
        * plane_integral(-r, r, |xp, xn| {
            Ok(power_weight(xn, e) * t_value(f, xp, xn)?.norm().powf(p) * (1.0 + xp * xp).powf(-k))
        })?;
    Ok(IdentityCheck::new("weighted_transfer", format!("{f}, p={p}, nu={nu}"), lhs, rhs, 1e-3))
}

/// The weighted transfer for `R^alpha_+` and `T^alpha_+` with exponent
/// `(n + (alpha-1+nu) p + 1)/2`, both sides truncated to offsets in `[-reach, reach]`.
///
/// On directions with `theta_n < 0` the left side holds `I_-` slices, so the
/// identity needs Radon slices even in the offset; radial inputs qualify.
pub fn transfer_fractional(f: &TestFunction, alpha: f64, p: f64, nu: f64, reach: f64, step: f64) -> Result<IdentityCheck> {
    check_p(p)?;
    let n = f.dimension();
    need_n2(n, "the fractional weighted transfer")?;
    let a = Complex64::new(alpha, 0.0);
    let method = if alpha > 0.0 { Method::Direct } else { Method::Continued };
    let opts = FracOptions { step, ..FracOptions::default() };
    let half = (reach / step).round() as usize;
    let offsets = Grid1D::centered(0.0, step, half);
    let e = nu * p;
    let norm_of = |values: &[Complex64], grid: &Grid1D| -> f64 {
        let h = grid.spacing();
        h * kahan_sum(values.iter().enumerate().map(|(k, v)| power_weight(grid.node(k), e) * v.norm().powf(p)))
    };
    let dirs = DirectionSet::circle(16)?;
    let phi = fracradon::r_plus_field(f, a, &dirs, &offsets, method, &opts)?;
    let lhs = kahan_sum((0..dirs.len()).map(|i| {
        let row = phi.row(i);
        dirs.weights[i] * step * kahan_sum(row.iter().zip(offsets.nodes()).map(|(v, t)| power_weight(t, e) * v.norm().powf(p)))
    }));
    let k = (n as f64 + (alpha - 1.0 + nu) * p + 1.0) / 2.0;
    let (psi, wpsi) = composite_gl(-PI / 2.0, PI / 2.0, 8, 16);
    let rows: Vec<f64> = psi
        .par_iter()
        .zip(&wpsi)
        .map(|(&psi, &wp)| -> Result<f64> {
            let sec = 1.0 / psi.cos();
            let xp = psi.tan();
            let query = Grid1D::centered(0.0, step * sec, half);
            let v = fracradon::fractional_line(f, &Line::T(vec![xp]), a, method, &opts, &query)?;
            Ok(wp * sec.powi(2) * (1.0 + xp * xp).powf(-k) * norm_of(&v, &query))
        })
        .collect::<Result<_>>()?;
    let rhs = 2.0 * kahan_sum(rows);
    Ok(IdentityCheck::new(
        "fractional_weighted_transfer",
        format!("{f}, alpha={alpha}, p={p}, nu={nu}, |t|<={reach}"),
        lhs,
        rhs,
        1e-3,
    ))
}

/// `int_Z Rf / (1+t^2)^{n/2} = sigma_{n-1} int f / (1+|x|^2)^{1/2}`.
pub fn radon_weighted_mass(f: &TestFunction) -> Result<IdentityCheck> {
    let n = f.dimension();
    need_n2(n, "the Radon weighted mass")?;
    let r = finite_radius(f)?;
    let dirs = DirectionSet::circle(64)?;
    let (t, wt) = composite_gl(-r, r, ((2.0 * r / 0.25).ceil() as usize).max(16), 16);
    let rows: Vec<f64> = dirs
        .directions
        .par_iter()
        .zip(&dirs.weights)
        .map(|(th, &w)| -> Result<f64> {
            let mut terms = Vec::with_capacity(t.len());
            for (&t, &wt) in t.iter().zip(&wt) {
                terms.push(wt * f.value(&Line::R(th.clone()), t)?.re / (1.0 + t * t));
            }
            Ok(w * kahan_sum(terms))
        })
        .collect::<Result<_>>()?;
    let lhs = kahan_sum(rows);
    let rhs = sphere_area(n) * square_integral(r, |a, b| f.eval_real(a, b) / (1.0 + a * a + b * b).sqrt());
    Ok(IdentityCheck::new("radon_weighted_mass", f.to_string(), lhs, rhs, 1e-3))
}

/// `int Tf / (1+|x|^2)^{n/2} = (sigma_{n-1}/2) int f / (1+|x|^2)^{1/2}`.
pub fn transversal_weighted_mass(f: &TestFunction) -> Result<IdentityCheck> {
    let n = f.dimension();
    need_n2(n, "the transversal weighted mass")?;
    let r = finite_radius(f)?;
    let lhs = plane_integral(-r, r, |xp, xn| Ok(t_value(f, xp, xn)?.re / (1.0 + xp * xp + xn * xn)))?;
    let rhs = sphere_area(n) / 2.0 * square_integral(r, |a, b| f.eval_real(a, b) / (1.0 + a * a + b * b).sqrt());
    Ok(IdentityCheck::new("transversal_weighted_mass", f.to_string(), lhs, rhs, 1e-3))
}

/// `int (Pf)(x) u(x) dx` in the plane, `u = (1 + 4|x'|^2 + (x_n - |x'|^2)^2)^{-1}`,
/// integrated in `x' = tan(psi)/2`, `x_n = s sec(psi) + tan(psi)^2/4`, which
/// straightens the level sets of `u`.
fn parabolic_u_integral(f: &TestFunction, r: f64) -> Result<f64> {
    let base = Quadrature::for_radius(r);
    let (psi, wpsi) = composite_gl(-PI / 2.0, PI / 2.0, 8, 16);
    let (s_lo, s_hi) = (-1.5 * r, r * r + 2.0 * r);
    let (s, ws) = composite_gl(s_lo, s_hi, ((s_hi - s_lo) / 0.5).ceil() as usize, 16);
    let rows: Vec<f64> = psi
        .par_iter()
        .zip(&wpsi)
        .map(|(&psi, &wp)| -> Result<f64> {
            let sec = 1.0 / psi.cos();
            let xp = psi.tan() / 2.0;
            let mut terms = Vec::with_capacity(s.len());
            for (&s, &w) in s.iter().zip(&ws) {
                let x = [xp, s * sec + xp * xp];
                let pf = transforms::parabolic(f, &x, &transforms::parabolic_quadrature(&base, &x))?.value.re;
                let d = x[1] - xp * xp;
                let u = 1.0 / (1.0 + 4.0 * xp * xp + d * d);
                terms.push(w * pf * u);
            }
            Ok(wp * 0.5 * sec.powi(3) * kahan_sum(terms))
        })
        .collect::<Result<_>>()?;
    Ok(kahan_sum(rows))
}

/// `int Pf u = (sigma_{n-1}/2^n) int f v` with
/// `u = (1 + 4|x'|^2 + (x_n - |x'|^2)^2)^{-n/2}` and `v = (1 + |x'|^2 + (x_n + |x'|^2)^2)^{-1/2}`.
pub fn parabolic_weighted_mass(f: &TestFunction) -> Result<IdentityCheck> {
    let n = f.dimension();
    need_n2(n, "the parabolic weighted mass")?;
    let r = finite_radius(f)?;
    let lhs = parabolic_u_integral(f, r)?;
    let rhs = sphere_area(n) / 4.0
        * square_integral(r, |a, b| {
            let c = b + a * a;
            f.eval_real(a, b) / (1.0 + a * a + c * c).sqrt()
        });
    Ok(IdentityCheck::new("parabolic_weighted_mass", f.to_string(), lhs, rhs, 1e-3))
}

/// `|int Pf u| / ||f||_p` in the plane against the Hoelder bound
/// `(sigma_{n-1}/2^n) ||v||_{p'}`, `1 <= p < n/(n-1)`.
///
/// `||v||_{p'}^{p'} = pi^{n/2} Gamma((p'-n)/2) / Gamma(p'/2)` after the shear
/// `x_n -> x_n + |x'|^2`; `||v||_inf = 1`.
pub fn parabolic_norm_audit(f: &TestFunction, p: f64, grid: &GridND) -> Result<NormReport> {
    let n = f.dimension();
    need_n2(n, "the parabolic norm audit")?;
    let nf = n as f64;
    if !(p >= 1.0 && p < nf / (nf - 1.0)) {
        return Err(Error::InvalidParameter(format!("need 1 <= p < {}, got {p}", nf / (nf - 1.0))));
    }
    let v_norm = if p == 1.0 {
        1.0
    } else {
        let pc = p / (p - 1.0);
        (PI.powf(nf / 2.0) * gamma_real((pc - nf) / 2.0) / gamma_real(pc / 2.0)).powf(1.0 / pc)
    };
    let lhs = parabolic_u_integral(f, finite_radius(f)?)?.abs();
    Ok(NormReport {
        operator: "P u".into(),
        input: f.to_string(),
        n,
        p,
        q: f64::NAN,
        nu: 0.0,
        mu: 0.0,
        alpha: 0.0,
        measured: lhs / sample(f, grid)?.lp_norm(p),
        reference: sphere_area(n) / 2f64.powi(n as i32) * v_norm,
        claim: Claim::AtMost,
        tol: 1e-3,
        grid: grid_label(grid),
    })
}

trait EvalReal {
    fn eval_real(&self, a: f64, b: f64) -> f64;
}

impl EvalReal for TestFunction {
    fn eval_real(&self, a: f64, b: f64) -> f64 {
        crate::functions::PointFn::eval(self, &[a, b]).re
    }
}

/// The dilation laws behind the necessity of the exponent relations, on a
/// gaussian in the plane.
///
/// Returns, in order: `||f_l||_p = l^{-n/p} ||f||_p`,
/// `||R f_l||~_q = l^{1-n-1/q} ||Rf||~_q`, the anisotropic law
/// `T^alpha_+(f(l_1 x', l_2 x_n))(x) = l_1^{1-n} l_2^{-alpha} (T^alpha_+ f)(l_2 x'/l_1, l_2 x_n)`
/// with `(l_1, l_2) = (l, 1/l)`, and `(R^alpha_+ f_l)(theta, t) = l^{1-n-alpha} (R^alpha_+ f)(theta, l t)`.
/// `p`, `q` are the endpoint exponents at `alpha0 = 0`; `alpha` must be positive.
pub fn scaling_checks(f: &TestFunction, lambda: f64, alpha: f64) -> Result<Vec<IdentityCheck>> {
    let n = f.dimension();
    need_n2(n, "the dilation checks")?;
    if !(lambda > 0.0 && alpha > 0.0) {
        return Err(Error::InvalidParameter(format!("need lambda > 0 and alpha > 0, got {lambda}, {alpha}")));
    }
    let ex = exponents(0.0, n)?;
    let (p, q) = (ex.p, ex.q);
    let nf = n as f64;
    let r = finite_radius(f)?;
    let wide = r / lambda.min(1.0);
    let tol = 1e-6;
    let params = format!("{f}, lambda={lambda}");
    let mut out = Vec::with_capacity(4);

    let dil = Dilated { inner: f.clone(), scales: vec![lambda; n] };
    let lattice = GridND::cube(n, -wide, wide, (2.0 * wide / 0.05).round() as usize + 1)?;
    let lhs = sample(&dil, &lattice)?.lp_norm(p);
    let rhs = lambda.powf(-nf / p) * sample(f, &lattice)?.lp_norm(p);
    out.push(IdentityCheck::new("norm_dilation", format!("{params}, p={p}"), lhs, rhs, tol));

    let dirs = DirectionSet::circle(16)?;
    let offsets = Grid1D::centered(0.0, 0.01, (wide / 0.01).ceil() as usize);
    let numeric = Numeric::new(Dilated { inner: f.clone(), scales: vec![lambda; n] }, r / lambda);
    let t = offsets.nodes();
    let rows: Vec<Vec<Complex64>> = dirs
        .directions
        .par_iter()
        .map(|th| t.iter().map(|&t| numeric.value(&Line::R(th.clone()), t)).collect())
        .collect::<Result<_>>()?;
    let scaled = CylinderField::new(dirs.clone(), offsets, rows.concat())?;
    let lhs = weighted_norm_cylinder(&scaled, q, 0.0)?;
    let rhs = lambda.powf(1.0 - nf - 1.0 / q) * weighted_norm_cylinder(&radon_field(f, &dirs, &offsets)?, q, 0.0)?;
    out.push(IdentityCheck::new("radon_norm_dilation", format!("{params}, q={q}"), lhs, rhs, tol));

    let a = Complex64::new(alpha, 0.0);
    let opts = FracOptions::default();
    let (l1, l2) = (lambda, 1.0 / lambda);
    let aniso = Numeric::new(Dilated { inner: f.clone(), scales: vec![l1, l2] }, r / l1.min(l2));
    let scaled_opts = FracOptions { step: opts.step * l2, ..opts };
    let mut worst = (0.0, 0.0);
    for x in [[0.3, 0.5], [-0.7, 1.2], [1.1, -0.4]] {
        let lhs = fracradon::t_plus(&aniso, a, &x, Method::Direct, &opts)?.re;
        let y = [l2 / l1 * x[0], l2 * x[1]];
        let rhs = l1.powf(1.0 - nf) * l2.powf(-alpha) * fracradon::t_plus(f, a, &y, Method::Direct, &scaled_opts)?.re;
        if worst.1 == 0.0 || rel(lhs, rhs) > rel(worst.0, worst.1) {
            worst = (lhs, rhs);
        }
    }
    out.push(IdentityCheck::new("anisotropic_t_plus_dilation", format!("{params}, alpha={alpha}"), worst.0, worst.1, tol));

    let theta = [0.6, 0.8];
    let iso = Numeric::new(Dilated { inner: f.clone(), scales: vec![lambda; n] }, r / lambda);
    let scaled_opts = FracOptions { step: opts.step * lambda, ..opts };
    let mut worst = (0.0, 0.0);
    for t in [0.4, 1.5, -0.3] {
        let lhs = fracradon::r_plus(&iso, a, &theta, t, Method::Direct, &opts)?.re;
        let rhs = lambda.powf(1.0 - nf - alpha) * fracradon::r_plus(f, a, &theta, lambda * t, Method::Direct, &scaled_opts)?.re;
        if worst.1 == 0.0 || rel(lhs, rhs) > rel(worst.0, worst.1) {
            worst = (lhs, rhs);
        }
    }
    out.push(IdentityCheck::new("r_plus_dilation", format!("{params}, alpha={alpha}"), worst.0, worst.1, tol));
    Ok(out)
}

fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs().max(f64::MIN_POSITIVE)
}

#[cfg(test)]
mod tests {
    use super::*;

    /// `ln Gamma(z)` by upward recurrence to `Re z >= 20` and the Stirling series.
    fn ln_gamma_stirling(mut z: Complex64) -> Complex64 {
        let mut shift = Complex64::new(0.0, 0.0);
        while z.re < 20.0 {
            shift += z.ln();
            z += 1.0;
        }
        let bern = [1.0 / 6.0, -1.0 / 30.0, 1.0 / 42.0, -1.0 / 30.0, 5.0 / 66.0, -691.0 / 2730.0, 7.0 / 6.0];
        let mut series = Complex64::new(0.0, 0.0);
        for (k, b) in bern.iter().enumerate() {
            let m = 2 * (k + 1);
            series += b / ((m * (m - 1)) as f64 * z.powi(m as i32 - 1));
        }
        (z - 0.5) * z.ln() - z + 0.5 * (2.0 * PI).ln() + series - shift
    }

    #[test]
    fn constant_a_at_p_one() {
        assert!((constant_a(1.0, 2).unwrap() - 2.0 * PI).abs() < 1e-12);
        assert!((constant_a(1.0, 3).unwrap() - 4.0 * PI).abs() < 1e-12);
        assert!(constant_a(2.0 - 1e-9, 2).unwrap() > 1e6);
        assert!(constant_a(2.0, 2).is_err());
        assert!(constant_a(0.9, 2).is_err());
    }

    #[test]
    fn exponent_endpoints() {
        let e = exponents(0.0, 2).unwrap();
        assert!((e.p - 1.5).abs() < 1e-15 && (e.q - 3.0).abs() < 1e-15);
        // 1/q = n/p - n + 1 at the endpoint.
        assert!((1.0 / e.q - (2.0 / e.p - 1.0)).abs() < 1e-15);
        let e = exponents(1.0, 2).unwrap();
        assert_eq!((e.p, e.q), (1.0, f64::INFINITY));
        let e = exponents(-1.0, 3).unwrap();
        assert!((e.p - 2.0).abs() < 1e-15 && (e.q - 2.0).abs() < 1e-15);
        assert!(exponents(1.5, 2).is_err());
        assert!(exponents(-0.6, 2).is_err());
    }

    #[test]
    fn cylinder_norm_basics() {
        let dirs = DirectionSet::circle(8).unwrap();
        let offsets = Grid1D::centered(0.0, 0.02, 400);
        let zero = CylinderField::from_fn(dirs.clone(), offsets, |_, _| Complex64::new(0.0, 0.0)).unwrap();
        assert_eq!(weighted_norm_cylinder(&zero, 1.5, 0.3).unwrap(), 0.0);
        assert!(weighted_norm_cylinder(&zero, 1.5, -0.3).is_err());
        assert!(weighted_norm_cylinder(&zero, 0.5, 0.0).is_err());

        let f = TestFunction::gaussian(2, 1.0).unwrap();
        let phi = radon_field(&f, &dirs, &offsets).unwrap();
        // Mass identity: sigma_1 * int f = 2 pi * pi.
        let m = weighted_norm_cylinder(&phi, 1.0, 0.0).unwrap();
        assert!((m - 2.0 * PI * PI).abs() < 1e-6 * m);

        let mid = midpoint_offsets(-1.0, 1.0, 10).unwrap();
        assert!(mid.nodes().iter().all(|t| t.abs() > 0.05));
        assert!((mid.spacing() - 0.2).abs() < 1e-15);
    }

    #[test]
    fn u_norm_zero_and_singular_node() {
        let grid = GridND::cube(2, -1.0, 1.0, 21).unwrap();
        let zero = SampledField::new(grid.clone(), vec![Complex64::new(0.0, 0.0); grid.len()]).unwrap();
        assert_eq!(weighted_norm_u(&zero, 1.2, 0.0, 0.5).unwrap(), 0.0);
        assert!(weighted_norm_u(&zero, 1.2, -0.2, 0.0).is_err());
    }

    #[test]
    fn gamma_modulus() {
        let series = ln_gamma_stirling(Complex64::new(1.0, 1.0)).exp().norm_sqr();
        assert!((series - 0.272029).abs() < 1e-6);
        assert!((gamma(Complex64::new(1.0, 1.0)).norm_sqr() - series).abs() < 1e-13);
        assert!(gamma_modulus_check(&[0.5, 1.0, 2.0]) < 1e-10);
        assert!(gamma_modulus_check(&[1e-8]) < 1e-12);
        assert!(gamma_asymptotic_error(1.0, 30.0).abs() <= 0.05);
        let half = gamma_asymptotic_error(0.5, 30.0).abs();
        assert!(half <= 1.0 / 30.0, "{half}");
    }

    #[test]
    fn l2_references() {
        assert!((l2_identity_reference(2, 0.0) - 4.0 * PI).abs() < 1e-12);
        assert!((l2_identity_reference(2, 0.5) - 4.0 * PI * (PI / 2.0).cosh()).abs() < 1e-12);
        assert_eq!(l2_identity_reference(2, 0.7), l2_identity_reference(2, -0.7));
        assert!((isometry_constant(2) - 2.0 * PI.sqrt()).abs() < 1e-14);
        assert!((isometry_constant(2).powi(2) - l2_identity_reference(2, 0.0)).abs() < 1e-12);
    }

    #[test]
    fn ladders() {
        let g = TestFunction::gaussian(2, 1.0).unwrap();
        let flat = divergence_witness(&g, 0.5, 0.0, &[8.0, 16.0, 32.0]).unwrap();
        assert!(flat.cauchy_gap() < 1e-12);
        let f = TestFunction::logdecay(2, 2.0).unwrap();
        let div = divergence_witness(&f, 0.0, 50.0, &[1e2, 1e3, 1e4]).unwrap();
        assert!(div.diverges(), "{:?}", div.values);
        assert!(divergence_witness(&f, 0.0, 50.0, &[40.0]).is_err());
        assert!(divergence_witness(&f, 1.0, 0.0, &[10.0]).is_err());
    }

    #[test]
    fn weak_levels_shrink() {
        let f = TestFunction::mollifier(2, 0.25).unwrap();
        let dirs = DirectionSet::circle(4).unwrap();
        let offsets = Grid1D::new(-1.0, 400.0, 40101).unwrap();
        let r = weak_type_audit(&f, 0.5, &[0.05, 0.1, 0.5, 1.0, 2.0], &dirs, &offsets, &FracOptions::default()).unwrap();
        assert!(r.levels.windows(2).all(|w| w[1].measure <= w[0].measure));
        assert!(r.levels[..4].iter().all(|l| (l.scaled - 2.0).abs() < 0.6), "{:?}", r.levels);
        assert_eq!(r.levels[4].measure, 0.0);
        assert!(weak_type_audit(&f, 1.0, &[1.0], &dirs, &offsets, &FracOptions::default()).is_err());
    }

    #[test]
    fn weighted_transfer_point() {
        let f = TestFunction::gaussian(2, 1.0).unwrap();
        let c = transfer_weighted(&f, 2.0, 0.5).unwrap();
        assert!(c.pass(), "{c:?}");
        // nu = 0, p = 2: both sides equal ||Rf||_2^2 = 2 pi * int pi e^{-2t^2} dt.
        let c = transfer_weighted(&f, 2.0, 0.0).unwrap();
        assert!((c.lhs - 2.0 * PI * PI * (PI / 2.0).sqrt()).abs() < 1e-6 * c.lhs);
    }

    #[test]
    fn report_verdicts() {
        let mut r = NormReport {
            operator: "R".into(),
            input: "x".into(),
            n: 2,
            p: 1.0,
            q: 1.0,
            nu: 0.0,
            mu: 0.0,
            alpha: 0.0,
            measured: 1.005,
            reference: 1.0,
            claim: Claim::AtMost,
            tol: 1e-2,
            grid: String::new(),
        };
        assert!(r.pass());
        r.claim = Claim::Equal;
        r.tol = 1e-3;
        assert!(!r.pass());
        r.claim = Claim::Informational;
        assert!(r.pass());
    }

    /// `(I^{1/2}_+ e^{-u^2})(t)` by direct quadrature, with `u = t - w^2` near the singularity.
    fn half_integral_of_gaussian(t: f64) -> f64 {
        let s = if t > 10.0 {
            let (u, w) = composite_gl(-8.0, 8.0, 64, 16);
            kahan_sum(u.iter().zip(&w).map(|(&u, &w)| w * (-u * u).exp() / (t - u).sqrt()))
        } else if t > -8.0 {
            let (x, w) = composite_gl(0.0, (t + 8.0).sqrt(), 64, 16);
            2.0 * kahan_sum(x.iter().zip(&w).map(|(&x, &w)| w * (-(t - x * x).powi(2)).exp()))
        } else {
            0.0
        };
        s / PI.sqrt()
    }

    /// `||R^{1/2}_+ f||~_{q,nu} / ||f||_p` for `f = e^{-|x|^2}` in the plane, where
    /// `R^{1/2}_+ f(theta, t) = sqrt(pi) (I^{1/2}_+ e^{-u^2})(t)`.
    fn gaussian_ratio(p: f64, q: f64, nu: f64) -> f64 {
        let e = nu * q;
        let h = |t: f64| (PI.sqrt() * half_integral_of_gaussian(t)).powf(q);
        // t = -+s^5 absorbs |t|^e near 0, t = e^y covers the slow tail.
        let (s, ws) = composite_gl(0.0, 8f64.powf(0.2), 32, 16);
        let near = kahan_sum(s.iter().zip(&ws).map(|(&s, &w)| {
            let t = s.powi(5);
            let jac = 5.0 * s.powi(4) * t.powf(e);
            let right = if t <= 1.0 { h(t) } else { 0.0 };
            w * jac * (h(-t) + right)
        }));
        let (y, wy) = composite_gl(0.0, 120.0, 60, 16);
        let far = kahan_sum(y.iter().zip(&wy).map(|(&y, &w)| w * (y * (1.0 + e)).exp() * h(y.exp())));
        (2.0 * PI * (near + far)).powf(1.0 / q) / (PI / p).powf(1.0 / p)
    }

    #[test]
    fn fractional_radon_audit_matches_line_oracle() {
        let f = TestFunction::gaussian(2, 1.0).unwrap();
        let r = f.decay_radius();
        let grid = GridND::cube(2, -r, r, 401).unwrap();
        let dirs = DirectionSet::circle(4).unwrap();
        let offsets = midpoint_offsets(-r, 40.0, 4000).unwrap();
        for regime in [FracRegime::Weighted, FracRegime::Unweighted] {
            let rep = fractional_radon_audit(&f, 0.5, 1.2, regime, &dirs, &offsets, &grid, &FracOptions::default()).unwrap();
            let expect = gaussian_ratio(1.2, rep.q, rep.nu);
            assert!((rep.measured - expect).abs() <= 1e-3 * expect, "{regime:?}: {} vs {expect}", rep.measured);
            assert_eq!(rep.claim, Claim::Informational);
            assert!(rep.pass());
        }
    }

    #[test]
    fn fractional_regimes() {
        let (q, nu) = FracRegime::Weighted.exponents(0.5, 1.2, 2).unwrap();
        assert_eq!(q, 1.2);
        assert!((nu + 0.5 + 1.0 / 6.0).abs() < 1e-15);
        let (q, nu) = FracRegime::Unweighted.exponents(0.5, 1.2, 2).unwrap();
        assert!((q - 6.0).abs() < 1e-12);
        assert_eq!(nu, 0.0);
        assert!(FracRegime::Weighted.exponents(0.5, 4.0 / 3.0, 2).is_err());
        assert!(FracRegime::Unweighted.exponents(0.5, 1.0, 2).is_err());
        assert!(FracRegime::Unweighted.exponents(0.5, 1.25, 2).is_err());
        assert!(FracRegime::Weighted.exponents(1.0, 1.1, 2).is_err());

        // At p = 1 the weighted slice decays like 1/t and has no finite norm.
        let f = TestFunction::gaussian(2, 1.0).unwrap();
        let r = f.decay_radius();
        let grid = GridND::cube(2, -r, r, 101).unwrap();
        let dirs = DirectionSet::circle(4).unwrap();
        let offsets = midpoint_offsets(-r, 20.0, 200).unwrap();
        let audit = |offsets: &Grid1D, p: f64| {
            fractional_radon_audit(&f, 0.5, p, FracRegime::Weighted, &dirs, offsets, &grid, &FracOptions::default())
        };
        assert!(audit(&offsets, 1.0).is_err());
        assert!(audit(&midpoint_offsets(0.0, 20.0, 200).unwrap(), 1.2).is_err());
        assert!(audit(&offsets, 1.2).is_ok());
    }

    #[test]
    fn parabolic_hoelder_bound() {
        let f = TestFunction::gaussian(2, 1.0).unwrap();
        let r = f.decay_radius();
        let grid = GridND::cube(2, -r, r, 201).unwrap();
        let one = parabolic_norm_audit(&f, 1.0, &grid).unwrap();
        assert!((one.reference - PI / 2.0).abs() < 1e-15);
        assert!(one.pass() && one.measured > 0.5 * one.reference, "{one:?}");

        // ||v||_3^3 with x' = sinh a, x_n + |x'|^2 = sinh b.
        let (x, w) = composite_gl(-40.0, 40.0, 80, 16);
        let v3 = kahan_sum(x.iter().zip(&w).map(|(&a, &wa)| {
            wa * kahan_sum(x.iter().zip(&w).map(|(&b, &wb)| {
                wb * a.cosh() * b.cosh() * (1.0 + a.sinh().powi(2) + b.sinh().powi(2)).powf(-1.5)
            }))
        }));
        let rep = parabolic_norm_audit(&f, 1.5, &grid).unwrap();
        let expect = PI / 2.0 * v3.cbrt();
        assert!((rep.reference - expect).abs() < 1e-9 * expect, "{} vs {expect}", rep.reference);
        assert!(rep.pass(), "{rep:?}");
        assert!(parabolic_norm_audit(&f, 2.0, &grid).is_err());
    }
}
