//! Analytic test-function corpus with closed-form transforms and grid sampling.
//!
//! Gaussians and band-limited functions are sums of Gaussian-windowed plane waves
//! `c_k W(x) exp(-i x.xi_k)` with `W(x) = exp(-|x|^2 / (2 sigma^2))`, which gives
//! exact Fourier, Radon and transversal transforms for use as oracles.
//! Fourier convention: `f^(xi) = int f(x) exp(+i x.xi) dx`.

use crate::error::{Error, Result};
use crate::grid::{GridND, SampledField};
use crate::special::{composite_gl, sphere_area};
use num_complex::Complex64;
use rand_chacha::rand_core::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use std::f64::consts::PI;
use std::fmt;

/// A complex-valued function on R^n that can be evaluated pointwise.
pub trait PointFn: Sync {
    fn dim(&self) -> usize;
    fn eval(&self, x: &[f64]) -> Complex64;
}

impl<T: PointFn + ?Sized> PointFn for &T {
    fn dim(&self) -> usize {
        (**self).dim()
    }
    fn eval(&self, x: &[f64]) -> Complex64 {
        (**self).eval(x)
    }
}

/// Wraps a closure as a `PointFn`.
pub struct Closure<F> {
    pub n: usize,
    pub f: F,
}

impl<F: Fn(&[f64]) -> Complex64 + Sync> PointFn for Closure<F> {
    fn dim(&self) -> usize {
        self.n
    }
    fn eval(&self, x: &[f64]) -> Complex64 {
        (self.f)(x)
    }
}

/// `g(y', -y_n)`.
pub struct Reflected<F>(pub F);

impl<F: PointFn> PointFn for Reflected<F> {
    fn dim(&self) -> usize {
        self.0.dim()
    }
    fn eval(&self, x: &[f64]) -> Complex64 {
        let mut y = x.to_vec();
        let n = y.len();
        y[n - 1] = -y[n - 1];
        self.0.eval(&y)
    }
}

/// `f(l_1 x_1, ..., l_n x_n)`.
pub struct Dilated<F> {
    pub inner: F,
    pub scales: Vec<f64>,
}

impl<F: PointFn> PointFn for Dilated<F> {
    fn dim(&self) -> usize {
        self.inner.dim()
    }
    fn eval(&self, x: &[f64]) -> Complex64 {
        let y: Vec<f64> = x.iter().zip(&self.scales).map(|(a, l)| a * l).collect();
        self.inner.eval(&y)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Kind {
    Gaussian { a: f64 },
    Mollifier { eps: f64 },
    LogDecay { p: f64 },
    Bandlimited { r0: f64, r1: f64, seed: u64 },
}

/// One windowed plane wave `coef * exp(-i x.freq)`.
#[derive(Debug, Clone, PartialEq)]
pub struct Atom {
    pub coef: Complex64,
    pub freq: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct TestFunction {
    kind: Kind,
    n: usize,
    mollifier_c: f64,
    sigma: f64,
    atoms: Vec<Atom>,
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn norm2(a: &[f64]) -> f64 {
    dot(a, a)
}

fn positive(name: &str, v: f64) -> Result<()> {
    if v > 0.0 && v.is_finite() {
        Ok(())
    } else {
        Err(Error::InvalidParameter(format!("{name} must be positive, got {v}")))
    }
}

fn check_dim(n: usize) -> Result<()> {
    if n == 0 {
        Err(Error::InvalidParameter("dimension must be >= 1".into()))
    } else {
        Ok(())
    }
}

impl TestFunction {
    /// `exp(-|x|^2 / a^2)`.
    pub fn gaussian(n: usize, a: f64) -> Result<Self> {
        check_dim(n)?;
        positive("a", a)?;
        Ok(Self {
            kind: Kind::Gaussian { a },
            n,
            mollifier_c: 0.0,
            sigma: a / 2f64.sqrt(),
            atoms: vec![Atom { coef: Complex64::new(1.0, 0.0), freq: vec![0.0; n] }],
        })
    }

    /// `C eps^{-n} exp(-eps^2 / (eps^2 - |x|^2))` on the ball |x| < eps, unit mass.
    pub fn mollifier(n: usize, eps: f64) -> Result<Self> {
        check_dim(n)?;
        positive("eps", eps)?;
        let (s, w) = composite_gl(0.0, 1.0, 400, 8);
        let radial: f64 = s
            .iter()
            .zip(&w)
            .map(|(&s, &w)| w * (-1.0 / (1.0 - s * s)).exp() * s.powi(n as i32 - 1))
            .sum();
        Ok(Self {
            kind: Kind::Mollifier { eps },
            n,
            mollifier_c: 1.0 / (sphere_area(n) * radial),
            sigma: 0.0,
            atoms: Vec::new(),
        })
    }

    /// `(2+|x|)^{-n/p} (log(2+|x|))^{-1}`.
    pub fn logdecay(n: usize, p: f64) -> Result<Self> {
        check_dim(n)?;
        if !(p >= 1.0 && p.is_finite()) {
            return Err(Error::InvalidParameter(format!("logdecay needs p >= 1, got {p}")));
        }
        Ok(Self { kind: Kind::LogDecay { p }, n, mollifier_c: 0.0, sigma: 0.0, atoms: Vec::new() })
    }

    /// Unit-modulus, seeded-phase plane waves on the lattice `r0 Z^n` restricted to
    /// `r0 <= |xi_n|`, `|xi| <= r1`, Hermitian-paired and windowed by a Gaussian of
    /// width `sigma = 6 / r0`.
    pub fn bandlimited(n: usize, r0: f64, r1: f64, seed: u64) -> Result<Self> {
        check_dim(n)?;
        positive("r0", r0)?;
        if !(r1 > r0 && r1.is_finite()) {
            return Err(Error::InvalidParameter(format!("need r1 > r0, got r0={r0}, r1={r1}")));
        }
        let kmax = (r1 / r0 + 1e-12).floor() as i64;
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut atoms = Vec::new();
        let side = (2 * kmax + 1) as usize;
        let total = side.pow(n as u32);
        for idx in 0..total {
            let mut rem = idx;
            let mut m = vec![0i64; n];
            for d in (0..n).rev() {
                m[d] = (rem % side) as i64 - kmax;
                rem /= side;
            }
            if m[n - 1] <= 0 {
                continue;
            }
            let xi: Vec<f64> = m.iter().map(|&k| k as f64 * r0).collect();
            if norm2(&xi).sqrt() > r1 + 1e-12 {
                continue;
            }
            let u = (rng.next_u64() >> 11) as f64 / (1u64 << 53) as f64;
            let c = Complex64::from_polar(1.0, 2.0 * PI * u);
            let neg: Vec<f64> = xi.iter().map(|v| -v).collect();
            atoms.push(Atom { coef: c, freq: xi });
            atoms.push(Atom { coef: c.conj(), freq: neg });
        }
        Ok(Self {
            kind: Kind::Bandlimited { r0, r1, seed },
            n,
            mollifier_c: 0.0,
            sigma: 6.0 / r0,
            atoms,
        })
    }

    /// Parses the DSL `kind:key=value,...`; `n=` overrides `default_n`.
    pub fn parse(spec: &str, default_n: usize) -> Result<Self> {
        let (name, rest) = spec.split_once(':').unwrap_or((spec, ""));
        let mut params: Vec<(String, String)> = Vec::new();
        for item in rest.split(',').filter(|s| !s.trim().is_empty()) {
            let (k, v) = item
                .split_once('=')
                .ok_or_else(|| Error::Parse(format!("expected key=value, got '{item}'")))?;
            params.push((k.trim().to_string(), v.trim().to_string()));
        }
        let get = |key: &str| params.iter().find(|(k, _)| k == key).map(|(_, v)| v.as_str());
        let num = |key: &str, default: Option<f64>| -> Result<f64> {
            match get(key) {
                Some(v) => v.parse::<f64>().map_err(|_| Error::Parse(format!("bad number for {key}: '{v}'"))),
                None => default.ok_or_else(|| Error::Parse(format!("missing parameter '{key}'"))),
            }
        };
        let allowed: &[&str] = match name.trim() {
            "gaussian" => &["a", "n"],
            "mollifier" => &["eps", "n"],
            "logdecay" => &["p", "n"],
            "bandlimited" => &["r0", "r1", "seed", "n"],
            other => return Err(Error::Parse(format!("unknown function kind '{other}'"))),
        };
        if let Some((k, _)) = params.iter().find(|(k, _)| !allowed.contains(&k.as_str())) {
            return Err(Error::Parse(format!("unknown parameter '{k}' for {name}")));
        }
        let n = match get("n") {
            Some(v) => v.parse::<usize>().map_err(|_| Error::Parse(format!("bad dimension '{v}'")))?,
            None => default_n,
        };
        match name.trim() {
            "gaussian" => Self::gaussian(n, num("a", Some(1.0))?),
            "mollifier" => Self::mollifier(n, num("eps", Some(1.0))?),
            "logdecay" => Self::logdecay(n, num("p", None)?),
            _ => {
                let seed = match get("seed") {
                    Some(v) => v.parse::<u64>().map_err(|_| Error::Parse(format!("bad seed '{v}'")))?,
                    None => 0,
                };
                Self::bandlimited(n, num("r0", None)?, num("r1", None)?, seed)
            }
        }
    }

    pub fn kind(&self) -> &Kind {
        &self.kind
    }

    pub fn dimension(&self) -> usize {
        self.n
    }

    /// Window width sigma of the atom representation (gaussian and bandlimited).
    pub fn sigma(&self) -> Option<f64> {
        self.has_atoms().then_some(self.sigma)
    }

    pub fn atoms(&self) -> &[Atom] {
        &self.atoms
    }

    fn has_atoms(&self) -> bool {
        matches!(self.kind, Kind::Gaussian { .. } | Kind::Bandlimited { .. })
    }

    fn need_atoms(&self, what: &str) -> Result<()> {
        if self.has_atoms() {
            Ok(())
        } else {
            Err(Error::Unsupported(format!("{what} for {self}")))
        }
    }

    /// Radius beyond which |f| < 1e-16 (infinite for logdecay).
    pub fn decay_radius(&self) -> f64 {
        match self.kind {
            Kind::Gaussian { .. } | Kind::Bandlimited { .. } => self.sigma * (2.0 * 16.0 * 10f64.ln()).sqrt(),
            Kind::Mollifier { eps } => eps,
            Kind::LogDecay { .. } => f64::INFINITY,
        }
    }

    /// Radial profile f0 with f(x) = f0(|x|), for the radial kinds.
    pub fn radial_profile(&self) -> Option<Box<dyn Fn(f64) -> f64 + Sync + '_>> {
        match self.kind {
            Kind::Gaussian { a } => Some(Box::new(move |r: f64| (-(r * r) / (a * a)).exp())),
            Kind::Mollifier { eps } => {
                let c = self.mollifier_c * eps.powi(-(self.n as i32));
                Some(Box::new(move |r: f64| if r < eps { c * (-eps * eps / (eps * eps - r * r)).exp() } else { 0.0 }))
            }
            Kind::LogDecay { p } => {
                let e = self.n as f64 / p;
                Some(Box::new(move |r: f64| (2.0 + r).powf(-e) / (2.0 + r).ln()))
            }
            Kind::Bandlimited { .. } => None,
        }
    }

    /// Exact integral of f over R^n, when finite.
    pub fn mass(&self) -> Option<Complex64> {
        match self.kind {
            Kind::Mollifier { .. } => Some(Complex64::new(1.0, 0.0)),
            Kind::LogDecay { .. } => None,
            _ => Some(self.fourier_atoms(&vec![0.0; self.n])),
        }
    }

    fn window(&self, r2: f64) -> f64 {
        (-r2 / (2.0 * self.sigma * self.sigma)).exp()
    }

    fn eval_atoms(&self, x: &[f64]) -> Complex64 {
        let w = self.window(norm2(x));
        if w == 0.0 {
            return Complex64::new(0.0, 0.0);
        }
        let s: Complex64 = self.atoms.iter().map(|a| a.coef * Complex64::from_polar(1.0, -dot(x, &a.freq))).sum();
        s * w
    }

    fn fourier_atoms(&self, xi: &[f64]) -> Complex64 {
        let s2 = self.sigma * self.sigma;
        let amp = (2.0 * PI * s2).powf(self.n as f64 / 2.0);
        self.atoms
            .iter()
            .map(|a| {
                let d2: f64 = xi.iter().zip(&a.freq).map(|(u, v)| (u - v) * (u - v)).sum();
                a.coef * amp * (-s2 * d2 / 2.0).exp()
            })
            .sum()
    }

    /// Exact Fourier transform `int f(x) e^{i x.xi} dx`.
    pub fn fourier_exact(&self, xi: &[f64]) -> Result<Complex64> {
        self.check_point(xi)?;
        self.need_atoms("closed-form Fourier transform")?;
        Ok(self.fourier_atoms(xi))
    }

    /// Exact hyperplane Radon transform over {x : x.theta = t}, |theta| = 1.
    pub fn radon_exact(&self, theta: &[f64], t: f64) -> Result<Complex64> {
        self.check_point(theta)?;
        self.need_atoms("closed-form Radon transform")?;
        let s2 = self.sigma * self.sigma;
        let amp = (2.0 * PI * s2).powf((self.n as f64 - 1.0) / 2.0) * (-t * t / (2.0 * s2)).exp();
        Ok(self
            .atoms
            .iter()
            .map(|a| {
                let along = dot(theta, &a.freq);
                let perp2 = (norm2(&a.freq) - along * along).max(0.0);
                a.coef * amp * (-s2 * perp2 / 2.0).exp() * Complex64::from_polar(1.0, -t * along)
            })
            .sum())
    }

    /// Exact transversal transform `int f(y', x_n + x'.y') dy'` (Gaussian integral in y').
    pub fn transversal_exact(&self, x: &[f64]) -> Result<Complex64> {
        self.check_point(x)?;
        self.need_atoms("closed-form transversal transform")?;
        let n = self.n;
        let (xp, xn) = (&x[..n - 1], x[n - 1]);
        let s2 = self.sigma * self.sigma;
        let q = 1.0 + norm2(xp);
        let pref = (2.0 * PI * s2).powf((n as f64 - 1.0) / 2.0) / q.sqrt();
        Ok(self
            .atoms
            .iter()
            .map(|atom| {
                let xin = atom.freq[n - 1];
                // b = -(x_n / s2) x' - i (xi' + xi_n x'), bilinear forms below.
                let b: Vec<Complex64> = xp
                    .iter()
                    .zip(&atom.freq[..n - 1])
                    .map(|(&a, &xi)| Complex64::new(-xn * a / s2, -(xi + xin * a)))
                    .collect();
                let bb: Complex64 = b.iter().map(|v| v * v).sum();
                let ab: Complex64 = b.iter().zip(xp).map(|(v, &a)| v * a).sum();
                let c = Complex64::new(-xn * xn / (2.0 * s2), -xn * xin);
                let e = 0.5 * s2 * (bb - ab * ab / q) + c;
                atom.coef * pref * e.exp()
            })
            .sum())
    }

    /// Exact dual transversal transform `(T*f)(x', x_n) = (Tf)(-x', x_n)`.
    pub fn transversal_dual_exact(&self, x: &[f64]) -> Result<Complex64> {
        let mut y = x.to_vec();
        let n = y.len();
        for v in &mut y[..n.saturating_sub(1)] {
            *v = -*v;
        }
        self.transversal_exact(&y)
    }

    /// `(v . grad)^k f (x)` for unit `v`, exact for the atom kinds.
    pub fn directional_derivative(&self, v: &[f64], k: usize, x: &[f64]) -> Result<Complex64> {
        self.check_point(x)?;
        self.need_atoms("analytic derivatives")?;
        let s2 = self.sigma * self.sigma;
        let u = dot(x, v);
        let w = self.window(norm2(x));
        Ok(self
            .atoms
            .iter()
            .map(|a| {
                let pu = exp_poly(k, Complex64::new(0.0, -dot(v, &a.freq)), -1.0 / s2, u);
                a.coef * pu * Complex64::from_polar(1.0, -dot(x, &a.freq))
            })
            .sum::<Complex64>()
            * w)
    }

    /// `k`-th derivative of `Tf` in `x_n`, closed form.
    pub fn transversal_derivative_exact(&self, x: &[f64], k: usize) -> Result<Complex64> {
        let n = self.n;
        if k == 0 {
            return self.transversal_exact(x);
        }
        self.check_point(x)?;
        self.need_atoms("closed-form transversal derivatives")?;
        let xp = &x[..n - 1];
        let s2 = self.sigma * self.sigma;
        let q = 1.0 + norm2(xp);
        // Per atom the x_n-exponent is quadratic with derivative i(a.xi' - xi_n)/q - x_n/(s2 q).
        let mut total = Complex64::new(0.0, 0.0);
        for atom in &self.atoms {
            let single = self.single(atom);
            let c0 = Complex64::new(0.0, (dot(xp, &atom.freq[..n - 1]) - atom.freq[n - 1]) / q);
            total += single.transversal_exact(x)? * exp_poly(k, c0, -1.0 / (s2 * q), x[n - 1]);
        }
        Ok(total)
    }

    /// `k`-th derivative of `Rf(theta, .)` at `t`, closed form.
    pub fn radon_derivative_exact(&self, theta: &[f64], t: f64, k: usize) -> Result<Complex64> {
        if k == 0 {
            return self.radon_exact(theta, t);
        }
        self.check_point(theta)?;
        self.need_atoms("closed-form Radon derivatives")?;
        let s2 = self.sigma * self.sigma;
        let mut total = Complex64::new(0.0, 0.0);
        for atom in &self.atoms {
            let single = self.single(atom);
            let c0 = Complex64::new(0.0, -dot(theta, &atom.freq));
            total += single.radon_exact(theta, t)? * exp_poly(k, c0, -1.0 / s2, t);
        }
        Ok(total)
    }

    fn single(&self, atom: &Atom) -> TestFunction {
        TestFunction { kind: self.kind.clone(), n: self.n, mollifier_c: self.mollifier_c, sigma: self.sigma, atoms: vec![atom.clone()] }
    }

    fn check_point(&self, x: &[f64]) -> Result<()> {
        if x.len() != self.n {
            Err(Error::DimensionMismatch { expected: self.n, got: x.len() })
        } else {
            Ok(())
        }
    }
}

/// `P_k(u)` with `d^k/du^k exp(E(u)) = P_k(u) exp(E(u))` for quadratic `E`, `E'(u) = c0 + c1 u`.
fn exp_poly(k: usize, c0: Complex64, c1: f64, u: f64) -> Complex64 {
    let mut poly = vec![Complex64::new(1.0, 0.0)];
    for _ in 0..k {
        let mut next = vec![Complex64::new(0.0, 0.0); poly.len() + 1];
        for (j, &c) in poly.iter().enumerate() {
            if j > 0 {
                next[j - 1] += c * j as f64;
            }
            next[j + 1] += c * c1;
            next[j] += c * c0;
        }
        poly = next;
    }
    poly.iter().rev().fold(Complex64::new(0.0, 0.0), |acc, &c| acc * u + c)
}

impl PointFn for TestFunction {
    fn dim(&self) -> usize {
        self.n
    }

    fn eval(&self, x: &[f64]) -> Complex64 {
        match self.kind {
            Kind::Gaussian { .. } | Kind::Bandlimited { .. } => self.eval_atoms(x),
            Kind::Mollifier { eps } => {
                let r2 = norm2(x);
                if r2 >= eps * eps {
                    Complex64::new(0.0, 0.0)
                } else {
                    let c = self.mollifier_c * eps.powi(-(self.n as i32));
                    Complex64::new(c * (-eps * eps / (eps * eps - r2)).exp(), 0.0)
                }
            }
            Kind::LogDecay { p } => {
                let r = norm2(x).sqrt();
                Complex64::new((2.0 + r).powf(-(self.n as f64) / p) / (2.0 + r).ln(), 0.0)
            }
        }
    }
}

impl fmt::Display for TestFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.kind {
            Kind::Gaussian { a } => write!(f, "gaussian:a={a},n={}", self.n),
            Kind::Mollifier { eps } => write!(f, "mollifier:eps={eps},n={}", self.n),
            Kind::LogDecay { p } => write!(f, "logdecay:p={p},n={}", self.n),
            Kind::Bandlimited { r0, r1, seed } => write!(f, "bandlimited:r0={r0},r1={r1},seed={seed},n={}", self.n),
        }
    }
}

/// Exact value of `f` at `x`.
pub fn evaluate(f: &TestFunction, x: &[f64]) -> Result<Complex64> {
    f.check_point(x)?;
    Ok(f.eval(x))
}

/// Samples `f` at every node of `grid` (row-major, last axis fastest).
pub fn sample<F: PointFn + ?Sized>(f: &F, grid: &GridND) -> Result<SampledField> {
    if f.dim() != grid.dim() {
        return Err(Error::DimensionMismatch { expected: f.dim(), got: grid.dim() });
    }
    let n = grid.dim();
    let values: Vec<Complex64> = (0..grid.len())
        .into_par_iter()
        .map_init(
            || vec![0.0; n],
            |p, idx| {
                grid.point(idx, p);
                f.eval(p)
            },
        )
        .collect();
    SampledField::new(grid.clone(), values)
}

/// Radon transform of `exp(-|x|^2)` on R^n: `pi^{(n-1)/2} exp(-t^2)`.
pub fn gaussian_radon_oracle(n: usize, t: f64) -> f64 {
    PI.powf((n as f64 - 1.0) / 2.0) * (-t * t).exp()
}
