use crate::config::Suite;
use crate::table::{Cell, Table};
use fracradon::estimates::{self, IdentityCheck};
use fracradon::frac1d::{self, Side, Signal};
use fracradon::fracradon::{self as fr, FracOptions, Method};
use fracradon::functions::{sample, Closure, PointFn, TestFunction};
use fracradon::spectral::{self, SliceVariant};
use fracradon::transforms::{self, DirectionSet, MapKind, Quadrature};
use fracradon::{Complex64, Error, Grid1D, GridND, Result};

/// One verified statement: either an error metric under `tol`, or a
/// measured value against a reference.
#[derive(Debug, Clone)]
pub struct Check {
    pub suite: &'static str,
    pub name: String,
    pub lhs: Option<f64>,
    pub rhs: Option<f64>,
    pub error: f64,
    pub tol: f64,
}

impl Check {
    pub fn pass(&self) -> bool {
        self.error <= self.tol
    }
}

struct Builder {
    suite: &'static str,
    scale: f64,
    checks: Vec<Check>,
}

impl Builder {
    fn err(&mut self, name: impl Into<String>, error: f64, tol: f64) {
        self.checks.push(Check { suite: self.suite, name: name.into(), lhs: None, rhs: None, error, tol: tol * self.scale });
    }

    fn pair(&mut self, name: impl Into<String>, lhs: f64, rhs: f64, tol: f64) {
        let error = (lhs - rhs).abs() / rhs.abs().max(f64::MIN_POSITIVE);
        self.checks.push(Check { suite: self.suite, name: name.into(), lhs: Some(lhs), rhs: Some(rhs), error, tol: tol * self.scale });
    }

    /// `value <= limit`, reported as the ratio `value / limit` under 1.
    fn at_most(&mut self, name: impl Into<String>, value: f64, limit: f64) {
        let error = if value.is_nan() { f64::INFINITY } else { value / limit };
        self.checks.push(Check { suite: self.suite, name: name.into(), lhs: Some(value), rhs: Some(limit), error, tol: self.scale });
    }

    fn identity(&mut self, c: &IdentityCheck, tol: f64) {
        self.pair(format!("{} [{}]", c.name, c.params), c.lhs, c.rhs, tol);
    }
}

fn c(a: f64) -> Complex64 {
    Complex64::new(a, 0.0)
}

fn sup_rel(a: &[Complex64], b: &[Complex64]) -> f64 {
    let peak = b.iter().map(|v| v.norm()).fold(0.0, f64::max);
    a.iter().zip(b).map(|(x, y)| (x - y).norm()).fold(0.0, f64::max) / peak
}

fn identities(b: &mut Builder, seed: u64) -> Result<()> {
    let grid = Grid1D::new(-8.0, 8.0, 1 << 14)?;
    let g = Signal::from_fn(grid, |t| c((-t * t).exp()))?;
    let twice = frac1d::rl_integral(&frac1d::rl_integral(&g, c(0.4), Side::Plus)?, c(0.3), Side::Plus)?;
    let once = frac1d::rl_integral(&g, c(0.7), Side::Plus)?;
    b.err("semigroup I^0.3 I^0.4 = I^0.7, sup relative", sup_rel(&twice.values, &once.values), 1e-4);

    let grid = Grid1D::new(-10.0, 6.0, 16001)?;
    let g = Signal::from_fn(grid, |t| c((-t * t).exp()))?;
    let phi = frac1d::rl_integral(&g, c(0.5), Side::Plus)?;
    for l in [1, 2] {
        let d = frac1d::marchaud_limit(&phi, 0.5, 0.01, l)?;
        let err = d.values.iter().zip(&g.values).map(|(a, b)| (a - b).norm()).fold(0.0, f64::max);
        b.err(format!("Marchaud D^1/2 I^1/2 = id, l={l}, sup"), err, 1e-3);
    }
    for (l, a) in [(1, 0.5), (2, 0.5), (2, 1.0)] {
        b.pair(format!("kernel normalization int lambda_(l={l},a={a})"), frac1d::lambda_integral(l, a)?, 1.0, 1e-8);
    }

    let gauss = TestFunction::gaussian(2, 1.0)?;
    let narrow = Grid1D::with_spacing(-16.0, 1.0 / 16.0, 512);
    let dirs = DirectionSet::circle(8)?.directions;
    let points: Vec<Vec<f64>> = [-1.5, -0.5, 0.2, 1.0].iter().map(|&v| vec![v]).collect();
    b.err("Fourier slice, Radon, gaussian", spectral::slice_check(&gauss, SliceVariant::Radon, &dirs, &narrow, 8.0)?, 1e-6);
    b.err("Fourier slice, transversal, gaussian", spectral::slice_check(&gauss, SliceVariant::Transversal, &points, &narrow, 8.0)?, 1e-6);

    let f = TestFunction::bandlimited(2, 2.0, 4.0, seed)?;
    let base = Quadrature::for_radius(f.decay_radius());
    let (mut lhs, mut rhs) = (Vec::new(), Vec::new());
    for deg in [6.0f64, 60.0, 135.0, -25.0] {
        let th = [deg.to_radians().cos(), deg.to_radians().sin()];
        for t in [-1.3, 0.4, 2.2] {
            lhs.push(transforms::radon(&f, &th, t, &base)?.value);
            let tf = |x: &[f64]| transforms::transversal(&f, x, &transforms::transversal_quadrature(&base, x)).unwrap().value;
            rhs.push(transforms::coordinate_map(MapKind::Lambda, c(0.0), &tf, &[th[0], th[1], t])?);
        }
    }
    b.err("Rf = Lambda_0 Tf, sup relative", sup_rel(&lhs, &rhs), 1e-6);

    let r = f.decay_radius();
    let b1 = Closure { n: 2, f: |y: &[f64]| transforms::coordinate_map(MapKind::B1, c(0.0), &|z: &[f64]| f.eval(z), y).unwrap() };
    let (mut lhs, mut rhs) = (Vec::new(), Vec::new());
    for x in [[0.3, 0.5], [-1.2, 4.0], [0.0, -3.0]] {
        lhs.push(transforms::parabolic(&f, &x, &transforms::parabolic_quadrature(&base, &x))?.value);
        let tb1 = |z: &[f64]| {
            let q = transforms::transversal_quadrature(&base, z).refined(1.0 + 2.0 * r);
            transforms::transversal(&b1, z, &q).unwrap().value
        };
        rhs.push(transforms::coordinate_map(MapKind::B2, c(0.0), &tb1, &x)?);
    }
    b.err("Pf = B2 T B1 f, sup relative", sup_rel(&lhs, &rhs), 1e-8);

    let h = 1.0 / 256.0;
    let (mut lhs, mut rhs) = (Vec::new(), Vec::new());
    for deg in [25.0f64, 90.0, 150.0] {
        let th = [deg.to_radians().cos(), deg.to_radians().sin()];
        let opts = FracOptions { step: h, ..Default::default() };
        let sliced = FracOptions { step: h / th[1], ..Default::default() };
        for t in [-0.7, 1.6] {
            lhs.push(fr::r_plus(&f, c(0.5), &th, t, Method::Direct, &opts)?);
            let tp = |x: &[f64]| fr::t_plus(&f, c(0.5), x, Method::Direct, &sliced).unwrap();
            rhs.push(transforms::coordinate_map(MapKind::Lambda, c(0.5), &tp, &[th[0], th[1], t])?);
        }
    }
    b.err("R^1/2 f = Lambda_1/2 T^1/2 f, sup relative", sup_rel(&lhs, &rhs), 1e-5);

    let lattice = GridND::default_for(2)?;
    let (l2, spec) = spectral::parseval(&sample(&gauss, &lattice)?)?;
    b.pair("Parseval, gaussian on the default lattice", spec, l2, 1e-10);

    b.identity(&estimates::transfer_weighted(&gauss, 2.0, 0.0)?, 1e-3);
    b.identity(&estimates::radon_weighted_mass(&gauss)?, 1e-3);
    b.identity(&estimates::transversal_weighted_mass(&gauss)?, 1e-3);
    b.identity(&estimates::parabolic_weighted_mass(&gauss)?, 1e-3);
    for chk in estimates::scaling_checks(&gauss, 2.0, 0.5)? {
        b.identity(&chk, 1e-6);
    }
    b.err("|Gamma(1+i gamma)|^2 = pi gamma / sinh(pi gamma)", estimates::gamma_modulus_check(&[0.5, 1.0, 2.0]), 1e-10);
    Ok(())
}

fn constants(b: &mut Builder, seed: u64) -> Result<()> {
    let m = TestFunction::mollifier(2, 1.0)?;
    let r1 = estimates::radon_norm_audit(&m, 1.0, &DirectionSet::circle(8)?, &Grid1D::centered(0.0, 0.01, 110), &GridND::cube(2, -1.0, 1.0, 201)?)?;
    b.pair("||Rf||~_1 / ||f||_1 = 2 pi, mollifier", r1.measured, r1.reference, 1e-4);
    let g = TestFunction::gaussian(2, 1.0)?;
    let r2 = estimates::radon_norm_audit(
        &g,
        1.2,
        &DirectionSet::circle(8)?,
        &estimates::midpoint_offsets(-7.0, 7.0, 1400)?,
        &GridND::cube(2, -7.0, 7.0, 281)?,
    )?;
    b.at_most("||Rf||~_1.2 / ||f||_1.2 <= 1.01 A(1.2, 2), gaussian", r2.measured, 1.01 * r2.reference);

    let f = TestFunction::bandlimited(2, 2.0, 4.0, seed)?;
    for gamma in [0.0, 0.5] {
        let r = estimates::l2_identity_check(&f, gamma, 12.0, 0.05, 1.0 / 32.0)?;
        b.pair(format!("||T^(-1/2+i{gamma}) f||^2 / ||f||^2 = (2pi)^2 cosh({gamma} pi)/pi"), r.measured, r.reference, 1e-2);
        if gamma == 0.0 {
            b.pair("isometry constant ||T^-1/2 f|| / ||f|| = 2 sqrt(pi)", r.measured.sqrt(), estimates::isometry_constant(2), 1e-2);
        }
    }

    let grid = GridND::new(vec![Grid1D::new(-3.0, 3.0, 7)?, Grid1D::with_spacing(-32.0, 0.125, 512)])?;
    b.err("(2pi)^-1 T^-1/2 T*^-1/2 f = f, relative l2", fr::invert(&f, &grid)?.rel_l2, 1e-2);
    b.err("|Gamma(1+30i)| asymptotic, relative error vs 1/30", estimates::gamma_asymptotic_error(1.0, 30.0).abs(), 1.0 / 30.0);
    Ok(())
}

fn sharpness(b: &mut Builder) -> Result<()> {
    let radii = [1e2, 1e3, 1e4];
    let div = estimates::divergence_witness(&TestFunction::logdecay(2, 2.0)?, 0.0, 50.0, &radii)?;
    let growth = if div.strictly_increasing() { div.growth() } else { 0.0 };
    b.at_most("logdecay p=2, alpha=0: increasing ladder, 2 <= last/first", 2.0, growth);
    let conv = estimates::divergence_witness(&TestFunction::logdecay(2, 1.0)?, 0.0, 0.0, &radii)?;
    b.err("logdecay p=1: partial integrals settle, Cauchy gap", conv.cauchy_gap(), 1e-3);

    let f = TestFunction::mollifier(2, 0.1)?;
    let offsets = Grid1D::new(-2.0, 4000.0, 400201)?;
    let w = estimates::weak_type_audit(&f, 0.5, &[1e-2, 1e-1, 1.0], &DirectionSet::circle(8)?, &offsets, &FracOptions::default())?;
    b.at_most("weak type alpha=1/2: spread of lambda^2 m over lambda in {0.01, 0.1, 1}", w.spread, 2.0);
    Ok(())
}

pub fn run(suite: Suite, scale: f64, seed: u64, n: usize) -> Result<Vec<Check>> {
    if n != 2 {
        return Err(Error::Unsupported(format!("verification suites run at n = 2, got {n}")));
    }
    if !(scale > 0.0 && scale.is_finite()) {
        return Err(Error::InvalidParameter(format!("tolerance scale must be positive, got {scale}")));
    }
    let mut out = Vec::new();
    let all = suite == Suite::All;
    if all || suite == Suite::Identities {
        let mut b = Builder { suite: "identities", scale, checks: Vec::new() };
        identities(&mut b, seed)?;
        out.extend(b.checks);
    }
    if all || suite == Suite::Constants {
        let mut b = Builder { suite: "constants", scale, checks: Vec::new() };
        constants(&mut b, seed)?;
        out.extend(b.checks);
    }
    if all || suite == Suite::Sharpness {
        let mut b = Builder { suite: "sharpness", scale, checks: Vec::new() };
        sharpness(&mut b)?;
        out.extend(b.checks);
    }
    Ok(out)
}

pub fn table(checks: &[Check]) -> Table {
    let mut t = Table::new(&["suite", "check", "lhs", "rhs", "error", "tol", "pass"]);
    for ch in checks {
        t.push(vec![ch.suite.into(), ch.name.clone().into(), ch.lhs.into(), ch.rhs.into(), ch.error.into(), Cell::Num(ch.tol), ch.pass().into()]);
    }
    t
}
