use crate::config::{self, FracintArgs, LineOp, NormOp, NormsArgs, ReportArgs, TableKind, TransformArgs};
use crate::table::{Cell, Table};
use fracradon::estimates::{self, FracRegime, NormReport};
use fracradon::frac1d::{self, Side, Signal};
use fracradon::fracradon::{self as fr, FracOptions, FracTransformRequest, Line, Method, PRoute, TransformKind};
use fracradon::transforms::{self, DirectionSet, Quadrature};
use fracradon::{Complex64, Error, Grid1D, GridND, Result, TestFunction};
use rayon::prelude::*;

fn finite_radius(f: &TestFunction) -> Result<f64> {
    let r = f.decay_radius();
    if r.is_finite() {
        Ok(r)
    } else {
        Err(Error::Unsupported(format!("{f} has no finite decay radius")))
    }
}

fn with_last(head: &[f64], last: f64) -> Vec<f64> {
    let mut x = head.to_vec();
    x.push(last);
    x
}

fn complex_cells(v: Option<Complex64>) -> [Cell; 2] {
    match v {
        Some(z) => [z.re.into(), z.im.into()],
        None => [Cell::Empty, Cell::Empty],
    }
}

pub fn transform(args: &TransformArgs) -> Result<Table> {
    let f = args.common.input()?;
    let n = f.dimension();
    let base = Quadrature::for_radius(finite_radius(&f)?);
    let axis = args.axis.grid()?;
    let mut cfg = args.common.config("transform", &f);
    cfg.grid = Some(args.axis.label());
    cfg.op = Some(format!("{:?}", args.op).to_lowercase());

    let (column, rows): (&str, Vec<(Complex64, Option<Complex64>)>) = if args.op == LineOp::Radon {
        let th = config::direction(&args.theta, n)?;
        cfg.theta = Some(config::list(&th));
        let rows = axis
            .nodes()
            .par_iter()
            .map(|&t| Ok((transforms::radon(&f, &th, t, &base)?.value, f.radon_exact(&th, t).ok())))
            .collect::<Result<_>>()?;
        ("t", rows)
    } else {
        let xp = config::xprime(&args.xprime, n)?;
        cfg.xprime = Some(config::list(&xp));
        let op = args.op;
        let rows = axis
            .nodes()
            .par_iter()
            .map(|&s| {
                let x = with_last(&xp, s);
                Ok(match op {
                    LineOp::Transversal => {
                        let q = transforms::transversal_quadrature(&base, &x);
                        (transforms::transversal(&f, &x, &q)?.value, f.transversal_exact(&x).ok())
                    }
                    LineOp::Dual => {
                        let q = transforms::transversal_quadrature(&base, &x);
                        (transforms::transversal_dual(&f, &x, &q)?.value, f.transversal_dual_exact(&x).ok())
                    }
                    _ => (transforms::parabolic(&f, &x, &transforms::parabolic_quadrature(&base, &x))?.value, None),
                })
            })
            .collect::<Result<_>>()?;
        ("x_n", rows)
    };

    let mut table = Table::new(&[column, "re", "im", "exact_re", "exact_im"]);
    table.meta_from(&cfg);
    table.meta("quadrature", format!("trapezoid, radius {}, step {}", base.radius, base.step));
    for (s, (v, exact)) in axis.nodes().into_iter().zip(rows) {
        let [er, ei] = complex_cells(exact);
        table.push(vec![s.into(), v.re.into(), v.im.into(), er, ei]);
    }
    Ok(table)
}

fn p_line(f: &TestFunction, alpha: Complex64, xp: &[f64], axis: &Grid1D, method: Method, opts: &FracOptions) -> Result<Vec<Complex64>> {
    let r = finite_radius(f)?;
    let route = if method == Method::Direct { PRoute::Direct } else { PRoute::Conjugated };
    axis.nodes().par_iter().map(|&s| fr::p_plus(f, r, alpha, &with_last(xp, s), route, method, opts)).collect()
}

pub fn fracint(args: &FracintArgs) -> Result<Table> {
    let f = args.common.input()?;
    let n = f.dimension();
    let alpha = Complex64::new(args.alpha, args.alpha_im);
    let axis = args.axis.grid()?;
    let opts = FracOptions { step: axis.spacing(), ell: args.ell, ..Default::default() };
    let request = FracTransformRequest { kind: args.op, alpha, input: f.clone(), method: args.method, options: opts };
    request.validate()?;

    let mut cfg = args.common.config("fracint", &f);
    cfg.grid = Some(args.axis.label());
    cfg.op = Some(args.op.to_string());
    cfg.alpha = Some(alpha.to_string());
    cfg.method = Some(args.method.to_string());
    cfg.ell = Some(args.ell);

    let line = match args.op {
        TransformKind::R => {
            let th = config::direction(&args.theta, n)?;
            cfg.theta = Some(config::list(&th));
            Some(Line::R(th))
        }
        kind => {
            let xp = config::xprime(&args.xprime, n)?;
            cfg.xprime = Some(config::list(&xp));
            match kind {
                TransformKind::T => Some(Line::T(xp)),
                TransformKind::TStar => Some(Line::TStar(xp)),
                _ => None,
            }
        }
    };
    let xp = config::xprime(&args.xprime, n)?;
    let eval = |method: Method| match &line {
        Some(l) => fr::fractional_line(&f, l, alpha, method, &opts, &axis),
        None => p_line(&f, alpha, &xp, &axis, method, &opts),
    };
    let values = eval(args.method)?;
    let spectral = if args.method == Method::Spectral {
        None
    } else {
        match fr::check_phi(&f).and_then(|()| eval(Method::Spectral)) {
            Ok(v) => Some(v),
            Err(e) => {
                cfg.method = Some(format!("{} (no spectral comparison: {e})", args.method));
                None
            }
        }
    };

    let column = if args.op == TransformKind::R { "t" } else { "x_n" };
    let mut table = Table::new(&[column, "re", "im", "spectral_re", "spectral_im"]);
    table.meta_from(&cfg);
    if let Some(s) = &spectral {
        table.meta("comparison", format!("{} vs spectral, relative l2 {}", args.method, crate::table::num(fr::relative_l2(&values, s))));
    }
    for (k, (t, v)) in axis.nodes().into_iter().zip(&values).enumerate() {
        let [sr, si] = complex_cells(spectral.as_ref().map(|s| s[k]));
        table.push(vec![t.into(), v.re.into(), v.im.into(), sr, si]);
    }
    Ok(table)
}

pub fn norm_columns() -> Table {
    Table::new(&[
        "operator", "input", "n", "p", "q", "nu", "mu", "alpha", "measured", "reference", "claim", "rel_error", "tol", "pass", "grid",
    ])
}

pub fn norm_row(r: &NormReport) -> Vec<Cell> {
    vec![
        r.operator.clone().into(),
        r.input.clone().into(),
        r.n.into(),
        r.p.into(),
        r.q.into(),
        r.nu.into(),
        r.mu.into(),
        r.alpha.into(),
        r.measured.into(),
        r.reference.into(),
        r.claim.to_string().into(),
        r.rel_error().into(),
        r.tol.into(),
        r.pass().into(),
        r.grid.clone().into(),
    ]
}

/// Lattice step of the norm audits: fine enough for the mollifier bump.
fn lattice(n: usize, r: f64) -> Result<GridND> {
    let h = if n == 2 { (r / 100.0).min(0.05) } else { r / 48.0 };
    GridND::cube(n, -r, r, (2.0 * r / h).round() as usize + 1)
}

/// Radial inputs have direction-independent Radon transforms, so few directions suffice.
fn radial_directions(f: &TestFunction) -> Result<DirectionSet> {
    match (f.radial_profile().is_some(), f.dimension()) {
        (true, 2) => DirectionSet::circle(8),
        (true, _) => DirectionSet::sphere(4, 8),
        (false, n) => DirectionSet::default_for(n),
    }
}

pub fn norms(args: &NormsArgs) -> Result<(Table, bool)> {
    let f = args.common.input()?;
    let n = f.dimension();
    let r = finite_radius(&f)?;
    let grid = lattice(n, r)?;
    let mut reports = Vec::new();
    if matches!(args.op, NormOp::Radon | NormOp::Both) {
        let cells = ((2.0 * r * args.density as f64).ceil() as usize).max(2);
        let offsets = estimates::midpoint_offsets(-r, r, cells)?;
        let dirs = radial_directions(&f)?;
        reports.push(estimates::radon_norm_audit(&f, args.p, &dirs, &offsets, &grid)?);
    }
    if args.op == NormOp::Transversal || (args.op == NormOp::Both && n == 2) {
        reports.push(estimates::transversal_norm_audit(&f, args.p, &grid)?);
    }
    if args.op == NormOp::Fractional {
        let cells = ((args.reach + r) * args.density as f64).ceil() as usize;
        let offsets = estimates::midpoint_offsets(-r, args.reach, cells)?;
        let dirs = radial_directions(&f)?;
        let mut first_err = None;
        for regime in [FracRegime::Weighted, FracRegime::Unweighted] {
            if let Err(e) = regime.exponents(args.alpha, args.p, n) {
                first_err.get_or_insert(e);
                continue;
            }
            let opts = FracOptions::default();
            reports.push(estimates::fractional_radon_audit(&f, args.alpha, args.p, regime, &dirs, &offsets, &grid, &opts)?);
        }
        if let (true, Some(e)) = (reports.is_empty(), first_err) {
            return Err(e);
        }
    }
    if args.op == NormOp::Parabolic {
        reports.push(estimates::parabolic_norm_audit(&f, args.p, &grid)?);
    }
    let mut cfg = args.common.config("norms", &f);
    cfg.p = Some(args.p);
    cfg.op = Some(format!("{:?}", args.op).to_lowercase());
    if args.op == NormOp::Fractional {
        cfg.alpha = Some(args.alpha.to_string());
    }
    let mut table = norm_columns();
    table.meta_from(&cfg);
    for rep in &reports {
        table.push(norm_row(rep));
    }
    Ok((table, reports.iter().all(NormReport::pass)))
}

pub fn report(args: &ReportArgs) -> Result<Table> {
    let mut cfg = config::RunConfig {
        subcommand: "report".into(),
        function: args.common.function.clone(),
        n: args.common.n,
        seed: args.common.seed,
        format: Some(args.common.out),
        table: Some(args.table),
        ..Default::default()
    };
    let mut table = match args.table {
        TableKind::Rl => {
            let axis = args.axis.grid()?;
            cfg.function = "exp(-t^2)".into();
            cfg.grid = Some(args.axis.label());
            cfg.alpha = Some(config::list(&args.alpha));
            let g = Signal::from_fn(axis, |t| Complex64::new((-t * t).exp(), 0.0))?;
            let cols: Vec<Vec<Complex64>> = args
                .alpha
                .iter()
                .map(|&a| Ok(frac1d::rl_continued(&g, frac1d::FracOrder::real(a), Side::Plus)?.values))
                .collect::<Result<_>>()?;
            let names: Vec<String> = std::iter::once("t".to_string()).chain(args.alpha.iter().map(|a| format!("I^{a}"))).collect();
            let mut t = Table::new(&names.iter().map(String::as_str).collect::<Vec<_>>());
            for (k, s) in axis.nodes().into_iter().enumerate() {
                t.push(std::iter::once(s.into()).chain(cols.iter().map(|c| c[k].re.into())).collect());
            }
            t
        }
        TableKind::Ladder => {
            cfg.function = "logdecay:p=2 at t=50; logdecay:p=1 at t=0".into();
            let radii: Vec<f64> = (0..=4).map(|k| 10f64.powf(2.0 + 0.5 * k as f64)).collect();
            let div = estimates::divergence_witness(&TestFunction::logdecay(2, 2.0)?, 0.0, 50.0, &radii)?;
            let conv = estimates::divergence_witness(&TestFunction::logdecay(2, 1.0)?, 0.0, 0.0, &radii)?;
            let mut t = Table::new(&["radius", "divergent", "convergent"]);
            for k in 0..radii.len() {
                t.push(vec![radii[k].into(), div.values[k].into(), conv.values[k].into()]);
            }
            t
        }
        TableKind::Weak => {
            let f = TestFunction::mollifier(2, 0.1)?;
            cfg.function = f.to_string();
            cfg.alpha = Some("0.5".into());
            let lambdas: Vec<f64> = (0..=8).map(|k| 10f64.powf(-2.0 + 0.25 * k as f64)).collect();
            let offsets = Grid1D::new(-2.0, 4000.0, 400201)?;
            let w = estimates::weak_type_audit(&f, 0.5, &lambdas, &DirectionSet::circle(8)?, &offsets, &FracOptions::default())?;
            let mut t = Table::new(&["lambda", "measure", "scaled"]);
            for l in &w.levels {
                t.push(vec![l.lambda.into(), l.measure.into(), l.scaled.into()]);
            }
            t
        }
        TableKind::Gamma => {
            cfg.function = "Gamma(1+ib)".into();
            let mut t = Table::new(&["b", "rel_error", "bound"]);
            for b in [1.0, 2.0, 5.0, 10.0, 20.0, 30.0, 50.0] {
                let err = estimates::gamma_asymptotic_error(1.0, b);
                t.push(vec![b.into(), err.into(), (1.0 / b).into()]);
            }
            t
        }
    };
    table.meta_from(&cfg);
    Ok(table)
}
