use fracradon::estimates::{exponents, weighted_norm_cylinder, midpoint_offsets};
use fracradon::frac1d::{fourier_symbol, rl_integral, Side, Signal};
use fracradon::fracradon::{t_plus, FracOptions, Method};
use fracradon::functions::{gaussian_radon_oracle, sample};
use fracradon::special::gamma;
use fracradon::spectral::{apply_multiplier, dft1, frequencies, idft1, parseval, Fractional, ZeroBin};
use fracradon::transforms::{CylinderField, DirectionSet};
use fracradon::{Complex64, Grid1D, GridND, SampledField, TestFunction};
use proptest::prelude::*;
use std::f64::consts::PI;

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs().max(f64::MIN_POSITIVE)
}

fn side() -> impl Strategy<Value = Side> {
    prop_oneof![Just(Side::Plus), Just(Side::Minus)]
}

fn sup_rel(a: &[Complex64], b: &[Complex64]) -> f64 {
    let peak = b.iter().map(|v| v.norm()).fold(0.0, f64::max);
    a.iter().zip(b).map(|(x, y)| (x - y).norm()).fold(0.0, f64::max) / peak
}

proptest! {
    #[test]
    fn gaussian_oracle_is_even(n in 2usize..=4, t in -12.0f64..12.0) {
        prop_assert_eq!(gaussian_radon_oracle(n, t), gaussian_radon_oracle(n, -t));
    }

    #[test]
    fn symbol_modulus(ar in -2.0f64..2.0, ai in -2.0f64..2.0, tau in 0.01f64..50.0, neg in any::<bool>(), s in side()) {
        let tau = if neg { -tau } else { tau };
        let sign = if s == Side::Plus { 1.0 } else { -1.0 };
        let m = fourier_symbol(c(ar, ai), tau, s).unwrap().norm();
        let expect = tau.abs().powf(-ar) * (-ai * sign * tau.signum() * PI / 2.0).exp();
        prop_assert!(rel(m, expect) < 1e-12, "{m} vs {expect}");
    }

    #[test]
    fn symbol_is_multiplicative(a in -1.5f64..1.5, b in -1.5f64..1.5, ai in -1.0f64..1.0, tau in -30.0f64..30.0, s in side()) {
        prop_assume!(tau.abs() > 1e-3);
        let x = fourier_symbol(c(a, ai), tau, s).unwrap();
        let y = fourier_symbol(c(b, -0.5 * ai), tau, s).unwrap();
        let xy = fourier_symbol(c(a + b, 0.5 * ai), tau, s).unwrap();
        prop_assert!((x * y - xy).norm() <= 1e-12 * xy.norm());
    }

    #[test]
    fn dft_round_trip(values in prop::collection::vec((-1.0f64..1.0, -1.0f64..1.0), 8..96), lo in -5.0f64..0.0, h in 0.01f64..0.5) {
        let v: Vec<Complex64> = values.iter().map(|&(a, b)| c(a, b)).collect();
        let grid = Grid1D::with_spacing(lo, h, v.len());
        let back = idft1(&dft1(&v, &grid), &grid);
        prop_assert!(sup_rel(&back, &v) < 1e-12);
    }

    #[test]
    fn parseval_on_random_fields(values in prop::collection::vec(-1.0f64..1.0, 24 * 16), h in 0.05f64..0.5) {
        let grid = GridND::new(vec![Grid1D::with_spacing(-1.0, h, 24), Grid1D::with_spacing(0.0, h, 16)]).unwrap();
        let field = SampledField::new(grid, values.iter().map(|&a| c(a, 0.3 * a * a)).collect()).unwrap();
        let (lhs, rhs) = parseval(&field).unwrap();
        prop_assert!(rel(rhs, lhs) < 1e-10);
    }

    #[test]
    fn multiplier_scales_each_bin(values in prop::collection::vec(-1.0f64..1.0, 64), ar in -1.0f64..1.0, ai in -1.0f64..1.0, s in side()) {
        let v: Vec<Complex64> = values.iter().map(|&a| c(a, 0.0)).collect();
        let grid = Grid1D::with_spacing(-3.2, 0.1, 64);
        let sym = Fractional { alpha: c(ar, ai), side: s };
        let out = apply_multiplier(&v, &grid, &sym, ZeroBin::Zero).unwrap();
        let (before, after) = (dft1(&v, &grid), dft1(&out, &grid));
        let peak = before.iter().map(|z| z.norm()).fold(0.0, f64::max);
        for (k, &tau) in frequencies(&grid).iter().enumerate().skip(1) {
            if before[k].norm() < 1e-6 * peak {
                continue;
            }
            let expect = tau.abs().powf(-ar) * (-ai * if s == Side::Plus { 1.0 } else { -1.0 } * tau.signum() * PI / 2.0).exp();
            prop_assert!(rel(after[k].norm() / before[k].norm(), expect) < 1e-9, "bin {k}");
        }
    }

    #[test]
    fn exponents_are_conjugate(n in 2usize..=4, s in 0.0f64..1.0) {
        let lo = (1.0 - n as f64) / 2.0;
        let e = exponents(lo + s * (1.0 - lo) * 0.999, n).unwrap();
        prop_assert!((1.0 / e.p + 1.0 / e.q - 1.0).abs() < 1e-14);
        prop_assert!(e.p >= 1.0 && e.p <= 2.0 + 1e-12);
        prop_assert!((e.mu + n as f64 * (1.0 - 2.0 / e.p)).abs() < 1e-14);
    }

    #[test]
    fn gamma_moduli_on_vertical_lines(g in 0.05f64..6.0) {
        let g2 = gamma(c(0.0, g)).norm_sqr();
        prop_assert!(rel(g2, PI / (g * (PI * g).sinh())) < 1e-12);
        let h2 = gamma(c(0.5, g)).norm_sqr();
        prop_assert!(rel(h2, PI / (PI * g).cosh()) < 1e-12);
    }

    #[test]
    fn cylinder_norm_is_homogeneous(scale in 0.1f64..10.0, p in 1.0f64..4.0, nu in -0.4f64..1.0) {
        let dirs = DirectionSet::circle(8).unwrap();
        let offsets = midpoint_offsets(-6.0, 6.0, 96).unwrap();
        let phi = |th: &[f64], t: f64| c((-(t - 0.3 * th[0]).powi(2)).exp(), 0.2 * th[1] * (-t * t).exp());
        let a = CylinderField::from_fn(dirs.clone(), offsets, phi).unwrap();
        let b = CylinderField::from_fn(dirs, offsets, |th: &[f64], t: f64| phi(th, t) * c(0.0, scale)).unwrap();
        let (na, nb) = (weighted_norm_cylinder(&a, p, nu).unwrap(), weighted_norm_cylinder(&b, p, nu).unwrap());
        prop_assert!(rel(nb, scale * na) < 1e-12);
    }

    #[test]
    fn cylinder_norm_dilates(lambda in 0.25f64..4.0, p in 1.0f64..4.0, nu in -0.4f64..1.0) {
        let dirs = DirectionSet::circle(6).unwrap();
        let g = |t: f64| c(1.0 / (1.0 + t * t), 0.0);
        let offsets = midpoint_offsets(-5.0, 5.0, 80).unwrap();
        let wide = midpoint_offsets(-5.0 * lambda, 5.0 * lambda, 80).unwrap();
        let a = CylinderField::from_fn(dirs.clone(), offsets, |_: &[f64], t| g(t)).unwrap();
        let b = CylinderField::from_fn(dirs, wide, |_: &[f64], t| g(t / lambda)).unwrap();
        let (na, nb) = (weighted_norm_cylinder(&a, p, nu).unwrap(), weighted_norm_cylinder(&b, p, nu).unwrap());
        prop_assert!(rel(nb, lambda.powf(nu + 1.0 / p) * na) < 1e-12);
    }

    #[test]
    fn sampling_is_linear(a in 0.3f64..2.0, k in -3.0f64..3.0) {
        let grid = GridND::cube(2, -3.0, 3.0, 17).unwrap();
        let f = TestFunction::gaussian(2, a).unwrap();
        let x = sample(&f, &grid).unwrap();
        let norm = x.lp_norm(2.0);
        let scaled = SampledField::new(grid, x.values.iter().map(|v| v * k).collect()).unwrap();
        prop_assert!((scaled.lp_norm(2.0) - k.abs() * norm).abs() <= 1e-12 * norm);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn rl_semigroup_on_gaussian(a in 0.2f64..1.5, b in 0.2f64..1.5, s in side()) {
        let grid = Grid1D::new(-8.0, 8.0, 1025).unwrap();
        let w = Signal::from_fn(grid, |t| c((-t * t).exp(), 0.0)).unwrap();
        let two = rl_integral(&rl_integral(&w, c(b, 0.0), s).unwrap(), c(a, 0.0), s).unwrap();
        let one = rl_integral(&w, c(a + b, 0.0), s).unwrap();
        prop_assert!(sup_rel(&two.values, &one.values) <= 1e-4);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(4))]

    #[test]
    fn t_plus_is_entire_in_alpha(re in -0.4f64..0.8, im in -0.5f64..0.5, x0 in -0.5f64..0.5, x1 in -0.5f64..0.5) {
        let f = TestFunction::gaussian(2, 1.0).unwrap();
        let opts = FracOptions::default();
        let at = |alpha: Complex64| t_plus(&f, alpha, &[x0, x1], Method::Continued, &opts).unwrap();
        let r = 0.05;
        let mean = (0..5)
            .map(|k| at(c(re, im) + Complex64::from_polar(r, 2.0 * PI * k as f64 / 5.0)))
            .sum::<Complex64>()
            / 5.0;
        let centre = at(c(re, im));
        prop_assert!((mean - centre).norm() <= 1e-4 * centre.norm().max(1e-3));
    }
}
