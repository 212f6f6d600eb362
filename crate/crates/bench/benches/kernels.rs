use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use fracradon::frac1d::{self, FracOrder, Side, Signal};
use fracradon::fracradon::{fractional_line, FracOptions, Line, Method};
use fracradon::functions::sample;
use fracradon::spectral;
use fracradon::transforms::{self, Quadrature};
use fracradon::{Complex64, Grid1D, GridND};
use fracradon_bench::{bandlimited_2d, gaussian_2d, line};
use std::hint::black_box;

fn gaussian_signal(k: u32) -> Signal {
    Signal::from_fn(line(k), |t| Complex64::new((-t * t).exp(), 0.0)).unwrap()
}

fn riemann_liouville(c: &mut Criterion) {
    let mut g = c.benchmark_group("rl");
    for k in [10, 12] {
        let w = gaussian_signal(k);
        g.bench_with_input(BenchmarkId::new("direct", 1 << k), &w, |b, w| {
            b.iter(|| frac1d::rl_integral(black_box(w), Complex64::new(0.5, 0.0), Side::Plus).unwrap())
        });
        g.bench_with_input(BenchmarkId::new("continued", 1 << k), &w, |b, w| {
            b.iter(|| frac1d::rl_continued(black_box(w), FracOrder::real(-0.5), Side::Plus).unwrap())
        });
        g.bench_with_input(BenchmarkId::new("spectral", 1 << k), &w, |b, w| {
            b.iter(|| frac1d::rl_spectral(black_box(w), Complex64::new(-0.5, 0.0), Side::Plus).unwrap())
        });
    }
    let phi = frac1d::rl_integral(&gaussian_signal(12), Complex64::new(0.5, 0.0), Side::Plus).unwrap();
    g.bench_function("marchaud/4096", |b| b.iter(|| frac1d::marchaud_limit(black_box(&phi), 0.5, 4.0 * phi.spacing(), 1).unwrap()));
    g.finish();
}

fn lines(c: &mut Criterion) {
    let f = bandlimited_2d();
    let query = Grid1D::centered(0.0, 1.0 / 64.0, 256);
    let line = Line::T(vec![0.3]);
    let mut g = c.benchmark_group("t_plus_line");
    g.sample_size(10);
    for method in [Method::Hypersingular, Method::Spectral, Method::Continued] {
        g.bench_function(method.to_string(), |b| {
            b.iter(|| fractional_line(&f, &line, Complex64::new(-0.5, 0.0), method, &FracOptions::default(), black_box(&query)).unwrap())
        });
    }
    g.finish();
}

fn quadrature(c: &mut Criterion) {
    let f = gaussian_2d();
    let q = Quadrature::for_radius(f.decay_radius());
    c.bench_function("radon/point", |b| b.iter(|| transforms::radon(&f, &[0.6, 0.8], black_box(0.4), &q).unwrap()));
    c.bench_function("transversal/point", |b| {
        let x = [0.5, 0.2];
        let qx = transforms::transversal_quadrature(&q, &x);
        b.iter(|| transforms::transversal(&f, black_box(&x), &qx).unwrap())
    });
    let field = sample(&f, &GridND::cube(2, -8.0, 8.0, 256).unwrap()).unwrap();
    c.bench_function("dft/256x256", |b| b.iter(|| spectral::dft(black_box(&field)).unwrap()));
}

criterion_group!(benches, riemann_liouville, lines, quadrature);
criterion_main!(benches);
