//! Shared inputs for the kernel benchmarks.

use fracradon::{Grid1D, TestFunction};

pub fn gaussian_2d() -> TestFunction {
    TestFunction::gaussian(2, 1.0).expect("valid gaussian")
}

pub fn bandlimited_2d() -> TestFunction {
    TestFunction::bandlimited(2, 1.0, 3.0, 7).expect("valid bandlimited")
}

/// `2^k + 1` nodes on [-8, 8].
pub fn line(k: u32) -> Grid1D {
    Grid1D::new(-8.0, 8.0, (1usize << k) + 1).expect("valid grid")
}
