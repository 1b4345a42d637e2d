//! Locates the maximum of the 1-D trigonometric benchmark on [-1, 3].
//!
//! Dense grid search over 10^6 nodes, then bisection on the derivative inside
//! the bracketing grid cells. Prints the constants stored in `objectives.rs`.

use argmax_prior::objectives::{trig1d, trig1d_derivative, TRIG1D_DOMAIN};

fn main() {
    let (lo, hi) = TRIG1D_DOMAIN;
    let n = 1_000_000;
    let h = (hi - lo) / (n - 1) as f64;
    let best = (0..n)
        .map(|i| lo + h * i as f64)
        .max_by(|a, b| trig1d(*a).total_cmp(&trig1d(*b)))
        .unwrap();

    // f' > 0 on the left of the maximum and < 0 on the right.
    let (mut a, mut b) = (best - h, best + h);
    assert!(trig1d_derivative(a) > 0.0 && trig1d_derivative(b) < 0.0);
    for _ in 0..200 {
        let m = 0.5 * (a + b);
        if trig1d_derivative(m) > 0.0 {
            a = m;
        } else {
            b = m;
        }
    }
    let x = 0.5 * (a + b);
    println!("grid argmax   = {best}");
    println!("TRIG1D_ARGMAX = {x:?}");
    println!("TRIG1D_MAX    = {:?}", trig1d(x));
}
