//! Distinguished constants and the closed-form identities behind them.

use std::f64::consts::FRAC_PI_4;

use systolic::optimal::{beta0, beta1, phi0, phi0_antiderivative};
use systolic::projections::klein_systolic_constant;

fn main() {
    let (b0, b1) = (beta0(), beta1());
    println!("beta0 = {b0:.15}   integral of phi0 over [0, beta0] = {:.15} (pi/4 = {FRAC_PI_4:.15})", phi0_antiderivative(b0));
    println!("beta1 = {b1:.15}   phi0(beta1) = {:.15}", phi0(b1));
    println!("alpha_sys(K) = 2 sqrt2 / pi = {:.15}", klein_systolic_constant());
    for b in [0.3, b0, 1.0, b1, 2.0] {
        println!("beta = {b:.6}: integral of phi0^2 = tanh beta = {:.15}", b.tanh());
    }
}
