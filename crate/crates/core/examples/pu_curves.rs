//! Pu's curves on the round Möbius strip: each has length `π`, and the
//! sphere chart sends its endpoints to antipodal points.

use std::f64::consts::FRAC_PI_2;

use systolic::{curve_length, pu_curve, sphere_chart, Point, Profile, SurfaceSpec};

fn main() -> systolic::Result<()> {
    let beta = 1.0;
    let surface = SurfaceSpec::mobius(beta)?;
    let phi0 = Profile::phi0(beta)?;
    for tau in [0.0, 0.2, 0.4, 0.6, 0.8] {
        let curve = pu_curve(beta, tau, 513)?;
        let len = curve_length(&surface, &phi0, &curve)?;
        let v = curve.vertices();
        let a = sphere_chart(beta, Point::new(v[0].x - FRAC_PI_2, v[0].y))?;
        let b = sphere_chart(beta, Point::new(v[v.len() - 1].x - FRAC_PI_2, v[v.len() - 1].y))?;
        let gap = (0..3).map(|i| (a[i] + b[i]).powi(2)).sum::<f64>().sqrt();
        println!("tau {tau:.1}: length {len:.9}, |P(start) + P(end)| = {gap:.1e}");
    }
    Ok(())
}
