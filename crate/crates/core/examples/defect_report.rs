//! Defect reports for the optimal profile and a perturbation of it.

use systolic::optimal::beta0;
use systolic::{defect_report, klein_optimal, GridConfig, Profile, SurfaceSpec};

fn main() -> systolic::Result<()> {
    let beta = beta0();
    let surface = SurfaceSpec::klein(beta)?;
    let opt = klein_optimal(beta)?;
    let bumped = {
        let opt = opt.clone();
        Profile::named(beta, "bumped", move |y| opt.eval(y) * (1.0 + 0.1 * (std::f64::consts::PI * y / beta).cos()))?
    };
    for (name, phi) in [("optimal", opt), ("bumped", bumped)] {
        let r = defect_report(&surface, &phi, &GridConfig::default())?;
        println!("{name}:");
        println!("{}", serde_json::to_string_pretty(&r).expect("report serializes"));
    }
    Ok(())
}
