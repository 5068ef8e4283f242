//! Grid systole estimates against the known values, with the witness class.

use systolic::{klein_optimal, systole_estimate, GridConfig, Profile, SurfaceSpec};

fn main() -> systolic::Result<()> {
    let grid = GridConfig::default();
    for beta in [1.0, 2.0] {
        let est = systole_estimate(&SurfaceSpec::mobius(beta)?, &Profile::phi0(beta)?, &grid)?;
        println!("Mobius, phi0, beta {beta}: {:.6} in class {} ({})", est.value, est.word, est.discretization_note);
    }
    for beta in [0.3, 1.2] {
        let est = systole_estimate(&SurfaceSpec::klein(beta)?, &Profile::flat(beta, 1.0)?, &grid)?;
        println!("Klein, flat, beta {beta}: {:.6} in class {} (min(pi, 4 beta) = {:.6})", est.value, est.word, std::f64::consts::PI.min(4.0 * beta));
    }
    for beta in [0.5, 0.85, 1.5] {
        let est = systole_estimate(&SurfaceSpec::klein(beta)?, &klein_optimal(beta)?, &grid)?;
        println!("Klein, optimal, beta {beta}: {:.6} in class {}", est.value, est.word);
    }
    Ok(())
}
