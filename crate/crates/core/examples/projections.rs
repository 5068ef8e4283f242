//! Averaging a non-invariant factor over the isometry group, projecting it
//! onto the optimal profile, and checking the projection inequality.

use systolic::projections::{field_area, isometry_average, optimal_profile, projection_inequality_check, rank1_project, Field2d};
use systolic::{area, GridConfig, SurfaceSpec};

fn main() -> systolic::Result<()> {
    let surface = SurfaceSpec::klein(1.0)?;
    let field = Field2d::closure(|x, y| 1.0 + 0.3 * (2.0 * x).cos() * (std::f64::consts::PI * y / 2.0).cos().powi(2) + 0.2 * y.cos());
    let avg = isometry_average(&surface, &field)?;
    println!("area before averaging {:.9}, after {:.9}", field_area(&surface, &field), area(&surface, &avg)?);
    let target = optimal_profile(&surface)?;
    let (c, proj) = rank1_project(&surface, &avg, &target)?;
    println!("rank-one coefficient {c:.9}, projected area {:.9}", area(&surface, &proj)?);
    let check = projection_inequality_check(&surface, &avg, &GridConfig::default())?;
    println!(
        "systole {:.6}, scale {:.6}: margin {:.3e} (budget {:.3e}) holds: {}",
        check.systole, check.scale, check.margin, check.budget, check.holds()
    );
    Ok(())
}
