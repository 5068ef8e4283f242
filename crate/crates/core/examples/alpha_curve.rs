//! The optimal systolic ratio of each conformal class, with its case.

use systolic::optimal::alpha_curve;
use systolic::SurfaceKind;

fn main() -> systolic::Result<()> {
    for kind in [SurfaceKind::Klein, SurfaceKind::Mobius] {
        let rows = alpha_curve(kind, 0.25, 2.5, 0.25)?;
        println!("{kind}:");
        for r in &rows {
            let s = r.s_beta.map_or(String::from("-"), |s| format!("{s:.6}"));
            println!("  beta {:.6}  {:<15} s_beta {s:>8}  alpha {:.9}", r.beta, r.case_tag.to_string(), r.alpha_sys);
        }
        let min = rows.iter().min_by(|a, b| a.alpha_sys.total_cmp(&b.alpha_sys)).unwrap();
        println!("  minimum {:.12} at beta {:.12}", min.alpha_sys, min.beta);
    }
    Ok(())
}
