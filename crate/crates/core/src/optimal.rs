//! Closed-form optimal conformal factors, Pu's curves and the sphere chart.

use std::f64::consts::{FRAC_PI_2, FRAC_PI_4, PI};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::{CurvePolyline, DeckWord, Point, Profile, ProfileShape, SurfaceKind, SurfaceSpec};
use crate::measure::{integrate, QuadratureConfig};

/// `ln(1 + √2)`, where `∫₀^β φ₀ = π/4`.
pub fn beta0() -> f64 {
    (1.0 + 2f64.sqrt()).ln()
}

/// `ln(2 + √3)`, where `φ₀ = 1/2`.
pub fn beta1() -> f64 {
    (2.0 + 3f64.sqrt()).ln()
}

/// `(β₀, β₁)`.
pub fn constants() -> (f64, f64) {
    (beta0(), beta1())
}

/// `φ₀(y) = 2e^y / (1 + e^{2y}) = sech y`.
pub fn phi0(y: f64) -> f64 {
    1.0 / y.cosh()
}

/// `∫₀^y φ₀ = 2·arctan(e^y) − π/2`.
pub fn phi0_antiderivative(y: f64) -> f64 {
    // Equal to 2·atan(e^y) − π/2 but without cancellation near 0.
    y.sinh().atan()
}

/// `∫₀^y φ₀² = tanh y`.
pub fn phi0_sq_antiderivative(y: f64) -> f64 {
    y.tanh()
}

/// Which closed-form regime an optimal factor falls into.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum CaseTag {
    /// Klein, `β ≤ π/4`: constant factor.
    Thin,
    /// Klein, `π/4 < β < β₀`: `φ₀` up to `s_β`, then constant.
    RoundFlatThin,
    /// `φ₀` on the whole strip.
    Round,
    /// Klein, `β > β₁`: `φ₀` up to `β₁`, then `1/2`.
    RoundFlatThick,
    /// Möbius, `β > β₁`.
    Thick,
}

impl fmt::Display for CaseTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            CaseTag::Thin => "Thin",
            CaseTag::RoundFlatThin => "RoundFlatThin",
            CaseTag::Round => "Round",
            CaseTag::RoundFlatThick => "RoundFlatThick",
            CaseTag::Thick => "Thick",
        };
        f.write_str(s)
    }
}

fn check_beta(beta: f64) -> Result<()> {
    if !(beta > 0.0) || !beta.is_finite() {
        return Err(Error::InvalidBeta(beta));
    }
    Ok(())
}

/// Regime of the optimal Klein factor. Boundary values go with the interval
/// that is closed on that side: `π/4` is `Thin`, `β₀` and `β₁` are `Round`.
pub fn klein_case(beta: f64) -> Result<CaseTag> {
    check_beta(beta)?;
    Ok(if beta <= FRAC_PI_4 {
        CaseTag::Thin
    } else if beta < beta0() {
        CaseTag::RoundFlatThin
    } else if beta <= beta1() {
        CaseTag::Round
    } else {
        CaseTag::RoundFlatThick
    })
}

pub fn mobius_case(beta: f64) -> Result<CaseTag> {
    check_beta(beta)?;
    Ok(if beta <= beta1() {
        CaseTag::Round
    } else {
        CaseTag::Thick
    })
}

/// `φ₀` capped below by `1/2`, i.e. `max(φ₀(y), 1/2)` on `[0, β]`.
pub fn mobius_optimal(beta: f64) -> Result<Profile> {
    check_beta(beta)?;
    Profile::from_shape(beta, ProfileShape::MobiusOptimal)
}

/// `I(s) = ∫₀^s φ₀ + (β − s)·φ₀(s)`.
pub(crate) fn i_of_s(beta: f64, s: f64) -> f64 {
    phi0_antiderivative(s) + (beta - s) * phi0(s)
}

/// The unique `s ∈ (0, β)` with `I(s) = π/4`, for `π/4 < β < β₀`.
pub fn solve_s_beta(beta: f64) -> Result<f64> {
    if !(beta > FRAC_PI_4 && beta < beta0()) {
        return Err(Error::Domain {
            what: "beta",
            value: beta,
            domain: format!("({FRAC_PI_4}, {})", beta0()),
        });
    }
    Ok(s_beta_bisect(beta))
}

/// Bisection for `I(s) = π/4` on `[0, β]` without the domain check; at the
/// ends of the domain it returns the limits `0` and `β₀`.
fn s_beta_bisect(beta: f64) -> f64 {
    // I(0) = β > π/4 > I(β) and I is strictly decreasing.
    let (mut lo, mut hi) = (0.0, beta);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if i_of_s(beta, mid) > FRAC_PI_4 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

/// The optimal `H_β`-invariant factor on the Klein bottle.
pub fn klein_optimal(beta: f64) -> Result<Profile> {
    let case = klein_case(beta)?;
    let s_beta = match case {
        CaseTag::RoundFlatThin => Some(solve_s_beta(beta)?),
        _ => None,
    };
    Profile::from_shape(beta, ProfileShape::KleinOptimal { case, s_beta })
}

/// Closed-form data of the optimal metric on `M_β` or `K_β`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct OptimalSummary {
    pub beta: f64,
    pub surface: SurfaceKind,
    pub case_tag: CaseTag,
    pub s_beta: Option<f64>,
    pub sys: f64,
    pub area: f64,
    pub alpha_sys: f64,
}

pub fn optimal_summary(kind: SurfaceKind, beta: f64) -> Result<OptimalSummary> {
    let b1 = beta1();
    let (case_tag, s_beta, area) = match kind {
        SurfaceKind::Mobius => {
            let case = mobius_case(beta)?;
            let area = match case {
                CaseTag::Round => 2.0 * PI * beta.tanh(),
                _ => PI * 3f64.sqrt() + 0.5 * PI * (beta - b1),
            };
            (case, None, area)
        }
        SurfaceKind::Klein => {
            let case = klein_case(beta)?;
            match case {
                CaseTag::Thin => (case, None, PI.powi(3) / (4.0 * beta)),
                CaseTag::RoundFlatThin => {
                    let s = solve_s_beta(beta)?;
                    let p = phi0(s);
                    (case, Some(s), 4.0 * PI * (s.tanh() + (beta - s) * p * p))
                }
                CaseTag::Round => (case, None, 4.0 * PI * beta.tanh()),
                _ => (case, None, 2.0 * PI * 3f64.sqrt() + PI * (beta - b1)),
            }
        }
    };
    let sys = PI;
    Ok(OptimalSummary {
        beta,
        surface: kind,
        case_tag,
        s_beta,
        sys,
        area,
        alpha_sys: area / (sys * sys),
    })
}

/// Breakpoints between closed-form cases of the optimal metric.
pub fn case_breakpoints(kind: SurfaceKind) -> Vec<f64> {
    match kind {
        SurfaceKind::Mobius => vec![beta1()],
        SurfaceKind::Klein => vec![FRAC_PI_4, beta0(), beta1()],
    }
}

/// Optimal summaries on the grid `beta_min + i·step`, with the case breakpoints
/// inside the range spliced in so that the kinks of the curve are sampled.
pub fn alpha_curve(kind: SurfaceKind, beta_min: f64, beta_max: f64, step: f64) -> Result<Vec<OptimalSummary>> {
    if !(beta_min > 0.0 && beta_max > beta_min && step > 0.0) || !beta_max.is_finite() {
        return Err(Error::Config(format!(
            "need 0 < beta_min < beta_max and step > 0, got [{beta_min}, {beta_max}] step {step}"
        )));
    }
    let n = ((beta_max - beta_min) / step + 1e-9).floor() as usize;
    let mut betas: Vec<f64> = (0..=n).map(|i| beta_min + i as f64 * step).collect();
    let near = |a: f64, b: f64| (a - b).abs() <= 1e-12 * b.max(1.0);
    for b in case_breakpoints(kind) {
        if b > beta_min && b < beta_max && !betas.iter().any(|&x| near(x, b)) {
            betas.push(b);
        }
    }
    betas.sort_by(f64::total_cmp);
    betas.into_iter().map(|b| optimal_summary(kind, b)).collect()
}

/// Systolic area given by the closed-form branch `case`, evaluated at `beta`
/// even outside that branch's interval (used to compare branches at their
/// common endpoints).
pub fn alpha_branch(kind: SurfaceKind, case: CaseTag, beta: f64) -> Result<f64> {
    check_beta(beta)?;
    let b1 = beta1();
    let area = match (kind, case) {
        (SurfaceKind::Mobius, CaseTag::Round) => 2.0 * PI * beta.tanh(),
        (SurfaceKind::Mobius, CaseTag::Thick) => PI * 3f64.sqrt() + 0.5 * PI * (beta - b1),
        (SurfaceKind::Klein, CaseTag::Thin) => PI.powi(3) / (4.0 * beta),
        (SurfaceKind::Klein, CaseTag::RoundFlatThin) => {
            let s = s_beta_bisect(beta);
            let p = phi0(s);
            4.0 * PI * (s.tanh() + (beta - s) * p * p)
        }
        (SurfaceKind::Klein, CaseTag::Round) => 4.0 * PI * beta.tanh(),
        (SurfaceKind::Klein, CaseTag::RoundFlatThick) => 2.0 * PI * 3f64.sqrt() + PI * (beta - b1),
        _ => return Err(Error::UnsupportedSurface(kind.name())),
    };
    Ok(area / (PI * PI))
}

/// Systole of `(M_β, φ₀²·g_flat)`: `π`, or `2π·φ₀(β)` once the doubled boundary
/// loop is shorter.
pub fn mobius_phi0_systole(beta: f64) -> Result<f64> {
    check_beta(beta)?;
    Ok(if beta <= beta1() {
        PI
    } else {
        2.0 * PI * phi0(beta)
    })
}

/// `sinh z / z`, accurate near zero.
fn shc(z: f64) -> f64 {
    if z.abs() < 1e-4 {
        1.0 + z * z / 6.0
    } else {
        z.sinh() / z
    }
}

/// Common denominator of the Pu-curve integrands after `s = τ sin u`.
fn pu_root(tau: f64, u: f64) -> f64 {
    let w = FRAC_PI_4 - 0.5 * u;
    let v = FRAC_PI_4 + 0.5 * u;
    let sw = w.sin();
    let sv = v.sin();
    (shc(2.0 * tau * sw * sw) * shc(2.0 * tau * sv * sv)).sqrt()
}

/// `dx/du` along `γ_τ` in the variable `s = τ sin u`.
fn pu_dx_du(tau: f64, u: f64) -> f64 {
    (tau * u.sin()).cosh() / pu_root(tau, u)
}

/// Pu's curve `γ_τ` as a lift from `(0, τ)` to `(π, −τ)` with word `(1, 0)`.
pub fn pu_curve(beta: f64, tau: f64, n_vertices: usize) -> Result<CurvePolyline> {
    check_beta(beta)?;
    if !(tau >= 0.0 && tau < beta) {
        return Err(Error::Domain {
            what: "tau",
            value: tau,
            domain: format!("[0, {beta})"),
        });
    }
    if n_vertices < 16 {
        return Err(Error::Config(format!(
            "a Pu curve needs at least 16 vertices, got {n_vertices}"
        )));
    }
    pu_curve_unchecked(beta, tau, n_vertices)
}

/// Like [`pu_curve`] but accepting `τ = β` (the boundary curve).
pub(crate) fn pu_curve_unchecked(beta: f64, tau: f64, n: usize) -> Result<CurvePolyline> {
    let surface = SurfaceSpec::mobius(beta)?;
    let word = DeckWord::new(1, 0);
    if tau == 0.0 {
        let vertices = (0..n)
            .map(|i| Point::new(PI * i as f64 / (n - 1) as f64, 0.0))
            .collect();
        return CurvePolyline::new(&surface, vertices, word);
    }
    let cfg = QuadratureConfig::CLOSED_FORM.with_tol(1e-13);
    let du = PI / (n - 1) as f64;
    let mut vertices = Vec::with_capacity(n);
    let mut x = 0.0;
    for i in 0..n {
        let u = -FRAC_PI_2 + i as f64 * du;
        if i > 0 {
            x += integrate(|t| pu_dx_du(tau, t), u - du, u, &cfg);
        }
        vertices.push(Point::new(x, -tau * u.sin()));
    }
    // Absorb the quadrature residue so the lift closes exactly.
    vertices[n - 1] = word.act(beta, vertices[0]);
    CurvePolyline::new(&surface, vertices, word)
}

/// Length of the exact (smooth) curve `γ_τ` under the factor `φ`, which is
/// evaluated at `|y| ≤ τ`.
pub fn pu_curve_length_exact<F: Fn(f64) -> f64>(phi: F, tau: f64) -> f64 {
    if tau == 0.0 {
        return PI * phi(0.0);
    }
    let cfg = QuadratureConfig::CLOSED_FORM.with_tol(1e-12);
    tau.cosh() * integrate(|u| phi(tau * u.sin()) / pu_root(tau, u), -FRAC_PI_2, FRAC_PI_2, &cfg)
}

/// `Ψ∘F`: the conformal chart of the spherical band of latitude `≤ Θ_β`,
/// with `F(x, y) = (x, arcsin(tanh y))`.
pub fn sphere_chart(beta: f64, p: Point) -> Result<[f64; 3]> {
    check_beta(beta)?;
    let tol = 1e-12;
    if !(p.x.abs() <= FRAC_PI_2 + tol) {
        return Err(Error::Domain {
            what: "x",
            value: p.x,
            domain: "[-π/2, π/2]".into(),
        });
    }
    if !(p.y.abs() <= beta + tol) {
        return Err(Error::Domain {
            what: "y",
            value: p.y,
            domain: format!("[-{beta}, {beta}]"),
        });
    }
    let lat = p.y.tanh().asin();
    Ok([p.x.cos() * lat.cos(), p.x.sin() * lat.cos(), lat.sin()])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::measure::{area, curve_length};
    use approx::assert_abs_diff_eq;

    #[test]
    fn constants_and_phi0() {
        let (b0, b1) = constants();
        assert_abs_diff_eq!(b0, 0.881373587019543, epsilon = 1e-12);
        assert_abs_diff_eq!(b1, 1.316957896924816, epsilon = 1e-12);
        assert_abs_diff_eq!(phi0(b1), 0.5, epsilon = 1e-15);
        assert_abs_diff_eq!(phi0(0.0), 1.0);
        assert_abs_diff_eq!(phi0(-0.7), phi0(0.7));
        assert_abs_diff_eq!(phi0_antiderivative(b0), FRAC_PI_4, epsilon = 1e-15);
        for y in [-2.0, 0.1, 0.5, 3.0] {
            let alt = 2.0 * f64::exp(y).atan() - FRAC_PI_2;
            assert_abs_diff_eq!(phi0_antiderivative(y), alt, epsilon = 1e-14);
            assert_abs_diff_eq!(phi0(y), 2.0 * y.exp() / (1.0 + (2.0 * y).exp()), epsilon = 1e-15);
        }
    }

    #[test]
    fn s_beta_domain_and_limits() {
        assert!(solve_s_beta(0.7).is_err());
        assert!(solve_s_beta(beta0()).is_err());
        for beta in [0.79, 0.8, 0.83, 0.86, 0.88] {
            let s = solve_s_beta(beta).unwrap();
            assert!(s > 0.0 && s < beta);
            assert!((i_of_s(beta, s) - FRAC_PI_4).abs() <= 1e-12);
        }
        let near_top = solve_s_beta(beta0() - 1e-9).unwrap();
        assert!((near_top - beta0()).abs() < 1e-3);
        let near_bottom = solve_s_beta(FRAC_PI_4 + 1e-9).unwrap();
        assert!(near_bottom < 1e-3);
    }

    #[test]
    fn klein_cases() {
        let p = klein_optimal(0.5).unwrap();
        assert_abs_diff_eq!(p.eval(0.2), FRAC_PI_2, epsilon = 1e-15);
        let p = klein_optimal(1.0).unwrap();
        assert_abs_diff_eq!(p.eval(0.6), phi0(0.6));
        let p = klein_optimal(2.0).unwrap();
        assert_abs_diff_eq!(p.eval(1.8), 0.5);
        let p = klein_optimal(0.85).unwrap();
        let s = solve_s_beta(0.85).unwrap();
        assert_abs_diff_eq!(p.eval(0.5 * s), phi0(0.5 * s));
        assert_abs_diff_eq!(p.eval(0.5 * (s + 0.85)), phi0(s));
        assert_eq!(klein_case(FRAC_PI_4).unwrap(), CaseTag::Thin);
        assert_eq!(klein_case(beta0()).unwrap(), CaseTag::Round);
        assert_eq!(klein_case(beta1()).unwrap(), CaseTag::Round);
    }

    #[test]
    fn summaries() {
        let k = optimal_summary(SurfaceKind::Klein, beta0()).unwrap();
        assert_abs_diff_eq!(k.alpha_sys, 2.0 * 2f64.sqrt() / PI, epsilon = 1e-12);
        let k = optimal_summary(SurfaceKind::Klein, FRAC_PI_4).unwrap();
        assert_abs_diff_eq!(k.alpha_sys, 1.0, epsilon = 1e-12);
        let m = optimal_summary(SurfaceKind::Mobius, beta1()).unwrap();
        assert_abs_diff_eq!(m.alpha_sys, 3f64.sqrt() / PI, epsilon = 1e-12);
        let m = optimal_summary(SurfaceKind::Mobius, 2.0).unwrap();
        assert_abs_diff_eq!(m.area, PI * 3f64.sqrt() + 0.5 * PI * (2.0 - beta1()), epsilon = 1e-12);
        assert!(optimal_summary(SurfaceKind::Mobius, -1.0).is_err());
    }

    #[test]
    fn closed_form_areas_match_quadrature() {
        for beta in [0.3, 0.8, 0.85, 1.0, 1.4, 2.5] {
            for kind in [SurfaceKind::Mobius, SurfaceKind::Klein] {
                let s = SurfaceSpec::new(kind, beta).unwrap();
                let prof = match kind {
                    SurfaceKind::Mobius => mobius_optimal(beta).unwrap(),
                    SurfaceKind::Klein => klein_optimal(beta).unwrap(),
                };
                let sum = optimal_summary(kind, beta).unwrap();
                assert_abs_diff_eq!(area(&s, &prof).unwrap(), sum.area, epsilon = 1e-8);
            }
        }
    }

    #[test]
    fn pu_curves_have_length_pi() {
        let beta = 1.2;
        let m = SurfaceSpec::mobius(beta).unwrap();
        let p0 = Profile::phi0(beta).unwrap();
        for tau in [0.0, 0.3, 0.9, 1.19] {
            let c = pu_curve(beta, tau, 512).unwrap();
            let v = c.vertices();
            assert_abs_diff_eq!(v[v.len() - 1].x - v[0].x, PI, epsilon = 1e-9);
            let l = curve_length(&m, &p0, &c).unwrap();
            assert_abs_diff_eq!(l, PI, epsilon = 1e-4);
            assert_abs_diff_eq!(pu_curve_length_exact(phi0, tau), PI, epsilon = 1e-10);
        }
        assert!(pu_curve(beta, beta, 64).is_err());
        assert!(pu_curve(beta, 0.1, 8).is_err());
    }

    #[test]
    fn pu_curve_unsmoothed_closure() {
        // The raw integral before snapping already spans π.
        let tau = 0.8;
        let cfg = QuadratureConfig::CLOSED_FORM.with_tol(1e-13);
        let span = integrate(|u| pu_dx_du(tau, u), -FRAC_PI_2, FRAC_PI_2, &cfg);
        assert_abs_diff_eq!(span, PI, epsilon = 1e-10);
    }

    #[test]
    fn sphere_chart_is_conformal() {
        let beta = 1.1;
        let o = sphere_chart(beta, Point::new(0.0, 0.0)).unwrap();
        assert_abs_diff_eq!(o[0], 1.0);
        let top = sphere_chart(beta, Point::new(0.4, beta)).unwrap();
        assert_abs_diff_eq!(top[2].asin(), beta.tanh().asin(), epsilon = 1e-14);
        assert!(sphere_chart(beta, Point::new(2.0, 0.0)).is_err());
        let h = 1e-5;
        for &(x, y) in &[(0.3, 0.2), (-1.0, -0.9), (1.2, 0.5)] {
            let f = |dx: f64, dy: f64| sphere_chart(beta, Point::new(x + dx, y + dy)).unwrap();
            let diff = |a: [f64; 3], b: [f64; 3]| [(a[0] - b[0]) / (2.0 * h), (a[1] - b[1]) / (2.0 * h), (a[2] - b[2]) / (2.0 * h)];
            let ex = diff(f(h, 0.0), f(-h, 0.0));
            let ey = diff(f(0.0, h), f(0.0, -h));
            let dot = |a: [f64; 3], b: [f64; 3]| a[0] * b[0] + a[1] * b[1] + a[2] * b[2];
            let g = phi0(y) * phi0(y);
            assert!((dot(ex, ex) - g).abs() < 1e-5);
            assert!((dot(ey, ey) - g).abs() < 1e-5);
            assert!(dot(ex, ey).abs() < 1e-5);
        }
    }
}
