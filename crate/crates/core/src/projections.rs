//! The isometry average, the rank-one projection onto the optimal factor, Pu's
//! equality and the inequalities built on them.

use std::f64::consts::{FRAC_PI_2, FRAC_PI_4, PI};
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::{check_profile, Profile, SurfaceKind, SurfaceSpec, DEFAULT_SAMPLES};
use crate::measure::{curve_length, integrate, integrate_over_profiles, l2_inner, QuadratureConfig};
use crate::optimal::{self, klein_optimal, mobius_optimal, optimal_summary, phi0};
use crate::systole::{systole_estimate, GridConfig};

/// Quadrature contribution to every inequality budget.
pub const QUADRATURE_TOL: f64 = 1e-8;

/// Relative error allowed for the grid systole estimate.
pub const SYSTOLE_REL_TOL: f64 = 0.02;

/// The optimal factor of the conformal class of `surface`.
pub fn optimal_profile(surface: &SurfaceSpec) -> Result<Profile> {
    match surface.kind {
        SurfaceKind::Mobius => mobius_optimal(surface.beta),
        SurfaceKind::Klein => klein_optimal(surface.beta),
    }
}

/// `∫₀^β f·h dy` without the surface weight.
fn strip_inner(f: &Profile, h: &Profile) -> f64 {
    integrate_over_profiles(
        &[f, h],
        |y| f.eval(y) * h.eval(y),
        &QuadratureConfig::for_profiles(&[f, h]),
    )
}

/// A conformal factor on the surface that need not be invariant.
#[derive(Clone)]
pub enum Field2d {
    /// `f(x, y)` on the universal cover; must be invariant under the deck group.
    Closure(Arc<dyn Fn(f64, f64) -> f64 + Send + Sync>),
    Invariant(Profile),
    /// Values on `x_i = iπ/nx` (`0 ≤ i < nx`) and `y_j = -H + 2Hj/(ny - 1)`,
    /// `H` the half-height of the fundamental domain; stored row-major
    /// `values[j * nx + i]` and interpolated bilinearly.
    Grid { nx: usize, ny: usize, values: Vec<f64> },
}

impl std::fmt::Debug for Field2d {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Field2d::Closure(_) => f.write_str("Closure"),
            Field2d::Invariant(p) => write!(f, "Invariant({p:?})"),
            Field2d::Grid { nx, ny, .. } => write!(f, "Grid({nx}x{ny})"),
        }
    }
}

impl Field2d {
    pub fn closure<F>(f: F) -> Self
    where
        F: Fn(f64, f64) -> f64 + Send + Sync + 'static,
    {
        Field2d::Closure(Arc::new(f))
    }

    pub fn grid(nx: usize, ny: usize, values: Vec<f64>) -> Result<Self> {
        if nx < 2 || ny < 2 || values.len() != nx * ny {
            return Err(Error::Config(format!(
                "grid field needs nx, ny >= 2 and nx*ny values, got {nx}x{ny} with {}",
                values.len()
            )));
        }
        Ok(Field2d::Grid { nx, ny, values })
    }

    /// Value at a point of the universal cover.
    pub fn eval(&self, surface: &SurfaceSpec, x: f64, y: f64) -> f64 {
        match self {
            Field2d::Closure(f) => f(x, y),
            Field2d::Invariant(p) => p.eval(surface.fold_y(y)),
            Field2d::Grid { nx, ny, values } => {
                let (x, y) = reduce(surface, x, y);
                let hx = PI / *nx as f64;
                let t = x / hx;
                let i = (t.floor() as usize).min(nx - 1);
                let frac = t - i as f64;
                let col = |i: usize, y: f64| {
                    if i == *nx {
                        grid_column(surface, *ny, values, 0, -y)
                    } else {
                        grid_column(surface, *ny, values, i, y)
                    }
                };
                (1.0 - frac) * col(i, y) + frac * col(i + 1, y)
            }
        }
    }

    /// `(1/π) ∫₀^π f(x, y) dx`.
    fn x_average(&self, surface: &SurfaceSpec, y: f64) -> f64 {
        match self {
            Field2d::Grid { nx, ny, values } => {
                // The field is linear in x between columns, so the trapezoid
                // rule is exact.
                let (_, yr) = reduce(surface, 0.0, y);
                let mut s = 0.5 * grid_column(surface, *ny, values, 0, yr);
                for i in 1..*nx {
                    s += grid_column(surface, *ny, values, i, yr);
                }
                s += 0.5 * grid_column(surface, *ny, values, 0, -yr);
                s / *nx as f64
            }
            _ => {
                let cfg = QuadratureConfig::CLOSED_FORM;
                integrate(|x| self.eval(surface, x, y), 0.0, PI, &cfg) / PI
            }
        }
    }
}

/// Moves `(x, y)` into `[0, π) × [-H, H]` using the deck group.
fn reduce(surface: &SurfaceSpec, x: f64, y: f64) -> (f64, f64) {
    let k = (x / PI).floor();
    let xr = (x - k * PI).clamp(0.0, PI);
    let mut yr = if (k as i64).rem_euclid(2) == 0 { y } else { -y };
    if surface.kind == SurfaceKind::Klein {
        let b = surface.beta;
        yr = (yr + 2.0 * b).rem_euclid(4.0 * b) - 2.0 * b;
    }
    (xr, yr)
}

fn grid_column(surface: &SurfaceSpec, ny: usize, values: &[f64], i: usize, y: f64) -> f64 {
    let nx = values.len() / ny;
    let h = surface.half_height();
    let t = ((y + h) / (2.0 * h) * (ny - 1) as f64).clamp(0.0, (ny - 1) as f64);
    let j = (t.floor() as usize).min(ny - 2);
    let frac = t - j as f64;
    (1.0 - frac) * values[j * nx + i] + frac * values[(j + 1) * nx + i]
}

/// Haar average of `field` over the flat isometry group: the mean over
/// `x`-translations, then over `y ↦ -y`, then (Klein) over `y ↦ y + 2β`.
pub fn isometry_average(surface: &SurfaceSpec, field: &Field2d) -> Result<Profile> {
    if let Field2d::Invariant(p) = field {
        check_profile(surface, p)?;
        return Ok(p.clone());
    }
    check_field_positive(surface, field)?;
    let beta = surface.beta;
    let n = DEFAULT_SAMPLES;
    let ys: Vec<f64> = (0..=n).map(|i| beta * i as f64 / n as f64).collect();
    let mut values = Vec::with_capacity(ys.len());
    for &y in &ys {
        let a = |t: f64| field.x_average(surface, t);
        let v = match surface.kind {
            SurfaceKind::Mobius => 0.5 * (a(y) + a(-y)),
            SurfaceKind::Klein => {
                let s = 2.0 * beta;
                0.25 * (a(y) + a(-y) + a(y + s) + a(-y + s))
            }
        };
        if !(v > 0.0) || !v.is_finite() {
            return Err(Error::NonPositiveField { x: f64::NAN, y, value: v });
        }
        values.push(v);
    }
    Profile::sampled(beta, ys, values)
}

fn check_field_positive(surface: &SurfaceSpec, field: &Field2d) -> Result<()> {
    let h = surface.half_height();
    let n = 64;
    for i in 0..n {
        for j in 0..=n {
            let x = PI * i as f64 / n as f64;
            let y = -h + 2.0 * h * j as f64 / n as f64;
            let v = field.eval(surface, x, y);
            if !(v > 0.0) || !v.is_finite() {
                return Err(Error::NonPositiveField { x, y, value: v });
            }
        }
    }
    Ok(())
}

/// `∬ f·g` over the fundamental domain.
fn field_integral<F: Fn(f64, f64) -> f64>(surface: &SurfaceSpec, f: F) -> f64 {
    let h = surface.half_height();
    let cfg = QuadratureConfig::SAMPLED;
    let inner = QuadratureConfig::SAMPLED.with_tol(1e-10);
    integrate(|y| integrate(|x| f(x, y), 0.0, PI, &inner), -h, h, &cfg)
}

/// Area of `f²·g_flat`, by two-dimensional quadrature.
pub fn field_area(surface: &SurfaceSpec, field: &Field2d) -> f64 {
    field_integral(surface, |x, y| field.eval(surface, x, y).powi(2))
}

/// `‖f − φ‖²_{L²}` for an invariant `φ`.
pub fn field_distance_sq(surface: &SurfaceSpec, field: &Field2d, profile: &Profile) -> f64 {
    field_integral(surface, |x, y| {
        (field.eval(surface, x, y) - profile.eval(surface.fold_y(y))).powi(2)
    })
}

/// `L²` projection onto `ℝ·target`: the coefficient `c` and `c·target`.
pub fn rank1_project(surface: &SurfaceSpec, phi: &Profile, target: &Profile) -> Result<(f64, Profile)> {
    target.validate_positive()?;
    let c = l2_inner(surface, phi, target)? / l2_inner(surface, target, target)?;
    if !(c > 0.0) {
        return Err(Error::InvalidProfile(format!(
            "projection coefficient {c} is not positive"
        )));
    }
    Ok((c, target.scaled(c)))
}

/// Density of Pu's curve family in `θ`, where `τ = β sin θ`:
/// `w(τ) dτ` with `w(τ) = φ₀²(τ) tanh τ / √(φ₀²(τ) − φ₀²(β))`.
pub(crate) fn pu_weight(beta: f64, theta: f64) -> f64 {
    let tau = beta * theta.sin();
    let om = FRAC_PI_4 - 0.5 * theta;
    let z = 2.0 * beta * om.sin().powi(2);
    let shc = if z < 1e-4 { 1.0 + z * z / 6.0 } else { z.sinh() / z };
    2.0 * beta * om.cos() * beta.cosh() * phi0(tau) * tau.tanh()
        / (2.0 * beta * shc * (beta + tau).sinh()).sqrt()
}

/// Vertices per Pu curve when measuring it as a polyline.
const PU_VERTICES: usize = 513;

/// `|∫₀^β φφ₀ − (1/π)∫₀^β L_g(γ_τ) w(τ) dτ|` on the Möbius strip.
pub fn pu_equality_residual(beta: f64, phi: &Profile) -> Result<f64> {
    let surface = SurfaceSpec::mobius(beta)?;
    check_profile(&surface, phi)?;
    let p0 = Profile::phi0(beta)?;
    let lhs = strip_inner(phi, &p0);
    let cfg = QuadratureConfig {
        abs_tol: 1e-8,
        max_subdivisions: 4000,
        endpoint_singularity: crate::measure::EndpointSingularity::None,
    };
    let err = std::cell::RefCell::new(None);
    let rhs = integrate(
        |theta| {
            let w = pu_weight(beta, theta);
            if w == 0.0 {
                return 0.0;
            }
            let tau = (beta * theta.sin()).min(beta);
            let len = optimal::pu_curve_unchecked(beta, tau, PU_VERTICES)
                .and_then(|c| curve_length(&surface, phi, &c));
            match len {
                Ok(l) => l * w,
                Err(e) => {
                    err.borrow_mut().get_or_insert(e);
                    0.0
                }
            }
        },
        0.0,
        FRAC_PI_2,
        &cfg,
    ) / PI;
    if let Some(e) = err.into_inner() {
        return Err(e);
    }
    Ok((lhs - rhs).abs())
}

/// Outcome of the projection inequality after normalizing the systole to `π`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ProjectionCheck {
    /// `∫₀^β cφ·φ_β − ∫₀^β φ_β²` with `c = π / sys`.
    pub margin: f64,
    /// Allowed negative slack from quadrature and systole discretization.
    pub budget: f64,
    /// Systole estimate of the unscaled `φ`.
    pub systole: f64,
    /// Factor `c` applied to `φ`.
    pub scale: f64,
    /// `∫₀^β cφ·φ_β`.
    pub cross: f64,
}

impl ProjectionCheck {
    pub fn holds(&self) -> bool {
        self.margin >= -self.budget
    }

    /// Budget for a systole estimate with relative error `rel_tol`.
    pub fn budget_for(&self, rel_tol: f64) -> f64 {
        QUADRATURE_TOL + 2.0 * rel_tol * self.cross
    }
}

pub fn projection_inequality_check(
    surface: &SurfaceSpec,
    phi: &Profile,
    grid: &GridConfig,
) -> Result<ProjectionCheck> {
    let sys = systole_estimate(surface, phi, grid)?.value;
    projection_inequality_with_systole(surface, phi, sys)
}

/// Same as [`projection_inequality_check`] with a systole computed elsewhere.
pub fn projection_inequality_with_systole(
    surface: &SurfaceSpec,
    phi: &Profile,
    sys: f64,
) -> Result<ProjectionCheck> {
    check_profile(surface, phi)?;
    let opt = optimal_profile(surface)?;
    let scale = PI / sys;
    let cross = scale * strip_inner(phi, &opt);
    let margin = cross - strip_inner(&opt, &opt);
    Ok(ProjectionCheck {
        margin,
        budget: QUADRATURE_TOL + 2.0 * SYSTOLE_REL_TOL * cross,
        systole: sys,
        scale,
        cross,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum LemmaOutcome {
    /// The conclusion holds at every grid point.
    Holds,
    /// The conclusion fails at grid point `index` by `deficit`.
    Fails { index: usize, deficit: f64 },
    /// The inputs do not meet the lemma's hypotheses.
    PremiseFailed(String),
}

impl LemmaOutcome {
    pub fn holds(&self) -> bool {
        matches!(self, LemmaOutcome::Holds)
    }
}

/// Checks `∫₀^z h g ≥ h(z) ∫₀^z g` on the grid `z_j = j·dz` for positive
/// non-increasing `h`, given `∫₀^z h g ≥ 0`. Integrals are left-endpoint sums,
/// for which the statement holds exactly.
pub fn decreasing_lemma_check(h: &[f64], g: &[f64], dz: f64, tol: f64) -> LemmaOutcome {
    if h.len() != g.len() || h.is_empty() {
        return LemmaOutcome::PremiseFailed("h and g must have the same nonzero length".into());
    }
    if !(dz > 0.0) {
        return LemmaOutcome::PremiseFailed(format!("step {dz} is not positive"));
    }
    if let Some(i) = h.iter().position(|v| !(*v > 0.0) || !v.is_finite()) {
        return LemmaOutcome::PremiseFailed(format!("h[{i}] = {} is not positive", h[i]));
    }
    if let Some(i) = h.windows(2).position(|w| w[1] > w[0]) {
        return LemmaOutcome::PremiseFailed(format!("h increases between {i} and {}", i + 1));
    }
    if let Some(i) = g.iter().position(|v| !v.is_finite()) {
        return LemmaOutcome::PremiseFailed(format!("g[{i}] is not finite"));
    }
    let h_min = h[h.len() - 1];
    let slack = tol * (1.0 + h[0] / h_min);
    let (mut hg, mut gs) = (0.0, 0.0);
    let mut fail = None;
    for j in 0..h.len() {
        if hg < -tol {
            return LemmaOutcome::PremiseFailed(format!(
                "running integral of h*g is {hg} at index {j}"
            ));
        }
        let deficit = h[j] * gs - hg;
        if fail.is_none() && deficit > slack {
            fail = Some(LemmaOutcome::Fails { index: j, deficit });
        }
        hg += h[j] * g[j] * dz;
        gs += g[j] * dz;
    }
    fail.unwrap_or(LemmaOutcome::Holds)
}

/// Moments of `h = φ/φ_opt` under the normalized optimal measure.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct VarianceForm {
    pub expected_h: f64,
    pub var_h: f64,
    pub area_opt: f64,
}

/// Every quantity entering the systolic inequalities with remainder.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DefectReport {
    pub surface: SurfaceKind,
    pub beta: f64,
    pub area_g: f64,
    pub sys_g: f64,
    pub alpha_g: f64,
    pub alpha_conformal_opt: f64,
    pub residual_norm_sq: f64,
    pub lhs_defect: f64,
    pub rhs_defect: f64,
    pub variance_form: VarianceForm,
    pub bavard_gap: Option<f64>,
}

impl DefectReport {
    /// Allowed slack in `lhs_defect ≤ rhs_defect`.
    pub fn budget(&self) -> f64 {
        self.budget_for(SYSTOLE_REL_TOL)
    }

    /// Budget for a systole estimate with relative error `rel_tol`.
    pub fn budget_for(&self, rel_tol: f64) -> f64 {
        QUADRATURE_TOL + 2.0 * rel_tol * self.alpha_g
    }

    /// `rhs_defect − lhs_defect`.
    pub fn margin(&self) -> f64 {
        self.rhs_defect - self.lhs_defect
    }
}

/// `2√2/π`, the least systolic area among Klein bottles.
pub fn klein_systolic_constant() -> f64 {
    2.0 * 2f64.sqrt() / PI
}

pub fn defect_report(surface: &SurfaceSpec, phi: &Profile, grid: &GridConfig) -> Result<DefectReport> {
    let sys = systole_estimate(surface, phi, grid)?.value;
    defect_report_with_systole(surface, phi, sys)
}

/// Same as [`defect_report`] with a systole computed elsewhere.
pub fn defect_report_with_systole(surface: &SurfaceSpec, phi: &Profile, sys: f64) -> Result<DefectReport> {
    check_profile(surface, phi)?;
    let beta = surface.beta;
    let opt = optimal_profile(surface)?;
    let summary = optimal_summary(surface.kind, beta)?;
    let w = surface.l2_weight();
    let cfg = QuadratureConfig::for_profiles(&[phi, &opt]);
    let area_g = w * strip_inner(phi, phi);
    let (c, _) = rank1_project(surface, phi, &opt)?;
    let residual = w * integrate_over_profiles(
        &[phi, &opt],
        |y| (phi.eval(y) - c * opt.eval(y)).powi(2),
        &cfg,
    );
    let area_opt = summary.area;
    let expected_h = w * strip_inner(phi, &opt) / area_opt;
    let var_h = w
        * integrate_over_profiles(
            &[phi, &opt],
            |y| {
                let o = opt.eval(y);
                (phi.eval(y) / o - expected_h).powi(2) * o * o
            },
            &cfg,
        )
        / area_opt;
    let alpha_g = area_g / (sys * sys);
    let lhs = residual / (sys * sys);
    Ok(DefectReport {
        surface: surface.kind,
        beta,
        area_g,
        sys_g: sys,
        alpha_g,
        alpha_conformal_opt: summary.alpha_sys,
        residual_norm_sq: residual,
        lhs_defect: lhs,
        rhs_defect: alpha_g - summary.alpha_sys,
        variance_form: VarianceForm {
            expected_h,
            var_h,
            area_opt,
        },
        bavard_gap: match surface.kind {
            SurfaceKind::Klein => Some(summary.alpha_sys - klein_systolic_constant()),
            SurfaceKind::Mobius => None,
        },
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::optimal::{beta0, pu_curve_length_exact};
    use approx::assert_abs_diff_eq;

    #[test]
    fn pu_weight_integrates_to_tanh() {
        let cfg = QuadratureConfig::CLOSED_FORM.with_tol(1e-12);
        for beta in [0.3, 1.0, 2.0] {
            let v = integrate(|t| pu_weight(beta, t), 0.0, FRAC_PI_2, &cfg);
            assert_abs_diff_eq!(v, beta.tanh(), epsilon = 1e-10);
        }
    }

    #[test]
    fn pu_equality_for_reference_profiles() {
        for beta in [0.8, 1.0] {
            let r = pu_equality_residual(beta, &Profile::phi0(beta).unwrap()).unwrap();
            assert!(r <= 1e-5, "phi0 residual {r}");
            let r = pu_equality_residual(beta, &Profile::flat(beta, 1.0).unwrap()).unwrap();
            assert!(r <= 1e-5, "flat residual {r}");
        }
    }

    #[test]
    fn pu_equality_with_exact_curve_lengths() {
        // Same identity with the smooth curves instead of polylines.
        let beta = 1.0;
        let f = |y: f64| 1.0 + 0.5 * y * y;
        let cfg = QuadratureConfig::CLOSED_FORM.with_tol(1e-10);
        let lhs = integrate(|y| f(y) * phi0(y), 0.0, beta, &cfg);
        let rhs = integrate(
            |t| pu_curve_length_exact(|y| f(y.abs()), beta * t.sin()) * pu_weight(beta, t),
            0.0,
            FRAC_PI_2,
            &cfg,
        ) / PI;
        assert_abs_diff_eq!(lhs, rhs, epsilon = 1e-8);
    }

    #[test]
    fn rank1_basics() {
        let s = SurfaceSpec::klein(1.0).unwrap();
        let t = klein_optimal(1.0).unwrap();
        let (c, _) = rank1_project(&s, &t, &t).unwrap();
        assert_abs_diff_eq!(c, 1.0, epsilon = 1e-12);
        let phi = Profile::named(1.0, "p", |y| 1.0 + y).unwrap();
        let (c, proj) = rank1_project(&s, &phi, &t).unwrap();
        let (c2, again) = rank1_project(&s, &proj, &t).unwrap();
        assert_abs_diff_eq!(c2, c, epsilon = 1e-12);
        assert_abs_diff_eq!(again.eval(0.3), proj.eval(0.3), epsilon = 1e-12);
        let total = l2_inner(&s, &phi, &phi).unwrap();
        let along = c * c * l2_inner(&s, &t, &t).unwrap();
        let res = 4.0 * PI * integrate(|y| (phi.eval(y) - c * t.eval(y)).powi(2), 0.0, 1.0, &QuadratureConfig::CLOSED_FORM);
        assert_abs_diff_eq!(total, along + res, epsilon = 1e-8);
    }

    #[test]
    fn average_of_x_oscillation() {
        let s = SurfaceSpec::mobius(0.7).unwrap();
        let f = Field2d::closure(|x, _| 1.0 + 0.3 * (2.0 * x).cos());
        let p = isometry_average(&s, &f).unwrap();
        for y in [0.0, 0.3, 0.7] {
            assert_abs_diff_eq!(p.eval(y), 1.0, epsilon = 1e-10);
        }
        let inv = Profile::phi0(0.7).unwrap();
        let same = isometry_average(&s, &Field2d::Invariant(inv.clone())).unwrap();
        assert_eq!(same.eval(0.4), inv.eval(0.4));
        let bad = Field2d::closure(|x, _| x.cos());
        assert!(matches!(isometry_average(&s, &bad), Err(Error::NonPositiveField { .. })));
    }

    #[test]
    fn average_is_pythagorean_and_idempotent() {
        let beta = 0.6;
        let s = SurfaceSpec::klein(beta).unwrap();
        // Invariant under (x, y) ↦ (x + π, -y) and y ↦ y + 4β.
        let b = beta;
        let f = Field2d::closure(move |x, y| {
            let q = PI * y / (2.0 * b);
            1.5 + 0.3 * (2.0 * x).cos() * q.cos() + 0.2 * x.sin() * q.sin() + 0.1 * q.cos()
        });
        let p = isometry_average(&s, &f).unwrap();
        let lhs = field_area(&s, &f);
        let rhs = crate::measure::area(&s, &p).unwrap() + field_distance_sq(&s, &f, &p);
        assert_abs_diff_eq!(lhs, rhs, epsilon = 1e-6);
        let again = isometry_average(&s, &Field2d::Invariant(p.clone())).unwrap();
        assert_eq!(again.eval(0.2), p.eval(0.2));
    }

    #[test]
    fn grid_fields_average_exactly() {
        let s = SurfaceSpec::mobius(0.5).unwrap();
        let (nx, ny) = (16, 9);
        let mut values = Vec::new();
        for j in 0..ny {
            for i in 0..nx {
                let x = PI * i as f64 / nx as f64;
                let y = -0.5 + j as f64 / (ny - 1) as f64;
                values.push(2.0 + (2.0 * x).cos() + 0.1 * y * y);
            }
        }
        let f = Field2d::grid(nx, ny, values).unwrap();
        let p = isometry_average(&s, &f).unwrap();
        assert!((p.eval(0.0) - 2.0).abs() < 1e-12);
        // Bilinear in y between rows: the average of y² at a knot row.
        let y = 0.5 - 1.0 / 8.0;
        assert!((p.eval(y) - (2.0 + 0.1 * y * y)).abs() < 1e-12);
    }

    #[test]
    fn lemma_examples() {
        let n = 200;
        let dz = 1.0 / n as f64;
        let ones = vec![1.0; n];
        let g: Vec<f64> = (0..n).map(|i| (i as f64 * dz * 7.0).sin() + 0.2).collect();
        assert!(decreasing_lemma_check(&ones, &g, dz, 1e-12).holds());
        let h: Vec<f64> = (0..n).map(|i| phi0(i as f64 * dz)).collect();
        let neg: Vec<f64> = (0..n).map(|i| if i < 10 { -1.0 } else { 1.0 }).collect();
        assert!(matches!(
            decreasing_lemma_check(&h, &neg, dz, 1e-12),
            LemmaOutcome::PremiseFailed(_)
        ));
        let inc: Vec<f64> = (0..n).map(|i| 1.0 + i as f64).collect();
        assert!(matches!(
            decreasing_lemma_check(&inc, &g, dz, 1e-12),
            LemmaOutcome::PremiseFailed(_)
        ));
    }

    #[test]
    fn optimal_profiles_have_zero_defect() {
        let grid = GridConfig::default().with_resolution(64, 64);
        for (kind, beta) in [(SurfaceKind::Klein, beta0()), (SurfaceKind::Klein, 0.5), (SurfaceKind::Mobius, 2.0)] {
            let s = SurfaceSpec::new(kind, beta).unwrap();
            let opt = optimal_profile(&s).unwrap();
            let r = defect_report(&s, &opt, &grid).unwrap();
            assert!(r.lhs_defect.abs() < 1e-6, "{r:?}");
            assert!(r.rhs_defect.abs() < 1e-6, "{r:?}");
            let chk = projection_inequality_check(&s, &opt, &grid).unwrap();
            assert!(chk.margin.abs() < 1e-6, "{chk:?}");
        }
    }

    #[test]
    fn variance_matches_residual() {
        let s = SurfaceSpec::mobius(1.0).unwrap();
        let phi = Profile::named(1.0, "p", |y| 1.2 - 0.3 * y + 0.1 * (5.0 * y).sin()).unwrap();
        let r = defect_report_with_systole(&s, &phi, 3.0).unwrap();
        let v = r.variance_form;
        assert_abs_diff_eq!(r.residual_norm_sq, v.area_opt * v.var_h, epsilon = 1e-8);
        assert!(r.bavard_gap.is_none());
        let json = serde_json::to_value(&r).unwrap();
        assert_eq!(json["surface"], "mobius");
        assert!(json["variance_form"]["var_h"].is_number());
    }
}
