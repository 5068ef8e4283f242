//! Quadrature, curve lengths, areas and `L²` products of invariant profiles.

use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::geometry::{check_profile, CurvePolyline, Point, Profile, SurfaceSpec};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EndpointSingularity {
    None,
    /// The integrand may blow up like `(t - a)^{-1/2}` or `(b - t)^{-1/2}`.
    InverseSqrt,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadratureConfig {
    pub abs_tol: f64,
    pub max_subdivisions: usize,
    pub endpoint_singularity: EndpointSingularity,
}

impl QuadratureConfig {
    /// Default for closed-form integrands.
    pub const CLOSED_FORM: QuadratureConfig = QuadratureConfig {
        abs_tol: 1e-10,
        max_subdivisions: 200_000,
        endpoint_singularity: EndpointSingularity::None,
    };

    /// Default when a tabulated profile is involved.
    pub const SAMPLED: QuadratureConfig = QuadratureConfig {
        abs_tol: 1e-8,
        max_subdivisions: 200_000,
        endpoint_singularity: EndpointSingularity::None,
    };

    pub fn new(abs_tol: f64, max_subdivisions: usize) -> Result<Self> {
        if !(abs_tol > 0.0) {
            return Err(Error::Config(format!("abs_tol must be positive, got {abs_tol}")));
        }
        if max_subdivisions == 0 {
            return Err(Error::Config("max_subdivisions must be at least 1".into()));
        }
        Ok(QuadratureConfig {
            abs_tol,
            max_subdivisions,
            endpoint_singularity: EndpointSingularity::None,
        })
    }

    pub fn with_singularity(mut self, s: EndpointSingularity) -> Self {
        self.endpoint_singularity = s;
        self
    }

    pub fn with_tol(mut self, abs_tol: f64) -> Self {
        self.abs_tol = abs_tol;
        self
    }

    /// Picks [`Self::SAMPLED`] when any of the profiles is tabulated.
    pub fn for_profiles(profiles: &[&Profile]) -> Self {
        if profiles.iter().any(|p| p.is_sampled()) {
            Self::SAMPLED
        } else {
            Self::CLOSED_FORM
        }
    }
}

impl Default for QuadratureConfig {
    fn default() -> Self {
        Self::CLOSED_FORM
    }
}

const INITIAL_PANELS: usize = 4;
const MAX_DEPTH: u32 = 60;

struct Panel {
    a: f64,
    b: f64,
    fa: f64,
    fm: f64,
    fb: f64,
    whole: f64,
    tol: f64,
    depth: u32,
}

/// Adaptive Simpson quadrature of `f` over `[a, b]`.
pub fn integrate<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, cfg: &QuadratureConfig) -> f64 {
    if a == b {
        return 0.0;
    }
    if b < a {
        return -integrate(f, b, a, cfg);
    }
    match cfg.endpoint_singularity {
        EndpointSingularity::None => adaptive_simpson(&f, a, b, cfg.abs_tol, cfg.max_subdivisions),
        EndpointSingularity::InverseSqrt => {
            // t = a + (b - a) sin²(u/2) turns (t - a)^{-1/2} and (b - t)^{-1/2}
            // into bounded factors. Very close to the endpoints the integrand
            // loses precision to cancellation, so it is extrapolated linearly.
            let w = b - a;
            let g = |u: f64| {
                let s = (0.5 * u).sin();
                f(a + w * s * s) * 0.5 * w * u.sin()
            };
            let d = 1e-4;
            let g_safe = |u: f64| {
                if u < d {
                    let (g1, g2) = (g(d), g(2.0 * d));
                    g1 + (g1 - g2) * (d - u) / d
                } else if u > PI - d {
                    let (g1, g2) = (g(PI - d), g(PI - 2.0 * d));
                    g1 + (g1 - g2) * (u - (PI - d)) / d
                } else {
                    g(u)
                }
            };
            adaptive_simpson(&g_safe, 0.0, PI, cfg.abs_tol, cfg.max_subdivisions)
        }
    }
}

fn adaptive_simpson<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64, tol: f64, max_sub: usize) -> f64 {
    let h = (b - a) / INITIAL_PANELS as f64;
    let mut stack = Vec::with_capacity(64);
    let mut left = f(a);
    for i in 0..INITIAL_PANELS {
        let pa = a + i as f64 * h;
        let pb = if i + 1 == INITIAL_PANELS { b } else { pa + h };
        let fm = f(0.5 * (pa + pb));
        let fb = f(pb);
        stack.push(Panel {
            a: pa,
            b: pb,
            fa: left,
            fm,
            fb,
            whole: (pb - pa) / 6.0 * (left + 4.0 * fm + fb),
            tol: tol / INITIAL_PANELS as f64,
            depth: 0,
        });
        left = fb;
    }
    let mut total = 0.0;
    let mut comp = 0.0;
    let mut splits = 0usize;
    while let Some(p) = stack.pop() {
        let m = 0.5 * (p.a + p.b);
        let lm = 0.5 * (p.a + m);
        let rm = 0.5 * (m + p.b);
        let flm = f(lm);
        let frm = f(rm);
        let sl = (m - p.a) / 6.0 * (p.fa + 4.0 * flm + p.fm);
        let sr = (p.b - m) / 6.0 * (p.fm + 4.0 * frm + p.fb);
        let delta = sl + sr - p.whole;
        if delta.abs() <= 15.0 * p.tol || p.depth >= MAX_DEPTH || splits >= max_sub {
            // Kahan summation keeps many tiny panels from drifting.
            let y = sl + sr + delta / 15.0 - comp;
            let t = total + y;
            comp = (t - total) - y;
            total = t;
        } else {
            splits += 1;
            stack.push(Panel {
                a: p.a,
                b: m,
                fa: p.fa,
                fm: flm,
                fb: p.fm,
                whole: sl,
                tol: 0.5 * p.tol,
                depth: p.depth + 1,
            });
            stack.push(Panel {
                a: m,
                b: p.b,
                fa: p.fm,
                fm: frm,
                fb: p.fb,
                whole: sr,
                tol: 0.5 * p.tol,
                depth: p.depth + 1,
            });
        }
    }
    total
}

/// Integrates `f` over `[0, β]`, splitting at the union of the profiles' kinks.
pub fn integrate_over_profiles<F: Fn(f64) -> f64>(
    profiles: &[&Profile],
    f: F,
    cfg: &QuadratureConfig,
) -> f64 {
    let beta = profiles[0].beta();
    let mut cuts = vec![0.0, beta];
    for p in profiles {
        cuts.extend(p.breakpoints());
    }
    cuts.sort_by(|a, b| a.total_cmp(b));
    cuts.dedup_by(|a, b| (*a - *b).abs() <= 1e-14 * beta.max(1.0));
    cuts.windows(2)
        .map(|w| {
            let piece_tol = cfg.abs_tol * (w[1] - w[0]) / beta;
            integrate(&f, w[0], w[1], &cfg.with_tol(piece_tol.max(1e-16)))
        })
        .sum()
}

fn same_beta(f: &Profile, h: &Profile) -> Result<()> {
    if (f.beta() - h.beta()).abs() > 1e-12 * f.beta().max(1.0) {
        return Err(Error::BetaMismatch {
            profile: h.beta(),
            surface: f.beta(),
        });
    }
    Ok(())
}

/// `(f, h)_{L²}` of the invariant extensions over the flat surface.
pub fn l2_inner(surface: &SurfaceSpec, f: &Profile, h: &Profile) -> Result<f64> {
    l2_inner_with(surface, f, h, &QuadratureConfig::for_profiles(&[f, h]))
}

pub fn l2_inner_with(
    surface: &SurfaceSpec,
    f: &Profile,
    h: &Profile,
    cfg: &QuadratureConfig,
) -> Result<f64> {
    check_profile(surface, f)?;
    same_beta(f, h)?;
    let integral = integrate_over_profiles(&[f, h], |y| f.eval(y) * h.eval(y), cfg);
    Ok(surface.l2_weight() * integral)
}

/// Riemannian area of `φ²·g_flat`, i.e. `‖φ‖²_{L²}`.
pub fn area(surface: &SurfaceSpec, profile: &Profile) -> Result<f64> {
    l2_inner(surface, profile, profile)
}

/// Length of a lifted polyline under `φ²·g_flat`.
pub fn curve_length(surface: &SurfaceSpec, profile: &Profile, curve: &CurvePolyline) -> Result<f64> {
    curve_length_with(
        surface,
        profile,
        curve,
        &QuadratureConfig::for_profiles(&[profile]),
    )
}

pub fn curve_length_with(
    surface: &SurfaceSpec,
    profile: &Profile,
    curve: &CurvePolyline,
    cfg: &QuadratureConfig,
) -> Result<f64> {
    check_profile(surface, profile)?;
    let kinks = profile.breakpoints();
    let mut total = 0.0;
    let mut euclid = 0.0;
    for w in curve.vertices().windows(2) {
        let l = segment_length(surface, profile, &kinks, w[0], w[1], cfg);
        total += l;
        euclid += w[0].dist(&w[1]);
    }
    if !(euclid > 0.0) {
        return Err(Error::InvalidCurve("curve has zero length".into()));
    }
    Ok(total)
}

fn segment_length(
    surface: &SurfaceSpec,
    profile: &Profile,
    kinks: &[f64],
    p: Point,
    q: Point,
    cfg: &QuadratureConfig,
) -> f64 {
    let len = p.dist(&q);
    if len == 0.0 {
        return 0.0;
    }
    let dy = q.y - p.y;
    let mut ts = vec![0.0, 1.0];
    if dy != 0.0 {
        let (lo, hi) = if dy > 0.0 { (p.y, q.y) } else { (q.y, p.y) };
        ts.extend(
            surface
                .kink_ordinates(kinks, lo, hi)
                .into_iter()
                .map(|y| (y - p.y) / dy),
        );
        ts.sort_by(|a, b| a.total_cmp(b));
    }
    let phi = |t: f64| profile.eval(surface.fold_y(p.y + t * dy));
    ts.windows(2)
        .filter(|w| w[1] > w[0])
        .map(|w| {
            let tol = (cfg.abs_tol * (w[1] - w[0])).max(1e-16);
            len * integrate(phi, w[0], w[1], &cfg.with_tol(tol))
        })
        .sum()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::DeckWord;
    use crate::optimal::{self, beta0, beta1, phi0};
    use approx::assert_abs_diff_eq;
    use proptest::prelude::*;

    #[test]
    fn simpson_basics() {
        let cfg = QuadratureConfig::CLOSED_FORM;
        assert_abs_diff_eq!(integrate(|x| x.sin(), 0.0, PI, &cfg), 2.0, epsilon = 1e-10);
        assert_abs_diff_eq!(integrate(|x| x.exp(), 1.0, 0.0, &cfg), 1.0 - 1f64.exp(), epsilon = 1e-10);
        assert_abs_diff_eq!(integrate(|x| (x - 0.3).abs(), 0.0, 1.0, &cfg), 0.29, epsilon = 1e-10);
    }

    #[test]
    fn inverse_sqrt_endpoints() {
        let cfg = QuadratureConfig::CLOSED_FORM.with_singularity(EndpointSingularity::InverseSqrt);
        assert_abs_diff_eq!(integrate(|t| 1.0 / t.sqrt(), 0.0, 1.0, &cfg), 2.0, epsilon = 1e-7);
        assert_abs_diff_eq!(
            integrate(|t| 1.0 / (1.0 - t * t).sqrt(), -1.0, 1.0, &cfg),
            PI,
            epsilon = 1e-7
        );
    }

    #[test]
    fn l2_examples() {
        for beta in [0.3, 0.7, 1.0, 2.5] {
            let m = SurfaceSpec::mobius(beta).unwrap();
            let p0 = Profile::phi0(beta).unwrap();
            assert_abs_diff_eq!(
                l2_inner(&m, &p0, &p0).unwrap(),
                2.0 * PI * beta.tanh(),
                epsilon = 1e-9
            );
            let k = SurfaceSpec::klein(beta).unwrap();
            let one = Profile::flat(beta, 1.0).unwrap();
            assert_abs_diff_eq!(l2_inner(&k, &one, &one).unwrap(), 4.0 * PI * beta, epsilon = 1e-9);
            assert_abs_diff_eq!(area(&m, &one).unwrap(), 2.0 * PI * beta, epsilon = 1e-9);
        }
        let b0 = beta0();
        let m = SurfaceSpec::mobius(b0).unwrap();
        let v = l2_inner(
            &m,
            &Profile::phi0(b0).unwrap(),
            &Profile::flat(b0, 1.0).unwrap(),
        )
        .unwrap();
        assert_abs_diff_eq!(v, 2.0 * PI * PI / 4.0, epsilon = 1e-9);
    }

    #[test]
    fn optimal_areas() {
        let beta = 1.1;
        let m = SurfaceSpec::mobius(beta).unwrap();
        let a = area(&m, &optimal::mobius_optimal(beta).unwrap()).unwrap();
        assert_abs_diff_eq!(a, 2.0 * PI * beta.tanh(), epsilon = 1e-9);
        let k = SurfaceSpec::klein(beta).unwrap();
        let a = area(&k, &optimal::klein_optimal(beta).unwrap()).unwrap();
        assert_abs_diff_eq!(a, 4.0 * PI * beta.tanh(), epsilon = 1e-9);
        assert!(beta0() < beta && beta < beta1());
    }

    #[test]
    fn mismatched_beta_is_rejected() {
        let m = SurfaceSpec::mobius(1.0).unwrap();
        let f = Profile::phi0(1.0).unwrap();
        let h = Profile::phi0(1.5).unwrap();
        assert!(matches!(l2_inner(&m, &f, &h), Err(Error::BetaMismatch { .. })));
    }

    #[test]
    fn lengths_of_simple_curves() {
        let beta = 0.9;
        let tau = 0.4;
        let m = SurfaceSpec::mobius(beta).unwrap();
        // λ_τ: double horizontal wrap at height τ.
        let lam = CurvePolyline::new(
            &m,
            vec![Point::new(0.0, tau), Point::new(2.0 * PI, tau)],
            DeckWord::new(2, 0),
        )
        .unwrap();
        let l = curve_length(&m, &Profile::phi0(beta).unwrap(), &lam).unwrap();
        assert_abs_diff_eq!(l, 2.0 * PI * phi0(tau), epsilon = 1e-9);

        let k = SurfaceSpec::klein(beta).unwrap();
        let v = CurvePolyline::new(
            &k,
            vec![Point::new(0.0, -2.0 * beta), Point::new(0.0, 2.0 * beta)],
            DeckWord::new(0, 1),
        )
        .unwrap();
        let l = curve_length(&k, &Profile::flat(beta, 1.0).unwrap(), &v).unwrap();
        assert_abs_diff_eq!(l, 4.0 * beta, epsilon = 1e-12);
        // Vertical loop under φ₀ crosses every fold line.
        let l = curve_length(&k, &Profile::phi0(beta).unwrap(), &v).unwrap();
        assert_abs_diff_eq!(l, 4.0 * beta.sinh().atan(), epsilon = 1e-9);
    }

    fn arb_profile(beta: f64) -> impl Strategy<Value = Profile> {
        (0.1..2.0f64, -0.8..0.8f64, 0.5..4.0f64).prop_map(move |(c, a, w)| {
            Profile::named(beta, "osc", move |y| c * (1.0 + 0.9 * a * (w * y).cos())).unwrap()
        })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(32))]

        #[test]
        fn area_scales_quadratically(p in arb_profile(0.8), c in 0.1..5.0f64) {
            let s = SurfaceSpec::klein(0.8).unwrap();
            let a = area(&s, &p).unwrap();
            let ac = area(&s, &p.scaled(c)).unwrap();
            prop_assert!((ac - c * c * a).abs() <= 1e-8 * ac.max(1.0));
        }

        #[test]
        fn length_scales_linearly(p in arb_profile(0.8), c in 0.1..5.0f64, y0 in -0.7..0.7f64) {
            let s = SurfaceSpec::mobius(0.8).unwrap();
            let curve = CurvePolyline::new(
                &s,
                vec![Point::new(0.0, y0), Point::new(1.3, 0.2), Point::new(PI, -y0)],
                DeckWord::new(1, 0),
            ).unwrap();
            let l = curve_length(&s, &p, &curve).unwrap();
            let lc = curve_length(&s, &p.scaled(c), &curve).unwrap();
            prop_assert!((lc - c * l).abs() <= 1e-8 * lc.max(1.0));
        }

        #[test]
        fn inner_product_symmetric_bilinear_cauchy_schwarz(f in arb_profile(1.2), h in arb_profile(1.2),
                                                          a in 0.1..3.0f64) {
            let s = SurfaceSpec::mobius(1.2).unwrap();
            let fh = l2_inner(&s, &f, &h).unwrap();
            let hf = l2_inner(&s, &h, &f).unwrap();
            prop_assert!((fh - hf).abs() < 1e-8);
            let afh = l2_inner(&s, &f.scaled(a), &h).unwrap();
            prop_assert!((afh - a * fh).abs() < 1e-7 * afh.abs().max(1.0));
            let ff = l2_inner(&s, &f, &f).unwrap();
            let hh = l2_inner(&s, &h, &h).unwrap();
            prop_assert!(fh * fh <= ff * hh + 1e-8);
        }
    }
}
