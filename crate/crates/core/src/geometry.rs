//! Quotient surfaces, their deck groups and invariant conformal profiles.
//!
//! Fundamental domains are fixed as `[0, π] × [-β, β]` for the Möbius strip
//! and `[0, π] × [-2β, 2β]` for the Klein bottle.

use std::f64::consts::PI;
use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::optimal::{self, CaseTag};

/// Tolerance used when checking that a lifted polyline closes up.
pub const CLOSURE_TOL: f64 = 1e-9;

/// Default number of samples used when a profile is tabulated on `[0, β]`.
pub const DEFAULT_SAMPLES: usize = 2048;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SurfaceKind {
    Mobius,
    Klein,
}

impl SurfaceKind {
    pub fn name(self) -> &'static str {
        match self {
            SurfaceKind::Mobius => "mobius",
            SurfaceKind::Klein => "klein",
        }
    }
}

impl fmt::Display for SurfaceKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl std::str::FromStr for SurfaceKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "mobius" | "möbius" => Ok(SurfaceKind::Mobius),
            "klein" => Ok(SurfaceKind::Klein),
            other => Err(Error::Config(format!("unknown surface '{other}'"))),
        }
    }
}

/// A flat quotient surface of width parameter `beta`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SurfaceSpec {
    pub kind: SurfaceKind,
    pub beta: f64,
}

impl SurfaceSpec {
    pub fn new(kind: SurfaceKind, beta: f64) -> Result<Self> {
        if !(beta > 0.0) || !beta.is_finite() {
            return Err(Error::InvalidBeta(beta));
        }
        Ok(SurfaceSpec { kind, beta })
    }

    pub fn mobius(beta: f64) -> Result<Self> {
        Self::new(SurfaceKind::Mobius, beta)
    }

    pub fn klein(beta: f64) -> Result<Self> {
        Self::new(SurfaceKind::Klein, beta)
    }

    /// Half-height of the fundamental domain: `β` (Möbius) or `2β` (Klein).
    pub fn half_height(&self) -> f64 {
        match self.kind {
            SurfaceKind::Mobius => self.beta,
            SurfaceKind::Klein => 2.0 * self.beta,
        }
    }

    /// Euclidean area of the fundamental domain.
    pub fn flat_area(&self) -> f64 {
        2.0 * PI * self.half_height()
    }

    /// Factor `w` with `(f, h)_{L²} = w ∫₀^β f h dy` for invariant functions.
    pub fn l2_weight(&self) -> f64 {
        match self.kind {
            SurfaceKind::Mobius => 2.0 * PI,
            SurfaceKind::Klein => 4.0 * PI,
        }
    }

    /// Maps a plane ordinate to `[0, β]` using the invariances of admitted
    /// conformal factors. On the Möbius strip ordinates are clamped to the
    /// strip first.
    pub fn fold_y(&self, y: f64) -> f64 {
        let b = self.beta;
        match self.kind {
            SurfaceKind::Mobius => y.abs().min(b),
            SurfaceKind::Klein => {
                let r = (y + 2.0 * b).rem_euclid(4.0 * b) - 2.0 * b;
                let a = r.abs();
                if a > b {
                    (2.0 * b - a).max(0.0)
                } else {
                    a
                }
            }
        }
    }

    /// Ordinates at which the folded factor may fail to be smooth, given the
    /// profile's own interior kinks, restricted to `[lo, hi]` and sorted.
    pub(crate) fn kink_ordinates(&self, profile_kinks: &[f64], lo: f64, hi: f64) -> Vec<f64> {
        let b = self.beta;
        let mut out = Vec::new();
        match self.kind {
            SurfaceKind::Mobius => {
                for &c in std::iter::once(&0.0).chain(profile_kinks) {
                    for y in [c, -c] {
                        if y > lo && y < hi {
                            out.push(y);
                        }
                    }
                }
            }
            SurfaceKind::Klein => {
                // Folding reflects at every multiple of β.
                let j0 = (lo / b).floor() as i64;
                let j1 = (hi / b).ceil() as i64;
                for j in j0..=j1 {
                    let base = j as f64 * b;
                    if base > lo && base < hi {
                        out.push(base);
                    }
                    if j % 2 == 0 {
                        for &c in profile_kinks {
                            for y in [base + c, base - c] {
                                if y > lo && y < hi {
                                    out.push(y);
                                }
                            }
                        }
                    }
                }
            }
        }
        out.sort_by(|a, b| a.total_cmp(b));
        out.dedup_by(|a, b| (*a - *b).abs() < 1e-15);
        out
    }
}

/// A point of the universal cover (the plane, or the strip for `M_β`).
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct Point {
    pub x: f64,
    pub y: f64,
}

impl Point {
    pub const fn new(x: f64, y: f64) -> Self {
        Point { x, y }
    }

    pub fn dist(&self, other: &Point) -> f64 {
        (self.x - other.x).hypot(self.y - other.y)
    }
}

/// Deck transformation `A^k B^m`, acting by `(x, y) ↦ (x + kπ, (-1)^k y + 4βm)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
pub struct DeckWord {
    pub k: i64,
    pub m: i64,
}

impl DeckWord {
    pub const IDENTITY: DeckWord = DeckWord { k: 0, m: 0 };

    pub const fn new(k: i64, m: i64) -> Self {
        DeckWord { k, m }
    }

    pub fn is_identity(&self) -> bool {
        self.k == 0 && self.m == 0
    }

    fn sign(k: i64) -> i64 {
        if k.rem_euclid(2) == 0 {
            1
        } else {
            -1
        }
    }

    /// The word acting as `self` followed by `then`.
    pub fn then(self, then: DeckWord) -> DeckWord {
        DeckWord {
            k: self.k + then.k,
            m: then.m + Self::sign(then.k) * self.m,
        }
    }

    pub fn inverse(self) -> DeckWord {
        DeckWord {
            k: -self.k,
            m: -Self::sign(self.k) * self.m,
        }
    }

    pub(crate) fn act(&self, beta: f64, p: Point) -> Point {
        Point {
            x: p.x + self.k as f64 * PI,
            y: Self::sign(self.k) as f64 * p.y + 4.0 * beta * self.m as f64,
        }
    }
}

impl fmt::Display for DeckWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.k, self.m)
    }
}

pub fn deck_apply(surface: &SurfaceSpec, word: DeckWord, point: Point) -> Result<Point> {
    check_word(surface, word)?;
    Ok(word.act(surface.beta, point))
}

pub(crate) fn check_word(surface: &SurfaceSpec, word: DeckWord) -> Result<()> {
    if surface.kind == SurfaceKind::Mobius && word.m != 0 {
        return Err(Error::InvalidWord {
            k: word.k,
            m: word.m,
            reason: "the Möbius strip has no vertical generator",
        });
    }
    Ok(())
}

/// Closed-form or tabulated shape of a profile.
#[derive(Clone)]
pub enum ProfileShape {
    Flat(f64),
    Phi0,
    MobiusOptimal,
    KleinOptimal { case: CaseTag, s_beta: Option<f64> },
    Named {
        name: String,
        f: Arc<dyn Fn(f64) -> f64 + Send + Sync>,
    },
    Sampled { ys: Vec<f64>, values: Vec<f64> },
}

impl fmt::Debug for ProfileShape {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ProfileShape::Flat(c) => write!(f, "Flat({c})"),
            ProfileShape::Phi0 => f.write_str("Phi0"),
            ProfileShape::MobiusOptimal => f.write_str("MobiusOptimal"),
            ProfileShape::KleinOptimal { case, s_beta } => {
                write!(f, "KleinOptimal({case:?}, s_beta={s_beta:?})")
            }
            ProfileShape::Named { name, .. } => write!(f, "Named({name})"),
            ProfileShape::Sampled { ys, .. } => write!(f, "Sampled({} knots)", ys.len()),
        }
    }
}

/// A positive conformal factor stored on `[0, β]`, extended to the surface by
/// its invariances. Constant in `x`.
#[derive(Debug, Clone)]
pub struct Profile {
    beta: f64,
    shape: ProfileShape,
    scale: f64,
}

impl Profile {
    pub(crate) fn from_shape(beta: f64, shape: ProfileShape) -> Result<Self> {
        if !(beta > 0.0) || !beta.is_finite() {
            return Err(Error::InvalidBeta(beta));
        }
        Ok(Profile {
            beta,
            shape,
            scale: 1.0,
        })
    }

    pub fn flat(beta: f64, c: f64) -> Result<Self> {
        if !(c > 0.0) || !c.is_finite() {
            return Err(Error::InvalidProfile(format!("constant {c} is not positive")));
        }
        Self::from_shape(beta, ProfileShape::Flat(c))
    }

    /// Pu's factor `φ₀` restricted to `[0, β]`.
    pub fn phi0(beta: f64) -> Result<Self> {
        Self::from_shape(beta, ProfileShape::Phi0)
    }

    /// A profile given by an arbitrary positive function of `y ∈ [0, β]`.
    pub fn named<F>(beta: f64, name: impl Into<String>, f: F) -> Result<Self>
    where
        F: Fn(f64) -> f64 + Send + Sync + 'static,
    {
        Self::from_shape(
            beta,
            ProfileShape::Named {
                name: name.into(),
                f: Arc::new(f),
            },
        )
    }

    /// Piecewise-linear profile through `(ys[i], values[i])`. The knots must be
    /// strictly increasing from `0` to `beta` and the values positive.
    pub fn sampled(beta: f64, ys: Vec<f64>, values: Vec<f64>) -> Result<Self> {
        if ys.len() != values.len() {
            return Err(Error::InvalidProfile("knot and value counts differ".into()));
        }
        if ys.len() < 2 {
            return Err(Error::InvalidProfile("need at least two knots".into()));
        }
        if ys.windows(2).any(|w| !(w[1] > w[0])) {
            return Err(Error::InvalidProfile("knots are not strictly increasing".into()));
        }
        if let Some(v) = values.iter().find(|v| !(**v > 0.0) || !v.is_finite()) {
            return Err(Error::InvalidProfile(format!("value {v} is not positive")));
        }
        let tol = 1e-9 * beta.max(1.0);
        if ys[0].abs() > tol || (ys[ys.len() - 1] - beta).abs() > tol {
            return Err(Error::InvalidProfile(format!(
                "knots must span [0, {beta}], got [{}, {}]",
                ys[0],
                ys[ys.len() - 1]
            )));
        }
        Self::from_shape(beta, ProfileShape::Sampled { ys, values })
    }

    /// Tabulates any profile on `n` uniform knots.
    pub fn tabulate(&self, n: usize) -> Result<Profile> {
        let n = n.max(2);
        let ys: Vec<f64> = (0..n)
            .map(|i| self.beta * i as f64 / (n - 1) as f64)
            .collect();
        let values = ys.iter().map(|&y| self.eval(y)).collect();
        Profile::sampled(self.beta, ys, values)
    }

    pub fn beta(&self) -> f64 {
        self.beta
    }

    pub fn shape(&self) -> &ProfileShape {
        &self.shape
    }

    pub fn scale(&self) -> f64 {
        self.scale
    }

    pub fn is_sampled(&self) -> bool {
        matches!(self.shape, ProfileShape::Sampled { .. })
    }

    /// `c·φ`; `c` must be positive.
    pub fn scaled(&self, c: f64) -> Profile {
        assert!(c > 0.0 && c.is_finite(), "scale factor must be positive");
        Profile {
            beta: self.beta,
            shape: self.shape.clone(),
            scale: self.scale * c,
        }
    }

    /// Value at `y`, clamped to `[0, β]`.
    pub fn eval(&self, y: f64) -> f64 {
        let y = y.clamp(0.0, self.beta);
        self.scale * self.eval_shape(y)
    }

    fn eval_shape(&self, y: f64) -> f64 {
        match &self.shape {
            ProfileShape::Flat(c) => *c,
            ProfileShape::Phi0 => optimal::phi0(y),
            ProfileShape::MobiusOptimal => optimal::phi0(y.min(optimal::beta1())),
            ProfileShape::KleinOptimal { case, s_beta } => match case {
                CaseTag::Thin => PI / (4.0 * self.beta),
                CaseTag::RoundFlatThin => optimal::phi0(y.min(s_beta.unwrap_or(self.beta))),
                CaseTag::Round => optimal::phi0(y),
                _ => optimal::phi0(y.min(optimal::beta1())),
            },
            ProfileShape::Named { f, .. } => f(y),
            ProfileShape::Sampled { ys, values } => interp_linear(ys, values, y),
        }
    }

    /// Interior points of `(0, β)` where the profile may have a kink.
    pub fn breakpoints(&self) -> Vec<f64> {
        let inside = |t: f64| t > 0.0 && t < self.beta;
        match &self.shape {
            ProfileShape::Flat(_) | ProfileShape::Phi0 | ProfileShape::Named { .. } => Vec::new(),
            ProfileShape::MobiusOptimal => {
                let b1 = optimal::beta1();
                if inside(b1) {
                    vec![b1]
                } else {
                    Vec::new()
                }
            }
            ProfileShape::KleinOptimal { case, s_beta } => match case {
                CaseTag::RoundFlatThin => s_beta.iter().copied().filter(|s| inside(*s)).collect(),
                CaseTag::RoundFlatThick => {
                    let b1 = optimal::beta1();
                    if inside(b1) {
                        vec![b1]
                    } else {
                        Vec::new()
                    }
                }
                _ => Vec::new(),
            },
            ProfileShape::Sampled { ys, .. } => ys[1..ys.len() - 1].to_vec(),
        }
    }

    /// Lower bound for the profile on `[0, β]` (exact for every shape except
    /// `Named`, where it is the minimum over a dense sample).
    pub fn min_value(&self) -> f64 {
        let raw = match &self.shape {
            ProfileShape::Flat(c) => *c,
            ProfileShape::Sampled { values, .. } => {
                values.iter().copied().fold(f64::INFINITY, f64::min)
            }
            ProfileShape::Named { .. } => (0..=DEFAULT_SAMPLES)
                .map(|i| self.eval_shape(self.beta * i as f64 / DEFAULT_SAMPLES as f64))
                .fold(f64::INFINITY, f64::min),
            // The remaining closed forms are non-increasing in y.
            _ => self.eval_shape(self.beta),
        };
        raw * self.scale
    }

    /// Rejects profiles that are nonpositive anywhere on a dense sample.
    pub fn validate_positive(&self) -> Result<()> {
        let n = DEFAULT_SAMPLES;
        for i in 0..=n {
            let y = self.beta * i as f64 / n as f64;
            let v = self.eval(y);
            if !(v > 0.0) || !v.is_finite() {
                return Err(Error::InvalidProfile(format!("value {v} at y = {y}")));
            }
        }
        Ok(())
    }
}

fn interp_linear(ys: &[f64], values: &[f64], y: f64) -> f64 {
    let n = ys.len();
    if y <= ys[0] {
        return values[0];
    }
    if y >= ys[n - 1] {
        return values[n - 1];
    }
    let i = ys.partition_point(|&t| t <= y).clamp(1, n - 1);
    let (y0, y1) = (ys[i - 1], ys[i]);
    let t = (y - y0) / (y1 - y0);
    values[i - 1] + t * (values[i] - values[i - 1])
}

/// Value of the invariant conformal factor at a point of the universal cover.
pub fn profile_eval(surface: &SurfaceSpec, profile: &Profile, point: Point) -> f64 {
    debug_assert!((profile.beta - surface.beta).abs() <= 1e-12 * surface.beta.max(1.0));
    profile.eval(surface.fold_y(point.y))
}

pub(crate) fn check_profile(surface: &SurfaceSpec, profile: &Profile) -> Result<()> {
    if (profile.beta - surface.beta).abs() > 1e-12 * surface.beta.max(1.0) {
        return Err(Error::BetaMismatch {
            profile: profile.beta,
            surface: surface.beta,
        });
    }
    Ok(())
}

/// A closed curve, given by a lift to the universal cover whose last vertex is
/// the image of the first under `word`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CurvePolyline {
    vertices: Vec<Point>,
    word: DeckWord,
}

impl CurvePolyline {
    pub fn new(surface: &SurfaceSpec, vertices: Vec<Point>, word: DeckWord) -> Result<Self> {
        check_word(surface, word)?;
        if vertices.len() < 2 {
            return Err(Error::InvalidCurve("need at least two vertices".into()));
        }
        if vertices.iter().any(|p| !p.x.is_finite() || !p.y.is_finite()) {
            return Err(Error::InvalidCurve("non-finite vertex".into()));
        }
        if let Some(i) = vertices.windows(2).position(|w| w[0] == w[1]) {
            return Err(Error::InvalidCurve(format!(
                "vertices {i} and {} coincide",
                i + 1
            )));
        }
        let first = vertices[0];
        let last = vertices[vertices.len() - 1];
        let image = word.act(surface.beta, first);
        if image.dist(&last) > CLOSURE_TOL {
            return Err(Error::InvalidCurve(format!(
                "not closed under {word}: last vertex ({}, {}) vs image ({}, {})",
                last.x, last.y, image.x, image.y
            )));
        }
        Ok(CurvePolyline { vertices, word })
    }

    pub fn vertices(&self) -> &[Point] {
        &self.vertices
    }

    pub fn word(&self) -> DeckWord {
        self.word
    }

    /// Lower and upper ordinate of the lift.
    pub fn y_range(&self) -> (f64, f64) {
        self.vertices
            .iter()
            .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), p| {
                (lo.min(p.y), hi.max(p.y))
            })
    }

    /// Same curve with `x ↦ -x`; the word becomes `(-k, m)`.
    pub(crate) fn mirrored_x(&self) -> CurvePolyline {
        CurvePolyline {
            vertices: self
                .vertices
                .iter()
                .map(|p| Point::new(-p.x, p.y))
                .collect(),
            word: DeckWord::new(-self.word.k, self.word.m),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CurveClass {
    Vertical,
    Horizontal,
}

/// A Klein-bottle curve is vertical when its lift sweeps an ordinate interval
/// of length at least `4β`.
pub fn classify_curve(surface: &SurfaceSpec, curve: &CurvePolyline) -> Result<CurveClass> {
    if surface.kind != SurfaceKind::Klein {
        return Err(Error::UnsupportedSurface("mobius"));
    }
    let (lo, hi) = curve.y_range();
    if hi - lo >= 4.0 * surface.beta - CLOSURE_TOL {
        Ok(CurveClass::Vertical)
    } else {
        Ok(CurveClass::Horizontal)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use proptest::prelude::*;

    #[test]
    fn deck_apply_examples() {
        let m = SurfaceSpec::mobius(0.7).unwrap();
        let k = SurfaceSpec::klein(0.7).unwrap();
        let p = deck_apply(&m, DeckWord::new(1, 0), Point::new(0.0, 0.3)).unwrap();
        assert_abs_diff_eq!(p.x, PI);
        assert_abs_diff_eq!(p.y, -0.3);
        let p = deck_apply(&m, DeckWord::new(2, 0), Point::new(0.4, 0.3)).unwrap();
        assert_abs_diff_eq!(p.x, 0.4 + 2.0 * PI);
        assert_abs_diff_eq!(p.y, 0.3);
        let p = deck_apply(&k, DeckWord::new(0, 1), Point::new(0.4, 0.3)).unwrap();
        assert_abs_diff_eq!(p.x, 0.4);
        assert_abs_diff_eq!(p.y, 0.3 + 2.8, epsilon = 1e-15);
        assert!(matches!(
            deck_apply(&m, DeckWord::new(0, 1), Point::default()),
            Err(Error::InvalidWord { .. })
        ));
    }

    #[test]
    fn profile_eval_examples() {
        let s = SurfaceSpec::mobius(1.0).unwrap();
        let p = Profile::phi0(1.0).unwrap();
        assert_abs_diff_eq!(profile_eval(&s, &p, Point::new(3.7, 0.0)), 1.0);
        assert_eq!(
            profile_eval(&s, &p, Point::new(1.0, -0.4)),
            profile_eval(&s, &p, Point::new(1.0, 0.4))
        );
        let k = SurfaceSpec::klein(0.5).unwrap();
        let opt = crate::optimal::klein_optimal(0.5).unwrap();
        for y in [-3.0, -0.2, 0.0, 0.49, 1.7, 12.0] {
            assert_abs_diff_eq!(profile_eval(&k, &opt, Point::new(y, y)), PI / 2.0);
        }
    }

    #[test]
    fn klein_fold_is_triangle_wave() {
        let s = SurfaceSpec::klein(1.0).unwrap();
        assert_abs_diff_eq!(s.fold_y(1.5), 0.5);
        assert_abs_diff_eq!(s.fold_y(-1.5), 0.5);
        assert_abs_diff_eq!(s.fold_y(2.0), 0.0);
        assert_abs_diff_eq!(s.fold_y(3.25), 0.75);
        assert_abs_diff_eq!(s.fold_y(4.25), 0.25);
    }

    #[test]
    fn classify_examples() {
        let b = 0.6;
        let s = SurfaceSpec::klein(b).unwrap();
        let v = CurvePolyline::new(
            &s,
            vec![Point::new(0.0, -2.0 * b), Point::new(0.0, 2.0 * b)],
            DeckWord::new(0, 1),
        )
        .unwrap();
        assert_eq!(classify_curve(&s, &v).unwrap(), CurveClass::Vertical);
        let h = CurvePolyline::new(
            &s,
            vec![Point::new(0.0, 0.0), Point::new(PI, 0.0)],
            DeckWord::new(1, 0),
        )
        .unwrap();
        assert_eq!(classify_curve(&s, &h).unwrap(), CurveClass::Horizontal);
        // y-range 3β, closes under A.
        let osc = CurvePolyline::new(
            &s,
            vec![
                Point::new(0.0, 0.0),
                Point::new(1.0, 1.5 * b),
                Point::new(2.0, -1.5 * b),
                Point::new(PI, 0.0),
            ],
            DeckWord::new(1, 0),
        )
        .unwrap();
        assert_eq!(classify_curve(&s, &osc).unwrap(), CurveClass::Horizontal);
        let m = SurfaceSpec::mobius(b).unwrap();
        let hm = CurvePolyline::new(&m, h.vertices().to_vec(), h.word()).unwrap();
        assert!(matches!(
            classify_curve(&m, &hm),
            Err(Error::UnsupportedSurface(_))
        ));
    }

    #[test]
    fn curve_rejects_open_or_degenerate() {
        let s = SurfaceSpec::klein(0.5).unwrap();
        assert!(CurvePolyline::new(
            &s,
            vec![Point::new(0.0, 0.1), Point::new(PI, 0.1)],
            DeckWord::new(1, 0)
        )
        .is_err());
        assert!(CurvePolyline::new(&s, vec![Point::new(0.0, 0.0)], DeckWord::new(1, 0)).is_err());
        assert!(CurvePolyline::new(
            &s,
            vec![Point::new(0.0, 0.0), Point::new(0.0, 0.0), Point::new(PI, 0.0)],
            DeckWord::new(1, 0)
        )
        .is_err());
    }

    #[test]
    fn sampled_profile_validation() {
        assert!(Profile::sampled(1.0, vec![0.0, 0.5, 1.0], vec![1.0, 2.0, 1.0]).is_ok());
        assert!(Profile::sampled(1.0, vec![0.0, 0.6, 0.5, 1.0], vec![1.0; 4]).is_err());
        assert!(Profile::sampled(1.0, vec![0.0, 1.0], vec![1.0, 0.0]).is_err());
        assert!(Profile::sampled(1.0, vec![0.0, 0.9], vec![1.0, 1.0]).is_err());
        let p = Profile::sampled(1.0, vec![0.0, 0.5, 1.0], vec![1.0, 2.0, 1.0]).unwrap();
        assert_abs_diff_eq!(p.eval(0.25), 1.5);
        assert_eq!(p.breakpoints(), vec![0.5]);
    }

    fn arb_word() -> impl Strategy<Value = DeckWord> {
        (-5i64..=5, -3i64..=3).prop_map(|(k, m)| DeckWord::new(k, m))
    }

    proptest! {
        #[test]
        fn group_law_matches_composition(w1 in arb_word(), w2 in arb_word(),
                                         x in -5.0..5.0f64, y in -5.0..5.0f64) {
            let beta = 0.8;
            let p = Point::new(x, y);
            let seq = w2.act(beta, w1.act(beta, p));
            let comp = w1.then(w2).act(beta, p);
            prop_assert!(seq.dist(&comp) < 1e-12);
            let back = w1.inverse().act(beta, w1.act(beta, p));
            prop_assert!(back.dist(&p) < 1e-12);
        }

        #[test]
        fn klein_profile_invariant_under_isometries(w in arb_word(), x in -5.0..5.0f64,
                                                    y in -5.0..5.0f64, h in -3.0..3.0f64) {
            let beta = 0.9;
            let s = SurfaceSpec::klein(beta).unwrap();
            let prof = Profile::named(beta, "bump", |t| 1.0 + t * t - 0.3 * t).unwrap();
            let p = Point::new(x, y);
            let v = profile_eval(&s, &prof, p);
            let images = [
                w.act(beta, p),
                Point::new(x, -y),
                Point::new(x, y + 2.0 * beta),
                Point::new(x + h, y),
            ];
            for q in images {
                prop_assert!((profile_eval(&s, &prof, q) - v).abs() < 1e-12);
            }
        }

        #[test]
        fn classification_ignores_vertex_insertion(t in 0.05..0.95f64, amp in 0.0..3.0f64) {
            let b = 0.5;
            let s = SurfaceSpec::klein(b).unwrap();
            let base = vec![Point::new(0.0, 0.0), Point::new(1.5, amp * b), Point::new(PI, 0.0)];
            let c1 = CurvePolyline::new(&s, base.clone(), DeckWord::new(1, 0)).unwrap();
            let mut refined = base.clone();
            let a = base[0];
            let bpt = base[1];
            refined.insert(1, Point::new(a.x + t * (bpt.x - a.x), a.y + t * (bpt.y - a.y)));
            let c2 = CurvePolyline::new(&s, refined, DeckWord::new(1, 0)).unwrap();
            prop_assert_eq!(classify_curve(&s, &c1).unwrap(), classify_curve(&s, &c2).unwrap());
        }
    }
}
