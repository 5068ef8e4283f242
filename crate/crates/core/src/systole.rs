//! Systole estimates by shortest paths on a grid in the universal cover.
//!
//! Admitted factors do not depend on `x`, so geodesics never reverse their
//! horizontal direction (Clairaut). The graph search is therefore a sweep over
//! grid columns in increasing `x`, with vertical moves closed up inside each
//! column. One sweep from every seam row gives the transfer matrix across one
//! fundamental domain, and min-plus powers of it give every word `(k, 0)`.
//!
//! On the Klein bottle the fold `y ↦ R(y)` onto `|y| ≤ β` preserves lengths of
//! invariant metrics and sends a curve of class `(k, m)` to a strip curve of
//! class `k`, so for `k ≠ 0` the words `(k, 0)` already realize the minimum.
//! Vertical words `(0, m)` are minimized by straight vertical segments.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::{check_profile, check_word, CurvePolyline, DeckWord, Point, Profile, SurfaceKind, SurfaceSpec};
use crate::measure::{curve_length, integrate_over_profiles, QuadratureConfig};

/// Neighbourhood used for grid edges.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Stencil {
    #[serde(rename = "8")]
    Eight,
    #[serde(rename = "16")]
    Sixteen,
    #[serde(rename = "32")]
    ThirtyTwo,
}

impl Stencil {
    pub fn directions(self) -> usize {
        match self {
            Stencil::Eight => 8,
            Stencil::Sixteen => 16,
            Stencil::ThirtyTwo => 32,
        }
    }

    pub fn from_directions(n: usize) -> Result<Self> {
        match n {
            8 => Ok(Stencil::Eight),
            16 => Ok(Stencil::Sixteen),
            32 => Ok(Stencil::ThirtyTwo),
            _ => Err(Error::Config(format!("stencil must be 8, 16 or 32, got {n}"))),
        }
    }

    /// Offsets `(dx, dy)` with `dx > 0`; the mirrored and vertical moves are
    /// implied.
    fn forward_offsets(self) -> Vec<(usize, i64)> {
        let mut v = vec![(1, 0), (1, 1), (1, -1)];
        if matches!(self, Stencil::Sixteen | Stencil::ThirtyTwo) {
            v.extend([(1, 2), (1, -2), (2, 1), (2, -1)]);
        }
        if self == Stencil::ThirtyTwo {
            v.extend([(1, 3), (1, -3), (3, 1), (3, -1), (2, 3), (2, -3), (3, 2), (3, -2)]);
        }
        v
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GridConfig {
    /// Columns per horizontal period `π`.
    pub nx: usize,
    /// Rows across the fundamental domain (`2β` Möbius, `4β` Klein).
    pub ny: usize,
    pub stencil: Stencil,
    pub k_max: i64,
    pub m_max: i64,
}

impl GridConfig {
    pub fn new(nx: usize, ny: usize, stencil: Stencil, k_max: i64, m_max: i64) -> Result<Self> {
        let g = GridConfig {
            nx,
            ny,
            stencil,
            k_max,
            m_max,
        };
        g.validate()?;
        Ok(g)
    }

    pub fn validate(&self) -> Result<()> {
        if self.nx < 8 || self.ny < 8 {
            return Err(Error::Config(format!(
                "grid must be at least 8x8, got {}x{}",
                self.nx, self.ny
            )));
        }
        if self.k_max < 2 || self.m_max < 1 {
            return Err(Error::Config(format!(
                "word bounds need k_max >= 2 and m_max >= 1, got ({}, {})",
                self.k_max, self.m_max
            )));
        }
        Ok(())
    }

    pub fn with_resolution(mut self, nx: usize, ny: usize) -> Self {
        self.nx = nx;
        self.ny = ny;
        self
    }
}

impl Default for GridConfig {
    fn default() -> Self {
        GridConfig {
            nx: 256,
            ny: 256,
            stencil: Stencil::Sixteen,
            k_max: 4,
            m_max: 2,
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SystoleEstimate {
    /// Length of `witness` under the metric: an upper bound for the systole.
    pub value: f64,
    /// Shortest graph distance found, before re-measuring the witness.
    pub grid_value: f64,
    pub witness: CurvePolyline,
    pub word: DeckWord,
    pub grid: (usize, usize),
    pub discretization_note: String,
}

/// Equally spaced rows `y_r = y0 + r·hy` with the folded factor sampled on
/// them and precomputed edge weights.
struct Rows {
    y0: f64,
    hy: f64,
    count: usize,
    hx: f64,
    offsets: Vec<(usize, i64)>,
    /// `fwd[r * offsets.len() + o]`: weight of the move `offsets[o]` from row `r`.
    fwd: Vec<f64>,
    /// `up[r]`: weight of the vertical edge between rows `r` and `r + 1`.
    up: Vec<f64>,
}

impl Rows {
    fn new(
        surface: &SurfaceSpec,
        profile: &Profile,
        y0: f64,
        hy: f64,
        count: usize,
        nx: usize,
        stencil: Stencil,
    ) -> Rows {
        let hx = PI / nx as f64;
        let offsets = stencil.forward_offsets();
        let phi = |y: f64| profile.eval(surface.fold_y(y));
        let mut fwd = vec![f64::INFINITY; count * offsets.len()];
        for r in 0..count {
            let y = y0 + r as f64 * hy;
            for (o, &(dx, dy)) in offsets.iter().enumerate() {
                let t = r as i64 + dy;
                if t < 0 || t >= count as i64 {
                    continue;
                }
                let len = (dx as f64 * hx).hypot(dy as f64 * hy);
                fwd[r * offsets.len() + o] = len * phi(y + 0.5 * dy as f64 * hy);
            }
        }
        let up = (0..count.saturating_sub(1))
            .map(|r| hy * phi(y0 + (r as f64 + 0.5) * hy))
            .collect();
        Rows {
            y0,
            hy,
            count,
            hx,
            offsets,
            fwd,
            up,
        }
    }

    fn y(&self, r: usize) -> f64 {
        self.y0 + r as f64 * self.hy
    }

    fn max_dx(&self) -> usize {
        self.offsets.iter().map(|o| o.0).max().unwrap_or(1)
    }

    /// Relaxes vertical edges within one column for `s` interleaved sources.
    fn close_column(&self, col: &mut [f64], s: usize) {
        for r in 1..self.count {
            let w = self.up[r - 1];
            let (lo, hi) = col.split_at_mut(r * s);
            let below = &lo[(r - 1) * s..];
            for (d, &b) in hi[..s].iter_mut().zip(below) {
                *d = d.min(b + w);
            }
        }
        for r in (0..self.count - 1).rev() {
            let w = self.up[r];
            let (lo, hi) = col.split_at_mut((r + 1) * s);
            let above = &hi[..s];
            for (d, &a) in lo[r * s..].iter_mut().zip(above) {
                *d = d.min(a + w);
            }
        }
    }

    /// Distances from every source row on column 0 to every row on column
    /// `ncols`. The result is laid out as `out[r * sources.len() + i]`.
    fn sweep(&self, sources: &[usize], ncols: usize) -> Vec<f64> {
        let s = sources.len();
        let r_count = self.count;
        let ring = self.max_dx() + 1;
        let mut cols = vec![vec![f64::INFINITY; r_count * s]; ring];
        for (i, &src) in sources.iter().enumerate() {
            cols[0][src * s + i] = 0.0;
        }
        self.close_column(&mut cols[0], s);
        let no = self.offsets.len();
        for c in 1..=ncols {
            let mut cur = std::mem::take(&mut cols[c % ring]);
            cur.fill(f64::INFINITY);
            for (o, &(dx, dy)) in self.offsets.iter().enumerate() {
                if dx > c {
                    continue;
                }
                let prev = &cols[(c - dx) % ring];
                for r in 0..r_count {
                    let from = r as i64 - dy;
                    if from < 0 || from >= r_count as i64 {
                        continue;
                    }
                    let from = from as usize;
                    let w = self.fwd[from * no + o];
                    let src = &prev[from * s..(from + 1) * s];
                    for (d, &p) in cur[r * s..(r + 1) * s].iter_mut().zip(src) {
                        *d = d.min(p + w);
                    }
                }
            }
            self.close_column(&mut cur, s);
            cols[c % ring] = cur;
        }
        std::mem::take(&mut cols[ncols % ring])
    }

    /// Single-source search over `ncols` columns; returns the distance to
    /// `target` and the path as `(column, row)` nodes.
    fn trace(&self, source: usize, target: usize, ncols: usize) -> (f64, Vec<(usize, usize)>) {
        let r_count = self.count;
        let no = self.offsets.len();
        let mut dist = vec![f64::INFINITY; (ncols + 1) * r_count];
        // Predecessor as a flat node index; `usize::MAX` marks the source.
        let mut pred = vec![usize::MAX; (ncols + 1) * r_count];
        dist[source] = 0.0;
        for c in 0..=ncols {
            let base = c * r_count;
            if c > 0 {
                for (o, &(dx, dy)) in self.offsets.iter().enumerate() {
                    if dx > c {
                        continue;
                    }
                    let pbase = (c - dx) * r_count;
                    for r in 0..r_count {
                        let from = r as i64 - dy;
                        if from < 0 || from >= r_count as i64 {
                            continue;
                        }
                        let from = from as usize;
                        let cand = dist[pbase + from] + self.fwd[from * no + o];
                        if cand < dist[base + r] {
                            dist[base + r] = cand;
                            pred[base + r] = pbase + from;
                        }
                    }
                }
            }
            for r in 1..r_count {
                let cand = dist[base + r - 1] + self.up[r - 1];
                if cand < dist[base + r] {
                    dist[base + r] = cand;
                    pred[base + r] = base + r - 1;
                }
            }
            for r in (0..r_count - 1).rev() {
                let cand = dist[base + r + 1] + self.up[r];
                if cand < dist[base + r] {
                    dist[base + r] = cand;
                    pred[base + r] = base + r + 1;
                }
            }
        }
        let end = ncols * r_count + target;
        let mut path = vec![(ncols, target)];
        let mut node = end;
        while pred[node] != usize::MAX {
            node = pred[node];
            path.push((node / r_count, node % r_count));
        }
        path.reverse();
        (dist[end], path)
    }

    /// Turns grid nodes into a polyline, merging runs of identical moves.
    fn polyline(&self, path: &[(usize, usize)], x0: f64) -> Vec<Point> {
        let pt = |(c, r): (usize, usize)| Point::new(x0 + c as f64 * self.hx, self.y(r));
        let mut out = vec![pt(path[0])];
        let step = |a: (usize, usize), b: (usize, usize)| {
            (b.0 as i64 - a.0 as i64, b.1 as i64 - a.1 as i64)
        };
        for i in 1..path.len() {
            let keep = i + 1 == path.len() || step(path[i - 1], path[i]) != step(path[i], path[i + 1]);
            if keep {
                out.push(pt(path[i]));
            }
        }
        out
    }
}

fn min_plus(a: &[f64], b: &[f64], n: usize) -> Vec<f64> {
    // a, b, out are indexed [source * n + target].
    let mut out = vec![f64::INFINITY; n * n];
    for i in 0..n {
        let row = &mut out[i * n..(i + 1) * n];
        for j in 0..n {
            let aij = a[i * n + j];
            if !aij.is_finite() {
                continue;
            }
            for (o, &bjk) in row.iter_mut().zip(&b[j * n..(j + 1) * n]) {
                *o = o.min(aij + bjk);
            }
        }
    }
    out
}

/// Transfer matrices across the strip `|y| ≤ β` (both surfaces).
struct StripSolver<'a> {
    surface: SurfaceSpec,
    profile: &'a Profile,
    grid: GridConfig,
    rows: Rows,
    /// `powers[k - 1][s * n + t]`: distance from `(0, y_s)` to `(kπ, y_t)`.
    powers: Vec<Vec<f64>>,
}

impl<'a> StripSolver<'a> {
    fn new(surface: &SurfaceSpec, profile: &'a Profile, grid: &GridConfig) -> Self {
        let beta = surface.beta;
        // Keep the vertical spacing of the full fundamental domain.
        let intervals = match surface.kind {
            SurfaceKind::Mobius => grid.ny,
            SurfaceKind::Klein => grid.ny.div_ceil(2),
        }
        .max(2);
        let hy = 2.0 * beta / intervals as f64;
        let rows = Rows::new(surface, profile, -beta, hy, intervals + 1, grid.nx, grid.stencil);
        StripSolver {
            surface: *surface,
            profile,
            grid: *grid,
            rows,
            powers: Vec::new(),
        }
    }

    fn n(&self) -> usize {
        self.rows.count
    }

    fn power(&mut self, k: usize) -> &[f64] {
        let n = self.n();
        if self.powers.is_empty() {
            let sources: Vec<usize> = (0..n).collect();
            let d = self.rows.sweep(&sources, self.grid.nx);
            // Transpose from [row * S + source] to [source * n + row].
            let mut t = vec![0.0; n * n];
            for r in 0..n {
                for s in 0..n {
                    t[s * n + r] = d[r * n + s];
                }
            }
            self.powers.push(t);
        }
        while self.powers.len() < k {
            let next = min_plus(&self.powers[self.powers.len() - 1], &self.powers[0], n);
            self.powers.push(next);
        }
        &self.powers[k - 1]
    }

    /// Grid distances for word `(k, 0)`, `k ≥ 1`, indexed by source row.
    fn class_values(&mut self, k: usize) -> Vec<f64> {
        let n = self.n();
        let p = self.power(k);
        (0..n)
            .map(|s| {
                let t = if k.is_multiple_of(2) { s } else { n - 1 - s };
                p[s * n + t]
            })
            .collect()
    }

    /// Best witness of word `(k, 0)` among the most promising seam rows.
    fn best_in_class(&mut self, k: usize) -> Result<(f64, f64, CurvePolyline)> {
        let values = self.class_values(k);
        let mut order: Vec<usize> = (0..values.len()).filter(|&s| values[s].is_finite()).collect();
        order.sort_by(|&a, &b| values[a].total_cmp(&values[b]));
        let Some(&first) = order.first() else {
            return Err(Error::Internal("no finite path in the strip".into()));
        };
        let grid_best = values[first];
        let word = DeckWord::new(k as i64, 0);
        let mut best: Option<(f64, CurvePolyline)> = None;
        let n = self.n();
        for &s in order.iter().take(CANDIDATES) {
            if values[s] > grid_best * CANDIDATE_SLACK {
                break;
            }
            let t = if k.is_multiple_of(2) { s } else { n - 1 - s };
            let (_, path) = self.rows.trace(s, t, k * self.grid.nx);
            let mut verts = self.rows.polyline(&path, 0.0);
            let last = verts.len() - 1;
            verts[last] = word.act(self.surface.beta, verts[0]);
            let curve = CurvePolyline::new(&self.surface, verts, word)?;
            let len = curve_length(&self.surface, self.profile, &curve)?;
            if best.as_ref().is_none_or(|(l, _)| len < *l) {
                best = Some((len, curve));
            }
        }
        let (len, curve) = best.expect("at least one candidate is traced");
        Ok((len, grid_best, curve))
    }
}

const CANDIDATES: usize = 4;
const CANDIDATE_SLACK: f64 = 1.02;

/// `∫₀^β φ`.
fn profile_integral(profile: &Profile) -> f64 {
    integrate_over_profiles(
        &[profile],
        |y| profile.eval(y),
        &QuadratureConfig::for_profiles(&[profile]),
    )
}

fn vertical_witness(surface: &SurfaceSpec, m: i64) -> Result<CurvePolyline> {
    let word = DeckWord::new(0, m);
    let start = Point::new(0.0, 0.0);
    CurvePolyline::new(surface, vec![start, word.act(surface.beta, start)], word)
}

/// Shortest curve of the mixed word `(k, m)`, `k > 0`, `m ≠ 0`, on the Klein
/// bottle, searched in a window of the plane.
fn klein_mixed(
    surface: &SurfaceSpec,
    profile: &Profile,
    k: usize,
    m: i64,
    grid: &GridConfig,
) -> Result<(f64, CurvePolyline)> {
    let beta = surface.beta;
    let ny = grid.ny as i64;
    let hy = 4.0 * beta / ny as f64;
    let sign = if k.is_multiple_of(2) { 1 } else { -1 };
    // Lattice rows j ↦ y = j·hy. Seam sources cover one period, centred for
    // odd k on the fixed ordinate 2βm of y ↦ 4βm − y, where the conjugates of
    // the word have their shortest representatives.
    let centre = if sign < 0 { (ny * m).div_euclid(2) } else { 0 };
    let src: Vec<i64> = (centre - ny / 2..=centre + ny / 2).collect();
    let tgt = |j: i64| sign * j + ny * m;
    let lo = src.iter().chain(&src.iter().map(|&j| tgt(j)).collect::<Vec<_>>()).copied().min().unwrap() - ny / 2;
    let hi = src.iter().map(|&j| tgt(j)).chain(src.iter().copied()).max().unwrap() + ny / 2;
    let count = (hi - lo + 1) as usize;
    let rows = Rows::new(surface, profile, lo as f64 * hy, hy, count, grid.nx, grid.stencil);
    let idx = |j: i64| (j - lo) as usize;
    let sources: Vec<usize> = src.iter().map(|&j| idx(j)).collect();
    let ncols = k * grid.nx;
    let d = rows.sweep(&sources, ncols);
    let s = sources.len();
    let mut cands: Vec<(f64, i64)> = src
        .iter()
        .enumerate()
        .map(|(i, &j)| (d[idx(tgt(j)) * s + i], j))
        .filter(|c| c.0.is_finite())
        .collect();
    cands.sort_by(|a, b| a.0.total_cmp(&b.0));
    let word = DeckWord::new(k as i64, m);
    let mut best: Option<(f64, CurvePolyline)> = None;
    let grid_best = cands
        .first()
        .ok_or_else(|| Error::Internal("no finite path in the window".into()))?
        .0;
    for &(v, j) in cands.iter().take(CANDIDATES) {
        if v > grid_best * CANDIDATE_SLACK {
            break;
        }
        let (_, path) = rows.trace(idx(j), idx(tgt(j)), ncols);
        let mut verts = rows.polyline(&path, 0.0);
        let last = verts.len() - 1;
        verts[last] = word.act(beta, verts[0]);
        let curve = CurvePolyline::new(surface, verts, word)?;
        let len = curve_length(surface, profile, &curve)?;
        if best.as_ref().is_none_or(|(l, _)| len < *l) {
            best = Some((len, curve));
        }
    }
    Ok(best.expect("at least one candidate is traced"))
}

/// Upper bound for the shortest closed curve in the free homotopy class of
/// `word`, with a witness polyline.
pub fn shortest_in_class(
    surface: &SurfaceSpec,
    profile: &Profile,
    word: DeckWord,
    grid: &GridConfig,
) -> Result<(f64, CurvePolyline)> {
    check_profile(surface, profile)?;
    check_word(surface, word)?;
    grid.validate()?;
    if word.is_identity() {
        return Err(Error::InvalidWord {
            k: 0,
            m: 0,
            reason: "the identity class is contractible",
        });
    }
    if word.k < 0 {
        let (len, curve) = shortest_in_class(surface, profile, DeckWord::new(-word.k, word.m), grid)?;
        return Ok((len, curve.mirrored_x()));
    }
    if word.k == 0 {
        let curve = vertical_witness(surface, word.m)?;
        let len = curve_length(surface, profile, &curve)?;
        return Ok((len, curve));
    }
    let k = word.k as usize;
    if word.m == 0 {
        let mut solver = StripSolver::new(surface, profile, grid);
        let (len, _, curve) = solver.best_in_class(k)?;
        return Ok((len, curve));
    }
    klein_mixed(surface, profile, k, word.m, grid)
}

/// Estimates the systole by minimizing over deck words within the bounds of
/// `grid`, pruning words whose flat lower bound already exceeds the best.
pub fn systole_estimate(
    surface: &SurfaceSpec,
    profile: &Profile,
    grid: &GridConfig,
) -> Result<SystoleEstimate> {
    check_profile(surface, profile)?;
    grid.validate()?;
    profile.validate_positive()?;
    let min_phi = profile.min_value();
    let mut best: Option<(f64, f64, CurvePolyline)> = None;
    if surface.kind == SurfaceKind::Klein {
        // Vertical words: exact, length 4|m|∫₀^β φ.
        let v = 4.0 * profile_integral(profile);
        for m in 1..=grid.m_max {
            if best.as_ref().is_some_and(|b| m as f64 * v >= b.0) {
                break;
            }
            let curve = vertical_witness(surface, m)?;
            let len = curve_length(surface, profile, &curve)?;
            best = Some((len, m as f64 * v, curve));
        }
    }
    let mut solver = StripSolver::new(surface, profile, grid);
    for k in 1..=grid.k_max {
        let lower = k as f64 * PI * min_phi;
        if best.as_ref().is_some_and(|b| lower >= b.0) {
            break;
        }
        let (len, grid_value, curve) = solver.best_in_class(k as usize)?;
        if best.as_ref().is_none_or(|b| len < b.0) {
            best = Some((len, grid_value, curve));
        }
    }
    let (value, grid_value, witness) = best.expect("k = 1 is always searched");
    let stencil = grid.stencil.directions();
    Ok(SystoleEstimate {
        value,
        grid_value,
        word: witness.word(),
        witness,
        grid: (grid.nx, grid.ny),
        discretization_note: format!(
            "{}x{} grid, {stencil}-direction stencil, words |k| <= {}, |m| <= {}; \
             value is the exact length of the witness polyline (an upper bound)",
            grid.nx, grid.ny, grid.k_max, grid.m_max
        ),
    })
}

/// Folds a Klein-bottle curve onto the strip `|y| ≤ β` by the reflections
/// `y ↦ 2β − y` and `y ↦ −2β − y`. Lengths under invariant factors are kept.
/// The result is a closed curve of the Möbius strip of the same width.
pub fn fold_to_mobius(surface: &SurfaceSpec, curve: &CurvePolyline) -> Result<CurvePolyline> {
    if surface.kind != SurfaceKind::Klein {
        return Err(Error::UnsupportedSurface("mobius"));
    }
    let beta = surface.beta;
    let fold = |y: f64| {
        if y.abs() <= beta {
            return y;
        }
        let r = (y + 2.0 * beta).rem_euclid(4.0 * beta) - 2.0 * beta;
        if r > beta {
            2.0 * beta - r
        } else if r < -beta {
            -2.0 * beta - r
        } else {
            r
        }
    };
    let mut out: Vec<Point> = Vec::with_capacity(curve.vertices().len());
    let mut push = |p: Point| {
        if out.last().is_none_or(|q| q.dist(&p) > 0.0) {
            out.push(p);
        }
    };
    let verts = curve.vertices();
    push(Point::new(verts[0].x, fold(verts[0].y)));
    for w in verts.windows(2) {
        let (p, q) = (w[0], w[1]);
        // Fold lines sit at y = β + 2βj.
        let (lo, hi) = (p.y.min(q.y), p.y.max(q.y));
        let mut j = ((lo - beta) / (2.0 * beta)).ceil() as i64;
        let mut cuts = Vec::new();
        loop {
            let yc = beta + 2.0 * beta * j as f64;
            if yc >= hi {
                break;
            }
            if yc > lo {
                cuts.push((yc - p.y) / (q.y - p.y));
            }
            j += 1;
        }
        cuts.sort_by(|a, b| a.total_cmp(b));
        for t in cuts {
            push(Point::new(p.x + t * (q.x - p.x), fold(p.y + t * (q.y - p.y))));
        }
        push(Point::new(q.x, fold(q.y)));
    }
    let mobius = SurfaceSpec::mobius(beta)?;
    let word = DeckWord::new(curve.word().k, 0);
    let n = out.len();
    if n >= 2 {
        out[n - 1] = word.act(beta, out[0]);
    }
    CurvePolyline::new(&mobius, out, word)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::{classify_curve, CurveClass};
    use crate::optimal::{beta1, klein_optimal, phi0};
    use approx::assert_abs_diff_eq;

    fn coarse() -> GridConfig {
        GridConfig::default().with_resolution(64, 64)
    }

    #[test]
    fn grid_validation() {
        assert!(GridConfig::new(4, 64, Stencil::Sixteen, 4, 2).is_err());
        assert!(GridConfig::new(64, 64, Stencil::Sixteen, 1, 2).is_err());
        assert!(GridConfig::new(64, 64, Stencil::Eight, 2, 1).is_ok());
        assert!(Stencil::from_directions(12).is_err());
    }

    #[test]
    fn flat_mobius_core_geodesic() {
        let s = SurfaceSpec::mobius(0.6).unwrap();
        let p = Profile::flat(0.6, 1.0).unwrap();
        let (len, curve) = shortest_in_class(&s, &p, DeckWord::new(1, 0), &coarse()).unwrap();
        assert_abs_diff_eq!(len, PI, epsilon = 1e-9);
        assert_eq!(curve.word(), DeckWord::new(1, 0));
        let (len, curve) = shortest_in_class(&s, &p, DeckWord::new(-1, 0), &coarse()).unwrap();
        assert_abs_diff_eq!(len, PI, epsilon = 1e-9);
        assert_eq!(curve.word(), DeckWord::new(-1, 0));
        assert!(shortest_in_class(&s, &p, DeckWord::new(1, 1), &coarse()).is_err());
        assert!(shortest_in_class(&s, &p, DeckWord::IDENTITY, &coarse()).is_err());
    }

    #[test]
    fn flat_klein_words() {
        let beta = 0.5;
        let s = SurfaceSpec::klein(beta).unwrap();
        let p = Profile::flat(beta, 1.0).unwrap();
        let (len, c) = shortest_in_class(&s, &p, DeckWord::new(0, 1), &coarse()).unwrap();
        assert_abs_diff_eq!(len, 4.0 * beta, epsilon = 1e-9);
        assert_eq!(classify_curve(&s, &c).unwrap(), CurveClass::Vertical);
        // Word (1, 1): from (0, y) to (π, -y + 4β), best straight length √(π² + (4β)²)
        // at y = 2β, where the start coincides with the target's mirror.
        let (len, c) = shortest_in_class(&s, &p, DeckWord::new(1, 1), &coarse()).unwrap();
        assert_abs_diff_eq!(len, PI, epsilon = 0.01 * PI);
        assert_eq!(c.word(), DeckWord::new(1, 1));
        // Word (2, 1): translation by (2π, 4β).
        let (len, _) = shortest_in_class(&s, &p, DeckWord::new(2, 1), &coarse()).unwrap();
        let flat = (4.0 * PI * PI + 16.0 * beta * beta).sqrt();
        assert!(len >= flat - 1e-9 && len <= flat * 1.01, "{len} vs {flat}");
        let est = systole_estimate(&s, &p, &coarse()).unwrap();
        assert_abs_diff_eq!(est.value, 2.0, epsilon = 0.02 * 2.0);
        assert_eq!(est.word, DeckWord::new(0, 1));
    }

    #[test]
    fn phi0_mobius_thick_regime() {
        let beta = 2.0;
        let s = SurfaceSpec::mobius(beta).unwrap();
        let p = Profile::phi0(beta).unwrap();
        let est = systole_estimate(&s, &p, &GridConfig::default().with_resolution(128, 128)).unwrap();
        let expect = 2.0 * PI * phi0(beta);
        assert!((est.value - expect).abs() <= 0.02 * expect, "{est:?}");
        assert_eq!(est.word.k.abs(), 2);
        assert!(beta > beta1());
    }

    #[test]
    fn klein_optimal_has_systole_pi() {
        for beta in [0.5, 1.0] {
            let s = SurfaceSpec::klein(beta).unwrap();
            let p = klein_optimal(beta).unwrap();
            let est = systole_estimate(&s, &p, &coarse()).unwrap();
            assert!((est.value - PI).abs() <= 0.02 * PI, "beta {beta}: {}", est.value);
            assert!(est.value >= est.grid_value * 0.9);
        }
    }

    #[test]
    fn estimate_scales() {
        let s = SurfaceSpec::klein(0.9).unwrap();
        let p = Profile::named(0.9, "w", |y| 1.0 + 0.3 * y * y).unwrap();
        let a = systole_estimate(&s, &p, &coarse()).unwrap().value;
        let b = systole_estimate(&s, &p.scaled(2.0), &coarse()).unwrap().value;
        assert_abs_diff_eq!(b, 2.0 * a, epsilon = 1e-8);
    }

    #[test]
    fn fold_examples() {
        let beta = 0.5;
        let k = SurfaceSpec::klein(beta).unwrap();
        let inside = CurvePolyline::new(
            &k,
            vec![Point::new(0.0, 0.2), Point::new(1.0, -0.3), Point::new(PI, -0.2)],
            DeckWord::new(1, 0),
        )
        .unwrap();
        let f = fold_to_mobius(&k, &inside).unwrap();
        assert_eq!(f.vertices(), inside.vertices());
        let out = CurvePolyline::new(
            &k,
            vec![Point::new(0.0, 0.0), Point::new(1.0, 1.5 * beta), Point::new(PI, 0.0)],
            DeckWord::new(1, 0),
        )
        .unwrap();
        let f = fold_to_mobius(&k, &out).unwrap();
        assert!(f.vertices().iter().any(|p| (p.x - 1.0).abs() < 1e-15 && (p.y - 0.5 * beta).abs() < 1e-15));
        let prof = Profile::named(beta, "q", |y| 2.0 - y).unwrap();
        let m = SurfaceSpec::mobius(beta).unwrap();
        let a = curve_length(&k, &prof, &out).unwrap();
        let b = curve_length(&m, &prof, &f).unwrap();
        assert_abs_diff_eq!(a, b, epsilon = 1e-9);
    }
}
