//! Complex root localization for holomorphic functions by the argument
//! principle: adaptive winding-number evaluation on rectangle contours,
//! recursive quadrisection, and multiplicity-aware Newton polishing.
//!
//! The search is fully deterministic: contour perturbations used to escape
//! zeros on a contour come from fixed tables, never from a random source.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use std::io::Write;

use crate::error::{Error, Result};

type C = Complex64;

const TAU: f64 = std::f64::consts::TAU;
/// Relative threshold below which a contour sample counts as a zero hit.
const ZERO_HIT_REL: f64 = 1e-13;
/// Maximum bisection depth when refining a contour segment's phase change.
const PHASE_REFINE_DEPTH: usize = 40;
/// Relative size of top-level contour perturbations.
const JITTER_REL: f64 = 1e-6;
/// Fixed displacement directions for contour perturbation retries.
const JITTER_DIRS: [(f64, f64); 8] = [
    (1.0, 0.37),
    (-0.71, 0.23),
    (0.29, -0.83),
    (-0.41, -0.59),
    (0.97, 0.11),
    (-0.13, 0.91),
    (0.57, 0.63),
    (-0.87, -0.31),
];
/// Fixed interior cut positions tried when a subdivision line hits a zero.
const CUT_FRACTIONS: [f64; 10] = [0.5, 0.501, 0.499, 0.503, 0.497, 0.51, 0.49, 0.53, 0.47, 0.55];

/// Axis-aligned search rectangle in the complex plane.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Rectangle {
    pub re_min: f64,
    pub re_max: f64,
    pub im_min: f64,
    pub im_max: f64,
}

impl Rectangle {
    pub fn new(re_min: f64, re_max: f64, im_min: f64, im_max: f64) -> Result<Self> {
        let all_finite =
            re_min.is_finite() && re_max.is_finite() && im_min.is_finite() && im_max.is_finite();
        if !all_finite || re_min >= re_max || im_min >= im_max {
            return Err(Error::InvalidParameter(format!(
                "degenerate rectangle [{re_min}, {re_max}] x [{im_min}, {im_max}]"
            )));
        }
        Ok(Self {
            re_min,
            re_max,
            im_min,
            im_max,
        })
    }

    pub fn width(&self) -> f64 {
        self.re_max - self.re_min
    }
    pub fn height(&self) -> f64 {
        self.im_max - self.im_min
    }
    pub fn diameter(&self) -> f64 {
        self.width().hypot(self.height())
    }
    pub fn center(&self) -> C {
        C::new(
            0.5 * (self.re_min + self.re_max),
            0.5 * (self.im_min + self.im_max),
        )
    }

    fn shifted(&self, dz: C) -> Self {
        Self {
            re_min: self.re_min + dz.re,
            re_max: self.re_max + dz.re,
            im_min: self.im_min + dz.im,
            im_max: self.im_max + dz.im,
        }
    }

    /// The four corners in counterclockwise order.
    fn corners(&self) -> [C; 4] {
        [
            C::new(self.re_min, self.im_min),
            C::new(self.re_max, self.im_min),
            C::new(self.re_max, self.im_max),
            C::new(self.re_min, self.im_max),
        ]
    }
}

/// Tuning parameters for the root search.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RootConfig {
    /// Samples per rectangle edge for winding evaluation; at least 64.
    pub edge_samples: usize,
    /// Maximum quadrisection depth before an unresolved box is reported as a
    /// cluster.
    pub max_depth: usize,
    /// Residual target for polished roots, relative to the median contour
    /// magnitude of the searched function.
    pub polish_tol: f64,
    /// Boxes smaller than this diameter are not subdivided further.
    pub min_box: f64,
    /// Relative step for the central-difference derivative used by Newton
    /// iteration.
    pub derivative_step: f64,
}

impl Default for RootConfig {
    fn default() -> Self {
        Self {
            edge_samples: 128,
            max_depth: 48,
            polish_tol: 1e-12,
            min_box: 1e-9,
            derivative_step: 1e-7,
        }
    }
}

impl RootConfig {
    pub fn validate(&self) -> Result<()> {
        if self.edge_samples < 64 {
            return Err(Error::InvalidParameter(format!(
                "edge_samples must be >= 64, got {}",
                self.edge_samples
            )));
        }
        if self.max_depth == 0 || self.max_depth > 200 {
            return Err(Error::InvalidParameter(format!(
                "max_depth must be in 1..=200, got {}",
                self.max_depth
            )));
        }
        if !(self.polish_tol.is_finite() && self.polish_tol > 0.0) {
            return Err(Error::InvalidParameter("polish_tol must be positive".into()));
        }
        if !(self.min_box.is_finite() && self.min_box > 0.0) {
            return Err(Error::InvalidParameter("min_box must be positive".into()));
        }
        if !(self.derivative_step.is_finite() && self.derivative_step > 0.0) {
            return Err(Error::InvalidParameter(
                "derivative_step must be positive".into(),
            ));
        }
        Ok(())
    }
}

/// A located root with its verified multiplicity and the achieved residual
/// `|f(k)|`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Root {
    #[serde(with = "crate::boundary_conditions::complex_pair")]
    pub k: C,
    pub multiplicity: usize,
    pub residual: f64,
}

/// All roots found in a region, with the region's total winding number.
/// The multiplicities of the listed roots sum to `total_winding`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RootSet {
    pub roots: Vec<Root>,
    pub total_winding: i64,
    pub region: Rectangle,
}

impl RootSet {
    /// Writes the roots as CSV with columns
    /// `re_k,im_k,re_lambda,im_lambda,multiplicity,residual`, where `lambda`
    /// is the squared root value (the spectral parameter when the roots are
    /// wavenumbers).
    pub fn write_csv<W: Write>(&self, w: &mut W) -> std::io::Result<()> {
        writeln!(w, "re_k,im_k,re_lambda,im_lambda,multiplicity,residual")?;
        for r in &self.roots {
            let lambda = r.k * r.k;
            writeln!(
                w,
                "{:.16e},{:.16e},{:.16e},{:.16e},{},{:.16e}",
                r.k.re, r.k.im, lambda.re, lambda.im, r.multiplicity, r.residual
            )?;
        }
        Ok(())
    }
}

/// Samples a closed polyline (given by its vertices; the closing segment is
/// implicit) and accumulates the winding of `f` along it, bisecting any
/// segment whose endpoint phases differ by more than a quarter turn.
fn winding_on_polyline(f: &dyn Fn(C) -> C, pts: &[C]) -> Result<f64> {
    let vals: Vec<C> = pts.iter().map(|&z| f(z)).collect();
    let max_mag = vals.iter().map(|v| v.norm()).fold(0.0f64, f64::max);
    if !(max_mag.is_finite() && max_mag > 0.0) {
        return Err(Error::ZeroOnContour);
    }
    let zero_tol = ZERO_HIT_REL * max_mag;
    for v in &vals {
        if v.norm() <= zero_tol {
            return Err(Error::ZeroOnContour);
        }
    }
    let mut total = 0.0;
    for i in 0..pts.len() {
        let j = (i + 1) % pts.len();
        total += refine_segment(f, pts[i], vals[i], pts[j], vals[j], zero_tol, PHASE_REFINE_DEPTH)?;
    }
    Ok(total)
}

fn refine_segment(
    f: &dyn Fn(C) -> C,
    z0: C,
    v0: C,
    z1: C,
    v1: C,
    zero_tol: f64,
    depth: usize,
) -> Result<f64> {
    let delta = (v1 / v0).arg();
    if delta.abs() <= std::f64::consts::FRAC_PI_2 {
        return Ok(delta);
    }
    if depth == 0 {
        return Err(Error::ZeroOnContour);
    }
    let zm = (z0 + z1) * 0.5;
    let vm = f(zm);
    if !vm.norm().is_finite() || vm.norm() <= zero_tol {
        return Err(Error::ZeroOnContour);
    }
    Ok(refine_segment(f, z0, v0, zm, vm, zero_tol, depth - 1)?
        + refine_segment(f, zm, vm, z1, v1, zero_tol, depth - 1)?)
}

fn rectangle_contour(rect: &Rectangle, per_edge: usize) -> Vec<C> {
    let corners = rect.corners();
    let mut pts = Vec::with_capacity(4 * per_edge);
    for e in 0..4 {
        let a = corners[e];
        let b = corners[(e + 1) % 4];
        for i in 0..per_edge {
            let t = i as f64 / per_edge as f64;
            pts.push(a + (b - a) * t);
        }
    }
    pts
}

/// Counting integral of `f' / f` around the rectangle boundary, i.e. the
/// number of zeros of `f` inside (with multiplicity), assuming `f` is
/// holomorphic and zero-free on the contour.
pub fn winding_number(f: &dyn Fn(C) -> C, rect: &Rectangle, cfg: &RootConfig) -> Result<i64> {
    cfg.validate()?;
    let pts = rectangle_contour(rect, cfg.edge_samples);
    let total = winding_on_polyline(f, &pts)?;
    let turns = total / TAU;
    let rounded = turns.round();
    if (turns - rounded).abs() > 0.25 {
        return Err(Error::RootSearchFailed(format!(
            "winding {turns:.4} is not close to an integer"
        )));
    }
    Ok(rounded as i64)
}

/// Winding computation that retries with small fixed contour shifts when the
/// contour hits a zero. Returns the count and the (possibly shifted)
/// rectangle it was computed on.
fn winding_with_jitter(
    f: &dyn Fn(C) -> C,
    rect: &Rectangle,
    cfg: &RootConfig,
) -> Result<(i64, Rectangle)> {
    match winding_number(f, rect, cfg) {
        Ok(w) => return Ok((w, *rect)),
        Err(Error::ZeroOnContour) => {}
        Err(e) => return Err(e),
    }
    let d = JITTER_REL * rect.diameter();
    for (dx, dy) in JITTER_DIRS {
        let shifted = rect.shifted(C::new(d * dx, d * dy));
        match winding_number(f, &shifted, cfg) {
            Ok(w) => return Ok((w, shifted)),
            Err(Error::ZeroOnContour) => continue,
            Err(e) => return Err(e),
        }
    }
    Err(Error::RootSearchFailed(
        "contour hits zeros of the function even after perturbation retries".into(),
    ))
}

/// Newton iteration with multiplicity-adapted steps `z -= m f / f'`, using a
/// central-difference derivative. Returns the best iterate and its `|f|`.
fn polish(f: &dyn Fn(C) -> C, start: C, m: usize, box_diam: f64, cfg: &RootConfig) -> (C, f64) {
    let mut z = start;
    let mut best = start;
    let mut best_mag = f(start).norm();
    let mfac = m as f64;
    for _ in 0..100 {
        let fz = f(z);
        let mag = fz.norm();
        if mag < best_mag {
            best = z;
            best_mag = mag;
        }
        if mag == 0.0 {
            return (z, 0.0);
        }
        let h = cfg.derivative_step * z.norm().max(1.0);
        let d = (f(z + C::new(h, 0.0)) - f(z - C::new(h, 0.0))) / (2.0 * h);
        if !d.norm().is_finite() || d.norm() < 1e-280 {
            break;
        }
        let mut step = fz / d * mfac;
        let cap = box_diam.max(cfg.min_box);
        if step.norm() > cap {
            step *= cap / step.norm();
        }
        z -= step;
        if !(z.re.is_finite() && z.im.is_finite()) {
            break;
        }
        if step.norm() <= 1e-15 * z.norm().max(1.0) {
            let fz = f(z).norm();
            if fz < best_mag {
                best = z;
                best_mag = fz;
            }
            break;
        }
    }
    (best, best_mag)
}

/// Polishing with a deterministic coarse-grid fallback when Newton from the
/// box center stalls.
fn locate_in_box(
    f: &dyn Fn(C) -> C,
    rect: &Rectangle,
    m: usize,
    target: f64,
    cfg: &RootConfig,
) -> (C, f64) {
    let (mut z, mut mag) = polish(f, rect.center(), m, rect.diameter(), cfg);
    if mag > target {
        let mut seed = rect.center();
        let mut seed_mag = f64::INFINITY;
        for i in 0..17 {
            for j in 0..17 {
                let p = C::new(
                    rect.re_min + rect.width() * (i as f64 + 0.5) / 17.0,
                    rect.im_min + rect.height() * (j as f64 + 0.5) / 17.0,
                );
                let v = f(p).norm();
                if v < seed_mag {
                    seed_mag = v;
                    seed = p;
                }
            }
        }
        let (z2, mag2) = polish(f, seed, m, rect.diameter(), cfg);
        if mag2 < mag {
            z = z2;
            mag = mag2;
        }
    }
    (z, mag)
}

/// Winding of `f` around a small circle, used to verify a root's
/// multiplicity independently of the box subdivision that isolated it.
fn circle_winding(f: &dyn Fn(C) -> C, center: C, radius: f64) -> Result<i64> {
    let mut r = radius;
    for _ in 0..3 {
        let pts: Vec<C> = (0..256)
            .map(|i| {
                let t = TAU * i as f64 / 256.0;
                center + C::new(r * t.cos(), r * t.sin())
            })
            .collect();
        match winding_on_polyline(f, &pts) {
            Ok(total) => {
                let turns = (total / TAU).round();
                return Ok(turns as i64);
            }
            Err(Error::ZeroOnContour) => {
                r *= 3.0;
                continue;
            }
            Err(e) => return Err(e),
        }
    }
    Err(Error::ZeroOnContour)
}

struct SearchState<'a> {
    f: &'a dyn Fn(C) -> C,
    cfg: RootConfig,
    target: f64,
    found: Vec<Root>,
}

fn subdivide(state: &mut SearchState, rect: &Rectangle, w: i64, depth: usize) -> Result<()> {
    if w == 0 {
        return Ok(());
    }
    if w < 0 {
        return Err(Error::RootSearchFailed(format!(
            "negative winding {w}: function is not holomorphic in the region"
        )));
    }
    // Direct location attempt: polish from the box and accept the result only
    // if it landed inside the box (with room for the verification circle),
    // met the residual target, and a circle winding around it reproduces the
    // box count exactly. Multiplicity is then the box count, which the
    // argument principle ties to this single location.
    let (z, mag) = locate_in_box(state.f, rect, w as usize, state.target, &state.cfg);
    let radius = (2.0 * state.cfg.min_box).max(1e-7 * (1.0 + z.norm()));
    let in_box = z.re > rect.re_min + radius
        && z.re < rect.re_max - radius
        && z.im > rect.im_min + radius
        && z.im < rect.im_max - radius;
    if in_box && mag <= state.target {
        if let Ok(c) = circle_winding(state.f, z, radius) {
            if c == w {
                state.found.push(Root {
                    k: z,
                    multiplicity: w as usize,
                    residual: mag,
                });
                return Ok(());
            }
        }
    }
    if rect.diameter() <= state.cfg.min_box || depth >= state.cfg.max_depth {
        // Unresolvable box: report its winding count at the best point found,
        // with the residual actually achieved there.
        state.found.push(Root {
            k: z,
            multiplicity: w as usize,
            residual: mag,
        });
        return Ok(());
    }
    'fractions: for (fi, fx) in CUT_FRACTIONS.iter().enumerate() {
        let fy = CUT_FRACTIONS[(fi + 1) % CUT_FRACTIONS.len()];
        let xc = rect.re_min + rect.width() * fx;
        let yc = rect.im_min + rect.height() * fy;
        let children = [
            Rectangle { re_min: rect.re_min, re_max: xc, im_min: rect.im_min, im_max: yc },
            Rectangle { re_min: xc, re_max: rect.re_max, im_min: rect.im_min, im_max: yc },
            Rectangle { re_min: rect.re_min, re_max: xc, im_min: yc, im_max: rect.im_max },
            Rectangle { re_min: xc, re_max: rect.re_max, im_min: yc, im_max: rect.im_max },
        ];
        let mut windings = [0i64; 4];
        for (i, child) in children.iter().enumerate() {
            match winding_number(state.f, child, &state.cfg) {
                Ok(cw) => windings[i] = cw,
                Err(Error::ZeroOnContour) => continue 'fractions,
                Err(e) => return Err(e),
            }
        }
        if windings.iter().sum::<i64>() != w {
            continue 'fractions;
        }
        for (child, cw) in children.iter().zip(windings) {
            subdivide(state, child, cw, depth + 1)?;
        }
        return Ok(());
    }
    // No subdivision line avoided the zeros; report the box as a cluster at
    // the best point already located.
    state.found.push(Root {
        k: z,
        multiplicity: w as usize,
        residual: mag,
    });
    Ok(())
}

/// Finds all zeros of `f` (with multiplicities) inside the rectangle.
///
/// The winding number of the full contour fixes the total count; recursive
/// quadrisection isolates the zeros; Newton iteration with a
/// central-difference derivative polishes each one; and a small verification
/// circle around each polished zero confirms its multiplicity. Roots are
/// returned sorted by real part, then imaginary part. The reported residuals
/// satisfy `|f(k)| < polish_tol * s` for well-conditioned roots, where `s` is
/// the median `|f|` on the outer contour.
pub fn find_roots(f: &dyn Fn(C) -> C, rect: &Rectangle, cfg: &RootConfig) -> Result<RootSet> {
    cfg.validate()?;
    Rectangle::new(rect.re_min, rect.re_max, rect.im_min, rect.im_max)?;
    let (total, work_rect) = winding_with_jitter(f, rect, cfg)?;

    let contour = rectangle_contour(&work_rect, cfg.edge_samples);
    let mut mags: Vec<f64> = contour.iter().map(|&z| f(z).norm()).collect();
    mags.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let scale = mags[mags.len() / 2].max(f64::MIN_POSITIVE);

    let mut state = SearchState {
        f,
        cfg: *cfg,
        target: cfg.polish_tol * scale,
        found: Vec::new(),
    };
    subdivide(&mut state, &work_rect, total, 0)?;

    let mut roots = state.found;
    roots.sort_by(|a, b| {
        (a.k.re, a.k.im)
            .partial_cmp(&(b.k.re, b.k.im))
            .unwrap_or(std::cmp::Ordering::Equal)
    });
    let mut merged: Vec<Root> = Vec::new();
    for r in roots {
        if let Some(last) = merged.last_mut() {
            let tol = (10.0 * cfg.min_box).max(1e-8 * (1.0 + r.k.norm()));
            if (last.k - r.k).norm() <= tol {
                last.multiplicity += r.multiplicity;
                if r.residual < last.residual {
                    last.k = r.k;
                    last.residual = r.residual;
                }
                continue;
            }
        }
        merged.push(r);
    }
    let sum: usize = merged.iter().map(|r| r.multiplicity).sum();
    if sum as i64 != total {
        return Err(Error::RootSearchFailed(format!(
            "located multiplicities sum to {sum} but the contour count is {total}"
        )));
    }
    Ok(RootSet {
        roots: merged,
        total_winding: total,
        region: *rect,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn poly(k: C) -> C {
        let r = C::new(1.0, 1.0);
        (k - r) * (k - r) * (k + C::new(2.0, 0.0))
    }

    #[test]
    fn winding_counts_known_zeros() {
        let cfg = RootConfig::default();
        let f = |k: C| k * k + C::new(1.0, 0.0);
        let both = Rectangle::new(-2.0, 2.0, -2.0, 2.0).unwrap();
        assert_eq!(winding_number(&f, &both, &cfg).unwrap(), 2);
        let upper = Rectangle::new(-2.0, 2.0, 0.5, 2.0).unwrap();
        assert_eq!(winding_number(&f, &upper, &cfg).unwrap(), 1);
        let none = Rectangle::new(3.0, 4.0, 0.1, 1.0).unwrap();
        assert_eq!(winding_number(&f, &none, &cfg).unwrap(), 0);
    }

    #[test]
    fn polynomial_roots_with_multiplicity() {
        let cfg = RootConfig::default();
        let rect = Rectangle::new(-3.0, 3.0, -2.0, 2.0).unwrap();
        let set = find_roots(&poly, &rect, &cfg).unwrap();
        assert_eq!(set.total_winding, 3);
        assert_eq!(set.roots.len(), 2);
        let simple = &set.roots[0];
        assert!((simple.k - C::new(-2.0, 0.0)).norm() < 1e-9, "{:?}", simple);
        assert_eq!(simple.multiplicity, 1);
        assert!(simple.residual < 1e-9);
        let double = &set.roots[1];
        assert!((double.k - C::new(1.0, 1.0)).norm() < 1e-6, "{:?}", double);
        assert_eq!(double.multiplicity, 2);
        assert!(double.residual < 1e-9);
    }

    #[test]
    fn sine_roots_located_to_high_accuracy() {
        let cfg = RootConfig::default();
        let f = |k: C| (k * 2.0).sin();
        let rect = Rectangle::new(0.1, 7.0, -1.0, 1.0).unwrap();
        let set = find_roots(&f, &rect, &cfg).unwrap();
        assert_eq!(set.roots.len(), 4);
        for (i, r) in set.roots.iter().enumerate() {
            let expect = (i + 1) as f64 * std::f64::consts::FRAC_PI_2;
            assert!(
                (r.k - C::new(expect, 0.0)).norm() < 1e-9,
                "root {i}: {:?} vs {expect}",
                r.k
            );
            assert_eq!(r.multiplicity, 1);
        }
    }

    #[test]
    fn empty_region_yields_empty_set() {
        let cfg = RootConfig::default();
        let f = |k: C| k * k + C::new(1.0, 0.0);
        let rect = Rectangle::new(3.0, 4.0, 0.1, 1.0).unwrap();
        let set = find_roots(&f, &rect, &cfg).unwrap();
        assert!(set.roots.is_empty());
        assert_eq!(set.total_winding, 0);
    }

    #[test]
    fn winding_is_conserved_under_partition() {
        let cfg = RootConfig::default();
        let f = |k: C| (k * k + C::new(1.0, 0.0)) * (k - C::new(0.3, 0.4));
        let whole = Rectangle::new(-2.0, 2.0, -2.0, 2.0).unwrap();
        let total = winding_number(&f, &whole, &cfg).unwrap();
        assert_eq!(total, 3);
        let xc = 0.1;
        let yc = 0.05;
        let mut sum = 0;
        for (x0, x1, y0, y1) in [
            (-2.0, xc, -2.0, yc),
            (xc, 2.0, -2.0, yc),
            (-2.0, xc, yc, 2.0),
            (xc, 2.0, yc, 2.0),
        ] {
            let r = Rectangle::new(x0, x1, y0, y1).unwrap();
            sum += winding_number(&f, &r, &cfg).unwrap();
        }
        assert_eq!(sum, total);
    }

    #[test]
    fn search_is_deterministic() {
        let cfg = RootConfig::default();
        let rect = Rectangle::new(-3.0, 3.0, -2.0, 2.0).unwrap();
        let a = find_roots(&poly, &rect, &cfg).unwrap();
        let b = find_roots(&poly, &rect, &cfg).unwrap();
        assert_eq!(a.roots.len(), b.roots.len());
        for (x, y) in a.roots.iter().zip(b.roots.iter()) {
            assert_eq!(x.k, y.k);
            assert_eq!(x.multiplicity, y.multiplicity);
        }
    }

    #[test]
    fn zero_on_contour_is_detected_and_jittered_around() {
        let cfg = RootConfig::default();
        // Zero exactly at the midpoint of the bottom edge.
        let f = |k: C| k;
        let rect = Rectangle::new(-1.0, 1.0, 0.0, 1.0).unwrap();
        match winding_number(&f, &rect, &cfg) {
            Err(Error::ZeroOnContour) => {}
            other => panic!("expected ZeroOnContour, got {other:?}"),
        }
        // The full search escapes via a fixed contour shift.
        let set = find_roots(&f, &rect, &cfg).unwrap();
        assert!(set.total_winding == 0 || set.total_winding == 1);
    }

    #[test]
    fn csv_has_expected_columns() {
        let cfg = RootConfig::default();
        let rect = Rectangle::new(-3.0, 3.0, -2.0, 2.0).unwrap();
        let set = find_roots(&poly, &rect, &cfg).unwrap();
        let mut buf = Vec::new();
        set.write_csv(&mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let mut lines = text.lines();
        assert_eq!(
            lines.next().unwrap(),
            "re_k,im_k,re_lambda,im_lambda,multiplicity,residual"
        );
        assert_eq!(lines.count(), set.roots.len());
    }

    #[test]
    fn config_validation_rejects_bad_values() {
        let cfg = RootConfig {
            edge_samples: 32,
            ..RootConfig::default()
        };
        assert!(cfg.validate().is_err());
        let cfg = RootConfig {
            polish_tol: 0.0,
            ..RootConfig::default()
        };
        assert!(cfg.validate().is_err());
        assert!(Rectangle::new(1.0, 1.0, 0.0, 2.0).is_err());
        assert!(Rectangle::new(0.0, 1.0, 2.0, 1.0).is_err());
    }
}
