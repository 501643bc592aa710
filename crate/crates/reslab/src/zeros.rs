//! Zero finding for analytic functions on axis-aligned rectangles, plus
//! analytics over the resulting zero sets (strip counts, fractal Weyl fits,
//! spectral-gap reports).
//!
//! Counting is the textbook argument principle: walk the rectangle boundary,
//! accumulate phase increments of `F`, and refine any segment whose phase
//! step reaches pi/2 until every step is small; the winding number is then
//! the zero count with multiplicity. Location is recursive quadrisection
//! (each split re-counted, so conservation is enforced at every level) down
//! to single-zero boxes, finished by Newton iteration with a multiplicity
//! factor and central-difference derivatives. Two zeros closer than the
//! location tolerance are reported as one location with their combined
//! multiplicity.
//!
//! All residual thresholds are relative to one `scale` per search: the
//! median of `|F|` over the outer boundary samples. Function values are
//! memoized by exact bit pattern, so shared corners, split retries, and
//! repeated polish probes are free; the memo never influences results,
//! only cost. Results are ordered by (imaginary, real) part, and the whole
//! pipeline is deterministic: re-running a search reproduces the output
//! byte for byte.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use std::cell::{Cell, RefCell};
use std::collections::HashMap;
use std::collections::VecDeque;
use std::f64::consts::PI;
use thiserror::Error;

use crate::schottky::least_squares;

/// Fraction of `scale` below which a boundary sample counts as a zero hit.
const BOUNDARY_TOL: f64 = 1e-10;
/// Fraction of `scale` a polished zero's residual must reach.
const RESIDUAL_TOL: f64 = 1e-10;
/// Quadrisection depth cap.
const MAX_DEPTH: usize = 64;

/// How many density triplings the winding cross-check may escalate through
/// before declaring the boundary phase untrackable.
const DENSITY_ESCALATIONS: usize = 2;
/// Per-segment phase-refinement halving cap.
const MAX_REFINE: usize = 48;
/// Largest spread of |f| across a segment's endpoints and midpoint that a
/// phase step may be accepted with; larger spreads force refinement.
const SEGMENT_RATIO_CAP: f64 = 4.0;
/// Split positions tried when an internal edge lands on a zero.
const SPLIT_FRACTIONS: [f64; 7] = [0.5, 0.53, 0.47, 0.56, 0.44, 0.59, 0.41];

#[derive(Debug, Error)]
pub enum ZerosError {
    #[error("rectangle has nonpositive extent: width {width:.3e}, height {height:.3e}")]
    DegenerateRectangle { width: f64, height: f64 },
    #[error("boundary sampling density {density} is below the minimum of 16 per unit perimeter")]
    SparseSampling { density: f64 },
    #[error("|F| = {abs:.3e} at boundary point ({re:.6}, {im:.6}) is below 1e-10 of scale {scale:.3e}; perturb the rectangle")]
    BoundaryZero { abs: f64, re: f64, im: f64, scale: f64 },
    #[error("phase step refinement failed to converge on {segments} boundary segment(s)")]
    NonConvergedSampling { segments: usize },
    #[error(
        "children counted {children} zeros against the parent's {parent} at every split \
         position; boundary sampling is inconsistent at this scale"
    )]
    SplitCountMismatch { parent: usize, children: usize },
    #[error(
        "winding number {winding} is negative; either F is not analytic on the rectangle \
         or the boundary phase could not be tracked reliably at this sampling density"
    )]
    NonAnalyticWinding { winding: i64 },
    #[error("quadrisection exceeded depth {depth}")]
    MaxDepth { depth: usize },
    #[error(
        "{count} zero(s) near ({re:.9}, {im:.9}) could not be polished to the requested \
         tolerance; the local evaluation noise floor is too high — raise `tol` or the \
         evaluation's truncation order"
    )]
    UnresolvableCluster { re: f64, im: f64, count: usize },
    #[error(
        "boundary windings disagree between consecutive sampling densities up to {mult}x \
         the base; the phase along this rectangle's boundary cannot be tracked reliably"
    )]
    WindingDensityMismatch { mult: usize },
    #[error("Weyl fit needs at least 4 window centers, got {given}")]
    InsufficientWindows { given: usize },
    #[error("Weyl fit windows centered at {centers:?} contain no zeros")]
    EmptyWindow { centers: Vec<f64> },
    #[error("resonance set is empty")]
    EmptySet,
}

/// Axis-aligned complex search box with a boundary sampling density of at
/// least 16 points per unit perimeter.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SearchRectangle {
    re_lo: f64,
    im_lo: f64,
    re_hi: f64,
    im_hi: f64,
    density: f64,
}

impl SearchRectangle {
    pub fn new(a: Complex64, b: Complex64) -> Result<Self, ZerosError> {
        let (re_lo, re_hi) = (a.re.min(b.re), a.re.max(b.re));
        let (im_lo, im_hi) = (a.im.min(b.im), a.im.max(b.im));
        if !(re_hi > re_lo && im_hi > im_lo) {
            return Err(ZerosError::DegenerateRectangle {
                width: re_hi - re_lo,
                height: im_hi - im_lo,
            });
        }
        Ok(SearchRectangle { re_lo, im_lo, re_hi, im_hi, density: 16.0 })
    }

    pub fn from_bounds(
        re_lo: f64,
        re_hi: f64,
        im_lo: f64,
        im_hi: f64,
    ) -> Result<Self, ZerosError> {
        SearchRectangle::new(Complex64::new(re_lo, im_lo), Complex64::new(re_hi, im_hi))
    }

    pub fn with_density(mut self, density: f64) -> Result<Self, ZerosError> {
        if !(density >= 16.0) {
            return Err(ZerosError::SparseSampling { density });
        }
        self.density = density;
        Ok(self)
    }

    pub fn lo(&self) -> Complex64 {
        Complex64::new(self.re_lo, self.im_lo)
    }

    pub fn hi(&self) -> Complex64 {
        Complex64::new(self.re_hi, self.im_hi)
    }

    pub fn width(&self) -> f64 {
        self.re_hi - self.re_lo
    }

    pub fn height(&self) -> f64 {
        self.im_hi - self.im_lo
    }

    pub fn center(&self) -> Complex64 {
        Complex64::new(0.5 * (self.re_lo + self.re_hi), 0.5 * (self.im_lo + self.im_hi))
    }

    pub fn contains(&self, z: Complex64) -> bool {
        z.re >= self.re_lo && z.re <= self.re_hi && z.im >= self.im_lo && z.im <= self.im_hi
    }

    fn contains_slack(&self, z: Complex64, slack: f64) -> bool {
        z.re >= self.re_lo - slack
            && z.re <= self.re_hi + slack
            && z.im >= self.im_lo - slack
            && z.im <= self.im_hi + slack
    }

    fn quadrants(&self, frac: f64) -> [SearchRectangle; 4] {
        let xm = self.re_lo + frac * self.width();
        let ym = self.im_lo + frac * self.height();
        let d = self.density;
        let mk = |a, b, c, e| SearchRectangle { re_lo: a, re_hi: b, im_lo: c, im_hi: e, density: d };
        [
            mk(self.re_lo, xm, self.im_lo, ym),
            mk(xm, self.re_hi, self.im_lo, ym),
            mk(self.re_lo, xm, ym, self.im_hi),
            mk(xm, self.re_hi, ym, self.im_hi),
        ]
    }
}

/// One located zero: position, multiplicity, and the post-polish residual
/// |F(location)|.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FoundZero {
    pub re: f64,
    pub im: f64,
    pub multiplicity: usize,
    pub residual: f64,
}

impl FoundZero {
    pub fn location(&self) -> Complex64 {
        Complex64::new(self.re, self.im)
    }
}

/// Zeros located inside one rectangle, with provenance. Multiplicities sum
/// to the argument-principle count of the enclosing rectangle.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ResonanceSet {
    pub zeros: Vec<FoundZero>,
    /// Which function the zeros belong to, e.g. "zeta_det(funnel)".
    pub source: String,
    /// Truncation the function was evaluated at, e.g. "M=24".
    pub truncation: String,
    /// Argument-principle count of the enclosing rectangle.
    pub total_count: usize,
    /// Median |F| over the outer boundary, the unit for residuals.
    pub scale: f64,
}

impl ResonanceSet {
    pub fn new(zeros: Vec<FoundZero>, source: impl Into<String>, truncation: impl Into<String>) -> Self {
        let total = zeros.iter().map(|z| z.multiplicity).sum();
        ResonanceSet {
            zeros,
            source: source.into(),
            truncation: truncation.into(),
            total_count: total,
            scale: 1.0,
        }
    }

    pub fn len(&self) -> usize {
        self.zeros.len()
    }

    pub fn is_empty(&self) -> bool {
        self.zeros.is_empty()
    }
}

struct Evaluator<'a, F: Fn(Complex64) -> Complex64> {
    f: &'a F,
    cache: RefCell<HashMap<(u64, u64), Complex64>>,
    calls: Cell<usize>,
}

impl<'a, F: Fn(Complex64) -> Complex64> Evaluator<'a, F> {
    fn new(f: &'a F) -> Self {
        Evaluator { f, cache: RefCell::new(HashMap::new()), calls: Cell::new(0) }
    }

    fn eval(&self, z: Complex64) -> Complex64 {
        let key = (z.re.to_bits(), z.im.to_bits());
        if let Some(&v) = self.cache.borrow().get(&key) {
            return v;
        }
        self.calls.set(self.calls.get() + 1);
        let v = (self.f)(z);
        self.cache.borrow_mut().insert(key, v);
        v
    }
}

fn median(mut vals: Vec<f64>) -> f64 {
    vals.sort_by(f64::total_cmp);
    let n = vals.len();
    if n % 2 == 1 {
        vals[n / 2]
    } else {
        0.5 * (vals[n / 2 - 1] + vals[n / 2])
    }
}

/// Phase increment along a segment, bisecting until each step is < pi/2.
///
/// Every acceptance is midpoint-verified: the two half-steps must agree
/// with the endpoint step (a mismatch is a whole hidden turn). Without
/// this, an interval whose true increment is near 2 pi reads as a small
/// step and silently drops a turn; entire-function growth factors make
/// such fast phase drift routine at large |Im s|.
fn phase_step<F: Fn(Complex64) -> Complex64>(
    ev: &Evaluator<F>,
    z1: Complex64,
    f1: Complex64,
    z2: Complex64,
    f2: Complex64,
    floor: f64,
    scale: f64,
    depth: usize,
) -> Result<f64, ZerosError> {
    let d = (f2 / f1).arg();
    if depth >= MAX_REFINE {
        if d.abs() < 0.5 * PI {
            return Ok(d);
        }
        return Err(ZerosError::NonConvergedSampling { segments: 1 });
    }
    let zm = 0.5 * (z1 + z2);
    if zm == z1 || zm == z2 {
        // The segment is below float resolution; nothing left to refine.
        return Ok(d);
    }
    let fm = ev.eval(zm);
    if fm.norm() <= floor {
        return Err(ZerosError::BoundaryZero { abs: fm.norm(), re: zm.re, im: zm.im, scale });
    }
    let d1 = (fm / f1).arg();
    let d2 = (f2 / fm).arg();
    // Small, mutually consistent steps are still not sufficient: a half
    // whose true increment is near 2 pi reads as a small step AND keeps the
    // halves consistent with the total, hiding a whole turn. Any such pass
    // requires skimming zeros, which makes |f| dip sharply across the
    // segment — so large magnitude spreads force refinement too.
    let lo = f1.norm().min(fm.norm()).min(f2.norm());
    let hi = f1.norm().max(fm.norm()).max(f2.norm());
    if d.abs() < 0.5 * PI
        && d1.abs() < 0.5 * PI
        && d2.abs() < 0.5 * PI
        && (d1 + d2 - d).abs() < PI
        && hi <= SEGMENT_RATIO_CAP * lo
    {
        return Ok(d);
    }
    Ok(phase_step(ev, z1, f1, zm, fm, floor, scale, depth + 1)?
        + phase_step(ev, zm, fm, z2, f2, floor, scale, depth + 1)?)
}

/// Winding number of F around `rect` at one boundary sampling density,
/// given as a multiplier on the rectangle's base per-edge sample counts.
fn winding_at<F: Fn(Complex64) -> Complex64>(
    ev: &Evaluator<F>,
    rect: &SearchRectangle,
    scale_in: Option<f64>,
    mult: usize,
) -> Result<(i64, f64), ZerosError> {
    let corners = [
        Complex64::new(rect.re_lo, rect.im_lo),
        Complex64::new(rect.re_hi, rect.im_lo),
        Complex64::new(rect.re_hi, rect.im_hi),
        Complex64::new(rect.re_lo, rect.im_hi),
    ];
    let mut pts = Vec::new();
    for i in 0..4 {
        let (a, b) = (corners[i], corners[(i + 1) % 4]);
        let len = (b - a).norm();
        let n = ((len * rect.density).ceil() as usize).max(8) * mult;
        for k in 0..n {
            pts.push(a + (b - a) * (k as f64 / n as f64));
        }
    }
    let vals: Vec<Complex64> = pts.iter().map(|&z| ev.eval(z)).collect();
    let local = median(vals.iter().map(|v| v.norm()).collect());
    let scale = scale_in.unwrap_or(local);
    // The zero-on-boundary guard is relative to this box's own boundary
    // median: an inherited outer scale can be orders of magnitude away
    // when |f| has strong exponential growth across the search region.
    let floor = BOUNDARY_TOL * local;
    for (z, v) in pts.iter().zip(&vals) {
        if v.norm() <= floor {
            return Err(ZerosError::BoundaryZero { abs: v.norm(), re: z.re, im: z.im, scale });
        }
    }
    let mut total = 0.0;
    for i in 0..pts.len() {
        let j = (i + 1) % pts.len();
        total += phase_step(ev, pts[i], vals[i], pts[j], vals[j], floor, scale, 0)?;
    }
    let w = (total / (2.0 * PI)).round();
    if (total / (2.0 * PI) - w).abs() > 0.25 {
        return Err(ZerosError::NonConvergedSampling { segments: pts.len() });
    }
    Ok((w as i64, scale))
}

/// Winding number of F around `rect`. `scale` is computed from the boundary
/// median when not supplied (sub-boxes inherit the outer scale so the zero
/// criterion stays uniform across a search).
///
/// The phase-tracking acceptance tests are sample-based and can in rare
/// geometries accept a segment hiding a whole turn (a tight zero cluster
/// passed between samples under a steep analytic background). A hidden turn
/// is tied to one segmentation, so the count is cross-validated at tripled
/// boundary density and accepted only when two consecutive densities agree.
/// The factor is 3, not 2: a doubled grid nests inside the base grid's
/// dyadic refinement lattice and would revisit the very samples that
/// accepted the alias, while a tripled grid shares almost none of them.
fn winding<F: Fn(Complex64) -> Complex64>(
    ev: &Evaluator<F>,
    rect: &SearchRectangle,
    scale_in: Option<f64>,
) -> Result<(i64, f64), ZerosError> {
    let (mut w, scale) = winding_at(ev, rect, scale_in, 1)?;
    let mut mult = 1;
    for _ in 0..DENSITY_ESCALATIONS {
        let (w2, _) = winding_at(ev, rect, scale_in, 3 * mult)?;
        if w2 == w {
            return Ok((w, scale));
        }
        w = w2;
        mult *= 3;
    }
    Err(ZerosError::WindingDensityMismatch { mult })
}

/// Number of zeros of `f` (with multiplicity) strictly inside `rect`, by the
/// argument principle. `f` must be analytic on the closed rectangle and
/// nonvanishing on its boundary.
pub fn count_zeros<F: Fn(Complex64) -> Complex64>(
    f: &F,
    rect: &SearchRectangle,
) -> Result<usize, ZerosError> {
    let ev = Evaluator::new(f);
    let (w, _) = winding(&ev, rect, None)?;
    if w < 0 {
        return Err(ZerosError::NonAnalyticWinding { winding: w });
    }
    Ok(w as usize)
}

/// Newton polish with multiplicity factor; derivative by central difference
/// with step `tol`. Succeeds when the residual drops below the scale-relative
/// threshold and the iterate stays near the owning box.
fn polish<F: Fn(Complex64) -> Complex64>(
    ev: &Evaluator<F>,
    rect: &SearchRectangle,
    mult: usize,
    tol: f64,
    scale: f64,
) -> Option<(Complex64, f64)> {
    // Only iterates inside the box (to a whisker of tolerance, for zeros
    // sitting on the box edge at roundoff scale) may be recorded: the
    // winding proves the box contains its zeros, and an iterate that exits
    // has been captured by a neighboring basin — accepting it would credit
    // this box's count to a different zero and silently drop a real one.
    // Quadrisection shrinks the box until the center falls in the right
    // basin instead.
    let accept = 2.0 * tol;
    let wander = 1.5 * rect.width().max(rect.height()) + tol;
    let mut z = rect.center();
    let h = Complex64::new(tol, 0.0);
    let target = RESIDUAL_TOL * scale;
    let cap = rect.width().max(rect.height());
    // A residual below target is necessary but not sufficient: near a
    // multiple zero the residual floor corresponds to a location error far
    // above tol, so iterate until the Newton step itself collapses and keep
    // the best in-box iterate seen.
    let mut best: Option<(Complex64, f64)> = None;
    for _ in 0..100 {
        let fz = ev.eval(z);
        let r = fz.norm();
        if rect.contains_slack(z, accept) && best.is_none_or(|(_, br)| r < br) {
            best = Some((z, r));
        }
        if r == 0.0 {
            break;
        }
        let df = (ev.eval(z + h) - ev.eval(z - h)) / (2.0 * tol);
        if df.norm() == 0.0 {
            break;
        }
        let mut step = fz / df * mult as f64;
        if step.norm() > cap {
            step *= cap / step.norm();
        }
        z -= step;
        if step.norm() < 0.25 * tol {
            let r2 = ev.eval(z).norm();
            if rect.contains_slack(z, accept) && best.is_none_or(|(_, br)| r2 < br) {
                best = Some((z, r2));
            }
            break;
        }
        if !rect.contains_slack(z, wander) {
            break;
        }
    }
    let (z, r) = best?;
    if r < target {
        return Some((z, r));
    }
    // The absolute residual can sit far above the rectangle-global threshold
    // when the evaluation's internal magnitudes near this zero dwarf the
    // boundary median: the cancellation noise floor is local, not global.
    // What the caller actually asked for is position accuracy, so accept on
    // backward error instead: the nearest zero of a function within |f(z)|
    // of `f` lies within about mult * |f(z)| / |f'(z)| of `z`.
    let df = (ev.eval(z + h) - ev.eval(z - h)) / (2.0 * tol);
    if df.norm() > 0.0 && mult as f64 * r <= df.norm() * tol {
        return Some((z, r));
    }
    None
}

/// Merges found zeros closer than `radius` into one entry with summed
/// multiplicity, multiplicity-weighted centroid, and the smallest residual.
fn merge_resolved(mut found: Vec<FoundZero>, radius: f64) -> Vec<FoundZero> {
    found.sort_by(|a, b| a.im.total_cmp(&b.im).then(a.re.total_cmp(&b.re)));
    let mut out: Vec<FoundZero> = Vec::with_capacity(found.len());
    for z in found {
        if let Some(last) = out.last_mut() {
            if (z.location() - last.location()).norm() <= radius {
                let m = last.multiplicity + z.multiplicity;
                let c = (last.location() * last.multiplicity as f64
                    + z.location() * z.multiplicity as f64)
                    / m as f64;
                last.re = c.re;
                last.im = c.im;
                last.multiplicity = m;
                last.residual = last.residual.min(z.residual);
                continue;
            }
        }
        out.push(z);
    }
    out
}

/// Locates all zeros of `f` inside `rect` to within `tol`, labeling the
/// result with `source` and `truncation` provenance strings.
///
/// Quadrisection keeps splitting any box holding two or more zeros until
/// boxes hold at most one or reach `tol`; every split is verified to
/// conserve the zero count, and internal edges that land on a zero are
/// retried at shifted split fractions. Box processing is a FIFO work queue
/// and the final set is sorted by (Im, Re), so output is deterministic.
pub fn locate_zeros<F: Fn(Complex64) -> Complex64>(
    f: &F,
    rect: &SearchRectangle,
    tol: f64,
    source: &str,
    truncation: &str,
) -> Result<ResonanceSet, ZerosError> {
    let ev = Evaluator::new(f);
    let (w, scale) = winding(&ev, rect, None)?;
    if w < 0 {
        return Err(ZerosError::NonAnalyticWinding { winding: w });
    }
    let total = w as usize;
    let mut found: Vec<FoundZero> = Vec::new();
    let mut queue: VecDeque<(SearchRectangle, usize, usize)> = VecDeque::new();
    queue.push_back((*rect, total, 0));
    while let Some((boxr, count, depth)) = queue.pop_front() {
        if count == 0 {
            continue;
        }
        let size = boxr.width().max(boxr.height());
        if count == 1 || size <= tol {
            if let Some((z, residual)) = polish(&ev, &boxr, count, tol, scale) {
                found.push(FoundZero { re: z.re, im: z.im, multiplicity: count, residual });
                continue;
            }
            // Once the box is well below tol, further splitting cannot help:
            // the boundary samples are already dominated by the same noise
            // that defeated the polish. Fail with the location in hand.
            if size <= 0.25 * tol {
                let c = boxr.center();
                return Err(ZerosError::UnresolvableCluster { re: c.re, im: c.im, count });
            }
        }
        if depth >= MAX_DEPTH {
            return Err(ZerosError::MaxDepth { depth });
        }
        // Split, verifying the children's counts conserve the parent's; an
        // internal edge through a zero or a miscount sends us to the next
        // split fraction.
        let mut last_err = None;
        let mut placed = false;
        for frac in SPLIT_FRACTIONS {
            let children = boxr.quadrants(frac);
            let mut counts = [0usize; 4];
            let mut ok = true;
            for (i, child) in children.iter().enumerate() {
                match winding(&ev, child, Some(scale)) {
                    Ok((w, _)) if w >= 0 => counts[i] = w as usize,
                    // A negative child winding means this split's edges
                    // under-sampled a fast phase region; retry like any
                    // other bad split rather than giving up.
                    Ok((w, _)) => {
                        last_err = Some(ZerosError::NonAnalyticWinding { winding: w });
                        ok = false;
                        break;
                    }
                    Err(e) => {
                        last_err = Some(e);
                        ok = false;
                        break;
                    }
                }
            }
            if ok && counts.iter().sum::<usize>() == count {
                for (child, c) in children.into_iter().zip(counts) {
                    if c > 0 {
                        queue.push_back((child, c, depth + 1));
                    }
                }
                placed = true;
                break;
            }
            if ok {
                last_err = Some(ZerosError::SplitCountMismatch {
                    parent: count,
                    children: counts.iter().sum(),
                });
            }
        }
        if !placed {
            // Every split line lands on a zero: a multiple zero (or a
            // cluster below the sampling floor) pinned at the box center.
            // Quadrisection cannot separate it; Newton with the full
            // multiplicity can still pin it down.
            if let Some((z, residual)) = polish(&ev, &boxr, count, tol, scale) {
                found.push(FoundZero { re: z.re, im: z.im, multiplicity: count, residual });
                continue;
            }
            return Err(last_err.unwrap_or(ZerosError::NonConvergedSampling { segments: 4 }));
        }
    }
    // A zero lying exactly on an internal split edge (below the boundary
    // sampling resolution) contributes pi to each side, so both children
    // read clean integer windings and each polishes onto the same point.
    // Entries closer than the resolution the search can claim are one zero:
    // merge them, summing multiplicity at the weighted centroid.
    found = merge_resolved(found, 3.0 * tol);
    found.sort_by(|a, b| a.im.total_cmp(&b.im).then(a.re.total_cmp(&b.re)));
    Ok(ResonanceSet {
        zeros: found,
        source: source.into(),
        truncation: truncation.into(),
        total_count: total,
        scale,
    })
}

/// Which spectral plane a zero set lives in.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum SpectralPlane {
    /// Surface resonances: zeros in the complex s-plane.
    Surface,
    /// Billiard resonances: zeros in the complex wavenumber k-plane.
    Billiard,
}

/// The frozen dictionary from a zero's position to (frequency, depth).
///
/// Surfaces: frequency = Im s, depth = 1/2 - Re s, so the semiclassical
/// strip "Re s >= 1/2 - gamma" is exactly "depth <= gamma" and a frequency
/// window "|Im s - T| <= C" keeps its literal meaning. Billiards:
/// frequency = Re k, depth = -Im k, so resonances below the real axis have
/// positive depth and the real axis itself is depth zero. Every strip
/// count, Weyl window, and gap margin in this module goes through this one
/// function.
pub fn plane_coordinates(plane: SpectralPlane, z: Complex64) -> (f64, f64) {
    match plane {
        SpectralPlane::Surface => (z.im, 0.5 - z.re),
        SpectralPlane::Billiard => (z.re, -z.im),
    }
}

/// Power-law fit of windowed zero counts along the frequency axis.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WeylFit {
    /// Slope of log N(T) against log T.
    pub exponent: f64,
    /// exp(intercept) of the same fit.
    pub prefactor: f64,
    pub strip_depth: f64,
    pub window_width: f64,
    /// (window center, multiplicity-weighted count) pairs used in the fit.
    pub windows: Vec<(f64, usize)>,
    /// Largest absolute residual of the log-log fit.
    pub residual: f64,
}

/// Counts zeros with depth at most `strip_depth` in frequency windows
/// `|frequency - T| <= window_width` around each center, then fits
/// log count against log center.
pub fn weyl_fit(
    res: &ResonanceSet,
    plane: SpectralPlane,
    strip_depth: f64,
    window_width: f64,
    window_centers: &[f64],
) -> Result<WeylFit, ZerosError> {
    if window_centers.len() < 4 {
        return Err(ZerosError::InsufficientWindows { given: window_centers.len() });
    }
    let mut windows = Vec::with_capacity(window_centers.len());
    let mut empty = Vec::new();
    for &t in window_centers {
        let mut n = 0usize;
        for z in &res.zeros {
            let (freq, depth) = plane_coordinates(plane, z.location());
            if depth <= strip_depth && (freq - t).abs() <= window_width {
                n += z.multiplicity;
            }
        }
        if n == 0 {
            empty.push(t);
        }
        windows.push((t, n));
    }
    if !empty.is_empty() {
        return Err(ZerosError::EmptyWindow { centers: empty });
    }
    let xs: Vec<f64> = windows.iter().map(|w| w.0.ln()).collect();
    let ys: Vec<f64> = windows.iter().map(|w| (w.1 as f64).ln()).collect();
    let (exponent, intercept, residual) = least_squares(&xs, &ys);
    Ok(WeylFit {
        exponent,
        prefactor: intercept.exp(),
        strip_depth,
        window_width,
        windows,
        residual,
    })
}

/// Spectral-gap summary of a zero set.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GapReport {
    pub plane: SpectralPlane,
    /// Zero nearest the spectral axis (minimal depth).
    pub shallowest_re: f64,
    pub shallowest_im: f64,
    /// Minimal depth over the set.
    pub observed_gap: f64,
    /// Surfaces: delta - max Re s (Patterson margin, >= 0 up to residuals).
    /// Billiards: min depth - (-pressure_half), distance of the shallowest
    /// zero below the pressure line.
    pub margin: f64,
    /// The conjectured essential-gap line Re s = (1 - delta)/2, reported as
    /// a probe only; `None` for billiard sets where it has no meaning.
    pub jakobson_naud_line: Option<f64>,
    /// Zeros strictly above the probe line (Re s > (1 - delta)/2).
    pub jakobson_naud_exceedances: Option<usize>,
    /// Multiplicity-weighted counts in six equal depth strips spanning
    /// [0, max depth].
    pub strip_counts: Vec<(f64, f64, usize)>,
}

/// Aggregates a zero set against the dimension `delta` and the pressure
/// value at beta = 1/2. Pure bookkeeping, no new zeros are computed.
pub fn gap_report(
    res: &ResonanceSet,
    plane: SpectralPlane,
    delta: f64,
    pressure_half: f64,
) -> Result<GapReport, ZerosError> {
    if res.is_empty() {
        return Err(ZerosError::EmptySet);
    }
    let coords: Vec<(Complex64, f64)> = res
        .zeros
        .iter()
        .map(|z| (z.location(), plane_coordinates(plane, z.location()).1))
        .collect();
    let (&(sh, observed_gap), _) = coords
        .iter()
        .zip(&res.zeros)
        .min_by(|a, b| a.0 .1.total_cmp(&b.0 .1))
        .expect("nonempty");
    let margin = match plane {
        SpectralPlane::Surface => delta - sh.re,
        SpectralPlane::Billiard => observed_gap + pressure_half,
    };
    let (jn_line, jn_exceed) = match plane {
        SpectralPlane::Surface => {
            let line = 0.5 * (1.0 - delta);
            let n = res
                .zeros
                .iter()
                .filter(|z| z.re > line)
                .map(|z| z.multiplicity)
                .sum();
            (Some(line), Some(n))
        }
        SpectralPlane::Billiard => (None, None),
    };
    let max_depth = coords.iter().map(|c| c.1).fold(0.0f64, f64::max);
    let edge = max_depth.max(1e-300) / 6.0;
    let mut strip_counts = Vec::with_capacity(6);
    for i in 0..6 {
        let (lo, hi) = (i as f64 * edge, (i + 1) as f64 * edge);
        let n = coords
            .iter()
            .zip(&res.zeros)
            .filter(|((_, d), _)| *d >= lo && (*d < hi || (i == 5 && *d <= hi)))
            .map(|(_, z)| z.multiplicity)
            .sum();
        strip_counts.push((lo, hi, n));
    }
    Ok(GapReport {
        plane,
        shallowest_re: sh.re,
        shallowest_im: sh.im,
        observed_gap,
        margin,
        jakobson_naud_line: jn_line,
        jakobson_naud_exceedances: jn_exceed,
        strip_counts,
    })
}
