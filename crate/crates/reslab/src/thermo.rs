//! Thermodynamic formalism over a table of primitive periodic orbits:
//! topological pressure, entropy, the dimension root of the pressure, and
//! the half-pressure spectral gap prediction.
//!
//! The pressure `P(beta)` weighs orbits by `J^u(g)^{-beta}` against their
//! exponential proliferation. Two estimators are provided. The `zeta_root`
//! method (primary) locates the largest real root in `s` of the flow zeta
//! product `prod over primitives (1 - exp(-s T_g) J^u(g)^{-beta})`, expanded
//! by word-length grade exactly as in [`crate::xfer`]; the root equals the
//! pressure and converges superexponentially in the truncation. The `window`
//! method is the literal definition: sum `J^{-beta}` over orbits (including
//! repeated traversals) with periods in windows `[T, T+1]` and extract the
//! exponential rate of the window sums `S(T)`.
//!
//! How the rate is extracted from `S(T)` is a documented choice, not a
//! canonical one. Period spectra of disk billiards and Schottky groups are
//! lacunary at accessible truncations (periods cluster near multiples of the
//! shortest flight), so a least-squares line through `ln S(T)` on a fixed
//! `T` grid is biased low by the empty stretches and by window edges that
//! chop clusters. Instead, each maximal run of nonempty windows is collapsed
//! to a single point (weighted period centroid, total mass), and the slope
//! of `ln(mass * centroid)` against the centroid is fitted across runs; the
//! `ln T` factor compensates the `exp(P T)/T` prefactor of the orbit count.
//! On the standard fixtures this tracks the root method within 0.02 once
//! ensembles reach word length 8; shorter cutoffs (one or two period
//! clusters) cannot determine a slope and are reported via `EmptyWindow`
//! or produce visibly larger discrepancies.
//!
//! For geodesic ensembles `J^u = exp(ell)`, so `P(beta) = delta - beta`
//! identically and the dimension root reproduces the limit-set dimension;
//! this linearity is pinned by tests rather than assumed anywhere.

use crate::billiard::BounceOrbit;
use crate::schottky::{least_squares, GeodesicClass};
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum ThermoError {
    #[error("orbit ensemble is empty")]
    EmptyEnsemble,
    #[error("window pressure needs at least 3 separated runs of nonempty windows, found {nonempty} (windows become empty after T = {empty_starts:?})")]
    EmptyWindow { nonempty: usize, empty_starts: Vec<f64> },
    #[error("no sign change of the flow zeta in s within [{lo}, {hi}] after bracket expansion")]
    NoRootBracket { lo: f64, hi: f64 },
    #[error("dimension root needs P(0) > 0 > P(1), got P(0) = {p0:.6}, P(1) = {p1:.6}")]
    NoBracket { p0: f64, p1: f64 },
}

/// One primitive orbit: period, log unstable Jacobian, and symbolic grade
/// (word length) for the expansion.
#[derive(Debug, Clone, Copy)]
pub struct OrbitDatum {
    pub period: f64,
    pub log_j: f64,
    pub grade: usize,
}

/// Immutable, period-sorted table of primitive orbits from one source.
#[derive(Debug, Clone)]
pub struct OrbitEnsemble {
    entries: Vec<OrbitDatum>,
    source: String,
    max_word_len: usize,
}

impl OrbitEnsemble {
    pub fn new(
        mut entries: Vec<OrbitDatum>,
        source: impl Into<String>,
        max_word_len: usize,
    ) -> Self {
        entries.sort_by(|a, b| a.period.total_cmp(&b.period));
        OrbitEnsemble { entries, source: source.into(), max_word_len }
    }

    /// Geodesic ensemble: period = length, `J^u = exp(length)`.
    pub fn from_geodesics(classes: &[GeodesicClass], max_word_len: usize) -> Self {
        let entries = classes
            .iter()
            .map(|c| OrbitDatum { period: c.length, log_j: c.length, grade: c.word.len() })
            .collect();
        OrbitEnsemble::new(entries, "geodesics", max_word_len)
    }

    /// Billiard ensemble from a primitive bounce-orbit table.
    pub fn from_orbits(orbits: &[BounceOrbit], max_word_len: usize) -> Self {
        let entries = orbits
            .iter()
            .map(|o| OrbitDatum { period: o.period, log_j: o.j_u.ln(), grade: o.word.len() })
            .collect();
        OrbitEnsemble::new(entries, "billiard", max_word_len)
    }

    pub fn entries(&self) -> &[OrbitDatum] {
        &self.entries
    }

    pub fn source(&self) -> &str {
        &self.source
    }

    pub fn max_word_len(&self) -> usize {
        self.max_word_len
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Smallest period per symbol; periods of word length `n` are at least
    /// `n` times this, so the table is complete up to
    /// `(max_word_len + 1) * min_rate`.
    pub fn min_rate(&self) -> f64 {
        self.entries
            .iter()
            .map(|e| e.period / e.grade as f64)
            .fold(f64::INFINITY, f64::min)
    }

    /// Horizon below which every primitive orbit is guaranteed enumerated.
    pub fn completeness_horizon(&self) -> f64 {
        (self.max_word_len as f64 + 1.0) * self.min_rate()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PressureMethod {
    /// Least-squares slope of corrected log window sums (literal definition).
    Window,
    /// Largest real root of the expanded flow zeta product (primary).
    ZetaRoot,
}

impl std::fmt::Display for PressureMethod {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            PressureMethod::Window => "window",
            PressureMethod::ZetaRoot => "zeta_root",
        })
    }
}

/// Expanded flow zeta `prod (1 - exp(-s T) J^{-beta})` truncated at the
/// ensemble's word-length grade; the exponent is clamped so deep bracket
/// probes saturate instead of overflowing.
fn flow_zeta(ens: &OrbitEnsemble, s: f64, beta: f64) -> f64 {
    let l = ens.max_word_len;
    let mut coeffs = vec![0.0f64; l + 1];
    coeffs[0] = 1.0;
    for e in &ens.entries {
        let t = (-s * e.period - beta * e.log_j).min(600.0).exp();
        for g in (e.grade..=l).rev() {
            let update = t * coeffs[g - e.grade];
            coeffs[g] -= update;
        }
    }
    coeffs.iter().sum()
}

fn zeta_root_pressure(ens: &OrbitEnsemble, beta: f64) -> Result<f64, ThermoError> {
    let max_rate = ens
        .entries
        .iter()
        .map(|e| e.log_j / e.period)
        .fold(0.0f64, f64::max);
    // Entropy is at most the log branch count per unit of the shortest
    // period; use it as the upper end of the initial bracket.
    let h_guess = ((ens.entries.len() as f64).ln() / ens.min_rate()).max(1.0);
    let mut lo = -2.0 * beta * max_rate - 0.125;
    let mut hi = 2.0 * h_guess;
    for _ in 0..=8 {
        // The product tends to 1 from above for large s; walk down to the
        // first sign change, which brackets the largest real root.
        if flow_zeta(ens, hi, beta) > 0.0 {
            let steps = 256;
            let dx = (hi - lo) / steps as f64;
            let mut upper = hi;
            let mut found = None;
            for i in 1..=steps {
                let s = hi - dx * i as f64;
                if flow_zeta(ens, s, beta) <= 0.0 {
                    found = Some((s, upper));
                    break;
                }
                upper = s;
            }
            if let Some((mut a, mut b)) = found {
                for _ in 0..80 {
                    let mid = 0.5 * (a + b);
                    if flow_zeta(ens, mid, beta) <= 0.0 {
                        a = mid;
                    } else {
                        b = mid;
                    }
                }
                return Ok(0.5 * (a + b));
            }
        }
        lo = lo * 2.0 - 0.5;
        hi = hi * 2.0 + 0.5;
    }
    Err(ThermoError::NoRootBracket { lo, hi })
}

fn window_pressure(ens: &OrbitEnsemble, beta: f64) -> Result<f64, ThermoError> {
    let horizon = ens.completeness_horizon();
    // Point masses (r*T, J^{-r*beta}) for every traversal within the horizon.
    let mut hits: Vec<(f64, f64)> = Vec::new();
    for e in &ens.entries {
        let mut r = 1.0f64;
        while r * e.period <= horizon {
            hits.push((r * e.period, (-beta * r * e.log_j).min(600.0).exp()));
            r += 1.0;
        }
    }
    hits.sort_by(|a, b| a.0.total_cmp(&b.0));
    // Two hits share a run iff some window [T, T+1] contains both; runs are
    // separated exactly where a unit window slides through empty spectrum.
    let mut runs: Vec<(f64, f64)> = Vec::new();
    let mut empty_starts = Vec::new();
    let mut i = 0;
    while i < hits.len() {
        let mut j = i;
        let (mut mass, mut moment) = (0.0f64, 0.0f64);
        while j < hits.len() && (j == i || hits[j].0 - hits[j - 1].0 <= 1.0) {
            mass += hits[j].1;
            moment += hits[j].0 * hits[j].1;
            j += 1;
        }
        runs.push((moment / mass, mass));
        if j < hits.len() || hits[j - 1].0 + 1.0 < horizon {
            empty_starts.push(hits[j - 1].0);
        }
        i = j;
    }
    if runs.len() < 3 {
        return Err(ThermoError::EmptyWindow { nonempty: runs.len(), empty_starts });
    }
    let xs: Vec<f64> = runs.iter().map(|r| r.0).collect();
    let ys: Vec<f64> = runs.iter().map(|r| r.1.ln() + r.0.ln()).collect();
    let (slope, _, _) = least_squares(&xs, &ys);
    Ok(slope)
}

/// Topological pressure at inverse-Jacobian weight `beta`.
pub fn pressure(
    ens: &OrbitEnsemble,
    beta: f64,
    method: PressureMethod,
) -> Result<f64, ThermoError> {
    if ens.is_empty() {
        return Err(ThermoError::EmptyEnsemble);
    }
    match method {
        PressureMethod::Window => window_pressure(ens, beta),
        PressureMethod::ZetaRoot => zeta_root_pressure(ens, beta),
    }
}

/// Topological entropy `P(0)`.
pub fn entropy(ens: &OrbitEnsemble) -> Result<f64, ThermoError> {
    pressure(ens, 0.0, PressureMethod::ZetaRoot)
}

/// Dimension parameter `delta` with `P(delta) = 0`, from the root-method
/// pressure by bisection; requires the chaotic bracket `P(0) > 0 > P(1)`.
/// The bracket test uses a 1e-9 dead zone: a root-method value closer to
/// zero than the bisection resolves (single-orbit ensembles have P(0) = 0
/// exactly, computed as roundoff of either sign) counts as no bracket.
pub fn bowen_dimension(ens: &OrbitEnsemble) -> Result<f64, ThermoError> {
    const BRACKET_EPS: f64 = 1e-9;
    let p0 = pressure(ens, 0.0, PressureMethod::ZetaRoot)?;
    let p1 = pressure(ens, 1.0, PressureMethod::ZetaRoot)?;
    if p0 <= BRACKET_EPS || p1 >= -BRACKET_EPS {
        return Err(ThermoError::NoBracket { p0, p1 });
    }
    let (mut a, mut b) = (0.0f64, 1.0f64);
    for _ in 0..60 {
        let mid = 0.5 * (a + b);
        if pressure(ens, mid, PressureMethod::ZetaRoot)? > 0.0 {
            a = mid;
        } else {
            b = mid;
        }
    }
    Ok(0.5 * (a + b))
}

/// Predicted resonance gap from the pressure at `beta = 1/2`.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct GapPrediction {
    pub pressure_half: f64,
    /// `max(0, -P(1/2))`: width of the predicted resonance-free strip.
    pub gap_width: f64,
    /// Whether the criterion says anything (`P(1/2) < 0`).
    pub informative: bool,
}

pub fn gap_prediction(ens: &OrbitEnsemble) -> Result<GapPrediction, ThermoError> {
    let pressure_half = pressure(ens, 0.5, PressureMethod::ZetaRoot)?;
    Ok(GapPrediction {
        pressure_half,
        gap_width: (-pressure_half).max(0.0),
        informative: pressure_half < 0.0,
    })
}

/// Samples `P(beta)` on a grid with one method.
pub fn pressure_curve(
    ens: &OrbitEnsemble,
    betas: &[f64],
    method: PressureMethod,
) -> Result<Vec<(f64, f64)>, ThermoError> {
    betas
        .iter()
        .map(|&b| pressure(ens, b, method).map(|p| (b, p)))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::billiard::DiskSystem;
    use crate::schottky::{SchottkyGroup, CLASS_CAP};

    fn two_disk_ensemble() -> (OrbitEnsemble, f64, f64) {
        let s = DiskSystem::two_disk(6.0, 1.0).unwrap();
        let orbits = s.enumerate_orbits(4, CLASS_CAP).unwrap();
        let (t, log_j) = (orbits[0].period, orbits[0].j_u.ln());
        (OrbitEnsemble::from_orbits(&orbits, 4), t, log_j)
    }

    fn triangle_ensemble(side: f64, max_len: usize) -> OrbitEnsemble {
        let s = DiskSystem::equilateral(side, 1.0).unwrap();
        OrbitEnsemble::from_orbits(&s.enumerate_orbits(max_len, CLASS_CAP).unwrap(), max_len)
    }

    fn funnel_ensemble(max_len: usize) -> OrbitEnsemble {
        let g = SchottkyGroup::symmetric_funnels(6.0, 0.35, 2.45).unwrap();
        OrbitEnsemble::from_geodesics(&g.enumerate_primitives(max_len, CLASS_CAP).unwrap(), max_len)
    }

    #[test]
    fn single_orbit_pressure_is_exact() {
        let (ens, t, log_j) = two_disk_ensemble();
        for beta in [0.0, 0.25, 0.5, 1.0, 2.0] {
            let p = pressure(&ens, beta, PressureMethod::ZetaRoot).unwrap();
            assert!(
                (p - (-beta * log_j / t)).abs() < 1e-10,
                "beta {beta}: {p} vs {}",
                -beta * log_j / t
            );
        }
        assert!(entropy(&ens).unwrap().abs() < 1e-10);
        let gap = gap_prediction(&ens).unwrap();
        assert!((gap.gap_width - log_j / (2.0 * t)).abs() < 1e-10);
        assert!(gap.informative);
    }

    #[test]
    fn single_orbit_has_no_dimension_bracket() {
        let (ens, _, _) = two_disk_ensemble();
        match bowen_dimension(&ens) {
            Err(ThermoError::NoBracket { p0, .. }) => assert!(p0.abs() < 1e-9),
            other => panic!("expected NoBracket, got {other:?}"),
        }
    }

    #[test]
    fn flat_expansion_rates_have_no_dimension_bracket() {
        // Full 3-shift mimic with J^u = exp(0.1 * period): primitive necklace
        // counts 3, 3, 8, 18 make the expansion collapse to 1 - 3x with
        // x = exp(-s - 0.1 beta), so P(beta) = ln 3 - 0.1 beta exactly and
        // P(1) > 0 blocks the dimension bracket.
        let mut entries = Vec::new();
        for (n, count) in [(1usize, 3usize), (2, 3), (3, 8), (4, 18)] {
            let p = n as f64;
            entries
                .extend(vec![OrbitDatum { period: p, log_j: 0.1 * p, grade: n }; count]);
        }
        let ens = OrbitEnsemble::new(entries, "synthetic", 4);
        let p0 = pressure(&ens, 0.0, PressureMethod::ZetaRoot).unwrap();
        assert!((p0 - 3.0f64.ln()).abs() < 1e-9, "full-shift entropy: {p0}");
        match bowen_dimension(&ens) {
            Err(ThermoError::NoBracket { p1, .. }) => assert!(p1 > 0.5),
            other => panic!("expected NoBracket, got {other:?}"),
        }
    }

    #[test]
    fn sparse_short_ensemble_reports_empty_windows() {
        let s = DiskSystem::two_disk(6.0, 1.0).unwrap();
        let orbits = s.enumerate_orbits(2, CLASS_CAP).unwrap();
        let ens = OrbitEnsemble::from_orbits(&orbits, 2);
        match pressure(&ens, 0.5, PressureMethod::Window) {
            Err(ThermoError::EmptyWindow { nonempty, empty_starts }) => {
                assert!(nonempty < 3);
                assert!(!empty_starts.is_empty());
            }
            other => panic!("expected EmptyWindow, got {other:?}"),
        }
    }

    #[test]
    fn triangle_entropy_is_positive_and_methods_agree() {
        let ens = triangle_ensemble(6.0, 12);
        let root = pressure(&ens, 0.0, PressureMethod::ZetaRoot).unwrap();
        let window = pressure(&ens, 0.0, PressureMethod::Window).unwrap();
        assert!(root > 0.0 && window > 0.0);
        assert!((root - window).abs() <= 0.02, "root {root} window {window}");
        assert!((entropy(&ens).unwrap() - root).abs() < 1e-12);
    }

    #[test]
    fn funnel_cross_method_agreement() {
        let ens = funnel_ensemble(10);
        for beta in [0.0, 0.25, 0.5, 1.0] {
            let root = pressure(&ens, beta, PressureMethod::ZetaRoot).unwrap();
            let window = pressure(&ens, beta, PressureMethod::Window).unwrap();
            assert!(
                (root - window).abs() <= 0.02,
                "beta {beta}: root {root} window {window}"
            );
        }
    }

    #[test]
    fn geodesic_pressure_is_linear_with_unit_slope() {
        // J^u = exp(ell) forces P(beta) = delta - beta for the root method.
        let ens = funnel_ensemble(6);
        let p03 = pressure(&ens, 0.3, PressureMethod::ZetaRoot).unwrap();
        let p07 = pressure(&ens, 0.7, PressureMethod::ZetaRoot).unwrap();
        assert!((p03 - p07 - 0.4).abs() < 1e-8, "P(0.3) {p03}, P(0.7) {p07}");
    }

    #[test]
    fn pressure_is_decreasing_and_convex() {
        let ens = triangle_ensemble(6.0, 8);
        let betas: Vec<f64> = (0..=10).map(|i| i as f64 / 10.0).collect();
        let curve = pressure_curve(&ens, &betas, PressureMethod::ZetaRoot).unwrap();
        for w in curve.windows(2) {
            assert!(w[1].1 < w[0].1, "not decreasing at beta {}", w[1].0);
        }
        for w in curve.windows(3) {
            let mid_excess = 0.5 * (w[0].1 + w[2].1) - w[1].1;
            assert!(mid_excess > -1e-3, "convexity violated at beta {}", w[1].0);
        }
        assert!(pressure(&ens, 1.0, PressureMethod::ZetaRoot).unwrap() < 0.0);
    }

    #[test]
    fn pressure_is_stable_under_truncation_growth() {
        let coarse = triangle_ensemble(6.0, 10);
        let fine = triangle_ensemble(6.0, 12);
        for beta in [0.0, 0.5, 1.0] {
            let a = pressure(&coarse, beta, PressureMethod::ZetaRoot).unwrap();
            let b = pressure(&fine, beta, PressureMethod::ZetaRoot).unwrap();
            assert!((a - b).abs() < 0.02, "beta {beta}: {a} vs {b}");
        }
        let h10 = entropy(&coarse).unwrap();
        let h12 = entropy(&fine).unwrap();
        assert!(h10 > 0.0 && (h10 - h12).abs() < 0.01, "{h10} vs {h12}");
    }

    #[test]
    fn dimension_root_changes_sign() {
        let ens = funnel_ensemble(8);
        let delta = bowen_dimension(&ens).unwrap();
        assert!(delta > 0.0 && delta < 1.0);
        assert!(pressure(&ens, delta - 0.01, PressureMethod::ZetaRoot).unwrap() > 0.0);
        assert!(pressure(&ens, delta + 0.01, PressureMethod::ZetaRoot).unwrap() < 0.0);
        assert!((pressure(&ens, delta, PressureMethod::ZetaRoot).unwrap()).abs() < 1e-8);
    }

    #[test]
    fn thin_triangle_has_a_pressure_gap() {
        let ens = triangle_ensemble(12.0, 10);
        let delta = bowen_dimension(&ens).unwrap();
        assert!(delta < 0.5, "thin system should have delta < 1/2, got {delta}");
        let gap = gap_prediction(&ens).unwrap();
        assert!(gap.informative && gap.gap_width > 0.0);
        assert!(gap.pressure_half < 0.0);
    }
}
