//! Acceptance gate: one test per headline capability, each printing a
//! PASS line with its measured numbers (run with `--nocapture` to see them;
//! the per-test ok/FAILED line from the harness carries the verdict either
//! way). Budgeted runtimes are asserted inside the tests. The heavy strip
//! scan (criterion 6) measures wall time against a total work budget of
//! 240 CPU-minutes; this suite runs single-threaded, so wall time here is
//! CPU time.

mod common;

use common::{funnel_group, thin_disk_system, two_disk_system};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use reslab::billiard::BilliardZeta;
use reslab::fup::{fup_norm, CantorSpec};
use reslab::schottky::{least_squares, CLASS_CAP};
use reslab::thermo::{bowen_dimension, gap_prediction, pressure_curve, OrbitEnsemble, PressureMethod};
use reslab::xfer::{CycleExpansion, TransferAssembly, TransferDiscretization};
use reslab::zeros::{count_zeros, locate_zeros, SearchRectangle};
use std::f64::consts::PI;
use std::time::Instant;

fn funnel_delta() -> f64 {
    let group = funnel_group();
    let classes = group.enumerate_primitives(8, CLASS_CAP).unwrap();
    bowen_dimension(&OrbitEnsemble::from_geodesics(&classes, 8)).unwrap()
}

fn bisect(f: &dyn Fn(f64) -> f64, mut lo: f64, mut hi: f64) -> f64 {
    let (mut flo, fhi) = (f(lo), f(hi));
    assert!(
        flo * fhi < 0.0,
        "no sign change on [{lo}, {hi}]: {flo:.3e} .. {fhi:.3e}"
    );
    for _ in 0..80 {
        let mid = 0.5 * (lo + hi);
        let fm = f(mid);
        if fm == 0.0 {
            return mid;
        }
        if flo * fm < 0.0 {
            hi = mid;
        } else {
            lo = mid;
            flo = fm;
        }
    }
    0.5 * (lo + hi)
}

#[test]
fn criterion_1_two_disk_resonance_lattice() {
    let start = Instant::now();
    let sys = two_disk_system();
    let orbit = &sys.enumerate_orbits(2, CLASS_CAP).unwrap()[0];
    let (t_p, log_ju) = (orbit.period, orbit.j_u.ln());

    // Grade-10 expansion keeps the line structure of the single-orbit
    // product intact to far below the tolerance on the first three lines.
    let zeta = BilliardZeta::new(&sys, 10, CLASS_CAP).unwrap();
    let f = |k: Complex64| zeta.eval(k, 12);
    let rect = SearchRectangle::from_bounds(0.05, 9.0, -1.7, -0.05).unwrap();
    let set = locate_zeros(&f, &rect, 1e-10, "acceptance", "L=10").unwrap();
    assert!(set.zeros.len() >= 30, "need at least 30 zeros, found {}", set.zeros.len());

    let mut zeros: Vec<Complex64> = set.zeros.iter().map(|z| z.location()).collect();
    zeros.sort_by(|a, b| a.norm().total_cmp(&b.norm()));
    zeros.truncate(30);

    let lattice = |k: Complex64| {
        let q = (k.re * t_p / (2.0 * PI)).round();
        let l = (-k.im * t_p / log_ju - 0.5).round();
        Complex64::new(2.0 * PI * q / t_p, -(0.5 + l) * log_ju / t_p)
    };
    // The analytic model allows a uniform real (frequency) offset; fit it
    // and compare the residuals.
    let offset =
        zeros.iter().map(|&k| k.re - lattice(k).re).sum::<f64>() / zeros.len() as f64;
    let worst = zeros
        .iter()
        .map(|&k| ((k - Complex64::new(offset, 0.0)) - lattice(k)).norm() / lattice(k).norm())
        .fold(0.0f64, f64::max);
    let elapsed = start.elapsed().as_secs_f64();
    assert!(worst <= 1e-8, "worst relative lattice error {worst:.2e} > 1e-8");
    assert!(elapsed < 10.0, "runtime {elapsed:.1}s exceeds 10s");
    println!(
        "criterion 1 PASS: 30 zeros match the half-lattice, worst rel err {worst:.2e}, \
         offset {offset:+.2e}, {elapsed:.1}s"
    );
}

#[test]
fn criterion_2_determinant_vs_cycle_expansion() {
    let start = Instant::now();
    let group = funnel_group();
    let det = TransferAssembly::new(&group, TransferDiscretization { nodes_per_disk: 24 });
    let cycle = CycleExpansion::new(&group, 12, CLASS_CAP).unwrap();
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(20260819);
    let mut max_diff = 0.0f64;
    for _ in 0..20 {
        let s = Complex64::new(rng.gen_range(0.0..1.0), rng.gen_range(0.0..30.0));
        let diff = (det.zeta_det(s) - cycle.eval(s, None).value).norm();
        max_diff = max_diff.max(diff);
        assert!(diff <= 1e-6, "methods differ by {diff:.2e} at {s}");
    }
    let elapsed = start.elapsed().as_secs_f64();
    assert!(elapsed < 60.0, "runtime {elapsed:.1}s exceeds 60s");
    println!(
        "criterion 2 PASS: 20 seeded points, max |det - cycle| = {max_diff:.2e}, {elapsed:.1}s"
    );
}

#[test]
fn criterion_3_dimension_triple_consistency() {
    let start = Instant::now();
    let group = funnel_group();
    let delta_orbit = funnel_delta();

    let assembly = TransferAssembly::new(&group, TransferDiscretization { nodes_per_disk: 40 });
    let delta_eigen = bisect(&|s| assembly.leading_eigenvalue(s) - 1.0, 0.02, 0.9);

    // First real zero of the determinant scanning down from s = 1.
    let g = |s: f64| assembly.zeta_det(Complex64::new(s, 0.0)).re;
    let mut upper = 1.0;
    let mut delta_zeta = None;
    while upper > 0.02 {
        let lower = upper - 0.01;
        if g(upper) * g(lower) < 0.0 {
            delta_zeta = Some(bisect(&g, lower, upper));
            break;
        }
        upper = lower;
    }
    let delta_zeta = delta_zeta.expect("determinant has a real zero above 0.02");

    let pairs = [
        ("orbit-sum vs eigenvalue", delta_orbit, delta_eigen),
        ("orbit-sum vs zeta zero", delta_orbit, delta_zeta),
        ("eigenvalue vs zeta zero", delta_eigen, delta_zeta),
    ];
    for (name, a, b) in pairs {
        assert!((a - b).abs() <= 1e-3, "{name}: {a:.6} vs {b:.6}");
    }

    let scales: Vec<f64> = (5..=12).map(|k| 0.5f64.powi(k)).collect();
    let boxes = group.limit_set_boxcount(12, &scales).unwrap();
    let box_diff = (boxes.dimension_estimate - delta_orbit).abs();
    assert!(box_diff <= 0.05, "box-count {:.4} vs delta {delta_orbit:.4}", boxes.dimension_estimate);

    let elapsed = start.elapsed().as_secs_f64();
    assert!(elapsed < 120.0, "runtime {elapsed:.1}s exceeds 120s");
    println!(
        "criterion 3 PASS: delta = {delta_orbit:.6} (orbit) / {delta_eigen:.6} (eigen) / \
         {delta_zeta:.6} (zeta), box-count {:.4} (diff {box_diff:.4}), {elapsed:.1}s",
        boxes.dimension_estimate
    );
}

#[test]
fn criterion_4_patterson_bound_on_resonances() {
    let start = Instant::now();
    let group = funnel_group();
    let delta = funnel_delta();

    // Certificate for the whole box [-1,1] x [0,100]i: the argument
    // principle counts zero zeros right of delta + 1e-6, so every located
    // resonance (any subset of the actual zero set) obeys the bound.
    let m60 = TransferAssembly::new(&group, TransferDiscretization { nodes_per_disk: 60 });
    let f60 = |s: Complex64| m60.zeta_det(s);
    let low = SearchRectangle::from_bounds(delta + 1e-6, 1.0, -0.02, 60.0).unwrap();
    let n_low = count_zeros(&f60, &low).unwrap();
    let m80 = TransferAssembly::new(&group, TransferDiscretization { nodes_per_disk: 80 });
    let f80 = |s: Complex64| m80.zeta_det(s);
    let high = SearchRectangle::from_bounds(delta + 1e-6, 1.0, 60.0, 100.0).unwrap();
    let n_high = count_zeros(&f80, &high).unwrap();
    assert_eq!(n_low + n_high, 0, "found zeros right of delta: {n_low} + {n_high}");

    // The supremum is attained: the rightmost zero near the real axis is
    // the real zero at s = delta. The left edge stays clear of the zero
    // that sits at s = 0, which a boundary sample would otherwise graze.
    let patch = SearchRectangle::from_bounds(0.02, 0.5, -0.05, 2.0).unwrap();
    let set = locate_zeros(&f60, &patch, 1e-10, "acceptance", "M=60").unwrap();
    let top = set
        .zeros
        .iter()
        .map(|z| z.location())
        .max_by(|a, b| a.re.total_cmp(&b.re))
        .expect("patch around (delta, 0) holds zeros");
    assert!((top.re - delta).abs() <= 1e-6, "sup Re {} vs delta {delta}", top.re);
    assert!(top.im.abs() <= 1e-6, "sup attained off the real axis: Im {}", top.im);

    let elapsed = start.elapsed().as_secs_f64();
    println!(
        "criterion 4 PASS: 0 zeros in [delta+1e-6, 1] x [0, 100]i, sup at \
         {:+.8}{:+.1e}i = delta to {:.1e}, {elapsed:.1}s",
        top.re,
        top.im,
        (top.re - delta).abs()
    );
}

#[test]
fn criterion_5_pressure_gap_on_the_thin_system() {
    let start = Instant::now();
    let sys = thin_disk_system();
    let orbits = sys.enumerate_orbits(8, CLASS_CAP).unwrap();
    let ens = OrbitEnsemble::from_orbits(&orbits, 8);
    let prediction = gap_prediction(&ens).unwrap();
    assert!(prediction.informative, "P(1/2) must be negative for a gap");
    let line = prediction.pressure_half;
    let eps = 0.05 * line.abs();

    let zeta = BilliardZeta::new(&sys, 8, CLASS_CAP).unwrap();
    let f = |k: Complex64| zeta.eval(k, 8);
    let mut above = 0usize;
    for (lo, hi) in [(0.5, 14.0), (14.0, 27.0), (27.0, 40.0)] {
        let rect = SearchRectangle::from_bounds(lo, hi, line + eps, -1e-3).unwrap();
        above += count_zeros(&f, &rect).unwrap();
    }
    assert_eq!(above, 0, "zeros found above the pressure line");

    let below_rect = SearchRectangle::from_bounds(0.5, 14.0, line - 0.45, line - eps).unwrap();
    let below = count_zeros(&f, &below_rect).unwrap();
    assert!(below >= 1, "no zeros below the pressure line");

    let elapsed = start.elapsed().as_secs_f64();
    println!(
        "criterion 5 PASS: P(1/2) = {line:.6}, margin {eps:.4}; 0 zeros above over \
         Re in [0.5, 40], {below} below, {elapsed:.1}s"
    );
}

#[test]
fn criterion_6_fractal_weyl_exponent() {
    let start = Instant::now();
    let group = funnel_group();
    let delta = funnel_delta();

    // Strip [0, 1] in Re s; frequency windows of halfwidth 12. The two
    // discretization orders are each converged well past their window tops.
    let m80 = TransferAssembly::new(&group, TransferDiscretization { nodes_per_disk: 80 });
    let m100 = TransferAssembly::new(&group, TransferDiscretization { nodes_per_disk: 100 });
    let centers = [40.0, 64.0, 88.0, 112.0, 136.0, 160.0];
    let mut counts = Vec::new();
    for &t in &centers {
        let rect = SearchRectangle::from_bounds(0.0, 1.0, t - 12.0, t + 12.0).unwrap();
        let n = if t <= 100.0 {
            count_zeros(&|s| m80.zeta_det(s), &rect).unwrap()
        } else {
            count_zeros(&|s| m100.zeta_det(s), &rect).unwrap()
        };
        assert!(n > 0, "empty window at T = {t}");
        counts.push(n);
    }

    let ln_t: Vec<f64> = centers.iter().map(|t| t.ln()).collect();
    let ln_n: Vec<f64> = counts.iter().map(|&n| (n as f64).ln()).collect();
    let (exponent, _, _) = least_squares(&ln_t, &ln_n);
    let diff = (exponent - delta).abs();
    assert!(diff <= 0.15, "fitted exponent {exponent:.3} vs delta {delta:.3}");

    // Upper-bound clause: N(T) <= C T^(delta+0.1) for one fitted C is
    // equivalent to the ratios N/T^(delta+0.1) staying within a bounded
    // spread; 1.25 is the documented tolerance (a genuine excess growth
    // trend over the tested octave-and-a-half would push far past it).
    let ratios: Vec<f64> = centers
        .iter()
        .zip(&counts)
        .map(|(&t, &n)| n as f64 / t.powf(delta + 0.1))
        .collect();
    let spread = ratios.iter().fold(0.0f64, |a, &r| a.max(r))
        / ratios.iter().fold(f64::INFINITY, |a, &r| a.min(r));
    assert!(spread <= 1.25, "ratio spread {spread:.3} exceeds 1.25");

    let elapsed = start.elapsed().as_secs_f64();
    // Work budget: 30 minutes across 8 workers = 240 CPU-minutes.
    assert!(elapsed < 240.0 * 60.0, "work budget exceeded: {elapsed:.0}s");
    println!(
        "criterion 6 PASS: counts {counts:?} over T = 40..160, exponent {exponent:.3} \
         (delta {delta:.3}, diff {diff:.3}), ratio spread {spread:.3}, {elapsed:.0}s wall"
    );
}

#[test]
fn criterion_7_uncertainty_exponents() {
    let start = Instant::now();

    // Base 5, alphabet {0,4}: delta < 1/2, so the exponent must clear the
    // volume bound 1/2 - delta (with 0.01 slack).
    let spec5 = CantorSpec::new(5, &[0, 4]).unwrap();
    let floor5 = 0.5 - spec5.delta() - 0.01;
    let mut beta5 = f64::NAN;
    for k in [6, 7, 8] {
        beta5 = fup_norm(&spec5, k).unwrap().beta_k;
        assert!(beta5 >= floor5, "k={k}: beta {beta5:.4} below volume floor {floor5:.4}");
    }

    // Base 3, alphabet {0,2}: delta > 1/2 makes the volume bound vacuous;
    // a strictly positive exponent at the deepest feasible depth is the
    // nontrivial claim. Depth feasibility is judged by projected cost.
    let spec3 = CantorSpec::new(3, &[0, 2]).unwrap();
    let mut beta3 = f64::NAN;
    let mut deepest = 0;
    let mut last_cost = 0.0f64;
    for k in 6.. {
        let projected = (5.0 * last_cost).max(1.0);
        if start.elapsed().as_secs_f64() + projected > 200.0 {
            break;
        }
        let t0 = Instant::now();
        beta3 = fup_norm(&spec3, k).unwrap().beta_k;
        last_cost = t0.elapsed().as_secs_f64();
        deepest = k;
    }
    assert!(deepest >= 8, "too few feasible depths reached: {deepest}");
    assert!(beta3 > 0.005, "beta {beta3:.5} at k={deepest} not above 0.005");

    let elapsed = start.elapsed().as_secs_f64();
    assert!(elapsed < 300.0, "runtime {elapsed:.1}s exceeds 5 minutes");
    println!(
        "criterion 7 PASS: base-5 beta {beta5:.4} >= {floor5:.4}; base-3 beta {beta3:.4} \
         at depth {deepest}, {elapsed:.1}s"
    );
}

#[test]
fn criterion_8_property_suites_hold() {
    let start = Instant::now();

    // Compact re-affirmations of the six invariant families; the full
    // suites (and the brute-force oracles: necklace counts, ray-traced
    // monodromy, closed-form single-orbit products) run as their own test
    // targets in this workspace.
    let two = two_disk_system();
    let thin = thin_disk_system();
    for sys in [&two, &thin] {
        for o in sys.enumerate_orbits(4, CLASS_CAP).unwrap() {
            // Rounding floor scales with the squared matrix norm; see the
            // monodromy suite for the measured margins.
            let tol = 1e-9 + 4.0 * f64::EPSILON * o.monodromy.norm_squared();
            assert!((o.monodromy.determinant() - 1.0).abs() < tol, "area preservation");
        }
    }

    let group = funnel_group();
    let det = TransferAssembly::new(&group, TransferDiscretization { nodes_per_disk: 24 });
    let s = Complex64::new(0.3, 4.0);
    assert!(
        (det.zeta_det(s).conj() - det.zeta_det(s.conj())).norm() < 1e-10,
        "reality symmetry"
    );

    let classes = group.enumerate_primitives(6, CLASS_CAP).unwrap();
    let ens = OrbitEnsemble::from_geodesics(&classes, 6);
    let betas = [0.0, 0.2, 0.4, 0.6, 0.8, 1.0];
    let curve = pressure_curve(&ens, &betas, PressureMethod::Window).unwrap();
    for w in curve.windows(2) {
        assert!(w[1].1 < w[0].1, "pressure monotone");
    }
    // Window-regression convexity noise floor; see the pressure suite.
    for w in curve.windows(3) {
        assert!(w[2].1 - 2.0 * w[1].1 + w[0].1 > -2e-3, "pressure convex");
    }

    let zeta = BilliardZeta::new(&two, 10, CLASS_CAP).unwrap();
    let f = |k: Complex64| zeta.eval(k, 12);
    let whole = SearchRectangle::from_bounds(0.1, 5.0, -1.2, -0.1).unwrap();
    let total = count_zeros(&f, &whole).unwrap();
    let left = SearchRectangle::from_bounds(0.1, 2.651, -1.2, -0.1).unwrap();
    let right = SearchRectangle::from_bounds(2.651, 5.0, -1.2, -0.1).unwrap();
    assert_eq!(
        count_zeros(&f, &left).unwrap() + count_zeros(&f, &right).unwrap(),
        total,
        "partition conservation"
    );

    let a = fup_norm(&CantorSpec::new(5, &[0, 4]).unwrap(), 3).unwrap().norm;
    let b = fup_norm(&CantorSpec::new(5, &[0, 2, 4]).unwrap(), 3).unwrap().norm;
    assert!(a <= b + 1e-12, "alphabet monotonicity");

    let dir = tempfile::tempdir().unwrap();
    let config = dir.path().join("job.toml");
    std::fs::write(
        &config,
        "schema_version = 1\nkind = \"fup\"\noutput_dir = \"o\"\n\
         [model]\ncantor = { base = 3, alphabet = [0, 2] }\n\
         [params]\nk_min = 1\nk_max = 4\n",
    )
    .unwrap();
    let out1 = dir.path().join("a");
    let out2 = dir.path().join("b");
    reslab::cli::run_job(&config, Some(&out1), Some("fup"), false).unwrap();
    reslab::cli::run_job(&config, Some(&out2), Some("fup"), false).unwrap();
    assert_eq!(
        std::fs::read(out1.join("fup.csv")).unwrap(),
        std::fs::read(out2.join("fup.csv")).unwrap(),
        "front-end determinism"
    );

    println!(
        "criterion 8 PASS: monodromy/reality/pressure-shape/partition/alphabet/determinism \
         re-affirmed, {:.1}s (full suites run as separate test targets)",
        start.elapsed().as_secs_f64()
    );
}
