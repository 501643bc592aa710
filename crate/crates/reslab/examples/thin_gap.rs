//! Resonance gap of the thin three-disk billiard: the pressure at weight
//! 1/2 predicts a resonance-free strip below the real wavenumber axis.
//! Count zeros above and below the predicted line to see it.
//!
//! Run: cargo run --release --example thin_gap

use num_complex::Complex64;
use reslab::billiard::{BilliardZeta, DiskSystem};
use reslab::schottky::CLASS_CAP;
use reslab::thermo::{gap_prediction, OrbitEnsemble};
use reslab::zeros::{count_zeros, locate_zeros, SearchRectangle};

fn main() {
    let sys = DiskSystem::equilateral(12.0, 1.0).unwrap();
    let orbits = sys.enumerate_orbits(6, CLASS_CAP).unwrap();
    println!("thin three-disk (side 12, radius 1): {} primitive orbits", orbits.len());

    let ensemble = OrbitEnsemble::from_orbits(&orbits, 6);
    let gap = gap_prediction(&ensemble).unwrap();
    let line = gap.pressure_half;
    println!("P(1/2) = {line:+.6}: predicted zero-free strip {} < Im k < 0\n", line);

    let zeta = BilliardZeta::new(&sys, 6, CLASS_CAP).unwrap();
    let f = |k: Complex64| zeta.eval(k, 8);
    let margin = 0.05 * line.abs();

    for (re_lo, re_hi) in [(0.5, 10.0), (10.0, 20.0)] {
        let above = SearchRectangle::from_bounds(re_lo, re_hi, line + margin, -1e-3).unwrap();
        let below = SearchRectangle::from_bounds(re_lo, re_hi, line - 0.30, line - margin).unwrap();
        let na = count_zeros(&f, &above).unwrap();
        let nb = count_zeros(&f, &below).unwrap();
        println!("Re k in [{re_lo:>4}, {re_hi:>4}]: {na} zeros above the line, {nb} below");
    }

    // Show the shallowest actual resonances.
    let rect = SearchRectangle::from_bounds(0.5, 10.0, line - 0.30, line - margin).unwrap();
    let set = locate_zeros(&f, &rect, 1e-9, "thin_disks", "L=6 m=8").unwrap();
    println!("\nshallowest resonances (depth below the line {line:+.4}):");
    let mut zs: Vec<Complex64> = set.zeros.iter().map(|z| z.location()).collect();
    zs.sort_by(|a, b| b.im.total_cmp(&a.im));
    for k in zs.iter().take(6) {
        println!("  k = {:>9.6} {:+.6}i   (depth {:+.6})", k.re, k.im, line - k.im);
    }
}
