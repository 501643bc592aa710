//! The two-disk billiard has a single primitive orbit, so its resonances
//! form an explicit half-lattice: locate them numerically and compare
//! against the closed form.
//!
//! Run: cargo run --release --example two_disk_lattice

use num_complex::Complex64;
use reslab::billiard::{BilliardZeta, DiskSystem};
use reslab::schottky::CLASS_CAP;
use reslab::zeros::{locate_zeros, SearchRectangle};
use std::f64::consts::PI;

fn main() {
    let sys = DiskSystem::two_disk(6.0, 1.0).unwrap();
    let orbit = &sys.enumerate_orbits(2, CLASS_CAP).unwrap()[0];
    let period = orbit.period;
    let log_ju = orbit.j_u.ln();
    println!("two-disk billiard, separation 6, radius 1");
    println!("orbit {:?}: period {period}, log J^u = {log_ju:.12}\n", "AB");

    // Resonances of the single-orbit zeta lie at
    //   k = 2 pi q / T - i (1/2 + l) log(J^u) / T,  q in Z, l = 0, 1, ...
    // The expansion grade bounds the polynomial degree in the orbit weight,
    // hence how many lattice lines survive truncation: grade 10 keeps five,
    // and the lines with three or more grades of headroom are accurate to
    // better than 1e-10.
    let zeta = BilliardZeta::new(&sys, 10, CLASS_CAP).unwrap();
    let f = |k: Complex64| zeta.eval(k, 12);
    let rect = SearchRectangle::from_bounds(0.05, 8.0, -1.7, -0.05).unwrap();
    let set = locate_zeros(&f, &rect, 1e-10, "two_disk", "single orbit").unwrap();

    println!("{} zeros located in [0.05, 8] x [-1.7, -0.05]i", set.total_count);
    println!("{:>12} {:>12}   {:>2} {:>2}   {:>9}", "Re k", "Im k", "q", "l", "rel err");
    let mut worst = 0.0f64;
    for z in &set.zeros {
        let k = z.location();
        let q = (k.re * period / (2.0 * PI)).round();
        let l = (-k.im * period / log_ju - 0.5).round();
        let lattice = Complex64::new(2.0 * PI * q / period, -(0.5 + l) * log_ju / period);
        let rel = (k - lattice).norm() / lattice.norm();
        worst = worst.max(rel);
        println!("{:>12.8} {:>12.8}   {:>2} {:>2}   {:>9.2e}", k.re, k.im, q, l, rel);
    }
    println!("\nworst relative deviation from the lattice: {worst:.2e}");
}
