//! Periodic-orbit data tables: closed geodesics of a Schottky surface and
//! bounce orbits of a disk billiard, in the same CSV formats the batch
//! front-end writes.
//!
//! Run: cargo run --release --example orbit_table

use reslab::billiard::DiskSystem;
use reslab::io::{geodesic_csv, orbit_csv};
use reslab::schottky::{SchottkyGroup, CLASS_CAP};

fn main() {
    let group = SchottkyGroup::symmetric_funnels(6.0, 0.35, 2.45).unwrap();
    let classes = group.enumerate_primitives(4, CLASS_CAP).unwrap();
    println!("three-funnel group: {} primitive classes up to length 4", classes.len());
    for line in geodesic_csv(&group, &classes).lines().take(8) {
        println!("  {line}");
    }

    let sys = DiskSystem::equilateral(12.0, 1.0).unwrap();
    let orbits = sys.enumerate_orbits(4, CLASS_CAP).unwrap();
    println!("\nthin three-disk: {} primitive orbits up to 4 bounces", orbits.len());
    for line in orbit_csv(&sys, &orbits).lines().take(8) {
        println!("  {line}");
    }

    // The shortest geodesic and orbit set the convergence scales of every
    // zeta truncation downstream.
    let lmin = classes.iter().map(|c| c.length).fold(f64::MAX, f64::min);
    let tmin = orbits.iter().map(|o| o.period).fold(f64::MAX, f64::min);
    println!("\nshortest geodesic {lmin:.6}, shortest bounce orbit {tmin:.6}");
}
