//! The limit-set dimension of a Schottky group, four independent ways:
//! pressure root from orbit sums, leading transfer-operator eigenvalue
//! crossing 1, largest real zero of the determinant, and box counting on
//! the limit set itself.
//!
//! Run: cargo run --release --example dimension_triple

use num_complex::Complex64;
use reslab::schottky::{SchottkyGroup, CLASS_CAP};
use reslab::thermo::{bowen_dimension, OrbitEnsemble};
use reslab::xfer::{TransferAssembly, TransferDiscretization};

fn main() {
    let group = SchottkyGroup::symmetric_funnels(6.0, 0.35, 2.45).unwrap();

    let classes = group.enumerate_primitives(8, CLASS_CAP).unwrap();
    let ensemble = OrbitEnsemble::from_geodesics(&classes, 8);
    let bowen = bowen_dimension(&ensemble).unwrap();
    println!("pressure root (orbit sums, length <= 8): {bowen:.8}");

    let assembly = TransferAssembly::new(&group, TransferDiscretization { nodes_per_disk: 40 });

    // Bisect lambda(s) = 1 on [0, 1]; the leading eigenvalue is decreasing.
    let (mut lo, mut hi) = (0.0f64, 1.0f64);
    for _ in 0..60 {
        let mid = 0.5 * (lo + hi);
        if assembly.leading_eigenvalue(mid) > 1.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let eig_root = 0.5 * (lo + hi);
    println!("leading eigenvalue crossing 1:          {eig_root:.8}");

    // Largest real zero of the determinant by scan plus bisection.
    let det = |x: f64| assembly.zeta_det(Complex64::new(x, 0.0)).re;
    let mut zeta_root = f64::NAN;
    let mut prev = det(1.0);
    for i in 1..=120 {
        let x = 1.0 - i as f64 / 100.0;
        let cur = det(x);
        if prev.signum() != cur.signum() {
            let (mut a, mut b) = (x, x + 0.01);
            for _ in 0..60 {
                let m = 0.5 * (a + b);
                if det(m).signum() == det(a).signum() {
                    a = m;
                } else {
                    b = m;
                }
            }
            zeta_root = 0.5 * (a + b);
            break;
        }
        prev = cur;
    }
    println!("largest real determinant zero:          {zeta_root:.8}");

    let scales: Vec<f64> = (5..=12).map(|k| 0.5f64.powi(k)).collect();
    let boxes = group.limit_set_boxcount(12, &scales).unwrap();
    println!("limit-set box-count slope:              {:.8}", boxes.dimension_estimate);

    let ests = [bowen, eig_root, zeta_root];
    let spread = ests
        .iter()
        .flat_map(|a| ests.iter().map(move |b| (a - b).abs()))
        .fold(0.0, f64::max);
    println!("\nmax pairwise spread of the first three: {spread:.2e}");
    println!("box-count deviation from pressure root: {:.4}", (boxes.dimension_estimate - bowen).abs());
}
