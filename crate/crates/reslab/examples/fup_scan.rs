//! Uncertainty exponents for Cantor digit alphabets: the norm of the
//! Fourier submatrix restricted to the alphabet's base-M expansions decays
//! like N^{-beta}; beta > 0 is the uncertainty gain. Volume bounds pin
//! beta between (1/2 - delta) and (1 - delta)/2; thin alphabets beat the
//! floor.
//!
//! Run: cargo run --release --example fup_scan

use reslab::fup::{fup_exponent, CantorSpec};

fn main() {
    for (base, alphabet, k_hi) in [(3usize, vec![0usize, 2], 10usize), (5, vec![0, 4], 8)] {
        let spec = CantorSpec::new(base, &alphabet).unwrap();
        let delta = spec.delta();
        let floor = (0.5 - delta).max(0.0);
        let ceiling = 0.5 * (1.0 - delta);
        println!(
            "base {base}, alphabet {:?}: delta = {delta:.4}, volume bounds [{floor:.4}, {ceiling:.4}]",
            alphabet
        );

        let est = fup_exponent(&spec, 2..=k_hi).unwrap();
        println!("{:>3} {:>12} {:>14} {:>10}", "k", "set size", "norm", "beta_k");
        for row in &est.table {
            println!("{:>3} {:>12} {:>14.8e} {:>10.6}", row.k, row.set_size, row.norm, row.beta_k);
        }
        println!(
            "beta estimate {:.6}, last refinement moved it by {:.1e}\n",
            est.beta_estimate, est.stabilization
        );
    }
}
