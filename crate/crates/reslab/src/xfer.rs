//! Transfer operator of the disk-exchange map and its dynamical determinants.
//!
//! Functions live on the real diameters of the `2r` Schottky disks. The
//! operator acts, for `x` in disk `i`, by
//!
//! ```text
//! (L_s f)_i(x)  =  sum over j with j != invol(i) of
//!                  phi_ij'(x)^s  f_j(phi_ij(x)),
//! ```
//!
//! where `phi_ij` is the unique generator mapping disk `i` strictly inside
//! disk `j`, namely the inverse letter of `j`. The block `(i, j)` vanishes
//! exactly when `j` is the inverse letter of `i`; for a rank-1 group this
//! leaves only the two diagonal blocks. All branch derivatives are positive
//! on the real line, so `phi'^s = exp(s ln phi')` is single-valued.
//!
//! Discretization is collocation at Chebyshev nodes with barycentric
//! interpolation. Branch images land strictly inside the target diameter's
//! Bernstein ellipse, so `det(I - L_s)` converges superexponentially in the
//! node count. The same determinant has a length-graded expansion over
//! oriented primitive geodesic classes,
//!
//! ```text
//! det(I - L_s)  =  prod over classes g, m >= 0 of (1 - exp(-(s+m) ell_g)),
//! ```
//!
//! implemented in [`CycleExpansion`] by expanding the product in powers of a
//! formal word-length grade and summing the retained coefficients. Unlike the
//! raw truncated product, the expanded form converges for every `s`.

use crate::schottky::{GeodesicClass, SchottkyError, SchottkyGroup};
use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use std::f64::consts::PI;

/// Collocation resolution: Chebyshev nodes per disk.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TransferDiscretization {
    pub nodes_per_disk: usize,
}

impl Default for TransferDiscretization {
    fn default() -> Self {
        TransferDiscretization { nodes_per_disk: 24 }
    }
}

/// Which evaluation route produced a zeta value.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ZetaMethod {
    /// Fredholm determinant of the collocation matrix.
    Det,
    /// Length-graded expansion over primitive classes.
    Cycle,
}

impl std::fmt::Display for ZetaMethod {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            ZetaMethod::Det => "det",
            ZetaMethod::Cycle => "cycle",
        })
    }
}

/// A zeta evaluation together with its truncation parameter (node count for
/// the determinant route, maximum word length for the expansion route) and a
/// self-reported error estimate.
#[derive(Debug, Clone, Copy)]
pub struct ZetaValue {
    pub value: Complex64,
    pub method: ZetaMethod,
    pub truncation: usize,
    pub error_estimate: f64,
}

/// One inverse branch `phi: disk(row) -> disk(col)`, tabulated at the row
/// disk's nodes: log-derivatives and interpolation rows against the column
/// disk's nodes. Everything here is independent of `s`.
struct Branch {
    row_disk: usize,
    col_disk: usize,
    log_deriv: Vec<f64>,
    cardinal: DMatrix<f64>,
}

/// The `s`-independent part of the collocation matrix for one group at one
/// resolution. Build once, evaluate at many `s`.
pub struct TransferAssembly {
    letters: usize,
    nodes_per_disk: usize,
    branches: Vec<Branch>,
}

fn cheb_angles(m: usize) -> impl Iterator<Item = f64> {
    (0..m).map(move |k| PI * (2.0 * k as f64 + 1.0) / (2.0 * m as f64))
}

fn cheb_nodes(center: f64, radius: f64, m: usize) -> Vec<f64> {
    cheb_angles(m).map(|t| center + radius * t.cos()).collect()
}

/// Barycentric weights for Chebyshev nodes of the first kind, up to an
/// irrelevant common factor: `(-1)^k sin(theta_k)`. Scale-invariant, so tiny
/// disks cost no precision.
fn bary_weights(m: usize) -> Vec<f64> {
    cheb_angles(m)
        .enumerate()
        .map(|(k, t)| if k % 2 == 0 { t.sin() } else { -t.sin() })
        .collect()
}

/// Row of cardinal (Lagrange) values `L_n(y)`. The barycentric form makes the
/// row sum exactly one, which downstream tests pin: the operator at `s = 0`
/// maps constants to `(2r - 1)` times constants.
fn cardinal_row(nodes: &[f64], weights: &[f64], y: f64) -> Vec<f64> {
    if let Some(hit) = nodes.iter().position(|&x| x == y) {
        let mut row = vec![0.0; nodes.len()];
        row[hit] = 1.0;
        return row;
    }
    let terms: Vec<f64> = nodes
        .iter()
        .zip(weights)
        .map(|(&x, &w)| w / (y - x))
        .collect();
    let denom: f64 = terms.iter().sum();
    terms.into_iter().map(|t| t / denom).collect()
}

impl TransferAssembly {
    pub fn new(group: &SchottkyGroup, disc: TransferDiscretization) -> Self {
        let m = disc.nodes_per_disk;
        assert!(m >= 4, "need at least 4 nodes per disk");
        let letters = group.letters();
        let all_nodes: Vec<Vec<f64>> = (0..letters)
            .map(|i| cheb_nodes(group.disk(i).center, group.disk(i).radius, m))
            .collect();
        let weights = bary_weights(m);
        let mut branches = Vec::with_capacity(letters * (letters - 1));
        for i in 0..letters {
            for j in 0..letters {
                if j == group.involution(i) {
                    continue;
                }
                let phi = group.generator(group.involution(j));
                let mut log_deriv = Vec::with_capacity(m);
                let mut cardinal = DMatrix::zeros(m, m);
                for (row, &x) in all_nodes[i].iter().enumerate() {
                    let d = phi.deriv(x);
                    debug_assert!(d > 0.0 && d < 1.0, "branch must contract inside the disks");
                    log_deriv.push(d.ln());
                    let vals = cardinal_row(&all_nodes[j], &weights, phi.apply(x));
                    for (col, v) in vals.into_iter().enumerate() {
                        cardinal[(row, col)] = v;
                    }
                }
                branches.push(Branch { row_disk: i, col_disk: j, log_deriv, cardinal });
            }
        }
        TransferAssembly { letters, nodes_per_disk: m, branches }
    }

    /// Side length of the collocation matrix.
    pub fn dimension(&self) -> usize {
        self.letters * self.nodes_per_disk
    }

    pub fn nodes_per_disk(&self) -> usize {
        self.nodes_per_disk
    }

    /// The `(row disk, column disk)` pairs with a nonzero block.
    pub fn branch_pairs(&self) -> Vec<(usize, usize)> {
        self.branches.iter().map(|b| (b.row_disk, b.col_disk)).collect()
    }

    /// Dense collocation matrix of the operator at `s`.
    pub fn matrix(&self, s: Complex64) -> DMatrix<Complex64> {
        let n = self.dimension();
        let m = self.nodes_per_disk;
        let mut a = DMatrix::zeros(n, n);
        for br in &self.branches {
            for row in 0..m {
                let weight = (s * br.log_deriv[row]).exp();
                for col in 0..m {
                    a[(br.row_disk * m + row, br.col_disk * m + col)] =
                        weight * br.cardinal[(row, col)];
                }
            }
        }
        a
    }

    /// Real collocation matrix for real `s`.
    pub fn matrix_real(&self, s: f64) -> DMatrix<f64> {
        let n = self.dimension();
        let m = self.nodes_per_disk;
        let mut a = DMatrix::zeros(n, n);
        for br in &self.branches {
            for row in 0..m {
                let weight = (s * br.log_deriv[row]).exp();
                for col in 0..m {
                    a[(br.row_disk * m + row, br.col_disk * m + col)] =
                        weight * br.cardinal[(row, col)];
                }
            }
        }
        a
    }

    /// `det(I - L_s)` at this resolution, no error estimate.
    pub fn zeta_det(&self, s: Complex64) -> Complex64 {
        let mut a = -self.matrix(s);
        for k in 0..self.dimension() {
            a[(k, k)] += 1.0;
        }
        a.determinant()
    }

    /// Dominant eigenvalue of the operator at real `s`, by power iteration
    /// with Rayleigh quotients. For `s = 0` this is the branch count
    /// `2r - 1`; it crosses 1 exactly at the limit-set dimension.
    pub fn leading_eigenvalue(&self, s: f64) -> f64 {
        let a = self.matrix_real(s);
        let n = self.dimension();
        let mut v = DVector::from_element(n, 1.0);
        let mut lambda = 0.0f64;
        for _ in 0..5000 {
            let w = &a * &v;
            let next = v.dot(&w) / v.dot(&v);
            let scale = w.abs().max();
            v = w / scale;
            if (next - lambda).abs() <= 1e-14 * next.abs().max(1.0) {
                return next;
            }
            lambda = next;
        }
        lambda
    }
}

/// `det(I - L_s)` with an error estimate from a four-node coarser assembly.
/// Builds two assemblies per call; reuse [`TransferAssembly`] directly when
/// scanning many `s`.
pub fn zeta_det_value(
    group: &SchottkyGroup,
    disc: TransferDiscretization,
    s: Complex64,
) -> ZetaValue {
    assert!(disc.nodes_per_disk >= 8, "error estimate needs at least 8 nodes");
    let fine = TransferAssembly::new(group, disc);
    let coarse = TransferAssembly::new(
        group,
        TransferDiscretization { nodes_per_disk: disc.nodes_per_disk - 4 },
    );
    let value = fine.zeta_det(s);
    ZetaValue {
        value,
        method: ZetaMethod::Det,
        truncation: disc.nodes_per_disk,
        error_estimate: (value - coarse.zeta_det(s)).norm(),
    }
}

/// Length-graded expansion of `det(I - L_s)` over oriented primitive classes.
///
/// Each factor `(1 - exp(-(s+m) ell))` of a class with word length `n` is
/// treated as `1 - t z^n` in a formal grade variable `z`; the product is
/// expanded to grade `max_word_len` and evaluated at `z = 1`. Coefficient
/// decay is superexponential, and the discarded top coefficient is reported
/// as the error estimate.
pub struct CycleExpansion {
    classes: Vec<GeodesicClass>,
    max_word_len: usize,
    min_length: f64,
}

impl CycleExpansion {
    pub fn new(
        group: &SchottkyGroup,
        max_word_len: usize,
        cap: usize,
    ) -> Result<Self, SchottkyError> {
        assert!(max_word_len >= 1);
        let classes = group.enumerate_primitives(max_word_len, cap)?;
        let min_length = classes
            .iter()
            .map(|c| c.length)
            .fold(f64::INFINITY, f64::min);
        Ok(CycleExpansion { classes, max_word_len, min_length })
    }

    pub fn classes(&self) -> &[GeodesicClass] {
        &self.classes
    }

    pub fn max_word_len(&self) -> usize {
        self.max_word_len
    }

    /// Smallest `m_max` whose discarded tail factors differ from 1 by less
    /// than `exp(-35)`: the tail of the `m`-product is controlled by
    /// `exp(-(re_s + m) ell_min)` and is independent of `Im s`.
    pub fn default_m_max(&self, re_s: f64) -> usize {
        let needed = (35.0 / self.min_length - re_s).ceil();
        needed.clamp(4.0, 64.0) as usize
    }

    /// Evaluates the expansion at `s`, truncating the spectral product at
    /// `m_max` (defaulted via [`Self::default_m_max`]).
    pub fn eval(&self, s: Complex64, m_max: Option<usize>) -> ZetaValue {
        let m_max = m_max.unwrap_or_else(|| self.default_m_max(s.re));
        let l = self.max_word_len;
        let mut coeffs = vec![Complex64::ZERO; l + 1];
        coeffs[0] = Complex64::ONE;
        for class in &self.classes {
            let n = class.word.len();
            for m in 0..=m_max {
                let t = (-(s + m as f64) * class.length).exp();
                for g in (n..=l).rev() {
                    let update = t * coeffs[g - n];
                    coeffs[g] -= update;
                }
            }
        }
        let value: Complex64 = coeffs.iter().sum();
        ZetaValue {
            value,
            method: ZetaMethod::Cycle,
            truncation: l,
            error_estimate: coeffs[l].norm(),
        }
    }
}

/// One-shot expansion evaluation; enumerates classes on every call.
pub fn zeta_cycle(
    group: &SchottkyGroup,
    s: Complex64,
    max_word_len: usize,
    cap: usize,
) -> Result<ZetaValue, SchottkyError> {
    Ok(CycleExpansion::new(group, max_word_len, cap)?.eval(s, None))
}
