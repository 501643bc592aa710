//! Fuchsian Schottky groups given by isometric-circle data.
//!
//! A rank-`r` group is entered as `r` hyperbolic elements of SL(2, R) acting
//! on the upper half-plane. Writing `g_i` for the generators and
//! `g_{i+r} = g_i^{-1}`, the disk `D_i` is the isometric circle of `g_i`,
//! centered on the real axis; `g_i` maps the exterior of `D_i` onto the
//! interior of `D_{i+r}`. The group is Schottky exactly when the `2r` closed
//! disks are pairwise disjoint, which is checked at construction.
//!
//! Closed geodesics on the quotient surface correspond to cyclically reduced
//! words in the generators, one class per orientation: a word and its inverse
//! word are distinct classes here, and every product over "primitive classes"
//! downstream (zeta functions, orbit sums) runs over this doubled set. The
//! doubling is not cosmetic: the Fredholm determinant of the transfer
//! operator in [`crate::xfer`] equals the product over oriented classes, and
//! the halved product is not even an entire function.

use crate::words::{primitive_classes, ClassCapExceeded, CyclicWord};
use thiserror::Error;

const DET_TOL: f64 = 1e-12;

/// Errors from group construction and limit-set analysis.
#[derive(Debug, Error)]
pub enum SchottkyError {
    #[error("generator {index} is not hyperbolic: |trace| = {trace_abs:.6} <= 2")]
    NonHyperbolicGenerator { index: usize, trace_abs: f64 },
    #[error("generator {index} has determinant {det:.3e}, not 1 within 1e-12")]
    SingularMatrix { index: usize, det: f64 },
    #[error("generator {index} has c = 0, so its isometric disk is unbounded")]
    UnboundedDisk { index: usize },
    #[error("isometric disks {i} and {j} are not disjoint (gap {gap:.3e})")]
    DiskOverlap { i: usize, j: usize, gap: f64 },
    #[error("class enumeration overflow: {0}")]
    CombinatorialOverflow(#[from] ClassCapExceeded),
    #[error("box-count needs at least 3 scales, got {0}")]
    InsufficientScales(usize),
}

/// Real Moebius transformation with determinant 1.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Moebius {
    pub a: f64,
    pub b: f64,
    pub c: f64,
    pub d: f64,
}

impl Moebius {
    pub fn new(a: f64, b: f64, c: f64, d: f64) -> Self {
        Moebius { a, b, c, d }
    }

    pub fn det(&self) -> f64 {
        self.a * self.d - self.b * self.c
    }

    pub fn trace(&self) -> f64 {
        self.a + self.d
    }

    pub fn inverse(&self) -> Self {
        // Valid for det = 1 only.
        Moebius::new(self.d, -self.b, -self.c, self.a)
    }

    /// Matrix product; `self` acts after `other`.
    pub fn compose(&self, other: &Moebius) -> Self {
        Moebius::new(
            self.a * other.a + self.b * other.c,
            self.a * other.b + self.b * other.d,
            self.c * other.a + self.d * other.c,
            self.c * other.b + self.d * other.d,
        )
    }

    pub fn apply(&self, x: f64) -> f64 {
        (self.a * x + self.b) / (self.c * x + self.d)
    }

    pub fn apply_complex(&self, z: num_complex::Complex64) -> num_complex::Complex64 {
        (self.a * z + self.b) / (self.c * z + self.d)
    }

    /// Derivative on the real line, `1/(cx+d)^2`; positive away from the pole.
    pub fn deriv(&self, x: f64) -> f64 {
        let q = self.c * x + self.d;
        1.0 / (q * q)
    }

    /// Translation length of a hyperbolic element, `2 acosh(|tr|/2)`.
    pub fn translation_length(&self) -> f64 {
        2.0 * (self.trace().abs() / 2.0).acosh()
    }

    /// Isometric circle `|cz + d| = 1`: center `-d/c`, radius `1/|c|`.
    pub fn isometric_disk(&self) -> Disk {
        Disk {
            center: -self.d / self.c,
            radius: 1.0 / self.c.abs(),
        }
    }

    /// Fixed points on the boundary, `(repelling, attracting)`.
    pub fn fixed_points(&self) -> (f64, f64) {
        let disc = (self.trace() * self.trace() - 4.0).sqrt();
        let p = (self.a - self.d - disc) / (2.0 * self.c);
        let q = (self.a - self.d + disc) / (2.0 * self.c);
        // Attracting fixed point has |g'| < 1, i.e. |c x + d| > 1.
        if (self.c * p + self.d).abs() > 1.0 {
            (q, p)
        } else {
            (p, q)
        }
    }

    /// The hyperbolic element with axis endpoints `p < q` (repelling `p`,
    /// attracting `q`) and translation length `ell`.
    pub fn over_axis(p: f64, q: f64, ell: f64) -> Self {
        assert!(p < q && ell > 0.0);
        let (eh, emh) = ((ell / 2.0).exp(), (-ell / 2.0).exp());
        let w = q - p;
        Moebius::new(
            (q * eh - p * emh) / w,
            -p * q * (eh - emh) / w,
            (eh - emh) / w,
            (q * emh - p * eh) / w,
        )
    }
}

/// Closed disk centered on the real axis.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Disk {
    pub center: f64,
    pub radius: f64,
}

impl Disk {
    pub fn gap_to(&self, other: &Disk) -> f64 {
        (self.center - other.center).abs() - self.radius - other.radius
    }
}

/// One oriented primitive conjugacy class: a cyclically reduced word, the
/// trace of its matrix, and the geodesic length `2 acosh(|tr|/2)`.
#[derive(Debug, Clone)]
pub struct GeodesicClass {
    pub word: CyclicWord,
    pub trace: f64,
    pub length: f64,
}

/// Box-count summary for the limit set.
#[derive(Debug, Clone)]
pub struct BoxCount {
    /// Least-squares slope of `log N(eps)` against `log(1/eps)`.
    pub dimension_estimate: f64,
    /// `(eps, N(eps))` per requested scale.
    pub counts: Vec<(f64, usize)>,
    /// Max absolute fit residual in log units.
    pub fit_residual: f64,
    /// Set when the residual exceeds 0.25, i.e. the scales do not yet see a
    /// power law.
    pub large_residual: bool,
}

/// Validated Schottky group. Letters `0..r` are the generators, `r..2r`
/// their inverses; `involution(i) = (i + r) mod 2r`.
#[derive(Debug, Clone)]
pub struct SchottkyGroup {
    rank: usize,
    gens: Vec<Moebius>,
    disks: Vec<Disk>,
}

/// Default cap on enumerated primitive classes.
pub const CLASS_CAP: usize = 4_000_000;

impl SchottkyGroup {
    /// Builds and validates a group from its `r` generator matrices.
    pub fn new(generators: &[Moebius]) -> Result<Self, SchottkyError> {
        assert!(!generators.is_empty(), "rank must be at least 1");
        let rank = generators.len();
        let mut gens = Vec::with_capacity(2 * rank);
        gens.extend_from_slice(generators);
        gens.extend(generators.iter().map(Moebius::inverse));
        for (index, g) in gens.iter().enumerate() {
            let det = g.det();
            if (det - 1.0).abs() > DET_TOL {
                return Err(SchottkyError::SingularMatrix { index: index % rank, det });
            }
            if g.trace().abs() <= 2.0 {
                return Err(SchottkyError::NonHyperbolicGenerator {
                    index: index % rank,
                    trace_abs: g.trace().abs(),
                });
            }
            if g.c == 0.0 {
                return Err(SchottkyError::UnboundedDisk { index: index % rank });
            }
        }
        let disks: Vec<Disk> = gens.iter().map(Moebius::isometric_disk).collect();
        for i in 0..disks.len() {
            for j in (i + 1)..disks.len() {
                let gap = disks[i].gap_to(&disks[j]);
                if gap <= 0.0 {
                    return Err(SchottkyError::DiskOverlap { i, j, gap });
                }
            }
        }
        Ok(SchottkyGroup { rank, gens, disks })
    }

    /// Rank-1 group of a single hyperbolic element with translation length
    /// `ell` and axis (-1, 1); the quotient is a hyperbolic cylinder.
    pub fn cylinder(ell: f64) -> Self {
        SchottkyGroup::new(&[Moebius::over_axis(-1.0, 1.0, ell)])
            .expect("a single hyperbolic element is always Schottky")
    }

    /// Symmetric three-funnel surface: two generators of equal translation
    /// length `ell` with axes `(-x2, -x1)` and `(x1, x2)`, mirror images
    /// under `z -> -z`. Fails if the four isometric disks are not disjoint.
    pub fn symmetric_funnels(ell: f64, x1: f64, x2: f64) -> Result<Self, SchottkyError> {
        let a = Moebius::over_axis(-x2, -x1, ell);
        let b = Moebius::over_axis(x1, x2, ell);
        SchottkyGroup::new(&[a, b])
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    /// Number of letters, `2 rank`.
    pub fn letters(&self) -> usize {
        2 * self.rank
    }

    pub fn involution(&self, letter: usize) -> usize {
        (letter + self.rank) % (2 * self.rank)
    }

    pub fn generator(&self, letter: usize) -> &Moebius {
        &self.gens[letter]
    }

    pub fn disk(&self, letter: usize) -> &Disk {
        &self.disks[letter]
    }

    pub fn disks(&self) -> &[Disk] {
        &self.disks
    }

    /// Letter rendering: generators `a, b, ...`, inverses `A, B, ...`.
    pub fn label(&self, letter: u8) -> char {
        let r = self.rank as u8;
        if letter < r {
            (b'a' + letter) as char
        } else {
            (b'A' + letter - r) as char
        }
    }

    /// Parses a word rendered by [`Self::label`].
    pub fn parse_word(&self, s: &str) -> Option<CyclicWord> {
        let r = self.rank as u8;
        let mut letters = Vec::with_capacity(s.len());
        for ch in s.chars() {
            let l = match ch {
                'a'..='z' => (ch as u8) - b'a',
                'A'..='Z' => (ch as u8) - b'A' + r,
                _ => return None,
            };
            if l >= 2 * r {
                return None;
            }
            letters.push(l);
        }
        if letters.is_empty() {
            None
        } else {
            Some(CyclicWord::new(&letters))
        }
    }

    /// Matrix of a word, multiplied left to right.
    pub fn word_matrix(&self, word: &CyclicWord) -> Moebius {
        let mut m = *self.generator(word.letters()[0] as usize);
        for &l in &word.letters()[1..] {
            m = m.compose(self.generator(l as usize));
        }
        m
    }

    /// All oriented primitive classes with word length `<= max_len`, sorted by
    /// (length, letters). A word and its inverse are distinct classes.
    pub fn enumerate_primitives(
        &self,
        max_len: usize,
        cap: usize,
    ) -> Result<Vec<GeodesicClass>, SchottkyError> {
        let letters = self.letters() as u8;
        let rank = self.rank as u8;
        let words = primitive_classes(letters, max_len, cap, move |prev, next| {
            next != (prev + rank) % (2 * rank)
        })?;
        Ok(words
            .into_iter()
            .map(|word| {
                let m = self.word_matrix(&word);
                GeodesicClass {
                    trace: m.trace(),
                    length: m.translation_length(),
                    word,
                }
            })
            .collect())
    }

    /// Sample points close to the limit set: images of admissible disk
    /// centers under every reduced word of length `depth`.
    pub fn limit_set_points(&self, depth: usize) -> Vec<f64> {
        assert!(depth >= 1);
        let mut out = Vec::new();
        let mut path: Vec<usize> = Vec::with_capacity(depth);
        for first in 0..self.letters() {
            path.push(first);
            self.limit_dfs(*self.generator(first), depth, &mut path, &mut out);
            path.pop();
        }
        out
    }

    fn limit_dfs(&self, m: Moebius, depth: usize, path: &mut Vec<usize>, out: &mut Vec<f64>) {
        let last = *path.last().unwrap();
        if path.len() == depth {
            for j in 0..self.letters() {
                // The pole of the last factor is the center of its own disk.
                if j != last {
                    out.push(m.apply(self.disks[j].center));
                }
            }
            return;
        }
        for next in 0..self.letters() {
            if next != self.involution(last) {
                path.push(next);
                self.limit_dfs(m.compose(self.generator(next)), depth, path, out);
                path.pop();
            }
        }
    }

    /// Box-counting dimension estimate of the limit set from samples at the
    /// given scales (bin widths).
    pub fn limit_set_boxcount(
        &self,
        depth: usize,
        scales: &[f64],
    ) -> Result<BoxCount, SchottkyError> {
        if scales.len() < 3 {
            return Err(SchottkyError::InsufficientScales(scales.len()));
        }
        let mut points = self.limit_set_points(depth);
        points.sort_unstable_by(f64::total_cmp);
        let origin = points[0];
        let mut counts = Vec::with_capacity(scales.len());
        for &eps in scales {
            assert!(eps > 0.0);
            let mut n = 0usize;
            let mut last_bin = i64::MIN;
            for &p in &points {
                let bin = ((p - origin) / eps).floor() as i64;
                if bin != last_bin {
                    n += 1;
                    last_bin = bin;
                }
            }
            counts.push((eps, n));
        }
        let xs: Vec<f64> = counts.iter().map(|&(e, _)| (1.0 / e).ln()).collect();
        let ys: Vec<f64> = counts.iter().map(|&(_, n)| (n as f64).ln()).collect();
        let (slope, _intercept, residual) = least_squares(&xs, &ys);
        Ok(BoxCount {
            dimension_estimate: slope,
            counts,
            fit_residual: residual,
            large_residual: residual > 0.25,
        })
    }
}

/// Ordinary least squares `y = slope x + intercept`; returns the max absolute
/// residual as the third component.
pub fn least_squares(xs: &[f64], ys: &[f64]) -> (f64, f64, f64) {
    assert_eq!(xs.len(), ys.len());
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let mut sxx = 0.0;
    let mut sxy = 0.0;
    for (&x, &y) in xs.iter().zip(ys) {
        sxx += (x - mx) * (x - mx);
        sxy += (x - mx) * (y - my);
    }
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let residual = xs
        .iter()
        .zip(ys)
        .map(|(&x, &y)| (y - slope * x - intercept).abs())
        .fold(0.0, f64::max);
    (slope, intercept, residual)
}
