//! Open planar disk billiards: admissible bounce words, periodic orbits with
//! linear stability, and the wavenumber-plane dynamical zeta function.
//!
//! A system is a set of disjoint disks satisfying the no-eclipse condition:
//! the line-of-sight chord between any two disks clears every third disk, so
//! every cyclic word without immediate repetitions labels exactly one trapped
//! periodic orbit. Orbits are found by minimizing the total chord length over
//! the bounce positions; the length functional is convex for no-eclipse
//! configurations, so a damped Newton iteration converges from the
//! disk-center initialization.
//!
//! Linear stability uses the transverse 2x2 Jacobian: a free flight of
//! length `d` contributes `[[1, d], [0, 1]]` and a bounce on a disk of
//! radius `a` with incidence angle `phi` contributes
//! `[[-1, 0], [-2/(a cos phi), -1]]`. The convention is pinned by a
//! finite-difference ray-tracing oracle in the test suite rather than trusted.
//!
//! Resonances of the Dirichlet scattering problem are modeled by zeros of
//!
//! ```text
//! zeta(k) = prod over orbits g, m >= 0 of
//!           (1 - (-1)^{n_g} exp(i k T_g) / (|L_g|^{1/2} L_g^m)),
//! ```
//!
//! with `L_g` the signed leading monodromy eigenvalue and `n_g` the bounce
//! count, evaluated through the same length-graded expansion as the surface
//! zeta so that truncation converges in the lower half-plane.

use crate::words::{primitive_classes, ClassCapExceeded, CyclicWord};
use nalgebra::{DMatrix, DVector, Matrix2, Vector2};
use num_complex::Complex64;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum BilliardError {
    #[error("disks {i} and {j} are not disjoint (gap {gap:.3e})")]
    DiskOverlap { i: usize, j: usize, gap: f64 },
    #[error("sight line {i} -> {j} is eclipsed by disk {k} (clearance {clearance:.3e})")]
    EclipseViolation { i: usize, j: usize, k: usize, clearance: f64 },
    #[error("word {word} is not admissible: repeated disk at position {position}")]
    NonAdmissibleWord { word: String, position: usize },
    #[error("orbit solve for {word} stalled: gradient norm {residual:.3e} after {iterations} iterations")]
    NoConvergence { word: String, residual: f64, iterations: usize },
    #[error("class enumeration overflow: {0}")]
    CombinatorialOverflow(#[from] ClassCapExceeded),
}

/// Validated open billiard: pairwise disjoint disks with no eclipse.
#[derive(Debug, Clone)]
pub struct DiskSystem {
    centers: Vec<Vector2<f64>>,
    radii: Vec<f64>,
    min_gap: f64,
}

fn segment_point_distance(a: Vector2<f64>, b: Vector2<f64>, p: Vector2<f64>) -> f64 {
    let ab = b - a;
    let t = ((p - a).dot(&ab) / ab.norm_squared()).clamp(0.0, 1.0);
    (p - (a + ab * t)).norm()
}

impl DiskSystem {
    pub fn new(centers: Vec<Vector2<f64>>, radii: Vec<f64>) -> Result<Self, BilliardError> {
        assert_eq!(centers.len(), radii.len());
        assert!(centers.len() >= 2, "need at least two disks");
        let n = centers.len();
        let mut min_gap = f64::INFINITY;
        for i in 0..n {
            for j in (i + 1)..n {
                let gap = (centers[i] - centers[j]).norm() - radii[i] - radii[j];
                if gap <= 0.0 {
                    return Err(BilliardError::DiskOverlap { i, j, gap });
                }
                min_gap = min_gap.min(gap);
            }
        }
        // No-eclipse: the chord between the facing boundary points of every
        // ordered pair must clear every third disk.
        for i in 0..n {
            for j in 0..n {
                if i == j {
                    continue;
                }
                let u = (centers[j] - centers[i]).normalize();
                let a = centers[i] + u * radii[i];
                let b = centers[j] - u * radii[j];
                for k in 0..n {
                    if k == i || k == j {
                        continue;
                    }
                    let clearance = segment_point_distance(a, b, centers[k]) - radii[k];
                    if clearance <= 0.0 {
                        return Err(BilliardError::EclipseViolation { i, j, k, clearance });
                    }
                }
            }
        }
        Ok(DiskSystem { centers, radii, min_gap })
    }

    /// Two disks of radius `a` with centers a distance `separation` apart.
    pub fn two_disk(separation: f64, a: f64) -> Result<Self, BilliardError> {
        DiskSystem::new(
            vec![Vector2::new(0.0, 0.0), Vector2::new(separation, 0.0)],
            vec![a, a],
        )
    }

    /// Three disks of radius `a` at the vertices of an equilateral triangle.
    pub fn equilateral(side: f64, a: f64) -> Result<Self, BilliardError> {
        let h = side * 3.0f64.sqrt() / 2.0;
        DiskSystem::new(
            vec![
                Vector2::new(0.0, 0.0),
                Vector2::new(side, 0.0),
                Vector2::new(side / 2.0, h),
            ],
            vec![a, a, a],
        )
    }

    pub fn len(&self) -> usize {
        self.centers.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn center(&self, i: usize) -> Vector2<f64> {
        self.centers[i]
    }

    pub fn radius(&self, i: usize) -> f64 {
        self.radii[i]
    }

    /// Smallest boundary gap between any two disks.
    pub fn min_gap(&self) -> f64 {
        self.min_gap
    }

    /// Disk labels `A, B, C, ...`.
    pub fn label(&self, letter: u8) -> char {
        (b'A' + letter) as char
    }

    pub fn render_word(&self, word: &CyclicWord) -> String {
        word.render(|l| self.label(l))
    }

    /// Parses a word rendered by [`Self::render_word`].
    pub fn parse_word(&self, s: &str) -> Option<CyclicWord> {
        let mut letters = Vec::with_capacity(s.len());
        for ch in s.chars() {
            match ch {
                'A'..='Z' if ((ch as u8) - b'A') < self.len() as u8 => {
                    letters.push((ch as u8) - b'A')
                }
                _ => return None,
            }
        }
        if letters.is_empty() {
            None
        } else {
            Some(CyclicWord::new(&letters))
        }
    }
}

/// A trapped periodic orbit: bounce positions (one boundary angle per
/// letter), geometric period, and transverse monodromy.
#[derive(Debug, Clone)]
pub struct BounceOrbit {
    pub word: CyclicWord,
    pub bounce_angles: Vec<f64>,
    pub points: Vec<Vector2<f64>>,
    pub period: f64,
    pub monodromy: Matrix2<f64>,
    /// Signed leading eigenvalue of the monodromy.
    pub lambda: f64,
    /// Unstable Jacobian `|lambda| > 1`.
    pub j_u: f64,
    /// Final gradient norm of the length functional (stationarity witness).
    pub gradient_norm: f64,
}

impl BounceOrbit {
    pub fn n_bounces(&self) -> usize {
        self.word.len()
    }

    pub fn log_j_u(&self) -> f64 {
        self.j_u.ln()
    }

    /// Per-period Lyapunov rate `ln(J^u)/T`.
    pub fn lyapunov(&self) -> f64 {
        self.j_u.ln() / self.period
    }
}

struct OrbitGeometry {
    points: Vec<Vector2<f64>>,
    lengths: Vec<f64>,
    units: Vec<Vector2<f64>>,
}

impl DiskSystem {
    fn geometry(&self, word: &[u8], angles: &[f64]) -> OrbitGeometry {
        let n = angles.len();
        let points: Vec<Vector2<f64>> = (0..n)
            .map(|i| {
                let d = word[i] as usize;
                self.centers[d] + Vector2::new(angles[i].cos(), angles[i].sin()) * self.radii[d]
            })
            .collect();
        let mut lengths = Vec::with_capacity(n);
        let mut units = Vec::with_capacity(n);
        for i in 0..n {
            let seg = points[(i + 1) % n] - points[i];
            let d = seg.norm();
            lengths.push(d);
            units.push(seg / d);
        }
        OrbitGeometry { points, lengths, units }
    }

    /// Solves for the unique trapped orbit with the given bounce sequence by
    /// minimizing total chord length over the boundary angles (damped Newton
    /// from the disk-center polygon initialization).
    pub fn find_orbit(&self, word: &CyclicWord) -> Result<BounceOrbit, BilliardError> {
        let letters = word.letters();
        let n = letters.len();
        let rendered = self.render_word(word);
        for (pos, &l) in letters.iter().enumerate() {
            if l as usize >= self.len() || l == letters[(pos + 1) % n] {
                return Err(BilliardError::NonAdmissibleWord { word: rendered, position: pos });
            }
        }

        // Initial angles: aim each bounce point at the midpoint of its
        // neighbors' centers.
        let mut angles: Vec<f64> = (0..n)
            .map(|i| {
                let c = self.centers[letters[i] as usize];
                let prev = self.centers[letters[(i + n - 1) % n] as usize];
                let next = self.centers[letters[(i + 1) % n] as usize];
                let aim = (prev + next) * 0.5 - c;
                aim.y.atan2(aim.x)
            })
            .collect();

        let grad = |geo: &OrbitGeometry, angles: &[f64]| -> DVector<f64> {
            DVector::from_fn(n, |i, _| {
                let r = self.radii[letters[i] as usize];
                let t = Vector2::new(-angles[i].sin(), angles[i].cos());
                let pull = geo.units[(i + n - 1) % n] - geo.units[i];
                r * t.dot(&pull)
            })
        };

        let mut mu = 0.0f64;
        let mut geo = self.geometry(letters, &angles);
        let mut g = grad(&geo, &angles);
        let mut gnorm = g.amax();
        let mut iterations = 0usize;
        while gnorm > 1e-13 {
            if iterations >= 200 {
                return Err(BilliardError::NoConvergence {
                    word: rendered,
                    residual: gnorm,
                    iterations,
                });
            }
            iterations += 1;
            // Hessian of the total length in the angle variables: segment
            // blocks (I - uu^T)/d via the chain rule plus the boundary
            // curvature term on the diagonal.
            let mut h = DMatrix::<f64>::zeros(n, n);
            let tangents: Vec<Vector2<f64>> = angles
                .iter()
                .map(|a| Vector2::new(-a.sin(), a.cos()))
                .collect();
            for seg in 0..n {
                let i = seg;
                let j = (seg + 1) % n;
                let u = geo.units[seg];
                let d = geo.lengths[seg];
                let ri = self.radii[letters[i] as usize];
                let rj = self.radii[letters[j] as usize];
                let p = |v: Vector2<f64>, w: Vector2<f64>| (v.dot(&w) - v.dot(&u) * w.dot(&u)) / d;
                h[(i, i)] += ri * ri * p(tangents[i], tangents[i]);
                h[(j, j)] += rj * rj * p(tangents[j], tangents[j]);
                let off = -ri * rj * p(tangents[i], tangents[j]);
                h[(i, j)] += off;
                h[(j, i)] += off;
            }
            for i in 0..n {
                let di = letters[i] as usize;
                let radial = geo.points[i] - self.centers[di];
                let pull = geo.units[(i + n - 1) % n] - geo.units[i];
                h[(i, i)] += -radial.dot(&pull);
                h[(i, i)] += mu;
            }
            let step = match h.lu().solve(&(-&g)) {
                Some(s) => s,
                None => {
                    mu = (mu * 10.0).max(1e-8);
                    continue;
                }
            };
            let mut scale = 1.0f64;
            let mut accepted = false;
            for _ in 0..30 {
                let trial: Vec<f64> =
                    (0..n).map(|i| angles[i] + scale * step[i]).collect();
                let trial_geo = self.geometry(letters, &trial);
                let trial_g = grad(&trial_geo, &trial);
                let trial_norm = trial_g.amax();
                if trial_norm < gnorm {
                    angles = trial;
                    geo = trial_geo;
                    g = trial_g;
                    gnorm = trial_norm;
                    accepted = true;
                    break;
                }
                scale *= 0.5;
            }
            if accepted {
                mu *= 0.25;
                if mu < 1e-14 {
                    mu = 0.0;
                }
            } else {
                mu = (mu * 10.0).max(1e-8);
            }
        }

        let period: f64 = geo.lengths.iter().sum();
        let mut m = Matrix2::identity();
        for i in 0..n {
            let incoming = geo.units[(i + n - 1) % n];
            let flight = geo.lengths[(i + n - 1) % n];
            let di = letters[i] as usize;
            let normal = (geo.points[i] - self.centers[di]) / self.radii[di];
            let cos_phi = -incoming.dot(&normal);
            debug_assert!(cos_phi > 0.0, "bounce must hit the outer side");
            let reflect = Matrix2::new(-1.0, 0.0, -2.0 / (self.radii[di] * cos_phi), -1.0);
            m = reflect * Matrix2::new(1.0, flight, 0.0, 1.0) * m;
        }
        let tr = m.trace();
        debug_assert!(tr * tr > 4.0, "trapped orbit must be hyperbolic");
        let lambda = tr.signum() * (tr.abs() + (tr * tr - 4.0).sqrt()) / 2.0;

        Ok(BounceOrbit {
            word: word.clone(),
            bounce_angles: angles,
            points: geo.points,
            period,
            monodromy: m,
            lambda,
            j_u: lambda.abs(),
            gradient_norm: gnorm,
        })
    }

    /// One orbit per admissible primitive necklace with word length at most
    /// `max_word_len`, sorted by (period, word).
    pub fn enumerate_orbits(
        &self,
        max_word_len: usize,
        cap: usize,
    ) -> Result<Vec<BounceOrbit>, BilliardError> {
        let words = primitive_classes(self.len() as u8, max_word_len, cap, |prev, next| {
            prev != next
        })?;
        let mut orbits = Vec::with_capacity(words.len());
        for word in &words {
            orbits.push(self.find_orbit(word)?);
        }
        orbits.sort_by(|a, b| {
            a.period
                .total_cmp(&b.period)
                .then_with(|| a.word.letters().cmp(b.word.letters()))
        });
        Ok(orbits)
    }
}

/// The dynamical zeta function of a disk system, evaluated through the
/// length-graded expansion over its primitive orbit table.
pub struct BilliardZeta {
    orbits: Vec<BounceOrbit>,
    max_word_len: usize,
    /// Dirichlet boundary sign `(-1)^{n_g}` in the orbit weights.
    pub dirichlet_sign: bool,
}

impl BilliardZeta {
    pub fn new(
        system: &DiskSystem,
        max_word_len: usize,
        cap: usize,
    ) -> Result<Self, BilliardError> {
        Ok(BilliardZeta {
            orbits: system.enumerate_orbits(max_word_len, cap)?,
            max_word_len,
            dirichlet_sign: true,
        })
    }

    pub fn orbits(&self) -> &[BounceOrbit] {
        &self.orbits
    }

    pub fn max_word_len(&self) -> usize {
        self.max_word_len
    }

    /// Expansion coefficients by total word length at `k`; their sum is the
    /// zeta value and their decay witnesses shadowing cancellation.
    pub fn coefficients(&self, k: Complex64, m_max: usize) -> Vec<Complex64> {
        let l = self.max_word_len;
        let mut coeffs = vec![Complex64::ZERO; l + 1];
        coeffs[0] = Complex64::ONE;
        for orbit in &self.orbits {
            let n = orbit.word.len();
            let sign = if self.dirichlet_sign && n % 2 == 1 { -1.0 } else { 1.0 };
            let base = (Complex64::i() * k * orbit.period).exp() * sign / orbit.j_u.sqrt();
            for m in 0..=m_max {
                let t = base / orbit.lambda.powi(m as i32);
                for g in (n..=l).rev() {
                    let update = t * coeffs[g - n];
                    coeffs[g] -= update;
                }
            }
        }
        coeffs
    }

    /// Zeta value and the magnitude of the last retained grade (error
    /// estimate) at `k`.
    pub fn eval_with_estimate(&self, k: Complex64, m_max: usize) -> (Complex64, f64) {
        let coeffs = self.coefficients(k, m_max);
        (coeffs.iter().sum(), coeffs[self.max_word_len].norm())
    }

    pub fn eval(&self, k: Complex64, m_max: usize) -> Complex64 {
        self.eval_with_estimate(k, m_max).0
    }
}

/// One-shot zeta evaluation; builds the orbit table on every call.
pub fn dynamical_zeta(
    system: &DiskSystem,
    k: Complex64,
    max_word_len: usize,
    m_max: usize,
    cap: usize,
) -> Result<Complex64, BilliardError> {
    Ok(BilliardZeta::new(system, max_word_len, cap)?.eval(k, m_max))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::schottky::least_squares;

    const CAP: usize = 1_000_000;

    fn two_disk() -> DiskSystem {
        DiskSystem::two_disk(6.0, 1.0).unwrap()
    }

    fn orbit(system: &DiskSystem, word: &str) -> BounceOrbit {
        system.find_orbit(&system.parse_word(word).unwrap()).unwrap()
    }

    #[test]
    fn collinear_disks_are_eclipsed() {
        let r = DiskSystem::new(
            vec![
                Vector2::new(0.0, 0.0),
                Vector2::new(6.0, 0.0),
                Vector2::new(12.0, 0.0),
            ],
            vec![1.0, 1.0, 1.0],
        );
        match r {
            Err(BilliardError::EclipseViolation { k, .. }) => assert_eq!(k, 1),
            other => panic!("expected EclipseViolation, got {other:?}"),
        }
    }

    #[test]
    fn overlapping_disks_rejected() {
        match DiskSystem::two_disk(1.5, 1.0) {
            Err(BilliardError::DiskOverlap { gap, .. }) => assert!(gap <= 0.0),
            other => panic!("expected DiskOverlap, got {other:?}"),
        }
    }

    #[test]
    fn equilateral_satisfies_no_eclipse() {
        let s = DiskSystem::equilateral(6.0, 1.0).unwrap();
        assert_eq!(s.len(), 3);
        assert!((s.min_gap() - 4.0).abs() < 1e-12);
    }

    #[test]
    fn two_disk_orbit_is_the_axis_bounce() {
        let orbit = orbit(&two_disk(), "AB");
        assert!((orbit.period - 8.0).abs() < 1e-12, "period {}", orbit.period);
        let expect = Matrix2::new(9.0, 40.0, 20.0, 89.0);
        assert!((orbit.monodromy - expect).norm() < 1e-9, "{}", orbit.monodromy);
        let tr = 98.0f64;
        let lam = (tr + (tr * tr - 4.0).sqrt()) / 2.0;
        assert!((orbit.lambda - lam).abs() < 1e-9);
        assert!(orbit.gradient_norm < 1e-10);
    }

    #[test]
    fn monodromy_is_symplectic_and_hyperbolic() {
        let s = DiskSystem::equilateral(6.0, 1.0).unwrap();
        for word in ["AB", "ABC", "ABAC", "ABCACB"] {
            let o = orbit(&s, word);
            // det = ad - bc cancels catastrophically when the entries reach
            // the J^u scale, so the symplectic tolerance carries eps * |M|^2.
            let det_tol = 1e-8 + 1e-14 * o.monodromy.norm_squared();
            assert!(
                (o.monodromy.determinant() - 1.0).abs() < det_tol,
                "{word}: det {}",
                o.monodromy.determinant()
            );
            assert!(o.j_u > 1.0);
            // Symplectic pairing: the inverse monodromy contracts by 1/J^u.
            let inv = o.monodromy.try_inverse().unwrap();
            let tr = inv.trace();
            let lead = (tr.abs() + (tr * tr - 4.0).sqrt()) / 2.0;
            assert!((lead - o.j_u).abs() / o.j_u < det_tol.max(1e-8));
        }
    }

    #[test]
    fn bounce_points_satisfy_reflection_law() {
        let s = DiskSystem::equilateral(6.0, 1.0).unwrap();
        let o = orbit(&s, "ABCB");
        let n = o.points.len();
        for i in 0..n {
            let d = o.word.letters()[i] as usize;
            let radial = (o.points[i] - s.center(d)).norm();
            assert!((radial - s.radius(d)).abs() < 1e-10);
            let incoming = (o.points[i] - o.points[(i + n - 1) % n]).normalize();
            let outgoing = (o.points[(i + 1) % n] - o.points[i]).normalize();
            let normal = (o.points[i] - s.center(d)) / s.radius(d);
            let reflected = incoming - normal * (2.0 * incoming.dot(&normal));
            assert!((reflected - outgoing).norm() < 1e-10, "bounce {i}");
        }
    }

    /// Ray-tracing oracle for the monodromy convention: perturb a transverse
    /// section at bounce 0, follow plain reflections for one period, and
    /// differentiate the return map. The map is real-analytic, so the
    /// derivative is taken by complex-step differentiation (imaginary
    /// perturbation of size h, derivative = Im f / h), which has no
    /// subtractive cancellation and stays exact even for stiff orbits. Only
    /// the leading-eigenvalue magnitude is basis-free, so that is the pinned
    /// quantity.
    fn ray_trace_j_u(system: &DiskSystem, orbit: &BounceOrbit) -> f64 {
        #[derive(Clone, Copy)]
        struct C2(Complex64, Complex64);
        impl C2 {
            fn real(v: Vector2<f64>) -> Self {
                C2(v.x.into(), v.y.into())
            }
            fn add(self, o: C2) -> Self {
                C2(self.0 + o.0, self.1 + o.1)
            }
            fn sub(self, o: C2) -> Self {
                C2(self.0 - o.0, self.1 - o.1)
            }
            fn scale(self, t: Complex64) -> Self {
                C2(self.0 * t, self.1 * t)
            }
            fn dot(self, o: C2) -> Complex64 {
                self.0 * o.0 + self.1 * o.1
            }
        }
        let n = orbit.points.len();
        let step_ray = |start: C2, dir: C2, disk: usize| {
            let c = C2::real(system.center(disk));
            let r = system.radius(disk);
            let oc = start.sub(c);
            let b = oc.dot(dir);
            let disc = b * b - (oc.dot(oc) - r * r);
            let t = -b - disc.sqrt();
            let hit = start.add(dir.scale(t));
            let normal = hit.sub(c).scale((1.0 / r).into());
            (hit, dir.sub(normal.scale(2.0 * dir.dot(normal))))
        };
        // Section at bounce 0: offset along the wavefront normal, direction
        // slope relative to the periodic ray.
        let p0 = C2::real(orbit.points[0]);
        let v0r = (orbit.points[1] - orbit.points[0]).normalize();
        let v0 = C2::real(v0r);
        let w0 = C2::real(Vector2::new(-v0r.y, v0r.x));
        let flow = |dq: Complex64, dp: Complex64| -> (Complex64, Complex64) {
            let mut pos = p0.add(w0.scale(dq));
            let norm = (Complex64::ONE + dp * dp).sqrt();
            let mut dir = v0.scale(1.0 / norm).add(w0.scale(dp / norm));
            for i in 1..=n {
                let disk = orbit.word.letters()[i % n] as usize;
                let (hit, out) = step_ray(pos, dir, disk);
                pos = hit;
                dir = out;
            }
            // Slide back along the (straight) outgoing ray to the section
            // plane through p0; exact, not a linearization.
            let offset = pos.sub(p0);
            let along = offset.dot(v0);
            let slope = dir.dot(w0) / dir.dot(v0);
            (offset.dot(w0) - along * slope, slope)
        };
        let h = 1e-60;
        let ih = Complex64::new(0.0, h);
        let zero = Complex64::ZERO;
        let (a, c) = flow(ih, zero);
        let (b, d) = flow(zero, ih);
        let j = Matrix2::new(a.im / h, b.im / h, c.im / h, d.im / h);
        let tr = j.trace().abs();
        (tr + (tr * tr - 4.0).sqrt()) / 2.0
    }

    #[test]
    fn monodromy_matches_ray_tracing_oracle() {
        let td = two_disk();
        let eq = DiskSystem::equilateral(6.0, 1.0).unwrap();
        for (system, word) in [(&td, "AB"), (&eq, "AB"), (&eq, "ABC"), (&eq, "ABAC")] {
            let o = orbit(system, word);
            let fd = ray_trace_j_u(system, &o);
            assert!(
                (fd - o.j_u).abs() / o.j_u < 1e-6,
                "{word}: matrix {} vs ray {}",
                o.j_u,
                fd
            );
        }
    }

    #[test]
    fn reversed_word_has_identical_invariants() {
        let s = DiskSystem::equilateral(6.0, 1.0).unwrap();
        let fwd = orbit(&s, "ABC");
        let rev = orbit(&s, "ACB");
        assert!((fwd.period - rev.period).abs() < 1e-10);
        assert!((fwd.j_u - rev.j_u).abs() / fwd.j_u < 1e-10);
    }

    #[test]
    fn rigid_motions_preserve_orbit_data() {
        let base = DiskSystem::equilateral(6.0, 1.0).unwrap();
        let (c, sn) = (0.6f64.cos(), 0.6f64.sin());
        let rot = |v: Vector2<f64>| {
            Vector2::new(c * v.x - sn * v.y + 3.0, sn * v.x + c * v.y - 1.5)
        };
        let moved = DiskSystem::new(
            (0..3).map(|i| rot(base.center(i))).collect(),
            vec![1.0, 1.0, 1.0],
        )
        .unwrap();
        for word in ["AB", "ABC", "ABCB"] {
            let a = orbit(&base, word);
            let b = orbit(&moved, word);
            assert!((a.period - b.period).abs() < 1e-10);
            assert!((a.j_u - b.j_u).abs() / a.j_u < 1e-10);
        }
    }

    #[test]
    fn orbit_counts_match_necklace_combinatorics() {
        let td = two_disk();
        assert_eq!(td.enumerate_orbits(4, CAP).unwrap().len(), 1);
        let eq = DiskSystem::equilateral(6.0, 1.0).unwrap();
        assert_eq!(eq.enumerate_orbits(2, CAP).unwrap().len(), 3);
        // Lengths 2..4 on three symbols: 3 + 2 + 3 primitive necklaces.
        assert_eq!(eq.enumerate_orbits(4, CAP).unwrap().len(), 8);
        let orbits = eq.enumerate_orbits(6, CAP).unwrap();
        assert!(orbits.windows(2).all(|w| w[0].period <= w[1].period));
    }

    #[test]
    fn single_orbit_zeta_vanishes_on_the_analytic_lattice() {
        let zeta = BilliardZeta::new(&two_disk(), 12, CAP).unwrap();
        let o = &zeta.orbits()[0];
        let (t, lam) = (o.period, o.j_u);
        // With one orbit of grade 2 the expansion to grade 12 reproduces the
        // product over m <= 4 exactly; its zeros are the half-lattice. Deep
        // rows are evaluated in the shadow of huge non-vanishing factors, so
        // the residual is compared against that conditioning scale.
        for (m, q) in [(0usize, 1i32), (1, 2), (2, 5), (4, 1)] {
            let k = Complex64::new(
                2.0 * std::f64::consts::PI * q as f64 / t,
                -(0.5 + m as f64) * lam.ln() / t,
            );
            let z = zeta.eval(k, 4);
            let base = (Complex64::i() * k * t).exp() / lam.sqrt();
            let scale: f64 = (0..=4)
                .filter(|&j| j != m)
                .map(|j| (Complex64::ONE - base / lam.powi(j as i32)).norm())
                .product();
            assert!(
                z.norm() < 1e-9 * scale.max(1.0),
                "m={m} q={q}: |zeta| = {:.3e}, scale {scale:.3e}",
                z.norm()
            );
        }
        let k00 = Complex64::new(2.0 * std::f64::consts::PI / t, -0.5 * lam.ln() / t);
        assert!(zeta.eval(k00, 4).norm() < 1e-10);
    }

    #[test]
    fn zeta_has_no_zeros_on_the_real_axis() {
        let zeta = BilliardZeta::new(&two_disk(), 12, CAP).unwrap();
        let mut min_mod = f64::INFINITY;
        for i in 0..400 {
            let k = Complex64::new(5.0 + 10.0 * i as f64 / 400.0, 0.0);
            min_mod = min_mod.min(zeta.eval(k, 6).norm());
        }
        assert!(min_mod > 0.5, "min |zeta| on real window = {min_mod}");
    }

    #[test]
    fn expansion_grades_decay_geometrically() {
        let s = DiskSystem::equilateral(6.0, 1.0).unwrap();
        let zeta = BilliardZeta::new(&s, 10, CAP).unwrap();
        let k = Complex64::new(4.0, -0.2);
        let coeffs = zeta.coefficients(k, 6);
        let mags: Vec<f64> = coeffs[2..].iter().map(|c| c.norm()).collect();
        // Least-squares decay rate of the curvature corrections.
        let xs: Vec<f64> = (0..mags.len()).map(|i| i as f64).collect();
        let ys: Vec<f64> = mags.iter().map(|m| m.max(1e-300).ln()).collect();
        let (slope, _, _) = least_squares(&xs, &ys);
        assert!(slope < -0.5, "decay rate {slope}");
        assert!(mags[mags.len() - 1] < 1e-4 * mags[0]);
    }
}
