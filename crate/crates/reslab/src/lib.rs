//! Resonance laboratory for open chaotic systems.
//!
//! Two families of scatterers are covered by the same pipeline:
//!
//! * convex co-compact hyperbolic surfaces, entered as Fuchsian Schottky
//!   groups ([`schottky`]), whose Selberg zeta function is computed either as
//!   a Fredholm determinant of a discretized transfer operator or as a cycle
//!   expansion over closed geodesics ([`xfer`]);
//! * planar disk billiards satisfying a no-eclipse condition ([`billiard`]),
//!   with periodic bounce orbits, stability monodromy, and a semiclassical
//!   dynamical zeta function.
//!
//! Downstream modules consume either family: [`thermo`] estimates topological
//! pressure, entropy, and the Bowen dimension from periodic-orbit data;
//! [`zeros`] locates zeta zeros (resonances) by the argument principle and
//! fits fractal Weyl window counts; [`fup`] measures uncertainty-principle
//! exponents for Cantor alphabets. [`cli`] wires the pieces into reproducible
//! batch jobs with checksummed outputs; [`io`] holds the documented on-disk
//! formats.
//!
//! Every runnable capability has a worked example under `examples/`; start
//! with `two_disk_lattice` or `three_funnel_resonances`.

pub mod billiard;
pub mod cli;
pub mod fup;
pub mod io;
pub mod schottky;
pub mod thermo;
pub mod words;
pub mod xfer;
pub mod zeros;

pub use num_complex::Complex64;
