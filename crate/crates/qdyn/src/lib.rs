//! Constructive objects of quadratic polynomial dynamics.
//!
//! Everything here is built around the family `P_c(z) = z^2 + c`:
//!
//! * [`dynamics`] — iteration, fixed points, multiplier classification;
//! * [`potential`] — the escape-rate potential (Green's function), Böttcher
//!   arguments, equipotential curves and external-ray tracing;
//! * [`puzzle`] — the nested ray/equipotential partitions and membership
//!   queries;
//! * [`tableau`] — 0/1 return matrices of orbit ends, their combinatorial
//!   rules, the `tau` return function and period detection;
//! * [`modulus`] — conformal modulus estimation for annuli between Jordan
//!   regions;
//! * [`interval`] — renormalization of real folding maps on an interval;
//! * [`renorm`] — renormalization detection, cascades, and measured bounds;
//! * [`sector`] — root maps of the slit plane, hyperbolic neighborhoods and
//!   the sector-angle machinery with its distortion constants;
//! * [`paramspace`] — Newton searches in the parameter plane (preperiodic
//!   points, superstable centers, the period-doubling limit, window scans).
//!
//! All computations are plain `f64`; results that depend on a finite budget
//! (iteration counts, truncations, grid resolutions) carry that budget in
//! their output types rather than pretending to be exact.

pub mod angle;
pub mod dynamics;
pub mod geom;
pub mod interval;
pub mod modulus;
pub mod paramspace;
pub mod potential;
pub mod puzzle;
pub mod renorm;
pub mod sector;
pub mod tableau;

pub use num_complex::Complex64;

/// Convenience constructor used throughout the crate.
#[inline]
pub fn cx(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}
