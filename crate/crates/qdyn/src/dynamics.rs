//! Iteration of `P_c(z) = z^2 + c`, fixed points, and multiplier
//! classification. Everything downstream consumes these primitives.

use num_complex::Complex64;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum DynamicsError {
    #[error("non-finite input")]
    NonFinite,
    #[error("point is not periodic with the given period (residual {residual:.3e})")]
    NotPeriodic { residual: f64 },
}

/// One step of the quadratic map.
#[inline]
pub fn step(c: Complex64, z: Complex64) -> Complex64 {
    z * z + c
}

/// `P_c^n(z)`.
pub fn iterate_n(c: Complex64, z: Complex64, n: u32) -> Complex64 {
    let mut w = z;
    for _ in 0..n {
        w = step(c, w);
    }
    w
}

/// Radius beyond which orbits provably escape monotonically:
/// `|z| > max(2, |c|)` forces `|P_c(z)| > |z|`, so one extra unit of
/// margin makes the test strict.
pub fn escape_radius(c: Complex64) -> f64 {
    c.norm().max(2.0) + 1.0
}

/// A stored orbit segment of `P_c`.
#[derive(Debug, Clone)]
pub struct Orbit {
    pub start: Complex64,
    pub points: Vec<Complex64>,
    pub escaped: bool,
    pub escape_index: Option<usize>,
}

/// Iterate `z0` for `n` steps, recording the orbit. The stored points
/// satisfy the recurrence exactly; iteration stops early only if the next
/// value would not be finite.
pub fn iterate(c: Complex64, z0: Complex64, n: u32) -> Result<Orbit, DynamicsError> {
    if !c.is_finite() || !z0.is_finite() {
        return Err(DynamicsError::NonFinite);
    }
    let r_esc = escape_radius(c);
    let mut points = Vec::with_capacity(n as usize + 1);
    points.push(z0);
    let mut escape_index = if z0.norm() > r_esc { Some(0) } else { None };
    let mut z = z0;
    for k in 0..n {
        let next = step(c, z);
        if !next.is_finite() {
            break;
        }
        points.push(next);
        if escape_index.is_none() && next.norm() > r_esc {
            escape_index = Some(k as usize + 1);
        }
        z = next;
    }
    Ok(Orbit { start: z0, points, escaped: escape_index.is_some(), escape_index })
}

/// How a periodic point sits with respect to the unit multiplier circle.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PeriodicKind {
    Repelling,
    Attractive,
    SuperAttractive,
    Neutral,
    /// Neutral with multiplier within tolerance of a root of unity
    /// `e^{2 pi i p/q}`, `q <= 64`.
    Parabolic,
}

#[derive(Debug, Clone, Copy)]
pub struct PeriodicPointClass {
    pub multiplier: Complex64,
    pub kind: PeriodicKind,
    /// Set when `|multiplier|` falls inside the `1e-9` band around 1, where
    /// repelling/neutral cannot be distinguished honestly in doubles.
    pub borderline: bool,
}

const SUPER_TOL: f64 = 1e-12;
const NEUTRAL_BAND: f64 = 1e-9;
const PARABOLIC_TOL: f64 = 1e-6;

fn classify_multiplier(lambda: Complex64) -> PeriodicPointClass {
    let m = lambda.norm();
    let borderline = (m - 1.0).abs() <= NEUTRAL_BAND;
    let kind = if m <= SUPER_TOL {
        PeriodicKind::SuperAttractive
    } else if borderline {
        if is_root_of_unity(lambda) {
            PeriodicKind::Parabolic
        } else {
            PeriodicKind::Neutral
        }
    } else if m > 1.0 {
        PeriodicKind::Repelling
    } else {
        PeriodicKind::Attractive
    };
    PeriodicPointClass { multiplier: lambda, kind, borderline }
}

fn is_root_of_unity(lambda: Complex64) -> bool {
    let arg = lambda.arg() / (2.0 * std::f64::consts::PI);
    for q in 1..=64u32 {
        let p = (arg * q as f64).round();
        if (arg * q as f64 - p).abs() < PARABOLIC_TOL * q as f64 {
            return true;
        }
    }
    false
}

/// Classify `z` as a periodic point of period `k` (not necessarily
/// minimal; the multiplier reflects the `k` that was passed in).
pub fn classify_periodic(
    c: Complex64,
    z: Complex64,
    k: u32,
) -> Result<PeriodicPointClass, DynamicsError> {
    if !c.is_finite() || !z.is_finite() {
        return Err(DynamicsError::NonFinite);
    }
    let back = iterate_n(c, z, k);
    let residual = (back - z).norm();
    if residual > 1e-9 {
        return Err(DynamicsError::NotPeriodic { residual });
    }
    let mut lambda = Complex64::new(1.0, 0.0);
    let mut w = z;
    for _ in 0..k {
        lambda *= 2.0 * w;
        w = step(c, w);
    }
    Ok(classify_multiplier(lambda))
}

/// The parameter together with its two fixed points.
///
/// `beta = (1 + sqrt(1 - 4c))/2` under the principal square root; `alpha`
/// is the other root of `z^2 + c = z`. For `c = 1/4` the two coincide.
#[derive(Debug, Clone, Copy)]
pub struct QuadraticParameter {
    pub c: Complex64,
    pub beta: Complex64,
    pub alpha: Complex64,
    pub beta_class: PeriodicPointClass,
    pub alpha_class: PeriodicPointClass,
}

impl QuadraticParameter {
    pub fn new(c: Complex64) -> Result<QuadraticParameter, DynamicsError> {
        let (beta, alpha) = fixed_points(c)?;
        Ok(QuadraticParameter {
            c,
            beta,
            alpha,
            beta_class: classify_periodic(c, beta, 1)?,
            alpha_class: classify_periodic(c, alpha, 1)?,
        })
    }
}

/// Both fixed points of `P_c`, `(beta, alpha)`.
pub fn fixed_points(c: Complex64) -> Result<(Complex64, Complex64), DynamicsError> {
    if !c.is_finite() {
        return Err(DynamicsError::NonFinite);
    }
    let disc = (Complex64::new(1.0, 0.0) - 4.0 * c).sqrt();
    let beta = (Complex64::new(1.0, 0.0) + disc) / 2.0;
    let alpha = (Complex64::new(1.0, 0.0) - disc) / 2.0;
    Ok((beta, alpha))
}
