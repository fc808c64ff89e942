//! The escape-rate potential of the filled set of `P_c`, Böttcher
//! arguments, external-ray tracing and equipotential curves.
//!
//! A point escaping to infinity has potential `G(z) = lim 2^-n log|P^n(z)|`;
//! the potential doubles under the map, external rays are the curves of
//! constant Böttcher argument, equipotentials the level curves of `G`.
//! Rays are traced by Newton continuation on the iterated equation
//! `P^n(z) = w` where `w` sits far out on the doubled ray, walking the
//! potential down level by level from a warm start at the previous level.

use num_complex::Complex64;
use thiserror::Error;

use crate::angle::Angle;
use crate::dynamics::{escape_radius, step};

#[derive(Debug, Error, Clone)]
pub enum PotentialError {
    #[error("non-finite input")]
    NonFinite,
    #[error("point does not escape within the iteration budget")]
    NotEscaping,
    #[error("Newton continuation diverged at potential {g:.3e} on the {theta} ray")]
    NewtonDiverged { theta: Angle, g: f64 },
    #[error("potential floor reached before landing could be decided")]
    PrecisionFloor,
    #[error("iteration budget exhausted without escape or boundedness certificate")]
    BudgetExhausted,
}

/// Iteration budget for escape detection.
pub const GREEN_BUDGET: u32 = 1 << 14;
/// Orbit modulus beyond which the limit formula is evaluated.
const ESCAPE_CUTOFF: f64 = 1e8;
/// Potential at which ray tracing starts; `h_inf(w) - w = O(c/w)` is far
/// below every tolerance here.
pub const G_START: f64 = 16.0;
/// Hard floor for the landing search. Points stay O(1) while the potential
/// shrinks, so the floor is set by the doubling count, not by `f64` range.
pub const G_FLOOR: f64 = 1e-60;
/// Cauchy window and diameter used to declare a ray landed.
const LANDING_WINDOW: usize = 16;
const LANDING_DIAM: f64 = 1e-7;

#[derive(Debug, Clone, Copy)]
pub struct GreenEstimate {
    pub value: f64,
    /// False only when the budget ran out without a verdict; the value is
    /// then reported as 0.
    pub confident: bool,
    pub escaped: bool,
    pub iterations: u32,
}

/// Green's function of the filled set, `max{0, lim 2^-n log|P^n(z)|}`.
///
/// Escape is decided against the monotone-escape radius; once the orbit
/// passes `1e8` the limit is evaluated with one tail-correction term,
/// which leaves a relative error far below `1e-9` for `g >= 1e-4`.
pub fn green(c: Complex64, z: Complex64) -> Result<GreenEstimate, PotentialError> {
    if !c.is_finite() || !z.is_finite() {
        return Err(PotentialError::NonFinite);
    }
    let r_esc = escape_radius(c);
    let mut w = z;
    let mut crossed = false;
    for n in 0..GREEN_BUDGET {
        let norm = w.norm();
        if norm > ESCAPE_CUTOFF {
            let scale = 0.5f64.powi(n as i32);
            let tail = (Complex64::new(1.0, 0.0) + c / (w * w)).norm().ln();
            let value = scale * norm.ln() + 0.5 * scale * tail;
            return Ok(GreenEstimate { value, confident: true, escaped: true, iterations: n });
        }
        crossed = crossed || norm > r_esc;
        w = step(c, w);
        if !w.is_finite() {
            // The previous value already certified escape far beyond the
            // cutoff; treat like an escape at the last finite iterate.
            let scale = 0.5f64.powi(n as i32);
            return Ok(GreenEstimate {
                value: scale * ESCAPE_CUTOFF.ln(),
                confident: true,
                escaped: true,
                iterations: n,
            });
        }
    }
    if crossed {
        // Left the escape radius but never reached the cutoff within the
        // budget; mathematically impossible, reported honestly anyway.
        return Ok(GreenEstimate { value: 0.0, confident: false, escaped: false, iterations: GREEN_BUDGET });
    }
    Ok(GreenEstimate { value: 0.0, confident: true, escaped: false, iterations: GREEN_BUDGET })
}

/// Convenience: the potential value alone (0 for bounded orbits).
pub fn green_value(c: Complex64, z: Complex64) -> f64 {
    green(c, z).map(|e| e.value).unwrap_or(f64::NAN)
}

/// External angle (Böttcher argument, in turns) of an escaping point,
/// computed by tracking a continuous argument along the escape orbit and
/// dividing out the doublings.
pub fn external_angle(c: Complex64, z: Complex64) -> Result<f64, PotentialError> {
    let est = green(c, z)?;
    if !est.escaped || est.value <= 1e-4 {
        return Err(PotentialError::NotEscaping);
    }
    external_angle_unchecked(c, z)
}

/// Same as [`external_angle`] without the `g > 1e-4` gate; used internally
/// on points known to escape at very small potential.
pub fn external_angle_unchecked(c: Complex64, z: Complex64) -> Result<f64, PotentialError> {
    use std::f64::consts::PI;
    let mut w = z;
    let mut a = z.arg();
    let mut n = 0u32;
    while w.norm() <= ESCAPE_CUTOFF {
        w = step(c, w);
        n += 1;
        if !w.is_finite() || n >= GREEN_BUDGET {
            return Err(PotentialError::NotEscaping);
        }
        let doubled = 2.0 * a;
        let mut delta = w.arg() - wrap_pi(doubled);
        if delta > PI {
            delta -= 2.0 * PI;
        } else if delta < -PI {
            delta += 2.0 * PI;
        }
        a = doubled + delta;
    }
    let theta = a / (2.0 * PI * 2.0f64.powi(n as i32));
    Ok(theta.rem_euclid(1.0))
}

fn wrap_pi(x: f64) -> f64 {
    use std::f64::consts::PI;
    let y = (x + PI).rem_euclid(2.0 * PI);
    y - PI
}

/// One sample on a traced ray.
#[derive(Debug, Clone, Copy)]
pub struct RayPoint {
    pub g: f64,
    pub z: Complex64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RayStatus {
    /// Reached the requested minimum potential.
    Complete,
    /// Landing detected by the Cauchy criterion.
    Landed,
    /// Newton continuation failed below the recorded potential; the ray
    /// holds every point above it.
    NewtonDiverged,
    /// Landing requested but undecided when the potential floor was hit.
    PrecisionFloor,
}

/// A traced external ray: points sorted by decreasing potential, plus the
/// landing verdict when `g_min = 0` was requested.
#[derive(Debug, Clone)]
pub struct ExternalRay {
    pub theta: Angle,
    pub points: Vec<RayPoint>,
    pub landing: Option<Complex64>,
    pub landed: bool,
    pub status: RayStatus,
}

impl ExternalRay {
    /// Last successfully traced potential.
    pub fn last_g(&self) -> f64 {
        self.points.last().map(|p| p.g).unwrap_or(f64::INFINITY)
    }

    /// Point at exactly potential `g`, if that level was scheduled.
    pub fn point_at(&self, g: f64) -> Option<Complex64> {
        self.points
            .iter()
            .find(|p| (p.g - g).abs() <= 1e-12 * g.max(1e-300))
            .map(|p| p.z)
    }
}

/// Evaluate `P^n` and its derivative at `z`.
fn eval_iter(c: Complex64, z: Complex64, n: u32) -> (Complex64, Complex64) {
    let mut v = z;
    let mut d = Complex64::new(1.0, 0.0);
    for _ in 0..n {
        d *= 2.0 * v;
        v = step(c, v);
    }
    (v, d)
}

/// Newton solve of `P^n(z) = w` from `z0`. Returns `None` on divergence.
fn newton_pullback(c: Complex64, n: u32, w: Complex64, z0: Complex64) -> Option<Complex64> {
    let mut z = z0;
    let mut last_res = f64::INFINITY;
    for _ in 0..48 {
        let (v, d) = eval_iter(c, z, n);
        if !v.is_finite() || !d.is_finite() || d.norm() == 0.0 {
            return None;
        }
        let f = v - w;
        let res = f.norm();
        let delta = f / d;
        z -= delta;
        if !z.is_finite() {
            return None;
        }
        if delta.norm() <= 1e-14 * z.norm().max(1e-30) {
            return Some(z);
        }
        if res > 4.0 * last_res && res > 1e-9 * w.norm() {
            return None;
        }
        last_res = last_res.min(res);
    }
    None
}

/// Doublings needed to push potential `g` up into `[G_START, 2 G_START)`.
fn doublings_for(g: f64) -> u32 {
    if g >= G_START {
        return 0;
    }
    let mut n = (G_START / g).log2().ceil() as i64;
    if n < 0 {
        n = 0;
    }
    // Guard the edge where rounding puts 2^n g just under G_START.
    let mut n = n as u32;
    while 2.0f64.powi(n as i32) * g < G_START {
        n += 1;
    }
    n
}

/// Far-field target for the ray at potential `g` after `n` doublings.
fn ray_target(theta: Angle, g: f64, n: u32) -> Complex64 {
    let gg = 2.0f64.powi(n as i32) * g;
    let t = theta.double_n(n).to_f64();
    let phase = 2.0 * std::f64::consts::PI * t;
    Complex64::from_polar(gg.exp(), phase)
}

/// Solve for the ray point at potential `g`, warm-starting from `z0`.
fn ray_solve(c: Complex64, theta: Angle, g: f64, z0: Complex64) -> Option<Complex64> {
    let n = doublings_for(g);
    let w = ray_target(theta, g, n);
    if n == 0 {
        return Some(w);
    }
    newton_pullback(c, n, w, z0)
}

/// Continuation step from `(g_hi, z_hi)` down to `g_lo`, bisecting the
/// potential step geometrically when Newton refuses.
fn continue_down(
    c: Complex64,
    theta: Angle,
    g_hi: f64,
    z_hi: Complex64,
    g_lo: f64,
    depth: u32,
) -> Option<Complex64> {
    if let Some(z) = ray_solve(c, theta, g_lo, z_hi) {
        return Some(z);
    }
    if depth == 0 {
        return None;
    }
    let g_mid = (g_hi * g_lo).sqrt();
    let z_mid = continue_down(c, theta, g_hi, z_hi, g_mid, depth - 1)?;
    continue_down(c, theta, g_mid, z_mid, g_lo, depth - 1)
}

/// Level schedule for a positive-potential trace: halvings from `G_START`,
/// merged with any mandatory levels, truncated at `g_min`.
fn level_schedule(g_min: f64, mandatory: &[f64]) -> Vec<f64> {
    let mut levels = Vec::new();
    let mut g = G_START;
    let stop = g_min.max(G_FLOOR);
    while g > stop {
        levels.push(g);
        g /= 2.0;
    }
    levels.push(stop);
    for &m in mandatory {
        if m < G_START && m > stop {
            levels.push(m);
        }
    }
    levels.sort_by(|a, b| b.partial_cmp(a).unwrap());
    levels.dedup_by(|a, b| (*a - *b).abs() <= 1e-12 * b.max(1e-300));
    levels
}

fn tail_diameter(points: &[RayPoint]) -> f64 {
    let tail = &points[points.len().saturating_sub(LANDING_WINDOW)..];
    let mut d = 0.0f64;
    for i in 0..tail.len() {
        for j in i + 1..tail.len() {
            d = d.max((tail[i].z - tail[j].z).norm());
        }
    }
    d
}

/// Aitken extrapolation of the landing point from the last three samples.
fn landing_estimate(points: &[RayPoint]) -> Complex64 {
    let n = points.len();
    if n >= 3 {
        let (z0, z1, z2) = (points[n - 3].z, points[n - 2].z, points[n - 1].z);
        let d1 = z1 - z0;
        let d2 = z2 - z1;
        let denom = d2 - d1;
        if denom.norm() > 1e-14 * d2.norm().max(1e-300) {
            let acc = z2 - d2 * d2 / denom;
            if acc.is_finite() && (acc - z2).norm() < 10.0 * d2.norm() + 1e-12 {
                return acc;
            }
        }
    }
    points[n - 1].z
}

fn finish_ray(theta: Angle, points: Vec<RayPoint>, status: RayStatus) -> ExternalRay {
    let (landed, landing) = match status {
        RayStatus::Landed => (true, Some(landing_estimate(&points))),
        _ => (false, None),
    };
    ExternalRay { theta, points, landing, landed, status }
}

/// Trace the external ray of angle `theta` from `G_START` down to `g_min`.
/// `g_min = 0` requests landing detection.
///
/// Positive `g_min` uses Newton continuation on the iterated equation.
/// Landing traces instead pull the whole (finite) doubling orbit of the
/// angle down simultaneously: each new sample is a square-root preimage of
/// the doubled ray one level up. That step is contracting, so it stays
/// well-conditioned arbitrarily close to the Julia set, where the Newton
/// basin of the iterated equation collapses like `multiplier^-n`.
pub fn trace_ray(c: Complex64, theta: Angle, g_min: f64) -> Result<ExternalRay, PotentialError> {
    if !c.is_finite() || !g_min.is_finite() || g_min < 0.0 {
        return Err(PotentialError::NonFinite);
    }
    if g_min > 0.0 {
        trace_ray_newton(c, theta, g_min, &[])
    } else {
        let orbit = trace_ray_orbit(c, theta, None)?;
        Ok(orbit.into_iter().next().unwrap())
    }
}

/// Newton-continuation trace down to a positive potential, with optional
/// mandatory levels inserted into the schedule.
pub fn trace_ray_newton(
    c: Complex64,
    theta: Angle,
    g_min: f64,
    mandatory: &[f64],
) -> Result<ExternalRay, PotentialError> {
    if !c.is_finite() || !g_min.is_finite() || g_min <= 0.0 {
        return Err(PotentialError::NonFinite);
    }
    let levels = level_schedule(g_min, mandatory);
    let mut points: Vec<RayPoint> = Vec::with_capacity(levels.len());
    let first = ray_target(theta, levels[0], 0);
    points.push(RayPoint { g: levels[0], z: first });
    let mut z = first;
    let mut g = levels[0];
    for &g_next in &levels[1..] {
        match continue_down(c, theta, g, z, g_next, 10) {
            Some(z_next) => {
                points.push(RayPoint { g: g_next, z: z_next });
                z = z_next;
                g = g_next;
            }
            None => return Ok(finish_ray(theta, points, RayStatus::NewtonDiverged)),
        }
    }
    Ok(finish_ray(theta, points, RayStatus::Complete))
}

/// Trace every ray in the doubling orbit of `theta` down to landing.
///
/// Returns one ray per orbit angle, starting with `theta` itself. When
/// `level_base` is given, the level grid is aligned so that every value
/// `level_base / 2^j` is sampled exactly (the puzzle needs boundary points
/// exactly on its equipotentials).
pub fn trace_ray_orbit(
    c: Complex64,
    theta: Angle,
    level_base: Option<f64>,
) -> Result<Vec<ExternalRay>, PotentialError> {
    if !c.is_finite() {
        return Err(PotentialError::NonFinite);
    }
    // Forward doubling orbit of the angle, with successor indices.
    let orbit = theta.doubling_orbit();
    let m = orbit.len();
    let next: Vec<usize> = orbit
        .iter()
        .map(|t| {
            let d = t.double();
            orbit.iter().position(|u| *u == d).expect("orbit closed under doubling")
        })
        .collect();

    // Doubling-closed level grid T/2^k with T in [G_START, 2 G_START).
    let top = match level_base {
        Some(b) if b > 0.0 && b.is_finite() => {
            let mut t = b;
            while t < G_START {
                t *= 2.0;
            }
            while t >= 2.0 * G_START {
                t /= 2.0;
            }
            t
        }
        _ => G_START,
    };

    let mut rays: Vec<Vec<RayPoint>> = (0..m)
        .map(|j| vec![RayPoint { g: top, z: ray_target(orbit[j], top, 0) }])
        .collect();
    let mut landed_at: Vec<Option<usize>> = vec![None; m];

    let mut g = top;
    let mut level = 0usize;
    while g > G_FLOOR && landed_at.iter().any(|l| l.is_none()) {
        let g_next = g / 2.0;
        // One synchronous pullback step: ray j at g/2 is the preimage of
        // ray next[j] at g, on the branch nearest ray j's previous sample.
        // All rays advance in lockstep so every level index exists.
        for j in 0..m {
            let up = rays[next[j]][level].z;
            let prev = rays[j][level].z;
            let w = (up - c).sqrt();
            let z = if (w - prev).norm() <= (-w - prev).norm() { w } else { -w };
            rays[j].push(RayPoint { g: g_next, z });
        }
        level += 1;
        g = g_next;
        for j in 0..m {
            if landed_at[j].is_none()
                && rays[j].len() >= LANDING_WINDOW
                && tail_diameter(&rays[j]) < LANDING_DIAM
            {
                landed_at[j] = Some(rays[j].len());
            }
        }
    }

    Ok((0..m)
        .map(|j| {
            let status =
                if landed_at[j].is_some() { RayStatus::Landed } else { RayStatus::PrecisionFloor };
            finish_ray(orbit[j], std::mem::take(&mut rays[j]), status)
        })
        .collect())
}

/// Single ray point at potential `g` (no landing machinery).
pub fn ray_point(c: Complex64, theta: Angle, g: f64) -> Result<Complex64, PotentialError> {
    if g <= 0.0 || !g.is_finite() {
        return Err(PotentialError::NonFinite);
    }
    let ray = trace_ray_newton(c, theta, g, &[])?;
    match ray.status {
        RayStatus::Complete => Ok(ray.points.last().unwrap().z),
        _ => Err(PotentialError::NewtonDiverged { theta, g }),
    }
}

/// Ray point for a float angle. Angle doubling in `f64` loses one bit per
/// level, so this is only for moderate potentials (equipotential and arc
/// sampling); the doubling count is capped accordingly.
pub fn ray_point_f(c: Complex64, theta: f64, g: f64) -> Result<Complex64, PotentialError> {
    if g <= 0.0 || !g.is_finite() || !theta.is_finite() {
        return Err(PotentialError::NonFinite);
    }
    if doublings_for(g) > 40 {
        return Err(PotentialError::PrecisionFloor);
    }
    let theta = theta.rem_euclid(1.0);
    let target_f = |g_level: f64| -> Complex64 {
        let n = doublings_for(g_level);
        let gg = 2.0f64.powi(n as i32) * g_level;
        let t = (theta * 2.0f64.powi(n as i32)).rem_euclid(1.0);
        Complex64::from_polar(gg.exp(), 2.0 * std::f64::consts::PI * t)
    };
    // Newton continuation down the halving schedule, as in the exact-angle
    // path but with float targets.
    let mut level = G_START;
    let mut z = target_f(level);
    while level > g * (1.0 + 1e-12) {
        let next = (level / 2.0).max(g);
        let n = doublings_for(next);
        let gg = 2.0f64.powi(n as i32) * next;
        let t = (theta * 2.0f64.powi(n as i32)).rem_euclid(1.0);
        let w = Complex64::from_polar(gg.exp(), 2.0 * std::f64::consts::PI * t);
        let sol = if n == 0 { Some(w) } else { newton_pullback(c, n, w, z) };
        match sol {
            Some(zz) => {
                z = zz;
                level = next;
            }
            None => {
                // Geometric substep.
                let mid = (level * next).sqrt();
                let n = doublings_for(mid);
                let gg = 2.0f64.powi(n as i32) * mid;
                let t = (theta * 2.0f64.powi(n as i32)).rem_euclid(1.0);
                let wmid = Complex64::from_polar(gg.exp(), 2.0 * std::f64::consts::PI * t);
                match newton_pullback(c, n, wmid, z) {
                    Some(zz) => {
                        z = zz;
                        level = mid;
                    }
                    None => {
                        return Err(PotentialError::NewtonDiverged {
                            theta: Angle::ZERO,
                            g: level,
                        })
                    }
                }
            }
        }
    }
    Ok(z)
}

/// A closed level curve of the potential.
#[derive(Debug, Clone)]
pub struct EquipotentialCurve {
    pub level: f64,
    pub points: Vec<Complex64>,
    /// Sample indices whose trace failed; `points` holds their angular
    /// neighbors' interpolation in that case.
    pub gaps: Vec<usize>,
}

/// Sample the equipotential `G = log R` at `samples` equally spaced
/// external angles.
pub fn equipotential(
    c: Complex64,
    big_r: f64,
    samples: u32,
) -> Result<EquipotentialCurve, PotentialError> {
    if !(big_r > 1.0) || samples < 16 {
        return Err(PotentialError::NonFinite);
    }
    let g = big_r.ln();
    let mut points = Vec::with_capacity(samples as usize);
    let mut gaps = Vec::new();
    for j in 0..samples {
        match ray_point(c, Angle::new(j as u64, samples as u64), g) {
            Ok(z) => points.push(z),
            Err(_) => {
                gaps.push(j as usize);
                points.push(Complex64::new(f64::NAN, f64::NAN));
            }
        }
    }
    // Patch gaps with angular neighbors so the polyline stays usable.
    let n = points.len();
    for &j in &gaps {
        let prev = points[(j + n - 1) % n];
        let next = points[(j + 1) % n];
        if prev.is_finite() && next.is_finite() {
            points[j] = (prev + next) / 2.0;
        }
    }
    Ok(EquipotentialCurve { level: g, points, gaps })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cx;

    #[test]
    fn green_closed_forms() {
        // c = 0: G = log|z| outside the disk.
        let e = green(cx(0.0, 0.0), cx(2.0, 0.0)).unwrap();
        assert!((e.value - 2.0f64.ln()).abs() < 1e-12);
        // interior point
        let e = green(cx(0.0, 0.0), cx(0.5, 0.0)).unwrap();
        assert_eq!(e.value, 0.0);
        assert!(e.confident);
        // Chebyshev: G(z) = log|w| with z = w + 1/w.
        let e = green(cx(-2.0, 0.0), cx(3.0, 0.0)).unwrap();
        let expect = ((3.0 + 5.0f64.sqrt()) / 2.0).ln();
        assert!((e.value - expect).abs() < 1e-12, "{} vs {}", e.value, expect);
    }

    #[test]
    fn green_functional_equation() {
        for c in [cx(0.0, 0.0), cx(-1.0, 0.0), cx(0.3, 0.4)] {
            for z in [cx(1.5, 0.9), cx(-2.1, 0.3), cx(0.9, -1.4)] {
                let g = green_value(c, z);
                if g > 1e-4 {
                    let g2 = green_value(c, step(c, z));
                    assert!((g2 - 2.0 * g).abs() <= 1e-8 * (1.0 + g2));
                }
            }
        }
    }

    #[test]
    fn external_angle_examples() {
        let t = external_angle(cx(0.0, 0.0), cx(2.0, 0.0)).unwrap();
        assert!(t.abs() < 1e-12);
        let t = external_angle(cx(0.0, 0.0), cx(0.0, 2.0)).unwrap();
        assert!((t - 0.25).abs() < 1e-12);
        let t = external_angle(cx(-2.0, 0.0), cx(3.0, 0.0)).unwrap();
        assert!(t.abs() < 1e-12);
        assert!(matches!(
            external_angle(cx(0.0, 0.0), cx(0.1, 0.0)),
            Err(PotentialError::NotEscaping)
        ));
    }

    #[test]
    fn angle_doubling_property() {
        let c = cx(-0.4, 0.35);
        for z in [cx(1.3, 0.7), cx(-1.8, 0.2), cx(0.4, 1.9)] {
            let t = external_angle(c, z).unwrap();
            let t2 = external_angle(c, step(c, z)).unwrap();
            let d = (t2 - 2.0 * t).rem_euclid(1.0);
            let d = d.min(1.0 - d);
            assert!(d < 1e-8, "doubling defect {d}");
        }
    }

    #[test]
    fn radial_ray_for_c_zero() {
        let ray = trace_ray(cx(0.0, 0.0), Angle::new(1, 3), 0.0).unwrap();
        assert!(ray.landed);
        let l = ray.landing.unwrap();
        let expect = Complex64::from_polar(1.0, 2.0 * std::f64::consts::PI / 3.0);
        assert!((l - expect).norm() < 1e-7);
        // every sample is radial
        for p in &ray.points {
            let arg = p.z.arg().rem_euclid(2.0 * std::f64::consts::PI);
            assert!((arg - 2.0 * std::f64::consts::PI / 3.0).abs() < 1e-9);
            assert!((p.z.norm().ln() - p.g).abs() < 1e-9);
        }
    }

    #[test]
    fn ray_landings_at_fixed_points() {
        // 1/3-ray of the basilica lands at alpha.
        let ray = trace_ray(cx(-1.0, 0.0), Angle::new(1, 3), 0.0).unwrap();
        assert!(ray.landed, "status {:?}", ray.status);
        let alpha = (1.0 - 5.0f64.sqrt()) / 2.0;
        assert!((ray.landing.unwrap() - cx(alpha, 0.0)).norm() < 1e-6);

        // 1/2-ray of Chebyshev lands at -2.
        let ray = trace_ray(cx(-2.0, 0.0), Angle::new(1, 2), 0.0).unwrap();
        assert!(ray.landed);
        assert!((ray.landing.unwrap() - cx(-2.0, 0.0)).norm() < 1e-6);
    }

    #[test]
    fn traced_points_sit_on_their_potential() {
        let c = cx(-1.0, 0.0);
        let ray = trace_ray(c, Angle::new(1, 3), 1e-3).unwrap();
        assert_eq!(ray.status, RayStatus::Complete);
        for p in &ray.points {
            if p.g >= 1e-3 {
                assert!((green_value(c, p.z) - p.g).abs() <= 1e-6 * (1.0 + p.g));
            }
        }
    }

    #[test]
    fn ray_equivariance() {
        let c = cx(-0.1226, 0.7449);
        let theta = Angle::new(1, 7);
        let g = 0.37;
        let z = ray_point(c, theta, g).unwrap();
        let z2 = ray_point(c, theta.double(), 2.0 * g).unwrap();
        assert!((step(c, z) - z2).norm() < 1e-6);
    }

    #[test]
    fn equipotential_circle_and_ellipse() {
        let curve = equipotential(cx(0.0, 0.0), 2.0, 64).unwrap();
        assert!(curve.gaps.is_empty());
        for z in &curve.points {
            assert!((z.norm() - 2.0).abs() < 1e-9);
        }
        // Joukowski image of |w| = e for c = -2.
        let curve = equipotential(cx(-2.0, 0.0), std::f64::consts::E, 64).unwrap();
        let a = std::f64::consts::E + 1.0 / std::f64::consts::E;
        let b = std::f64::consts::E - 1.0 / std::f64::consts::E;
        for z in &curve.points {
            let v = (z.re / a).powi(2) + (z.im / b).powi(2);
            assert!((v - 1.0).abs() < 1e-9, "off ellipse: {v}");
        }
    }

    #[test]
    fn mandatory_levels_are_sampled() {
        let levels = [1.3862943611198906f64, 0.6931471805599453, 0.34657359027997264];
        let ray = trace_ray_newton(cx(-1.0, 0.0), Angle::new(2, 3), 0.2, &levels).unwrap();
        for l in levels {
            assert!(ray.point_at(l).is_some(), "level {l} missing");
        }
    }
}
