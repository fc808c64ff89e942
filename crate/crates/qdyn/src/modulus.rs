//! Conformal modulus estimation for annuli bounded by Jordan polylines.
//!
//! The modulus convention is `mod(A_r) = -log r` for the round annulus
//! `r < |z| < 1`. The estimator computes the discrete extremal length of
//! the rasterized annulus: solve the five-point Laplace problem with the
//! inner boundary at 1 and the outer at 0, read off the Dirichlet energy
//! `Gamma` (the conductance), and report `2 pi / Gamma`. Two resolutions
//! plus Richardson extrapolation give the value and an error bound.

use num_complex::Complex64;
use thiserror::Error;

use crate::geom::{rasterize, ClosedPolyline};

#[derive(Debug, Error)]
pub enum ModulusError {
    #[error("inner region is not nested inside the outer region")]
    NotNested,
    #[error("inner and outer boundaries are indistinguishable at the maximum grid")]
    ResolutionInsufficient,
}

/// Base grid; the refinement doubles it.
pub const DEFAULT_RESOLUTION: usize = 512;

#[derive(Debug, Clone)]
pub struct AnnulusEstimate {
    pub mod_value: f64,
    pub grid_resolution: usize,
    pub error_bound: f64,
    /// Raw estimates at the two resolutions that fed the extrapolation.
    pub coarse: f64,
    pub fine: f64,
    pub degenerate: bool,
}

impl AnnulusEstimate {
    fn degenerate() -> AnnulusEstimate {
        AnnulusEstimate {
            mod_value: 0.0,
            grid_resolution: 0,
            error_bound: 0.0,
            coarse: 0.0,
            fine: 0.0,
            degenerate: true,
        }
    }
}

#[derive(Clone, Copy, PartialEq)]
enum Cell {
    Outside,
    Annulus,
    Inner,
}

fn classify_cells(
    outer: &ClosedPolyline,
    inner: &ClosedPolyline,
    lo: Complex64,
    hi: Complex64,
    res: usize,
) -> Vec<Cell> {
    let outer_mask = rasterize(outer, lo, hi, res);
    let inner_mask = rasterize(inner, lo, hi, res);
    outer_mask
        .iter()
        .zip(inner_mask.iter())
        .map(|(&o, &i)| {
            if i {
                Cell::Inner
            } else if o {
                Cell::Annulus
            } else {
                Cell::Outside
            }
        })
        .collect()
}

/// Boundary-aware potential lookup: outside cells carry 0, inner cells 1,
/// off-grid counts as outside.
#[inline]
fn cell_value(u: &[f64], cells: &[Cell], res: usize, r: usize, c: usize) -> f64 {
    if r >= res || c >= res {
        return 0.0;
    }
    match cells[r * res + c] {
        Cell::Outside => 0.0,
        Cell::Inner => 1.0,
        Cell::Annulus => u[r * res + c],
    }
}

/// Gauss-Seidel SOR sweeps over the annulus cells, in place. Serial and
/// therefore bit-deterministic.
fn sor(u: &mut [f64], cells: &[Cell], res: usize, max_sweeps: usize) {
    let omega = 2.0 / (1.0 + (std::f64::consts::PI / res as f64).sin());
    for sweep in 0..max_sweeps {
        let mut max_delta = 0.0f64;
        for r in 0..res {
            for c in 0..res {
                if cells[r * res + c] != Cell::Annulus {
                    continue;
                }
                let s = cell_value(u, cells, res, r.wrapping_sub(1), c)
                    + cell_value(u, cells, res, r + 1, c)
                    + cell_value(u, cells, res, r, c.wrapping_sub(1))
                    + cell_value(u, cells, res, r, c + 1);
                let old = u[r * res + c];
                let new = old + omega * (s / 4.0 - old);
                u[r * res + c] = new;
                max_delta = max_delta.max((new - old).abs());
            }
        }
        if sweep % 8 == 7 && max_delta < 1e-10 {
            break;
        }
    }
}

/// Solve the Dirichlet problem on the annulus cells at `res`, seeding each
/// level from a half-resolution solve (nested iteration).
fn solve_dirichlet(
    outer: &ClosedPolyline,
    inner: &ClosedPolyline,
    lo: Complex64,
    hi: Complex64,
    res: usize,
) -> (Vec<Cell>, Vec<f64>) {
    let cells = classify_cells(outer, inner, lo, hi, res);
    let mut u: Vec<f64> = cells
        .iter()
        .map(|c| if *c == Cell::Inner { 1.0 } else { 0.0 })
        .collect();
    if res > 64 {
        let (coarse_cells, coarse_u) = solve_dirichlet(outer, inner, lo, hi, res / 2);
        for r in 0..res {
            for c in 0..res {
                if cells[r * res + c] == Cell::Annulus {
                    let (cr, cc) = (r / 2, c / 2);
                    if coarse_cells[cr * (res / 2) + cc] == Cell::Annulus {
                        u[r * res + c] = coarse_u[cr * (res / 2) + cc];
                    }
                }
            }
        }
    }
    let sweeps = if res > 64 { 2 * res } else { 8 * res };
    sor(&mut u, &cells, res, sweeps);
    (cells, u)
}

/// Dirichlet energy of the solved potential = conductance of the annulus.
fn dirichlet_energy(u: &[f64], cells: &[Cell], res: usize) -> f64 {
    let val = |r: usize, c: usize| cell_value(u, cells, res, r, c);
    let mut energy = 0.0;
    for r in 0..res {
        for c in 0..res {
            let here = val(r, c);
            let active = cells[r * res + c] == Cell::Annulus;
            if c + 1 < res && (active || cells[r * res + c + 1] == Cell::Annulus) {
                let d = here - val(r, c + 1);
                energy += d * d;
            }
            if r + 1 < res && (active || cells[(r + 1) * res + c] == Cell::Annulus) {
                let d = here - val(r + 1, c);
                energy += d * d;
            }
        }
    }
    energy
}

fn estimate_at(
    outer: &ClosedPolyline,
    inner: &ClosedPolyline,
    lo: Complex64,
    hi: Complex64,
    res: usize,
) -> Result<f64, ModulusError> {
    let (cells, u) = solve_dirichlet(outer, inner, lo, hi, res);
    let n_annulus = cells.iter().filter(|&&c| c == Cell::Annulus).count();
    let n_inner = cells.iter().filter(|&&c| c == Cell::Inner).count();
    if n_inner == 0 || n_annulus == 0 {
        return Err(ModulusError::ResolutionInsufficient);
    }
    let gamma = dirichlet_energy(&u, &cells, res);
    if gamma <= 0.0 {
        return Err(ModulusError::ResolutionInsufficient);
    }
    Ok(2.0 * std::f64::consts::PI / gamma)
}

/// Modulus of the annulus between two nested Jordan polylines, in the
/// `-log r` convention.
pub fn annulus_modulus(
    outer: &ClosedPolyline,
    inner: &ClosedPolyline,
) -> Result<AnnulusEstimate, ModulusError> {
    annulus_modulus_at(outer, inner, DEFAULT_RESOLUTION)
}

pub fn annulus_modulus_at(
    outer: &ClosedPolyline,
    inner: &ClosedPolyline,
    resolution: usize,
) -> Result<AnnulusEstimate, ModulusError> {
    // Nesting check on a witness point plus boundary containment.
    let witness = inner.interior_point().ok_or(ModulusError::ResolutionInsufficient)?;
    if !outer.contains(witness) {
        return Err(ModulusError::NotNested);
    }
    let mut crossings = 0usize;
    for p in &inner.points {
        if !outer.contains(*p) && outer.distance(*p) > 1e-9 {
            crossings += 1;
        }
    }
    if crossings > inner.points.len() / 8 {
        return Err(ModulusError::NotNested);
    }
    // Degenerate contact: shared boundary at sampling resolution.
    let gap = outer.boundary_gap(inner);
    let (lo0, hi0) = outer.bbox();
    let span = (hi0 - lo0).re.max((hi0 - lo0).im);
    if gap <= 1e-9 * span.max(1.0) {
        return Ok(AnnulusEstimate::degenerate());
    }

    let margin = 0.02 * span;
    let lo = lo0 - Complex64::new(margin, margin);
    let hi = hi0 + Complex64::new(margin, margin);
    // Square window so cells stay square.
    let side = (hi.re - lo.re).max(a_im(hi) - a_im(lo));
    let center = (lo + hi) / 2.0;
    let lo = center - Complex64::new(side / 2.0, side / 2.0);
    let hi = center + Complex64::new(side / 2.0, side / 2.0);

    let coarse = estimate_at(outer, inner, lo, hi, resolution)?;
    let fine = estimate_at(outer, inner, lo, hi, resolution * 2)?;
    // First-order Richardson in the cell size.
    let extrapolated = fine + (fine - coarse);
    let error_bound = (fine - coarse).abs().max(1e-6 * fine.abs());
    Ok(AnnulusEstimate {
        mod_value: extrapolated,
        grid_resolution: resolution * 2,
        error_bound,
        coarse,
        fine,
        degenerate: false,
    })
}

fn a_im(z: Complex64) -> f64 {
    z.im
}

/// Modulus of the round annulus `r < |z| < 1`, as a sampled-polyline
/// problem (mostly a self-check; the exact answer is `-log r`).
pub fn round_annulus(r: f64, resolution: usize) -> Result<AnnulusEstimate, ModulusError> {
    let circle = |rad: f64| {
        let n = 720;
        ClosedPolyline::new(
            (0..n)
                .map(|k| {
                    Complex64::from_polar(rad, 2.0 * std::f64::consts::PI * k as f64 / n as f64)
                })
                .collect(),
        )
    };
    annulus_modulus_at(&circle(1.0), &circle(r), resolution)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cx;

    fn square(half: f64) -> ClosedPolyline {
        ClosedPolyline::new(vec![
            cx(-half, -half),
            cx(half, -half),
            cx(half, half),
            cx(-half, half),
        ])
    }

    #[test]
    fn round_annulus_matches_closed_form() {
        for r in [0.9, 0.5, 0.1] {
            let est = round_annulus(r, 256).unwrap();
            let exact = -r.ln();
            let rel = (est.mod_value - exact).abs() / exact;
            assert!(rel < 0.05, "r={r}: {} vs {exact} (rel {rel})", est.mod_value);
        }
    }

    #[test]
    fn resolutions_agree_within_bound() {
        let est = round_annulus(0.5, 128).unwrap();
        assert!((est.fine - est.coarse).abs() <= est.error_bound + 1e-15);
    }

    #[test]
    fn degenerate_contact_is_zero() {
        let outer = square(1.0);
        // Inner square sharing the right edge.
        let inner = ClosedPolyline::new(vec![
            cx(0.0, -0.5),
            cx(1.0, -0.5),
            cx(1.0, 0.5),
            cx(0.0, 0.5),
        ]);
        let est = annulus_modulus(&outer, &inner).unwrap();
        assert!(est.degenerate);
        assert_eq!(est.mod_value, 0.0);
    }

    #[test]
    fn not_nested_is_rejected() {
        let outer = square(1.0);
        let inner = ClosedPolyline::new(vec![
            cx(2.0, -0.5),
            cx(3.0, -0.5),
            cx(3.0, 0.5),
            cx(2.0, 0.5),
        ]);
        assert!(matches!(annulus_modulus(&outer, &inner), Err(ModulusError::NotNested)));
    }

    /// Independent oracle: its own cell classification (direct crossing
    /// tests per cell center), column-major SOR run to convergence, raw
    /// energy, no nesting and no extrapolation.
    fn brute_force_modulus(outer: &ClosedPolyline, inner: &ClosedPolyline, res: usize) -> f64 {
        let (lo0, hi0) = outer.bbox();
        let span = (hi0 - lo0).re.max((hi0 - lo0).im);
        let margin = 0.02 * span;
        let center = (lo0 + hi0) / 2.0;
        let side = span + 2.0 * margin;
        let lo = center - cx(side / 2.0, side / 2.0);
        let h = side / res as f64;
        let idx = |r: usize, c: usize| r * res + c;
        // 0 = outside, 1 = annulus, 2 = inner
        let mut kind = vec![0u8; res * res];
        for r in 0..res {
            for c in 0..res {
                let z = cx(lo.re + (c as f64 + 0.5) * h, lo.im + (r as f64 + 0.5) * h);
                if inner.contains(z) {
                    kind[idx(r, c)] = 2;
                } else if outer.contains(z) {
                    kind[idx(r, c)] = 1;
                }
            }
        }
        let mut u: Vec<f64> =
            kind.iter().map(|&k| if k == 2 { 1.0 } else { 0.0 }).collect();
        let omega = 2.0 / (1.0 + (std::f64::consts::PI / res as f64).sin());
        let get = |u: &[f64], kind: &[u8], r: i64, c: i64| -> f64 {
            if r < 0 || c < 0 || r >= res as i64 || c >= res as i64 {
                return 0.0;
            }
            match kind[idx(r as usize, c as usize)] {
                2 => 1.0,
                1 => u[idx(r as usize, c as usize)],
                _ => 0.0,
            }
        };
        for _ in 0..8 * res {
            let mut delta = 0.0f64;
            for c in 0..res {
                for r in 0..res {
                    if kind[idx(r, c)] != 1 {
                        continue;
                    }
                    let s = get(&u, &kind, r as i64 - 1, c as i64)
                        + get(&u, &kind, r as i64 + 1, c as i64)
                        + get(&u, &kind, r as i64, c as i64 - 1)
                        + get(&u, &kind, r as i64, c as i64 + 1);
                    let old = u[idx(r, c)];
                    let new = old + omega * (s / 4.0 - old);
                    u[idx(r, c)] = new;
                    delta = delta.max((new - old).abs());
                }
            }
            if delta < 1e-11 {
                break;
            }
        }
        let mut energy = 0.0;
        for r in 0..res {
            for c in 0..res {
                let active = kind[idx(r, c)] == 1;
                if c + 1 < res && (active || kind[idx(r, c + 1)] == 1) {
                    let d = get(&u, &kind, r as i64, c as i64) - get(&u, &kind, r as i64, c as i64 + 1);
                    energy += d * d;
                }
                if r + 1 < res && (active || kind[idx(r + 1, c)] == 1) {
                    let d = get(&u, &kind, r as i64, c as i64) - get(&u, &kind, r as i64 + 1, c as i64);
                    energy += d * d;
                }
            }
        }
        2.0 * std::f64::consts::PI / energy
    }

    #[test]
    fn square_frame_matches_brute_force_oracle() {
        let outer = square(2.0);
        let inner = square(1.0);
        let est = annulus_modulus_at(&outer, &inner, 256).unwrap();
        let oracle = brute_force_modulus(&outer, &inner, 512);
        let rel = (est.mod_value - oracle).abs() / oracle;
        assert!(rel < 0.02, "{} vs oracle {oracle} (rel {rel})", est.mod_value);
    }

    #[test]
    fn monotone_and_superadditive_on_round_annuli() {
        // mod(0.3 < |z| < 1) vs disjoint subannuli (0.3, 0.55) and (0.6, 1).
        let full = round_annulus(0.3, 128).unwrap();
        let scale = |a: f64, b: f64| {
            // r < |z| < 1 scaled so the subannulus a < |z| < b maps to it.
            let circle = |rad: f64| {
                let n = 720;
                ClosedPolyline::new(
                    (0..n)
                        .map(|k| {
                            Complex64::from_polar(
                                rad,
                                2.0 * std::f64::consts::PI * k as f64 / n as f64,
                            )
                        })
                        .collect(),
                )
            };
            annulus_modulus_at(&circle(b), &circle(a), 128).unwrap()
        };
        let s1 = scale(0.3, 0.55);
        let s2 = scale(0.6, 1.0);
        let budget = full.error_bound + s1.error_bound + s2.error_bound;
        assert!(s1.mod_value <= full.mod_value + budget);
        assert!(s1.mod_value + s2.mod_value <= full.mod_value + 3.0 * budget);
    }
}
