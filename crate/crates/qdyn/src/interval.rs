//! Renormalization of real folding maps on an interval.
//!
//! A real parameter in `[-2, 1/4]` restricts to a folding map of
//! `[-beta, beta]`; rescaling by `x -> -x/beta` gives the normalized fold
//! `g` of `[-1, 1]` with `g(-1) = g(1) = -1` and quadratic critical point
//! at 0. Renormalization about `n` means a symmetric interval around 0
//! whose first `n-1` forward images miss its interior and whose `n`-th
//! image returns into it; the search runs over symmetric intervals whose
//! endpoint is fixed by `g^n`, largest first.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum IntervalError {
    #[error("parameter must be real with c in [-2, 1/4]")]
    ParameterOutOfRange,
    #[error("cascade detected only {found} levels (requested {requested})")]
    CascadeTooShallow { found: usize, requested: usize },
}

/// Comparison tolerance for interval containment/disjointness.
const TOL: f64 = 1e-9;
/// Bisection refinement target for fixed-point endpoints.
const ROOT_TOL: f64 = 1e-12;

/// The normalized folding map for a real parameter.
#[derive(Debug, Clone, Copy)]
pub struct FoldingMap {
    pub c: f64,
    pub beta: f64,
}

impl FoldingMap {
    pub fn new(c: f64) -> Result<FoldingMap, IntervalError> {
        if !(-2.0..=0.25).contains(&c) {
            return Err(IntervalError::ParameterOutOfRange);
        }
        let beta = (1.0 + (1.0 - 4.0 * c).sqrt()) / 2.0;
        Ok(FoldingMap { c, beta })
    }

    /// One step of the normalized fold `g(y) = -beta y^2 - c/beta`.
    #[inline]
    pub fn g(&self, y: f64) -> f64 {
        -self.beta * y * y - self.c / self.beta
    }

    pub fn g_n(&self, y: f64, n: u32) -> f64 {
        let mut v = y;
        for _ in 0..n {
            v = self.g(v);
        }
        v
    }

    /// Map a point back to the original coordinate.
    pub fn denormalize(&self, y: f64) -> f64 {
        -self.beta * y
    }

    /// Exact image of an interval: the fold is even with maximum at 0 and
    /// decreasing in |y|.
    pub fn interval_image(&self, iv: (f64, f64)) -> (f64, f64) {
        let (u, v) = iv;
        let gu = self.g(u);
        let gv = self.g(v);
        if u <= 0.0 && 0.0 <= v {
            (gu.min(gv), self.g(0.0))
        } else {
            (gu.min(gv), gu.max(gv))
        }
    }

    pub fn interval_image_n(&self, iv: (f64, f64), n: u32) -> (f64, f64) {
        let mut j = iv;
        for _ in 0..n {
            j = self.interval_image(j);
        }
        j
    }

    /// Fixed points of `g^m` in `(lo, hi)`, located by a dense sign scan
    /// refined by bisection. Tangent (even-multiplicity) roots are picked
    /// up as near-zero local minima of `|g^m(x) - x|`; window-root
    /// parameters sit exactly at such tangencies.
    pub fn fixed_points_of_power(&self, m: u32, lo: f64, hi: f64) -> Vec<f64> {
        let samples = 4096usize.max(1 << (m.min(14) + 4));
        let f = |x: f64| self.g_n(x, m) - x;
        let grid: Vec<f64> =
            (0..=samples).map(|k| lo + (hi - lo) * k as f64 / samples as f64).collect();
        let vals: Vec<f64> = grid.iter().map(|&x| f(x)).collect();
        let mut roots: Vec<f64> = Vec::new();
        for k in 1..=samples {
            let (x0, x1) = (grid[k - 1], grid[k]);
            let (f0, f1) = (vals[k - 1], vals[k]);
            if f0 == 0.0 {
                roots.push(x0);
            } else if f0 * f1 < 0.0 {
                let (mut a, mut b) = (x0, x1);
                let mut fa = f0;
                while b - a > ROOT_TOL {
                    let mid = (a + b) / 2.0;
                    let fm = f(mid);
                    if fa * fm <= 0.0 {
                        b = mid;
                    } else {
                        a = mid;
                        fa = fm;
                    }
                }
                roots.push((a + b) / 2.0);
            }
        }
        // Tangent roots: interior grid minima of |f| below threshold,
        // refined by ternary search.
        for k in 1..samples {
            let a0 = vals[k - 1].abs();
            let a1 = vals[k].abs();
            let a2 = vals[k + 1].abs();
            if a1 <= a0 && a1 <= a2 && vals[k - 1] * vals[k + 1] > 0.0 {
                let (mut a, mut b) = (grid[k - 1], grid[k + 1]);
                for _ in 0..120 {
                    let u = a + (b - a) / 3.0;
                    let v = b - (b - a) / 3.0;
                    if f(u).abs() <= f(v).abs() {
                        b = v;
                    } else {
                        a = u;
                    }
                }
                let x = (a + b) / 2.0;
                if f(x).abs() < 1e-9 {
                    roots.push(x);
                }
            }
        }
        roots.sort_by(|a, b| a.partial_cmp(b).unwrap());
        roots.dedup_by(|a, b| (*a - *b).abs() < 100.0 * ROOT_TOL);
        roots
    }

    /// Multiplier of `g^m` at a point (product of `g'` along the orbit).
    pub fn power_multiplier(&self, x: f64, m: u32) -> f64 {
        let mut d = 1.0;
        let mut v = x;
        for _ in 0..m {
            d *= -2.0 * self.beta * v;
            v = self.g(v);
        }
        d
    }
}

/// One detected renormalization of the fold (or of a deeper return map).
#[derive(Debug, Clone)]
pub struct RealRenormalizationRecord {
    /// Period relative to the return map one level up.
    pub period: u32,
    /// Cumulative period in units of `g` itself.
    pub cumulative_period: u32,
    /// The restrictive interval `[-a, a]`, normalized coordinates.
    pub interval: (f64, f64),
    /// The same interval in the original (unnormalized) coordinate.
    pub interval_original: (f64, f64),
    /// Forward images of the interval under the return map, one per step
    /// up to the period; normalized coordinates.
    pub images: Vec<(f64, f64)>,
    /// Smallest gap between interiors required disjoint.
    pub disjointness_margin: f64,
    /// Slack of the return containment.
    pub containment_margin: f64,
}

fn interiors_disjoint(a: (f64, f64), b: (f64, f64)) -> bool {
    a.1 <= b.0 + TOL || b.1 <= a.0 + TOL
}

fn gap(a: (f64, f64), b: (f64, f64)) -> f64 {
    (b.0 - a.1).max(a.0 - b.1)
}

/// Search for the smallest `n in 2..=n_max` such that the return map
/// `g^stride` restricted to `within` is renormalizable about `n`, taking
/// the maximal valid symmetric interval.
fn detect_in(
    fold: &FoldingMap,
    stride: u32,
    within: (f64, f64),
    n_max: u32,
) -> Option<RealRenormalizationRecord> {
    let hi = within.1.min(-within.0);
    for n in 2..=n_max {
        let m = stride * n;
        // Endpoint candidates must not be attracting: the restrictive
        // interval's fixed endpoint is repelling (or neutral exactly at a
        // window root). This rejects the spurious intervals that pivot
        // around an attracting fixed point.
        let mut candidates: Vec<f64> = fold
            .fixed_points_of_power(m, -hi + ROOT_TOL, hi - ROOT_TOL)
            .into_iter()
            .filter(|&x| fold.power_multiplier(x, m).abs() >= 1.0 - 1e-6)
            .map(f64::abs)
            .filter(|a| *a > 1e-8)
            .collect();
        candidates.sort_by(|a, b| b.partial_cmp(a).unwrap());
        candidates.dedup_by(|a, b| (*a - *b).abs() < 10.0 * ROOT_TOL);
        'cand: for &a in &candidates {
            let interval = (-a, a);
            let mut images = Vec::with_capacity(n as usize);
            let mut j = interval;
            for _ in 1..=n {
                j = fold.interval_image_n(j, stride);
                images.push(j);
            }
            // Images up to n-1 must avoid the interior of I, pairwise.
            let mut margin = f64::INFINITY;
            let mut system = vec![interval];
            system.extend_from_slice(&images[..n as usize - 1]);
            for x in 0..system.len() {
                for y in x + 1..system.len() {
                    if !interiors_disjoint(system[x], system[y]) {
                        continue 'cand;
                    }
                    margin = margin.min(gap(system[x], system[y]));
                }
            }
            // The n-th image must return into I.
            let ret = images[n as usize - 1];
            let containment = (ret.0 - interval.0).min(interval.1 - ret.1);
            if containment < -TOL {
                continue 'cand;
            }
            let interval_original = {
                let (u, v) = interval;
                let (p, q) = (fold.denormalize(u), fold.denormalize(v));
                (p.min(q), p.max(q))
            };
            return Some(RealRenormalizationRecord {
                period: n,
                cumulative_period: m,
                interval,
                interval_original,
                images,
                disjointness_margin: margin,
                containment_margin: containment,
            });
        }
    }
    None
}

/// Smallest renormalization period of the fold for real `c`, if any
/// exists up to `n_max`.
pub fn real_renorm_detect(
    c: f64,
    n_max: u32,
) -> Result<Option<RealRenormalizationRecord>, IntervalError> {
    let fold = FoldingMap::new(c)?;
    Ok(detect_in(&fold, 1, (-1.0, 1.0), n_max))
}

/// Iterated detection: each level renormalizes the previous return map.
/// Stops at the first level where nothing is found, or after `max_levels`.
pub fn real_renorm_cascade(
    c: f64,
    max_levels: usize,
    n_max: u32,
) -> Result<Vec<RealRenormalizationRecord>, IntervalError> {
    let fold = FoldingMap::new(c)?;
    let mut levels: Vec<RealRenormalizationRecord> = Vec::new();
    let mut stride = 1u32;
    let mut within = (-1.0, 1.0);
    for _ in 0..max_levels {
        match detect_in(&fold, stride, within, n_max) {
            Some(rec) => {
                stride = rec.cumulative_period;
                within = rec.interval;
                levels.push(rec);
            }
            None => break,
        }
    }
    Ok(levels)
}

/// One row of the bounded-geometry report: an interval of the system with
/// its two adjacency spans and the ratio `min(|L+|, |R+|) / |interval|`.
#[derive(Debug, Clone)]
pub struct GapRatioRow {
    pub index: u32,
    pub interval: (f64, f64),
    pub left_plus: (f64, f64),
    pub right_plus: (f64, f64),
    pub ratio: f64,
}

#[derive(Debug, Clone)]
pub struct RealBoundsReport {
    pub level: usize,
    pub cumulative_period: u32,
    /// Rows for the forward images of the restrictive interval.
    pub interval_rows: Vec<GapRatioRow>,
    /// Rows for the intervals spanned by `c(i)` and `c(m+i)`.
    pub orbit_rows: Vec<GapRatioRow>,
    pub min_interval_ratio: f64,
    pub min_orbit_ratio: f64,
}

/// Gap ratios for one interval system. The adjacency span on each side
/// stretches over the nearest interval of the system plus the gap to it;
/// at the two ends of the domain it runs to the domain endpoint from the
/// critical-orbit point carried by the extreme interval.
fn gap_rows(system: &[(f64, f64)], orbit_points: &[f64]) -> Vec<GapRatioRow> {
    let mut rows = Vec::with_capacity(system.len());
    for (i, &iv) in system.iter().enumerate() {
        let mut left: Option<(f64, f64)> = None;
        let mut right: Option<(f64, f64)> = None;
        for (j, &other) in system.iter().enumerate() {
            if j == i {
                continue;
            }
            if other.1 <= iv.0 + TOL && left.map(|l| other.1 > l.1).unwrap_or(true) {
                left = Some(other);
            }
            if other.0 >= iv.1 - TOL && right.map(|r| other.0 < r.0).unwrap_or(true) {
                right = Some(other);
            }
        }
        let left_plus = match left {
            Some(l) => (l.0, iv.0),
            None => (-1.0, orbit_points[i]),
        };
        let right_plus = match right {
            Some(r) => (iv.1, r.1),
            None => (orbit_points[i], 1.0),
        };
        let len = iv.1 - iv.0;
        let ratio = (left_plus.1 - left_plus.0).min(right_plus.1 - right_plus.0) / len;
        rows.push(GapRatioRow { index: i as u32, interval: iv, left_plus, right_plus, ratio });
    }
    rows
}

/// Bounded-geometry ratios at cascade level `k` (1-based): every interval
/// of the level-`k` systems against its adjacency spans.
pub fn real_bounds_report(c: f64, k: usize) -> Result<RealBoundsReport, IntervalError> {
    let fold = FoldingMap::new(c)?;
    let cascade = real_renorm_cascade(c, k, 8)?;
    if cascade.len() < k {
        return Err(IntervalError::CascadeTooShallow { found: cascade.len(), requested: k });
    }
    let rec = &cascade[k - 1];
    let m = rec.cumulative_period;

    let mut intervals = vec![rec.interval];
    let mut j = rec.interval;
    for _ in 1..m {
        j = fold.interval_image(j);
        intervals.push(j);
    }
    let mut orbit = vec![0.0f64];
    for _ in 1..=2 * m {
        let last = *orbit.last().unwrap();
        orbit.push(fold.g(last));
    }
    let interval_rows = gap_rows(&intervals, &orbit[..m as usize]);

    let mut orbit_intervals = Vec::with_capacity(m as usize);
    for i in 0..m as usize {
        let (a, b) = (orbit[i], orbit[i + m as usize]);
        orbit_intervals.push((a.min(b), a.max(b)));
    }
    let orbit_rows = gap_rows(&orbit_intervals, &orbit[..m as usize]);

    let min_ratio =
        |rows: &[GapRatioRow]| rows.iter().map(|r| r.ratio).fold(f64::INFINITY, f64::min);
    Ok(RealBoundsReport {
        level: k,
        cumulative_period: m,
        min_interval_ratio: min_ratio(&interval_rows),
        min_orbit_ratio: min_ratio(&orbit_rows),
        interval_rows,
        orbit_rows,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    const FEIGENBAUM: f64 = -1.4011551890920506;

    #[test]
    fn basilica_interval() {
        let rec = real_renorm_detect(-1.0, 8).unwrap().unwrap();
        assert_eq!(rec.period, 2);
        // I = [alpha, -alpha] in original coordinates.
        let alpha = (1.0 - 5.0f64.sqrt()) / 2.0;
        assert!((rec.interval_original.0 - alpha).abs() < 1e-9, "{:?}", rec.interval_original);
        assert!((rec.interval_original.1 + alpha).abs() < 1e-9);
        assert!(rec.containment_margin >= -TOL);
    }

    #[test]
    fn period_three_window() {
        let rec = real_renorm_detect(-1.75, 8).unwrap().unwrap();
        assert_eq!(rec.period, 3);
    }

    #[test]
    fn no_renormalization_cases() {
        assert!(real_renorm_detect(-0.5, 8).unwrap().is_none());
        assert!(real_renorm_detect(-2.0, 8).unwrap().is_none());
    }

    #[test]
    fn invariants_of_detected_records() {
        for c in [-1.0, -1.75, FEIGENBAUM, -1.3] {
            if let Some(rec) = real_renorm_detect(c, 8).unwrap() {
                let fold = FoldingMap::new(c).unwrap();
                let n = rec.period;
                let rn = fold.interval_image_n(rec.interval, n);
                assert!(rn.0 >= rec.interval.0 - TOL && rn.1 <= rec.interval.1 + TOL);
                for i in 0..n as usize - 1 {
                    assert!(
                        rec.images[i].1 <= rec.interval.0 + TOL
                            || rec.images[i].0 >= rec.interval.1 - TOL
                    );
                }
            }
        }
    }

    #[test]
    fn feigenbaum_cascade_periods() {
        let cascade = real_renorm_cascade(FEIGENBAUM, 4, 6).unwrap();
        assert_eq!(cascade.len(), 4);
        for rec in &cascade {
            assert_eq!(rec.period, 2);
        }
        assert_eq!(cascade[3].cumulative_period, 16);
        for w in cascade.windows(2) {
            assert!(w[1].interval.1 < w[0].interval.1);
        }
    }

    #[test]
    fn bounds_report_positive_ratios() {
        let report = real_bounds_report(FEIGENBAUM, 3).unwrap();
        assert_eq!(report.cumulative_period, 8);
        assert!(report.min_interval_ratio > 0.0, "{}", report.min_interval_ratio);
        assert!(report.min_orbit_ratio > 0.0);
        // bounded geometry: levels 2 and 3 within a factor 3
        let r2 = real_bounds_report(FEIGENBAUM, 2).unwrap();
        let lo = report.min_interval_ratio.min(r2.min_interval_ratio);
        let hi = report.min_interval_ratio.max(r2.min_interval_ratio);
        assert!(hi / lo < 3.0, "minima {lo} vs {hi}");
    }

    #[test]
    fn too_shallow_cascade_is_an_error() {
        assert!(matches!(
            real_bounds_report(-1.0, 3),
            Err(IntervalError::CascadeTooShallow { .. })
        ));
    }
}
