//! Small planar-geometry helpers shared by the puzzle and modulus modules:
//! closed polylines, point containment, distances, and scanline fills.

use num_complex::Complex64;

/// A closed polyline (last point connects back to the first).
#[derive(Debug, Clone, PartialEq)]
pub struct ClosedPolyline {
    pub points: Vec<Complex64>,
}

impl ClosedPolyline {
    pub fn new(points: Vec<Complex64>) -> ClosedPolyline {
        ClosedPolyline { points }
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn bbox(&self) -> (Complex64, Complex64) {
        let mut lo = Complex64::new(f64::INFINITY, f64::INFINITY);
        let mut hi = Complex64::new(f64::NEG_INFINITY, f64::NEG_INFINITY);
        for p in &self.points {
            lo.re = lo.re.min(p.re);
            lo.im = lo.im.min(p.im);
            hi.re = hi.re.max(p.re);
            hi.im = hi.im.max(p.im);
        }
        (lo, hi)
    }

    /// Even-odd crossing test.
    pub fn contains(&self, z: Complex64) -> bool {
        let mut inside = false;
        let n = self.points.len();
        for i in 0..n {
            let a = self.points[i];
            let b = self.points[(i + 1) % n];
            if (a.im > z.im) != (b.im > z.im) {
                let t = (z.im - a.im) / (b.im - a.im);
                let x = a.re + t * (b.re - a.re);
                if x > z.re {
                    inside = !inside;
                }
            }
        }
        inside
    }

    /// Euclidean distance from `z` to the boundary.
    pub fn distance(&self, z: Complex64) -> f64 {
        let n = self.points.len();
        let mut best = f64::INFINITY;
        for i in 0..n {
            let a = self.points[i];
            let b = self.points[(i + 1) % n];
            best = best.min(segment_distance(z, a, b));
        }
        best
    }

    /// Minimum distance between two boundaries (0 if they intersect at the
    /// sampling resolution).
    pub fn boundary_gap(&self, other: &ClosedPolyline) -> f64 {
        let mut best = f64::INFINITY;
        for p in &self.points {
            best = best.min(other.distance(*p));
            if best == 0.0 {
                return 0.0;
            }
        }
        for p in &other.points {
            best = best.min(self.distance(*p));
        }
        best
    }

    pub fn diameter(&self) -> f64 {
        let mut d = 0.0f64;
        for i in 0..self.points.len() {
            for j in i + 1..self.points.len() {
                d = d.max((self.points[i] - self.points[j]).norm());
            }
        }
        d
    }

    /// A point in the interior, found by scanning horizontal midlines.
    /// Returns `None` for degenerate boundaries.
    pub fn interior_point(&self) -> Option<Complex64> {
        let (lo, hi) = self.bbox();
        for k in 0..64 {
            // Sweep rows through the bbox, widest spacing first.
            let t = (2 * k + 1) as f64 / 128.0;
            let y = lo.im + t * (hi.im - lo.im);
            let mut xs = self.row_crossings(y);
            if xs.len() < 2 {
                continue;
            }
            xs.sort_by(|a, b| a.partial_cmp(b).unwrap());
            for pair in xs.chunks(2) {
                if pair.len() == 2 && pair[1] - pair[0] > 1e-12 {
                    let z = Complex64::new((pair[0] + pair[1]) / 2.0, y);
                    if self.contains(z) {
                        return Some(z);
                    }
                }
            }
        }
        None
    }

    /// X-coordinates where the boundary crosses the horizontal line `y`.
    pub fn row_crossings(&self, y: f64) -> Vec<f64> {
        let n = self.points.len();
        let mut xs = Vec::new();
        for i in 0..n {
            let a = self.points[i];
            let b = self.points[(i + 1) % n];
            if (a.im > y) != (b.im > y) {
                let t = (y - a.im) / (b.im - a.im);
                xs.push(a.re + t * (b.re - a.re));
            }
        }
        xs
    }
}

pub fn segment_distance(z: Complex64, a: Complex64, b: Complex64) -> f64 {
    let ab = b - a;
    let l2 = ab.norm_sqr();
    if l2 == 0.0 {
        return (z - a).norm();
    }
    let t = ((z - a).re * ab.re + (z - a).im * ab.im) / l2;
    let t = t.clamp(0.0, 1.0);
    (z - (a + ab * t)).norm()
}

/// Scanline fill: marks `true` for every cell of a `res x res` grid over
/// `(lo, hi)` whose center lies inside the polyline.
pub fn rasterize(
    poly: &ClosedPolyline,
    lo: Complex64,
    hi: Complex64,
    res: usize,
) -> Vec<bool> {
    let mut mask = vec![false; res * res];
    let dx = (hi.re - lo.re) / res as f64;
    let dy = (hi.im - lo.im) / res as f64;
    for row in 0..res {
        let y = lo.im + (row as f64 + 0.5) * dy;
        let mut xs = poly.row_crossings(y);
        if xs.is_empty() {
            continue;
        }
        xs.sort_by(|a, b| a.partial_cmp(b).unwrap());
        for pair in xs.chunks(2) {
            if pair.len() < 2 {
                break;
            }
            let c0 = ((pair[0] - lo.re) / dx - 0.5).ceil().max(0.0) as usize;
            let c1 = ((pair[1] - lo.re) / dx - 0.5).floor().min(res as f64 - 1.0) as isize;
            if c1 < 0 {
                continue;
            }
            for col in c0..=(c1 as usize).min(res - 1) {
                mask[row * res + col] = true;
            }
        }
    }
    mask
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
    fn containment_and_distance() {
        let s = square(1.0);
        assert!(s.contains(cx(0.0, 0.0)));
        assert!(!s.contains(cx(1.5, 0.0)));
        assert!((s.distance(cx(0.0, 0.0)) - 1.0).abs() < 1e-12);
        assert!((s.distance(cx(2.0, 0.0)) - 1.0).abs() < 1e-12);
    }

    #[test]
    fn interior_point_lands_inside() {
        let s = square(0.7);
        let p = s.interior_point().unwrap();
        assert!(s.contains(p));
    }

    #[test]
    fn rasterized_area_of_square() {
        let s = square(1.0);
        let mask = rasterize(&s, cx(-2.0, -2.0), cx(2.0, 2.0), 256);
        let count = mask.iter().filter(|&&b| b).count();
        let area = count as f64 * (4.0 / 256.0) * (4.0 / 256.0);
        assert!((area - 4.0).abs() < 0.05, "area {area}");
    }
}
