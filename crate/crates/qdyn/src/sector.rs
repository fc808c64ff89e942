//! Root maps of the slit plane and the sector geometry they generate:
//! normalized gamma-roots, compatible root/schlicht pairs with their
//! Koebe disks, hyperbolic neighborhoods of the unit interval, the
//! sector-angle equation, root-like chains, and the distortion constants
//! that control their compositions.

use num_complex::Complex64;
use std::f64::consts::PI;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum SectorError {
    #[error("domain error: need a <= 0 and gamma > 1")]
    DomainError,
    #[error("input must not be real")]
    RealInput,
    #[error("point left the domain of pair {0}")]
    OutOfDomain(usize),
    #[error("incompatible pair: [a, 1] not contained in the image of the definition interval")]
    Incompatible,
    #[error("chain failed validation: {0:?}")]
    InvalidChain(Vec<ChainViolation>),
    #[error("sampling violation at z = {z}: arg {arg:.6} exceeds pi - {theta:.6}")]
    SamplingViolation { z: Complex64, arg: f64, theta: f64 },
}

/// The standard branch of the gamma-th root on the plane slit along the
/// negative reals.
pub fn standard_root(z: Complex64, gamma: f64) -> Complex64 {
    Complex64::from_polar(z.norm().powf(1.0 / gamma), z.arg() / gamma)
}

/// Normalized root map `L(z) = E (z - a)^(1/gamma) + F` fixing 0 and 1.
#[derive(Debug, Clone, Copy)]
pub struct GammaRoot {
    pub a: f64,
    pub gamma: f64,
    pub e: f64,
    pub f: f64,
}

impl GammaRoot {
    pub fn new(a: f64, gamma: f64) -> Result<GammaRoot, SectorError> {
        if a > 0.0 || gamma <= 1.0 || !a.is_finite() || !gamma.is_finite() {
            return Err(SectorError::DomainError);
        }
        let e = 1.0 / ((1.0 - a).powf(1.0 / gamma) - (-a).powf(1.0 / gamma));
        let f = -(-a).powf(1.0 / gamma) * e;
        Ok(GammaRoot { a, gamma, e, f })
    }

    pub fn eval(&self, z: Complex64) -> Complex64 {
        self.e * standard_root(z - self.a, self.gamma) + self.f
    }

    pub fn eval_real(&self, x: f64) -> f64 {
        self.e * (x - self.a).powf(1.0 / self.gamma) + self.f
    }

    pub fn inverse_real(&self, y: f64) -> f64 {
        self.a + ((y - self.f) / self.e).powf(self.gamma)
    }
}

/// Schlicht maps of the slit plane fixing 0 and 1: the analytic families
/// supported for synthetic chains.
#[derive(Debug, Clone)]
pub enum SchlichtMap {
    Identity,
    /// `z (1+t) / (1 + t z)` for `t > -1`; fixes 0 and 1 and preserves
    /// the half-planes.
    Moebius { t: f64 },
    /// A normalized root map used as the schlicht element of a pair.
    Root(GammaRoot),
    Compose(Box<SchlichtMap>, Box<SchlichtMap>),
}

impl SchlichtMap {
    pub fn eval(&self, z: Complex64) -> Complex64 {
        match self {
            SchlichtMap::Identity => z,
            SchlichtMap::Moebius { t } => (1.0 + t) * z / (1.0 + t * z),
            SchlichtMap::Root(r) => r.eval(z),
            SchlichtMap::Compose(g2, g1) => g2.eval(g1.eval(z)),
        }
    }

    pub fn eval_real(&self, x: f64) -> f64 {
        match self {
            SchlichtMap::Identity => x,
            SchlichtMap::Moebius { t } => (1.0 + t) * x / (1.0 + t * x),
            SchlichtMap::Root(r) => r.eval_real(x),
            SchlichtMap::Compose(g2, g1) => g2.eval_real(g1.eval_real(x)),
        }
    }

    pub fn inverse_real(&self, y: f64) -> f64 {
        match self {
            SchlichtMap::Identity => y,
            SchlichtMap::Moebius { t } => y / ((1.0 + t) - t * y),
            SchlichtMap::Root(r) => r.inverse_real(y),
            SchlichtMap::Compose(g2, g1) => g1.inverse_real(g2.inverse_real(y)),
        }
    }

    /// Maximal real interval of definition containing [0, 1].
    pub fn definition_interval(&self) -> (f64, f64) {
        match self {
            SchlichtMap::Identity => (f64::NEG_INFINITY, f64::INFINITY),
            SchlichtMap::Moebius { t } => {
                if *t > 0.0 {
                    (-1.0 / t, f64::INFINITY)
                } else if *t < 0.0 {
                    (f64::NEG_INFINITY, -1.0 / t)
                } else {
                    (f64::NEG_INFINITY, f64::INFINITY)
                }
            }
            SchlichtMap::Root(r) => (r.a, f64::INFINITY),
            SchlichtMap::Compose(g2, g1) => {
                let (lo1, hi1) = g1.definition_interval();
                let (lo2, hi2) = g2.definition_interval();
                // x must lie in the inner interval with g1(x) in the
                // outer one; g1 is increasing on reals.
                let lo = if lo2.is_finite() { lo1.max(g1.inverse_real(lo2)) } else { lo1 };
                let hi = if hi2.is_finite() { hi1.min(g1.inverse_real(hi2)) } else { hi1 };
                (lo, hi)
            }
        }
    }
}

/// A compatible pair: a root map at `a` and a schlicht map whose image of
/// its definition interval covers [a, 1], with the derived Koebe data.
#[derive(Debug, Clone)]
pub struct CompatiblePair {
    pub root: GammaRoot,
    pub g: SchlichtMap,
    /// Preimage of the branch point under the schlicht map.
    pub a_prime: f64,
    /// Shorter free side of the definition interval beyond `[a', 1]`.
    pub b: f64,
    pub mu: f64,
    pub nu: f64,
    /// Outer disk `(real center, diameter)`.
    pub d1: (f64, f64),
    /// Middle disk `(real center, diameter)`.
    pub d2: (f64, f64),
    /// Inner disk `(real center, radius)` at `a'`.
    pub d3: (f64, f64),
}

impl CompatiblePair {
    pub fn new(root: GammaRoot, g: SchlichtMap) -> Result<CompatiblePair, SectorError> {
        let (lo, hi) = g.definition_interval();
        // Compatibility: [a, 1] inside the image of the definition
        // interval. The schlicht map is increasing on it.
        let img_lo = if lo.is_finite() { g.eval_real(lo + 1e-9) } else { f64::NEG_INFINITY };
        let img_hi = if hi.is_finite() { g.eval_real(hi - 1e-9) } else { f64::INFINITY };
        if !(img_lo < root.a && img_hi > 1.0) {
            return Err(SectorError::Incompatible);
        }
        let a_prime = g.inverse_real(root.a);
        let left = a_prime - lo;
        let right = hi - 1.0;
        let b = left.min(right);
        let mu = if b.is_finite() { (1.0 + a_prime.abs()) / b } else { 0.0 };
        let nu = (2.0 * mu + 3.0).powi(4);
        let mid = (1.0 + a_prime) / 2.0;
        let d1 = (mid, 1.0 + a_prime.abs() + 2.0 * b);
        let k = (1.0 + a_prime.abs() + b).min(2.0 * (1.0 + a_prime.abs()));
        let d2 = (mid, k);
        let d = (b / 2.0).min((1.0 + a_prime.abs()) / 2.0);
        let d3 = (a_prime, d);
        Ok(CompatiblePair { root, g, a_prime, b, mu, nu, d1, d2, d3 })
    }

    /// Apply the pair: first the schlicht map, then the root.
    pub fn eval(&self, z: Complex64) -> Complex64 {
        self.root.eval(self.g.eval(z))
    }
}

/// Closed-form data of the hyperbolic neighborhood of the unit interval:
/// the set of points at hyperbolic distance `< r` from `(0, 1)` in the
/// slit plane is a union of two disks, returned as the boundary angle
/// `beta` at the interval ends, the upper center, and the radius.
pub fn hyperbolic_nbhd(r: f64) -> (f64, Complex64, f64) {
    assert!(r > 0.0, "radius must be positive");
    let beta = 4.0 * (-r).exp().atan();
    let r_plus = 1.0 / (2.0 * beta.sin());
    let c_plus = Complex64::new(0.5, beta.cos() / beta.sin() / 2.0);
    (beta, c_plus, r_plus)
}

/// Euclidean radius of the smallest hyperbolic neighborhood of the unit
/// interval containing `z`.
pub fn smallest_nbhd_radius(z: Complex64) -> Result<f64, SectorError> {
    if z.im == 0.0 {
        return Err(SectorError::RealInput);
    }
    let w = if z.im > 0.0 { z } else { z.conj() };
    Ok((w - Complex64::new(1.0, 0.0)).norm() / (2.0 * w.arg().sin()))
}

/// Unique solution of `sin(t) / sin(pi/gamma + t) = rhs(mu, gamma)` on
/// `(0, pi - pi/gamma)`, where `rhs = min(1/(2 mu nu), 1/(2 nu))^(1/gamma)`
/// and `nu = (2 mu + 3)^4`. The left side is strictly increasing, so a
/// plain bisection suffices.
pub fn sector_angle(mu: f64, gamma: f64) -> f64 {
    assert!(mu >= 0.0 && gamma > 1.0);
    let nu = (2.0 * mu + 3.0).powi(4);
    let arg =
        if mu > 0.0 { (1.0 / (2.0 * mu * nu)).min(1.0 / (2.0 * nu)) } else { 1.0 / (2.0 * nu) };
    let rhs = arg.powf(1.0 / gamma);
    let f = |theta: f64| theta.sin() / (PI / gamma + theta).sin() - rhs;
    let mut lo = 0.0f64;
    let mut hi = PI - PI / gamma - 1e-15;
    while f(hi) < 0.0 {
        hi = (hi + PI - PI / gamma) / 2.0;
    }
    for _ in 0..200 {
        let mid = (lo + hi) / 2.0;
        if f(mid) < 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
        if hi - lo < 1e-15 {
            break;
        }
    }
    (lo + hi) / 2.0
}

/// A chain of compatible pairs with declared growth constants.
#[derive(Debug, Clone)]
pub struct RootLikeChain {
    pub pairs: Vec<CompatiblePair>,
    pub c_const: f64,
    pub lambda: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub enum ChainViolation {
    /// The first branch point must be 0 and the second at least `1/C` in
    /// absolute value.
    FirstPair { a0: f64, a1: f64 },
    /// Insufficient branch-point growth between pairs `i < j`.
    Growth { i: usize, j: usize, required: f64, actual: f64 },
    /// `mu_i < C` fails at pair `i`.
    MuBound { i: usize, mu: f64 },
}

impl RootLikeChain {
    pub fn new(pairs: Vec<CompatiblePair>, c_const: f64, lambda: f64) -> RootLikeChain {
        RootLikeChain { pairs, c_const, lambda }
    }

    pub fn branch_points(&self) -> Vec<f64> {
        self.pairs.iter().map(|p| p.root.a).collect()
    }
}

/// Check the three growth conditions of a root-like chain; an empty
/// result means the chain is valid.
pub fn validate_chain(chain: &RootLikeChain) -> Vec<ChainViolation> {
    let mut violations = Vec::new();
    let a = chain.branch_points();
    let (c, lambda) = (chain.c_const, chain.lambda);
    if a.is_empty() {
        return violations;
    }
    if a[0] != 0.0 || (a.len() > 1 && a[1].abs() < 1.0 / c - 1e-12) {
        violations.push(ChainViolation::FirstPair {
            a0: a[0],
            a1: a.get(1).copied().unwrap_or(f64::NAN),
        });
    }
    for i in 1..a.len() {
        for j in i + 1..a.len() {
            let required = (lambda.powi((j - i) as i32) / c * a[i].abs())
                .max((1.0 + (lambda - 1.0) / c) * a[i].abs());
            if a[j].abs() < required - 1e-12 {
                violations.push(ChainViolation::Growth { i, j, required, actual: a[j].abs() });
            }
        }
    }
    for (i, pair) in chain.pairs.iter().enumerate().skip(1) {
        if !(pair.mu < c) {
            violations.push(ChainViolation::MuBound { i, mu: pair.mu });
        }
    }
    violations
}

/// Evaluate the full composition on a point of the upper half-plane.
pub fn evaluate_chain(chain: &RootLikeChain, z: Complex64) -> Result<Complex64, SectorError> {
    let violations = validate_chain(chain);
    if !violations.is_empty() {
        return Err(SectorError::InvalidChain(violations));
    }
    evaluate_chain_unchecked(chain, z)
}

fn evaluate_chain_unchecked(chain: &RootLikeChain, z: Complex64) -> Result<Complex64, SectorError> {
    let mut w = z;
    for (i, pair) in chain.pairs.iter().enumerate() {
        // The maps preserve the open half-planes; real iterates can only
        // appear on the definition interval.
        if w.im == 0.0 {
            let (lo, hi) = pair.g.definition_interval();
            if w.re <= lo || w.re >= hi {
                return Err(SectorError::OutOfDomain(i));
            }
        }
        w = pair.g.eval(w);
        if w.im == 0.0 && w.re <= pair.root.a {
            return Err(SectorError::OutOfDomain(i));
        }
        w = pair.root.eval(w);
        if !w.is_finite() {
            return Err(SectorError::OutOfDomain(i));
        }
    }
    Ok(w)
}

/// Result of the sampling certificate for a chain.
#[derive(Debug, Clone)]
pub struct SectorCertificate {
    /// Minimum of the per-pair sector angles; the certified sector is
    /// `0 <= arg <= pi - theta_star`.
    pub theta_star: f64,
    pub lambda: f64,
    pub c_const: f64,
    pub samples: usize,
    /// Largest argument observed over the grid.
    pub max_arg: f64,
    /// Smallest observed ratio of `sin(arg G(z))` against
    /// `sin(arg z) / N0` across pairs; staying at or above 1 is
    /// consistent with the distortion inequality.
    pub min_distortion_ratio: f64,
}

/// Certify by sampling a 64 x 64 grid of the upper half-plane that the
/// chain image avoids the sector of opening `theta_star` around the
/// negative real axis. A violating sample signals a branch bug in the
/// evaluator, and is returned as the error.
pub fn sector_certificate(chain: &RootLikeChain) -> Result<SectorCertificate, SectorError> {
    let violations = validate_chain(chain);
    if !violations.is_empty() {
        return Err(SectorError::InvalidChain(violations));
    }
    let theta_star = chain
        .pairs
        .iter()
        .map(|p| sector_angle(p.mu, p.root.gamma))
        .fold(f64::INFINITY, f64::min);

    let mut max_arg = 0.0f64;
    let mut samples = 0usize;
    for i in 0..64 {
        let r = 10f64.powf(-3.0 + 6.0 * i as f64 / 63.0);
        for k in 0..64 {
            let phi = PI * (k as f64 + 0.5) / 64.0;
            let z = Complex64::from_polar(r, phi);
            let w = match evaluate_chain_unchecked(chain, z) {
                Ok(w) => w,
                Err(_) => continue,
            };
            samples += 1;
            let arg = w.arg().rem_euclid(2.0 * PI);
            if arg > PI - theta_star {
                return Err(SectorError::SamplingViolation { z, arg, theta: theta_star });
            }
            max_arg = max_arg.max(arg);
        }
    }

    // Distortion consistency per pair on its middle disk: the image
    // argument cannot sag below sin(arg z) / N0 for the measured
    // distortion N0.
    let mut min_ratio = f64::INFINITY;
    for pair in &chain.pairs {
        let (cx0, diam) = pair.d2;
        let rad = diam / 2.0;
        if !rad.is_finite() {
            continue;
        }
        let mut dmin = f64::INFINITY;
        let mut dmax = 0.0f64;
        let mut pts = Vec::new();
        for i in 0..12 {
            for j in 1..6 {
                let ang = i as f64 / 12.0 * 2.0 * PI;
                let z = Complex64::new(
                    cx0 + rad * 0.9 * ang.cos(),
                    rad * 0.9 * (j as f64 / 6.0) * ang.sin().abs(),
                );
                if z.im <= 1e-9 {
                    continue;
                }
                let h = 1e-7;
                let d = (pair.g.eval(z + Complex64::new(h, 0.0)) - pair.g.eval(z)).norm() / h;
                if d.is_finite() && d > 0.0 {
                    dmin = dmin.min(d);
                    dmax = dmax.max(d);
                    pts.push(z);
                }
            }
        }
        if pts.is_empty() || dmin == 0.0 {
            continue;
        }
        let n0 = dmax / dmin;
        for z in pts {
            let w = pair.g.eval(z);
            if w.im <= 0.0 {
                continue;
            }
            let lhs = w.arg().sin();
            let rhs = z.arg().sin() / n0;
            if rhs > 0.0 {
                min_ratio = min_ratio.min(lhs / rhs);
            }
        }
    }

    Ok(SectorCertificate {
        theta_star,
        lambda: chain.lambda,
        c_const: chain.c_const,
        samples,
        max_arg,
        min_distortion_ratio: min_ratio,
    })
}

/// The distortion constants controlling long compositions, assembled for
/// square-root chains.
#[derive(Debug, Clone, Copy)]
pub struct DistortionConstants {
    pub n0: u32,
    pub c0: f64,
    pub c1: f64,
    pub c2: f64,
    pub c3: f64,
    pub c4: f64,
    /// `c2 * c3^n0`; can overflow to infinity, see `log_c5`.
    pub c5: f64,
    /// `ln(c2) + n0 ln(c3)`, always finite.
    pub log_c5: f64,
    pub sigma: f64,
    pub tau: f64,
    /// Truncated-product value whose fourth power is `c2`.
    pub product: f64,
}

/// Compute the distortion constants for declared `(C, lambda)`.
///
/// `c2` is the fourth power of the product of `(1 + lambda^-k) /
/// (1 - lambda^-k)`, truncated once `lambda^-k < 1e-12` (tail below
/// 1e-10). `sigma` is the uniform sector angle at `mu = C`; `c0` is the
/// Koebe bound `(2C+3)^4`; `c4` is a computable stand-in for the unnamed
/// constant controlling near-range distortion, derived from `c1`.
pub fn distortion_constants(c: f64, lambda: f64) -> DistortionConstants {
    assert!(c > 0.0 && lambda > 1.0);
    let mut product = 1.0f64;
    let mut k = 1i32;
    loop {
        let t = lambda.powi(-k);
        if t < 1e-12 {
            break;
        }
        product *= (1.0 + t) / (1.0 - t);
        k += 1;
        if k > 4096 {
            break;
        }
    }
    let c2 = product.powi(4);
    let sigma = sector_angle(c, 2.0);
    let c0 = (2.0 * c + 3.0).powi(4);
    let c1 = 2.0 * (1.0 + c) / sigma.sin();
    let tau = 1.0f64.min(1.0 / (c * c0).powi(2));
    let m0 = ((c1 / tau).ln() / lambda.ln()).floor() as i64;
    let n0 = (m0 + 1).max(0) as u32;
    let c4 = 1.0 / (1.0 + (c.max(1.0) * c1).powi(-2)).sqrt();
    let c3 = ((1.0 + c4) / (1.0 - c4)).powi(4);
    let log_c5 = c2.ln() + n0 as f64 * c3.ln();
    let c5 = c2 * c3.powi(n0 as i32);
    DistortionConstants { n0, c0, c1, c2, c3, c4, c5, log_c5, sigma, tau, product }
}

/// Hyperbolic distance on the slit plane `(C minus R) union (0,1)`, via
/// the chart `q(z) = -z^2/(1 - z^2)` from the upper half-plane.
pub fn slit_plane_distance(u: Complex64, v: Complex64) -> f64 {
    let zu = q_inverse(u);
    let zv = q_inverse(v);
    let num = (zu - zv).norm_sqr();
    let den = 2.0 * zu.im * zv.im;
    (1.0 + num / den).acosh()
}

fn q_inverse(w: Complex64) -> Complex64 {
    // w = -z^2 / (1 - z^2)  =>  z^2 = w / (w - 1)
    let s = (w / (w - Complex64::new(1.0, 0.0))).sqrt();
    if s.im >= 0.0 {
        s
    } else {
        -s
    }
}
