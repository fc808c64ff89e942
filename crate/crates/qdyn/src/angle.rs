//! Exact rational angles on the circle, measured in turns.
//!
//! External-ray combinatorics is driven by the angle-doubling map
//! `t -> 2t mod 1`, which destroys floating-point precision after ~50
//! doublings. Angles are therefore kept as reduced fractions `num/den`
//! and doubled with exact modular arithmetic.

use std::cmp::Ordering;
use std::fmt;


/// A rational angle in `[0, 1)` turns, always stored reduced.
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct Angle {
    num: u64,
    den: u64,
}

fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

impl Angle {
    /// Reduced angle `num/den` taken mod 1. `den` must be nonzero.
    pub fn new(num: u64, den: u64) -> Angle {
        assert!(den != 0, "angle denominator must be nonzero");
        let num = num % den;
        let g = gcd(num.max(1), den);
        Angle { num: num / g, den: den / g }
    }

    pub const ZERO: Angle = Angle { num: 0, den: 1 };

    pub fn numer(&self) -> u64 {
        self.num
    }

    pub fn denom(&self) -> u64 {
        self.den
    }

    pub fn to_f64(&self) -> f64 {
        self.num as f64 / self.den as f64
    }

    /// The image `2t mod 1` under angle doubling.
    pub fn double(&self) -> Angle {
        Angle::new(mul_mod(2, self.num, self.den), self.den)
    }

    /// The two preimages under doubling: `t/2` and `(t+1)/2`.
    pub fn halves(&self) -> (Angle, Angle) {
        let d2 = self.den.checked_mul(2).expect("angle denominator overflow");
        (Angle::new(self.num, d2), Angle::new(self.num + self.den, d2))
    }

    /// `2^n * t mod 1`, computed exactly.
    pub fn double_n(&self, n: u32) -> Angle {
        let f = pow_mod(2, n as u64, self.den);
        Angle::new(mul_mod(f, self.num, self.den), self.den)
    }

    /// The doubling orbit until it first repeats. Ends with the period if
    /// the angle is periodic; for strictly preperiodic angles the returned
    /// cycle starts after the preperiod.
    pub fn doubling_orbit(&self) -> Vec<Angle> {
        let mut seen = vec![*self];
        let mut t = self.double();
        while !seen.contains(&t) {
            seen.push(t);
            t = t.double();
        }
        seen
    }

    /// Exact doubling period, or `None` if the angle is only preperiodic
    /// (even denominator after reduction).
    pub fn doubling_period(&self) -> Option<u32> {
        if self.den % 2 == 0 && self.num != 0 {
            return None;
        }
        if self.num == 0 {
            return Some(1);
        }
        let mut t = self.double();
        let mut k = 1u32;
        while t != *self {
            t = t.double();
            k += 1;
            if k > 128 {
                return None;
            }
        }
        Some(k)
    }

    /// Angle advanced by half a turn (the antipode, i.e. the other preimage
    /// branch of its double).
    pub fn antipode(&self) -> Angle {
        if self.den % 2 == 0 {
            Angle::new(self.num + self.den / 2, self.den)
        } else {
            Angle::new(2 * self.num + self.den, 2 * self.den)
        }
    }
}

impl PartialOrd for Angle {
    fn partial_cmp(&self, other: &Angle) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Angle {
    fn cmp(&self, other: &Angle) -> Ordering {
        // num1/den1 <=> num2/den2 via 128-bit cross products.
        let lhs = self.num as u128 * other.den as u128;
        let rhs = other.num as u128 * self.den as u128;
        lhs.cmp(&rhs)
    }
}

impl fmt::Debug for Angle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.num, self.den)
    }
}

impl fmt::Display for Angle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.num, self.den)
    }
}

fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

fn pow_mod(mut base: u64, mut exp: u64, m: u64) -> u64 {
    if m == 1 {
        return 0;
    }
    let mut acc = 1u64;
    base %= m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(acc, base, m);
        }
        base = mul_mod(base, base, m);
        exp >>= 1;
    }
    acc
}

/// All doubling orbits of exact period `q` among angles with denominator
/// `2^q - 1`, one representative list per orbit (each sorted, starting at
/// the smallest element).
pub fn orbits_of_period(q: u32) -> Vec<Vec<Angle>> {
    assert!(q >= 1 && q < 63, "period out of supported range");
    let den = (1u64 << q) - 1;
    let mut taken = std::collections::HashSet::new();
    let mut orbits = Vec::new();
    for a in 1..den {
        if taken.contains(&a) {
            continue;
        }
        // Walk the orbit of a under doubling mod den.
        let mut orbit = vec![a];
        let mut t = mul_mod(2, a, den);
        while t != a {
            orbit.push(t);
            t = mul_mod(2, t, den);
        }
        for &x in &orbit {
            taken.insert(x);
        }
        if orbit.len() == q as usize {
            orbits.push(orbit.into_iter().map(|n| Angle::new(n, den)).collect());
        }
    }
    orbits
}
