//! Closed intervals with MPFR endpoints and outward rounding.
//!
//! Every operation rounds the lower endpoint toward −∞ and the upper
//! endpoint toward +∞, so a true value contained in the inputs is contained
//! in the output. Precision is carried by the endpoints; binary operations
//! use the larger of the two operand precisions.

use std::cmp::Ordering;
use std::fmt;

use rug::float::{Constant, Round};
use rug::ops::AddAssignRound;
use rug::{Float, Integer, Rational};
use serde::{Serialize, Serializer};

/// Default significand precision in bits.
pub const DEFAULT_PRECISION: u32 = 128;

#[derive(Clone, Debug, PartialEq)]
pub struct Enclosure {
    lo: Float,
    hi: Float,
}

impl Enclosure {
    /// Builds `[lo, hi]`. Panics if `lo > hi` or either endpoint is NaN.
    pub fn new(lo: Float, hi: Float) -> Self {
        assert!(!lo.is_nan() && !hi.is_nan(), "NaN endpoint");
        assert!(lo <= hi, "inverted enclosure [{lo}, {hi}]");
        Enclosure { lo, hi }
    }

    pub fn point(x: Float) -> Self {
        Enclosure { lo: x.clone(), hi: x }
    }

    pub fn zero(prec: u32) -> Self {
        Self::point(Float::new(prec))
    }

    pub fn one(prec: u32) -> Self {
        Self::point(Float::with_val(prec, 1))
    }

    pub fn from_i64(v: i64, prec: u32) -> Self {
        Self::from_integer(&Integer::from(v), prec)
    }

    pub fn from_integer(v: &Integer, prec: u32) -> Self {
        Enclosure {
            lo: Float::with_val_round(prec, v, Round::Down).0,
            hi: Float::with_val_round(prec, v, Round::Up).0,
        }
    }

    pub fn from_rational(v: &Rational, prec: u32) -> Self {
        Enclosure {
            lo: Float::with_val_round(prec, v, Round::Down).0,
            hi: Float::with_val_round(prec, v, Round::Up).0,
        }
    }

    /// The enclosure of `p/q`.
    pub fn ratio(p: i64, q: i64, prec: u32) -> Self {
        Self::from_rational(&Rational::from((p, q)), prec)
    }

    /// An f64 taken as an exact binary value.
    pub fn from_f64(v: f64, prec: u32) -> Self {
        Self::point(Float::with_val(prec.max(53), v))
    }

    pub fn pi(prec: u32) -> Self {
        Enclosure {
            lo: Float::with_val_round(prec, Constant::Pi, Round::Down).0,
            hi: Float::with_val_round(prec, Constant::Pi, Round::Up).0,
        }
    }

    pub fn lo(&self) -> &Float {
        &self.lo
    }

    pub fn hi(&self) -> &Float {
        &self.hi
    }

    pub fn into_bounds(self) -> (Float, Float) {
        (self.lo, self.hi)
    }

    pub fn prec(&self) -> u32 {
        self.lo.prec().max(self.hi.prec())
    }

    pub fn lo_f64(&self) -> f64 {
        self.lo.to_f64_round(Round::Down)
    }

    pub fn hi_f64(&self) -> f64 {
        self.hi.to_f64_round(Round::Up)
    }

    /// Midpoint rounded to the nearest f64; for display only.
    pub fn mid_f64(&self) -> f64 {
        let p = self.prec() + 1;
        let m = Float::with_val(p, &self.lo + &self.hi) / 2u32;
        m.to_f64()
    }

    /// Upper bound on `hi − lo`.
    pub fn width(&self) -> Float {
        Float::with_val_round(self.prec(), &self.hi - &self.lo, Round::Up).0
    }

    pub fn width_f64(&self) -> f64 {
        self.width().to_f64_round(Round::Up)
    }

    /// `log10` of the width, `-inf` for a point.
    pub fn log10_width(&self) -> f64 {
        let w = self.width_f64();
        if w == 0.0 {
            f64::NEG_INFINITY
        } else {
            w.log10()
        }
    }

    /// Upper bound on the relative width `(hi − lo)/|lo|`, infinite if the
    /// enclosure touches zero.
    pub fn rel_width_f64(&self) -> f64 {
        let m = self.mag_lower_f64();
        if m == 0.0 {
            f64::INFINITY
        } else {
            self.width_f64() / m
        }
    }

    /// Lower bound on `min |x|` over the enclosure.
    pub fn mag_lower_f64(&self) -> f64 {
        if self.contains_zero() {
            0.0
        } else if self.lo.is_sign_positive() {
            self.lo_f64()
        } else {
            (-self.hi_f64()).max(0.0)
        }
    }

    pub fn contains_zero(&self) -> bool {
        self.lo <= 0 && self.hi >= 0
    }

    pub fn contains_f64(&self, x: f64) -> bool {
        self.lo <= x && self.hi >= x
    }

    pub fn contains_rational(&self, x: &Rational) -> bool {
        self.lo <= *x && self.hi >= *x
    }

    pub fn contains(&self, other: &Enclosure) -> bool {
        self.lo <= other.lo && self.hi >= other.hi
    }

    pub fn overlaps(&self, other: &Enclosure) -> bool {
        self.lo <= other.hi && other.lo <= self.hi
    }

    /// Certified `self > 0`.
    pub fn is_positive(&self) -> bool {
        self.lo > 0
    }

    pub fn is_negative(&self) -> bool {
        self.hi < 0
    }

    /// Certified strict ordering against another enclosure: `Some(Less)` when
    /// every point of `self` is below every point of `other`, `None` when the
    /// enclosures overlap.
    pub fn certified_cmp(&self, other: &Enclosure) -> Option<Ordering> {
        if self.hi < other.lo {
            Some(Ordering::Less)
        } else if self.lo > other.hi {
            Some(Ordering::Greater)
        } else {
            None
        }
    }

    /// Certified strict comparison with an exact rational.
    pub fn cmp_rational(&self, x: &Rational) -> Option<Ordering> {
        if self.hi < *x {
            Some(Ordering::Less)
        } else if self.lo > *x {
            Some(Ordering::Greater)
        } else {
            None
        }
    }

    pub fn hull(&self, other: &Enclosure) -> Enclosure {
        let lo = if self.lo <= other.lo { self.lo.clone() } else { other.lo.clone() };
        let hi = if self.hi >= other.hi { self.hi.clone() } else { other.hi.clone() };
        Enclosure { lo, hi }
    }

    /// Intersection, `None` when disjoint.
    pub fn intersect(&self, other: &Enclosure) -> Option<Enclosure> {
        let lo = if self.lo >= other.lo { &self.lo } else { &other.lo };
        let hi = if self.hi <= other.hi { &self.hi } else { &other.hi };
        if lo <= hi {
            Some(Enclosure { lo: lo.clone(), hi: hi.clone() })
        } else {
            None
        }
    }

    /// Widens symmetrically by `r ≥ 0`.
    pub fn widen(&self, r: &Float) -> Enclosure {
        let p = self.prec();
        Enclosure {
            lo: Float::with_val_round(p, &self.lo - r, Round::Down).0,
            hi: Float::with_val_round(p, &self.hi + r, Round::Up).0,
        }
    }

    /// Rounds the endpoints outward to `prec` bits.
    pub fn with_prec(&self, prec: u32) -> Enclosure {
        Enclosure {
            lo: Float::with_val_round(prec, &self.lo, Round::Down).0,
            hi: Float::with_val_round(prec, &self.hi, Round::Up).0,
        }
    }

    pub fn neg(&self) -> Enclosure {
        Enclosure { lo: Float::with_val(self.hi.prec(), -&self.hi), hi: Float::with_val(self.lo.prec(), -&self.lo) }
    }

    pub fn add(&self, other: &Enclosure) -> Enclosure {
        let p = self.prec().max(other.prec());
        Enclosure {
            lo: Float::with_val_round(p, &self.lo + &other.lo, Round::Down).0,
            hi: Float::with_val_round(p, &self.hi + &other.hi, Round::Up).0,
        }
    }

    pub fn sub(&self, other: &Enclosure) -> Enclosure {
        let p = self.prec().max(other.prec());
        Enclosure {
            lo: Float::with_val_round(p, &self.lo - &other.hi, Round::Down).0,
            hi: Float::with_val_round(p, &self.hi - &other.lo, Round::Up).0,
        }
    }

    pub fn mul(&self, other: &Enclosure) -> Enclosure {
        let p = self.prec().max(other.prec());
        if self.lo >= 0 && other.lo >= 0 {
            return Enclosure {
                lo: Float::with_val_round(p, &self.lo * &other.lo, Round::Down).0,
                hi: Float::with_val_round(p, &self.hi * &other.hi, Round::Up).0,
            };
        }
        let pairs = [(&self.lo, &other.lo), (&self.lo, &other.hi), (&self.hi, &other.lo), (&self.hi, &other.hi)];
        let mut lo: Option<Float> = None;
        let mut hi: Option<Float> = None;
        for (x, y) in pairs {
            let d = Float::with_val_round(p, x * y, Round::Down).0;
            let u = Float::with_val_round(p, x * y, Round::Up).0;
            if lo.as_ref().map_or(true, |l| d < *l) {
                lo = Some(d);
            }
            if hi.as_ref().map_or(true, |h| u > *h) {
                hi = Some(u);
            }
        }
        Enclosure { lo: lo.unwrap(), hi: hi.unwrap() }
    }

    pub fn mul_i64(&self, k: i64) -> Enclosure {
        self.mul(&Enclosure::from_i64(k, self.prec()))
    }

    pub fn mul_rational(&self, k: &Rational) -> Enclosure {
        self.mul(&Enclosure::from_rational(k, self.prec()))
    }

    /// Division; `None` when the divisor contains zero.
    pub fn checked_div(&self, other: &Enclosure) -> Option<Enclosure> {
        if other.contains_zero() {
            return None;
        }
        Some(self.mul(&other.recip()))
    }

    pub fn div(&self, other: &Enclosure) -> Enclosure {
        self.checked_div(other).expect("division by an enclosure containing zero")
    }

    /// Reciprocal; panics if the enclosure contains zero.
    pub fn recip(&self) -> Enclosure {
        assert!(!self.contains_zero(), "reciprocal of an enclosure containing zero");
        let p = self.prec();
        Enclosure {
            lo: Float::with_val_round(p, 1 / &self.hi, Round::Down).0,
            hi: Float::with_val_round(p, 1 / &self.lo, Round::Up).0,
        }
    }

    pub fn abs(&self) -> Enclosure {
        if self.lo >= 0 {
            self.clone()
        } else if self.hi <= 0 {
            self.neg()
        } else {
            let m = if Float::with_val(self.prec(), -&self.lo) > self.hi {
                Float::with_val(self.prec(), -&self.lo)
            } else {
                self.hi.clone()
            };
            Enclosure { lo: Float::new(self.prec()), hi: m }
        }
    }

    pub fn sqr(&self) -> Enclosure {
        let a = self.abs();
        let p = self.prec();
        Enclosure {
            lo: Float::with_val_round(p, a.lo.square_ref(), Round::Down).0,
            hi: Float::with_val_round(p, a.hi.square_ref(), Round::Up).0,
        }
    }

    /// Square root of the non-negative part.
    pub fn sqrt(&self) -> Enclosure {
        assert!(self.hi >= 0, "sqrt of a negative enclosure");
        let p = self.prec();
        let lo = if self.lo <= 0 { Float::new(p) } else { Float::with_val_round(p, self.lo.sqrt_ref(), Round::Down).0 };
        Enclosure { lo, hi: Float::with_val_round(p, self.hi.sqrt_ref(), Round::Up).0 }
    }

    /// Natural logarithm; requires a positive enclosure.
    pub fn ln(&self) -> Enclosure {
        assert!(self.lo > 0, "log of a non-positive enclosure");
        let p = self.prec();
        Enclosure {
            lo: Float::with_val_round(p, self.lo.ln_ref(), Round::Down).0,
            hi: Float::with_val_round(p, self.hi.ln_ref(), Round::Up).0,
        }
    }

    pub fn exp(&self) -> Enclosure {
        let p = self.prec();
        Enclosure {
            lo: Float::with_val_round(p, self.lo.exp_ref(), Round::Down).0,
            hi: Float::with_val_round(p, self.hi.exp_ref(), Round::Up).0,
        }
    }

    /// `sin(πx)` over the enclosure, including interior extrema.
    pub fn sin_pi(&self) -> Enclosure {
        let p = self.prec();
        if Float::with_val(p, &self.hi - &self.lo) >= 2 {
            return Enclosure { lo: Float::with_val(p, -1), hi: Float::with_val(p, 1) };
        }
        let a_lo = Float::with_val_round(p, self.lo.sin_pi_ref(), Round::Down).0;
        let a_hi = Float::with_val_round(p, self.lo.sin_pi_ref(), Round::Up).0;
        let b_lo = Float::with_val_round(p, self.hi.sin_pi_ref(), Round::Down).0;
        let b_hi = Float::with_val_round(p, self.hi.sin_pi_ref(), Round::Up).0;
        let mut lo = if a_lo < b_lo { a_lo } else { b_lo };
        let mut hi = if a_hi > b_hi { a_hi } else { b_hi };
        // Maxima sit at x ≡ 1/2 and minima at x ≡ 3/2 (mod 2).
        if contains_shifted_integer(&self.lo, &self.hi, 0.5, 2) {
            hi = Float::with_val(p, 1);
        }
        if contains_shifted_integer(&self.lo, &self.hi, 1.5, 2) {
            lo = Float::with_val(p, -1);
        }
        Enclosure { lo, hi }
    }

    /// `sin(πx)` from a single correctly rounded evaluation at the midpoint,
    /// widened by the Lipschitz bound `π·radius`. Cheaper than [`Self::sin_pi`]
    /// and just as tight for narrow enclosures.
    pub fn sin_pi_narrow(&self) -> Enclosure {
        let p = self.prec();
        let mid = Float::with_val(p, &self.lo + &self.hi) / 2u32;
        let r1 = Float::with_val_round(p, &self.hi - &mid, Round::Up).0;
        let r2 = Float::with_val_round(p, &mid - &self.lo, Round::Up).0;
        let rad = if r1 > r2 { r1 } else { r2 };
        let s = Float::with_val(p, mid.sin_pi_ref());
        // rounding to nearest costs at most half an ulp of s
        let mut err = Float::with_val_round(p, &rad * 3.1416f64, Round::Up).0;
        let ulp = Float::with_val_round(p, s.abs_ref(), Round::Up).0 >> (p as i32 - 1);
        err.add_assign_round(&ulp, Round::Up);
        let mut lo = Float::with_val_round(p, &s - &err, Round::Down).0;
        let mut hi = Float::with_val_round(p, &s + &err, Round::Up).0;
        if lo < -1 {
            lo = Float::with_val(p, -1);
        }
        if hi > 1 {
            hi = Float::with_val(p, 1);
        }
        Enclosure { lo, hi }
    }

    pub fn cos_pi(&self) -> Enclosure {
        self.add(&Enclosure::ratio(1, 2, self.prec())).sin_pi()
    }

    pub fn max_f64_abs(&self) -> f64 {
        self.lo_f64().abs().max(self.hi_f64().abs())
    }
}

/// Whether `[lo, hi]` contains a point `offset + period·k` for an integer `k`.
fn contains_shifted_integer(lo: &Float, hi: &Float, offset: f64, period: u32) -> bool {
    let p = lo.prec().max(hi.prec()) + 8;
    let k = Float::with_val_round(p, (hi - Float::with_val(p, offset)) / period, Round::Down).0.floor();
    let point = Float::with_val(p, &k * period) + offset;
    point >= *lo && point <= *hi
}

impl fmt::Display for Enclosure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{:e}, {:e}]", self.lo_f64(), self.hi_f64())
    }
}

/// JSON form: f64 endpoints rounded outward.
impl Serialize for Enclosure {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        let mut st = s.serialize_struct("Enclosure", 2)?;
        st.serialize_field("lo", &self.lo_f64())?;
        st.serialize_field("hi", &self.hi_f64())?;
        st.end()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pi_brackets_known_digits() {
        let pi = Enclosure::pi(128);
        assert!(pi.contains_f64(std::f64::consts::PI) || pi.width_f64() < 1e-30);
        let r = Rational::from((314159265358979323846u128, 100000000000000000000u128));
        assert_eq!(pi.cmp_rational(&r), Some(Ordering::Greater));
    }

    #[test]
    fn mul_signs() {
        let a = Enclosure::new(Float::with_val(64, -2), Float::with_val(64, 3));
        let b = Enclosure::new(Float::with_val(64, -5), Float::with_val(64, 1));
        let c = a.mul(&b);
        assert_eq!(c.lo_f64(), -15.0);
        assert_eq!(c.hi_f64(), 10.0);
    }

    #[test]
    fn sin_pi_catches_interior_extremum() {
        let x = Enclosure::new(Float::with_val(64, 0.4), Float::with_val(64, 0.6));
        let s = x.sin_pi();
        assert_eq!(s.hi_f64(), 1.0);
        assert!(s.lo_f64() > 0.95);
        let y = Enclosure::new(Float::with_val(64, 1.4), Float::with_val(64, 1.6));
        assert_eq!(y.sin_pi().lo_f64(), -1.0);
    }

    #[test]
    fn third_is_enclosed() {
        let t = Enclosure::ratio(1, 3, 64);
        assert!(t.contains_rational(&Rational::from((1, 3))));
        assert!(t.width_f64() > 0.0 && t.width_f64() < 1e-18);
    }

    #[test]
    fn abs_of_straddling_interval() {
        let x = Enclosure::new(Float::with_val(64, -3), Float::with_val(64, 2));
        let a = x.abs();
        assert_eq!((a.lo_f64(), a.hi_f64()), (0.0, 3.0));
    }
}
