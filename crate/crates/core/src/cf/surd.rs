//! Exact numbers `(a + b√d)/s` in a real quadratic field.
//!
//! Rationals are the special case `b = 0`, stored with `d = 1`, so one type
//! covers both the convergent arithmetic and the periodic tails. Two
//! irrational operands must share `d`; mixing fields is a programming error
//! and panics.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use rug::float::Round;
use rug::{Float, Integer, Rational};

use crate::error::{Error, Result};
use crate::interval::Enclosure;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct QuadraticSurd {
    a: Integer,
    b: Integer,
    d: Integer,
    s: Integer,
}

/// Splits `n > 0` as `f²·m` with `m` square-free. Exact whenever the cube
/// root of `n` is below 2²²; beyond that `m` is free of square factors
/// below 2²² only, which is harmless for the small radicands used here.
pub fn square_free_part(n: &Integer) -> (Integer, Integer) {
    assert!(*n > 0);
    const LIMIT: u32 = 1 << 22;
    // after removing primes up to n^{1/3} the cofactor has at most two prime
    // factors, so it is square-free unless it is a perfect square
    let cube = Integer::from(n.root_ref(3)) + 1u32;
    let limit = cube.to_u32().unwrap_or(LIMIT).min(LIMIT);
    let mut m = n.clone();
    let mut f = Integer::from(1);
    let mut core = Integer::from(1);
    let mut p: u32 = 2;
    while p <= limit && Integer::from(p) * p <= m {
        let mut cnt = 0u32;
        while m.is_divisible_u(p) {
            m /= p;
            cnt += 1;
        }
        for _ in 0..cnt / 2 {
            f *= p;
        }
        if cnt % 2 == 1 {
            core *= p;
        }
        p += 1;
    }
    finish(&mut f, &mut core, m);
    (f, core)
}

fn finish(f: &mut Integer, core: &mut Integer, rest: Integer) {
    if rest.is_perfect_square() {
        *f *= Integer::from(rest.sqrt_ref());
    } else {
        *core *= rest;
    }
}

impl QuadraticSurd {
    /// `(a + b√d)/s`, canonicalised. `d` must be positive and `s` nonzero.
    pub fn new(a: Integer, b: Integer, d: Integer, s: Integer) -> Result<Self> {
        if s == 0 {
            return Err(Error::Domain("zero denominator".into()));
        }
        if d <= 0 {
            return Err(Error::Domain("radicand must be positive".into()));
        }
        let mut x = QuadraticSurd { a, b, d, s };
        x.canonicalize(true);
        Ok(x)
    }

    pub fn from_integer(n: impl Into<Integer>) -> Self {
        QuadraticSurd { a: n.into(), b: Integer::new(), d: Integer::from(1), s: Integer::from(1) }
    }

    pub fn from_rational(r: &Rational) -> Self {
        QuadraticSurd {
            a: r.numer().clone(),
            b: Integer::new(),
            d: Integer::from(1),
            s: r.denom().clone(),
        }
    }

    pub fn zero() -> Self {
        Self::from_integer(0)
    }

    pub fn one() -> Self {
        Self::from_integer(1)
    }

    /// `√d`.
    pub fn sqrt(d: impl Into<Integer>) -> Result<Self> {
        Self::new(Integer::new(), Integer::from(1), d.into(), Integer::from(1))
    }

    fn canonicalize(&mut self, reduce_radicand: bool) {
        if self.s < 0 {
            self.a = -std::mem::take(&mut self.a);
            self.b = -std::mem::take(&mut self.b);
            self.s = -std::mem::take(&mut self.s);
        }
        if self.b == 0 {
            self.d = Integer::from(1);
        } else if reduce_radicand {
            let (f, m) = square_free_part(&self.d);
            self.b *= f;
            self.d = m;
            if self.d == 1 {
                self.a += &self.b;
                self.b = Integer::new();
            }
        }
        let mut g = Integer::from(self.a.gcd_ref(&self.b));
        g.gcd_mut(&self.s);
        if g > 1 {
            self.a /= &g;
            self.b /= &g;
            self.s /= &g;
        }
    }

    pub fn a(&self) -> &Integer {
        &self.a
    }

    pub fn b(&self) -> &Integer {
        &self.b
    }

    pub fn d(&self) -> &Integer {
        &self.d
    }

    pub fn s(&self) -> &Integer {
        &self.s
    }

    pub fn is_rational(&self) -> bool {
        self.b == 0
    }

    pub fn as_rational(&self) -> Option<Rational> {
        self.is_rational().then(|| Rational::from((self.a.clone(), self.s.clone())))
    }

    pub fn is_zero(&self) -> bool {
        self.a == 0 && self.b == 0
    }

    pub fn conjugate(&self) -> Self {
        QuadraticSurd { a: self.a.clone(), b: Integer::from(-&self.b), d: self.d.clone(), s: self.s.clone() }
    }

    /// Whether `self` and `other` lie in a common field `Q(√d)`, so that
    /// exact arithmetic between them is defined.
    pub fn same_field(&self, other: &Self) -> bool {
        self.b == 0 || other.b == 0 || self.d == other.d
    }

    fn common_d(&self, other: &Self) -> Integer {
        if self.b == 0 {
            other.d.clone()
        } else if other.b == 0 || self.d == other.d {
            self.d.clone()
        } else {
            panic!("surds from different fields: √{} and √{}", self.d, other.d)
        }
    }

    fn build(a: Integer, b: Integer, d: Integer, s: Integer) -> Self {
        let mut x = QuadraticSurd { a, b, d, s };
        x.canonicalize(false);
        x
    }

    /// Exact sign: −1, 0 or 1.
    pub fn signum(&self) -> i32 {
        let sa = self.a.cmp0();
        let sb = self.b.cmp0();
        let s = match (sa, sb) {
            (x, Ordering::Equal) => x,
            (Ordering::Equal, y) => y,
            (x, y) if x == y => x,
            (x, y) => {
                // opposite signs: compare a² with b²d
                let a2 = Integer::from(self.a.square_ref());
                let b2d = Integer::from(self.b.square_ref()) * &self.d;
                match a2.cmp(&b2d) {
                    Ordering::Greater => x,
                    Ordering::Less => y,
                    Ordering::Equal => Ordering::Equal,
                }
            }
        };
        match s {
            Ordering::Less => -1,
            Ordering::Equal => 0,
            Ordering::Greater => 1,
        }
    }

    pub fn recip(&self) -> Self {
        assert!(!self.is_zero(), "reciprocal of zero");
        // s/(a + b√d) = s(a − b√d)/(a² − b²d)
        let den = Integer::from(self.a.square_ref()) - Integer::from(self.b.square_ref()) * &self.d;
        Self::build(
            Integer::from(&self.s * &self.a),
            -Integer::from(&self.s * &self.b),
            self.d.clone(),
            den,
        )
    }

    /// Exact floor, via integer square roots only.
    pub fn floor(&self) -> Integer {
        // floor((a + x)/s) = floor((a + floor x)/s) for integer s > 0
        let fb = if self.b == 0 {
            Integer::new()
        } else {
            let m = Integer::from(self.b.square_ref()) * &self.d;
            let r = Integer::from(m.sqrt_ref());
            if self.b > 0 {
                r
            } else {
                // b²d is not a perfect square, so ceil(√m) = isqrt(m) + 1
                -(r + 1u32)
            }
        };
        Integer::from(&self.a + &fb).div_rem_floor(self.s.clone()).0
    }

    pub fn ceil(&self) -> Integer {
        -(self.neg_ref().floor())
    }

    fn neg_ref(&self) -> Self {
        QuadraticSurd {
            a: Integer::from(-&self.a),
            b: Integer::from(-&self.b),
            d: self.d.clone(),
            s: self.s.clone(),
        }
    }

    /// `x − ⌊x⌋ ∈ [0, 1)`.
    pub fn fract(&self) -> Self {
        self - &Self::from_integer(self.floor())
    }

    pub fn mul_integer(&self, k: &Integer) -> Self {
        Self::build(Integer::from(&self.a * k), Integer::from(&self.b * k), self.d.clone(), self.s.clone())
    }

    pub fn div_integer(&self, k: &Integer) -> Self {
        assert!(*k != 0);
        Self::build(self.a.clone(), self.b.clone(), self.d.clone(), Integer::from(&self.s * k))
    }

    /// `(p·x + p')/(q·x + q')`.
    pub fn mobius(&self, p: &Integer, pp: &Integer, q: &Integer, qp: &Integer) -> Self {
        let num = &self.mul_integer(p) + &Self::from_integer(pp.clone());
        let den = &self.mul_integer(q) + &Self::from_integer(qp.clone());
        &num / &den
    }

    /// Outward-rounded enclosure with `prec` bits; the working precision
    /// grows until cancellation in `a + b√d` is absorbed.
    pub fn to_enclosure(&self, prec: u32) -> Enclosure {
        if self.b == 0 {
            return Enclosure::from_rational(&Rational::from((self.a.clone(), self.s.clone())), prec);
        }
        let mut w = prec + 32 + self.a.significant_bits().max(self.b.significant_bits());
        loop {
            let r_lo = Float::with_val_round(w, self.d.sqrt_ref_float(w, Round::Down), Round::Down).0;
            let r_hi = Float::with_val_round(w, self.d.sqrt_ref_float(w, Round::Up), Round::Up).0;
            let (m_lo, m_hi) = if self.b > 0 {
                (
                    Float::with_val_round(w, &r_lo * &self.b, Round::Down).0,
                    Float::with_val_round(w, &r_hi * &self.b, Round::Up).0,
                )
            } else {
                (
                    Float::with_val_round(w, &r_hi * &self.b, Round::Down).0,
                    Float::with_val_round(w, &r_lo * &self.b, Round::Up).0,
                )
            };
            let n_lo = Float::with_val_round(w, &m_lo + &self.a, Round::Down).0;
            let n_hi = Float::with_val_round(w, &m_hi + &self.a, Round::Up).0;
            let v_lo = Float::with_val_round(prec, &n_lo / &self.s, Round::Down).0;
            let v_hi = Float::with_val_round(prec, &n_hi / &self.s, Round::Up).0;
            let e = Enclosure::new(v_lo, v_hi);
            // accept once the width is within a few ulps of the output precision
            let ok = !e.contains_zero() && {
                let rel = Float::with_val(prec, e.width()) / e.lo().clone().abs();
                rel < Float::with_val(prec, Float::i_exp(1, 3 - prec as i32))
            };
            if ok || w > 64 * prec + 4096 {
                return e;
            }
            w *= 2;
        }
    }

    pub fn to_f64(&self) -> f64 {
        self.to_enclosure(64).mid_f64()
    }
}

trait SqrtFloat {
    fn sqrt_ref_float(&self, prec: u32, round: Round) -> Float;
}

impl SqrtFloat for Integer {
    fn sqrt_ref_float(&self, prec: u32, round: Round) -> Float {
        let x = Float::with_val(prec + 64, self);
        let mut y = x;
        y.sqrt_round(round);
        y
    }
}

impl PartialOrd for QuadraticSurd {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for QuadraticSurd {
    fn cmp(&self, other: &Self) -> Ordering {
        (self - other).signum().cmp(&0)
    }
}

impl<'a> Add<&'a QuadraticSurd> for &'a QuadraticSurd {
    type Output = QuadraticSurd;
    fn add(self, o: &QuadraticSurd) -> QuadraticSurd {
        let d = self.common_d(o);
        QuadraticSurd::build(
            Integer::from(&self.a * &o.s) + Integer::from(&o.a * &self.s),
            Integer::from(&self.b * &o.s) + Integer::from(&o.b * &self.s),
            d,
            Integer::from(&self.s * &o.s),
        )
    }
}

impl<'a> Sub<&'a QuadraticSurd> for &'a QuadraticSurd {
    type Output = QuadraticSurd;
    fn sub(self, o: &QuadraticSurd) -> QuadraticSurd {
        self + &o.neg_ref()
    }
}

impl<'a> Mul<&'a QuadraticSurd> for &'a QuadraticSurd {
    type Output = QuadraticSurd;
    fn mul(self, o: &QuadraticSurd) -> QuadraticSurd {
        let d = self.common_d(o);
        let bb = Integer::from(&self.b * &o.b) * &d;
        QuadraticSurd::build(
            Integer::from(&self.a * &o.a) + bb,
            Integer::from(&self.a * &o.b) + Integer::from(&self.b * &o.a),
            d,
            Integer::from(&self.s * &o.s),
        )
    }
}

impl<'a> Div<&'a QuadraticSurd> for &'a QuadraticSurd {
    type Output = QuadraticSurd;
    fn div(self, o: &QuadraticSurd) -> QuadraticSurd {
        self * &o.recip()
    }
}

impl Neg for &QuadraticSurd {
    type Output = QuadraticSurd;
    fn neg(self) -> QuadraticSurd {
        self.neg_ref()
    }
}

macro_rules! owned_ops {
    ($($tr:ident $m:ident),*) => {$(
        impl $tr<QuadraticSurd> for QuadraticSurd {
            type Output = QuadraticSurd;
            fn $m(self, o: QuadraticSurd) -> QuadraticSurd { (&self).$m(&o) }
        }
        impl<'a> $tr<&'a QuadraticSurd> for QuadraticSurd {
            type Output = QuadraticSurd;
            fn $m(self, o: &QuadraticSurd) -> QuadraticSurd { (&self).$m(o) }
        }
    )*};
}
owned_ops!(Add add, Sub sub, Mul mul, Div div);

impl Neg for QuadraticSurd {
    type Output = QuadraticSurd;
    fn neg(self) -> QuadraticSurd {
        self.neg_ref()
    }
}

impl From<i64> for QuadraticSurd {
    fn from(v: i64) -> Self {
        Self::from_integer(v)
    }
}

impl From<Integer> for QuadraticSurd {
    fn from(v: Integer) -> Self {
        Self::from_integer(v)
    }
}

impl From<&Rational> for QuadraticSurd {
    fn from(v: &Rational) -> Self {
        Self::from_rational(v)
    }
}

impl fmt::Display for QuadraticSurd {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.b == 0 {
            if self.s == 1 {
                write!(f, "{}", self.a)
            } else {
                write!(f, "{}/{}", self.a, self.s)
            }
        } else {
            let sign = if self.b < 0 { "-" } else { "+" };
            let bb = Integer::from(self.b.abs_ref());
            let coef = if bb == 1 { String::new() } else { bb.to_string() };
            if self.s == 1 {
                write!(f, "{} {} {}√{}", self.a, sign, coef, self.d)
            } else {
                write!(f, "({} {} {}√{})/{}", self.a, sign, coef, self.d, self.s)
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn phi_conj() -> QuadraticSurd {
        // (√5 − 1)/2
        QuadraticSurd::new(Integer::from(-1), Integer::from(1), Integer::from(5), Integer::from(2)).unwrap()
    }

    #[test]
    fn square_factors_move_out_of_radicand() {
        let x = QuadraticSurd::new(Integer::new(), Integer::from(1), Integer::from(120), Integer::from(1)).unwrap();
        assert_eq!((x.b().clone(), x.d().clone()), (Integer::from(2), Integer::from(30)));
        let y = QuadraticSurd::new(Integer::from(1), Integer::from(3), Integer::from(49), Integer::from(2)).unwrap();
        assert!(y.is_rational());
        assert_eq!(y, QuadraticSurd::from_integer(11));
    }

    #[test]
    fn square_free_part_examples() {
        for (n, f, m) in [(1u64, 1u64, 1u64), (12, 2, 3), (72, 6, 2), (30, 1, 30), (1 << 20, 1 << 10, 1), (2 * 9973 * 9973, 9973, 2)] {
            let (ff, mm) = square_free_part(&Integer::from(n));
            assert_eq!((ff, mm), (Integer::from(f), Integer::from(m)), "n = {n}");
        }
    }

    #[test]
    fn golden_identities() {
        let x = phi_conj();
        // x² + x − 1 = 0
        let z = &(&(&x * &x) + &x) - &QuadraticSurd::one();
        assert!(z.is_zero());
        assert_eq!(x.floor(), Integer::new());
        assert_eq!(x.recip().floor(), Integer::from(1));
        assert_eq!(x.recip().fract(), x);
    }

    #[test]
    fn sign_with_cancellation() {
        // 99 − 70√2 > 0 (tiny), 70√2 − 99 < 0
        let a = QuadraticSurd::new(Integer::from(99), Integer::from(-70), Integer::from(2), Integer::from(1)).unwrap();
        assert_eq!(a.signum(), 1);
        assert_eq!((-&a).signum(), -1);
        let e = a.to_enclosure(64);
        assert!(e.is_positive());
        assert!(e.contains_f64(99.0 - 70.0 * 2f64.sqrt()) || e.width_f64() < 1e-15);
    }

    #[test]
    fn floor_of_negative_surd() {
        let x = -phi_conj();
        assert_eq!(x.floor(), Integer::from(-1));
        assert_eq!(x.ceil(), Integer::new());
    }
}
