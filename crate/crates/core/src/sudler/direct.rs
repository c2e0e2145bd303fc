//! Direct evaluation of `∏_{r=1}^{count} 2|sin π(rα + x)|`.
//!
//! The arguments `rα + x` are generated by repeated addition at a working
//! precision wide enough that the accumulated drift stays far below the
//! smallest factor. One correctly rounded `sin_pi` per factor is widened
//! by a uniform absolute error, which keeps the loop allocation free.

use rug::float::Round;
use rug::ops::{AddAssignRound, MulAssignRound, SubAssignRound};
use rug::{Float, Integer, Rational};

use crate::cf::QuadraticSurd;
use crate::interval::Enclosure;
use crate::real::Real;

/// Enclosure of `∏_{r=1}^{count} 2|sin π(rα + x)|`.
pub fn shifted_product(alpha: &Real, shift: &Real, count: u64, prec: u32) -> Enclosure {
    if count == 0 {
        return Enclosure::one(prec);
    }
    if let (Real::Exact(a), Real::Exact(x)) = (alpha, shift) {
        if hits_integer(a, x, count) {
            return Enclosure::zero(prec);
        }
    }
    let bits = 64 - count.leading_zeros();
    let w = prec + 2 * bits + 16;
    let (a_mid, a_rad) = mid_rad(&alpha.to_enclosure(w), w);
    let (x_mid, x_rad) = mid_rad(&shift.to_enclosure(w), w);

    // every argument is within η of the computed one
    let ulp = Float::with_val(w, Float::i_exp(1, 1 - w as i32));
    let mut eta = Float::with_val_round(w, &a_rad + &ulp, Round::Up).0;
    eta.mul_assign_round(count, Round::Up);
    eta.add_assign_round(&x_rad, Round::Up);
    eta.add_assign_round(&ulp, Round::Up);
    // |Δ(2|sin πx|)| ≤ 2π·η, plus rounding of sin_pi (|value| ≤ 2)
    let mut err = Float::with_val_round(w, &eta * 6.2832f64, Round::Up).0;
    err.add_assign_round(Float::with_val(w, Float::i_exp(1, 2 - w as i32)), Round::Up);

    let mut step = a_mid.clone();
    step -= a_mid.clone().floor();
    let mut x = Float::with_val(w, &a_mid + &x_mid);
    let fl = x.clone().floor();
    x -= fl;

    let acc = prec + 16;
    let mut lo = Float::with_val(acc, 1);
    let mut hi = Float::with_val(acc, 1);
    let mut lo_zero = false;
    let mut s = Float::new(w);
    let mut f = Float::new(w);
    for r in 1..=count {
        if r > 1 {
            x += &step;
            if x >= 1 {
                x -= 1u32;
            }
        }
        s.assign_sin_pi(&x);
        s.abs_mut();
        s <<= 1;
        if !lo_zero {
            f.clone_from(&s);
            f.sub_assign_round(&err, Round::Down);
            if f <= 0 {
                lo_zero = true;
            } else {
                lo.mul_assign_round(&f, Round::Down);
            }
        }
        s.add_assign_round(&err, Round::Up);
        hi.mul_assign_round(&s, Round::Up);
    }
    if lo_zero {
        lo = Float::new(acc);
    }
    Enclosure::new(lo, hi).with_prec(prec)
}

trait AssignSinPi {
    fn assign_sin_pi(&mut self, x: &Float);
}

impl AssignSinPi for Float {
    fn assign_sin_pi(&mut self, x: &Float) {
        use rug::Assign;
        self.assign(x.sin_pi_ref());
    }
}

/// Midpoint at precision `w` and an upper bound on the distance to either end.
fn mid_rad(e: &Enclosure, w: u32) -> (Float, Float) {
    let lo = Float::with_val(w, e.lo());
    let hi = Float::with_val(w, e.hi());
    let mid = Float::with_val(w, &lo + &hi) / 2u32;
    let r1 = Float::with_val_round(w, &hi - &mid, Round::Up).0;
    let r2 = Float::with_val_round(w, &mid - &lo, Round::Up).0;
    // the endpoints may carry more bits than w
    let mut rad = if r1 > r2 { r1 } else { r2 };
    let slack = Float::with_val(w, Float::i_exp(1, -(w as i32)));
    let scale = Float::with_val(w, mid.clone().abs() + 1u32);
    rad.add_assign_round(slack * scale, Round::Up);
    (mid, rad)
}

/// Whether `rα + x ∈ ℤ` for some `1 ≤ r ≤ count`, decided exactly.
pub fn hits_integer(alpha: &QuadraticSurd, x: &QuadraticSurd, count: u64) -> bool {
    if !alpha.same_field(x) {
        return false;
    }
    if !alpha.is_rational() {
        // the irrational parts must cancel: r = −b_x s_α/(b_α s_x)
        let num = -Integer::from(x.b() * alpha.s());
        let den = Integer::from(alpha.b() * x.s());
        let r = Rational::from((num, den));
        if *r.denom() != 1 || *r.numer() < 1 || *r.numer() > count {
            return false;
        }
        let v = &alpha.mul_integer(r.numer()) + x;
        return v.as_rational().is_some_and(|q| *q.denom() == 1);
    }
    let Some(xr) = x.as_rational() else {
        return false;
    };
    let ar = alpha.as_rational().unwrap();
    // r·u/v + w/z ∈ ℤ  ⇔  A·r ≡ −B (mod L)
    let l = Integer::from(ar.denom().lcm_ref(xr.denom()));
    let a_res = (Integer::from(ar.numer() * &l) / ar.denom()).modulo(&l);
    let b_res = (Integer::from(xr.numer() * &l) / xr.denom()).modulo(&l);
    let target = Integer::from(-&b_res).modulo(&l);
    let g = Integer::from(a_res.gcd_ref(&l));
    if g == 0 || !target.is_divisible(&g) {
        return false;
    }
    let m = Integer::from(&l / &g);
    if m == 1 {
        return true;
    }
    let inv = Integer::from(&a_res / &g).invert(&m).expect("coprime after dividing by gcd");
    let mut r0 = (Integer::from(&target / &g) * inv).modulo(&m);
    if r0 == 0 {
        r0 = m;
    }
    r0 <= count
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(p: i64, d: i64) -> QuadraticSurd {
        QuadraticSurd::from_rational(&Rational::from((p, d)))
    }

    #[test]
    fn rational_zero_detection() {
        assert!(hits_integer(&q(1, 2), &q(0, 1), 2));
        assert!(!hits_integer(&q(1, 2), &q(0, 1), 1));
        assert!(hits_integer(&q(2, 5), &q(1, 5), 2));
        assert!(!hits_integer(&q(2, 5), &q(1, 10), 100));
        assert!(hits_integer(&q(3, 1), &q(0, 1), 1));
    }

    #[test]
    fn irrational_zero_detection() {
        let phi = QuadraticSurd::new(Integer::from(-1), Integer::from(1), Integer::from(5), Integer::from(2)).unwrap();
        assert!(!hits_integer(&phi, &QuadraticSurd::zero(), 1000));
        // x = 1 − 3φ vanishes at r = 3
        let x = &QuadraticSurd::one() - &phi.mul_integer(&Integer::from(3));
        assert!(hits_integer(&phi, &x, 3));
        assert!(!hits_integer(&phi, &x, 2));
    }

    #[test]
    fn single_factor() {
        let phi = QuadraticSurd::new(Integer::from(-1), Integer::from(1), Integer::from(5), Integer::from(2)).unwrap();
        let p = shifted_product(&Real::Exact(phi.clone()), &Real::zero(), 1, 128);
        let expect = 2.0 * (std::f64::consts::PI * phi.to_f64()).sin().abs();
        assert!(p.contains_f64(expect) || (p.mid_f64() - expect).abs() < 1e-15);
        assert!(p.width_f64() < 1e-30);
    }
}
