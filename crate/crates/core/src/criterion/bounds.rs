//! The explicit constants shared by the grid criterion and the limit
//! function enclosures: Pinner's discrepancy bound, the tail error `E(T, a)`,
//! and `b(x) = πx log x`.

use rug::Integer;

use crate::error::{Error, Result};
use crate::interval::Enclosure;

/// Pinner's bound needs `a ≥ 2`; expansions whose digits are all 1 satisfy
/// the hypothesis for `a = 2`.
pub fn effective_digit_bound(a: u64) -> u64 {
    a.max(2)
}

/// `(a/(8 log a) + 6, a/8 + 23/4)`, the slope and intercept of Pinner's bound.
fn pinner_coefficients(a: u64, prec: u32) -> (Enclosure, Enclosure) {
    let ae = Enclosure::from_i64(a as i64, prec);
    let slope = ae.div(&ae.ln().mul_i64(8)).add(&Enclosure::from_i64(6, prec));
    let intercept = Enclosure::ratio(a as i64, 8, prec).add(&Enclosure::ratio(23, 4, prec));
    (slope, intercept)
}

/// `(a/(8 log a) + 6)·log ℓ + a/8 + 23/4`, bounding `|Σ_{n≤ℓ}(1/2 − {nα})|`
/// for rationals with digits at most `a` and `ℓ < q_m`.
pub fn pinner_bound(l: &Integer, a: u64, prec: u32) -> Result<Enclosure> {
    if *l < 1 {
        return Err(Error::Domain("Pinner bound needs ℓ ≥ 1".into()));
    }
    if a < 2 {
        return Err(Error::Domain("Pinner bound needs a ≥ 2".into()));
    }
    let (slope, intercept) = pinner_coefficients(a, prec);
    let log_l = Enclosure::from_integer(l, prec).ln();
    Ok(slope.mul(&log_l).add(&intercept))
}

/// `E(T, a) = (1 + log T)/T·(a/(8 log a) + 6) + (a/8 + 23/4)/T`, which
/// bounds `Σ_{n>T} pinner(n, a)/n²`.
pub fn e_bound(t: &Integer, a: u64, prec: u32) -> Result<Enclosure> {
    if *t < 1 {
        return Err(Error::Domain("E(T, a) needs T ≥ 1".into()));
    }
    if a < 2 {
        return Err(Error::Domain("E(T, a) needs a ≥ 2".into()));
    }
    let (slope, intercept) = pinner_coefficients(a, prec);
    let te = Enclosure::from_integer(t, prec);
    let one = Enclosure::one(prec);
    Ok(one.add(&te.ln()).mul(&slope).add(&intercept).div(&te))
}

pub fn e_bound_u64(t: u64, a: u64, prec: u32) -> Result<Enclosure> {
    e_bound(&Integer::from(t), a, prec)
}

/// `b(x) = πx log x` for `x > 0`.
pub fn b_fn(x: &Enclosure) -> Result<Enclosure> {
    if !x.is_positive() {
        return Err(Error::Domain(format!("b(x) needs x > 0, got {x}")));
    }
    Ok(Enclosure::pi(x.prec()).mul(x).mul(&x.ln()))
}


#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pinner_at_one_is_intercept() {
        let p = pinner_bound(&Integer::from(1), 7, 128).unwrap();
        assert!(p.contains_f64(7.0 / 8.0 + 23.0 / 4.0));
    }

    #[test]
    fn e_decreases_in_t() {
        let vals: Vec<f64> = [50u64, 200, 2000, 4000].iter().map(|&t| e_bound_u64(t, 7, 128).unwrap().mid_f64()).collect();
        assert!(vals.windows(2).all(|w| w[0] > w[1]), "{vals:?}");
    }

    #[test]
    fn e_matches_scalar_formula() {
        let t = 4000f64;
        let a = 7f64;
        let expect = (1.0 + t.ln()) / t * (a / (8.0 * a.ln()) + 6.0) + (a / 8.0 + 23.0 / 4.0) / t;
        let e = e_bound_u64(4000, 7, 128).unwrap();
        assert!((e.mid_f64() - expect).abs() < 1e-14);
        assert!(e.width_f64() < 1e-30);
    }

    #[test]
    fn b_vanishes_at_one_and_rejects_zero() {
        assert!(b_fn(&Enclosure::one(128)).unwrap().contains_f64(0.0));
        assert!(b_fn(&Enclosure::zero(128)).is_err());
    }

    #[test]
    fn small_digit_bounds_rejected() {
        assert!(e_bound_u64(10, 1, 64).is_err());
        assert_eq!(effective_digit_bound(1), 2);
    }
}
