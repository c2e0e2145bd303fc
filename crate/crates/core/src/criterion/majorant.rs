//! The majorant `g(ℓ, x, y)` of the Birkhoff sums `S_ℓ(β) = Σ_{n≤ℓ} 1/2 − {nβ}`
//! for `β ∈ [x, y]`, and `F(T, x, y) = Σ_{ℓ≤T} g(ℓ, x, y)/(ℓ(ℓ+1))`.
//!
//! On the grid `x = i/R`, `y = (i+1)/R` everything is integral:
//! `{nx} = r_n/R` with `r_n = ni mod R`, and `⌊nx⌋ = ⌊ny⌋` iff `r_n + n < R`.
//! Summation by parts gives `F = (1/2R)·Σ_{n≤T} d_n(1/n − 1/(T+1))` with
//! `d_n = R − 2r_n·1[r_n + n < R]`, which [`GridF`] evaluates in fixed point.

use rug::float::Round;
use rug::{Float, Integer, Rational};

use crate::error::{Error, Result};
use crate::interval::Enclosure;

fn check_xy(x: &Rational, y: &Rational) -> Result<()> {
    if *x < 0 || x >= y || *y > 1 {
        return Err(Error::Domain(format!("need 0 ≤ x < y ≤ 1, got x={x}, y={y}")));
    }
    Ok(())
}

/// `1/2 − {nx}·1[⌊nx⌋ = ⌊ny⌋]`.
fn term(n: u64, x: &Rational, y: &Rational) -> Rational {
    let nx = Rational::from(x * n);
    let ny = Rational::from(y * n);
    let fx = nx.clone().floor();
    let half = Rational::from((1, 2));
    if fx == ny.floor() {
        half - (nx - fx)
    } else {
        half
    }
}

/// `g(ℓ, x, y)`, exactly.
pub fn g_majorant(l: u64, x: &Rational, y: &Rational) -> Result<Rational> {
    check_xy(x, y)?;
    Ok((1..=l).fold(Rational::new(), |acc, n| acc + term(n, x, y)))
}

/// `F(T, x, y)`, exactly, with `g` updated incrementally.
pub fn f_exact(t: u64, x: &Rational, y: &Rational) -> Result<Rational> {
    check_xy(x, y)?;
    let mut g = Rational::new();
    let mut f = Rational::new();
    for l in 1..=t {
        g += term(l, x, y);
        f += Rational::from(&g / Integer::from(l * (l + 1)));
    }
    Ok(f)
}

/// Fixed-point evaluator of `F(T, i/R, (i+1)/R)` for many cells with the
/// same `T`; `inv[n] = ⌊2⁶³/n⌋`.
#[derive(Clone, Debug)]
pub struct GridF {
    t: u64,
    inv: Vec<i128>,
}

/// Integer data of one cell: the exact value of `2R·(T+1)·F·2⁶³` lies in
/// `(T+1)·[s_lo, s_hi] − d_sum·2⁶³`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct CellSums {
    pub s_lo: i128,
    pub s_hi: i128,
    pub d_sum: i128,
}

const ONE: i128 = 1 << 63;

impl GridF {
    pub fn new(t: u64) -> Self {
        let inv = (0..=t).map(|n| if n == 0 { 0 } else { ONE / n as i128 }).collect();
        GridF { t, inv }
    }

    pub fn t(&self) -> u64 {
        self.t
    }

    /// Sums for cell `i` of a grid with `R` cells (`i < R`).
    pub fn sums(&self, i: u64, r: u64) -> CellSums {
        debug_assert!(i < r);
        let (ii, rr) = (i as i128, r as i128);
        let mut rem: i128 = 0;
        let (mut s, mut neg, mut pos, mut dsum) = (0i128, 0i128, 0i128, 0i128);
        for n in 1..=self.t {
            rem += ii;
            if rem >= rr {
                rem -= rr;
            }
            let d = if rem + (n as i128) < rr { rr - 2 * rem } else { rr };
            s += d * self.inv[n as usize];
            dsum += d;
            if d < 0 {
                neg += d;
            } else {
                pos += d;
            }
        }
        CellSums { s_lo: s + neg, s_hi: s + pos, d_sum: dsum }
    }

    /// Certified enclosure of `F(T, i/R, (i+1)/R)`.
    pub fn enclosure(&self, i: u64, r: u64, prec: u32) -> Enclosure {
        let c = self.sums(i, r);
        let t1 = Integer::from(self.t + 1);
        let shift = Integer::from(c.d_sum) << 63u32;
        let lo = Integer::from(c.s_lo) * &t1 - &shift;
        let hi = Integer::from(c.s_hi) * &t1 - &shift;
        // divide by 2R·(T+1)·2⁶³
        let den = Integer::from(r) * 2u32 * &t1;
        let lo_f = Float::with_val_round(prec, &lo, Round::Down).0;
        let hi_f = Float::with_val_round(prec, &hi, Round::Up).0;
        let den_lo = Float::with_val_round(prec, &den, Round::Down).0;
        let den_hi = Float::with_val_round(prec, &den, Round::Up).0;
        let pick = |num: &Float, up: bool| {
            let d = if (*num >= 0) == up { &den_lo } else { &den_hi };
            let rnd = if up { Round::Up } else { Round::Down };
            Float::with_val_round(prec, num / d, rnd).0 >> 63u32
        };
        Enclosure::new(pick(&lo_f, false), pick(&hi_f, true))
    }
}

/// Exact `F(T, i/R, (i+1)/R)` through the integer form, `O(T)` rational
/// additions.
pub fn f_grid_exact(t: u64, i: u64, r: u64) -> Result<Rational> {
    if r == 0 || i >= r {
        return Err(Error::Domain(format!("cell {i} outside a grid of {r}")));
    }
    let mut rem = 0u64;
    let mut acc = Rational::new();
    let mut dsum = Integer::new();
    for n in 1..=t {
        rem = (rem + i) % r;
        let d = if rem + n < r { r as i64 - 2 * rem as i64 } else { r as i64 };
        acc += Rational::from((d, n));
        dsum += d;
    }
    acc -= Rational::from((dsum, Integer::from(t + 1)));
    Ok(acc / Integer::from(2 * r))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(p: i64, d: i64) -> Rational {
        Rational::from((p, d))
    }

    #[test]
    fn trivial_values() {
        assert_eq!(g_majorant(7, &q(0, 1), &q(1, 1)).unwrap(), q(7, 2));
        assert_eq!(g_majorant(1, &q(1, 3), &q(103, 300)).unwrap(), q(1, 6));
        assert_eq!(f_exact(0, &q(1, 3), &q(1, 2)).unwrap(), Rational::new());
        assert!(g_majorant(1, &q(1, 2), &q(1, 2)).is_err());
    }

    #[test]
    fn grid_forms_agree() {
        for (t, i, r) in [(1u64, 0u64, 1u64), (30, 7, 50), (100, 33, 100), (57, 99, 100), (200, 1234, 2000)] {
            let direct = f_exact(t, &q(i as i64, r as i64), &q(i as i64 + 1, r as i64)).unwrap();
            assert_eq!(f_grid_exact(t, i, r).unwrap(), direct, "T={t} i={i} R={r}");
            let enc = GridF::new(t).enclosure(i, r, 64);
            assert!(enc.contains_rational(&direct), "T={t} i={i} R={r}: {enc}");
            assert!(enc.width_f64() < 1e-12);
        }
    }
}
