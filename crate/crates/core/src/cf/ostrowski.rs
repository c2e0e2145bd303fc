//! Ostrowski numeration `N = Σ b_ℓ q_ℓ` attached to a continued fraction.

use rug::Integer;
use serde::Serialize;

use super::ContinuedFraction;
use crate::error::{Error, Result};

/// Digits `(b_0, …, b_n)` with `b_n ≥ 1` (or the single digit 0 for N = 0).
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct OstrowskiDigits {
    digits: Vec<u64>,
}

impl OstrowskiDigits {
    pub fn new(digits: Vec<u64>) -> Self {
        OstrowskiDigits { digits }
    }

    pub fn digits(&self) -> &[u64] {
        &self.digits
    }

    /// Top index `n`.
    pub fn top(&self) -> usize {
        self.digits.len() - 1
    }

    pub fn get(&self, i: usize) -> u64 {
        self.digits.get(i).copied().unwrap_or(0)
    }

    /// `Σ b_ℓ q_ℓ`.
    pub fn value(&self, cf: &ContinuedFraction) -> Result<Integer> {
        let c = cf.convergents(self.top())?;
        Ok(self.digits.iter().enumerate().map(|(i, &b)| Integer::from(c.q(i) * b)).sum())
    }

    /// The legality rules: `b_0 < a_1`, `b_ℓ ≤ a_{ℓ+1}`, and `b_{ℓ−1} = 0`
    /// whenever `b_ℓ = a_{ℓ+1}`.
    pub fn is_legal(&self, cf: &ContinuedFraction) -> bool {
        for (l, &b) in self.digits.iter().enumerate() {
            let a = match cf.digit(l + 1) {
                Some(a) => a,
                None => return b == 0,
            };
            if l == 0 && b >= a {
                return false;
            }
            if b > a {
                return false;
            }
            if l > 0 && b == a && self.digits[l - 1] != 0 {
                return false;
            }
        }
        true
    }
}

/// Greedy expansion from the largest `q_n ≤ N` downward.
pub fn ostrowski(cf: &ContinuedFraction, n: &Integer) -> Result<OstrowskiDigits> {
    if *n < 0 {
        return Err(Error::Domain("N must be non-negative".into()));
    }
    if *n == 0 {
        return Ok(OstrowskiDigits { digits: vec![0] });
    }
    let conv = cf.convergents_past(n)?;
    let qs = conv.qs();
    if let Some(len) = cf.finite_len() {
        if qs[len] <= *n {
            return Err(Error::Domain(format!("N = {n} must be below the denominator {}", qs[len])));
        }
    }
    let top = (0..qs.len()).rev().find(|&i| qs[i] <= *n).unwrap();
    let mut digits = vec![0u64; top + 1];
    let mut rest = n.clone();
    for i in (0..=top).rev() {
        if i == 0 && top >= 1 && qs[1] == 1 {
            // a_1 = 1 makes q_0 = q_1; level 1 absorbs everything
            break;
        }
        let (b, r) = rest.div_rem_floor(qs[i].clone());
        digits[i] = b.to_u64().expect("digit fits");
        rest = r;
    }
    debug_assert_eq!(rest, 0);
    let d = OstrowskiDigits { digits };
    debug_assert!(d.is_legal(cf), "greedy expansion violated legality");
    Ok(d)
}

/// Whether `(β_1, …, β_j)` can occur as `(b_{i−1}, …, b_{i+j−2})` for some `N`
/// and some large `i` of residue `r`.
pub fn is_admissible(tuple: &[u64], r: usize, cf: &ContinuedFraction) -> bool {
    let l = match cf.period_len() {
        Ok(l) => l,
        Err(_) => return false,
    };
    if r >= l {
        return false;
    }
    // a representative index of residue r past the preperiod and level 0
    let p = cf.preperiod().len();
    let i = p + 2 * l + r;
    for (t, &beta) in tuple.iter().enumerate() {
        let bound = cf.digit(i + t).unwrap();
        if beta > bound {
            return false;
        }
        if t > 0 && beta == bound && tuple[t - 1] != 0 {
            return false;
        }
    }
    true
}
