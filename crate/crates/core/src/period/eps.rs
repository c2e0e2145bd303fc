//! Limiting perturbations `ε′_{r,k}` along a tail, their closed forms for
//! a tail truncated after one period, and the window `[L_r, U_r]` that
//! contains every admissible continuation.

use rug::float::Round;
use rug::Float;

use super::stream::DigitStream;
use crate::cf::{ContinuedFraction, QuadraticSurd};
use crate::error::{Error, Result};
use crate::interval::Enclosure;

/// `c_{r,0}, …, c_{r,ℓ}` and `α_π` for one residue. `c_{r,j}` for `j ≥ 1`
/// is the absolute weight of the `j`-th tail digit; the sign is `(−1)ʲ`.
#[derive(Clone, Debug, PartialEq)]
pub struct TailCoefficients {
    pub r: usize,
    pub c: Vec<QuadraticSurd>,
    /// `∏_{n=1}^{ℓ} α_σ[r+n]`, the same for every residue.
    pub alpha_pi: QuadraticSurd,
}

impl TailCoefficients {
    pub fn new(cf: &ContinuedFraction, r: usize) -> Result<Self> {
        let l = cf.period_len()?;
        if r >= l {
            return Err(Error::Domain(format!("residue {r} outside 0..{l}")));
        }
        let sigma = |s: usize| cf.rotation_surds(s % l).map(|(_, s)| s);
        let mut c = vec![cf.limit_constant(r)?];
        let mut prod = QuadraticSurd::one();
        for j in 1..=l {
            prod = &prod * &sigma(r + j)?;
            c.push(&cf.limit_constant((r + j) % l)? * &prod);
        }
        Ok(TailCoefficients { r, c, alpha_pi: prod })
    }

    pub fn period_len(&self) -> usize {
        self.c.len() - 1
    }

    /// `ε′_{r,k}(β_1, …, β_m)` for `m ≤ ℓ`: `k c_0 + Σ (−1)ʲ β_j c_j`.
    pub fn closed(&self, k: u64, head: &[u64]) -> Result<QuadraticSurd> {
        if head.len() > self.period_len() {
            return Err(Error::Domain(format!("closed form takes at most {} digits", self.period_len())));
        }
        let mut e = self.c[0].mul_integer(&k.into());
        for (j, &b) in head.iter().enumerate() {
            let term = self.c[j + 1].mul_integer(&b.into());
            e = if j % 2 == 0 { &e - &term } else { &e + &term };
        }
        Ok(e)
    }
}

/// `ε′_{r,k}(β_1, …, β_ℓ)` from the closed form, for `ℓ ∈ {2, 3}`; the
/// tail after the given digits is zero.
pub fn eps_prime_closed(cf: &ContinuedFraction, r: usize, k: u64, head: &[u64], prec: u32) -> Result<Enclosure> {
    let l = cf.period_len()?;
    if !(2..=3).contains(&l) {
        return Err(Error::UnsupportedPeriod(l));
    }
    Ok(TailCoefficients::new(cf, r)?.closed(k, head)?.to_enclosure(prec))
}

/// `(L_r, U_r)` bounding `ε′_{r,k}(tail) − ε′_{r,k}(first ℓ digits)` over
/// admissible tails, with every later digit bounded by the largest period
/// digit.
pub fn perturbation_window(cf: &ContinuedFraction, r: usize) -> Result<(QuadraticSurd, QuadraticSurd)> {
    let l = cf.period_len()?;
    if !(2..=3).contains(&l) {
        return Err(Error::UnsupportedPeriod(l));
    }
    window_from(&TailCoefficients::new(cf, r)?, cf.period_max()?)
}

/// Positions `j = j′ + mℓ`, `m ≥ 1`, carry `c_{j′}·α_π^m` with sign
/// `(−1)^{j′+mℓ}`; summing the positive and negative parts separately gives
/// the window.
pub(crate) fn window_from(tc: &TailCoefficients, a: u64) -> Result<(QuadraticSurd, QuadraticSurd)> {
    let l = tc.period_len();
    let ap = &tc.alpha_pi;
    let one = QuadraticSurd::one();
    let (mut lo, mut hi) = (QuadraticSurd::zero(), QuadraticSurd::zero());
    for jp in 1..=l {
        let c = &tc.c[jp];
        if l % 2 == 0 {
            let s = &(c * ap) * &(&one - ap).recip();
            if jp % 2 == 0 {
                hi = &hi + &s;
            } else {
                lo = &lo - &s;
            }
        } else {
            // m of the parity of j′ gives a positive sign
            let den = (&one - &(ap * ap)).recip();
            let odd_m = &(c * ap) * &den;
            let even_m = &(&(c * ap) * ap) * &den;
            let (pos, neg) = if jp % 2 == 1 { (odd_m, even_m) } else { (even_m, odd_m) };
            hi = &hi + &pos;
            lo = &lo - &neg;
        }
    }
    let a = a.into();
    Ok((lo.mul_integer(&a), hi.mul_integer(&a)))
}

/// `ε′_{r,k}` along a finite tail `(β_1, …, β_m, 0, 0, …)`, exactly.
pub fn eps_prime_exact(cf: &ContinuedFraction, r: usize, k: u64, tail: &[u64]) -> Result<QuadraticSurd> {
    let tc = TailCoefficients::new(cf, r)?;
    let l = tc.period_len();
    let mut e = tc.c[0].mul_integer(&k.into());
    let mut scale = QuadraticSurd::one();
    for (idx, &b) in tail.iter().enumerate() {
        let j = idx + 1;
        let jp = (j - 1) % l + 1;
        if jp == 1 && j > 1 {
            scale = &scale * &tc.alpha_pi;
        }
        if b == 0 {
            continue;
        }
        let term = (&tc.c[jp] * &scale).mul_integer(&b.into());
        e = if j % 2 == 1 { &e - &term } else { &e + &term };
    }
    Ok(e)
}

/// `ε′_{r,k}(tail) = kC(r) + Σ_{j≥1} (−1)ʲ β_j C([r+j]) ∏_{n≤j} α_σ[r+n]`,
/// summed to `J` terms with the remainder bounded by
/// `B·c_max·ρ^{J+1}/(1 − ρ)`, `ρ = max α_σ`. A tail with support inside the
/// first `J` digits gives no remainder.
pub fn eps_prime(cf: &ContinuedFraction, r: usize, k: u64, tail: &DigitStream, j_max: usize, prec: u32) -> Result<Enclosure> {
    let l = cf.period_len()?;
    let tc = TailCoefficients::new(cf, r)?;
    let w = prec + 32;
    let coef: Vec<Enclosure> = tc.c.iter().map(|c| c.to_enclosure(w)).collect();
    let ap = tc.alpha_pi.to_enclosure(w);
    let mut acc = coef[0].mul_i64(k as i64);
    let mut scale = Enclosure::one(w);
    let terms = tail.support().map_or(j_max, |s| s.min(j_max));
    for j in 1..=terms {
        let jp = (j - 1) % l + 1;
        if jp == 1 && j > 1 {
            scale = scale.mul(&ap);
        }
        let b = tail.get(j);
        if b == 0 {
            continue;
        }
        let term = coef[jp].mul(&scale).mul_i64(b as i64);
        acc = if j % 2 == 1 { acc.sub(&term) } else { acc.add(&term) };
    }
    if tail.support().map_or(true, |s| s > j_max) {
        acc = acc.widen(&remainder(cf, tail.bound(), j_max, w)?);
    }
    Ok(acc.with_prec(prec))
}

/// Upper bound on `Σ_{j>J} B·C([r+j])·∏_{n≤j} α_σ[r+n]`.
fn remainder(cf: &ContinuedFraction, bound: u64, j_max: usize, w: u32) -> Result<Float> {
    let l = cf.period_len()?;
    let mut rho = Enclosure::zero(w);
    let mut c_max = Enclosure::zero(w);
    for s in 0..l {
        let (_, sigma) = cf.rotation_surds(s)?;
        let sg = sigma.to_enclosure(w);
        if sg.hi() > rho.hi() {
            rho = sg;
        }
        let c = cf.limit_constant(s)?.to_enclosure(w);
        if c.hi() > c_max.hi() {
            c_max = c;
        }
    }
    let one = Enclosure::one(w);
    let mut pow = one.clone();
    for _ in 0..=j_max {
        pow = pow.mul(&rho);
    }
    let r = c_max.mul(&pow).mul_i64(bound as i64).div(&one.sub(&rho));
    Ok(Float::with_val_round(w, r.hi(), Round::Up).0)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cf(s: &str) -> ContinuedFraction {
        s.parse().unwrap()
    }

    #[test]
    fn zero_tail_gives_k_c() {
        let a = cf("[0;(5,4)]");
        let e = eps_prime(&a, 1, 2, &DigitStream::zeros(), 50, 128).unwrap();
        let c = a.limit_constant(1).unwrap().mul_integer(&2.into());
        assert!(e.contains(&c.to_enclosure(128)));
    }

    #[test]
    fn closed_form_matches_series() {
        let a = cf("[0;(6,5,5)]");
        for r in 0..3 {
            let tc = TailCoefficients::new(&a, r).unwrap();
            let head = [2, 1, 3];
            let closed = tc.closed(1, &head).unwrap();
            assert_eq!(closed, eps_prime_exact(&a, r, 1, &head).unwrap());
            let e = eps_prime(&a, r, 1, &DigitStream::finite(&head), 10, 128).unwrap();
            assert!(e.contains(&closed.to_enclosure(128)));
        }
    }

    #[test]
    fn window_brackets_zero() {
        for s in ["[0;(5,4)]", "[0;(6,5,5)]"] {
            let a = cf(s);
            for r in 0..a.period_len().unwrap() {
                let (lo, hi) = perturbation_window(&a, r).unwrap();
                assert!(lo.signum() < 0 && hi.signum() > 0);
            }
        }
        assert_eq!(perturbation_window(&cf("[0;(2)]"), 0), Err(Error::UnsupportedPeriod(1)));
    }
}
