//! Continued fractions: finite, eventually periodic, and bounded streams.
//!
//! Indices follow the usual convention: `α = [a_0; a_1, a_2, …]`,
//! convergents `p_k/q_k` with `q_0 = 1`, `q_1 = a_1`, and
//! `δ_k = ‖q_k α‖`. For periodic expansions the residue of an index `k` is
//! `(k − p) mod ℓ`, where `p` is the preperiod length and `ℓ` the period.

mod ostrowski;
mod parse;
mod surd;

use std::fmt;
use std::sync::Arc;

use rug::{Integer, Rational};

use crate::error::{Error, Result};
use crate::interval::Enclosure;
use crate::real::Real;

pub use ostrowski::{is_admissible, ostrowski, OstrowskiDigits};
pub use surd::{square_free_part, QuadraticSurd};

/// A digit generator for non-periodic badly approximable numbers.
#[derive(Clone)]
pub struct DigitSource {
    generator: Arc<dyn Fn(usize) -> u64 + Send + Sync>,
    bound: u64,
}

#[derive(Clone)]
enum Tail {
    Finite,
    Periodic(Vec<u64>),
    Stream(DigitSource),
}

#[derive(Clone)]
pub struct ContinuedFraction {
    a0: i64,
    pre: Vec<u64>,
    tail: Tail,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CfKind {
    Finite,
    Periodic,
    Stream,
}

impl ContinuedFraction {
    /// `[a0; digits]`, normalised so that the last digit exceeds 1.
    pub fn finite(a0: i64, digits: Vec<u64>) -> Result<Self> {
        check_digits(&digits)?;
        let mut a0 = a0;
        let mut digits = digits;
        if digits.last() == Some(&1) {
            digits.pop();
            match digits.last_mut() {
                Some(x) => *x += 1,
                None => a0 += 1,
            }
        }
        Ok(ContinuedFraction { a0, pre: digits, tail: Tail::Finite })
    }

    /// `[a0; pre, (period)]` with minimal period and preperiod.
    pub fn periodic(a0: i64, pre: Vec<u64>, period: Vec<u64>) -> Result<Self> {
        check_digits(&pre)?;
        check_digits(&period)?;
        if period.is_empty() {
            return Self::finite(a0, pre);
        }
        let mut period = minimal_period(period);
        let mut pre = pre;
        while let Some(&last) = pre.last() {
            if last != *period.last().unwrap() {
                break;
            }
            pre.pop();
            period.rotate_right(1);
        }
        Ok(ContinuedFraction { a0, pre, tail: Tail::Periodic(period) })
    }

    /// A non-periodic expansion whose digits `a_k = generator(k)` (k ≥ 1)
    /// never exceed `bound`.
    pub fn stream(a0: i64, bound: u64, generator: impl Fn(usize) -> u64 + Send + Sync + 'static) -> Self {
        ContinuedFraction { a0, pre: Vec::new(), tail: Tail::Stream(DigitSource { generator: Arc::new(generator), bound }) }
    }

    pub fn from_rational(x: &Rational) -> Self {
        let mut num = x.numer().clone();
        let mut den = x.denom().clone();
        let (q, r) = num.clone().div_rem_floor(den.clone());
        let a0 = q.to_i64().expect("integer part out of range");
        num = r;
        let mut digits = Vec::new();
        while num != 0 {
            let (q, r) = den.clone().div_rem_floor(num.clone());
            digits.push(q.to_u64().expect("partial quotient out of range"));
            den = num;
            num = r;
        }
        Self::finite(a0, digits).expect("digits from the Euclidean algorithm are valid")
    }

    /// Purely periodic `[0; (period)]`.
    pub fn pure(period: &[u64]) -> Result<Self> {
        Self::periodic(0, Vec::new(), period.to_vec())
    }

    pub fn kind(&self) -> CfKind {
        match self.tail {
            Tail::Finite => CfKind::Finite,
            Tail::Periodic(_) => CfKind::Periodic,
            Tail::Stream(_) => CfKind::Stream,
        }
    }

    pub fn a0(&self) -> i64 {
        self.a0
    }

    pub fn preperiod(&self) -> &[u64] {
        &self.pre
    }

    /// The period, empty for finite and stream expansions.
    pub fn period(&self) -> &[u64] {
        match &self.tail {
            Tail::Periodic(p) => p,
            _ => &[],
        }
    }

    pub fn is_periodic(&self) -> bool {
        matches!(self.tail, Tail::Periodic(_))
    }

    pub fn period_len(&self) -> Result<usize> {
        match &self.tail {
            Tail::Periodic(p) => Ok(p.len()),
            _ => Err(Error::NotPeriodic),
        }
    }

    /// Number of partial quotients after `a_0` for finite expansions.
    pub fn finite_len(&self) -> Option<usize> {
        matches!(self.tail, Tail::Finite).then_some(self.pre.len())
    }

    /// `a_k` for `k ≥ 1`; `None` past the end of a finite expansion.
    pub fn digit(&self, k: usize) -> Option<u64> {
        assert!(k >= 1, "a_0 is not a partial quotient; use a0()");
        if k <= self.pre.len() {
            return Some(self.pre[k - 1]);
        }
        match &self.tail {
            Tail::Finite => None,
            Tail::Periodic(p) => Some(p[(k - self.pre.len() - 1) % p.len()]),
            Tail::Stream(s) => Some((s.generator)(k)),
        }
    }

    /// Period digit with arbitrary integer index, `per(s) = a_{p+s}` read
    /// cyclically (so `per(0) = per(ℓ)`).
    pub fn period_digit(&self, s: i64) -> Result<u64> {
        match &self.tail {
            Tail::Periodic(p) => Ok(p[(s - 1).rem_euclid(p.len() as i64) as usize]),
            _ => Err(Error::NotPeriodic),
        }
    }

    /// Residue class of index `k` within the period.
    pub fn residue(&self, k: usize) -> Result<usize> {
        let l = self.period_len()?;
        Ok((k as i64 - self.pre.len() as i64).rem_euclid(l as i64) as usize)
    }

    /// Largest period digit, the `a_K` of the limit-function estimates.
    pub fn period_max(&self) -> Result<u64> {
        self.period().iter().copied().max().ok_or(Error::NotPeriodic)
    }

    /// Upper bound on every partial quotient `a_k`, `k ≥ 1`.
    pub fn digit_bound(&self) -> u64 {
        let pre = self.pre.iter().copied().max().unwrap_or(1);
        match &self.tail {
            Tail::Finite => pre,
            Tail::Periodic(p) => pre.max(*p.iter().max().unwrap()),
            Tail::Stream(s) => pre.max(s.bound),
        }
    }

    /// `max(a_1, …, a_k)`.
    pub fn max_digit_upto(&self, k: usize) -> u64 {
        match &self.tail {
            Tail::Periodic(_) if k > self.pre.len() + self.period().len() => self.digit_bound(),
            _ => (1..=k).filter_map(|i| self.digit(i)).max().unwrap_or(1),
        }
    }

    /// Exact value for finite and periodic expansions.
    pub fn exact_value(&self) -> Option<QuadraticSurd> {
        match &self.tail {
            Tail::Finite => {
                let c = self.convergents(self.pre.len()).expect("within expansion");
                Some(QuadraticSurd::from_rational(&Rational::from((c.p(self.pre.len()).clone(), c.q(self.pre.len()).clone()))))
            }
            Tail::Periodic(_) => Some(surd_from_periodic_cf(self).expect("periodic")),
            Tail::Stream(_) => None,
        }
    }

    /// The value as an exact number or, for streams, an enclosure.
    pub fn value(&self, prec: u32) -> Real {
        match self.exact_value() {
            Some(x) => Real::Exact(x),
            None => {
                // α lies between consecutive convergents; take enough digits
                let mut k = 2;
                loop {
                    let c = self.convergents(k + 1).expect("streams are infinite");
                    let lo = Rational::from((c.p(k).clone(), c.q(k).clone()));
                    let hi = Rational::from((c.p(k + 1).clone(), c.q(k + 1).clone()));
                    let (lo, hi) = if lo < hi { (lo, hi) } else { (hi, lo) };
                    if c.q(k).significant_bits() > prec + 8 {
                        let a = Enclosure::from_rational(&lo, prec);
                        let b = Enclosure::from_rational(&hi, prec);
                        return Real::Interval(a.hull(&b));
                    }
                    k += 8;
                }
            }
        }
    }

    /// Convergents `(p_i, q_i)` for `0 ≤ i ≤ k`.
    pub fn convergents(&self, k: usize) -> Result<Convergents> {
        if let Some(n) = self.finite_len() {
            if k > n {
                return Err(Error::IndexBeyondExpansion { requested: k, available: n });
            }
        }
        let mut p = Vec::with_capacity(k + 1);
        let mut q = Vec::with_capacity(k + 1);
        p.push(Integer::from(self.a0));
        q.push(Integer::from(1));
        let (mut pm, mut qm) = (Integer::from(1), Integer::new());
        for i in 1..=k {
            let a = self.digit(i).unwrap();
            let pn = Integer::from(&p[i - 1] * a) + &pm;
            let qn = Integer::from(&q[i - 1] * a) + &qm;
            pm = p[i - 1].clone();
            qm = q[i - 1].clone();
            p.push(pn);
            q.push(qn);
        }
        Ok(Convergents { p, q })
    }

    /// Convergents up to the first index `k` with `q_k > bound` (inclusive).
    pub fn convergents_past(&self, bound: &Integer) -> Result<Convergents> {
        let mut k = 8;
        loop {
            let lim = self.finite_len().map_or(k, |n| k.min(n));
            let c = self.convergents(lim)?;
            if c.q(lim) > bound || Some(lim) == self.finite_len() {
                return Ok(c);
            }
            k *= 2;
        }
    }

    /// Forward tail `→α_k = [0; a_k, a_{k+1}, …]` for `k ≥ 1`.
    pub fn forward_tail(&self, k: usize, prec: u32) -> Real {
        assert!(k >= 1);
        match &self.tail {
            Tail::Finite => {
                let n = self.pre.len();
                if k > n {
                    return Real::Exact(QuadraticSurd::zero());
                }
                let cf = ContinuedFraction::finite(0, self.pre[k - 1..].to_vec()).unwrap();
                Real::Exact(cf.exact_value().unwrap())
            }
            Tail::Periodic(period) => {
                let p = self.pre.len();
                let cf = if k <= p {
                    ContinuedFraction::periodic(0, self.pre[k - 1..].to_vec(), period.clone()).unwrap()
                } else {
                    let shift = (k - p - 1) % period.len();
                    let mut rot = period.clone();
                    rot.rotate_left(shift);
                    ContinuedFraction::periodic(0, Vec::new(), rot).unwrap()
                };
                Real::Exact(surd_from_periodic_cf(&cf).unwrap())
            }
            Tail::Stream(_) => {
                // [0; a_k, …, a_{k+D−1} + t], t ∈ [0, 1], is monotone in t
                let depth = (prec as usize) / 2 + 8;
                let digits: Vec<u64> = (k..k + depth).map(|i| self.digit(i).unwrap()).collect();
                let lo_cf = eval_finite(&digits, 0);
                let hi_cf = eval_finite(&digits, 1);
                let a = Enclosure::from_rational(&lo_cf, prec);
                let b = Enclosure::from_rational(&hi_cf, prec);
                Real::Interval(a.hull(&b))
            }
        }
    }

    /// Backward ratio `←α_k = q_{k−1}/q_k` (with `q_{−1} = 0`).
    pub fn backward_ratio(&self, k: usize) -> Result<Rational> {
        if k == 0 {
            return Ok(Rational::new());
        }
        let c = self.convergents(k)?;
        Ok(Rational::from((c.q(k - 1).clone(), c.q(k).clone())))
    }

    /// `q_k δ_k = 1/(a_{k+1} + →α_{k+2} + ←α_k)`, exact when possible.
    pub fn q_delta(&self, k: usize, prec: u32) -> Result<Real> {
        if let Some(n) = self.finite_len() {
            if k > n {
                return Err(Error::IndexBeyondExpansion { requested: k, available: n });
            }
            if k == n {
                return Ok(Real::Exact(QuadraticSurd::zero()));
            }
        }
        let a = self.digit(k + 1).unwrap();
        let back = QuadraticSurd::from_rational(&self.backward_ratio(k)?);
        let fwd = self.forward_tail(k + 2, prec);
        let base = &QuadraticSurd::from_integer(a) + &back;
        Ok(match fwd {
            Real::Exact(f) => Real::Exact((&base + &f).recip()),
            Real::Interval(f) => Real::Interval(base.to_enclosure(prec + 16).add(&f).recip().with_prec(prec)),
        })
    }

    /// `δ_k = ‖q_k α‖`, exact for finite and periodic expansions.
    pub fn delta(&self, k: usize, prec: u32) -> Result<Real> {
        let qd = self.q_delta(k, prec)?;
        let c = self.convergents(k)?;
        let qk = c.q(k).clone();
        Ok(match qd {
            Real::Exact(x) => Real::Exact(x.div_integer(&qk)),
            Real::Interval(e) => Real::Interval(e.div(&Enclosure::from_integer(&qk, e.prec()))),
        })
    }

    /// `(α_τr, α_σr)`: forward and backward rotations of the period at
    /// residue `r`, the limits of `→α_{k+1}` and `←α_k = q_{k−1}/q_k` along
    /// `k ≡ r`.
    pub fn rotation_surds(&self, r: usize) -> Result<(QuadraticSurd, QuadraticSurd)> {
        let l = self.period_len()?;
        if r >= l {
            return Err(Error::Domain(format!("residue {r} outside 0..{l}")));
        }
        let r = r as i64;
        let l = l as i64;
        let tau: Vec<u64> = (1..=l).map(|j| self.period_digit(r + j).unwrap()).collect();
        let sigma: Vec<u64> = (0..l).map(|j| self.period_digit(r - j).unwrap()).collect();
        let t = surd_from_periodic_cf(&ContinuedFraction::pure(&tau)?)?;
        let s = surd_from_periodic_cf(&ContinuedFraction::pure(&sigma)?)?;
        Ok((t, s))
    }

    /// `C(r) = lim q_k δ_k` along `k ≡ r`, i.e.
    /// `1/(a_{r+1} + α_τ[r+1] + α_σr)`.
    pub fn limit_constant(&self, r: usize) -> Result<QuadraticSurd> {
        let l = self.period_len()?;
        let (_, sigma) = self.rotation_surds(r)?;
        let (tau_next, _) = self.rotation_surds((r + 1) % l)?;
        let a = QuadraticSurd::from_integer(self.period_digit(r as i64 + 1)?);
        Ok((&(&a + &tau_next) + &sigma).recip())
    }
}

fn check_digits(d: &[u64]) -> Result<()> {
    if d.iter().any(|&x| x == 0) {
        return Err(Error::Parse("partial quotients must be ≥ 1".into()));
    }
    Ok(())
}

fn minimal_period(period: Vec<u64>) -> Vec<u64> {
    let l = period.len();
    for d in 1..l {
        if l % d == 0 && (0..l).all(|i| period[i] == period[i % d]) {
            return period[..d].to_vec();
        }
    }
    period
}

/// `[0; digits…, last + t]` for `t ∈ {0, 1}` as a rational.
fn eval_finite(digits: &[u64], t: u64) -> Rational {
    let mut x = Rational::from(digits[digits.len() - 1] + t);
    for &a in digits[..digits.len() - 1].iter().rev() {
        x = Rational::from(a) + x.recip();
    }
    x.recip()
}

#[derive(Clone, Debug)]
pub struct Convergents {
    p: Vec<Integer>,
    q: Vec<Integer>,
}

impl Convergents {
    pub fn p(&self, k: usize) -> &Integer {
        &self.p[k]
    }

    pub fn q(&self, k: usize) -> &Integer {
        &self.q[k]
    }

    /// Number of stored convergents (`k + 1`).
    pub fn len(&self) -> usize {
        self.q.len()
    }

    pub fn is_empty(&self) -> bool {
        self.q.is_empty()
    }

    pub fn qs(&self) -> &[Integer] {
        &self.q
    }

    pub fn ps(&self) -> &[Integer] {
        &self.p
    }

    /// `p_{k+1} q_k − p_k q_{k+1}`.
    pub fn determinant(&self, k: usize) -> Integer {
        Integer::from(&self.p[k + 1] * &self.q[k]) - Integer::from(&self.p[k] * &self.q[k + 1])
    }
}

/// Exact value of an eventually periodic expansion.
pub fn surd_from_periodic_cf(cf: &ContinuedFraction) -> Result<QuadraticSurd> {
    let period = match &cf.tail {
        Tail::Periodic(p) => p,
        _ => return Err(Error::NotPeriodic),
    };
    // y = [b_1; b_2, …, b_l, y] solves Q_l y² + (Q_{l−1} − P_l) y − P_{l−1} = 0
    let (mut pp, mut p) = (Integer::from(1), Integer::from(period[0]));
    let (mut qp, mut q) = (Integer::new(), Integer::from(1));
    for &b in &period[1..] {
        let np = Integer::from(&p * b) + &pp;
        let nq = Integer::from(&q * b) + &qp;
        pp = std::mem::replace(&mut p, np);
        qp = std::mem::replace(&mut q, nq);
    }
    let lin = Integer::from(&qp - &p);
    let disc = Integer::from(lin.square_ref()) + Integer::from(&q * &pp) * 4u32;
    let y = QuadraticSurd::new(Integer::from(-&lin), Integer::from(1), disc, Integer::from(&q * 2u32))?;
    // α = (P y + P')/(Q y + Q') for the convergents of [a_0; pre]
    let (mut mp, mut mpp) = (Integer::from(cf.a0), Integer::from(1));
    let (mut mq, mut mqp) = (Integer::from(1), Integer::new());
    for &a in &cf.pre {
        let np = Integer::from(&mp * a) + &mpp;
        let nq = Integer::from(&mq * a) + &mqp;
        mpp = std::mem::replace(&mut mp, np);
        mqp = std::mem::replace(&mut mq, nq);
    }
    Ok(y.mobius(&mp, &mpp, &mq, &mqp))
}

/// First `n` partial quotients of an irrational surd, with `a_0`.
pub fn cf_from_surd(x: &QuadraticSurd, n: usize) -> Result<(Integer, Vec<u64>)> {
    if x.is_rational() {
        return Err(Error::FiniteExpansion);
    }
    let a0 = x.floor();
    let mut y = x.fract();
    let mut digits = Vec::with_capacity(n);
    for _ in 0..n {
        let z = y.recip();
        let a = z.floor();
        digits.push(a.to_u64().ok_or_else(|| Error::Domain("partial quotient too large".into()))?);
        y = z.fract();
    }
    Ok((a0, digits))
}

/// Gauss map `T(x) = {1/x}` on `[0, 1]`, with `T(0) = 0`.
pub fn gauss_map(x: &QuadraticSurd) -> Result<QuadraticSurd> {
    if x.signum() < 0 || *x > QuadraticSurd::one() {
        return Err(Error::Domain(format!("Gauss map needs 0 ≤ x ≤ 1, got {x}")));
    }
    if x.is_zero() {
        return Ok(QuadraticSurd::zero());
    }
    Ok(x.recip().fract())
}

impl fmt::Display for ContinuedFraction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let join = |d: &[u64]| d.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(",");
        write!(f, "[{}", self.a0)?;
        let mut parts = Vec::new();
        if !self.pre.is_empty() {
            parts.push(join(&self.pre));
        }
        match &self.tail {
            Tail::Finite => {}
            Tail::Periodic(p) => parts.push(format!("({})", join(p))),
            Tail::Stream(s) => parts.push(format!("…≤{}", s.bound)),
        }
        if !parts.is_empty() {
            write!(f, ";{}", parts.join(","))?;
        }
        write!(f, "]")
    }
}

impl fmt::Debug for ContinuedFraction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "ContinuedFraction({self})")
    }
}

impl PartialEq for ContinuedFraction {
    fn eq(&self, other: &Self) -> bool {
        match (&self.tail, &other.tail) {
            (Tail::Finite, Tail::Finite) => self.a0 == other.a0 && self.pre == other.pre,
            (Tail::Periodic(a), Tail::Periodic(b)) => self.a0 == other.a0 && self.pre == other.pre && a == b,
            _ => false,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cf(s: &str) -> ContinuedFraction {
        s.parse().unwrap()
    }

    #[test]
    fn fibonacci_denominators() {
        let c = cf("[0;(1)]").convergents(4).unwrap();
        let q: Vec<u64> = c.qs().iter().map(|x| x.to_u64().unwrap()).collect();
        assert_eq!(q, vec![1, 1, 2, 3, 5]);
    }

    #[test]
    fn denominators_for_five_four() {
        let c = cf("[0;(5,4)]").convergents(4).unwrap();
        let q: Vec<u64> = c.qs().iter().map(|x| x.to_u64().unwrap()).collect();
        assert_eq!(q, vec![1, 5, 21, 110, 461]);
    }

    #[test]
    fn seed_convergent() {
        let c = cf("[3;(1,2)]").convergents(0).unwrap();
        assert_eq!((c.p(0).clone(), c.q(0).clone()), (Integer::from(3), Integer::from(1)));
    }

    #[test]
    fn finite_expansion_index_error() {
        let x = cf("[0;2,3]");
        assert!(matches!(x.convergents(3), Err(Error::IndexBeyondExpansion { .. })));
    }

    #[test]
    fn period_is_minimised_and_preperiod_folded() {
        assert_eq!(cf("[0;(6,5,6,5)]").period(), &[6, 5]);
        let x = cf("[0;5,(4,5)]");
        assert!(x.preperiod().is_empty());
        assert_eq!(x.period(), &[5, 4]);
        assert_eq!(cf("[0;2,1]"), cf("[0;3]"));
    }

    #[test]
    fn golden_surd() {
        let x = surd_from_periodic_cf(&cf("[0;(1)]")).unwrap();
        let expect = QuadraticSurd::new(Integer::from(-1), Integer::from(1), Integer::from(5), Integer::from(2)).unwrap();
        assert_eq!(x, expect);
    }

    #[test]
    fn five_four_surd() {
        // solve 5x² + 20x − 4 = 0: x = (2√30 − 10)/5
        let x = surd_from_periodic_cf(&cf("[0;(5,4)]")).unwrap();
        let expect = QuadraticSurd::new(Integer::from(-10), Integer::from(2), Integer::from(30), Integer::from(5)).unwrap();
        assert_eq!(x, expect);
        let (_, d) = cf_from_surd(&x, 6).unwrap();
        assert_eq!(d, vec![5, 4, 5, 4, 5, 4]);
    }

    #[test]
    fn gauss_map_shifts_digits() {
        let x = cf("[0;(5,4)]").exact_value().unwrap();
        let y = cf("[0;(4,5)]").exact_value().unwrap();
        assert_eq!(gauss_map(&x).unwrap(), y);
        let g = cf("[0;(1)]").exact_value().unwrap();
        assert_eq!(gauss_map(&g).unwrap(), g);
        assert!(gauss_map(&QuadraticSurd::zero()).unwrap().is_zero());
        assert!(gauss_map(&QuadraticSurd::from_integer(2)).is_err());
    }

    #[test]
    fn rational_rejected_by_cf_from_surd() {
        assert_eq!(cf_from_surd(&QuadraticSurd::from_integer(3), 2), Err(Error::FiniteExpansion));
    }

    #[test]
    fn golden_limit_constant() {
        // 1/(1 + 2φ) with φ = (√5 − 1)/2 is 1/√5
        let c = cf("[0;(1)]").limit_constant(0).unwrap();
        let expect = QuadraticSurd::new(Integer::new(), Integer::from(1), Integer::from(5), Integer::from(5)).unwrap();
        assert_eq!(c, expect);
    }

    #[test]
    fn single_digit_rotations_coincide() {
        let x = cf("[0;(7)]");
        let (t, s) = x.rotation_surds(0).unwrap();
        assert_eq!(t, s);
        assert_eq!(t, x.exact_value().unwrap());
    }

    #[test]
    fn rotation_digits_for_five_four() {
        let x = cf("[0;(5,4)]");
        let (t, s) = x.rotation_surds(1).unwrap();
        assert_eq!(t, cf("[0;(4,5)]").exact_value().unwrap());
        assert_eq!(s, cf("[0;(5,4)]").exact_value().unwrap());
        let (t0, s0) = x.rotation_surds(0).unwrap();
        assert_eq!(t0, cf("[0;(5,4)]").exact_value().unwrap());
        assert_eq!(s0, cf("[0;(4,5)]").exact_value().unwrap());
    }

    #[test]
    fn delta_of_rational_last_index_is_zero() {
        let x = ContinuedFraction::from_rational(&Rational::from((7, 19)));
        let n = x.finite_len().unwrap();
        assert!(matches!(x.delta(n, 64).unwrap(), Real::Exact(z) if z.is_zero()));
    }
}
