//! `P_{q_k}(α, ε)` for large `q_k`, by pairing the factors `n` and `q − n`.
//!
//! Write `α = p/q + (−1)^k δ/q` and `s = (−1)^k(δ/2 + ε/q)`. Reordering the
//! factors by `rp mod q` gives
//!
//! ```text
//! P = q·f(δ + ε/q)·∏_{0<n<q/2} |f²(n/q + t_n) − f²(s)| / f²(n/q) · [q even: |cos πs|]
//! ```
//!
//! with `f(x) = 2|sin πx|`, `t_n = (−1)^k c_n δ` and `c_n = r_n/q − 1/2`,
//! `r_n ≡ n p⁻¹ (mod q)`. The first `T` factors are evaluated; the rest
//! are bounded through Abel summation of `Σ c_n cot(πn/q)` against Pinner's
//! discrepancy bound.

use rug::{Integer, Rational};

use crate::cf::ContinuedFraction;
use crate::criterion::{e_bound, effective_digit_bound, pinner_bound};
use crate::error::{Error, Result};
use crate::interval::Enclosure;
use crate::real::Real;

/// A perturbed product split into an exactly evaluated head and a
/// certified tail.
#[derive(Clone, Debug)]
pub struct PairedValue {
    pub enclosure: Enclosure,
    /// Head product times the boundary term of the tail; not certified.
    pub estimate: f64,
    /// Number of pairs evaluated exactly.
    pub head: u64,
    /// Total number of pairs `⌈q/2⌉ − 1`.
    pub pairs: Integer,
}

pub fn paired_product(cf: &ContinuedFraction, k: usize, eps: &Real, head: u64, prec: u32) -> Result<PairedValue> {
    let w = prec + 32;
    let conv = cf.convergents(k)?;
    let q = conv.q(k).clone();
    let p = conv.p(k).clone();
    if q < 3 {
        return Err(Error::Domain("paired evaluation needs q ≥ 3".into()));
    }
    let theta: i64 = if k % 2 == 0 { 1 } else { -1 };
    let delta = cf.delta(k, w)?.to_enclosure(w);
    let eps_e = eps.to_enclosure(w);
    let q_e = Enclosure::from_integer(&q, w);
    let eps_q = eps_e.div(&q_e);
    let s = delta.mul_rational(&Rational::from((1, 2))).add(&eps_q).mul_i64(theta);
    let sin_s2 = s.sin_pi().sqr();

    let pm = Integer::from(p.modulo_ref(&q));
    let pinv = pm.invert(&q).map_err(|_| Error::Domain("convergent not reduced".into()))?;
    let pairs = Integer::from(&q - 1u32) / 2u32;
    let t_head = if pairs <= head { pairs.to_u64().unwrap() } else { head };

    let half = Rational::from((1, 2));
    let mut prod = Enclosure::one(w);
    let mut r = Integer::new();
    let mut r_sum = Integer::new();
    for m in 1..=t_head {
        r += &pinv;
        if r >= q {
            r -= &q;
        }
        r_sum += &r;
        let c = Rational::from((r.clone(), q.clone())) - &half;
        let u = Enclosure::from_rational(&Rational::from((Integer::from(m), q.clone())), w);
        let t = delta.mul_rational(&c).mul_i64(theta);
        let s1 = u.add(&t).sin_pi_narrow().sqr();
        let s0 = u.sin_pi_narrow().sqr();
        let factor = s1.sub(&sin_s2).abs().div(&s0);
        prod = prod.mul(&factor);
    }

    let mut pre = delta.add(&eps_q).sin_pi().abs().mul_i64(2).mul(&q_e);
    if q.is_even() {
        pre = pre.mul(&s.cos_pi().abs());
    }
    let head_val = pre.mul(&prod);

    let (enclosure, estimate) = if Integer::from(t_head) == pairs {
        (head_val.with_prec(prec), head_val.mid_f64())
    } else {
        let s_t = Rational::from((r_sum, q.clone())) - Rational::from((t_head, 2u64));
        let a = effective_digit_bound(cf.max_digit_upto(k));
        let tail = tail_factor(&TailData { q: &q, delta: &delta, theta, s: &s, s_t: &s_t, t: t_head, pairs: &pairs, a }, w)?;
        let est = head_val.mid_f64() * tail.boundary.mid_f64().exp();
        (head_val.mul(&tail.factor).with_prec(prec), est)
    };
    Ok(PairedValue { enclosure, estimate, head: t_head, pairs })
}

struct TailData<'a> {
    q: &'a Integer,
    delta: &'a Enclosure,
    theta: i64,
    s: &'a Enclosure,
    s_t: &'a Rational,
    t: u64,
    pairs: &'a Integer,
    a: u64,
}

struct Tail {
    factor: Enclosure,
    /// `2·W_c`, the log of the dominant boundary term.
    boundary: Enclosure,
}

/// Enclosure of `∏_{T<n≤M} |f²(n/q + t_n) − f²(s)| / f²(n/q)`.
fn tail_factor(d: &TailData, w: u32) -> Result<Tail> {
    let pi = Enclosure::pi(w);
    let one = Enclosure::one(w);
    let q_e = Enclosure::from_integer(d.q, w);
    let t_e = Enclosure::from_integer(&Integer::from(d.t), w);
    let t1 = t_e.add(&one);
    let qd = q_e.mul(d.delta);
    let half_pd = pi.mul(d.delta).mul_rational(&Rational::from((1, 2)));
    let kappa = half_pd.sqr();
    let one_k = one.add(&kappa);

    // |w_n| ≤ qδ(1+κ)/(2n) must stay ≤ 1/2
    let w_max = qd.mul(&one_k).div(&t1.mul_i64(2));
    if w_max.hi_f64() > 0.5 {
        return Err(Error::TooSmall(format!("head {} too short for the tail bound", d.t)));
    }

    let q8 = Integer::from(d.q / 8u32);
    let t_big = Integer::from(d.t);
    let e1 = e_bound(&t_big, d.a, w)?;
    let e2 = e_bound(if q8 > t_big { &q8 } else { &t_big }, d.a, w)?;
    let bound1 = qd.mul(&e1.mul_rational(&Rational::from((106, 100))).add(&e2.mul_rational(&Rational::from((183, 100)))));
    let end = pi.sqr().mul(d.delta).mul_i64(2).mul(&pinner_bound(d.pairs, d.a, w)?).div(&q_e);
    let w_r = bound1.add(&end);

    let x = Enclosure::from_rational(&Rational::from((Integer::from(d.t + 1), d.q.clone())), w);
    let cot = x.cos_pi().div(&x.sin_pi());
    let w_c = pi.mul(d.delta).mul_rational(d.s_t).mul(&cot).mul_i64(-d.theta);

    let ln_q = q_e.ln();
    let r_abs = d.delta.mul_rational(&Rational::from((1, 2))).mul(&kappa).mul(&q_e).mul(&one.add(&ln_q));
    let sw2 = qd.mul_rational(&Rational::from((1, 2))).sqr().mul(&one_k.sqr()).div(&t_e);
    let cosb = q_e.mul(&pi.sqr()).mul(&d.delta.sqr()).mul_rational(&Rational::from((1, 4)));

    let a_min = half_pd.div(&pi).cos_pi().mul(&one.sub(&w_max));
    if !a_min.is_positive() {
        return Err(Error::TooSmall("tail factors not bounded away from zero".into()));
    }
    let y = d.s.sin_pi().abs().mul(&q_e).mul_rational(&Rational::from((1, 2))).sqr().div(&a_min.sqr());
    if y.div(&t1.sqr()).hi_f64() > 0.5 {
        return Err(Error::TooSmall(format!("head {} too short for the shift", d.t)));
    }
    let ylow = y.div(&t_e).add(&y.sqr().div(&t_e.mul(&t_e).mul(&t_e).mul_i64(3)));

    let two = 2;
    let lo_e = w_c.sub(&w_r).mul_i64(two).sub(&r_abs.mul_i64(two)).sub(&sw2.mul_i64(two)).sub(&cosb).sub(&ylow);
    let hi_e = w_c.add(&w_r).mul_i64(two).add(&r_abs.mul_i64(two));
    let log = Enclosure::new(lo_e.lo().clone(), hi_e.hi().clone());
    Ok(Tail { factor: log.exp(), boundary: w_c.mul_i64(two) })
}
