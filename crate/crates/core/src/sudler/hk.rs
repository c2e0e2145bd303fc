//! The surrogate `H_k(α, ε) = 2π|ε + q_kδ_k| ∏_{n=1}^{⌊q_k/2⌋} h_{n,k}(ε)` with
//! `h_{n,k}(ε) = (1 − q_kδ_k({n←α_k} − 1/2)/n)² − (ε + q_kδ_k/2)²/n²`.
//!
//! `←α_k = q_{k−1}/q_k` is rational, so every fractional part is exact.

use rug::{Integer, Rational};

use super::{q_delta_enclosure, EvalOptions};
use crate::cf::ContinuedFraction;
use crate::criterion::effective_digit_bound;
use crate::error::{Error, Result};
use crate::interval::Enclosure;
use crate::real::Real;
use crate::tail::{product_tail, rational_partial_sum, TailSpec};

/// `h_{n,k}(ε)`.
pub fn h_factor(cf: &ContinuedFraction, k: usize, n: u64, eps: &Real, prec: u32) -> Result<Enclosure> {
    if n == 0 {
        return Err(Error::Domain("h_{n,k} needs n ≥ 1".into()));
    }
    let conv = cf.convergents(k)?;
    let (q, qm) = (conv.q(k).clone(), prev_q(&conv, k));
    let c = q_delta_enclosure(cf, k, prec)?;
    let e = eps.to_enclosure(prec).add(&c.mul_rational(&Rational::from((1, 2))));
    let frac = Rational::from((Integer::from(&qm * n).div_rem_euc(q.clone()).1, q)) - Rational::from((1, 2));
    Ok(h_value(&c, &e, &frac, n))
}

fn prev_q(conv: &crate::cf::Convergents, k: usize) -> Integer {
    if k == 0 {
        Integer::new()
    } else {
        conv.q(k - 1).clone()
    }
}

fn h_value(c: &Enclosure, e2: &Enclosure, frac: &Rational, n: u64) -> Enclosure {
    let p = c.prec();
    let inv_n = Enclosure::ratio(1, n as i64, p);
    let one = Enclosure::one(p);
    one.sub(&c.mul_rational(frac).mul(&inv_n)).sqr().sub(&e2.mul(&inv_n).sqr())
}

/// Certified enclosure of `H_k(α, ε)`; factors past `opts.head` are
/// bounded rather than multiplied.
pub fn h_k(cf: &ContinuedFraction, k: usize, eps: &Real, opts: &EvalOptions) -> Result<Enclosure> {
    if k == 0 {
        return Err(Error::Domain("H_k needs k ≥ 1".into()));
    }
    let w = opts.prec + 32;
    let conv = cf.convergents(k)?;
    let q = conv.q(k).clone();
    let qm = prev_q(&conv, k);
    let c = q_delta_enclosure(cf, k, w)?;
    let eps_e = eps.to_enclosure(w);
    let e = eps_e.add(&c.mul_rational(&Rational::from((1, 2))));
    let pre = eps_e.add(&c).abs().mul(&Enclosure::pi(w)).mul_i64(2);
    if pre.hi_f64() == 0.0 {
        return Ok(Enclosure::zero(opts.prec));
    }

    let m = Integer::from(&q / 2u32);
    let head = match m.to_u64() {
        Some(mm) if mm <= opts.head => mm,
        _ => opts.head,
    };
    let qm_mod = qm.clone().div_rem_euc(q.clone()).1;
    let mut residue = Integer::new();
    let mut residue_sum = Integer::new();
    let half = Rational::from((1, 2));
    let mut prod = Enclosure::one(w);
    for n in 1..=head {
        residue += &qm_mod;
        if residue >= q {
            residue -= &q;
        }
        residue_sum += &residue;
        let frac = Rational::from((residue.clone(), q.clone())) - &half;
        prod = prod.mul(&h_value(&c, &e, &frac, n).abs());
    }
    let mut val = pre.mul(&prod);
    if Integer::from(head) < m {
        let s_t = Enclosure::from_rational(&rational_partial_sum(&residue_sum, &q, head), w);
        let spec = TailSpec {
            c: &c,
            e: &e,
            s_t: &s_t,
            t: head,
            m: Some(&m),
            a: effective_digit_bound(cf.max_digit_upto(k)),
        };
        let (tail, _) = product_tail(&spec, w)?;
        val = val.mul(&tail);
    }
    Ok(val.with_prec(opts.prec))
}
