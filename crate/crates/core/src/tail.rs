//! Certified bound for the tail `∏_{T<n≤M} [(1 − C c_n/n)² − e²/n²]`, where
//! `c_n = {nβ} − 1/2` has partial sums controlled by Pinner's bound.
//!
//! Both `G_r` (with `M = ∞`, `β` a quadratic irrational) and `H_k` (with
//! `M = ⌊q_k/2⌋`, `β = q_{k−1}/q_k`) have this shape. Writing
//! `x_n = C c_n/n` and `y_n = e²/(n²(1 − x_n)²)`, each factor is
//! `(1 − x_n)²(1 − y_n)`, and
//!
//! * `Σ x_n` is summed by parts: `−S_T/(T+1) + S_M/M + Σ S_n/(n(n+1))`,
//!   the last sum bounded by `E(T, a)`;
//! * `log(1 − z) ∈ [−z − z², −z]` for `|z| ≤ 1/2` handles the rest.

use rug::{Integer, Rational};

use crate::criterion::{e_bound, pinner_bound};
use crate::error::{Error, Result};
use crate::interval::Enclosure;

pub(crate) struct TailSpec<'a> {
    /// `C > 0`.
    pub c: &'a Enclosure,
    /// Encloses `|e|` (any enclosure whose upper end bounds it).
    pub e: &'a Enclosure,
    /// `S_T = Σ_{n≤T} c_n`.
    pub s_t: &'a Enclosure,
    pub t: u64,
    /// Last index, `None` for an infinite product.
    pub m: Option<&'a Integer>,
    /// Digit bound for Pinner, already `≥ 2`.
    pub a: u64,
}

/// Multiplicative enclosure of the tail and the `E(T, a)` value used.
pub(crate) fn product_tail(spec: &TailSpec, w: u32) -> Result<(Enclosure, Enclosure)> {
    let one = Enclosure::one(w);
    let t_e = Enclosure::from_integer(&Integer::from(spec.t), w);
    let t1 = t_e.add(&one);
    let e_t = e_bound(&Integer::from(spec.t), spec.a, w)?;

    let mut slack = e_t.clone();
    if let Some(m) = spec.m {
        slack = slack.add(&pinner_bound(m, spec.a, w)?.div(&Enclosure::from_integer(m, w)));
    }
    let centre = spec.s_t.div(&t1).neg();
    let sigma = Enclosure::new(centre.sub(&slack).lo().clone(), centre.add(&slack).hi().clone());

    let x_max = spec.c.div(&t1.mul_i64(2));
    let inner = one.sub(&x_max);
    let y = spec.e.abs().sqr().div(&inner.sqr());
    if y.div(&t1.sqr()).hi_f64() > 0.5 {
        return Err(Error::TooSmall(format!("T = {} too small for the shift", spec.t)));
    }

    let lin = spec.c.mul(&sigma).mul_i64(-2);
    let quad = spec.c.sqr().div(&t_e.mul_i64(2));
    let ylow = y.div(&t_e).add(&y.sqr().div(&t_e.mul(&t_e).mul(&t_e).mul_i64(3)));
    let lo = lin.sub(&quad).sub(&ylow);
    let log = Enclosure::new(lo.lo().clone(), lin.hi().clone());
    Ok((log.exp(), e_t))
}

/// `S_T` as an exact rational when `β = num/den`.
pub(crate) fn rational_partial_sum(residues_sum: &Integer, den: &Integer, t: u64) -> Rational {
    Rational::from((residues_sum.clone(), den.clone())) - Rational::from((t, 2u64))
}
