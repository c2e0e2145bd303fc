//! The limit functions
//!
//! ```text
//! G_r(α, ε) = 2π|ε + C(r)| ∏_{n≥1} |g_n(ε)|,
//! g_n(ε) = (1 − C(r)({nβ} − 1/2)/n)² − (ε + C(r)/2)²/n²,   β = α_σr,
//! ```
//!
//! of `P_{q_k}(α, ε)` along `k ≡ r` past the preperiod, with certified
//! truncation bounds.

mod checks;

pub use checks::{figure6a, remark_conjectures, theorem_b_check, Figure6aRow, RemarkCase, RemarkReport, TheoremBReport, Verdict};

use std::sync::RwLock;

use rug::float::Round;
use rug::ops::{MulAssignRound, SubAssignRound};
use rug::{Float, Integer, Rational};
use serde::Serialize;

use crate::cf::{ContinuedFraction, QuadraticSurd};
use crate::criterion::effective_digit_bound;
use crate::error::{Error, Result};
use crate::interval::Enclosure;
use crate::real::Real;
use crate::tail::{product_tail, TailSpec};

/// A periodic expansion, a residue `r`, and the exact constants `C(r)`,
/// `α_τ[r+1]`, `α_σr` that determine `G_r`.
pub struct LimitFunctionSpec {
    cf: ContinuedFraction,
    r: usize,
    c: QuadraticSurd,
    tau: QuadraticSurd,
    sigma: QuadraticSurd,
    a_max: u64,
    prec: u32,
    c_enc: Enclosure,
    sigma_enc: Enclosure,
    cache: RwLock<FactorCache>,
}

/// `x_n = C·c_n/n` for `n = 1..len` and prefix sums of `⌊nβ⌋`.
#[derive(Default)]
struct FactorCache {
    x_lo: Vec<Float>,
    x_hi: Vec<Float>,
    floor_sum: Vec<u64>,
}

impl Clone for LimitFunctionSpec {
    fn clone(&self) -> Self {
        LimitFunctionSpec::with_prec(&self.cf, self.r, self.prec).expect("validated on construction")
    }
}

impl std::fmt::Debug for LimitFunctionSpec {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "LimitFunctionSpec({}, r={})", self.cf, self.r)
    }
}

impl LimitFunctionSpec {
    pub fn new(cf: &ContinuedFraction, r: usize) -> Result<Self> {
        Self::with_prec(cf, r, 96)
    }

    /// `prec` is the working precision of the factor products.
    pub fn with_prec(cf: &ContinuedFraction, r: usize, prec: u32) -> Result<Self> {
        if !cf.is_periodic() {
            return Err(Error::NotPeriodic);
        }
        let l = cf.period_len()?;
        let c = cf.limit_constant(r)?;
        let (_, sigma) = cf.rotation_surds(r)?;
        let (tau, _) = cf.rotation_surds((r + 1) % l)?;
        let w = prec + 64;
        Ok(LimitFunctionSpec {
            cf: cf.clone(),
            r,
            c_enc: c.to_enclosure(w),
            sigma_enc: sigma.to_enclosure(w),
            c,
            tau,
            sigma,
            a_max: cf.period_max()?,
            prec,
            cache: RwLock::new(FactorCache::default()),
        })
    }

    pub fn cf(&self) -> &ContinuedFraction {
        &self.cf
    }

    pub fn r(&self) -> usize {
        self.r
    }

    /// `C(r)`.
    pub fn c(&self) -> &QuadraticSurd {
        &self.c
    }

    /// `α_τ[r+1]`, the forward rotation entering `C(r)`.
    pub fn tau(&self) -> &QuadraticSurd {
        &self.tau
    }

    /// `α_σr`, the rotation whose multiples enter `g_n`.
    pub fn sigma(&self) -> &QuadraticSurd {
        &self.sigma
    }

    /// Largest period digit `a_K`.
    pub fn a_max(&self) -> u64 {
        self.a_max
    }

    pub fn prec(&self) -> u32 {
        self.prec
    }

    /// The zeros of `G_r` inside `(−1, 1)`: `−C(r)` and, when below 1,
    /// `z₊ = 1 − C/2 − C({β} − 1/2)` from the `n = 1` factor. Every
    /// `g_n` with `n ≥ 2` is positive for `|ε| < 1`.
    pub fn zeros(&self) -> Vec<QuadraticSurd> {
        let half = QuadraticSurd::from_rational(&Rational::from((1, 2)));
        let c1 = &self.sigma.fract() - &half;
        let z = &(&QuadraticSurd::one() - &(&self.c * &half)) - &(&self.c * &c1);
        let mut zs = vec![-&self.c];
        if z < QuadraticSurd::one() {
            zs.push(z);
        }
        zs
    }

    fn ensure_cache(&self, t: u64) {
        if self.cache.read().unwrap().x_lo.len() as u64 >= t {
            return;
        }
        let mut cache = self.cache.write().unwrap();
        let have = cache.x_lo.len() as u64;
        if have >= t {
            return;
        }
        let w = self.prec + 64;
        let half = Rational::from((1, 2));
        let mut fsum = cache.floor_sum.last().copied().unwrap_or(0);
        for n in have + 1..=t {
            let nb = self.sigma_enc.mul(&Enclosure::from_integer(&Integer::from(n), w));
            let f_lo = nb.lo().clone().floor();
            let f_hi = nb.hi().clone().floor();
            let fl = if f_lo == f_hi {
                f_lo.to_integer().unwrap()
            } else {
                self.sigma.mul_integer(&Integer::from(n)).floor()
            };
            fsum += fl.to_u64().unwrap();
            let cn = nb.sub(&Enclosure::from_integer(&fl, w)).sub(&Enclosure::from_rational(&half, w));
            let x = self.c_enc.mul(&cn).div(&Enclosure::from_integer(&Integer::from(n), w));
            let (lo, hi) = x.with_prec(self.prec).into_bounds();
            cache.x_lo.push(lo);
            cache.x_hi.push(hi);
            cache.floor_sum.push(fsum);
        }
    }

    /// `S_T = Σ_{n≤T} ({nβ} − 1/2) = β·T(T+1)/2 − Σ⌊nβ⌋ − T/2`.
    fn partial_sum(&self, t: u64, w: u32) -> Enclosure {
        if t == 0 {
            return Enclosure::zero(w);
        }
        self.ensure_cache(t);
        let fs = self.cache.read().unwrap().floor_sum[t as usize - 1];
        let tri = Integer::from(t) * Integer::from(t + 1) / 2u32;
        self.sigma_enc
            .mul(&Enclosure::from_integer(&tri, w))
            .sub(&Enclosure::from_integer(&Integer::from(fs), w))
            .sub(&Enclosure::ratio(t as i64, 2, w))
    }
}

/// `g_n(ε)`.
pub fn g_factor(spec: &LimitFunctionSpec, n: u64, eps: &Real) -> Result<Enclosure> {
    if n == 0 {
        return Err(Error::Domain("g_n needs n ≥ 1".into()));
    }
    spec.ensure_cache(n);
    let w = spec.prec + 64;
    let cache = spec.cache.read().unwrap();
    let x = Enclosure::new(
        Float::with_val(w, &cache.x_lo[n as usize - 1]),
        Float::with_val(w, &cache.x_hi[n as usize - 1]),
    );
    let e = half_shift(spec, eps, w);
    let n_e = Enclosure::from_integer(&Integer::from(n), w);
    Ok(Enclosure::one(w).sub(&x).sqr().sub(&e.div(&n_e).sqr()).with_prec(spec.prec))
}

/// `ε + C/2`.
fn half_shift(spec: &LimitFunctionSpec, eps: &Real, w: u32) -> Enclosure {
    eps.to_enclosure(w).add(&spec.c_enc.mul_rational(&Rational::from((1, 2))))
}

/// `G_{r,T}(ε) = 2π|ε + C(r)| ∏_{n≤T} |g_n(ε)|`.
pub fn g_truncated(spec: &LimitFunctionSpec, eps: &Real, t: u64) -> Enclosure {
    let w = spec.prec + 64;
    let pre = eps.to_enclosure(w).add(&spec.c_enc).abs().mul(&Enclosure::pi(w)).mul_i64(2);
    if t == 0 || pre.hi_f64() == 0.0 {
        return pre.with_prec(spec.prec);
    }
    spec.ensure_cache(t);
    let e = half_shift(spec, eps, w);
    let e2 = e.sqr().with_prec(spec.prec);
    let (e2_lo, e2_hi) = (e2.lo().clone(), e2.hi().clone());

    let p = spec.prec;
    let cache = spec.cache.read().unwrap();
    let mut lo = Float::with_val(p, 1);
    let mut hi = Float::with_val(p, 1);
    let mut a = Float::new(p);
    let mut b = Float::new(p);
    let mut u = Float::new(p);
    let mut v = Float::new(p);
    for n in 1..=t {
        let i = n as usize - 1;
        // (1 − x)² with 1 − x > 0 since |x| ≤ C/2 < 1/2
        a.assign_round_sub_one(&cache.x_hi[i], Round::Down);
        a.square_round(Round::Down);
        b.assign_round_sub_one(&cache.x_lo[i], Round::Up);
        b.square_round(Round::Up);
        let n2 = n * n;
        u.assign_div_round(&e2_hi, n2, Round::Up);
        v.assign_div_round(&e2_lo, n2, Round::Down);
        a.sub_assign_round(&u, Round::Down);
        b.sub_assign_round(&v, Round::Up);
        // |g| ∈ [max(0, a), b] or [−b, −a] or [0, max(−a, b)]
        if a > 0 {
            lo.mul_assign_round(&a, Round::Down);
            hi.mul_assign_round(&b, Round::Up);
        } else if b < 0 {
            a = -a;
            b = -b;
            lo.mul_assign_round(&b, Round::Down);
            hi.mul_assign_round(&a, Round::Up);
        } else {
            lo = Float::new(p);
            let m = if Float::with_val(p, -&a) > b { Float::with_val(p, -&a) } else { b.clone() };
            hi.mul_assign_round(&m, Round::Up);
        }
    }
    let prod = Enclosure::new(lo, hi);
    pre.with_prec(p).mul(&prod)
}

trait RoundOps {
    fn assign_round_sub_one(&mut self, x: &Float, round: Round);
    fn assign_div_round(&mut self, x: &Float, d: u64, round: Round);
}

impl RoundOps for Float {
    fn assign_round_sub_one(&mut self, x: &Float, round: Round) {
        use rug::ops::AssignRound;
        self.assign_round(1u32 - x, round);
    }
    fn assign_div_round(&mut self, x: &Float, d: u64, round: Round) {
        use rug::ops::AssignRound;
        self.assign_round(x / Float::with_val(64, d), round);
    }
}

/// Certified enclosure of `G_r(ε)`.
#[derive(Clone, Debug, Serialize)]
pub struct GEnclosure {
    pub eps: Enclosure,
    pub t: u64,
    /// `G_{r,T}(ε)`.
    pub truncated: Enclosure,
    /// Encloses `G_r(ε)`.
    pub value: Enclosure,
    /// `E(T, a_K)` used for the tail.
    pub e_value: f64,
}

impl GEnclosure {
    pub fn lo_f64(&self) -> f64 {
        self.value.lo_f64()
    }

    pub fn hi_f64(&self) -> f64 {
        self.value.hi_f64()
    }
}

/// `G_r(ε)` enclosed by `G_{r,T}(ε)` times a certified bound on the tail
/// `∏_{n>T} g_n(ε)`. Refuses unless `3C(r)E(T, a_K) < 1/2`.
pub fn g_enclosure(spec: &LimitFunctionSpec, eps: &Real, t: u64) -> Result<GEnclosure> {
    if t < 1 {
        return Err(Error::TooSmall("T must be at least 1".into()));
    }
    let w = spec.prec + 64;
    let eps_e = eps.to_enclosure(w);
    if eps_e.lo_f64() <= -1.0 || eps_e.hi_f64() >= 1.0 {
        return Err(Error::Domain(format!("ε = {eps_e} outside (−1, 1)")));
    }
    let a = effective_digit_bound(spec.a_max);
    let s_t = spec.partial_sum(t, w);
    let e = half_shift(spec, eps, w);
    let tail_spec = TailSpec { c: &spec.c_enc, e: &e, s_t: &s_t, t, m: None, a };
    let (tail, e_t) = product_tail(&tail_spec, w)?;
    if spec.c_enc.mul(&e_t).mul_i64(3).hi_f64() >= 0.5 {
        return Err(Error::TooSmall(format!("3C(r)E(T, a_K) ≥ 1/2 at T = {t}")));
    }
    let truncated = g_truncated(spec, eps, t);
    let value = truncated.mul(&tail.with_prec(spec.prec));
    Ok(GEnclosure { eps: eps_e.with_prec(spec.prec), t, truncated, value, e_value: e_t.hi_f64() })
}

/// Doubles `T` from `t0` until the enclosure width is below `width` or `T`
/// exceeds `t_max`; returns the last enclosure.
pub fn g_enclosure_until(spec: &LimitFunctionSpec, eps: &Real, t0: u64, width: f64, t_max: u64) -> Result<GEnclosure> {
    let mut t = t0.max(1);
    loop {
        let g = g_enclosure(spec, eps, t);
        match g {
            Ok(g) if g.value.width_f64() < width || t.saturating_mul(2) > t_max => return Ok(g),
            Err(Error::TooSmall(_)) if t.saturating_mul(2) <= t_max => {}
            Err(e) => return Err(e),
            Ok(_) => {}
        }
        t *= 2;
    }
}

/// Result of [`g_bound_on_interval`].
#[derive(Clone, Debug, Serialize)]
pub struct IntervalBound {
    /// Lower bound for `G_r` on the interval.
    pub lower: Enclosure,
    /// Upper bound, present only when the caller asserted that the
    /// maximizer lies outside the interval.
    pub upper: Option<Enclosure>,
}

/// Bounds `G_r` on `[a, b]` from its endpoint values, using
/// log-concavity on zero-free intervals. Zero-freeness is decided exactly
/// against the zeros listed by [`LimitFunctionSpec::zeros`].
pub fn g_bound_on_interval(
    spec: &LimitFunctionSpec,
    a: &Real,
    b: &Real,
    t: u64,
    maximizer_outside: bool,
) -> Result<IntervalBound> {
    let w = spec.prec + 64;
    let (ae, be) = (a.to_enclosure(w), b.to_enclosure(w));
    if ae.lo() > be.hi() {
        return Err(Error::Domain("interval endpoints reversed".into()));
    }
    if ae.lo_f64() <= -1.0 || be.hi_f64() >= 1.0 {
        return Err(Error::NotZeroFree("interval leaves (−1, 1)".into()));
    }
    for z in spec.zeros() {
        let below_a = match a {
            Real::Exact(x) if x.same_field(&z) => z < *x,
            _ => z.to_enclosure(w).hi() < ae.lo(),
        };
        let above_b = match b {
            Real::Exact(x) if x.same_field(&z) => z > *x,
            _ => z.to_enclosure(w).lo() > be.hi(),
        };
        if !(below_a || above_b) {
            return Err(Error::NotZeroFree(format!("zero {:.6} of G_{} in the interval", z.to_f64(), spec.r)));
        }
    }
    let ga = g_enclosure(spec, a, t)?;
    let gb = g_enclosure(spec, b, t)?;
    if !ga.value.is_positive() || !gb.value.is_positive() {
        return Err(Error::NotZeroFree("endpoint enclosure reaches 0".into()));
    }
    let lower = min_enclosure(&ga.value, &gb.value);
    let upper = maximizer_outside.then(|| ga.value.hull(&gb.value).hi().clone()).map(|h| {
        let lo = if ga.value.lo() > gb.value.lo() { ga.value.lo().clone() } else { gb.value.lo().clone() };
        Enclosure::new(lo, h)
    });
    Ok(IntervalBound { lower, upper })
}

/// Enclosure of `min(x, y)`.
pub(crate) fn min_enclosure(x: &Enclosure, y: &Enclosure) -> Enclosure {
    let lo = if x.lo() < y.lo() { x.lo().clone() } else { y.lo().clone() };
    let hi = if x.hi() < y.hi() { x.hi().clone() } else { y.hi().clone() };
    Enclosure::new(lo, hi)
}
