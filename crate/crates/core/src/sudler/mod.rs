//! Sudler products, perturbed products `P_{q_n}(α, ε)`, the Ostrowski
//! decomposition into perturbed products, the surrogate `H_k` and the
//! vanishing-subsequence construction.

mod direct;
mod hk;
mod paired;

pub use direct::{hits_integer, shifted_product};
pub use hk::{h_factor, h_k};
pub use paired::{paired_product, PairedValue};

use rug::Integer;
use serde::Serialize;

use crate::cf::{ostrowski, ContinuedFraction, OstrowskiDigits, QuadraticSurd};
use crate::error::{Error, Result};
use crate::interval::{Enclosure, DEFAULT_PRECISION};
use crate::real::Real;

/// Evaluation knobs shared by the perturbed-product routines.
#[derive(Clone, Copy, Debug)]
pub struct EvalOptions {
    pub prec: u32,
    /// Largest `q` evaluated as a direct product.
    pub direct_limit: u64,
    /// Number of exactly evaluated factors (or pairs) before a tail bound
    /// takes over.
    pub head: u64,
}

impl Default for EvalOptions {
    fn default() -> Self {
        EvalOptions { prec: DEFAULT_PRECISION, direct_limit: 1 << 15, head: 1 << 16 }
    }
}

impl EvalOptions {
    pub fn with_prec(prec: u32) -> Self {
        EvalOptions { prec, ..Default::default() }
    }
}

/// `P_N(α) = ∏_{r=1}^N 2|sin πrα|`, evaluated directly.
pub fn sudler(alpha: &Real, n: u64, prec: u32) -> Enclosure {
    shifted_product(alpha, &Real::zero(), n, prec)
}

/// `P_{q_n}(α, ε) = ∏_{r=1}^{q_n} 2|sin π(rα + (−1)ⁿ ε/q_n)|`.
pub fn sudler_perturbed(cf: &ContinuedFraction, n: usize, eps: &Real, prec: u32) -> Result<Enclosure> {
    sudler_perturbed_with(cf, n, eps, &EvalOptions::with_prec(prec))
}

pub fn sudler_perturbed_with(cf: &ContinuedFraction, n: usize, eps: &Real, opts: &EvalOptions) -> Result<Enclosure> {
    Ok(perturbed_detailed(cf, n, eps, opts)?.enclosure)
}

/// Like [`sudler_perturbed_with`], also returning a point estimate when the
/// product was truncated.
pub fn perturbed_detailed(cf: &ContinuedFraction, n: usize, eps: &Real, opts: &EvalOptions) -> Result<PairedValue> {
    let conv = cf.convergents(n)?;
    let q = conv.q(n).clone();
    match q.to_u64() {
        Some(qu) if qu <= opts.direct_limit || qu < 3 => {
            let alpha = cf.value(opts.prec + 32);
            let shift = perturbation_shift(eps, n, &q, opts.prec + 32);
            let e = shifted_product(&alpha, &shift, qu, opts.prec);
            let estimate = e.mid_f64();
            Ok(PairedValue { enclosure: e, estimate, head: qu, pairs: Integer::from(qu) })
        }
        _ => paired_product(cf, n, eps, opts.head, opts.prec),
    }
}

/// `(−1)ⁿ ε/q`, exact when `ε` is.
fn perturbation_shift(eps: &Real, n: usize, q: &Integer, prec: u32) -> Real {
    let sign = if n % 2 == 0 { 1 } else { -1 };
    match eps {
        Real::Exact(e) => {
            let x = e.div_integer(q);
            Real::Exact(if sign < 0 { -x } else { x })
        }
        Real::Interval(e) => Real::Interval(e.div(&Enclosure::from_integer(q, prec)).mul_i64(sign)),
    }
}

/// `ε_{i,k}(N) = q_i(kδ_i + Σ_{j=1}^{n−i} (−1)ʲ b_{i+j} δ_{i+j})`.
pub fn epsilon_ik(cf: &ContinuedFraction, digits: &OstrowskiDigits, i: usize, k: u64, prec: u32) -> Result<Real> {
    let n = digits.top();
    if i > n {
        return Err(Error::Domain(format!("level {i} above the top digit {n}")));
    }
    let deltas: Vec<Real> = (i..=n).map(|j| cf.delta(j, prec + 32)).collect::<Result<_>>()?;
    let q = cf.convergents(i)?.q(i).clone();
    Ok(epsilon_from_deltas(&deltas, digits, i, k, &q, prec))
}

fn epsilon_from_deltas(deltas: &[Real], digits: &OstrowskiDigits, i: usize, k: u64, q: &Integer, prec: u32) -> Real {
    // deltas[j − i] = δ_j
    let w = prec + 32;
    let mut acc = scale(&deltas[0], &Integer::from(k), w);
    for j in 1..deltas.len() {
        let b = digits.get(i + j);
        if b == 0 {
            continue;
        }
        let sign = if j % 2 == 0 { 1i64 } else { -1 };
        acc = acc.add(&scale(&deltas[j], &Integer::from(sign * b as i64), w), w);
    }
    scale(&acc, q, w)
}

fn scale(x: &Real, k: &Integer, prec: u32) -> Real {
    match x {
        Real::Exact(s) => Real::Exact(s.mul_integer(k)),
        Real::Interval(e) => Real::Interval(e.mul(&Enclosure::from_integer(k, prec))),
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct DecompositionTerm {
    pub i: usize,
    pub c: u64,
    #[serde(serialize_with = "ser_real")]
    pub epsilon: Real,
    pub factor: Enclosure,
}

#[derive(Clone, Debug, Serialize)]
pub struct KFactor {
    pub i: usize,
    pub value: Enclosure,
}

#[derive(Clone, Debug, Serialize)]
pub struct Decomposition {
    pub n: String,
    pub digits: Vec<u64>,
    pub terms: Vec<DecompositionTerm>,
    /// `K_0(N), …, K_n(N)`.
    pub k_factors: Vec<KFactor>,
    /// `P_{q_n}(α)`.
    pub top: Enclosure,
    /// Product of all terms, equal to `P_N(α)`.
    pub product: Enclosure,
}

fn ser_real<S: serde::Serializer>(x: &Real, s: S) -> std::result::Result<S::Ok, S::Error> {
    x.to_enclosure(64).serialize(s)
}

/// Splits `P_N(α)` into the perturbed products of Ostrowski's expansion
/// `N = Σ b_i q_i`, and regroups them as `P_{q_n}(α)·∏_{i=0}^n K_i(N)`.
pub fn decompose(cf: &ContinuedFraction, n: &Integer, opts: &EvalOptions) -> Result<Decomposition> {
    if *n < 1 {
        return Err(Error::Domain("decomposition needs N ≥ 1".into()));
    }
    let digits = ostrowski(cf, n)?;
    let top = digits.top();
    let w = opts.prec + 32;
    let deltas: Vec<Real> = (0..=top).map(|j| cf.delta(j, w)).collect::<Result<_>>()?;
    let conv = cf.convergents(top)?;

    let mut terms = Vec::new();
    for i in (0..=top).rev() {
        for c in 0..digits.get(i) {
            let eps = epsilon_from_deltas(&deltas[i..], &digits, i, c, conv.q(i), opts.prec);
            let factor = sudler_perturbed_with(cf, i, &eps, opts)?;
            terms.push(DecompositionTerm { i, c, epsilon: eps, factor });
        }
    }

    let find = |i: usize, c: u64| terms.iter().find(|t| t.i == i && t.c == c).map(|t| t.factor.clone());
    let mut k_factors = Vec::with_capacity(top + 1);
    for i in 0..=top {
        let mut k = Enclosure::one(opts.prec);
        for c in 1..digits.get(i) {
            k = k.mul(&find(i, c).unwrap());
        }
        if i > 0 && digits.get(i - 1) != 0 {
            k = k.mul(&find(i - 1, 0).unwrap());
        }
        k_factors.push(KFactor { i, value: k });
    }
    let top_factor = find(top, 0).expect("top digit is nonzero");
    let product = terms.iter().fold(Enclosure::one(opts.prec), |acc, t| acc.mul(&t.factor));
    Ok(Decomposition {
        n: n.to_string(),
        digits: digits.digits().to_vec(),
        terms,
        k_factors,
        top: top_factor,
        product,
    })
}

impl Decomposition {
    /// `P_{q_n}(α)·∏ K_i(N)`, the regrouped form of the product.
    pub fn regrouped(&self) -> Enclosure {
        self.k_factors.iter().fold(self.top.clone(), |acc, k| acc.mul(&k.value))
    }

    /// Factors outside `[lo, hi]`, for the uniform boundedness probe.
    pub fn factors_outside(&self, lo: f64, hi: f64) -> Vec<&DecompositionTerm> {
        self.terms.iter().filter(|t| t.factor.hi_f64() < lo || t.factor.lo_f64() > hi).collect()
    }
}

/// One step of the vanishing-subsequence construction.
#[derive(Clone, Debug, Serialize)]
pub struct VanishingStep {
    pub k: usize,
    pub q: String,
    /// Partial sum `N_j = Σ_{i≤j} q_{k_i}`.
    pub n: String,
    pub probe: f64,
    /// `P_{N_j}(α)` when `N_j` is small enough to evaluate directly.
    pub product: Option<Enclosure>,
}

/// Extracts indices `k_1 < k_2 < …` with `sup_{|ε|<δ} P_{q_k}(α, ε) < c`,
/// `q_{k_j} ≥ 2 q_{k_{j−1}}` and `δ_{k_j} < δ/(4 q_{k_{j−1}})`, and the
/// partial sums `N_j`. `probe(k)` reports the supremum; `max_k` caps the
/// search depth and `eval_limit` the `N_j` evaluated directly.
pub fn vanishing_subsequence(
    cf: &ContinuedFraction,
    delta: f64,
    c: f64,
    probe: &dyn Fn(usize) -> Result<f64>,
    count: usize,
    max_k: usize,
    eval_limit: u64,
    prec: u32,
) -> Result<Vec<VanishingStep>> {
    if count == 0 {
        return Ok(Vec::new());
    }
    let conv = cf.convergents(max_k)?;
    let alpha = cf.value(prec + 32);
    let mut steps: Vec<VanishingStep> = Vec::new();
    let mut prev_q: Option<Integer> = None;
    let mut n_sum = Integer::new();
    for k in 1..=max_k {
        let q = conv.q(k);
        if let Some(pq) = &prev_q {
            if *q < Integer::from(pq * 2u32) {
                continue;
            }
            let d = cf.delta(k, 64)?.to_f64();
            if d * 4.0 * pq.to_f64() >= delta {
                continue;
            }
        }
        let sup = probe(k)?;
        if sup >= c {
            continue;
        }
        n_sum += q;
        let product = n_sum.to_u64().filter(|&v| v <= eval_limit).map(|v| sudler(&alpha, v, prec));
        steps.push(VanishingStep { k, q: q.to_string(), n: n_sum.to_string(), probe: sup, product });
        prev_q = Some(q.clone());
        if steps.len() == count {
            break;
        }
    }
    if steps.is_empty() {
        return Err(Error::NoQualifyingIndices(max_k));
    }
    Ok(steps)
}

/// `q_k δ_k` as an enclosure.
pub(crate) fn q_delta_enclosure(cf: &ContinuedFraction, k: usize, prec: u32) -> Result<Enclosure> {
    Ok(cf.q_delta(k, prec)?.to_enclosure(prec))
}

/// Helper for exact perturbations: `ε` as a surd from a rational pair.
pub fn exact_eps(num: i64, den: i64) -> Real {
    Real::Exact(QuadraticSurd::from_rational(&rug::Rational::from((num, den))))
}
