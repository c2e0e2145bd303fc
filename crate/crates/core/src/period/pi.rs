//! The lower-approximation functions
//! `Π_r(a, b, h) = ∏_{k=1}^{b−1} G̃_{r,k}(h) · G̃_{[r−1],0}(b, h′)^{1[a≠0]}`
//! for tuples `(a, b, h_1, …, h_ℓ)` read as `b_{i−1}, b_i, b_{i+1}, …` with
//! `[i] = r`, and a driver that settles threshold comparisons between their
//! products by refining `T` only where a comparison is still open.

use std::collections::HashMap;

use rayon::prelude::*;
use rug::float::Round;
use rug::{Float, Rational};
use serde::Serialize;

use super::eps::{window_from, TailCoefficients};
use crate::cf::{ContinuedFraction, QuadraticSurd};
use crate::error::{Error, Result};
use crate::interval::Enclosure;
use crate::limit::{g_bound_on_interval, LimitFunctionSpec};
use crate::real::Real;
use crate::report::Status;

const BOUND_PREC: u32 = 64;
pub const T_START: u64 = 1_000;
pub const T_MAX: u64 = 1_000_000;

/// One `G̃_{r,k}(head)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct GKey {
    pub r: usize,
    pub k: u64,
    pub head: Vec<u64>,
}

#[derive(Clone, Debug)]
struct GEntry {
    t: u64,
    lo: Float,
    /// `None` when the window is not certified zero-free or `T` was too
    /// small for an enclosure.
    hi: Option<Float>,
    refinable: bool,
}

/// Certified `[lo, hi]` for a product of `G̃` values; `hi = None` means
/// unbounded above. `empty` marks the exact empty product.
#[derive(Clone, Debug)]
pub struct Bound {
    pub lo: Float,
    pub hi: Option<Float>,
    pub empty: bool,
}

impl Bound {
    pub fn one() -> Self {
        Bound { lo: Float::with_val(BOUND_PREC, 1), hi: Some(Float::with_val(BOUND_PREC, 1)), empty: true }
    }

    pub fn mul(&self, o: &Bound) -> Bound {
        let lo = Float::with_val_round(BOUND_PREC, &self.lo * &o.lo, Round::Down).0;
        let hi = match (&self.hi, &o.hi) {
            (Some(a), Some(b)) => Some(Float::with_val_round(BOUND_PREC, a * b, Round::Up).0),
            _ => None,
        };
        Bound { lo, hi, empty: self.empty && o.empty }
    }

    pub fn lo_f64(&self) -> f64 {
        self.lo.to_f64_round(Round::Down)
    }

    pub fn hi_f64(&self) -> f64 {
        self.hi.as_ref().map_or(f64::INFINITY, |h| h.to_f64_round(Round::Up))
    }

    pub fn to_enclosure(&self) -> Option<Enclosure> {
        self.hi.as_ref().map(|h| Enclosure::new(self.lo.clone(), h.clone()))
    }
}

/// The data shared by every `Π_r` of one expansion.
pub struct PiEngine {
    cf: ContinuedFraction,
    l: usize,
    specs: Vec<LimitFunctionSpec>,
    coeffs: Vec<TailCoefficients>,
    windows: Vec<(QuadraticSurd, QuadraticSurd)>,
    cache: HashMap<GKey, GEntry>,
    t_start: u64,
    t_max: u64,
}

impl PiEngine {
    /// Engine for a purely periodic expansion with `ℓ ∈ {2, 3}`.
    pub fn new(cf: &ContinuedFraction) -> Result<Self> {
        let l = cf.period_len()?;
        if !(2..=3).contains(&l) {
            return Err(Error::UnsupportedPeriod(l));
        }
        if !cf.preperiod().is_empty() {
            return Err(Error::Domain("Π tables are built for purely periodic expansions".into()));
        }
        let a = cf.period_max()?;
        let coeffs: Vec<TailCoefficients> = (0..l).map(|r| TailCoefficients::new(cf, r)).collect::<Result<_>>()?;
        let windows = coeffs.iter().map(|tc| window_from(tc, a)).collect::<Result<_>>()?;
        Ok(PiEngine {
            cf: cf.clone(),
            l,
            specs: (0..l).map(|r| LimitFunctionSpec::new(cf, r)).collect::<Result<_>>()?,
            coeffs,
            windows,
            cache: HashMap::new(),
            t_start: T_START,
            t_max: T_MAX,
        })
    }

    pub fn with_t_range(mut self, t_start: u64, t_max: u64) -> Self {
        self.t_start = t_start.max(1);
        self.t_max = t_max.max(self.t_start);
        self
    }

    pub fn cf(&self) -> &ContinuedFraction {
        &self.cf
    }

    pub fn period_len(&self) -> usize {
        self.l
    }

    /// Tuple length `ℓ + 2`.
    pub fn arity(&self) -> usize {
        self.l + 2
    }

    pub fn window(&self, r: usize) -> &(QuadraticSurd, QuadraticSurd) {
        &self.windows[r]
    }

    pub fn coefficients(&self, r: usize) -> &TailCoefficients {
        &self.coeffs[r]
    }

    /// The `G̃` factors of `Π_r(tuple)`; empty for an empty product.
    pub fn pi_keys(&self, r: usize, tuple: &[u64]) -> Vec<GKey> {
        debug_assert_eq!(tuple.len(), self.arity());
        let l = self.l;
        let (a, b) = (tuple[0], tuple[1]);
        let mut keys: Vec<GKey> = (1..b).map(|k| GKey { r, k, head: tuple[2..2 + l].to_vec() }).collect();
        if a != 0 {
            keys.push(GKey { r: (r + l - 1) % l, k: 0, head: tuple[1..1 + l].to_vec() });
        }
        keys
    }

    /// `ε′_{r,k}(head)` from the closed form.
    pub fn eps_head(&self, key: &GKey) -> Result<QuadraticSurd> {
        self.coeffs[key.r].closed(key.k, &key.head)
    }

    /// `G̃_{r,k}(head)` at a given `T`: the smaller endpoint value of `G_r`
    /// on `[ε′ + L_r, ε′ + U_r]`. Fails when the window is not certified
    /// zero-free.
    pub fn g_tilde(&self, key: &GKey, t: u64) -> Result<Enclosure> {
        let e = self.eps_head(key)?;
        let (lo, hi) = &self.windows[key.r];
        let a = Real::Exact(&e + lo);
        let b = Real::Exact(&e + hi);
        Ok(g_bound_on_interval(&self.specs[key.r], &a, &b, t, false)?.lower)
    }

    fn evaluate(&self, key: &GKey, t: u64) -> Result<GEntry> {
        let zero = Float::with_val(BOUND_PREC, 0);
        match self.g_tilde(key, t) {
            Ok(e) => Ok(GEntry {
                t,
                lo: Float::with_val_round(BOUND_PREC, e.lo(), Round::Down).0.max(&zero),
                hi: Some(Float::with_val_round(BOUND_PREC, e.hi(), Round::Up).0),
                refinable: true,
            }),
            // G_r ≥ 0 everywhere, so 0 stays a valid lower bound
            Err(Error::NotZeroFree(_)) => Ok(GEntry { t, lo: zero, hi: None, refinable: false }),
            Err(Error::TooSmall(_)) => Ok(GEntry { t, lo: zero, hi: None, refinable: true }),
            Err(e) => Err(e),
        }
    }

    fn compute(&mut self, jobs: Vec<(GKey, u64)>) -> Result<()> {
        let done: Vec<(GKey, GEntry)> = jobs
            .into_par_iter()
            .map(|(k, t)| self.evaluate(&k, t).map(|e| (k, e)))
            .collect::<Result<_>>()?;
        self.cache.extend(done);
        Ok(())
    }

    /// Evaluates missing keys at the starting `T`.
    pub fn ensure<'a>(&mut self, keys: impl IntoIterator<Item = &'a GKey>) -> Result<()> {
        let mut missing: Vec<GKey> = keys.into_iter().filter(|k| !self.cache.contains_key(k)).cloned().collect();
        missing.sort();
        missing.dedup();
        let t = self.t_start;
        self.compute(missing.into_iter().map(|k| (k, t)).collect())
    }

    /// Doubles `T` for the given keys where allowed; returns how many moved.
    fn refine(&mut self, keys: &[GKey]) -> Result<usize> {
        let jobs: Vec<(GKey, u64)> = keys
            .iter()
            .filter_map(|k| {
                let e = self.cache.get(k)?;
                (e.refinable && e.t * 2 <= self.t_max).then(|| (k.clone(), e.t * 2))
            })
            .collect();
        let n = jobs.len();
        self.compute(jobs)?;
        Ok(n)
    }

    /// Bound on `Π_r(tuple)` from the cached entries (call `ensure` first).
    pub fn pi_bound(&self, r: usize, tuple: &[u64]) -> Bound {
        self.pi_keys(r, tuple).iter().fold(Bound::one(), |acc, k| {
            let e = &self.cache[k];
            acc.mul(&Bound { lo: e.lo.clone(), hi: e.hi.clone(), empty: false })
        })
    }

    /// Largest `T` used by the factors of `Π_r(tuple)`.
    pub fn pi_t(&self, r: usize, tuple: &[u64]) -> u64 {
        self.pi_keys(r, tuple).iter().map(|k| self.cache[k].t).max().unwrap_or(0)
    }

    /// Settles every check, refining `T` for the factors of open checks
    /// until all are decided or `T` reaches its maximum.
    pub fn settle(&mut self, set: &CheckSet) -> Result<Vec<Verdict>> {
        let keys: Vec<Vec<GKey>> = set.refs.iter().map(|(r, t)| self.pi_keys(*r, t)).collect();
        self.ensure(keys.iter().flatten())?;
        loop {
            let pis: Vec<Bound> = set.refs.iter().map(|(r, t)| self.pi_bound(*r, t)).collect();
            let verdicts: Vec<Verdict> = set.checks.iter().map(|c| c.decide(&pis)).collect();
            let mut open: Vec<GKey> = Vec::new();
            for (c, v) in set.checks.iter().zip(&verdicts) {
                if v.status == Status::Undecided {
                    open.extend(c.refs.iter().flat_map(|&i| keys[i].iter().cloned()));
                }
            }
            open.sort();
            open.dedup();
            if open.is_empty() || self.refine(&open)? == 0 {
                return Ok(verdicts);
            }
        }
    }

    /// Every admissible `(r, tuple)` of arity `ℓ + 2` with its bound.
    pub fn table(&mut self) -> Result<PiTable> {
        let all: Vec<(usize, Vec<u64>)> =
            (0..self.l).flat_map(|r| admissible_tuples(&self.cf, r, self.arity()).into_iter().map(move |t| (r, t))).collect();
        let keys: Vec<GKey> = all.iter().flat_map(|(r, t)| self.pi_keys(*r, t)).collect();
        self.ensure(keys.iter())?;
        let rows = all
            .into_iter()
            .map(|(r, tuple)| {
                let b = self.pi_bound(r, &tuple);
                PiRow { r, t: self.pi_t(r, &tuple), lower: b.lo_f64(), upper: b.hi.as_ref().map(|_| b.hi_f64()), empty: b.empty, tuple }
            })
            .collect();
        Ok(PiTable { alpha: self.cf.to_string(), rows })
    }
}

/// Admissible `(β_0, …, β_{len−1}) = (b_{i−1}, …)` with `[i] = r`:
/// `β_t ≤ a_{i+t}`, and `β_t = a_{i+t}` forces `β_{t−1} = 0`.
pub fn admissible_tuples(cf: &ContinuedFraction, r: usize, len: usize) -> Vec<Vec<u64>> {
    let bounds: Vec<u64> = (0..len).map(|t| cf.period_digit(r as i64 + t as i64).expect("periodic")).collect();
    let mut out = Vec::new();
    let mut cur = Vec::with_capacity(len);
    fn rec(bounds: &[u64], cur: &mut Vec<u64>, out: &mut Vec<Vec<u64>>) {
        let t = cur.len();
        if t == bounds.len() {
            out.push(cur.clone());
            return;
        }
        let max = if t > 0 && cur[t - 1] != 0 { bounds[t] - 1 } else { bounds[t] };
        for b in 0..=max {
            cur.push(b);
            rec(bounds, cur, out);
            cur.pop();
        }
    }
    rec(&bounds, &mut cur, &mut out);
    out
}

/// One row of [`PiTable`].
#[derive(Clone, Debug, Serialize)]
pub struct PiRow {
    pub r: usize,
    pub tuple: Vec<u64>,
    pub lower: f64,
    pub upper: Option<f64>,
    /// Largest `T` among the factors.
    pub t: u64,
    pub empty: bool,
}

/// Certified lower bounds of `Π_r` over all admissible tuples.
#[derive(Clone, Debug, Serialize)]
pub struct PiTable {
    pub alpha: String,
    pub rows: Vec<PiRow>,
}

impl PiTable {
    pub fn get(&self, r: usize, tuple: &[u64]) -> Option<&PiRow> {
        self.rows.iter().find(|row| row.r == r && row.tuple == tuple)
    }
}

/// `∏ Π ≷ threshold`.
#[derive(Clone, Debug)]
pub struct Check {
    /// Indices into [`CheckSet::refs`].
    pub refs: Vec<usize>,
    pub threshold: Rational,
    /// `>` when true, `≥` otherwise.
    pub strict: bool,
    /// The digit tuple the check is about.
    pub tuple: Vec<u64>,
}

impl Check {
    fn decide(&self, pis: &[Bound]) -> Verdict {
        let p = self.refs.iter().fold(Bound::one(), |acc, &i| acc.mul(&pis[i]));
        let th = &self.threshold;
        let pass = if self.strict { p.lo > *th } else { p.lo >= *th };
        let fail = match &p.hi {
            Some(h) => {
                if self.strict {
                    *h <= *th
                } else {
                    *h < *th
                }
            }
            None => false,
        };
        let status = if pass {
            Status::Pass
        } else if fail {
            Status::Fail
        } else {
            Status::Undecided
        };
        let margin = Float::with_val_round(BOUND_PREC, &p.lo - th, Round::Down).0.to_f64_round(Round::Down);
        Verdict { status, margin, product: p }
    }
}

#[derive(Clone, Debug)]
pub struct Verdict {
    pub status: Status,
    /// Certified lower bound of `product − threshold`.
    pub margin: f64,
    pub product: Bound,
}

/// Checks over a shared pool of `Π_r(tuple)` references.
#[derive(Default)]
pub struct CheckSet {
    pub refs: Vec<(usize, Vec<u64>)>,
    index: HashMap<(usize, Vec<u64>), usize>,
    pub checks: Vec<Check>,
}

impl CheckSet {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn pi(&mut self, r: usize, tuple: &[u64]) -> usize {
        let key = (r, tuple.to_vec());
        if let Some(&i) = self.index.get(&key) {
            return i;
        }
        self.refs.push(key.clone());
        self.index.insert(key, self.refs.len() - 1);
        self.refs.len() - 1
    }

    pub fn push(&mut self, refs: Vec<usize>, threshold: Rational, strict: bool, tuple: &[u64]) -> usize {
        self.checks.push(Check { refs, threshold, strict, tuple: tuple.to_vec() });
        self.checks.len() - 1
    }

    pub fn len(&self) -> usize {
        self.checks.len()
    }

    pub fn is_empty(&self) -> bool {
        self.checks.is_empty()
    }
}

/// `G̃_{r,k}(head)` at `T`, for callers outside a table.
pub fn g_tilde(cf: &ContinuedFraction, r: usize, k: u64, head: &[u64], t: u64) -> Result<Enclosure> {
    PiEngine::new(cf)?.g_tilde(&GKey { r, k, head: head.to_vec() }, t)
}

/// Enclosure of `Π_r(tuple)` at `T`; the empty product is exactly 1.
pub fn pi_lower(cf: &ContinuedFraction, r: usize, tuple: &[u64], t: u64) -> Result<Enclosure> {
    let e = PiEngine::new(cf)?;
    if tuple.len() != e.arity() {
        return Err(Error::Domain(format!("Π takes {} digits, got {}", e.arity(), tuple.len())));
    }
    e.pi_keys(r, tuple)
        .iter()
        .try_fold(Enclosure::one(BOUND_PREC), |acc, k| Ok(acc.mul(&e.g_tilde(k, t)?)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cf::is_admissible;

    fn cf(s: &str) -> ContinuedFraction {
        s.parse().unwrap()
    }

    #[test]
    fn enumeration_matches_admissibility() {
        let a = cf("[0;(5,4)]");
        for r in 0..2 {
            let tuples = admissible_tuples(&a, r, 4);
            let brute: Vec<Vec<u64>> = (0..6u64.pow(4))
                .map(|mut n| (0..4).map(|_| { let d = n % 6; n /= 6; d }).collect::<Vec<u64>>())
                .filter(|t| is_admissible(t, r, &a))
                .collect();
            assert_eq!(tuples.len(), brute.len());
            assert!(tuples.iter().all(|t| is_admissible(t, r, &a)));
        }
    }

    #[test]
    fn empty_product_is_exactly_one() {
        let a = cf("[0;(5,4)]");
        let e = PiEngine::new(&a).unwrap();
        assert!(e.pi_keys(0, &[0, 0, 3, 1]).is_empty());
        assert!(e.pi_keys(1, &[0, 1, 2, 0]).is_empty());
        let p = pi_lower(&a, 0, &[0, 0, 3, 1], 100).unwrap();
        assert_eq!(p, Enclosure::one(BOUND_PREC));
    }
}
