//! Tail digit sequences `(b_{i+1}, b_{i+2}, …)` feeding `ε′_{r,k}`.

use std::fmt;
use std::sync::Arc;

use rand::Rng;

use crate::cf::{is_admissible, ContinuedFraction};

/// Digits `β_1, β_2, …` (1-based) with a uniform bound. `support` is the
/// last possibly nonzero position, if any.
#[derive(Clone)]
pub struct DigitStream {
    generator: Arc<dyn Fn(usize) -> u64 + Send + Sync>,
    bound: u64,
    support: Option<usize>,
    label: String,
}

impl fmt::Debug for DigitStream {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "DigitStream({})", self.label)
    }
}

impl DigitStream {
    pub fn new(bound: u64, generator: impl Fn(usize) -> u64 + Send + Sync + 'static) -> Self {
        DigitStream { generator: Arc::new(generator), bound, support: None, label: "custom".into() }
    }

    /// The periodic stream `(p_1, …, p_m, p_1, …)`.
    pub fn periodic(period: &[u64]) -> Self {
        assert!(!period.is_empty(), "empty period");
        let p = period.to_vec();
        let bound = *p.iter().max().unwrap();
        let label = format!("periodic{p:?}");
        let support = (bound == 0).then_some(0);
        DigitStream { generator: Arc::new(move |j| p[(j - 1) % p.len()]), bound, support, label }
    }

    pub fn zeros() -> Self {
        DigitStream { generator: Arc::new(|_| 0), bound: 0, support: Some(0), label: "zeros".into() }
    }

    pub fn ones() -> Self {
        let mut s = DigitStream::periodic(&[1]);
        s.label = "ones".into();
        s
    }

    /// `digits` followed by zeros.
    pub fn finite(digits: &[u64]) -> Self {
        let d = digits.to_vec();
        let bound = d.iter().copied().max().unwrap_or(0);
        let support = d.iter().rposition(|&x| x != 0).map_or(0, |p| p + 1);
        let label = format!("finite{d:?}");
        DigitStream { generator: Arc::new(move |j| d.get(j - 1).copied().unwrap_or(0)), bound, support: Some(support), label }
    }

    /// `β_j`, `j ≥ 1`.
    pub fn get(&self, j: usize) -> u64 {
        assert!(j >= 1, "streams are 1-based");
        (self.generator)(j)
    }

    pub fn bound(&self) -> u64 {
        self.bound
    }

    /// Last position that may be nonzero; `None` for infinite support.
    pub fn support(&self) -> Option<usize> {
        self.support
    }

    pub fn prefix(&self, len: usize) -> Vec<u64> {
        (1..=len).map(|j| self.get(j)).collect()
    }

    /// The stream `β_{s+1}, β_{s+2}, …`.
    pub fn shifted(&self, s: usize) -> DigitStream {
        let g = self.generator.clone();
        DigitStream {
            generator: Arc::new(move |j| g(j + s)),
            bound: self.bound,
            support: self.support.map(|m| m.saturating_sub(s)),
            label: format!("{}>>{s}", self.label),
        }
    }

    /// Whether the first `len` digits, read as `b_{i+1}, b_{i+2}, …` with
    /// `i` of residue `r`, are admissible.
    pub fn is_admissible_prefix(&self, cf: &ContinuedFraction, r: usize, len: usize) -> bool {
        let Ok(l) = cf.period_len() else { return false };
        // the tuple starts at b_{i+1}, i.e. at b_{i'−1} with i' = i + 2
        is_admissible(&self.prefix(len), (r + 2) % l, cf)
    }
}

/// A random admissible digit block `b_{i}, …, b_{i+len−1}` for `i` of
/// residue `r`, preceded by the digit `prev` (use 0 when unconstrained).
/// With `bias`, zeros and ones are drawn half the time so that the sparse
/// patterns show up often.
pub fn random_admissible<R: Rng>(cf: &ContinuedFraction, r: usize, len: usize, prev: u64, bias: bool, rng: &mut R) -> Vec<u64> {
    let mut out = Vec::with_capacity(len);
    let mut last = prev;
    for t in 0..len {
        let a = cf.period_digit(r as i64 + t as i64 + 1).expect("periodic expansion");
        let max = if last != 0 { a - 1 } else { a };
        let b = if bias && rng.gen_bool(0.5) { rng.gen_range(0..=max.min(1)) } else { rng.gen_range(0..=max) };
        out.push(b);
        last = b;
    }
    out
}

/// A random admissible stream `b_{i+1}, …` for `i` of residue `r`: `len`
/// random digits, zeros afterwards.
pub fn random_stream<R: Rng>(cf: &ContinuedFraction, r: usize, len: usize, bias: bool, rng: &mut R) -> DigitStream {
    let l = cf.period_len().expect("periodic expansion");
    let digits = random_admissible(cf, (r + 1) % l, len, 0, bias, rng);
    let mut s = DigitStream::finite(&digits);
    s.label = format!("random[{len}]");
    s
}
