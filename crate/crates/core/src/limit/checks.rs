//! The criterion `G_r(α, 0) < 1`, the threshold conjectures
//! for `[0;(1,a)]` and `[0;(2,a)]`, and the data behind the `G_0` curves
//! for `[0;(6,a)]`.

use std::str::FromStr;

use rayon::prelude::*;
use serde::Serialize;

use super::{g_enclosure, GEnclosure, LimitFunctionSpec};
use crate::cf::ContinuedFraction;
use crate::error::{Error, Result};
use crate::real::Real;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    Fires,
    DoesNotFire,
    Undecided,
}

#[derive(Clone, Debug, Serialize)]
pub struct TheoremBReport {
    pub alpha: String,
    pub t: u64,
    /// `G_r(α, 0)` for each residue.
    pub values: Vec<GEnclosure>,
    pub verdict: Verdict,
    /// Residue certified below 1, if any.
    pub fired_at: Option<usize>,
}

/// Encloses `G_r(α, 0)` for every residue and decides whether some value is
/// certified below 1 (the criterion fires) or all are certified above.
pub fn theorem_b_check(cf: &ContinuedFraction, t: u64) -> Result<TheoremBReport> {
    let l = cf.period_len()?;
    let values: Vec<GEnclosure> = (0..l)
        .map(|r| g_enclosure(&LimitFunctionSpec::new(cf, r)?, &Real::zero(), t))
        .collect::<Result<_>>()?;
    let fired_at = values.iter().position(|g| g.hi_f64() < 1.0 && g.value.hi() < &1);
    let verdict = if fired_at.is_some() {
        Verdict::Fires
    } else if values.iter().all(|g| g.value.lo() > &1) {
        Verdict::DoesNotFire
    } else {
        Verdict::Undecided
    };
    Ok(TheoremBReport { alpha: cf.to_string(), t, values, verdict, fired_at })
}

#[derive(Clone, Debug, Serialize)]
pub struct RemarkCase {
    pub alpha: String,
    pub a2: u64,
    pub value: GEnclosure,
    /// `Some(true)` if certified below 1, `Some(false)` if certified above.
    pub below_one: Option<bool>,
    pub expected_below: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct RemarkReport {
    pub cases: Vec<RemarkCase>,
    pub undecided: usize,
    pub mismatches: usize,
}

/// `G_1([0;(1,a₂)], 0) < 1 ⇔ a₂ ≥ 4` and `G_1([0;(2,a₂)], 0) < 1 ⇔ a₂ ≥ 5`
/// for `a₂ = 1..9`. Each case doubles `T` (up to `16·t`) until the
/// comparison with 1 is decided.
pub fn remark_conjectures(t: u64) -> Result<RemarkReport> {
    let jobs: Vec<(u64, u64)> = [1u64, 2].iter().flat_map(|&a1| (1..=9).map(move |a2| (a1, a2))).collect();
    let cases: Vec<RemarkCase> = jobs
        .par_iter()
        .map(|&(a1, a2)| {
            let cf = ContinuedFraction::pure(&[a1, a2])?;
            // a collapsed period (a₁ = a₂) has ℓ = 1 and both residues agree
            let r = 1 % cf.period_len()?;
            let spec = LimitFunctionSpec::new(&cf, r)?;
            let mut tt = t;
            let value = loop {
                let g = g_enclosure(&spec, &Real::zero(), tt);
                let decided = matches!(&g, Ok(g) if !g.value.contains_f64(1.0));
                let retry = tt * 2 <= 16 * t;
                match g {
                    Ok(g) if decided || !retry => break g,
                    Err(Error::TooSmall(_)) if retry => {}
                    Err(e) => return Err(e),
                    Ok(_) => {}
                }
                tt *= 2;
            };
            let below_one = if value.value.hi() < &1 {
                Some(true)
            } else if value.value.lo() > &1 {
                Some(false)
            } else {
                None
            };
            let expected_below = if a1 == 1 { a2 >= 4 } else { a2 >= 5 };
            Ok(RemarkCase { alpha: cf.to_string(), a2, value, below_one, expected_below })
        })
        .collect::<Result<_>>()?;
    let undecided = cases.iter().filter(|c| c.below_one.is_none()).count();
    let mismatches = cases.iter().filter(|c| c.below_one.is_some_and(|b| b != c.expected_below)).count();
    Ok(RemarkReport { cases, undecided, mismatches })
}

#[derive(Clone, Debug, Serialize)]
pub struct Figure6aRow {
    pub a: u64,
    pub eps: f64,
    pub lo: f64,
    pub hi: f64,
}

/// `G_0([0;(6,a)], ε)` enclosures for `a ∈ {2,3,4,5}` on `steps + 1`
/// equally spaced `ε ∈ [lo, hi]` (rational grid points).
pub fn figure6a(t: u64, lo: f64, hi: f64, steps: u32) -> Result<Vec<Figure6aRow>> {
    let mut rows = Vec::new();
    for a in 2..=5u64 {
        let cf = ContinuedFraction::from_str(&format!("[0;(6,{a})]"))?;
        let spec = LimitFunctionSpec::new(&cf, 0)?;
        let pts: Vec<Figure6aRow> = (0..=steps)
            .into_par_iter()
            .map(|j| {
                let x = if steps == 0 { lo } else { lo + (hi - lo) * j as f64 / steps as f64 };
                let q = rug::Rational::from_f64(x).ok_or_else(|| Error::Domain("non-finite ε".into()))?;
                let g = g_enclosure(&spec, &Real::Exact(crate::cf::QuadraticSurd::from_rational(&q)), t)?;
                Ok(Figure6aRow { a, eps: x, lo: g.lo_f64(), hi: g.hi_f64() })
            })
            .collect::<Result<_>>()?;
        rows.extend(pts);
    }
    Ok(rows)
}
