//! Cell-by-cell certification of
//! `F(T, i/R, (i+1)/R) + E(T, a_K) < b((a_next + [0;(a_K,1)] + i/R)/2π)`.

use rayon::prelude::*;
use rug::Rational;
use serde::Serialize;

use super::majorant::GridF;
use super::windows::{excluded_cell_ranges, Window};
use super::{b_fn, e_bound_u64};
use crate::cf::{surd_from_periodic_cf, ContinuedFraction};
use crate::error::{Error, Result};
use crate::interval::Enclosure;
use crate::report::{CaseResult, Status, VerificationReport};

/// Bits used for `b` and `E`; `F` is exact up to `T·2⁻⁶³`.
const GRID_PREC: u32 = 96;
const BLOCK: u64 = 2048;
/// Witness lists are truncated to this many cells.
const MAX_WITNESSES: usize = 64;

#[derive(Clone, Debug, Serialize)]
pub struct CriterionParams {
    /// Digit bound entering `E(T, a_K)` and the tail `[0;(a_K,1)]`.
    pub a_k: u64,
    /// The digit `a_{k+1}` on the right-hand side.
    pub a_next: u64,
    pub t: u64,
    pub r: u64,
    /// Required certified gap.
    pub eps_margin: f64,
}

impl CriterionParams {
    pub fn new(a_k: u64, a_next: u64, t: u64, r: u64) -> Self {
        CriterionParams { a_k, a_next, t, r, eps_margin: 0.0 }
    }

    fn validate(&self) -> Result<()> {
        if self.t < 1 || self.r < 1 {
            return Err(Error::Domain("grid needs T ≥ 1 and R ≥ 1".into()));
        }
        if self.a_k < 2 {
            return Err(Error::Domain("grid needs a_K ≥ 2".into()));
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum CellStatus {
    Verified,
    Excluded,
    Failed,
    Undecided,
}

#[derive(Clone, Debug, Serialize)]
pub struct GridCell {
    pub i: u64,
    #[serde(serialize_with = "ser_q")]
    pub x: Rational,
    #[serde(serialize_with = "ser_q")]
    pub y: Rational,
    pub status: CellStatus,
    /// Lower bound of `b(·) − F − E`; absent for excluded cells.
    pub margin: Option<f64>,
}

fn ser_q<S: serde::Serializer>(q: &Rational, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&q.to_string())
}

#[derive(Clone, Debug, Default, Serialize)]
pub struct GridSummary {
    pub i_lo: u64,
    pub i_hi: u64,
    pub stride: u64,
    pub checked: u64,
    pub verified: u64,
    pub excluded: u64,
    pub failed: Vec<u64>,
    pub undecided: Vec<u64>,
    pub min_margin: Option<f64>,
    pub argmin: Option<u64>,
}

impl GridSummary {
    pub fn status(&self) -> Status {
        if !self.failed.is_empty() {
            Status::Fail
        } else if !self.undecided.is_empty() {
            Status::Undecided
        } else {
            Status::Pass
        }
    }

    fn merge(mut self, other: GridSummary) -> GridSummary {
        self.checked += other.checked;
        self.verified += other.verified;
        self.excluded += other.excluded;
        self.failed.extend(other.failed);
        self.undecided.extend(other.undecided);
        if let Some(m) = other.min_margin {
            if self.min_margin.map_or(true, |s| m < s) {
                self.min_margin = Some(m);
                self.argmin = other.argmin;
            }
        }
        self
    }
}

/// The parts of the inequality shared by every cell.
pub struct GridChecker {
    params: CriterionParams,
    f: GridF,
    e: Enclosure,
    /// `a_next + [0;(a_K,1)]`.
    base: Enclosure,
    inv_two_pi: Enclosure,
    excluded: Vec<(u64, u64)>,
}

impl GridChecker {
    pub fn new(params: CriterionParams, exclusions: &[Window]) -> Result<Self> {
        params.validate()?;
        let p = GRID_PREC;
        let tail = surd_from_periodic_cf(&ContinuedFraction::pure(&[params.a_k, 1])?)?;
        let base = Enclosure::from_i64(params.a_next as i64, p).add(&tail.to_enclosure(p));
        let inv_two_pi = Enclosure::pi(p).mul_i64(2).recip();
        Ok(GridChecker {
            e: e_bound_u64(params.t, params.a_k, p)?,
            f: GridF::new(params.t),
            excluded: excluded_cell_ranges(exclusions, params.r),
            params,
            base,
            inv_two_pi,
        })
    }

    pub fn params(&self) -> &CriterionParams {
        &self.params
    }

    pub fn is_excluded(&self, i: u64) -> bool {
        let k = self.excluded.partition_point(|&(lo, _)| lo <= i);
        k > 0 && self.excluded[k - 1].1 >= i
    }

    /// Right-hand side `b((a_next + [0;(a_K,1)] + i/R)/2π)`.
    pub fn rhs(&self, i: u64) -> Result<Enclosure> {
        let x = Enclosure::ratio(i as i64, self.params.r as i64, GRID_PREC);
        b_fn(&self.base.add(&x).mul(&self.inv_two_pi))
    }

    /// `(F + E, margin enclosure)` for cell `i`.
    pub fn evaluate(&self, i: u64) -> Result<(Enclosure, Enclosure)> {
        let lhs = self.f.enclosure(i, self.params.r, GRID_PREC).add(&self.e);
        let margin = self.rhs(i)?.sub(&lhs);
        Ok((lhs, margin))
    }

    pub fn cell(&self, i: u64) -> Result<GridCell> {
        let r = self.params.r;
        if i >= r {
            return Err(Error::Domain(format!("cell {i} outside a grid of {r}")));
        }
        let (x, y) = (Rational::from((i, r)), Rational::from((i + 1, r)));
        if self.is_excluded(i) {
            return Ok(GridCell { i, x, y, status: CellStatus::Excluded, margin: None });
        }
        let (_, m) = self.evaluate(i)?;
        let status = if m.lo_f64() > self.params.eps_margin && m.lo() > &0 {
            CellStatus::Verified
        } else if m.hi() < &0 {
            CellStatus::Failed
        } else {
            CellStatus::Undecided
        };
        Ok(GridCell { i, x, y, status, margin: Some(m.lo_f64()) })
    }

    /// Checks every `stride`-th cell of `[i_lo, i_hi]` (always including `i_lo`).
    pub fn scan(&self, i_lo: u64, i_hi: u64, stride: u64) -> Result<GridSummary> {
        let stride = stride.max(1);
        let i_hi = i_hi.min(self.params.r - 1);
        let empty = GridSummary { i_lo, i_hi, stride, ..Default::default() };
        if i_lo > i_hi {
            return Ok(empty);
        }
        let count = (i_hi - i_lo) / stride + 1;
        let blocks: Vec<u64> = (0..count.div_ceil(BLOCK)).collect();
        let parts: Vec<GridSummary> = blocks
            .par_iter()
            .map(|&b| {
                let mut s = GridSummary::default();
                for j in (b * BLOCK)..((b + 1) * BLOCK).min(count) {
                    let cell = self.cell(i_lo + j * stride)?;
                    s.checked += 1;
                    match cell.status {
                        CellStatus::Excluded => s.excluded += 1,
                        CellStatus::Verified => s.verified += 1,
                        CellStatus::Failed => s.failed.push(cell.i),
                        CellStatus::Undecided => s.undecided.push(cell.i),
                    }
                    if let Some(m) = cell.margin {
                        if s.min_margin.map_or(true, |x| m < x) {
                            s.min_margin = Some(m);
                            s.argmin = Some(cell.i);
                        }
                    }
                }
                Ok(s)
            })
            .collect::<Result<_>>()?;
        // ordered fold keeps the result independent of scheduling
        Ok(parts.into_iter().fold(empty, GridSummary::merge))
    }
}

/// Certifies the inequality on the cells `i_lo..=i_hi` not wholly inside an
/// exclusion window.
pub fn verify_grid(params: CriterionParams, i_lo: u64, i_hi: u64, exclusions: &[Window]) -> Result<VerificationReport> {
    verify_grid_strided("grid", params, i_lo, i_hi, exclusions, 1)
}

pub(crate) fn verify_grid_strided(
    id: &str,
    params: CriterionParams,
    i_lo: u64,
    i_hi: u64,
    exclusions: &[Window],
    stride: u64,
) -> Result<VerificationReport> {
    let checker = GridChecker::new(params.clone(), exclusions)?;
    let mut s = checker.scan(i_lo, i_hi, stride)?;
    let status = s.status();
    s.failed.truncate(MAX_WITNESSES);
    s.undecided.truncate(MAX_WITNESSES);
    let case = CaseResult::new("cells", status, s.min_margin).with_detail(&s);
    let mut report = VerificationReport::new(id)
        .param("a_k", params.a_k)
        .param("a_next", params.a_next)
        .param("T", params.t)
        .param("R", params.r)
        .param("i_lo", i_lo)
        .param("i_hi", s.i_hi)
        .param("stride", s.stride)
        .param("windows", exclusions.len());
    report.push(case);
    if stride > 1 {
        report = report.non_certifying();
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn half_cell_has_large_margin() {
        let c = GridChecker::new(CriterionParams::new(18, 9, 200, 2000), &[]).unwrap();
        let cell = c.cell(1000).unwrap();
        assert_eq!(cell.status, CellStatus::Verified);
        assert!(cell.margin.unwrap() > 0.5, "{cell:?}");
    }

    #[test]
    fn exclusion_lookup() {
        let w = super::super::windows::excluded_windows(18, 1).unwrap();
        let c = GridChecker::new(CriterionParams::new(18, 9, 20, 2000), &w).unwrap();
        assert!(c.is_excluded(0) && c.is_excluded(104));
        assert!(!c.is_excluded(105) && !c.is_excluded(1899));
        assert!(c.is_excluded(1900) && c.is_excluded(1999));
    }
}
