//! The all-ones construction `N_n = Σ_{i=0}^{2n} q_i` for `[0;(6,5)]`: the
//! limiting pair bound, the finite pair bounds from the decomposition of
//! `P_{N_n}`, the decay of `P_{N_n}` in `n`, and the convergence
//! `ε_{i,k}(N_n) → ε′_{[i],k}` away from both ends.

use rayon::prelude::*;
use rug::Integer;
use serde::Serialize;
use serde_json::json;

use super::eps::eps_prime;
use super::stream::DigitStream;
use crate::cf::{ContinuedFraction, OstrowskiDigits};
use crate::error::{Error, Result};
use crate::interval::Enclosure;
use crate::limit::{g_enclosure_until, theorem_b_check, LimitFunctionSpec, Verdict as BVerdict};
use crate::real::Real;
use crate::report::{CaseResult, Status, VerificationReport};
use crate::sudler::{epsilon_ik, perturbed_detailed, EvalOptions};

const EPS_TERMS: usize = 400;
/// Tolerance for both `ε` and the factors when delimiting the mid-range.
const MID_TOL: f64 = 1e-3;

#[derive(Clone, Debug)]
pub struct Theorem2Options {
    /// Depth of the decomposed `N_n` for the finite pair bounds.
    pub n: usize,
    /// Depths compared for certified decay, `n_lo < n_hi`.
    pub decay_lo: usize,
    /// Pairs evaluated exactly before the certified tail takes over.
    pub head: u64,
    /// Head for the uncertified decay curve over `decay_lo..=n`.
    pub estimate_head: u64,
    /// Depth used for the preimage `[0;3,(6,5)]`.
    pub preimage_n: usize,
    pub prec: u32,
}

impl Default for Theorem2Options {
    fn default() -> Self {
        Theorem2Options { n: 40, decay_lo: 10, head: 1 << 16, estimate_head: 1 << 11, preimage_n: 20, prec: 96 }
    }
}

/// `N_n = Σ_{i=0}^{m} q_i` with every Ostrowski digit 1.
pub fn all_ones(cf: &ContinuedFraction, m: usize) -> Result<(Integer, OstrowskiDigits)> {
    let d = OstrowskiDigits::new(vec![1; m + 1]);
    if !d.is_legal(cf) {
        return Err(Error::Domain(format!("all-ones digits are not legal for {cf}")));
    }
    Ok((d.value(cf)?, d))
}

/// One factor `P_{q_i}(ε_{i,0}(N))` of an all-ones `N`.
#[derive(Clone, Debug, Serialize)]
pub struct LevelFactor {
    pub i: usize,
    pub residue: usize,
    pub epsilon: f64,
    pub value: Enclosure,
    pub estimate: f64,
}

/// Every factor of `P_N` for `N` with Ostrowski digits `d`, all digits ≤ 1.
fn level_factors(cf: &ContinuedFraction, d: &OstrowskiDigits, opts: &EvalOptions) -> Result<Vec<LevelFactor>> {
    if d.digits().iter().any(|&b| b > 1) {
        return Err(Error::Domain("level factors are built for digits 0 and 1".into()));
    }
    let levels: Vec<usize> = (0..=d.top()).filter(|&i| d.get(i) == 1).collect();
    levels
        .into_par_iter()
        .map(|i| {
            let eps = epsilon_ik(cf, d, i, 0, opts.prec)?;
            let v = perturbed_detailed(cf, i, &eps, opts)?;
            Ok(LevelFactor { i, residue: cf.residue(i)?, epsilon: eps.to_f64(), value: v.enclosure, estimate: v.estimate })
        })
        .collect()
}

fn product(fs: &[LevelFactor], prec: u32) -> Enclosure {
    fs.iter().fold(Enclosure::one(prec), |acc, f| acc.mul(&f.value))
}

/// Deviations `|ε_{i,k}(N) − ε′_{[i],k}|` along one expansion.
#[derive(Clone, Debug, Serialize)]
pub struct EpsConvergence {
    pub n: usize,
    pub k: u64,
    pub delta: f64,
    /// Upper bounds of the deviations, index `i`.
    pub deviation: Vec<f64>,
    /// Every `i` with `i0 < i < n − j0` is within `δ`.
    pub i0: Option<usize>,
    pub j0: Option<usize>,
    /// Least-squares slopes of `ln(deviation)` against the distance to the
    /// bottom and to the top; negative means geometric decay.
    pub slope_bottom: f64,
    pub slope_top: f64,
}

/// Scans `ε_{i,k}(N)` for `N = Σ_{i=0}^{n} β_{i+1} q_i` against the limiting
/// values along the same digits and reports `I₀, J₀` for `δ`.
pub fn eps_convergence_test(cf: &ContinuedFraction, tail: &DigitStream, k: u64, delta: f64, n: usize) -> Result<EpsConvergence> {
    let digits = OstrowskiDigits::new(tail.prefix(n + 1));
    if !digits.is_legal(cf) {
        return Err(Error::Domain(format!("the digits {:?}… are not a legal expansion", &digits.digits()[..n.min(8) + 1])));
    }
    let prec = 128;
    let deviation: Vec<f64> = (0..=n)
        .into_par_iter()
        .map(|i| {
            let e = epsilon_ik(cf, &digits, i, k, prec)?.to_enclosure(prec);
            let r = cf.residue(i)?;
            let lim = eps_prime(cf, r, k, &tail.shifted(i + 1), EPS_TERMS, prec)?;
            Ok(e.sub(&lim).abs().hi_f64())
        })
        .collect::<Result<_>>()?;
    Ok(summarize(n, k, delta, deviation))
}

fn summarize(n: usize, k: u64, delta: f64, deviation: Vec<f64>) -> EpsConvergence {
    let mid = n / 2;
    let i0 = (0..=mid).rev().find(|&i| deviation[i] >= delta);
    let j0 = (mid + 1..=n).find(|&i| deviation[i] >= delta).map(|i| n - i);
    let fit = |pts: Vec<(f64, f64)>| {
        let pts: Vec<(f64, f64)> = pts.into_iter().filter(|p| p.1 > 0.0 && p.1.is_finite()).map(|(x, y)| (x, y.ln())).collect();
        let m = pts.len() as f64;
        if m < 2.0 {
            return f64::NAN;
        }
        let (sx, sy) = pts.iter().fold((0.0, 0.0), |a, p| (a.0 + p.0, a.1 + p.1));
        let (mx, my) = (sx / m, sy / m);
        let (num, den) = pts.iter().fold((0.0, 0.0), |a, p| (a.0 + (p.0 - mx) * (p.1 - my), a.1 + (p.0 - mx).powi(2)));
        num / den
    };
    let slope_bottom = fit((0..=mid).map(|i| (i as f64, deviation[i])).collect());
    let slope_top = fit((mid + 1..=n).map(|i| ((n - i) as f64, deviation[i])).collect());
    EpsConvergence { n, k, delta, deviation, i0, j0, slope_bottom, slope_top }
}

fn eps_case(id: &str, c: &EpsConvergence) -> CaseResult {
    let ok = c.slope_bottom < 0.0 && c.slope_top < 0.0;
    let status = if ok { Status::Pass } else { Status::Fail };
    CaseResult::new(id, status, None).with_detail(json!({
        "delta": c.delta, "n": c.n, "I0": c.i0, "J0": c.j0,
        "slope_bottom": c.slope_bottom, "slope_top": c.slope_top,
    }))
}

/// `ε′_{r,0}` along the all-ones tail.
pub fn ones_eps_prime(cf: &ContinuedFraction, r: usize, prec: u32) -> Result<Enclosure> {
    eps_prime(cf, r, 0, &DigitStream::ones(), EPS_TERMS, prec)
}

/// Limiting values `G_r(ε′_{r,0})` for every residue and their product.
fn limiting_pair(cf: &ContinuedFraction) -> Result<(Vec<Enclosure>, Vec<Enclosure>, Enclosure)> {
    let l = cf.period_len()?;
    let mut eps = Vec::new();
    let mut gs = Vec::new();
    for r in 0..l {
        let e = ones_eps_prime(cf, r, 128)?;
        let spec = LimitFunctionSpec::new(cf, r)?;
        let g = g_enclosure_until(&spec, &Real::Interval(e.clone()), 1 << 12, 1e-4, 1 << 20)?;
        eps.push(e);
        gs.push(g.value);
    }
    let prod = gs.iter().fold(Enclosure::one(96), |a, g| a.mul(g));
    Ok((eps, gs, prod))
}

/// Outermost levels, from the bottom and from the top, whose factor estimate
/// is not within `tol` of its limit `G_{[i]}(ε′_{[i],0})`. `P_{q_i}` converges to
/// the limit function only as `q_i` grows, so a level can have `ε` already
/// close while its factor is not.
fn factor_cuts(cf: &ContinuedFraction, fs: &[LevelFactor], gs: &[Enclosure], tol: f64) -> Result<(Option<usize>, Option<usize>)> {
    let top = fs.iter().map(|f| f.i).max().unwrap_or(0);
    let mid = top / 2;
    let mut bad = Vec::new();
    for f in fs {
        let g = &gs[cf.residue(f.i)?];
        let mid = 0.5 * (g.lo_f64() + g.hi_f64());
        if (f.estimate - mid).abs() >= tol {
            bad.push(f.i);
        }
    }
    let i0 = bad.iter().copied().filter(|&i| i <= mid).max();
    let j0 = bad.iter().copied().filter(|&i| i > mid).min().map(|i| top - i);
    Ok((i0, j0))
}

/// Levels `(i0, top − j0)` bounding the mid-range: the larger of the cuts
/// from `ε` convergence and from factor convergence.
fn mid_range(eps: &EpsConvergence, factors: (Option<usize>, Option<usize>), top: usize) -> (usize, usize) {
    let i0 = eps.i0.max(factors.0).unwrap_or(0);
    let j0 = eps.j0.max(factors.1).unwrap_or(0);
    (i0, top - j0)
}

/// Pair products `P_{q_m}·P_{q_{m+1}}` with `[m] = 1`, over levels strictly
/// between `i0` and `top − j0`.
fn pair_case(id: &str, fs: &[LevelFactor], i0: usize, top_cut: usize, limit: f64) -> CaseResult {
    let mut worst: Option<(usize, Enclosure)> = None;
    let mut count = 0;
    let mut failed = Vec::new();
    let mut undecided = Vec::new();
    for w in fs.windows(2) {
        let (a, b) = (&w[0], &w[1]);
        if a.residue != 1 || b.i != a.i + 1 || a.i <= i0 || b.i >= top_cut {
            continue;
        }
        count += 1;
        let p = a.value.mul(&b.value);
        if p.lo_f64() >= limit {
            failed.push(a.i);
        } else if p.hi_f64() >= limit {
            undecided.push(a.i);
        }
        if worst.as_ref().map_or(true, |(_, x)| p.hi() > x.hi()) {
            worst = Some((a.i, p));
        }
    }
    let status = if !failed.is_empty() {
        Status::Fail
    } else if !undecided.is_empty() || count == 0 {
        Status::Undecided
    } else {
        Status::Pass
    };
    let margin = worst.as_ref().map(|(_, p)| limit - p.hi_f64());
    CaseResult::new(id, status, margin).with_detail(json!({
        "pairs": count, "levels": [i0, top_cut], "bound": limit,
        "worst": worst.map(|(i, p)| json!({ "levels": [i, i + 1], "product": p })),
        "failed": failed, "undecided": undecided,
    }))
}

/// The full demonstrator for `[0;(6,5)]`.
pub fn theorem2_demo(opts: &Theorem2Options) -> Result<VerificationReport> {
    let cf: ContinuedFraction = "[0;(6,5)]".parse()?;
    let n = opts.n;
    let mut report = VerificationReport::new("all-ones [0;(6,5)]")
        .param("n", n)
        .param("head", opts.head)
        .param("estimate_head", opts.estimate_head)
        .param("decay_lo", opts.decay_lo);

    // limiting values
    let (eps, gs, prod) = limiting_pair(&cf)?;
    let status = if prod.hi_f64() < 0.997 { Status::Pass } else if prod.lo_f64() >= 0.997 { Status::Fail } else { Status::Undecided };
    report.push(CaseResult::new("limiting pair G_0·G_1 < 0.997", status, Some(0.997 - prod.hi_f64())).with_detail(json!({
        "eps_prime": eps, "g": gs, "product": prod,
    })));

    // ε convergence along the all-ones digits
    let mut coarse = None;
    for delta in [MID_TOL, 1e-5] {
        let c = eps_convergence_test(&cf, &DigitStream::ones(), 0, delta, 2 * n)?;
        report.push(eps_case(&format!("eps convergence δ={delta:e}"), &c));
        if delta == MID_TOL {
            coarse = Some(c);
        }
    }
    let coarse = coarse.expect("the coarse tolerance is scanned");

    // finite pairs at depth n, certified
    let eval = EvalOptions { prec: opts.prec, direct_limit: 1 << 15, head: opts.head };
    let (_, d_hi) = all_ones(&cf, 2 * n)?;
    let f_hi = level_factors(&cf, &d_hi, &eval)?;
    let (lo, hi) = mid_range(&coarse, factor_cuts(&cf, &f_hi, &gs, MID_TOL)?, 2 * n);
    report.push(pair_case("finite pairs < 0.999", &f_hi, lo, hi, 0.999));

    // certified decay between the two depths
    let (_, d_lo) = all_ones(&cf, 2 * opts.decay_lo)?;
    let p_lo = product(&level_factors(&cf, &d_lo, &eval)?, opts.prec);
    let p_hi = product(&f_hi, opts.prec);
    let gap = p_lo.lo_f64() - p_hi.hi_f64();
    report.push(CaseResult::from_margin(format!("P_N(n={n}) < P_N(n={})", opts.decay_lo), gap, p_hi.lo() > p_lo.hi()).with_detail(
        json!({ "lower_depth": p_lo, "upper_depth": p_hi }),
    ));

    // uncertified decay curve
    let est_opts = EvalOptions { head: opts.estimate_head, ..eval };
    let curve: Vec<(usize, f64)> = (opts.decay_lo..=n)
        .map(|m| {
            let (_, d) = all_ones(&cf, 2 * m)?;
            let fs = level_factors(&cf, &d, &est_opts)?;
            Ok((m, fs.iter().map(|f| f.estimate.ln()).sum::<f64>()))
        })
        .collect::<Result<_>>()?;
    let rises: Vec<usize> = curve.windows(2).filter(|w| w[1].1 >= w[0].1).map(|w| w[1].0).collect();
    let ratio = {
        let m = curve.len() as f64;
        let mx = curve.iter().map(|c| c.0 as f64).sum::<f64>() / m;
        let my = curve.iter().map(|c| c.1).sum::<f64>() / m;
        let num: f64 = curve.iter().map(|c| (c.0 as f64 - mx) * (c.1 - my)).sum();
        let den: f64 = curve.iter().map(|c| (c.0 as f64 - mx).powi(2)).sum();
        (num / den).exp()
    };
    let status = if rises.is_empty() && ratio < 1.0 { Status::Pass } else { Status::Fail };
    report.push(CaseResult::new("decay of P_N (estimates)", status, Some(1.0 - ratio)).with_detail(json!({
        "ratio_per_step": ratio,
        "rises": rises,
        "log_p": curve,
    })));

    // preimage under the Gauss map
    let pre: ContinuedFraction = "[0;3,(6,5)]".parse()?;
    let pn = opts.preimage_n;
    let (_, dp) = all_ones(&pre, 2 * pn)?;
    let fp = level_factors(&pre, &dp, &eval)?;
    let c = eps_convergence_test(&pre, &DigitStream::ones(), 0, MID_TOL, 2 * pn)?;
    let (_, pre_gs, _) = limiting_pair(&pre)?;
    let (lo, hi) = mid_range(&c, factor_cuts(&pre, &fp, &pre_gs, MID_TOL)?, 2 * pn);
    let mut case = pair_case("preimage [0;3,(6,5)] pairs < 0.999", &fp, lo, hi, 0.999);
    case.detail["n"] = json!(pn);
    report.push(case);

    // the criterion G_r(α, 0) < 1 on [0;(4,1)]
    let b = theorem_b_check(&"[0;(4,1)]".parse()?, 1 << 14)?;
    let status = match b.verdict {
        BVerdict::Fires => Status::Pass,
        BVerdict::DoesNotFire => Status::Fail,
        BVerdict::Undecided => Status::Undecided,
    };
    report.push(CaseResult::new("[0;(4,1)] has some G_r(0) < 1", status, None).with_detail(&b));
    Ok(report)
}
