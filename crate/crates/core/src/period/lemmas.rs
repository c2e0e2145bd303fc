//! Certified case analyses for `[0;(5,4)]` (tuples of four digits, pairs of
//! `Π`'s) and `[0;(6,5,5)]` (tuples of five digits, triples of `Π`'s), and
//! the grouping `M_i = K_{3i+1}K_{3i+2}K_{3i+3}` replayed on sampled `N`.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rug::Rational;
use serde::Serialize;
use serde_json::json;

use super::pi::{admissible_tuples, Bound, CheckSet, PiEngine, Verdict, T_MAX, T_START};
use super::stream::random_admissible;
use crate::cf::{ContinuedFraction, OstrowskiDigits};
use crate::error::Result;
use crate::report::{CaseResult, Status, VerificationReport};

const MAX_WITNESSES: usize = 64;

#[derive(Clone, Debug)]
pub struct LemmaOptions {
    pub t_start: u64,
    pub t_max: u64,
    /// Sampled `N` for the grouping check.
    pub samples: usize,
    /// Ostrowski digits per sample.
    pub depth: usize,
    pub seed: u64,
    /// Attach every `Π_r(tuple)` bound to the report.
    pub include_table: bool,
}

impl Default for LemmaOptions {
    fn default() -> Self {
        LemmaOptions { t_start: T_START, t_max: T_MAX, samples: 200, depth: 60, seed: 2024, include_table: true }
    }
}

/// Threshold in thousandths.
fn th(milli: i64) -> Rational {
    Rational::from((milli, 1000))
}

fn fmt_th(milli: i64) -> String {
    format!("{}", milli as f64 / 1000.0)
}

/// A named group of checks inside one [`CheckSet`].
struct Property {
    id: String,
    relation: String,
    checks: Vec<usize>,
}

struct Builder {
    set: CheckSet,
    props: Vec<Property>,
}

impl Builder {
    fn new() -> Self {
        Builder { set: CheckSet::new(), props: Vec::new() }
    }

    fn property(&mut self, id: &str, relation: String) -> usize {
        self.props.push(Property { id: id.into(), relation, checks: Vec::new() });
        self.props.len() - 1
    }

    /// `∏ Π_{r_j}(window_j) ≷ θ` where window `j` starts at `offsets[j]`.
    fn add(&mut self, prop: usize, tuple: &[u64], factors: &[(usize, usize)], arity: usize, milli: i64, strict: bool) {
        let refs = factors.iter().map(|&(r, off)| self.set.pi(r, &tuple[off..off + arity])).collect();
        let c = self.set.push(refs, th(milli), strict, tuple);
        self.props[prop].checks.push(c);
    }
}

#[derive(Serialize)]
struct Witness {
    tuple: Vec<u64>,
    lower: f64,
    upper: Option<f64>,
}

fn witness(tuple: &[u64], b: &Bound) -> Witness {
    Witness { tuple: tuple.to_vec(), lower: b.lo_f64(), upper: b.hi.as_ref().map(|_| b.hi_f64()) }
}

/// Cases for one property. Tuples whose product is empty (exactly 1) and
/// misses a threshold above 1 are listed in their own case.
fn property_cases(p: &Property, set: &CheckSet, verdicts: &[Verdict]) -> Vec<CaseResult> {
    let mut main: Vec<usize> = Vec::new();
    let mut empty: Vec<usize> = Vec::new();
    for &c in &p.checks {
        let v = &verdicts[c];
        if v.product.empty && v.status != Status::Pass {
            empty.push(c);
        } else {
            main.push(c);
        }
    }
    let mut cases = Vec::new();
    let status_of = |ids: &[usize]| {
        if ids.iter().any(|&c| verdicts[c].status == Status::Fail) {
            Status::Fail
        } else if ids.iter().any(|&c| verdicts[c].status == Status::Undecided) {
            Status::Undecided
        } else {
            Status::Pass
        }
    };
    let collect = |ids: &[usize], s: Status| -> Vec<Witness> {
        ids.iter()
            .filter(|&&c| verdicts[c].status == s)
            .take(MAX_WITNESSES)
            .map(|&c| witness(&set.checks[c].tuple, &verdicts[c].product))
            .collect()
    };
    let worst = main.iter().copied().min_by(|&a, &b| verdicts[a].margin.total_cmp(&verdicts[b].margin));
    let margin = worst.map(|c| verdicts[c].margin);
    cases.push(
        CaseResult::new(p.id.clone(), status_of(&main), margin).with_detail(json!({
            "relation": p.relation,
            "tuples": main.len(),
            "worst": worst.map(|c| witness(&set.checks[c].tuple, &verdicts[c].product)),
            "failed": collect(&main, Status::Fail),
            "undecided": collect(&main, Status::Undecided),
        })),
    );
    if !empty.is_empty() {
        let exact_one = empty.iter().all(|&c| verdicts[c].product.lo == 1 && verdicts[c].product.hi.as_ref().is_some_and(|h| *h == 1));
        let status = if exact_one { Status::Pass } else { Status::Fail };
        let tuples: Vec<&Vec<u64>> = empty.iter().take(MAX_WITNESSES).map(|&c| &set.checks[c].tuple).collect();
        cases.push(CaseResult::new(format!("{} [empty products]", p.id), status, None).with_detail(json!({
            "note": "every factor is an empty product, so the value is exactly 1; the strict threshold above 1 is not met, and only ≥ 1 is used downstream",
            "tuples": empty.len(),
            "examples": tuples,
        })));
    }
    cases
}

fn run(engine: &mut PiEngine, b: &Builder) -> Result<(Vec<CaseResult>, Vec<Verdict>)> {
    let verdicts = engine.settle(&b.set)?;
    let cases = b.props.iter().flat_map(|p| property_cases(p, &b.set, &verdicts)).collect();
    Ok((cases, verdicts))
}

fn empty_case(engine: &PiEngine, id: &str) -> CaseResult {
    let l = engine.period_len();
    let mut count = 0;
    let mut bad = Vec::new();
    for r in 0..l {
        for t in admissible_tuples(engine.cf(), r, engine.arity()).into_iter().filter(|t| t[0] == 0 && t[1] == 0) {
            count += 1;
            if !engine.pi_keys(r, &t).is_empty() {
                bad.push(t);
            }
        }
    }
    let status = if bad.is_empty() { Status::Pass } else { Status::Fail };
    CaseResult::new(id, status, None).with_detail(json!({ "tuples": count, "nonempty": bad }))
}

fn base_report(campaign: &str, engine: &PiEngine, opts: &LemmaOptions) -> VerificationReport {
    let (w0, w1) = (0..engine.period_len())
        .map(|r| {
            let (lo, hi) = engine.window(r);
            (lo.to_f64(), hi.to_f64())
        })
        .unzip::<f64, f64, Vec<f64>, Vec<f64>>();
    VerificationReport::new(campaign)
        .param("alpha", engine.cf().to_string())
        .param("t_start", opts.t_start)
        .param("t_max", opts.t_max)
        .param("window_lower", w0)
        .param("window_upper", w1)
}

fn attach_table(report: &mut VerificationReport, engine: &mut PiEngine, opts: &LemmaOptions) -> Result<()> {
    let table = engine.table()?;
    let n = table.rows.len();
    let max_t = table.rows.iter().map(|r| r.t).max().unwrap_or(0);
    let detail = if opts.include_table { json!(table) } else { json!({ "rows": n }) };
    report.push(CaseResult::new("table", Status::Pass, None).with_detail(detail));
    report.set_param("table_rows", n);
    report.set_param("table_max_t", max_t);
    Ok(())
}

/// `[0;(5,4)]`: properties (i)–(v) of the `Π_r` over every admissible
/// 4-tuple, then `Π_1(a,b,c,d)·Π_0(b,c,d,e) > 1.01` over every admissible
/// 5-tuple with `(a,b,c) ≠ 0`.
pub fn verify_lemma_54() -> Result<VerificationReport> {
    verify_lemma_54_with(&LemmaOptions::default())
}

pub fn verify_lemma_54_with(opts: &LemmaOptions) -> Result<VerificationReport> {
    let cf: ContinuedFraction = "[0;(5,4)]".parse()?;
    let mut engine = PiEngine::new(&cf)?.with_t_range(opts.t_start, opts.t_max);
    let mut b = Builder::new();
    let t0 = admissible_tuples(&cf, 0, 4);
    let t1 = admissible_tuples(&cf, 1, 4);

    let p = b.property("(i) Π_0 > 1.01", format!("> {}", fmt_th(1010)));
    for t in t0.iter().filter(|t| (t[0], t[1]) != (0, 0)) {
        b.add(p, t, &[(0, 0)], 4, 1010, true);
    }
    let p = b.property("(i) a≠0: Π_0 > 1.22", format!("> {}", fmt_th(1220)));
    for t in t0.iter().filter(|t| t[0] != 0) {
        b.add(p, t, &[(0, 0)], 4, 1220, true);
    }
    let p = b.property("(ii) a=0, b≠0: Π_1 > 1.01", format!("> {}", fmt_th(1010)));
    for t in t1.iter().filter(|t| t[0] == 0 && t[1] != 0) {
        b.add(p, t, &[(1, 0)], 4, 1010, true);
    }
    let p = b.property("(iii) a≠0, b≠1: Π_1 > 1.01", format!("> {}", fmt_th(1010)));
    for t in t1.iter().filter(|t| t[0] != 0 && t[1] != 1) {
        b.add(p, t, &[(1, 0)], 4, 1010, true);
    }
    let p = b.property("(iv) a≠0, b=1: Π_1 > 0.84", format!("> {}", fmt_th(840)));
    for t in t1.iter().filter(|t| t[0] != 0 && t[1] == 1) {
        b.add(p, t, &[(1, 0)], 4, 840, true);
    }
    let p = b.property("corollary: Π_1·Π_0 > 1.01", format!("> {}", fmt_th(1010)));
    for t in admissible_tuples(&cf, 1, 5).iter().filter(|t| t[..3] != [0, 0, 0]) {
        b.add(p, t, &[(1, 0), (0, 1)], 4, 1010, true);
    }

    let mut report = base_report("period-2 [0;(5,4)]", &engine, opts);
    let (cases, _) = run(&mut engine, &b)?;
    report.extend(cases);
    report.push(empty_case(&engine, "(v) (a,b)=(0,0): Π_0 = Π_1 = 1"));
    attach_table(&mut report, &mut engine, opts)?;
    Ok(report)
}

/// The pattern that may push a triple below 1.001.
fn low_pattern(t: &[u64]) -> bool {
    t[0] != 0 && t[1] == 1 && t[2] == 1 && t[3] == 1 && t[4] == 0 && t[5] >= 3
}

const TRIPLE: [(usize, usize); 3] = [(1, 0), (2, 1), (0, 2)];
const SIXFOLD: [(usize, usize); 6] = [(1, 0), (2, 1), (0, 2), (1, 3), (2, 4), (0, 5)];

/// `[0;(6,5,5)]`: properties (i)–(vi) over every admissible 5-tuple and the
/// triple products over 7-tuples, the corollary on triples below 1.001 and
/// the compensating six-fold products, and the `M_i` grouping on sampled
/// Ostrowski expansions.
pub fn verify_lemma_655() -> Result<VerificationReport> {
    verify_lemma_655_with(&LemmaOptions::default())
}

pub fn verify_lemma_655_with(opts: &LemmaOptions) -> Result<VerificationReport> {
    let cf: ContinuedFraction = "[0;(6,5,5)]".parse()?;
    let mut engine = PiEngine::new(&cf)?.with_t_range(opts.t_start, opts.t_max);
    let mut b = Builder::new();
    let t5: Vec<Vec<Vec<u64>>> = (0..3).map(|r| admissible_tuples(&cf, r, 5)).collect();
    let nonzero = |t: &&Vec<u64>| (t[0], t[1]) != (0, 0);

    for (r, milli) in [(0usize, 1001i64), (1, 810), (2, 1001)] {
        let p = b.property(&format!("(i) Π_{r} > {}", fmt_th(milli)), format!("> {}", fmt_th(milli)));
        for t in t5[r].iter().filter(nonzero) {
            b.add(p, t, &[(r, 0)], 5, milli, true);
        }
    }
    let p = b.property("(i) a≠0, b≠1: Π_1 ≥ 1.001", format!(">= {}", fmt_th(1001)));
    for t in t5[1].iter().filter(|t| t[0] != 0 && t[1] != 1) {
        b.add(p, t, &[(1, 0)], 5, 1001, false);
    }
    for (r, milli) in [(2usize, 1250i64), (0, 1190)] {
        let p = b.property(&format!("(ii) a≠0, b≠1: Π_{r} ≥ {}", fmt_th(milli)), format!(">= {}", fmt_th(milli)));
        for t in t5[r].iter().filter(|t| t[0] != 0 && t[1] != 1) {
            b.add(p, t, &[(r, 0)], 5, milli, false);
        }
    }
    let p = b.property("(iii) a≠0, c≥1: Π_1 ≥ 0.85", format!(">= {}", fmt_th(850)));
    for t in t5[1].iter().filter(|t| t[0] != 0 && t[2] >= 1) {
        b.add(p, t, &[(1, 0)], 5, 850, false);
    }

    let t7 = admissible_tuples(&cf, 1, 7);
    let ones = |t: &&Vec<u64>| t[0] != 0 && t[1] == 1 && t[2] == 1 && t[3] == 1;
    let p = b.property("(iv) a≠0, e≠0 or f≤2: triple > 1.007", format!("> {}", fmt_th(1007)));
    for t in t7.iter().filter(ones).filter(|t| t[4] != 0 || t[5] <= 2) {
        b.add(p, t, &TRIPLE, 5, 1007, true);
    }
    let p = b.property("(v) a≠0, e=0: triple > 0.98", format!("> {}", fmt_th(980)));
    for t in t7.iter().filter(ones).filter(|t| t[4] == 0) {
        b.add(p, t, &TRIPLE, 5, 980, true);
    }
    // corollary (i): outside the pattern the triple is at least 1.001
    let p_out = b.property("corollary (i): triple ≥ 1.001 off the pattern", format!(">= {}", fmt_th(1001)));
    let p_in = b.property("corollary (i): triple > 0.98 on the pattern", format!("> {}", fmt_th(980)));
    for t in t7.iter().filter(|t| t[..4] != [0, 0, 0, 0]) {
        if low_pattern(t) {
            b.add(p_in, t, &TRIPLE, 5, 980, true);
        } else {
            b.add(p_out, t, &TRIPLE, 5, 1001, false);
        }
    }

    let mut report = base_report("period-3 [0;(6,5,5)]", &engine, opts);
    report.set_param("tuples5", t5.iter().map(Vec::len).collect::<Vec<_>>());
    report.set_param("tuples7", t7.len());
    let (cases, _) = run(&mut engine, &b)?;
    report.extend(cases);
    report.push(empty_case(&engine, "(vi) (a,b)=(0,0): Π_0 = Π_1 = Π_2 = 1"));

    // corollary (ii): triples not certified ≥ 1 extended by every admissible (h, i, j)
    let mut probe = CheckSet::new();
    for t in &t7 {
        let refs = TRIPLE.iter().map(|&(r, off)| probe.pi(r, &t[off..off + 5])).collect();
        probe.push(refs, th(1000), false, t);
    }
    let pv = engine.settle(&probe)?;
    let low: Vec<&Vec<u64>> = t7.iter().zip(&pv).filter(|(_, v)| v.status != Status::Pass).map(|(t, _)| t).collect();
    let mut b2 = Builder::new();
    let p = b2.property("corollary (ii): six-fold > 1 after a triple < 1", format!("> {}", fmt_th(1000)));
    // (g, h, i, j): g sits at residue 0, like the first digit of a tuple for Π_1
    let ext = admissible_tuples(&cf, 1, 4);
    for t in &low {
        for e in ext.iter().filter(|e| e[0] == t[6]) {
            let mut full = (*t).clone();
            full.extend_from_slice(&e[1..]);
            b2.add(p, &full, &SIXFOLD, 5, 1000, true);
        }
    }
    let (cases, _) = run(&mut engine, &b2)?;
    report.set_param("triples_below_one", low.len());
    report.extend(cases);

    report.push(grouping_case(&mut engine, opts)?);
    attach_table(&mut report, &mut engine, opts)?;
    Ok(report)
}

#[derive(Serialize)]
struct GroupingFailure {
    digits: Vec<u64>,
    j: usize,
    m_j: f64,
    m_next: Option<f64>,
}

/// `M_i = K_{3i+1}K_{3i+2}K_{3i+3}` with each `K` replaced by its `Π` lower
/// bound on random admissible expansions: every `M_i ≥ 0.98`, and each `j`
/// with `M_j < 1` has `M_j·M_{j+1} > 1` and `M_{j+1} ≥ 1`.
fn grouping_case(engine: &mut PiEngine, opts: &LemmaOptions) -> Result<CaseResult> {
    let cf = engine.cf().clone();
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    let mut samples = Vec::with_capacity(opts.samples);
    while samples.len() < opts.samples {
        let mut d = random_admissible(&cf, 0, opts.depth, 1, true, &mut rng);
        if samples.len() % 2 == 1 {
            // plant the low pattern at an aligned position
            let i = 3 * rng.gen_range(1..opts.depth / 3 - 3);
            let f = rng.gen_range(3..=5);
            let a = rng.gen_range(1..=5);
            d[i..i + 7].copy_from_slice(&[a, 1, 1, 1, 0, f, rng.gen_range(0..=4)]);
        }
        if OstrowskiDigits::new(d.clone()).is_legal(&cf) {
            samples.push(d);
        }
    }
    let keys: Vec<_> = samples
        .iter()
        .flat_map(|d| (0..d.len() - 4).map(move |s| ((s + 1) % 3, d[s..s + 5].to_vec())))
        .flat_map(|(r, t)| engine.pi_keys(r, &t))
        .collect();
    engine.ensure(keys.iter())?;

    let (mut groups, mut low, mut pairs) = (0usize, 0usize, 0usize);
    let mut worst = f64::INFINITY;
    let mut failures: Vec<GroupingFailure> = Vec::new();
    let mut undecided = 0usize;
    for d in &samples {
        let m_count = (d.len() - 7) / 3 + 1;
        let m: Vec<Bound> = (0..m_count)
            .map(|i| {
                TRIPLE.iter().fold(Bound::one(), |acc, &(r, off)| acc.mul(&engine.pi_bound(r, &d[3 * i + off..3 * i + off + 5])))
            })
            .collect();
        for (j, mj) in m.iter().enumerate() {
            groups += 1;
            worst = worst.min(mj.lo_f64());
            if mj.lo < 0.98 {
                failures.push(GroupingFailure { digits: d.clone(), j, m_j: mj.lo_f64(), m_next: None });
                continue;
            }
            if mj.lo >= 1 {
                continue;
            }
            low += 1;
            let Some(next) = m.get(j + 1) else {
                undecided += 1;
                continue;
            };
            pairs += 1;
            if !(mj.mul(next).lo > 1 && next.lo >= 1) {
                failures.push(GroupingFailure { digits: d.clone(), j, m_j: mj.lo_f64(), m_next: Some(next.lo_f64()) });
            }
        }
    }
    let status = if !failures.is_empty() {
        Status::Fail
    } else if undecided > 0 {
        Status::Undecided
    } else {
        Status::Pass
    };
    failures.truncate(MAX_WITNESSES);
    Ok(CaseResult::new("grouping M_j·M_(j+1) > 1", status, Some(worst - 0.98)).with_detail(json!({
        "samples": samples.len(),
        "depth": opts.depth,
        "groups": groups,
        "groups_below_one": low,
        "pairs_checked": pairs,
        "last_group_open": undecided,
        "min_m": worst,
        "failures": failures,
    })))
}

/// Runs the case analysis matching `alpha`.
pub fn verify_theorem3(alpha: &ContinuedFraction, opts: &LemmaOptions) -> Result<VerificationReport> {
    match (alpha.preperiod().is_empty(), alpha.period()) {
        (true, [5, 4]) => verify_lemma_54_with(opts),
        (true, [6, 5, 5]) => verify_lemma_655_with(opts),
        _ => Err(crate::error::Error::Domain(format!("no case analysis for {alpha}; use [0;(5,4)] or [0;(6,5,5)]"))),
    }
}
