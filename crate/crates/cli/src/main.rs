//! `sudler`: evaluation, limit functions, plot data and the verification
//! campaigns from the command line.

mod output;

use std::process::ExitCode;
use std::str::FromStr;
use std::time::Instant;

use clap::{Args, Parser, Subcommand};
use rug::{Integer, Rational};
use serde_json::json;

use sudler_core::criterion::{figure1, verify_theorem1, Theorem1Case};
use sudler_core::limit::{figure6a, g_enclosure, remark_conjectures, LimitFunctionSpec};
use sudler_core::period::{theorem2_demo, verify_theorem3, LemmaOptions, Theorem2Options};
use sudler_core::report::{CaseResult, Status, VerificationReport};
use sudler_core::sudler::{decompose, sudler, sudler_perturbed_with, EvalOptions};
use sudler_core::{ContinuedFraction, Error, QuadraticSurd, Real};

use output::{Format, Output};

/// Exit code for malformed input, kept apart from the report codes 1 and 2.
const EXIT_USAGE: u8 = 3;

#[derive(Parser, Debug)]
#[command(name = "sudler", version, about = "Certified Sudler products and liminf criteria")]
struct Cli {
    #[command(flatten)]
    run: RunConfig,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug, Clone)]
struct RunConfig {
    /// Working precision in bits.
    #[arg(long, global = true, env = "SUDLER_PRECISION", default_value_t = 128)]
    precision: u32,
    /// Worker threads (default: all cores).
    #[arg(long, global = true)]
    threads: Option<usize>,
    /// Output format; each command has its own default.
    #[arg(long, global = true, value_enum)]
    format: Option<Format>,
    /// Write to this file instead of stdout.
    #[arg(long, global = true)]
    output: Option<std::path::PathBuf>,
    /// Leave the wall-clock time out of reports, making them reproducible
    /// byte for byte.
    #[arg(long, global = true)]
    no_timing: bool,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// P_N(α), or P_{q_n}(α, ε) with --level.
    Eval {
        #[arg(long)]
        alpha: String,
        #[arg(long = "N", alias = "n-value")]
        n: Option<u64>,
        /// Convergent index n for the perturbed product P_{q_n}(α, ε).
        #[arg(long)]
        level: Option<usize>,
        #[arg(long, default_value = "0", allow_hyphen_values = true)]
        eps: String,
    },
    /// The factors of P_N(α) along the Ostrowski expansion of N.
    Decompose {
        #[arg(long)]
        alpha: String,
        #[arg(long = "N")]
        n: String,
    },
    /// Certified enclosure of the limit function G_r(α, ε).
    Limit {
        #[arg(long)]
        alpha: String,
        #[arg(long, default_value_t = 0)]
        r: usize,
        #[arg(long, default_value = "0", allow_hyphen_values = true)]
        eps: String,
        #[arg(long = "T", default_value_t = 100_000)]
        t: u64,
    },
    /// (x, y, F) on the grid x = j/R, y = (j+1)/R.
    Figure1 {
        #[arg(long = "T", default_value_t = 100)]
        t: u64,
        #[arg(long = "R", default_value_t = 100)]
        r: u64,
    },
    /// (a, ε, lo, hi) curves of G_0([0;(6,a)], ε) for a = 2..5.
    Figure6a {
        #[arg(long = "T", default_value_t = 10_000)]
        t: u64,
        #[arg(long, default_value_t = -0.1, allow_hyphen_values = true)]
        lo: f64,
        #[arg(long, default_value_t = 0.1, allow_hyphen_values = true)]
        hi: f64,
        #[arg(long, default_value_t = 40)]
        steps: u32,
    },
    /// Grid certificates for partial quotients ≥ 7.
    VerifyTheorem1 {
        /// Case to run: 7, 8, 9-18 or >=18; repeatable, default all.
        #[arg(long = "case")]
        cases: Vec<String>,
        /// Check every `scale`-th cell only; anything but 1 is a smoke run.
        #[arg(long, default_value_t = 1)]
        scale: u64,
    },
    /// The all-ones construction for [0;(6,5)].
    VerifyTheorem2 {
        #[arg(long, default_value_t = 40)]
        n: usize,
    },
    /// Lower-bound certificates for [0;(5,4)] or [0;(6,5,5)].
    VerifyTheorem3 {
        #[arg(long)]
        alpha: String,
        /// Sampled expansions for the grouping check.
        #[arg(long, default_value_t = 200)]
        samples: usize,
    },
    /// Where G_1([0;(1,a)], 0) and G_1([0;(2,a)], 0) cross 1.
    RemarkConjectures {
        #[arg(long = "T", default_value_t = 20_000)]
        t: u64,
    },
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let usage = e.use_stderr();
            let _ = e.print();
            return if usage { ExitCode::from(EXIT_USAGE) } else { ExitCode::SUCCESS };
        }
    };
    if let Some(n) = cli.run.threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(n.max(1)).build_global() {
            eprintln!("sudler: cannot size the thread pool: {e}");
        }
    }
    match run(&cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("sudler: {e}");
            ExitCode::from(match e {
                Failure::Input(_) => EXIT_USAGE,
                Failure::Io(_) => 1,
            })
        }
    }
}

#[derive(Debug)]
enum Failure {
    Input(Error),
    Io(std::io::Error),
}

impl std::fmt::Display for Failure {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Failure::Input(e) => write!(f, "{e}"),
            Failure::Io(e) => write!(f, "{e}"),
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Input(e)
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure::Io(e)
    }
}

fn run(cli: &Cli) -> Result<u8, Failure> {
    let cfg = &cli.run;
    let prec = cfg.precision.max(32);
    let out = Output::new(cfg.output.clone());
    match &cli.command {
        Command::Eval { alpha, n, level, eps } => {
            let cf = parse_cf(alpha)?;
            let value = match (n, level) {
                (Some(n), None) => sudler(&cf.value(prec), *n, prec),
                (None, Some(k)) => sudler_perturbed_with(&cf, *k, &parse_real(eps)?, &EvalOptions::with_prec(prec))?,
                _ => return Err(Error::Parse("give exactly one of --N and --level".into()).into()),
            };
            let width = value.hi_f64() - value.lo_f64();
            let doc = json!({
                "alpha": cf.to_string(), "N": n, "level": level, "eps": level.map(|_| eps),
                "lo": value.lo_f64(), "hi": value.hi_f64(),
                "log10width": (width > 0.0).then(|| width.log10()),
            });
            out.value(cfg.format.unwrap_or(Format::Json), &doc, &["lo", "hi", "log10width"])?;
            Ok(0)
        }
        Command::Decompose { alpha, n } => {
            let cf = parse_cf(alpha)?;
            let n = Integer::from_str(n).map_err(|_| Error::Parse(format!("bad N {n:?}")))?;
            let d = decompose(&cf, &n, &EvalOptions::with_prec(prec))?;
            match cfg.format.unwrap_or(Format::Json) {
                Format::Json => out.json(&d)?,
                f => out.rows(f, &["i", "c", "eps_lo", "eps_hi", "lo", "hi"], d.terms.iter().map(|t| {
                    let e = t.epsilon.to_enclosure(64);
                    vec![t.i.to_string(), t.c.to_string(), fmt(e.lo_f64()), fmt(e.hi_f64()), fmt(t.factor.lo_f64()), fmt(t.factor.hi_f64())]
                }))?,
            }
            Ok(0)
        }
        Command::Limit { alpha, r, eps, t } => {
            let cf = parse_cf(alpha)?;
            let spec = LimitFunctionSpec::with_prec(&cf, *r, prec)?;
            let g = g_enclosure(&spec, &parse_real(eps)?, *t)?;
            let doc = json!({
                "alpha": cf.to_string(), "r": r, "T": g.t, "eps": g.eps,
                "lo": g.lo_f64(), "hi": g.hi_f64(), "truncated": g.truncated, "e_value": g.e_value,
            });
            out.value(cfg.format.unwrap_or(Format::Json), &doc, &["lo", "hi"])?;
            Ok(0)
        }
        Command::Figure1 { t, r } => {
            let rows = figure1(*t, *r)?;
            match cfg.format.unwrap_or(Format::Csv) {
                Format::Json => out.json(&rows)?,
                f => out.rows(f, &["x", "y", "F"], rows.iter().map(|p| vec![fmt(p.x), fmt(p.y), fmt(p.f)]))?,
            }
            Ok(0)
        }
        Command::Figure6a { t, lo, hi, steps } => {
            let rows = if lo > hi { Vec::new() } else { figure6a(*t, *lo, *hi, *steps)? };
            match cfg.format.unwrap_or(Format::Csv) {
                Format::Json => out.json(&rows)?,
                f => out.rows(f, &["a", "eps", "lo", "hi"], rows.iter().map(|p| vec![p.a.to_string(), fmt(p.eps), fmt(p.lo), fmt(p.hi)]))?,
            }
            Ok(0)
        }
        Command::VerifyTheorem1 { cases, scale } => {
            let cases = if cases.is_empty() {
                Theorem1Case::ALL.to_vec()
            } else {
                cases.iter().map(|c| c.parse()).collect::<Result<Vec<Theorem1Case>, _>>()?
            };
            timed(cfg, &out, || {
                let mut r = verify_theorem1(&cases, *scale)?;
                r.set_param("scale", scale);
                Ok(r)
            })
        }
        Command::VerifyTheorem2 { n } => {
            let opts = Theorem2Options { n: *n, decay_lo: 10.min(*n), ..Default::default() };
            timed(cfg, &out, || theorem2_demo(&opts))
        }
        Command::VerifyTheorem3 { alpha, samples } => {
            let cf = parse_cf(alpha)?;
            let opts = LemmaOptions { samples: *samples, ..Default::default() };
            timed(cfg, &out, || verify_theorem3(&cf, &opts))
        }
        Command::RemarkConjectures { t } => timed(cfg, &out, || {
            let rep = remark_conjectures(*t)?;
            let mut report = VerificationReport::new("remark-conjectures").param("T", t);
            for c in rep.cases {
                let status = match c.below_one {
                    None => Status::Undecided,
                    Some(b) if b == c.expected_below => Status::Pass,
                    Some(_) => Status::Fail,
                };
                let margin = if c.expected_below { 1.0 - c.value.hi_f64() } else { c.value.lo_f64() - 1.0 };
                let id = format!("{} G_1(0) {} 1", c.alpha, if c.expected_below { "<" } else { ">" });
                report.push(CaseResult::new(id, status, Some(margin)).with_detail(&c.value));
            }
            Ok(report)
        }),
    }
}

/// Runs a campaign, stamps the wall clock unless disabled, writes the report
/// and maps its status to the exit code.
fn timed(cfg: &RunConfig, out: &Output, f: impl FnOnce() -> sudler_core::Result<VerificationReport>) -> Result<u8, Failure> {
    let start = Instant::now();
    let mut report = f()?;
    if !cfg.no_timing {
        report.wall_clock_s = Some(start.elapsed().as_secs_f64());
    }
    out.report(cfg.format.unwrap_or(Format::Json), &report)?;
    Ok(report.exit_code() as u8)
}

fn parse_cf(s: &str) -> Result<ContinuedFraction, Error> {
    s.parse()
}

/// `p/q`, an integer, or a decimal such as `-0.025`, read exactly.
fn parse_real(s: &str) -> Result<Real, Error> {
    let bad = || Error::Parse(format!("bad number {s:?}"));
    let s = s.trim();
    let q = if let Some((int, frac)) = s.split_once('.') {
        if frac.is_empty() || !frac.bytes().all(|b| b.is_ascii_digit()) {
            return Err(bad());
        }
        let neg = int.starts_with('-');
        let int = Integer::from_str(if int.is_empty() || int == "-" { "0" } else { int }).map_err(|_| bad())?;
        let den = Integer::from(Integer::u_pow_u(10, frac.len() as u32));
        let frac = Rational::from((Integer::from_str(frac).map_err(|_| bad())?, den));
        let mag = Rational::from(int.abs()) + frac;
        if neg { -mag } else { mag }
    } else if let Some((p, q)) = s.split_once('/') {
        let p = Integer::from_str(p).map_err(|_| bad())?;
        let q = Integer::from_str(q).map_err(|_| bad())?;
        if q == 0 {
            return Err(bad());
        }
        Rational::from((p, q))
    } else {
        Rational::from(Integer::from_str(s).map_err(|_| bad())?)
    };
    Ok(Real::Exact(QuadraticSurd::from_rational(&q)))
}

fn fmt(x: f64) -> String {
    format!("{x:.17e}")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn decimals_are_exact() {
        let Real::Exact(x) = parse_real("-0.025").unwrap() else { panic!() };
        assert_eq!(x, QuadraticSurd::from_rational(&Rational::from((-1, 40))));
        let Real::Exact(y) = parse_real("-.5").unwrap() else { panic!() };
        assert_eq!(y, QuadraticSurd::from_rational(&Rational::from((-1, 2))));
        assert!(parse_real("1.").is_err());
        assert!(parse_real("1/0").is_err());
    }
}
