//! Limit functions `G_r`: convergence of the level products, scalar
//! oracles for `g_n`, consistency across truncation lengths and the
//! endpoint bound on zero-free intervals.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use sudler_core::limit::{g_bound_on_interval, g_enclosure, g_factor, g_truncated, theorem_b_check, LimitFunctionSpec, Verdict};
use sudler_core::sudler::{exact_eps, sudler_perturbed_with, EvalOptions};
use sudler_core::{ContinuedFraction, Enclosure, Real};

fn spec(s: &str, r: usize) -> LimitFunctionSpec {
    LimitFunctionSpec::new(&s.parse().unwrap(), r).unwrap()
}

fn overlap(a: &Enclosure, b: &Enclosure) -> bool {
    a.lo_f64() <= b.hi_f64() && b.lo_f64() <= a.hi_f64()
}

/// `g_n(ε)` in f64 straight from the definition.
fn g_scalar(c: f64, beta: f64, n: u64, eps: f64) -> f64 {
    let frac = (n as f64 * beta).fract();
    let x = c * (frac - 0.5) / n as f64;
    (1.0 - x).powi(2) - ((eps + c / 2.0) / n as f64).powi(2)
}

#[test]
fn level_products_converge_to_the_limit() {
    let opts = EvalOptions { prec: 128, direct_limit: 1 << 23, head: 1 << 23 };
    for s in ["[0;(6,5)]", "[0;(5,4)]", "[0;(2)]"] {
        let cf: ContinuedFraction = s.parse().unwrap();
        let l = cf.period_len().unwrap();
        let conv = cf.convergents(30).unwrap();
        for r in 0..l {
            let sp = LimitFunctionSpec::new(&cf, r).unwrap();
            for (num, den) in [(-1i64, 20i64), (0, 1), (1, 20)] {
                let g = g_enclosure(&sp, &exact_eps(num, den), 20_000).unwrap();
                let mid = 0.5 * (g.lo_f64() + g.hi_f64());
                let mut last = f64::INFINITY;
                for k in (r..).step_by(l).skip_while(|&k| k < 2) {
                    if conv.q(k).to_u64().unwrap() > 1 << 19 {
                        break;
                    }
                    let p = sudler_perturbed_with(&cf, k, &exact_eps(num, den), &opts).unwrap();
                    let dist = (p.mid_f64() - mid).abs();
                    // the error is O(1/q_k) on top of the enclosure width
                    let slack = 50.0 / conv.q(k).to_f64() + g.value.width_f64();
                    assert!(dist < slack.max(last), "{s} r={r} k={k} ε={num}/{den}: {dist}");
                    last = dist;
                }
                assert!(last < 5e-3, "{s} r={r}: {last}");
            }
        }
    }
}

#[test]
fn factors_match_the_scalar_oracle() {
    let mut rng = ChaCha8Rng::seed_from_u64(21);
    for s in ["[0;(6,5)]", "[0;(1)]", "[0;(1,4)]", "[0;3,(6,5,5)]"] {
        let cf: ContinuedFraction = s.parse().unwrap();
        for r in 0..cf.period_len().unwrap() {
            let sp = LimitFunctionSpec::new(&cf, r).unwrap();
            let (c, beta) = (sp.c().to_f64(), sp.sigma().to_f64());
            for _ in 0..200 {
                let n = rng.gen_range(1..2000u64);
                let num = rng.gen_range(-999..1000i64);
                let g = g_factor(&sp, n, &exact_eps(num, 1000)).unwrap();
                let want = g_scalar(c, beta, n, num as f64 / 1000.0);
                assert!((g.mid_f64() - want).abs() < 1e-12, "{s} r={r} n={n}");
                // lower bound valid for |ε| < 1
                let nf = n as f64;
                assert!(g.lo_f64() >= 1.0 - 2.0 / nf - 4.0 / (nf * nf), "{s} r={r} n={n}");
            }
        }
    }
}

#[test]
fn truncated_products_match_a_log_sum() {
    let sp = spec("[0;(6,5)]", 1);
    let (c, beta) = (sp.c().to_f64(), sp.sigma().to_f64());
    for (num, t) in [(0i64, 1000u64), (-30, 5000), (40, 200)] {
        let eps = num as f64 / 1000.0;
        let log: f64 = (1..=t).map(|n| g_scalar(c, beta, n, eps).abs().ln()).sum();
        let want = 2.0 * std::f64::consts::PI * (eps + c).abs() * log.exp();
        let got = g_truncated(&sp, &exact_eps(num, 1000), t);
        assert!(((got.mid_f64() - want) / want).abs() < 1e-10, "ε={eps} T={t}");
    }
    // the prefactor vanishes at ε = −C(r)
    let zero = g_truncated(&sp, &Real::Exact(-sp.c().clone()), 500);
    assert!(zero.lo_f64() == 0.0 && zero.hi_f64() < 1e-40, "{zero}");
}

#[test]
fn enclosures_agree_across_truncation_lengths() {
    for (s, r) in [("[0;(6,5)]", 0), ("[0;(6,2)]", 0), ("[0;(7)]", 0), ("[0;(1)]", 0)] {
        let sp = spec(s, r);
        for num in [-50i64, 0, 70] {
            let eps = exact_eps(num, 1000);
            let encs: Vec<_> = [1000u64, 4000, 16_000, 64_000].iter().map(|&t| g_enclosure(&sp, &eps, t).unwrap()).collect();
            for a in &encs {
                for b in &encs {
                    assert!(overlap(&a.value, &b.value), "{s} ε={num}: T={} vs T={}", a.t, b.t);
                }
            }
            let (w0, w1) = (encs[0].value.width_f64(), encs[3].value.width_f64());
            assert!(w1 < w0 / 4.0, "{s} ε={num}: {w0} → {w1}");
        }
    }
}

#[test]
fn endpoint_minimum_bounds_the_interior() {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let specs = [spec("[0;(6,5)]", 0), spec("[0;(6,5)]", 1), spec("[0;(5,4)]", 0), spec("[0;(3)]", 0)];
    for case in 0..100 {
        let sp = &specs[case % specs.len()];
        // zero-free range (−C, z₊), with a margin
        let lo_edge = -sp.c().to_f64() + 0.02;
        let hi_edge = sp.zeros().iter().map(|z| z.to_f64()).filter(|&z| z > 0.0).fold(0.95f64, f64::min) - 0.02;
        let to_num = |x: f64| (x * 1000.0).round() as i64;
        let (x, y) = (rng.gen_range(lo_edge..hi_edge), rng.gen_range(lo_edge..hi_edge));
        let (a, b) = (to_num(x.min(y)), to_num(x.max(y)));
        if a >= b {
            continue;
        }
        let bound = g_bound_on_interval(sp, &exact_eps(a, 1000), &exact_eps(b, 1000), 2000, false).unwrap();
        assert!(bound.upper.is_none());
        for _ in 0..3 {
            let m = rng.gen_range(a..=b);
            let g = g_enclosure(sp, &exact_eps(m, 1000), 2000).unwrap();
            assert!(g.hi_f64() >= bound.lower.lo_f64(), "case {case}: G({m}/1000) below the endpoint minimum");
        }
    }
    // an interval straddling −C(r) is refused
    let sp = &specs[0];
    let c = sp.c().to_f64();
    let a = exact_eps(-((c + 0.01) * 1000.0) as i64, 1000);
    assert!(g_bound_on_interval(sp, &a, &exact_eps(0, 1), 1000, false).is_err());
}

#[test]
fn criterion_verdicts_on_known_examples() {
    let fires = |s: &str| theorem_b_check(&s.parse().unwrap(), 20_000).unwrap();
    let seven = fires("[0;(7)]");
    assert_eq!(seven.verdict, Verdict::Fires);
    assert!(seven.values[0].hi_f64() < 0.97);
    assert_eq!(fires("[0;(4,1)]").verdict, Verdict::Fires);
    assert_eq!(fires("[0;(1)]").verdict, Verdict::DoesNotFire);
    assert_eq!(fires("[0;(2)]").verdict, Verdict::DoesNotFire);
}
