//! The grid criterion: `F` and its majorant against exact Birkhoff sums,
//! Pinner's bound on random rationals, and the exclusion windows against
//! random bounded-digit expansions.

use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rug::{Integer, Rational};

use sudler_core::criterion::{all_windows, f_exact, f_grid_exact, figure1, g_majorant, pinner_bound, verify_grid, CriterionParams, GridChecker, GridF};
use sudler_core::report::Status;

/// `Σ_{n≤ℓ} (1/2 − {nβ})` for `β = p/q`, exactly.
fn birkhoff(p: &Integer, q: &Integer, l: u64) -> Rational {
    let mut s = Integer::new();
    for n in 1..=l {
        let r = Integer::from(p * n) % q;
        s += Integer::from(q - Integer::from(&r * 2u32));
    }
    Rational::from((s, Integer::from(q * 2u32)))
}

/// `[0; d_1, …, d_m]` as `p/q`.
fn from_digits(d: &[u64]) -> (Integer, Integer) {
    let (mut p, mut q) = (Integer::from(0), Integer::from(1));
    for &a in d.iter().rev() {
        // x ↦ 1/(a + x)
        let np = q.clone();
        q = Integer::from(&q * a) + &p;
        p = np;
    }
    (p, q)
}

#[test]
fn fixed_point_f_matches_naive_exact_f() {
    let mut rng = ChaCha8Rng::seed_from_u64(17);
    for _ in 0..100 {
        let t = rng.gen_range(1..300u64);
        let r = rng.gen_range(2..500u64);
        let i = rng.gen_range(0..r);
        let x = Rational::from((i, r));
        let y = Rational::from((i + 1, r));
        let naive = f_exact(t, &x, &y).unwrap();
        assert_eq!(f_grid_exact(t, i, r).unwrap(), naive, "T={t} cell {i}/{r}");
        for prec in [64, 96, 192] {
            let e = GridF::new(t).enclosure(i, r, prec);
            assert!(e.contains_rational(&naive), "T={t} cell {i}/{r} at {prec} bits");
        }
        // more bits never widen the enclosure
        let (w96, w192) = (GridF::new(t).enclosure(i, r, 96).width_f64(), GridF::new(t).enclosure(i, r, 192).width_f64());
        assert!(w192 <= w96);
    }
}

#[test]
fn majorant_dominates_birkhoff_sums() {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    for _ in 0..60 {
        let r = rng.gen_range(2..200u64);
        let i = rng.gen_range(0..r);
        let (x, y) = (Rational::from((i, r)), Rational::from((i + 1, r)));
        let den = Integer::from(r) * 1_000_003u64;
        let (p_lo, p_hi) = (Integer::from(i) * 1_000_003u64, Integer::from(i + 1) * 1_000_003u64);
        for _ in 0..3 {
            let p = Integer::from(rng.gen_range(p_lo.to_u64().unwrap()..=p_hi.to_u64().unwrap()));
            let mut s = Rational::new();
            for l in 1..=500u64 {
                let r_n = Integer::from(&p * l) % &den;
                s += Rational::from((Integer::from(&den - Integer::from(&r_n * 2u32)), Integer::from(&den * 2u32)));
                if l % 25 == 0 || l < 20 {
                    let g = g_majorant(l, &x, &y).unwrap();
                    assert!(s <= g, "ℓ={l} β={p}/{den} cell {i}/{r}");
                }
            }
        }
    }
}

#[test]
fn pinner_bound_holds_on_random_rationals() {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let mut checked = 0;
    while checked < 500 {
        let a = rng.gen_range(2..12u64);
        let m = rng.gen_range(2..9usize);
        let digits: Vec<u64> = (0..m).map(|_| rng.gen_range(1..=a)).collect();
        let (p, q) = from_digits(&digits);
        if q > 20_000 {
            continue;
        }
        checked += 1;
        let qn = q.to_u64().unwrap();
        let mut s = Integer::new();
        for l in 1..qn {
            let r = Integer::from(&p * l) % &q;
            s += Integer::from(&q - Integer::from(&r * 2u32));
            let abs = Rational::from((s.clone().abs(), Integer::from(&q * 2u32)));
            if l % 7 == 0 || l < 50 || l + 3 > qn {
                let bound = pinner_bound(&Integer::from(l), a, 64).unwrap();
                assert!(bound.lo_f64() >= abs.to_f64(), "{digits:?} ℓ={l}");
            }
        }
        // spot check against the slow helper
        assert_eq!(birkhoff(&p, &q, qn - 1).abs(), Rational::from((s.abs(), Integer::from(&q * 2u32))));
    }
}

#[test]
fn exclusion_windows_avoid_bounded_expansions() {
    let mut rng = ChaCha8Rng::seed_from_u64(100);
    for _ in 0..2000 {
        let a = rng.gen_range(2..20u64);
        let windows = all_windows(a).unwrap();
        let digits: Vec<u64> = (0..90).map(|_| rng.gen_range(1..=a)).collect();
        for j in 0..50 {
            // the j-th Gauss iterate, truncated at least 40 digits deep
            let (p, q) = from_digits(&digits[j..]);
            let x = Rational::from((p, q));
            for w in &windows {
                assert!(!w.contains(&x), "a={a} iterate {j} in window {}", w.label);
            }
        }
    }
}

#[test]
fn grid_verdicts_are_reproducible() {
    let windows = all_windows(18).unwrap();
    let params = CriterionParams::new(18, 18, 4000, 2000);
    let checker = GridChecker::new(params.clone(), &windows).unwrap();
    let summary = checker.scan(0, 2000, 1).unwrap();
    assert!(summary.failed.is_empty() && summary.undecided.is_empty());
    assert_eq!(summary.verified + summary.excluded, 2000);
    let report = verify_grid(params, 0, 2000, &windows).unwrap();
    assert_eq!(report.status, Status::Pass);
    // the margin of each cell is reproduced when the cell is asked for alone
    let min = summary.min_margin.unwrap();
    let cell = checker.cell(summary.argmin.unwrap()).unwrap();
    assert_eq!(cell.margin, Some(min));
}

#[test]
fn figure1_peaks_at_the_origin() {
    let (t, r) = (100u64, 100u64);
    let rows = figure1(t, r).unwrap();
    let cap = ((t + 1) as f64).ln() / 2.0;
    let first = rows[0].f;
    for row in &rows {
        assert!(row.f <= first && row.f <= cap, "x={}", row.x);
    }
    // near 0 the majorant is ℓ/2 for most ℓ
    assert!(first > 0.5 * cap);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn majorant_grows_by_at_most_a_half(l in 1u64..300, i in 0u64..50, r in 51u64..120) {
        let (x, y) = (Rational::from((i, r)), Rational::from((i + 1, r)));
        let g0 = g_majorant(l, &x, &y).unwrap();
        let g1 = g_majorant(l + 1, &x, &y).unwrap();
        let step = Rational::from(&g1 - &g0);
        prop_assert!(step <= Rational::from((1, 2)) && step > Rational::from((-1, 2)));
    }
}
