//! Neighbourhoods of rationals with small denominators that contain no
//! point of `B(a, M)` (digits eventually bounded by `a`, `M ≥ 100`).

use rug::{Integer, Rational};
use serde::Serialize;

use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Window {
    #[serde(serialize_with = "ser_rational")]
    pub lo: Rational,
    #[serde(serialize_with = "ser_rational")]
    pub hi: Rational,
    pub label: String,
}

fn ser_rational<S: serde::Serializer>(q: &Rational, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&q.to_string())
}

impl Window {
    fn new(lo: Rational, hi: Rational, label: String) -> Self {
        Window { lo, hi, label }
    }

    fn around(center: Rational, left: Rational, right: Rational, label: String) -> Self {
        Window::new(Rational::from(&center - &left), center + right, label)
    }

    pub fn contains(&self, x: &Rational) -> bool {
        *x >= self.lo && *x <= self.hi
    }

    /// Whether `[u, v] ⊆ window`.
    pub fn covers(&self, u: &Rational, v: &Rational) -> bool {
        *u >= self.lo && *v <= self.hi
    }

    /// The cells `i` of a grid with `r` cells that lie wholly inside, as an
    /// inclusive range (empty when `lo > hi`).
    pub fn covered_cells(&self, r: u64) -> (i64, i64) {
        let lo = Rational::from(&self.lo * r).ceil();
        let hi = Rational::from(&self.hi * r).floor();
        let to_i = |q: Rational| q.numer().to_i64().unwrap_or(i64::MAX);
        (to_i(lo), to_i(hi) - 1)
    }
}

fn inv(n: u64) -> Rational {
    Rational::from((1, n))
}

/// The windows around `0`, `1`, `1/m`, `2/(2m+1)`, `3/(3m+1)`, `3/(3m+2)`
/// for `1 ≤ m ≤ m_max`, with `m_max ≤ a + 1`.
pub fn excluded_windows(a: u64, m_max: u64) -> Result<Vec<Window>> {
    if a < 2 {
        return Err(Error::Domain("exclusion windows need a ≥ 2".into()));
    }
    if m_max < 1 || m_max > a + 1 {
        return Err(Error::Domain(format!("need 1 ≤ m ≤ a + 1 = {}, got {m_max}", a + 1)));
    }
    let mut out = vec![
        Window::new(Rational::new(), inv(a + 1), format!("[0, 1/{}]", a + 1)),
        Window::new(Rational::from((a + 1, a + 2)), Rational::from(1), format!("[{}/{}, 1]", a + 1, a + 2)),
    ];
    for m in 1..=m_max {
        let r2 = inv(m * m * (a + 2));
        out.push(Window::around(Rational::from((1, m)), r2.clone(), r2, format!("1/{m}")));
        let d = 2 * m + 1;
        let r3 = inv(d * d * (a + 3));
        out.push(Window::around(Rational::from((2, d)), r3.clone(), r3, format!("2/{d}")));
        let d = 3 * m + 1;
        let r4 = inv(d * d * (a + 3));
        out.push(Window::around(Rational::from((3, d)), r4.clone(), r4, format!("3/{d}")));
        let d = 3 * m + 2;
        out.push(Window::around(
            Rational::from((3, d)),
            Rational::from((1, Integer::from(d * d * d) * (a + 3))),
            inv(d * d * (a + 3)),
            format!("3/{d}"),
        ));
    }
    Ok(out)
}

/// The windows for every admissible `m`, i.e. `m ≤ a + 1`.
pub fn all_windows(a: u64) -> Result<Vec<Window>> {
    excluded_windows(a, a + 1)
}

/// Sorted, merged inclusive ranges of grid cells lying wholly inside some
/// window.
pub fn excluded_cell_ranges(windows: &[Window], r: u64) -> Vec<(u64, u64)> {
    let mut ranges: Vec<(i64, i64)> = windows
        .iter()
        .map(|w| w.covered_cells(r))
        .map(|(lo, hi)| (lo.max(0), hi.min(r as i64 - 1)))
        .filter(|(lo, hi)| lo <= hi)
        .collect();
    ranges.sort_unstable();
    let mut merged: Vec<(u64, u64)> = Vec::new();
    for (lo, hi) in ranges {
        let (lo, hi) = (lo as u64, hi as u64);
        match merged.last_mut() {
            Some(last) if lo <= last.1 + 1 => last.1 = last.1.max(hi),
            _ => merged.push((lo, hi)),
        }
    }
    merged
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn outer_windows_for_eighteen() {
        let w = excluded_windows(18, 1).unwrap();
        assert_eq!(w[0].hi, Rational::from((1, 19)));
        assert_eq!(w[1].lo, Rational::from((19, 20)));
        // cells of [0, 1/19] on a grid of 2000 end just below ⌊2000/19⌋
        assert_eq!(w[0].covered_cells(2000), (0, 104));
    }

    #[test]
    fn asymmetric_radius() {
        let w = excluded_windows(7, 1).unwrap();
        let last = w.last().unwrap();
        assert_eq!(last.lo, Rational::from((3, 5)) - Rational::from((1, 1250)));
        assert_eq!(last.hi, Rational::from((3, 5)) + Rational::from((1, 250)));
    }

    #[test]
    fn straddling_cells_are_kept() {
        let w = Window::new(Rational::from((1, 4)), Rational::from((1, 2)), "t".into());
        assert_eq!(w.covered_cells(10), (3, 4));
        let merged = excluded_cell_ranges(&[w.clone(), Window::new(Rational::from((1, 2)), Rational::from((7, 10)), "u".into())], 10);
        assert_eq!(merged, vec![(3, 6)]);
    }
}
