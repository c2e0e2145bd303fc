//! Literal syntax: `[a0;a1,…,ap,(b1,…,bl)]`, plain integers, and `p/q`.

use std::str::FromStr;

use rug::{Integer, Rational};

use super::ContinuedFraction;
use crate::error::{Error, Result};

impl FromStr for ContinuedFraction {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        if let Some(body) = s.strip_prefix('[') {
            let body = body.strip_suffix(']').ok_or_else(|| err(&s, "missing ']'"))?;
            return parse_bracketed(body).map_err(|e| match e {
                Error::Parse(m) => err(&s, &m),
                other => other,
            });
        }
        let r = if let Some((p, q)) = s.split_once('/') {
            let p = Integer::from_str(p).map_err(|_| err(&s, "bad numerator"))?;
            let q = Integer::from_str(q).map_err(|_| err(&s, "bad denominator"))?;
            if q == 0 {
                return Err(err(&s, "zero denominator"));
            }
            Rational::from((p, q))
        } else {
            Rational::from(Integer::from_str(&s).map_err(|_| err(&s, "expected a CF literal or p/q"))?)
        };
        Ok(ContinuedFraction::from_rational(&r))
    }
}

fn err(s: &str, m: &str) -> Error {
    Error::Parse(format!("{m} in {s:?}"))
}

fn parse_bracketed(body: &str) -> Result<ContinuedFraction> {
    let (a0, rest) = match body.split_once(';') {
        Some((a, r)) => (a, r),
        None => (body, ""),
    };
    let a0: i64 = a0.parse().map_err(|_| Error::Parse("bad a0".into()))?;
    let (pre_s, period_s) = match rest.find('(') {
        Some(i) => {
            let tail = &rest[i + 1..];
            let inner = tail.strip_suffix(')').ok_or_else(|| Error::Parse("period must close the literal".into()))?;
            let pre = rest[..i].trim_end_matches(',');
            (pre, Some(inner))
        }
        None => (rest, None),
    };
    let digits = |t: &str| -> Result<Vec<u64>> {
        if t.is_empty() {
            return Ok(Vec::new());
        }
        t.split(',').map(|x| x.parse::<u64>().map_err(|_| Error::Parse(format!("bad digit {x:?}")))).collect()
    };
    let pre = digits(pre_s)?;
    match period_s {
        Some(p) => {
            let period = digits(p)?;
            if period.is_empty() {
                return Err(Error::Parse("empty period".into()));
            }
            ContinuedFraction::periodic(a0, pre, period)
        }
        None => ContinuedFraction::finite(a0, pre),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn literal_forms() {
        let x: ContinuedFraction = "[0;(6,5)]".parse().unwrap();
        assert_eq!(x.period(), &[6, 5]);
        let y: ContinuedFraction = "[0; 3, (6, 5)]".parse().unwrap();
        assert_eq!(y.preperiod(), &[3]);
        let z: ContinuedFraction = "1/2".parse().unwrap();
        assert_eq!(z.finite_len(), Some(1));
        assert_eq!(z.digit(1), Some(2));
        let w: ContinuedFraction = "[2]".parse().unwrap();
        assert_eq!((w.a0(), w.finite_len()), (2, Some(0)));
        assert_eq!(x.to_string(), "[0;(6,5)]");
        assert_eq!(y.to_string(), "[0;3,(6,5)]");
    }

    #[test]
    fn malformed_literals() {
        for s in ["[0;(6,5)", "[0;0,1]", "[x;1]", "[0;()]", "1/0", "abc", "[0;(1),2]"] {
            assert!(s.parse::<ContinuedFraction>().is_err(), "{s}");
        }
    }
}
