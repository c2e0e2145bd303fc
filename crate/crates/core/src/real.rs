//! A real argument: exact quadratic number or certified enclosure.

use std::fmt;

use crate::cf::QuadraticSurd;
use crate::interval::Enclosure;

#[derive(Clone, Debug, PartialEq)]
pub enum Real {
    Exact(QuadraticSurd),
    Interval(Enclosure),
}

impl Real {
    pub fn to_enclosure(&self, prec: u32) -> Enclosure {
        match self {
            Real::Exact(x) => x.to_enclosure(prec),
            Real::Interval(e) => e.clone(),
        }
    }

    pub fn exact(&self) -> Option<&QuadraticSurd> {
        match self {
            Real::Exact(x) => Some(x),
            Real::Interval(_) => None,
        }
    }

    pub fn zero() -> Self {
        Real::Exact(QuadraticSurd::zero())
    }

    pub fn is_exact_zero(&self) -> bool {
        matches!(self, Real::Exact(x) if x.is_zero())
    }

    pub fn neg(&self) -> Real {
        match self {
            Real::Exact(x) => Real::Exact(-x),
            Real::Interval(e) => Real::Interval(e.neg()),
        }
    }

    /// Sum, exact when both operands are.
    pub fn add(&self, other: &Real, prec: u32) -> Real {
        match (self, other) {
            (Real::Exact(a), Real::Exact(b)) if a.same_field(b) => Real::Exact(a + b),
            _ => Real::Interval(self.to_enclosure(prec).add(&other.to_enclosure(prec))),
        }
    }

    pub fn mul(&self, other: &Real, prec: u32) -> Real {
        match (self, other) {
            (Real::Exact(a), Real::Exact(b)) if a.same_field(b) => Real::Exact(a * b),
            _ => Real::Interval(self.to_enclosure(prec).mul(&other.to_enclosure(prec))),
        }
    }

    pub fn to_f64(&self) -> f64 {
        match self {
            Real::Exact(x) => x.to_f64(),
            Real::Interval(e) => e.mid_f64(),
        }
    }
}

impl From<QuadraticSurd> for Real {
    fn from(x: QuadraticSurd) -> Self {
        Real::Exact(x)
    }
}

impl From<Enclosure> for Real {
    fn from(e: Enclosure) -> Self {
        Real::Interval(e)
    }
}

impl From<i64> for Real {
    fn from(v: i64) -> Self {
        Real::Exact(QuadraticSurd::from_integer(v))
    }
}

impl fmt::Display for Real {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Real::Exact(x) => write!(f, "{x}"),
            Real::Interval(e) => write!(f, "{e}"),
        }
    }
}
