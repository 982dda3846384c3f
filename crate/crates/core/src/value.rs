//! Exact and approximate probabilities.

use std::cmp::Ordering;
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};

use crate::error::{Error, Result};

pub type Weight = BigRational;

pub fn ratio(n: i64, d: i64) -> Weight {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

/// Parses `"p/q"` or `"p"` into a non-negative rational.
pub fn parse_weight(text: &str) -> Result<Weight> {
    let bad = || Error::MonadFieldInvalid(format!("`{text}` is not a rational `p/q`"));
    let (num, den) = match text.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (text.trim(), "1"),
    };
    let num: BigInt = num.parse().map_err(|_| bad())?;
    let den: BigInt = den.parse().map_err(|_| bad())?;
    if den.is_zero() || num < BigInt::zero() || den < BigInt::zero() {
        return Err(bad());
    }
    Ok(BigRational::new(num, den))
}

/// Canonical `"p/q"` form, always with a denominator.
pub fn format_weight(w: &Weight) -> String {
    format!("{}/{}", w.numer(), w.denom())
}

/// A probability that is either an exact rational or a binary64 approximation.
#[derive(Clone, Debug, PartialEq)]
pub enum Prob {
    Exact(Weight),
    Approx(f64),
}

impl Prob {
    pub fn zero() -> Self {
        Prob::Exact(Weight::zero())
    }

    pub fn one() -> Self {
        Prob::Exact(Weight::one())
    }

    pub fn is_exact(&self) -> bool {
        matches!(self, Prob::Exact(_))
    }

    pub fn exact(&self) -> Option<&Weight> {
        match self {
            Prob::Exact(w) => Some(w),
            Prob::Approx(_) => None,
        }
    }

    pub fn to_f64(&self) -> f64 {
        match self {
            Prob::Exact(w) => w.to_f64().unwrap_or(f64::NAN),
            Prob::Approx(f) => *f,
        }
    }

    pub fn add(&self, other: &Prob) -> Prob {
        match (self, other) {
            (Prob::Exact(a), Prob::Exact(b)) => Prob::Exact(a + b),
            _ => Prob::Approx(self.to_f64() + other.to_f64()),
        }
    }

    pub fn mul(&self, other: &Prob) -> Prob {
        match (self, other) {
            (Prob::Exact(a), Prob::Exact(b)) => Prob::Exact(a * b),
            (Prob::Exact(a), _) | (_, Prob::Exact(a)) if a.is_zero() => Prob::zero(),
            _ => Prob::Approx(self.to_f64() * other.to_f64()),
        }
    }

    pub fn scale(&self, w: &Weight) -> Prob {
        self.mul(&Prob::Exact(w.clone()))
    }

    /// `self ≤ other`, exactly when both are exact, else up to `eps`.
    pub fn le_within(&self, other: &Prob, eps: f64) -> bool {
        match (self, other) {
            (Prob::Exact(a), Prob::Exact(b)) => a <= b,
            _ => self.to_f64() <= other.to_f64() + eps,
        }
    }

    pub fn partial_cmp_approx(&self, other: &Prob) -> Option<Ordering> {
        match (self, other) {
            (Prob::Exact(a), Prob::Exact(b)) => Some(a.cmp(b)),
            _ => self.to_f64().partial_cmp(&other.to_f64()),
        }
    }
}

impl fmt::Display for Prob {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Prob::Exact(w) => f.write_str(&format_weight(w)),
            Prob::Approx(x) => write!(f, "{x:e}"),
        }
    }
}

/// Arithmetic regime of a [`Valuation`].
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Mode {
    Exact,
    Float(f64),
}

/// A map from states to `[0, 1]`.
#[derive(Clone, Debug, PartialEq)]
pub struct Valuation {
    pub values: Vec<Prob>,
    pub mode: Mode,
}

impl Valuation {
    pub fn new(values: Vec<Prob>, eps: f64) -> Self {
        let mode = if values.iter().all(Prob::is_exact) {
            Mode::Exact
        } else {
            Mode::Float(eps)
        };
        Self { values, mode }
    }

    pub fn exact(values: Vec<Weight>) -> Self {
        Self {
            values: values.into_iter().map(Prob::Exact).collect(),
            mode: Mode::Exact,
        }
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn get(&self, i: usize) -> &Prob {
        &self.values[i]
    }
}
