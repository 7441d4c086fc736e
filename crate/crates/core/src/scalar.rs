//! Distance scalars.
//!
//! Every computation in the crate is generic over [`Scalar`], which is
//! implemented for `f64` (tolerance-guarded comparisons) and for
//! [`BigRational`] (exact comparisons). Grid enumeration and search
//! certificates run on `BigRational`; randomized corpora run on `f64`.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Num, Signed, ToPrimitive, Zero};

/// Relative slack applied to every floating comparison.
pub const REL_TOL: f64 = 1e-9;

/// Parses `"p/q"`, `"p"` or `"-p/q"` into a reduced rational.
pub fn parse_rational(text: &str) -> Option<BigRational> {
    let text = text.trim();
    match text.split_once('/') {
        Some((num, den)) => {
            let num = BigInt::from_str(num.trim()).ok()?;
            let den = BigInt::from_str(den.trim()).ok()?;
            if den.is_zero() {
                return None;
            }
            Some(BigRational::new(num, den))
        }
        None => BigInt::from_str(text).ok().map(BigRational::from_integer),
    }
}

/// A distance value: `f64` or an exact rational.
pub trait Scalar:
    Num + Signed + Clone + PartialOrd + fmt::Debug + fmt::Display + Send + Sync + 'static
{
    /// Whether comparisons are exact.
    const EXACT: bool;

    fn from_ratio(num: i64, den: i64) -> Self;

    /// Exact conversion for rationals, identity for floats. `None` for
    /// non-finite input.
    fn from_f64(x: f64) -> Option<Self>;

    fn to_f64(&self) -> f64;

    /// `self <= other`, with [`REL_TOL`] relative slack for floats.
    fn le_tol(&self, other: &Self) -> bool;

    /// Strict membership test `self < threshold`. Floats must clear the
    /// threshold by [`REL_TOL`] relative margin.
    fn below_threshold(&self, threshold: &Self) -> bool;

    /// Decides `self <= base + coeff * sqrt(radicand)` for non-negative
    /// `base`, `coeff`, `radicand`.
    fn le_sqrt_form(&self, base: &Self, coeff: &Self, radicand: &Self) -> bool;

    /// JSON rendering: a number for floats, a reduced `"p/q"` string for
    /// rationals.
    fn to_json(&self) -> serde_json::Value;

    fn max_of(a: &Self, b: &Self) -> Self {
        if a >= b {
            a.clone()
        } else {
            b.clone()
        }
    }

    /// Integer power for a non-negative exponent.
    fn powi(&self, exp: u32) -> Self {
        let mut acc = Self::one();
        for _ in 0..exp {
            acc = acc * self.clone();
        }
        acc
    }
}

impl Scalar for f64 {
    const EXACT: bool = false;

    fn from_ratio(num: i64, den: i64) -> Self {
        num as f64 / den as f64
    }

    fn from_f64(x: f64) -> Option<Self> {
        x.is_finite().then_some(x)
    }

    fn to_f64(&self) -> f64 {
        *self
    }

    fn le_tol(&self, other: &Self) -> bool {
        *self <= *other + REL_TOL * self.abs().max(other.abs())
    }

    fn below_threshold(&self, threshold: &Self) -> bool {
        *self < *threshold * (1.0 - REL_TOL)
    }

    fn le_sqrt_form(&self, base: &Self, coeff: &Self, radicand: &Self) -> bool {
        let rhs = *base + *coeff * radicand.sqrt();
        self.le_tol(&rhs)
    }

    fn to_json(&self) -> serde_json::Value {
        serde_json::Number::from_f64(*self)
            .map(serde_json::Value::Number)
            .unwrap_or(serde_json::Value::Null)
    }
}

impl Scalar for BigRational {
    const EXACT: bool = true;

    fn from_ratio(num: i64, den: i64) -> Self {
        BigRational::new(BigInt::from(num), BigInt::from(den))
    }

    fn from_f64(x: f64) -> Option<Self> {
        BigRational::from_float(x)
    }

    fn to_f64(&self) -> f64 {
        ToPrimitive::to_f64(self).unwrap_or(f64::NAN)
    }

    fn le_tol(&self, other: &Self) -> bool {
        self <= other
    }

    fn below_threshold(&self, threshold: &Self) -> bool {
        self < threshold
    }

    fn le_sqrt_form(&self, base: &Self, coeff: &Self, radicand: &Self) -> bool {
        if self <= base {
            return true;
        }
        // self - base > 0, so squaring both sides preserves the order.
        let gap = self - base;
        &gap * &gap <= coeff * coeff * radicand
    }

    fn to_json(&self) -> serde_json::Value {
        serde_json::Value::String(self.to_string())
    }
}

/// `serialize_with` helper rendering a scalar through [`Scalar::to_json`].
pub fn ser_scalar<S: Scalar, Z: serde::Serializer>(v: &S, s: Z) -> Result<Z::Ok, Z::Error> {
    serde::Serialize::serialize(&v.to_json(), s)
}

pub fn ser_scalar_opt<S: Scalar, Z: serde::Serializer>(
    v: &Option<S>,
    s: Z,
) -> Result<Z::Ok, Z::Error> {
    serde::Serialize::serialize(&v.as_ref().map(Scalar::to_json), s)
}

pub fn ser_scalar_vec<S: Scalar, Z: serde::Serializer>(v: &[S], s: Z) -> Result<Z::Ok, Z::Error> {
    s.collect_seq(v.iter().map(Scalar::to_json))
}
