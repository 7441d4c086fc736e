//! Minimal admissible constants for the six contraction classes.
//!
//! Each class bounds a left-hand side built from images by a constant times
//! a right-hand side, over all pairs (two-point classes) or all triples of
//! pairwise distinct points (three-point classes). On a finite space the
//! smallest admissible constant is the largest ratio `LHS / RHS`, and a map
//! belongs to the class iff that ratio is strictly below the class
//! threshold.

use std::cmp::Ordering;
use std::fmt;

use serde::ser::{SerializeMap, SerializeStruct};
use serde::{Deserialize, Serialize, Serializer};
use thiserror::Error;

use crate::metric::FiniteMetricSpace;
use crate::scalar::Scalar;
use crate::selfmap::{MapError, SelfMap};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ClassifyError {
    #[error("{class} needs at least {arity} points, space has {n}")]
    TooFewPoints { class: ContractionClass, arity: usize, n: usize },
    #[error(transparent)]
    Map(#[from] MapError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum ContractionClass {
    Banach,
    Kannan,
    Chatterjea,
    PerimeterContracting,
    GeneralizedKannan,
    GeneralizedChatterjea,
}

impl ContractionClass {
    pub const ALL: [ContractionClass; 6] = [
        ContractionClass::Banach,
        ContractionClass::Kannan,
        ContractionClass::Chatterjea,
        ContractionClass::PerimeterContracting,
        ContractionClass::GeneralizedKannan,
        ContractionClass::GeneralizedChatterjea,
    ];

    /// Membership threshold as `(numerator, denominator)`.
    pub fn threshold_ratio(self) -> (i64, i64) {
        match self {
            ContractionClass::Banach => (1, 1),
            ContractionClass::Kannan => (1, 2),
            ContractionClass::Chatterjea => (1, 2),
            ContractionClass::PerimeterContracting => (1, 1),
            ContractionClass::GeneralizedKannan => (2, 3),
            ContractionClass::GeneralizedChatterjea => (1, 3),
        }
    }

    pub fn threshold<S: Scalar>(self) -> S {
        let (num, den) = self.threshold_ratio();
        S::from_ratio(num, den)
    }

    /// 2 for pair conditions, 3 for triple conditions.
    pub fn arity(self) -> usize {
        match self {
            ContractionClass::Banach | ContractionClass::Kannan | ContractionClass::Chatterjea => 2,
            _ => 3,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            ContractionClass::Banach => "Banach",
            ContractionClass::Kannan => "Kannan",
            ContractionClass::Chatterjea => "Chatterjea",
            ContractionClass::PerimeterContracting => "PerimeterContracting",
            ContractionClass::GeneralizedKannan => "GeneralizedKannan",
            ContractionClass::GeneralizedChatterjea => "GeneralizedChatterjea",
        }
    }

    /// `(LHS, RHS)` of the class inequality on `tuple` (length = arity).
    pub fn terms<S: Scalar>(
        self,
        space: &FiniteMetricSpace<S>,
        f: &SelfMap,
        tuple: &[usize],
    ) -> (S, S) {
        debug_assert_eq!(tuple.len(), self.arity());
        let d = |a: usize, b: usize| space.dist(a, b).clone();
        match self.arity() {
            2 => {
                let (x, y) = (tuple[0], tuple[1]);
                let (tx, ty) = (f.apply(x), f.apply(y));
                let lhs = d(tx, ty);
                let rhs = match self {
                    ContractionClass::Banach => d(x, y),
                    ContractionClass::Kannan => d(x, tx) + d(y, ty),
                    _ => d(x, ty) + d(y, tx),
                };
                (lhs, rhs)
            }
            _ => {
                let (x, y, z) = (tuple[0], tuple[1], tuple[2]);
                let (tx, ty, tz) = (f.apply(x), f.apply(y), f.apply(z));
                let lhs = d(tx, ty) + d(ty, tz) + d(tx, tz);
                let rhs = match self {
                    ContractionClass::PerimeterContracting => d(x, y) + d(y, z) + d(x, z),
                    ContractionClass::GeneralizedKannan => d(x, tx) + d(y, ty) + d(z, tz),
                    _ => d(x, ty) + d(x, tz) + d(y, tx) + d(y, tz) + d(z, tx) + d(z, ty),
                };
                (lhs, rhs)
            }
        }
    }
}

impl fmt::Display for ContractionClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl std::str::FromStr for ContractionClass {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        ContractionClass::ALL
            .into_iter()
            .find(|c| c.name().eq_ignore_ascii_case(s))
            .ok_or_else(|| format!("unknown class {s:?}"))
    }
}

/// A minimal admissible constant: a finite ratio or `+inf` (some tuple has
/// `RHS = 0 < LHS`).
#[derive(Debug, Clone, PartialEq)]
pub enum Constant<S> {
    Finite(S),
    Infinite,
}

impl<S: Scalar> Constant<S> {
    pub fn finite(&self) -> Option<&S> {
        match self {
            Constant::Finite(v) => Some(v),
            Constant::Infinite => None,
        }
    }

    pub fn is_infinite(&self) -> bool {
        matches!(self, Constant::Infinite)
    }

    /// Strictly below `threshold` (with float margin); `+inf` never is.
    pub fn below(&self, threshold: &S) -> bool {
        self.finite().is_some_and(|v| v.below_threshold(threshold))
    }

    /// `self <= gamma`: the max-ratio route to "every tuple satisfies
    /// `LHS <= gamma * RHS`".
    pub fn admits(&self, gamma: &S) -> bool {
        self.finite().is_some_and(|v| v.le_tol(gamma))
    }

    pub fn to_f64(&self) -> f64 {
        match self {
            Constant::Finite(v) => v.to_f64(),
            Constant::Infinite => f64::INFINITY,
        }
    }

    pub fn to_json(&self) -> serde_json::Value {
        match self {
            Constant::Finite(v) => v.to_json(),
            Constant::Infinite => serde_json::Value::String("inf".into()),
        }
    }
}

impl<S: Scalar> PartialOrd for Constant<S> {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        match (self, other) {
            (Constant::Finite(a), Constant::Finite(b)) => a.partial_cmp(b),
            (Constant::Finite(_), Constant::Infinite) => Some(Ordering::Less),
            (Constant::Infinite, Constant::Finite(_)) => Some(Ordering::Greater),
            (Constant::Infinite, Constant::Infinite) => Some(Ordering::Equal),
        }
    }
}

impl<S: Scalar> fmt::Display for Constant<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Constant::Finite(v) => write!(f, "{v}"),
            Constant::Infinite => f.write_str("inf"),
        }
    }
}

impl<S: Scalar> Serialize for Constant<S> {
    fn serialize<Z: Serializer>(&self, serializer: Z) -> Result<Z::Ok, Z::Error> {
        self.to_json().serialize(serializer)
    }
}

/// `lhs / rhs` with `0/0 = 0` and `pos/0 = +inf`.
pub fn ratio<S: Scalar>(lhs: &S, rhs: &S) -> Constant<S> {
    if !rhs.is_zero() {
        Constant::Finite(lhs.clone() / rhs.clone())
    } else if lhs.is_zero() {
        Constant::Finite(S::zero())
    } else {
        Constant::Infinite
    }
}

/// Unordered tuples of pairwise distinct indices in lexicographic order.
pub fn tuples(n: usize, arity: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    match arity {
        2 => {
            for i in 0..n {
                for j in i + 1..n {
                    out.push(vec![i, j]);
                }
            }
        }
        3 => {
            for i in 0..n {
                for j in i + 1..n {
                    for k in j + 1..n {
                        out.push(vec![i, j, k]);
                    }
                }
            }
        }
        _ => panic!("arity must be 2 or 3"),
    }
    out
}

fn check_inputs<S: Scalar>(
    space: &FiniteMetricSpace<S>,
    f: &SelfMap,
    class: ContractionClass,
) -> Result<(), ClassifyError> {
    f.check_len(space.len())?;
    if space.len() < class.arity() {
        return Err(ClassifyError::TooFewPoints { class, arity: class.arity(), n: space.len() });
    }
    Ok(())
}

/// Largest ratio over all tuples and the lexicographically least tuple
/// attaining it.
pub fn min_constant<S: Scalar>(
    space: &FiniteMetricSpace<S>,
    f: &SelfMap,
    class: ContractionClass,
) -> Result<(Constant<S>, Vec<usize>), ClassifyError> {
    check_inputs(space, f, class)?;
    let mut best: Option<(Constant<S>, Vec<usize>)> = None;
    for tuple in tuples(space.len(), class.arity()) {
        let (lhs, rhs) = class.terms(space, f, &tuple);
        let r = ratio(&lhs, &rhs);
        let replace = match &best {
            None => true,
            Some((b, _)) => r > *b,
        };
        if replace {
            let stop = r.is_infinite();
            best = Some((r, tuple));
            if stop {
                break;
            }
        }
    }
    Ok(best.expect("at least one tuple"))
}

/// Independent check that `LHS <= gamma * RHS` on every tuple, without
/// forming ratios.
pub fn membership_oracle<S: Scalar>(
    space: &FiniteMetricSpace<S>,
    f: &SelfMap,
    class: ContractionClass,
    gamma: &S,
) -> Result<bool, ClassifyError> {
    check_inputs(space, f, class)?;
    Ok(tuples(space.len(), class.arity()).iter().all(|t| {
        let (lhs, rhs) = class.terms(space, f, t);
        lhs.le_tol(&(gamma.clone() * rhs))
    }))
}

#[derive(Debug, Clone, PartialEq)]
pub struct ClassVerdict<S> {
    pub class: ContractionClass,
    pub constant: Constant<S>,
    pub member: bool,
    pub argmax: Vec<usize>,
}

impl<S: Scalar> Serialize for ClassVerdict<S> {
    fn serialize<Z: Serializer>(&self, serializer: Z) -> Result<Z::Ok, Z::Error> {
        let mut s = serializer.serialize_struct("ClassVerdict", 3)?;
        s.serialize_field("constant", &self.constant)?;
        s.serialize_field("member", &self.member)?;
        s.serialize_field("argmax", &self.argmax)?;
        s.end()
    }
}

/// Verdicts for all six classes, in [`ContractionClass::ALL`] order.
#[derive(Debug, Clone, PartialEq)]
pub struct ClassificationReport<S> {
    verdicts: Vec<ClassVerdict<S>>,
}

impl<S: Scalar> ClassificationReport<S> {
    pub fn verdicts(&self) -> &[ClassVerdict<S>] {
        &self.verdicts
    }

    pub fn get(&self, class: ContractionClass) -> &ClassVerdict<S> {
        &self.verdicts[class as usize]
    }

    pub fn constant(&self, class: ContractionClass) -> &Constant<S> {
        &self.get(class).constant
    }

    pub fn is_member(&self, class: ContractionClass) -> bool {
        self.get(class).member
    }
}

impl<S: Scalar> Serialize for ClassificationReport<S> {
    fn serialize<Z: Serializer>(&self, serializer: Z) -> Result<Z::Ok, Z::Error> {
        let mut m = serializer.serialize_map(Some(self.verdicts.len()))?;
        for v in &self.verdicts {
            m.serialize_entry(v.class.name(), v)?;
        }
        m.end()
    }
}

/// Classifies `f` against all six classes. Needs at least three points.
pub fn classify_all<S: Scalar>(
    space: &FiniteMetricSpace<S>,
    f: &SelfMap,
) -> Result<ClassificationReport<S>, ClassifyError> {
    let verdicts = ContractionClass::ALL
        .into_iter()
        .map(|class| {
            let (constant, argmax) = min_constant(space, f, class)?;
            let member = constant.below(&class.threshold());
            Ok(ClassVerdict { class, constant, member, argmax })
        })
        .collect::<Result<Vec<_>, ClassifyError>>()?;
    Ok(ClassificationReport { verdicts })
}
