//! Polynomials with nonnegative integer coefficients, used for census,
//! stretch and time bounds.

use std::fmt;

use num_traits::{CheckedAdd, CheckedMul, Unsigned};
use serde::{Deserialize, Serialize};

/// Unsigned scalar a [`PolyBound`] can be evaluated in.
pub trait BoundScalar:
    Unsigned + CheckedAdd + CheckedMul + Clone + Ord + fmt::Debug + fmt::Display
{
}

impl<T> BoundScalar for T where
    T: Unsigned + CheckedAdd + CheckedMul + Clone + Ord + fmt::Debug + fmt::Display
{
}

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum PolyError {
    #[error("a polynomial bound needs at least one coefficient")]
    Empty,
    #[error("bound evaluation overflowed the scalar range")]
    Overflow,
}

/// `coefficients[i]` multiplies `n^i`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "Vec<T>", into = "Vec<T>")]
#[serde(bound(
    serialize = "T: BoundScalar + Serialize",
    deserialize = "T: BoundScalar + Deserialize<'de>"
))]
pub struct PolyBound<T: BoundScalar> {
    coefficients: Vec<T>,
}

impl<T: BoundScalar> PolyBound<T> {
    pub fn new(coefficients: Vec<T>) -> Result<Self, PolyError> {
        if coefficients.is_empty() {
            return Err(PolyError::Empty);
        }
        Ok(PolyBound { coefficients })
    }

    pub fn constant(c: T) -> Self {
        PolyBound {
            coefficients: vec![c],
        }
    }

    /// `n`
    pub fn identity() -> Self {
        PolyBound {
            coefficients: vec![T::zero(), T::one()],
        }
    }

    /// `n + c`
    pub fn shifted(c: T) -> Self {
        PolyBound {
            coefficients: vec![c, T::one()],
        }
    }

    pub fn coefficients(&self) -> &[T] {
        &self.coefficients
    }

    /// Horner evaluation with overflow detection.
    pub fn eval(&self, n: T) -> Result<T, PolyError> {
        let mut acc = T::zero();
        for c in self.coefficients.iter().rev() {
            acc = acc
                .checked_mul(&n)
                .and_then(|v| v.checked_add(c))
                .ok_or(PolyError::Overflow)?;
        }
        Ok(acc)
    }

    /// Every coefficient multiplied by `factor`.
    pub fn scaled(&self, factor: T) -> Result<Self, PolyError> {
        let coefficients = self
            .coefficients
            .iter()
            .map(|c| c.checked_mul(&factor).ok_or(PolyError::Overflow))
            .collect::<Result<_, _>>()?;
        Ok(PolyBound { coefficients })
    }

    /// `self(inner(n))` as a polynomial.
    pub fn compose(&self, inner: &PolyBound<T>) -> Result<Self, PolyError> {
        let mut acc = PolyBound::constant(T::zero());
        for c in self.coefficients.iter().rev() {
            acc = acc.mul(inner)?.add(&PolyBound::constant(c.clone()))?;
        }
        Ok(acc.trimmed())
    }

    fn add(&self, other: &PolyBound<T>) -> Result<Self, PolyError> {
        let len = self.coefficients.len().max(other.coefficients.len());
        let coefficients = (0..len)
            .map(|i| {
                let a = self.coefficients.get(i).cloned().unwrap_or_else(T::zero);
                let b = other.coefficients.get(i).cloned().unwrap_or_else(T::zero);
                a.checked_add(&b).ok_or(PolyError::Overflow)
            })
            .collect::<Result<_, _>>()?;
        Ok(PolyBound { coefficients })
    }

    fn mul(&self, other: &PolyBound<T>) -> Result<Self, PolyError> {
        let mut coefficients =
            vec![T::zero(); self.coefficients.len() + other.coefficients.len() - 1];
        for (i, a) in self.coefficients.iter().enumerate() {
            for (j, b) in other.coefficients.iter().enumerate() {
                let term = a.checked_mul(b).ok_or(PolyError::Overflow)?;
                coefficients[i + j] = coefficients[i + j]
                    .checked_add(&term)
                    .ok_or(PolyError::Overflow)?;
            }
        }
        Ok(PolyBound { coefficients })
    }

    fn trimmed(mut self) -> Self {
        while self.coefficients.len() > 1 && self.coefficients.last().is_some_and(|c| c.is_zero()) {
            self.coefficients.pop();
        }
        self
    }
}

impl<T: BoundScalar> TryFrom<Vec<T>> for PolyBound<T> {
    type Error = PolyError;

    fn try_from(coefficients: Vec<T>) -> Result<Self, Self::Error> {
        PolyBound::new(coefficients)
    }
}

impl<T: BoundScalar> From<PolyBound<T>> for Vec<T> {
    fn from(p: PolyBound<T>) -> Self {
        p.coefficients
    }
}

impl<T: BoundScalar> fmt::Display for PolyBound<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut terms = Vec::new();
        for (i, c) in self.coefficients.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let coef = if c.is_one() && i > 0 {
                String::new()
            } else {
                c.to_string()
            };
            terms.push(match i {
                0 => coef,
                1 => format!("{coef}n"),
                _ => format!("{coef}n^{i}"),
            });
        }
        if terms.is_empty() {
            f.write_str("0")
        } else {
            f.write_str(&terms.join(" + "))
        }
    }
}
