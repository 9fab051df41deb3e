//! Exact coefficient arithmetic.
//!
//! Every coefficient domain used by the crate implements [`Field`]:
//!
//! - [`Rational`]: arbitrary-precision rationals (the field Q),
//! - [`Fq`]: finite fields of odd characteristic presented as `F_p[u]/(m)`,
//! - [`RatFunc<K>`]: rational functions in one variable over any `K: Field`.
//!
//! Fields whose elements need runtime data (the modulus of a finite field, the
//! name of a variable) carry it in an associated context type, so that a zero
//! or one can be produced from the context alone.

mod finite;
mod poly;
mod ratfunc;
mod rational;

pub mod factor;
pub mod integer;

use std::fmt;

use num_bigint::BigInt;
use thiserror::Error;

pub use finite::{Fq, FqCtx};
pub use poly::{Poly, PolyCtx};
pub use ratfunc::RatFunc;
pub use rational::{rat, Rational};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FieldError {
    #[error("division by zero")]
    DivisionByZero,
    #[error("operands belong to different field contexts")]
    ContextMismatch,
    #[error("input must be nonzero")]
    ZeroInput,
    #[error("operation requires a nonzero polynomial")]
    ZeroPolynomial,
    #[error("polynomial of degree {degree} exceeds the supported maximum {max}")]
    DegreeTooLarge { degree: usize, max: usize },
    #[error("{0} is not an odd prime")]
    NotOddPrime(String),
    #[error("modulus is not a monic irreducible polynomial over F_{0}")]
    ReducibleModulus(u64),
    #[error("integer {0} is too large to factor (limit 2^64)")]
    IntegerTooLarge(String),
    #[error("finite field of order {0} is too large for this operation")]
    FieldTooLarge(String),
}

/// A commutative field with exact arithmetic.
///
/// The arithmetic methods are infallible; `inv` panics on zero. Use
/// [`field_arith`] or [`Field::try_inv`] when the operands are untrusted.
pub trait Field: Clone + PartialEq + Eq + fmt::Debug + fmt::Display + Send + Sync + 'static {
    type Ctx: Clone + PartialEq + Eq + fmt::Debug + Send + Sync + 'static;

    fn ctx(&self) -> Self::Ctx;
    fn zero(ctx: &Self::Ctx) -> Self;
    fn one(ctx: &Self::Ctx) -> Self;
    fn from_bigint(ctx: &Self::Ctx, n: &BigInt) -> Self;
    /// 0 for characteristic zero.
    fn characteristic(ctx: &Self::Ctx) -> u64;

    fn is_zero(&self) -> bool;
    fn add(&self, other: &Self) -> Self;
    fn sub(&self, other: &Self) -> Self;
    fn mul(&self, other: &Self) -> Self;
    fn neg(&self) -> Self;
    fn inv(&self) -> Self;

    /// A square root when `self` is a square (including `0`), else `None`.
    fn sqrt(&self) -> Option<Self>;

    /// Whether the printed form can be used as a factor without parentheses.
    fn is_atomic(&self) -> bool {
        true
    }

    fn from_i64(ctx: &Self::Ctx, n: i64) -> Self {
        Self::from_bigint(ctx, &BigInt::from(n))
    }

    fn is_one(&self) -> bool {
        *self == Self::one(&self.ctx())
    }

    fn div(&self, other: &Self) -> Self {
        self.mul(&other.inv())
    }

    fn try_inv(&self) -> Result<Self, FieldError> {
        if self.is_zero() {
            Err(FieldError::DivisionByZero)
        } else {
            Ok(self.inv())
        }
    }

    fn square(&self) -> Self {
        self.mul(self)
    }

    fn pow(&self, e: i64) -> Self {
        let base = if e < 0 { self.inv() } else { self.clone() };
        let mut e = e.unsigned_abs();
        let mut acc = Self::one(&self.ctx());
        let mut sq = base;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&sq);
            }
            e >>= 1;
            if e > 0 {
                sq = sq.square();
            }
        }
        acc
    }

    fn is_square(&self) -> bool {
        self.sqrt().is_some()
    }

    /// Monic gcd in `K[X]` of nonzero `a`, `b` by a field-specific method;
    /// `None` selects the plain Euclidean algorithm.
    fn poly_gcd(_a: &Poly<Self>, _b: &Poly<Self>) -> Option<Poly<Self>> {
        None
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ArithOp {
    Add,
    Sub,
    Mul,
    Div,
}

/// Checked binary arithmetic: rejects mixed contexts and division by zero.
pub fn field_arith<K: Field>(a: &K, b: &K, op: ArithOp) -> Result<K, FieldError> {
    if a.ctx() != b.ctx() {
        return Err(FieldError::ContextMismatch);
    }
    Ok(match op {
        ArithOp::Add => a.add(b),
        ArithOp::Sub => a.sub(b),
        ArithOp::Mul => a.mul(b),
        ArithOp::Div => a.mul(&b.try_inv()?),
    })
}

/// `is_square` for residue fields: rejects zero and returns a root when one exists.
pub fn square_root<K: Field>(a: &K) -> Result<Option<K>, FieldError> {
    if a.is_zero() {
        return Err(FieldError::ZeroInput);
    }
    Ok(a.sqrt())
}
