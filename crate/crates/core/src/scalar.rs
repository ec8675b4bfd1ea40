//! Scalars shared by the real and jet evaluation paths.

use std::fmt::Debug;
use std::ops::{Add, Div, Mul, Neg, Sub};

use crate::taylor::{Func, Jet2, JetError, TOL_DIV};

pub trait Scalar:
    Clone
    + Debug
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Neg<Output = Self>
{
    /// Value at the base point.
    fn value(&self) -> f64;
    /// A constant with the same shape as `self`.
    fn lift(&self, c: f64) -> Self;
    /// A constant when no other value fixes the shape.
    fn from_real(c: f64) -> Self;
    fn scale(&self, k: f64) -> Self;
    fn elem(&self, func: Func) -> Result<Self, JetError>;
    fn pow_real(&self, p: f64) -> Result<Self, JetError>;
    fn checked_div(&self, rhs: &Self) -> Result<Self, JetError>;

    fn try_sqrt(&self) -> Result<Self, JetError> {
        self.elem(Func::Sqrt)
    }
}

impl Scalar for f64 {
    fn value(&self) -> f64 {
        *self
    }

    fn lift(&self, c: f64) -> f64 {
        c
    }

    fn from_real(c: f64) -> f64 {
        c
    }

    fn scale(&self, k: f64) -> f64 {
        self * k
    }

    fn elem(&self, func: Func) -> Result<f64, JetError> {
        func.eval_real(*self)
    }

    fn pow_real(&self, p: f64) -> Result<f64, JetError> {
        if *self <= 0.0 {
            return Err(JetError::Domain {
                func: "pow",
                value: *self,
            });
        }
        Ok(self.powf(p))
    }

    fn checked_div(&self, rhs: &f64) -> Result<f64, JetError> {
        if rhs.abs() < TOL_DIV {
            return Err(JetError::DivByZero(*rhs));
        }
        Ok(self / rhs)
    }
}

impl Scalar for Jet2 {
    fn value(&self) -> f64 {
        Jet2::value(self)
    }

    fn lift(&self, c: f64) -> Jet2 {
        Jet2::constant(c, self.du(), self.dv())
    }

    fn from_real(c: f64) -> Jet2 {
        Jet2::constant(c, 0, 0)
    }

    fn scale(&self, k: f64) -> Jet2 {
        Jet2::scale(self, k)
    }

    fn elem(&self, func: Func) -> Result<Jet2, JetError> {
        Jet2::elem(self, func)
    }

    fn pow_real(&self, p: f64) -> Result<Jet2, JetError> {
        if self.value() <= 0.0 {
            return Err(JetError::Domain {
                func: "pow",
                value: self.value(),
            });
        }
        Jet2::pow_real(self, p)
    }

    fn checked_div(&self, rhs: &Jet2) -> Result<Jet2, JetError> {
        Jet2::checked_div(self, rhs)
    }
}

/// Integer power by repeated multiplication; negative exponents divide.
pub fn powi<S: Scalar>(base: &S, n: i64) -> Result<S, JetError> {
    let mut acc = base.lift(1.0);
    for _ in 0..n.unsigned_abs() {
        acc = acc * base.clone();
    }
    if n < 0 {
        base.lift(1.0).checked_div(&acc)
    } else {
        Ok(acc)
    }
}
