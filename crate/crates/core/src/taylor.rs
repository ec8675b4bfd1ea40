//! Truncated bivariate Taylor jets in `(u, v)`.
//!
//! A [`Jet2`] stores the Taylor coefficients of a function about an expansion
//! point on the full rectangle `i <= du, j <= dv`. Arithmetic is the truncated
//! Cauchy product, so every partial derivative up to the truncation order is
//! exact up to floating-point round-off. Differentiation in `u` or `v` is a
//! coefficient shift that lowers the corresponding order by one.

use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use thiserror::Error;

/// Smallest admissible magnitude of a divisor's leading coefficient.
pub const TOL_DIV: f64 = 1e-12;

/// Default truncation orders: eight `u`-orders and one `v`-order.
pub const DEFAULT_DU: usize = 8;
pub const DEFAULT_DV: usize = 1;

/// Default step for [`fd_oracle`].
pub const DEFAULT_FD_STEP: f64 = 1e-3;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum JetError {
    #[error("E_DIV_BY_ZERO_JET: divisor has leading coefficient {0:e}")]
    DivByZero(f64),
    #[error("E_DOMAIN: {func} is undefined at {value}")]
    Domain { func: &'static str, value: f64 },
    #[error("E_JET_INDEX: coefficient ({i}, {j}) is outside the truncation ({du}, {dv})")]
    IndexOutOfRange {
        i: usize,
        j: usize,
        du: usize,
        dv: usize,
    },
    #[error("E_JET_SEED: cannot seed {0:?} in a jet of order 0 in that variable")]
    DegreeZero(Var),
}

impl JetError {
    pub fn code(&self) -> &'static str {
        match self {
            JetError::DivByZero(_) => "E_DIV_BY_ZERO_JET",
            JetError::Domain { .. } => "E_DOMAIN",
            JetError::IndexOutOfRange { .. } => "E_JET_INDEX",
            JetError::DegreeZero(_) => "E_JET_SEED",
        }
    }
}

/// Seed variable of a jet.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Var {
    U,
    V,
}

/// Elementary functions understood by [`Jet2::elem`] and the real backend.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Func {
    Sin,
    Cos,
    Tan,
    Exp,
    Log,
    Sqrt,
    Sinh,
    Cosh,
}

impl Func {
    pub fn name(self) -> &'static str {
        match self {
            Func::Sin => "sin",
            Func::Cos => "cos",
            Func::Tan => "tan",
            Func::Exp => "exp",
            Func::Log => "log",
            Func::Sqrt => "sqrt",
            Func::Sinh => "sinh",
            Func::Cosh => "cosh",
        }
    }

    pub fn from_name(name: &str) -> Option<Func> {
        Some(match name {
            "sin" => Func::Sin,
            "cos" => Func::Cos,
            "tan" => Func::Tan,
            "exp" => Func::Exp,
            "log" | "ln" => Func::Log,
            "sqrt" => Func::Sqrt,
            "sinh" => Func::Sinh,
            "cosh" => Func::Cosh,
            _ => return None,
        })
    }

    /// Real evaluation with the same domain rules the jet backend applies.
    pub fn eval_real(self, x: f64) -> Result<f64, JetError> {
        let domain = |ok: bool| {
            if ok {
                Ok(())
            } else {
                Err(JetError::Domain {
                    func: self.name(),
                    value: x,
                })
            }
        };
        Ok(match self {
            Func::Sin => x.sin(),
            Func::Cos => x.cos(),
            Func::Tan => {
                domain(x.cos().abs() >= TOL_DIV)?;
                x.tan()
            }
            Func::Exp => x.exp(),
            Func::Log => {
                domain(x > 0.0)?;
                x.ln()
            }
            Func::Sqrt => {
                domain(x >= TOL_DIV)?;
                x.sqrt()
            }
            Func::Sinh => x.sinh(),
            Func::Cosh => x.cosh(),
        })
    }

    /// Taylor coefficients `f^(k)(x) / k!` for `k = 0..=order`.
    fn series(self, x: f64, order: usize) -> Result<Vec<f64>, JetError> {
        let f0 = self.eval_real(x)?;
        let mut out = Vec::with_capacity(order + 1);
        match self {
            Func::Sin | Func::Cos | Func::Sinh | Func::Cosh | Func::Exp => {
                let (s, c) = x.sin_cos();
                let (sh, ch) = (x.sinh(), x.cosh());
                let cycle: [f64; 4] = match self {
                    Func::Sin => [s, c, -s, -c],
                    Func::Cos => [c, -s, -c, s],
                    Func::Sinh => [sh, ch, sh, ch],
                    Func::Cosh => [ch, sh, ch, sh],
                    _ => [f0; 4],
                };
                let mut fact = 1.0;
                for k in 0..=order {
                    if k > 0 {
                        fact *= k as f64;
                    }
                    let d = if k == 0 { f0 } else { cycle[k % 4] };
                    out.push(d / fact);
                }
            }
            Func::Log => {
                out.push(f0);
                for k in 1..=order {
                    let sign = if k % 2 == 1 { 1.0 } else { -1.0 };
                    out.push(sign / (k as f64 * x.powi(k as i32)));
                }
            }
            Func::Sqrt => return Ok(binomial_series(x, 0.5, f0, order)),
            Func::Tan => {
                // tan' = 1 + tan^2, solved order by order
                out.push(f0);
                for k in 0..order {
                    let mut acc = if k == 0 { 1.0 } else { 0.0 };
                    for m in 0..=k {
                        acc += out[m] * out[k - m];
                    }
                    out.push(acc / (k + 1) as f64);
                }
            }
        }
        Ok(out)
    }
}

/// Coefficients of `(x + t)^p` in powers of `t`, given `x^p` as `lead`.
fn binomial_series(x: f64, p: f64, lead: f64, order: usize) -> Vec<f64> {
    let mut out = Vec::with_capacity(order + 1);
    out.push(lead);
    let mut c = lead;
    for k in 1..=order {
        c *= (p - (k - 1) as f64) / (k as f64 * x);
        out.push(c);
    }
    out
}

/// Truncated Taylor polynomial in two variables.
///
/// Entry `(i, j)` is the coefficient of `u^i v^j`, so
/// `d^{i+j} f / du^i dv^j = coeff(i, j) * i! * j!`.
#[derive(Clone, PartialEq)]
pub struct Jet2 {
    du: usize,
    dv: usize,
    coeffs: Vec<f64>,
}

impl fmt::Debug for Jet2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Jet2[{}x{}]", self.du, self.dv)?;
        f.debug_list()
            .entries(
                (0..=self.du).map(|i| &self.coeffs[i * (self.dv + 1)..(i + 1) * (self.dv + 1)]),
            )
            .finish()
    }
}

impl Jet2 {
    pub fn zeros(du: usize, dv: usize) -> Jet2 {
        Jet2 {
            du,
            dv,
            coeffs: vec![0.0; (du + 1) * (dv + 1)],
        }
    }

    /// Constant jet: value `c`, all derivatives zero.
    pub fn constant(c: f64, du: usize, dv: usize) -> Jet2 {
        let mut j = Jet2::zeros(du, dv);
        j.coeffs[0] = c;
        j
    }

    /// Independent variable seeded at `base`.
    pub fn var(which: Var, base: f64, du: usize, dv: usize) -> Result<Jet2, JetError> {
        let mut j = Jet2::constant(base, du, dv);
        match which {
            Var::U if du >= 1 => j.set(1, 0, 1.0),
            Var::V if dv >= 1 => j.set(0, 1, 1.0),
            _ => return Err(JetError::DegreeZero(which)),
        }
        Ok(j)
    }

    /// Builds a jet from a row-major coefficient table (`rows[i][j]`).
    pub fn from_coeffs(rows: &[Vec<f64>]) -> Jet2 {
        let du = rows.len().checked_sub(1).expect("at least one row");
        let dv = rows[0].len().checked_sub(1).expect("at least one column");
        assert!(
            rows.iter().all(|r| r.len() == dv + 1),
            "ragged coefficient table"
        );
        Jet2 {
            du,
            dv,
            coeffs: rows.iter().flatten().copied().collect(),
        }
    }

    #[inline]
    fn idx(&self, i: usize, j: usize) -> usize {
        i * (self.dv + 1) + j
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.du, self.dv)
    }

    pub fn du(&self) -> usize {
        self.du
    }

    pub fn dv(&self) -> usize {
        self.dv
    }

    /// Raw Taylor coefficient. Panics outside the truncation rectangle.
    #[inline]
    pub fn coeff(&self, i: usize, j: usize) -> f64 {
        assert!(
            i <= self.du && j <= self.dv,
            "coefficient ({i}, {j}) outside jet shape"
        );
        self.coeffs[self.idx(i, j)]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, value: f64) {
        assert!(
            i <= self.du && j <= self.dv,
            "coefficient ({i}, {j}) outside jet shape"
        );
        let k = self.idx(i, j);
        self.coeffs[k] = value;
    }

    /// Value at the expansion point.
    #[inline]
    pub fn value(&self) -> f64 {
        self.coeffs[0]
    }

    /// Partial derivative `d^{i+j} / du^i dv^j` at the expansion point.
    pub fn extract(&self, i: usize, j: usize) -> Result<f64, JetError> {
        if i > self.du || j > self.dv {
            return Err(JetError::IndexOutOfRange {
                i,
                j,
                du: self.du,
                dv: self.dv,
            });
        }
        Ok(self.coeff(i, j) * factorial(i) * factorial(j))
    }

    /// Drops every coefficient beyond `(du, dv)`.
    pub fn truncate(&self, du: usize, dv: usize) -> Jet2 {
        assert!(
            du <= self.du && dv <= self.dv,
            "truncation cannot raise the order"
        );
        let mut out = Jet2::zeros(du, dv);
        for i in 0..=du {
            for j in 0..=dv {
                out.set(i, j, self.coeff(i, j));
            }
        }
        out
    }

    /// `d/du` as a jet of order `du - 1`.
    pub fn deriv_u(&self) -> Jet2 {
        assert!(self.du >= 1, "cannot differentiate a jet of u-order 0");
        let mut out = Jet2::zeros(self.du - 1, self.dv);
        for i in 0..self.du {
            for j in 0..=self.dv {
                out.set(i, j, (i + 1) as f64 * self.coeff(i + 1, j));
            }
        }
        out
    }

    /// `d/dv` as a jet of order `dv - 1`.
    pub fn deriv_v(&self) -> Jet2 {
        assert!(self.dv >= 1, "cannot differentiate a jet of v-order 0");
        let mut out = Jet2::zeros(self.du, self.dv - 1);
        for i in 0..=self.du {
            for j in 0..self.dv {
                out.set(i, j, (j + 1) as f64 * self.coeff(i, j + 1));
            }
        }
        out
    }

    pub fn scale(&self, k: f64) -> Jet2 {
        Jet2 {
            du: self.du,
            dv: self.dv,
            coeffs: self.coeffs.iter().map(|c| c * k).collect(),
        }
    }

    /// Largest absolute coefficient difference; shapes must agree.
    pub fn max_abs_diff(&self, other: &Jet2) -> f64 {
        self.assert_same_shape(other);
        self.coeffs
            .iter()
            .zip(&other.coeffs)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max)
    }

    fn assert_same_shape(&self, other: &Jet2) {
        assert!(
            self.du == other.du && self.dv == other.dv,
            "jet shape mismatch: ({}, {}) vs ({}, {})",
            self.du,
            self.dv,
            other.du,
            other.dv
        );
    }

    fn zip_with(&self, other: &Jet2, f: impl Fn(f64, f64) -> f64) -> Jet2 {
        self.assert_same_shape(other);
        Jet2 {
            du: self.du,
            dv: self.dv,
            coeffs: self
                .coeffs
                .iter()
                .zip(&other.coeffs)
                .map(|(a, b)| f(*a, *b))
                .collect(),
        }
    }

    fn mul_ref(&self, other: &Jet2) -> Jet2 {
        self.assert_same_shape(other);
        let mut out = Jet2::zeros(self.du, self.dv);
        for i in 0..=self.du {
            for j in 0..=self.dv {
                let mut acc = 0.0;
                for k in 0..=i {
                    for l in 0..=j {
                        acc += self.coeff(k, l) * other.coeff(i - k, j - l);
                    }
                }
                out.set(i, j, acc);
            }
        }
        out
    }

    /// Power-series quotient without the leading-coefficient check.
    fn div_unchecked(&self, other: &Jet2) -> Jet2 {
        self.assert_same_shape(other);
        let b0 = other.value();
        let mut q = Jet2::zeros(self.du, self.dv);
        for i in 0..=self.du {
            for j in 0..=self.dv {
                let mut acc = self.coeff(i, j);
                for k in 0..=i {
                    for l in 0..=j {
                        if k == 0 && l == 0 {
                            continue;
                        }
                        acc -= other.coeff(k, l) * q.coeff(i - k, j - l);
                    }
                }
                q.set(i, j, acc / b0);
            }
        }
        q
    }

    /// Quotient; fails when the divisor's value is below [`TOL_DIV`].
    pub fn checked_div(&self, other: &Jet2) -> Result<Jet2, JetError> {
        if other.value().abs() < TOL_DIV {
            return Err(JetError::DivByZero(other.value()));
        }
        Ok(self.div_unchecked(other))
    }

    pub fn recip(&self) -> Result<Jet2, JetError> {
        Jet2::constant(1.0, self.du, self.dv).checked_div(self)
    }

    /// Composes the univariate series `sum c_k t^k` with `self - value`.
    fn compose(&self, series: &[f64]) -> Jet2 {
        let mut nil = self.clone();
        nil.coeffs[0] = 0.0;
        let mut acc = Jet2::constant(*series.last().expect("non-empty series"), self.du, self.dv);
        for &c in series.iter().rev().skip(1) {
            acc = acc.mul_ref(&nil);
            acc.coeffs[0] += c;
        }
        acc
    }

    fn series_order(&self) -> usize {
        self.du + self.dv
    }

    /// Elementary function of a jet.
    pub fn elem(&self, func: Func) -> Result<Jet2, JetError> {
        let series = func.series(self.value(), self.series_order())?;
        Ok(self.compose(&series))
    }

    /// `self^p` for real `p`; the value must be positive unless `p` is a
    /// non-negative integer.
    pub fn pow_real(&self, p: f64) -> Result<Jet2, JetError> {
        let x = self.value();
        if p.fract() == 0.0 && p >= 0.0 && p <= i32::MAX as f64 {
            return Ok(self.powi(p as u32));
        }
        if x <= 0.0 {
            return Err(JetError::Domain {
                func: "pow",
                value: x,
            });
        }
        let series = binomial_series(x, p, x.powf(p), self.series_order());
        Ok(self.compose(&series))
    }

    /// Integer power by repeated multiplication.
    pub fn powi(&self, n: u32) -> Jet2 {
        let mut acc = Jet2::constant(1.0, self.du, self.dv);
        for _ in 0..n {
            acc = acc.mul_ref(self);
        }
        acc
    }

    pub fn sqrt(&self) -> Result<Jet2, JetError> {
        self.elem(Func::Sqrt)
    }
}

pub fn factorial(n: usize) -> f64 {
    (1..=n).fold(1.0, |acc, k| acc * k as f64)
}

impl Add for Jet2 {
    type Output = Jet2;
    fn add(self, rhs: Jet2) -> Jet2 {
        self.zip_with(&rhs, |a, b| a + b)
    }
}

impl<'a> Add<&'a Jet2> for &'a Jet2 {
    type Output = Jet2;
    fn add(self, rhs: &Jet2) -> Jet2 {
        self.zip_with(rhs, |a, b| a + b)
    }
}

impl Sub for Jet2 {
    type Output = Jet2;
    fn sub(self, rhs: Jet2) -> Jet2 {
        self.zip_with(&rhs, |a, b| a - b)
    }
}

impl<'a> Sub<&'a Jet2> for &'a Jet2 {
    type Output = Jet2;
    fn sub(self, rhs: &Jet2) -> Jet2 {
        self.zip_with(rhs, |a, b| a - b)
    }
}

impl Mul for Jet2 {
    type Output = Jet2;
    fn mul(self, rhs: Jet2) -> Jet2 {
        self.mul_ref(&rhs)
    }
}

impl<'a> Mul<&'a Jet2> for &'a Jet2 {
    type Output = Jet2;
    fn mul(self, rhs: &Jet2) -> Jet2 {
        self.mul_ref(rhs)
    }
}

/// Unchecked quotient with IEEE semantics on a zero divisor; use
/// [`Jet2::checked_div`] where a vanishing denominator is an error.
impl Div for Jet2 {
    type Output = Jet2;
    fn div(self, rhs: Jet2) -> Jet2 {
        self.div_unchecked(&rhs)
    }
}

impl Neg for Jet2 {
    type Output = Jet2;
    fn neg(self) -> Jet2 {
        self.scale(-1.0)
    }
}

/// Finite-difference estimate of `d^{i+j} f / du^i dv^j` at `at`.
///
/// Tensor-product central differences (half-step nodes for odd orders) with
/// one Richardson step on `h` and `h / 2`, giving fourth-order accuracy.
pub fn fd_oracle<F>(f: F, at: (f64, f64), i: usize, j: usize, h: f64) -> f64
where
    F: Fn(f64, f64) -> f64,
{
    assert!(h > 0.0, "step must be positive");
    let coarse = central_stencil(&f, at, i, j, h);
    let fine = central_stencil(&f, at, i, j, h / 2.0);
    (4.0 * fine - coarse) / 3.0
}

fn central_stencil<F>(f: &F, (u, v): (f64, f64), i: usize, j: usize, h: f64) -> f64
where
    F: Fn(f64, f64) -> f64,
{
    let wu = central_weights(i);
    let wv = central_weights(j);
    let mut acc = 0.0;
    for &(ou, cu) in &wu {
        for &(ov, cv) in &wv {
            acc += cu * cv * f(u + ou * h, v + ov * h);
        }
    }
    acc / h.powi((i + j) as i32)
}

/// Offsets (in units of h) and weights of the n-th central difference.
fn central_weights(n: usize) -> Vec<(f64, f64)> {
    let mut binom = 1.0;
    (0..=n)
        .map(|k| {
            if k > 0 {
                binom = binom * (n - k + 1) as f64 / k as f64;
            }
            let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
            (n as f64 / 2.0 - k as f64, sign * binom)
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn constant_jets() {
        let z = Jet2::constant(0.0, 2, 1);
        assert!(z.coeffs.iter().all(|&c| c == 0.0));
        let one = Jet2::constant(1.0, 8, 1);
        let x = Jet2::var(Var::U, 0.3, 8, 1)
            .unwrap()
            .elem(Func::Sin)
            .unwrap();
        assert_eq!(&one * &x, x);
        let p = Jet2::constant(PI, 4, 1) * Jet2::constant(0.0, 4, 1);
        assert!(p.coeffs.iter().all(|&c| c == 0.0));
    }

    #[test]
    fn seeds() {
        let u = Jet2::var(Var::U, 0.0, 2, 1).unwrap();
        let sq = &u * &u;
        assert_eq!(sq.coeff(0, 0), 0.0);
        assert_eq!(sq.coeff(1, 0), 0.0);
        assert_eq!(sq.coeff(2, 0), 1.0);

        let v = Jet2::var(Var::V, 3.0, 1, 1).unwrap();
        assert_eq!(v.value(), 3.0);
        assert_eq!(v.extract(0, 1).unwrap(), 1.0);

        assert_eq!(
            Jet2::var(Var::V, 0.0, 3, 0),
            Err(JetError::DegreeZero(Var::V))
        );
    }

    #[test]
    fn sin_maclaurin() {
        let s = Jet2::var(Var::U, 0.0, 3, 0)
            .unwrap()
            .elem(Func::Sin)
            .unwrap();
        let expect = [0.0, 1.0, 0.0, -1.0 / 6.0];
        for (i, e) in expect.iter().enumerate() {
            assert!((s.coeff(i, 0) - e).abs() < 1e-15);
        }
    }

    #[test]
    fn product_at_two() {
        let u = Jet2::var(Var::U, 2.0, 3, 1).unwrap();
        let sq = &u * &u;
        assert_eq!(sq.extract(0, 0).unwrap(), 4.0);
        assert_eq!(sq.extract(1, 0).unwrap(), 4.0);
        assert_eq!(sq.extract(2, 0).unwrap(), 2.0);
    }

    #[test]
    fn geometric_series() {
        let one = Jet2::constant(1.0, 6, 1);
        let den = &one + &Jet2::var(Var::U, 0.0, 6, 1).unwrap();
        let q = one.checked_div(&den).unwrap();
        for i in 0..=6 {
            let sign = if i % 2 == 0 { 1.0 } else { -1.0 };
            assert!((q.coeff(i, 0) - sign).abs() < 1e-14);
        }
    }

    #[test]
    fn division_by_vanishing_leading_term() {
        let a = Jet2::constant(1.0, 2, 1);
        let b = Jet2::var(Var::U, 0.0, 2, 1).unwrap();
        assert!(matches!(a.checked_div(&b), Err(JetError::DivByZero(_))));
    }

    #[test]
    fn elementary_examples() {
        let e = Jet2::constant(0.0, 4, 1).elem(Func::Exp).unwrap();
        assert_eq!(e.value(), 1.0);
        assert!(e.coeffs[1..].iter().all(|&c| c == 0.0));

        let c = Jet2::var(Var::U, 0.0, 4, 1)
            .unwrap()
            .elem(Func::Cos)
            .unwrap();
        assert!((c.extract(2, 0).unwrap() + 1.0).abs() < 1e-15);

        let one_plus_u = Jet2::constant(1.0, 3, 1) + Jet2::var(Var::U, 0.0, 3, 1).unwrap();
        let r = one_plus_u.sqrt().unwrap();
        assert!((r.extract(1, 0).unwrap() - 0.5).abs() < 1e-15);

        let at_zero = Jet2::var(Var::U, 0.0, 3, 1).unwrap();
        assert!(matches!(
            at_zero.elem(Func::Log),
            Err(JetError::Domain { .. })
        ));
        assert!(matches!(
            at_zero.elem(Func::Sqrt),
            Err(JetError::Domain { .. })
        ));
        let pole = Jet2::var(Var::U, PI / 2.0, 3, 1).unwrap();
        assert!(matches!(pole.elem(Func::Tan), Err(JetError::Domain { .. })));
    }

    #[test]
    fn extract_scaling() {
        let u = Jet2::var(Var::U, 0.0, 4, 1).unwrap();
        let cube = u.powi(3);
        assert_eq!(cube.extract(3, 0).unwrap(), 6.0);
        assert!(matches!(
            cube.extract(5, 0),
            Err(JetError::IndexOutOfRange { .. })
        ));
        let x = Jet2::var(Var::U, 0.7, 4, 1)
            .unwrap()
            .elem(Func::Exp)
            .unwrap();
        assert_eq!(x.extract(0, 0).unwrap(), 0.7f64.exp());
    }

    #[test]
    fn derivative_shift() {
        let u = Jet2::var(Var::U, 0.5, 5, 2).unwrap();
        let v = Jet2::var(Var::V, -0.2, 5, 2).unwrap();
        let f = (&u * &v).elem(Func::Sin).unwrap();
        let fu = f.deriv_u();
        assert_eq!(fu.shape(), (4, 2));
        assert!((fu.extract(1, 1).unwrap() - f.extract(2, 1).unwrap()).abs() < 1e-12);
        let fv = f.deriv_v();
        assert!((fv.extract(3, 0).unwrap() - f.extract(3, 1).unwrap()).abs() < 1e-12);
    }

    #[test]
    fn tan_matches_sin_over_cos() {
        let u = Jet2::var(Var::U, 0.4, 6, 1).unwrap();
        let t = u.elem(Func::Tan).unwrap();
        let q = u
            .elem(Func::Sin)
            .unwrap()
            .checked_div(&u.elem(Func::Cos).unwrap())
            .unwrap();
        assert!(t.max_abs_diff(&q) < 1e-12);
    }

    #[test]
    fn fd_oracle_examples() {
        let d = fd_oracle(|u, _| u.sin(), (0.0, 0.0), 1, 0, DEFAULT_FD_STEP);
        assert!((d - 1.0).abs() < 1e-6);
        let d = fd_oracle(|u, v| u * u * v, (0.3, -0.4), 2, 1, DEFAULT_FD_STEP);
        assert!((d - 2.0).abs() < 1e-6);
    }

    #[test]
    #[should_panic(expected = "shape mismatch")]
    fn mismatched_shapes_panic() {
        let _ = Jet2::constant(1.0, 2, 1) + Jet2::constant(1.0, 3, 1);
    }
}
