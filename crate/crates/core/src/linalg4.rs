//! Vector algebra in Euclidean 4-space over any [`Scalar`].

use std::ops::{Add, Neg, Sub};

use thiserror::Error;

use crate::scalar::Scalar;
use crate::taylor::{Jet2, JetError};

/// Minimum residual norm accepted by [`gram_schmidt_e`].
pub const TOL_E: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum FrameVectorError {
    #[error("E_DEGENERATE_E: third derivative lies in span{{N, T}} (residual norm {0:e})")]
    Degenerate(f64),
    #[error(transparent)]
    Jet(#[from] JetError),
}

#[derive(Debug, Clone, PartialEq)]
pub struct Vec4<S>(pub [S; 4]);

impl<S: Scalar> Vec4<S> {
    pub fn new(x0: S, x1: S, x2: S, x3: S) -> Self {
        Vec4([x0, x1, x2, x3])
    }

    pub fn map<T>(&self, f: impl Fn(&S) -> T) -> Vec4<T> {
        let [a, b, c, d] = &self.0;
        Vec4([f(a), f(b), f(c), f(d)])
    }

    pub fn try_map<T, E>(&self, f: impl Fn(&S) -> Result<T, E>) -> Result<Vec4<T>, E> {
        let [a, b, c, d] = &self.0;
        Ok(Vec4([f(a)?, f(b)?, f(c)?, f(d)?]))
    }

    pub fn scale(&self, k: &S) -> Self {
        self.map(|x| x.clone() * k.clone())
    }

    pub fn values(&self) -> Vec4<f64> {
        self.map(|x| x.value())
    }

    pub fn norm(&self) -> Result<S, JetError> {
        dot(self, self).try_sqrt()
    }

    pub fn normalize(&self) -> Result<Self, JetError> {
        let n = self.norm()?;
        self.try_map(|x| x.checked_div(&n))
    }
}

impl Vec4<f64> {
    pub fn euclid(&self) -> f64 {
        dot(self, self).sqrt()
    }

    pub fn basis(k: usize) -> Self {
        let mut v = [0.0; 4];
        v[k] = 1.0;
        Vec4(v)
    }
}

impl Vec4<Jet2> {
    pub fn deriv_u(&self) -> Self {
        self.map(Jet2::deriv_u)
    }

    pub fn deriv_v(&self) -> Self {
        self.map(Jet2::deriv_v)
    }

    pub fn truncate(&self, du: usize, dv: usize) -> Self {
        self.map(|x| x.truncate(du, dv))
    }

    /// Partial derivative `(i, j)` of every component at the base point.
    pub fn extract(&self, i: usize, j: usize) -> Result<Vec4<f64>, JetError> {
        self.try_map(|x| x.extract(i, j))
    }
}

impl<S: Scalar> Add for Vec4<S> {
    type Output = Vec4<S>;
    fn add(self, rhs: Vec4<S>) -> Vec4<S> {
        let [a0, a1, a2, a3] = self.0;
        let [b0, b1, b2, b3] = rhs.0;
        Vec4([a0 + b0, a1 + b1, a2 + b2, a3 + b3])
    }
}

impl<S: Scalar> Sub for Vec4<S> {
    type Output = Vec4<S>;
    fn sub(self, rhs: Vec4<S>) -> Vec4<S> {
        let [a0, a1, a2, a3] = self.0;
        let [b0, b1, b2, b3] = rhs.0;
        Vec4([a0 - b0, a1 - b1, a2 - b2, a3 - b3])
    }
}

impl<S: Scalar> Neg for Vec4<S> {
    type Output = Vec4<S>;
    fn neg(self) -> Vec4<S> {
        let [a0, a1, a2, a3] = self.0;
        Vec4([-a0, -a1, -a2, -a3])
    }
}

pub fn dot<S: Scalar>(a: &Vec4<S>, b: &Vec4<S>) -> S {
    let [a0, a1, a2, a3] = &a.0;
    let [b0, b1, b2, b3] = &b.0;
    a0.clone() * b0.clone()
        + a1.clone() * b1.clone()
        + a2.clone() * b2.clone()
        + a3.clone() * b3.clone()
}

fn det3<S: Scalar>(m: [[&S; 3]; 3]) -> S {
    let minor = |r1: usize, r2: usize, c1: usize, c2: usize| {
        m[r1][c1].clone() * m[r2][c2].clone() - m[r1][c2].clone() * m[r2][c1].clone()
    };
    m[0][0].clone() * minor(1, 2, 1, 2) - m[0][1].clone() * minor(1, 2, 0, 2)
        + m[0][2].clone() * minor(1, 2, 0, 1)
}

/// Ternary cross product: the vector `X` with `<X, w> = det[w; a; b; c]`.
///
/// With this orientation `cross3(e1, e2, e3) = -e4` and `cross3(e4, e1, e2) = e3`.
pub fn cross3<S: Scalar>(a: &Vec4<S>, b: &Vec4<S>, c: &Vec4<S>) -> Vec4<S> {
    let col = |k: usize| -> S {
        let keep: Vec<usize> = (0..4).filter(|&m| m != k).collect();
        let pick = |v: &Vec4<S>| {
            [
                v.0[keep[0]].clone(),
                v.0[keep[1]].clone(),
                v.0[keep[2]].clone(),
            ]
        };
        let (ra, rb, rc) = (pick(a), pick(b), pick(c));
        let d = det3([
            [&ra[0], &ra[1], &ra[2]],
            [&rb[0], &rb[1], &rb[2]],
            [&rc[0], &rc[1], &rc[2]],
        ]);
        if k.is_multiple_of(2) {
            d
        } else {
            -d
        }
    };
    Vec4([col(0), col(1), col(2), col(3)])
}

/// Unit vector along the part of `gamma3` orthogonal to `n` and `t`.
pub fn gram_schmidt_e<S: Scalar>(
    gamma3: &Vec4<S>,
    n: &Vec4<S>,
    t: &Vec4<S>,
) -> Result<Vec4<S>, FrameVectorError> {
    gram_schmidt_e_with(gamma3, n, t, TOL_E)
}

/// [`gram_schmidt_e`] with an explicit degeneracy threshold.
pub fn gram_schmidt_e_with<S: Scalar>(
    gamma3: &Vec4<S>,
    n: &Vec4<S>,
    t: &Vec4<S>,
    tol: f64,
) -> Result<Vec4<S>, FrameVectorError> {
    let r = gamma3.clone() - n.scale(&dot(gamma3, n)) - t.scale(&dot(gamma3, t));
    let size = r.values().euclid();
    if size < tol {
        return Err(FrameVectorError::Degenerate(size));
    }
    Ok(r.normalize()?)
}
