//! A parametric surface `Ω(u, v)` in 4-space together with the unit normal
//! of the hypersurface its u-curves live on.

use crate::expr::{Env, EvalError, Expr, Variable};
use crate::linalg4::Vec4;
use crate::scalar::Scalar;
use crate::taylor::{Jet2, Var};

#[derive(Debug, Clone, PartialEq)]
pub enum NormalSource {
    /// Normal given directly as four expressions in `u, v`; normalized on use.
    Explicit([Expr; 4]),
    /// Hypersurface `f(x, y, z, w) = 0`; the normal is `∇f / |∇f|` along `Ω`.
    Implicit { f: Expr, gradient: [Expr; 4] },
}

impl NormalSource {
    pub fn implicit(f: Expr) -> Self {
        let gradient = [Variable::X, Variable::Y, Variable::Z, Variable::W].map(|v| f.diff(v));
        NormalSource::Implicit { f, gradient }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SurfaceSpec {
    pub omega: [Expr; 4],
    pub normal: NormalSource,
    /// Reverse the normal's orientation.
    pub flip_normal: bool,
}

fn uv_env<S: Scalar>(u: S, v: S) -> Env<S> {
    Env::new().with(Variable::U, u).with(Variable::V, v)
}

fn xyzw_env<S: Scalar>(p: &Vec4<S>) -> Env<S> {
    let [x, y, z, w] = p.0.clone();
    Env::new()
        .with(Variable::X, x)
        .with(Variable::Y, y)
        .with(Variable::Z, z)
        .with(Variable::W, w)
}

fn eval4<S: Scalar>(exprs: &[Expr; 4], env: &Env<S>) -> Result<Vec4<S>, EvalError> {
    let [a, b, c, d] = exprs;
    Ok(Vec4([
        a.eval(env)?,
        b.eval(env)?,
        c.eval(env)?,
        d.eval(env)?,
    ]))
}

impl SurfaceSpec {
    pub fn new(omega: [Expr; 4], normal: NormalSource) -> Self {
        SurfaceSpec {
            omega,
            normal,
            flip_normal: false,
        }
    }

    /// `Ω` as jets in `(u, v)` about `at`.
    pub fn omega_jet(&self, at: (f64, f64), du: usize, dv: usize) -> Result<Vec4<Jet2>, EvalError> {
        let u = Jet2::var(Var::U, at.0, du, dv)?;
        let v = Jet2::var(Var::V, at.1, du, dv)?;
        eval4(&self.omega, &uv_env(u, v))
    }

    pub fn omega_at(&self, u: f64, v: f64) -> Result<Vec4<f64>, EvalError> {
        eval4(&self.omega, &uv_env(u, v))
    }

    /// Unit normal along `Ω`, given the base parameters and `Ω` itself.
    pub fn unit_normal<S: Scalar>(
        &self,
        u: S,
        v: S,
        omega: &Vec4<S>,
    ) -> Result<Vec4<S>, EvalError> {
        let raw = match &self.normal {
            NormalSource::Explicit(exprs) => eval4(exprs, &uv_env(u, v))?,
            NormalSource::Implicit { gradient, .. } => eval4(gradient, &xyzw_env(omega))?,
        };
        let unit = raw.normalize()?;
        Ok(if self.flip_normal { -unit } else { unit })
    }

    /// Normal as jets about `at`, consistent with [`SurfaceSpec::omega_jet`].
    pub fn normal_jet(&self, at: (f64, f64), omega: &Vec4<Jet2>) -> Result<Vec4<Jet2>, EvalError> {
        let (du, dv) = omega.0[0].shape();
        let u = Jet2::var(Var::U, at.0, du, dv)?;
        let v = Jet2::var(Var::V, at.1, du, dv)?;
        self.unit_normal(u, v, omega)
    }

    /// `f(Ω(u, v))` for an implicit normal source, `None` otherwise.
    pub fn membership(&self, u: f64, v: f64) -> Result<Option<f64>, EvalError> {
        match &self.normal {
            NormalSource::Explicit(_) => Ok(None),
            NormalSource::Implicit { f, .. } => {
                let p = self.omega_at(u, v)?;
                Ok(Some(f.eval(&xyzw_env(&p))?))
            }
        }
    }
}
