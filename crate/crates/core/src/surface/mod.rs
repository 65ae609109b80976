//! Lightcone framed surfaces `(X, v, w)`: the lightcone frame, the basic
//! invariants and the framed-surface validation gate.
//!
//! All scalar invariants are built as symbolic expressions once, from the
//! defining pseudo inner products, and their partial derivatives are exact
//! symbolic derivatives of those expressions. Classification predicates
//! downstream are sign tests on these partials.

mod file;
mod validate;

use std::sync::Arc;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::expr::{parse, CompiledField, Expr, Var};
use crate::minkowski::LVec3;

pub use file::SurfaceFile;
pub use validate::{validate_framed, FramedValidationReport, ValidationCheck, Witness};

/// Closed parameter box `[u0, u1] x [v0, v1]`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Domain {
    pub u: (f64, f64),
    pub v: (f64, f64),
}

impl Domain {
    pub fn new(u: (f64, f64), v: (f64, f64)) -> Result<Self> {
        for (name, (a, b)) in [("u", u), ("v", v)] {
            if !(a.is_finite() && b.is_finite() && a < b) {
                return Err(Error::InvalidDomain(format!("{name} interval [{a}, {b}]")));
            }
        }
        Ok(Domain { u, v })
    }

    /// Membership with a small relative slack for rounding at the edges.
    pub fn contains(&self, u: f64, v: f64) -> bool {
        let su = 1e-12 * (self.u.1 - self.u.0);
        let sv = 1e-12 * (self.v.1 - self.v.0);
        u >= self.u.0 - su && u <= self.u.1 + su && v >= self.v.0 - sv && v <= self.v.1 + sv
    }

    /// Closed sampling: both interval endpoints are grid points.
    pub fn grid(&self, nu: usize, nv: usize) -> Vec<(f64, f64)> {
        let us = linspace(self.u, nu);
        let vs = linspace(self.v, nv);
        us.iter()
            .flat_map(|&u| vs.iter().map(move |&v| (u, v)))
            .collect()
    }
}

pub(crate) fn as_strs(a: &[String; 3]) -> [&str; 3] {
    a.each_ref().map(String::as_str)
}

pub(crate) fn linspace((a, b): (f64, f64), n: usize) -> Vec<f64> {
    if n == 1 {
        return vec![a];
    }
    (0..n)
        .map(|i| {
            if i == n - 1 {
                b
            } else {
                a + (b - a) * i as f64 / (n - 1) as f64
            }
        })
        .collect()
}

/// The derived scalar fields available for tracing and order estimates.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum ScalarField {
    A1,
    B1,
    C2,
    LambdaTil,
}

type SymVec = [Expr; 3];

fn sym_dot(a: &SymVec, b: &SymVec) -> Expr {
    Expr::add(
        Expr::add(
            Expr::neg(Expr::mul(a[0].clone(), b[0].clone())),
            Expr::mul(a[1].clone(), b[1].clone()),
        ),
        Expr::mul(a[2].clone(), b[2].clone()),
    )
}

fn sym_minor(a: &Expr, b: &Expr, c: &Expr, d: &Expr) -> Expr {
    Expr::sub(
        Expr::mul(a.clone(), b.clone()),
        Expr::mul(c.clone(), d.clone()),
    )
}

fn sym_wedge(a: &SymVec, b: &SymVec) -> SymVec {
    [
        Expr::neg(sym_minor(&a[1], &b[2], &a[2], &b[1])),
        Expr::neg(sym_minor(&a[0], &b[2], &a[2], &b[0])),
        sym_minor(&a[0], &b[1], &a[1], &b[0]),
    ]
}

fn sym_scale(k: f64, a: &SymVec) -> SymVec {
    a.clone().map(|e| Expr::mul(Expr::num(k), e))
}

fn sym_diff(a: &SymVec, var: Var) -> SymVec {
    a.clone().map(|e| e.differentiate(var))
}

fn eval_vec(a: &SymVec, u: f64, v: f64) -> Result<LVec3> {
    let f = Error::eval;
    Ok(LVec3::new(
        a[0].eval(u, v).map_err(f(u, v))?,
        a[1].eval(u, v).map_err(f(u, v))?,
        a[2].eval(u, v).map_err(f(u, v))?,
    ))
}

/// Symbolic scalar invariants, one expression per field of [`BasicInvariants`].
#[derive(Debug)]
struct InvariantExprs {
    a1: Expr,
    b1: Expr,
    c1: Expr,
    a2: Expr,
    b2: Expr,
    c2: Expr,
    e1: Expr,
    f1: Expr,
    g1: Expr,
    e2: Expr,
    f2: Expr,
    g2: Expr,
    a1u: Expr,
    a1v: Expr,
    b1u: Expr,
    b1v: Expr,
    c1u: Expr,
    c1v: Expr,
    c2u: Expr,
    c2v: Expr,
}

#[derive(Debug)]
struct Symbolic {
    x: SymVec,
    x_u: SymVec,
    x_v: SymVec,
    x_uu: SymVec,
    x_uv: SymVec,
    v: SymVec,
    w: SymVec,
    m: SymVec,
    v_u: SymVec,
    v_v: SymVec,
    w_u: SymVec,
    w_v: SymVec,
    m_u: SymVec,
    m_v: SymVec,
    inv: InvariantExprs,
}

impl Symbolic {
    fn build(x: &[CompiledField; 3], fv: &[CompiledField; 3], fw: &[CompiledField; 3]) -> Self {
        let pick = |fs: &[CompiledField; 3], du, dv| -> SymVec {
            [0, 1, 2].map(|i| fs[i].derivative(du, dv).clone())
        };
        let x_u = pick(x, 1, 0);
        let x_v = pick(x, 0, 1);
        let v = pick(fv, 0, 0);
        let w = pick(fw, 0, 0);
        let m = sym_scale(-0.5, &sym_wedge(&v, &w));
        let v_u = pick(fv, 1, 0);
        let v_v = pick(fv, 0, 1);
        let w_u = pick(fw, 1, 0);
        let w_v = pick(fw, 0, 1);
        let m_u = sym_diff(&m, Var::U);
        let m_v = sym_diff(&m, Var::V);

        let half = |k: f64, e: Expr| Expr::mul(Expr::num(k), e);
        let a1 = half(-0.5, sym_dot(&x_u, &w));
        let b1 = half(-0.5, sym_dot(&x_u, &v));
        let c1 = sym_dot(&x_u, &m);
        let a2 = half(-0.5, sym_dot(&x_v, &w));
        let b2 = half(-0.5, sym_dot(&x_v, &v));
        let c2 = sym_dot(&x_v, &m);
        let inv = InvariantExprs {
            e1: half(0.5, sym_dot(&v, &w_u)),
            f1: half(0.5, sym_dot(&w_u, &m)),
            g1: half(0.5, sym_dot(&v_u, &m)),
            e2: half(0.5, sym_dot(&v, &w_v)),
            f2: half(0.5, sym_dot(&w_v, &m)),
            g2: half(0.5, sym_dot(&v_v, &m)),
            a1u: a1.differentiate(Var::U),
            a1v: a1.differentiate(Var::V),
            b1u: b1.differentiate(Var::U),
            b1v: b1.differentiate(Var::V),
            c1u: c1.differentiate(Var::U),
            c1v: c1.differentiate(Var::V),
            c2u: c2.differentiate(Var::U),
            c2v: c2.differentiate(Var::V),
            a1,
            b1,
            c1,
            a2,
            b2,
            c2,
        };
        Symbolic {
            x: pick(x, 0, 0),
            x_u,
            x_v,
            x_uu: pick(x, 2, 0),
            x_uv: pick(x, 1, 1),
            v,
            w,
            m,
            v_u,
            v_v,
            w_u,
            w_v,
            m_u,
            m_v,
            inv,
        }
    }
}

/// Expression sources of a surface, as written in a surface file.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SurfaceSource {
    pub name: String,
    pub x: [String; 3],
    pub v: [String; 3],
    pub w: [String; 3],
}

/// A compiled lightcone framed surface candidate. Use [`validate_framed`] to
/// check the framed-surface condition before trusting downstream results.
#[derive(Clone, Debug)]
pub struct SurfaceDef {
    source: SurfaceSource,
    domain: Domain,
    sym: Arc<Symbolic>,
}

impl SurfaceDef {
    pub fn new(
        name: impl Into<String>,
        x: [&str; 3],
        v: [&str; 3],
        w: [&str; 3],
        domain: Domain,
    ) -> Result<Self> {
        let compile = |label: &str, srcs: [&str; 3], order: usize| -> Result<[CompiledField; 3]> {
            let mut out = Vec::with_capacity(3);
            for (i, src) in srcs.iter().enumerate() {
                let e = parse(src).map_err(|source| Error::Parse {
                    context: format!("{label}[{i}] = \"{src}\""),
                    source,
                })?;
                out.push(CompiledField::new(e, order));
            }
            Ok([out.remove(0), out.remove(0), out.remove(0)])
        };
        let fx = compile("X", x, 2)?;
        let fv = compile("v", v, 1)?;
        let fw = compile("w", w, 1)?;
        let sym = Symbolic::build(&fx, &fv, &fw);
        let source = SurfaceSource {
            name: name.into(),
            x: x.map(str::to_string),
            v: v.map(str::to_string),
            w: w.map(str::to_string),
        };
        Ok(SurfaceDef {
            source,
            domain,
            sym: Arc::new(sym),
        })
    }

    pub fn name(&self) -> &str {
        &self.source.name
    }

    pub fn source(&self) -> &SurfaceSource {
        &self.source
    }

    pub fn domain(&self) -> Domain {
        self.domain
    }

    /// Same surface over a different parameter box.
    pub fn with_domain(&self, domain: Domain) -> SurfaceDef {
        SurfaceDef {
            domain,
            ..self.clone()
        }
    }

    /// The three component expressions of X.
    pub fn x_exprs(&self) -> &[Expr; 3] {
        &self.sym.x
    }

    pub fn position(&self, u: f64, v: f64) -> Result<LVec3> {
        eval_vec(&self.sym.x, u, v)
    }

    pub fn frame_at(&self, u: f64, v: f64) -> Result<LightconeFrame> {
        Ok(LightconeFrame {
            v: eval_vec(&self.sym.v, u, v)?,
            w: eval_vec(&self.sym.w, u, v)?,
            m: eval_vec(&self.sym.m, u, v)?,
        })
    }

    /// Parameter derivatives of the frame vectors `(v_u, v_v, w_u, w_v, m_u, m_v)`.
    pub fn frame_derivatives_at(&self, u: f64, v: f64) -> Result<FrameDerivatives> {
        let s = &self.sym;
        Ok(FrameDerivatives {
            v_u: eval_vec(&s.v_u, u, v)?,
            v_v: eval_vec(&s.v_v, u, v)?,
            w_u: eval_vec(&s.w_u, u, v)?,
            w_v: eval_vec(&s.w_v, u, v)?,
            m_u: eval_vec(&s.m_u, u, v)?,
            m_v: eval_vec(&s.m_v, u, v)?,
        })
    }

    pub fn basic_invariants_at(&self, u: f64, v: f64) -> Result<BasicInvariants> {
        let i = &self.sym.inv;
        let ev = |e: &Expr| e.eval(u, v).map_err(Error::eval(u, v));
        Ok(BasicInvariants {
            a1: ev(&i.a1)?,
            b1: ev(&i.b1)?,
            c1: ev(&i.c1)?,
            a2: ev(&i.a2)?,
            b2: ev(&i.b2)?,
            c2: ev(&i.c2)?,
            e1: ev(&i.e1)?,
            f1: ev(&i.f1)?,
            g1: ev(&i.g1)?,
            e2: ev(&i.e2)?,
            f2: ev(&i.f2)?,
            g2: ev(&i.g2)?,
            a1u: ev(&i.a1u)?,
            a1v: ev(&i.a1v)?,
            b1u: ev(&i.b1u)?,
            b1v: ev(&i.b1v)?,
            c1u: ev(&i.c1u)?,
            c1v: ev(&i.c1v)?,
            c2u: ev(&i.c2u)?,
            c2v: ev(&i.c2v)?,
        })
    }

    /// Everything evaluated at one point: partials of X, frame, invariants.
    pub fn jet_at(&self, u: f64, v: f64) -> Result<SurfaceJet> {
        let s = &self.sym;
        Ok(SurfaceJet {
            u,
            v,
            x_u: eval_vec(&s.x_u, u, v)?,
            x_v: eval_vec(&s.x_v, u, v)?,
            x_uu: eval_vec(&s.x_uu, u, v)?,
            x_uv: eval_vec(&s.x_uv, u, v)?,
            frame: self.frame_at(u, v)?,
            inv: self.basic_invariants_at(u, v)?,
        })
    }

    /// Evaluates one derived scalar field without building the full invariants.
    pub fn scalar_at(&self, field: ScalarField, u: f64, v: f64) -> Result<f64> {
        let i = &self.sym.inv;
        let ev = |e: &Expr| e.eval(u, v).map_err(Error::eval(u, v));
        Ok(match field {
            ScalarField::A1 => ev(&i.a1)?,
            ScalarField::B1 => ev(&i.b1)?,
            ScalarField::C2 => ev(&i.c2)?,
            ScalarField::LambdaTil => -4.0 * ev(&i.a1)? * ev(&i.b1)?,
        })
    }

    /// Parameter gradient `(d/du, d/dv)` of a scalar field.
    pub fn scalar_gradient_at(&self, field: ScalarField, u: f64, v: f64) -> Result<(f64, f64)> {
        let inv = self.basic_invariants_at(u, v)?;
        Ok(inv.gradient(field))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct LightconeFrame {
    pub v: LVec3,
    pub w: LVec3,
    pub m: LVec3,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct FrameDerivatives {
    pub v_u: LVec3,
    pub v_v: LVec3,
    pub w_u: LVec3,
    pub w_v: LVec3,
    pub m_u: LVec3,
    pub m_v: LVec3,
}

/// The basic invariants `(G, F1, F2)` at a point plus the first partials of
/// `a1`, `b1`, `c1`, `c2`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct BasicInvariants {
    pub a1: f64,
    pub b1: f64,
    pub c1: f64,
    pub a2: f64,
    pub b2: f64,
    pub c2: f64,
    pub e1: f64,
    pub f1: f64,
    pub g1: f64,
    pub e2: f64,
    pub f2: f64,
    pub g2: f64,
    pub a1u: f64,
    pub a1v: f64,
    pub b1u: f64,
    pub b1v: f64,
    pub c1u: f64,
    pub c1v: f64,
    pub c2u: f64,
    pub c2v: f64,
}

impl BasicInvariants {
    /// Modified discriminant `-4 a1 b1`.
    pub fn lambda_til(&self) -> f64 {
        -4.0 * self.a1 * self.b1
    }

    pub fn gradient(&self, field: ScalarField) -> (f64, f64) {
        match field {
            ScalarField::A1 => (self.a1u, self.a1v),
            ScalarField::B1 => (self.b1u, self.b1v),
            ScalarField::C2 => (self.c2u, self.c2v),
            ScalarField::LambdaTil => (
                -4.0 * (self.a1u * self.b1 + self.a1 * self.b1u),
                -4.0 * (self.a1v * self.b1 + self.a1 * self.b1v),
            ),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct SurfaceJet {
    pub u: f64,
    pub v: f64,
    pub x_u: LVec3,
    pub x_v: LVec3,
    pub x_uu: LVec3,
    pub x_uv: LVec3,
    pub frame: LightconeFrame,
    pub inv: BasicInvariants,
}
