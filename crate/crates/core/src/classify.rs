//! Pointwise taxonomy of a lightcone framed surface: spacelike, timelike,
//! lightlike (`L1`: `a1 = 0`, `L2`: `b1 = 0`), 1-st singular (`c2 = 0`) and
//! 2-nd singular (`a1 = b1 = 0`) points, with degeneracy and kind.

use std::fmt;
use std::io::Write;

use rayon::prelude::*;
use serde::Serialize;

use crate::curvature::{curvature_packet, singular_curvatures_from, CurvaturePacket, Kappa, ModifiedForms};
use crate::error::{Error, Result};
use crate::format::{g12, opt_g12};
use crate::minkowski::pseudo_dot;
use crate::surface::{BasicInvariants, SurfaceDef};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum Category {
    Spacelike,
    Timelike,
    Lightlike,
    Singular1,
    Singular2,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum LightlikeSub {
    L1,
    L2,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum Kind {
    FirstKind,
    SecondKind,
    Indeterminate,
}

/// Test values with `|x|` in `(tol, INDETERMINATE_BAND * tol]` are too close to
/// the decision boundary to call.
pub const INDETERMINATE_BAND: f64 = 10.0;

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct PointClass {
    pub category: Category,
    pub sub: Option<LightlikeSub>,
    pub kind: Option<Kind>,
    pub degenerate: Option<bool>,
    /// The value whose vanishing decides the kind.
    pub kind_value: Option<f64>,
}

impl PointClass {
    fn plain(category: Category) -> Self {
        PointClass {
            category,
            sub: None,
            kind: None,
            degenerate: None,
            kind_value: None,
        }
    }
}

impl fmt::Display for Category {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

impl fmt::Display for LightlikeSub {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

impl fmt::Display for Kind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

impl fmt::Display for PointClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.category)?;
        if let Some(s) = self.sub {
            write!(f, " {s}")?;
        }
        if let Some(d) = self.degenerate {
            write!(f, " {}", if d { "degenerate" } else { "non-degenerate" })?;
        }
        if let Some(k) = self.kind {
            write!(f, " {k}")?;
        }
        Ok(())
    }
}

fn kind_of(x: f64, degenerate: bool, tol: f64) -> Kind {
    if degenerate {
        Kind::Indeterminate
    } else if x.abs() <= tol {
        Kind::SecondKind
    } else if x.abs() <= INDETERMINATE_BAND * tol {
        Kind::Indeterminate
    } else {
        Kind::FirstKind
    }
}

/// Classification from invariants already evaluated at the point.
pub fn classify_invariants(i: &BasicInvariants, tol: f64) -> PointClass {
    if i.a1 * i.a1 + i.b1 * i.b1 <= tol {
        return PointClass::plain(Category::Singular2);
    }
    if i.c2.abs() <= tol {
        let degenerate = i.c2u.hypot(i.c2v) <= tol;
        return PointClass {
            category: Category::Singular1,
            sub: None,
            kind: Some(kind_of(i.c2v, degenerate, tol)),
            degenerate: Some(degenerate),
            kind_value: Some(i.c2v),
        };
    }
    let lightlike = if i.a1.abs() <= tol {
        Some((LightlikeSub::L1, i.a1u.hypot(i.a1v), i.a1u * i.c2 - i.a1v * i.c1))
    } else if i.b1.abs() <= tol {
        Some((LightlikeSub::L2, i.b1u.hypot(i.b1v), i.b1u * i.c2 - i.b1v * i.c1))
    } else {
        None
    };
    if let Some((sub, grad, x)) = lightlike {
        let degenerate = grad <= tol;
        return PointClass {
            category: Category::Lightlike,
            sub: Some(sub),
            kind: Some(kind_of(x, degenerate, tol)),
            degenerate: Some(degenerate),
            kind_value: Some(x),
        };
    }
    if i.lambda_til() > 0.0 {
        PointClass::plain(Category::Spacelike)
    } else {
        PointClass::plain(Category::Timelike)
    }
}

pub fn classify(s: &SurfaceDef, u: f64, v: f64, tol: f64) -> Result<PointClass> {
    Ok(classify_invariants(&s.basic_invariants_at(u, v)?, tol))
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct NullVector {
    /// Components along `d/du`, `d/dv`.
    pub eta: [f64; 2],
    /// `<dX(eta), dX(eta)>` evaluated from the surface partials.
    pub residual: f64,
}

/// The parameter direction annihilated by the first fundamental form:
/// `(c2, -c1)` at lightlike points, `(0, 1)` at 1-st singular points.
pub fn null_vector(s: &SurfaceDef, u: f64, v: f64, tol: f64) -> Result<NullVector> {
    let j = s.jet_at(u, v)?;
    let class = classify_invariants(&j.inv, tol);
    let eta = match class.category {
        Category::Lightlike => [j.inv.c2, -j.inv.c1],
        Category::Singular1 => [0.0, 1.0],
        _ => {
            return Err(Error::WrongClass {
                u,
                v,
                expected: "Lightlike or Singular1",
                found: class.to_string(),
            })
        }
    };
    let dx = eta[0] * j.x_u + eta[1] * j.x_v;
    Ok(NullVector {
        eta,
        residual: pseudo_dot(&dx, &dx),
    })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub enum LineOfCurvatureReport {
    FirstKind {
        kappa_t_til: f64,
        /// `2 (M~ E~ - L~ F~) / E~` when `E~ > 0`, `2 M~` when `E~ < 0`.
        target: f64,
        formula_holds: bool,
        /// Derivative of `c2` along the bounded principal vector.
        v1_c2: f64,
        directional_holds: bool,
    },
    SecondKind {
        mu_c_til: f64,
        ntil: f64,
        is_line: bool,
    },
}

impl LineOfCurvatureReport {
    pub fn is_line(&self) -> bool {
        match self {
            LineOfCurvatureReport::FirstKind { formula_holds, .. } => *formula_holds,
            LineOfCurvatureReport::SecondKind { is_line, .. } => *is_line,
        }
    }
}

/// Whether the 1-st singular curve through `(u, v)` is a line of curvature.
pub fn line_of_curvature_test(s: &SurfaceDef, u: f64, v: f64, tol: f64) -> Result<LineOfCurvatureReport> {
    let inv = s.basic_invariants_at(u, v)?;
    let class = classify_invariants(&inv, tol);
    if class.category != Category::Singular1 || class.degenerate != Some(false) {
        return Err(Error::WrongClass {
            u,
            v,
            expected: "a non-degenerate 1-st singular point",
            found: class.to_string(),
        });
    }
    let mf = ModifiedForms::from_invariants(&inv);
    let sc = singular_curvatures_from(&mf, &inv, u, v)?;
    match class.kind {
        Some(Kind::FirstKind) => {
            let kt = sc.kappa_t_til.ok_or_else(|| Error::Precondition {
                u,
                v,
                what: "c2v vanishes".into(),
            })?;
            let target = if mf.etil > 0.0 {
                2.0 * (mf.mtil * mf.etil - mf.ltil * mf.ftil) / mf.etil
            } else {
                2.0 * mf.mtil
            };
            let p = curvature_packet(s, u, v)?;
            let v1 = p.v1.ok_or_else(|| Error::Precondition {
                u,
                v,
                what: format!("kappa~_1 is {:?}", p.kappa_til_1),
            })?;
            let v1_c2 = v1[0] * inv.c2u + v1[1] * inv.c2v;
            let scale = 1.0 + mf.scale() * (1.0 + inv.c2u.abs() + inv.c2v.abs());
            Ok(LineOfCurvatureReport::FirstKind {
                kappa_t_til: kt,
                target,
                formula_holds: (kt - target).abs() <= tol * (1.0 + target.abs()),
                v1_c2,
                directional_holds: v1_c2.abs() <= tol * scale,
            })
        }
        Some(Kind::SecondKind) => Ok(LineOfCurvatureReport::SecondKind {
            mu_c_til: sc.mu_c_til,
            ntil: mf.ntil,
            is_line: sc.mu_c_til.abs() <= tol,
        }),
        _ => Err(Error::Precondition {
            u,
            v,
            what: "kind is indeterminate".into(),
        }),
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct GridRow {
    pub u: f64,
    pub v: f64,
    pub class: PointClass,
    pub packet: CurvaturePacket,
}

/// Classifies every point of the closed `nu x nv` grid, outer loop u.
pub fn classify_grid(s: &SurfaceDef, nu: usize, nv: usize, tol: f64) -> Result<Vec<GridRow>> {
    if nu < 2 || nv < 2 {
        return Err(Error::InvalidGrid { nu, nv, min: 2 });
    }
    s.domain()
        .grid(nu, nv)
        .par_iter()
        .map(|&(u, v)| {
            let inv = s.basic_invariants_at(u, v)?;
            Ok(GridRow {
                u,
                v,
                class: classify_invariants(&inv, tol),
                packet: curvature_packet(s, u, v)?,
            })
        })
        .collect()
}

pub const CLASSIFICATION_HEADER: [&str; 13] = [
    "u",
    "v",
    "category",
    "sub",
    "kind",
    "degenerate",
    "lambda_til",
    "c2",
    "Ktil",
    "Htil",
    "K",
    "H",
    "kappa_til_1",
];

pub fn kappa_cell(k: Kappa) -> String {
    match k {
        Kappa::Finite(x) => g12(x),
        Kappa::Unbounded => "inf".into(),
        Kappa::Complex | Kappa::Undefined => String::new(),
    }
}

pub fn write_classification_csv<W: Write>(rows: &[GridRow], out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(CLASSIFICATION_HEADER)?;
    for r in rows {
        let c = &r.class;
        let p = &r.packet;
        w.write_record([
            g12(r.u),
            g12(r.v),
            c.category.to_string(),
            c.sub.map(|s| s.to_string()).unwrap_or_default(),
            c.kind.map(|k| k.to_string()).unwrap_or_default(),
            c.degenerate.map(|d| d.to_string()).unwrap_or_default(),
            g12(p.forms.lambda_til),
            g12(p.c2),
            g12(p.forms.ktil),
            g12(p.forms.htil),
            opt_g12(p.k),
            opt_g12(p.h),
            kappa_cell(p.kappa_til_1),
        ])?;
    }
    w.flush().map_err(|e| Error::Csv(e.into()))?;
    Ok(())
}
