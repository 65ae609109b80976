//! Modified frame `{X_u, m, n~}` and the curvatures built on it.
//!
//! The modified fundamental invariants stay finite at lightlike and 1-st
//! singular points, where the classical `K`, `H` blow up or are undefined.
//! The classical quantities are recovered through
//! `K = K~ / (c2 |l~|^2)` and `H = H~ / (c2 |l~|^{3/2})` with `l~ = -4 a1 b1`.

use std::io::Write;

use rayon::prelude::*;
use serde::Serialize;

use crate::classify::{classify, kappa_cell, Category, Kind};
use crate::format::{g12, opt_g12};
use crate::error::{Error, Result};
use crate::minkowski::LVec3;
use crate::surface::{BasicInvariants, SurfaceDef};

/// Relative factor of the scale-aware zero test.
pub const ZERO_REL: f64 = 1e-9;

/// Step sizes for the `K~ / (2 H~)` directional limit at `0/0` points.
const LIMIT_STEPS: [f64; 3] = [1e-2, 1e-3, 1e-4];

/// The modified first and second fundamental invariants and the derived
/// scalars, all pointwise in the basic invariants.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct ModifiedForms {
    pub etil: f64,
    pub ftil: f64,
    pub gtil: f64,
    pub ltil: f64,
    pub mtil: f64,
    pub ntil: f64,
    pub lambda_til: f64,
    pub ktil: f64,
    pub htil: f64,
}

impl ModifiedForms {
    pub fn from_invariants(i: &BasicInvariants) -> Self {
        let etil = i.c1 * i.c1 - 4.0 * i.a1 * i.b1;
        let ftil = i.c1;
        let gtil = 1.0;
        let ltil = 2.0 * i.a1 * (i.b1u - i.b1 * i.e1 + i.c1 * i.g1)
            - 2.0 * i.b1 * (i.a1u + i.a1 * i.e1 + i.c1 * i.f1);
        let mtil = 2.0 * (i.a1 * i.g1 - i.b1 * i.f1);
        let ntil = 2.0 * (i.a1 * i.g2 - i.b1 * i.f2);
        let lambda_til = -4.0 * i.a1 * i.b1;
        let c2 = i.c2;
        let ktil = ltil * ntil - c2 * mtil * mtil;
        let htil = 0.5 * (c2 * ltil * gtil - 2.0 * c2 * mtil * ftil + ntil * etil);
        ModifiedForms {
            etil,
            ftil,
            gtil,
            ltil,
            mtil,
            ntil,
            lambda_til,
            ktil,
            htil,
        }
    }

    /// `max(|E~|, |L~|, |N~|, 1)`.
    pub fn scale(&self) -> f64 {
        self.etil.abs().max(self.ltil.abs()).max(self.ntil.abs()).max(1.0)
    }

    pub fn zero_tol(&self) -> f64 {
        ZERO_REL * (1.0 + self.scale())
    }

    pub fn is_zero(&self, x: f64) -> bool {
        x.abs() <= self.zero_tol()
    }
}

/// Classical first and second fundamental forms, where `l~ != 0`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct ClassicalForms {
    pub e: f64,
    pub f: f64,
    pub g: f64,
    pub l: f64,
    pub m: f64,
    pub n: f64,
}

impl ClassicalForms {
    pub fn new(mf: &ModifiedForms, c2: f64) -> Option<Self> {
        if mf.lambda_til == 0.0 {
            return None;
        }
        let r = mf.lambda_til.abs().sqrt();
        Some(ClassicalForms {
            e: mf.etil,
            f: c2 * mf.ftil,
            g: c2 * c2 * mf.gtil,
            l: mf.ltil / r,
            m: c2 * mf.mtil / r,
            n: c2 * mf.ntil / r,
        })
    }
}

/// A principal-curvature value with its failure modes.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub enum Kappa {
    Finite(f64),
    Unbounded,
    /// Negative radicand beyond tolerance: no real principal curvature.
    Complex,
    /// The `0/0` limit could not be evaluated.
    Undefined,
}

impl Kappa {
    pub fn value(&self) -> Option<f64> {
        match self {
            Kappa::Finite(x) => Some(*x),
            _ => None,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct CurvaturePacket {
    pub u: f64,
    pub v: f64,
    pub forms: ModifiedForms,
    pub c1: f64,
    pub c2: f64,
    /// `c2 = 0` within the zero tolerance.
    pub c2_zero: bool,
    /// `l~ = 0` within the zero tolerance.
    pub lambda_zero: bool,
    pub k: Option<f64>,
    pub h: Option<f64>,
    /// `H~^2 - c2 l~ K~` after clamping.
    pub radicand: f64,
    /// Bounded branch.
    pub kappa_til_1: Kappa,
    pub kappa_til_2: Kappa,
    /// Classical principal curvatures at regular points, ordered to match
    /// `kappa_til_1`, `kappa_til_2`.
    pub kappa: Option<[f64; 2]>,
    pub v1: Option<[f64; 2]>,
    pub v2: Option<[f64; 2]>,
    pub n_til: LVec3,
}

impl CurvaturePacket {
    pub fn is_regular(&self) -> bool {
        !self.c2_zero && !self.lambda_zero
    }

    pub fn zero_tol(&self) -> f64 {
        self.forms.zero_tol()
    }

    pub fn classical(&self) -> Option<ClassicalForms> {
        if self.is_regular() {
            ClassicalForms::new(&self.forms, self.c2)
        } else {
            None
        }
    }
}

/// `n~ = X_u ^ m = -a1 v + b1 w`.
pub fn modified_normal(s: &SurfaceDef, u: f64, v: f64) -> Result<LVec3> {
    let f = s.frame_at(u, v)?;
    let i = s.basic_invariants_at(u, v)?;
    Ok(-i.a1 * f.v + i.b1 * f.w)
}

pub fn curvature_packet(s: &SurfaceDef, u: f64, v: f64) -> Result<CurvaturePacket> {
    let i = s.basic_invariants_at(u, v)?;
    let frame = s.frame_at(u, v)?;
    let mf = ModifiedForms::from_invariants(&i);
    let c2 = i.c2;
    let lt = mf.lambda_til;
    let c2_zero = mf.is_zero(c2);
    let lambda_zero = mf.is_zero(lt);
    let regular = !c2_zero && !lambda_zero;
    let (k, h) = if regular {
        (
            Some(mf.ktil / (c2 * lt * lt)),
            Some(mf.htil / (c2 * lt.abs().powf(1.5))),
        )
    } else {
        (None, None)
    };

    let raw = mf.htil * mf.htil - c2 * lt * mf.ktil;
    let tol = mf.zero_tol();
    let rad_tol = tol * (1.0 + mf.htil * mf.htil + (c2 * lt * mf.ktil).abs());
    let radicand = if raw < 0.0 && raw >= -rad_tol { 0.0 } else { raw };

    let mut packet = CurvaturePacket {
        u,
        v,
        forms: mf,
        c1: i.c1,
        c2,
        c2_zero,
        lambda_zero,
        k,
        h,
        radicand,
        kappa_til_1: Kappa::Complex,
        kappa_til_2: Kappa::Complex,
        kappa: None,
        v1: None,
        v2: None,
        n_til: -i.a1 * frame.v + i.b1 * frame.w,
    };
    if radicand < 0.0 {
        return Ok(packet);
    }

    let sign = if mf.htil < 0.0 { -1.0 } else { 1.0 };
    let root = radicand.sqrt();
    let d1 = mf.htil + sign * root;
    let d2 = mf.htil - sign * root;

    let kappa1 = if regular {
        if d1 != 0.0 {
            Kappa::Finite(mf.ktil / d1)
        } else {
            Kappa::Finite(d2 / (c2 * lt))
        }
    } else if !mf.is_zero(d1) {
        Kappa::Finite(mf.ktil / d1)
    } else if mf.is_zero(mf.ktil) {
        kappa1_u_limit(s, u, v)
    } else {
        Kappa::Unbounded
    };
    packet.kappa_til_1 = kappa1;
    packet.kappa_til_2 = if regular {
        Kappa::Finite(d1 / (c2 * lt))
    } else {
        Kappa::Unbounded
    };

    if regular {
        let den = c2 * lt * lt.abs().sqrt();
        packet.kappa = Some([d2 / den, d1 / den]);
    }
    if let Some(k1) = kappa1.value() {
        packet.v1 = Some([mf.ntil - c2 * k1 * mf.gtil, -mf.mtil + k1 * mf.ftil]);
    }
    if !lambda_zero {
        let kbar = d1 / lt;
        packet.v2 = Some([c2 * (mf.ntil - kbar), -c2 * mf.mtil + kbar * mf.ftil]);
    }
    Ok(packet)
}

/// Curvature packets over the closed `nu x nv` grid, outer loop u.
pub fn curvature_grid(s: &SurfaceDef, nu: usize, nv: usize) -> Result<Vec<CurvaturePacket>> {
    if nu < 2 || nv < 2 {
        return Err(Error::InvalidGrid { nu, nv, min: 2 });
    }
    s.domain()
        .grid(nu, nv)
        .par_iter()
        .map(|&(u, v)| curvature_packet(s, u, v))
        .collect()
}

pub const CURVATURE_HEADER: [&str; 23] = [
    "u", "v", "Etil", "Ftil", "Gtil", "Ltil", "Mtil", "Ntil", "lambda_til", "c2", "Ktil", "Htil",
    "K", "H", "kappa_til_1", "kappa_til_2", "V1_u", "V1_v", "V2_u", "V2_v", "n_til_1", "n_til_2",
    "n_til_3",
];

pub fn write_curvature_csv<W: Write>(packets: &[CurvaturePacket], out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(CURVATURE_HEADER)?;
    for p in packets {
        let f = &p.forms;
        let v1 = p.v1.map(|x| [Some(x[0]), Some(x[1])]).unwrap_or([None, None]);
        let v2 = p.v2.map(|x| [Some(x[0]), Some(x[1])]).unwrap_or([None, None]);
        w.write_record([
            g12(p.u),
            g12(p.v),
            g12(f.etil),
            g12(f.ftil),
            g12(f.gtil),
            g12(f.ltil),
            g12(f.mtil),
            g12(f.ntil),
            g12(f.lambda_til),
            g12(p.c2),
            g12(f.ktil),
            g12(f.htil),
            opt_g12(p.k),
            opt_g12(p.h),
            kappa_cell(p.kappa_til_1),
            kappa_cell(p.kappa_til_2),
            opt_g12(v1[0]),
            opt_g12(v1[1]),
            opt_g12(v2[0]),
            opt_g12(v2[1]),
            g12(p.n_til.x1),
            g12(p.n_til.x2),
            g12(p.n_til.x3),
        ])?;
    }
    w.flush().map_err(|e| Error::Csv(e.into()))?;
    Ok(())
}

/// Limit of `K~ / (2 H~)` along the u-line through `(u, v)`, stepping toward
/// the domain interior, by two-level Richardson extrapolation (ratio 10).
fn kappa1_u_limit(s: &SurfaceDef, u: f64, v: f64) -> Kappa {
    let d = s.domain();
    let dir = if u <= 0.5 * (d.u.0 + d.u.1) { 1.0 } else { -1.0 };
    let mut q = [0.0; 3];
    for (slot, h) in q.iter_mut().zip(LIMIT_STEPS) {
        let Ok(i) = s.basic_invariants_at(u + dir * h, v) else {
            return Kappa::Undefined;
        };
        let mf = ModifiedForms::from_invariants(&i);
        if mf.htil == 0.0 {
            return Kappa::Undefined;
        }
        *slot = mf.ktil / (2.0 * mf.htil);
    }
    let r12 = (10.0 * q[1] - q[0]) / 9.0;
    let r23 = (10.0 * q[2] - q[1]) / 9.0;
    let value = (100.0 * r23 - r12) / 99.0;
    if value.is_finite() {
        Kappa::Finite(value)
    } else {
        Kappa::Undefined
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct SingularCurvatures {
    pub kappa_v_til: f64,
    pub kappa_c_til: Option<f64>,
    pub kappa_pi_til: Option<f64>,
    pub kappa_t_til: Option<f64>,
    pub mu_c_til: f64,
    pub mu_pi_til: f64,
    pub kappa_v: Option<f64>,
    pub kappa_c: Option<f64>,
    pub kappa_pi: Option<f64>,
    pub kappa_t: Option<f64>,
    pub mu_c: Option<f64>,
    pub mu_pi: Option<f64>,
}

/// Singular-point curvatures from precomputed data. Fails when `E~ = 0`;
/// the `c2v`-dependent values are `None` when `c2v = 0`.
pub fn singular_curvatures_from(
    mf: &ModifiedForms,
    inv: &BasicInvariants,
    u: f64,
    v: f64,
) -> Result<SingularCurvatures> {
    if mf.is_zero(mf.etil) {
        return Err(Error::Precondition {
            u,
            v,
            what: format!("E~ = {:e} vanishes", mf.etil),
        });
    }
    let e = mf.etil.abs();
    let (l, m, n, f) = (mf.ltil, mf.mtil, mf.ntil, mf.ftil);
    let (c2u, c2v) = (inv.c2u, inv.c2v);
    let first = !mf.is_zero(c2v);

    let kappa_v_til = l / e;
    let kappa_c_til = first.then(|| 2.0 * e.powf(0.75) * n / c2v.abs().sqrt());
    let kappa_pi_til = first.then(|| 2.0 * l * n / (e.powf(0.25) * c2v.abs().sqrt()));
    let kappa_t_til = first.then(|| (e * (c2u * n + c2v * m) - c2v * f * l) / (c2v * e));
    let mu_c_til = n * mf.etil;
    let mu_pi_til = mf.etil.signum() * l * n;

    let lt = mf.lambda_til.abs();
    let raw = |x: f64, p: f64| (!mf.is_zero(mf.lambda_til)).then(|| x / lt.powf(p));
    Ok(SingularCurvatures {
        kappa_v_til,
        kappa_c_til,
        kappa_pi_til,
        kappa_t_til,
        mu_c_til,
        mu_pi_til,
        kappa_v: raw(kappa_v_til, 0.5),
        kappa_c: kappa_c_til.and_then(|x| raw(x, 1.25)),
        kappa_pi: kappa_pi_til.and_then(|x| raw(x, 1.75)),
        kappa_t: kappa_t_til.and_then(|x| raw(x, 1.0)),
        mu_c: raw(mu_c_til, 1.5),
        mu_pi: raw(mu_pi_til, 2.0),
    })
}

pub fn singular_curvatures(s: &SurfaceDef, u: f64, v: f64) -> Result<SingularCurvatures> {
    let inv = s.basic_invariants_at(u, v)?;
    let mf = ModifiedForms::from_invariants(&inv);
    singular_curvatures_from(&mf, &inv, u, v)
}

/// One side-by-side zero test `A = 0 <=> B = 0`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ZeroEquivalence {
    pub lhs: &'static str,
    pub lhs_value: f64,
    pub rhs: &'static str,
    pub rhs_value: f64,
    pub lhs_zero: bool,
    pub rhs_zero: bool,
}

impl ZeroEquivalence {
    pub fn agrees(&self) -> bool {
        self.lhs_zero == self.rhs_zero
    }

    pub fn both_zero(&self) -> bool {
        self.lhs_zero && self.rhs_zero
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct EquivalenceReport {
    pub u: f64,
    pub v: f64,
    pub kind: Kind,
    pub checks: Vec<ZeroEquivalence>,
}

impl EquivalenceReport {
    pub fn all_agree(&self) -> bool {
        self.checks.iter().all(ZeroEquivalence::agrees)
    }
}

/// Data at a point that has been confirmed to be a non-degenerate 1-st
/// singular point of known kind with `E~ != 0`.
struct SingularContext {
    kind: Kind,
    mf: ModifiedForms,
    sc: SingularCurvatures,
}

fn singular_context(s: &SurfaceDef, u: f64, v: f64, tol: f64) -> Result<SingularContext> {
    let class = classify(s, u, v, tol)?;
    let kind = match (class.category, class.degenerate, class.kind) {
        (Category::Singular1, Some(false), Some(k @ (Kind::FirstKind | Kind::SecondKind))) => k,
        _ => {
            return Err(Error::WrongClass {
                u,
                v,
                expected: "a non-degenerate 1-st singular point of definite kind",
                found: class.to_string(),
            })
        }
    };
    let inv = s.basic_invariants_at(u, v)?;
    let mf = ModifiedForms::from_invariants(&inv);
    let sc = singular_curvatures_from(&mf, &inv, u, v)?;
    Ok(SingularContext { kind, mf, sc })
}

/// Zero/nonzero agreement of `K~`, `H~` with the singular curvatures:
/// `K~ = 0 <=> k~_Pi = 0` and `H~ = 0 <=> k~_c = 0` at first-kind points,
/// `K~ = 0 <=> m~_Pi = 0` and `H~ = 0 <=> m~_c = 0` at second-kind points.
pub fn singular_zero_equivalences(s: &SurfaceDef, u: f64, v: f64, tol: f64) -> Result<EquivalenceReport> {
    let cx = singular_context(s, u, v, tol)?;
    let mf = &cx.mf;
    let pair = |lhs, a: f64, rhs, b: f64| ZeroEquivalence {
        lhs,
        lhs_value: a,
        rhs,
        rhs_value: b,
        lhs_zero: a.abs() <= tol,
        rhs_zero: b.abs() <= tol,
    };
    let checks = match cx.kind {
        Kind::FirstKind => {
            let (Some(kpi), Some(kc)) = (cx.sc.kappa_pi_til, cx.sc.kappa_c_til) else {
                return Err(Error::Precondition {
                    u,
                    v,
                    what: "c2v vanishes".into(),
                });
            };
            vec![
                pair("Ktil", mf.ktil, "kappa_Pi_til", kpi),
                pair("Htil", mf.htil, "kappa_c_til", kc),
            ]
        }
        _ => vec![
            pair("Ktil", mf.ktil, "mu_Pi_til", cx.sc.mu_pi_til),
            pair("Htil", mf.htil, "mu_c_til", cx.sc.mu_c_til),
        ],
    };
    Ok(EquivalenceReport {
        u,
        v,
        kind: cx.kind,
        checks,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub enum BoundedPrincipalReport {
    NotApplicable {
        reason: String,
    },
    Checked {
        kappa_til_1: f64,
        /// `L~ / E~`, equal to `sign(E~) k~_v`.
        expected: f64,
        kappa_v_til: f64,
        etil_sign: i8,
        agrees: bool,
        kappa_til_2_unbounded: bool,
    },
}

/// At a non-degenerate 1-st singular point with `E~ != 0` and `N~ != 0`,
/// the bounded principal curvature is `L~ / E~`.
pub fn bounded_principal_check(s: &SurfaceDef, u: f64, v: f64, tol: f64) -> Result<BoundedPrincipalReport> {
    let cx = match singular_context(s, u, v, tol) {
        Ok(cx) => cx,
        Err(Error::WrongClass { found, .. }) => {
            return Ok(BoundedPrincipalReport::NotApplicable {
                reason: format!("point is {found}"),
            })
        }
        Err(Error::Precondition { what, .. }) => return Ok(BoundedPrincipalReport::NotApplicable { reason: what }),
        Err(e) => return Err(e),
    };
    let mf = cx.mf;
    if mf.ntil.abs() <= tol {
        return Ok(BoundedPrincipalReport::NotApplicable {
            reason: format!("N~ = {:e} vanishes", mf.ntil),
        });
    }
    let p = curvature_packet(s, u, v)?;
    let Some(k1) = p.kappa_til_1.value() else {
        return Ok(BoundedPrincipalReport::NotApplicable {
            reason: format!("kappa~_1 is {:?}", p.kappa_til_1),
        });
    };
    let expected = mf.ltil / mf.etil;
    Ok(BoundedPrincipalReport::Checked {
        kappa_til_1: k1,
        expected,
        kappa_v_til: cx.sc.kappa_v_til,
        etil_sign: mf.etil.signum() as i8,
        agrees: (k1 - expected).abs() <= 1e-8 * (1.0 + expected.abs()),
        kappa_til_2_unbounded: p.kappa_til_2 == Kappa::Unbounded,
    })
}
