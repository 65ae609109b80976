//! Limits and vanishing orders of `K`, `H` and `c2 K` along straight approach
//! paths to lightlike and 1-st singular points.
//!
//! A quantity `Q = numerator / Gamma` is sampled at distances
//! `r_k = r0 rho^k`. The least-squares slope of `log |Q|` against `log r`
//! decides the verdict: `>= 0.5` tends to zero, `<= -0.5` blows up, and in
//! between a converging sequence gives a nonzero limit, extrapolated with
//! two Richardson levels.

use std::f64::consts::PI;
use std::fmt::Write as _;
use std::io::Write;
use std::str::FromStr;

use rayon::prelude::*;
use serde::Serialize;

use crate::classify::{classify, Category, Kind, PointClass};
use crate::curvature::curvature_packet;
use crate::error::{Error, Result};
use crate::format::g12;
use crate::surface::{ScalarField, SurfaceDef};

pub const SLOPE_THRESHOLD: f64 = 0.5;
/// Distance of a fitted slope to an integer for the order to count as integral.
pub const ORDER_ROUNDING: f64 = 0.15;
/// Values at or below this magnitude are treated as exact zeros.
pub const ZERO_FLOOR: f64 = 1e-13;
const CONVERGENCE_REL: f64 = 1e-6;
const NONZERO_TOL: f64 = 1e-8;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum Quantity {
    K,
    H,
    C2K,
}

impl FromStr for Quantity {
    type Err = String;
    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "K" => Ok(Quantity::K),
            "H" => Ok(Quantity::H),
            "c2K" => Ok(Quantity::C2K),
            _ => Err(format!("unknown quantity `{s}` (expected K, H or c2K)")),
        }
    }
}

impl std::fmt::Display for Quantity {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Quantity::K => "K",
            Quantity::H => "H",
            Quantity::C2K => "c2K",
        })
    }
}

/// Straight-line approach: samples `target + r_k direction`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct ApproachPath {
    pub target: (f64, f64),
    /// Unit vector in parameter space.
    pub direction: (f64, f64),
    pub r0: f64,
    pub rho: f64,
    pub samples: usize,
}

impl ApproachPath {
    pub fn new(target: (f64, f64), direction: (f64, f64)) -> Self {
        let n = direction.0.hypot(direction.1);
        ApproachPath {
            target,
            direction: (direction.0 / n, direction.1 / n),
            r0: 0.1,
            rho: 0.5,
            samples: 12,
        }
    }

    pub fn distances(&self) -> Vec<f64> {
        (0..self.samples).map(|k| self.r0 * self.rho.powi(k as i32)).collect()
    }

    pub fn point(&self, r: f64) -> (f64, f64) {
        (self.target.0 + r * self.direction.0, self.target.1 + r * self.direction.1)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub enum Order {
    Integer(u32),
    Fractional(f64),
    /// The field vanishes identically along the path.
    Infinite,
}

impl Order {
    pub fn as_f64(&self) -> f64 {
        match *self {
            Order::Integer(n) => n as f64,
            Order::Fractional(x) => x,
            Order::Infinite => f64::INFINITY,
        }
    }
}

impl std::fmt::Display for Order {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Order::Integer(n) => write!(f, "{n}"),
            Order::Fractional(x) => write!(f, "{} (fractional)", g12(*x)),
            Order::Infinite => f.write_str("inf"),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct OrderEstimate {
    pub order: Order,
    pub slope: f64,
    /// RMS residual of the log-log fit.
    pub fit_residual: f64,
    /// Extrapolated `field / r^order`, for integral orders.
    pub coefficient: Option<f64>,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub enum Verdict {
    ZeroLimit,
    NonzeroLimit(f64),
    Unbounded,
    Inconclusive,
}

impl Verdict {
    pub fn is_bounded(&self) -> Option<bool> {
        match self {
            Verdict::ZeroLimit | Verdict::NonzeroLimit(_) => Some(true),
            Verdict::Unbounded => Some(false),
            Verdict::Inconclusive => None,
        }
    }
}

impl std::fmt::Display for Verdict {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Verdict::NonzeroLimit(x) => write!(f, "NonzeroLimit({})", g12(*x)),
            other => write!(f, "{other:?}"),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct LimitSample {
    pub r: f64,
    pub u: f64,
    pub v: f64,
    pub value: f64,
    pub numerator: f64,
    pub gamma: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct LimitVerdict {
    pub quantity: Quantity,
    pub path: ApproachPath,
    pub verdict: Verdict,
    pub slope: f64,
    pub fit_residual: f64,
    /// `l`: order of `K~` or `H~`.
    pub numerator_order: OrderEstimate,
    /// `m`: order of `Gamma`.
    pub gamma_order: OrderEstimate,
    pub samples: Vec<LimitSample>,
}

/// The fields whose vanishing orders can be estimated.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum OrderField {
    Ktil,
    Htil,
    LambdaTil,
    C2,
    /// Denominator of the quantity.
    Gamma(Quantity),
}

impl FromStr for OrderField {
    type Err = String;
    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "Ktil" => Ok(OrderField::Ktil),
            "Htil" => Ok(OrderField::Htil),
            "lambda_til" => Ok(OrderField::LambdaTil),
            "c2" => Ok(OrderField::C2),
            _ => Err(format!("unknown field `{s}`")),
        }
    }
}

/// `(numerator, Gamma, defined)` of a quantity at a point; `defined` is
/// false when `Gamma` vanishes there.
fn quantity_parts(s: &SurfaceDef, q: Quantity, u: f64, v: f64) -> Result<(f64, f64, bool)> {
    let p = curvature_packet(s, u, v)?;
    let f = p.forms;
    let l = f.lambda_til.abs();
    let (num, gamma, defined) = match q {
        Quantity::K => (f.ktil, p.c2 * l * l, p.is_regular()),
        Quantity::H => (f.htil, p.c2 * l.powf(1.5), p.is_regular()),
        Quantity::C2K => (f.ktil, l * l, !p.lambda_zero),
    };
    Ok((num, gamma, defined))
}

fn field_at(s: &SurfaceDef, field: OrderField, u: f64, v: f64) -> Result<f64> {
    Ok(match field {
        OrderField::LambdaTil => s.scalar_at(ScalarField::LambdaTil, u, v)?,
        OrderField::C2 => s.scalar_at(ScalarField::C2, u, v)?,
        OrderField::Ktil => curvature_packet(s, u, v)?.forms.ktil,
        OrderField::Htil => curvature_packet(s, u, v)?.forms.htil,
        OrderField::Gamma(q) => quantity_parts(s, q, u, v)?.1,
    })
}

/// Least-squares slope and RMS residual of `log |y|` against `log r`, over the
/// samples with `|y| > ZERO_FLOOR`. `None` with fewer than three such samples.
fn log_log_fit(rs: &[f64], ys: &[f64]) -> Option<(f64, f64)> {
    let pts: Vec<(f64, f64)> = rs
        .iter()
        .zip(ys)
        .filter(|(_, y)| y.abs() > ZERO_FLOOR)
        .map(|(r, y)| (r.ln(), y.abs().ln()))
        .collect();
    if pts.len() < 3 {
        return None;
    }
    let n = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / n;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / n;
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
    let slope = sxy / sxx;
    let rss: f64 = pts
        .iter()
        .map(|p| (p.1 - my - slope * (p.0 - mx)).powi(2))
        .sum();
    Some((slope, (rss / n).sqrt()))
}

/// Two-level Richardson extrapolation of the tail of a sequence sampled at
/// ratio `rho`; also returns the previous estimate for a convergence test.
fn richardson(q: &[f64], rho: f64) -> Option<(f64, f64)> {
    if q.len() < 4 {
        return None;
    }
    let r1: Vec<f64> = q.windows(2).map(|w| (w[1] - rho * w[0]) / (1.0 - rho)).collect();
    let r2: Vec<f64> = r1
        .windows(2)
        .map(|w| (w[1] - rho * rho * w[0]) / (1.0 - rho * rho))
        .collect();
    let n = r2.len();
    Some((r2[n - 1], r2[n - 2]))
}

fn order_from_samples(rs: &[f64], ys: &[f64], rho: f64) -> OrderEstimate {
    let Some((slope, fit_residual)) = log_log_fit(rs, ys) else {
        return OrderEstimate {
            order: Order::Infinite,
            slope: f64::INFINITY,
            fit_residual: 0.0,
            coefficient: None,
        };
    };
    let n = slope.round();
    let order = if (slope - n).abs() <= ORDER_ROUNDING && n >= 0.0 {
        Order::Integer(n as u32)
    } else {
        Order::Fractional(slope)
    };
    let coefficient = match order {
        Order::Integer(m) => {
            let c: Vec<f64> = rs.iter().zip(ys).map(|(r, y)| y / r.powi(m as i32)).collect();
            richardson(&c, rho).map(|(x, _)| x)
        }
        _ => None,
    };
    OrderEstimate {
        order,
        slope,
        fit_residual,
        coefficient,
    }
}

fn sample_points(s: &SurfaceDef, path: &ApproachPath) -> Result<Vec<(f64, f64, f64)>> {
    let d = s.domain();
    path.distances()
        .into_iter()
        .map(|r| {
            let (u, v) = path.point(r);
            if d.contains(u, v) {
                Ok((r, u, v))
            } else {
                Err(Error::SampleOutside { u, v })
            }
        })
        .collect()
}

pub fn limit_along(s: &SurfaceDef, path: &ApproachPath, quantity: Quantity) -> Result<LimitVerdict> {
    let pts = sample_points(s, path)?;
    let mut samples = Vec::with_capacity(pts.len());
    for (r, u, v) in pts {
        let (numerator, gamma, defined) = quantity_parts(s, quantity, u, v)?;
        if !defined {
            return Err(Error::Undefined {
                u,
                v,
                what: quantity.to_string(),
            });
        }
        samples.push(LimitSample {
            r,
            u,
            v,
            value: numerator / gamma,
            numerator,
            gamma,
        });
    }
    let rs: Vec<f64> = samples.iter().map(|x| x.r).collect();
    let qs: Vec<f64> = samples.iter().map(|x| x.value).collect();
    let nums: Vec<f64> = samples.iter().map(|x| x.numerator).collect();
    let gammas: Vec<f64> = samples.iter().map(|x| x.gamma).collect();

    let (verdict, slope, fit_residual) = match log_log_fit(&rs, &qs) {
        None => (Verdict::ZeroLimit, f64::INFINITY, 0.0),
        Some((slope, res)) if slope >= SLOPE_THRESHOLD => (Verdict::ZeroLimit, slope, res),
        Some((slope, res)) if slope <= -SLOPE_THRESHOLD => (Verdict::Unbounded, slope, res),
        Some((slope, res)) => {
            let v = match richardson(&qs, path.rho) {
                Some((last, prev))
                    if (last - prev).abs() <= CONVERGENCE_REL * last.abs().max(1.0)
                        && last.abs() > NONZERO_TOL =>
                {
                    Verdict::NonzeroLimit(last)
                }
                _ => Verdict::Inconclusive,
            };
            (v, slope, res)
        }
    };
    Ok(LimitVerdict {
        quantity,
        path: *path,
        verdict,
        slope,
        fit_residual,
        numerator_order: order_from_samples(&rs, &nums, path.rho),
        gamma_order: order_from_samples(&rs, &gammas, path.rho),
        samples,
    })
}

/// Order of vanishing of `field` at the path target. Fails when the field
/// does not vanish there.
pub fn vanishing_order(
    s: &SurfaceDef,
    path: &ApproachPath,
    field: OrderField,
    tol: f64,
) -> Result<OrderEstimate> {
    let (u, v) = path.target;
    let at = field_at(s, field, u, v)?;
    if at.abs() > tol {
        return Err(Error::Precondition {
            u,
            v,
            what: format!("{field:?} = {} does not vanish", g12(at)),
        });
    }
    let pts = sample_points(s, path)?;
    let rs: Vec<f64> = pts.iter().map(|p| p.0).collect();
    let ys: Vec<f64> = pts
        .iter()
        .map(|&(_, u, v)| field_at(s, field, u, v))
        .collect::<Result<_>>()?;
    Ok(order_from_samples(&rs, &ys, path.rho))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Evidence {
    /// The predicted behaviour was observed on some sampled path.
    Exhibited,
    /// Hypotheses hold but no sampled path shows the behaviour.
    NotExhibited,
    /// Observed behaviour contradicts the implication.
    Contradicted,
    /// Hypotheses not met on the evidence gathered.
    NotApplicable,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DichotomyCheck {
    pub name: &'static str,
    pub evidence: Evidence,
    pub detail: String,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DirectionResult {
    pub direction: (f64, f64),
    pub transversal: bool,
    /// Category at the first sample.
    pub side: Option<Category>,
    pub k: std::result::Result<LimitVerdict, String>,
    pub h: std::result::Result<LimitVerdict, String>,
    /// Only at lightlike targets.
    pub c2k: Option<std::result::Result<LimitVerdict, String>>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BoundednessReport {
    pub u: f64,
    pub v: f64,
    pub class: PointClass,
    pub directions: Vec<DirectionResult>,
    pub k_bounded: Option<bool>,
    pub h_bounded: Option<bool>,
    pub checks: Vec<DichotomyCheck>,
}

fn overall_bounded<'a>(vs: impl Iterator<Item = &'a std::result::Result<LimitVerdict, String>>) -> Option<bool> {
    let mut any = false;
    let mut all_bounded = true;
    for v in vs.flatten() {
        any = true;
        match v.verdict.is_bounded() {
            Some(false) => return Some(false),
            Some(true) => {}
            None => all_bounded = false,
        }
    }
    (any && all_bounded).then_some(true)
}

fn has(r: &std::result::Result<LimitVerdict, String>, pred: impl Fn(&Verdict) -> bool) -> bool {
    r.as_ref().map(|v| pred(&v.verdict)).unwrap_or(false)
}

/// Samples `K`, `H` (and `c2 K` at lightlike points) along a fan of
/// `directions` rays plus the ray transversal to the locus, then checks the
/// boundedness dichotomies on the evidence.
pub fn boundedness_report(
    s: &SurfaceDef,
    u: f64,
    v: f64,
    directions: usize,
    tol: f64,
) -> Result<BoundednessReport> {
    let class = classify(s, u, v, tol)?;
    let locus = match class.category {
        Category::Lightlike => ScalarField::LambdaTil,
        Category::Singular1 => ScalarField::C2,
        _ => {
            return Err(Error::WrongClass {
                u,
                v,
                expected: "Lightlike or Singular1",
                found: class.to_string(),
            })
        }
    };
    let d = s.domain();
    let (gu, gv) = s.scalar_gradient_at(locus, u, v)?;
    let mut rays: Vec<((f64, f64), bool)> = (0..directions)
        .map(|k| {
            let t = 2.0 * PI * k as f64 / directions as f64;
            ((t.cos(), t.sin()), false)
        })
        .collect();
    let g = gu.hypot(gv);
    if g > 0.0 {
        let mut t = (gu / g, gv / g);
        let probe = ApproachPath::new((u, v), t);
        if !d.contains(probe.point(probe.r0).0, probe.point(probe.r0).1) {
            t = (-t.0, -t.1);
        }
        rays.push((t, true));
    }

    let lightlike = class.category == Category::Lightlike;
    let results: Vec<DirectionResult> = rays
        .par_iter()
        .map(|&(dir, transversal)| {
            let path = ApproachPath::new((u, v), dir);
            let run = |q| limit_along(s, &path, q).map_err(|e| e.to_string());
            let (pu, pv) = path.point(path.r0);
            let side = if d.contains(pu, pv) {
                classify(s, pu, pv, tol).ok().map(|c| c.category)
            } else {
                None
            };
            DirectionResult {
                direction: path.direction,
                transversal,
                side,
                k: run(Quantity::K),
                h: run(Quantity::H),
                c2k: lightlike.then(|| run(Quantity::C2K)),
            }
        })
        .collect();

    let k_bounded = overall_bounded(results.iter().map(|r| &r.k));
    let h_bounded = overall_bounded(results.iter().map(|r| &r.h));
    let zero = |v: &Verdict| *v == Verdict::ZeroLimit;
    let nonzero = |v: &Verdict| matches!(v, Verdict::NonzeroLimit(_));
    let dichotomy = |v: &Verdict| zero(v) || nonzero(v);
    let mut checks = Vec::new();
    let gated = |bounded: Option<bool>, what: &str, hit: bool, detail: String| {
        if bounded != Some(true) {
            (Evidence::NotApplicable, format!("{what} not bounded on the evidence"))
        } else if hit {
            (Evidence::Exhibited, detail)
        } else {
            (Evidence::NotExhibited, detail)
        }
    };

    if lightlike {
        let side_zero = |cat| {
            results
                .iter()
                .any(|r| r.side == Some(cat) && has(&r.h, zero))
        };
        let (sp, tl) = (side_zero(Category::Spacelike), side_zero(Category::Timelike));
        let (evidence, detail) = gated(
            h_bounded,
            "H",
            sp && tl,
            format!("H -> 0 from spacelike side: {sp}, from timelike side: {tl}"),
        );
        checks.push(DichotomyCheck {
            name: "lightlike_mean_curvature_vanishes_from_both_sides",
            evidence,
            detail,
        });
        let hit = results.iter().any(|r| {
            has(&r.k, zero) || r.c2k.as_ref().map(|c| has(c, nonzero)).unwrap_or(false)
        });
        let (evidence, detail) = gated(k_bounded, "K", hit, "K -> 0 or c2 K -> nonzero".into());
        checks.push(DichotomyCheck {
            name: "lightlike_gauss_curvature_dichotomy",
            evidence,
            detail,
        });
    } else {
        let hit = results.iter().any(|r| has(&r.h, dichotomy));
        let (evidence, detail) = gated(h_bounded, "H", hit, "H -> 0 or H -> nonzero".into());
        checks.push(DichotomyCheck {
            name: "singular_mean_curvature_dichotomy",
            evidence,
            detail,
        });
        let hit = results.iter().any(|r| has(&r.k, dichotomy));
        let (evidence, detail) = gated(k_bounded, "K", hit, "K -> 0 or K -> nonzero".into());
        checks.push(DichotomyCheck {
            name: "singular_gauss_curvature_dichotomy",
            evidence,
            detail,
        });
        let (evidence, detail) = if class.kind != Some(Kind::FirstKind) {
            (Evidence::NotApplicable, "not a first-kind point".to_string())
        } else if h_bounded != Some(true) {
            (Evidence::NotApplicable, "H not bounded on the evidence".to_string())
        } else {
            match k_bounded {
                Some(true) => (Evidence::Exhibited, "H and K bounded".to_string()),
                Some(false) => (Evidence::Contradicted, "H bounded but K unbounded".to_string()),
                None => (Evidence::NotExhibited, "K inconclusive".to_string()),
            }
        };
        checks.push(DichotomyCheck {
            name: "first_kind_bounded_mean_implies_bounded_gauss",
            evidence,
            detail,
        });
    }

    Ok(BoundednessReport {
        u,
        v,
        class,
        directions: results,
        k_bounded,
        h_bounded,
        checks,
    })
}

fn verdict_text(r: &std::result::Result<LimitVerdict, String>) -> String {
    match r {
        Ok(v) => format!(
            "{} slope={} l={} m={}",
            v.verdict,
            g12(v.slope),
            v.numerator_order.order,
            v.gamma_order.order
        ),
        Err(e) => format!("error: {e}"),
    }
}

fn opt_bool(b: Option<bool>) -> &'static str {
    match b {
        Some(true) => "true",
        Some(false) => "false",
        None => "inconclusive",
    }
}

impl BoundednessReport {
    /// `key: value` lines.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "point: {}, {}", g12(self.u), g12(self.v));
        let _ = writeln!(out, "class: {}", self.class);
        let _ = writeln!(out, "directions: {}", self.directions.len());
        for (k, d) in self.directions.iter().enumerate() {
            let key = format!("direction.{k}");
            let _ = writeln!(
                out,
                "{key}.vector: {}, {}{}",
                g12(d.direction.0),
                g12(d.direction.1),
                if d.transversal { " (transversal)" } else { "" }
            );
            let side = d.side.map(|c| c.to_string()).unwrap_or_else(|| "-".into());
            let _ = writeln!(out, "{key}.side: {side}");
            let _ = writeln!(out, "{key}.K: {}", verdict_text(&d.k));
            let _ = writeln!(out, "{key}.H: {}", verdict_text(&d.h));
            if let Some(c) = &d.c2k {
                let _ = writeln!(out, "{key}.c2K: {}", verdict_text(c));
            }
        }
        let _ = writeln!(out, "K_bounded: {}", opt_bool(self.k_bounded));
        let _ = writeln!(out, "H_bounded: {}", opt_bool(self.h_bounded));
        for c in &self.checks {
            let _ = writeln!(out, "check.{}: {:?} ({})", c.name, c.evidence, c.detail);
        }
        out
    }
}

pub const SAMPLES_HEADER: [&str; 9] = [
    "direction", "transversal", "quantity", "k", "r", "u", "v", "value", "verdict",
];

/// Per-sample values of every completed direction.
pub fn write_samples_csv<W: Write>(report: &BoundednessReport, out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(SAMPLES_HEADER)?;
    for (n, d) in report.directions.iter().enumerate() {
        let all = [Some(&d.k), Some(&d.h), d.c2k.as_ref()];
        for lv in all.into_iter().flatten().flatten() {
            for (k, smp) in lv.samples.iter().enumerate() {
                w.write_record([
                    n.to_string(),
                    d.transversal.to_string(),
                    lv.quantity.to_string(),
                    k.to_string(),
                    g12(smp.r),
                    g12(smp.u),
                    g12(smp.v),
                    g12(smp.value),
                    lv.verdict.to_string(),
                ])?;
            }
        }
    }
    w.flush().map_err(|e| Error::Csv(e.into()))?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog;
    use std::f64::consts::{FRAC_PI_2, FRAC_PI_4};

    #[test]
    fn sphere_pole_limits() {
        let s = catalog::sphere();
        let path = ApproachPath::new((FRAC_PI_2, 1.0), (-1.0, 0.0));
        for q in [Quantity::K, Quantity::H] {
            let lv = limit_along(&s, &path, q).unwrap();
            let Verdict::NonzeroLimit(x) = lv.verdict else {
                panic!("{q}: {:?}", lv.verdict)
            };
            assert!((x - 1.0).abs() < 1e-4, "{q}: {x}");
            assert_eq!(lv.numerator_order.order, Order::Integer(1));
            assert_eq!(lv.gamma_order.order, Order::Integer(1));
        }
    }

    #[test]
    fn sphere_lightlike_blows_up() {
        let s = catalog::sphere();
        for dir in [(1.0, 0.0), (-1.0, 0.0)] {
            let path = ApproachPath::new((FRAC_PI_4, 1.0), dir);
            for q in [Quantity::K, Quantity::H] {
                assert_eq!(limit_along(&s, &path, q).unwrap().verdict, Verdict::Unbounded);
            }
        }
    }

    #[test]
    fn sampling_errors() {
        let s = catalog::sphere();
        let out = ApproachPath::new((FRAC_PI_2, 1.0), (1.0, 0.0));
        assert!(matches!(limit_along(&s, &out, Quantity::K), Err(Error::SampleOutside { .. })));
        let on_locus = ApproachPath::new((FRAC_PI_2, 1.0), (0.0, 1.0));
        assert!(matches!(limit_along(&s, &on_locus, Quantity::K), Err(Error::Undefined { .. })));
    }

    #[test]
    fn sphere_vanishing_orders() {
        let s = catalog::sphere();
        let path = ApproachPath::new((FRAC_PI_4, 1.0), (1.0, 0.0));
        let o = vanishing_order(&s, &path, OrderField::LambdaTil, 1e-9).unwrap();
        assert_eq!(o.order, Order::Integer(1));
        assert!((o.coefficient.unwrap().abs() - 2.0).abs() < 1e-6);

        let path = ApproachPath::new((FRAC_PI_2, 1.0), (-1.0, 0.0));
        for f in [OrderField::Ktil, OrderField::Htil] {
            let o = vanishing_order(&s, &path, f, 1e-9).unwrap();
            assert_eq!(o.order, Order::Integer(1));
            assert!((o.coefficient.unwrap().abs() - 1.0).abs() < 1e-6);
        }
        assert!(vanishing_order(&s, &path, OrderField::LambdaTil, 1e-9).is_err());
    }

    #[test]
    fn cubic_cone_tends_to_zero() {
        let s = catalog::cubic_cone();
        let path = ApproachPath::new((0.0, 1.0), (1.0, 0.0));
        let k = limit_along(&s, &path, Quantity::K).unwrap();
        assert_eq!(k.verdict, Verdict::ZeroLimit);
        assert_eq!(k.numerator_order.order, Order::Integer(3));
        assert_eq!(k.gamma_order.order, Order::Integer(1));
        let h = limit_along(&s, &path, Quantity::H).unwrap();
        assert_eq!(h.verdict, Verdict::ZeroLimit);
        assert_eq!(h.numerator_order.order, Order::Integer(2));
    }

    #[test]
    fn flat_front_vanishes_identically() {
        let s = catalog::flat_front();
        let r = boundedness_report(&s, 0.0, 0.0, 8, 1e-9).unwrap();
        assert_eq!(r.class.kind, Some(Kind::FirstKind));
        for d in &r.directions {
            let Ok(k) = &d.k else { continue };
            assert_eq!(k.verdict, Verdict::ZeroLimit);
            assert_eq!(k.numerator_order.order, Order::Infinite);
            assert_eq!(k.gamma_order.order, Order::Integer(1));
        }
        assert_eq!(r.k_bounded, Some(true));
        let implication = r.checks.iter().find(|c| c.name.starts_with("first_kind")).unwrap();
        assert_eq!(implication.evidence, Evidence::Exhibited);
    }

    #[test]
    fn reports() {
        let s = catalog::sphere();
        let r = boundedness_report(&s, FRAC_PI_2, 1.0, 8, 1e-9).unwrap();
        assert_eq!(r.k_bounded, Some(true));
        assert_eq!(r.h_bounded, Some(true));
        assert!(r.checks.iter().all(|c| c.evidence != Evidence::Contradicted));
        assert!(r.directions.iter().any(|d| d.transversal && d.k.is_ok()));
        let text = r.to_text();
        assert!(text.contains("K_bounded: true"), "{text}");

        let r = boundedness_report(&s, FRAC_PI_4, 1.0, 8, 1e-9).unwrap();
        assert_eq!(r.k_bounded, Some(false));
        assert_eq!(r.h_bounded, Some(false));
        assert!(r.checks.iter().all(|c| c.evidence == Evidence::NotApplicable));

        let mut buf = Vec::new();
        write_samples_csv(&r, &mut buf).unwrap();
        assert!(String::from_utf8(buf).unwrap().starts_with("direction,transversal,quantity"));
        assert!(boundedness_report(&s, 0.1, 1.0, 8, 1e-9).is_err());
    }
}
