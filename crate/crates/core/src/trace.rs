//! Zero sets of `l~` (characteristic curves) and `c2` (1-st singular curves)
//! by marching squares with bisection refinement on grid edges.

use std::collections::{BTreeMap, BTreeSet};
use std::io::Write;

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::format::g12;
use crate::surface::{linspace, ScalarField, SurfaceDef};

const MAX_BISECTIONS: usize = 30;
const MAX_POLISH: usize = 8;
const DEGENERACY_TOL: f64 = 1e-9;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum LocusTag {
    /// Zero set of `l~`.
    Characteristic,
    /// Zero set of `c2`.
    Singular1Curve,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct LocusPolyline {
    pub tag: LocusTag,
    pub points: Vec<(f64, f64)>,
    /// `|field|` at each vertex.
    pub residuals: Vec<f64>,
    /// Per-vertex degeneracy: the differential of the local defining
    /// function vanishes.
    pub degenerate: Vec<bool>,
    pub closed: bool,
}

impl LocusPolyline {
    pub fn max_residual(&self) -> f64 {
        self.residuals.iter().copied().fold(0.0, f64::max)
    }
}

/// Grid edge between node `(i, j)` and `(i + 1, j)` (`U`) or `(i, j + 1)` (`V`).
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
enum Edge {
    U(usize, usize),
    V(usize, usize),
}

struct Vertex {
    p: (f64, f64),
    residual: f64,
    degenerate: bool,
}

pub fn trace_zero_set(
    s: &SurfaceDef,
    field: ScalarField,
    nu: usize,
    nv: usize,
    refine_tol: f64,
) -> Result<Vec<LocusPolyline>> {
    if nu < 8 || nv < 8 {
        return Err(Error::InvalidGrid { nu, nv, min: 8 });
    }
    let tag = match field {
        ScalarField::LambdaTil => LocusTag::Characteristic,
        ScalarField::C2 => LocusTag::Singular1Curve,
        other => {
            return Err(Error::Precondition {
                u: f64::NAN,
                v: f64::NAN,
                what: format!("{other:?} is not a traceable locus field"),
            })
        }
    };
    let d = s.domain();
    let us = linspace(d.u, nu);
    let vs = linspace(d.v, nv);
    let f = |u: f64, v: f64| s.scalar_at(field, u, v);

    let values: Vec<f64> = (0..nu * nv)
        .into_par_iter()
        .map(|k| f(us[k / nv], vs[k % nv]))
        .collect::<Result<_>>()?;
    let val = |i: usize, j: usize| values[i * nv + j];
    let pos = |i: usize, j: usize| val(i, j) >= 0.0;

    let mut segments: Vec<(Edge, Edge)> = Vec::new();
    for i in 0..nu - 1 {
        for j in 0..nv - 1 {
            // corners counter-clockwise from (i, j)
            let c = [pos(i, j), pos(i + 1, j), pos(i + 1, j + 1), pos(i, j + 1)];
            let sides = [Edge::U(i, j), Edge::V(i + 1, j), Edge::U(i, j + 1), Edge::V(i, j)];
            let crossing: Vec<usize> = (0..4).filter(|&k| c[k] != c[(k + 1) % 4]).collect();
            match crossing.len() {
                0 => {}
                2 => segments.push((sides[crossing[0]], sides[crossing[1]])),
                4 => {
                    let uc = 0.5 * (us[i] + us[i + 1]);
                    let vc = 0.5 * (vs[j] + vs[j + 1]);
                    let centre = f(uc, vc)? >= 0.0;
                    if centre == c[0] {
                        // c0 and c2 joined through the centre: cut off c1 and c3
                        segments.push((sides[0], sides[1]));
                        segments.push((sides[2], sides[3]));
                    } else {
                        segments.push((sides[3], sides[0]));
                        segments.push((sides[1], sides[2]));
                    }
                }
                _ => unreachable!("a cell has an even number of sign changes"),
            }
        }
    }

    let edges: BTreeSet<Edge> = segments.iter().flat_map(|&(a, b)| [a, b]).collect();
    let edges: Vec<Edge> = edges.into_iter().collect();
    let refined: Vec<Vertex> = edges
        .par_iter()
        .map(|&e| {
            let ((ua, va), (ub, vb), fa) = match e {
                Edge::U(i, j) => ((us[i], vs[j]), (us[i + 1], vs[j]), val(i, j)),
                Edge::V(i, j) => ((us[i], vs[j]), (us[i], vs[j + 1]), val(i, j)),
            };
            refine(s, field, (ua, va), (ub, vb), fa, refine_tol)
        })
        .collect::<Result<_>>()?;
    let vertex: BTreeMap<Edge, &Vertex> = edges.iter().copied().zip(refined.iter()).collect();

    let mut adjacent: BTreeMap<Edge, Vec<usize>> = BTreeMap::new();
    for (k, &(a, b)) in segments.iter().enumerate() {
        adjacent.entry(a).or_default().push(k);
        adjacent.entry(b).or_default().push(k);
    }
    let mut used = vec![false; segments.len()];
    let mut chains: Vec<(Vec<Edge>, bool)> = Vec::new();
    let walk = |start: Edge, used: &mut Vec<bool>| -> Option<(Vec<Edge>, bool)> {
        let first = *adjacent[&start].iter().find(|&&k| !used[k])?;
        let mut chain = vec![start];
        let mut cur = start;
        let mut seg = Some(first);
        while let Some(k) = seg {
            used[k] = true;
            let (a, b) = segments[k];
            let next = if a == cur { b } else { a };
            if next == start {
                return Some((chain, true));
            }
            chain.push(next);
            cur = next;
            seg = adjacent[&cur].iter().copied().find(|&k| !used[k]);
        }
        Some((chain, false))
    };
    let ends: Vec<Edge> = adjacent
        .iter()
        .filter(|(_, v)| v.len() == 1)
        .map(|(e, _)| *e)
        .collect();
    for e in ends {
        if let Some(c) = walk(e, &mut used) {
            chains.push(c);
        }
    }
    let all: Vec<Edge> = adjacent.keys().copied().collect();
    for e in all {
        while let Some(c) = walk(e, &mut used) {
            chains.push(c);
        }
    }

    Ok(chains
        .into_iter()
        .map(|(chain, closed)| {
            let vs: Vec<&Vertex> = chain.iter().map(|e| vertex[e]).collect();
            LocusPolyline {
                tag,
                points: vs.iter().map(|v| v.p).collect(),
                residuals: vs.iter().map(|v| v.residual).collect(),
                degenerate: vs.iter().map(|v| v.degenerate).collect(),
                closed,
            }
        })
        .collect())
}

/// Bisection on a sign-changing edge; stops at `|f| <= tol` or after
/// `MAX_BISECTIONS` halvings, then polishes the remaining bracket by false
/// position. Keeps the best point seen.
fn refine(
    s: &SurfaceDef,
    field: ScalarField,
    a: (f64, f64),
    b: (f64, f64),
    fa: f64,
    tol: f64,
) -> Result<Vertex> {
    let (mut lo, mut hi) = (a, b);
    let (mut flo, mut fhi) = (fa, s.scalar_at(field, b.0, b.1)?);
    let lo_pos = fa >= 0.0;
    let mut best = if fa.abs() <= fhi.abs() { (a, fa.abs()) } else { (b, fhi.abs()) };
    let mut done = best.1 <= tol;
    let mut step = |t: f64, lo: &mut (f64, f64), hi: &mut (f64, f64), flo: &mut f64, fhi: &mut f64| -> Result<bool> {
        let p = (lo.0 + t * (hi.0 - lo.0), lo.1 + t * (hi.1 - lo.1));
        let fp = s.scalar_at(field, p.0, p.1)?;
        if fp.abs() < best.1 {
            best = (p, fp.abs());
        }
        if fp.abs() <= tol {
            return Ok(true);
        }
        if (fp >= 0.0) == lo_pos {
            (*lo, *flo) = (p, fp);
        } else {
            (*hi, *fhi) = (p, fp);
        }
        Ok(false)
    };
    for _ in 0..MAX_BISECTIONS {
        if done {
            break;
        }
        done = step(0.5, &mut lo, &mut hi, &mut flo, &mut fhi)?;
    }
    for _ in 0..MAX_POLISH {
        if done || flo == fhi {
            break;
        }
        let t = (flo / (flo - fhi)).clamp(0.0, 1.0);
        done = step(t, &mut lo, &mut hi, &mut flo, &mut fhi)?;
    }
    let (p, residual) = best;
    Ok(Vertex {
        p,
        residual,
        degenerate: is_degenerate(s, field, p.0, p.1)?,
    })
}

fn is_degenerate(s: &SurfaceDef, field: ScalarField, u: f64, v: f64) -> Result<bool> {
    let inv = s.basic_invariants_at(u, v)?;
    let local = match field {
        ScalarField::LambdaTil if inv.a1.abs() <= inv.b1.abs() => ScalarField::A1,
        ScalarField::LambdaTil => ScalarField::B1,
        other => other,
    };
    let (gu, gv) = inv.gradient(local);
    Ok(gu.hypot(gv) <= DEGENERACY_TOL)
}

pub const TRACE_HEADER: [&str; 7] = ["polyline", "tag", "vertex", "u", "v", "residual", "degenerate"];

pub fn write_trace_csv<W: Write>(lines: &[LocusPolyline], out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(TRACE_HEADER)?;
    for (k, l) in lines.iter().enumerate() {
        for (n, p) in l.points.iter().enumerate() {
            w.write_record([
                k.to_string(),
                format!("{:?}", l.tag),
                n.to_string(),
                g12(p.0),
                g12(p.1),
                g12(l.residuals[n]),
                l.degenerate[n].to_string(),
            ])?;
        }
    }
    w.flush().map_err(|e| Error::Csv(e.into()))?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog;
    use crate::surface::Domain;
    use std::f64::consts::{FRAC_PI_2, FRAC_PI_4, PI};

    #[test]
    fn sphere_characteristic_curves() {
        let lines = trace_zero_set(&catalog::sphere(), ScalarField::LambdaTil, 64, 64, 1e-12).unwrap();
        assert_eq!(lines.len(), 2);
        for l in &lines {
            assert_eq!(l.tag, LocusTag::Characteristic);
            assert!(!l.closed);
            assert!(l.points.len() >= 64);
            let side = l.points[0].0.signum();
            for &(u, _) in &l.points {
                assert!((u - side * FRAC_PI_4).abs() < 1e-6, "{u}");
            }
            assert!(l.max_residual() <= 1e-12);
            assert!(l.degenerate.iter().all(|d| !d));
        }
    }

    #[test]
    fn sphere_singular_curves_on_enlarged_domain() {
        let s = catalog::sphere().with_domain(Domain::new((-1.6, 1.6), (0.0, 2.0 * PI)).unwrap());
        let lines = trace_zero_set(&s, ScalarField::C2, 64, 64, 1e-12).unwrap();
        assert_eq!(lines.len(), 2);
        for l in &lines {
            for &(u, _) in &l.points {
                assert!((u.abs() - FRAC_PI_2).abs() < 1e-6, "{u}");
            }
        }
    }

    #[test]
    fn closed_curve_and_empty_set() {
        let d = Domain::new((-1.0, 1.0), (-1.0, 1.0)).unwrap();
        // c2 = -(beta + beta_vv) = 0.25 - u^2 - v^2
        let s = catalog::lightcone_family("disc", "0", "u^2 + v^2 - 2.25", "0", "0", d).unwrap();
        let lines = trace_zero_set(&s, ScalarField::C2, 16, 16, 1e-10).unwrap();
        assert_eq!(lines.len(), 1);
        assert!(lines[0].closed);
        for &(u, v) in &lines[0].points {
            assert!((u.hypot(v) - 0.5).abs() < 1e-8);
        }

        let lines = trace_zero_set(&catalog::twisted(), ScalarField::C2, 16, 16, 1e-10).unwrap();
        assert!(lines.is_empty());
    }

    #[test]
    fn deterministic_output() {
        let a = trace_zero_set(&catalog::ruffle(), ScalarField::C2, 40, 40, 1e-10).unwrap();
        let b = trace_zero_set(&catalog::ruffle(), ScalarField::C2, 40, 40, 1e-10).unwrap();
        assert_eq!(a, b);
        assert!(!a.is_empty());
        assert!(trace_zero_set(&catalog::ruffle(), ScalarField::C2, 4, 40, 1e-10).is_err());
    }
}
