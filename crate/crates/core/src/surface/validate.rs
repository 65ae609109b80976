use rayon::prelude::*;
use serde::Serialize;

use super::SurfaceDef;
use crate::error::{Error, Result};
use crate::minkowski::{pseudo_dot, wedge};

/// Which framed-surface condition a witness violates.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum ValidationCheck {
    /// `v`, `w` are not a lightlike pair with `<v, w> = -2`.
    Delta4,
    /// `X_u ^ X_v` differs from `-a1 c2 v + b1 c2 w`.
    AreaIdentity,
    A2Nonzero,
    B2Nonzero,
    /// The surface could not be evaluated at the point.
    Evaluation,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Witness {
    pub check: ValidationCheck,
    pub u: f64,
    pub v: f64,
    pub value: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct FramedValidationReport {
    pub grid: (usize, usize),
    pub tol: f64,
    pub max_area_residual: f64,
    pub max_abs_a2: f64,
    pub max_abs_b2: f64,
    /// Largest of `|<v,v>|`, `|<w,w>|`, `|<v,w> + 2|`.
    pub max_delta4_residual: f64,
    pub admitted: bool,
    /// The worst failing point, when not admitted.
    pub witness: Option<Witness>,
}

impl FramedValidationReport {
    pub fn into_result(self) -> Result<FramedValidationReport> {
        match &self.witness {
            None => Ok(self),
            Some(w) => Err(Error::Precondition {
                u: w.u,
                v: w.v,
                what: format!("framed-surface check {:?} fails ({:.3e})", w.check, w.value),
            }),
        }
    }
}

struct Sample {
    u: f64,
    v: f64,
    area: f64,
    a2: f64,
    b2: f64,
    delta4: f64,
}

fn sample(s: &SurfaceDef, u: f64, v: f64) -> Result<Sample> {
    let j = s.jet_at(u, v)?;
    let f = j.frame;
    let i = j.inv;
    let lhs = wedge(&j.x_u, &j.x_v);
    let rhs = (-i.a1 * i.c2) * f.v + (i.b1 * i.c2) * f.w;
    let delta4 = pseudo_dot(&f.v, &f.v)
        .abs()
        .max(pseudo_dot(&f.w, &f.w).abs())
        .max((pseudo_dot(&f.v, &f.w) + 2.0).abs());
    Ok(Sample {
        u,
        v,
        area: (lhs - rhs).max_abs(),
        a2: i.a2.abs(),
        b2: i.b2.abs(),
        delta4,
    })
}

/// Samples the closed domain on an `nu x nv` grid and checks the lightcone
/// framed-surface conditions together with the normalization `a2 = b2 = 0`.
pub fn validate_framed(s: &SurfaceDef, nu: usize, nv: usize, tol: f64) -> Result<FramedValidationReport> {
    if nu < 2 || nv < 2 {
        return Err(Error::InvalidGrid { nu, nv, min: 2 });
    }
    let points = s.domain().grid(nu, nv);
    let samples: Vec<std::result::Result<Sample, (f64, f64)>> = points
        .par_iter()
        .map(|&(u, v)| sample(s, u, v).map_err(|_| (u, v)))
        .collect();

    let mut report = FramedValidationReport {
        grid: (nu, nv),
        tol,
        max_area_residual: 0.0,
        max_abs_a2: 0.0,
        max_abs_b2: 0.0,
        max_delta4_residual: 0.0,
        admitted: true,
        witness: None,
    };
    let mut worst: Option<Witness> = None;
    let mut consider = |check, u, v, value: f64| {
        if value > tol && worst.as_ref().is_none_or(|w| value > w.value) {
            worst = Some(Witness { check, u, v, value });
        }
    };
    for smp in &samples {
        match smp {
            Err((u, v)) => consider(ValidationCheck::Evaluation, *u, *v, f64::INFINITY),
            Ok(p) => {
                report.max_area_residual = report.max_area_residual.max(p.area);
                report.max_abs_a2 = report.max_abs_a2.max(p.a2);
                report.max_abs_b2 = report.max_abs_b2.max(p.b2);
                report.max_delta4_residual = report.max_delta4_residual.max(p.delta4);
                consider(ValidationCheck::Delta4, p.u, p.v, p.delta4);
                consider(ValidationCheck::AreaIdentity, p.u, p.v, p.area);
                consider(ValidationCheck::A2Nonzero, p.u, p.v, p.a2);
                consider(ValidationCheck::B2Nonzero, p.u, p.v, p.b2);
            }
        }
    }
    report.admitted = worst.is_none();
    report.witness = worst;
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog;
    use crate::surface::Domain;
    use std::f64::consts::PI;

    #[test]
    fn sphere_is_admitted() {
        let r = validate_framed(&catalog::sphere(), 64, 64, 1e-8).unwrap();
        assert!(r.admitted, "{r:?}");
        assert!(r.max_area_residual < 1e-9);
        assert!(r.clone().into_result().is_ok());
    }

    #[test]
    fn equal_frame_vectors_fail_delta4() {
        let d = Domain::new((0.0, 1.0), (0.0, 1.0)).unwrap();
        let s = SurfaceDef::new("vw", ["u", "v", "0"], ["1", "0", "1"], ["1", "0", "1"], d).unwrap();
        let r = validate_framed(&s, 4, 4, 1e-8).unwrap();
        assert!(!r.admitted);
        assert_eq!(r.witness.as_ref().unwrap().check, ValidationCheck::Delta4);
        assert!((r.max_delta4_residual - 2.0).abs() < 1e-12);
        assert!(r.into_result().is_err());
    }

    #[test]
    fn swapped_parameters_give_nonzero_a2() {
        let d = Domain::new((-PI / 2.0, PI / 2.0), (0.0, 2.0 * PI)).unwrap();
        let s = SurfaceDef::new(
            "swap",
            ["sin(v)", "cos(v)*sin(u)", "cos(v)*cos(u)"],
            ["1", "sin(v)", "cos(v)"],
            ["1", "-sin(v)", "-cos(v)"],
            d,
        )
        .unwrap();
        let r = validate_framed(&s, 16, 16, 1e-8).unwrap();
        assert!(!r.admitted);
        assert!(r.max_abs_a2 > 0.1 || r.max_abs_b2 > 0.1);
        let w = r.witness.unwrap();
        assert!(d.contains(w.u, w.v));
    }

    #[test]
    fn coarse_grid_rejected() {
        assert!(matches!(
            validate_framed(&catalog::sphere(), 1, 5, 1e-8),
            Err(Error::InvalidGrid { .. })
        ));
    }
}
