//! Built-in lightcone framed surfaces.
//!
//! Besides the sphere, the catalog is generated from a family with
//! `a2 = b2 = 0` built in. Given `alpha(u)`, `beta(u, v)`, `theta(u)` and
//! `phi(u, v)`, put `psi = v + theta`, `p = (0, sin psi, cos psi)` and
//! `m = (0, -cos psi, sin psi)`; then
//!
//! ```text
//! X = alpha e1 + beta p - beta_v m
//! v = exp(phi) (e1 + p),  w = exp(-phi) (e1 - p)
//! ```
//!
//! gives `X_v = -(beta + beta_vv) m`, so `c2 = -(beta + beta_vv)` and the
//! 1-st singular set is the zero set of `beta + beta_vv`.

use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::expr::{parse, Var};
use crate::surface::{as_strs, Domain, SurfaceDef};

const SPHERE_SURF: &str = include_str!("../surfaces/sphere.surf");

/// The bundled sphere surface file, verbatim.
pub fn sphere_source() -> &'static str {
    SPHERE_SURF
}

/// Unit sphere with lightcone frame `v = (1, sin v, cos v)`, `w = (1, -sin v, -cos v)`.
pub fn sphere() -> SurfaceDef {
    SurfaceDef::from_toml(SPHERE_SURF, "sphere.surf").expect("bundled sphere is valid")
}

/// `X = (u^3/3, u sin v, u cos v)` with the sphere's frame. The line `u = 0`
/// consists of non-degenerate 1-st singular points of the second kind where
/// both `K` and `H` tend to zero.
pub fn cubic_cone() -> SurfaceDef {
    let d = Domain::new((-0.9, 0.9), (0.0, 2.0 * PI)).expect("valid domain");
    SurfaceDef::new(
        "cubic_cone",
        ["u^3/3", "u*sin(v)", "u*cos(v)"],
        ["1", "sin(v)", "cos(v)"],
        ["1", "-sin(v)", "-cos(v)"],
        d,
    )
    .expect("valid expressions")
}

/// A family member with a rotating, rescaled frame; regular and lightlike
/// points only, all of `e1, f1, g1` nonzero.
pub fn twisted() -> SurfaceDef {
    let d = Domain::new((-1.0, 1.0), (0.0, 2.0 * PI)).expect("valid domain");
    lightcone_family("twisted", "0.6*u", "1.5 + 0.5*u + 0.2*u*cos(2*v)", "0.5*u", "0.3*u", d)
        .expect("valid expressions")
}

/// A family member with a closed 1-st singular curve of the first kind
/// along `u = -0.8 + 0.8 sin 3v`.
pub fn ruffle() -> SurfaceDef {
    let d = Domain::new((-1.8, 0.6), (0.0, 2.0 * PI)).expect("valid domain");
    lightcone_family(
        "ruffle",
        "u + 0.2*u^2",
        "0.8 + u + 0.1*sin(3*v)",
        "0.3*u^2",
        "0.4*sin(v) + 0.2*u",
        d,
    )
    .expect("valid expressions")
}

/// A planar front in `x1 = 0` with a first-kind singular curve along
/// `u = -0.3 v`. Modified curvatures vanish identically.
pub fn flat_front() -> SurfaceDef {
    let d = Domain::new((-1.0, 1.0), (-1.0, 1.0)).expect("valid domain");
    lightcone_family("flat_front", "0", "u + 0.3*v", "0", "0", d).expect("valid expressions")
}

pub fn by_name(name: &str) -> Option<SurfaceDef> {
    match name {
        "sphere" => Some(sphere()),
        "cubic_cone" => Some(cubic_cone()),
        "twisted" => Some(twisted()),
        "ruffle" => Some(ruffle()),
        "flat_front" => Some(flat_front()),
        _ => None,
    }
}

pub const NAMES: [&str; 5] = ["sphere", "cubic_cone", "twisted", "ruffle", "flat_front"];

/// Builds the family member for the given generating functions.
pub fn lightcone_family(
    name: &str,
    alpha: &str,
    beta: &str,
    theta: &str,
    phi: &str,
    domain: Domain,
) -> Result<SurfaceDef> {
    let parsed = |what: &str, src: &str| {
        parse(src).map_err(|source| Error::Parse {
            context: format!("{what} = \"{src}\""),
            source,
        })
    };
    let a = parsed("alpha", alpha)?;
    if a.depends_on(Var::V) {
        return Err(Error::Precondition {
            u: f64::NAN,
            v: f64::NAN,
            what: "alpha must depend on u only".into(),
        });
    }
    let b = parsed("beta", beta)?;
    let bv = b.differentiate(Var::V);
    let th = parsed("theta", theta)?;
    if th.depends_on(Var::V) {
        return Err(Error::Precondition {
            u: f64::NAN,
            v: f64::NAN,
            what: "theta must depend on u only".into(),
        });
    }
    let ph = parsed("phi", phi)?;

    let psi = format!("(v + ({th}))");
    let (b, bv) = (format!("({b})"), format!("({bv})"));
    let ep = format!("exp({ph})");
    let em = format!("exp(-({ph}))");
    let x = [
        format!("{a}"),
        format!("{b}*sin{psi} + {bv}*cos{psi}"),
        format!("{b}*cos{psi} - {bv}*sin{psi}"),
    ];
    let v = [ep.clone(), format!("{ep}*sin{psi}"), format!("{ep}*cos{psi}")];
    let w = [em.clone(), format!("-{em}*sin{psi}"), format!("-{em}*cos{psi}")];
    SurfaceDef::new(name, as_strs(&x), as_strs(&v), as_strs(&w), domain)
}

/// A second-order model of a 1-st singular point at `(u0, 0)`:
/// `alpha = k (u - u0) + q (u - u0)^2 / 2`, `beta = (u - u0) + eps v`, with
/// untwisted frame. First kind iff `eps != 0`. At `(u0, 0)` one gets
/// `N~ = -k`, `L~ = q` and `E~ = 1 - k^2`, so `k` and `q` switch `N~` and
/// `L~` on and off independently. Requires `|k| != 1`.
pub fn singular_model(k: f64, q: f64, eps: f64, u0: f64) -> Result<SurfaceDef> {
    let s = format!("(u - ({u0}))");
    let alpha = format!("({k})*{s} + ({q})*{s}^2/2");
    let beta = format!("{s} + ({eps})*v");
    let d = Domain::new((u0 - 0.5, u0 + 0.5), (-0.5, 0.5))?;
    lightcone_family("singular_model", &alpha, &beta, "0", "0", d)
}
