//! Vector algebra of Lorentz-Minkowski 3-space with signature (-,+,+).

use std::fmt;
use std::ops::{Add, AddAssign, Div, Index, Mul, Neg, Sub};

use serde::Serialize;

/// A vector of R^3_1 in the canonical basis e1 (timelike), e2, e3.
#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize)]
pub struct LVec3 {
    pub x1: f64,
    pub x2: f64,
    pub x3: f64,
}

impl LVec3 {
    pub const ZERO: LVec3 = LVec3::new(0.0, 0.0, 0.0);
    pub const E1: LVec3 = LVec3::new(1.0, 0.0, 0.0);
    pub const E2: LVec3 = LVec3::new(0.0, 1.0, 0.0);
    pub const E3: LVec3 = LVec3::new(0.0, 0.0, 1.0);

    pub const fn new(x1: f64, x2: f64, x3: f64) -> Self {
        LVec3 { x1, x2, x3 }
    }

    pub fn from_array(a: [f64; 3]) -> Self {
        LVec3::new(a[0], a[1], a[2])
    }

    pub fn to_array(self) -> [f64; 3] {
        [self.x1, self.x2, self.x3]
    }

    pub fn is_finite(&self) -> bool {
        self.x1.is_finite() && self.x2.is_finite() && self.x3.is_finite()
    }

    /// Pseudo inner product `-a1 b1 + a2 b2 + a3 b3`.
    pub fn dot(&self, other: &LVec3) -> f64 {
        pseudo_dot(self, other)
    }

    pub fn wedge(&self, other: &LVec3) -> LVec3 {
        wedge(self, other)
    }

    pub fn norm(&self) -> f64 {
        norm(self)
    }

    /// Largest absolute component.
    pub fn max_abs(&self) -> f64 {
        self.x1.abs().max(self.x2.abs()).max(self.x3.abs())
    }

    /// Euclidean length, used only for residual bookkeeping.
    pub fn euclidean_norm(&self) -> f64 {
        (self.x1 * self.x1 + self.x2 * self.x2 + self.x3 * self.x3).sqrt()
    }
}

impl fmt::Display for LVec3 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {}, {})", self.x1, self.x2, self.x3)
    }
}

impl Index<usize> for LVec3 {
    type Output = f64;

    fn index(&self, i: usize) -> &f64 {
        match i {
            0 => &self.x1,
            1 => &self.x2,
            2 => &self.x3,
            _ => panic!("LVec3 index {i} out of range"),
        }
    }
}

impl Add for LVec3 {
    type Output = LVec3;

    fn add(self, rhs: LVec3) -> LVec3 {
        LVec3::new(self.x1 + rhs.x1, self.x2 + rhs.x2, self.x3 + rhs.x3)
    }
}

impl AddAssign for LVec3 {
    fn add_assign(&mut self, rhs: LVec3) {
        *self = *self + rhs;
    }
}

impl Sub for LVec3 {
    type Output = LVec3;

    fn sub(self, rhs: LVec3) -> LVec3 {
        LVec3::new(self.x1 - rhs.x1, self.x2 - rhs.x2, self.x3 - rhs.x3)
    }
}

impl Neg for LVec3 {
    type Output = LVec3;

    fn neg(self) -> LVec3 {
        LVec3::new(-self.x1, -self.x2, -self.x3)
    }
}

impl Mul<LVec3> for f64 {
    type Output = LVec3;

    fn mul(self, rhs: LVec3) -> LVec3 {
        LVec3::new(self * rhs.x1, self * rhs.x2, self * rhs.x3)
    }
}

impl Mul<f64> for LVec3 {
    type Output = LVec3;

    fn mul(self, rhs: f64) -> LVec3 {
        rhs * self
    }
}

impl Div<f64> for LVec3 {
    type Output = LVec3;

    fn div(self, rhs: f64) -> LVec3 {
        LVec3::new(self.x1 / rhs, self.x2 / rhs, self.x3 / rhs)
    }
}

pub fn pseudo_dot(a: &LVec3, b: &LVec3) -> f64 {
    -a.x1 * b.x1 + a.x2 * b.x2 + a.x3 * b.x3
}

/// Lorentzian cross product: the formal determinant with first row (-e1, e2, e3).
///
/// The result is pseudo-orthogonal to both factors and satisfies
/// `<z, a ^ b> = det(z, a, b)`.
pub fn wedge(a: &LVec3, b: &LVec3) -> LVec3 {
    LVec3::new(
        -(a.x2 * b.x3 - a.x3 * b.x2),
        -(a.x1 * b.x3 - a.x3 * b.x1),
        a.x1 * b.x2 - a.x2 * b.x1,
    )
}

/// `sqrt(|<a, a>|)`.
pub fn norm(a: &LVec3) -> f64 {
    pseudo_dot(a, a).abs().sqrt()
}

/// Ordinary 3x3 determinant of the rows `a`, `b`, `c`.
pub fn det3(a: &LVec3, b: &LVec3, c: &LVec3) -> f64 {
    a.x1 * (b.x2 * c.x3 - b.x3 * c.x2) - a.x2 * (b.x1 * c.x3 - b.x3 * c.x1)
        + a.x3 * (b.x1 * c.x2 - b.x2 * c.x1)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum Causal {
    Spacelike,
    Timelike,
    Lightlike,
}

/// Causal type together with its integer sign (1, -1, 0 respectively).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct CausalCharacter {
    pub kind: Causal,
    pub sign: i8,
}

impl CausalCharacter {
    fn of(kind: Causal) -> Self {
        let sign = match kind {
            Causal::Spacelike => 1,
            Causal::Timelike => -1,
            Causal::Lightlike => 0,
        };
        CausalCharacter { kind, sign }
    }
}

/// Lightlike iff `|<a,a>| <= tol * (1 + max|a_i|^2)`; otherwise the sign of
/// the self-pairing decides.
pub fn causal_character(a: &LVec3, tol: f64) -> CausalCharacter {
    let q = pseudo_dot(a, a);
    let scale = 1.0 + a.max_abs().powi(2);
    if q.abs() <= tol * scale {
        CausalCharacter::of(Causal::Lightlike)
    } else if q > 0.0 {
        CausalCharacter::of(Causal::Spacelike)
    } else {
        CausalCharacter::of(Causal::Timelike)
    }
}

/// The model spaces of R^3_1.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum ModelSpace {
    /// Hyperbolic plane `<x,x> = -1`.
    Hyperbolic,
    /// de Sitter plane `<x,x> = 1`.
    DeSitter,
    /// Open lightcone: nonzero with `<x,x> = 0`.
    Lightcone,
    /// Plane `<x, normal> = c`.
    Plane { normal: LVec3, c: f64 },
}

pub fn in_model_space(x: &LVec3, space: ModelSpace, tol: f64) -> bool {
    match space {
        ModelSpace::Hyperbolic => (pseudo_dot(x, x) + 1.0).abs() <= tol,
        ModelSpace::DeSitter => (pseudo_dot(x, x) - 1.0).abs() <= tol,
        ModelSpace::Lightcone => {
            x.max_abs() > tol && causal_character(x, tol).kind == Causal::Lightlike
        }
        ModelSpace::Plane { normal, c } => (pseudo_dot(x, &normal) - c).abs() <= tol,
    }
}

/// Membership in the double Legendrian fibration space: both vectors on the
/// lightcone and `<v, w> = -2`.
pub fn is_delta4_pair(v: &LVec3, w: &LVec3, tol: f64) -> bool {
    in_model_space(v, ModelSpace::Lightcone, tol)
        && in_model_space(w, ModelSpace::Lightcone, tol)
        && (pseudo_dot(v, w) + 2.0).abs() <= tol
}
