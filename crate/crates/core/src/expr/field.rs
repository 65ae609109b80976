use super::{parse, EvalError, Expr, ParseError, Var};

/// An expression together with all of its partial derivatives up to a fixed
/// total order. Immutable once built.
#[derive(Clone, Debug)]
pub struct CompiledField {
    order: usize,
    // indexed by triangular position of (du, dv), du + dv <= order
    table: Vec<Expr>,
}

fn slot(du: usize, dv: usize) -> usize {
    let k = du + dv;
    k * (k + 1) / 2 + dv
}

impl CompiledField {
    pub fn new(expr: Expr, order: usize) -> Self {
        let mut table = vec![Expr::num(0.0); slot(0, order) + 1];
        table[0] = expr.simplify();
        for k in 1..=order {
            for dv in 0..=k {
                let du = k - dv;
                table[slot(du, dv)] = if du > 0 {
                    table[slot(du - 1, dv)].differentiate(Var::U)
                } else {
                    table[slot(du, dv - 1)].differentiate(Var::V)
                };
            }
        }
        CompiledField { order, table }
    }

    pub fn parse(src: &str, order: usize) -> Result<Self, ParseError> {
        Ok(CompiledField::new(parse(src)?, order))
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn expr(&self) -> &Expr {
        &self.table[0]
    }

    /// Panics if `du + dv` exceeds the compiled order.
    pub fn derivative(&self, du: usize, dv: usize) -> &Expr {
        assert!(du + dv <= self.order, "derivative ({du},{dv}) beyond order {}", self.order);
        &self.table[slot(du, dv)]
    }

    pub fn eval(&self, u: f64, v: f64) -> Result<f64, EvalError> {
        self.table[0].eval(u, v)
    }

    pub fn eval_derivative(&self, du: usize, dv: usize, u: f64, v: f64) -> Result<f64, EvalError> {
        self.derivative(du, dv).eval(u, v)
    }
}
