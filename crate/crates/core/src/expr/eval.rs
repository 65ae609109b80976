use thiserror::Error;

use super::{Expr, Func, Var};

#[derive(Clone, Debug, Error, PartialEq)]
pub enum EvalError {
    #[error("division by zero in `{0}`")]
    DivisionByZero(String),
    #[error("{func} of {arg} is outside its domain")]
    Domain { func: &'static str, arg: f64 },
    #[error("non-finite value from `{0}`")]
    NonFinite(String),
}

impl Expr {
    /// IEEE double evaluation at `(u, v)`. Division by zero, log/sqrt of
    /// negative arguments and overflow are reported, never returned as Inf/NaN.
    pub fn eval(&self, u: f64, v: f64) -> Result<f64, EvalError> {
        let x = match self {
            Expr::Num(x) => *x,
            Expr::Var(Var::U) => u,
            Expr::Var(Var::V) => v,
            Expr::Neg(a) => -a.eval(u, v)?,
            Expr::Add(a, b) => a.eval(u, v)? + b.eval(u, v)?,
            Expr::Sub(a, b) => a.eval(u, v)? - b.eval(u, v)?,
            Expr::Mul(a, b) => a.eval(u, v)? * b.eval(u, v)?,
            Expr::Div(a, b) => {
                let num = a.eval(u, v)?;
                let den = b.eval(u, v)?;
                if den == 0.0 {
                    return Err(EvalError::DivisionByZero(self.to_string()));
                }
                num / den
            }
            Expr::Pow(a, n) => {
                let base = a.eval(u, v)?;
                if base == 0.0 && *n < 0 {
                    return Err(EvalError::DivisionByZero(self.to_string()));
                }
                base.powi(*n)
            }
            Expr::Call(f, a) => {
                let arg = a.eval(u, v)?;
                match f {
                    Func::Sin => arg.sin(),
                    Func::Cos => arg.cos(),
                    Func::Tan => arg.tan(),
                    Func::Exp => arg.exp(),
                    Func::Log => {
                        if arg <= 0.0 {
                            return Err(EvalError::Domain { func: "log", arg });
                        }
                        arg.ln()
                    }
                    Func::Sqrt => {
                        if arg < 0.0 {
                            return Err(EvalError::Domain { func: "sqrt", arg });
                        }
                        arg.sqrt()
                    }
                    Func::Abs => arg.abs(),
                    Func::Sinh => arg.sinh(),
                    Func::Cosh => arg.cosh(),
                    Func::Sign => {
                        if arg > 0.0 {
                            1.0
                        } else if arg < 0.0 {
                            -1.0
                        } else {
                            0.0
                        }
                    }
                }
            }
        };
        if x.is_finite() {
            Ok(x)
        } else {
            Err(EvalError::NonFinite(self.to_string()))
        }
    }

    /// Evaluates an expression that must not depend on `u` or `v`.
    pub fn eval_const(&self) -> Result<f64, EvalError> {
        self.eval(f64::NAN, f64::NAN)
    }

    pub fn depends_on(&self, var: Var) -> bool {
        match self {
            Expr::Num(_) => false,
            Expr::Var(x) => *x == var,
            Expr::Neg(a) | Expr::Pow(a, _) | Expr::Call(_, a) => a.depends_on(var),
            Expr::Add(a, b) | Expr::Sub(a, b) | Expr::Mul(a, b) | Expr::Div(a, b) => {
                a.depends_on(var) || b.depends_on(var)
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::super::parse;
    use super::*;
    use std::f64::consts::PI;

    fn ev(src: &str, u: f64, v: f64) -> Result<f64, EvalError> {
        parse(src).unwrap().eval(u, v)
    }

    #[test]
    fn hand_values() {
        assert_eq!(ev("u+v", 1.0, 2.0), Ok(3.0));
        assert_eq!(ev("sin(u)", PI / 2.0, 0.0), Ok(1.0));
        assert!((ev("cos(u)*cos(v)", PI / 3.0, 0.0).unwrap() - 0.5).abs() < 1e-15);
        assert_eq!(ev("u^(-2)", 2.0, 0.0), Ok(0.25));
    }

    #[test]
    fn evaluation_errors() {
        assert!(matches!(ev("1/(u-1)", 1.0, 0.0), Err(EvalError::DivisionByZero(_))));
        assert!(matches!(ev("u^(-1)", 0.0, 0.0), Err(EvalError::DivisionByZero(_))));
        assert_eq!(ev("log(u)", -1.0, 0.0), Err(EvalError::Domain { func: "log", arg: -1.0 }));
        assert_eq!(ev("sqrt(v)", 0.0, -4.0), Err(EvalError::Domain { func: "sqrt", arg: -4.0 }));
        assert!(matches!(ev("exp(u)", 1000.0, 0.0), Err(EvalError::NonFinite(_))));
    }

    #[test]
    fn constant_expressions() {
        assert_eq!(parse("-pi/2").unwrap().eval_const(), Ok(-PI / 2.0));
        assert!(parse("u").unwrap().eval_const().is_err());
        assert!(!parse("pi*3").unwrap().depends_on(Var::U));
        assert!(parse("sin(u*v)").unwrap().depends_on(Var::V));
    }
}
