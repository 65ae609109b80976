use super::{Expr, Func, Var};

impl Expr {
    /// Exact partial derivative with respect to `var`.
    ///
    /// `abs` differentiates to `sign(.)` times the inner derivative; the
    /// result is then flagged non-smooth by [`Expr::is_smooth`].
    pub fn differentiate(&self, var: Var) -> Expr {
        match self {
            Expr::Num(_) => Expr::num(0.0),
            Expr::Var(x) => Expr::num(if *x == var { 1.0 } else { 0.0 }),
            Expr::Neg(a) => Expr::neg(a.differentiate(var)),
            Expr::Add(a, b) => Expr::add(a.differentiate(var), b.differentiate(var)),
            Expr::Sub(a, b) => Expr::sub(a.differentiate(var), b.differentiate(var)),
            Expr::Mul(a, b) => Expr::add(
                Expr::mul(a.differentiate(var), (**b).clone()),
                Expr::mul((**a).clone(), b.differentiate(var)),
            ),
            Expr::Div(a, b) => {
                let da = a.differentiate(var);
                let db = b.differentiate(var);
                if db.is_zero() {
                    return Expr::div(da, (**b).clone());
                }
                Expr::div(
                    Expr::sub(
                        Expr::mul(da, (**b).clone()),
                        Expr::mul((**a).clone(), db),
                    ),
                    Expr::pow((**b).clone(), 2),
                )
            }
            Expr::Pow(a, n) => Expr::mul(
                Expr::mul(Expr::num(*n as f64), Expr::pow((**a).clone(), n - 1)),
                a.differentiate(var),
            ),
            Expr::Call(f, a) => {
                let da = a.differentiate(var);
                if da.is_zero() {
                    return Expr::num(0.0);
                }
                let inner = (**a).clone();
                let outer = match f {
                    Func::Sin => Expr::call(Func::Cos, inner),
                    Func::Cos => Expr::neg(Expr::call(Func::Sin, inner)),
                    Func::Tan => Expr::pow(Expr::call(Func::Cos, inner), -2),
                    Func::Exp => Expr::call(Func::Exp, inner),
                    Func::Log => Expr::pow(inner, -1),
                    Func::Sqrt => {
                        Expr::div(Expr::num(0.5), Expr::call(Func::Sqrt, inner))
                    }
                    Func::Abs => Expr::call(Func::Sign, inner),
                    Func::Sinh => Expr::call(Func::Cosh, inner),
                    Func::Cosh => Expr::call(Func::Sinh, inner),
                    Func::Sign => return Expr::num(0.0),
                };
                Expr::mul(outer, da)
            }
        }
    }

    /// Mixed partial: `du` derivatives in u, then `dv` in v.
    pub fn partial(&self, du: usize, dv: usize) -> Expr {
        let mut e = self.clone();
        for _ in 0..du {
            e = e.differentiate(Var::U);
        }
        for _ in 0..dv {
            e = e.differentiate(Var::V);
        }
        e
    }
}

#[cfg(test)]
mod tests {
    use super::super::parse;
    use super::*;

    #[test]
    fn basic_rules() {
        let d = parse("sin(u)").unwrap().differentiate(Var::U);
        assert_eq!(d, parse("cos(u)").unwrap());

        let d = parse("cos(u)*sin(v)").unwrap().differentiate(Var::U);
        assert_eq!(d, parse("-sin(u)*sin(v)").unwrap());
        assert_eq!(d.to_string(), "-sin(u)*sin(v)");

        let d = parse("cos(u)*sin(v)").unwrap().differentiate(Var::V);
        assert_eq!(d, parse("cos(u)*cos(v)").unwrap());
    }

    #[test]
    fn constants_vanish() {
        assert!(parse("sin(v)*3").unwrap().differentiate(Var::U).is_zero());
        assert!(parse("pi^2").unwrap().differentiate(Var::V).is_zero());
    }

    #[test]
    fn abs_yields_sign() {
        let d = parse("abs(u)").unwrap().differentiate(Var::U);
        assert_eq!(d, parse("sign(u)").unwrap());
        assert!(!d.is_smooth());
        assert!(d.differentiate(Var::U).is_zero());
    }

    #[test]
    fn derivative_is_simplify_fixpoint() {
        for src in ["u^3*sin(v) - exp(u*v)/(1 + u^2)", "sqrt(2 + cos(u))*log(3 + v)", "tan(u*v)"] {
            let d = parse(src).unwrap().differentiate(Var::U);
            assert_eq!(d.simplify(), d, "{src}");
        }
    }
}
