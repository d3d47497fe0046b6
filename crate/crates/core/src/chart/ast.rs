use std::fmt;

use num_rational::Ratio;

use crate::numtensor::ElementaryFn;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Func {
    Exp,
    Log,
    Sqrt,
    Sin,
    Cos,
}

impl Func {
    pub fn name(self) -> &'static str {
        match self {
            Func::Exp => "exp",
            Func::Log => "log",
            Func::Sqrt => "sqrt",
            Func::Sin => "sin",
            Func::Cos => "cos",
        }
    }

    pub fn from_name(s: &str) -> Option<Self> {
        Some(match s {
            "exp" => Func::Exp,
            "log" => Func::Log,
            "sqrt" => Func::Sqrt,
            "sin" => Func::Sin,
            "cos" => Func::Cos,
            _ => return None,
        })
    }

    pub fn elementary(self) -> ElementaryFn {
        match self {
            Func::Exp => ElementaryFn::Exp,
            Func::Log => ElementaryFn::Log,
            Func::Sqrt => ElementaryFn::Sqrt,
            Func::Sin => ElementaryFn::Sin,
            Func::Cos => ElementaryFn::Cos,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BinOp {
    Add,
    Sub,
    Mul,
    Div,
}

impl BinOp {
    fn symbol(self) -> &'static str {
        match self {
            BinOp::Add => "+",
            BinOp::Sub => "-",
            BinOp::Mul => "*",
            BinOp::Div => "/",
        }
    }

    fn precedence(self) -> u8 {
        match self {
            BinOp::Add | BinOp::Sub => 1,
            BinOp::Mul | BinOp::Div => 2,
        }
    }
}

/// Expression tree. Variables are zero-based (`u1` is `Var(0)`).
#[derive(Clone, Debug, PartialEq)]
pub enum Expr {
    Num(f64),
    Var(usize),
    Param(String),
    Neg(Box<Expr>),
    Func(Func, Box<Expr>),
    Bin(BinOp, Box<Expr>, Box<Expr>),
    Pow(Box<Expr>, Ratio<i64>),
}

impl Expr {
    fn precedence(&self) -> u8 {
        match self {
            Expr::Bin(op, ..) => op.precedence(),
            Expr::Neg(_) => 3,
            Expr::Pow(..) => 4,
            _ => 5,
        }
    }

    /// Largest variable index used, plus one.
    pub fn var_bound(&self) -> usize {
        match self {
            Expr::Var(k) => k + 1,
            Expr::Num(_) | Expr::Param(_) => 0,
            Expr::Neg(e) | Expr::Func(_, e) | Expr::Pow(e, _) => e.var_bound(),
            Expr::Bin(_, a, b) => a.var_bound().max(b.var_bound()),
        }
    }

    pub fn params(&self, out: &mut Vec<String>) {
        match self {
            Expr::Param(p) => {
                if !out.contains(p) {
                    out.push(p.clone());
                }
            }
            Expr::Num(_) | Expr::Var(_) => {}
            Expr::Neg(e) | Expr::Func(_, e) | Expr::Pow(e, _) => e.params(out),
            Expr::Bin(_, a, b) => {
                a.params(out);
                b.params(out);
            }
        }
    }
}

fn write_child(f: &mut fmt::Formatter<'_>, e: &Expr, parens: bool) -> fmt::Result {
    if parens {
        write!(f, "({e})")
    } else {
        write!(f, "{e}")
    }
}

fn write_number(f: &mut fmt::Formatter<'_>, v: f64) -> fmt::Result {
    if v.fract() == 0.0 && v.abs() < 1e15 {
        write!(f, "{}", v as i64)
    } else {
        write!(f, "{v:?}")
    }
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Expr::Num(v) => write_number(f, *v),
            Expr::Var(k) => write!(f, "u{}", k + 1),
            Expr::Param(p) => write!(f, "{p}"),
            Expr::Neg(e) => {
                write!(f, "-")?;
                write_child(f, e, e.precedence() < 3)
            }
            Expr::Func(func, e) => write!(f, "{}({e})", func.name()),
            Expr::Bin(op, a, b) => {
                let p = op.precedence();
                // `x^2 / 3` would read as `x^(2/3)`
                let left = a.to_string();
                let bare_power = *op == BinOp::Div && left.rsplit('^').next().is_some_and(|t| {
                    left.contains('^') && !t.is_empty() && t.bytes().all(|c| c.is_ascii_digit())
                });
                if a.precedence() < p || bare_power {
                    write!(f, "({left})")?;
                } else {
                    write!(f, "{left}")?;
                }
                write!(f, " {} ", op.symbol())?;
                write_child(f, b, b.precedence() <= p)
            }
            Expr::Pow(e, r) => {
                write_child(f, e, e.precedence() < 5)?;
                if r.is_integer() && *r.numer() >= 0 {
                    write!(f, "^{}", r.numer())
                } else if r.is_integer() {
                    write!(f, "^({})", r.numer())
                } else {
                    write!(f, "^({}/{})", r.numer(), r.denom())
                }
            }
        }
    }
}
