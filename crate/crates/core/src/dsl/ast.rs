use std::fmt;

use num_complex::Complex64;
use thiserror::Error;

type C64 = Complex64;

/// A coordinate function: `z^k` or its conjugate `zb^k` (0-based index).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Var {
    pub index: usize,
    pub conj: bool,
}

impl Var {
    pub fn z(index: usize) -> Self {
        Self { index, conj: false }
    }

    pub fn zb(index: usize) -> Self {
        Self { index, conj: true }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Func {
    Exp,
    Log,
    Sqrt,
}

impl Func {
    pub fn name(self) -> &'static str {
        match self {
            Func::Exp => "exp",
            Func::Log => "log",
            Func::Sqrt => "sqrt",
        }
    }

    pub fn from_name(s: &str) -> Option<Self> {
        match s {
            "exp" => Some(Func::Exp),
            "log" => Some(Func::Log),
            "sqrt" => Some(Func::Sqrt),
            _ => None,
        }
    }
}

/// Expression tree for one metric entry. `z` and `zb` are independent
/// variables, which makes Wirtinger differentiation purely syntactic.
#[derive(Debug, Clone, PartialEq)]
pub enum Expr {
    Const(C64),
    Var(Var),
    Neg(Box<Expr>),
    Add(Box<Expr>, Box<Expr>),
    Sub(Box<Expr>, Box<Expr>),
    Mul(Box<Expr>, Box<Expr>),
    Div(Box<Expr>, Box<Expr>),
    /// Integer power with a nonzero exponent.
    Pow(Box<Expr>, i32),
    Call(Func, Box<Expr>),
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum EvalError {
    #[error("division by zero")]
    DivisionByZero,
    #[error("{0} of zero")]
    ZeroArgument(&'static str),
    #[error("variable index {index} out of range for a point of dimension {dim}")]
    IndexOutOfRange { index: usize, dim: usize },
    #[error("non-finite result")]
    NonFinite,
}

impl Expr {
    pub fn real(x: f64) -> Self {
        Expr::Const(C64::new(x, 0.0))
    }

    pub fn zero() -> Self {
        Expr::real(0.0)
    }

    pub fn one() -> Self {
        Expr::real(1.0)
    }

    pub fn is_zero(&self) -> bool {
        matches!(self, Expr::Const(c) if *c == C64::new(0.0, 0.0))
    }

    pub fn is_one(&self) -> bool {
        matches!(self, Expr::Const(c) if *c == C64::new(1.0, 0.0))
    }

    /// Evaluates at `z`, treating `zb^k` as `conj(z^k)`.
    pub fn eval(&self, z: &[C64]) -> Result<C64, EvalError> {
        let v = match self {
            Expr::Const(c) => *c,
            Expr::Var(v) => {
                let x = *z.get(v.index).ok_or(EvalError::IndexOutOfRange {
                    index: v.index + 1,
                    dim: z.len(),
                })?;
                if v.conj {
                    x.conj()
                } else {
                    x
                }
            }
            Expr::Neg(a) => -a.eval(z)?,
            Expr::Add(a, b) => a.eval(z)? + b.eval(z)?,
            Expr::Sub(a, b) => a.eval(z)? - b.eval(z)?,
            Expr::Mul(a, b) => a.eval(z)? * b.eval(z)?,
            Expr::Div(a, b) => {
                let d = b.eval(z)?;
                if d.norm_sqr() == 0.0 {
                    return Err(EvalError::DivisionByZero);
                }
                a.eval(z)? / d
            }
            Expr::Pow(a, k) => {
                let base = a.eval(z)?;
                if *k < 0 && base.norm_sqr() == 0.0 {
                    return Err(EvalError::DivisionByZero);
                }
                base.powi(*k)
            }
            Expr::Call(f, a) => {
                let x = a.eval(z)?;
                match f {
                    Func::Exp => x.exp(),
                    Func::Log | Func::Sqrt if x.norm_sqr() == 0.0 => {
                        return Err(EvalError::ZeroArgument(f.name()))
                    }
                    Func::Log => x.ln(),
                    Func::Sqrt => x.sqrt(),
                }
            }
        };
        if v.re.is_finite() && v.im.is_finite() {
            Ok(v)
        } else {
            Err(EvalError::NonFinite)
        }
    }

    /// Formal conjugate: swaps `z` and `zb` and conjugates constants.
    pub fn conj(&self) -> Expr {
        match self {
            Expr::Const(c) => Expr::Const(c.conj()),
            Expr::Var(v) => Expr::Var(Var {
                index: v.index,
                conj: !v.conj,
            }),
            Expr::Neg(a) => Expr::Neg(Box::new(a.conj())),
            Expr::Add(a, b) => Expr::Add(Box::new(a.conj()), Box::new(b.conj())),
            Expr::Sub(a, b) => Expr::Sub(Box::new(a.conj()), Box::new(b.conj())),
            Expr::Mul(a, b) => Expr::Mul(Box::new(a.conj()), Box::new(b.conj())),
            Expr::Div(a, b) => Expr::Div(Box::new(a.conj()), Box::new(b.conj())),
            Expr::Pow(a, k) => Expr::Pow(Box::new(a.conj()), *k),
            Expr::Call(f, a) => Expr::Call(*f, Box::new(a.conj())),
        }
    }

    /// Largest variable index used (1-based), or 0 for constant trees.
    pub fn max_var_index(&self) -> usize {
        match self {
            Expr::Const(_) => 0,
            Expr::Var(v) => v.index + 1,
            Expr::Neg(a) | Expr::Pow(a, _) | Expr::Call(_, a) => a.max_var_index(),
            Expr::Add(a, b) | Expr::Sub(a, b) | Expr::Mul(a, b) | Expr::Div(a, b) => {
                a.max_var_index().max(b.max_var_index())
            }
        }
    }

    pub fn node_count(&self) -> usize {
        match self {
            Expr::Const(_) | Expr::Var(_) => 1,
            Expr::Neg(a) | Expr::Pow(a, _) | Expr::Call(_, a) => 1 + a.node_count(),
            Expr::Add(a, b) | Expr::Sub(a, b) | Expr::Mul(a, b) | Expr::Div(a, b) => {
                1 + a.node_count() + b.node_count()
            }
        }
    }

    fn precedence(&self) -> u8 {
        match self {
            Expr::Add(..) | Expr::Sub(..) => 1,
            Expr::Mul(..) | Expr::Div(..) => 2,
            Expr::Neg(_) => 3,
            Expr::Pow(..) => 4,
            Expr::Const(_) | Expr::Var(_) | Expr::Call(..) => 5,
        }
    }

    fn write_at(&self, f: &mut fmt::Formatter<'_>, min_prec: u8) -> fmt::Result {
        let parens = self.precedence() < min_prec;
        if parens {
            f.write_str("(")?;
        }
        match self {
            Expr::Const(c) => write_const(f, *c)?,
            Expr::Var(v) => write!(f, "{}{}", if v.conj { "zb" } else { "z" }, v.index + 1)?,
            Expr::Neg(a) => {
                f.write_str("-")?;
                a.write_at(f, 3)?;
            }
            Expr::Add(a, b) | Expr::Sub(a, b) => {
                a.write_at(f, 1)?;
                f.write_str(if matches!(self, Expr::Add(..)) {
                    "+"
                } else {
                    "-"
                })?;
                b.write_at(f, 2)?;
            }
            Expr::Mul(a, b) | Expr::Div(a, b) => {
                a.write_at(f, 2)?;
                f.write_str(if matches!(self, Expr::Mul(..)) {
                    "*"
                } else {
                    "/"
                })?;
                b.write_at(f, 3)?;
            }
            Expr::Pow(a, k) => {
                a.write_at(f, 5)?;
                write!(f, "^{k}")?;
            }
            Expr::Call(func, a) => {
                write!(f, "{}(", func.name())?;
                a.write_at(f, 0)?;
                f.write_str(")")?;
            }
        }
        if parens {
            f.write_str(")")?;
        }
        Ok(())
    }
}

fn write_const(f: &mut fmt::Formatter<'_>, c: C64) -> fmt::Result {
    match (c.re, c.im) {
        (re, im) if im == 0.0 && re >= 0.0 => write!(f, "{re:?}"),
        (re, 0.0) => write!(f, "(-{:?})", -re),
        (re, im) if re == 0.0 && im == 1.0 => f.write_str("i"),
        (re, im) => {
            f.write_str("(")?;
            if re != 0.0 {
                if re < 0.0 {
                    write!(f, "-{:?}", -re)?;
                } else {
                    write!(f, "{re:?}")?;
                }
                f.write_str(if im < 0.0 { "-" } else { "+" })?;
            } else if im < 0.0 {
                f.write_str("-")?;
            }
            write!(f, "{:?}*i)", im.abs())
        }
    }
}

/// Unparses to the DSL's concrete syntax; the output reparses to an
/// equivalent tree.
impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.write_at(f, 0)
    }
}
