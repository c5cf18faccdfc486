//! A small expression language for bisymmetric functions.
//!
//! ```text
//! expr      = term , { ( "+" | "-" ) , term } ;
//! term      = unary , { ( "*" | "/" ) , unary } ;
//! unary     = "-" , unary | power ;
//! power     = primary , [ "^" , [ "-" ] , integer ] ;
//! primary   = integer | "hbar" | "E" | "L" | "R" , "[" , integer , "]"
//!           | basis , "[" , integer , "]" , alphabet
//!           | "s" , "[" , [ integer , { "," , integer } ] , "]" , alphabet
//!           | function , "(" , arguments , ")"
//!           | "(" , expr , ")" ;
//! basis     = "p" | "h" | "e" ;
//! alphabet  = "(" , ( "x" | "y" ) , ")" ;
//! arguments = expr , { "," , expr }                       (* most functions *)
//!           | expr , ";" , expr , "," , expr ;            (* relpleth *)
//! function  = "pleth" | "relpleth" | "koike" | "sat" | "box" | "cbox"
//!           | "omega" | "omega_x" | "omega_y" | "psi" | "exp1" | "log1" ;
//! ```
//!
//! `^` binds tighter than unary minus, so `-p[1](x)^2` is `-(p_1^2)`.
//! Negative exponents and `/` are only allowed for invertible divisors:
//! nonzero scalars times a power of `hbar`.

mod eval;
mod parse;

use std::fmt;

use num_bigint::BigInt;

use crate::partitions::Partition;
use crate::series::Alphabet;

pub use eval::{eval_str, evaluate};
pub use parse::parse;

/// A source region: byte offsets plus the 1-based line and column of the
/// start.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct Span {
    pub start: usize,
    pub end: usize,
    pub line: usize,
    pub col: usize,
}

impl Span {
    fn to(self, other: Span) -> Span {
        Span { end: other.end, ..self }
    }
}

impl fmt::Display for Span {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.line, self.col)
    }
}

/// Errors from parsing or evaluating an expression.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum ExprError {
    #[error("syntax error at {span}: {message}")]
    Syntax { span: Span, message: String },
    #[error("error evaluating `{snippet}` at {span}: {source}")]
    Eval {
        span: Span,
        snippet: String,
        #[source]
        source: crate::error::Error,
    },
}

impl ExprError {
    pub fn span(&self) -> Span {
        match self {
            ExprError::Syntax { span, .. } | ExprError::Eval { span, .. } => *span,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Basis {
    P,
    H,
    E,
}

impl Basis {
    fn name(self) -> &'static str {
        match self {
            Basis::P => "p",
            Basis::H => "h",
            Basis::E => "e",
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

/// Named operations, all written with call syntax.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Func {
    Pleth,
    RelPleth,
    Koike,
    Sat,
    Box,
    CBox,
    Omega,
    OmegaX,
    OmegaY,
    Psi,
    Exp1,
    Log1,
}

impl Func {
    const ALL: [Func; 12] = [
        Func::Pleth,
        Func::RelPleth,
        Func::Koike,
        Func::Sat,
        Func::Box,
        Func::CBox,
        Func::Omega,
        Func::OmegaX,
        Func::OmegaY,
        Func::Psi,
        Func::Exp1,
        Func::Log1,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Func::Pleth => "pleth",
            Func::RelPleth => "relpleth",
            Func::Koike => "koike",
            Func::Sat => "sat",
            Func::Box => "box",
            Func::CBox => "cbox",
            Func::Omega => "omega",
            Func::OmegaX => "omega_x",
            Func::OmegaY => "omega_y",
            Func::Psi => "psi",
            Func::Exp1 => "exp1",
            Func::Log1 => "log1",
        }
    }

    pub fn from_name(name: &str) -> Option<Func> {
        Func::ALL.into_iter().find(|f| f.name() == name)
    }

    pub fn arity(self) -> usize {
        match self {
            Func::Pleth | Func::Koike | Func::Box | Func::CBox => 2,
            Func::RelPleth => 3,
            _ => 1,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum ExprKind {
    Int(BigInt),
    Hbar,
    Atom {
        basis: Basis,
        n: u32,
        alphabet: Alphabet,
    },
    Schur {
        part: Partition,
        alphabet: Alphabet,
    },
    /// `E = Σ_{r≥0} h_r(x)`.
    ESeries,
    /// `L = Σ_k (μ_k/k) log(1 + p_k(x))`.
    LSeries,
    /// `R_n = Σ_{λ⊢n} s_λ(x) s_λ(y)`.
    Regular(u32),
    Neg(Box<Expr>),
    Binary {
        op: BinOp,
        lhs: Box<Expr>,
        rhs: Box<Expr>,
    },
    Pow {
        base: Box<Expr>,
        exp: i64,
    },
    Call {
        func: Func,
        args: Vec<Expr>,
    },
}

/// An expression node. Equality ignores spans.
#[derive(Clone, Debug)]
pub struct Expr {
    pub kind: ExprKind,
    pub span: Span,
}

impl PartialEq for Expr {
    fn eq(&self, other: &Self) -> bool {
        self.kind == other.kind
    }
}

impl Expr {
    pub fn new(kind: ExprKind) -> Self {
        Expr { kind, span: Span::default() }
    }

    fn precedence(&self) -> u8 {
        match &self.kind {
            ExprKind::Binary { op: BinOp::Add | BinOp::Sub, .. } => 1,
            ExprKind::Binary { .. } => 2,
            ExprKind::Neg(_) => 3,
            ExprKind::Pow { .. } => 4,
            _ => 5,
        }
    }

    fn write_at(&self, f: &mut fmt::Formatter<'_>, min: u8) -> fmt::Result {
        let wrap = self.precedence() < min;
        if wrap {
            f.write_str("(")?;
        }
        match &self.kind {
            ExprKind::Int(n) => write!(f, "{n}")?,
            ExprKind::Hbar => f.write_str("hbar")?,
            ExprKind::Atom { basis, n, alphabet } => write!(f, "{}[{n}]({})", basis.name(), alphabet.name())?,
            ExprKind::Schur { part, alphabet } => {
                let parts: Vec<String> = part.parts().iter().map(|p| p.to_string()).collect();
                write!(f, "s[{}]({})", parts.join(","), alphabet.name())?
            }
            ExprKind::ESeries => f.write_str("E")?,
            ExprKind::LSeries => f.write_str("L")?,
            ExprKind::Regular(n) => write!(f, "R[{n}]")?,
            ExprKind::Neg(e) => {
                f.write_str("-")?;
                e.write_at(f, 3)?;
            }
            ExprKind::Binary { op, lhs, rhs } => {
                let (sym, p) = match op {
                    BinOp::Add => (" + ", 1),
                    BinOp::Sub => (" - ", 1),
                    BinOp::Mul => ("*", 2),
                    BinOp::Div => ("/", 2),
                };
                lhs.write_at(f, p)?;
                f.write_str(sym)?;
                rhs.write_at(f, p + 1)?;
            }
            ExprKind::Pow { base, exp } => {
                base.write_at(f, 5)?;
                write!(f, "^{exp}")?;
            }
            ExprKind::Call { func, args } => {
                write!(f, "{}(", func.name())?;
                for (i, a) in args.iter().enumerate() {
                    if i > 0 {
                        f.write_str(if *func == Func::RelPleth && i == 1 { "; " } else { ", " })?;
                    }
                    a.write_at(f, 0)?;
                }
                f.write_str(")")?;
            }
        }
        if wrap {
            f.write_str(")")?;
        }
        Ok(())
    }
}

/// Prints in the concrete syntax, with the fewest parentheses that parse
/// back to the same tree.
impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.write_at(f, 0)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn leaf() -> impl Strategy<Value = Expr> {
        let alph = prop_oneof![Just(Alphabet::X), Just(Alphabet::Y)];
        let basis = prop_oneof![Just(Basis::P), Just(Basis::H), Just(Basis::E)];
        prop_oneof![
            (0u32..20).prop_map(|n| Expr::new(ExprKind::Int(n.into()))),
            Just(Expr::new(ExprKind::Hbar)),
            Just(Expr::new(ExprKind::ESeries)),
            Just(Expr::new(ExprKind::LSeries)),
            (0u32..4).prop_map(|n| Expr::new(ExprKind::Regular(n))),
            (basis, 1u32..5, alph.clone()).prop_map(|(basis, n, alphabet)| Expr::new(ExprKind::Atom {
                basis,
                n,
                alphabet
            })),
            (proptest::collection::vec(1u32..4, 0..4), alph).prop_map(|(v, alphabet)| {
                Expr::new(ExprKind::Schur { part: Partition::new(v).unwrap(), alphabet })
            }),
        ]
    }

    fn arb_expr() -> impl Strategy<Value = Expr> {
        leaf().prop_recursive(4, 32, 3, |inner| {
            let op = prop_oneof![Just(BinOp::Add), Just(BinOp::Sub), Just(BinOp::Mul), Just(BinOp::Div)];
            prop_oneof![
                inner.clone().prop_map(|e| Expr::new(ExprKind::Neg(Box::new(e)))),
                (op, inner.clone(), inner.clone()).prop_map(|(op, l, r)| Expr::new(ExprKind::Binary {
                    op,
                    lhs: Box::new(l),
                    rhs: Box::new(r)
                })),
                (inner.clone(), -3i64..4).prop_map(|(b, exp)| Expr::new(ExprKind::Pow { base: Box::new(b), exp })),
                (0..Func::ALL.len(), proptest::collection::vec(inner, 3)).prop_map(|(i, mut args)| {
                    let func = Func::ALL[i];
                    args.truncate(func.arity());
                    Expr::new(ExprKind::Call { func, args })
                }),
            ]
        })
    }

    proptest! {
        #[test]
        fn parse_print_roundtrip(e in arb_expr()) {
            let text = e.to_string();
            let parsed = parse(&text).map_err(|err| TestCaseError::fail(format!("{text}: {err}")))?;
            prop_assert_eq!(&parsed, &e, "{}", text);
        }
    }

    #[test]
    fn printing_examples() {
        for src in ["p[2](x)*h[1](y)", "-p[1](x)^2", "(-p[1](x))^2", "hbar^-1*R[2]"] {
            assert_eq!(parse(src).unwrap().to_string(), src);
        }
        assert_eq!(
            parse("relpleth(p[1](x);p[1](x)*p[1](y),0)").unwrap().to_string(),
            "relpleth(p[1](x); p[1](x)*p[1](y), 0)"
        );
        assert_eq!(parse("((1 + 2)) * 3").unwrap().to_string(), "(1 + 2)*3");
        assert_eq!(parse("1 - (2 - 3)").unwrap().to_string(), "1 - (2 - 3)");
        assert_eq!(parse("s[](x)").unwrap().to_string(), "s[](x)");
    }
}
