//! Lexer and recursive-descent parser.

use num_bigint::BigInt;

use super::{Basis, BinOp, Expr, ExprError, ExprKind, Func, Span};
use crate::partitions::Partition;
use crate::series::Alphabet;

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Int(BigInt),
    Ident(String),
    LParen,
    RParen,
    LBracket,
    RBracket,
    Comma,
    Semi,
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    Eof,
}

impl Tok {
    fn describe(&self) -> String {
        match self {
            Tok::Int(n) => format!("integer {n}"),
            Tok::Ident(s) => format!("identifier `{s}`"),
            Tok::Eof => "end of input".into(),
            other => format!("`{}`", other.symbol()),
        }
    }

    fn symbol(&self) -> &'static str {
        match self {
            Tok::LParen => "(",
            Tok::RParen => ")",
            Tok::LBracket => "[",
            Tok::RBracket => "]",
            Tok::Comma => ",",
            Tok::Semi => ";",
            Tok::Plus => "+",
            Tok::Minus => "-",
            Tok::Star => "*",
            Tok::Slash => "/",
            Tok::Caret => "^",
            _ => "?",
        }
    }
}

fn syntax(span: Span, message: impl Into<String>) -> ExprError {
    ExprError::Syntax { span, message: message.into() }
}

fn lex(src: &str) -> Result<Vec<(Tok, Span)>, ExprError> {
    let mut out = Vec::new();
    let (mut line, mut col) = (1, 1);
    let mut chars = src.char_indices().peekable();
    while let Some(&(start, c)) = chars.peek() {
        let (l0, c0) = (line, col);
        let span = |end: usize| Span { start, end, line: l0, col: c0 };
        if c == '\n' {
            chars.next();
            line += 1;
            col = 1;
            continue;
        }
        if c.is_whitespace() {
            chars.next();
            col += 1;
            continue;
        }
        if c.is_ascii_digit() {
            let mut end = start;
            while let Some(&(i, d)) = chars.peek() {
                if !d.is_ascii_digit() {
                    break;
                }
                end = i + 1;
                chars.next();
                col += 1;
            }
            let n: BigInt = src[start..end].parse().expect("digits parse");
            out.push((Tok::Int(n), span(end)));
            continue;
        }
        if c.is_ascii_alphabetic() || c == '_' {
            let mut end = start;
            while let Some(&(i, d)) = chars.peek() {
                if !(d.is_ascii_alphanumeric() || d == '_') {
                    break;
                }
                end = i + 1;
                chars.next();
                col += 1;
            }
            out.push((Tok::Ident(src[start..end].to_string()), span(end)));
            continue;
        }
        let tok = match c {
            '(' => Tok::LParen,
            ')' => Tok::RParen,
            '[' => Tok::LBracket,
            ']' => Tok::RBracket,
            ',' => Tok::Comma,
            ';' => Tok::Semi,
            '+' => Tok::Plus,
            '-' | '−' => Tok::Minus,
            '*' => Tok::Star,
            '/' => Tok::Slash,
            '^' => Tok::Caret,
            other => return Err(syntax(span(start + other.len_utf8()), format!("unexpected character {other:?}"))),
        };
        chars.next();
        col += 1;
        out.push((tok, span(start + c.len_utf8())));
    }
    out.push((Tok::Eof, Span { start: src.len(), end: src.len(), line, col }));
    Ok(out)
}

struct Parser {
    toks: Vec<(Tok, Span)>,
    pos: usize,
}

impl Parser {
    fn peek(&self) -> &Tok {
        &self.toks[self.pos].0
    }

    fn span(&self) -> Span {
        self.toks[self.pos].1
    }

    fn prev_span(&self) -> Span {
        self.toks[self.pos.saturating_sub(1)].1
    }

    fn bump(&mut self) -> (Tok, Span) {
        let t = self.toks[self.pos].clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    fn expect(&mut self, tok: Tok) -> Result<Span, ExprError> {
        if *self.peek() == tok {
            Ok(self.bump().1)
        } else {
            Err(syntax(self.span(), format!("expected `{}`, found {}", tok.symbol(), self.peek().describe())))
        }
    }

    fn small_int(&mut self, what: &str) -> Result<u32, ExprError> {
        match self.bump() {
            (Tok::Int(n), span) => u32::try_from(n).map_err(|_| syntax(span, format!("{what} is too large"))),
            (tok, span) => Err(syntax(span, format!("expected {what}, found {}", tok.describe()))),
        }
    }

    fn expr(&mut self) -> Result<Expr, ExprError> {
        let mut lhs = self.term()?;
        loop {
            let op = match self.peek() {
                Tok::Plus => BinOp::Add,
                Tok::Minus => BinOp::Sub,
                _ => return Ok(lhs),
            };
            self.bump();
            let rhs = self.term()?;
            lhs = binary(op, lhs, rhs);
        }
    }

    fn term(&mut self) -> Result<Expr, ExprError> {
        let mut lhs = self.unary()?;
        loop {
            let op = match self.peek() {
                Tok::Star => BinOp::Mul,
                Tok::Slash => BinOp::Div,
                _ => return Ok(lhs),
            };
            self.bump();
            let rhs = self.unary()?;
            lhs = binary(op, lhs, rhs);
        }
    }

    fn unary(&mut self) -> Result<Expr, ExprError> {
        if *self.peek() == Tok::Minus {
            let start = self.bump().1;
            let inner = self.unary()?;
            let span = start.to(inner.span);
            return Ok(Expr { kind: ExprKind::Neg(Box::new(inner)), span });
        }
        self.power()
    }

    fn power(&mut self) -> Result<Expr, ExprError> {
        let base = self.primary()?;
        if *self.peek() != Tok::Caret {
            return Ok(base);
        }
        self.bump();
        let negative = if *self.peek() == Tok::Minus {
            self.bump();
            true
        } else {
            false
        };
        let n = self.small_int("an integer exponent")? as i64;
        let span = base.span.to(self.prev_span());
        Ok(Expr { kind: ExprKind::Pow { base: Box::new(base), exp: if negative { -n } else { n } }, span })
    }

    fn alphabet(&mut self) -> Result<Alphabet, ExprError> {
        self.expect(Tok::LParen)?;
        let alph = match self.bump() {
            (Tok::Ident(s), _) if s == "x" => Alphabet::X,
            (Tok::Ident(s), _) if s == "y" => Alphabet::Y,
            (tok, span) => return Err(syntax(span, format!("expected alphabet `x` or `y`, found {}", tok.describe()))),
        };
        self.expect(Tok::RParen)?;
        Ok(alph)
    }

    fn bracketed_int(&mut self, what: &str) -> Result<u32, ExprError> {
        self.expect(Tok::LBracket)?;
        let n = self.small_int(what)?;
        self.expect(Tok::RBracket)?;
        Ok(n)
    }

    fn partition(&mut self) -> Result<Partition, ExprError> {
        let open = self.expect(Tok::LBracket)?;
        let mut parts = Vec::new();
        if *self.peek() != Tok::RBracket {
            loop {
                parts.push(self.small_int("a partition part")?);
                match self.peek() {
                    Tok::Comma => {
                        self.bump();
                    }
                    _ => break,
                }
            }
        }
        let close = self.expect(Tok::RBracket)?;
        if parts.windows(2).any(|w| w[0] < w[1]) {
            return Err(syntax(open.to(close), "partition parts must be weakly decreasing"));
        }
        Partition::new(parts).map_err(|e| syntax(open.to(close), e.to_string()))
    }

    fn primary(&mut self) -> Result<Expr, ExprError> {
        let (tok, start) = self.bump();
        let kind = match tok {
            Tok::Int(n) => ExprKind::Int(n),
            Tok::LParen => {
                let inner = self.expr()?;
                let close = self.expect(Tok::RParen)?;
                return Ok(Expr { kind: inner.kind, span: start.to(close) });
            }
            Tok::Ident(name) => match name.as_str() {
                "hbar" => ExprKind::Hbar,
                "E" => ExprKind::ESeries,
                "L" => ExprKind::LSeries,
                "R" => ExprKind::Regular(self.bracketed_int("an arity")?),
                "p" | "h" | "e" => {
                    let basis = match name.as_str() {
                        "p" => Basis::P,
                        "h" => Basis::H,
                        _ => Basis::E,
                    };
                    let n = self.bracketed_int("a degree")?;
                    if basis == Basis::P && n == 0 {
                        return Err(syntax(start.to(self.prev_span()), "p[0] is not a power sum"));
                    }
                    let alphabet = self.alphabet()?;
                    ExprKind::Atom { basis, n, alphabet }
                }
                "s" => {
                    let part = self.partition()?;
                    let alphabet = self.alphabet()?;
                    ExprKind::Schur { part, alphabet }
                }
                other => match Func::from_name(other) {
                    Some(func) => ExprKind::Call { func, args: self.arguments(func)? },
                    None => return Err(syntax(start, format!("unknown identifier `{other}`"))),
                },
            },
            other => return Err(syntax(start, format!("expected an expression, found {}", other.describe()))),
        };
        Ok(Expr { kind, span: start.to(self.prev_span()) })
    }

    fn arguments(&mut self, func: Func) -> Result<Vec<Expr>, ExprError> {
        self.expect(Tok::LParen)?;
        let mut args = vec![self.expr()?];
        for i in 1..func.arity() {
            let sep = if func == Func::RelPleth && i == 1 { Tok::Semi } else { Tok::Comma };
            self.expect(sep)?;
            args.push(self.expr()?);
        }
        if *self.peek() != Tok::RParen {
            return Err(syntax(
                self.span(),
                format!(
                    "`{}` takes {} argument(s); expected `)`, found {}",
                    func.name(),
                    func.arity(),
                    self.peek().describe()
                ),
            ));
        }
        self.bump();
        Ok(args)
    }
}

fn binary(op: BinOp, lhs: Expr, rhs: Expr) -> Expr {
    let span = lhs.span.to(rhs.span);
    Expr { kind: ExprKind::Binary { op, lhs: Box::new(lhs), rhs: Box::new(rhs) }, span }
}

/// Parse an expression; errors carry the line and column.
pub fn parse(src: &str) -> Result<Expr, ExprError> {
    let mut p = Parser { toks: lex(src)?, pos: 0 };
    let e = p.expr()?;
    if *p.peek() != Tok::Eof {
        return Err(syntax(p.span(), format!("unexpected {} after expression", p.peek().describe())));
    }
    Ok(e)
}
