//! Evaluation of expressions to truncated bisymmetric series.
//!
//! Subexpressions are evaluated with the `t`-window widened by a margin so
//! that products and regradings see the terms just outside the requested
//! window; the result is cut down to the requested truncation at the end.
//! First arguments of compositions are evaluated at whatever degree the
//! composition needs, enlarging the truncation until the kernel accepts it.

use num_traits::One;

use super::{Basis, BinOp, Expr, ExprError, ExprKind, Func};
use crate::bases::{e_to_p, h_to_p, schur_to_p};
use crate::error::Error;
use crate::plethysm::{koike_pleth, omega_x, omega_xy, omega_y, pleth_bisym, plethystic_exp, plethystic_log, relpleth};
use crate::propcalc::{box_inner_bound, box_product, connected_box, psi_regrade, regular_rep_char, saturate};
use crate::series::{Alphabet, BiSymSeries, Rational, SymSeries, Truncation};

/// Attempts at enlarging a first argument before giving up.
const MAX_ENLARGE: u32 = 4;

struct Evaluator<'a> {
    src: Option<&'a str>,
}

type EvalResult = Result<BiSymSeries, ExprError>;

fn widen(t: Truncation, by: i32) -> Truncation {
    t.with_window(t.t_min.saturating_sub(by), t.t_max.saturating_add(by))
}

fn one_alphabet(f: &BiSymSeries) -> Option<Alphabet> {
    if f.is_x_only() {
        Some(Alphabet::X)
    } else if f.is_y_only() {
        Some(Alphabet::Y)
    } else {
        None
    }
}

/// `(t, c)` if `f = c·t^k` with `c ≠ 0` and no alphabet dependence.
fn invertible(f: &BiSymSeries) -> Option<(i32, Rational)> {
    let mut it = f.terms();
    let (m, c) = it.next()?;
    if it.next().is_some() || !m.x.is_empty() || !m.y.is_empty() {
        return None;
    }
    Some((m.t, c.clone()))
}

fn max_abs_t(fs: &[&BiSymSeries]) -> i32 {
    fs.iter().flat_map(|f| f.terms().map(|(m, _)| m.t.abs())).max().unwrap_or(0)
}

impl Evaluator<'_> {
    fn fail(&self, e: &Expr, source: Error) -> ExprError {
        let snippet = match self.src {
            Some(src) if e.span.end <= src.len() && e.span.start < e.span.end => {
                src[e.span.start..e.span.end].to_string()
            }
            _ => e.to_string(),
        };
        ExprError::Eval { span: e.span, snippet, source }
    }

    fn eval(&self, e: &Expr, trunc: Truncation) -> EvalResult {
        Ok(match &e.kind {
            ExprKind::Int(n) => BiSymSeries::constant(Rational::from_integer(n.clone()), trunc),
            ExprKind::Hbar => BiSymSeries::t_power(1, trunc).neg(),
            ExprKind::Atom { basis, n, alphabet } => atom(*basis, *n, *alphabet, trunc),
            ExprKind::Schur { part, alphabet } => {
                let s = schur_to_p(part, in_x(trunc, *alphabet));
                s.in_alphabet(*alphabet).embed().with_truncation(trunc)
            }
            ExprKind::ESeries => crate::plethysm::e_series(trunc),
            ExprKind::LSeries => crate::plethysm::l_series(trunc),
            ExprKind::Regular(n) => regular_rep_char(*n, trunc),
            ExprKind::Neg(inner) => self.eval(inner, trunc)?.neg(),
            ExprKind::Binary { op, lhs, rhs } => {
                let a = self.eval(lhs, trunc)?;
                let b = self.eval(rhs, trunc)?;
                match op {
                    BinOp::Add => a.add(&b),
                    BinOp::Sub => a.sub(&b),
                    BinOp::Mul => a.mul(&b),
                    BinOp::Div => {
                        let (k, c) = invertible(&b).ok_or_else(|| {
                            self.fail(rhs, Error::Precondition("can only divide by a nonzero c·hbar^k".into()))
                        })?;
                        a.shift_t(-k).scale(&c.recip())
                    }
                }
            }
            ExprKind::Pow { base, exp } => {
                let b = self.eval(base, trunc)?;
                if *exp >= 0 {
                    let n = u32::try_from(*exp)
                        .map_err(|_| self.fail(e, Error::Precondition("exponent too large".into())))?;
                    b.pow(n)
                } else {
                    let (k, c) = invertible(&b).ok_or_else(|| {
                        self.fail(base, Error::Precondition("negative powers need a nonzero c·hbar^k".into()))
                    })?;
                    let n = exp.unsigned_abs();
                    let n32 = i32::try_from(n)
                        .ok()
                        .and_then(|n| k.checked_mul(n))
                        .ok_or_else(|| self.fail(e, Error::WindowOverflow("exponent too large".into())))?;
                    let c = num_traits::pow::pow(c.recip(), n as usize);
                    BiSymSeries::monomial(
                        crate::partitions::Partition::empty(),
                        crate::partitions::Partition::empty(),
                        -n32,
                        c,
                        trunc,
                    )
                }
            }
            ExprKind::Call { func, args } => self.call(e, *func, args, trunc)?,
        })
    }

    /// Evaluate the first argument of a composition at a truncation large
    /// enough for `op`, enlarging on `InsufficientTruncation`.
    fn eval_outer(
        &self,
        call: &Expr,
        f: &Expr,
        base: Truncation,
        inner: &[&BiSymSeries],
        op: impl Fn(&BiSymSeries) -> crate::Result<BiSymSeries>,
    ) -> EvalResult {
        let mut d = (base.deg_x + base.deg_y).max(1);
        let spread = max_abs_t(inner).max(1);
        for attempt in 0..=MAX_ENLARGE {
            let w = (d as i32).saturating_mul(spread);
            let ft = widen(Truncation::degrees(d, d).with_window(base.t_min, base.t_max), w);
            let fv = self.eval(f, ft)?;
            match op(&fv) {
                Err(Error::InsufficientTruncation(_)) if attempt < MAX_ENLARGE => d *= 2,
                other => return other.map_err(|err| self.fail(call, err)),
            }
        }
        unreachable!("the last attempt always returns")
    }

    fn call(&self, e: &Expr, func: Func, args: &[Expr], trunc: Truncation) -> EvalResult {
        let wrap = |r: crate::Result<BiSymSeries>| r.map_err(|err| self.fail(e, err));
        match func {
            Func::Sat => wrap(saturate(&self.eval(&args[0], trunc)?)),
            Func::Exp1 => wrap(plethystic_exp(&self.eval(&args[0], trunc)?)),
            Func::Log1 => wrap(plethystic_log(&self.eval(&args[0], trunc)?)),
            Func::Omega => Ok(omega_xy(&self.eval(&args[0], trunc)?)),
            Func::OmegaX => Ok(omega_x(&self.eval(&args[0], trunc)?)),
            Func::OmegaY => Ok(omega_y(&self.eval(&args[0], trunc)?)),
            Func::Psi => {
                // shifts lie in [−deg_x, deg_y]
                let (dx, dy) = (trunc.deg_x as i32, trunc.deg_y as i32);
                let src = trunc.with_window(trunc.t_min - dy, trunc.t_max + dx);
                let f = self.eval(&args[0], src)?.with_truncation(widen(src, dx + dy));
                Ok(wrap(psi_regrade(&f))?.truncate_to(&trunc))
            }
            Func::Pleth => {
                let g = self.eval(&args[1], trunc)?;
                self.eval_outer(e, &args[0], trunc, &[&g], |f| {
                    let alph = one_alphabet(f).ok_or_else(|| {
                        Error::Precondition(
                            "pleth: the outer function must involve a single alphabet (use relpleth)".into(),
                        )
                    })?;
                    pleth_bisym(&SymSeries::from_bisym(alph, f)?.in_alphabet(Alphabet::X), &g)
                })
            }
            Func::RelPleth => {
                let gbar = self.eval(&args[1], trunc)?;
                let gv = self.eval(&args[2], trunc)?;
                let alph = one_alphabet(&gv).ok_or_else(|| {
                    self.fail(
                        &args[2],
                        Error::Precondition("relpleth: the third argument must involve a single alphabet".into()),
                    )
                })?;
                let g = SymSeries::from_bisym(alph, &gv).expect("checked to involve one alphabet");
                self.eval_outer(e, &args[0], trunc, &[&gbar, &gv], |f| relpleth(f, &gbar, &g))
            }
            Func::Koike => {
                let m = trunc.deg_x.max(trunc.deg_y);
                let square = Truncation::degrees(m, m).with_window(trunc.t_min, trunc.t_max);
                let gbar = self.eval(&args[1], square)?;
                let r = self.eval_outer(e, &args[0], square, &[&gbar], |f| koike_pleth(f, &gbar))?;
                Ok(r.truncate_to(&trunc).with_truncation(trunc))
            }
            Func::Box | Func::CBox => {
                let mut k = trunc.deg_x.max(trunc.deg_y).max(1);
                for attempt in 0..=MAX_ENLARGE {
                    let f = self.eval(&args[0], Truncation { deg_y: k, ..trunc })?;
                    let g = self.eval(&args[1], Truncation { deg_x: k, ..trunc })?;
                    if f.is_zero() || g.is_zero() {
                        return Ok(BiSymSeries::zero(trunc));
                    }
                    let inner = box_inner_bound(&f, &g, trunc.deg_x, trunc.deg_y).map_err(|err| self.fail(e, err))?;
                    if inner <= k || attempt == MAX_ENLARGE {
                        let r = if func == Func::Box { box_product(&f, &g) } else { connected_box(&f, &g) };
                        return wrap(r);
                    }
                    k = inner;
                }
                unreachable!("the last attempt always returns")
            }
        }
    }
}

/// A truncation for building a one-alphabet atom before moving it to
/// `alphabet`.
fn in_x(trunc: Truncation, alphabet: Alphabet) -> Truncation {
    match alphabet {
        Alphabet::X => trunc,
        Alphabet::Y => trunc.swapped(),
    }
}

fn atom(basis: Basis, n: u32, alphabet: Alphabet, trunc: Truncation) -> BiSymSeries {
    let t = in_x(trunc, alphabet);
    let s = match basis {
        Basis::P => SymSeries::from_terms(Alphabet::X, [(crate::partitions::Partition::row(n), 0, Rational::one())], t),
        Basis::H => h_to_p(n, t),
        Basis::E => e_to_p(n, t),
    };
    s.in_alphabet(alphabet).embed().with_truncation(trunc)
}

fn evaluate_with(e: &Expr, trunc: Truncation, src: Option<&str>) -> EvalResult {
    let margin = (trunc.deg_x + trunc.deg_y) as i32;
    let ev = Evaluator { src };
    Ok(ev.eval(e, widen(trunc, margin))?.truncate_to(&trunc).with_truncation(trunc))
}

/// Evaluate `e` to a series truncated to `trunc`. Kernel errors are
/// reported with the span of the offending subexpression.
pub fn evaluate(e: &Expr, trunc: Truncation) -> EvalResult {
    evaluate_with(e, trunc, None)
}

/// Parse and evaluate `src`.
pub fn eval_str(src: &str, trunc: Truncation) -> EvalResult {
    let e = super::parse(src)?;
    evaluate_with(&e, trunc, Some(src))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bases::schur_pair_expansion;
    use crate::partitions::Partition;
    use crate::series::rat;

    fn p(parts: &[u32]) -> Partition {
        Partition::from_parts(parts)
    }

    fn t(d: u32) -> Truncation {
        Truncation::degrees(d, d).with_window(-4, 4)
    }

    #[test]
    fn pleth_example() {
        let r = eval_str("pleth(p[2](x), h[2](x))", t(4)).unwrap();
        let px = |l: &[u32]| BiSymSeries::monomial(p(l), Partition::empty(), 0, rat(1), t(4));
        assert_eq!(r, px(&[2, 2]).add(&px(&[4])).scale(&crate::series::ratio(1, 2)));
    }

    #[test]
    fn omega_example() {
        let r = eval_str("omega(h[2](x))", t(4)).unwrap();
        assert_eq!(r, e_to_p(2, t(4)).embed());
    }

    #[test]
    fn box_example() {
        let tr = Truncation::degrees(1, 1).with_window(-4, 4);
        let r = eval_str("box(p[1](x)*p[1](y), p[1](x)*p[1](y))", tr).unwrap();
        let expected = BiSymSeries::monomial(p(&[1]), p(&[1]), 0, rat(1), tr);
        assert_eq!(r, expected);
        let r = eval_str("box(p[1](x)*p[1](y), p[1](x)*p[1](y)) - sat(p[1](x)*p[1](y))", t(3)).unwrap();
        assert!(r.is_zero());
        let r = eval_str("cbox(p[1](x)*p[1](y), p[1](x)*p[1](y))", t(3)).unwrap();
        assert_eq!(r, BiSymSeries::monomial(p(&[1]), p(&[1]), 0, rat(1), t(3)));
    }

    #[test]
    fn cauchy_through_bidegree_two() {
        let tr = Truncation::degrees(2, 2);
        let r = eval_str("sat(p[1](x)*p[1](y))", tr).unwrap();
        let rows: Vec<_> = schur_pair_expansion(&r).rows.iter().map(|r| (r.x_part.clone(), r.y_part.clone())).collect();
        assert_eq!(rows, vec![(p(&[1]), p(&[1])), (p(&[2]), p(&[2])), (p(&[1, 1]), p(&[1, 1]))]);
    }

    #[test]
    fn hbar_arithmetic() {
        let r = eval_str("hbar^2*hbar^-1 + 1/hbar*hbar^2", t(2)).unwrap();
        assert_eq!(r, BiSymSeries::t_power(1, t(2)).scale(&rat(-2)));
        assert_eq!(eval_str("6/4", t(2)).unwrap(), BiSymSeries::constant(crate::series::ratio(3, 2), t(2)));
    }

    #[test]
    fn relpleth_and_koike() {
        let tr = Truncation::degrees(6, 6);
        let r = eval_str("relpleth(p[2](y); p[1](x)*p[1](y), p[3](y))", tr).unwrap();
        assert_eq!(r, BiSymSeries::power_sum(6, Alphabet::Y, tr));
        let r = eval_str("koike(p[2](x), p[1](x)*p[1](y))", tr).unwrap();
        assert_eq!(r, BiSymSeries::monomial(p(&[2]), p(&[2]), 0, rat(1), tr));
        let r = eval_str("koike(h[2](x), p[1](x)*p[1](y)) - relpleth(h[2](x); p[1](x)*p[1](y), 0)", tr);
        assert!(r.is_ok());
    }

    #[test]
    fn psi_example() {
        let r = eval_str("psi(p[1](x)*p[2](y))", t(3)).unwrap();
        assert_eq!(r, BiSymSeries::monomial(p(&[1]), p(&[2]), 1, rat(1), t(3)));
    }

    #[test]
    fn errors_name_spans() {
        let src = "1 + pleth(h[2](x), 1 + p[1](x))";
        let err = eval_str(src, t(3)).unwrap_err();
        let ExprError::Eval { span, snippet, .. } = &err else { panic!("{err}") };
        assert_eq!(snippet, "pleth(h[2](x), 1 + p[1](x))");
        assert_eq!(span.col, 5);
        let err = eval_str("p[1](x)/p[1](y)", t(3)).unwrap_err();
        assert!(matches!(&err, ExprError::Eval { snippet, .. } if snippet == "p[1](y)"));
        let err = eval_str("box(p[1](y), p[1](x))", t(3)).unwrap_err();
        assert!(err.to_string().contains("unbounded"), "{err}");
        assert!(eval_str("pleth(p[1](x)*p[1](y), p[1](x))", t(3)).is_err());
    }
}
