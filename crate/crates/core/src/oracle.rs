//! Brute-force reference implementations for testing.
//!
//! Everything here works with dense polynomials in finitely many variables
//! `x_1..x_r`, `y_1..y_s` and `t`, and shares nothing with the power-sum
//! kernel beyond the input series themselves. Plethysms are computed from
//! the definition: expand the inner argument into monomials, read each
//! monomial (with multiplicity) as a formal variable, and evaluate the
//! outer function on that list of variables.
//!
//! `t`-powers in the inner argument are read through `ℏ = −t`: the term
//! `c·t^k·x^α` is `c(−1)^k` copies of the variable `ℏ^k x^α`, and the
//! multiplicity must be a nonnegative integer.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::series::{BiSymSeries, Rational, SymSeries};

/// A monomial `x^a y^b t^k`, exponents of x and y concatenated.
pub type Exponents = (Vec<u32>, i32);

/// A polynomial in `r` x-variables, `s` y-variables and `t` (Laurent in
/// `t`), with exact rational coefficients.
#[derive(Clone, PartialEq, Eq)]
pub struct Poly {
    r: usize,
    s: usize,
    terms: BTreeMap<Exponents, Rational>,
}

impl Poly {
    pub fn zero(r: usize, s: usize) -> Self {
        Poly { r, s, terms: BTreeMap::new() }
    }

    pub fn one(r: usize, s: usize) -> Self {
        Self::monomial(r, s, vec![0; r + s], 0, Rational::one())
    }

    pub fn monomial(r: usize, s: usize, exps: Vec<u32>, t: i32, c: Rational) -> Self {
        assert_eq!(exps.len(), r + s, "exponent vector has the wrong length");
        let mut p = Self::zero(r, s);
        if !c.is_zero() {
            p.terms.insert((exps, t), c);
        }
        p
    }

    /// The variable `x_i` (0-based).
    pub fn x(r: usize, s: usize, i: usize) -> Self {
        let mut e = vec![0; r + s];
        e[i] = 1;
        Self::monomial(r, s, e, 0, Rational::one())
    }

    /// The variable `y_j` (0-based).
    pub fn y(r: usize, s: usize, j: usize) -> Self {
        let mut e = vec![0; r + s];
        e[r + j] = 1;
        Self::monomial(r, s, e, 0, Rational::one())
    }

    pub fn vars(&self) -> (usize, usize) {
        (self.r, self.s)
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Exponents, &Rational)> {
        self.terms.iter()
    }

    #[allow(clippy::len_without_is_empty)]
    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Coefficient of `x^a y^b t^k`.
    pub fn coeff(&self, exps: &[u32], t: i32) -> Rational {
        self.terms.get(&(exps.to_vec(), t)).cloned().unwrap_or_else(Rational::zero)
    }

    fn check_vars(&self, other: &Poly) {
        assert_eq!((self.r, self.s), (other.r, other.s), "polynomials in different variables");
    }

    fn insert(&mut self, key: Exponents, c: Rational) {
        let entry = self.terms.entry(key.clone()).or_insert_with(Rational::zero);
        *entry += c;
        if entry.is_zero() {
            self.terms.remove(&key);
        }
    }

    pub fn add(&self, other: &Poly) -> Poly {
        self.check_vars(other);
        let mut out = self.clone();
        for (k, c) in &other.terms {
            out.insert(k.clone(), c.clone());
        }
        out
    }

    pub fn sub(&self, other: &Poly) -> Poly {
        self.add(&other.scale(&-Rational::one()))
    }

    pub fn scale(&self, c: &Rational) -> Poly {
        let mut out = Poly::zero(self.r, self.s);
        if c.is_zero() {
            return out;
        }
        out.terms = self.terms.iter().map(|(k, v)| (k.clone(), v * c)).collect();
        out
    }

    pub fn mul(&self, other: &Poly) -> Poly {
        self.check_vars(other);
        let mut acc: BTreeMap<Exponents, Rational> = BTreeMap::new();
        for ((ea, ta), ca) in &self.terms {
            for ((eb, tb), cb) in &other.terms {
                let e: Vec<u32> = ea.iter().zip(eb).map(|(a, b)| a + b).collect();
                *acc.entry((e, ta + tb)).or_insert_with(Rational::zero) += ca * cb;
            }
        }
        acc.retain(|_, v| !v.is_zero());
        Poly { r: self.r, s: self.s, terms: acc }
    }

    pub fn pow(&self, n: u32) -> Poly {
        (0..n).fold(Poly::one(self.r, self.s), |acc, _| acc.mul(self))
    }

    /// Keep the terms whose total degree in x and y is at most `deg`.
    pub fn truncate_degree(&self, deg: u32) -> Poly {
        let mut out = self.clone();
        out.terms.retain(|(e, _), _| e.iter().sum::<u32>() <= deg);
        out
    }
}

impl fmt::Debug for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        let mut first = true;
        for ((e, t), c) in &self.terms {
            if !first {
                f.write_str(" + ")?;
            }
            first = false;
            write!(f, "{c}")?;
            for (i, &k) in e.iter().enumerate() {
                if k > 0 {
                    let (name, idx) = if i < self.r { ('x', i + 1) } else { ('y', i - self.r + 1) };
                    write!(f, "*{name}{idx}^{k}")?;
                }
            }
            if *t != 0 {
                write!(f, "*t^{t}")?;
            }
        }
        Ok(())
    }
}

/// A formal variable `ℏ^k · (monomial)` occurring `mult` times.
struct Variable {
    exps: Vec<u32>,
    hbar: i32,
    mult: BigInt,
}

/// Power sums over a list of formal variables, memoized by index.
struct PowerSums {
    r: usize,
    s: usize,
    vars: Vec<Variable>,
    cache: BTreeMap<u32, Poly>,
}

impl PowerSums {
    fn new(r: usize, s: usize, vars: Vec<Variable>) -> Self {
        PowerSums { r, s, vars, cache: BTreeMap::new() }
    }

    /// `Σ_v mult_v · (ℏ^k x^α)^n = Σ_v mult_v (−1)^{kn} t^{kn} x^{nα}`.
    fn get(&mut self, n: u32) -> &Poly {
        let (r, s) = (self.r, self.s);
        let vars = &self.vars;
        self.cache.entry(n).or_insert_with(|| {
            let mut out = Poly::zero(r, s);
            for v in vars {
                let t = v.hbar * n as i32;
                let mut c = Rational::from_integer(v.mult.clone());
                if t.is_odd() {
                    c = -c;
                }
                let e = v.exps.iter().map(|a| a * n).collect();
                out = out.add(&Poly::monomial(r, s, e, t, c));
            }
            out
        })
    }
}

/// `p_λ` over a power-sum table.
fn p_product(table: &mut PowerSums, parts: &[u32]) -> Poly {
    let mut out = Poly::one(table.r, table.s);
    for &n in parts {
        out = out.mul(table.get(n));
    }
    out
}

fn identity_vars(r: usize, s: usize, offset: usize, count: usize) -> Vec<Variable> {
    (0..count)
        .map(|i| {
            let mut exps = vec![0; r + s];
            exps[offset + i] = 1;
            Variable { exps, hbar: 0, mult: BigInt::one() }
        })
        .collect()
}

/// Evaluate `f̄` with `p_n(x) ↦ Σ_{z} z^n` and `p_n(y) ↦ Σ_{w} w^n`,
/// carrying `f̄`'s own `t`-coefficients along.
fn evaluate_on(f: &BiSymSeries, r: usize, s: usize, zs: Vec<Variable>, ws: Vec<Variable>) -> Poly {
    let mut px = PowerSums::new(r, s, zs);
    let mut py = PowerSums::new(r, s, ws);
    let mut out = Poly::zero(r, s);
    for (m, c) in f.terms() {
        let term = p_product(&mut px, m.x.parts()).mul(&p_product(&mut py, m.y.parts()));
        let shift = Poly::monomial(r, s, vec![0; r + s], m.t, c.clone());
        out = out.add(&term.mul(&shift));
    }
    out
}

/// Specialize to `r` x-variables and `s` y-variables:
/// `p_n(x) ↦ Σ_{i≤r} x_i^n`, `p_n(y) ↦ Σ_{j≤s} y_j^n`. Faithful on terms
/// of x-degree at most `r` and y-degree at most `s`.
pub fn eval_finite(f: &BiSymSeries, r: usize, s: usize) -> Poly {
    evaluate_on(f, r, s, identity_vars(r, s, 0, r), identity_vars(r, s, r, s))
}

/// Read a polynomial as a list of formal variables with multiplicities.
fn variables_of(g: &Poly, what: &str) -> Result<Vec<Variable>> {
    let mut out = Vec::new();
    for ((exps, t), c) in g.terms() {
        if exps.iter().all(|&e| e == 0) {
            return Err(Error::Precondition(format!(
                "{what} has a constant term; substitution needs infinitely many variables"
            )));
        }
        let mult = if t.is_odd() { -c } else { c.clone() };
        if !mult.is_integer() || mult.is_negative() {
            return Err(Error::Precondition(format!(
                "{what} has monomial coefficient {mult} in ℏ; the substitution route needs \
                 nonnegative integers"
            )));
        }
        out.push(Variable { exps: exps.clone(), hbar: *t, mult: mult.to_integer() });
    }
    Ok(out)
}

/// Plethysm `f ∘ g` from the definition, in `r` variables of `g`'s
/// alphabet: expand `g`, take its monomials as variables and evaluate `f`.
/// `f` is read as a function of its own (single) alphabet.
pub fn pleth_by_substitution(f: &SymSeries, g: &SymSeries, r: usize) -> Result<Poly> {
    let (gr, gs) = match g.alphabet() {
        crate::series::Alphabet::X => (r, 0),
        crate::series::Alphabet::Y => (0, r),
    };
    let gpoly = eval_finite(&g.embed(), gr, gs);
    let zs = variables_of(&gpoly, "the inner function")?;
    let fx = f.in_alphabet(crate::series::Alphabet::X).embed();
    Ok(evaluate_on(&fx, gr, gs, zs, Vec::new()))
}

/// Relative plethysm `f̄ ∘̄ (ḡ, g)` from the definition: the monomials of
/// `ḡ` (in `r` x- and `s` y-variables) become the x-variables of `f̄`, the
/// monomials of `g(y)` its y-variables.
pub fn relpleth_by_substitution(
    fbar: &BiSymSeries,
    gbar: &BiSymSeries,
    g: &SymSeries,
    r: usize,
    s: usize,
) -> Result<Poly> {
    let zs = variables_of(&eval_finite(gbar, r, s), "the first inner function")?;
    let gy = g.in_alphabet(crate::series::Alphabet::Y).embed();
    let ws = variables_of(&eval_finite(&gy, r, s), "the second inner function")?;
    Ok(evaluate_on(fbar, r, s, zs, ws))
}

/// Rank of a family of polynomials over `ℚ`, by Gaussian elimination on
/// their coefficient vectors.
pub fn rank(polys: &[Poly]) -> usize {
    let mut rows: Vec<BTreeMap<Exponents, Rational>> = polys.iter().map(|p| p.terms.clone()).collect();
    let mut rank = 0;
    let mut pivots: Vec<(Exponents, BTreeMap<Exponents, Rational>)> = Vec::new();
    for row in rows.iter_mut() {
        for (key, prow) in &pivots {
            if let Some(c) = row.get(key).cloned() {
                for (k, v) in prow {
                    let e = row.entry(k.clone()).or_insert_with(Rational::zero);
                    *e -= &c * v;
                }
                row.retain(|_, v| !v.is_zero());
            }
        }
        if let Some((key, c)) = row.iter().next().map(|(k, c)| (k.clone(), c.clone())) {
            let normalized = row.iter().map(|(k, v)| (k.clone(), v / &c)).collect();
            pivots.push((key, normalized));
            rank += 1;
        }
    }
    rank
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bases::{e_to_p, h_to_p};
    use crate::partitions::Partition;
    use crate::series::{rat, Alphabet, Truncation};

    fn q(n: i64) -> Rational {
        rat(n)
    }

    #[test]
    fn eval_examples() {
        let t = Truncation::degrees(4, 4);
        let p2 = BiSymSeries::power_sum(2, Alphabet::X, t);
        assert_eq!(eval_finite(&p2, 2, 0), Poly::x(2, 0, 0).pow(2).add(&Poly::x(2, 0, 1).pow(2)));
        let (x1, x2) = (Poly::x(2, 0, 0), Poly::x(2, 0, 1));
        let h2 = x1.pow(2).add(&x1.mul(&x2)).add(&x2.pow(2));
        assert_eq!(eval_finite(&h_to_p(2, t).embed(), 2, 0), h2);
        assert_eq!(eval_finite(&e_to_p(2, t).embed(), 2, 0), x1.mul(&x2));
    }

    #[test]
    fn substitution_examples() {
        let t = Truncation::degrees(4, 0);
        let p2 = SymSeries::from_terms(Alphabet::X, [(Partition::row(2), 0, q(1))], t);
        let h2 = h_to_p(2, t);
        // p_2 ∘ h_2 = h_2(x²)
        let lhs = pleth_by_substitution(&p2, &h2, 3).unwrap();
        let x2: Vec<Poly> = (0..3).map(|i| Poly::x(3, 0, i).pow(2)).collect();
        let mut expected = Poly::zero(3, 0);
        for i in 0..3 {
            for j in i..3 {
                expected = expected.add(&x2[i].mul(&x2[j]));
            }
        }
        assert_eq!(lhs, expected);
        let p1 = SymSeries::from_terms(Alphabet::X, [(Partition::row(1), 0, q(1))], t);
        assert_eq!(pleth_by_substitution(&h2, &p1, 3).unwrap(), eval_finite(&h2.embed(), 3, 0));
    }

    #[test]
    fn substitution_rejects_negative_coefficients() {
        let t = Truncation::degrees(2, 0);
        let g = SymSeries::from_terms(Alphabet::X, [(Partition::row(1), 0, q(-1))], t);
        assert!(pleth_by_substitution(&h_to_p(2, t), &g, 2).is_err());
    }

    #[test]
    fn relpleth_substitution_examples() {
        let t = Truncation::degrees(6, 6);
        let p2y = BiSymSeries::power_sum(2, Alphabet::Y, t);
        let p3 = SymSeries::from_terms(Alphabet::Y, [(Partition::row(3), 0, q(1))], t);
        let gbar = BiSymSeries::power_sum(1, Alphabet::X, t).mul(&BiSymSeries::power_sum(1, Alphabet::Y, t));
        let r = relpleth_by_substitution(&p2y, &gbar, &p3, 2, 2).unwrap();
        assert_eq!(r, eval_finite(&BiSymSeries::power_sum(6, Alphabet::Y, t), 2, 2));
        let p1x = BiSymSeries::power_sum(1, Alphabet::X, t);
        let zero = SymSeries::zero(Alphabet::Y, t);
        let r = relpleth_by_substitution(&p1x, &gbar, &zero, 2, 2).unwrap();
        assert_eq!(r, eval_finite(&gbar, 2, 2));
    }

    #[test]
    fn hbar_variables_follow_the_sign_rule() {
        // h_2 ∘ (ℏ p_1) = ℏ² h_2, and ℏ = −t
        let t = Truncation::degrees(2, 0).with_window(-2, 2);
        let hbar_p1 = SymSeries::from_terms(Alphabet::X, [(Partition::row(1), 1, q(-1))], t);
        let lhs = pleth_by_substitution(&h_to_p(2, t), &hbar_p1, 2).unwrap();
        let expected = eval_finite(&h_to_p(2, t).embed().shift_t(2), 2, 0);
        assert_eq!(lhs, expected);
    }

    #[test]
    fn power_sums_are_independent_at_enough_variables() {
        for d in 1..=4u32 {
            let t = Truncation::degrees(d, 0);
            let polys: Vec<Poly> = crate::partitions::partitions_of(d)
                .iter()
                .map(|l| eval_finite(&BiSymSeries::monomial(l.clone(), Partition::empty(), 0, q(1), t), d as usize, 0))
                .collect();
            assert_eq!(rank(&polys), polys.len());
        }
        // with too few variables p_1² and p_2 still differ, but e_2 collapses
        let t = Truncation::degrees(2, 0);
        assert!(eval_finite(&e_to_p(2, t).embed(), 1, 0).is_zero());
    }
}
