//! Truncated symmetric and bisymmetric series in the power-sum basis.
//!
//! Every series is a finite sum `Σ c · t^k · p_λ(x) p_μ(y)` with exact
//! rational coefficients. The formal variable `t` stands for `−ℏ`; all
//! formulas involving `ℏ` are rewritten in `t` exactly once, at the point
//! where they enter the crate (constructors in `characters`, the Adams
//! operations in `plethysm`, the regrading in `propcalc`), so downstream
//! code never juggles signs. A coefficient of `t^k` is the graded-trace
//! contribution of cohomological degree `k`.
//!
//! A [`Truncation`] bounds the x-degree, the y-degree and the window of
//! `t`-exponents that a series is known to be exact on. Binary operations
//! intersect truncations; reading a coefficient outside the truncation is
//! an error instead of a silent zero.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::partitions::Partition;

/// Exact rational coefficient type.
pub type Rational = BigRational;

pub(crate) fn rat(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

pub(crate) fn ratio(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

/// Degree bounds and `t`-window on which a series is exact.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Truncation {
    pub deg_x: u32,
    pub deg_y: u32,
    pub t_min: i32,
    pub t_max: i32,
}

impl Truncation {
    pub fn new(deg_x: u32, deg_y: u32, t_min: i32, t_max: i32) -> Result<Self> {
        if t_min > t_max {
            return Err(Error::InvalidTruncation(format!("empty t-window [{t_min}, {t_max}]")));
        }
        Ok(Truncation { deg_x, deg_y, t_min, t_max })
    }

    /// Degrees `(deg_x, deg_y)` with the window `[0, 0]`.
    pub fn degrees(deg_x: u32, deg_y: u32) -> Self {
        Truncation { deg_x, deg_y, t_min: 0, t_max: 0 }
    }

    pub fn with_window(self, t_min: i32, t_max: i32) -> Self {
        assert!(t_min <= t_max, "empty t-window");
        Truncation { t_min, t_max, ..self }
    }

    pub fn intersect(&self, other: &Truncation) -> Truncation {
        Truncation {
            deg_x: self.deg_x.min(other.deg_x),
            deg_y: self.deg_y.min(other.deg_y),
            t_min: self.t_min.max(other.t_min),
            // an empty intersection collapses to a one-point window with no room for terms
            t_max: self.t_max.min(other.t_max).max(self.t_min.max(other.t_min)),
        }
    }

    /// Exchanges the roles of the two alphabets.
    pub fn swapped(&self) -> Truncation {
        Truncation { deg_x: self.deg_y, deg_y: self.deg_x, ..*self }
    }

    pub fn deg(&self, alphabet: Alphabet) -> u32 {
        match alphabet {
            Alphabet::X => self.deg_x,
            Alphabet::Y => self.deg_y,
        }
    }

    pub fn contains(&self, m: &Monomial) -> bool {
        m.x.weight() <= self.deg_x && m.y.weight() <= self.deg_y && (self.t_min..=self.t_max).contains(&m.t)
    }

    pub fn contains_degrees(&self, dx: u32, dy: u32) -> bool {
        dx <= self.deg_x && dy <= self.deg_y
    }
}

impl fmt::Display for Truncation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "deg_x <= {}, deg_y <= {}, t in [{}, {}]", self.deg_x, self.deg_y, self.t_min, self.t_max)
    }
}

/// Which alphabet a one-alphabet series lives in.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Alphabet {
    X,
    Y,
}

impl Alphabet {
    pub fn other(self) -> Alphabet {
        match self {
            Alphabet::X => Alphabet::Y,
            Alphabet::Y => Alphabet::X,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Alphabet::X => "x",
            Alphabet::Y => "y",
        }
    }
}

/// The basis element `t^t · p_x(x) · p_y(y)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Monomial {
    pub x: Partition,
    pub y: Partition,
    pub t: i32,
}

impl Monomial {
    pub fn new(x: Partition, y: Partition, t: i32) -> Self {
        Monomial { x, y, t }
    }

    pub fn one() -> Self {
        Monomial::new(Partition::empty(), Partition::empty(), 0)
    }

    /// `(x-degree, y-degree)`.
    pub fn bidegree(&self) -> (u32, u32) {
        (self.x.weight(), self.y.weight())
    }

    pub fn total_degree(&self) -> u32 {
        self.x.weight() + self.y.weight()
    }

    pub fn is_constant(&self) -> bool {
        self.x.is_empty() && self.y.is_empty()
    }

    pub fn times(&self, other: &Monomial) -> Monomial {
        Monomial { x: self.x.union(&other.x), y: self.y.union(&other.y), t: self.t + other.t }
    }
}

/// Exact Laurent polynomial in `t` with rational coefficients.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct TCoeff(BTreeMap<i32, Rational>);

impl TCoeff {
    pub fn zero() -> Self {
        TCoeff(BTreeMap::new())
    }

    pub fn constant(c: Rational) -> Self {
        Self::monomial(0, c)
    }

    pub fn monomial(k: i32, c: Rational) -> Self {
        let mut m = BTreeMap::new();
        if !c.is_zero() {
            m.insert(k, c);
        }
        TCoeff(m)
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    /// The coefficient of `t^k`.
    pub fn get(&self, k: i32) -> Rational {
        self.0.get(&k).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn iter(&self) -> impl Iterator<Item = (i32, &Rational)> {
        self.0.iter().map(|(&k, c)| (k, c))
    }

    pub fn add_term(&mut self, k: i32, c: &Rational) {
        add_into(&mut self.0, k, c.clone());
    }

    /// Value at `t = value`, for integer substitutions such as `t = −1`.
    pub fn eval_at(&self, value: i64) -> Rational {
        self.0.iter().fold(Rational::zero(), |acc, (&k, c)| acc + c * pow_rational(&rat(value), k))
    }
}

fn pow_rational(base: &Rational, k: i32) -> Rational {
    if k >= 0 {
        num_traits::pow(base.clone(), k as usize)
    } else {
        num_traits::pow(base.recip(), (-k) as usize)
    }
}

impl Add<&TCoeff> for &TCoeff {
    type Output = TCoeff;
    fn add(self, rhs: &TCoeff) -> TCoeff {
        let mut out = self.clone();
        for (k, c) in rhs.iter() {
            out.add_term(k, c);
        }
        out
    }
}

impl Mul<&TCoeff> for &TCoeff {
    type Output = TCoeff;
    fn mul(self, rhs: &TCoeff) -> TCoeff {
        let mut out = TCoeff::zero();
        for (a, ca) in self.iter() {
            for (b, cb) in rhs.iter() {
                out.add_term(a + b, &(ca * cb));
            }
        }
        out
    }
}

impl fmt::Display for TCoeff {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return f.write_str("0");
        }
        let parts: Vec<String> = self
            .0
            .iter()
            .map(|(k, c)| match k {
                0 => format!("{c}"),
                1 => format!("{c}*t"),
                _ => format!("{c}*t^{k}"),
            })
            .collect();
        f.write_str(&parts.join(" + "))
    }
}

pub(crate) type Terms = BTreeMap<Monomial, Rational>;

fn add_into<K: Ord>(map: &mut BTreeMap<K, Rational>, key: K, c: Rational) {
    use std::collections::btree_map::Entry;
    if c.is_zero() {
        return;
    }
    match map.entry(key) {
        Entry::Vacant(v) => {
            v.insert(c);
        }
        Entry::Occupied(mut o) => {
            *o.get_mut() += c;
            if o.get().is_zero() {
                o.remove();
            }
        }
    }
}

/// Bounds used for intermediate products: a degree box and a `t` range.
/// The lower `t` bound is usually left open; see [`working_ceiling`].
#[derive(Clone, Copy, Debug)]
pub(crate) struct Bounds {
    pub deg_x: u32,
    pub deg_y: u32,
    pub t_lo: i32,
    pub t_hi: i32,
}

impl Bounds {
    pub fn exact(trunc: &Truncation) -> Self {
        Bounds { deg_x: trunc.deg_x, deg_y: trunc.deg_y, t_lo: trunc.t_min, t_hi: trunc.t_max }
    }

    /// Degree box of `trunc`, no lower `t` bound, upper bound `t_hi`.
    pub fn working(trunc: &Truncation, t_hi: i32) -> Self {
        Bounds { deg_x: trunc.deg_x, deg_y: trunc.deg_y, t_lo: i32::MIN, t_hi }
    }

    fn admits(&self, dx: u32, dy: u32, t: i32) -> bool {
        dx <= self.deg_x && dy <= self.deg_y && t >= self.t_lo && t <= self.t_hi
    }
}

/// Sparse product with bounds, accumulating in a hash map.
pub(crate) fn product(a: &Terms, b: &Terms, bounds: &Bounds) -> Terms {
    if a.is_empty() || b.is_empty() {
        return Terms::new();
    }
    let bs: Vec<(u32, u32, &Monomial, &Rational)> = b.iter().map(|(m, c)| (m.x.weight(), m.y.weight(), m, c)).collect();
    let mut acc: HashMap<Monomial, Rational> = HashMap::new();
    for (ma, ca) in a {
        let (ax, ay) = ma.bidegree();
        if ax > bounds.deg_x || ay > bounds.deg_y {
            continue;
        }
        for &(bx, by, mb, cb) in &bs {
            let t = ma.t + mb.t;
            if !bounds.admits(ax + bx, ay + by, t) {
                continue;
            }
            let key = ma.times(mb);
            let c = ca * cb;
            match acc.get_mut(&key) {
                Some(v) => *v += c,
                None => {
                    acc.insert(key, c);
                }
            }
        }
    }
    acc.into_iter().filter(|(_, c)| !c.is_zero()).collect()
}

/// Upper `t` bound that is safe for intermediate products of `inputs`
/// whose final result is truncated to `trunc`.
///
/// Non-constant terms may carry negative `t`-exponents; a factor of total
/// degree `w` with exponent `k < 0` can lower the exponent of a final
/// product by at most `⌈−k·D/w⌉` where `D` is the total degree budget.
/// Terms above `t_max` plus that slack can never return to the window.
/// Constant terms are required to carry positive exponents only.
pub(crate) fn working_ceiling<'a>(trunc: &Truncation, inputs: impl IntoIterator<Item = &'a BiSymSeries>) -> i32 {
    let budget = (trunc.deg_x + trunc.deg_y) as i64;
    let mut slack: i64 = 0;
    for s in inputs {
        for m in s.terms.keys() {
            let w = m.total_degree() as i64;
            if w > 0 && m.t < 0 {
                let k = -(m.t as i64);
                slack = slack.max((k * budget + w - 1) / w);
            }
        }
    }
    (trunc.t_max as i64 + slack).min(i32::MAX as i64 / 2) as i32
}

/// A truncated series in the tensor power-sum basis
/// `Σ c_{λ,μ}(t) p_λ(x) p_μ(y)`.
#[derive(Clone, PartialEq, Eq)]
pub struct BiSymSeries {
    pub(crate) terms: Terms,
    pub(crate) trunc: Truncation,
}

impl fmt::Debug for BiSymSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "BiSymSeries[{}]{{", self.trunc)?;
        for (i, (m, c)) in self.terms.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{c}*t^{}*p{:?}(x)p{:?}(y)", m.t, m.x, m.y)?;
        }
        f.write_str("}")
    }
}

impl BiSymSeries {
    pub fn zero(trunc: Truncation) -> Self {
        BiSymSeries { terms: Terms::new(), trunc }
    }

    pub fn one(trunc: Truncation) -> Self {
        Self::constant(rat(1), trunc)
    }

    pub fn constant(c: Rational, trunc: Truncation) -> Self {
        Self::monomial(Partition::empty(), Partition::empty(), 0, c, trunc)
    }

    /// `c · t^k · p_λ(x) p_μ(y)`; empty if outside the truncation.
    pub fn monomial(x: Partition, y: Partition, t: i32, c: Rational, trunc: Truncation) -> Self {
        Self::from_terms([(Monomial::new(x, y, t), c)], trunc)
    }

    /// `p_n` in the given alphabet.
    pub fn power_sum(n: u32, alphabet: Alphabet, trunc: Truncation) -> Self {
        let lam = Partition::row(n);
        match alphabet {
            Alphabet::X => Self::monomial(lam, Partition::empty(), 0, rat(1), trunc),
            Alphabet::Y => Self::monomial(Partition::empty(), lam, 0, rat(1), trunc),
        }
    }

    /// `t^k` (recall `t = −ℏ`).
    pub fn t_power(k: i32, trunc: Truncation) -> Self {
        Self::monomial(Partition::empty(), Partition::empty(), k, rat(1), trunc)
    }

    /// Sums the given terms, dropping those outside the truncation.
    pub fn from_terms(terms: impl IntoIterator<Item = (Monomial, Rational)>, trunc: Truncation) -> Self {
        let mut out = Terms::new();
        for (m, c) in terms {
            if trunc.contains(&m) {
                add_into(&mut out, m, c);
            }
        }
        BiSymSeries { terms: out, trunc }
    }

    pub(crate) fn from_raw(terms: Terms, trunc: Truncation) -> Self {
        let mut s = BiSymSeries { terms, trunc };
        s.terms.retain(|m, c| trunc.contains(m) && !c.is_zero());
        s
    }

    pub fn truncation(&self) -> Truncation {
        self.trunc
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &Rational)> {
        self.terms.iter()
    }

    #[allow(clippy::len_without_is_empty)]
    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// The coefficient of `t^k p_λ(x) p_μ(y)`. Errors outside the truncation.
    pub fn coeff(&self, lambda: &Partition, mu: &Partition, k: i32) -> Result<Rational> {
        let m = Monomial::new(lambda.clone(), mu.clone(), k);
        if !self.trunc.contains(&m) {
            return Err(Error::OutOfTruncation {
                what: format!("p{lambda:?}(x) p{mu:?}(y) t^{k}"),
                trunc: self.trunc.to_string(),
            });
        }
        Ok(self.terms.get(&m).cloned().unwrap_or_else(Rational::zero))
    }

    /// The full `t`-coefficient of `p_λ(x) p_μ(y)`.
    pub fn coefficient(&self, lambda: &Partition, mu: &Partition) -> Result<TCoeff> {
        if lambda.weight() > self.trunc.deg_x || mu.weight() > self.trunc.deg_y {
            return Err(Error::OutOfTruncation {
                what: format!("p{lambda:?}(x) p{mu:?}(y)"),
                trunc: self.trunc.to_string(),
            });
        }
        let lo = Monomial::new(lambda.clone(), mu.clone(), i32::MIN);
        let hi = Monomial::new(lambda.clone(), mu.clone(), i32::MAX);
        let mut out = TCoeff::zero();
        for (m, c) in self.terms.range(lo..=hi) {
            out.add_term(m.t, c);
        }
        Ok(out)
    }

    /// Restricts to a smaller truncation (intersection with the current one).
    pub fn truncate_to(&self, trunc: &Truncation) -> Self {
        let t = self.trunc.intersect(trunc);
        Self::from_raw(self.terms.clone(), t)
    }

    /// Replaces the truncation, dropping terms outside it. Enlarging the
    /// truncation declares the series exact on the larger range; this is
    /// only meaningful for polynomials known in full.
    pub fn with_truncation(&self, trunc: Truncation) -> Self {
        Self::from_raw(self.terms.clone(), trunc)
    }

    /// Keeps the terms satisfying the predicate.
    pub fn filter(&self, mut keep: impl FnMut(&Monomial) -> bool) -> Self {
        let terms = self.terms.iter().filter(|(m, _)| keep(m)).map(|(m, c)| (m.clone(), c.clone())).collect();
        BiSymSeries { terms, trunc: self.trunc }
    }

    /// Applies a term-wise map of monomials with a rational factor. The map
    /// must be injective or the caller must accept accumulation.
    pub(crate) fn map_terms(
        &self,
        trunc: Truncation,
        mut f: impl FnMut(&Monomial, &Rational) -> Option<(Monomial, Rational)>,
    ) -> Self {
        Self::from_terms(self.terms.iter().filter_map(|(m, c)| f(m, c)), trunc)
    }

    pub fn scale(&self, c: &Rational) -> Self {
        if c.is_zero() {
            return Self::zero(self.trunc);
        }
        BiSymSeries { terms: self.terms.iter().map(|(m, v)| (m.clone(), v * c)).collect(), trunc: self.trunc }
    }

    /// Multiplies by `t^k`, dropping terms leaving the window.
    pub fn shift_t(&self, k: i32) -> Self {
        self.map_terms(self.trunc, |m, c| Some((Monomial::new(m.x.clone(), m.y.clone(), m.t + k), c.clone())))
    }

    /// Exchanges the two alphabets.
    pub fn swap(&self) -> Self {
        self.map_terms(self.trunc.swapped(), |m, c| Some((Monomial::new(m.y.clone(), m.x.clone(), m.t), c.clone())))
    }

    pub fn add(&self, other: &Self) -> Self {
        let trunc = self.trunc.intersect(&other.trunc);
        let mut terms = Terms::new();
        for (m, c) in self.terms.iter().chain(other.terms.iter()) {
            if trunc.contains(m) {
                add_into(&mut terms, m.clone(), c.clone());
            }
        }
        BiSymSeries { terms, trunc }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Self {
        BiSymSeries { terms: self.terms.iter().map(|(m, c)| (m.clone(), -c)).collect(), trunc: self.trunc }
    }

    /// Product, truncated to the intersection of the truncations.
    pub fn mul(&self, other: &Self) -> Self {
        let trunc = self.trunc.intersect(&other.trunc);
        BiSymSeries { terms: product(&self.terms, &other.terms, &Bounds::exact(&trunc)), trunc }
    }

    /// Product with an explicit result truncation.
    pub fn mul_into(&self, other: &Self, trunc: &Truncation) -> Self {
        BiSymSeries { terms: product(&self.terms, &other.terms, &Bounds::exact(trunc)), trunc: *trunc }
    }

    pub fn pow(&self, n: u32) -> Self {
        let ceiling = working_ceiling(&self.trunc, [self]);
        let bounds = Bounds::working(&self.trunc, ceiling);
        let mut acc = BiSymSeries::one(self.trunc).terms;
        for _ in 0..n {
            acc = product(&acc, &self.terms, &bounds);
        }
        Self::from_raw(acc, self.trunc)
    }

    /// Terms of bidegree `(0, 0)`.
    pub fn constant_part(&self) -> Self {
        self.filter(Monomial::is_constant)
    }

    /// True if no term involves the x-alphabet.
    pub fn is_y_only(&self) -> bool {
        self.terms.keys().all(|m| m.x.is_empty())
    }

    /// True if no term involves the y-alphabet.
    pub fn is_x_only(&self) -> bool {
        self.terms.keys().all(|m| m.y.is_empty())
    }

    /// Largest total degree present.
    pub fn max_total_degree(&self) -> u32 {
        self.terms.keys().map(Monomial::total_degree).max().unwrap_or(0)
    }

    pub fn min_t(&self) -> Option<i32> {
        self.terms.keys().map(|m| m.t).min()
    }

    pub fn max_t(&self) -> Option<i32> {
        self.terms.keys().map(|m| m.t).max()
    }

    /// Checks that the bidegree-(0,0) part has only positive `t`-exponents.
    pub(crate) fn check_vanishing_constant(&self, op: &str) -> Result<()> {
        if let Some((m, _)) = self.terms.iter().find(|(m, _)| m.is_constant() && m.t <= 0) {
            return Err(Error::Precondition(format!(
                "{op}: constant term must be concentrated in positive t-degree, found t^{}",
                m.t
            )));
        }
        Ok(())
    }

    /// Ordinary exponential `exp(s)` (including the constant 1).
    ///
    /// Requires the constant part of `s` to lie in positive `t`-degree.
    pub fn exp(&self) -> Result<Self> {
        self.check_vanishing_constant("exp")?;
        let ceiling = working_ceiling(&self.trunc, [self]);
        Ok(Self::from_raw(exp_terms(&self.terms, &self.trunc, ceiling), self.trunc))
    }

    /// Ordinary logarithm `log(1 + s)`.
    ///
    /// Requires the constant part of `s` to lie in positive `t`-degree.
    pub fn log1p(&self) -> Result<Self> {
        self.check_vanishing_constant("log")?;
        let ceiling = working_ceiling(&self.trunc, [self]);
        Ok(Self::from_raw(log1p_terms(&self.terms, &self.trunc, ceiling), self.trunc))
    }

    /// Canonical JSON form.
    pub fn to_json(&self) -> serde_json::Value {
        let doc = SeriesDoc {
            terms: self
                .terms
                .iter()
                .map(|(m, c)| TermDoc { x: m.x.clone(), y: m.y.clone(), t: m.t, c: c.to_string() })
                .collect(),
            trunc: self.trunc,
        };
        serde_json::to_value(doc).expect("series serialization cannot fail")
    }

    pub fn from_json(value: &serde_json::Value) -> Result<Self> {
        let doc: SeriesDoc = serde_json::from_value(value.clone()).map_err(|e| Error::Format(e.to_string()))?;
        let mut terms = Vec::with_capacity(doc.terms.len());
        for t in doc.terms {
            let c: Rational = t.c.parse().map_err(|_| Error::Format(format!("bad rational {:?}", t.c)))?;
            terms.push((Monomial::new(t.x, t.y, t.t), c));
        }
        Ok(Self::from_terms(terms, doc.trunc))
    }
}

/// Splits terms into homogeneous components by total degree `0..=budget`.
fn graded_components(terms: &Terms, budget: u32) -> Vec<Terms> {
    let mut graded: Vec<Terms> = vec![Terms::new(); budget as usize + 1];
    for (m, c) in terms {
        let w = m.total_degree();
        if w <= budget {
            graded[w as usize].insert(m.clone(), c.clone());
        }
    }
    graded
}

fn sum_parts(parts: Vec<Terms>) -> Terms {
    let mut total = Terms::new();
    for part in parts {
        for (k, c) in part {
            add_into(&mut total, k, c);
        }
    }
    total
}

fn scaled(terms: Terms, c: &Rational) -> Terms {
    terms.into_iter().map(|(k, v)| (k, v * c)).collect()
}

/// `exp(s)` on raw terms, products bounded by the degree box of `trunc`
/// and by `t <= ceiling`. The constant part of `s` must have positive
/// `t`-exponents. The result is not truncated to the window.
pub(crate) fn exp_terms(s: &Terms, trunc: &Truncation, ceiling: i32) -> Terms {
    let bounds = Bounds::working(trunc, ceiling);
    let budget = trunc.deg_x + trunc.deg_y;
    let graded = graded_components(s, budget);
    // E_m = (1/m) Σ_j j S_j E_{m−j}
    let mut e: Vec<Terms> = vec![BiSymSeries::one(*trunc).terms];
    for m in 1..=budget as usize {
        let mut acc = Terms::new();
        for j in 1..=m {
            if graded[j].is_empty() || e[m - j].is_empty() {
                continue;
            }
            let factor = rat(j as i64);
            for (k, c) in product(&graded[j], &e[m - j], &bounds) {
                add_into(&mut acc, k, c * &factor);
            }
        }
        e.push(scaled(acc, &ratio(1, m as i64)));
    }
    let mut total = sum_parts(e);
    let constant = &graded[0];
    if !constant.is_empty() {
        let min_t = total.keys().map(|m| m.t).min().unwrap_or(0).min(0);
        let cbounds = Bounds::working(trunc, ceiling.saturating_sub(min_t));
        let mut power = BiSymSeries::one(*trunc).terms;
        let mut exp_c = power.clone();
        let mut k = 1i64;
        loop {
            power = product(&power, constant, &cbounds);
            if power.is_empty() {
                break;
            }
            power = scaled(power, &ratio(1, k));
            for (m, c) in &power {
                add_into(&mut exp_c, m.clone(), c.clone());
            }
            k += 1;
        }
        total = product(&exp_c, &total, &bounds);
    }
    total
}

/// `log(1 + u)` on raw terms; same conventions as [`exp_terms`].
pub(crate) fn log1p_terms(u: &Terms, trunc: &Truncation, ceiling: i32) -> Terms {
    let bounds = Bounds::working(trunc, ceiling);
    let budget = trunc.deg_x + trunc.deg_y;
    let graded = graded_components(u, budget);
    if graded[0].is_empty() {
        // (1 + u) N L = N u, with N the total-degree operator
        let mut l: Vec<Terms> = vec![Terms::new()];
        for m in 1..=budget as usize {
            let mut acc: Terms = graded[m].clone();
            let mut corr = Terms::new();
            for j in 1..m {
                if l[j].is_empty() || graded[m - j].is_empty() {
                    continue;
                }
                let factor = rat(j as i64);
                for (k, c) in product(&l[j], &graded[m - j], &bounds) {
                    add_into(&mut corr, k, c * &factor);
                }
            }
            for (k, c) in scaled(corr, &ratio(-1, m as i64)) {
                add_into(&mut acc, k, c);
            }
            l.push(acc);
        }
        return sum_parts(l);
    }
    let mut total = Terms::new();
    let mut power = BiSymSeries::one(*trunc).terms;
    let mut k = 1i64;
    loop {
        power = product(&power, u, &bounds);
        if power.is_empty() {
            break;
        }
        let coef = ratio(if k % 2 == 1 { 1 } else { -1 }, k);
        for (m, c) in &power {
            add_into(&mut total, m.clone(), c * &coef);
        }
        k += 1;
    }
    total
}

pub(crate) fn add_terms(acc: &mut Terms, other: &Terms, factor: &Rational) {
    for (m, c) in other {
        add_into(acc, m.clone(), c * factor);
    }
}

#[derive(Serialize, Deserialize)]
struct SeriesDoc {
    terms: Vec<TermDoc>,
    trunc: Truncation,
}

#[derive(Serialize, Deserialize)]
struct TermDoc {
    x: Partition,
    y: Partition,
    t: i32,
    c: String,
}

impl Add for &BiSymSeries {
    type Output = BiSymSeries;
    fn add(self, rhs: &BiSymSeries) -> BiSymSeries {
        BiSymSeries::add(self, rhs)
    }
}

impl Sub for &BiSymSeries {
    type Output = BiSymSeries;
    fn sub(self, rhs: &BiSymSeries) -> BiSymSeries {
        BiSymSeries::sub(self, rhs)
    }
}

impl Mul for &BiSymSeries {
    type Output = BiSymSeries;
    fn mul(self, rhs: &BiSymSeries) -> BiSymSeries {
        BiSymSeries::mul(self, rhs)
    }
}

impl Neg for &BiSymSeries {
    type Output = BiSymSeries;
    fn neg(self) -> BiSymSeries {
        BiSymSeries::neg(self)
    }
}

/// A truncated one-alphabet series `Σ c_λ(t) p_λ`, tagged with the
/// alphabet it lives in. Stored as a [`BiSymSeries`] supported on one side.
#[derive(Clone, PartialEq, Eq)]
pub struct SymSeries {
    alphabet: Alphabet,
    inner: BiSymSeries,
}

impl fmt::Debug for SymSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "SymSeries<{}>{:?}", self.alphabet.name(), self.inner)
    }
}

impl SymSeries {
    pub fn zero(alphabet: Alphabet, trunc: Truncation) -> Self {
        SymSeries { alphabet, inner: BiSymSeries::zero(trunc) }
    }

    /// Builds from `(λ, t-exponent, coefficient)` triples.
    pub fn from_terms(
        alphabet: Alphabet,
        terms: impl IntoIterator<Item = (Partition, i32, Rational)>,
        trunc: Truncation,
    ) -> Self {
        let inner =
            BiSymSeries::from_terms(terms.into_iter().map(|(lam, t, c)| (Self::key(alphabet, lam, t), c)), trunc);
        SymSeries { alphabet, inner }
    }

    fn key(alphabet: Alphabet, lam: Partition, t: i32) -> Monomial {
        match alphabet {
            Alphabet::X => Monomial::new(lam, Partition::empty(), t),
            Alphabet::Y => Monomial::new(Partition::empty(), lam, t),
        }
    }

    /// Views a bisymmetric series supported on one alphabet as a
    /// one-alphabet series. Errors if the other alphabet occurs.
    pub fn from_bisym(alphabet: Alphabet, f: &BiSymSeries) -> Result<Self> {
        let ok = match alphabet {
            Alphabet::X => f.is_x_only(),
            Alphabet::Y => f.is_y_only(),
        };
        if !ok {
            return Err(Error::Precondition(format!(
                "series involves the {} alphabet; expected a series in {} only",
                alphabet.other().name(),
                alphabet.name()
            )));
        }
        Ok(SymSeries { alphabet, inner: f.clone() })
    }

    pub fn alphabet(&self) -> Alphabet {
        self.alphabet
    }

    pub fn truncation(&self) -> Truncation {
        self.inner.trunc
    }

    /// Degree bound in this series' alphabet.
    pub fn degree_bound(&self) -> u32 {
        self.inner.trunc.deg(self.alphabet)
    }

    /// Iterates `(λ, t-exponent, coefficient)`.
    pub fn terms(&self) -> impl Iterator<Item = (&Partition, i32, &Rational)> {
        let a = self.alphabet;
        self.inner.terms.iter().map(move |(m, c)| {
            let lam = match a {
                Alphabet::X => &m.x,
                Alphabet::Y => &m.y,
            };
            (lam, m.t, c)
        })
    }

    pub fn is_zero(&self) -> bool {
        self.inner.is_zero()
    }

    pub fn coeff(&self, lambda: &Partition, k: i32) -> Result<Rational> {
        match self.alphabet {
            Alphabet::X => self.inner.coeff(lambda, &Partition::empty(), k),
            Alphabet::Y => self.inner.coeff(&Partition::empty(), lambda, k),
        }
    }

    /// `f(x) = f ⊗ 1` or `f(y) = 1 ⊗ f` according to the alphabet tag.
    pub fn embed(&self) -> BiSymSeries {
        self.inner.clone()
    }

    pub fn as_bisym(&self) -> &BiSymSeries {
        &self.inner
    }

    /// The same series placed in another alphabet.
    pub fn in_alphabet(&self, alphabet: Alphabet) -> Self {
        if alphabet == self.alphabet {
            return self.clone();
        }
        SymSeries { alphabet, inner: self.inner.swap() }
    }

    pub fn truncate_to(&self, trunc: &Truncation) -> Self {
        SymSeries { alphabet: self.alphabet, inner: self.inner.truncate_to(trunc) }
    }

    pub fn with_truncation(&self, trunc: Truncation) -> Self {
        SymSeries { alphabet: self.alphabet, inner: self.inner.with_truncation(trunc) }
    }

    fn lift(&self, inner: BiSymSeries) -> Self {
        SymSeries { alphabet: self.alphabet, inner }
    }

    fn same_alphabet(&self, other: &Self) -> Self {
        other.in_alphabet(self.alphabet)
    }

    pub fn add(&self, other: &Self) -> Self {
        self.lift(self.inner.add(&self.same_alphabet(other).inner))
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.lift(self.inner.sub(&self.same_alphabet(other).inner))
    }

    pub fn mul(&self, other: &Self) -> Self {
        self.lift(self.inner.mul(&self.same_alphabet(other).inner))
    }

    pub fn scale(&self, c: &Rational) -> Self {
        self.lift(self.inner.scale(c))
    }

    pub fn neg(&self) -> Self {
        self.lift(self.inner.neg())
    }

    pub fn pow(&self, n: u32) -> Self {
        self.lift(self.inner.pow(n))
    }

    pub fn exp(&self) -> Result<Self> {
        Ok(self.lift(self.inner.exp()?))
    }

    pub fn log1p(&self) -> Result<Self> {
        Ok(self.lift(self.inner.log1p()?))
    }

    /// Terms of degree exactly `n` (in this alphabet).
    pub fn degree_part(&self, n: u32) -> Self {
        let a = self.alphabet;
        self.lift(self.inner.filter(|m| match a {
            Alphabet::X => m.x.weight() == n,
            Alphabet::Y => m.y.weight() == n,
        }))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(parts: &[u32]) -> Partition {
        Partition::from_parts(parts)
    }

    fn tr() -> Truncation {
        Truncation::new(4, 4, -4, 4).unwrap()
    }

    fn px(parts: &[u32]) -> BiSymSeries {
        BiSymSeries::monomial(p(parts), Partition::empty(), 0, rat(1), tr())
    }

    #[test]
    fn addition_examples() {
        let a = px(&[1]);
        assert_eq!(a.add(&a).coeff(&p(&[1]), &Partition::empty(), 0).unwrap(), rat(2));
        assert_eq!(a.add(&BiSymSeries::zero(tr())), a);
        assert!(px(&[2]).sub(&px(&[2])).is_zero());
    }

    #[test]
    fn multiplication_examples() {
        let e = Partition::empty();
        assert_eq!(px(&[1]).mul(&px(&[1])), px(&[1, 1]));
        let py1 = BiSymSeries::power_sum(1, Alphabet::Y, tr());
        let prod = px(&[2]).mul(&py1);
        assert_eq!(prod.coeff(&p(&[2]), &p(&[1]), 0).unwrap(), rat(1));
        let a = BiSymSeries::monomial(p(&[1]), e.clone(), 1, rat(1), tr());
        let b = BiSymSeries::monomial(e.clone(), p(&[1]), -1, rat(1), tr());
        let ab = a.mul(&b);
        assert_eq!(ab.len(), 1);
        assert_eq!(ab.coeff(&p(&[1]), &p(&[1]), 0).unwrap(), rat(1));
    }

    #[test]
    fn coefficient_queries() {
        let e = Partition::empty();
        assert_eq!(px(&[2]).coeff(&p(&[2]), &e, 0).unwrap(), rat(1));
        assert_eq!(px(&[2]).coeff(&p(&[1, 1]), &e, 0).unwrap(), rat(0));
        assert!(px(&[2]).coeff(&p(&[5]), &e, 0).is_err());
        assert!(px(&[2]).coeff(&p(&[2]), &e, 9).is_err());
    }

    #[test]
    fn embedding() {
        let f = SymSeries::from_terms(Alphabet::X, [(p(&[3]), 0, rat(1))], tr());
        assert_eq!(f.embed().terms().next().unwrap().0, &Monomial::new(p(&[3]), Partition::empty(), 0));
        let g = f.in_alphabet(Alphabet::Y);
        assert_eq!(g.embed().terms().next().unwrap().0, &Monomial::new(Partition::empty(), p(&[3]), 0));
        assert!(SymSeries::zero(Alphabet::X, tr()).embed().is_zero());
    }

    #[test]
    fn exp_log_inverse() {
        let f = px(&[1]).add(&px(&[2]).scale(&ratio(1, 2)));
        let e = f.exp().unwrap();
        // exp(p1 + p2/2) = Σ h_n; degree-2 part is (p11 + p2)/2
        assert_eq!(e.coeff(&p(&[1, 1]), &Partition::empty(), 0).unwrap(), ratio(1, 2));
        let l = e.sub(&BiSymSeries::one(tr())).log1p().unwrap();
        assert_eq!(l, f);
    }

    #[test]
    fn exp_with_t_constant() {
        let trunc = Truncation::new(2, 0, 0, 3).unwrap();
        let c = BiSymSeries::t_power(1, trunc);
        let e = c.exp().unwrap();
        assert_eq!(e.coeff(&Partition::empty(), &Partition::empty(), 3).unwrap(), ratio(1, 6));
        let back = e.sub(&BiSymSeries::one(trunc)).log1p().unwrap();
        assert_eq!(back, c);
    }

    #[test]
    fn exp_rejects_bad_constant() {
        assert!(BiSymSeries::one(tr()).exp().is_err());
    }

    #[test]
    fn json_round_trip() {
        let f = px(&[2, 1]).scale(&ratio(-3, 2)).add(&BiSymSeries::t_power(-1, tr()));
        let back = BiSymSeries::from_json(&f.to_json()).unwrap();
        assert_eq!(back, f);
    }

    #[test]
    fn laurent_window_products_are_exact() {
        // t^{-2} p1(x) * t^{3} p1(y) lands at t^1 even though t^3 is near the edge
        let trunc = Truncation::new(2, 2, -2, 3).unwrap();
        let a = BiSymSeries::monomial(p(&[1]), Partition::empty(), -2, rat(1), trunc);
        let b = BiSymSeries::monomial(Partition::empty(), p(&[1]), 3, rat(1), trunc);
        assert_eq!(a.mul(&b).coeff(&p(&[1]), &p(&[1]), 1).unwrap(), rat(1));
    }
}
