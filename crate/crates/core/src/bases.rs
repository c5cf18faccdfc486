//! Conversions between the power-sum basis and the `h`, `e` and Schur
//! bases, symmetric-group characters, the Hall inner product and the
//! adjoint (skewing) operators.
//!
//! Characters `χ^λ(μ)` are computed by the Murnaghan–Nakayama rule. Whole
//! character tables are built bottom-up (removing a rim hook of length `μ_1`
//! reduces to the table of `S_{n−μ_1}`) and cached per degree behind a
//! read-write lock, so concurrent callers share the work.

use std::collections::HashMap;
use std::sync::{Arc, OnceLock, RwLock};

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::partitions::{partitions_of, z_of, Partition};
use crate::series::{rat, Alphabet, BiSymSeries, Monomial, Rational, SymSeries, TCoeff, Truncation};

/// The character table of `S_n`, rows indexed by irreducibles `λ` and
/// columns by cycle types `μ`, both in canonical order.
#[derive(Debug)]
pub struct CharacterTable {
    degree: u32,
    partitions: Vec<Partition>,
    index: HashMap<Partition, usize>,
    values: Vec<i64>,
}

impl CharacterTable {
    pub fn degree(&self) -> u32 {
        self.degree
    }

    pub fn partitions(&self) -> &[Partition] {
        &self.partitions
    }

    pub fn index_of(&self, lambda: &Partition) -> Option<usize> {
        self.index.get(lambda).copied()
    }

    /// `χ^{λ_i}(μ_j)` by canonical indices.
    pub fn value(&self, i: usize, j: usize) -> i64 {
        self.values[i * self.partitions.len() + j]
    }

    fn build(n: u32) -> CharacterTable {
        let partitions = partitions_of(n);
        let index: HashMap<Partition, usize> = partitions.iter().cloned().enumerate().map(|(i, p)| (p, i)).collect();
        let size = partitions.len();
        let mut values = vec![0i64; size * size];
        if n == 0 {
            values[0] = 1;
        } else {
            for (j, mu) in partitions.iter().enumerate() {
                let (k, rest) = mu.split_first().expect("nonempty for n > 0");
                let sub = character_table(n - k);
                let rest_idx = sub.index_of(&rest).expect("rest is a partition of n - k");
                for (i, lambda) in partitions.iter().enumerate() {
                    let mut acc: i64 = 0;
                    for (sign, smaller) in remove_rim_hooks(lambda, k) {
                        let v = sub.value(sub.index_of(&smaller).expect("valid"), rest_idx);
                        acc = acc.checked_add(sign * v).expect("character value overflows i64");
                    }
                    values[i * size + j] = acc;
                }
            }
        }
        CharacterTable { degree: n, partitions, index, values }
    }
}

/// All ways of removing a rim hook of length `k` from `λ`, with the sign
/// `(−1)^{height}`. Uses the beta-set (abacus) description: a rim hook of
/// length `k` is a bead moved from position `b` to a free position `b − k`,
/// and its height is the number of beads jumped over.
fn remove_rim_hooks(lambda: &Partition, k: u32) -> Vec<(i64, Partition)> {
    let l = lambda.len();
    let beta: Vec<i64> = lambda.parts().iter().enumerate().map(|(i, &p)| p as i64 + (l - 1 - i) as i64).collect();
    let k = k as i64;
    let mut out = Vec::new();
    for (idx, &b) in beta.iter().enumerate() {
        let target = b - k;
        if target < 0 || beta.contains(&target) {
            continue;
        }
        let jumped = beta.iter().filter(|&&c| c > target && c < b).count();
        let sign = if jumped % 2 == 0 { 1 } else { -1 };
        let mut new_beta = beta.clone();
        new_beta[idx] = target;
        new_beta.sort_unstable_by(|a, b| b.cmp(a));
        let parts: Vec<u32> =
            new_beta.iter().enumerate().map(|(i, &c)| (c - (l - 1 - i) as i64) as u32).filter(|&p| p > 0).collect();
        out.push((sign, Partition::from_parts(&parts)));
    }
    out
}

fn table_cache() -> &'static RwLock<HashMap<u32, Arc<CharacterTable>>> {
    static CACHE: OnceLock<RwLock<HashMap<u32, Arc<CharacterTable>>>> = OnceLock::new();
    CACHE.get_or_init(|| RwLock::new(HashMap::new()))
}

/// The (memoized) character table of `S_n`.
pub fn character_table(n: u32) -> Arc<CharacterTable> {
    if let Some(t) = table_cache().read().expect("cache lock").get(&n) {
        return Arc::clone(t);
    }
    // Built without holding the lock; a concurrent builder produces the
    // same table and the first insert wins.
    let table = Arc::new(CharacterTable::build(n));
    let mut cache = table_cache().write().expect("cache lock");
    Arc::clone(cache.entry(n).or_insert(table))
}

/// `χ^λ(μ)`, the irreducible character `λ` on the class of cycle type `μ`.
pub fn char_value(lambda: &Partition, mu: &Partition) -> Result<i64> {
    if lambda.weight() != mu.weight() {
        return Err(Error::WeightMismatch(lambda.to_string(), mu.to_string()));
    }
    let table = character_table(lambda.weight());
    let i = table.index_of(lambda).expect("partition of n");
    let j = table.index_of(mu).expect("partition of n");
    Ok(table.value(i, j))
}

fn inv_z(mu: &Partition) -> Rational {
    Rational::new(BigInt::one(), BigInt::from(z_of(mu)))
}

/// `s_λ = Σ_μ z_μ^{−1} χ^λ(μ) p_μ`, in the x-alphabet.
pub fn schur_to_p(lambda: &Partition, trunc: Truncation) -> SymSeries {
    let table = character_table(lambda.weight());
    let i = table.index_of(lambda).expect("partition of n");
    let terms = table.partitions().iter().enumerate().filter_map(|(j, mu)| {
        let v = table.value(i, j);
        (v != 0).then(|| (mu.clone(), 0, inv_z(mu) * rat(v)))
    });
    SymSeries::from_terms(Alphabet::X, terms.collect::<Vec<_>>(), trunc)
}

/// `h_n = Σ_{μ ⊢ n} z_μ^{−1} p_μ`, in the x-alphabet.
pub fn h_to_p(n: u32, trunc: Truncation) -> SymSeries {
    let terms: Vec<_> = partitions_of(n)
        .into_iter()
        .map(|mu| {
            let c = inv_z(&mu);
            (mu, 0, c)
        })
        .collect();
    SymSeries::from_terms(Alphabet::X, terms, trunc)
}

/// `e_n = Σ_{μ ⊢ n} ε_μ z_μ^{−1} p_μ`, in the x-alphabet.
pub fn e_to_p(n: u32, trunc: Truncation) -> SymSeries {
    let terms: Vec<_> = partitions_of(n)
        .into_iter()
        .map(|mu| {
            let c = inv_z(&mu) * rat(mu.sign() as i64);
            (mu, 0, c)
        })
        .collect();
    SymSeries::from_terms(Alphabet::X, terms, trunc)
}

/// Product `p_λ` as a one-alphabet series in x.
pub fn p_to_series(lambda: &Partition, trunc: Truncation) -> SymSeries {
    SymSeries::from_terms(Alphabet::X, [(lambda.clone(), 0, rat(1))], trunc)
}

/// One row of a Schur-pair expansion: the coefficient of
/// `t^{hbar_deg} s_λ(x) s_μ(y)`.
///
/// Since `t = −ℏ`, the coefficient of `t^d` is the graded-trace
/// multiplicity of `S_λ ⊗ S_μ` in cohomological degree `d`; `hbar_deg`
/// is that degree.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DecompositionRow {
    pub x_part: Partition,
    pub y_part: Partition,
    pub hbar_deg: i32,
    #[serde(with = "rational_string")]
    pub mult: Rational,
}

/// Schur-pair expansion of a bisymmetric series, rows in canonical order
/// `(hbar_deg, |λ|+|μ|, λ, μ)`.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct DecompositionReport {
    pub rows: Vec<DecompositionRow>,
    pub integral: bool,
}

impl DecompositionReport {
    pub fn from_rows(mut rows: Vec<DecompositionRow>) -> Self {
        rows.retain(|r| !r.mult.is_zero());
        rows.sort_by(|a, b| {
            (a.hbar_deg, a.x_part.weight() + a.y_part.weight(), &a.x_part, &a.y_part).cmp(&(
                b.hbar_deg,
                b.x_part.weight() + b.y_part.weight(),
                &b.x_part,
                &b.y_part,
            ))
        });
        let integral = rows.iter().all(|r| r.mult.is_integer());
        DecompositionReport { rows, integral }
    }

    /// Number of distinct rows with nonzero multiplicity.
    pub fn n_irr(&self) -> usize {
        self.rows.len()
    }

    /// Sum of the multiplicities.
    pub fn sum_mult(&self) -> Rational {
        self.rows.iter().map(|r| r.mult.clone()).sum()
    }

    /// Errors unless every multiplicity is a positive integer.
    pub fn assert_genuine(&self) -> Result<()> {
        for r in &self.rows {
            if !r.mult.is_integer() || r.mult.is_negative() {
                return Err(Error::NonGenuine(format!(
                    "multiplicity {} at (x={}, y={}, hbar^{})",
                    r.mult, r.x_part, r.y_part, r.hbar_deg
                )));
            }
        }
        Ok(())
    }

    /// Rows restricted by a predicate.
    pub fn filtered(&self, keep: impl Fn(&DecompositionRow) -> bool) -> Self {
        Self::from_rows(self.rows.iter().filter(|r| keep(r)).cloned().collect())
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::to_value(self).expect("report serialization cannot fail")
    }

    /// Reassembles the series `Σ mult · t^d s_λ(x) s_μ(y)`.
    pub fn to_series(&self, trunc: Truncation) -> BiSymSeries {
        let mut out = BiSymSeries::zero(trunc);
        for r in &self.rows {
            let sx = schur_to_p(&r.x_part, trunc).embed();
            let sy = schur_to_p(&r.y_part, trunc.swapped()).in_alphabet(Alphabet::Y).embed();
            let term = sx.mul_into(&sy, &trunc).shift_t(r.hbar_deg).scale(&r.mult);
            out = out.add(&BiSymSeries::from_terms(term.terms().map(|(m, c)| (m.clone(), c.clone())), trunc));
        }
        out
    }
}

pub(crate) mod rational_string {
    use super::Rational;
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(c: &Rational, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&c.to_string())
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Rational, D::Error> {
        let text = String::deserialize(d)?;
        text.parse().map_err(|_| serde::de::Error::custom(format!("bad rational {text:?}")))
    }
}

/// Expands `f` in the basis `t^k s_λ(x) s_μ(y)` using
/// `p_ν = Σ_λ χ^λ(ν) s_λ` in each alphabet.
pub fn schur_pair_expansion(f: &BiSymSeries) -> DecompositionReport {
    // convert the x-side first, then the y-side
    let mut stage: HashMap<(Partition, Partition, i32), Rational> = HashMap::new();
    for (m, c) in f.terms() {
        let table = character_table(m.x.weight());
        let j = table.index_of(&m.x).expect("partition");
        for (i, alpha) in table.partitions().iter().enumerate() {
            let v = table.value(i, j);
            if v != 0 {
                *stage.entry((alpha.clone(), m.y.clone(), m.t)).or_insert_with(Rational::zero) += c * rat(v);
            }
        }
    }
    let mut done: HashMap<(Partition, Partition, i32), Rational> = HashMap::new();
    for ((alpha, mu, t), c) in stage {
        if c.is_zero() {
            continue;
        }
        let table = character_table(mu.weight());
        let j = table.index_of(&mu).expect("partition");
        for (i, beta) in table.partitions().iter().enumerate() {
            let v = table.value(i, j);
            if v != 0 {
                *done.entry((alpha.clone(), beta.clone(), t)).or_insert_with(Rational::zero) += &c * rat(v);
            }
        }
    }
    DecompositionReport::from_rows(
        done.into_iter()
            .map(|((x_part, y_part, hbar_deg), mult)| DecompositionRow { x_part, y_part, hbar_deg, mult })
            .collect(),
    )
}

/// Hall inner product `⟨f, g⟩` with `⟨p_λ(x)p_μ(y), p_λ'(x)p_μ'(y)⟩ =
/// δ δ z_λ z_μ`, extended `t`-bilinearly.
pub fn hall_inner(f: &BiSymSeries, g: &BiSymSeries) -> TCoeff {
    let mut g_by_key: HashMap<(&Partition, &Partition), Vec<(i32, &Rational)>> = HashMap::new();
    for (m, c) in g.terms() {
        g_by_key.entry((&m.x, &m.y)).or_default().push((m.t, c));
    }
    let mut out = TCoeff::zero();
    for (m, c) in f.terms() {
        if let Some(list) = g_by_key.get(&(&m.x, &m.y)) {
            let z = Rational::from_integer(BigInt::from(z_of(&m.x) * z_of(&m.y)));
            for &(t, d) in list {
                out.add_term(m.t + t, &(c * d * &z));
            }
        }
    }
    out
}

/// Coefficient of `p_λ` in `p_α^⊥ p_λ` (with `p_n^⊥ = n ∂/∂p_n`), or
/// `None` when `α` is not a sub-multiset of `λ`.
fn skew_factor(alpha: &Partition, lambda: &Partition) -> Option<(BigInt, Partition)> {
    let rest = lambda.difference(alpha)?;
    let mut factor = BigInt::one();
    for (part, a) in alpha.multiplicities() {
        let m = lambda.multiplicity(part);
        for i in 0..a {
            factor *= BigInt::from(part) * BigInt::from(m - i);
        }
    }
    Some((factor, rest))
}

/// `g^⊥ f`: the adjoint of multiplication by the polynomial `g` for the
/// Hall inner product, acting separately on the x- and y-power sums.
pub fn adjoint_apply(g: &BiSymSeries, f: &BiSymSeries) -> BiSymSeries {
    let trunc = f.truncation();
    let mut terms = Vec::new();
    for (mg, cg) in g.terms() {
        for (mf, cf) in f.terms() {
            let Some((fx, rx)) = skew_factor(&mg.x, &mf.x) else { continue };
            let Some((fy, ry)) = skew_factor(&mg.y, &mf.y) else { continue };
            let c = cg * cf * Rational::from_integer(fx * fy);
            terms.push((Monomial::new(rx, ry, mf.t + mg.t), c));
        }
    }
    BiSymSeries::from_terms(terms, trunc)
}
