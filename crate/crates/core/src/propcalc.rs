//! Characters of prop-level constructions: saturation, the regular
//! representations `R_n`, the box and connected box products, and the
//! regrading `Ψ`.
//!
//! The box product of `f̄` and `ḡ` pairs the y-alphabet of `Sat(f̄)` with
//! the x-alphabet of `Sat(ḡ)` through the Hall inner product:
//!
//! ```text
//! Sat(f̄) = Σ a_{λ,μ} p_λ(x) p_μ(y),  Sat(ḡ) = Σ b_{ν,ρ} p_ν(x) p_ρ(y)
//! f̄ ⊠ ḡ  = Σ_{μ ≠ ∅} z_μ a_{λ,μ} b_{μ,ρ} p_λ(x) p_ρ(y)
//! ```
//!
//! which is the same as applying `Σ_N R_N(x', y')^⊥` to
//! `Sat(f̄)(x, y') Sat(ḡ)(x', y)` and setting the primed alphabets to 0.

use std::collections::{BTreeMap, HashMap};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::partitions::{partitions_of, z_of, Partition};
use crate::plethysm::{plethystic_exp, plethystic_log};
use crate::series::{BiSymSeries, Monomial, Rational, Truncation};

/// `Sat(f̄) = Σ_{n≥1} h_n(x) ∘̄ (f̄, 0) = Exp(f̄)`.
pub fn saturate(f: &BiSymSeries) -> Result<BiSymSeries> {
    plethystic_exp(f)
}

/// `R_n(x, y) = Σ_{λ⊢n} s_λ(x) s_λ(y) = Σ_{μ⊢n} z_μ^{−1} p_μ(x) p_μ(y)`.
pub fn regular_rep_char(n: u32, trunc: Truncation) -> BiSymSeries {
    let terms: Vec<_> = partitions_of(n)
        .into_iter()
        .map(|mu| {
            let c = Rational::new(BigInt::one(), BigInt::from(z_of(&mu)));
            (Monomial::new(mu.clone(), mu, 0), c)
        })
        .collect();
    BiSymSeries::from_terms(terms, trunc)
}

/// Largest ratio `num/den` over non-constant terms, or `None` if some
/// non-constant term has `den = 0`.
fn max_ratio(f: &BiSymSeries, x_over: bool) -> Option<(u32, u32)> {
    let mut best: (u32, u32) = (0, 1);
    for m in f.terms.keys() {
        if m.is_constant() {
            continue;
        }
        let (dx, dy) = m.bidegree();
        let (num, den) = if x_over { (dx, dy) } else { (dy, dx) };
        if den == 0 {
            return None;
        }
        if (num as u64) * (best.1 as u64) > (best.0 as u64) * (den as u64) {
            best = (num, den);
        }
    }
    Some(best)
}

/// Bound on the inner (contracted) degree of `f̄ ⊠ ḡ` for an output box
/// `(deg_x, deg_y)`. Errors if neither factor bounds it.
pub fn box_inner_bound(f: &BiSymSeries, g: &BiSymSeries, deg_x: u32, deg_y: u32) -> Result<u32> {
    let from_f = max_ratio(f, false).map(|(a, b)| deg_x * a / b);
    let from_g = max_ratio(g, true).map(|(a, b)| deg_y * a / b);
    match (from_f, from_g) {
        (Some(a), Some(b)) => Ok(a.min(b)),
        (Some(a), None) | (None, Some(a)) => Ok(a),
        (None, None) => Err(Error::Divergent(
            "box product: the first factor has terms without x-alphabet and the second \
             has terms without y-alphabet, so the inner sum is unbounded"
                .into(),
        )),
    }
}

/// Box product `f̄ ⊠ ḡ` in contraction form. The result has the x-degree
/// bound of `f̄` and the y-degree bound of `ḡ`; `f̄` must be known to
/// y-degree and `ḡ` to x-degree [`box_inner_bound`].
pub fn box_product(f: &BiSymSeries, g: &BiSymSeries) -> Result<BiSymSeries> {
    let (tf, tg) = (f.truncation(), g.truncation());
    let t_min = tf.t_min.max(tg.t_min);
    let out = Truncation { deg_x: tf.deg_x, deg_y: tg.deg_y, t_min, t_max: tf.t_max.min(tg.t_max).max(t_min) };
    if f.is_zero() || g.is_zero() {
        return Ok(BiSymSeries::zero(out));
    }
    let inner = box_inner_bound(f, g, out.deg_x, out.deg_y)?;
    if tf.deg_y < inner || tg.deg_x < inner {
        return Err(Error::InsufficientTruncation(format!(
            "box product: inner degree up to {inner} contributes, but the factors are known \
             only to inner degrees {} and {}",
            tf.deg_y, tg.deg_x
        )));
    }
    let sat_f = saturate(&f.truncate_to(&Truncation { deg_y: inner, ..tf }))?;
    let sat_g = saturate(&g.truncate_to(&Truncation { deg_x: inner, ..tg }))?;
    Ok(contract(&sat_f, &sat_g, out))
}

/// `Σ_{μ≠∅} z_μ a_{λ,μ} b_{μ,ρ} p_λ(x) p_ρ(y)`, parallel over inner keys.
pub(crate) fn contract(a: &BiSymSeries, b: &BiSymSeries, out: Truncation) -> BiSymSeries {
    let mut left: HashMap<&Partition, Vec<(&Partition, i32, &Rational)>> = HashMap::new();
    for (m, c) in a.terms() {
        if !m.y.is_empty() {
            left.entry(&m.y).or_default().push((&m.x, m.t, c));
        }
    }
    let mut right: HashMap<&Partition, Vec<(&Partition, i32, &Rational)>> = HashMap::new();
    for (m, c) in b.terms() {
        if !m.x.is_empty() {
            right.entry(&m.x).or_default().push((&m.y, m.t, c));
        }
    }
    let mut inner: Vec<&Partition> = left.keys().filter(|k| right.contains_key(*k)).copied().collect();
    inner.sort();
    let partials: Vec<Vec<(Monomial, Rational)>> = inner
        .par_iter()
        .map(|mu| {
            let z = Rational::from_integer(BigInt::from(z_of(mu)));
            let mut local = Vec::new();
            for &(lam, ta, ca) in &left[mu] {
                for &(rho, tb, cb) in &right[mu] {
                    let m = Monomial::new(lam.clone(), rho.clone(), ta + tb);
                    if out.contains(&m) {
                        local.push((m, ca * cb * &z));
                    }
                }
            }
            local
        })
        .collect();
    let mut merged: BTreeMap<Monomial, Rational> = BTreeMap::new();
    for part in partials {
        for (m, c) in part {
            *merged.entry(m).or_insert_with(Rational::zero) += c;
        }
    }
    BiSymSeries::from_raw(merged, out)
}

/// Connected box product `f̄ ⊠_c ḡ = Log(f̄ ⊠ ḡ)`.
pub fn connected_box(f: &BiSymSeries, g: &BiSymSeries) -> Result<BiSymSeries> {
    plethystic_log(&box_product(f, g)?)
}

fn regrade(f: &BiSymSeries, direction: i32) -> Result<BiSymSeries> {
    let trunc = f.truncation();
    let mut terms = BTreeMap::new();
    for (m, c) in f.terms() {
        let shift = direction * (m.y.weight() as i32 - m.x.weight() as i32);
        let t = m.t + shift;
        if t < trunc.t_min || t > trunc.t_max {
            return Err(Error::WindowOverflow(format!(
                "regrading moves p{:?}(x) p{:?}(y) t^{} to t^{t}, outside [{}, {}]",
                m.x, m.y, m.t, trunc.t_min, trunc.t_max
            )));
        }
        terms.insert(Monomial::new(m.x.clone(), m.y.clone(), t), c.clone());
    }
    Ok(BiSymSeries::from_raw(terms, trunc))
}

/// `Ψ`: `p_n(x) ↦ t^{−n} p_n(x)`, `p_n(y) ↦ t^n p_n(y)`, so the key
/// `(λ, μ, k)` moves to `k + |μ| − |λ|`.
pub fn psi_regrade(f: &BiSymSeries) -> Result<BiSymSeries> {
    regrade(f, 1)
}

/// Inverse of [`psi_regrade`].
pub fn psi_inverse(f: &BiSymSeries) -> Result<BiSymSeries> {
    regrade(f, -1)
}

fn factorial(n: u32) -> BigInt {
    (1..=n as u64).fold(BigInt::one(), |acc, k| acc * k)
}

/// Dimension of the `(S_m × S_n)`-component at `t^k`:
/// `m! n! · [p_{1^m}(x) p_{1^n}(y) t^k] f̄`.
pub fn bidim_from_char(f: &BiSymSeries, m: u32, n: u32, k: i32) -> Result<Rational> {
    let c = f.coeff(&Partition::column(m), &Partition::column(n), k)?;
    Ok(c * Rational::from_integer(factorial(m) * factorial(n)))
}

/// As [`bidim_from_char`], asserting an integral result.
pub fn bidim_integral(f: &BiSymSeries, m: u32, n: u32, k: i32) -> Result<BigInt> {
    let d = bidim_from_char(f, m, n, k)?;
    if !d.is_integer() {
        return Err(Error::NonGenuine(format!("dimension {d} at biarity ({m}, {n}) is not integral")));
    }
    let (num, den) = (d.numer().clone(), d.denom().clone());
    Ok(num.div_floor(&den))
}
