//! Named characters of symmetric sequences: trivial, sign and Specht
//! modules, `uCom`, `Lie`, the suspended `Lie_d` and the logarithm of the
//! character of `uPois_d`.
//!
//! The suspended characters are given in `ℏ`; each monomial `ℏ^e` is
//! rewritten once as `(−1)^e t^e`.

use num_bigint::BigInt;
use num_traits::One;

use crate::bases::{e_to_p, h_to_p, schur_to_p};
use crate::partitions::{mobius, Partition};
use crate::series::{ratio, Alphabet, Rational, SymSeries, Truncation};

fn one_alphabet(deg_max: u32, t_max: i32) -> Truncation {
    Truncation::degrees(deg_max, 0).with_window(0, t_max.max(0))
}

/// `ch(triv_n) = h_n`.
pub fn ch_triv(n: u32) -> SymSeries {
    h_to_p(n, one_alphabet(n, 0))
}

/// `ch(sgn_n) = e_n`.
pub fn ch_sgn(n: u32) -> SymSeries {
    e_to_p(n, one_alphabet(n, 0))
}

/// `ch(S^λ) = s_λ`.
pub fn ch_specht(lambda: &Partition) -> SymSeries {
    schur_to_p(lambda, one_alphabet(lambda.weight(), 0))
}

/// `ch(uCom) = Σ_{n≥0} h_n`, up to degree `deg_max`.
pub fn ch_ucom(deg_max: u32) -> SymSeries {
    let trunc = one_alphabet(deg_max, 0);
    (0..=deg_max).fold(SymSeries::zero(Alphabet::X, trunc), |acc, n| acc.add(&h_to_p(n, trunc)))
}

/// `p_n^k` as a partition.
fn power(n: u32, k: u32) -> Partition {
    Partition::from_parts(&vec![n; k as usize])
}

fn hbar_to_t(e: i32, c: Rational) -> (i32, Rational) {
    if e.rem_euclid(2) == 1 {
        (e, -c)
    } else {
        (e, c)
    }
}

fn sign(e: i64) -> i64 {
    if e.rem_euclid(2) == 0 {
        1
    } else {
        -1
    }
}

/// The Witt character `ch(Lie) = Σ_{n≥1} (−μ_n/n) log(1 − p_n)`.
pub fn ch_lie(deg_max: u32) -> SymSeries {
    ch_lie_d(1, deg_max)
}

/// `ch(Lie_d) = (−1)^d ℏ^{1−d} Σ_n (μ_n/n) log(1 + (−1)^d ℏ^{(d−1)n} p_n)`,
/// up to degree `deg_max`. For `d = 1` this is [`ch_lie`].
pub fn ch_lie_d(d: u32, deg_max: u32) -> SymSeries {
    assert!(d >= 1, "d must be positive");
    let dd = d as i64;
    let trunc = one_alphabet(deg_max, ((d - 1) * deg_max.saturating_sub(1)) as i32);
    let mut terms = Vec::new();
    for n in 1..=deg_max {
        let mu = mobius(n) as i64;
        if mu == 0 {
            continue;
        }
        for k in 1..=deg_max / n {
            let kk = k as i64;
            let s = sign(dd) * sign(kk + 1) * sign(dd * kk);
            let e = (d as i32 - 1) * ((n * k) as i32 - 1);
            let (t, c) = hbar_to_t(e, ratio(s * mu, (n * k) as i64));
            terms.push((power(n, k), t, c));
        }
    }
    SymSeries::from_terms(Alphabet::X, terms, trunc)
}

/// `log ch(uPois_d) = (−1)^d Σ_{m≥1} Σ_{n|m} ℏ^{(1−d)m/n} (μ_n/m)
/// log(1 + (−1)^d ℏ^{(d−1)m} p_m)`, up to degree `deg_max`.
pub fn log_ch_pois(d: u32, deg_max: u32) -> SymSeries {
    assert!(d >= 1, "d must be positive");
    let dd = d as i64;
    let trunc = one_alphabet(deg_max, ((d - 1) * deg_max.saturating_sub(1)) as i32);
    let mut terms = Vec::new();
    for m in 1..=deg_max {
        for n in (1..=m).filter(|n| m % n == 0) {
            let mu = mobius(n) as i64;
            if mu == 0 {
                continue;
            }
            for k in 1..=deg_max / m {
                let kk = k as i64;
                let s = sign(dd) * sign(kk + 1) * sign(dd * kk);
                let e = (d as i32 - 1) * ((m * k) as i32 - (m / n) as i32);
                let (t, c) = hbar_to_t(e, ratio(s * mu, (m * k) as i64));
                terms.push((power(m, k), t, c));
            }
        }
    }
    SymSeries::from_terms(Alphabet::X, terms, trunc)
}

/// Dimension of the arity-`n` component in `t`-degree `k`:
/// `n! · [p_{1^n} t^k] f`.
pub fn dim_from_char(f: &SymSeries, n: u32, k: i32) -> crate::Result<Rational> {
    let c = f.coeff(&Partition::column(n), k)?;
    let fact = (1..=n as u64).fold(BigInt::one(), |acc, i| acc * i);
    Ok(c * Rational::from_integer(fact))
}
