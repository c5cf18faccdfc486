//! Characters of stable cohomology: `Aut(F_n)` with twisted coefficients
//! and the Albanese cohomology of `IA_n`.
//!
//! The pipeline is `ch(H) = ω_x ω_y Ψ(1 + Sat(ch Q))` where the generator
//! has the form `A(y) + p_1(x) B(y)`. The x-alphabet carries outputs (arity
//! `q`), the y-alphabet inputs (arity `p`), and `Ψ` puts the cell `(q, p)`
//! in cohomological degree `d = p − q`. The unit `1` is included so that
//! degree 0 contains the trivial pair `(∅, ∅)`.
//!
//! Computation is organized per cell. Since `Exp` is multiplicative,
//!
//! ```text
//! 1 + Sat(A + p_1(x) B) = Exp⁺(A)(y) · Σ_q h_q[p_1(x) B(y)]
//! ```
//!
//! where `Exp⁺ = 1 + Exp`, and the x-degree-`q` slice is the single term
//! `Exp⁺(A) · h_q[p_1 B]`. Each slice is computed once, cut into cells by
//! y-degree, and each cell is regraded, twisted by `ω` and expanded in
//! Schur pairs independently (in parallel).

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::bases::{h_to_p, schur_pair_expansion, DecompositionReport, DecompositionRow};
use crate::error::{Error, Result};
use crate::plethysm::{compose, omega_xy, plethystic_exp};
use crate::propcalc::psi_regrade;
use crate::series::{Alphabet, BiSymSeries, Truncation};

/// Which generator character to saturate.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Variant {
    /// `Σ_{p≥1} (h_p(y) + h_p(y) h_1(x))`: twisted cohomology of `Aut(F_n)`.
    Full,
    /// `Σ_{p≥1} h_p(y) h_1(x)`: the sub-prop without output-less generators.
    SubProp,
    /// `Σ_{p≥1} h_p(y) + Σ_{p≥2} h_p(y) h_1(x)`: Albanese cohomology of `IA_n`.
    NonUnital,
}

impl Variant {
    /// `(first p in A, or None if A = 0; first p in B)`.
    fn ranges(self) -> (Option<u32>, u32) {
        match self {
            Variant::Full => (Some(1), 1),
            Variant::SubProp => (None, 1),
            Variant::NonUnital => (Some(1), 2),
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Variant::Full => "Q",
            Variant::SubProp => "Qtilde",
            Variant::NonUnital => "Qprime",
        }
    }
}

impl fmt::Display for Variant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Variant {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "q" | "full" => Ok(Variant::Full),
            "qtilde" | "subprop" => Ok(Variant::SubProp),
            "qprime" | "nonunital" => Ok(Variant::NonUnital),
            _ => Err(Error::Precondition(format!("unknown variant {s:?} (expected Q, Qtilde or Qprime)"))),
        }
    }
}

/// A variant with a target degree and arity bounds (`q` outputs, `p`
/// inputs).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct VariantSpec {
    pub variant: Variant,
    pub d: u32,
    pub q_max: u32,
    pub p_max: u32,
}

impl VariantSpec {
    pub fn new(variant: Variant, d: u32, q_max: u32, p_max: u32) -> Self {
        VariantSpec { variant, d, q_max, p_max }
    }

    /// Cells `(q, q + d)` inside the arity bounds.
    pub fn cells(&self) -> Vec<(u32, u32)> {
        (0..=self.q_max).map(|q| (q, q + self.d)).filter(|&(_, p)| p <= self.p_max).collect()
    }
}

fn h_sum_y(from: u32, to: u32, trunc: Truncation) -> BiSymSeries {
    (from..=to)
        .fold(BiSymSeries::zero(trunc), |acc, p| acc.add(&h_to_p(p, trunc.swapped()).in_alphabet(Alphabet::Y).embed()))
}

/// The generator `A(y)` and `B(y)` of `A(y) + p_1(x) B(y)` up to y-degree
/// `deg_y`, as y-only series with truncation `trunc`.
fn generator_parts(variant: Variant, trunc: Truncation) -> (BiSymSeries, BiSymSeries) {
    let (a_from, b_from) = variant.ranges();
    let a = match a_from {
        Some(from) => h_sum_y(from, trunc.deg_y, trunc),
        None => BiSymSeries::zero(trunc),
    };
    (a, h_sum_y(b_from, trunc.deg_y, trunc))
}

/// The generator character of `variant` truncated to `trunc`.
pub fn ch_generator(variant: Variant, trunc: Truncation) -> BiSymSeries {
    let (a, b) = generator_parts(variant, trunc);
    let p1 = BiSymSeries::power_sum(1, Alphabet::X, trunc);
    a.add(&p1.mul(&b))
}

/// `Exp⁺(A) = 1 + Exp(A)` for the y-only part `A`.
fn exp_plus(a: &BiSymSeries) -> Result<BiSymSeries> {
    Ok(BiSymSeries::one(a.truncation()).add(&plethystic_exp(a)?))
}

/// The x-degree-`q` slice of `1 + Sat(gen)` up to y-degree `p_max`.
fn slice(variant: Variant, exp_a: &BiSymSeries, q: u32, p_max: u32) -> Result<BiSymSeries> {
    let trunc = Truncation::degrees(q, p_max);
    let (_, b) = generator_parts(variant, trunc);
    let p1 = BiSymSeries::power_sum(1, Alphabet::X, trunc);
    let inner = p1.mul(&b);
    let hq = h_to_p(q, Truncation::degrees(q, 0)).embed();
    let hq_of_inner = compose("saturation slice", &hq, &inner, &BiSymSeries::zero(trunc), trunc)?;
    let slice = exp_a.with_truncation(trunc).mul_into(&hq_of_inner, &trunc);
    Ok(slice.filter(|m| m.x.weight() == q))
}

/// Slices for `q = 0..=q_max`, slice `q` known to y-degree `p_bound(q)`.
fn slices(variant: Variant, q_max: u32, p_bound: impl Fn(u32) -> u32 + Sync) -> Result<Vec<BiSymSeries>> {
    let p_top = (0..=q_max).map(&p_bound).max().unwrap_or(0);
    let (a, _) = generator_parts(variant, Truncation::degrees(0, p_top));
    let exp_a = exp_plus(&a)?;
    (0..=q_max).into_par_iter().map(|q| slice(variant, &exp_a, q, p_bound(q))).collect()
}

/// The cell `(q, p)` of `ch(H)`: y-degree `p` part of the slice, regraded
/// and twisted. Lives in `t`-degree `p − q`.
fn cell(slice: &BiSymSeries, q: u32, p: u32) -> Result<BiSymSeries> {
    let d = p as i32 - q as i32;
    let trunc = Truncation::degrees(q, p).with_window(d.min(0), d.max(0));
    let part = slice.filter(|m| m.y.weight() == p).with_truncation(trunc);
    let regraded = psi_regrade(&part)?;
    let out = omega_xy(&regraded);
    if let Some((m, _)) = out.terms().find(|(m, _)| m.t != d) {
        return Err(Error::Precondition(format!("cell ({q}, {p}) produced a term in t-degree {} instead of {d}", m.t)));
    }
    Ok(out)
}

/// `ch(H)` for `spec`: the `t^d` part, arities `q ≤ q_max`, `p ≤ p_max`.
pub fn ch_h(spec: &VariantSpec) -> Result<BiSymSeries> {
    let d = spec.d as i32;
    let trunc = Truncation::degrees(spec.q_max, spec.p_max).with_window(d, d);
    let cells = spec.cells();
    let slices = slices(spec.variant, spec.q_max, |_| spec.p_max)?;
    let mut out = BiSymSeries::zero(trunc);
    for (q, p) in cells {
        let c = cell(&slices[q as usize], q, p)?;
        out = out.add(&c.with_truncation(trunc));
    }
    Ok(out)
}

fn report_for_cells(slices: &[BiSymSeries], cells: &[(u32, u32)]) -> Result<DecompositionReport> {
    let reports: Vec<DecompositionReport> = cells
        .par_iter()
        .map(|&(q, p)| cell(&slices[q as usize], q, p).map(|c| schur_pair_expansion(&c)))
        .collect::<Result<_>>()?;
    let rows: Vec<DecompositionRow> = reports.into_iter().flat_map(|r| r.rows).collect();
    let report = DecompositionReport::from_rows(rows);
    report.assert_genuine()?;
    Ok(report)
}

/// Schur-pair decomposition of `ch(H)` in degree `d` for arities up to
/// `(q_max, p_max)`. Every multiplicity must be a nonnegative integer.
pub fn decomposition_report(spec: &VariantSpec) -> Result<DecompositionReport> {
    let slices = slices(spec.variant, spec.q_max, |_| spec.p_max)?;
    report_for_cells(&slices, &spec.cells())
}

/// The complete Albanese decomposition in degree `d`. Only cells with
/// `q ≤ d` can be nonzero, since `B` starts in y-degree 2 and hence every
/// x-degree-`q` term has y-degree at least `2q`.
pub fn albanese_report(d: u32) -> Result<DecompositionReport> {
    decomposition_report(&VariantSpec::new(Variant::NonUnital, d, d, 2 * d))
}

/// One row of the Albanese count table.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CountRow {
    pub d: u32,
    pub n_irr: usize,
    #[serde(with = "bigint_string")]
    pub sum_mult: BigInt,
}

mod bigint_string {
    use num_bigint::BigInt;
    use serde::{de::Error, Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(n: &BigInt, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(n)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<BigInt, D::Error> {
        String::deserialize(d)?.parse().map_err(D::Error::custom)
    }
}

/// For each `d = 1..=d_max`: the number of irreducible summands of the
/// Albanese cohomology in degree `d` and the sum of their multiplicities.
pub fn albanese_counts(d_max: u32) -> Result<Vec<CountRow>> {
    let slices = slices(Variant::NonUnital, d_max, |q| q + d_max)?;
    (1..=d_max)
        .map(|d| {
            let cells: Vec<(u32, u32)> = (0..=d).map(|q| (q, q + d)).collect();
            let report = report_for_cells(&slices, &cells)?;
            Ok(CountRow { d, n_irr: report.n_irr(), sum_mult: report.sum_mult().to_integer() })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::partitions::Partition;
    use crate::propcalc::saturate;
    use crate::series::rat;

    fn p(parts: &[u32]) -> Partition {
        Partition::from_parts(parts)
    }

    fn rows(report: &DecompositionReport) -> Vec<(Partition, Partition, i64)> {
        report
            .rows
            .iter()
            .map(|r| (r.x_part.clone(), r.y_part.clone(), r.mult.to_integer().try_into().unwrap()))
            .collect()
    }

    #[test]
    fn generator_examples() {
        let t = Truncation::degrees(1, 2);
        let g = ch_generator(Variant::Full, t);
        let hy = |n| h_to_p(n, t.swapped()).in_alphabet(Alphabet::Y).embed();
        let p1 = BiSymSeries::power_sum(1, Alphabet::X, t);
        let expected = hy(1).add(&hy(2)).add(&p1.mul(&hy(1))).add(&p1.mul(&hy(2)));
        assert_eq!(g, expected);
        let tilde = ch_generator(Variant::SubProp, t);
        assert!(tilde.filter(|m| m.x.is_empty()).is_zero());
        let prime = ch_generator(Variant::NonUnital, t);
        assert_eq!(prime.sub(&tilde), hy(1).add(&hy(2)).sub(&p1.mul(&hy(1))));
    }

    #[test]
    fn cells_match_generic_saturation() {
        for variant in [Variant::Full, Variant::SubProp, Variant::NonUnital] {
            let t = Truncation::degrees(3, 5);
            let sat = BiSymSeries::one(t).add(&saturate(&ch_generator(variant, t)).unwrap());
            let sl = slices(variant, 3, |_| 5).unwrap();
            for q in 0..=3 {
                let expected = sat.filter(|m| m.x.weight() == q).with_truncation(sl[q as usize].truncation());
                assert_eq!(sl[q as usize], expected, "{variant} q={q}");
            }
        }
    }

    #[test]
    fn degree_one_albanese() {
        let rep = albanese_report(1).unwrap();
        assert_eq!(rows(&rep), vec![(Partition::empty(), p(&[1]), 1), (p(&[1]), p(&[1, 1]), 1)]);
    }

    #[test]
    fn full_variant_degree_zero_is_diagonal() {
        let rep = decomposition_report(&VariantSpec::new(Variant::Full, 0, 4, 4)).unwrap();
        assert_eq!(rep.rows.len(), 12);
        assert!(rep.rows.iter().all(|r| r.x_part == r.y_part && r.mult == rat(1)));
    }

    #[test]
    fn ch_h_cells_have_degree_d() {
        let spec = VariantSpec::new(Variant::Full, 2, 3, 4);
        let h = ch_h(&spec).unwrap();
        assert!(h.terms().all(|(m, _)| m.t == 2 && m.y.weight() - m.x.weight() == 2));
        let rep = schur_pair_expansion(&h);
        assert_eq!(rep, decomposition_report(&spec).unwrap());
    }

    #[test]
    fn small_counts() {
        let counts = albanese_counts(3).unwrap();
        let got: Vec<(u32, usize, i64)> =
            counts.iter().map(|r| (r.d, r.n_irr, r.sum_mult.clone().try_into().unwrap())).collect();
        assert_eq!(got, vec![(1, 2, 2), (2, 6, 8), (3, 21, 34)]);
    }
}
