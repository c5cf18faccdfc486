//! Shared helpers for the integration tests: seeded random series and
//! golden-file loading.

#![allow(dead_code)]

use bisym_core::bases::{DecompositionReport, DecompositionRow};
use bisym_core::partitions::partitions_up_to;
use bisym_core::{BiSymSeries, Monomial, Partition, Rational, Truncation};
use num_bigint::BigInt;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn q(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// Shape of a random series.
#[derive(Clone, Copy)]
pub struct Shape {
    pub deg_x: u32,
    pub deg_y: u32,
    /// Minimum of `|λ| + |μ|` (use 1 for series vanishing at 0).
    pub min_total: u32,
    /// Require both alphabets in every term.
    pub both: bool,
    /// Range of `t`-exponents.
    pub t_range: (i32, i32),
    pub terms: usize,
}

impl Shape {
    pub fn new(deg_x: u32, deg_y: u32) -> Self {
        Shape { deg_x, deg_y, min_total: 1, both: false, t_range: (0, 0), terms: 4 }
    }
}

/// A random polynomial with small rational coefficients, declared at
/// truncation `trunc` (which must contain the shape).
pub fn random_series(rng: &mut ChaCha8Rng, shape: Shape, trunc: Truncation) -> BiSymSeries {
    let xs: Vec<Partition> = partitions_up_to(shape.deg_x);
    let ys: Vec<Partition> = partitions_up_to(shape.deg_y);
    let mut terms = Vec::new();
    while terms.len() < shape.terms {
        let x = xs[rng.gen_range(0..xs.len())].clone();
        let y = ys[rng.gen_range(0..ys.len())].clone();
        if x.weight() + y.weight() < shape.min_total {
            continue;
        }
        if shape.both && (x.is_empty() || y.is_empty()) {
            continue;
        }
        let t = rng.gen_range(shape.t_range.0..=shape.t_range.1);
        let num = rng.gen_range(-3i64..=3);
        if num == 0 {
            continue;
        }
        let den = rng.gen_range(1i64..=3);
        terms.push((Monomial::new(x, y, t), Rational::new(num.into(), den.into())));
    }
    BiSymSeries::from_terms(terms, trunc)
}

/// Rows of a golden JSON file.
pub fn golden_rows(text: &str) -> Vec<DecompositionRow> {
    let v: serde_json::Value = serde_json::from_str(text).expect("golden file parses");
    serde_json::from_value(v["rows"].clone()).expect("golden rows parse")
}

/// Rows as a comparable, canonically ordered list.
pub fn canonical(rows: Vec<DecompositionRow>) -> Vec<DecompositionRow> {
    DecompositionReport::from_rows(rows).rows
}
