//! Plethysm and its relatives, all computed through the Adams operations
//! `p_n ∘ (−)` on the power-sum basis.
//!
//! ## The ℏ-rule
//!
//! The Adams operation `ψ_n` sends `p_m(x) ↦ p_{nm}(x)`, `p_m(y) ↦
//! p_{nm}(y)` and `ℏ ↦ ℏ^n`. Written in `t = −ℏ` this reads
//!
//! ```text
//! c · t^k ↦ (−1)^{k(n+1)} c · t^{nk}
//! ```
//!
//! so odd `n` act as `t ↦ t^n`, while even `n` pick up the sign `(−1)^k`.
//! This is the rule under which `f ∘ (ℏg) = ℏ^{deg f}(f ∘ g)` and the
//! Koszul signs of suspended operads (`Lie_d`, `Pois_d`) come out right.
//!
//! ## Composition
//!
//! Every composition here is a ring morphism in its first argument,
//! determined by the images of `p_n(x)` and `p_n(y)`; the coefficients of
//! the first argument (including their `t`-powers) are carried along
//! linearly. Images of power-sum products are memoized per partition.

use std::collections::HashMap;

use num_traits::Zero;

use crate::error::{Error, Result};
use crate::partitions::{mobius, stretch, Partition};
use crate::series::{
    exp_terms, log1p_terms, product, rat, ratio, working_ceiling, Alphabet, BiSymSeries, Bounds, Monomial, Rational,
    SymSeries, Terms, Truncation,
};

fn adams_sign(k: i32, n: u32) -> bool {
    // true when the sign is negative
    n.is_multiple_of(2) && k.rem_euclid(2) == 1
}

/// Adams operation on raw terms, keeping terms admitted by `bounds`.
/// Returns the image and the number of terms dropped.
pub(crate) fn adams_terms(terms: &Terms, n: u32, bounds: &Bounds) -> (Terms, usize) {
    let mut out = Terms::new();
    let mut dropped = 0;
    for (m, c) in terms {
        let t = m.t as i64 * n as i64;
        let (dx, dy) = m.bidegree();
        if dx * n > bounds.deg_x || dy * n > bounds.deg_y || t < bounds.t_lo as i64 || t > bounds.t_hi as i64 {
            dropped += 1;
            continue;
        }
        let key = Monomial::new(stretch(&m.x, n), stretch(&m.y, n), t as i32);
        let c = if adams_sign(m.t, n) { -c } else { c.clone() };
        out.insert(key, c);
    }
    (out, dropped)
}

/// `ψ_n(f)`: `p_m ↦ p_{nm}` in both alphabets and `ℏ ↦ ℏ^n`.
pub fn adams(f: &BiSymSeries, n: u32) -> BiSymSeries {
    adams_flagged(f, n).0
}

/// As [`adams`], also reporting how many terms left the truncation.
pub fn adams_flagged(f: &BiSymSeries, n: u32) -> (BiSymSeries, usize) {
    assert!(n >= 1, "Adams operations are indexed by n >= 1");
    let trunc = f.truncation();
    let (terms, dropped) = adams_terms(&f.terms, n, &Bounds::exact(&trunc));
    (BiSymSeries::from_raw(terms, trunc), dropped)
}

/// Bound on `|λ|` for the first-argument terms `p_λ` of a composition that
/// can reach the output truncation when every `p_n` is replaced by `ψ_n(g)`.
fn required_degree(g: &BiSymSeries, out: &Truncation, ceiling: i32, f_tmin: i32) -> u32 {
    let mut vx = u32::MAX;
    let mut vy = u32::MAX;
    let mut v = u32::MAX;
    let mut all_x = true;
    let mut all_y = true;
    let mut has_const = false;
    let mut has_nonconst = false;
    for m in g.terms.keys() {
        if m.is_constant() {
            has_const = true;
            continue;
        }
        has_nonconst = true;
        let (dx, dy) = m.bidegree();
        v = v.min(dx + dy);
        if dx == 0 {
            all_x = false;
        } else {
            vx = vx.min(dx);
        }
        if dy == 0 {
            all_y = false;
        } else {
            vy = vy.min(dy);
        }
    }
    let mut bound = 0;
    if has_nonconst {
        bound = (out.deg_x + out.deg_y) / v;
        if all_x {
            bound = bound.min(out.deg_x / vx);
        }
        if all_y {
            bound = bound.min(out.deg_y / vy);
        }
    }
    if has_const {
        bound += (ceiling as i64 - f_tmin.min(0) as i64).max(0) as u32;
    }
    bound
}

/// Memoized images `∏_i ψ_{λ_i}(g)` of power-sum products.
struct Images<'a> {
    source: &'a Terms,
    bounds: Bounds,
    adams: HashMap<u32, Terms>,
    products: HashMap<Partition, Terms>,
}

impl<'a> Images<'a> {
    fn new(source: &'a Terms, bounds: Bounds) -> Self {
        Images { source, bounds, adams: HashMap::new(), products: HashMap::new() }
    }

    fn adams(&mut self, n: u32) -> &Terms {
        let (source, bounds) = (self.source, self.bounds);
        self.adams.entry(n).or_insert_with(|| adams_terms(source, n, &bounds).0)
    }

    fn image(&mut self, lambda: &Partition) -> Terms {
        if let Some(t) = self.products.get(lambda) {
            return t.clone();
        }
        let result = match lambda.split_first() {
            None => {
                let mut one = Terms::new();
                one.insert(Monomial::one(), rat(1));
                one
            }
            Some((first, rest)) => {
                let tail = self.image(&rest);
                let head = self.adams(first).clone();
                product(&head, &tail, &self.bounds)
            }
        };
        self.products.insert(lambda.clone(), result.clone());
        result
    }
}

fn check_constant(g: &BiSymSeries, op: &str, what: &str) -> Result<()> {
    if let Some(m) = g.terms.keys().find(|m| m.is_constant() && m.t <= 0) {
        return Err(Error::Precondition(format!(
            "{op}: {what} must vanish at 0 in t-degree <= 0, found constant term t^{}",
            m.t
        )));
    }
    Ok(())
}

type Key<'a> = (&'a Partition, &'a Partition);

/// The ring morphism `p_λ(x) p_μ(y) ↦ ∏ ψ_{λ_i}(gx) ∏ ψ_{μ_j}(gy)`,
/// extended linearly over the `t`-coefficients of `f`, truncated to `out`.
pub(crate) fn compose(
    op: &str,
    f: &BiSymSeries,
    gx: &BiSymSeries,
    gy: &BiSymSeries,
    out: Truncation,
) -> Result<BiSymSeries> {
    check_constant(gx, op, "inner argument for the x-alphabet")?;
    check_constant(gy, op, "inner argument for the y-alphabet")?;
    let f_trunc = f.truncation();
    let ceiling = working_ceiling(&out, [gx, gy]);
    let need_x = required_degree(gx, &out, ceiling, f_trunc.t_min);
    let need_y = required_degree(gy, &out, ceiling, f_trunc.t_min);
    if f_trunc.deg_x < need_x || f_trunc.deg_y < need_y {
        return Err(Error::InsufficientTruncation(format!(
            "{op}: the first argument is known to degrees ({}, {}) but degrees ({need_x}, {need_y}) \
             can contribute to the result",
            f_trunc.deg_x, f_trunc.deg_y
        )));
    }
    let f_tmin = f.min_t().unwrap_or(0).min(0);
    let bounds = Bounds::working(&out, ceiling.saturating_sub(f_tmin));
    let mut images_x = Images::new(&gx.terms, bounds);
    let mut images_y = Images::new(&gy.terms, bounds);

    // group the first argument by (λ, μ) so each image product is formed once
    let mut grouped: Vec<(Key<'_>, Vec<(i32, &Rational)>)> = Vec::new();
    for (m, c) in f.terms.iter() {
        match grouped.last_mut() {
            Some(((x, y), list)) if *x == &m.x && *y == &m.y => list.push((m.t, c)),
            _ => grouped.push(((&m.x, &m.y), vec![(m.t, c)])),
        }
    }

    let exact = Bounds::exact(&out);
    let mut acc: HashMap<Monomial, Rational> = HashMap::new();
    for ((lam, mu), coeffs) in grouped {
        let ix = images_x.image(lam);
        if ix.is_empty() {
            continue;
        }
        let iy = images_y.image(mu);
        if iy.is_empty() {
            continue;
        }
        let img = product(&ix, &iy, &bounds);
        for (m, c) in &img {
            for &(k, fc) in &coeffs {
                let t = m.t + k;
                if t < exact.t_lo || t > exact.t_hi {
                    continue;
                }
                let key = Monomial::new(m.x.clone(), m.y.clone(), t);
                let v = c * fc;
                match acc.get_mut(&key) {
                    Some(e) => *e += v,
                    None => {
                        acc.insert(key, v);
                    }
                }
            }
        }
    }
    let terms: Terms = acc.into_iter().filter(|(_, c)| !c.is_zero()).collect();
    Ok(BiSymSeries::from_raw(terms, out))
}

/// Classical plethysm `f ∘ g` of one-alphabet series. The result lives in
/// `g`'s alphabet with `g`'s truncation; `f` must be known to the degree
/// that can contribute (for `g` without constant term: `g`'s degree bound).
pub fn pleth(f: &SymSeries, g: &SymSeries) -> Result<SymSeries> {
    let out = g.truncation();
    let fx = f.in_alphabet(Alphabet::X).embed();
    let r = compose("pleth", &fx, &g.embed(), &BiSymSeries::zero(out), out)?;
    SymSeries::from_bisym(g.alphabet(), &r)
}

/// Plethysm of a one-alphabet `f` with a bisymmetric `g`:
/// `p_n ↦ ψ_n(g)`. Equals `relpleth(f(x); g, 0)`.
pub fn pleth_bisym(f: &SymSeries, g: &BiSymSeries) -> Result<BiSymSeries> {
    let out = g.truncation();
    let fx = f.in_alphabet(Alphabet::X).embed();
    compose("pleth", &fx, g, &BiSymSeries::zero(out), out)
}

/// Relative plethysm `f̄ ∘̄ (ḡ, g)`: the ring morphism in `f̄` with
/// `p_n(x) ↦ ψ_n(ḡ)` and `p_n(y) ↦ ψ_n(g)(y)`.
pub fn relpleth(fbar: &BiSymSeries, gbar: &BiSymSeries, g: &SymSeries) -> Result<BiSymSeries> {
    let gy = g.in_alphabet(Alphabet::Y).embed();
    let (a, b) = (gbar.truncation(), gy.truncation());
    let out = Truncation {
        deg_x: a.deg_x,
        deg_y: a.deg_y.min(b.deg_y),
        t_min: a.t_min.max(b.t_min),
        t_max: a.t_max.min(b.t_max).max(a.t_min.max(b.t_min)),
    };
    compose("relpleth", fbar, gbar, &gy, out)
}

/// Koike plethysm: the ring morphism in `f̄` with `p_n(x) ↦ ψ_n(ḡ)` and
/// `p_n(y) ↦ ψ_n(swap ḡ)`. The result is truncated to the degree box of
/// `ḡ` intersected with its mirror image, where `swap ḡ` is known.
pub fn koike_pleth(fbar: &BiSymSeries, gbar: &BiSymSeries) -> Result<BiSymSeries> {
    let trunc = gbar.truncation();
    let out = trunc.intersect(&trunc.swapped());
    let gx = gbar.truncate_to(&out);
    let gy = gbar.swap().truncate_to(&out);
    compose("koike", fbar, &gx, &gy, out)
}

/// Plethystic exponential `Exp(f̄) = exp(Σ_{n≥1} ψ_n(f̄)/n) − 1`.
pub fn plethystic_exp(f: &BiSymSeries) -> Result<BiSymSeries> {
    check_constant(f, "plethystic exponential", "the argument")?;
    let trunc = f.truncation();
    let ceiling = working_ceiling(&trunc, [f]);
    let bounds = Bounds::working(&trunc, ceiling);
    let mut s = Terms::new();
    for n in 1..=max_adams_index(&trunc, ceiling) {
        let (a, _) = adams_terms(&f.terms, n, &bounds);
        crate::series::add_terms(&mut s, &a, &ratio(1, n as i64));
    }
    let mut e = exp_terms(&s, &trunc, ceiling);
    e.remove(&Monomial::one());
    Ok(BiSymSeries::from_raw(e, trunc))
}

/// Plethystic logarithm `Log(f̄) = Σ_{k≥1} (μ_k/k) log(1 + ψ_k(f̄))`, the
/// inverse of [`plethystic_exp`].
pub fn plethystic_log(f: &BiSymSeries) -> Result<BiSymSeries> {
    check_constant(f, "plethystic logarithm", "the argument")?;
    let trunc = f.truncation();
    let ceiling = working_ceiling(&trunc, [f]);
    let bounds = Bounds::working(&trunc, ceiling);
    let mut total = Terms::new();
    for k in 1..=max_adams_index(&trunc, ceiling) {
        let mu = mobius(k);
        if mu == 0 {
            continue;
        }
        let (a, _) = adams_terms(&f.terms, k, &bounds);
        if a.is_empty() {
            continue;
        }
        let l = log1p_terms(&a, &trunc, ceiling);
        crate::series::add_terms(&mut total, &l, &ratio(mu as i64, k as i64));
    }
    Ok(BiSymSeries::from_raw(total, trunc))
}

/// Largest `n` for which `ψ_n` of a term can survive the working bounds.
fn max_adams_index(trunc: &Truncation, ceiling: i32) -> u32 {
    (trunc.deg_x + trunc.deg_y).max(ceiling.max(0) as u32).max(1)
}

fn omega_sign(p: &Partition) -> bool {
    p.sign() < 0
}

/// `ω` on the x-alphabet: `p_n(x) ↦ (−1)^{n−1} p_n(x)`.
pub fn omega_x(f: &BiSymSeries) -> BiSymSeries {
    omega_with(f, true, false)
}

/// `ω` on the y-alphabet.
pub fn omega_y(f: &BiSymSeries) -> BiSymSeries {
    omega_with(f, false, true)
}

/// `ω` on both alphabets.
pub fn omega_xy(f: &BiSymSeries) -> BiSymSeries {
    omega_with(f, true, true)
}

fn omega_with(f: &BiSymSeries, on_x: bool, on_y: bool) -> BiSymSeries {
    f.map_terms(f.truncation(), |m, c| {
        let neg = (on_x && omega_sign(&m.x)) != (on_y && omega_sign(&m.y));
        Some((m.clone(), if neg { -c } else { c.clone() }))
    })
}

/// `ω` on a one-alphabet series.
pub fn omega(f: &SymSeries) -> SymSeries {
    SymSeries::from_bisym(f.alphabet(), &omega_xy(&f.embed())).expect("alphabet preserved")
}

/// `E = Σ_{r≥0} h_r(x)` truncated to `trunc`.
pub fn e_series(trunc: Truncation) -> BiSymSeries {
    let mut out = BiSymSeries::zero(trunc);
    for r in 0..=trunc.deg_x {
        out = out.add(&crate::bases::h_to_p(r, trunc).embed());
    }
    out
}

/// `L = Σ_{k≥1} (μ_k/k) log(1 + p_k(x))` truncated to `trunc`.
pub fn l_series(trunc: Truncation) -> BiSymSeries {
    let mut terms = Vec::new();
    for k in 1..=trunc.deg_x {
        let mu = mobius(k);
        if mu == 0 {
            continue;
        }
        for j in 1..=trunc.deg_x / k {
            let sign = if j % 2 == 1 { 1 } else { -1 };
            let lam = Partition::from_parts(&vec![k; j as usize]);
            terms.push((Monomial::new(lam, Partition::empty(), 0), ratio(sign * mu as i64, (k * j) as i64)));
        }
    }
    BiSymSeries::from_terms(terms, trunc)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bases::{e_to_p, h_to_p, schur_pair_expansion, schur_to_p};

    fn p(parts: &[u32]) -> Partition {
        Partition::from_parts(parts)
    }

    fn tr(n: u32) -> Truncation {
        Truncation::degrees(n, n).with_window(-6, 6)
    }

    fn px(parts: &[u32], trunc: Truncation) -> BiSymSeries {
        BiSymSeries::monomial(p(parts), Partition::empty(), 0, rat(1), trunc)
    }

    fn py(parts: &[u32], trunc: Truncation) -> BiSymSeries {
        BiSymSeries::monomial(Partition::empty(), p(parts), 0, rat(1), trunc)
    }

    #[test]
    fn adams_examples() {
        assert_eq!(adams(&px(&[3], tr(6)), 2), px(&[6], tr(6)));
        let h2 = h_to_p(2, tr(6)).embed();
        let expected = px(&[2, 2], tr(6)).add(&px(&[4], tr(6))).scale(&ratio(1, 2));
        assert_eq!(adams(&h2, 2), expected);
        let f = py(&[1], tr(6)).shift_t(1);
        assert_eq!(adams(&f, 3), py(&[3], tr(6)).shift_t(3));
        // ℏ ↦ ℏ^2: t ↦ −t^2
        assert_eq!(adams(&f, 2), py(&[2], tr(6)).shift_t(2).neg());
    }

    #[test]
    fn adams_composes() {
        let f = px(&[1], tr(8)).shift_t(1).add(&py(&[2], tr(8)).shift_t(-1)).add(&px(&[1, 1], tr(8)));
        for m in 1..=3 {
            for n in 1..=3 {
                assert_eq!(adams(&adams(&f, m), n), adams(&f, m * n));
            }
        }
    }

    #[test]
    fn pleth_examples() {
        let t = tr(4);
        let p2 = SymSeries::from_terms(Alphabet::X, [(p(&[2]), 0, rat(1))], t);
        let h2 = h_to_p(2, t);
        let r = pleth(&p2, &h2).unwrap();
        assert_eq!(r.embed(), px(&[2, 2], t).add(&px(&[4], t)).scale(&ratio(1, 2)));
        let p1 = SymSeries::from_terms(Alphabet::X, [(p(&[1]), 0, rat(1))], t);
        let f = schur_to_p(&p(&[2, 1]), t);
        assert_eq!(pleth(&f, &p1).unwrap(), f);
        let hh = pleth(&h2, &h2).unwrap();
        let rep = schur_pair_expansion(&hh.embed());
        let rows: Vec<_> = rep.rows.iter().map(|r| (r.x_part.clone(), r.mult.clone())).collect();
        assert_eq!(rows, vec![(p(&[4]), rat(1)), (p(&[2, 2]), rat(1))]);
    }

    #[test]
    fn pleth_rejects_constant_inner() {
        let t = tr(3);
        let g = SymSeries::from_terms(Alphabet::X, [(Partition::empty(), 0, rat(1))], t);
        assert!(pleth(&h_to_p(2, t), &g).is_err());
    }

    #[test]
    fn pleth_hbar_is_koszul() {
        // h_2 ∘ (ℏ p_1) = ℏ² h_2 = t² h_2, while h_2 ∘ (t p_1) = t² e_2
        let t = tr(4);
        let hbar_p1 = SymSeries::from_terms(Alphabet::X, [(p(&[1]), 1, rat(-1))], t);
        let r = pleth(&h_to_p(2, t), &hbar_p1).unwrap();
        assert_eq!(r.embed(), h_to_p(2, t).embed().shift_t(2));
        let t_p1 = SymSeries::from_terms(Alphabet::X, [(p(&[1]), 1, rat(1))], t);
        let r = pleth(&h_to_p(2, t), &t_p1).unwrap();
        assert_eq!(r.embed(), e_to_p(2, t).embed().shift_t(2));
    }

    #[test]
    fn relpleth_power_sum_identities() {
        let t = Truncation::degrees(16, 16);
        for k in 1..=4 {
            for l in 1..=4 {
                let pl = SymSeries::from_terms(Alphabet::Y, [(p(&[l]), 0, rat(1))], t);
                let gbar = px(&[1], t).mul(&py(&[1], t));
                let r = relpleth(&py(&[k], t), &gbar, &pl).unwrap();
                assert_eq!(r, py(&[k * l], t));
                let r = relpleth(&px(&[k], t), &px(&[l], t), &pl).unwrap();
                assert_eq!(r, px(&[k * l], t));
                let r = relpleth(&px(&[k], t), &py(&[l], t), &pl).unwrap();
                assert_eq!(r, py(&[k * l], t));
            }
        }
    }

    #[test]
    fn koike_examples() {
        let t = tr(4);
        let g = px(&[1], t).mul(&py(&[1], t));
        assert_eq!(koike_pleth(&px(&[2], t), &g).unwrap(), px(&[2], t).mul(&py(&[2], t)));
        let g = px(&[2], t).mul(&py(&[1], t));
        assert_eq!(koike_pleth(&py(&[1], t), &g).unwrap(), py(&[2], t).mul(&px(&[1], t)));
    }

    #[test]
    fn exp_log_examples() {
        let t = Truncation::degrees(6, 2);
        let e = plethystic_exp(&px(&[1], t)).unwrap();
        let mut expected = BiSymSeries::zero(t);
        for n in 1..=6 {
            expected = expected.add(&h_to_p(n, t).embed());
        }
        assert_eq!(e, expected);
        assert!(plethystic_exp(&BiSymSeries::zero(t)).unwrap().is_zero());
        assert_eq!(plethystic_log(&e).unwrap(), px(&[1], t));
    }

    #[test]
    fn exp_log_with_hbar() {
        let t = Truncation::new(3, 3, -4, 6).unwrap();
        let f = px(&[1], t)
            .shift_t(1)
            .add(&py(&[1, 1], t).shift_t(-1))
            .add(&px(&[1], t).mul(&py(&[2], t)).scale(&ratio(3, 2)))
            .add(&BiSymSeries::t_power(1, t));
        let e = plethystic_exp(&f).unwrap();
        assert_eq!(plethystic_log(&e).unwrap(), f);
    }

    #[test]
    fn omega_examples() {
        let t = tr(4);
        let h2 = h_to_p(2, t);
        assert_eq!(omega(&h2), e_to_p(2, t));
        let s21 = schur_to_p(&p(&[2, 1]), t);
        assert_eq!(omega(&s21), s21);
        let f = px(&[3], t).mul(&py(&[2], t));
        assert_eq!(omega_x(&f), f);
        assert_eq!(omega_y(&f), f.neg());
    }

    #[test]
    fn e_and_l_are_inverse() {
        let t = Truncation::degrees(8, 0);
        let e1 = e_series(t).sub(&BiSymSeries::one(t));
        let l = l_series(t);
        let zero = SymSeries::zero(Alphabet::Y, t);
        assert_eq!(relpleth(&e1, &l, &zero).unwrap(), px(&[1], t));
        assert_eq!(relpleth(&l, &e1, &zero).unwrap(), px(&[1], t));
    }

    #[test]
    fn pleth_is_t_linear_in_first_argument() {
        let t = tr(4);
        let f = h_to_p(2, t).scale(&rat(2)).embed().shift_t(1);
        let f = SymSeries::from_bisym(Alphabet::X, &f).unwrap();
        let g = e_to_p(2, t);
        let lhs = pleth(&f, &g).unwrap().embed();
        let rhs = pleth(&h_to_p(2, t), &g).unwrap().embed().shift_t(1).scale(&rat(2));
        assert_eq!(lhs, rhs);
    }
}
