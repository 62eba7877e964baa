//! Brute-force reference implementations.
//!
//! Each function enumerates the defining tuples literally and shares no code
//! path with [`crate::counting`] or [`crate::fourier`] beyond field arithmetic.
//! They are meant for `|E|` and `q` small enough that `|E|^4 q` (or `|E|^8`
//! for the literal scale count) stays in the low millions.

use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use num_complex::Complex64;

use crate::error::Result;
use crate::field::{FieldCtx, FieldElement};
use crate::geometry::{Point, PointSet, ValueSet};
use crate::groups::{enumerate_g1, enumerate_o2, G1Element};
use crate::limits::Limits;

/// `q^{-2} sum_{x in E} chi(-x . xi)` evaluated term by term.
pub fn dft_direct(ctx: &FieldCtx, e: &PointSet) -> Vec<Complex64> {
    let scale = crate::powi(ctx.q() as f64, -2);
    ctx.points()
        .map(|xi| {
            e.iter()
                .map(|x| ctx.chi(ctx.neg(ctx.dot(x, xi))))
                .sum::<Complex64>()
                * scale
        })
        .collect()
}

pub fn distance_histogram(ctx: &FieldCtx, e: &PointSet) -> Vec<u64> {
    let mut h = vec![0u64; ctx.q() as usize];
    for a in e.iter() {
        for b in e.iter() {
            h[ctx.norm(ctx.vsub(a, b)).index() as usize] += 1;
        }
    }
    h
}

/// `gamma_lambda(z)` by scanning every translate `z`.
pub fn gamma_table(ctx: &FieldCtx, e: &PointSet, lambda: FieldElement) -> Vec<u64> {
    ctx.points()
        .map(|z| {
            e.iter()
                .filter(|&a| e.contains(ctx.vadd(ctx.vscale(lambda, a), z)))
                .count() as u64
        })
        .collect()
}

fn quadruples(e: &PointSet) -> impl Iterator<Item = [Point; 4]> + '_ {
    let m = e.members();
    m.iter().flat_map(move |&a| {
        m.iter().flat_map(move |&b| {
            m.iter()
                .flat_map(move |&c| m.iter().map(move |&d| [a, b, c, d]))
        })
    })
}

fn parallel(ctx: &FieldCtx, v: Point, w: Point) -> bool {
    ctx.mul(v.x, w.y) == ctx.mul(v.y, w.x)
}

/// Quadruples with `u != v`, `x != y` and `u - v` parallel to `x - y`.
pub fn l2_directions(ctx: &FieldCtx, e: &PointSet) -> u128 {
    quadruples(e)
        .filter(|[u, v, x, y]| {
            u != v && x != y && parallel(ctx, ctx.vsub(*u, *v), ctx.vsub(*x, *y))
        })
        .count() as u128
}

/// `N_lambda = #{(u1, v1, u2, v2) : u1 - v1 = lambda (u2 - v2)}`.
pub fn scale_quadruples(ctx: &FieldCtx, e: &PointSet, lambda: FieldElement) -> u128 {
    quadruples(e)
        .filter(|[a, b, c, d]| ctx.vsub(*a, *b) == ctx.vscale(lambda, ctx.vsub(*c, *d)))
        .count() as u128
}

pub fn directions_group_energy(ctx: &FieldCtx, e: &PointSet) -> u128 {
    ctx.nonzero_elements()
        .map(|l| scale_quadruples(ctx, e, l))
        .sum()
}

/// `sum_{lambda != 0} N_lambda^2`.
pub fn scale_group_energy(ctx: &FieldCtx, e: &PointSet) -> u128 {
    ctx.nonzero_elements()
        .map(|l| {
            let n = scale_quadruples(ctx, e, l);
            n * n
        })
        .sum()
}

/// 8-tuples admitting a common `lambda != 0`, each tuple counted once.
pub fn scale_literal(ctx: &FieldCtx, e: &PointSet, limits: &Limits) -> Result<u128> {
    limits.check_brute(e.len())?;
    let diffs: Vec<Point> = e
        .iter()
        .flat_map(|a| e.iter().map(move |b| (a, b)))
        .map(|(a, b)| ctx.vsub(a, b))
        .collect();
    let lambdas: Vec<FieldElement> = ctx.nonzero_elements().collect();
    // For each ordered pair of differences, the admissible scales.
    let mut admissible: Vec<Vec<bool>> = Vec::with_capacity(diffs.len().pow(2));
    for &w1 in &diffs {
        for &w2 in &diffs {
            admissible.push(
                lambdas
                    .iter()
                    .map(|&l| w1 == ctx.vscale(l, w2))
                    .collect(),
            );
        }
    }
    let mut count = 0u128;
    for first in &admissible {
        for second in &admissible {
            if first.iter().zip(second).any(|(&a, &b)| a && b) {
                count += 1;
            }
        }
    }
    Ok(count)
}

pub fn scale_set(ctx: &FieldCtx, e: &PointSet) -> ValueSet {
    let mut out = ValueSet::empty(ctx.q());
    for [a, b, c, d] in quadruples(e) {
        if c == d {
            continue;
        }
        let (num, den) = (ctx.vsub(a, b), ctx.vsub(c, d));
        for l in ctx.elements() {
            if num == ctx.vscale(l, den) {
                out.insert(l);
            }
        }
    }
    out
}

/// Distinct directions, each represented by the smallest index in its orbit
/// under nonzero scaling.
pub fn direction_count(ctx: &FieldCtx, e: &PointSet) -> usize {
    let mut seen = vec![false; ctx.plane_size()];
    let mut count = 0;
    for a in e.iter() {
        for b in e.iter() {
            let w = ctx.vsub(a, b);
            if w.is_zero() {
                continue;
            }
            let rep = ctx
                .nonzero_elements()
                .map(|l| ctx.point_index(ctx.vscale(l, w)))
                .min()
                .unwrap();
            if !seen[rep] {
                seen[rep] = true;
                count += 1;
            }
        }
    }
    count
}

/// `nu(lambda)` over all pairs whose distances lie in `keep`.
pub fn nu(ctx: &FieldCtx, e: &PointSet, lambda: FieldElement, keep: impl Fn(FieldElement) -> bool) -> u128 {
    quadruples(e)
        .filter(|[a, b, c, d]| {
            let (s, t) = (ctx.norm(ctx.vsub(*a, *b)), ctx.norm(ctx.vsub(*c, *d)));
            keep(s) && keep(t) && ctx.mul(s, t) == lambda
        })
        .count() as u128
}

/// `(total, nonzero)` quadruples with `||a - b|| = r ||c - d||`.
pub fn quotient_quadruples(ctx: &FieldCtx, e: &PointSet, r: FieldElement) -> (u128, u128) {
    let mut total = 0;
    let mut nonzero = 0;
    for [a, b, c, d] in quadruples(e) {
        let den = ctx.norm(ctx.vsub(c, d));
        if ctx.norm(ctx.vsub(a, b)) == ctx.mul(r, den) {
            total += 1;
            if !den.is_zero() {
                nonzero += 1;
            }
        }
    }
    (total, nonzero)
}

pub fn isotropic_quadruples(ctx: &FieldCtx, e: &PointSet) -> u128 {
    quadruples(e)
        .filter(|[a, b, c, d]| {
            a != b
                && c != d
                && ctx.norm(ctx.vsub(*a, *b)).is_zero()
                && ctx.norm(ctx.vsub(*c, *d)).is_zero()
        })
        .count() as u128
}

/// `mu_g(z)` for all `z in F_q^4`, by enumerating `E^4`.
pub fn mu_table(ctx: &FieldCtx, e: &PointSet, g: &G1Element) -> Vec<u64> {
    let n = ctx.plane_size();
    let mut t = vec![0u64; n * n];
    for [x1, x2, x3, x4] in quadruples(e) {
        let (y1, y2) = g.apply(ctx, (x1, x2));
        let z1 = ctx.point_index(ctx.vsub(x3, y1));
        let z2 = ctx.point_index(ctx.vsub(x4, y2));
        t[z1 * n + z2] += 1;
    }
    t
}

/// `sum_{g, z} mu_g(z)^2` with each table built from `E^4`.
pub fn mu_energy(ctx: &FieldCtx, e: &PointSet, limits: &Limits) -> Result<u128> {
    Ok(enumerate_g1(ctx, limits)?
        .iter()
        .map(|g| {
            mu_table(ctx, e, g)
                .iter()
                .map(|&c| (c as u128) * (c as u128))
                .sum::<u128>()
        })
        .sum())
}

/// `(sum, sum of squares)` of `eta_theta(z)` over `theta in O(2)` and `z`,
/// scanning `z` and counting pairs.
pub fn eta_energy(ctx: &FieldCtx, e: &PointSet, s: FieldElement) -> (u128, u128) {
    let mut sum = 0u128;
    let mut sum_sq = 0u128;
    for theta in enumerate_o2(ctx) {
        for z in ctx.points() {
            let c = e
                .iter()
                .filter(|&v| e.contains(ctx.vadd(theta.apply_scaled(ctx, s, v), z)))
                .count() as u128;
            sum += c;
            sum_sq += c * c;
        }
    }
    (sum, sum_sq)
}

/// A disagreement between a fast count and its enumeration.
#[derive(Clone, Debug, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct Mismatch {
    pub quantity: String,
    pub detail: String,
}

/// Outcome of [`compare_all`] on one set.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Comparison {
    pub comparisons: usize,
    pub mismatches: Vec<Mismatch>,
}

impl Comparison {
    fn record<T: PartialEq + core::fmt::Debug>(&mut self, quantity: &str, fast: T, slow: T) {
        self.comparisons += 1;
        if fast != slow {
            self.mismatches.push(Mismatch {
                quantity: quantity.into(),
                detail: format!("fast {fast:?} != enumerated {slow:?}"),
            });
        }
    }
}

/// Largest `|G1| |E|^4` for which `mu_energy` is enumerated.
const MU_ENERGY_BUDGET: usize = 2_000_000;

/// Compares every fast count in [`crate::counting`] and the set-valued
/// functions in [`crate::geometry`] against enumeration on `e`.
pub fn compare_all(ctx: &FieldCtx, e: &PointSet, limits: &Limits) -> Result<Comparison> {
    use crate::counting::{self as fast, PairClass};
    use crate::geometry;

    let mut cmp = Comparison::default();
    cmp.record("distance_histogram", fast::distance_histogram(ctx, e).counts().to_vec(), distance_histogram(ctx, e));
    cmp.record("l2_directions", fast::l2_directions(ctx, e), l2_directions(ctx, e));
    cmp.record("directions_group_energy", fast::directions_group_energy(ctx, e), directions_group_energy(ctx, e));
    let scales = fast::l2_scales(ctx, e);
    cmp.record("scale_energy", scales.group, scale_group_energy(ctx, e));
    if limits.check_brute(e.len()).is_ok() {
        cmp.record("scale_tuples_once", scales.literal, scale_literal(ctx, e, limits)?);
    }
    cmp.record("isotropic_quadruples", fast::isotropic_quadruples(ctx, e), isotropic_quadruples(ctx, e));
    if e.len() >= 2 {
        cmp.record("direction_count", geometry::direction_set(ctx, e)?.len(), direction_count(ctx, e));
        cmp.record("scale_set", geometry::scale_set(ctx, e)?, scale_set(ctx, e));
    }
    for l in ctx.elements() {
        cmp.record("gamma", fast::gamma_table(ctx, e, l).counts().to_vec(), gamma_table(ctx, e, l));
        let q = fast::quotient_quadruples(ctx, e, l);
        cmp.record("quotient_quadruples", (q.total, q.nonzero), quotient_quadruples(ctx, e, l));
        cmp.record("nu_all", fast::nu(ctx, e, l, PairClass::All), nu(ctx, e, l, |_| true));
        cmp.record("nu_squares", fast::nu(ctx, e, l, PairClass::Squares), nu(ctx, e, l, |t| ctx.is_nonzero_square(t)));
        cmp.record("nu_nonsquares", fast::nu(ctx, e, l, PairClass::NonSquares), nu(ctx, e, l, |t| !ctx.is_square(t)));
        if ctx.is_nonzero_square(l) {
            let en = fast::eta_energy(ctx, e, l)?;
            let s = ctx.canonical_sqrt(l).unwrap_or(FieldElement::ONE);
            cmp.record("eta_energy", (en.sum, en.sum_sq), eta_energy(ctx, e, s));
        }
    }
    if limits.check_g1(ctx.q()).is_ok() && limits.check_dim4(ctx.q()).is_ok() {
        let g1 = enumerate_g1(ctx, limits)?;
        let step = (g1.len() / 16).max(1);
        for g in g1.iter().step_by(step) {
            cmp.record("mu_table", fast::mu_table(ctx, e, g, limits)?.counts().to_vec(), mu_table(ctx, e, g));
        }
        if g1.len() * e.len().pow(4) <= MU_ENERGY_BUDGET {
            cmp.record("mu_energy", fast::mu_energy(ctx, e, limits)?, mu_energy(ctx, e, limits)?);
        }
    }
    Ok(cmp)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::counting::{self, PairClass};
    use crate::fourier;
    use crate::geometry::{self, random_set};

    fn fields() -> Vec<FieldCtx> {
        [(3, 1), (5, 1), (7, 1), (3, 2)]
            .iter()
            .map(|&(p, k)| FieldCtx::new(p, k).unwrap())
            .collect()
    }

    #[test]
    fn fast_counts_agree_with_enumeration() {
        for ctx in fields() {
            for seed in 0..4 {
                let size = 2 + (seed as usize * 3) % 8;
                let e = random_set(&ctx, size, seed).unwrap();
                assert_eq!(&*counting::distance_histogram(&ctx, &e), &distance_histogram(&ctx, &e)[..]);
                assert_eq!(counting::l2_directions(&ctx, &e), l2_directions(&ctx, &e));
                assert_eq!(
                    counting::directions_group_energy(&ctx, &e),
                    directions_group_energy(&ctx, &e)
                );
                assert_eq!(counting::l2_scales(&ctx, &e).group, scale_group_energy(&ctx, &e));
                assert_eq!(geometry::scale_set(&ctx, &e).unwrap(), scale_set(&ctx, &e));
                assert_eq!(geometry::direction_set(&ctx, &e).unwrap().len(), direction_count(&ctx, &e));
                assert_eq!(counting::isotropic_quadruples(&ctx, &e), isotropic_quadruples(&ctx, &e));
                for l in ctx.elements() {
                    assert_eq!(counting::gamma_table(&ctx, &e, l).counts(), &gamma_table(&ctx, &e, l)[..]);
                    let q = counting::quotient_quadruples(&ctx, &e, l);
                    assert_eq!((q.total, q.nonzero), quotient_quadruples(&ctx, &e, l));
                    let b = counting::nu(&ctx, &e, l, PairClass::NonSquares);
                    assert_eq!(b, nu(&ctx, &e, l, |t| !ctx.is_square(t)));
                    let a = counting::nu(&ctx, &e, l, PairClass::Squares);
                    assert_eq!(a, nu(&ctx, &e, l, |t| ctx.is_nonzero_square(t)));
                    assert_eq!(counting::nu(&ctx, &e, l, PairClass::All), nu(&ctx, &e, l, |_| true));
                }
            }
        }
    }

    #[test]
    fn literal_scale_count_matches_enumeration() {
        let limits = Limits::default();
        for ctx in fields() {
            for seed in 0..3 {
                let e = random_set(&ctx, 2 + seed as usize, seed).unwrap();
                assert_eq!(counting::l2_scales(&ctx, &e).literal, scale_literal(&ctx, &e, &limits).unwrap());
            }
        }
        let f3 = FieldCtx::new(3, 1).unwrap();
        assert!(scale_literal(&f3, &PointSet::full(&f3), &limits).is_err());
    }

    #[test]
    fn transforms_agree_with_direct_sum() {
        for ctx in fields() {
            let e = random_set(&ctx, 6, 2).unwrap();
            let fast = fourier::dft_indicator(&ctx, &e);
            for (a, b) in fast.values().iter().zip(dft_direct(&ctx, &e)) {
                assert!((a - b).norm() < 1e-12);
            }
        }
    }

    #[test]
    fn eta_and_mu_agree_with_enumeration() {
        let limits = Limits::default();
        for ctx in fields().into_iter().take(3) {
            let e = random_set(&ctx, 4, 6).unwrap();
            for r in ctx.nonzero_elements().filter(|&r| ctx.is_square(r)) {
                let en = counting::eta_energy(&ctx, &e, r).unwrap();
                let s = ctx.canonical_sqrt(r).unwrap();
                assert_eq!((en.sum, en.sum_sq), eta_energy(&ctx, &e, s));
            }
            let g1 = enumerate_g1(&ctx, &limits).unwrap();
            for g in g1.iter().step_by(97) {
                let fast = counting::mu_table(&ctx, &e, g, &limits).unwrap();
                assert_eq!(fast.counts(), &mu_table(&ctx, &e, g)[..]);
            }
        }
        let f3 = FieldCtx::new(3, 1).unwrap();
        for seed in 0..3 {
            let e = random_set(&f3, 3 + seed as usize, seed).unwrap();
            assert_eq!(
                counting::mu_energy(&f3, &e, &limits).unwrap(),
                mu_energy(&f3, &e, &limits).unwrap()
            );
        }
    }
}
