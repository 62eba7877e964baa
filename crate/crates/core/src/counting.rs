//! Exact integer counting functions.
//!
//! Almost everything here is driven by the difference table
//! `D(w) = #{(a, b) in E^2 : a - b = w}`: a second moment over a family of
//! linear maps `M` reduces to `sum_w D(w) D(M w)`, which is `O(q^2)` per map
//! instead of `O(|E|^4)`. Counts are never derived from floating-point
//! transforms; the Fourier identities are checked on the side.

use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::ops::Deref;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::field::{FieldCtx, FieldElement};
use crate::fourier::{self, SpectralTable};
use crate::geometry::{Point, PointSet};
use crate::groups::{enumerate_g1, enumerate_o2, G1Element, Orthogonal2};
use crate::limits::Limits;

/// What a [`CountTable`] is indexed by.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum IndexSpace {
    /// `t` or `lambda` in `F_q`.
    Field,
    /// `z` in `F_q^2`, index `x * q + y`.
    Plane,
    /// `z = (z1, z2)` in `F_q^4`, index `idx(z1) * q^2 + idx(z2)`.
    Product,
}

/// Which function a table holds, with its parameter.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum TableMeta {
    DistanceHistogram,
    Gamma { lambda: FieldElement },
    Eta { r: FieldElement, theta: Orthogonal2 },
    Mu { g: G1Element },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CountTable {
    pub space: IndexSpace,
    pub meta: TableMeta,
    counts: Vec<u64>,
}

impl CountTable {
    pub fn counts(&self) -> &[u64] {
        &self.counts
    }

    pub fn total(&self) -> u128 {
        self.counts.iter().map(|&c| c as u128).sum()
    }

    pub fn sum_squares(&self) -> u128 {
        self.counts.iter().map(|&c| (c as u128) * (c as u128)).sum()
    }

    /// Human-readable index: `t`, `(x,y)` or `(x1,y1,x2,y2)`.
    pub fn index_label(&self, ctx: &FieldCtx, i: usize) -> String {
        match self.space {
            IndexSpace::Field => alloc::format!("{i}"),
            IndexSpace::Plane => alloc::format!("{}", ctx.point_at(i)),
            IndexSpace::Product => {
                let n = ctx.plane_size();
                let (a, b) = (ctx.point_at(i / n), ctx.point_at(i % n));
                alloc::format!("({},{},{},{})", a.x, a.y, b.x, b.y)
            }
        }
    }
}

impl Deref for CountTable {
    type Target = [u64];

    fn deref(&self) -> &[u64] {
        &self.counts
    }
}

/// `D(w) = #{(a, b) in E^2 : a - b = w}` over the plane.
#[derive(Clone, Debug)]
pub struct DifferenceTable {
    q: usize,
    counts: Vec<u64>,
}

impl DifferenceTable {
    pub fn new(ctx: &FieldCtx, e: &PointSet) -> Self {
        let mut counts = vec![0u64; ctx.plane_size()];
        for a in e.iter() {
            for b in e.iter() {
                counts[ctx.point_index(ctx.vsub(a, b))] += 1;
            }
        }
        DifferenceTable {
            q: ctx.q() as usize,
            counts,
        }
    }

    pub fn counts(&self) -> &[u64] {
        &self.counts
    }

    pub fn get(&self, ctx: &FieldCtx, w: Point) -> u64 {
        self.counts[ctx.point_index(w)]
    }

    /// `D(0) = |E|`.
    pub fn set_size(&self) -> u64 {
        self.counts[0]
    }

    pub fn support(&self) -> impl Iterator<Item = Point> + '_ {
        let q = self.q;
        self.counts.iter().enumerate().filter(|(_, &c)| c > 0).map(move |(i, _)| {
            Point::new(FieldElement((i / q) as u32), FieldElement((i % q) as u32))
        })
    }

    /// `sum_w D(w) D(M w)` for a linear map `M` given by its action on basis
    /// coordinates as a 2x2 matrix `[[a, b], [c, d]]`.
    pub fn correlate_linear(&self, ctx: &FieldCtx, m: [[FieldElement; 2]; 2]) -> u128 {
        let q = self.q;
        // Per-coordinate multiplication tables keep the inner loop to lookups.
        let row = |s: FieldElement| -> Vec<u32> {
            ctx.elements().map(|x| ctx.mul(s, x).index()).collect()
        };
        let (ma, mb, mc, md) = (row(m[0][0]), row(m[0][1]), row(m[1][0]), row(m[1][1]));
        let mut acc = 0u128;
        for (i, &c) in self.counts.iter().enumerate() {
            if c == 0 {
                continue;
            }
            let (x, y) = (i / q, i % q);
            let nx = ctx.add(FieldElement(ma[x]), FieldElement(mb[y])).index() as usize;
            let ny = ctx.add(FieldElement(mc[x]), FieldElement(md[y])).index() as usize;
            acc += c as u128 * self.counts[nx * q + ny] as u128;
        }
        acc
    }

    /// `sum_w D(w) D(lambda w)`.
    pub fn correlate_scalar(&self, ctx: &FieldCtx, lambda: FieldElement) -> u128 {
        let z = FieldElement::ZERO;
        self.correlate_linear(ctx, [[lambda, z], [z, lambda]])
    }

    /// `sum_w D(w) D(s theta w)`.
    pub fn correlate_orthogonal(&self, ctx: &FieldCtx, s: FieldElement, theta: &Orthogonal2) -> u128 {
        self.correlate_linear(
            ctx,
            [
                [ctx.mul(s, theta.a), ctx.mul(s, theta.b)],
                [ctx.mul(s, theta.c), ctx.mul(s, theta.d)],
            ],
        )
    }
}

/// `r(t) = #{(a, b) in E^2 : ||a - b|| = t}`.
pub fn distance_histogram(ctx: &FieldCtx, e: &PointSet) -> CountTable {
    let diff = DifferenceTable::new(ctx, e);
    distance_histogram_from(ctx, &diff)
}

pub fn distance_histogram_from(ctx: &FieldCtx, diff: &DifferenceTable) -> CountTable {
    let mut counts = vec![0u64; ctx.q() as usize];
    for (i, &c) in diff.counts().iter().enumerate() {
        if c > 0 {
            counts[ctx.norm(ctx.point_at(i)).index() as usize] += c;
        }
    }
    CountTable {
        space: IndexSpace::Field,
        meta: TableMeta::DistanceHistogram,
        counts,
    }
}

/// `gamma_lambda(z) = #{(a, b) in E^2 : lambda a + z = b}`.
pub fn gamma_table(ctx: &FieldCtx, e: &PointSet, lambda: FieldElement) -> CountTable {
    let mut counts = vec![0u64; ctx.plane_size()];
    for a in e.iter() {
        let la = ctx.vscale(lambda, a);
        for b in e.iter() {
            counts[ctx.point_index(ctx.vsub(b, la))] += 1;
        }
    }
    CountTable {
        space: IndexSpace::Plane,
        meta: TableMeta::Gamma { lambda },
        counts,
    }
}

/// Residuals of the transform identity for `gamma_lambda`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct IdentityResiduals {
    /// `max |ghat(xi) - c * Fhat(xi) Fhat(-M^T xi)|`: the identity as derived
    /// under the `chi(-x . xi)` transform convention.
    pub residual: f64,
    /// Same with both transform arguments negated, `c * Fhat(-xi) Fhat(M^T xi)`;
    /// this is the complex conjugate of the derived right-hand side.
    pub conjugate_residual: f64,
    /// `max | |ghat(xi)| - c |Fhat(xi)| |Fhat(M^T xi)| |`, insensitive to the sign convention.
    pub modulus_residual: f64,
}

/// Compares the transform of the exact `gamma_lambda` table with
/// `q^2 Ehat(xi) Ehat(-lambda xi)`.
pub fn gamma_fourier_check(ctx: &FieldCtx, e: &PointSet, lambda: FieldElement) -> IdentityResiduals {
    let table = gamma_table(ctx, e, lambda);
    let data: Vec<f64> = table.iter().map(|&c| c as f64).collect();
    let ghat = fourier::transform(ctx, 2, &data);
    let ehat = fourier::dft_indicator(ctx, e);
    let q2 = crate::powi(ctx.q() as f64, 2);
    let mut out = IdentityResiduals {
        residual: 0.0,
        conjugate_residual: 0.0,
        modulus_residual: 0.0,
    };
    for xi in ctx.points() {
        let lhs = ghat[ctx.point_index(xi)];
        let lxi = ctx.vscale(lambda, xi);
        let derived = ehat.at(ctx, xi) * ehat.at(ctx, ctx.vneg(lxi)) * q2;
        let conj = ehat.at(ctx, ctx.vneg(xi)) * ehat.at(ctx, lxi) * q2;
        out.residual = out.residual.max((lhs - derived).norm());
        out.conjugate_residual = out.conjugate_residual.max((lhs - conj).norm());
        out.modulus_residual = out.modulus_residual.max((lhs.norm() - derived.norm()).abs());
    }
    out
}

/// `L^2(D_E)`: quadruples `(u, v, x, y)` with `u != v`, `x != y` and
/// `u - v = lambda (x - y)` for some `lambda != 0`.
///
/// Computed as `sum over direction classes of (sum of D(w) over the class)^2`.
pub fn l2_directions(ctx: &FieldCtx, e: &PointSet) -> u128 {
    let diff = DifferenceTable::new(ctx, e);
    l2_directions_from(ctx, &diff)
}

pub fn l2_directions_from(ctx: &FieldCtx, diff: &DifferenceTable) -> u128 {
    let q = ctx.q() as usize;
    // Class id: slope y/x for x != 0, q for the vertical class.
    let mut class = vec![0u128; q + 1];
    for (i, &c) in diff.counts().iter().enumerate().skip(1) {
        if c == 0 {
            continue;
        }
        let w = ctx.point_at(i);
        let id = match ctx.inv(w.x) {
            Ok(inv) => ctx.mul(w.y, inv).index() as usize,
            Err(_) => q,
        };
        class[id] += c as u128;
    }
    class.iter().map(|&s| s * s).sum()
}

/// `S(E) = sum_{lambda != 0} sum_z gamma_lambda(z)^2`.
pub fn directions_group_energy(ctx: &FieldCtx, e: &PointSet) -> u128 {
    let diff = DifferenceTable::new(ctx, e);
    ctx.nonzero_elements()
        .map(|l| diff.correlate_scalar(ctx, l))
        .sum()
}

/// Second moments of scales.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ScaleEnergy {
    /// `T(E) = sum_{lambda != 0} (sum_z gamma_lambda(z)^2)^2`, with multiplicity per `lambda`.
    pub group: u128,
    /// 8-tuples `(u1, v1, .., u4, v4)` with `u1 - v1 = lambda (u2 - v2)` and
    /// `u3 - v3 = lambda (u4 - v4)` for some `lambda != 0`, each counted once.
    pub literal: u128,
}

pub fn l2_scales(ctx: &FieldCtx, e: &PointSet) -> ScaleEnergy {
    let diff = DifferenceTable::new(ctx, e);
    l2_scales_from(ctx, &diff)
}

pub fn l2_scales_from(ctx: &FieldCtx, diff: &DifferenceTable) -> ScaleEnergy {
    let n = diff.set_size() as u128;
    let degenerate = n * n;
    let mut group = 0u128;
    let mut specific_sum = 0u128;
    let mut specific_sq = 0u128;
    for lambda in ctx.nonzero_elements() {
        let energy = diff.correlate_scalar(ctx, lambda);
        group += energy * energy;
        // Quadruples with u2 = v2 and u1 = v1 satisfy every lambda; the rest
        // (with u2 != v2) pin lambda down uniquely.
        let specific = energy - degenerate;
        specific_sum += specific;
        specific_sq += specific * specific;
    }
    let literal = degenerate * degenerate + 2 * degenerate * specific_sum + specific_sq;
    ScaleEnergy { group, literal }
}

/// `T(E)` assembled directly from the `gamma_lambda` tables.
pub fn scale_energy_via_gamma(ctx: &FieldCtx, e: &PointSet) -> u128 {
    ctx.nonzero_elements()
        .map(|l| {
            let s = gamma_table(ctx, e, l).sum_squares();
            s * s
        })
        .sum()
}

/// Square class of the distance used to restrict pairs.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PairClass {
    All,
    /// Nonzero squares (the set `A`).
    Squares,
    /// Non-squares (the set `B`).
    NonSquares,
}

impl core::str::FromStr for PairClass {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "all" => Ok(PairClass::All),
            "A" | "a" => Ok(PairClass::Squares),
            "B" | "b" => Ok(PairClass::NonSquares),
            _ => Err(Error::precondition(alloc::format!(
                "unknown pair class `{s}` (expected all, A or B)"
            ))),
        }
    }
}

pub fn class_histogram(ctx: &FieldCtx, hist: &[u64], class: PairClass) -> Vec<u64> {
    ctx.elements()
        .map(|t| {
            let keep = match class {
                PairClass::All => true,
                PairClass::Squares => ctx.is_nonzero_square(t),
                PairClass::NonSquares => !ctx.is_square(t),
            };
            if keep {
                hist[t.index() as usize]
            } else {
                0
            }
        })
        .collect()
}

/// `nu(lambda) = #{(x1, y1, x2, y2) : both pairs in the class, ||x1 - y1|| ||x2 - y2|| = lambda}`
/// for every `lambda`, via multiplicative convolution of the class histogram.
pub fn nu_table(ctx: &FieldCtx, e: &PointSet, class: PairClass) -> Vec<u128> {
    let hist = distance_histogram(ctx, e);
    nu_table_from(ctx, &hist, class)
}

pub fn nu_table_from(ctx: &FieldCtx, hist: &[u64], class: PairClass) -> Vec<u128> {
    let r = class_histogram(ctx, hist, class);
    let mut out = vec![0u128; ctx.q() as usize];
    for t1 in ctx.nonzero_elements() {
        let a = r[t1.index() as usize] as u128;
        if a == 0 {
            continue;
        }
        for t2 in ctx.nonzero_elements() {
            out[ctx.mul(t1, t2).index() as usize] += a * r[t2.index() as usize] as u128;
        }
    }
    let zero = r[0] as u128;
    let total: u128 = r.iter().map(|&c| c as u128).sum();
    out[0] = 2 * zero * total - zero * zero;
    out
}

pub fn nu(ctx: &FieldCtx, e: &PointSet, lambda: FieldElement, class: PairClass) -> u128 {
    nu_table(ctx, e, class)[lambda.index() as usize]
}

/// `h(z) = #{(x, x') in E^2 : x' - s theta x = z}`.
fn transport_counts(ctx: &FieldCtx, e: &PointSet, s: FieldElement, theta: &Orthogonal2) -> Vec<u64> {
    let mut counts = vec![0u64; ctx.plane_size()];
    for x in e.iter() {
        let moved = theta.apply_scaled(ctx, s, x);
        for x2 in e.iter() {
            counts[ctx.point_index(ctx.vsub(x2, moved))] += 1;
        }
    }
    counts
}

/// `mu_g(z) = #{(x1, x2, x3, x4) in E^4 : g (x1, x2) + z = (x3, x4)}` over `z in F_q^4`.
pub fn mu_table(ctx: &FieldCtx, e: &PointSet, g: &G1Element, limits: &Limits) -> Result<CountTable> {
    limits.check_dim4(ctx.q())?;
    // The action is block diagonal, so the table factors as h1(z1) h2(z2).
    let h1 = transport_counts(ctx, e, g.r1, &g.theta1);
    let h2 = transport_counts(ctx, e, g.r2, &g.theta2);
    let mut counts = Vec::with_capacity(h1.len() * h2.len());
    for &a in &h1 {
        counts.extend(h2.iter().map(|&b| a * b));
    }
    Ok(CountTable {
        space: IndexSpace::Product,
        meta: TableMeta::Mu { g: *g },
        counts,
    })
}

/// `sum over g in G1, z in F_q^4 of mu_g(z)^2`, summed over the parameter tuples
/// of [`enumerate_g1`].
pub fn mu_energy(ctx: &FieldCtx, e: &PointSet, limits: &Limits) -> Result<u128> {
    limits.check_g1(ctx.q())?;
    let diff = DifferenceTable::new(ctx, e);
    let o2 = enumerate_o2(ctx);
    // sum_z mu_g(z)^2 = P(r1 theta1) P(r2 theta2) with P(M) = sum_w D(w) D(M w),
    // so the whole sum is sum_r A(r) A(1/r), A(r) = sum_theta P(r theta).
    let q = ctx.q() as usize;
    let mut a = vec![0u128; q];
    for r in ctx.nonzero_elements() {
        a[r.index() as usize] = o2
            .iter()
            .map(|theta| diff.correlate_orthogonal(ctx, r, theta))
            .sum();
    }
    let mut total = 0u128;
    for r in ctx.nonzero_elements() {
        let r_inv = ctx.inv(r)?;
        total += a[r.index() as usize] * a[r_inv.index() as usize];
    }
    Ok(total)
}

/// Compares the transform of the exact `mu_g` table with
/// `q^4 Fhat(xi) Fhat(-g^T xi)` for `F = E x E`.
pub fn mu_fourier_check(
    ctx: &FieldCtx,
    e: &PointSet,
    g: &G1Element,
    limits: &Limits,
) -> Result<IdentityResiduals> {
    let table = mu_table(ctx, e, g, limits)?;
    let data: Vec<f64> = table.iter().map(|&c| c as f64).collect();
    let muhat = fourier::transform(ctx, 4, &data);
    let fhat = fourier::dft_product_indicator(ctx, e, limits)?;
    let q4 = crate::powi(ctx.q() as f64, 4);
    let n = ctx.plane_size();
    let at = |t: &SpectralTable, a: Point, b: Point| -> Complex64 {
        t.values()[ctx.point_index(a) * n + ctx.point_index(b)]
    };
    let mut out = IdentityResiduals {
        residual: 0.0,
        conjugate_residual: 0.0,
        modulus_residual: 0.0,
    };
    for i in 0..n {
        let xi1 = ctx.point_at(i);
        for j in 0..n {
            let xi2 = ctx.point_at(j);
            let lhs = muhat[i * n + j];
            let (t1, t2) = g.apply_transpose(ctx, (xi1, xi2));
            let derived = at(&fhat, xi1, xi2) * at(&fhat, ctx.vneg(t1), ctx.vneg(t2)) * q4;
            let conj = at(&fhat, ctx.vneg(xi1), ctx.vneg(xi2)) * at(&fhat, t1, t2) * q4;
            out.residual = out.residual.max((lhs - derived).norm());
            out.conjugate_residual = out.conjugate_residual.max((lhs - conj).norm());
            out.modulus_residual = out.modulus_residual.max((lhs.norm() - derived.norm()).abs());
        }
    }
    Ok(out)
}

fn require_nonzero_square(ctx: &FieldCtx, r: FieldElement) -> Result<FieldElement> {
    if !ctx.is_nonzero_square(r) {
        return Err(Error::precondition(alloc::format!(
            "r = {r} must be a nonzero square"
        )));
    }
    ctx.canonical_sqrt(r)
        .ok_or_else(|| Error::precondition("square without a root"))
}

/// `eta_theta(z) = #{(u, v) in E^2 : u - sqrt(r) theta v = z}`, canonical root.
pub fn eta_table(
    ctx: &FieldCtx,
    e: &PointSet,
    r: FieldElement,
    theta: &Orthogonal2,
) -> Result<CountTable> {
    let s = require_nonzero_square(ctx, r)?;
    let mut counts = vec![0u64; ctx.plane_size()];
    for v in e.iter() {
        let moved = theta.apply_scaled(ctx, s, v);
        for u in e.iter() {
            counts[ctx.point_index(ctx.vsub(u, moved))] += 1;
        }
    }
    Ok(CountTable {
        space: IndexSpace::Plane,
        meta: TableMeta::Eta { r, theta: *theta },
        counts,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct EtaEnergy {
    /// `sum_{theta, z} eta_theta(z)`.
    pub sum: u128,
    /// `sum_{theta, z} eta_theta(z)^2`.
    pub sum_sq: u128,
    pub group_order: usize,
}

pub fn eta_energy(ctx: &FieldCtx, e: &PointSet, r: FieldElement) -> Result<EtaEnergy> {
    let s = require_nonzero_square(ctx, r)?;
    Ok(eta_energy_with_root(ctx, e, s))
}

/// Same sums with an explicit root `s` in place of the canonical `sqrt(r)`.
pub fn eta_energy_with_root(ctx: &FieldCtx, e: &PointSet, s: FieldElement) -> EtaEnergy {
    let o2 = enumerate_o2(ctx);
    let mut sum = 0u128;
    let mut sum_sq = 0u128;
    for theta in &o2 {
        let counts = transport_counts(ctx, e, s, theta);
        for &c in &counts {
            sum += c as u128;
            sum_sq += (c as u128) * (c as u128);
        }
    }
    EtaEnergy {
        sum,
        sum_sq,
        group_order: o2.len(),
    }
}

/// Counts of `(a, b, c, d) in E^4` with `||a - b|| = r ||c - d||`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct QuotientCount {
    pub total: u128,
    /// Restricted to `||c - d|| != 0`.
    pub nonzero: u128,
}

pub fn quotient_quadruples(ctx: &FieldCtx, e: &PointSet, r: FieldElement) -> QuotientCount {
    let hist = distance_histogram(ctx, e);
    quotient_quadruples_from(ctx, &hist, r)
}

pub fn quotient_quadruples_from(ctx: &FieldCtx, hist: &[u64], r: FieldElement) -> QuotientCount {
    let mut total = 0u128;
    let mut nonzero = 0u128;
    for t in ctx.elements() {
        let term = hist[ctx.mul(r, t).index() as usize] as u128 * hist[t.index() as usize] as u128;
        total += term;
        if !t.is_zero() {
            nonzero += term;
        }
    }
    QuotientCount { total, nonzero }
}

/// Quadruples with `||a - b|| = ||c - d|| = 0`, `a != b`, `c != d`.
pub fn isotropic_quadruples(ctx: &FieldCtx, e: &PointSet) -> u128 {
    let hist = distance_histogram(ctx, e);
    let off_diagonal = (hist[0] - e.len() as u64) as u128;
    off_diagonal * off_diagonal
}

/// Every element of `G1` is valid input to [`mu_table`]; exposed for callers
/// that sample group elements.
pub fn g1_elements(ctx: &FieldCtx, limits: &Limits) -> Result<Vec<G1Element>> {
    enumerate_g1(ctx, limits)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::{random_set, SetSpec};

    fn f(p: u32) -> FieldCtx {
        FieldCtx::new(p, 1).unwrap()
    }

    fn pts(ctx: &FieldCtx, list: &[(u32, u32)]) -> PointSet {
        PointSet::new(ctx, list.iter().map(|&(x, y)| ctx.point(x, y).unwrap()))
    }

    #[test]
    fn histograms() {
        let f3 = f(3);
        assert_eq!(&*distance_histogram(&f3, &PointSet::full(&f3)), &[9, 36, 36]);
        assert_eq!(&*distance_histogram(&f3, &pts(&f3, &[(1, 1)])), &[1, 0, 0]);
        let f7 = f(7);
        assert_eq!(&distance_histogram(&f7, &pts(&f7, &[(0, 0), (1, 0)]))[..2], &[2, 2]);
    }

    #[test]
    fn gamma_tables() {
        let f3 = f(3);
        let e = pts(&f3, &[(0, 0), (1, 0)]);
        let g = gamma_table(&f3, &e, FieldElement(2));
        let idx = |x, y| f3.point_index(f3.point(x, y).unwrap());
        assert_eq!(g[idx(0, 0)], 1);
        assert_eq!(g[idx(1, 0)], 2);
        assert_eq!(g[idx(2, 0)], 1);
        assert_eq!(g.total(), 4);
        let f7 = f(7);
        let e = random_set(&f7, 12, 5).unwrap();
        assert_eq!(gamma_table(&f7, &e, FieldElement::ONE)[0], 12);
        let all = PointSet::full(&f3);
        for l in f3.elements() {
            assert!(gamma_table(&f3, &all, l).iter().all(|&c| c == 9));
        }
    }

    #[test]
    fn direction_energies() {
        let f3 = f(3);
        let all = PointSet::full(&f3);
        assert_eq!(l2_directions(&f3, &all), 1296);
        assert_eq!(directions_group_energy(&f3, &all), 1458);
        let e = pts(&f3, &[(0, 0), (1, 0), (0, 1)]);
        assert_eq!(l2_directions(&f3, &e), 12);
        assert_eq!(directions_group_energy(&f3, &e), 30);
        assert_eq!(l2_directions(&f3, &pts(&f3, &[(2, 2)])), 0);
    }

    #[test]
    fn scale_energies() {
        let f3 = f(3);
        let all = PointSet::full(&f3);
        assert_eq!(l2_scales(&f3, &all).group, 1_062_882);
        assert_eq!(scale_energy_via_gamma(&f3, &all), 1_062_882);
        let f7 = f(7);
        assert_eq!(l2_scales(&f7, &pts(&f7, &[(3, 3)])).group, 6);
        let two = pts(&f7, &[(0, 0), (3, 1)]);
        assert_eq!(l2_scales(&f7, &two).group, scale_energy_via_gamma(&f7, &two));
    }

    #[test]
    fn literal_and_group_scale_counts_differ_by_degenerate_tuples() {
        for p in [3u32, 5, 7] {
            let ctx = f(p);
            for seed in 0..10 {
                let e = random_set(&ctx, 1 + seed as usize % 8, seed).unwrap();
                let s = l2_scales(&ctx, &e);
                let n4 = (e.len() as u128).pow(4);
                assert_eq!(s.group - s.literal, (p as u128 - 2) * n4);
            }
        }
    }

    #[test]
    fn nu_values() {
        let f3 = f(3);
        let all = PointSet::full(&f3);
        let b = nu_table(&f3, &all, PairClass::NonSquares);
        assert_eq!(b[1], 1296);
        assert_eq!(b[2], 0);
        assert_eq!(nu(&f3, &all, FieldElement(1), PairClass::All), 2592);
        let f7 = f(7);
        let e = random_set(&f7, 9, 2).unwrap();
        let hist = distance_histogram(&f7, &e);
        let t = nu_table(&f7, &e, PairClass::All);
        let nonzero: u128 = t[1..].iter().sum();
        let pairs = 81 - hist[0] as u128;
        assert_eq!(nonzero, pairs * pairs);
        let total: u128 = t.iter().sum();
        assert_eq!(total, 81 * 81);
    }

    #[test]
    fn mu_values() {
        let f3 = f(3);
        let limits = Limits::default();
        let all = PointSet::full(&f3);
        assert_eq!(mu_energy(&f3, &all, &limits).unwrap(), 68_024_448);
        let t = mu_table(&f3, &all, &G1Element::identity(), &limits).unwrap();
        assert!(t.iter().all(|&c| c == 81));
        let one = pts(&f3, &[(1, 2)]);
        assert_eq!(mu_energy(&f3, &one, &limits).unwrap(), 128);
        let t = mu_table(&f3, &one, &G1Element::identity(), &limits).unwrap();
        assert_eq!(t[0], 1);
        assert_eq!(t.total(), 1);
        let f7 = f(7);
        let e = random_set(&f7, 6, 9).unwrap();
        let g = g1_elements(&f7, &limits).unwrap()[77];
        assert_eq!(mu_table(&f7, &e, &g, &limits).unwrap().total(), 6u128.pow(4));
        let f17 = f(17);
        assert!(mu_table(&f17, &random_set(&f17, 3, 0).unwrap(), &g, &limits).is_err());
    }

    #[test]
    fn eta_values() {
        let f3 = f(3);
        let all = PointSet::full(&f3);
        let en = eta_energy(&f3, &all, FieldElement::ONE).unwrap();
        assert_eq!((en.sum, en.sum_sq, en.group_order), (648, 5832, 8));
        let f7 = f(7);
        let e = random_set(&f7, 10, 4).unwrap();
        let t = eta_table(&f7, &e, FieldElement::ONE, &Orthogonal2::IDENTITY).unwrap();
        assert_eq!(t[0], 10);
        let one = pts(&f7, &[(2, 5)]);
        assert_eq!(eta_energy(&f7, &one, FieldElement(2)).unwrap().sum, 16);
        assert!(eta_energy(&f7, &e, FieldElement(3)).is_err());
        assert!(eta_energy(&f7, &e, FieldElement(0)).is_err());
    }

    #[test]
    fn both_roots_give_the_same_eta_energy() {
        for p in [5u32, 7, 11] {
            let ctx = f(p);
            for seed in 0..5 {
                let e = random_set(&ctx, 2 * p as usize, seed).unwrap();
                for r in ctx.nonzero_elements().filter(|&r| ctx.is_square(r)) {
                    let (s, t) = ctx.sqrt(r).unwrap();
                    assert_eq!(
                        eta_energy_with_root(&ctx, &e, s),
                        eta_energy_with_root(&ctx, &e, t)
                    );
                }
            }
        }
    }

    #[test]
    fn quotient_counts() {
        let f3 = f(3);
        let q = quotient_quadruples(&f3, &PointSet::full(&f3), FieldElement::ONE);
        assert_eq!(q.total, 2673);
        assert_eq!(q.nonzero, 2592);
        let f7 = f(7);
        let two = pts(&f7, &[(0, 0), (1, 0)]);
        assert_eq!(quotient_quadruples(&f7, &two, FieldElement(2)).nonzero, 0);
        for seed in 0..10 {
            let e = random_set(&f7, 15, seed).unwrap();
            assert_eq!(isotropic_quadruples(&f7, &e), 0);
        }
    }

    #[test]
    fn gamma_identity_holds_in_derived_form() {
        let f7 = f(7);
        for seed in 0..10 {
            let e = random_set(&f7, 9, seed).unwrap();
            for l in f7.elements() {
                let r = gamma_fourier_check(&f7, &e, l);
                assert!(r.residual < 1e-9, "{r:?}");
                assert!(r.modulus_residual < 1e-9, "{r:?}");
            }
        }
        // The conjugated right-hand side agrees only in modulus.
        let e = random_set(&f7, 9, 0).unwrap();
        let r = gamma_fourier_check(&f7, &e, FieldElement(3));
        assert!(r.conjugate_residual > 1e-3, "{r:?}");
        let f3 = f(3);
        let r = gamma_fourier_check(&f3, &PointSet::full(&f3), FieldElement(2));
        assert!(r.residual < 1e-9 && r.conjugate_residual < 1e-9);
    }

    #[test]
    fn mu_identity_holds_in_derived_form() {
        let f3 = f(3);
        let limits = Limits::default();
        let g1 = g1_elements(&f3, &limits).unwrap();
        for (i, seed) in (0..6).enumerate() {
            let e = random_set(&f3, 2 + i, seed).unwrap();
            let r = mu_fourier_check(&f3, &e, &g1[(i * 37) % g1.len()], &limits).unwrap();
            assert!(r.residual < 1e-9, "{r:?}");
            assert!(r.modulus_residual < 1e-9, "{r:?}");
        }
        let e = random_set(&f3, 4, 1).unwrap();
        let r = mu_fourier_check(&f3, &e, &g1[5], &limits).unwrap();
        assert!(r.conjugate_residual > 1e-3, "{r:?}");
        let grid = SetSpec::All.generate(&f3, 0).unwrap();
        let r = mu_fourier_check(&f3, &grid, &G1Element::identity(), &limits).unwrap();
        assert!(r.residual < 1e-9);
    }
}
