//! Discrete Fourier transforms over `F_q^d` and the spectral quantities built on them.
//!
//! Convention: `fhat(xi) = q^{-d} sum_x f(x) chi(-x . xi)`, with inverse
//! `f(x) = sum_xi fhat(xi) chi(x . xi)`. The transform is applied one axis at
//! a time, `O(d q^{d+1})`, with a table of trace exponents for each product
//! `x xi`. A direct `O(q^{2d})` sum lives in [`crate::oracle`].

use alloc::vec;
use alloc::vec::Vec;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::field::{FieldCtx, FieldElement};
use crate::geometry::{Point, PointSet};
use crate::limits::Limits;

/// Transform values of an indicator over `F_q^dim`.
#[derive(Clone, Debug)]
pub struct SpectralTable {
    pub q: u32,
    pub dim: u8,
    /// Indexed like the source: first coordinate most significant.
    values: Vec<Complex64>,
    /// `|E|` for a plane indicator, `|E|^2` for `E x E`.
    pub source_size: u64,
}

impl SpectralTable {
    pub fn values(&self) -> &[Complex64] {
        &self.values
    }

    /// Value at a plane frequency (dimension 2 tables only).
    pub fn at(&self, ctx: &FieldCtx, xi: Point) -> Complex64 {
        debug_assert_eq!(self.dim, 2);
        self.values[ctx.point_index(xi)]
    }

    /// Value at `(xi1, xi2)` (dimension 4 tables only).
    pub fn at4(&self, ctx: &FieldCtx, xi1: Point, xi2: Point) -> Complex64 {
        debug_assert_eq!(self.dim, 4);
        self.values[ctx.point_index(xi1) * ctx.plane_size() + ctx.point_index(xi2)]
    }

    /// `sum_xi |fhat(xi)|^2`, equal to `q^{-dim} |source|` for an indicator.
    pub fn energy(&self) -> f64 {
        self.values.iter().map(|v| v.norm_sqr()).sum()
    }
}

/// `table[x * q + xi] = chi exponent of x xi`, an integer mod `p`.
fn phase_table(ctx: &FieldCtx) -> Vec<u32> {
    let q = ctx.q() as usize;
    let mut table = vec![0u32; q * q];
    for x in ctx.elements() {
        for xi in ctx.elements() {
            table[x.index() as usize * q + xi.index() as usize] = ctx.chi_exponent(ctx.mul(x, xi));
        }
    }
    table
}

fn transform_axes(ctx: &FieldCtx, dim: u32, data: &mut [Complex64], sign: i32) {
    let q = ctx.q() as usize;
    let p = ctx.p();
    debug_assert_eq!(data.len(), q.pow(dim));
    let phases = phase_table(ctx);
    let roots: Vec<Complex64> = (0..p).map(|j| ctx.root_of_unity(j)).collect();
    let mut line = vec![Complex64::new(0.0, 0.0); q];
    for axis in 0..dim {
        let stride = q.pow(dim - 1 - axis);
        let block = stride * q;
        for start in (0..data.len()).step_by(block) {
            for offset in 0..stride {
                let base = start + offset;
                for (x, slot) in line.iter_mut().enumerate() {
                    *slot = data[base + x * stride];
                }
                for xi in 0..q {
                    let mut acc = Complex64::new(0.0, 0.0);
                    for (x, v) in line.iter().enumerate() {
                        let e = phases[x * q + xi];
                        let e = if sign < 0 { (p - e) % p } else { e };
                        acc += v * roots[e as usize];
                    }
                    data[base + xi * stride] = acc;
                }
            }
        }
    }
}

/// Forward transform of a real table over `F_q^dim`.
pub fn transform(ctx: &FieldCtx, dim: u32, data: &[f64]) -> Vec<Complex64> {
    let mut buf: Vec<Complex64> = data.iter().map(|&v| Complex64::new(v, 0.0)).collect();
    transform_axes(ctx, dim, &mut buf, -1);
    let scale = crate::powi(ctx.q() as f64, dim as i32).recip();
    for v in &mut buf {
        *v *= scale;
    }
    buf
}

/// Inverse transform: `f(x) = sum_xi fhat(xi) chi(x . xi)`.
pub fn inverse_transform(ctx: &FieldCtx, dim: u32, values: &[Complex64]) -> Vec<Complex64> {
    let mut buf = values.to_vec();
    transform_axes(ctx, dim, &mut buf, 1);
    buf
}

/// `Ehat` over `F_q^2`.
pub fn dft_indicator(ctx: &FieldCtx, e: &PointSet) -> SpectralTable {
    let data: Vec<f64> = e.indicator().iter().map(|&b| if b { 1.0 } else { 0.0 }).collect();
    SpectralTable {
        q: ctx.q(),
        dim: 2,
        values: transform(ctx, 2, &data),
        source_size: e.len() as u64,
    }
}

/// Transform of the indicator of `E x E` over `F_q^4`.
pub fn dft_product_indicator(ctx: &FieldCtx, e: &PointSet, limits: &Limits) -> Result<SpectralTable> {
    limits.check_dim4(ctx.q())?;
    // The indicator factors, so its transform is the outer product of Ehat.
    let plane = dft_indicator(ctx, e);
    let mut values = Vec::with_capacity(plane.values.len().pow(2));
    for a in &plane.values {
        values.extend(plane.values.iter().map(|b| a * b));
    }
    Ok(SpectralTable {
        q: ctx.q(),
        dim: 4,
        values,
        source_size: (e.len() as u64).pow(2),
    })
}

/// `max_x |inverse(table)(x) - 1_E(x)|` for a plane table.
pub fn inverse_check(ctx: &FieldCtx, table: &SpectralTable, e: &PointSet) -> f64 {
    let back = inverse_transform(ctx, table.dim as u32, &table.values);
    back.iter()
        .zip(e.indicator())
        .map(|(v, &b)| (v - Complex64::new(if b { 1.0 } else { 0.0 }, 0.0)).norm())
        .fold(0.0, f64::max)
}

/// `sum_{||xi|| = t} |Ehat(xi)|^2` for every `t`.
pub fn spherical_sums(ctx: &FieldCtx, table: &SpectralTable) -> Vec<f64> {
    let mut out = vec![0.0; ctx.q() as usize];
    for (i, v) in table.values.iter().enumerate() {
        out[ctx.norm(ctx.point_at(i)).index() as usize] += v.norm_sqr();
    }
    out
}

pub fn spherical_average(ctx: &FieldCtx, table: &SpectralTable, t: FieldElement) -> f64 {
    spherical_sums(ctx, table)[t.index() as usize]
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SphericalMax {
    pub t: FieldElement,
    pub value: f64,
    /// `value q^3 / |E|^{3/2}`.
    pub ratio: f64,
}

/// Largest spherical sum over `t != 0`.
pub fn spherical_max_ratio(ctx: &FieldCtx, table: &SpectralTable) -> Result<SphericalMax> {
    if table.source_size == 0 {
        return Err(Error::precondition("spherical ratio needs a nonempty set"));
    }
    let sums = spherical_sums(ctx, table);
    let (t, value) = sums
        .iter()
        .enumerate()
        .skip(1)
        .fold((1usize, f64::MIN), |best, (t, &v)| if v > best.1 { (t, v) } else { best });
    let n = table.source_size as f64;
    let bound = n * libm::sqrt(n) * crate::powi(ctx.q() as f64, -3);
    Ok(SphericalMax {
        t: FieldElement(t as u32),
        value,
        ratio: value / bound,
    })
}

/// `h(s) = #{x in E : m . x = s}`.
pub fn projection_counts(ctx: &FieldCtx, e: &PointSet, m: Point) -> Vec<u64> {
    let mut h = vec![0u64; ctx.q() as usize];
    for x in e.iter() {
        h[ctx.dot(m, x).index() as usize] += 1;
    }
    h
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct LineEnergy {
    /// `sum_{s} |Ehat(s xi)|^2`.
    pub spectral: f64,
    /// `q^{-3} #{(x, y) in E^2 : xi . x = xi . y}`.
    pub combinatorial: f64,
    pub pair_count: u128,
}

pub fn line_energy(ctx: &FieldCtx, e: &PointSet, table: &SpectralTable, xi: Point) -> Result<LineEnergy> {
    if xi.is_zero() {
        return Err(Error::precondition("line energy needs xi != 0"));
    }
    let spectral = ctx
        .elements()
        .map(|s| table.at(ctx, ctx.vscale(s, xi)).norm_sqr())
        .sum();
    let pair_count: u128 = projection_counts(ctx, e, xi)
        .iter()
        .map(|&c| (c as u128) * (c as u128))
        .sum();
    Ok(LineEnergy {
        spectral,
        combinatorial: pair_count as f64 * crate::powi(ctx.q() as f64, -3),
        pair_count,
    })
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct FourthMoment {
    /// `sum_{lambda} |Ehat(lambda m)|^4`.
    pub spectral: f64,
    /// `q^{-7} #{(x1..x4) : m . (x1 + x2 - x3 - x4) = 0}`.
    pub combinatorial: f64,
    pub count: u128,
    /// `spectral / (|E|^3 q^{-6})`.
    pub ratio: f64,
}

pub fn lambda_fourth_moment(
    ctx: &FieldCtx,
    e: &PointSet,
    table: &SpectralTable,
    m: Point,
) -> Result<FourthMoment> {
    if m.is_zero() {
        return Err(Error::precondition("fourth moment needs m != 0"));
    }
    if e.is_empty() {
        return Err(Error::precondition("fourth moment needs a nonempty set"));
    }
    let spectral: f64 = ctx
        .elements()
        .map(|l| table.at(ctx, ctx.vscale(l, m)).norm_sqr())
        .map(|v| v * v)
        .sum();
    let h = projection_counts(ctx, e, m);
    // Additive self-convolution of the projection counts, then its square sum.
    let mut conv = vec![0u128; ctx.q() as usize];
    for a in ctx.elements() {
        let ha = h[a.index() as usize] as u128;
        if ha == 0 {
            continue;
        }
        for b in ctx.elements() {
            conv[ctx.add(a, b).index() as usize] += ha * h[b.index() as usize] as u128;
        }
    }
    let count: u128 = conv.iter().map(|&c| c * c).sum();
    let q = ctx.q() as f64;
    let n = e.len() as f64;
    Ok(FourthMoment {
        spectral,
        combinatorial: count as f64 * crate::powi(q, -7),
        count,
        ratio: spectral / (crate::powi(n, 3) * crate::powi(q, -6)),
    })
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct LPair {
    /// `sum_{lambda} |Ehat(lambda m1)|^2 |Ehat(lambda m2)|^2`.
    pub value: f64,
    /// `value / (|E|^3 q^{-6})`.
    pub ratio: f64,
}

pub fn l_pair(ctx: &FieldCtx, e: &PointSet, table: &SpectralTable, m1: Point, m2: Point) -> Result<LPair> {
    if m1.is_zero() || m2.is_zero() {
        return Err(Error::precondition("l_pair needs nonzero directions"));
    }
    if e.is_empty() {
        return Err(Error::precondition("l_pair needs a nonempty set"));
    }
    let value: f64 = ctx
        .elements()
        .map(|l| {
            table.at(ctx, ctx.vscale(l, m1)).norm_sqr() * table.at(ctx, ctx.vscale(l, m2)).norm_sqr()
        })
        .sum();
    let q = ctx.q() as f64;
    Ok(LPair {
        value,
        ratio: value / (crate::powi(e.len() as f64, 3) * crate::powi(q, -6)),
    })
}
