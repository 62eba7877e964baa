//! The orthogonal group `O(2, F_q)`, the product group `G1` acting on
//! `F_q^2 x F_q^2`, the similarity group `F_q x F_q^2`, and constructive
//! rigidity: recovering the group element that carries one configuration to
//! another.

use alloc::format;
use alloc::vec::Vec;
use core::fmt;

use crate::error::{Error, Result};
use crate::field::{FieldCtx, FieldElement};
use crate::geometry::Point;
use crate::limits::Limits;

/// A 2x2 matrix `[[a, b], [c, d]]` with `M^T M = I`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Orthogonal2 {
    pub a: FieldElement,
    pub b: FieldElement,
    pub c: FieldElement,
    pub d: FieldElement,
}

impl fmt::Display for Orthogonal2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[[{},{}],[{},{}]]", self.a, self.b, self.c, self.d)
    }
}

impl Orthogonal2 {
    pub const IDENTITY: Orthogonal2 = Orthogonal2 {
        a: FieldElement::ONE,
        b: FieldElement::ZERO,
        c: FieldElement::ZERO,
        d: FieldElement::ONE,
    };

    /// Rotation `[[a, -b], [b, a]]`; caller guarantees `a^2 + b^2 = 1`.
    pub fn rotation(ctx: &FieldCtx, a: FieldElement, b: FieldElement) -> Self {
        Orthogonal2 {
            a,
            b: ctx.neg(b),
            c: b,
            d: a,
        }
    }

    /// Reflection `[[a, b], [b, -a]]`; caller guarantees `a^2 + b^2 = 1`.
    pub fn reflection(ctx: &FieldCtx, a: FieldElement, b: FieldElement) -> Self {
        Orthogonal2 {
            a,
            b,
            c: b,
            d: ctx.neg(a),
        }
    }

    #[inline]
    pub fn apply(&self, ctx: &FieldCtx, v: Point) -> Point {
        Point::new(
            ctx.add(ctx.mul(self.a, v.x), ctx.mul(self.b, v.y)),
            ctx.add(ctx.mul(self.c, v.x), ctx.mul(self.d, v.y)),
        )
    }

    /// `s * M v`.
    #[inline]
    pub fn apply_scaled(&self, ctx: &FieldCtx, s: FieldElement, v: Point) -> Point {
        ctx.vscale(s, self.apply(ctx, v))
    }

    pub fn transpose(&self) -> Self {
        Orthogonal2 {
            a: self.a,
            b: self.c,
            c: self.b,
            d: self.d,
        }
    }

    /// Matrix product `self * other`.
    pub fn compose(&self, ctx: &FieldCtx, other: &Orthogonal2) -> Self {
        let m = |x: FieldElement, y: FieldElement, z: FieldElement, w: FieldElement| {
            ctx.add(ctx.mul(x, y), ctx.mul(z, w))
        };
        Orthogonal2 {
            a: m(self.a, other.a, self.b, other.c),
            b: m(self.a, other.b, self.b, other.d),
            c: m(self.c, other.a, self.d, other.c),
            d: m(self.c, other.b, self.d, other.d),
        }
    }

    pub fn negate(&self, ctx: &FieldCtx) -> Self {
        Orthogonal2 {
            a: ctx.neg(self.a),
            b: ctx.neg(self.b),
            c: ctx.neg(self.c),
            d: ctx.neg(self.d),
        }
    }

    pub fn det(&self, ctx: &FieldCtx) -> FieldElement {
        ctx.sub(ctx.mul(self.a, self.d), ctx.mul(self.b, self.c))
    }

    pub fn is_orthogonal(&self, ctx: &FieldCtx) -> bool {
        let t = self.transpose().compose(ctx, self);
        t == Orthogonal2::IDENTITY
    }

    pub fn is_rotation(&self, ctx: &FieldCtx) -> bool {
        self.det(ctx) == FieldElement::ONE
    }
}

/// Solutions of `a^2 + b^2 = 1` in index order.
fn unit_circle(ctx: &FieldCtx) -> Vec<(FieldElement, FieldElement)> {
    let mut out = Vec::new();
    for a in ctx.elements() {
        for b in ctx.elements() {
            if ctx.add(ctx.square(a), ctx.square(b)) == FieldElement::ONE {
                out.push((a, b));
            }
        }
    }
    out
}

/// `SO(2, F_q)`: rotations `[[a, -b], [b, a]]` with `a^2 + b^2 = 1`.
pub fn enumerate_so2(ctx: &FieldCtx) -> Vec<Orthogonal2> {
    unit_circle(ctx)
        .into_iter()
        .map(|(a, b)| Orthogonal2::rotation(ctx, a, b))
        .collect()
}

/// `O(2, F_q)`: the rotations followed by the reflection coset.
pub fn enumerate_o2(ctx: &FieldCtx) -> Vec<Orthogonal2> {
    let circle = unit_circle(ctx);
    let mut out: Vec<Orthogonal2> = circle
        .iter()
        .map(|&(a, b)| Orthogonal2::rotation(ctx, a, b))
        .collect();
    out.extend(circle.iter().map(|&(a, b)| Orthogonal2::reflection(ctx, a, b)));
    out
}

/// All `theta` in `O(2)` with `theta v = w`, in enumeration order.
pub fn solve_orthogonal(ctx: &FieldCtx, v: Point, w: Point) -> Result<Vec<Orthogonal2>> {
    solve_orthogonal_in(ctx, &enumerate_o2(ctx), v, w)
}

pub fn solve_orthogonal_in(
    ctx: &FieldCtx,
    group: &[Orthogonal2],
    v: Point,
    w: Point,
) -> Result<Vec<Orthogonal2>> {
    if ctx.norm(v) != ctx.norm(w) {
        return Err(Error::precondition(format!(
            "||{v}|| != ||{w}||, no orthogonal map exists"
        )));
    }
    Ok(group
        .iter()
        .filter(|t| t.apply(ctx, v) == w)
        .copied()
        .collect())
}

/// `(theta, z)` with `theta u + z = x` and `theta v + z = y`.
///
/// Rejects isotropic nonzero differences: those lie outside the anisotropic
/// rigidity statement this is meant to realise.
pub fn find_isometry(
    ctx: &FieldCtx,
    u: Point,
    v: Point,
    x: Point,
    y: Point,
) -> Result<(Orthogonal2, Point)> {
    let d1 = ctx.vsub(u, v);
    let d2 = ctx.vsub(x, y);
    if d1.is_zero() || d2.is_zero() {
        if d1.is_zero() && d2.is_zero() {
            return Ok((Orthogonal2::IDENTITY, ctx.vsub(x, u)));
        }
        return Err(Error::precondition(
            "one pair coincides and the other does not",
        ));
    }
    if ctx.norm(d1) != ctx.norm(d2) {
        return Err(Error::precondition("||u - v|| != ||x - y||"));
    }
    if ctx.norm(d1).is_zero() {
        return Err(Error::precondition(
            "isotropic difference: outside rigidity guarantee",
        ));
    }
    let theta = *solve_orthogonal(ctx, d1, d2)?
        .first()
        .ok_or_else(|| Error::precondition("no orthogonal map found"))?;
    let z = ctx.vsub(x, theta.apply(ctx, u));
    Ok((theta, z))
}

/// `|{theta in O(2) : theta v = v}|`.
pub fn stabilizer_size(ctx: &FieldCtx, v: Point) -> usize {
    enumerate_o2(ctx)
        .iter()
        .filter(|t| t.apply(ctx, v) == v)
        .count()
}

/// Linear part `diag(r1 theta1, r2 theta2)` of an element of `G1`, with `r1 r2 = 1`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct G1Element {
    pub r1: FieldElement,
    pub theta1: Orthogonal2,
    pub r2: FieldElement,
    pub theta2: Orthogonal2,
}

impl G1Element {
    pub fn identity() -> Self {
        G1Element {
            r1: FieldElement::ONE,
            theta1: Orthogonal2::IDENTITY,
            r2: FieldElement::ONE,
            theta2: Orthogonal2::IDENTITY,
        }
    }

    pub fn apply(&self, ctx: &FieldCtx, pair: (Point, Point)) -> (Point, Point) {
        (
            self.theta1.apply_scaled(ctx, self.r1, pair.0),
            self.theta2.apply_scaled(ctx, self.r2, pair.1),
        )
    }

    /// Action of the transposed block matrix.
    pub fn apply_transpose(&self, ctx: &FieldCtx, pair: (Point, Point)) -> (Point, Point) {
        (
            self.theta1.transpose().apply_scaled(ctx, self.r1, pair.0),
            self.theta2.transpose().apply_scaled(ctx, self.r2, pair.1),
        )
    }

    pub fn compose(&self, ctx: &FieldCtx, other: &G1Element) -> Self {
        G1Element {
            r1: ctx.mul(self.r1, other.r1),
            theta1: self.theta1.compose(ctx, &other.theta1),
            r2: ctx.mul(self.r2, other.r2),
            theta2: self.theta2.compose(ctx, &other.theta2),
        }
    }

    pub fn inverse(&self, ctx: &FieldCtx) -> Self {
        // r1, r2 are nonzero by construction.
        G1Element {
            r1: ctx.inv(self.r1).unwrap_or(FieldElement::ZERO),
            theta1: self.theta1.transpose(),
            r2: ctx.inv(self.r2).unwrap_or(FieldElement::ZERO),
            theta2: self.theta2.transpose(),
        }
    }

    pub fn is_valid(&self, ctx: &FieldCtx) -> bool {
        ctx.mul(self.r1, self.r2) == FieldElement::ONE
            && self.theta1.is_orthogonal(ctx)
            && self.theta2.is_orthogonal(ctx)
    }
}

/// Parameter tuples `(r1, theta1, r1^-1, theta2)`, `(q - 1) |O(2)|^2` of them.
///
/// Each block matrix arises from exactly two tuples, `(r1, theta1, r2, theta2)`
/// and `(-r1, -theta1, -r2, -theta2)`; sums over `G1` in this crate run over
/// the tuples.
pub fn enumerate_g1(ctx: &FieldCtx, limits: &Limits) -> Result<Vec<G1Element>> {
    limits.check_g1(ctx.q())?;
    let o2 = enumerate_o2(ctx);
    let mut out = Vec::with_capacity((ctx.q() as usize - 1) * o2.len() * o2.len());
    for r1 in ctx.nonzero_elements() {
        let r2 = ctx.inv(r1)?;
        for &theta1 in &o2 {
            for &theta2 in &o2 {
                out.push(G1Element {
                    r1,
                    theta1,
                    r2,
                    theta2,
                });
            }
        }
    }
    Ok(out)
}

/// An element of `G1 x F_q^4` acting by `(x1, x2) -> (r1 theta1 x1 + z1, r2 theta2 x2 + z2)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ProductSimilarity {
    pub linear: G1Element,
    pub z1: Point,
    pub z2: Point,
}

impl ProductSimilarity {
    pub fn identity() -> Self {
        ProductSimilarity {
            linear: G1Element::identity(),
            z1: Point::ORIGIN,
            z2: Point::ORIGIN,
        }
    }

    pub fn apply_pair(&self, ctx: &FieldCtx, pair: (Point, Point)) -> (Point, Point) {
        let (a, b) = self.linear.apply(ctx, pair);
        (ctx.vadd(a, self.z1), ctx.vadd(b, self.z2))
    }

    /// Affine composition: `(self o other)(x) = self(other(x))`.
    pub fn compose(&self, ctx: &FieldCtx, other: &ProductSimilarity) -> Self {
        let (t1, t2) = self.linear.apply(ctx, (other.z1, other.z2));
        ProductSimilarity {
            linear: self.linear.compose(ctx, &other.linear),
            z1: ctx.vadd(t1, self.z1),
            z2: ctx.vadd(t2, self.z2),
        }
    }

    pub fn inverse(&self, ctx: &FieldCtx) -> Self {
        let linear = self.linear.inverse(ctx);
        let (t1, t2) = linear.apply(ctx, (self.z1, self.z2));
        ProductSimilarity {
            linear,
            z1: ctx.vneg(t1),
            z2: ctx.vneg(t2),
        }
    }
}

/// Given `||x1-y1|| ||x2-y2|| = ||x3-y3|| ||x4-y4|| != 0` with
/// `||x4-y4|| / ||x2-y2||` a square, builds `g` with `g(x1, x2) = (x3, x4)` and
/// `g(y1, y2) = (y3, y4)`.
///
/// With `t` the canonical root of the ratio, `theta1` carries
/// `(x1 - y1) / t` to `x3 - y3` and `theta2` carries `t (x2 - y2)` to `x4 - y4`.
pub fn product_rigid_motion(ctx: &FieldCtx, pts: [Point; 8]) -> Result<ProductSimilarity> {
    let [x1, y1, x2, y2, x3, y3, x4, y4] = pts;
    let (d1, d2, d3, d4) = (
        ctx.vsub(x1, y1),
        ctx.vsub(x2, y2),
        ctx.vsub(x3, y3),
        ctx.vsub(x4, y4),
    );
    let (n1, n2, n3, n4) = (ctx.norm(d1), ctx.norm(d2), ctx.norm(d3), ctx.norm(d4));
    let lhs = ctx.mul(n1, n2);
    if lhs.is_zero() || lhs != ctx.mul(n3, n4) {
        return Err(Error::precondition(
            "distance products must be equal and nonzero",
        ));
    }
    let ratio = ctx.div(n4, n2)?;
    let t = ctx
        .canonical_sqrt(ratio)
        .ok_or_else(|| Error::precondition("||x4-y4|| / ||x2-y2|| is not a square"))?;
    let t_inv = ctx.inv(t)?;
    let o2 = enumerate_o2(ctx);
    let theta1 = *solve_orthogonal_in(ctx, &o2, ctx.vscale(t_inv, d1), d3)?
        .first()
        .ok_or_else(|| Error::precondition("no theta1"))?;
    let theta2 = *solve_orthogonal_in(ctx, &o2, ctx.vscale(t, d2), d4)?
        .first()
        .ok_or_else(|| Error::precondition("no theta2"))?;
    let linear = G1Element {
        r1: t_inv,
        theta1,
        r2: t,
        theta2,
    };
    let (a, b) = linear.apply(ctx, (x1, x2));
    Ok(ProductSimilarity {
        linear,
        z1: ctx.vsub(x3, a),
        z2: ctx.vsub(x4, b),
    })
}

/// An element `(lambda, z)` of `F_q x F_q^2`, acting by `v -> lambda v + z`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Similarity {
    pub lambda: FieldElement,
    pub z: Point,
}

impl Similarity {
    pub fn identity() -> Self {
        Similarity {
            lambda: FieldElement::ONE,
            z: Point::ORIGIN,
        }
    }

    pub fn apply(&self, ctx: &FieldCtx, v: Point) -> Point {
        ctx.vadd(ctx.vscale(self.lambda, v), self.z)
    }

    /// Direct-product law `(lambda, z1) * (beta, z2) = (lambda beta, z1 + z2)`.
    pub fn compose(&self, ctx: &FieldCtx, other: &Similarity) -> Self {
        Similarity {
            lambda: ctx.mul(self.lambda, other.lambda),
            z: ctx.vadd(self.z, other.z),
        }
    }

    pub fn inverse(&self, ctx: &FieldCtx) -> Result<Self> {
        Ok(Similarity {
            lambda: ctx.inv(self.lambda)?,
            z: ctx.vneg(self.z),
        })
    }
}
