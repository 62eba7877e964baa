//! Points and point sets in `F_q^2`, the quadratic form `||v|| = v1^2 + v2^2`,
//! and the value sets built from differences of a set.

use alloc::collections::BTreeSet;
use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;
use core::str::FromStr;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::counting::{self, DifferenceTable};
use crate::error::{Error, Result};
use crate::field::{FieldCtx, FieldElement};

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Point {
    pub x: FieldElement,
    pub y: FieldElement,
}

impl Point {
    pub const ORIGIN: Point = Point {
        x: FieldElement::ZERO,
        y: FieldElement::ZERO,
    };

    pub fn new(x: FieldElement, y: FieldElement) -> Self {
        Point { x, y }
    }

    pub fn is_zero(self) -> bool {
        self.x.is_zero() && self.y.is_zero()
    }
}

impl fmt::Display for Point {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.x, self.y)
    }
}

#[cfg(feature = "serde")]
impl serde::Serialize for Point {
    fn serialize<S: serde::Serializer>(&self, s: S) -> core::result::Result<S::Ok, S::Error> {
        [self.x.index(), self.y.index()].serialize(s)
    }
}

/// Vector arithmetic on `F_q^2`.
impl FieldCtx {
    #[inline]
    pub fn point(&self, x: u32, y: u32) -> Result<Point> {
        Ok(Point::new(self.element(x)?, self.element(y)?))
    }

    /// Linear index `x * q + y` of a point in the `q x q` grid.
    #[inline]
    pub fn point_index(&self, v: Point) -> usize {
        v.x.index() as usize * self.q() as usize + v.y.index() as usize
    }

    #[inline]
    pub fn point_at(&self, index: usize) -> Point {
        let q = self.q() as usize;
        Point::new(FieldElement((index / q) as u32), FieldElement((index % q) as u32))
    }

    pub fn plane_size(&self) -> usize {
        let q = self.q() as usize;
        q * q
    }

    pub fn points(&self) -> impl Iterator<Item = Point> + '_ {
        (0..self.plane_size()).map(move |i| self.point_at(i))
    }

    #[inline]
    pub fn vadd(&self, a: Point, b: Point) -> Point {
        Point::new(self.add(a.x, b.x), self.add(a.y, b.y))
    }

    #[inline]
    pub fn vsub(&self, a: Point, b: Point) -> Point {
        Point::new(self.sub(a.x, b.x), self.sub(a.y, b.y))
    }

    #[inline]
    pub fn vneg(&self, a: Point) -> Point {
        Point::new(self.neg(a.x), self.neg(a.y))
    }

    #[inline]
    pub fn vscale(&self, s: FieldElement, a: Point) -> Point {
        Point::new(self.mul(s, a.x), self.mul(s, a.y))
    }

    #[inline]
    pub fn dot(&self, a: Point, b: Point) -> FieldElement {
        self.add(self.mul(a.x, b.x), self.mul(a.y, b.y))
    }

    /// `||v|| = v1^2 + v2^2`.
    #[inline]
    pub fn norm(&self, v: Point) -> FieldElement {
        self.dot(v, v)
    }
}

/// A deduplicated subset `E` of `F_q^2` with O(1) membership.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PointSet {
    q: u32,
    members: Vec<Point>,
    indicator: Vec<bool>,
}

impl PointSet {
    pub fn new(ctx: &FieldCtx, points: impl IntoIterator<Item = Point>) -> Self {
        let mut indicator = vec![false; ctx.plane_size()];
        for v in points {
            indicator[ctx.point_index(v)] = true;
        }
        Self::from_indicator(ctx, indicator)
    }

    pub fn from_indicator(ctx: &FieldCtx, indicator: Vec<bool>) -> Self {
        assert_eq!(indicator.len(), ctx.plane_size());
        let members = indicator
            .iter()
            .enumerate()
            .filter(|(_, &b)| b)
            .map(|(i, _)| ctx.point_at(i))
            .collect();
        PointSet {
            q: ctx.q(),
            members,
            indicator,
        }
    }

    pub fn empty(ctx: &FieldCtx) -> Self {
        Self::from_indicator(ctx, vec![false; ctx.plane_size()])
    }

    pub fn full(ctx: &FieldCtx) -> Self {
        Self::from_indicator(ctx, vec![true; ctx.plane_size()])
    }

    pub fn q(&self) -> u32 {
        self.q
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    /// Members in increasing index order.
    pub fn members(&self) -> &[Point] {
        &self.members
    }

    pub fn iter(&self) -> impl Iterator<Item = Point> + '_ {
        self.members.iter().copied()
    }

    pub fn indicator(&self) -> &[bool] {
        &self.indicator
    }

    pub fn contains(&self, v: Point) -> bool {
        let q = self.q as usize;
        self.indicator[v.x.index() as usize * q + v.y.index() as usize]
    }

    pub fn translate(&self, ctx: &FieldCtx, z: Point) -> Self {
        PointSet::new(ctx, self.iter().map(|v| ctx.vadd(v, z)))
    }
}

/// A subset of `F_q`, stored as membership flags.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ValueSet {
    flags: Vec<bool>,
}

impl ValueSet {
    pub fn empty(q: u32) -> Self {
        ValueSet {
            flags: vec![false; q as usize],
        }
    }

    pub fn from_flags(flags: Vec<bool>) -> Self {
        ValueSet { flags }
    }

    pub fn from_elements(q: u32, elems: impl IntoIterator<Item = FieldElement>) -> Self {
        let mut s = Self::empty(q);
        for e in elems {
            s.insert(e);
        }
        s
    }

    pub fn insert(&mut self, e: FieldElement) {
        self.flags[e.index() as usize] = true;
    }

    pub fn contains(&self, e: FieldElement) -> bool {
        self.flags[e.index() as usize]
    }

    pub fn len(&self) -> usize {
        self.flags.iter().filter(|&&b| b).count()
    }

    pub fn is_empty(&self) -> bool {
        !self.flags.iter().any(|&b| b)
    }

    pub fn flags(&self) -> &[bool] {
        &self.flags
    }

    pub fn iter(&self) -> impl Iterator<Item = FieldElement> + '_ {
        self.flags
            .iter()
            .enumerate()
            .filter(|(_, &b)| b)
            .map(|(i, _)| FieldElement(i as u32))
    }

    pub fn to_vec(&self) -> Vec<u32> {
        self.iter().map(u32::from).collect()
    }

    pub fn is_subset(&self, other: &ValueSet) -> bool {
        self.flags.iter().zip(&other.flags).all(|(&a, &b)| !a || b)
    }
}

fn require_nonempty(e: &PointSet, min: usize) -> Result<()> {
    if e.len() < min {
        Err(Error::precondition(format!(
            "set must have at least {min} point(s), has {}",
            e.len()
        )))
    } else {
        Ok(())
    }
}

/// `Delta(E) = { ||x - y|| : x, y in E }`, including 0.
pub fn distance_set(ctx: &FieldCtx, e: &PointSet) -> Result<ValueSet> {
    require_nonempty(e, 1)?;
    let hist = counting::distance_histogram(ctx, e);
    Ok(ValueSet::from_flags(hist.iter().map(|&c| c > 0).collect()))
}

fn combine(
    ctx: &FieldCtx,
    a: &ValueSet,
    b: &ValueSet,
    op: impl Fn(FieldElement, FieldElement) -> Option<FieldElement>,
) -> ValueSet {
    let mut out = ValueSet::empty(ctx.q());
    for x in a.iter() {
        for y in b.iter() {
            if let Some(v) = op(x, y) {
                out.insert(v);
            }
        }
    }
    out
}

pub fn set_product(ctx: &FieldCtx, a: &ValueSet, b: &ValueSet) -> ValueSet {
    combine(ctx, a, b, |x, y| Some(ctx.mul(x, y)))
}

/// `{ a / b : a in A, b in B, b != 0 }`. Empty when `B` holds only zero.
pub fn set_quotient(ctx: &FieldCtx, a: &ValueSet, b: &ValueSet) -> ValueSet {
    combine(ctx, a, b, |x, y| ctx.div(x, y).ok())
}

pub fn set_sum(ctx: &FieldCtx, a: &ValueSet, b: &ValueSet) -> ValueSet {
    combine(ctx, a, b, |x, y| Some(ctx.add(x, y)))
}

/// `{ v : ||v|| = t }`.
pub fn sphere(ctx: &FieldCtx, t: FieldElement) -> PointSet {
    PointSet::new(ctx, ctx.points().filter(|&v| ctx.norm(v) == t))
}

/// Ordered pairs `(a, b)` in `E x E` with `||a - b|| = 0`, diagonal included.
pub fn zero_distance_pairs(ctx: &FieldCtx, e: &PointSet) -> u64 {
    if e.is_empty() {
        return 0;
    }
    counting::distance_histogram(ctx, e)[0]
}

/// Scales a nonzero vector so its first nonzero coordinate is 1.
pub fn canonical_direction(ctx: &FieldCtx, w: Point) -> Option<Point> {
    if w.is_zero() {
        return None;
    }
    let lead = if w.x.is_zero() { w.y } else { w.x };
    let s = ctx.inv(lead).ok()?;
    Some(ctx.vscale(s, w))
}

/// Projective classes of nonzero differences, as sorted canonical representatives.
pub fn direction_set(ctx: &FieldCtx, e: &PointSet) -> Result<Vec<Point>> {
    require_nonempty(e, 2)?;
    let diff = DifferenceTable::new(ctx, e);
    let mut dirs = BTreeSet::new();
    for (i, &c) in diff.counts().iter().enumerate() {
        if c > 0 {
            if let Some(d) = canonical_direction(ctx, ctx.point_at(i)) {
                dirs.insert(d);
            }
        }
    }
    Ok(dirs.into_iter().collect())
}

/// Scales `lambda` with `u1 - v1 = lambda (u2 - v2)` for some `u2 != v2`.
pub fn scale_set(ctx: &FieldCtx, e: &PointSet) -> Result<ValueSet> {
    require_nonempty(e, 2)?;
    let diff = DifferenceTable::new(ctx, e);
    let nonzero: Vec<Point> = diff
        .support()
        .filter(|w| !w.is_zero())
        .collect();
    let mut out = ValueSet::empty(ctx.q());
    // u1 = v1 gives lambda = 0 against any nonzero denominator.
    out.insert(FieldElement::ZERO);
    for lambda in ctx.nonzero_elements() {
        if nonzero.iter().any(|&w| diff.get(ctx, ctx.vscale(lambda, w)) > 0) {
            out.insert(lambda);
        }
    }
    Ok(out)
}

/// Ordered-pair counts `(|A|, |B|, |Z|)` split by the square class of the distance:
/// nonzero squares, non-squares, zero.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SquareClassPairs {
    pub squares: u64,
    pub non_squares: u64,
    pub zero: u64,
}

pub fn square_class_pairs(ctx: &FieldCtx, e: &PointSet) -> SquareClassPairs {
    let hist = counting::distance_histogram(ctx, e);
    let mut out = SquareClassPairs {
        squares: 0,
        non_squares: 0,
        zero: 0,
    };
    for t in ctx.elements() {
        let c = hist[t.index() as usize];
        if t.is_zero() {
            out.zero += c;
        } else if ctx.is_square(t) {
            out.squares += c;
        } else {
            out.non_squares += c;
        }
    }
    out
}

/// Deterministic point-set recipe. Grammar:
///
/// ```text
/// all | random:<N> | grid | line:<a>,<b>,<c> | sphere:<t> | points:(x,y);(x,y);...
/// ```
///
/// Coordinates and coefficients are canonical element indices. `grid` is
/// `F_p x F_p` for the prime subfield `F_p` of `F_q`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SetSpec {
    All,
    Random(usize),
    Grid,
    Line { a: u32, b: u32, c: u32 },
    Sphere(u32),
    Points(Vec<(u32, u32)>),
}

impl SetSpec {
    /// Whether the generated set depends on the seed.
    pub fn is_random(&self) -> bool {
        matches!(self, SetSpec::Random(_))
    }

    pub fn generate(&self, ctx: &FieldCtx, seed: u64) -> Result<PointSet> {
        match *self {
            SetSpec::All => Ok(PointSet::full(ctx)),
            SetSpec::Random(n) => random_set(ctx, n, seed),
            SetSpec::Grid => {
                let p = ctx.p();
                Ok(PointSet::new(
                    ctx,
                    (0..p).flat_map(|x| (0..p).map(move |y| (x, y))).map(|(x, y)| {
                        Point::new(FieldElement(x), FieldElement(y))
                    }),
                ))
            }
            SetSpec::Line { a, b, c } => {
                let (a, b, c) = (ctx.element(a)?, ctx.element(b)?, ctx.element(c)?);
                if a.is_zero() && b.is_zero() {
                    return Err(Error::SetSpec {
                        spec: self.to_string(),
                        reason: "a and b cannot both be zero".into(),
                    });
                }
                Ok(PointSet::new(
                    ctx,
                    ctx.points()
                        .filter(|v| ctx.add(ctx.mul(a, v.x), ctx.mul(b, v.y)) == c),
                ))
            }
            SetSpec::Sphere(t) => Ok(sphere(ctx, ctx.element(t)?)),
            SetSpec::Points(ref pts) => {
                let pts = pts
                    .iter()
                    .map(|&(x, y)| ctx.point(x, y))
                    .collect::<Result<Vec<_>>>()?;
                Ok(PointSet::new(ctx, pts))
            }
        }
    }
}

/// Calls `f` on every nonempty subset of the plane with at most `max_size`
/// points, in lexicographic order of point indices.
pub fn for_each_subset(ctx: &FieldCtx, max_size: usize, mut f: impl FnMut(&PointSet)) {
    fn rec(
        ctx: &FieldCtx,
        start: usize,
        max: usize,
        chosen: &mut Vec<usize>,
        f: &mut dyn FnMut(&PointSet),
    ) {
        for i in start..ctx.plane_size() {
            chosen.push(i);
            f(&PointSet::new(ctx, chosen.iter().map(|&j| ctx.point_at(j))));
            if chosen.len() < max {
                rec(ctx, i + 1, max, chosen, f);
            }
            chosen.pop();
        }
    }
    rec(ctx, 0, max_size, &mut Vec::new(), &mut f);
}

/// `n` distinct points drawn uniformly with a ChaCha8 stream seeded by `seed`.
pub fn random_set(ctx: &FieldCtx, n: usize, seed: u64) -> Result<PointSet> {
    let total = ctx.plane_size();
    if n > total {
        return Err(Error::SetSpec {
            spec: format!("random:{n}"),
            reason: format!("N exceeds q^2 = {total}"),
        });
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let picks = rand::seq::index::sample(&mut rng, total, n);
    Ok(PointSet::new(ctx, picks.into_iter().map(|i| ctx.point_at(i))))
}

impl fmt::Display for SetSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SetSpec::All => f.write_str("all"),
            SetSpec::Random(n) => write!(f, "random:{n}"),
            SetSpec::Grid => f.write_str("grid"),
            SetSpec::Line { a, b, c } => write!(f, "line:{a},{b},{c}"),
            SetSpec::Sphere(t) => write!(f, "sphere:{t}"),
            SetSpec::Points(pts) => {
                f.write_str("points:")?;
                for (i, (x, y)) in pts.iter().enumerate() {
                    if i > 0 {
                        f.write_str(";")?;
                    }
                    write!(f, "({x},{y})")?;
                }
                Ok(())
            }
        }
    }
}

impl FromStr for SetSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = |reason: &str| Error::SetSpec {
            spec: s.to_string(),
            reason: reason.to_string(),
        };
        let num = |t: &str| -> Result<u32> {
            t.trim().parse::<u32>().map_err(|_| bad("expected a non-negative integer"))
        };
        let s_trim = s.trim();
        let (head, rest) = match s_trim.split_once(':') {
            Some((h, r)) => (h, Some(r)),
            None => (s_trim, None),
        };
        match (head, rest) {
            ("all", None) => Ok(SetSpec::All),
            ("grid", None) => Ok(SetSpec::Grid),
            ("random", Some(n)) => Ok(SetSpec::Random(
                n.trim().parse().map_err(|_| bad("expected random:<N>"))?,
            )),
            ("line", Some(r)) => {
                let parts: Vec<&str> = r.split(',').collect();
                if parts.len() != 3 {
                    return Err(bad("expected line:<a>,<b>,<c>"));
                }
                Ok(SetSpec::Line {
                    a: num(parts[0])?,
                    b: num(parts[1])?,
                    c: num(parts[2])?,
                })
            }
            ("sphere", Some(t)) => Ok(SetSpec::Sphere(num(t)?)),
            ("points", Some(r)) => {
                let mut pts = Vec::new();
                for item in r.split(';').map(str::trim).filter(|t| !t.is_empty()) {
                    let inner = item
                        .strip_prefix('(')
                        .and_then(|t| t.strip_suffix(')'))
                        .ok_or_else(|| bad("points must look like (x,y)"))?;
                    let (x, y) = inner
                        .split_once(',')
                        .ok_or_else(|| bad("points must look like (x,y)"))?;
                    pts.push((num(x)?, num(y)?));
                }
                if pts.is_empty() {
                    return Err(bad("points list is empty"));
                }
                Ok(SetSpec::Points(pts))
            }
            _ => Err(bad("unknown set kind")),
        }
    }
}

/// Display helper shared by reports: `"{spec}"` plus the seed when random.
pub fn describe(spec: &SetSpec, seed: u64) -> String {
    if spec.is_random() {
        format!("{spec}@{seed}")
    } else {
        spec.to_string()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pt(ctx: &FieldCtx, x: u32, y: u32) -> Point {
        ctx.point(x, y).unwrap()
    }

    #[test]
    fn norms() {
        let f3 = FieldCtx::new(3, 1).unwrap();
        assert_eq!(f3.norm(pt(&f3, 1, 1)).index(), 2);
        assert_eq!(f3.norm(pt(&f3, 1, 2)).index(), 2);
        let f5 = FieldCtx::new(5, 1).unwrap();
        assert_eq!(f5.norm(pt(&f5, 1, 2)).index(), 0);
    }

    #[test]
    fn distance_sets() {
        let f3 = FieldCtx::new(3, 1).unwrap();
        let all = PointSet::full(&f3);
        assert_eq!(distance_set(&f3, &all).unwrap().to_vec(), [0, 1, 2]);
        let f7 = FieldCtx::new(7, 1).unwrap();
        let one = PointSet::new(&f7, [pt(&f7, 3, 4)]);
        assert_eq!(distance_set(&f7, &one).unwrap().to_vec(), [0]);
        let two = PointSet::new(&f7, [pt(&f7, 0, 0), pt(&f7, 1, 0)]);
        assert_eq!(distance_set(&f7, &two).unwrap().to_vec(), [0, 1]);
        assert!(distance_set(&f7, &PointSet::empty(&f7)).is_err());
    }

    #[test]
    fn value_set_algebra() {
        let f3 = FieldCtx::new(3, 1).unwrap();
        let all = ValueSet::from_elements(3, f3.elements());
        assert_eq!(set_product(&f3, &all, &all).to_vec(), [0, 1, 2]);
        let f7 = FieldCtx::new(7, 1).unwrap();
        let a = ValueSet::from_elements(7, [FieldElement(1), FieldElement(2)]);
        assert_eq!(set_quotient(&f7, &a, &a).to_vec(), [1, 2, 4]);
        let zero = ValueSet::from_elements(7, [FieldElement::ZERO]);
        assert_eq!(set_sum(&f7, &a, &zero), a);
        assert!(set_quotient(&f7, &a, &zero).is_empty());
    }

    #[test]
    fn spheres() {
        let f3 = FieldCtx::new(3, 1).unwrap();
        let s1 = sphere(&f3, FieldElement(1));
        assert_eq!(
            s1.members(),
            &[pt(&f3, 0, 1), pt(&f3, 0, 2), pt(&f3, 1, 0), pt(&f3, 2, 0)]
        );
        assert_eq!(sphere(&f3, FieldElement(0)).members(), &[Point::ORIGIN]);
        let f5 = FieldCtx::new(5, 1).unwrap();
        assert_eq!(sphere(&f5, FieldElement(0)).len(), 9);
    }

    #[test]
    fn sphere_sizes_follow_q_mod_4() {
        for (p, k) in [(3, 1), (5, 1), (7, 1), (3, 2), (11, 1), (13, 1)] {
            let f = FieldCtx::new(p, k).unwrap();
            let q = f.q() as i64;
            let eps = f.epsilon();
            for t in f.elements() {
                let size = sphere(&f, t).len() as i64;
                if t.is_zero() {
                    assert_eq!(size, if eps == 1 { 2 * q - 1 } else { 1 });
                } else {
                    assert_eq!(size, q - eps, "q={q} t={t}");
                }
            }
        }
    }

    #[test]
    fn zero_distance_pair_counts() {
        let f5 = FieldCtx::new(5, 1).unwrap();
        let e = PointSet::new(&f5, [pt(&f5, 0, 0), pt(&f5, 1, 2)]);
        assert_eq!(zero_distance_pairs(&f5, &e), 4);
        let f7 = FieldCtx::new(7, 1).unwrap();
        let e = random_set(&f7, 20, 3).unwrap();
        assert_eq!(zero_distance_pairs(&f7, &e), 20);
        assert_eq!(zero_distance_pairs(&f7, &PointSet::new(&f7, [Point::ORIGIN])), 1);
    }

    #[test]
    fn directions() {
        let f3 = FieldCtx::new(3, 1).unwrap();
        let e = PointSet::new(&f3, [pt(&f3, 0, 0), pt(&f3, 1, 0), pt(&f3, 0, 1)]);
        assert_eq!(
            direction_set(&f3, &e).unwrap(),
            [pt(&f3, 0, 1), pt(&f3, 1, 0), pt(&f3, 1, 2)]
        );
        for (p, k) in [(3, 1), (5, 1), (3, 2)] {
            let f = FieldCtx::new(p, k).unwrap();
            let n = direction_set(&f, &PointSet::full(&f)).unwrap().len();
            assert_eq!(n, f.q() as usize + 1);
        }
        let two = PointSet::new(&f3, [pt(&f3, 0, 0), pt(&f3, 2, 1)]);
        assert_eq!(direction_set(&f3, &two).unwrap().len(), 1);
        let one = PointSet::new(&f3, [Point::ORIGIN]);
        assert!(direction_set(&f3, &one).is_err());
    }

    #[test]
    fn scales() {
        let f9 = FieldCtx::new(3, 2).unwrap();
        let grid = SetSpec::Grid.generate(&f9, 0).unwrap();
        assert_eq!(grid.len(), 9);
        assert_eq!(scale_set(&f9, &grid).unwrap().to_vec(), [0, 1, 2]);
        let f7 = FieldCtx::new(7, 1).unwrap();
        assert_eq!(scale_set(&f7, &PointSet::full(&f7)).unwrap().len(), 7);
        // Differences of a two-point set are 0 and +-w, so the scales are 0, 1, -1.
        let two = PointSet::new(&f7, [pt(&f7, 0, 0), pt(&f7, 2, 5)]);
        assert_eq!(scale_set(&f7, &two).unwrap().to_vec(), [0, 1, 6]);
    }

    #[test]
    fn square_classes() {
        let f3 = FieldCtx::new(3, 1).unwrap();
        let c = square_class_pairs(&f3, &PointSet::full(&f3));
        assert_eq!((c.squares, c.non_squares, c.zero), (36, 36, 9));
        let f7 = FieldCtx::new(7, 1).unwrap();
        let e = random_set(&f7, 15, 11).unwrap();
        let c = square_class_pairs(&f7, &e);
        assert_eq!(c.zero, 15);
        assert_eq!(c.squares + c.non_squares + c.zero, 225);
        let c = square_class_pairs(&f7, &PointSet::new(&f7, [Point::ORIGIN]));
        assert_eq!((c.squares, c.non_squares, c.zero), (0, 0, 1));
    }

    #[test]
    fn set_specs_parse_and_generate() {
        let f7 = FieldCtx::new(7, 1).unwrap();
        let spec: SetSpec = "random:10".parse().unwrap();
        assert_eq!(spec.generate(&f7, 1).unwrap(), spec.generate(&f7, 1).unwrap());
        assert_eq!(spec.generate(&f7, 1).unwrap().len(), 10);
        assert!("random:50".parse::<SetSpec>().unwrap().generate(&f7, 0).is_err());

        let f3 = FieldCtx::new(3, 1).unwrap();
        let line = "line:0,1,0".parse::<SetSpec>().unwrap().generate(&f3, 0).unwrap();
        assert_eq!(line.members(), &[pt(&f3, 0, 0), pt(&f3, 1, 0), pt(&f3, 2, 0)]);

        let pts: SetSpec = "points:(0,0);(1,0)".parse().unwrap();
        assert_eq!(pts, SetSpec::Points(vec![(0, 0), (1, 0)]));
        assert_eq!(pts.to_string(), "points:(0,0);(1,0)");
        assert_eq!("sphere:1".parse::<SetSpec>().unwrap(), SetSpec::Sphere(1));
        for bad in ["", "rand:3", "line:1,2", "points:", "points:(1;2)", "random:x", "all:3"] {
            assert!(bad.parse::<SetSpec>().is_err(), "{bad}");
        }
        assert!("line:0,0,1".parse::<SetSpec>().unwrap().generate(&f3, 0).is_err());
        assert!("points:(0,3)".parse::<SetSpec>().unwrap().generate(&f3, 0).is_err());
    }

    #[test]
    fn distance_set_is_invariant_under_translation() {
        let f7 = FieldCtx::new(7, 1).unwrap();
        for seed in 0..20 {
            let e = random_set(&f7, 6, seed).unwrap();
            let z = f7.point_at(seed as usize * 5 % 49);
            assert_eq!(
                distance_set(&f7, &e).unwrap(),
                distance_set(&f7, &e.translate(&f7, z)).unwrap()
            );
        }
    }
}
