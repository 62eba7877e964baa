//! Finite fields `F_q`, `q = p^k` with `p` odd.
//!
//! Elements are stored as their canonical index in `0..q`: the base-`p`
//! digits of the index are the polynomial-basis coefficients, constant term
//! least significant. Multiplication goes through discrete log/exp tables
//! built once per context; square roots, traces and character values are
//! likewise tabulated.

use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::f64::consts::PI;
use core::fmt;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::limits::Limits;

const NO_ROOT: u32 = u32::MAX;

/// An element of `F_q`, identified by its canonical index.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
#[cfg_attr(feature = "serde", derive(serde::Serialize), serde(transparent))]
pub struct FieldElement(pub(crate) u32);

impl FieldElement {
    pub const ZERO: FieldElement = FieldElement(0);
    pub const ONE: FieldElement = FieldElement(1);

    #[inline]
    pub fn index(self) -> u32 {
        self.0
    }

    #[inline]
    pub fn is_zero(self) -> bool {
        self.0 == 0
    }
}

impl fmt::Display for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl From<FieldElement> for u32 {
    fn from(value: FieldElement) -> Self {
        value.0
    }
}

/// Arithmetic context for one field. Immutable once built.
#[derive(Clone)]
pub struct FieldCtx {
    p: u32,
    k: u32,
    q: u32,
    /// Monic modulus, constant coefficient first, length `k + 1`.
    modulus: Vec<u32>,
    /// `exp[i] = g^i` for a fixed primitive `g`, doubled to length `2(q-1)`.
    exp: Vec<u32>,
    log: Vec<u32>,
    neg: Vec<u32>,
    sqrt: Vec<u32>,
    trace: Vec<u32>,
    roots: Vec<Complex64>,
}

impl fmt::Debug for FieldCtx {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("FieldCtx")
            .field("p", &self.p)
            .field("k", &self.k)
            .field("q", &self.q)
            .field("modulus", &self.modulus)
            .finish()
    }
}

impl FieldCtx {
    /// `F_p^k` with the default modulus and default limits.
    pub fn new(p: u32, k: u32) -> Result<Self> {
        Self::create(p, k, None, &Limits::default())
    }

    /// Builds `F_{p^k}`.
    ///
    /// `modulus` is the coefficient list of a monic degree-`k` polynomial,
    /// constant term first (so `x^2 + 1` is `[1, 0, 1]`). When omitted, the
    /// smallest monic irreducible is used, ordered by the coefficient
    /// sequence read from the highest non-leading degree down.
    pub fn create(p: u32, k: u32, modulus: Option<&[u32]>, limits: &Limits) -> Result<Self> {
        if p == 2 {
            return Err(Error::InvalidField(
                "characteristic 2 is not supported".into(),
            ));
        }
        if p < 2 || !is_prime(p) {
            return Err(Error::InvalidField(format!("{p} is not an odd prime")));
        }
        if k == 0 {
            return Err(Error::InvalidField("degree k must be at least 1".into()));
        }
        let q = (p as u64)
            .checked_pow(k)
            .filter(|&q| q <= u32::MAX as u64 / 4)
            .ok_or_else(|| Error::InvalidField(format!("{p}^{k} overflows")))?;
        limits.check_q(q as u32)?;
        let q = q as u32;

        let modulus = match modulus {
            Some(m) => {
                if m.len() != k as usize + 1 {
                    return Err(Error::InvalidField(format!(
                        "modulus must have {} coefficients, got {}",
                        k + 1,
                        m.len()
                    )));
                }
                if m[k as usize] != 1 {
                    return Err(Error::InvalidField("modulus must be monic".into()));
                }
                if m.iter().any(|&c| c >= p) {
                    return Err(Error::InvalidField(format!(
                        "modulus coefficients must be < {p}"
                    )));
                }
                if !is_irreducible(m, p) {
                    return Err(Error::ReducibleModulus { p });
                }
                m.to_vec()
            }
            None => smallest_irreducible(p, k),
        };

        let mut ctx = FieldCtx {
            p,
            k,
            q,
            modulus,
            exp: Vec::new(),
            log: Vec::new(),
            neg: Vec::new(),
            sqrt: Vec::new(),
            trace: Vec::new(),
            roots: Vec::new(),
        };
        ctx.build_tables();
        Ok(ctx)
    }

    fn build_tables(&mut self) {
        let q = self.q as usize;
        let order = q - 1;

        // Primitive element search with schoolbook polynomial arithmetic.
        let mut exp = vec![0u32; 2 * order];
        'search: for g in 1..self.q {
            let mut x = 1u32;
            for (i, slot) in exp.iter_mut().take(order).enumerate() {
                if i > 0 && x == 1 {
                    continue 'search;
                }
                *slot = x;
                x = self.slow_mul(x, g);
            }
            debug_assert_eq!(x, 1);
            break;
        }
        for i in 0..order {
            exp[order + i] = exp[i];
        }
        let mut log = vec![0u32; q];
        for (i, &e) in exp.iter().take(order).enumerate() {
            log[e as usize] = i as u32;
        }
        self.exp = exp;
        self.log = log;

        self.neg = (0..self.q).map(|a| self.digitwise(a, 0, |x, _| (self.p - x) % self.p)).collect();

        let mut sqrt = vec![NO_ROOT; q];
        for t in 0..self.q {
            let s = self.mul(FieldElement(t), FieldElement(t)).0 as usize;
            if sqrt[s] == NO_ROOT {
                sqrt[s] = t;
            }
        }
        self.sqrt = sqrt;

        let trace = (0..self.q)
            .map(|a| {
                let a = FieldElement(a);
                let mut acc = FieldElement::ZERO;
                let mut power = a;
                for _ in 0..self.k {
                    acc = self.add(acc, power);
                    power = self.pow(power, self.p as u64);
                }
                debug_assert!(acc.0 < self.p, "trace must land in the prime field");
                acc.0
            })
            .collect();
        self.trace = trace;

        self.roots = (0..self.p)
            .map(|j| {
                let angle = 2.0 * PI * j as f64 / self.p as f64;
                Complex64::new(libm::cos(angle), libm::sin(angle))
            })
            .collect();
    }

    fn digits(&self, mut a: u32) -> Vec<u32> {
        let mut d = vec![0u32; self.k as usize];
        for slot in d.iter_mut() {
            *slot = a % self.p;
            a /= self.p;
        }
        d
    }

    fn pack_digits(&self, d: &[u32]) -> u32 {
        d.iter().rev().fold(0u32, |acc, &c| acc * self.p + c)
    }

    fn digitwise(&self, a: u32, b: u32, f: impl Fn(u32, u32) -> u32) -> u32 {
        let (mut a, mut b) = (a, b);
        let mut out = 0u32;
        let mut place = 1u32;
        for _ in 0..self.k {
            out += f(a % self.p, b % self.p) * place;
            a /= self.p;
            b /= self.p;
            place *= self.p;
        }
        out
    }

    fn slow_mul(&self, a: u32, b: u32) -> u32 {
        let p = self.p as u64;
        let k = self.k as usize;
        let (da, db) = (self.digits(a), self.digits(b));
        let mut prod = vec![0u64; 2 * k - 1];
        for (i, &x) in da.iter().enumerate() {
            for (j, &y) in db.iter().enumerate() {
                prod[i + j] = (prod[i + j] + x as u64 * y as u64) % p;
            }
        }
        for deg in (k..prod.len()).rev() {
            let c = prod[deg];
            if c == 0 {
                continue;
            }
            prod[deg] = 0;
            for i in 0..k {
                let sub = c * self.modulus[i] as u64 % p;
                prod[deg - k + i] = (prod[deg - k + i] + p - sub) % p;
            }
        }
        let reduced: Vec<u32> = prod[..k].iter().map(|&c| c as u32).collect();
        self.pack_digits(&reduced)
    }

    #[inline]
    pub fn p(&self) -> u32 {
        self.p
    }

    #[inline]
    pub fn k(&self) -> u32 {
        self.k
    }

    #[inline]
    pub fn q(&self) -> u32 {
        self.q
    }

    pub fn modulus(&self) -> &[u32] {
        &self.modulus
    }

    /// Human-readable modulus, e.g. `x^2 + 1`.
    pub fn modulus_string(&self) -> String {
        let mut terms = Vec::new();
        for (deg, &c) in self.modulus.iter().enumerate().rev() {
            if c == 0 {
                continue;
            }
            let coeff = if c == 1 && deg > 0 { String::new() } else { format!("{c}") };
            let term = match deg {
                0 => format!("{c}"),
                1 => format!("{coeff}x"),
                _ => format!("{coeff}x^{deg}"),
            };
            terms.push(term);
        }
        terms.join(" + ")
    }

    pub fn element(&self, index: u32) -> Result<FieldElement> {
        if index < self.q {
            Ok(FieldElement(index))
        } else {
            Err(Error::ElementOutOfRange { index, q: self.q })
        }
    }

    /// The image of an integer in the prime subfield.
    pub fn from_int(&self, n: i64) -> FieldElement {
        FieldElement(n.rem_euclid(self.p as i64) as u32)
    }

    pub fn elements(&self) -> impl Iterator<Item = FieldElement> + Clone {
        (0..self.q).map(FieldElement)
    }

    pub fn nonzero_elements(&self) -> impl Iterator<Item = FieldElement> + Clone {
        (1..self.q).map(FieldElement)
    }

    #[inline]
    pub fn add(&self, a: FieldElement, b: FieldElement) -> FieldElement {
        if self.k == 1 {
            let s = a.0 + b.0;
            FieldElement(if s >= self.p { s - self.p } else { s })
        } else {
            FieldElement(self.digitwise(a.0, b.0, |x, y| (x + y) % self.p))
        }
    }

    #[inline]
    pub fn neg(&self, a: FieldElement) -> FieldElement {
        FieldElement(self.neg[a.0 as usize])
    }

    #[inline]
    pub fn sub(&self, a: FieldElement, b: FieldElement) -> FieldElement {
        self.add(a, self.neg(b))
    }

    #[inline]
    pub fn mul(&self, a: FieldElement, b: FieldElement) -> FieldElement {
        if a.0 == 0 || b.0 == 0 {
            return FieldElement::ZERO;
        }
        let i = self.log[a.0 as usize] + self.log[b.0 as usize];
        FieldElement(self.exp[i as usize])
    }

    pub fn inv(&self, a: FieldElement) -> Result<FieldElement> {
        if a.0 == 0 {
            return Err(Error::ZeroInverse(0));
        }
        let order = self.q - 1;
        let l = self.log[a.0 as usize];
        Ok(FieldElement(self.exp[((order - l) % order) as usize]))
    }

    pub fn div(&self, a: FieldElement, b: FieldElement) -> Result<FieldElement> {
        Ok(self.mul(a, self.inv(b)?))
    }

    pub fn pow(&self, a: FieldElement, e: u64) -> FieldElement {
        if e == 0 {
            return FieldElement::ONE;
        }
        if a.0 == 0 {
            return FieldElement::ZERO;
        }
        let order = (self.q - 1) as u64;
        let l = self.log[a.0 as usize] as u64 * (e % order) % order;
        FieldElement(self.exp[l as usize])
    }

    #[inline]
    pub fn square(&self, a: FieldElement) -> FieldElement {
        self.mul(a, a)
    }

    /// True iff `a = t^2` for some `t`; zero counts as a square.
    #[inline]
    pub fn is_square(&self, a: FieldElement) -> bool {
        self.sqrt[a.0 as usize] != NO_ROOT
    }

    #[inline]
    pub fn is_nonzero_square(&self, a: FieldElement) -> bool {
        a.0 != 0 && self.is_square(a)
    }

    /// Both square roots, canonical (smaller index) first.
    pub fn sqrt(&self, a: FieldElement) -> Option<(FieldElement, FieldElement)> {
        let t = self.canonical_sqrt(a)?;
        let u = self.neg(t);
        Some(if t <= u { (t, u) } else { (u, t) })
    }

    #[inline]
    pub fn canonical_sqrt(&self, a: FieldElement) -> Option<FieldElement> {
        match self.sqrt[a.0 as usize] {
            NO_ROOT => None,
            t => Some(FieldElement(t)),
        }
    }

    /// Absolute trace `a + a^p + ... + a^(p^(k-1))`, an element of `F_p`.
    #[inline]
    pub fn trace(&self, a: FieldElement) -> FieldElement {
        FieldElement(self.trace[a.0 as usize])
    }

    /// `j` such that `chi(a) = exp(2 pi i j / p)`.
    #[inline]
    pub fn chi_exponent(&self, a: FieldElement) -> u32 {
        self.trace[a.0 as usize]
    }

    /// The additive character `chi(a) = exp(2 pi i Tr(a) / p)`.
    #[inline]
    pub fn chi(&self, a: FieldElement) -> Complex64 {
        self.roots[self.trace[a.0 as usize] as usize]
    }

    /// `exp(2 pi i j / p)`, `j` taken mod `p`.
    #[inline]
    pub fn root_of_unity(&self, j: u32) -> Complex64 {
        self.roots[(j % self.p) as usize]
    }

    pub fn q_mod_4(&self) -> u32 {
        self.q % 4
    }

    /// Whether `-1` is a square, i.e. `q = 1 mod 4`.
    pub fn minus_one_is_square(&self) -> bool {
        self.is_square(self.neg(FieldElement::ONE))
    }

    /// `+1` when `q = 1 mod 4`, `-1` when `q = 3 mod 4`.
    pub fn epsilon(&self) -> i64 {
        if self.q_mod_4() == 1 {
            1
        } else {
            -1
        }
    }

    pub fn square_count(&self) -> usize {
        self.sqrt.iter().filter(|&&r| r != NO_ROOT).count()
    }
}

pub(crate) fn is_prime(n: u32) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2u32;
    while (d as u64) * (d as u64) <= n as u64 {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

/// Remainder of `a` modulo monic `m` over `F_p`; coefficient lists, constant first.
fn poly_rem(a: &[u32], m: &[u32], p: u32) -> Vec<u32> {
    let p64 = p as u64;
    let mut r: Vec<u64> = a.iter().map(|&c| c as u64).collect();
    let dm = m.len() - 1;
    while r.len() > dm {
        let lead = r.pop().unwrap_or(0);
        if lead == 0 {
            continue;
        }
        let base = r.len() - dm;
        for i in 0..dm {
            let sub = lead * m[i] as u64 % p64;
            r[base + i] = (r[base + i] + p64 - sub) % p64;
        }
    }
    r.into_iter().map(|c| c as u32).collect()
}

/// Exhaustive factor check: no monic factor of degree `1..=k/2`.
pub(crate) fn is_irreducible(m: &[u32], p: u32) -> bool {
    let k = m.len() - 1;
    if k == 1 {
        return true;
    }
    for d in 1..=k / 2 {
        let count = (p as u64).pow(d as u32);
        for code in 0..count {
            let mut f = Vec::with_capacity(d + 1);
            let mut c = code;
            for _ in 0..d {
                f.push((c % p as u64) as u32);
                c /= p as u64;
            }
            f.push(1);
            if poly_rem(m, &f, p).iter().all(|&c| c == 0) {
                return false;
            }
        }
    }
    true
}

fn smallest_irreducible(p: u32, k: u32) -> Vec<u32> {
    let k = k as usize;
    let count = (p as u64).pow(k as u32);
    for code in 0..count {
        // The most significant digit of `code` is the x^(k-1) coefficient,
        // so increasing codes walk the coefficient sequence lexicographically.
        let mut m = vec![0u32; k + 1];
        let mut c = code;
        for slot in m.iter_mut().take(k) {
            *slot = (c % p as u64) as u32;
            c /= p as u64;
        }
        m[k] = 1;
        if is_irreducible(&m, p) {
            return m;
        }
    }
    unreachable!("an irreducible polynomial of every degree exists over F_p")
}
