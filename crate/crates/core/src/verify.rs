//! One checker per bound.
//!
//! Each checker computes the quantities on both sides of an inequality,
//! asserts every exact relation that holds before constants enter, and turns
//! each `<<` bound into a recorded constant compared against a frozen
//! threshold (see [`Thresholds::FROZEN`] and [`calibration_sweep`]).

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::fmt;
use core::str::FromStr;

use rand::{Rng, RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::counting::{self, DifferenceTable, PairClass};
use crate::error::{Error, Result};
use crate::field::{FieldCtx, FieldElement};
use crate::fourier;
use crate::geometry::{self, random_set, PointSet};
use crate::groups::{enumerate_o2, G1Element};
use crate::limits::Limits;

/// A reported value.
#[derive(Clone, Copy, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(untagged))]
pub enum Quantity {
    Bool(bool),
    Int(i128),
    Real(f64),
}

impl Quantity {
    pub fn as_f64(self) -> f64 {
        match self {
            Quantity::Bool(b) => b as u8 as f64,
            Quantity::Int(v) => v as f64,
            Quantity::Real(v) => v,
        }
    }
}

impl From<u128> for Quantity {
    fn from(v: u128) -> Self {
        Quantity::Int(v as i128)
    }
}

impl From<u64> for Quantity {
    fn from(v: u64) -> Self {
        Quantity::Int(v as i128)
    }
}

impl From<usize> for Quantity {
    fn from(v: usize) -> Self {
        Quantity::Int(v as i128)
    }
}

impl From<i128> for Quantity {
    fn from(v: i128) -> Self {
        Quantity::Int(v)
    }
}

impl From<f64> for Quantity {
    fn from(v: f64) -> Self {
        Quantity::Real(v)
    }
}

impl From<bool> for Quantity {
    fn from(v: bool) -> Self {
        Quantity::Bool(v)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub enum Relation {
    #[cfg_attr(feature = "serde", serde(rename = "=="))]
    Eq,
    #[cfg_attr(feature = "serde", serde(rename = "<="))]
    Le,
    #[cfg_attr(feature = "serde", serde(rename = ">="))]
    Ge,
    /// `|lhs - rhs| < 1e-9`.
    #[cfg_attr(feature = "serde", serde(rename = "~="))]
    Approx,
}

/// Residual tolerance for floating-point identities.
pub const IDENTITY_TOL: f64 = 1e-9;

#[derive(Clone, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct Assertion {
    pub name: String,
    pub lhs: Quantity,
    pub relation: Relation,
    pub rhs: Quantity,
    pub pass: bool,
}

impl Assertion {
    pub fn new(name: &str, lhs: impl Into<Quantity>, relation: Relation, rhs: impl Into<Quantity>) -> Self {
        let (lhs, rhs) = (lhs.into(), rhs.into());
        let pass = match (lhs, rhs) {
            (Quantity::Int(a), Quantity::Int(b)) => match relation {
                Relation::Eq | Relation::Approx => a == b,
                Relation::Le => a <= b,
                Relation::Ge => a >= b,
            },
            (Quantity::Bool(a), Quantity::Bool(b)) => a == b,
            _ => {
                let (a, b) = (lhs.as_f64(), rhs.as_f64());
                match relation {
                    Relation::Eq => a == b,
                    Relation::Le => a <= b,
                    Relation::Ge => a >= b,
                    Relation::Approx => (a - b).abs() < IDENTITY_TOL,
                }
            }
        };
        Assertion {
            name: name.to_string(),
            lhs,
            relation,
            rhs,
            pass,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct VerificationReport {
    pub check: String,
    pub p: u32,
    pub k: u32,
    pub q: u32,
    pub set_spec: String,
    pub seed: u64,
    pub set_size: usize,
    pub quantities: BTreeMap<String, Quantity>,
    pub ratios: BTreeMap<String, f64>,
    pub assertions: Vec<Assertion>,
    pub notes: Vec<String>,
}

impl VerificationReport {
    fn new(check: Check, subject: &Subject<'_>) -> Self {
        VerificationReport {
            check: check.name().to_string(),
            p: subject.ctx.p(),
            k: subject.ctx.k(),
            q: subject.ctx.q(),
            set_spec: subject.spec.to_string(),
            seed: subject.seed,
            set_size: subject.set.len(),
            quantities: BTreeMap::new(),
            ratios: BTreeMap::new(),
            assertions: Vec::new(),
            notes: Vec::new(),
        }
    }

    pub fn passed(&self) -> bool {
        self.assertions.iter().all(|a| a.pass)
    }

    pub fn failures(&self) -> impl Iterator<Item = &Assertion> {
        self.assertions.iter().filter(|a| !a.pass)
    }

    fn put(&mut self, name: &str, v: impl Into<Quantity>) {
        self.quantities.insert(name.to_string(), v.into());
    }

    fn ratio(&mut self, name: &str, v: f64) {
        self.ratios.insert(name.to_string(), v);
    }

    fn check(&mut self, name: &str, lhs: impl Into<Quantity>, rel: Relation, rhs: impl Into<Quantity>) {
        self.assertions.push(Assertion::new(name, lhs, rel, rhs));
    }

    fn note(&mut self, text: impl Into<String>) {
        self.notes.push(text.into());
    }
}

/// The set under test, with the recipe that produced it.
#[derive(Clone, Copy, Debug)]
pub struct Subject<'a> {
    pub ctx: &'a FieldCtx,
    pub set: &'a PointSet,
    pub spec: &'a str,
    pub seed: u64,
}

/// Implied constants for the four `<<` bounds.
#[derive(Clone, Copy, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(deny_unknown_fields))]
pub struct Thresholds {
    /// Spherical sums: `max_{t != 0} sum_{||xi|| = t} |Ehat(xi)|^2 <= C |E|^{3/2} q^{-3}`.
    pub c_sph: f64,
    /// `|L^2(D_E) - |E|^4 / q| <= C q^2 |E|^2`.
    pub c_dir: f64,
    /// `|T(E) - |E|^8 / q^3| <= C (|E|^6 + q^2 |E|^5)`.
    pub c_scale: f64,
    /// `N0(E) <= C (|E|^2 / q + q |E|)`.
    pub c_n0: f64,
}

/// Headroom applied to sweep maxima.
pub const THRESHOLD_MARGIN: f64 = 1.25;

/// Seed of the calibration corpus.
pub const CALIBRATION_SEED: u64 = 0x5EED_CA11;

impl Thresholds {
    /// 1.25 x the maxima of [`calibration_sweep`] with [`CALIBRATION_SEED`]:
    /// all nonempty subsets of `F_3^2`, all subsets of `F_5^2` with at most
    /// three points, and 1000 random sets each at q = 7, 11, 13 with sizes
    /// uniform in `[1, q^2]`. Regenerate with `qplane calibrate`.
    ///
    /// Sweep maxima: `c_sph` 4/3 (single point, q = 3), `c_dir` 11/9 (full
    /// plane, q = 3), `c_scale` 1/2 (full plane, q = 3), `c_n0` 25/26 (full
    /// plane, q = 13).
    pub const FROZEN: Thresholds = Thresholds {
        c_sph: 1.6666666666666665,
        c_dir: 1.527777777777778,
        c_scale: 0.625,
        c_n0: 1.2019230769230769,
    };

    pub fn from_maxima(maxima: &Thresholds) -> Self {
        Thresholds {
            c_sph: maxima.c_sph * THRESHOLD_MARGIN,
            c_dir: maxima.c_dir * THRESHOLD_MARGIN,
            c_scale: maxima.c_scale * THRESHOLD_MARGIN,
            c_n0: maxima.c_n0 * THRESHOLD_MARGIN,
        }
    }
}

impl Default for Thresholds {
    fn default() -> Self {
        Thresholds::FROZEN
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum Check {
    Spherical,
    Product,
    Quotient,
    Direction,
    Scale,
    N0,
    Identities,
}

impl Check {
    pub const ALL: [Check; 7] = [
        Check::Spherical,
        Check::Product,
        Check::Quotient,
        Check::Direction,
        Check::Scale,
        Check::N0,
        Check::Identities,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Check::Spherical => "spherical",
            Check::Product => "product",
            Check::Quotient => "quotient",
            Check::Direction => "direction",
            Check::Scale => "scale",
            Check::N0 => "n0",
            Check::Identities => "identities",
        }
    }

    /// Parses `all` or a comma-separated list of check names.
    pub fn parse_list(text: &str) -> Result<Vec<Check>> {
        let mut out = Vec::new();
        for part in text.split(',').map(str::trim).filter(|s| !s.is_empty()) {
            if part == "all" {
                out.extend(Check::ALL);
            } else {
                out.push(part.parse()?);
            }
        }
        out.sort();
        out.dedup();
        if out.is_empty() {
            return Err(Error::precondition("no checks selected"));
        }
        Ok(out)
    }
}

impl fmt::Display for Check {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Check {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Check::ALL
            .into_iter()
            .find(|c| c.name() == s)
            .ok_or_else(|| Error::precondition(format!("unknown check `{s}`")))
    }
}

/// Runs one check. The quotient check produces one report per nonzero square `r`.
pub fn run_check(
    check: Check,
    subject: &Subject<'_>,
    thresholds: &Thresholds,
    limits: &Limits,
) -> Result<Vec<VerificationReport>> {
    Ok(match check {
        Check::Spherical => alloc::vec![check_lemma_spherical(subject, thresholds)],
        Check::Product => alloc::vec![check_thm_product(subject, limits)],
        Check::Quotient => {
            let ctx = subject.ctx;
            ctx.nonzero_elements()
                .filter(|&r| ctx.is_square(r))
                .map(|r| check_thm_quotient(subject, r))
                .collect::<Result<Vec<_>>>()?
        }
        Check::Direction => alloc::vec![check_thm_direction(subject, thresholds)],
        Check::Scale => alloc::vec![check_thm_scale(subject, thresholds)],
        Check::N0 => alloc::vec![check_n0_bound(subject, thresholds)],
        Check::Identities => alloc::vec![check_identities(subject, limits)],
    })
}

fn safe_div(num: f64, den: f64) -> f64 {
    if den == 0.0 {
        0.0
    } else {
        num / den
    }
}

/// `max_{t != 0} (spherical sum) q^3 / |E|^{3/2}`; zero for the empty set.
pub fn spherical_constant(ctx: &FieldCtx, e: &PointSet) -> f64 {
    if e.is_empty() {
        return 0.0;
    }
    let table = fourier::dft_indicator(ctx, e);
    fourier::spherical_max_ratio(ctx, &table).map_or(0.0, |m| m.ratio)
}

/// `|L^2(D_E) - |E|^4 / q| / (q^2 |E|^2)`.
pub fn direction_constant(ctx: &FieldCtx, l2: u128, size: usize) -> f64 {
    let q = ctx.q() as i128;
    let n = size as i128;
    // Scaled by q to stay in integers: |q L^2 - |E|^4| / (q^3 |E|^2).
    let num = (q * l2 as i128 - n.pow(4)).unsigned_abs();
    safe_div(num as f64, (q.pow(3) * n * n) as f64)
}

/// `|T(E) - |E|^8 / q^3| / (|E|^6 + q^2 |E|^5)`.
pub fn scale_constant(ctx: &FieldCtx, t: u128, size: usize) -> f64 {
    let q3 = (ctx.q() as u128).pow(3);
    let n = size as u128;
    let den = (n.pow(6) + (ctx.q() as u128).pow(2) * n.pow(5)) as f64;
    let num = match (t.checked_mul(q3), n.checked_pow(8)) {
        (Some(a), Some(b)) => a.abs_diff(b) as f64 / q3 as f64,
        _ => (t as f64 - crate::powi(n as f64, 8) / q3 as f64).abs(),
    };
    safe_div(num, den)
}

/// `N0 / (|E|^2 / q + q |E|)` with `N0` the ordered zero-distance pairs.
pub fn n0_constant(ctx: &FieldCtx, n0: u64, size: usize) -> f64 {
    let q = ctx.q() as f64;
    let n = size as f64;
    safe_div(n0 as f64, n * n / q + q * n)
}

pub fn check_lemma_spherical(subject: &Subject<'_>, thresholds: &Thresholds) -> VerificationReport {
    let (ctx, e) = (subject.ctx, subject.set);
    let mut rep = VerificationReport::new(Check::Spherical, subject);
    let table = fourier::dft_indicator(ctx, e);
    let q2 = crate::powi(ctx.q() as f64, 2);
    rep.check("plancherel", table.energy(), Relation::Approx, e.len() as f64 / q2);
    rep.check("inversion_residual", fourier::inverse_check(ctx, &table, e), Relation::Approx, 0.0);
    if e.is_empty() {
        rep.note("empty set: spherical constant defined as 0");
        rep.ratio("c_sph", 0.0);
    } else if let Ok(m) = fourier::spherical_max_ratio(ctx, &table) {
        rep.put("argmax_t", m.t.index() as u64);
        rep.put("max_spherical_sum", m.value);
        rep.ratio("c_sph", m.ratio);
    }
    let c = rep.ratios.get("c_sph").copied().unwrap_or(0.0);
    rep.check("c_sph_within_threshold", c, Relation::Le, thresholds.c_sph);
    rep
}

pub fn check_thm_product(subject: &Subject<'_>, limits: &Limits) -> VerificationReport {
    let (ctx, e) = (subject.ctx, subject.set);
    let mut rep = VerificationReport::new(Check::Product, subject);
    let hist = counting::distance_histogram(ctx, e);
    let classes = geometry::square_class_pairs(ctx, e);
    rep.put("pairs_square", classes.squares);
    rep.put("pairs_nonsquare", classes.non_squares);
    rep.put("pairs_zero", classes.zero);
    rep.put("n0", hist[0]);

    let dist = geometry::ValueSet::from_flags(hist.iter().map(|&c| c > 0).collect());
    let products = geometry::set_product(ctx, &dist, &dist);
    let square_products = products
        .iter()
        .filter(|&l| ctx.is_nonzero_square(l))
        .count();
    rep.put("product_set_size", products.len());
    rep.put("product_set_nonzero_squares", square_products);
    rep.ratio("product_set_over_q", products.len() as f64 / ctx.q() as f64);
    let threshold = libm::pow(ctx.q() as f64, 8.0 / 7.0);
    rep.put("hypothesis_size_ge_q_8_7", e.len() as f64 >= threshold);

    let nu_b = counting::nu_table_from(ctx, &hist, PairClass::NonSquares);
    let sum_nu: u128 = nu_b.iter().sum();
    let sum_nu_sq: u128 = nu_b.iter().map(|&v| v * v).sum();
    rep.put("sum_nu_b", sum_nu);
    rep.put("sum_nu_b_sq", sum_nu_sq);
    let b = classes.non_squares as u128;
    rep.check("nu_b_mass", sum_nu, Relation::Eq, b * b);
    // Products of two non-squares are nonzero squares, so the support of
    // nu_B sits inside the nonzero squares of the product set.
    rep.check(
        "cauchy_schwarz",
        sum_nu * sum_nu,
        Relation::Le,
        square_products as u128 * sum_nu_sq,
    );
    rep.check(
        "product_set_rearrangement",
        sum_nu * sum_nu,
        Relation::Le,
        products.len() as u128 * sum_nu_sq,
    );
    match counting::mu_energy(ctx, e, limits) {
        Ok(mu) => {
            rep.put("mu_energy", mu);
            rep.check("orbit_inequality", sum_nu_sq, Relation::Le, mu);
            rep.check(
                "cauchy_schwarz_chain",
                sum_nu * sum_nu,
                Relation::Le,
                square_products as u128 * mu,
            );
            let n = e.len() as f64;
            rep.ratio(
                "mu_energy_over_e8_q",
                safe_div(mu as f64, crate::powi(n, 8) / ctx.q() as f64),
            );
        }
        Err(err) => rep.note(format!("mu energy skipped: {err}")),
    }
    if sum_nu == 0 {
        rep.note("no pair at a non-square distance: nu_B vanishes");
    }
    rep
}

pub fn check_thm_quotient(subject: &Subject<'_>, r: FieldElement) -> Result<VerificationReport> {
    let (ctx, e) = (subject.ctx, subject.set);
    let mut rep = VerificationReport::new(Check::Quotient, subject);
    let energy = counting::eta_energy(ctx, e, r)?;
    let hist = counting::distance_histogram(ctx, e);
    let count = counting::quotient_quadruples_from(ctx, &hist, r);
    let n = e.len() as u128;
    let order = energy.group_order as u128;
    let q = ctx.q() as u128;
    let iso_pairs = (hist[0] - e.len() as u64) as u128;
    let iso_quads = iso_pairs * iso_pairs;
    // Every nonzero non-isotropic vector has a stabilizer of order 2 in O(2).
    let stab = 2u128;

    rep.put("r", r.index() as u64);
    rep.put("o2_order", energy.group_order);
    rep.put("sum_eta", energy.sum);
    rep.put("sum_eta_sq", energy.sum_sq);
    rep.put("isotropic_quadruples", iso_quads);
    rep.put("count_total", count.total);
    rep.put("count_nonzero", count.nonzero);
    rep.check("eta_mass", energy.sum, Relation::Eq, n * n * order);
    rep.check("holder", energy.sum_sq * q * q, Relation::Ge, n.pow(4) * order);
    // Nonzero denominators pair with exactly `stab` group elements, zero
    // differences with all of O(2), isotropic ones with exactly one.
    rep.check(
        "eta_decomposition",
        energy.sum_sq,
        Relation::Eq,
        n * n * order + stab * count.nonzero + iso_quads,
    );
    let lower = energy.sum_sq as i128 - (n * n * order) as i128 - (stab * iso_quads) as i128;
    let lower = lower.div_euclid(stab as i128);
    rep.put("count_lower_bound", lower);
    rep.check("count_at_least_lower_bound", count.nonzero as i128, Relation::Ge, lower);
    if ctx.q_mod_4() == 3 {
        rep.check("isotropic_quadruples_vanish", iso_quads, Relation::Eq, 0u128);
    }
    rep.ratio(
        "count_q_over_e4",
        safe_div(count.nonzero as f64 * ctx.q() as f64, crate::powi(n as f64, 4)),
    );

    let dist = geometry::ValueSet::from_flags(hist.iter().map(|&c| c > 0).collect());
    let quotients = geometry::set_quotient(ctx, &dist, &dist);
    let covered = ctx.nonzero_elements().filter(|&s| ctx.is_square(s)).all(|s| quotients.contains(s));
    rep.put("quotient_set_size", quotients.len());
    rep.put("squares_in_quotient_set", covered);
    let gate_9q = e.len() as u64 >= 9 * ctx.q() as u64;
    rep.put("hypothesis_size_ge_9q", gate_9q);
    rep.put("hypothesis_size_ge_q", e.len() as u64 >= ctx.q() as u64);
    if gate_9q {
        rep.check("count_positive", count.nonzero, Relation::Ge, 1u128);
        rep.check("squares_in_quotient_set", covered, Relation::Eq, true);
    }
    Ok(rep)
}

pub fn check_thm_direction(subject: &Subject<'_>, thresholds: &Thresholds) -> VerificationReport {
    let (ctx, e) = (subject.ctx, subject.set);
    let mut rep = VerificationReport::new(Check::Direction, subject);
    let diff = DifferenceTable::new(ctx, e);
    let l2 = counting::l2_directions_from(ctx, &diff);
    let group: u128 = ctx.nonzero_elements().map(|l| diff.correlate_scalar(ctx, l)).sum();
    let n = e.len() as u128;
    let q = ctx.q() as u128;
    rep.put("l2_directions", l2);
    rep.put("group_energy", group);
    rep.put("direction_count", geometry::direction_set(ctx, e).map_or(0, |d| d.len()));
    rep.check("bridge_identity", group, Relation::Eq, l2 + (q - 1) * n * n);
    rep.note("group energy includes u = v quadruples for every scale; it exceeds L2(D_E) by (q-1)|E|^2");
    let c = direction_constant(ctx, l2, e.len());
    rep.ratio("c_dir", c);
    rep.ratio("l2_q_over_e4", safe_div(l2 as f64 * ctx.q() as f64, crate::powi(n as f64, 4)));
    rep.check("c_dir_within_threshold", c, Relation::Le, thresholds.c_dir);
    rep
}

fn is_prime_grid(ctx: &FieldCtx, e: &PointSet) -> bool {
    let p = ctx.p() as usize;
    e.len() == p * p && e.iter().all(|v| v.x.index() < ctx.p() && v.y.index() < ctx.p())
}

pub fn check_thm_scale(subject: &Subject<'_>, thresholds: &Thresholds) -> VerificationReport {
    let (ctx, e) = (subject.ctx, subject.set);
    let mut rep = VerificationReport::new(Check::Scale, subject);
    let diff = DifferenceTable::new(ctx, e);
    let energy = counting::l2_scales_from(ctx, &diff);
    let n = e.len();
    rep.put("scale_energy", energy.group);
    rep.put("scale_tuples_once", energy.literal);
    rep.put("multiplicity_excess", energy.group - energy.literal);
    rep.put(
        "e8_over_q3",
        crate::powi(n as f64, 8) / crate::powi(ctx.q() as f64, 3),
    );
    let c = scale_constant(ctx, energy.group, n);
    rep.ratio("c_scale", c);
    rep.ratio("c_scale_tuples_once", scale_constant(ctx, energy.literal, n));
    rep.ratio(
        "energy_q3_over_e8",
        safe_div(energy.group as f64 * crate::powi(ctx.q() as f64, 3), crate::powi(n as f64, 8)),
    );
    // Degenerate 8-tuples (both numerators and denominators zero) satisfy
    // every scale: per-scale counting sees them q - 1 times.
    if n > 0 {
        let n4 = (n as u128).pow(4);
        rep.check(
            "multiplicity_excess_identity",
            energy.group - energy.literal,
            Relation::Eq,
            (ctx.q() as u128 - 2) * n4,
        );
    }
    rep.check("c_scale_within_threshold", c, Relation::Le, thresholds.c_scale);
    if let Ok(scales) = geometry::scale_set(ctx, e) {
        rep.put("scale_set_size", scales.len());
        if ctx.k() == 2 && is_prime_grid(ctx, e) {
            rep.check("grid_scale_set_size", scales.len(), Relation::Eq, ctx.p() as usize);
            rep.note(
                "grid F_p x F_p over F_{p^2}: scale set is F_p; the product F_p x F_q instead \
                 has vertical differences admitting every scale, so its scale set is all of F_q",
            );
        }
    }
    rep
}

pub fn check_n0_bound(subject: &Subject<'_>, thresholds: &Thresholds) -> VerificationReport {
    let (ctx, e) = (subject.ctx, subject.set);
    let mut rep = VerificationReport::new(Check::N0, subject);
    let n0 = geometry::zero_distance_pairs(ctx, e);
    rep.put("n0", n0);
    rep.put("minus_one_is_square", ctx.minus_one_is_square());
    if !ctx.minus_one_is_square() {
        rep.check("n0_equals_size", n0, Relation::Eq, e.len());
    }
    let c = n0_constant(ctx, n0, e.len());
    rep.ratio("c_n0", c);
    rep.check("c_n0_within_threshold", c, Relation::Le, thresholds.c_n0);
    rep
}

/// Transform identities: Plancherel, inversion, the `gamma` identity for
/// every scale, line energies and fourth moments along every direction, and
/// the `mu` identity for a sample of group elements when `q` allows it.
pub fn check_identities(subject: &Subject<'_>, limits: &Limits) -> VerificationReport {
    let (ctx, e) = (subject.ctx, subject.set);
    let mut rep = VerificationReport::new(Check::Identities, subject);
    let table = fourier::dft_indicator(ctx, e);
    let q2 = crate::powi(ctx.q() as f64, 2);
    rep.check("plancherel", table.energy(), Relation::Approx, e.len() as f64 / q2);
    rep.check("inversion_residual", fourier::inverse_check(ctx, &table, e), Relation::Approx, 0.0);

    let mut gamma = 0f64;
    let mut gamma_conj = 0f64;
    for l in ctx.elements() {
        let r = counting::gamma_fourier_check(ctx, e, l);
        gamma = gamma.max(r.residual.max(r.modulus_residual));
        gamma_conj = gamma_conj.max(r.conjugate_residual);
    }
    rep.check("gamma_identity_residual", gamma, Relation::Approx, 0.0);
    rep.ratio("gamma_conjugated_form_residual", gamma_conj);

    let mut line = 0f64;
    let mut fourth = 0f64;
    if !e.is_empty() {
        for dir in ctx.points().filter(|v| !v.is_zero()) {
            if let Ok(l) = fourier::line_energy(ctx, e, &table, dir) {
                line = line.max((l.spectral - l.combinatorial).abs());
            }
            if let Ok(m) = fourier::lambda_fourth_moment(ctx, e, &table, dir) {
                fourth = fourth.max((m.spectral - m.combinatorial).abs());
            }
        }
    }
    rep.check("line_energy_residual", line, Relation::Approx, 0.0);
    rep.check("fourth_moment_residual", fourth, Relation::Approx, 0.0);

    if limits.check_dim4(ctx.q()).is_ok() && ctx.q() <= 5 {
        let mut mu = 0f64;
        let mut mu_conj = 0f64;
        for g in sample_g1(ctx, limits) {
            if let Ok(r) = counting::mu_fourier_check(ctx, e, &g, limits) {
                mu = mu.max(r.residual.max(r.modulus_residual));
                mu_conj = mu_conj.max(r.conjugate_residual);
            }
        }
        rep.check("mu_identity_residual", mu, Relation::Approx, 0.0);
        rep.ratio("mu_conjugated_form_residual", mu_conj);
    } else {
        rep.note("mu identity skipped: q^4 tables only for q <= 5");
    }
    rep.note("transform identities checked in the chi(-x.xi) convention; the conjugated right-hand sides agree only in modulus");
    rep
}

/// A spread of `G1` elements: identity plus one per rotation/reflection pair.
fn sample_g1(ctx: &FieldCtx, limits: &Limits) -> Vec<G1Element> {
    let o2 = enumerate_o2(ctx);
    let mut out = alloc::vec![G1Element::identity()];
    if limits.check_g1(ctx.q()).is_err() {
        return out;
    }
    let r = ctx.nonzero_elements().last().unwrap_or(FieldElement::ONE);
    for (i, theta) in o2.iter().enumerate() {
        let other = o2[(i * 3 + 1) % o2.len()];
        out.push(G1Element {
            r1: r,
            theta1: *theta,
            r2: ctx.inv(r).unwrap_or(FieldElement::ONE),
            theta2: other,
        });
    }
    out
}

/// One row of the conjecture probe.
#[derive(Clone, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct ProbeRow {
    pub q: u32,
    pub set_size: usize,
    pub trial: u64,
    pub seed: u64,
    /// `L^2(D_E) q / |E|^4`.
    pub direction_ratio: f64,
    /// `T(E) q^3 / |E|^8`.
    pub scale_ratio: f64,
}

/// Random sets of each size, seeds `base_seed + trial`. A full-plane size is
/// deterministic and yields one row.
pub fn probe_conjectures(ctx: &FieldCtx, sizes: &[usize], trials: u64, base_seed: u64) -> Result<Vec<ProbeRow>> {
    let mut rows = Vec::new();
    for &size in sizes {
        let runs = if size == ctx.plane_size() { 1 } else { trials };
        for trial in 0..runs {
            let seed = base_seed.wrapping_add(trial);
            let e = random_set(ctx, size, seed)?;
            rows.push(probe_row(ctx, &e, trial, seed));
        }
    }
    Ok(rows)
}

pub fn probe_row(ctx: &FieldCtx, e: &PointSet, trial: u64, seed: u64) -> ProbeRow {
    let diff = DifferenceTable::new(ctx, e);
    let l2 = counting::l2_directions_from(ctx, &diff);
    let t = counting::l2_scales_from(ctx, &diff).group;
    let n = e.len() as f64;
    let q = ctx.q() as f64;
    ProbeRow {
        q: ctx.q(),
        set_size: e.len(),
        trial,
        seed,
        direction_ratio: safe_div(l2 as f64 * q, crate::powi(n, 4)),
        scale_ratio: safe_div(t as f64 * crate::powi(q, 3), crate::powi(n, 8)),
    }
}

/// Where a sweep maximum was attained.
#[derive(Clone, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct Witness {
    pub q: u32,
    pub set_size: usize,
    pub value: f64,
}

#[derive(Clone, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct Calibration {
    pub maxima: Thresholds,
    pub thresholds: Thresholds,
    pub witnesses: BTreeMap<String, Witness>,
    pub sets_per_q: BTreeMap<u32, usize>,
    pub seed: u64,
}

struct Maxima {
    values: [f64; 4],
    witnesses: [Witness; 4],
}

impl Maxima {
    fn new() -> Self {
        let w = Witness {
            q: 0,
            set_size: 0,
            value: 0.0,
        };
        Maxima {
            values: [0.0; 4],
            witnesses: [w.clone(), w.clone(), w.clone(), w],
        }
    }

    fn observe(&mut self, ctx: &FieldCtx, e: &PointSet) {
        let diff = DifferenceTable::new(ctx, e);
        let n = e.len();
        let vals = [
            spherical_constant(ctx, e),
            direction_constant(ctx, counting::l2_directions_from(ctx, &diff), n),
            scale_constant(ctx, counting::l2_scales_from(ctx, &diff).group, n),
            n0_constant(ctx, diff.counts().iter().enumerate().filter(|(i, _)| {
                ctx.norm(ctx.point_at(*i)).is_zero()
            }).map(|(_, &c)| c).sum(), n),
        ];
        for (i, v) in vals.into_iter().enumerate() {
            if v > self.values[i] {
                self.values[i] = v;
                self.witnesses[i] = Witness {
                    q: ctx.q(),
                    set_size: n,
                    value: v,
                };
            }
        }
    }
}

/// Runs the calibration corpus and returns the maxima of the four constants
/// together with thresholds at [`THRESHOLD_MARGIN`] times those maxima.
pub fn calibration_sweep(seed: u64, random_per_q: usize) -> Result<Calibration> {
    let mut max = Maxima::new();
    let mut sets_per_q = BTreeMap::new();
    for (p, max_size) in [(3u32, 9usize), (5, 3)] {
        let ctx = FieldCtx::new(p, 1)?;
        let mut count = 0;
        geometry::for_each_subset(&ctx, max_size, |e| {
            max.observe(&ctx, e);
            count += 1;
        });
        sets_per_q.insert(ctx.q(), count);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for p in [7u32, 11, 13] {
        let ctx = FieldCtx::new(p, 1)?;
        for _ in 0..random_per_q {
            let size = rng.gen_range(1..=ctx.plane_size());
            let e = random_set(&ctx, size, rng.next_u64())?;
            max.observe(&ctx, &e);
        }
        sets_per_q.insert(ctx.q(), random_per_q);
    }
    let maxima = Thresholds {
        c_sph: max.values[0],
        c_dir: max.values[1],
        c_scale: max.values[2],
        c_n0: max.values[3],
    };
    let mut witnesses = BTreeMap::new();
    for (name, w) in ["c_sph", "c_dir", "c_scale", "c_n0"].iter().zip(max.witnesses) {
        witnesses.insert(name.to_string(), w);
    }
    Ok(Calibration {
        thresholds: Thresholds::from_maxima(&maxima),
        maxima,
        witnesses,
        sets_per_q,
        seed,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::SetSpec;

    fn subject<'a>(ctx: &'a FieldCtx, set: &'a PointSet, spec: &'a str) -> Subject<'a> {
        Subject {
            ctx,
            set,
            spec,
            seed: 0,
        }
    }

    fn loose() -> Thresholds {
        Thresholds {
            c_sph: 1e9,
            c_dir: 1e9,
            c_scale: 1e9,
            c_n0: 1e9,
        }
    }

    fn int(rep: &VerificationReport, key: &str) -> i128 {
        match rep.quantities[key] {
            Quantity::Int(v) => v,
            other => panic!("{key}: {other:?}"),
        }
    }

    #[test]
    fn full_plane_f3() {
        let f3 = FieldCtx::new(3, 1).unwrap();
        let all = PointSet::full(&f3);
        let spec = "all".to_string();
        let s = subject(&f3, &all, &spec);
        let limits = Limits::default();

        let sph = check_lemma_spherical(&s, &loose());
        assert!(sph.passed());
        assert!(sph.ratios["c_sph"] < 1e-12);

        let prod = check_thm_product(&s, &limits);
        assert!(prod.passed(), "{:?}", prod.failures().collect::<Vec<_>>());
        assert_eq!(int(&prod, "product_set_size"), 3);
        assert_eq!(int(&prod, "sum_nu_b_sq"), 1_679_616);
        assert_eq!(int(&prod, "mu_energy"), 68_024_448);

        let quo = check_thm_quotient(&s, FieldElement::ONE).unwrap();
        assert!(quo.passed());
        assert_eq!(int(&quo, "sum_eta_sq"), 5832);
        assert_eq!(int(&quo, "count_nonzero"), 2592);
        assert_eq!(int(&quo, "count_lower_bound"), 2592);

        let dir = check_thm_direction(&s, &loose());
        assert!(dir.passed());
        assert!((dir.ratios["c_dir"] - 11.0 / 9.0).abs() < 1e-12);

        let sc = check_thm_scale(&s, &loose());
        assert!(sc.passed());
        assert!((sc.ratios["c_scale"] - 0.5).abs() < 1e-12);

        let n0 = check_n0_bound(&s, &loose());
        assert!(n0.passed());
        assert_eq!(int(&n0, "n0"), 9);

        assert!(check_identities(&s, &limits).passed());
    }

    #[test]
    fn single_point_reports() {
        let f7 = FieldCtx::new(7, 1).unwrap();
        let one = PointSet::new(&f7, [f7.point(2, 3).unwrap()]);
        let spec = "points:(2,3)".to_string();
        let s = subject(&f7, &one, &spec);
        let sph = check_lemma_spherical(&s, &loose());
        // |Ehat| = q^-2 everywhere, so the ratio is |S_t| / q for the largest sphere.
        assert!((sph.ratios["c_sph"] - 8.0 / 7.0).abs() < 1e-12);
        let dir = check_thm_direction(&s, &loose());
        assert_eq!(int(&dir, "group_energy"), 6);
        assert!((dir.ratios["c_dir"] - 1.0 / 343.0).abs() < 1e-15);
        let prod = check_thm_product(&s, &Limits::default());
        assert!(prod.passed());
        assert_eq!(int(&prod, "sum_nu_b"), 0);
        assert_eq!(int(&check_n0_bound(&s, &loose()), "n0"), 1);
    }

    #[test]
    fn isotropic_line_n0() {
        let f5 = FieldCtx::new(5, 1).unwrap();
        let line = SetSpec::Line { a: 2, b: 4, c: 0 }.generate(&f5, 0).unwrap();
        assert!(line.contains(f5.point(1, 2).unwrap()));
        let spec = "line".to_string();
        let rep = check_n0_bound(&subject(&f5, &line, &spec), &loose());
        assert_eq!(int(&rep, "n0"), 25);
        assert!((rep.ratios["c_n0"] - 25.0 / 30.0).abs() < 1e-12);
    }

    #[test]
    fn quotient_identity_holds_for_every_residue_class() {
        for (p, k) in [(5, 1), (7, 1), (3, 2), (13, 1)] {
            let ctx = FieldCtx::new(p, k).unwrap();
            for seed in 0..6 {
                let e = random_set(&ctx, 3 + 4 * seed as usize, seed).unwrap();
                let spec = "random".to_string();
                for rep in run_check(Check::Quotient, &subject(&ctx, &e, &spec), &loose(), &Limits::default()).unwrap() {
                    assert!(rep.passed(), "{rep:?}");
                }
            }
        }
    }

    #[test]
    fn grid_sharpness() {
        for (p, size) in [(3u32, 3usize), (5, 5)] {
            let ctx = FieldCtx::new(p, 2).unwrap();
            let grid = SetSpec::Grid.generate(&ctx, 0).unwrap();
            let spec = "grid".to_string();
            let rep = check_thm_scale(&subject(&ctx, &grid, &spec), &loose());
            assert_eq!(int(&rep, "scale_set_size"), size as i128);
            assert!(rep.passed());
        }
    }

    #[test]
    fn threshold_failures_are_reported() {
        let f3 = FieldCtx::new(3, 1).unwrap();
        let all = PointSet::full(&f3);
        let spec = "all".to_string();
        let zero = Thresholds {
            c_sph: 0.0,
            c_dir: 0.0,
            c_scale: 0.0,
            c_n0: 0.0,
        };
        let rep = check_thm_direction(&subject(&f3, &all, &spec), &zero);
        assert_eq!(rep.failures().next().unwrap().name, "c_dir_within_threshold");
    }

    #[test]
    fn check_lists_parse() {
        assert_eq!(Check::parse_list("all").unwrap().len(), 7);
        assert_eq!(Check::parse_list("scale,n0,scale").unwrap(), [Check::Scale, Check::N0]);
        assert!(Check::parse_list("bogus").is_err());
        assert!(Check::parse_list("").is_err());
    }

    #[test]
    fn probe_full_plane_closed_form() {
        let f3 = FieldCtx::new(3, 1).unwrap();
        let rows = probe_conjectures(&f3, &[9], 10, 0).unwrap();
        assert_eq!(rows.len(), 1);
        assert!((rows[0].direction_ratio - 16.0 / 27.0).abs() < 1e-12);
        let f11 = FieldCtx::new(11, 1).unwrap();
        assert_eq!(probe_conjectures(&f11, &[60], 5, 3).unwrap().len(), 5);
    }
}
