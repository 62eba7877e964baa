use proptest::prelude::*;

use qplane_core::counting::{self, PairClass};
use qplane_core::fourier;
use qplane_core::geometry::{self, random_set, Point, PointSet};
use qplane_core::groups::{enumerate_g1, enumerate_o2, find_isometry, Orthogonal2};
use qplane_core::oracle;
use qplane_core::{FieldCtx, FieldElement, Limits};

const FIELDS: [(u32, u32); 7] = [(3, 1), (5, 1), (7, 1), (11, 1), (13, 1), (3, 2), (5, 2)];

fn field() -> impl Strategy<Value = FieldCtx> {
    (0..FIELDS.len()).prop_map(|i| FieldCtx::new(FIELDS[i].0, FIELDS[i].1).unwrap())
}

/// A field, three elements of it and a random set of bounded size.
fn setup(max_size: usize) -> impl Strategy<Value = (FieldCtx, [u32; 3], PointSet)> {
    (field(), any::<[u32; 3]>(), 0..=max_size, any::<u64>()).prop_map(|(ctx, raw, size, seed)| {
        let q = ctx.q();
        let size = size.min(ctx.plane_size());
        let e = random_set(&ctx, size, seed).unwrap();
        (ctx, raw.map(|v| v % q), e)
    })
}

fn el(ctx: &FieldCtx, v: u32) -> FieldElement {
    ctx.element(v).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn field_axioms((ctx, [a, b, c], _) in setup(0)) {
        let (a, b, c) = (el(&ctx, a), el(&ctx, b), el(&ctx, c));
        prop_assert_eq!(ctx.add(a, ctx.add(b, c)), ctx.add(ctx.add(a, b), c));
        prop_assert_eq!(ctx.mul(a, ctx.mul(b, c)), ctx.mul(ctx.mul(a, b), c));
        prop_assert_eq!(ctx.mul(a, ctx.add(b, c)), ctx.add(ctx.mul(a, b), ctx.mul(a, c)));
        prop_assert_eq!(ctx.add(a, ctx.neg(a)), FieldElement::ZERO);
        prop_assert_eq!(ctx.sub(ctx.add(a, b), b), a);
        if !a.is_zero() {
            prop_assert_eq!(ctx.mul(a, ctx.inv(a).unwrap()), FieldElement::ONE);
            prop_assert_eq!(ctx.pow(a, ctx.q() as u64 - 1), FieldElement::ONE);
        }
    }

    #[test]
    fn roots_traces_and_characters((ctx, [a, b, _], _) in setup(0)) {
        let (a, b) = (el(&ctx, a), el(&ctx, b));
        let sq = ctx.square(a);
        prop_assert!(ctx.is_square(sq));
        let (s, t) = ctx.sqrt(sq).unwrap();
        prop_assert_eq!(ctx.square(s), sq);
        prop_assert_eq!(ctx.square(t), sq);
        prop_assert!(s.index() <= t.index());
        prop_assert_eq!(ctx.trace(ctx.add(a, b)), ctx.add(ctx.trace(a), ctx.trace(b)));
        let prod = ctx.chi(a) * ctx.chi(b);
        prop_assert!((prod - ctx.chi(ctx.add(a, b))).norm() < 1e-12);
    }

    #[test]
    fn orthogonal_maps_preserve_the_form((ctx, [x, y, i], _) in setup(0)) {
        let o2 = enumerate_o2(&ctx);
        let theta = o2[i as usize % o2.len()];
        let v = Point::new(el(&ctx, x), el(&ctx, y));
        prop_assert_eq!(ctx.norm(theta.apply(&ctx, v)), ctx.norm(v));
        prop_assert_eq!(theta.compose(&ctx, &theta.transpose()), Orthogonal2::IDENTITY);
    }

    #[test]
    fn isometries_exist_for_equal_nonzero_distances((ctx, [i, j, k], e) in setup(12)) {
        prop_assume!(e.len() >= 2);
        let m = e.members();
        let (u, v) = (m[i as usize % m.len()], m[j as usize % m.len()]);
        let d = ctx.vsub(u, v);
        prop_assume!(!d.is_zero() && !ctx.norm(d).is_zero());
        let o2 = enumerate_o2(&ctx);
        let theta = o2[k as usize % o2.len()];
        let z = Point::new(el(&ctx, i), el(&ctx, j));
        let (x, y) = (ctx.vadd(theta.apply(&ctx, u), z), ctx.vadd(theta.apply(&ctx, v), z));
        let (found, shift) = find_isometry(&ctx, u, v, x, y).unwrap();
        prop_assert_eq!(ctx.vadd(found.apply(&ctx, u), shift), x);
        prop_assert_eq!(ctx.vadd(found.apply(&ctx, v), shift), y);
    }

    #[test]
    fn mass_identities((ctx, [l, _, _], e) in setup(40)) {
        let n = e.len() as u128;
        let hist = counting::distance_histogram(&ctx, &e);
        prop_assert_eq!(hist.total(), n * n);
        prop_assert_eq!(counting::gamma_table(&ctx, &e, el(&ctx, l)).total(), n * n);
        let nu: u128 = counting::nu_table(&ctx, &e, PairClass::All).iter().sum();
        prop_assert_eq!(nu, n.pow(4));
        let q = counting::quotient_quadruples(&ctx, &e, FieldElement::ONE);
        prop_assert_eq!(q.total, hist.sum_squares());
    }

    #[test]
    fn bridge_and_multiplicity_identities((ctx, _, e) in setup(40)) {
        let n = e.len() as u128;
        let q = ctx.q() as u128;
        prop_assert_eq!(
            counting::directions_group_energy(&ctx, &e),
            counting::l2_directions(&ctx, &e) + (q - 1) * n * n
        );
        let s = counting::l2_scales(&ctx, &e);
        prop_assert_eq!(s.group - s.literal, (q - 2) * n.pow(4));
        prop_assert_eq!(s.group, counting::scale_energy_via_gamma(&ctx, &e));
    }

    #[test]
    fn eta_decomposition_and_holder((ctx, [r, _, _], e) in setup(30)) {
        let r = el(&ctx, r);
        prop_assume!(ctx.is_nonzero_square(r));
        let en = counting::eta_energy(&ctx, &e, r).unwrap();
        let n = e.len() as u128;
        let order = en.group_order as u128;
        let hist = counting::distance_histogram(&ctx, &e);
        let count = counting::quotient_quadruples(&ctx, &e, r);
        let iso = (hist[0] as u128 - n).pow(2);
        prop_assert_eq!(en.sum, n * n * order);
        prop_assert_eq!(en.sum_sq, n * n * order + 2 * count.nonzero + iso);
        let q = ctx.q() as u128;
        prop_assert!(en.sum_sq * q * q >= n.pow(4) * order);
    }

    #[test]
    fn counts_are_invariant_under_rigid_motions((ctx, [x, y, i], e) in setup(30)) {
        let z = Point::new(el(&ctx, x), el(&ctx, y));
        let o2 = enumerate_o2(&ctx);
        let theta = o2[i as usize % o2.len()];
        let moved = PointSet::new(&ctx, e.iter().map(|v| ctx.vadd(theta.apply(&ctx, v), z)));
        let (a, b) = (counting::distance_histogram(&ctx, &moved), counting::distance_histogram(&ctx, &e));
        prop_assert_eq!(a.counts(), b.counts());
        prop_assert_eq!(counting::l2_directions(&ctx, &moved), counting::l2_directions(&ctx, &e));
        prop_assert_eq!(counting::l2_scales(&ctx, &moved), counting::l2_scales(&ctx, &e));
    }

    #[test]
    fn plancherel_and_inversion((ctx, _, e) in setup(60)) {
        let t = fourier::dft_indicator(&ctx, &e);
        let q2 = (ctx.q() as f64).powi(2);
        prop_assert!((t.energy() - e.len() as f64 / q2).abs() < 1e-9);
        prop_assert!(fourier::inverse_check(&ctx, &t, &e) < 1e-9);
    }

    #[test]
    fn spectral_identities((ctx, [l, x, y], e) in setup(30)) {
        let g = counting::gamma_fourier_check(&ctx, &e, el(&ctx, l));
        prop_assert!(g.residual < 1e-9 && g.modulus_residual < 1e-9);
        let dir = Point::new(el(&ctx, x), el(&ctx, y));
        prop_assume!(!dir.is_zero() && !e.is_empty());
        let t = fourier::dft_indicator(&ctx, &e);
        let line = fourier::line_energy(&ctx, &e, &t, dir).unwrap();
        prop_assert!((line.spectral - line.combinatorial).abs() < 1e-9);
        let m = fourier::lambda_fourth_moment(&ctx, &e, &t, dir).unwrap();
        prop_assert!((m.spectral - m.combinatorial).abs() < 1e-9);
    }

    #[test]
    fn orbit_inequality((ctx, _, e) in setup(12)) {
        prop_assume!(ctx.q() <= 7);
        let nu = counting::nu_table(&ctx, &e, PairClass::NonSquares);
        let sum_sq: u128 = nu.iter().map(|v| v * v).sum();
        prop_assert!(sum_sq <= counting::mu_energy(&ctx, &e, &Limits::default()).unwrap());
    }

    #[test]
    fn geometry_matches_enumeration((ctx, _, e) in setup(7)) {
        prop_assume!(ctx.q() <= 13 && e.len() >= 2);
        prop_assert_eq!(geometry::scale_set(&ctx, &e).unwrap(), oracle::scale_set(&ctx, &e));
        prop_assert_eq!(geometry::direction_set(&ctx, &e).unwrap().len(), oracle::direction_count(&ctx, &e));
        prop_assert_eq!(counting::l2_directions(&ctx, &e), oracle::l2_directions(&ctx, &e));
        prop_assert_eq!(counting::l2_scales(&ctx, &e).group, oracle::scale_group_energy(&ctx, &e));
    }
}

#[test]
fn g1_group_law() {
    let ctx = FieldCtx::new(5, 1).unwrap();
    let g1 = enumerate_g1(&ctx, &Limits::default()).unwrap();
    let e = random_set(&ctx, 1, 0).unwrap();
    let pair = (e.members()[0], ctx.point(3, 4).unwrap());
    for (i, g) in g1.iter().enumerate().step_by(11) {
        let h = g1[(i * 7 + 3) % g1.len()];
        assert!(g.is_valid(&ctx));
        assert_eq!(g.compose(&ctx, &g.inverse(&ctx)), qplane_core::groups::G1Element::identity());
        assert_eq!(g.compose(&ctx, &h).apply(&ctx, pair), g.apply(&ctx, h.apply(&ctx, pair)));
    }
}
