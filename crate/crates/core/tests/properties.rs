mod common;

use common::{
    divisibility_constraints_hold, divisible_image_element, field, homo_poly, poly, small_rational,
};
use num_traits::Zero;
use proptest::prelude::*;

use lvint::field::{lie_derivative, reconstruct, split};
use lvint::homological::{build_ell, corange_chain};
use lvint::lv::{
    canonical_field, canonicalize_quadratic_lv, check_invariant_curve, primitive_integral,
    x_minus_y, LinearChange,
};
use lvint::poly::divides;
use lvint::rational::{format_rational, int, parse_rational};
use lvint::{BiPoly, HomoField, HomoPoly, PlanarField, Rational};

fn config() -> ProptestConfig {
    ProptestConfig::with_cases(200)
}

fn homo_field(degree: u32) -> impl Strategy<Value = HomoField> {
    (homo_poly(degree), homo_poly(degree)).prop_map(move |(p, q)| {
        HomoField::from_parts(degree, p.into_body(), q.into_body()).unwrap()
    })
}

fn triple() -> impl Strategy<Value = (u32, u32, u32)> {
    (1u32..=4, 1u32..=4, 1u32..=4)
}

fn gcd3((p, q, r): (u32, u32, u32)) -> bool {
    use num_integer::Integer;
    p.gcd(&q).gcd(&r) == 1
}

proptest! {
    #![proptest_config(config())]

    #[test]
    fn leibniz_rule(f in field(3), c in poly(0, 3), d in poly(0, 3)) {
        let lhs = lie_derivative(&f, &(&c * &d));
        let rhs = &c * &lie_derivative(&f, &d) + &d * &lie_derivative(&f, &c);
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn splitting_reconstructs(fk in (1u32..=10).prop_flat_map(homo_field)) {
        let (h, mu) = split(&fk).unwrap();
        prop_assert_eq!(h.degree(), fk.degree() + 1);
        prop_assert_eq!(&reconstruct(&h, &mu), fk.body());
    }

    #[test]
    fn euler_identity(p in (0u32..=9).prop_flat_map(homo_poly)) {
        let s = int(p.degree() as i64);
        prop_assert_eq!(PlanarField::radial().lie_derivative(p.body()), p.body().scale(&s));
    }

    #[test]
    fn lie_derivative_grading(
        (fk, p) in (1u32..=5, 0u32..=5).prop_flat_map(|(n, k)| (homo_field(n), homo_poly(k)))
    ) {
        let image = fk.body().lie_derivative(p.body());
        let degree = fk.degree() + p.degree();
        prop_assert!(degree == 0 || image.is_homogeneous_of(degree - 1));
    }

    #[test]
    fn rational_text_round_trip(n in any::<i64>(), d in 1i64..=i64::MAX) {
        let r = Rational::new(n.into(), d.into());
        prop_assert_eq!(parse_rational(&format_rational(&r)).unwrap(), r);
    }

    #[test]
    fn polynomial_text_round_trip(p in poly(0, 6)) {
        let text = p.to_string();
        let back = BiPoly::parse(&text).unwrap();
        prop_assert_eq!(back.to_string(), text);
        prop_assert_eq!(back, p);
    }

    #[test]
    fn cofactor_additivity(t in triple(), (a, b, c) in (0u32..=3, 0u32..=3, 0u32..=3)) {
        prop_assume!(a + b + c > 0);
        let (p, q, r) = t;
        let g2 = canonical_field(p, q, r);
        let curve = BiPoly::x().pow(a) * BiPoly::y().pow(b) * x_minus_y().pow(c);
        let cert = check_invariant_curve(g2.body(), &curve, a + b + c + 4).unwrap();
        let (p, q, r) = (p as i64, q as i64, r as i64);
        let kx = BiPoly::from_i64_terms(&[(-q, 1, 1, 0), (q + r, 1, 0, 1)]);
        let ky = BiPoly::from_i64_terms(&[(p + r, 1, 1, 0), (-p, 1, 0, 1)]);
        let kxy = BiPoly::from_i64_terms(&[(-q, 1, 1, 0), (-p, 1, 0, 1)]);
        let expected = kx.scale(&int(a as i64)) + ky.scale(&int(b as i64)) + kxy.scale(&int(c as i64));
        prop_assert_eq!(cert.cofactor, expected);
    }

    #[test]
    fn divisibility_lifts_through_leading_part(
        t in triple(),
        which in 0usize..3,
        m in 1u32..=3,
        k in 1u32..=9,
        weights in proptest::collection::vec(small_rational(), 10),
    ) {
        prop_assume!(divisibility_constraints_hold(t, m, k));
        let (f, pk) = divisible_image_element(t, which, m, k, &weights);
        let g2 = canonical_field(t.0, t.1, t.2);
        let image = g2.body().lie_derivative(&pk);
        prop_assert!(divides(&f, &image).unwrap().is_some());
        prop_assert!(divides(&f, &pk).unwrap().is_some(), "p_k = {} not divisible by {}", pk, f);
    }

    #[test]
    fn ell_matrix_matches_symbolic(
        (t, eta) in (triple(), 1u32..=10).prop_flat_map(|(t, k)| (Just(t), homo_poly(k - 1)))
    ) {
        let g2 = canonical_field(t.0, t.1, t.2);
        let ell = lvint::homological::ell_operator(&g2, eta.degree() + 1);
        prop_assert_eq!(ell.apply(eta.body()), g2.body().lie_derivative(eta.body()));
    }

    #[test]
    fn range_membership_is_exact(
        (t, v) in (triple().prop_filter("primitive", |t| gcd3(*t)), 2u32..=10)
            .prop_flat_map(|(t, k)| (Just(t), homo_poly(k)))
    ) {
        let lv = lvint::lv::LvData::from_triple(t.0, t.1, t.2).unwrap();
        let k = v.degree();
        let chain = corange_chain(&lv, k).unwrap();
        let (_, c) = chain.decompose(k, v.body());
        let ell = build_ell(&lv, k).unwrap();
        let solvable = ell.entries.solve(&ell.codomain_coords(v.body())).is_some();
        prop_assert_eq!(solvable, c.iter().all(|x| x.is_zero()));
        // Removing the complement part always lands in the range.
        let inside = v.body() - &chain.combine(k, &c);
        prop_assert!(ell.entries.solve(&ell.codomain_coords(&inside)).is_some());
    }

    #[test]
    fn canonicalization_undoes_diagonal_scaling(
        t in triple().prop_filter("primitive", |t| gcd3(*t)),
        (sx, sy, ts) in (small_rational(), small_rational(), small_rational()),
    ) {
        prop_assume!(!sx.is_zero() && !sy.is_zero() && !ts.is_zero());
        let target = canonical_field(t.0, t.1, t.2);
        let scramble = LinearChange { scale_x: sx, scale_y: sy, time_scale: ts };
        let f2 = HomoField::new(2, scramble.push_forward(target.body())).unwrap();
        let lv = canonicalize_quadratic_lv(&f2).unwrap();
        prop_assert_eq!((lv.p, lv.q, lv.r), t);
        prop_assert_eq!(&lv.linear_change.push_forward(f2.body()), target.body());
        let again = canonicalize_quadratic_lv(&target).unwrap();
        prop_assert_eq!((again.p, again.q, again.r), t);
        prop_assert!(again.linear_change.is_identity());
    }
}

#[test]
fn primitive_integral_is_first_integral_for_small_exponents() {
    for p in 1..=6 {
        for q in 1..=6 {
            for r in 1..=6 {
                let g2 = canonical_field(p, q, r);
                let im: HomoPoly = primitive_integral(p, q, r);
                assert!(g2.body().lie_derivative(im.body()).is_zero(), "({p},{q},{r})");
            }
        }
    }
}
