#![allow(dead_code)]

use proptest::prelude::*;

use lvint::rational::rat;
use lvint::{BiPoly, HomoPoly, Monomial, PlanarField, Rational};

pub fn small_rational() -> impl Strategy<Value = Rational> {
    (-9i64..=9, 1i64..=4).prop_map(|(n, d)| rat(n, d))
}

pub fn homo_poly(degree: u32) -> impl Strategy<Value = HomoPoly> {
    proptest::collection::vec(small_rational(), (degree + 1) as usize)
        .prop_map(move |c| HomoPoly::from_coords(degree, &c))
}

/// Polynomial with terms of degree `min..=max`.
pub fn poly(min: u32, max: u32) -> impl Strategy<Value = BiPoly> {
    proptest::collection::vec(((0u32..=max), (0u32..=max), small_rational()), 0..8).prop_map(
        move |terms| {
            BiPoly::from_terms(terms.into_iter().filter_map(|(i, j, c)| {
                let d = i + j;
                (min..=max).contains(&d).then_some((Monomial::new(i, j), c))
            }))
        },
    )
}

pub fn field(max: u32) -> impl Strategy<Value = PlanarField> {
    (poly(1, max), poly(1, max)).prop_map(|(p, q)| PlanarField::new(p, q).unwrap())
}

/// A random element of `{p_k in P_k : G_2(p_k) in <f^m>}` for the canonical
/// leading part, `f` one of `x`, `y`, `x - y`. Returns `(f^m, p_k)`.
pub fn divisible_image_element(
    (p, q, r): (u32, u32, u32),
    which: usize,
    m: u32,
    k: u32,
    weights: &[Rational],
) -> (BiPoly, BiPoly) {
    use lvint::linalg::Matrix;
    use lvint::lv::{canonical_field, x_minus_y};
    use lvint::poly::monomial_basis;
    use lvint::rational::int;

    let g2 = canonical_field(p, q, r);
    let f = [BiPoly::x(), BiPoly::y(), x_minus_y()][which].pow(m);
    let domain = monomial_basis(k);
    let codomain = monomial_basis(k + 1);
    let cols: Vec<Vec<Rational>> = domain
        .iter()
        .map(|mono| {
            let e = BiPoly::term(int(1), mono.x, mono.y);
            let (_, rem) = g2.body().lie_derivative(&e).div_rem(&f).unwrap();
            codomain.iter().map(|c| rem.coeff_of(*c)).collect()
        })
        .collect();
    let null = Matrix::from_columns(codomain.len(), &cols).nullspace();
    let mut pk = BiPoly::zero();
    for (v, w) in null.iter().zip(weights) {
        pk += &BiPoly::from_terms(domain.iter().copied().zip(v.iter().map(|c| c * w)));
    }
    (f, pk)
}

/// The degree constraints under which divisibility lifts: `M j != e k` for
/// each exponent `e` and `j < m`.
pub fn divisibility_constraints_hold((p, q, r): (u32, u32, u32), m: u32, k: u32) -> bool {
    let big_m = p + q + r;
    k >= m && (1..m).all(|j| [p, q, r].iter().all(|&e| big_m * j != e * k))
}
