//! Invariant curves, cofactors, and canonicalization of quadratic
//! Lotka-Volterra leading parts `(x(a1 x + a2 y), y(b1 x + b2 y))` into the
//! shape `(x(-q x + (q+r) y), y((p+r) x - p y))`.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::field::{split, wedge_with_radial, HomoField, PlanarField};
use crate::poly::{BiPoly, HomoPoly, Monomial};
use crate::rational::{format_rational, int, Rational};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InvariantCurveCertificate {
    pub curve: BiPoly,
    pub cofactor: BiPoly,
    pub verified_to_degree: u32,
}

/// Computes the cofactor `K` of `c` degree by degree and certifies
/// `F(c) - K c = 0` through degree `n`.
///
/// The unknown at degree `d` is `K_{d-s}` where `s` is the order of `c`; it
/// must equal the degree-`d` residual divided by the lowest part of `c`.
pub fn check_invariant_curve(
    f: &PlanarField,
    c: &BiPoly,
    n: u32,
) -> Result<InvariantCurveCertificate> {
    if c.is_zero() {
        return Err(Error::InvalidArgument("curve must be nonzero".into()));
    }
    if !c.constant_term().is_zero() {
        return Err(Error::InvalidArgument(
            "curve must vanish at the origin".into(),
        ));
    }
    let s = c.min_degree().expect("nonzero");
    let lowest = c.lowest_part();
    let fc = f.lie_derivative_truncated(c, n);
    let mut cofactor = BiPoly::zero();
    for d in s..=n {
        let kc = cofactor.mul_truncated(c, d).homogeneous_part(d);
        let residual = fc.homogeneous_part(d) - kc;
        if residual.is_zero() {
            continue;
        }
        match residual.div_exact(&lowest)? {
            Some(k) => cofactor += &k,
            None => return Err(Error::NotInvariant { degree: d }),
        }
    }
    Ok(InvariantCurveCertificate {
        curve: c.clone(),
        cofactor,
        verified_to_degree: n,
    })
}

/// Cofactor of a factor `f` of `h(F_n)`: writing `h = f g`, it is `X_g(f) + s mu`.
pub fn cofactor_of_h_factor(fk: &HomoField, f: &HomoPoly) -> Result<HomoPoly> {
    let (h, mu) = split(fk)?;
    if f.is_zero() {
        return Err(Error::NotAFactor);
    }
    let g = h.body().div_exact(f.body())?.ok_or(Error::NotAFactor)?;
    let fb = f.body();
    // X_g(f) = -g_y f_x + g_x f_y
    let xg_f = &g.dx() * &fb.dy() - &g.dy() * &fb.dx();
    let s = int(f.degree() as i64);
    let cof = xg_f + mu.body().scale(&s);
    HomoPoly::new(fk.degree() - 1, cof)
}

/// Diagonal change `(x, y) -> (sx x, sy y)` together with a constant time
/// rescale. Pushing a field forward gives `G(X) = t A F(A^-1 X)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LinearChange {
    pub scale_x: Rational,
    pub scale_y: Rational,
    pub time_scale: Rational,
}

impl LinearChange {
    pub fn identity() -> Self {
        LinearChange {
            scale_x: Rational::one(),
            scale_y: Rational::one(),
            time_scale: Rational::one(),
        }
    }

    pub fn is_identity(&self) -> bool {
        *self == LinearChange::identity()
    }

    fn monomial_factor(&self, m: &Monomial, inverse: bool) -> Rational {
        let (sx, sy) = if inverse {
            (self.scale_x.recip(), self.scale_y.recip())
        } else {
            (self.scale_x.clone(), self.scale_y.clone())
        };
        num_traits::pow(sx, m.x as usize) * num_traits::pow(sy, m.y as usize)
    }

    /// `p(x, y) -> p(A^-1 (x, y))`.
    fn substitute_inverse(&self, p: &BiPoly) -> BiPoly {
        BiPoly::from_terms(p.terms().map(|(m, c)| (*m, c * self.monomial_factor(m, true))))
    }

    /// `p(x, y) -> p(A (x, y))`.
    pub fn pull_back_scalar(&self, p: &BiPoly) -> BiPoly {
        BiPoly::from_terms(p.terms().map(|(m, c)| (*m, c * self.monomial_factor(m, false))))
    }

    pub fn push_forward(&self, f: &PlanarField) -> PlanarField {
        let p = self
            .substitute_inverse(f.p())
            .scale(&(&self.scale_x * &self.time_scale));
        let q = self
            .substitute_inverse(f.q())
            .scale(&(&self.scale_y * &self.time_scale));
        PlanarField::new(p, q).expect("linear change preserves the singular point")
    }

    /// A vector field `S` in the new coordinates pulled back to the old ones:
    /// `A^-1 S(A x)`. Time scaling does not enter.
    pub fn pull_back_field(&self, s: &PlanarField) -> PlanarField {
        let p = self.pull_back_scalar(s.p()).scale(&self.scale_x.recip());
        let q = self.pull_back_scalar(s.q()).scale(&self.scale_y.recip());
        PlanarField::new(p, q).expect("linear change preserves the singular point")
    }
}

/// Canonical quadratic leading part, its primitive first integral, and the
/// change that produced it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LvData {
    pub p: u32,
    pub q: u32,
    pub r: u32,
    pub linear_change: LinearChange,
    pub canonical_field: HomoField,
    pub primitive_integral: HomoPoly,
    pub h: HomoPoly,
    pub mu: HomoPoly,
}

impl LvData {
    /// Data for an already canonical leading part. `gcd(p, q, r)` must be 1.
    pub fn from_triple(p: u32, q: u32, r: u32) -> Result<Self> {
        if p == 0 || q == 0 || r == 0 {
            return Err(Error::InvalidArgument("p, q, r must be positive".into()));
        }
        if p.gcd(&q).gcd(&r) != 1 {
            return Err(Error::InvalidArgument("gcd(p, q, r) must be 1".into()));
        }
        let canonical = canonical_field(p, q, r);
        let (h, mu) = split(&canonical)?;
        Ok(LvData {
            p,
            q,
            r,
            linear_change: LinearChange::identity(),
            canonical_field: canonical,
            primitive_integral: primitive_integral(p, q, r),
            h,
            mu,
        })
    }

    /// `M = p + q + r`, the degree of the primitive first integral.
    pub fn m(&self) -> u32 {
        self.p + self.q + self.r
    }
}

/// `(x(-q x + (q+r) y), y((p+r) x - p y))`. Any positive triple is accepted.
pub fn canonical_field(p: u32, q: u32, r: u32) -> HomoField {
    let (p, q, r) = (p as i64, q as i64, r as i64);
    HomoField::from_parts(
        2,
        BiPoly::from_i64_terms(&[(-q, 1, 2, 0), (q + r, 1, 1, 1)]),
        BiPoly::from_i64_terms(&[(p + r, 1, 1, 1), (-p, 1, 0, 2)]),
    )
    .expect("canonical field is homogeneous")
}

/// `x^p y^q (x - y)^r`.
pub fn primitive_integral(p: u32, q: u32, r: u32) -> HomoPoly {
    let body = BiPoly::term(Rational::one(), p, q) * (BiPoly::x() - BiPoly::y()).pow(r);
    HomoPoly::new(p + q + r, body).expect("product of linear forms is homogeneous")
}

pub fn x_minus_y() -> BiPoly {
    BiPoly::x() - BiPoly::y()
}

/// Decides whether the quadratic leading part admits a polynomial first
/// integral and, if so, maps it to canonical shape.
pub fn canonicalize_quadratic_lv(f2: &HomoField) -> Result<LvData> {
    if f2.degree() != 2 {
        return Err(Error::LeadingNotQuadratic {
            degree: f2.degree(),
        });
    }
    let (pp, qq) = (f2.body().p(), f2.body().q());
    if !pp.coeff(0, 2).is_zero() {
        return Err(Error::NotLvShape("P is not divisible by x".into()));
    }
    if !qq.coeff(2, 0).is_zero() {
        return Err(Error::NotLvShape("Q is not divisible by y".into()));
    }
    let (a1, a2) = (pp.coeff(2, 0), pp.coeff(1, 1));
    let (b1, b2) = (qq.coeff(1, 1), qq.coeff(0, 2));
    if a1.is_zero() || b2.is_zero() || (&a2 * &b1 - &a1 * &b2).is_zero() {
        return Err(Error::OriginNotIsolated);
    }
    if b1 == a1 {
        return Err(Error::NotPolynomiallyIntegrable("b1 = a1".into()));
    }
    if b2 == a2 {
        return Err(Error::NotPolynomiallyIntegrable("b2 = a2".into()));
    }
    // Kernel of [[a1, b1, a1], [a2, b2, b2]] acting on (p, q, r).
    let raw = [
        &b2 * (&b1 - &a1),
        &a1 * (&a2 - &b2),
        &a1 * &b2 - &a2 * &b1,
    ];
    let positive = raw.iter().all(|v| v.is_positive());
    let negative = raw.iter().all(|v| v.is_negative());
    if !(positive || negative) {
        return Err(Error::NotPolynomiallyIntegrable(format!(
            "exponent ratios {}:{}:{} are not all of one sign",
            format_rational(&raw[0]),
            format_rational(&raw[1]),
            format_rational(&raw[2])
        )));
    }
    let lcm = raw.iter().fold(BigInt::one(), |l, v| l.lcm(v.denom()));
    let ints: Vec<BigInt> = raw
        .iter()
        .map(|v| (v * Rational::from_integer(lcm.clone())).to_integer().abs())
        .collect();
    let g = ints[0].gcd(&ints[1]).gcd(&ints[2]);
    let triple: Vec<u32> = ints
        .iter()
        .map(|v| {
            u32::try_from(v / &g).map_err(|_| {
                Error::NotPolynomiallyIntegrable("exponents too large".into())
            })
        })
        .collect::<Result<_>>()?;
    let (p, q, r) = (triple[0], triple[1], triple[2]);
    let mut lv = LvData::from_triple(p, q, r)?;
    lv.linear_change = LinearChange {
        scale_x: -&a1 / int(q as i64),
        scale_y: -&b2 / int(p as i64),
        time_scale: Rational::one(),
    };
    debug_assert_eq!(
        lv.linear_change.push_forward(f2.body()),
        *lv.canonical_field.body()
    );
    Ok(lv)
}

/// Canonicalizes the leading component of a full field.
pub fn canonicalize_field(f: &PlanarField) -> Result<LvData> {
    let lead = f
        .leading()
        .ok_or_else(|| Error::InvalidArgument("zero vector field".into()))?;
    if lead.degree() != 2 {
        return Err(Error::LeadingNotQuadratic {
            degree: lead.degree(),
        });
    }
    canonicalize_quadratic_lv(&lead)
}

/// `[(x, p), (y, q), (x - y, r)]`: the factors of the primitive integral.
pub fn leading_invariant_factors(lv: &LvData) -> Vec<(BiPoly, u32)> {
    vec![(BiPoly::x(), lv.p), (BiPoly::y(), lv.q), (x_minus_y(), lv.r)]
}

/// The wedge polynomial `h` of the canonical leading part.
pub fn canonical_h(lv: &LvData) -> HomoPoly {
    wedge_with_radial(&lv.canonical_field)
}
