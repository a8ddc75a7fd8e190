//! Integrability decisions and certificates: truncated first integrals,
//! inverse integrating factors, Lie symmetries, and the case-6 invariant curve.

use num_traits::{One, Zero};
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::family::AplicaParams;
use crate::field::{lie_bracket, wedge_with_radial, PlanarField};
use crate::homological::corange_chain;
use crate::linalg::{greedy_complement, DirectSum, Matrix};
use crate::lv::{canonicalize_field, check_invariant_curve, InvariantCurveCertificate, LvData};
use crate::normal_form::{normal_form, reciprocal_one_plus, NormalFormReport, OrbitalChange};
use crate::poly::{monomial_basis, BiPoly, HomoPoly, Monomial};
use crate::rational::{format_rational, int, Rational};

/// First degree at which a solver could not continue, with the nonzero
/// complement coordinates of the offending residual.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Obstruction {
    pub degree: u32,
    pub coords: Vec<Rational>,
}

impl Obstruction {
    pub fn to_json(&self) -> Value {
        json!({
            "degree": self.degree,
            "coords": self.coords.iter().map(format_rational).collect::<Vec<_>>(),
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FirstIntegralCertificate {
    pub integral: BiPoly,
    /// Lowest homogeneous part of `integral`; `I_M` in canonical coordinates.
    pub leading: HomoPoly,
    pub verified_to_degree: u32,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum FirstIntegralOutcome {
    Integral(FirstIntegralCertificate),
    Obstructed(Obstruction),
}

impl FirstIntegralOutcome {
    pub fn succeeded(&self) -> bool {
        matches!(self, FirstIntegralOutcome::Integral(_))
    }
}

/// True iff `F(c)` vanishes through degree `n`, using only components of `f`
/// that can contribute there.
pub fn annihilates_through(f: &PlanarField, c: &BiPoly, n: u32) -> bool {
    f.truncate(n).lie_derivative_truncated(c, n).is_zero()
}

/// Truncated first integral `I_M + ...` through degree `n` (`F(I)` checked
/// through `n + 1`).
pub fn solve_first_integral(f: &PlanarField, n: u32) -> Result<FirstIntegralOutcome> {
    solve_first_integral_with_power(f, n, 1)
}

/// As [`solve_first_integral`], seeded with `I_M^l`.
///
/// At degree `d` the residual `[F(I)]_d` is split as `l_d(u) + sum c_i b_i`
/// over the corange chain. Nonzero `c` is an obstruction; otherwise `-u` is
/// the correction of degree `d - 1`.
pub fn solve_first_integral_with_power(
    f: &PlanarField,
    n: u32,
    l: u32,
) -> Result<FirstIntegralOutcome> {
    let lv = canonicalize_field(f)?;
    if l == 0 {
        return Err(Error::InvalidArgument("power of I_M must be positive".into()));
    }
    let start = lv.m() * l;
    if n < start {
        return Err(Error::InvalidArgument(format!(
            "integral degree {n} is below the seed degree {start}"
        )));
    }
    let top = n + 1;
    let g = lv.linear_change.push_forward(&f.truncate(top));
    let chain = corange_chain(&lv, top.max(2))?;
    let mut integral = lv.primitive_integral.body().pow(l);
    for d in start + 2..=top {
        let rest = g.lie_derivative_truncated(&integral, d).homogeneous_part(d);
        if rest.is_zero() {
            continue;
        }
        let (u, c) = chain.decompose(d, &rest);
        if c.iter().any(|v| !v.is_zero()) {
            return Ok(FirstIntegralOutcome::Obstructed(Obstruction {
                degree: d,
                coords: c,
            }));
        }
        integral -= u.body();
    }
    let integral = lv.linear_change.pull_back_scalar(&integral);
    if !annihilates_through(f, &integral, top) {
        return Err(Error::Internal("first integral fails verification".into()));
    }
    let leading = HomoPoly::new(start, integral.homogeneous_part(start))?;
    Ok(FirstIntegralOutcome::Integral(FirstIntegralCertificate {
        integral,
        leading,
        verified_to_degree: n,
    }))
}

/// `F(num) den - dpow num F(den) = 0` exactly, the numerator of
/// `F(num / den^dpow)` up to a power of `den`.
pub fn verify_rational_first_integral(
    f: &PlanarField,
    numerator: &BiPoly,
    denominator: &BiPoly,
    dpow: u32,
) -> Result<bool> {
    if denominator.constant_term().is_zero() {
        return Err(Error::InvalidArgument(
            "denominator must not vanish at the origin".into(),
        ));
    }
    let lhs = f.lie_derivative(numerator) * denominator.clone();
    let rhs = (numerator * &f.lie_derivative(denominator)).scale(&int(dpow as i64));
    Ok((lhs - rhs).is_zero())
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IifCertificate {
    pub v: BiPoly,
    pub verified_to_degree: u32,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum IifOutcome {
    Factor(IifCertificate),
    Obstructed(Obstruction),
}

impl IifOutcome {
    pub fn succeeded(&self) -> bool {
        matches!(self, IifOutcome::Factor(_))
    }
}

/// `F(v) - v div(F)` truncated at `n`.
pub fn iif_defect(f: &PlanarField, v: &BiPoly, n: u32) -> BiPoly {
    let f = f.truncate(n);
    f.lie_derivative_truncated(v, n) - v.mul_truncated(&f.divergence(), n)
}

/// Exact check of `F(v) = v div(F)`.
pub fn verify_iif(f: &PlanarField, v: &BiPoly) -> bool {
    (f.lie_derivative(v) - v * &f.divergence()).is_zero()
}

/// Inverse integrating factor seeded by `xy(x - y)` in canonical coordinates,
/// truncated at degree `n` and verified through `n + 1`.
pub fn solve_iif(f: &PlanarField, n: u32) -> Result<IifOutcome> {
    let lv = canonicalize_field(f)?;
    if n < 3 {
        return Err(Error::InvalidArgument("IIF degree must be at least 3".into()));
    }
    let top = n + 1;
    let g = lv.linear_change.push_forward(&f.truncate(top));
    let f2 = lv.canonical_field.body();
    let div2 = f2.divergence();
    let mut v = BiPoly::parse("x^2*y - x*y^2").expect("literal");
    for d in 5..=top {
        let rest = iif_defect(&g, &v, d).homogeneous_part(d);
        if rest.is_zero() {
            continue;
        }
        let domain = monomial_basis(d - 1);
        let codomain = monomial_basis(d);
        let coords = |p: &BiPoly| -> Vec<Rational> { codomain.iter().map(|m| p.coeff_of(*m)).collect() };
        let cols: Vec<Vec<Rational>> = domain
            .iter()
            .map(|m| {
                let e = BiPoly::term(Rational::one(), m.x, m.y);
                coords(&(f2.lie_derivative(&e) - &e * &div2))
            })
            .collect();
        let range = Matrix::from_columns(codomain.len(), &cols);
        let candidates: Vec<Vec<Rational>> = codomain
            .iter()
            .map(|m| coords(&BiPoly::term(Rational::one(), m.x, m.y)))
            .collect();
        let picked = greedy_complement(&range, &candidates);
        let complement: Vec<Vec<Rational>> = picked.iter().map(|&i| candidates[i].clone()).collect();
        let sum = DirectSum::new(range, &complement)
            .ok_or(Error::ComplementVerificationFailure { degree: d })?;
        let (u, c) = sum.decompose(&coords(&rest));
        if c.iter().any(|x| !x.is_zero()) {
            return Ok(IifOutcome::Obstructed(Obstruction {
                degree: d,
                coords: c,
            }));
        }
        v -= &BiPoly::from_terms(domain.iter().copied().zip(u));
    }
    let v = lv.linear_change.pull_back_scalar(&v);
    if !iif_defect(f, &v, top).is_zero() {
        return Err(Error::Internal("inverse integrating factor fails verification".into()));
    }
    Ok(IifOutcome::Factor(IifCertificate {
        v,
        verified_to_degree: n,
    }))
}

/// Whether `v`'s lowest part is a nonzero multiple of the wedge polynomial of
/// `f`'s leading part.
pub fn iif_leading_matches(f: &PlanarField, v: &BiPoly) -> bool {
    let Some(lead) = f.leading() else {
        return false;
    };
    let h = wedge_with_radial(&lead);
    let low = v.lowest_part();
    let (Some((_, c)), Some((_, hc))) = (low.leading(), h.body().leading()) else {
        return false;
    };
    h.body().scale(&(c / hc)) == low
}

/// Checks `[f, g] = nu f` through degree `n`, given `g = (x, y) + ...` and
/// `nu(0) = 1`.
pub fn verify_lie_symmetry(f: &PlanarField, g: &PlanarField, nu: &BiPoly, n: u32) -> bool {
    if g.component(1).body() != &PlanarField::radial() || !nu.constant_term().is_one() {
        return false;
    }
    let (f, g) = (f.truncate(n), g.truncate(n));
    let defect = &lie_bracket(&f, &g, n) - &f.mul_scalar(nu, n);
    defect.is_zero()
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LieSymmetry {
    pub g: PlanarField,
    pub nu: BiPoly,
}

/// Pulls the symmetry `(D, 1)` of the linearized normal form back to `f`.
///
/// If `G = (1 + a) Phi^* F`, a symmetry `(S, s)` of `G` becomes the symmetry
/// `(Phi_* S, (s - S(a)/(1 + a)) o Phi^-1)` of `F`.
pub fn lie_symmetry_from_report(report: &NormalFormReport) -> Result<LieSymmetry> {
    if !report.is_trivial() {
        return Err(Error::InvalidArgument(
            "a Lie symmetry is only assembled for orbitally linearizable fields".into(),
        ));
    }
    let n = report.max_degree;
    let change = &report.composite;
    let a = &change.rescale;
    let s = PlanarField::radial();
    let s_of_a = s.lie_derivative_truncated(a, n);
    let sigma_g = BiPoly::one() - s_of_a.mul_truncated(&reciprocal_one_plus(a, n), n);
    let psi = OrbitalChange {
        shift: change.inverse(n).shift,
        rescale: BiPoly::zero(),
    };
    let s_c = psi.apply(&s, n);
    let sigma_c = psi.substitute(&sigma_g, n);
    let lc = &report.lv.linear_change;
    Ok(LieSymmetry {
        g: lc.pull_back_field(&s_c),
        nu: lc.pull_back_scalar(&sigma_c),
    })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Witness {
    FirstIntegral(FirstIntegralCertificate),
    Obstruction(Obstruction),
}

#[derive(Debug, Clone)]
pub struct ClassificationVerdict {
    pub integrable: bool,
    pub witness: Witness,
    pub report: NormalFormReport,
}

/// Integral degree matching a normal form through `n`: an `eta_j` with
/// `j <= n - 1` first shows up in `F(I)` at degree `j + M`.
pub fn first_integral_degree(lv: &LvData, n: u32) -> u32 {
    n + lv.m() - 2
}

/// IIF degree matching a normal form through `n`: `eta_j` shows up at `j + 3`.
pub fn iif_degree(n: u32) -> u32 {
    n + 1
}

/// Formal integrability through degree `n`. The obstruction, when present,
/// is the first nonzero `eta_j` (its `degree` is `j`).
pub fn classify(f: &PlanarField, n: u32) -> Result<ClassificationVerdict> {
    let report = normal_form(f, n)?;
    if let Some((j, coords)) = report.first_obstruction() {
        let witness = Witness::Obstruction(Obstruction {
            degree: j,
            coords: coords.to_vec(),
        });
        return Ok(ClassificationVerdict {
            integrable: false,
            witness,
            report,
        });
    }
    match solve_first_integral(f, first_integral_degree(&report.lv, n))? {
        FirstIntegralOutcome::Integral(cert) => Ok(ClassificationVerdict {
            integrable: true,
            witness: Witness::FirstIntegral(cert),
            report,
        }),
        FirstIntegralOutcome::Obstructed(o) => Err(Error::Internal(format!(
            "normal form is linear through degree {n} but the first integral is obstructed at degree {}",
            o.degree
        ))),
    }
}

/// Verdicts of the three independent tests at matched truncation degrees.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Agreement {
    pub normal_form: bool,
    pub first_integral: bool,
    pub iif: bool,
}

impl Agreement {
    pub fn consistent(&self) -> bool {
        self.normal_form == self.first_integral && self.first_integral == self.iif
    }
}

pub fn three_way(f: &PlanarField, n: u32) -> Result<Agreement> {
    let report = normal_form(f, n)?;
    let fi = solve_first_integral(f, first_integral_degree(&report.lv, n))?;
    let iif = solve_iif(f, iif_degree(n))?;
    Ok(Agreement {
        normal_form: report.is_trivial(),
        first_integral: fi.succeeded(),
        iif: iif.succeeded(),
    })
}

/// Coefficients of one term of the case-6 curve as polynomials in the
/// parameters, with `x` standing for `b02` and `y` for `b11`. Odd degrees
/// `2j + 1` give `a x^j y^j (x - y)`; even degrees `2j` give
/// `x^(j-1) y^(j-1) (a x^2 + b xy + a y^2)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Case6Coefficients {
    pub degree: u32,
    pub a: BiPoly,
    pub b: Option<BiPoly>,
}

/// The recurrence for degrees `1..=n`.
pub fn case6_recurrence_coefficients(n: u32) -> Vec<Case6Coefficients> {
    let b02 = BiPoly::x();
    let b11 = BiPoly::y();
    let mut out = vec![Case6Coefficients {
        degree: 1,
        a: BiPoly::one(),
        b: None,
    }];
    let mut j0: i64 = 0;
    while (out.len() as u32) < n {
        let odd = out.last().expect("nonempty").a.clone();
        let (t, u) = (2 * j0 - 1, 2 * j0 + 3);
        let a = (&odd * &b02).scale(&(-int(1) / int(t)));
        let mid = b11.scale(&(int(1) / int(u))) + b02.scale(&(int(4 * (2 * j0 + 1)) / int(t * u)));
        let b = &odd * &mid;
        out.push(Case6Coefficients {
            degree: 2 * j0 as u32 + 2,
            a: a.clone(),
            b: Some(b.clone()),
        });
        if out.len() as u32 == n {
            break;
        }
        j0 += 1;
        let next = (&a * &b11 - &b * &b02).scale(&(int(1) / int(j0)));
        out.push(Case6Coefficients {
            degree: 2 * j0 as u32 + 1,
            a: next,
            b: None,
        });
    }
    out
}

/// The homogeneous term of the curve for given coefficient values.
pub fn case6_term(coeffs: &Case6Coefficients, b02: &Rational, b11: &Rational) -> BiPoly {
    let a = coeffs.a.eval(b02, b11);
    match &coeffs.b {
        None => {
            let j = (coeffs.degree - 1) / 2;
            BiPoly::term(a, j, j) * (BiPoly::x() - BiPoly::y())
        }
        Some(b) => {
            let j = coeffs.degree / 2;
            let b = b.eval(b02, b11);
            let quad = BiPoly::from_terms([
                (Monomial::new(2, 0), a.clone()),
                (Monomial::new(1, 1), b),
                (Monomial::new(0, 2), a),
            ]);
            quad.mul_monomial(Monomial::new(j - 1, j - 1))
        }
    }
}

/// `-(x + y)(1 + 2 b02 x - 2 b02 y)`.
pub fn case6_cofactor(b02: &Rational) -> BiPoly {
    let two = int(2) * b02;
    let second = BiPoly::from_terms([
        (Monomial::ONE, Rational::one()),
        (Monomial::new(1, 0), two.clone()),
        (Monomial::new(0, 1), -two),
    ]);
    -(BiPoly::parse("x + y").expect("literal") * second)
}

/// The invariant curve through degree `n` for case 6 of the family, checked
/// against the field and its expected cofactor.
pub fn build_case6_curve(b02: &Rational, b11: &Rational, n: u32) -> Result<InvariantCurveCertificate> {
    if n == 0 {
        return Err(Error::InvalidArgument("curve degree must be positive".into()));
    }
    let mut curve = BiPoly::zero();
    for c in case6_recurrence_coefficients(n) {
        curve += &case6_term(&c, b02, b11);
    }
    let f = AplicaParams::case6(b02, b11).field();
    let cert = check_invariant_curve(&f, &curve, n)?;
    let expected = case6_cofactor(b02).truncate(n.saturating_sub(1));
    if cert.cofactor != expected {
        return Err(Error::Internal(format!(
            "case-6 curve has cofactor {} instead of {expected}",
            cert.cofactor
        )));
    }
    Ok(cert)
}
