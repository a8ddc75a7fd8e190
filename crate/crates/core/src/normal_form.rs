//! Degree-by-degree orbital normal form `F_2 + sum eta_j D` of a field with
//! quadratic Lotka-Volterra leading part.

use std::collections::BTreeMap;

use num_traits::Zero;
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::field::{lie_bracket, HomoField, PlanarField};
use crate::homological::{corange_chain, CorangeBasis, CorangeChain};
use crate::linalg::{DirectSum, Matrix};
use crate::lv::{canonicalize_field, LvData};
use crate::poly::{monomial_basis, BiPoly, HomoPoly, Monomial};
use crate::rational::{format_rational, int, Rational};

/// Near-identity change `x = y + U(y)` paired with the time factor `1 + nu(y)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OrbitalGenerator {
    pub degree: u32,
    pub field_part: HomoField,
    pub scale_part: HomoPoly,
}

impl OrbitalGenerator {
    pub fn zero(degree: u32) -> Self {
        OrbitalGenerator {
            degree,
            field_part: HomoField::zero(degree - 1),
            scale_part: HomoPoly::zero(degree - 2),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.field_part.is_zero() && self.scale_part.is_zero()
    }

    pub fn to_change(&self) -> OrbitalChange {
        OrbitalChange {
            shift: self.field_part.body().clone(),
            rescale: self.scale_part.body().clone(),
        }
    }
}

/// `G(y) = (1 + a(y)) (I + DU(y))^-1 F(y + U(y))`, where `U` has order at
/// least 2 and `a(0) = 0`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OrbitalChange {
    pub shift: PlanarField,
    pub rescale: BiPoly,
}

/// `1 / (1 + t)` for `t(0) = 0`, truncated.
pub fn reciprocal_one_plus(t: &BiPoly, max_degree: u32) -> BiPoly {
    debug_assert!(t.constant_term().is_zero());
    let mut acc = BiPoly::one();
    let mut term = BiPoly::one();
    let neg = -t;
    loop {
        term = term.mul_truncated(&neg, max_degree);
        if term.is_zero() {
            return acc;
        }
        acc += &term;
    }
}

impl OrbitalChange {
    pub fn identity() -> Self {
        OrbitalChange {
            shift: PlanarField::zero(),
            rescale: BiPoly::zero(),
        }
    }

    pub fn is_identity(&self) -> bool {
        self.shift.is_zero() && self.rescale.is_zero()
    }

    fn map_x(&self) -> BiPoly {
        BiPoly::x() + self.shift.p().clone()
    }

    fn map_y(&self) -> BiPoly {
        BiPoly::y() + self.shift.q().clone()
    }

    /// `(I + DU)^-1 v` through `max_degree` by the Neumann series.
    fn inverse_jacobian_apply(&self, v: &PlanarField, max_degree: u32) -> PlanarField {
        let mut acc = v.truncate(max_degree);
        let mut term = acc.clone();
        loop {
            term = -&self.shift.jacobian_apply(&term, max_degree);
            if term.is_zero() {
                return acc;
            }
            acc = &acc + &term;
        }
    }

    /// The transformed field; exact through `max_degree` when `f` vanishes at 0.
    pub fn apply(&self, f: &PlanarField, max_degree: u32) -> PlanarField {
        if self.is_identity() {
            return f.truncate(max_degree);
        }
        let composed = f.compose(&self.map_x(), &self.map_y(), max_degree);
        let pulled = self.inverse_jacobian_apply(&composed, max_degree);
        if self.rescale.is_zero() {
            return pulled;
        }
        &pulled + &pulled.mul_scalar(&self.rescale, max_degree)
    }

    /// Scalar substitution `s(y + U(y))`.
    pub fn substitute(&self, s: &BiPoly, max_degree: u32) -> BiPoly {
        s.compose(&self.map_x(), &self.map_y(), max_degree)
    }

    /// The change undoing `self` through `max_degree`.
    pub fn inverse(&self, max_degree: u32) -> OrbitalChange {
        // Psi(x) = x + W(x) with W = -U(x + W(x)).
        let mut w = PlanarField::zero();
        for _ in 0..max_degree {
            let sx = BiPoly::x() + w.p().clone();
            let sy = BiPoly::y() + w.q().clone();
            let next = -&self.shift.compose(&sx, &sy, max_degree);
            if next == w {
                break;
            }
            w = next;
        }
        let psi = OrbitalChange {
            shift: w,
            rescale: BiPoly::zero(),
        };
        let a_psi = psi.substitute(&self.rescale, max_degree);
        let kappa = reciprocal_one_plus(&a_psi, max_degree) - BiPoly::one();
        OrbitalChange {
            shift: psi.shift,
            rescale: kappa,
        }
    }

    /// The change equivalent to applying `self` first and then `next`.
    pub fn then(&self, next: &OrbitalChange, max_degree: u32) -> OrbitalChange {
        let sx = next.map_x();
        let sy = next.map_y();
        let u1 = self.shift.compose(&sx, &sy, max_degree);
        let shift = &next.shift + &u1;
        let a1 = self.rescale.compose(&sx, &sy, max_degree);
        let rescale = &next.rescale + &a1 + next.rescale.mul_truncated(&a1, max_degree);
        OrbitalChange {
            shift: shift.truncate(max_degree),
            rescale: rescale.truncate(max_degree),
        }
    }
}

pub fn apply_generator(f: &PlanarField, g: &OrbitalGenerator, max_degree: u32) -> PlanarField {
    g.to_change().apply(f, max_degree)
}

fn stack(field: &PlanarField, basis: &[Monomial]) -> Vec<Rational> {
    basis
        .iter()
        .map(|m| field.p().coeff_of(*m))
        .chain(basis.iter().map(|m| field.q().coeff_of(*m)))
        .collect()
}

fn monomial(m: Monomial) -> BiPoly {
    BiPoly::term(int(1), m.x, m.y)
}

/// Solves `[F_2, U'] + nu' F_2 + sum c_i b_i D = R_d` over `U'` in `Q_{d-1}`,
/// `nu'` in `P_{d-2}` and `c`. The generator returned is `(-U', -nu')`, whose
/// application turns the degree-`d` component into `sum c_i b_i D`.
pub fn homological_step(
    lv: &LvData,
    residual_d: &HomoField,
    corange: &CorangeBasis,
) -> Result<(OrbitalGenerator, Vec<Rational>)> {
    let d = residual_d.degree();
    if d < 3 {
        return Err(Error::InvalidArgument(
            "homological step needs degree >= 3".into(),
        ));
    }
    if corange.degree != d - 1 {
        return Err(Error::InvalidArgument(format!(
            "corange of degree {} supplied for a degree-{d} step",
            corange.degree
        )));
    }
    let f2 = lv.canonical_field.body();
    let rows = monomial_basis(d);
    let u_basis = monomial_basis(d - 1);
    let nu_basis = monomial_basis(d - 2);
    let mut columns: Vec<Vec<Rational>> = Vec::new();
    for m in &u_basis {
        let u = PlanarField::new(monomial(*m), BiPoly::zero()).expect("order >= 2");
        columns.push(stack(&lie_bracket(f2, &u, d), &rows));
    }
    for m in &u_basis {
        let u = PlanarField::new(BiPoly::zero(), monomial(*m)).expect("order >= 2");
        columns.push(stack(&lie_bracket(f2, &u, d), &rows));
    }
    for m in &nu_basis {
        columns.push(stack(&f2.mul_scalar(&monomial(*m), d), &rows));
    }
    let complement: Vec<Vec<Rational>> = corange
        .basis
        .iter()
        .map(|b| stack(&PlanarField::radial().mul_scalar(b.body(), d), &rows))
        .collect();
    let range = Matrix::from_columns(2 * rows.len(), &columns);
    let sum = DirectSum::new(range, &complement).ok_or(Error::HomologicalSolveFailure { degree: d })?;
    let (z, c) = sum.decompose(&stack(residual_d.body(), &rows));
    let n = u_basis.len();
    let coeffs = |range: std::ops::Range<usize>, basis: &[Monomial]| {
        BiPoly::from_terms(basis.iter().copied().zip(z[range].iter().map(|v| -v)))
    };
    let up = coeffs(0..n, &u_basis);
    let uq = coeffs(n..2 * n, &u_basis);
    let nu = coeffs(2 * n..2 * n + nu_basis.len(), &nu_basis);
    let generator = OrbitalGenerator {
        degree: d,
        field_part: HomoField::from_parts(d - 1, up, uq)?,
        scale_part: HomoPoly::new(d - 2, nu)?,
    };
    Ok((generator, c))
}

#[derive(Debug, Clone)]
pub struct NormalFormReport {
    pub lv: LvData,
    pub max_degree: u32,
    /// `eta[j]` are the coordinates of `eta_j` on the corange basis of degree `j`.
    pub eta: BTreeMap<u32, Vec<Rational>>,
    pub coranges: Vec<CorangeBasis>,
    pub generators: Vec<OrbitalGenerator>,
    /// The normalized field, in the canonical coordinates, truncated.
    pub residual_field: PlanarField,
    /// All generators composed into one change, applied after the linear one.
    pub composite: OrbitalChange,
}

impl NormalFormReport {
    pub fn is_trivial(&self) -> bool {
        self.eta.values().all(|c| c.iter().all(|v| v.is_zero()))
    }

    /// The lowest `j` with `eta_j != 0` and its coordinates.
    pub fn first_obstruction(&self) -> Option<(u32, &[Rational])> {
        self.eta
            .iter()
            .find(|(_, c)| c.iter().any(|v| !v.is_zero()))
            .map(|(j, c)| (*j, c.as_slice()))
    }

    pub fn corange(&self, j: u32) -> Option<&CorangeBasis> {
        self.coranges.iter().find(|c| c.degree == j)
    }

    /// `eta_j` as a polynomial.
    pub fn eta_poly(&self, j: u32) -> BiPoly {
        let (Some(coords), Some(cor)) = (self.eta.get(&j), self.corange(j)) else {
            return BiPoly::zero();
        };
        let mut acc = BiPoly::zero();
        for (c, b) in coords.iter().zip(&cor.basis) {
            acc += &b.body().scale(c);
        }
        acc
    }

    pub fn to_json(&self) -> Value {
        let eta: serde_json::Map<String, Value> = self
            .eta
            .iter()
            .map(|(j, c)| (j.to_string(), json!(c.iter().map(format_rational).collect::<Vec<_>>())))
            .collect();
        let coranges: serde_json::Map<String, Value> = self
            .coranges
            .iter()
            .map(|c| {
                (
                    c.degree.to_string(),
                    json!(c.basis.iter().map(|b| b.body().to_string()).collect::<Vec<_>>()),
                )
            })
            .collect();
        let generators: Vec<Value> = self
            .generators
            .iter()
            .filter(|g| !g.is_zero())
            .map(|g| {
                json!({
                    "degree": g.degree,
                    "U": {"P": g.field_part.body().p().to_string(), "Q": g.field_part.body().q().to_string()},
                    "nu": g.scale_part.body().to_string(),
                })
            })
            .collect();
        let lc = &self.lv.linear_change;
        json!({
            "lv": {"p": self.lv.p, "q": self.lv.q, "r": self.lv.r, "M": self.lv.m()},
            "linear_change": {
                "scale_x": format_rational(&lc.scale_x),
                "scale_y": format_rational(&lc.scale_y),
                "time_scale": format_rational(&lc.time_scale),
            },
            "max_degree": self.max_degree,
            "eta": eta,
            "corange": coranges,
            "generators": generators,
            "residual_field": {"P": self.residual_field.p().to_string(), "Q": self.residual_field.q().to_string()},
        })
    }
}

/// Normalizes `f` through degree `max_degree`.
///
/// After the linear change to canonical shape, each degree `d = 3..=N` is
/// reduced by one homological step, which leaves `eta_{d-1} D` behind. The
/// composite of all steps is re-applied to the canonical input as a check.
pub fn normal_form(f: &PlanarField, max_degree: u32) -> Result<NormalFormReport> {
    let lv = canonicalize_field(f)?;
    if max_degree < 2 {
        return Err(Error::InvalidArgument("max degree must be at least 2".into()));
    }
    let chain = corange_chain(&lv, max_degree.max(3) - 1)?;
    normal_form_with_chain(f, &lv, &chain, max_degree)
}

pub fn normal_form_with_chain(
    f: &PlanarField,
    lv: &LvData,
    chain: &CorangeChain,
    max_degree: u32,
) -> Result<NormalFormReport> {
    let canonical = lv.linear_change.push_forward(&f.truncate(max_degree));
    let mut g = canonical.clone();
    let mut eta = BTreeMap::new();
    let mut generators = Vec::new();
    let mut composite = OrbitalChange::identity();
    for d in 3..=max_degree {
        let cor = chain.at(d - 1);
        let residual = g.component(d);
        let (gen, coords) = homological_step(lv, &residual, cor)?;
        if !gen.is_zero() {
            let change = gen.to_change();
            g = change.apply(&g, max_degree);
            composite = composite.then(&change, max_degree);
        }
        let expected = PlanarField::radial().mul_scalar(&chain.combine(d - 1, &coords), d);
        if g.component(d).body() != &expected {
            return Err(Error::Internal(format!(
                "degree {d} component is not in normal shape after reduction"
            )));
        }
        eta.insert(d - 1, coords);
        generators.push(gen);
    }
    if composite.apply(&canonical, max_degree) != g {
        return Err(Error::Internal(
            "composite change does not reproduce the normal form".into(),
        ));
    }
    let coranges = (2..max_degree).map(|j| chain.at(j).clone()).collect();
    Ok(NormalFormReport {
        lv: lv.clone(),
        max_degree,
        eta,
        coranges,
        generators,
        residual_field: g,
        composite,
    })
}
